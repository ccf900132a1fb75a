# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
Deterministic CSV output. Every file starts with a single comment line
echoing the run configuration as JSON.
"""

import csv
import json
import sys

import numpy as np

from sefdm_im.utils.constants import Constants


def format_value(value):
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.10g}"
    return str(value)


def config_header(config):
    return Constants.CONFIG_PREFIX + json.dumps(
        config, sort_keys=True, separators=(",", ":"), default=str
    )


def write_csv(columns, rows, config, out=None):
    """
    Writes the header comment, the column row and the data rows.

    :param out: path, open text stream or None for stdout
    """
    if out is None:
        _write(sys.stdout, columns, rows, config)
    elif hasattr(out, "write"):
        _write(out, columns, rows, config)
    else:
        with open(out, "w", newline="") as fp:
            _write(fp, columns, rows, config)


def _write(stream, columns, rows, config):
    stream.write(config_header(config) + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])


def read_csv(path):
    """Returns (config, columns, rows) of a file written by write_csv."""
    with open(path) as fp:
        first = fp.readline()
        config = json.loads(first[len(Constants.CONFIG_PREFIX) :])
        reader = csv.reader(fp)
        columns = next(reader)
        rows = [row for row in reader]
    return config, columns, rows
