# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
Command line entry point: BER sweeps, PAPR curves, scheme tables,
summary tables and matrix/channel responses, all emitted as CSV.
"""

import argparse
import logging
import os
import sys

import numpy as np

from sefdm_im.channel import frequency_response, get_channel
from sefdm_im.constellation import SUPPORTED_CARDINALITIES, labeling_table
from sefdm_im.metrics import (
    IciPower,
    complexity,
    complexity_ratio,
    ici_power,
    spectral_efficiency,
)
from sefdm_im.pattern import make_scheme, pattern_table_rows
from sefdm_im.sefdm_core import correlation_matrix
from sefdm_im.simulation.sim_config import (
    SimConfig,
    group,
    list_presets,
    load_config_file,
    preset,
)
from sefdm_im.simulation.simulator import Simulator
from sefdm_im.simulation.utils.writers import write_csv
from sefdm_im.utils.constants import Constants
from sefdm_im.utils.exceptions import ConfigurationError, SefdmImError

# Example usages (from the root folder):
# >> python -m sefdm_im.simulation.simulation_script ber --preset se1.1/im2 --out ber.csv
# >> python -m sefdm_im.simulation.simulation_script papr --preset se0.75/tra --symbols 100000
# >> python -m sefdm_im.simulation.simulation_script patterns --scheme im2 --se 1.1
# >> python -m sefdm_im.simulation.simulation_script tables --se --complexity

_FAMILY_ALIASES = {
    "tra": "Tra",
    "m1": "M1",
    "m2": "M2",
    "ofdm-im": "OFDM-IM",
    "im1": "IM-1",
    "im2": "IM-2",
    "im3": "IM-3",
}


def _family(name):
    key = name.lower()
    return _FAMILY_ALIASES.get(key, name)


def _overrides(args):
    overrides = {}
    if getattr(args, "ebn0", None):
        overrides.setdefault("sweep", {})["ebn0_db"] = args.ebn0
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "workers", None):
        overrides.setdefault("sweep", {})["num_workers"] = args.workers
    if getattr(args, "min_errors", None):
        overrides.setdefault("sweep", {})["min_errors"] = args.min_errors
    if getattr(args, "max_bits", None):
        overrides.setdefault("sweep", {})["max_bits"] = args.max_bits
    if getattr(args, "uncoded", False):
        overrides.setdefault("coding", {})["type"] = "none"
    if getattr(args, "max_log", False):
        overrides.setdefault("coding", {})["max_log"] = True
    if getattr(args, "basedir", None):
        overrides.setdefault("saving", {})["basedir"] = args.basedir
    return overrides


def _configs(args):
    """(output stem, SimConfig) pairs selected by --preset, --group or --config."""
    if args.config:
        configs = [("config", SimConfig.from_dict(load_config_file(args.config)))]
    elif args.group:
        configs = [(name, preset(name)) for name in group(args.group)]
    elif args.preset:
        configs = [(args.preset, preset(args.preset))]
    else:
        raise ConfigurationError("One of --preset, --group or --config is required")
    overrides = _overrides(args)
    if overrides:
        configs = [(stem, config.updated(overrides)) for stem, config in configs]
    return configs


def _output(args, stem, suffix, multiple):
    if not args.out:
        return None
    if multiple:
        os.makedirs(args.out, exist_ok=True)
        return os.path.join(args.out, f"{stem.replace('/', '_')}_{suffix}.csv")
    return args.out


def run_ber(args):
    configs = _configs(args)
    for stem, config in configs:
        out = _output(args, stem, "ber", len(configs) > 1)
        simulator = Simulator(config, results_dir=args.results_dir, verbose=out is not None)
        simulator.run_ber(out=out)


def run_papr(args):
    configs = _configs(args)
    for stem, config in configs:
        out = _output(args, stem, "papr", len(configs) > 1)
        simulator = Simulator(config, results_dir=args.results_dir, verbose=out is not None)
        simulator.run_papr(out=out, n_symbols=args.symbols, oversampling=args.oversampling)


def run_patterns(args):
    if args.alphabets:
        rows = [
            (M, label, re, im)
            for M in SUPPORTED_CARDINALITIES
            for label, re, im in labeling_table(M)
        ]
        write_csv(("M", "label", "re", "im"), rows, {"alphabets": list(SUPPORTED_CARDINALITIES)}, args.out)
        return

    if args.scheme is None:
        raise ConfigurationError("patterns needs --scheme or --alphabets")
    if args.se is not None:
        config = preset(f"se{args.se}/{args.scheme.lower()}")
        scheme, header = config.scheme, config.to_dict()
    else:
        family = _family(args.scheme)
        cardinalities = {"M_A": 4, "M_B": 2, "M_C": 2} if family == "IM-3" else {"M_A": 4}
        scheme = make_scheme(family, 4, cardinalities, 1.0)
        header = {"scheme": {"family": family, "cardinalities": cardinalities}}

    rows = pattern_table_rows(scheme)
    # Aligned text always goes to stdout, followed by the CSV unless --out is given
    print(f"{scheme.label}  alpha={scheme.alpha}  L1={scheme.L1}  L2={scheme.L2}")
    print(f"{'index bits':>10}  {'activation':>10}  {'slots':<24}  scale")
    for index_bits, flags, slots, scale in rows:
        print(f"{index_bits:>10}  {flags:>10}  {slots:<24}  {scale:.4f}")
    if args.out is None:
        print()
    write_csv(("index_bits", "activation", "slots", "scale"), rows, header, args.out)


def run_tables(args):
    show_all = not (args.se or args.complexity or args.ici)
    columns = [Constants.SCHEME, "preset", "alpha", "L"]
    if args.se or show_all:
        columns += [f"{Constants.SE}_uncoded", f"{Constants.SE}_coded"]
    if args.complexity or show_all:
        columns += [Constants.THETA_RAW, Constants.THETA]
    if args.ici or show_all:
        columns += [Constants.ICI_INTRA_DB, Constants.ICI_INTER_DB]

    rows = []
    for name in list_presets():
        config = preset(name)
        scheme = config.scheme
        row = [scheme.label, name, scheme.alpha, scheme.L]
        if args.se or show_all:
            row += [spectral_efficiency(scheme, 1.0), spectral_efficiency(scheme, args.rate)]
        if args.complexity or show_all:
            row += [complexity_ratio(scheme), complexity(scheme)]
        if args.ici or show_all:
            power = ici_power(scheme, config.N, scheme.alpha)
            row += [IciPower.to_db(power.intra), IciPower.to_db(power.inter)]
        rows.append(row)
    write_csv(columns, rows, {"coding_rate": args.rate, "presets": list_presets()}, args.out)


def run_response(args):
    if args.matrix:
        if args.matrix.upper() != "C":
            raise ConfigurationError(f"Unknown matrix {args.matrix}, only C is supported")
        C = correlation_matrix(args.n, args.alpha).C
        rows = [
            (r, c, C[r, c].real, C[r, c].imag)
            for r in range(args.n)
            for c in range(args.n)
        ]
        write_csv(("row", "col", "re", "im"), rows, {"matrix": "C", "N": args.n, "alpha": args.alpha}, args.out)
        return
    if args.channel:
        channel = get_channel(args.channel)
        if channel is None:
            raise ConfigurationError(f"Channel {args.channel} has a flat response")
        response = frequency_response(channel, args.points)
        freqs = np.arange(args.points) / args.points
        rows = zip(
            freqs,
            20.0 * np.log10(np.maximum(np.abs(response), 1e-15)),
            np.angle(response),
        )
        header = {
            "channel": args.channel,
            "points": args.points,
            "taps": [[d, [complex(g).real, complex(g).imag]] for d, g in channel.taps],
        }
        write_csv(("freq", "magnitude_db", "phase"), rows, header, args.out)
        return
    raise ConfigurationError("response needs --matrix or --channel")


def _add_run_arguments(parser):
    parser.add_argument("--preset", "-p", type=str, help="preset name, e.g. se1.1/im2")
    parser.add_argument("--group", "-g", type=str, help="run every preset of a group")
    parser.add_argument("--config", "-c", type=str, help="JSON or YAML configuration file")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--out", "-o", type=str, help="CSV file (directory with --group)")
    parser.add_argument("--basedir", type=str, help="base folder to save results into")
    parser.add_argument(
        "--results_dir", type=str, help="name of the directory to save results into."
    )


def build_parser():
    parser = argparse.ArgumentParser(prog="sefdm-im")
    parser.add_argument(
        "--log-level",
        type=str,
        default="WARNING",
        help="logging level (DEBUG, INFO, WARNING, ERROR)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    ber = subparsers.add_parser("ber", help="BER versus Eb/N0 sweep")
    _add_run_arguments(ber)
    ber.add_argument("--ebn0", type=str, help="Eb/N0 grid in dB, start:stop:step")
    ber.add_argument("--workers", "-w", type=int, help="worker processes")
    ber.add_argument("--min-errors", type=int, help="bit errors per point")
    ber.add_argument("--max-bits", type=int, help="information bits per point")
    ber.add_argument("--uncoded", action="store_true", help="hard detection without LDPC")
    ber.add_argument("--max-log", action="store_true", help="max-log LLR approximation")
    ber.set_defaults(func=run_ber)

    papr = subparsers.add_parser("papr", help="PAPR CCDF")
    _add_run_arguments(papr)
    papr.add_argument("--symbols", "-n", type=int, help="number of blocks")
    papr.add_argument("--oversampling", type=int, help="time-domain oversampling factor")
    papr.set_defaults(func=run_papr)

    patterns = subparsers.add_parser("patterns", help="scheme lookup tables and alphabets")
    patterns.add_argument("--scheme", "-s", type=str, help="tra, m1, m2, ofdm-im, im1, im2, im3")
    patterns.add_argument("--se", type=str, help="coded spectral efficiency of the preset, e.g. 1.1")
    patterns.add_argument("--alphabets", action="store_true", help="alphabet labeling as CSV")
    patterns.add_argument("--out", "-o", type=str, help="CSV file")
    patterns.set_defaults(func=run_patterns)

    tables = subparsers.add_parser("tables", help="spectral efficiency, complexity and ICI of every preset")
    tables.add_argument("--se", action="store_true", help="spectral efficiency columns")
    tables.add_argument("--complexity", action="store_true", help="detector complexity columns")
    tables.add_argument("--ici", action="store_true", help="intra- and inter-subblock ICI columns")
    tables.add_argument("--rate", type=float, default=0.5, help="coding rate of the coded SE column")
    tables.add_argument("--out", "-o", type=str, help="CSV file")
    tables.set_defaults(func=run_tables)

    response = subparsers.add_parser("response", help="correlation matrix or channel response")
    response.add_argument("--matrix", type=str, help="C")
    response.add_argument("--n", type=int, default=12, help="subcarriers")
    response.add_argument("--alpha", type=float, default=0.8, help="bandwidth compression factor")
    response.add_argument("--channel", type=str, help="paper3tap")
    response.add_argument("--points", type=int, default=512, help="frequency points")
    response.add_argument("--out", "-o", type=str, help="CSV file")
    response.set_defaults(func=run_response)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level.upper(), logging.WARNING))
    try:
        args.func(args)
    except SefdmImError as err:
        logging.error(err)
        print(f"error: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
