# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
Counter-based random streams. Every (seed, point, batch) triple owns an
independent Philox stream, so results do not depend on which worker
simulates which batch.
"""

import numpy as np

# Stream key reserved for PAPR runs
_PAPR_KEY = 0xFFFF


def block_stream(seed, point_index, batch_index):
    sequence = np.random.SeedSequence([int(seed), int(point_index), int(batch_index)])
    return np.random.Generator(np.random.Philox(sequence))


def papr_stream(seed, chunk_index=0):
    sequence = np.random.SeedSequence([int(seed), _PAPR_KEY, int(chunk_index)])
    return np.random.Generator(np.random.Philox(sequence))
