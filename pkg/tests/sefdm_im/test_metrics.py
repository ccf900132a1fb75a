# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

import math
import unittest

import numpy as np

from sefdm_im.metrics import (
    BerTally,
    IciPower,
    ber_tally,
    ccdf,
    complexity,
    ebn0_at_ber,
    ici_power,
    papr,
    papr_db,
    spectral_efficiency,
)
from sefdm_im.pattern import make_scheme
from sefdm_im.simulation.sim_config import list_presets, preset
from sefdm_im.utils.exceptions import ConfigurationError, UndefinedInputError, UsageError


class TestMetrics(unittest.TestCase):
    """
    Unit tests for BER tallies, PAPR and the scheme figures of merit
    """

    def test_papr(self):
        N = 12
        self.assertAlmostEqual(papr(np.ones(N, dtype=complex)), 1.0)
        impulse = np.zeros(N, dtype=complex)
        impulse[5] = 3.0
        self.assertAlmostEqual(papr(impulse), float(N))
        self.assertAlmostEqual(papr_db(np.ones(N)), 0.0)
        batch = papr(np.stack([np.ones(N), impulse]))
        np.testing.assert_allclose(batch, [1.0, N])
        with self.assertRaises(UndefinedInputError):
            papr(np.zeros(N))

    def test_ccdf(self):
        curve = ccdf([1.0, 2.0, 3.0, 4.0], [0.0, 2.0, 2.5, 4.0])
        np.testing.assert_allclose(curve.probabilities, [1.0, 0.5, 0.5, 0.0])
        self.assertEqual(curve.num_samples, 4)
        samples = np.random.default_rng(0).exponential(2.0, 1000)
        curve = ccdf(samples, np.linspace(0, 12, 121))
        self.assertTrue(np.all(np.diff(curve.probabilities) <= 0))
        with self.assertRaises(UndefinedInputError):
            ccdf([], [0.0])

    def test_spectral_efficiency_of_presets(self):
        for name in list_presets():
            scheme = preset(name).scheme
            coded = float(name.split("/")[0][len("se"):])
            self.assertAlmostEqual(spectral_efficiency(scheme, 0.5), coded, delta=0.015, msg=name)
            self.assertAlmostEqual(
                spectral_efficiency(scheme, 1.0), 2 * spectral_efficiency(scheme, 0.5)
            )
        with self.assertRaises(ConfigurationError):
            spectral_efficiency(preset("se1/m1").scheme, 0.0)

    def test_complexity(self):
        self.assertEqual(complexity(preset("se0.75/tra").scheme), 4)
        self.assertEqual(complexity(preset("se1.1/m2").scheme), 11)
        self.assertEqual(complexity(make_scheme("Tra", 4, {"M_A": 2}, 1.0)), 3)

    def test_ber_tally(self):
        tally = ber_tally([0, 1, 1, 0], [1, 1, 1, 1, 0, 0], [0, 1, 0, 0], [1, 0, 1, 1, 0, 1])
        self.assertEqual(tally, BerTally(index_errors=1, index_bits=4, data_errors=2, data_bits=6))
        self.assertAlmostEqual(tally.index_ber, 0.25)
        self.assertAlmostEqual(tally.data_ber, 1 / 3)
        self.assertAlmostEqual(tally.avg_ber, 0.3)
        total = tally + tally
        self.assertEqual(total.bits_counted, 20)
        self.assertEqual(total.errors, 6)
        self.assertEqual(BerTally().avg_ber, 0.0)
        with self.assertRaises(UsageError):
            ber_tally([0, 1], [0], [], [])

    def test_half_width(self):
        tally = BerTally(index_errors=4, index_bits=500, data_errors=6, data_bits=500)
        self.assertAlmostEqual(tally.half_width(), 1.96 * math.sqrt(0.01 * 0.99 / 1000))
        self.assertEqual(BerTally().half_width(), 0.0)

    def test_ebn0_at_ber(self):
        grid = [0.0, 1.0, 2.0, 3.0]
        self.assertAlmostEqual(ebn0_at_ber(grid, [1e-2, 1e-3, 1e-5, 1e-6], 1e-4), 1.5)
        self.assertEqual(ebn0_at_ber(grid, [1e-5, 1e-6, 1e-7, 1e-8], 1e-4), 0.0)
        self.assertIsNone(ebn0_at_ber(grid, [0.3, 0.2, 0.1, 0.05], 1e-4))
        with self.assertRaises(UsageError):
            ebn0_at_ber(grid, [0.1], 1e-4)

    def test_ici_power(self):
        orthogonal = ici_power(preset("se0.75/ofdm-im").scheme, 12, 1.0)
        self.assertAlmostEqual(orthogonal.intra, 0.0, places=12)
        self.assertAlmostEqual(orthogonal.inter, 0.0, places=12)
        single = ici_power(preset("se0.75/tra").scheme, 12, 0.67)
        self.assertAlmostEqual(single.intra, 0.0, places=12)
        self.assertGreater(single.inter, 0.0)
        compressed = ici_power(preset("se1.1/tra").scheme, 12, 0.9)
        self.assertGreater(compressed.intra, 0.0)
        self.assertGreater(compressed.inter, 0.0)
        self.assertLess(IciPower.to_db(compressed.intra), 0.0)
        with self.assertRaises(ConfigurationError):
            ici_power(preset("se0.75/tra").scheme, 10, 0.67)
