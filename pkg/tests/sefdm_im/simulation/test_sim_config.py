# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

import json
import os
import tempfile
import unittest

from sefdm_im.channel import STATIC_3TAP
from sefdm_im.simulation.sim_config import (
    SimConfig,
    group,
    list_groups,
    list_presets,
    load_config_file,
    load_default_config,
    parse_grid,
    preset,
)
from sefdm_im.utils.exceptions import ConfigurationError


class TestSimConfig(unittest.TestCase):
    """
    Unit tests for the defaults, presets and configuration validation
    """

    def test_preset(self):
        config = preset("se1.1/im2")
        self.assertEqual(config.name, "se1.1/im2")
        self.assertEqual(config.scheme.name, "IM-2")
        self.assertEqual(config.scheme.cardinality("M_A"), 16)
        self.assertAlmostEqual(config.scheme.alpha, 0.675)
        self.assertEqual((config.N, config.K, config.G), (12, 4, 3))
        self.assertTrue(config.coded)
        self.assertEqual(config.coding_rate, 0.5)
        self.assertEqual(config.code_length, 648)
        self.assertEqual(len(config.ebn0_grid), 21)
        self.assertEqual(config.ebn0_grid[-1], 10.0)
        self.assertIsNone(config.channel)
        self.assertEqual(config.to_dict()["rng"], "numpy.random.Philox")

        m1 = preset("se1/m1")
        self.assertEqual(m1.scheme.cardinality("M_A"), 8)
        self.assertEqual(m1.scheme.L, 5)

        faded = preset("se1.1/im2-fs")
        self.assertEqual(faded.channel.cp_len, 3)

    def test_presets_and_groups_load(self):
        for name in list_presets():
            preset(name)
        self.assertIn("multipath", list_groups())
        for name in list_groups():
            for member in group(name):
                self.assertIn(member, list_presets())

    def test_single_parameter_groups(self):
        low, high = (preset(name).scheme for name in group("active-count"))
        self.assertEqual((low.name, high.name), ("OFDM-IM", "OFDM-IM"))
        self.assertEqual((low.ka_eff, high.ka_eff), (2, 3))
        self.assertEqual(low.m_eff, high.m_eff)

        compressed, orthogonal = (preset(name).scheme for name in group("compression"))
        self.assertEqual((compressed.alpha, orthogonal.alpha), (0.9, 1.0))
        self.assertEqual(compressed.ka_eff, orthogonal.ka_eff)
        self.assertEqual(compressed.m_eff, orthogonal.m_eff)

        qpsk, qam16 = (preset(name).scheme for name in group("modulation"))
        self.assertEqual((qpsk.m_eff, qam16.m_eff), (4, 16))
        self.assertEqual((qpsk.ka_eff, qam16.ka_eff), (1, 1))

    def test_unknown_names(self):
        with self.assertRaises(ConfigurationError):
            preset("se9/tra")
        with self.assertRaises(ConfigurationError):
            group("se9")

    def test_defaults(self):
        config = SimConfig.from_dict({})
        self.assertEqual(config.scheme.name, "Tra")
        self.assertEqual(config.seed, load_default_config()["seed"])
        self.assertEqual(config.min_errors, 200)
        self.assertEqual(len(config.papr_thresholds), 121)

    def test_invalid_configs(self):
        with self.assertRaises(ConfigurationError):
            preset("se1.1/im2").updated({"system": {"N": 10}})
        with self.assertRaises(ConfigurationError):
            SimConfig.from_dict({"coding": {"type": "turbo"}})
        with self.assertRaises(ConfigurationError):
            SimConfig.from_dict({"sweep": {"min_errors": 0}})
        with self.assertRaises(ConfigurationError):
            SimConfig.from_dict({"channel": {"type": "paper3tap", "cp_len": 1}})
        with self.assertRaises(ConfigurationError):
            SimConfig.from_dict({"scheme": {"family": "OFDM-IM", "alpha": 0.8}})

    def test_updated(self):
        base = preset("se1.1/im2")
        config = base.updated({"coding": {"type": "none"}, "seed": 7})
        self.assertFalse(config.coded)
        self.assertEqual(config.coding_rate, 1.0)
        self.assertEqual(config.seed, 7)
        self.assertEqual(config.name, "se1.1/im2")
        self.assertTrue(base.coded)

    def test_parse_grid(self):
        self.assertEqual(parse_grid("0:1:0.5"), (0.0, 0.5, 1.0))
        self.assertEqual(parse_grid("0:10:0.5")[-1], 10.0)
        self.assertEqual(parse_grid("1, 2,3"), (1.0, 2.0, 3.0))
        self.assertEqual(parse_grid([3, 4]), (3.0, 4.0))
        self.assertEqual(parse_grid(5), (5.0,))
        for bad in ("1:0:1", "0:1:0", "a:b:c", "", "x,y", None):
            with self.assertRaises(ConfigurationError):
                parse_grid(bad)

    def test_config_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.json")
            with open(path, "w") as fp:
                json.dump({"scheme": {"family": "IM-1", "active": [1, 2], "alpha": 0.8}}, fp)
            config = SimConfig.from_dict(load_config_file(path))
        self.assertEqual(config.scheme.name, "IM-1")
        self.assertEqual(config.scheme.active, (1, 2))

    def test_channel_names(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.yaml")
            with open(path, "w") as fp:
                fp.write('channel: {type: "paper3tap", cp_len: 3}\n')
            config = SimConfig.from_dict(load_config_file(path))
        self.assertEqual(config.channel.taps, STATIC_3TAP.taps)
        self.assertEqual(config.channel.cp_len, 3)
        legacy = SimConfig.from_dict({"channel": {"type": "static3tap", "cp_len": 3}})
        self.assertEqual(legacy.channel.taps, STATIC_3TAP.taps)
        self.assertIsNone(SimConfig.from_dict({"channel": {"type": "awgn"}}).channel)

    def test_coding_names(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.json")
            with open(path, "w") as fp:
                json.dump({"coding": {"type": "none"}}, fp)
            config = SimConfig.from_dict(load_config_file(path))
        self.assertFalse(config.coded)
        self.assertEqual(config.coding_rate, 1.0)
        self.assertFalse(SimConfig.from_dict({"coding": {"type": "uncoded"}}).coded)
        self.assertTrue(SimConfig.from_dict({"coding": {"type": "LDPC"}}).coded)
