# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
Run configurations: defaults, named presets and the validated SimConfig.
"""

import copy
import functools
import json
import logging
from dataclasses import dataclass

import numpy as np
import yaml

from sefdm_im.channel import get_channel
from sefdm_im.pattern import make_scheme
from sefdm_im.utils.common import get_run_configs_dir
from sefdm_im.utils.constants import Constants
from sefdm_im.utils.exceptions import ConfigurationError

_DEFAULT_CONFIG_PATH = get_run_configs_dir() / "default_configs.yaml"
_PRESETS_PATH = get_run_configs_dir() / "presets.yaml"

# Regular (3, 6) code
_LDPC_RATE = 0.5

# Older spelling of the uncoded mode
CODING_ALIASES = {"uncoded": "none"}


def recursive_merge_config_dicts(config, default_config):
    """
    Merge the configuration dictionary with the default configuration
    dictionary to fill in any missing configuration keys.
    """
    assert isinstance(config, dict)
    assert isinstance(default_config, dict)

    for k, v in default_config.items():
        if k not in config:
            config[k] = copy.deepcopy(v)
        else:
            if isinstance(v, dict) and isinstance(config[k], dict):
                recursive_merge_config_dicts(config[k], v)
    return config


def _get_config(config, args):
    assert isinstance(args, (tuple, list))
    for arg in args:
        try:
            config = config[arg]
        except (KeyError, TypeError):
            raise ConfigurationError(f"Missing configuration '{'.'.join(args)}'!")
    return config


@functools.lru_cache(maxsize=None)
def _read_yaml(path):
    with open(path, "r", encoding="utf8") as fp:
        return yaml.safe_load(fp)


def load_default_config():
    return copy.deepcopy(_read_yaml(str(_DEFAULT_CONFIG_PATH)))


def _presets_file():
    return _read_yaml(str(_PRESETS_PATH))


def list_presets():
    return list(_presets_file()["presets"])


def list_groups():
    return list(_presets_file()["groups"])


def group(name):
    groups = _presets_file()["groups"]
    if name not in groups:
        raise ConfigurationError(f"Unknown preset group {name}, expected one of {sorted(groups)}")
    return list(groups[name])


def load_config_file(path):
    """Reads a JSON or YAML file holding a (partial) configuration."""
    with open(path, "r", encoding="utf8") as fp:
        if str(path).endswith(".json"):
            return json.load(fp)
        return yaml.safe_load(fp)


def parse_grid(value):
    """
    "start:stop:step" (stop included), a comma separated string, a list or
    a single number to a tuple of floats.
    """
    if isinstance(value, (int, float)):
        return (float(value),)
    if isinstance(value, (list, tuple)):
        grid = tuple(float(v) for v in value)
    elif isinstance(value, str) and ":" in value:
        try:
            start, stop, step = (float(v) for v in value.split(":"))
        except ValueError:
            raise ConfigurationError(f"Grid {value!r} is not of the form start:stop:step")
        if step <= 0 or stop < start:
            raise ConfigurationError(f"Grid {value!r} needs step > 0 and stop >= start")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        grid = tuple(float(np.round(start + i * step, 10)) for i in range(count))
    elif isinstance(value, str):
        try:
            grid = tuple(float(v) for v in value.split(",") if v.strip())
        except ValueError:
            raise ConfigurationError(f"Grid {value!r} is not a list of numbers")
    else:
        raise ConfigurationError(f"Cannot read a grid from {value!r}")
    if not grid:
        raise ConfigurationError("Grid is empty")
    return grid


def _positive_int(config, args):
    value = _get_config(config, args)
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ConfigurationError(
            f"Configuration '{'.'.join(args)}' must be a positive integer, got {value}"
        )
    return int(value)


@dataclass(frozen=True, eq=False)
class SimConfig:
    """
    A validated run configuration. ``config`` holds the merged dictionary
    that is echoed into every output.
    """

    config: dict
    name: str
    scheme: object
    N: int
    coded: bool
    code_length: int
    code_seed: int
    max_iter: int
    max_log: bool
    channel: object
    ebn0_grid: tuple
    min_errors: int
    max_bits: int
    blocks_per_batch: int
    num_workers: int
    seed: int
    papr_symbols: int
    papr_oversampling: int
    papr_thresholds: tuple

    @property
    def K(self):
        return self.scheme.K

    @property
    def G(self):
        return self.N // self.scheme.K

    @property
    def coding_rate(self):
        return _LDPC_RATE if self.coded else 1.0

    @classmethod
    def from_dict(cls, config):
        config = recursive_merge_config_dicts(copy.deepcopy(config), load_default_config())

        scheme_config = _get_config(config, ["scheme"])
        active = scheme_config.get("active")
        if isinstance(active, list):
            active = tuple(active)
        scheme = make_scheme(
            str(_get_config(config, ["scheme", "family"])),
            K=_positive_int(config, ["scheme", "K"]),
            cardinalities=_get_config(config, ["scheme", "cardinalities"]),
            alpha=float(_get_config(config, ["scheme", "alpha"])),
            active=active,
            table=scheme_config.get("table"),
        )

        N = _positive_int(config, ["system", "N"])
        if N % scheme.K:
            raise ConfigurationError(f"N={N} is not a multiple of K={scheme.K}")

        coding_type = str(_get_config(config, ["coding", "type"])).lower()
        coding_type = CODING_ALIASES.get(coding_type, coding_type)
        if coding_type not in ("ldpc", "none"):
            raise ConfigurationError(f"Unknown coding type {coding_type}, expected ldpc or none")

        channel = get_channel(
            str(_get_config(config, ["channel", "type"])),
            cp_len=_get_config(config, ["channel", "cp_len"]),
        )

        return cls(
            config=config,
            name=str(config.get("name", "custom")),
            scheme=scheme,
            N=N,
            coded=coding_type == "ldpc",
            code_length=_positive_int(config, ["coding", "n"]),
            code_seed=int(_get_config(config, ["coding", "seed"])),
            max_iter=_positive_int(config, ["coding", "max_iter"]),
            max_log=bool(_get_config(config, ["coding", "max_log"])),
            channel=channel,
            ebn0_grid=parse_grid(_get_config(config, ["sweep", "ebn0_db"])),
            min_errors=_positive_int(config, ["sweep", "min_errors"]),
            max_bits=_positive_int(config, ["sweep", "max_bits"]),
            blocks_per_batch=_positive_int(config, ["sweep", "blocks_per_batch"]),
            num_workers=_positive_int(config, ["sweep", "num_workers"]),
            seed=int(_get_config(config, ["seed"])),
            papr_symbols=_positive_int(config, ["papr", "num_symbols"]),
            papr_oversampling=_positive_int(config, ["papr", "oversampling"]),
            papr_thresholds=parse_grid(_get_config(config, ["papr", "thresholds_db"])),
        )

    def to_dict(self):
        config = copy.deepcopy(self.config)
        config["rng"] = Constants.RNG_NAME
        return config

    def updated(self, overrides):
        """A new SimConfig with ``overrides`` merged over this configuration."""
        config = copy.deepcopy(overrides)
        recursive_merge_config_dicts(config, self.config)
        return SimConfig.from_dict(config)


def preset(name):
    """
    The named preset merged over the default configuration.
    """
    presets = _presets_file()["presets"]
    if name not in presets:
        raise ConfigurationError(f"Unknown preset {name}, expected one of {sorted(presets)}")
    config = copy.deepcopy(presets[name])
    config["name"] = name
    logging.info(f"loading preset {name}")
    return SimConfig.from_dict(config)
