# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
The Monte Carlo chain, the Eb/N0 sweep, the PAPR run and the Simulator,
PerfStats classes
"""

import json
import logging
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from sefdm_im.channel import awgn, effective_correlation, ebn0_to_n0, multipath_apply
from sefdm_im.detector import detect_block, hard_detect_block
from sefdm_im.ldpc import build_code, decode
from sefdm_im.metrics import BerTally, ber_tally, ccdf, ebn0_at_ber, papr_db
from sefdm_im.pattern import candidate_table
from sefdm_im.sefdm_core import (
    carrier_matrix,
    correlation_matrix,
    demodulate,
    modulate,
    oversampled_carrier_matrix,
)
from sefdm_im.simulation.utils.process_wrapper import run_in_workers
from sefdm_im.simulation.utils.streams import block_stream, papr_stream
from sefdm_im.simulation.utils.writers import write_csv
from sefdm_im.utils.constants import Constants

_PAPR_CHUNK = 10000
# Reference BER for the reported Eb/N0
_TARGET_BER = 1e-4


def verbose_print(message, worker_id=None):
    if worker_id is None:
        worker_id = 0
    print(f"[Worker {worker_id}]: {message} ")


@dataclass(frozen=True, eq=False)
class ChainContext:
    """Matrices and code shared by every batch of a configuration."""

    cm: object
    C_detect: np.ndarray
    code: object


@dataclass(frozen=True, eq=False)
class ChainOutcome:
    """Tally, per-block PAPR and the aligned information bit streams of a batch."""

    tally: BerTally
    papr_db: np.ndarray
    tx_index: np.ndarray
    tx_data: np.ndarray
    rx_index: np.ndarray
    rx_data: np.ndarray


@dataclass(frozen=True)
class PointResult:
    ebn0_db: float
    tally: BerTally
    batches: int
    max_bits_hit: bool
    # Per-block PAPR of every transmitted block at this point
    papr_db: np.ndarray = field(default=None, compare=False, repr=False)

    @property
    def half_width(self):
        return self.tally.half_width()


@dataclass(eq=False)
class TrialResult:
    config: dict
    points: list
    wall_clock: float = 0.0
    perf_stats: dict = field(default_factory=dict)

    @property
    def papr_samples(self):
        """Per-block PAPR in dB over every point of the sweep."""
        samples = [p.papr_db for p in self.points if p.papr_db is not None]
        if not samples:
            return np.zeros(0)
        return np.concatenate(samples)

    def rows(self):
        return [
            (
                p.ebn0_db,
                p.tally.index_ber,
                p.tally.data_ber,
                p.tally.avg_ber,
                p.tally.bits_counted,
                p.half_width,
                p.max_bits_hit,
            )
            for p in self.points
        ]

    columns = (
        Constants.EBN0_DB,
        Constants.INDEX_BER,
        Constants.DATA_BER,
        Constants.AVG_BER,
        Constants.BITS_COUNTED,
        Constants.CI_HALF_WIDTH,
        Constants.MAX_BITS_HIT,
    )


def build_context(config):
    cm = carrier_matrix(config.N, config.scheme.alpha)
    if config.channel is None:
        C_detect = correlation_matrix(config.N, config.scheme.alpha).C
    else:
        C_detect = effective_correlation(cm, config.channel)
    code = build_code(config.code_length, config.code_seed) if config.coded else None
    return ChainContext(cm=cm, C_detect=C_detect, code=code)


def _codeword_span(code, bits_per_block):
    """Blocks needed to carry one codeword of a stream."""
    return math.ceil(code.n / bits_per_block)


def blocks_per_batch(config):
    """
    Coded batches hold a whole number of codewords of both the index and
    the data stream.
    """
    if not config.coded:
        return config.blocks_per_batch
    n = config.code_length
    G, scheme = config.G, config.scheme
    index_span = math.ceil(n / (G * scheme.L1))
    data_span = math.ceil(n / (G * scheme.L2))
    return math.lcm(index_span, data_span)


def _bits_to_values(bits):
    weights = 1 << np.arange(bits.shape[-1] - 1, -1, -1)
    return (bits.astype(np.int64) * weights).sum(axis=-1)


def _encode_stream(code, rng, num_blocks, G, L):
    """
    Draws information bits, encodes them and lays the codewords out over
    (num_blocks, G, L). Positions past the end of a codeword carry filler.
    """
    width = G * L
    span = _codeword_span(code, width)
    num_codewords = num_blocks // span
    info = rng.integers(0, 2, (num_codewords, code.k), dtype=np.uint8)
    parity = (info.astype(np.int64) @ code.parity_map.T.astype(np.int64)) % 2
    codewords = np.concatenate([info, parity.astype(np.uint8)], axis=1)
    filler = rng.integers(0, 2, (num_codewords, span * width - code.n), dtype=np.uint8)
    grid = np.concatenate([codewords, filler], axis=1).reshape(num_blocks, G, L)
    return info, grid


def _decode_stream(code, llrs, max_iter):
    width = llrs.shape[1] * llrs.shape[2]
    span_bits = _codeword_span(code, width) * width
    frames = llrs.reshape(-1, span_bits)[:, : code.n]
    return np.stack([decode(code, frame, max_iter).info_bits for frame in frames])


def run_chain_once(config, block_batch, rng, ebn0_db, context=None):
    """
    One batch of blocks through bits -> mapping -> modulation -> channel ->
    demodulation -> detection (-> decoding) and the resulting tally.
    """
    ctx = context if context is not None else build_context(config)
    scheme, G, N = config.scheme, config.G, config.N
    table = candidate_table(scheme)
    N0 = ebn0_to_n0(ebn0_db, scheme, config.coding_rate, G, N)

    if config.coded:
        info_index, index_grid = _encode_stream(ctx.code, rng, block_batch, G, scheme.L1)
        info_data, data_grid = _encode_stream(ctx.code, rng, block_batch, G, scheme.L2)
    else:
        index_grid = rng.integers(0, 2, (block_batch, G, scheme.L1), dtype=np.uint8)
        data_grid = rng.integers(0, 2, (block_batch, G, scheme.L2), dtype=np.uint8)
        info_index, info_data = index_grid, data_grid

    candidates = _bits_to_values(index_grid) * 2**scheme.L2 + _bits_to_values(data_grid)
    S = table.tx[candidates].reshape(block_batch, N)
    X = modulate(S, ctx.cm)
    block_papr = papr_db(X)
    Y = X if config.channel is None else multipath_apply(X, config.channel)
    Y = awgn(Y, N0, rng)
    R = demodulate(Y, ctx.cm)

    if config.coded:
        frame = detect_block(R, scheme, ctx.C_detect, N0, max_log=config.max_log)
        rx_index = _decode_stream(ctx.code, frame.index_llrs, config.max_iter)
        rx_data = _decode_stream(ctx.code, frame.data_llrs, config.max_iter)
    else:
        decision = hard_detect_block(R, scheme, ctx.C_detect)
        rx_index, rx_data = decision.index_bits, decision.data_bits

    return ChainOutcome(
        tally=ber_tally(info_index, info_data, rx_index, rx_data),
        papr_db=np.atleast_1d(block_papr),
        tx_index=info_index,
        tx_data=info_data,
        rx_index=rx_index,
        rx_data=rx_data,
    )


def run_point(config, point_index, context=None):
    """
    Batches of one Eb/N0 point until the error target or the bit budget is
    reached. Batch b draws from stream (seed, point_index, b).
    """
    ctx = context if context is not None else build_context(config)
    ebn0_db = config.ebn0_grid[point_index]
    batch_size = blocks_per_batch(config)
    tally = BerTally()
    papr = []
    batch = 0
    while tally.errors < config.min_errors and tally.bits_counted < config.max_bits:
        rng = block_stream(config.seed, point_index, batch)
        outcome = run_chain_once(config, batch_size, rng, ebn0_db, ctx)
        tally = tally + outcome.tally
        papr.append(outcome.papr_db)
        batch += 1
    return PointResult(
        ebn0_db=ebn0_db,
        tally=tally,
        batches=batch,
        max_bits_hit=tally.errors < config.min_errors,
        papr_db=np.concatenate(papr),
    )


def _sweep_worker(config, point_indices):
    ctx = build_context(config)
    results = []
    for point_index in point_indices:
        result = run_point(config, point_index, ctx)
        logging.info(
            f"Eb/N0 {result.ebn0_db:5.2f} dB: avg BER {result.tally.avg_ber:.3e} "
            f"({result.tally.errors} errors / {result.tally.bits_counted} bits)"
        )
        results.append((point_index, result))
    return results


def run_ber_sweep(config, num_workers=None):
    """
    Every Eb/N0 point of the grid. Points are dealt round-robin to the
    workers; the result does not depend on the number of workers.
    """
    num_workers = num_workers or config.num_workers
    num_points = len(config.ebn0_grid)
    num_workers = max(1, min(num_workers, num_points))
    start = time.time()
    if num_workers == 1:
        merged = _sweep_worker(config, list(range(num_points)))
    else:
        assignments = [list(range(w, num_points, num_workers)) for w in range(num_workers)]
        outputs = run_in_workers(
            _sweep_worker,
            [{"config": config, "point_indices": points} for points in assignments],
        )
        merged = [item for output in outputs for item in output]
    merged.sort(key=lambda item: item[0])
    return TrialResult(
        config=config.to_dict(),
        points=[result for _, result in merged],
        wall_clock=time.time() - start,
    )


def papr_samples(config, n_symbols=None, oversampling=None):
    """
    Per-block PAPR in dB of uniformly drawn blocks, drawn in chunks of
    fixed size from the PAPR streams.
    """
    n_symbols = n_symbols or config.papr_symbols
    factor = oversampling or config.papr_oversampling
    scheme, G, N = config.scheme, config.G, config.N
    phi = oversampled_carrier_matrix(N, scheme.alpha, factor)
    tx = candidate_table(scheme).tx
    samples = []
    for chunk_index, first in enumerate(range(0, n_symbols, _PAPR_CHUNK)):
        size = min(_PAPR_CHUNK, n_symbols - first)
        rng = papr_stream(config.seed, chunk_index)
        candidates = rng.integers(0, tx.shape[0], (size, G))
        S = tx[candidates].reshape(size, N)
        samples.append(np.atleast_1d(papr_db(S @ phi.T)))
    return np.concatenate(samples)


def run_papr(config, n_symbols=None, oversampling=None):
    """
    CCDF of the per-block PAPR over uniformly drawn blocks.
    """
    samples = papr_samples(config, n_symbols=n_symbols, oversampling=oversampling)
    return ccdf(samples, config.papr_thresholds)


class PerfStats:
    """
    Performance stats of a sweep.
    """

    def __init__(self):
        self.points = 0
        self.batches = 0
        self.bits = 0
        self.total_time = 0.0

    def update(self, trial):
        self.points += len(trial.points)
        self.batches += sum(p.batches for p in trial.points)
        self.bits += sum(p.tally.bits_counted for p in trial.points)
        self.total_time += trial.wall_clock

    def get_perf_stats(self):
        return {
            "Eb/N0 points": self.points,
            "Batches": self.batches,
            "Information bits (M)": self.bits / 1e6,
            "Total time (s)": self.total_time,
            "Information bits per sec (k)": self.bits / max(self.total_time, 1e-9) / 1e3,
        }

    @staticmethod
    def pretty_print(stats):
        print("=" * 40)
        print("Speed performance stats")
        print("=" * 40)
        for k, v in stats.items():
            print(f"{k:40}: {v:10.2f}")


class Simulator:
    """
    The simulator object. Runs BER sweeps and PAPR measurements for one
    configuration and writes their CSV outputs.
    """

    def __init__(self, config, results_dir=None, verbose=True):
        """
        Args:
            config: a validated SimConfig.
            results_dir: (optional) name of the directory to save results into.
                Only used when saving.basedir is configured.
            verbose: if False, progress is not printed to the screen.
        """
        assert config is not None
        self.config = config
        self.verbose = verbose
        self.perf_stats = PerfStats()

        self.save_dir = None
        basedir = config.config["saving"].get("basedir")
        if basedir:
            if results_dir is None:
                # Use the current time as the name for the results directory.
                results_dir = f"{time.time():10.0f}"
            self.save_dir = os.path.join(
                basedir,
                config.name.replace("/", "_"),
                str(config.config["saving"].get("tag", "experiment")),
                results_dir,
            )
            os.makedirs(self.save_dir, exist_ok=True)
            with open(
                os.path.join(self.save_dir, "run_config.json"), "a+", encoding="utf8"
            ) as fp:
                json.dump(config.to_dict(), fp)
                fp.write("\n")

    def _output_path(self, out, filename):
        if out is not None:
            return out
        if self.save_dir is not None:
            return os.path.join(self.save_dir, filename)
        return None

    def run_ber(self, out=None, num_workers=None):
        if self.verbose:
            verbose_print(
                f"BER sweep of {self.config.name} ({self.config.scheme.label}, "
                f"alpha={self.config.scheme.alpha}) over "
                f"{len(self.config.ebn0_grid)} Eb/N0 points"
            )
        trial = run_ber_sweep(self.config, num_workers=num_workers)
        self.perf_stats.update(trial)
        trial.perf_stats = self.perf_stats.get_perf_stats()
        write_csv(
            TrialResult.columns,
            trial.rows(),
            trial.config,
            out=self._output_path(out, "ber.csv"),
        )
        required = ebn0_at_ber(
            [p.ebn0_db for p in trial.points],
            [p.tally.avg_ber for p in trial.points],
            _TARGET_BER,
        )
        logging.info(f"{self.config.name}: Eb/N0 at average BER {_TARGET_BER:g} = {required}")
        if self.verbose:
            if required is not None:
                verbose_print(f"Eb/N0 at average BER {_TARGET_BER:g}: {required:.2f} dB")
            self.perf_stats.pretty_print(trial.perf_stats)
        return trial

    def run_papr(self, out=None, n_symbols=None, oversampling=None):
        if self.verbose:
            verbose_print(f"PAPR of {self.config.name} ({self.config.scheme.label})")
        curve = run_papr(self.config, n_symbols=n_symbols, oversampling=oversampling)
        config = self.config.to_dict()
        config["papr"]["num_symbols"] = curve.num_samples
        if oversampling:
            config["papr"]["oversampling"] = int(oversampling)
        write_csv(
            (Constants.GAMMA_DB, Constants.CCDF),
            zip(curve.thresholds_db, curve.probabilities),
            config,
            out=self._output_path(out, "papr_ccdf.csv"),
        )
        return curve
