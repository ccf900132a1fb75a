# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
Figures of merit: bit-error tallies, PAPR and its CCDF, spectral
efficiency, detector complexity and the interference power left in the
matched-filter output.
"""

import math
from dataclasses import dataclass

import numpy as np

from sefdm_im.pattern import candidate_table
from sefdm_im.sefdm_core import correlation_matrix
from sefdm_im.utils.exceptions import ConfigurationError, UndefinedInputError, UsageError

# Two-sided 95% normal quantile
_Z_95 = 1.96


@dataclass(frozen=True)
class BerTally:
    index_errors: int = 0
    index_bits: int = 0
    data_errors: int = 0
    data_bits: int = 0

    def __add__(self, other):
        return BerTally(
            index_errors=self.index_errors + other.index_errors,
            index_bits=self.index_bits + other.index_bits,
            data_errors=self.data_errors + other.data_errors,
            data_bits=self.data_bits + other.data_bits,
        )

    @property
    def bits_counted(self):
        return self.index_bits + self.data_bits

    @property
    def errors(self):
        return self.index_errors + self.data_errors

    @property
    def index_ber(self):
        return self.index_errors / self.index_bits if self.index_bits else 0.0

    @property
    def data_ber(self):
        return self.data_errors / self.data_bits if self.data_bits else 0.0

    @property
    def avg_ber(self):
        return self.errors / self.bits_counted if self.bits_counted else 0.0

    def half_width(self):
        return confidence_half_width(self.avg_ber, self.bits_counted)


def ber_tally(tx_index, tx_data, rx_index, rx_data):
    tx_index, rx_index = np.asarray(tx_index), np.asarray(rx_index)
    tx_data, rx_data = np.asarray(tx_data), np.asarray(rx_data)
    if tx_index.shape != rx_index.shape or tx_data.shape != rx_data.shape:
        raise UsageError("Transmitted and detected bit arrays differ in shape")
    return BerTally(
        index_errors=int(np.count_nonzero(tx_index != rx_index)),
        index_bits=int(tx_index.size),
        data_errors=int(np.count_nonzero(tx_data != rx_data)),
        data_bits=int(tx_data.size),
    )


def confidence_half_width(p, n, z=_Z_95):
    """Normal-approximation half-width of a binomial proportion."""
    if n <= 0:
        return 0.0
    return float(z * math.sqrt(p * (1.0 - p) / n))


def papr(X):
    """
    Peak-to-average power ratio (linear) of a block (N,) or of each row of
    a batch (B, N).
    """
    power = np.abs(np.asarray(X)) ** 2
    mean = power.mean(axis=-1)
    if np.any(mean == 0):
        raise UndefinedInputError("PAPR of an all-zero block is undefined")
    ratio = power.max(axis=-1) / mean
    return float(ratio) if np.ndim(ratio) == 0 else ratio


def papr_db(X):
    return 10.0 * np.log10(papr(X))


@dataclass(frozen=True, eq=False)
class CcdfCurve:
    thresholds_db: np.ndarray
    probabilities: np.ndarray
    num_samples: int


def ccdf(papr_samples_db, thresholds_db):
    """
    Empirical Pr(PAPR > gamma) for each threshold gamma, both in dB.
    """
    samples = np.asarray(papr_samples_db, dtype=np.float64).ravel()
    if samples.size == 0:
        raise UndefinedInputError("CCDF of an empty sample set is undefined")
    thresholds = np.asarray(thresholds_db, dtype=np.float64).ravel()
    ordered = np.sort(samples)
    exceed = samples.size - np.searchsorted(ordered, thresholds, side="right")
    return CcdfCurve(
        thresholds_db=thresholds,
        probabilities=exceed / samples.size,
        num_samples=int(samples.size),
    )


def spectral_efficiency(scheme, coding_rate=1.0):
    """Information bits per subcarrier per unit of bandwidth."""
    if not 0.0 < coding_rate <= 1.0:
        raise ConfigurationError(f"Coding rate must lie in (0, 1], got {coding_rate}")
    return coding_rate * scheme.L / (scheme.K * scheme.alpha)


def complexity_ratio(scheme):
    return scheme.U * scheme.m_eff**scheme.ka_eff / scheme.L


def complexity(scheme):
    """Detector operations per information bit, rounded up."""
    return int(math.ceil(complexity_ratio(scheme) - 1e-12))


def ebn0_at_ber(ebn0_db, bers, target):
    """
    Eb/N0 where the BER curve first falls to ``target``, interpolated
    linearly in log10(BER). None when the curve never reaches the target.
    """
    ebn0_db = np.asarray(ebn0_db, dtype=np.float64)
    bers = np.asarray(bers, dtype=np.float64)
    if ebn0_db.shape != bers.shape:
        raise UsageError("Eb/N0 grid and BER values differ in length")
    if target <= 0:
        raise ConfigurationError(f"Target BER must be positive, got {target}")
    for i in range(bers.size):
        if bers[i] <= target:
            if i == 0:
                return float(ebn0_db[0])
            lo, hi = bers[i - 1], bers[i]
            if hi <= 0:
                return float(ebn0_db[i])
            frac = (math.log10(lo) - math.log10(target)) / (math.log10(lo) - math.log10(hi))
            return float(ebn0_db[i - 1] + frac * (ebn0_db[i] - ebn0_db[i - 1]))
    return None


@dataclass(frozen=True)
class IciPower:
    """Mean interference power per active subcarrier, linear."""

    intra: float
    inter: float

    @staticmethod
    def to_db(value):
        return 10.0 * math.log10(max(value, 1e-30))


def ici_power(scheme, N, alpha):
    """
    Expected interference on the active subcarriers of a block of
    independent, uniformly drawn subblocks, split into the part caused
    inside the own subblock and the part leaking in from other subblocks.
    """
    K = scheme.K
    if N % K:
        raise ConfigurationError(f"N={N} is not a multiple of K={K}")
    G = N // K
    C = correlation_matrix(N, alpha).C
    table = candidate_table(scheme)
    tx = table.tx
    active = table.flags.astype(np.float64)
    p_active = active.mean(axis=0)
    second_moment = tx.T @ tx.conj() / tx.shape[0]
    mean = tx.mean(axis=0)

    intra = 0.0
    inter = 0.0
    for g in range(G):
        own = slice(g * K, (g + 1) * K)
        C_g = C[own, own].copy()
        np.fill_diagonal(C_g, 0.0)
        leak = tx @ C_g.T
        intra += float(np.mean(np.sum(active * np.abs(leak) ** 2, axis=1)))
        for k in range(K):
            row = C[g * K + k]
            power = 0.0
            coherent = 0.0 + 0.0j
            for h in range(G):
                if h == g:
                    continue
                r = row[h * K : (h + 1) * K]
                rm = r @ mean
                power += float(np.real(r @ second_moment @ r.conj())) - abs(rm) ** 2
                coherent += rm
            inter += p_active[k] * (power + abs(coherent) ** 2)
    expected_active = G * float(p_active.sum())
    return IciPower(intra=intra / expected_active, inter=inter / expected_active)
