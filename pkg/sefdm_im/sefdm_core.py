# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
Carrier and correlation matrices of a bandwidth-compressed multicarrier
block, plus the modulator and matched-filter demodulator built on them.

Blocks are handled as rows: a batch of B blocks is a (B, N) array.
"""

import functools
import logging
from dataclasses import dataclass, field

import numpy as np

from sefdm_im.utils.exceptions import ConfigurationError, UsageError

# Below this the closed form is numerically unsafe
_DENOMINATOR_FLOOR = 1e-9


@dataclass(frozen=True, eq=False)
class CarrierMatrix:
    N: int
    alpha: float
    phi: np.ndarray = field(repr=False)

    @property
    def hermitian(self):
        return self.phi.conj().T


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    N: int
    alpha: float
    C: np.ndarray = field(repr=False)

    def block(self, g, K):
        """Diagonal K x K block of subblock ``g``."""
        return self.C[g * K : (g + 1) * K, g * K : (g + 1) * K]

    def blocks(self, K):
        """All diagonal blocks, shape (G, K, K)."""
        return block_diagonal(self.C, K)


def block_diagonal(matrix, K):
    N = matrix.shape[0]
    if N % K:
        raise ConfigurationError(f"N={N} is not a multiple of K={K}")
    G = N // K
    return np.stack([matrix[g * K : (g + 1) * K, g * K : (g + 1) * K] for g in range(G)])


def _check_dimensions(N, alpha):
    if int(N) != N or N < 1:
        raise ConfigurationError(f"N must be a positive integer, got {N}")
    if not 0.0 < float(alpha) <= 1.0:
        raise ConfigurationError(f"alpha must lie in (0, 1], got {alpha}")


@functools.lru_cache(maxsize=32)
def carrier_matrix(N, alpha):
    """
    Phi[k, n] = exp(j 2 pi alpha k n / N) / sqrt(N).
    """
    _check_dimensions(N, alpha)
    k = np.arange(N)
    phi = np.exp(2j * np.pi * alpha * np.outer(k, k) / N) / np.sqrt(N)
    phi.setflags(write=False)
    return CarrierMatrix(N=int(N), alpha=float(alpha), phi=phi)


@functools.lru_cache(maxsize=64)
def oversampled_carrier_matrix(N, alpha, factor):
    """
    (N * factor) x N matrix sampling the block waveform at t = m / factor.
    factor = 1 reproduces carrier_matrix.
    """
    _check_dimensions(N, alpha)
    if int(factor) != factor or factor < 1:
        raise ConfigurationError(f"Oversampling factor must be a positive integer, got {factor}")
    t = np.arange(N * int(factor)) / int(factor)
    n = np.arange(N)
    phi = np.exp(2j * np.pi * alpha * np.outer(t, n) / N) / np.sqrt(N)
    phi.setflags(write=False)
    return phi


def _kernel(d, N, alpha):
    """
    (1/N) sum_t exp(j 2 pi alpha t d / N) for integer offsets ``d``.
    """
    d = np.asarray(d, dtype=np.float64)
    numerator = 1.0 - np.exp(2j * np.pi * alpha * d)
    denominator = 1.0 - np.exp(2j * np.pi * alpha * d / N)
    out = np.empty(d.shape, dtype=np.complex128)
    safe = np.abs(denominator) >= _DENOMINATOR_FLOOR
    out[safe] = numerator[safe] / (N * denominator[safe])
    if np.any(~safe):
        t = np.arange(N)
        direct = np.exp(2j * np.pi * alpha * np.outer(d[~safe], t) / N)
        out[~safe] = direct.sum(axis=1) / N
    return out


@functools.lru_cache(maxsize=32)
def correlation_matrix(N, alpha):
    """
    C = Phi^H Phi, Hermitian with unit diagonal; C[k, n] depends on n - k only.
    """
    _check_dimensions(N, alpha)
    k = np.arange(N)
    C = _kernel(k[None, :] - k[:, None], N, alpha)
    C.setflags(write=False)
    logging.debug(f"correlation matrix built for N={N}, alpha={alpha}")
    return CorrelationMatrix(N=int(N), alpha=float(alpha), C=C)


def _as_rows(array, N, name):
    array = np.asarray(array)
    if array.shape[-1] != N or array.ndim not in (1, 2):
        raise UsageError(f"{name} must have shape (N,) or (B, N) with N={N}, got {array.shape}")
    return array


def modulate(S, cm):
    """X = Phi S for one block (N,) or a batch of blocks (B, N)."""
    S = _as_rows(S, cm.N, "S")
    return S @ cm.phi.T


def demodulate(Y, cm):
    """R = Phi^H Y for one block (N,) or a batch of blocks (B, N)."""
    Y = _as_rows(Y, cm.N, "Y")
    return Y @ cm.phi.conj()
