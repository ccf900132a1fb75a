# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
Per-subblock detection. For every candidate subblock S the metric
Psi = ||R_g - C_g S||^2 / N0 is evaluated once; bit LLRs are
log-sum-exp marginals of -Psi over the candidates whose bit is 0 versus 1,
and hard decisions take the candidate with the smallest Psi.

All functions accept a single subblock (K,) or any batch (..., K).
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from sefdm_im.pattern import candidate_table
from sefdm_im.sefdm_core import CorrelationMatrix, block_diagonal
from sefdm_im.utils.constants import Constants
from sefdm_im.utils.exceptions import ConfigurationError, UsageError

_LLR_CLIP = Constants.LLR_CLIP


@dataclass(frozen=True, eq=False)
class LlrFrame:
    """Index LLRs (..., G, L1) and data LLRs (..., G, L2) of a block."""

    index_llrs: np.ndarray
    data_llrs: np.ndarray


@dataclass(frozen=True, eq=False)
class HardDecision:
    index_bits: np.ndarray
    data_bits: np.ndarray
    candidate: np.ndarray


def _check_noise(N0):
    if not N0 > 0:
        raise ConfigurationError(f"N0 must be positive, got {N0}")


def psi(R_g, C_g, S_g, N0):
    """Metric of one candidate subblock."""
    _check_noise(N0)
    residual = np.asarray(R_g) - np.asarray(C_g) @ np.asarray(S_g)
    return float(np.sum(np.abs(residual) ** 2) / N0)


def candidate_metrics(R_g, C_g, scheme, N0=1.0):
    """Psi of every candidate, shape (..., num_candidates)."""
    _check_noise(N0)
    R_g = np.asarray(R_g)
    if R_g.shape[-1] != scheme.K:
        raise UsageError(f"Subblock must have K={scheme.K} samples, got {R_g.shape[-1]}")
    expected = candidate_table(scheme).tx @ np.asarray(C_g).T
    residual = R_g[..., None, :] - expected
    return np.sum(residual.real**2 + residual.imag**2, axis=-1) / N0


def _marginal_llrs(metrics, bit_table, max_log):
    neg_psi = -metrics
    L = bit_table.shape[1]
    llrs = np.empty(metrics.shape[:-1] + (L,), dtype=np.float64)
    for l in range(L):
        zero = bit_table[:, l] == 0
        if max_log:
            llrs[..., l] = neg_psi[..., zero].max(axis=-1) - neg_psi[..., ~zero].max(axis=-1)
        else:
            llrs[..., l] = logsumexp(neg_psi[..., zero], axis=-1) - logsumexp(
                neg_psi[..., ~zero], axis=-1
            )
    return np.clip(np.nan_to_num(llrs, nan=0.0), -_LLR_CLIP, _LLR_CLIP)


def index_llrs(R_g, scheme, C_g, N0, max_log=False):
    metrics = candidate_metrics(R_g, C_g, scheme, N0)
    return _marginal_llrs(metrics, candidate_table(scheme).index_bits, max_log)


def data_llrs(R_g, scheme, C_g, N0, max_log=False):
    metrics = candidate_metrics(R_g, C_g, scheme, N0)
    return _marginal_llrs(metrics, candidate_table(scheme).data_bits, max_log)


def _subblock_views(R, scheme, C):
    R = np.asarray(R)
    if isinstance(C, CorrelationMatrix):
        C = C.C
    N = R.shape[-1]
    if C.shape != (N, N):
        raise UsageError(f"Correlation matrix must be {N}x{N}, got {C.shape}")
    blocks = block_diagonal(C, scheme.K)
    R_sub = R.reshape(R.shape[:-1] + (blocks.shape[0], scheme.K))
    return R_sub, blocks


def block_metrics(R, scheme, C, N0):
    """Psi for every subblock of every block, shape (..., G, num_candidates)."""
    R_sub, blocks = _subblock_views(R, scheme, C)
    return np.stack(
        [
            candidate_metrics(R_sub[..., g, :], blocks[g], scheme, N0)
            for g in range(blocks.shape[0])
        ],
        axis=-2,
    )


def detect_block(R, scheme, C, N0, max_log=False):
    """
    Soft detection of a block (N,) or a batch (B, N).

    :param C: CorrelationMatrix or an N x N effective correlation matrix
    """
    metrics = block_metrics(R, scheme, C, N0)
    table = candidate_table(scheme)
    return LlrFrame(
        index_llrs=_marginal_llrs(metrics, table.index_bits, max_log),
        data_llrs=_marginal_llrs(metrics, table.data_bits, max_log),
    )


def hard_detect(R_g, scheme, C_g):
    """Minimum-Psi candidate; ties go to the lowest candidate index."""
    candidate = np.argmin(candidate_metrics(R_g, C_g, scheme), axis=-1)
    table = candidate_table(scheme)
    return HardDecision(
        index_bits=table.index_bits[candidate],
        data_bits=table.data_bits[candidate],
        candidate=candidate,
    )


def hard_detect_block(R, scheme, C):
    """Hard decisions for every subblock, bits shaped (..., G, L1) and (..., G, L2)."""
    candidate = np.argmin(block_metrics(R, scheme, C, 1.0), axis=-1)
    table = candidate_table(scheme)
    return HardDecision(
        index_bits=table.index_bits[candidate],
        data_bits=table.data_bits[candidate],
        candidate=candidate,
    )
