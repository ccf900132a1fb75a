# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
Regular (3, 6) rate-1/2 LDPC code: seeded construction with greedy
4-cycle avoidance, systematic encoding and sum-product decoding.
"""

import functools
import logging
from dataclasses import dataclass, field

import numpy as np

from sefdm_im.numba_includes.core.belief_propagation import sum_product_decode
from sefdm_im.utils.exceptions import ConfigurationError, UsageError

_MAX_RETRIES = 50


@dataclass(frozen=True, eq=False)
class LdpcCode:
    """
    Parity-check matrix H (m x n) in systematic column order: the first k
    bits of a codeword are the information bits and the parity bits are
    p = parity_map @ u (mod 2).
    """

    n: int
    k: int
    seed: int
    H: np.ndarray = field(repr=False)
    parity_map: np.ndarray = field(repr=False)
    check_ptr: np.ndarray = field(repr=False)
    edge_var: np.ndarray = field(repr=False)
    var_ptr: np.ndarray = field(repr=False)
    var_edges: np.ndarray = field(repr=False)

    @property
    def m(self):
        return self.H.shape[0]

    @property
    def rate(self):
        return self.k / self.n

    @property
    def num_edges(self):
        return self.edge_var.shape[0]

    def generator_matrix(self):
        """G (k x n) with c = u G (mod 2)."""
        return np.concatenate(
            [np.eye(self.k, dtype=np.uint8), self.parity_map.T.astype(np.uint8)], axis=1
        )


@dataclass(frozen=True, eq=False)
class DecodeResult:
    info_bits: np.ndarray
    codeword: np.ndarray
    converged: bool
    iterations: int


def _regular_parity_check(n, dv, dc, rng):
    """
    Random (dv, dc)-regular H. Each variable picks its checks among those
    with the most free sockets, avoiding checks that would close a 4-cycle
    whenever possible. Returns None when the sockets run out.
    """
    m = n * dv // dc
    H = np.zeros((m, n), dtype=np.uint8)
    capacity = np.full(m, dc, dtype=np.int64)
    for j in rng.permutation(n):
        chosen = []
        for _ in range(dv):
            available = np.flatnonzero(capacity > 0)
            available = available[~np.isin(available, chosen)]
            if available.size == 0:
                return None
            pool = available
            if chosen:
                neighbours = H[chosen].any(axis=0)
                clash = (H[available][:, neighbours]).any(axis=1)
                if not clash.all():
                    pool = available[~clash]
            pool = pool[capacity[pool] == capacity[pool].max()]
            check = int(pool[rng.integers(pool.size)])
            chosen.append(check)
            capacity[check] -= 1
            H[check, j] = 1
    return H


def _gf2_reduce(H):
    """
    Row-reduces H over GF(2). Returns the reduced matrix and its pivot
    columns, or None when H is rank deficient.
    """
    R = H.copy()
    m, n = R.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        candidates = np.flatnonzero(R[row:, col]) + row
        if candidates.size == 0:
            continue
        pivot = candidates[0]
        if pivot != row:
            R[[row, pivot]] = R[[pivot, row]]
        others = np.flatnonzero(R[:, col])
        others = others[others != row]
        R[others] ^= R[row]
        pivots.append(col)
        row += 1
    if row < m:
        return None
    return R, pivots


def _tanner_graph(H):
    checks, variables = np.nonzero(H)
    check_ptr = np.zeros(H.shape[0] + 1, dtype=np.int32)
    check_ptr[1:] = np.cumsum(np.bincount(checks, minlength=H.shape[0]))
    edge_var = variables.astype(np.int32)
    var_edges = np.argsort(edge_var, kind="stable").astype(np.int32)
    var_ptr = np.zeros(H.shape[1] + 1, dtype=np.int32)
    var_ptr[1:] = np.cumsum(np.bincount(edge_var, minlength=H.shape[1]))
    return check_ptr, edge_var, var_ptr, var_edges


def count_four_cycles(H):
    overlap = H.T.astype(np.int64) @ H.astype(np.int64)
    np.fill_diagonal(overlap, 0)
    return int((overlap * (overlap - 1) // 2).sum() // 2)


@functools.lru_cache(maxsize=8)
def build_code(n=648, seed=0, dv=3, dc=6):
    """
    Builds a full-rank (dv, dc)-regular code of length n.

    :param n: code length, even and at least 96
    :param seed: construction seed; the same seed gives the same code
    """
    if n < 96 or n % 2 or (n * dv) % dc:
        raise ConfigurationError(f"LDPC length must be even and at least 96, got {n}")
    for attempt in range(_MAX_RETRIES):
        rng = np.random.default_rng([int(seed), attempt])
        H = _regular_parity_check(n, dv, dc, rng)
        if H is None:
            continue
        reduced = _gf2_reduce(H)
        if reduced is None:
            continue
        R, pivots = reduced
        pivot_set = set(pivots)
        information = [c for c in range(n) if c not in pivot_set]
        order = np.array(information + pivots)
        H_sys = H[:, order]
        parity_map = R[:, information]
        check_ptr, edge_var, var_ptr, var_edges = _tanner_graph(H_sys)
        code = LdpcCode(
            n=n,
            k=n - H.shape[0],
            seed=int(seed),
            H=H_sys,
            parity_map=parity_map,
            check_ptr=check_ptr,
            edge_var=edge_var,
            var_ptr=var_ptr,
            var_edges=var_edges,
        )
        logging.info(
            f"constructed ({dv},{dc}) LDPC code n={n}, k={code.k}, seed={seed}, "
            f"attempt={attempt}, 4-cycles={count_four_cycles(H_sys)}"
        )
        return code
    raise ConfigurationError(
        f"LDPC construction failed after {_MAX_RETRIES} attempts for n={n}, seed={seed}"
    )


def encode(code, info_bits):
    info_bits = np.asarray(info_bits, dtype=np.uint8).ravel()
    if info_bits.size != code.k:
        raise UsageError(f"Expected {code.k} information bits, got {info_bits.size}")
    parity = (code.parity_map.astype(np.int64) @ info_bits) % 2
    return np.concatenate([info_bits, parity.astype(np.uint8)])


def syndrome(code, codeword):
    return (code.H.astype(np.int64) @ np.asarray(codeword, dtype=np.int64)) % 2


def decode(code, llrs, max_iter=50):
    """
    Sum-product decoding with early exit on a zero syndrome.
    LLR > 0 favours bit 0.
    """
    llrs = np.ascontiguousarray(llrs, dtype=np.float64).ravel()
    if llrs.size != code.n:
        raise UsageError(f"Expected {code.n} LLRs, got {llrs.size}")
    if max_iter < 1:
        raise ConfigurationError(f"max_iter must be at least 1, got {max_iter}")
    v2c = np.empty(code.num_edges, dtype=np.float64)
    c2v = np.empty(code.num_edges, dtype=np.float64)
    hard_bits = np.empty(code.n, dtype=np.uint8)
    status = np.zeros(1, dtype=np.uint8)
    iterations = sum_product_decode(
        llrs,
        code.check_ptr,
        code.edge_var,
        code.var_ptr,
        code.var_edges,
        np.int32(max_iter),
        v2c,
        c2v,
        hard_bits,
        status,
    )
    return DecodeResult(
        info_bits=hard_bits[: code.k].copy(),
        codeword=hard_bits,
        converged=bool(status[0]),
        iterations=int(iterations),
    )


def to_alist(code):
    """MacKay alist text of the parity-check matrix, 1-based indices."""
    H = code.H
    m, n = H.shape
    col_weights = H.sum(axis=0)
    row_weights = H.sum(axis=1)
    lines = [
        f"{n} {m}",
        f"{col_weights.max()} {row_weights.max()}",
        " ".join(str(w) for w in col_weights),
        " ".join(str(w) for w in row_weights),
    ]
    for j in range(n):
        lines.append(" ".join(str(i + 1) for i in np.flatnonzero(H[:, j])))
    for i in range(m):
        lines.append(" ".join(str(j + 1) for j in np.flatnonzero(H[i])))
    return "\n".join(lines) + "\n"


def write_alist(code, path):
    with open(path, "w") as fp:
        fp.write(to_alist(code))
