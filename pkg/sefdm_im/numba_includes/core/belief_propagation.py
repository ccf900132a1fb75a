import numpy as np
from numba import njit
from numba import float64, int32, uint8

kMinMagnitude = 1.0e-9
kMaxMagnitude = 30.0


@njit(float64(float64), inline="always", cache=True)
def clip_magnitude(x):
    magnitude = abs(x)
    if magnitude < kMinMagnitude:
        magnitude = kMinMagnitude
    elif magnitude > kMaxMagnitude:
        magnitude = kMaxMagnitude
    if x < 0.0:
        return -magnitude
    return magnitude


@njit(
    int32(
        float64[::1],
        int32[::1],
        int32[::1],
        int32[::1],
        int32[::1],
        int32,
        float64[::1],
        float64[::1],
        uint8[::1],
        uint8[::1],
    ),
    cache=True,
)
def sum_product_decode(
    channel_llrs,
    check_ptr,
    edge_var,
    var_ptr,
    var_edges,
    max_iter,
    v2c,
    c2v,
    hard_bits,
    status,
):
    """
    Sum-product decoding on the Tanner graph given in compressed form.

    Edges are numbered check-major: edges of check i are
    check_ptr[i] .. check_ptr[i + 1] - 1 and edge_var maps an edge to its
    variable. var_edges[var_ptr[j] : var_ptr[j + 1]] lists the edges of
    variable j. LLR > 0 favours bit 0.

    Writes hard decisions into hard_bits, status[0] = 1 on a zero syndrome,
    returns the number of iterations run.
    """
    num_checks = check_ptr.shape[0] - 1
    num_vars = var_ptr.shape[0] - 1
    status[0] = 0

    for e in range(edge_var.shape[0]):
        v2c[e] = clip_magnitude(channel_llrs[edge_var[e]])
        c2v[e] = 0.0

    for iteration in range(1, max_iter + 1):
        # check node update, tanh rule over all other edges of the check
        for i in range(num_checks):
            start = check_ptr[i]
            stop = check_ptr[i + 1]
            for e in range(start, stop):
                prod = 1.0
                for other in range(start, stop):
                    if other != e:
                        prod *= np.tanh(0.5 * clip_magnitude(v2c[other]))
                if prod >= 1.0:
                    prod = 1.0 - 1.0e-15
                elif prod <= -1.0:
                    prod = -1.0 + 1.0e-15
                c2v[e] = clip_magnitude(2.0 * np.arctanh(prod))

        # variable node update and posterior
        for j in range(num_vars):
            total = channel_llrs[j]
            for p in range(var_ptr[j], var_ptr[j + 1]):
                total += c2v[var_edges[p]]
            for p in range(var_ptr[j], var_ptr[j + 1]):
                e = var_edges[p]
                v2c[e] = clip_magnitude(total - c2v[e])
            hard_bits[j] = 1 if total < 0.0 else 0

        satisfied = True
        for i in range(num_checks):
            parity = 0
            for e in range(check_ptr[i], check_ptr[i + 1]):
                parity ^= hard_bits[edge_var[e]]
            if parity != 0:
                satisfied = False
                break
        if satisfied:
            status[0] = 1
            return iteration

    return max_iter
