"""Scalar score functions shared by step() and the pure-Python loop.

These mirror the compiled loop expression-for-expression (math.exp and the
compiled code both call libm's exp), so a Python step sequence and a
compiled run over the same data produce bit-identical trajectories.
"""

from math import exp, fabs

# algorithm codes shared with the compiled loop
ALGO_KERNEL = 0  # asymmetric-kernel score; symmetric when both bandwidths equal
ALGO_LMS = 2
ALGO_SA = 3
ALGO_LMM = 4
ALGO_LLAD = 5


def kernel_score(e, sigma_plus, sigma_minus):
    s2 = sigma_plus * sigma_plus if e >= 0.0 else sigma_minus * sigma_minus
    return (e / s2) * exp(-(e * e) / (2.0 * s2))


def sign_score(e):
    if e > 0.0:
        return 1.0
    if e < 0.0:
        return -1.0
    return 0.0


def hampel_score(e, xi, delta1, delta2):
    a = fabs(e)
    if a < xi:
        return e
    if a < delta1:
        return xi if e > 0.0 else -xi
    if a < delta2:
        return (xi if e > 0.0 else -xi) * ((delta2 - a) / (delta2 - delta1))
    return 0.0


def llad_score(e, alpha):
    return (alpha * e) / (1.0 + alpha * fabs(e))


def score(e, algo, p1, p2, p3):
    if algo == ALGO_KERNEL:
        return kernel_score(e, p1, p2)
    if algo == ALGO_LMS:
        return e
    if algo == ALGO_SA:
        return sign_score(e)
    if algo == ALGO_LMM:
        return hampel_score(e, p1, p2, p3)
    if algo == ALGO_LLAD:
        return llad_score(e, p1)
    raise ValueError(f"unknown algorithm code {algo}")


def seq_dot(a, b):
    """Left-to-right accumulated dot product (same order as the loops)."""
    acc = 0.0
    for u, v in zip(a, b):
        acc += u * v
    return acc
