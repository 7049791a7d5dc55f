# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-sample filter loop (hot kernel).

Must stay expression-for-expression identical to _loops_py.filter_loop:
both call libm exp/fabs and use sequential dot products, so trajectories
are bit-identical across backends.
"""

from libc.math cimport exp, fabs, isfinite


def filter_loop(double[::1] w, double[:, ::1] x, double[::1] d,
                int algo, double mu, double p1, double p2, double p3,
                double[::1] w_star, bint has_ref,
                double[::1] e_out, double[::1] ea_out, double[::1] wep_out):
    """Run the per-sample update over all rows of x, mutating w in place.

    Records (e, and e_a / wep when has_ref) use the pre-update weights.
    Returns -1 on success, else the iteration index whose update produced
    a non-finite weight.
    """
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t m = w.shape[0]
    cdef Py_ssize_t i, j
    cdef double e, acc, s2, a, sgn, score, factor, t

    for i in range(n):
        acc = 0.0
        for j in range(m):
            acc += w[j] * x[i, j]
        e = d[i] - acc
        e_out[i] = e
        if has_ref:
            acc = 0.0
            for j in range(m):
                acc += (w_star[j] - w[j]) * x[i, j]
            ea_out[i] = acc
            acc = 0.0
            for j in range(m):
                t = w_star[j] - w[j]
                acc += t * t
            wep_out[i] = acc

        if algo == 0:  # asymmetric-kernel score (symmetric when p1 == p2)
            s2 = p1 * p1 if e >= 0.0 else p2 * p2
            score = (e / s2) * exp(-(e * e) / (2.0 * s2))
        elif algo == 2:  # plain LMS
            score = e
        elif algo == 3:  # sign algorithm, sign(0) = 0
            if e > 0.0:
                score = 1.0
            elif e < 0.0:
                score = -1.0
            else:
                score = 0.0
        elif algo == 4:  # Hampel three-part redescending score
            a = fabs(e)
            if a < p1:
                score = e
            elif a < p2:
                score = p1 if e > 0.0 else -p1
            elif a < p3:
                sgn = p1 if e > 0.0 else -p1
                score = sgn * ((p3 - a) / (p3 - p2))
            else:
                score = 0.0
        else:  # 5: logarithmic LAD score
            score = (p1 * e) / (1.0 + p1 * fabs(e))

        factor = mu * score
        for j in range(m):
            w[j] = w[j] + factor * x[i, j]
        for j in range(m):
            if not isfinite(w[j]):
                return i
    return -1
