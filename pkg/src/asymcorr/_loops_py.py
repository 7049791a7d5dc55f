"""Pure-Python fallback for the per-sample filter loop.

Expression-for-expression mirror of _loops.pyx: sequential dot products,
math.exp / math.fabs (libm), identical branch structure.  The compiled
extension is built with FP contraction off, so both backends produce
bit-identical trajectories.
"""

import math


def filter_loop(w, x, d, algo, mu, p1, p2, p3, w_star, has_ref,
                e_out, ea_out, wep_out):
    """Run the per-sample update over all rows of x, mutating w in place.

    Same contract as the compiled version: returns -1 on success, else the
    iteration index whose update produced a non-finite weight.
    """
    n = d.shape[0]
    m = w.shape[0]
    # Local lists: faster than repeated numpy scalar indexing, same doubles.
    wl = w.tolist()
    xl = x.tolist()
    dl = d.tolist()
    wsl = w_star.tolist()
    exp = math.exp
    fabs = math.fabs
    isfinite = math.isfinite

    bad = -1
    for i in range(n):
        xi = xl[i]
        acc = 0.0
        for j in range(m):
            acc += wl[j] * xi[j]
        e = dl[i] - acc
        e_out[i] = e
        if has_ref:
            acc = 0.0
            for j in range(m):
                acc += (wsl[j] - wl[j]) * xi[j]
            ea_out[i] = acc
            acc = 0.0
            for j in range(m):
                t = wsl[j] - wl[j]
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
            wl[j] = wl[j] + factor * xi[j]
        ok = True
        for j in range(m):
            if not isfinite(wl[j]):
                ok = False
                break
        if not ok:
            bad = i
            break

    for j in range(m):
        w[j] = wl[j]
    return bad
