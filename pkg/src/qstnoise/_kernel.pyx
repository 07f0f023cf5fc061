# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled least-squares simplex kernel.

Twin of ``_kernel_py.py``: same operations, same order, so results are
bit-identical. Build with ``-ffp-contract=off`` so no FMA is fused in.
"""
from libc.math cimport fabs

cdef double PENALTY = 1e30
cdef double DEGENERATE_NORM = 1e-24
cdef double ABS_FLOOR = 1e-20


cdef inline double _objective(const double* t, const double* m, double cf[4][4], double scale) noexcept nogil:
    cdef double t1 = t[0]
    cdef double t2 = t[1]
    cdef double t3 = t[2]
    cdef double t4 = t[3]
    cdef double n = t1 * t1 + t2 * t2 + t3 * t3 + t4 * t4
    cdef double sx, sy, sz, r, total
    cdef int j
    if not n > DEGENERATE_NORM:
        return PENALTY
    sx = 2.0 * t2 * t3 / n
    sy = 2.0 * t2 * t4 / n
    sz = (t1 * t1 + t3 * t3 + t4 * t4 - t2 * t2) / n
    total = 0.0
    for j in range(4):
        r = scale * (cf[j][0] + cf[j][1] * sx + cf[j][2] * sy + cf[j][3] * sz) - m[j]
        total += r * r
    return total


cdef int _nelder_mead(const double* m, double cf[4][4], double scale, const double* x0,
                      int max_iter, double ftol, double step,
                      double* out_x, double* out_f, int* out_conv) noexcept nogil:
    cdef double store[5][4]
    cdef double fv[5]
    cdef int order[5]
    cdef double cen[4]
    cdef double xr[4]
    cdef double xe[4]
    cdef double xc[4]
    cdef double fr, fe, fc, kf
    cdef int i, j, v, k, it, converged, accept, w, b

    for v in range(5):
        for i in range(4):
            store[v][i] = x0[i]
        order[v] = v
    for i in range(4):
        store[i + 1][i] = store[i + 1][i] + step
    for v in range(5):
        fv[v] = _objective(store[v], m, cf, scale)

    it = 0
    converged = 0
    while True:
        for i in range(1, 5):
            kf = fv[i]
            k = order[i]
            j = i - 1
            while j >= 0 and fv[j] > kf:
                fv[j + 1] = fv[j]
                order[j + 1] = order[j]
                j -= 1
            fv[j + 1] = kf
            order[j + 1] = k
        if 2.0 * (fv[4] - fv[0]) <= ftol * (fabs(fv[4]) + fabs(fv[0])) + ABS_FLOOR:
            converged = 1
            break
        if it >= max_iter:
            break
        it += 1

        w = order[4]
        for i in range(4):
            cen[i] = (store[order[0]][i] + store[order[1]][i] + store[order[2]][i] + store[order[3]][i]) * 0.25
        for i in range(4):
            xr[i] = cen[i] + (cen[i] - store[w][i])
        fr = _objective(xr, m, cf, scale)

        if fr < fv[0]:
            for i in range(4):
                xe[i] = cen[i] + 2.0 * (cen[i] - store[w][i])
            fe = _objective(xe, m, cf, scale)
            if fe < fr:
                for i in range(4):
                    store[w][i] = xe[i]
                fv[4] = fe
            else:
                for i in range(4):
                    store[w][i] = xr[i]
                fv[4] = fr
            continue
        if fr < fv[3]:
            for i in range(4):
                store[w][i] = xr[i]
            fv[4] = fr
            continue

        if fr < fv[4]:
            for i in range(4):
                xc[i] = cen[i] + 0.5 * (xr[i] - cen[i])
            fc = _objective(xc, m, cf, scale)
            accept = fc <= fr
        else:
            for i in range(4):
                xc[i] = cen[i] + 0.5 * (store[w][i] - cen[i])
            fc = _objective(xc, m, cf, scale)
            accept = fc < fv[4]
        if accept:
            for i in range(4):
                store[w][i] = xc[i]
            fv[4] = fc
            continue

        b = order[0]
        for v in range(1, 5):
            k = order[v]
            for i in range(4):
                store[k][i] = store[b][i] + 0.5 * (store[k][i] - store[b][i])
            fv[v] = _objective(store[k], m, cf, scale)

    for i in range(4):
        out_x[i] = store[order[0]][i]
    out_f[0] = fv[0]
    out_conv[0] = converged
    return it


def objective(t, measured, coeffs, double scale):
    cdef double tt[4]
    cdef double mm[4]
    cdef double cf[4][4]
    cdef int i, j
    for i in range(4):
        tt[i] = t[i]
        mm[i] = measured[i]
        for j in range(4):
            cf[i][j] = coeffs[i][j]
    return _objective(tt, mm, cf, scale)


def fit_restarts(measured, coeffs, double scale, starts, int max_iter, double ftol, double step):
    """Run one simplex descent per row of ``starts``.

    Returns lists ``(xs, fs, converged, iterations)`` indexed by restart.
    """
    cdef double mm[4]
    cdef double cf[4][4]
    cdef double x0[4]
    cdef double xo[4]
    cdef double fo
    cdef int co, it, i, j
    for i in range(4):
        mm[i] = measured[i]
        for j in range(4):
            cf[i][j] = coeffs[i][j]
    xs, fs, conv, iters = [], [], [], []
    for row in starts:
        for i in range(4):
            x0[i] = row[i]
        with nogil:
            it = _nelder_mead(mm, cf, scale, x0, max_iter, ftol, step, xo, &fo, &co)
        xs.append([xo[0], xo[1], xo[2], xo[3]])
        fs.append(fo)
        conv.append(bool(co))
        iters.append(it)
    return xs, fs, conv, iters
