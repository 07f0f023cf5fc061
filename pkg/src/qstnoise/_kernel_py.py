"""Pure-Python least-squares simplex kernel.

Mirror of ``_kernel.pyx``. Both files perform the same floating-point
operations in the same order, so the compiled and fallback backends return
bit-identical results. Edit them together.
"""
import math

PENALTY = 1e30
DEGENERATE_NORM = 1e-24
ABS_FLOOR = 1e-20


def objective(t, measured, coeffs, scale):
    """Sum of squared residuals between ``scale * Tr(M_j rho(t))`` and ``measured``.

    ``coeffs[j] = (c, vx, vy, vz)`` expands ``M_j = c I + v . sigma``.
    """
    t1 = t[0]
    t2 = t[1]
    t3 = t[2]
    t4 = t[3]
    n = t1 * t1 + t2 * t2 + t3 * t3 + t4 * t4
    if not n > DEGENERATE_NORM:
        return PENALTY
    sx = 2.0 * t2 * t3 / n
    sy = 2.0 * t2 * t4 / n
    sz = (t1 * t1 + t3 * t3 + t4 * t4 - t2 * t2) / n
    total = 0.0
    for j in range(4):
        c = coeffs[j]
        r = scale * (c[0] + c[1] * sx + c[2] * sy + c[3] * sz) - measured[j]
        total += r * r
    return total


def _nelder_mead(measured, coeffs, scale, x0, max_iter, ftol, step):
    sim = [[x0[0], x0[1], x0[2], x0[3]]]
    for i in range(4):
        v = [x0[0], x0[1], x0[2], x0[3]]
        v[i] = v[i] + step
        sim.append(v)
    fv = [objective(v, measured, coeffs, scale) for v in sim]
    it = 0
    converged = False
    while True:
        for i in range(1, 5):
            kf = fv[i]
            kv = sim[i]
            j = i - 1
            while j >= 0 and fv[j] > kf:
                fv[j + 1] = fv[j]
                sim[j + 1] = sim[j]
                j -= 1
            fv[j + 1] = kf
            sim[j + 1] = kv
        if 2.0 * (fv[4] - fv[0]) <= ftol * (math.fabs(fv[4]) + math.fabs(fv[0])) + ABS_FLOOR:
            converged = True
            break
        if it >= max_iter:
            break
        it += 1

        w = sim[4]
        cen = [0.0, 0.0, 0.0, 0.0]
        for i in range(4):
            cen[i] = (sim[0][i] + sim[1][i] + sim[2][i] + sim[3][i]) * 0.25
        xr = [0.0, 0.0, 0.0, 0.0]
        for i in range(4):
            xr[i] = cen[i] + (cen[i] - w[i])
        fr = objective(xr, measured, coeffs, scale)

        if fr < fv[0]:
            xe = [0.0, 0.0, 0.0, 0.0]
            for i in range(4):
                xe[i] = cen[i] + 2.0 * (cen[i] - w[i])
            fe = objective(xe, measured, coeffs, scale)
            if fe < fr:
                sim[4] = xe
                fv[4] = fe
            else:
                sim[4] = xr
                fv[4] = fr
            continue
        if fr < fv[3]:
            sim[4] = xr
            fv[4] = fr
            continue

        xc = [0.0, 0.0, 0.0, 0.0]
        if fr < fv[4]:
            for i in range(4):
                xc[i] = cen[i] + 0.5 * (xr[i] - cen[i])
            fc = objective(xc, measured, coeffs, scale)
            accept = fc <= fr
        else:
            for i in range(4):
                xc[i] = cen[i] + 0.5 * (w[i] - cen[i])
            fc = objective(xc, measured, coeffs, scale)
            accept = fc < fv[4]
        if accept:
            sim[4] = xc
            fv[4] = fc
            continue

        best = sim[0]
        for v in range(1, 5):
            s = sim[v]
            ns = [0.0, 0.0, 0.0, 0.0]
            for i in range(4):
                ns[i] = best[i] + 0.5 * (s[i] - best[i])
            sim[v] = ns
            fv[v] = objective(ns, measured, coeffs, scale)
    return sim[0], fv[0], converged, it


def fit_restarts(measured, coeffs, scale, starts, max_iter, ftol, step):
    """Run one simplex descent per row of ``starts``.

    Returns lists ``(xs, fs, converged, iterations)`` indexed by restart.
    """
    m = [float(v) for v in measured]
    cf = [[float(v) for v in row] for row in coeffs]
    scale = float(scale)
    ftol = float(ftol)
    step = float(step)
    xs, fs, conv, iters = [], [], [], []
    for row in starts:
        x0 = [float(v) for v in row]
        x, f, c, it = _nelder_mead(m, cf, scale, x0, int(max_iter), ftol, step)
        xs.append(x)
        fs.append(f)
        conv.append(c)
        iters.append(it)
    return xs, fs, conv, iters
