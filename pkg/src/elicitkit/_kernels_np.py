"""Pure-numpy twins of the compiled kernels in ``_kernels_nb``.

The continued fraction is iterated on the whole batch at once; entries
drop out of the working set as they converge.
"""
import numpy as np
from scipy.special import gammaln

FPMIN = 1e-300
CF_EPS = 1e-15
CF_MAXIT = 10_000


def _clamp_tiny(v):
    return np.where(np.abs(v) < FPMIN, FPMIN, v)


def _betacf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 / _clamp_tiny(1.0 - qab * x / qap)
    h = d.copy()
    idx = np.arange(x.shape[0])
    for m in range(1, CF_MAXIT + 1):
        if idx.size == 0:
            return h
        ai, bi, xi = a[idx], b[idx], x[idx]
        ci, di = c[idx], d[idx]
        m2 = 2.0 * m
        aa = m * (bi - m) * xi / ((qam[idx] + m2) * (ai + m2))
        di = 1.0 / _clamp_tiny(1.0 + aa * di)
        ci = _clamp_tiny(1.0 + aa / ci)
        hi = h[idx] * di * ci
        aa = -(ai + m) * (qab[idx] + m) * xi / ((ai + m2) * (qap[idx] + m2))
        di = 1.0 / _clamp_tiny(1.0 + aa * di)
        ci = _clamp_tiny(1.0 + aa / ci)
        step = di * ci
        h[idx] = hi * step
        c[idx] = ci
        d[idx] = di
        idx = idx[np.abs(step - 1.0) >= CF_EPS]
    if idx.size:
        raise RuntimeError("incomplete beta continued fraction did not converge")
    return h


def betainc(a, b, x):
    a, b, x = (np.asarray(v, dtype=np.float64) for v in np.broadcast_arrays(a, b, x))
    out = np.where(x >= 1.0, 1.0, 0.0)
    inner = (x > 0.0) & (x < 1.0)
    if not inner.any():
        return out
    a, b, x = a[inner], b[inner], x[inner]
    lbt = gammaln(a + b) - gammaln(a) - gammaln(b) + a * np.log(x) + b * np.log1p(-x)
    bt = np.exp(lbt)
    direct = x < (a + 1.0) / (a + b + 2.0)
    res = np.empty_like(x)
    if direct.any():
        res[direct] = bt[direct] * _betacf(a[direct], b[direct], x[direct]) / a[direct]
    flip = ~direct
    if flip.any():
        res[flip] = 1.0 - bt[flip] * _betacf(b[flip], a[flip], 1.0 - x[flip]) / b[flip]
    out[inner] = res
    return out


def betainc_scalar(a, b, x):
    return float(betainc(np.array([a]), np.array([b]), np.array([x]))[0])


def window_payoffs(a, b, reports, delta):
    upper = np.minimum(reports + delta, 1.0)
    lower = np.maximum(reports - delta, 0.0)
    both = betainc(a, b, np.concatenate([upper, lower]))
    return both[: reports.shape[0]] - both[reports.shape[0]:]


def window_masses(a, b, centers, delta):
    upper = np.minimum(centers + delta, 1.0)
    lower = np.maximum(centers - delta, 0.0)
    aa = np.concatenate([a, a])
    bb = np.concatenate([b, b])
    both = betainc(aa, bb, np.concatenate([upper, lower]))
    return both[: centers.shape[0]] - both[centers.shape[0]:]


def opposite_flags(alpha, beta, x_hat, delta):
    mu = alpha / (alpha + beta)
    m = (alpha - 1.0) / (alpha + beta - 2.0)
    opposite = ((mu > x_hat) & (m < x_hat)) | ((mu < x_hat) & (m > x_hat))
    heavier = window_masses(alpha, beta, m, delta) >= window_masses(alpha, beta, mu, delta)
    return opposite, heavier
