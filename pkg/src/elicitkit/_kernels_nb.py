"""Numba-compiled hot loops.

Every function here has a twin with an identical signature in
``_kernels_np``; ``kernels`` picks one of the two at import time.
"""
from math import exp, fabs, lgamma, log, log1p

import numpy as np
from numba import njit

FPMIN = 1e-300
CF_EPS = 1e-15
CF_MAXIT = 10_000


@njit(cache=True)
def _betacf(a, b, x):
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if fabs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAXIT + 1):
        m2 = 2.0 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        step = d * c
        h *= step
        if fabs(step - 1.0) < CF_EPS:
            return h
    raise RuntimeError("incomplete beta continued fraction did not converge")


@njit(cache=True)
def betainc_scalar(a, b, x):
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    lbt = lgamma(a + b) - lgamma(a) - lgamma(b) + a * log(x) + b * log1p(-x)
    bt = exp(lbt)
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


@njit(cache=True)
def betainc(a, b, x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = betainc_scalar(a[i], b[i], x[i])
    return out


@njit(cache=True)
def window_payoffs(a, b, reports, delta):
    """Mass of Beta(a, b) inside [r - delta, r + delta] for every report r."""
    out = np.empty(reports.shape[0])
    for i in range(reports.shape[0]):
        r = reports[i]
        out[i] = betainc_scalar(a, b, min(r + delta, 1.0)) - betainc_scalar(
            a, b, max(r - delta, 0.0)
        )
    return out


@njit(cache=True)
def window_masses(a, b, centers, delta):
    """Per-element window mass: row i uses Beta(a[i], b[i]) centred at centers[i]."""
    out = np.empty(centers.shape[0])
    for i in range(centers.shape[0]):
        r = centers[i]
        out[i] = betainc_scalar(a[i], b[i], min(r + delta, 1.0)) - betainc_scalar(
            a[i], b[i], max(r - delta, 0.0)
        )
    return out


@njit(cache=True)
def opposite_flags(alpha, beta, x_hat, delta):
    n = alpha.shape[0]
    opposite = np.zeros(n, dtype=np.bool_)
    heavier = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        a = alpha[i]
        b = beta[i]
        mu = a / (a + b)
        m = (a - 1.0) / (a + b - 2.0)
        opposite[i] = (mu > x_hat and m < x_hat) or (mu < x_hat and m > x_hat)
        w_mode = betainc_scalar(a, b, min(m + delta, 1.0)) - betainc_scalar(
            a, b, max(m - delta, 0.0)
        )
        w_mean = betainc_scalar(a, b, min(mu + delta, 1.0)) - betainc_scalar(
            a, b, max(mu - delta, 0.0)
        )
        heavier[i] = w_mode >= w_mean
    return opposite, heavier
