"""Hot kernels for the equilibrium Casimir energy and its gradient.

The plate-plate free energy per area E(x, T) is a Matsubara sum over
imaginary frequencies xi_l = 2 pi kB T l / hbar (l = 0 weighted 1/2) of a
transverse-wavevector integral, evaluated here in u = 2 x q.  The gradient
dE/dx shares the same panels.  The u integral is adaptive: panels where a
GL8 and GL16 estimate disagree beyond the requested tolerance are bisected,
which matters mostly for the ideal-reflector l = 0 term whose integrand has
a log endpoint.

Scalar routines compile under numba; the *_numpy twins perform the same
panel subdivision with vectorized evaluation.
"""

import math

import numpy as np
from scipy.constants import c, hbar, k

from ._accel import NUMBA_ENABLED, njit
from ._quad import GL8_X, GL8_W, GL16_X, GL16_W

HBAR = float(hbar)
KB = float(k)
CLIGHT = float(c)

U_SPAN = 60.0  # integrand decays like u e^{-u}; e^{-60} is below tolerance
_BASE_U_REL = np.array([0.0, 1e-4, 1e-3, 1e-2, 0.05, 0.2, 0.5, 1.0, 2.0,
                        4.0, 8.0, 16.0, 32.0, U_SPAN])
_MAX_PANELS = 4000


def _eps_imag_scalar(code, einf, wT, S, g, xi):
    if code == 0:
        return einf * (1.0 + (S * S - wT * wT) / (wT * wT + xi * xi + g * xi))
    elif code == 1:
        return einf * (1.0 + S / (wT * wT + xi * xi + g * xi))
    elif code == 2:
        return einf + S * S / (xi * xi + g * xi)
    return np.inf


def _r_pair_scalar(code, einf, wT, S, g, u, x, xi):
    # (r_TM, r_TE) at imaginary frequency xi and u = 2 x q
    if code == 3:
        return 1.0, 1.0
    q = u / (2.0 * x)
    if xi == 0.0:
        if code == 2:
            return 1.0, 0.0
        e0 = _eps_imag_scalar(code, einf, wT, S, g, 0.0)
        return (e0 - 1.0) / (e0 + 1.0), 0.0
    e = _eps_imag_scalar(code, einf, wT, S, g, xi)
    kj = math.sqrt(q * q + (e - 1.0) * (xi / CLIGHT) ** 2)
    return (e * q - kj) / (e * q + kj), (kj - q) / (kj + q)


def _uv_integrand(ca, ea, wTa, Sa, ga, cb, eb, wTb, Sb, gb, u, x, xi):
    # returns (fE, fG): u [ln(1 - rho_TM w) + ln(1 - rho_TE w)]
    #                   u^2 [rho_TM w/(1 - rho_TM w) + rho_TE w/(1 - rho_TE w)]
    # with w = e^{-u}
    rtm_a, rte_a = _r_pair_scalar(ca, ea, wTa, Sa, ga, u, x, xi)
    rtm_b, rte_b = _r_pair_scalar(cb, eb, wTb, Sb, gb, u, x, xi)
    ptm = rtm_a * rtm_b
    pte = rte_a * rte_b
    w = math.exp(-u)
    fE = u * (math.log1p(-ptm * w) + math.log1p(-pte * w))
    fG = u * u * (ptm * w / (1.0 - ptm * w) + pte * w / (1.0 - pte * w))
    return fE, fG


def _panel_gl(ca, ea, wTa, Sa, ga, cb, eb, wTb, Sb, gb, a, b, x, xi, glx, glw):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    sE = 0.0
    sG = 0.0
    for i in range(glx.size):
        fE, fG = _uv_integrand(ca, ea, wTa, Sa, ga, cb, eb, wTb, Sb, gb,
                               mid + half * glx[i], x, xi)
        sE += glw[i] * fE
        sG += glw[i] * fG
    return half * sE, half * sG


def _u_integral_scalar(pa, pb, x, xi, rtol):
    # adaptive panels over u in [2 x xi / c, ... + U_SPAN]
    ca = int(pa[0]); ea = pa[1]; wTa = pa[2]; Sa = pa[3]; ga = pa[4]
    cb = int(pb[0]); eb = pb[1]; wTb = pb[2]; Sb = pb[3]; gb = pb[4]
    u0 = 2.0 * x * xi / CLIGHT
    nbase = _BASE_U_REL.size - 1

    # first pass for the tolerance scale
    scaleE = 0.0
    scaleG = 0.0
    for i in range(nbase):
        sE, sG = _panel_gl(ca, ea, wTa, Sa, ga, cb, eb, wTb, Sb, gb,
                           u0 + _BASE_U_REL[i], u0 + _BASE_U_REL[i + 1],
                           x, xi, GL16_X, GL16_W)
        scaleE += abs(sE)
        scaleG += abs(sG)
    tolE = rtol * scaleE + 1e-300
    tolG = rtol * scaleG + 1e-300

    stack_a = np.empty(_MAX_PANELS)
    stack_b = np.empty(_MAX_PANELS)
    for i in range(nbase):
        stack_a[i] = u0 + _BASE_U_REL[i]
        stack_b[i] = u0 + _BASE_U_REL[i + 1]
    top = nbase
    totE = 0.0
    totG = 0.0
    processed = 0
    ok = True
    while top > 0:
        top -= 1
        a = stack_a[top]
        b = stack_b[top]
        processed += 1
        if processed > _MAX_PANELS:
            ok = False
            break
        e8, g8 = _panel_gl(ca, ea, wTa, Sa, ga, cb, eb, wTb, Sb, gb,
                           a, b, x, xi, GL8_X, GL8_W)
        e16, g16 = _panel_gl(ca, ea, wTa, Sa, ga, cb, eb, wTb, Sb, gb,
                             a, b, x, xi, GL16_X, GL16_W)
        if (abs(e16 - e8) <= tolE and abs(g16 - g8) <= tolG) or (b - a) < 1e-12 * (1.0 + b):
            totE += e16
            totG += g16
        else:
            if top + 2 >= _MAX_PANELS:
                ok = False
                totE += e16
                totG += g16
                continue
            m = 0.5 * (a + b)
            stack_a[top] = a
            stack_b[top] = m
            stack_a[top + 1] = m
            stack_b[top + 1] = b
            top += 2
    return totE, totG, ok


def _matsubara_sum_scalar(pa, pb, x, T, rtol_quad, rtol_sum, max_terms):
    # returns (E, dEdx, terms_used, last_ratio, ok)
    iE, iG, ok = _u_integral_scalar(pa, pb, x, 0.0, rtol_quad)
    accE = 0.5 * iE
    accG = 0.5 * iG
    xi1 = 2.0 * math.pi * KB * T / HBAR
    l = 0
    ratio = 1.0
    while True:
        l += 1
        if l > max_terms:
            ok = False
            break
        xi = xi1 * l
        if 2.0 * x * xi / CLIGHT > 65.0:
            ratio = 0.0
            break
        iE, iG, okl = _u_integral_scalar(pa, pb, x, xi, rtol_quad)
        ok = ok and okl
        accE += iE
        accG += iG
        ratio = max(abs(iE) / (abs(accE) + 1e-300), abs(iG) / (abs(accG) + 1e-300))
        if l >= 2 and ratio < rtol_sum:
            break
    pref = KB * T / (2.0 * math.pi)
    E = pref * accE / (4.0 * x * x)
    dEdx = pref * accG / (4.0 * x * x * x)
    return E, dEdx, l, ratio, ok


_S_EDGES = np.array([0.0, 0.01, 0.05, 0.2, 0.5, 1.0, 2.0, 4.0, 8.0,
                     16.0, 32.0, U_SPAN])


def _t0_integral_scalar(pa, pb, x, rtol_quad):
    # zero-temperature path: integral over xi = s c / (2x), s in [0, 60]
    accE = 0.0
    accG = 0.0
    ok = True
    for i in range(_S_EDGES.size - 1):
        half = 0.5 * (_S_EDGES[i + 1] - _S_EDGES[i])
        mid = 0.5 * (_S_EDGES[i + 1] + _S_EDGES[i])
        for j in range(GL16_X.size):
            s = mid + half * GL16_X[j]
            xi = s * CLIGHT / (2.0 * x)
            iE, iG, okj = _u_integral_scalar(pa, pb, x, xi, rtol_quad)
            ok = ok and okj
            accE += half * GL16_W[j] * iE
            accG += half * GL16_W[j] * iG
    pref = HBAR * CLIGHT / (32.0 * math.pi**2 * x**3)
    return pref * accE, pref * accG / x, 0, 0.0, ok


if NUMBA_ENABLED:
    _eps_imag_scalar = njit(cache=True)(_eps_imag_scalar)
    _r_pair_scalar = njit(cache=True)(_r_pair_scalar)
    _uv_integrand = njit(cache=True)(_uv_integrand)
    _panel_gl = njit(cache=True)(_panel_gl)
    _u_integral_scalar = njit(cache=True)(_u_integral_scalar)
    _matsubara_sum_scalar = njit(cache=True)(_matsubara_sum_scalar)
    _t0_integral_scalar = njit(cache=True)(_t0_integral_scalar)


# ---------------------------------------------------------------------------
# vectorized numpy twins


def _r_pair_arr(p, u, x, xi):
    code = int(p[0])
    if code == 3:
        one = np.ones_like(u)
        return one, one
    q = u / (2.0 * x)
    if xi == 0.0:
        if code == 2:
            return np.ones_like(u), np.zeros_like(u)
        e0 = _eps_imag_scalar(code, p[1], p[2], p[3], p[4], 0.0)
        return np.full_like(u, (e0 - 1.0) / (e0 + 1.0)), np.zeros_like(u)
    e = _eps_imag_scalar(code, p[1], p[2], p[3], p[4], xi)
    kj = np.sqrt(q * q + (e - 1.0) * (xi / CLIGHT) ** 2)
    return (e * q - kj) / (e * q + kj), (kj - q) / (kj + q)


def _uv_integrand_arr(pa, pb, u, x, xi):
    rtm_a, rte_a = _r_pair_arr(pa, u, x, xi)
    rtm_b, rte_b = _r_pair_arr(pb, u, x, xi)
    ptm = rtm_a * rtm_b
    pte = rte_a * rte_b
    w = np.exp(-u)
    fE = u * (np.log1p(-ptm * w) + np.log1p(-pte * w))
    fG = u * u * (ptm * w / (1.0 - ptm * w) + pte * w / (1.0 - pte * w))
    return fE, fG


def _panels_eval(pa, pb, a, b, x, xi, glx, glw):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    u = mid[:, None] + half[:, None] * glx[None, :]
    fE, fG = _uv_integrand_arr(pa, pb, u.ravel(), x, xi)
    fE = fE.reshape(u.shape)
    fG = fG.reshape(u.shape)
    return half * (fE @ glw), half * (fG @ glw)


def _u_integral_numpy(pa, pb, x, xi, rtol):
    u0 = 2.0 * x * xi / CLIGHT
    a = u0 + _BASE_U_REL[:-1]
    b = u0 + _BASE_U_REL[1:]
    e16, g16 = _panels_eval(pa, pb, a, b, x, xi, GL16_X, GL16_W)
    tolE = rtol * np.sum(np.abs(e16)) + 1e-300
    tolG = rtol * np.sum(np.abs(g16)) + 1e-300
    totE = 0.0
    totG = 0.0
    ok = True
    processed = 0
    while a.size:
        processed += a.size
        if processed > _MAX_PANELS:
            ok = False
        e8, g8 = _panels_eval(pa, pb, a, b, x, xi, GL8_X, GL8_W)
        e16, g16 = _panels_eval(pa, pb, a, b, x, xi, GL16_X, GL16_W)
        good = ((np.abs(e16 - e8) <= tolE) & (np.abs(g16 - g8) <= tolG)) \
            | ((b - a) < 1e-12 * (1.0 + b)) | (not ok)
        totE += np.sum(e16[good])
        totG += np.sum(g16[good])
        if not ok:
            break
        a, b = a[~good], b[~good]
        if a.size:
            m = 0.5 * (a + b)
            a = np.concatenate([a, m])
            b = np.concatenate([m, b])
    return totE, totG, ok


def _matsubara_sum_numpy(pa, pb, x, T, rtol_quad, rtol_sum, max_terms):
    iE, iG, ok = _u_integral_numpy(pa, pb, x, 0.0, rtol_quad)
    accE = 0.5 * iE
    accG = 0.5 * iG
    xi1 = 2.0 * math.pi * KB * T / HBAR
    l = 0
    ratio = 1.0
    while True:
        l += 1
        if l > max_terms:
            ok = False
            break
        xi = xi1 * l
        if 2.0 * x * xi / CLIGHT > 65.0:
            ratio = 0.0
            break
        iE, iG, okl = _u_integral_numpy(pa, pb, x, xi, rtol_quad)
        ok = ok and okl
        accE += iE
        accG += iG
        ratio = max(abs(iE) / (abs(accE) + 1e-300), abs(iG) / (abs(accG) + 1e-300))
        if l >= 2 and ratio < rtol_sum:
            break
    pref = KB * T / (2.0 * math.pi)
    return pref * accE / (4 * x * x), pref * accG / (4 * x**3), l, ratio, ok


def _t0_integral_numpy(pa, pb, x, rtol_quad):
    accE = 0.0
    accG = 0.0
    ok = True
    for i in range(_S_EDGES.size - 1):
        half = 0.5 * (_S_EDGES[i + 1] - _S_EDGES[i])
        mid = 0.5 * (_S_EDGES[i + 1] + _S_EDGES[i])
        for j in range(GL16_X.size):
            s = mid + half * GL16_X[j]
            xi = s * CLIGHT / (2.0 * x)
            iE, iG, okj = _u_integral_numpy(pa, pb, x, xi, rtol_quad)
            ok = ok and okj
            accE += half * GL16_W[j] * iE
            accG += half * GL16_W[j] * iG
    pref = HBAR * CLIGHT / (32.0 * math.pi**2 * x**3)
    return pref * accE, pref * accG / x, 0, 0.0, ok


def lifshitz_kernel(pa, pb, x, T, rtol_quad=1e-8, rtol_sum=1e-9,
                    max_terms=200000, backend=None):
    """(E, dE/dx, terms, last_ratio, ok) for one plate pair and separation."""
    use_numba = NUMBA_ENABLED if backend is None else (backend == "numba")
    if T == 0.0:
        fn = _t0_integral_scalar if use_numba else _t0_integral_numpy
        return fn(pa, pb, x, rtol_quad)
    fn = _matsubara_sum_scalar if use_numba else _matsubara_sum_numpy
    return fn(pa, pb, x, T, rtol_quad, rtol_sum, max_terms)
