"""Fixed-step RK4 integration of the coupled-cantilever equations.

State layout is (x1, v1, x2, v2); the per-run parameter vector is

    [m1, m2, g1, g2, w1sq, w2sq, J, F0_1, F0_2, wd, pd1, pp1, pd2, pp2]

where pd/pp are feedback force coefficients (force per unit velocity or
displacement) on each cantilever.  Optional force noise is held constant
across the four RK4 substeps of each step.  Recording returns the state at
times t0 + i dt for i = rec_start, rec_start + stride, ..., nsteps.

The scalar kernel compiles under numba; the numpy fallback runs single
trajectories with float arithmetic and vectorizes across a batch otherwise.
"""

import math

import numpy as np

from ._accel import NUMBA_ENABLED, njit

NPAR = 14


def _rk4_single(state, pr, t0, dt, nsteps, rec_start, rec_stride, noise, out):
    x1 = state[0]
    v1 = state[1]
    x2 = state[2]
    v2 = state[3]
    m1 = pr[0]; m2 = pr[1]; g1 = pr[2]; g2 = pr[3]
    w1sq = pr[4]; w2sq = pr[5]; J = pr[6]
    f01 = pr[7]; f02 = pr[8]; wd = pr[9]
    pd1 = pr[10]; pp1 = pr[11]; pd2 = pr[12]; pp2 = pr[13]
    have_noise = noise.shape[0] > 0
    irec = 0
    nxt = rec_start
    h = dt
    for i in range(nsteps + 1):
        if i == nxt:
            out[irec, 0] = x1
            out[irec, 1] = v1
            out[irec, 2] = x2
            out[irec, 3] = v2
            irec += 1
            nxt += rec_stride
        if i == nsteps:
            break
        t = t0 + i * dt
        fn1 = noise[i, 0] if have_noise else 0.0
        fn2 = noise[i, 1] if have_noise else 0.0

        c0 = math.cos(wd * t)
        ch = math.cos(wd * (t + 0.5 * h))
        c1 = math.cos(wd * (t + h))

        # k1
        a1 = -g1 * v1 - w1sq * x1 + (J * x2 + f01 * c0 + pd1 * v1 + pp1 * x1 + fn1) / m1
        a2 = -g2 * v2 - w2sq * x2 + (J * x1 + f02 * c0 + pd2 * v2 + pp2 * x2 + fn2) / m2
        k1x1 = v1; k1v1 = a1; k1x2 = v2; k1v2 = a2
        # k2
        x1b = x1 + 0.5 * h * k1x1; v1b = v1 + 0.5 * h * k1v1
        x2b = x2 + 0.5 * h * k1x2; v2b = v2 + 0.5 * h * k1v2
        a1 = -g1 * v1b - w1sq * x1b + (J * x2b + f01 * ch + pd1 * v1b + pp1 * x1b + fn1) / m1
        a2 = -g2 * v2b - w2sq * x2b + (J * x1b + f02 * ch + pd2 * v2b + pp2 * x2b + fn2) / m2
        k2x1 = v1b; k2v1 = a1; k2x2 = v2b; k2v2 = a2
        # k3
        x1b = x1 + 0.5 * h * k2x1; v1b = v1 + 0.5 * h * k2v1
        x2b = x2 + 0.5 * h * k2x2; v2b = v2 + 0.5 * h * k2v2
        a1 = -g1 * v1b - w1sq * x1b + (J * x2b + f01 * ch + pd1 * v1b + pp1 * x1b + fn1) / m1
        a2 = -g2 * v2b - w2sq * x2b + (J * x1b + f02 * ch + pd2 * v2b + pp2 * x2b + fn2) / m2
        k3x1 = v1b; k3v1 = a1; k3x2 = v2b; k3v2 = a2
        # k4
        x1b = x1 + h * k3x1; v1b = v1 + h * k3v1
        x2b = x2 + h * k3x2; v2b = v2 + h * k3v2
        a1 = -g1 * v1b - w1sq * x1b + (J * x2b + f01 * c1 + pd1 * v1b + pp1 * x1b + fn1) / m1
        a2 = -g2 * v2b - w2sq * x2b + (J * x1b + f02 * c1 + pd2 * v2b + pp2 * x2b + fn2) / m2

        x1 += h / 6.0 * (k1x1 + 2.0 * k2x1 + 2.0 * k3x1 + v1b)
        v1 += h / 6.0 * (k1v1 + 2.0 * k2v1 + 2.0 * k3v1 + a1)
        x2 += h / 6.0 * (k1x2 + 2.0 * k2x2 + 2.0 * k3x2 + v2b)
        v2 += h / 6.0 * (k1v2 + 2.0 * k2v2 + 2.0 * k3v2 + a2)
    return irec


def _rk4_batch(states, prs, t0, dt, nsteps, rec_start, rec_stride, noise, out):
    for b in range(states.shape[0]):
        _rk4_single(states[b], prs[b], t0, dt, nsteps, rec_start, rec_stride,
                    noise if b == 0 else noise[:0], out[b])


if NUMBA_ENABLED:
    _rk4_single = njit(cache=True)(_rk4_single)
    _rk4_batch = njit(cache=True)(_rk4_batch)


def _rk4_single_py(state, pr, t0, dt, nsteps, rec_start, rec_stride, noise, out):
    # pure-python fast path: identical arithmetic with float locals
    x1, v1, x2, v2 = (float(state[j]) for j in range(4))
    (m1, m2, g1, g2, w1sq, w2sq, J, f01, f02, wd,
     pd1, pp1, pd2, pp2) = (float(pr[j]) for j in range(NPAR))
    have_noise = noise.shape[0] > 0
    cos = math.cos
    irec = 0
    nxt = rec_start
    h = dt
    for i in range(nsteps + 1):
        if i == nxt:
            out[irec, 0] = x1
            out[irec, 1] = v1
            out[irec, 2] = x2
            out[irec, 3] = v2
            irec += 1
            nxt += rec_stride
        if i == nsteps:
            break
        t = t0 + i * dt
        fn1 = noise[i, 0] if have_noise else 0.0
        fn2 = noise[i, 1] if have_noise else 0.0
        c0 = cos(wd * t)
        ch = cos(wd * (t + 0.5 * h))
        c1 = cos(wd * (t + h))
        a1 = -g1 * v1 - w1sq * x1 + (J * x2 + f01 * c0 + pd1 * v1 + pp1 * x1 + fn1) / m1
        a2 = -g2 * v2 - w2sq * x2 + (J * x1 + f02 * c0 + pd2 * v2 + pp2 * x2 + fn2) / m2
        k1x1 = v1; k1v1 = a1; k1x2 = v2; k1v2 = a2
        x1b = x1 + 0.5 * h * k1x1; v1b = v1 + 0.5 * h * k1v1
        x2b = x2 + 0.5 * h * k1x2; v2b = v2 + 0.5 * h * k1v2
        a1 = -g1 * v1b - w1sq * x1b + (J * x2b + f01 * ch + pd1 * v1b + pp1 * x1b + fn1) / m1
        a2 = -g2 * v2b - w2sq * x2b + (J * x1b + f02 * ch + pd2 * v2b + pp2 * x2b + fn2) / m2
        k2x1 = v1b; k2v1 = a1; k2x2 = v2b; k2v2 = a2
        x1b = x1 + 0.5 * h * k2x1; v1b = v1 + 0.5 * h * k2v1
        x2b = x2 + 0.5 * h * k2x2; v2b = v2 + 0.5 * h * k2v2
        a1 = -g1 * v1b - w1sq * x1b + (J * x2b + f01 * ch + pd1 * v1b + pp1 * x1b + fn1) / m1
        a2 = -g2 * v2b - w2sq * x2b + (J * x1b + f02 * ch + pd2 * v2b + pp2 * x2b + fn2) / m2
        k3x1 = v1b; k3v1 = a1; k3x2 = v2b; k3v2 = a2
        x1b = x1 + h * k3x1; v1b = v1 + h * k3v1
        x2b = x2 + h * k3x2; v2b = v2 + h * k3v2
        a1 = -g1 * v1b - w1sq * x1b + (J * x2b + f01 * c1 + pd1 * v1b + pp1 * x1b + fn1) / m1
        a2 = -g2 * v2b - w2sq * x2b + (J * x1b + f02 * c1 + pd2 * v2b + pp2 * x2b + fn2) / m2
        x1 += h / 6.0 * (k1x1 + 2.0 * k2x1 + 2.0 * k3x1 + v1b)
        v1 += h / 6.0 * (k1v1 + 2.0 * k2v1 + 2.0 * k3v1 + a1)
        x2 += h / 6.0 * (k1x2 + 2.0 * k2x2 + 2.0 * k3x2 + v2b)
        v2 += h / 6.0 * (k1v2 + 2.0 * k2v2 + 2.0 * k3v2 + a2)
    return irec


def integrate(states, prs, t0, dt, nsteps, rec_start, rec_stride,
              noise=None, backend=None):
    """Integrate a batch of runs; returns recorded states (n, nrec, 4).

    Noise (nsteps, 2) applies to the first batch member only; pass a batch
    of one for noisy runs.
    """
    from ._accel import NUMBA_ENABLED as default_numba

    states = np.ascontiguousarray(states, dtype=np.float64)
    prs = np.ascontiguousarray(prs, dtype=np.float64)
    n = states.shape[0]
    if noise is None:
        noise = np.zeros((0, 2))
    noise = np.ascontiguousarray(noise, dtype=np.float64)
    if noise.shape[0] > 0 and n != 1:
        raise ValueError("force noise is supported for single runs only")
    nrec = len(range(rec_start, nsteps + 1, rec_stride))
    out = np.empty((n, nrec, 4))
    use_numba = default_numba if backend is None else (backend == "numba")
    if use_numba:
        _rk4_batch(states, prs, t0, dt, nsteps, rec_start, rec_stride, noise, out)
    else:
        for b in range(n):
            _rk4_single_py(states[b], prs[b], t0, dt, nsteps, rec_start,
                           rec_stride, noise if b == 0 else noise[:0], out[b])
    return out


def record_times(t0, dt, nsteps, rec_start, rec_stride):
    idx = np.arange(rec_start, nsteps + 1, rec_stride, dtype=np.float64)
    return t0 + idx * dt
