"""Time-domain virtual experiment and its extraction pipeline.

Simulates the coupled driven cantilevers with PID feedback, then applies
the same analysis the lab would: sampling the coupling force at x1 = 0
crossings, quadrature (Lissajous) phase between -v1 and the coupling
force, Lorentzian fits of frequency responses and ring-down spectra, and
damping sweeps against the eigenvalue prediction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import k as KB
from scipy.optimize import curve_fit

from . import dynamics as dyn
from ._sim_kernels import NPAR, integrate, record_times
from .errors import FitFailure, NoCrossings, StepTooLarge, ToneAmbiguity

# PID gain calibration anchors: derivative gain -8e-6 raises the damping
# rate from 2 pi x 6.7 Hz to 2 pi x 41.6 Hz, and proportional gain -8e-6
# pulls the resonance from 4548.9 Hz to 4481.5 Hz.
C_D = 2.0 * math.pi * (41.6 - 6.7) / 8e-6
C_P = ((2 * math.pi * 4481.5) ** 2 - (2 * math.pi * 4548.9) ** 2) / (-8e-6)

SAMPLES_PER_PERIOD_MIN = 50


@dataclass(frozen=True)
class PidConfig:
    """Feedback gains on one cantilever (2 in the reference setup).

    The derivative channel adds damping -C_D * derivative (so negative gain
    damps); the proportional channel shifts the squared frequency by
    C_P * proportional.
    """

    derivative: float = 0.0
    proportional: float = 0.0
    target: int = 2

    def __post_init__(self):
        if self.target not in (1, 2):
            raise ValueError("target cantilever must be 1 or 2")
        if not (math.isfinite(self.derivative) and math.isfinite(self.proportional)):
            raise ValueError("gains must be finite")

    def delta_gamma(self) -> float:
        return -C_D * self.derivative

    def delta_omega_sq(self) -> float:
        return C_P * self.proportional


@dataclass(frozen=True)
class SimulationRun:
    """Integration settings: step, length, seed, noise, initial state."""

    dt: float
    duration: float
    seed: int = 0
    noise_amplitude: float = 0.0  # force spectral density, N/sqrt(Hz)
    x1_0: float = 0.0
    v1_0: float = 0.0
    x2_0: float = 0.0
    v2_0: float = 0.0
    record_stride: int = 1

    def __post_init__(self):
        if self.dt <= 0 or self.duration <= 0:
            raise ValueError("dt and duration must be > 0")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")


@dataclass
class TimeSeries:
    """Uniformly sampled record of the simulated channels."""

    t: np.ndarray
    x1: np.ndarray
    v1: np.ndarray
    x2: np.ndarray
    v2: np.ndarray
    F_couple: np.ndarray
    dt: float
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LorentzianFit:
    """Result of fitting amplitude^2 = A/((w0^2-w^2)^2 + g^2 w^2) + offset."""

    center: float
    gamma: float
    amplitude: float
    offset: float
    covariance: np.ndarray
    residual: float


def thermal_noise_density(T: float, gamma: float, m: float) -> float:
    """One-sided thermal force noise density sqrt(4 kB T gamma m), N/sqrt(Hz)."""
    return math.sqrt(4.0 * KB * T * gamma * m)


def _params_vector(sys: dyn.CoupledSystem, drive: dyn.DriveConfig,
                   pid: PidConfig, drive_target: int = 1) -> np.ndarray:
    pr = np.zeros(NPAR)
    pr[0] = sys.c1.m
    pr[1] = sys.c2.m
    pr[2] = sys.gamma1
    pr[3] = sys.gamma2
    pr[4] = sys.omega1p**2
    pr[5] = sys.omega2p**2
    pr[6] = sys.J
    pr[7 if drive_target == 1 else 8] = drive.F0
    pr[9] = drive.omega_d
    m_t = sys.c1.m if pid.target == 1 else sys.c2.m
    pd = -m_t * pid.delta_gamma()
    pp = -m_t * pid.delta_omega_sq()
    if pid.target == 1:
        pr[10], pr[11] = pd, pp
    else:
        pr[12], pr[13] = pd, pp
    return pr


def _check_step(sys: dyn.CoupledSystem, drive: dyn.DriveConfig, dt: float):
    wmax = max(sys.omega1p, sys.omega2p, drive.omega_d)
    dt_max = (2.0 * math.pi / wmax) / SAMPLES_PER_PERIOD_MIN
    if dt > dt_max:
        raise StepTooLarge(
            f"dt = {dt:.3e} s exceeds (2 pi / omega_max)/{SAMPLES_PER_PERIOD_MIN} "
            f"= {dt_max:.3e} s"
        )


def simulate(sys: dyn.CoupledSystem, drive: dyn.DriveConfig, pid: PidConfig,
             run: SimulationRun, *, drive_target: int = 1) -> TimeSeries:
    """Integrate the coupled equations of motion; deterministic per seed."""
    _check_step(sys, drive, run.dt)
    nsteps = int(round(run.duration / run.dt))
    state = np.array([[run.x1_0, run.v1_0, run.x2_0, run.v2_0]])
    pr = _params_vector(sys, drive, pid, drive_target)[None, :]
    noise = None
    if run.noise_amplitude > 0.0:
        rng = np.random.Generator(np.random.PCG64(run.seed))
        sigma = run.noise_amplitude * math.sqrt(0.5 / run.dt)
        noise = sigma * rng.standard_normal((nsteps, 2))
    out = integrate(state, pr, 0.0, run.dt, nsteps, 0, run.record_stride, noise)
    t = record_times(0.0, run.dt, nsteps, 0, run.record_stride)
    x1, v1, x2, v2 = (out[0, :, j] for j in range(4))
    return TimeSeries(
        t=t, x1=x1, v1=v1, x2=x2, v2=v2, F_couple=sys.J * x2,
        dt=run.dt * run.record_stride,
        meta={
            "omega_d": drive.omega_d, "J": sys.J, "seed": run.seed,
            "gamma_min": min(sys.gamma1, sys.gamma2),
            "settle_time": 20.0 / min(sys.gamma1, sys.gamma2),
        },
    )


def mechanical_energy(ts: TimeSeries, sys: dyn.CoupledSystem) -> np.ndarray:
    """Total mechanical energy including the coupling term -J x1 x2.

    Uses the softened stiffnesses m_j omega_j'^2; without drive, feedback
    and noise this is monotonically nonincreasing.
    """
    return (0.5 * sys.c1.m * (ts.v1**2 + sys.omega1p**2 * ts.x1**2)
            + 0.5 * sys.c2.m * (ts.v2**2 + sys.omega2p**2 * ts.x2**2)
            - sys.J * ts.x1 * ts.x2)


def _steady_slice(ts: TimeSeries) -> slice:
    t_settle = ts.meta.get("settle_time", 0.0)
    i0 = int(np.searchsorted(ts.t, t_settle))
    if i0 >= ts.t.size - 2:
        raise NoCrossings(
            f"record ends at {ts.t[-1]:.3g} s, before the steady-state window "
            f"(settle time {t_settle:.3g} s)"
        )
    return slice(i0, ts.t.size)


def demodulate(t: np.ndarray, signal: np.ndarray, omega: float,
               min_periods: int = 100) -> complex:
    """Complex amplitude Z with signal ~ Re[Z e^{i omega t}] over an integer
    number of trailing periods (at least min_periods)."""
    period = 2.0 * math.pi / omega
    dt = t[1] - t[0]
    n_per = int((t[-1] - t[0]) / period)
    if n_per < min_periods:
        raise ValueError(
            f"window holds {n_per} periods; demodulation needs >= {min_periods}"
        )
    nwin = int(round(n_per * period / dt))
    tw = t[-nwin:]
    sw = signal[-nwin:]
    z = 2.0 * np.mean(sw * np.exp(-1j * omega * tw))
    return complex(z)


def extract_friction_zero_crossings(ts: TimeSeries, sys: dyn.CoupledSystem):
    """(v1, F_CF) sampled by linear interpolation at each x1 = 0 crossing.

    The first 20/min(gamma) of the record is discarded; at those instants
    the conservative part of the coupling force vanishes, so F_CF = J x2.
    """
    win = _steady_slice(ts)
    x1 = ts.x1[win]
    v1 = ts.v1[win]
    x2 = ts.x2[win]
    t = ts.t[win]
    sign_change = np.nonzero((x1[:-1] * x1[1:] < 0.0))[0]
    if sign_change.size == 0:
        raise NoCrossings("x1 never crosses zero in the steady-state window")
    frac = x1[sign_change] / (x1[sign_change] - x1[sign_change + 1])
    v1_c = v1[sign_change] + frac * (v1[sign_change + 1] - v1[sign_change])
    x2_c = x2[sign_change] + frac * (x2[sign_change + 1] - x2[sign_change])
    t_c = t[sign_change] + frac * (t[sign_change + 1] - t[sign_change])
    return v1_c, sys.J * x2_c, t_c


def lissajous_phase(ts: TimeSeries, *, min_periods: int = 100,
                    tone_margin_db: float = 20.0) -> float:
    """Phase in rad between -v1 and F_couple at the drive frequency.

    Matches atan2(w2'^2 - wd^2, g2 wd) from the steady-state solution: zero
    for resonant drive, +-pi/2 in the conservative limit.  Raises
    ToneAmbiguity when a second spectral line sits within tone_margin_db of
    the drive tone.
    """
    omega_d = ts.meta["omega_d"]
    win = _steady_slice(ts)
    t = ts.t[win]
    f = ts.F_couple[win]
    mv = -ts.v1[win]

    # tone check on the Hann-windowed spectrum, excluding the drive bin
    w = np.hanning(f.size)
    spec = np.abs(np.fft.rfft((f - f.mean()) * w))
    freqs = np.fft.rfftfreq(f.size, ts.dt) * 2.0 * math.pi
    drive_bin = int(np.argmin(np.abs(freqs - omega_d)))
    peak = spec[max(0, drive_bin - 3): drive_bin + 4].max()
    mask = np.ones(spec.size, dtype=bool)
    mask[max(0, drive_bin - 5): drive_bin + 6] = False
    mask[0] = False
    if np.any(mask):
        runner = spec[mask].max()
        if peak <= 0.0 or runner > peak * 10 ** (-tone_margin_db / 20.0):
            raise ToneAmbiguity(
                "second spectral tone within "
                f"{tone_margin_db:.0f} dB of the drive tone"
            )
    z_f = demodulate(t, f, omega_d, min_periods)
    z_v = demodulate(t, mv, omega_d, min_periods)
    return float(np.angle(z_f / z_v))


def _lorentz_model(w, w0, g, a, off):
    return a / ((w0**2 - w**2) ** 2 + (g * w) ** 2) + off


def lorentzian_fit(freq_response) -> LorentzianFit:
    """Nonlinear fit of |amplitude|^2 against the driven-oscillator model.

    freq_response is a sequence of (omega, amplitude) pairs; needs at least
    8 points spanning at least 3 linewidths around the peak.
    """
    arr = np.asarray(freq_response, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise FitFailure("freq_response must be (omega, amplitude) pairs")
    if arr.shape[0] < 8:
        raise FitFailure(f"need >= 8 points, got {arr.shape[0]}")
    w = arr[:, 0]
    y = arr[:, 1] ** 2
    ipk = int(np.argmax(y))
    w0_guess = w[ipk]
    half = y > 0.5 * y[ipk]
    span_half = w[half].max() - w[half].min()
    g_guess = max(span_half, (w.max() - w.min()) / 20.0)
    p0 = [w0_guess, g_guess, y[ipk] * (g_guess * w0_guess) ** 2, max(y.min(), 0.0)]
    try:
        popt, pcov = curve_fit(
            _lorentz_model, w, y, p0=p0, maxfev=40000, xtol=1e-12, ftol=1e-12
        )
    except (RuntimeError, ValueError) as exc:
        raise FitFailure(f"curve_fit failed: {exc}", {"p0": p0}) from exc
    w0, g, a, off = popt
    g = abs(g)
    w0 = abs(w0)
    resid = float(np.sqrt(np.mean((_lorentz_model(w, *popt) - y) ** 2)) / max(y.max(), 1e-300))
    if g <= 0 or not np.isfinite(g):
        raise FitFailure("fitted linewidth not positive", {"popt": popt})
    if (w.max() - w.min()) < 3.0 * g:
        raise FitFailure(
            f"frequency span {w.max() - w.min():.3g} < 3 gamma = {3 * g:.3g}",
            {"popt": popt},
        )
    return LorentzianFit(w0, g, a, off, pcov, resid)


# ---------------------------------------------------------------------------
# driven frequency sweeps and PID calibration


def _default_dt(sys: dyn.CoupledSystem, drive_omega: float) -> float:
    wmax = max(sys.omega1p, sys.omega2p, drive_omega)
    return (2.0 * math.pi / wmax) / 64.0


def frequency_sweep(sys: dyn.CoupledSystem, pid: PidConfig, omegas, F0: float,
                    *, drive_target: int = 1, measure: int = 1,
                    settle_factor: float = 24.0, min_periods: int = 120):
    """Steady-state amplitude of one cantilever at each drive frequency.

    All runs integrate as a single batch from rest; amplitudes come from
    quadrature demodulation over the trailing min_periods drive periods.
    """
    omegas = np.asarray(omegas, dtype=np.float64)
    geff = pid.delta_gamma() if pid.target == 2 else 0.0
    gamma_slow = min(sys.gamma1, sys.gamma2 + max(geff, 0.0))
    dt = _default_dt(sys, omegas.max())
    duration = settle_factor / gamma_slow + (min_periods + 2) * 2 * math.pi / omegas.min()
    nsteps = int(round(duration / dt))
    stride = 2
    rec_start = (nsteps - int((min_periods + 1) * 2 * math.pi / omegas.min() / dt)) // stride * stride
    prs = np.empty((omegas.size, NPAR))
    for i, wd in enumerate(omegas):
        prs[i] = _params_vector(sys, dyn.DriveConfig(F0, wd), pid, drive_target)
    states = np.zeros((omegas.size, 4))
    out = integrate(states, prs, 0.0, dt, nsteps, rec_start, stride)
    t = record_times(0.0, dt, nsteps, rec_start, stride)
    col = 0 if measure == 1 else 2
    amps = np.empty(omegas.size)
    for i, wd in enumerate(omegas):
        amps[i] = abs(demodulate(t, out[i, :, col], wd, min_periods=min_periods - 2))
    return amps


@dataclass
class PidCalibration:
    """Damping and frequency of the target cantilever versus derivative gain."""

    gains: np.ndarray
    gamma_eff: np.ndarray
    omega_eff: np.ndarray
    gamma0: float
    c_d: float
    fits: list


def calibrate_pid(gain_grid, c2: dyn.CantileverParams | None = None,
                  c1: dyn.CantileverParams | None = None) -> PidCalibration:
    """Sweep-and-fit calibration of the derivative-gain damping map.

    For each gain the uncoupled target cantilever is driven through a
    two-stage frequency sweep (coarse locate, fine resolve) and the
    response is Lorentzian-fitted.  The returned linear model
    gamma_eff = gamma0 + c_d |D| should reproduce the built-in anchors.
    """
    from . import presets

    gains = np.asarray(gain_grid, dtype=np.float64)
    if not np.any(gains == 0.0):
        raise ValueError("gain grid must include D = 0")
    c1 = c1 or presets.cantilever1()
    c2 = c2 or presets.cantilever2(presets.GAMMA2_NATURAL)
    sys = dyn.shifted_frequencies(c1, c2, 0.0)
    F0 = 1e-12
    gamma_eff = np.empty(gains.size)
    omega_eff = np.empty(gains.size)
    fits = []
    for i, D in enumerate(gains):
        pid = PidConfig(derivative=D, proportional=0.0, target=2)
        g_pred = c2.gamma0 + pid.delta_gamma()
        w_pred = math.sqrt(c2.omega0**2 + pid.delta_omega_sq())
        coarse = np.linspace(w_pred - 12 * g_pred, w_pred + 12 * g_pred, 17)
        amps = frequency_sweep(sys, pid, coarse, F0, drive_target=2, measure=2)
        w_loc = coarse[int(np.argmax(amps))]
        fine = np.linspace(w_loc - 4 * g_pred, w_loc + 4 * g_pred, 15)
        amps = frequency_sweep(sys, pid, fine, F0, drive_target=2, measure=2)
        try:
            fit = lorentzian_fit(np.column_stack([fine, amps]))
        except FitFailure as exc:
            raise FitFailure(f"calibration failed at D = {D:g}: {exc}") from exc
        gamma_eff[i] = fit.gamma
        omega_eff[i] = fit.center
        fits.append(fit)
    a = np.column_stack([np.ones_like(gains), np.abs(gains)])
    coef, *_ = np.linalg.lstsq(a, gamma_eff, rcond=None)
    return PidCalibration(gains, gamma_eff, omega_eff, float(coef[0]),
                          float(coef[1]), fits)


# ---------------------------------------------------------------------------
# ring-down damping extraction and the two sweep experiments


def ringdown_gamma1(sys: dyn.CoupledSystem, *, amp0: float = 1e-9,
                    decay_spans: float = 40.0) -> tuple[float, LorentzianFit]:
    """Effective damping of cantilever 1 from a free ring-down spectrum.

    Cantilever 1 starts displaced, the fast mode is flushed, and the
    Lorentzian linewidth of the remaining spectral peak gives gamma1_eff.
    """
    g1_pred, g2_pred = dyn.effective_damping(sys)
    dt = _default_dt(sys, sys.omega1p)
    flush = 10.0 / max(g2_pred, sys.gamma2)
    duration = flush + decay_spans / g1_pred
    nsteps = int(round(duration / dt))
    stride = 4
    rec_start = (int(round(flush / dt)) // stride) * stride
    run_state = np.array([[amp0, 0.0, 0.0, 0.0]])
    pr = _params_vector(sys, dyn.DriveConfig(0.0, sys.omega1p), PidConfig())[None, :]
    out = integrate(run_state, pr, 0.0, dt, nsteps, rec_start, stride)
    x1 = out[0, :, 0]
    spec = np.abs(np.fft.rfft(x1))
    freqs = np.fft.rfftfreq(x1.size, dt * stride) * 2.0 * math.pi
    sel = (freqs > sys.omega1p - 4.0 * g1_pred) & (freqs < sys.omega1p + 4.0 * g1_pred)
    if np.count_nonzero(sel) < 8:
        sel = (freqs > sys.omega1p - 8.0 * g1_pred) & (freqs < sys.omega1p + 8.0 * g1_pred)
    fit = lorentzian_fit(np.column_stack([freqs[sel], spec[sel]]))
    return fit.gamma, fit


@dataclass
class DampingSweep:
    """Simulated and analytic gamma1_eff across a swept parameter."""

    values: np.ndarray
    gamma1_sim: np.ndarray
    gamma1_analytic: np.ndarray
    fits: list


def damping_vs_gamma2_sweep(sys_base: dyn.CoupledSystem, gamma2_grid) -> DampingSweep:
    """gamma1_eff versus cantilever-2 damping at fixed coupling.

    Cantilever 2 stays frequency-pinned at sys_base.omega2p while its
    damping is swept (the feedback knob of the real experiment); each point
    is a ring-down simulation plus Lorentzian fit, overlaid with the
    eigenvalue prediction.
    """
    grid = np.asarray(gamma2_grid, dtype=np.float64)
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("gamma2 grid must be positive ascending")
    sim = np.empty(grid.size)
    ana = np.empty(grid.size)
    fits = []
    for i, g2 in enumerate(grid):
        sys = dyn.pinned_system(sys_base.c1, sys_base.c2.m, g2,
                                sys_base.omega2p, sys_base.J)
        ana[i] = dyn.effective_damping(sys)[0]
        sim[i], fit = ringdown_gamma1(sys)
        fits.append(fit)
    return DampingSweep(grid, sim, ana, fits)


def damping_vs_separation_sweep(sys_base: dyn.CoupledSystem, d_grid,
                                sphere, material: str = "Gold",
                                T: float = 300.0, catalog=None) -> DampingSweep:
    """gamma1_eff versus separation, with J(d) from the force gradient."""
    from .lifshitz import coupling_stiffness

    grid = np.asarray(d_grid, dtype=np.float64)
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("separation grid must be positive ascending")
    sim = np.empty(grid.size)
    ana = np.empty(grid.size)
    fits = []
    for i, d in enumerate(grid):
        J = coupling_stiffness(d, sphere, material, T, catalog)
        sys = dyn.pinned_system(sys_base.c1, sys_base.c2.m, sys_base.c2.gamma0,
                                sys_base.omega2p, J)
        ana[i] = dyn.effective_damping(sys)[0]
        sim[i], fit = ringdown_gamma1(sys)
        fits.append(fit)
    return DampingSweep(grid, sim, ana, fits)
