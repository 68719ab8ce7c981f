"""Non-contact Casimir friction between sliding plates.

Implements the finite-temperature friction stress in the nonrelativistic
near-field regime: a (q_x, q_y, omega) integral over Doppler-shifted
reflection factors weighted by Bose occupation differences, with the
photon-tunneling denominator resolved adaptively.  The returned stress is
the force per unit area acting on the moving plate along its direction of
motion, so stress * v <= 0 for plates in mutual equilibrium.

By default the p-polarized near-field amplitude (eps-1)/(eps+1) is used and
s-polarization is dropped; ``retarded=True`` switches to the full Fresnel
amplitudes of both polarizations as a sensitivity check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import materials as mat
from ._friction_kernels import stress_kernel
from .errors import ConvergenceFailure, NoSurfaceMode

V_LIMIT = 1e8  # m/s; relativistic corrections are out of scope


@dataclass(frozen=True)
class SlidingConfig:
    """Two plates in relative parallel motion."""

    material_a: str
    material_b: str
    d: float
    v: float
    T1: float = 300.0
    T2: float = 300.0

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError("separation d must be > 0")
        if self.T1 < 0 or self.T2 < 0:
            raise ValueError("temperatures must be >= 0")
        if abs(self.v) > V_LIMIT:
            raise ValueError(f"|v| must be <= {V_LIMIT:.0e} m/s")


@dataclass
class FrictionCurve:
    """Stress sampled over a velocity grid, with derived summary numbers.

    linear_coefficient is |stress|/v from the three lowest valid velocities
    (least squares through the origin), in kg s^-1 m^-2.  peak_velocity
    locates the resonant photon-tunneling peak: the largest interior local
    maximum of |stress|/v.  (|stress|/v also grows toward the linear plateau
    as v -> 0, so the global maximum would always sit at the lowest grid
    point; the resonance is the interior bump.)  Points that failed to
    converge are marked False in ``valid``.
    """

    velocities: np.ndarray
    stress: np.ndarray
    valid: np.ndarray
    linear_coefficient: float | None = None
    peak_velocity: float | None = None
    errors: list = field(default_factory=list)


def bose_occupation(omega, T: float):
    """Bose-Einstein occupation n(omega) at temperature T.

    Negative frequencies follow the continuation n(-w) = -1 - n(w) used by
    the friction integrand; n -> kT/(hbar w) as w -> 0+.  At T = 0 the
    occupation is 0 for w > 0 and -1 for w < 0.
    """
    from scipy.constants import hbar, k

    w = np.asarray(omega, dtype=np.float64)
    if T < 0:
        raise ValueError("T must be >= 0")
    if T == 0.0:
        out = np.where(w > 0, 0.0, np.where(w < 0, -1.0, np.nan))
    else:
        x = hbar * w / (k * T)
        with np.errstate(divide="ignore", over="ignore"):
            out = 1.0 / np.expm1(np.clip(x, -700.0, 700.0))
        out = np.where(x > 700.0, 0.0, np.where(x < -700.0, -1.0, out))
    if np.ndim(omega) == 0:
        return float(out)
    return out


def _resonance_hints(model: mat.LorentzModel):
    try:
        ws = mat.surface_resonance(model)
    except NoSurfaceMode:
        ws = 0.0
    return ws, model.gamma


def friction_stress(cfg: SlidingConfig, catalog: mat.MaterialCatalog | None = None,
                    *, retarded: bool = False, quality: str = "default") -> float:
    """Friction stress in N/m^2 on the moving plate; opposes the motion.

    quality "fast" thins the quadrature grids for survey work (property
    tests, curve scans); "default" is the converged setting.
    """
    catalog = catalog or mat.builtin_catalog()
    ma = catalog.get(cfg.material_a)
    mb = catalog.get(cfg.material_b)
    ws1, g1 = _resonance_hints(ma)
    ws2, g2 = _resonance_hints(mb)
    aux = [ma.gamma, mb.gamma]
    for m in (ma, mb):
        if m.omega_T > 0:
            aux.append(m.omega_T)
        if m.form == mat.DRUDE:
            aux.append(m.strength)
    value = stress_kernel(cfg.v, cfg.d, cfg.T1, cfg.T2,
                          ma.as_params(), mb.as_params(),
                          ws1, g1, ws2, g2, aux,
                          retarded=retarded, quality=quality)
    if not math.isfinite(value):
        raise ConvergenceFailure(
            "friction integrand produced a non-finite value",
            {"config": cfg, "retarded": retarded},
        )
    return value


def friction_curve(cfg_base: SlidingConfig, velocity_grid,
                   catalog: mat.MaterialCatalog | None = None,
                   *, retarded: bool = False, quality: str = "default") -> FrictionCurve:
    """Friction stress over a sorted positive velocity grid.

    Failed points are kept in the curve but flagged invalid; the linear
    coefficient is fitted only when at least three valid points exist and
    the grid has more than one point.
    """
    v = np.asarray(velocity_grid, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("velocity grid must be a non-empty 1-d array")
    if np.any(v <= 0) or np.any(np.diff(v) <= 0):
        raise ValueError("velocity grid must be positive and strictly increasing")
    stress = np.full(v.size, np.nan)
    valid = np.zeros(v.size, dtype=bool)
    errors = []
    for i, vi in enumerate(v):
        cfg = SlidingConfig(cfg_base.material_a, cfg_base.material_b,
                            cfg_base.d, vi, cfg_base.T1, cfg_base.T2)
        try:
            stress[i] = friction_stress(cfg, catalog, retarded=retarded, quality=quality)
            valid[i] = True
        except ConvergenceFailure as exc:
            errors.append((vi, exc))
    curve = FrictionCurve(v, stress, valid, errors=errors)
    good = np.nonzero(valid)[0]
    if v.size > 1 and good.size >= 3:
        idx = good[:3]
        vv, ss = v[idx], stress[idx]
        curve.linear_coefficient = float(-np.sum(ss * vv) / np.sum(vv * vv))
    if good.size:
        ratio = np.abs(stress[good]) / v[good]
        vv = v[good]
        interior = [
            i for i in range(1, ratio.size - 1)
            if ratio[i] > ratio[i - 1] and ratio[i] > ratio[i + 1]
        ]
        if interior:
            best = max(interior, key=lambda i: ratio[i])
        else:
            best = int(np.argmax(ratio))
        curve.peak_velocity = float(vv[best])
    return curve
