"""Closed-form analytics for two Casimir-coupled driven cantilevers.

The linearized equations of motion are

    m1 x1'' + m1 g1 x1' + m1 w1'^2 x1 = J x2 + F0 cos(wd t)
    m2 x2'' + m2 g2 x2' + m2 w2'^2 x2 = J x1

with J = -dF/dx > 0 for the attractive Casimir force and softened
frequencies wj'^2 = wj^2 - J/mj.  At steady state the coupling force on
cantilever 1 splits into a conservative part proportional to x1 and a
dissipative (friction) part proportional to x1'; driving exactly at w2'
nulls the conservative part, which is how the virtual experiment isolates
the friction force.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModeAmbiguity, SnapIn

MODE_OVERLAP_THRESHOLD = 1.05


@dataclass(frozen=True)
class CantileverParams:
    """Single-mode effective oscillator: mass, frequency, damping.

    k is derived as m * omega0^2 when omitted; a supplied value must agree
    to 1e-12 relative.
    """

    m: float
    omega0: float
    gamma0: float
    k: float = 0.0

    def __post_init__(self):
        if self.m <= 0 or self.omega0 <= 0 or self.gamma0 <= 0:
            raise ValueError("m, omega0, gamma0 must all be > 0")
        k_ref = self.m * self.omega0**2
        if self.k == 0.0:
            object.__setattr__(self, "k", k_ref)
        elif abs(self.k - k_ref) > 1e-12 * k_ref:
            raise ValueError("k must equal m * omega0^2")


@dataclass(frozen=True)
class DriveConfig:
    """Sinusoidal drive F0 cos(omega_d t) on cantilever 1."""

    F0: float
    omega_d: float

    def __post_init__(self):
        if self.F0 < 0:
            raise ValueError("F0 must be >= 0")
        if self.omega_d <= 0:
            raise ValueError("omega_d must be > 0")


@dataclass(frozen=True)
class CoupledSystem:
    """Two cantilevers plus the linearized Casimir coupling."""

    c1: CantileverParams
    c2: CantileverParams
    J: float
    omega1p: float
    omega2p: float
    j_norm: float

    @property
    def gamma1(self) -> float:
        return self.c1.gamma0

    @property
    def gamma2(self) -> float:
        return self.c2.gamma0


def shifted_frequencies(c1: CantileverParams, c2: CantileverParams,
                        dFdx: float) -> CoupledSystem:
    """Couple two cantilevers through a force gradient dF/dx (N/m).

    dFdx < 0 for attraction; J = -dFdx.  Raises SnapIn when the gradient
    exceeds either stiffness (1 + dFdx/k <= 0).
    """
    for c in (c1, c2):
        if 1.0 + dFdx / c.k <= 0.0:
            raise SnapIn(
                f"force gradient {dFdx:.3e} N/m exceeds stiffness {c.k:.3e} N/m"
            )
    J = -dFdx
    w1p = c1.omega0 * math.sqrt(1.0 + dFdx / c1.k)
    w2p = c2.omega0 * math.sqrt(1.0 + dFdx / c2.k)
    return CoupledSystem(c1, c2, J, w1p, w2p, J / math.sqrt(c1.m * c2.m))


def pinned_system(c1: CantileverParams, c2_m: float, c2_gamma: float,
                  omega2p_target: float, J: float) -> CoupledSystem:
    """Coupled system with cantilever 2 feedback-held at a set frequency.

    Models PID operation: whatever the Casimir softening, the loop keeps
    cantilever 2's in-coupling resonance at omega2p_target, so its bare
    frequency is back-computed as sqrt(omega2p^2 + J/m2).
    """
    omega2_bare = math.sqrt(omega2p_target**2 + J / c2_m)
    c2 = CantileverParams(c2_m, omega2_bare, c2_gamma)
    sys = shifted_frequencies(c1, c2, -J)
    return sys


def steady_state(sys: CoupledSystem, drive: DriveConfig) -> tuple[complex, complex]:
    """Complex steady-state amplitudes (X1, X2) for x_j = Re[X_j e^{i wd t}]."""
    wd = drive.omega_d
    f = drive.F0 / sys.c1.m
    d1 = sys.omega1p**2 - wd**2 + 1j * sys.gamma1 * wd
    d2 = sys.omega2p**2 - wd**2 + 1j * sys.gamma2 * wd
    den = d1 * d2 - sys.j_norm**2
    x1 = d2 * f / den
    x2 = math.sqrt(sys.c1.m / sys.c2.m) * sys.j_norm * f / den
    return x1, x2


@dataclass(frozen=True)
class ForceSplit:
    """Instantaneous coupling force and its conservative/dissipative parts.

    phase is the angle between -x1' and the total coupling force at steady
    state, atan2(w2'^2 - wd^2, g2 wd); zero at resonant drive.
    """

    F_couple: float
    F_conservative: float
    F_CF: float
    gamma_CF: float
    phase: float


def force_split(sys: CoupledSystem, drive: DriveConfig,
                x1: float, v1: float) -> ForceSplit:
    """Split the steady-state coupling force J x2 into its two components.

    F_conservative tracks x1, F_CF tracks -x1'; gamma_CF = -F_CF/(m1 v1)
    is the friction damping rate added to cantilever 1.
    """
    wd = drive.omega_d
    det = sys.omega2p**2 - wd**2
    den = det**2 + (sys.gamma2 * wd) ** 2
    j2_over_m2 = sys.J**2 / sys.c2.m
    f_cons = j2_over_m2 * det / den * x1
    f_cf = -j2_over_m2 * sys.gamma2 / den * v1
    gamma_cf = j2_over_m2 * sys.gamma2 / den / sys.c1.m
    phase = math.atan2(det, sys.gamma2 * wd)
    return ForceSplit(f_cons + f_cf, f_cons, f_cf, gamma_cf, phase)


@dataclass(frozen=True)
class FrictionMetrics:
    """Friction observables normalized by the effective interaction area."""

    gamma_CF: float
    area: float
    sigma_CF: float
    Gamma_CF: float


def friction_metrics(F_CF: float, v1: float, m1: float, R: float,
                     d: float) -> FrictionMetrics:
    """Damping rate, area A = (2/3) pi R d, stress F/A and coefficient F/(v A).

    Takes magnitudes; all arguments must be positive.
    """
    if min(F_CF, v1, m1, R, d) <= 0:
        raise ValueError("friction_metrics takes positive magnitudes")
    area = (2.0 / 3.0) * math.pi * R * d
    return FrictionMetrics(
        gamma_CF=F_CF / (m1 * v1),
        area=area,
        sigma_CF=F_CF / area,
        Gamma_CF=F_CF / (v1 * area),
    )


def system_matrix(sys: CoupledSystem) -> np.ndarray:
    """State matrix for (x1, v1, x2, v2)."""
    return np.array([
        [0.0, 1.0, 0.0, 0.0],
        [-sys.omega1p**2, -sys.gamma1, sys.J / sys.c1.m, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [sys.J / sys.c2.m, 0.0, -sys.omega2p**2, -sys.gamma2],
    ])


def effective_damping(sys: CoupledSystem) -> tuple[float, float]:
    """Per-cantilever damping rates -2 Re(lambda) of the coupled modes.

    Modes are assigned by their modal-energy weight on each cantilever.
    When the weight ratio of either mode falls below 1.05 the assignment is
    ambiguous and ModeAmbiguity is raised carrying both orderings.  The sum
    gamma1_eff + gamma2_eff equals gamma1 + gamma2 exactly (trace).
    """
    lam, vec = np.linalg.eig(system_matrix(sys))
    idx = np.nonzero(lam.imag > 0)[0]
    if idx.size != 2:
        # overdamped branch: pair real eigenvalues by magnitude instead
        order = np.argsort(lam.imag)
        idx = order[-2:]
    rates = []
    ratios = []
    on_one = []
    for i in idx:
        v = vec[:, i]
        w1 = sys.c1.m * (abs(v[1]) ** 2 + sys.omega1p**2 * abs(v[0]) ** 2)
        w2 = sys.c2.m * (abs(v[3]) ** 2 + sys.omega2p**2 * abs(v[2]) ** 2)
        rates.append(-2.0 * lam[i].real)
        ratios.append(max(w1, w2) / max(min(w1, w2), 1e-300))
        on_one.append(w1 >= w2)
    assignments = ((rates[0], rates[1]), (rates[1], rates[0]))
    if min(ratios) < MODE_OVERLAP_THRESHOLD or on_one[0] == on_one[1]:
        raise ModeAmbiguity(
            f"mode overlap ratios {ratios[0]:.3f}, {ratios[1]:.3f} below "
            f"{MODE_OVERLAP_THRESHOLD} (or both modes prefer one cantilever)",
            assignments,
        )
    if on_one[0]:
        return assignments[0]
    return assignments[1]
