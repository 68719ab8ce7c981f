"""Dielectric models, reflection coefficients and surface-wave resonances.

All quantities are SI: angular frequencies in rad/s, lengths in m.  Three
model forms cover the built-in materials:

* ``phonon_pair``     eps(w) = eps_inf (1 + (wL^2 - wT^2)/(wT^2 - w^2 - i g w))
* ``single_oscillator`` eps(w) = eps_inf (1 + B/(wT^2 - w^2 - i g w))
* ``drude``           eps(w) = eps_inf - wp^2/(w^2 + i g w)

plus an ``ideal`` perfect-reflector form used by oracle tests and available
in catalog files.  Every function here is pure; concurrent use needs no
synchronization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.constants import c as C_LIGHT

from .errors import NoSurfaceMode

try:
    import tomllib
except ImportError:  # python < 3.11
    import tomli as tomllib

PHONON_PAIR = "phonon_pair"
SINGLE_OSCILLATOR = "single_oscillator"
DRUDE = "drude"
IDEAL = "ideal"

FORM_CODES = {PHONON_PAIR: 0, SINGLE_OSCILLATOR: 1, DRUDE: 2, IDEAL: 3}

# TOML/JSON key used for the strength parameter of each form.
_STRENGTH_KEY = {PHONON_PAIR: "omega_L", SINGLE_OSCILLATOR: "B", DRUDE: "omega_p", IDEAL: "B"}


@dataclass(frozen=True)
class LorentzModel:
    """Damped-oscillator dielectric model for one material.

    ``strength`` is omega_L (rad/s) for ``phonon_pair``, the oscillator
    strength B (s^-2) for ``single_oscillator`` and the plasma frequency
    omega_p (rad/s) for ``drude``.
    """

    form: str
    eps_inf: float
    omega_T: float
    strength: float
    gamma: float

    def __post_init__(self):
        if self.form not in FORM_CODES:
            raise ValueError(f"unknown model form {self.form!r}")
        if self.form == IDEAL:
            return
        if self.eps_inf < 1.0:
            raise ValueError("eps_inf must be >= 1")
        if self.gamma <= 0.0:
            raise ValueError("gamma must be > 0")
        if self.form == DRUDE:
            if self.omega_T != 0.0:
                raise ValueError("drude form requires omega_T = 0")
            if self.strength <= 0.0:
                raise ValueError("drude form requires omega_p > 0")
        else:
            if self.omega_T <= 0.0:
                raise ValueError("omega_T must be > 0")
            if self.form == PHONON_PAIR and self.strength <= self.omega_T:
                raise ValueError("phonon_pair form requires omega_L > omega_T")
            if self.form == SINGLE_OSCILLATOR and self.strength <= 0.0:
                raise ValueError("single_oscillator form requires B > 0")

    def as_params(self) -> np.ndarray:
        """Pack the model into the flat float64 layout the kernels consume."""
        return np.array(
            [FORM_CODES[self.form], self.eps_inf, self.omega_T, self.strength, self.gamma],
            dtype=np.float64,
        )


def ideal_metal() -> LorentzModel:
    """Perfect reflector: r_TM = r_TE = 1 at all frequencies."""
    return LorentzModel(IDEAL, 1.0, 0.0, 0.0, 1.0)


def epsilon_real_axis(model: LorentzModel, omega):
    """Complex permittivity eps(omega) on the real frequency axis, omega >= 0."""
    w = np.asarray(omega, dtype=np.float64)
    if np.any(w < 0):
        raise ValueError("omega must be >= 0; negative frequencies follow eps(-w) = conj(eps(w))")
    if model.form == PHONON_PAIR:
        den = model.omega_T**2 - w**2 - 1j * model.gamma * w
        eps = model.eps_inf * (1.0 + (model.strength**2 - model.omega_T**2) / den)
    elif model.form == SINGLE_OSCILLATOR:
        den = model.omega_T**2 - w**2 - 1j * model.gamma * w
        eps = model.eps_inf * (1.0 + model.strength / den)
    elif model.form == DRUDE:
        with np.errstate(divide="ignore", invalid="ignore"):
            eps = model.eps_inf - model.strength**2 / (w**2 + 1j * model.gamma * w)
        # w = 0: Re eps finite, Im eps diverges
        eps = np.where(w == 0.0, complex(model.eps_inf - (model.strength / model.gamma) ** 2, np.inf), eps)
    else:  # IDEAL
        eps = np.full_like(w, np.inf, dtype=np.complex128)
    if np.isscalar(omega) or np.ndim(omega) == 0:
        return complex(eps)
    return eps


def epsilon_imag_axis(model: LorentzModel, xi):
    """Real permittivity eps(i xi) on the imaginary axis, xi >= 0.

    Real, >= eps_inf, and monotone decreasing for xi > 0.
    """
    x = np.asarray(xi, dtype=np.float64)
    if np.any(x < 0):
        raise ValueError("xi must be >= 0")
    if model.form == PHONON_PAIR:
        eps = model.eps_inf * (
            1.0 + (model.strength**2 - model.omega_T**2) / (model.omega_T**2 + x**2 + model.gamma * x)
        )
    elif model.form == SINGLE_OSCILLATOR:
        eps = model.eps_inf * (1.0 + model.strength / (model.omega_T**2 + x**2 + model.gamma * x))
    elif model.form == DRUDE:
        with np.errstate(divide="ignore"):
            eps = model.eps_inf + model.strength**2 / (x**2 + model.gamma * x)
    else:  # IDEAL
        eps = np.full_like(x, np.inf)
    if np.isscalar(xi) or np.ndim(xi) == 0:
        return float(eps)
    return eps


def reflection_p_nearfield(model: LorentzModel, omega):
    """Near-field p-polarized reflection amplitude (eps - 1)/(eps + 1)."""
    if model.form == IDEAL:
        w = np.asarray(omega, dtype=np.float64)
        out = np.ones_like(w, dtype=np.complex128)
        return complex(1.0) if np.ndim(omega) == 0 else out
    eps = epsilon_real_axis(model, omega)
    return (eps - 1.0) / (eps + 1.0)


def reflection_retarded(model: LorentzModel, omega, q, polarization: str = "p"):
    """Retarded Fresnel amplitude at real frequency omega and wavevector q.

    Uses p = sqrt(w^2/c^2 - q^2) and s = sqrt(eps w^2/c^2 - q^2) with the
    square-root branch forced to Im >= 0 so evanescent fields decay.  At
    normal incidence both polarizations reduce to (sqrt(eps)-1)/(sqrt(eps)+1);
    for q >> w/c the p amplitude approaches (eps-1)/(eps+1) and the s
    amplitude vanishes.
    """
    if polarization not in ("p", "s"):
        raise ValueError("polarization must be 'p' or 's'")
    if model.form == IDEAL:
        val = 1.0 if polarization == "p" else -1.0
        return val if np.ndim(omega) == 0 and np.ndim(q) == 0 else np.full(np.broadcast(omega, q).shape, val + 0j)
    w = np.asarray(omega, dtype=np.float64)
    qq = np.asarray(q, dtype=np.float64)
    if np.any(w < 0) or np.any(qq < 0):
        raise ValueError("omega and q must be >= 0")
    eps = epsilon_real_axis(model, w)
    k2 = (w / C_LIGHT) ** 2
    p = np.sqrt(k2 - qq**2 + 0j)
    p = np.where(p.imag < 0, -p, p)
    s = np.sqrt(eps * k2 - qq**2 + 0j)
    s = np.where(s.imag < 0, -s, s)
    if polarization == "p":
        r = (eps * p - s) / (eps * p + s)
    else:
        r = (s - p) / (s + p)
    if np.ndim(omega) == 0 and np.ndim(q) == 0:
        return complex(r)
    return r


def surface_resonance(model: LorentzModel) -> float:
    """Frequency omega_s where Re eps(omega_s) = -1, in rad/s.

    Takes the upper crossing, where Re eps climbs back through -1 toward
    eps_inf above the absorption band; that branch hosts the surface mode.
    Bracketing by log prescan, then bisection to relative width 1e-12.
    """
    if model.form == PHONON_PAIR:
        lo, hi = model.omega_T * (1.0 + 1e-12), 10.0 * model.strength
    elif model.form == SINGLE_OSCILLATOR:
        lo = model.omega_T * (1.0 + 1e-12)
        hi = 10.0 * np.sqrt(model.omega_T**2 + model.strength)
    elif model.form == DRUDE:
        lo, hi = model.strength * 1e-6, 10.0 * model.strength
    else:
        raise NoSurfaceMode("ideal reflector has no Re eps = -1 crossing")

    def g(w):
        return np.real(epsilon_real_axis(model, w)) + 1.0

    grid = np.geomspace(lo, hi, 2000)
    vals = g(grid)
    sign_change = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if len(sign_change) == 0:
        raise NoSurfaceMode(f"Re eps never crosses -1 on [{lo:.3e}, {hi:.3e}] rad/s")
    i = sign_change[-1]
    a, b = grid[i], grid[i + 1]
    fa = g(a)
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = g(m)
        if fa * fm <= 0:
            b = m
        else:
            a, fa = m, fm
        if (b - a) <= 1e-12 * m:
            break
    return 0.5 * (a + b)


def critical_velocity(model: LorentzModel, d: float) -> float:
    """Resonant photon-tunneling velocity 2 omega_s d / ln|R_p(omega_s)| in m/s."""
    if d <= 0:
        raise ValueError("separation d must be > 0")
    ws = surface_resonance(model)
    ln_r = np.log(abs(reflection_p_nearfield(model, ws)))
    if ln_r <= 0:
        raise NoSurfaceMode("|R_p| <= 1 at the surface resonance; no tunneling enhancement")
    return 2.0 * ws * d / ln_r


def builtin_catalog() -> "MaterialCatalog":
    """Built-in materials used throughout: SiC, BST, Metamaterial, Gold."""
    return MaterialCatalog(
        {
            "SiC": LorentzModel(PHONON_PAIR, 6.7, 1.5e14, 1.8e14, 8.9e11),
            "BST": LorentzModel(PHONON_PAIR, 2.9, 5.7e9, 1.3e10, 2.8e8),
            # eps_inf = 10 reproduces the quoted surface resonance (2pi x 11.8 kHz)
            # and tunneling velocity (5.2e-3 m/s at 100 nm) of the kHz material
            "Metamaterial": LorentzModel(
                SINGLE_OSCILLATOR, 10.0, 2 * np.pi * 5000.0, 5e9, 2 * np.pi * 100.0
            ),
            "Gold": LorentzModel(DRUDE, 1.0, 0.0, 1.37e16, 5.3e13),
        }
    )


class MaterialCatalog:
    """Named map of dielectric models, loadable from TOML or JSON."""

    def __init__(self, models: dict[str, LorentzModel]):
        if len({n.lower() for n in models}) != len(models):
            raise ValueError("material names must be unique (case-insensitive)")
        self.models = dict(models)

    def names(self):
        return list(self.models)

    def get(self, name: str) -> LorentzModel:
        if name in self.models:
            return self.models[name]
        for key, model in self.models.items():
            if key.lower() == name.lower():
                return model
        raise KeyError(f"unknown material {name!r}; available: {', '.join(self.models)}")

    @classmethod
    def from_file(cls, path) -> "MaterialCatalog":
        path = Path(path)
        if path.suffix.lower() == ".json":
            data = json.loads(path.read_text())
        else:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        table = data.get("material", data)
        models = {}
        for name, entry in table.items():
            form = entry["form"]
            if form not in FORM_CODES:
                raise ValueError(f"material {name!r}: unknown form {form!r}")
            strength = 0.0
            for key in ("omega_L", "B", "omega_p", "strength"):
                if key in entry:
                    strength = float(entry[key])
                    break
            models[name] = LorentzModel(
                form=form,
                eps_inf=float(entry.get("eps_inf", 1.0)),
                omega_T=float(entry.get("omega_T", 0.0)),
                strength=strength,
                gamma=float(entry.get("gamma", 1.0)),
            )
        return cls(models)

    def dump_toml(self) -> str:
        """Serialize as TOML matching the from_file schema.  Units are SI:
        omega_T, omega_L, omega_p, gamma in rad/s; B in s^-2."""
        lines = ["# casifric material catalog; angular frequencies in rad/s, B in s^-2"]
        for name, m in self.models.items():
            lines.append(f'\n[material."{name}"]' if " " in name else f"\n[material.{name}]")
            lines.append(f'form = "{m.form}"')
            lines.append(f"eps_inf = {m.eps_inf!r}")
            lines.append(f"omega_T = {m.omega_T!r}")
            lines.append(f"{_STRENGTH_KEY[m.form]} = {m.strength!r}")
            lines.append(f"gamma = {m.gamma!r}")
        return "\n".join(lines) + "\n"
