import math

import numpy as np
import pytest
from scipy.constants import c, hbar, k as kB, pi

from casifric import lifshitz as lf
from casifric import materials as mat
from casifric.errors import ConvergenceFailure

# golden values from the trapezoid oracle below (10^4 points, frozen)
GOLD_E_154NM = -7.162937e-08  # J/m^2 at 154 nm, 300 K
GOLD_GRADIENT_RATIO = 4.710   # J(99 nm) / J(154 nm)


@pytest.fixture(scope="module")
def catalog():
    models = dict(mat.builtin_catalog().models)
    models["Ideal"] = mat.ideal_metal()
    return mat.MaterialCatalog(models)


def trapezoid_oracle(x, T, model, nk=10000, lmax=3000):
    """Independent fixed-grid evaluation of E(x, T) and dE/dx.

    Deliberately built from the public dielectric function and plain
    trapezoid sums so it shares no code with the adaptive kernel.
    """
    totE, totG = 0.0, 0.0
    for l in range(lmax):
        xi = 2 * pi * kB * T * l / hbar
        u0 = 2 * x * xi / c
        if u0 > 65:
            break
        u = np.linspace(u0, u0 + 60.0, nk)
        q = u / (2 * x)
        if l == 0:
            if model.form in (mat.DRUDE, mat.IDEAL):
                rtm = np.ones_like(u)
            else:
                e0 = mat.epsilon_imag_axis(model, 0.0)
                rtm = np.full_like(u, (e0 - 1.0) / (e0 + 1.0))
            rte = np.ones_like(u) if model.form == mat.IDEAL else np.zeros_like(u)
        else:
            eps = mat.epsilon_imag_axis(model, xi)
            kj = np.sqrt(q**2 + (eps - 1.0) * (xi / c) ** 2)
            rtm = (eps * q - kj) / (eps * q + kj)
            rte = (kj - q) / (kj + q)
        w = np.exp(-u)
        with np.errstate(divide="ignore", invalid="ignore"):
            fE = u * (np.log1p(-(rtm**2) * w) + np.log1p(-(rte**2) * w))
            fG = u * u * (rtm**2 * w / (1 - rtm**2 * w) + rte**2 * w / (1 - rte**2 * w))
        fE = np.nan_to_num(fE, nan=0.0, neginf=0.0)
        fG = np.nan_to_num(fG, nan=0.0, posinf=0.0)
        wt = 0.5 if l == 0 else 1.0
        totE += wt * np.trapezoid(fE, u)
        totG += wt * np.trapezoid(fG, u)
    pref = kB * T / (2 * pi)
    return pref * totE / (4 * x * x), pref * totG / (4 * x**3)


def test_ideal_metal_zero_temperature(catalog):
    for x in (50e-9, 100e-9, 200e-9):
        cfg = lf.PlatePairConfig("Ideal", "Ideal", x, 0.0)
        E = lf.casimir_pressure_energy(cfg, catalog)
        P = lf.plate_pressure(cfg, catalog)
        assert E == pytest.approx(-pi**2 * hbar * c / (720 * x**3), rel=1e-3)
        assert P == pytest.approx(-pi**2 * hbar * c / (240 * x**4), rel=1e-3)
    # the quoted -13.0 Pa at 100 nm
    cfg = lf.PlatePairConfig("Ideal", "Ideal", 100e-9, 0.0)
    assert lf.plate_pressure(cfg, catalog) == pytest.approx(-13.0013, rel=1e-3)


def test_energy_monotone_decay_with_separation():
    vals = [
        lf.casimir_pressure_energy(lf.PlatePairConfig("Gold", "Gold", x, 300.0))
        for x in (100e-9, 200e-9, 400e-9)
    ]
    assert all(v < 0 for v in vals)
    assert abs(vals[0]) > abs(vals[1]) > abs(vals[2])


def test_energy_negative_for_identical_materials():
    for name in ("Gold", "SiC", "BST"):
        cfg = lf.PlatePairConfig(name, name, 150e-9, 300.0)
        assert lf.casimir_pressure_energy(cfg) < 0.0, name


def test_matsubara_zero_term_half_weight():
    """Partial sum l <= 1 must equal 0.5 I0 + I1 from a hand-built route."""
    from casifric._lifshitz_kernels import lifshitz_kernel

    model = mat.builtin_catalog().get("Gold")
    x, T = 154e-9, 300.0

    def hand_term(l, nk=40000):
        xi = 2 * pi * kB * T * l / hbar
        u0 = 2 * x * xi / c
        u = np.linspace(u0, u0 + 60.0, nk)
        q = u / (2 * x)
        if l == 0:
            rtm, rte = np.ones_like(u), np.zeros_like(u)
        else:
            eps = mat.epsilon_imag_axis(model, xi)
            kj = np.sqrt(q**2 + (eps - 1.0) * (xi / c) ** 2)
            rtm = (eps * q - kj) / (eps * q + kj)
            rte = (kj - q) / (kj + q)
        w = np.exp(-u)
        f = u * (np.log1p(-(rtm**2) * w) + np.log1p(-(rte**2) * w))
        return np.trapezoid(f, u)

    pref = kB * T / (2 * pi) / (4 * x * x)
    i0, i1 = hand_term(0), hand_term(1)
    partial = lifshitz_kernel(model.as_params(), model.as_params(), x, T,
                              max_terms=1)[0]
    # solve the l = 0 weight implied by the kernel's partial sum
    weight = (partial / pref - i1) / i0
    assert weight == pytest.approx(0.5, abs=1e-4)


def test_gold_energy_matches_trapezoid_oracle():
    model = mat.builtin_catalog().get("Gold")
    E_oracle, G_oracle = trapezoid_oracle(154e-9, 300.0, model)
    assert E_oracle == pytest.approx(GOLD_E_154NM, rel=1e-4)
    cfg = lf.PlatePairConfig("Gold", "Gold", 154e-9, 300.0)
    E = lf.casimir_pressure_energy(cfg)
    assert E == pytest.approx(E_oracle, rel=5e-3)
    assert E == pytest.approx(GOLD_E_154NM, rel=5e-3)


def test_pfa_force_and_linearity():
    sphere = lf.SphereGeometry(35e-6)
    cfg = lf.PlatePairConfig("Gold", "Gold", 154e-9, 300.0)
    F1 = lf.pfa_force(cfg, sphere)
    F2 = lf.pfa_force(cfg, lf.SphereGeometry(70e-6))
    assert F1 < 0.0
    assert F2 == pytest.approx(2.0 * F1, rel=1e-12)


def test_pfa_warns_outside_validity():
    sphere = lf.SphereGeometry(1e-6)
    cfg = lf.PlatePairConfig("Gold", "Gold", 100e-9, 300.0)
    with pytest.warns(UserWarning, match="proximity-force"):
        lf.pfa_force(cfg, sphere)


def test_force_gradient_matches_finite_difference():
    sphere = lf.SphereGeometry(35e-6)
    for x in np.geomspace(99e-9, 300e-9, 10):
        cfg = lf.PlatePairConfig("Gold", "Gold", x, 300.0)
        grad = lf.force_gradient(cfg, sphere)
        h = x * 1e-4
        fp = lf.pfa_force(lf.PlatePairConfig("Gold", "Gold", x + h, 300.0), sphere)
        fm = lf.pfa_force(lf.PlatePairConfig("Gold", "Gold", x - h, 300.0), sphere)
        assert grad == pytest.approx((fp - fm) / (2 * h), rel=1e-4), x


def test_force_gradient_monotone_magnitude():
    sphere = lf.SphereGeometry(35e-6)
    grads = [
        abs(lf.force_gradient(lf.PlatePairConfig("Gold", "Gold", x, 300.0), sphere))
        for x in np.geomspace(99e-9, 300e-9, 6)
    ]
    assert all(a > b for a, b in zip(grads, grads[1:]))


def test_gradient_ratio_golden():
    model = mat.builtin_catalog().get("Gold")
    _, g99 = trapezoid_oracle(99e-9, 300.0, model)
    _, g154 = trapezoid_oracle(154e-9, 300.0, model)
    assert g99 / g154 == pytest.approx(GOLD_GRADIENT_RATIO, rel=1e-3)
    sphere = lf.SphereGeometry(35e-6)
    j99 = lf.coupling_stiffness(99e-9, sphere)
    j154 = lf.coupling_stiffness(154e-9, sphere)
    assert j99 / j154 == pytest.approx(GOLD_GRADIENT_RATIO, rel=5e-3)
    assert j99 > 0 and j154 > 0


def test_convergence_failure_diagnostics():
    cfg = lf.PlatePairConfig("Gold", "Gold", 50e-9, 1.0)
    with pytest.raises(ConvergenceFailure) as exc_info:
        lf.casimir_pressure_energy(cfg, max_terms=1)
    assert "terms_used" in exc_info.value.diagnostics


def test_config_validation():
    with pytest.raises(ValueError):
        lf.PlatePairConfig("Gold", "Gold", -1e-9, 300.0)
    with pytest.raises(ValueError):
        lf.PlatePairConfig("Gold", "Gold", 1e-7, -1.0)
    with pytest.raises(ValueError):
        lf.SphereGeometry(0.0)


def test_zero_temperature_gold_finite():
    cfg = lf.PlatePairConfig("Gold", "Gold", 100e-9, 0.0)
    E = lf.casimir_pressure_energy(cfg)
    ideal = -pi**2 * hbar * c / (720 * (100e-9) ** 3)
    assert ideal < E < 0.0
    del math
