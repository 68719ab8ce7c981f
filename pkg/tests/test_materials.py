import json
import math

import numpy as np
import pytest

from casifric import materials as mat
from casifric.errors import NoSurfaceMode


@pytest.fixture(scope="module")
def catalog():
    return mat.builtin_catalog()


def test_builtin_parameters(catalog):
    sic = catalog.get("SiC")
    assert sic.form == mat.PHONON_PAIR
    assert (sic.eps_inf, sic.omega_T, sic.strength, sic.gamma) == (6.7, 1.5e14, 1.8e14, 8.9e11)
    bst = catalog.get("BST")
    assert (bst.eps_inf, bst.omega_T, bst.strength, bst.gamma) == (2.9, 5.7e9, 1.3e10, 2.8e8)
    meta = catalog.get("Metamaterial")
    assert meta.form == mat.SINGLE_OSCILLATOR
    assert meta.omega_T == pytest.approx(2 * math.pi * 5000.0)
    assert meta.strength == 5e9
    assert meta.gamma == pytest.approx(2 * math.pi * 100.0)
    gold = catalog.get("Gold")
    assert gold.form == mat.DRUDE
    assert (gold.strength, gold.gamma) == (1.37e16, 5.3e13)


def test_model_validation():
    with pytest.raises(ValueError):
        mat.LorentzModel(mat.PHONON_PAIR, 0.5, 1e14, 2e14, 1e11)  # eps_inf < 1
    with pytest.raises(ValueError):
        mat.LorentzModel(mat.PHONON_PAIR, 2.0, 1e14, 2e14, 0.0)  # gamma
    with pytest.raises(ValueError):
        mat.LorentzModel(mat.PHONON_PAIR, 2.0, 2e14, 1e14, 1e11)  # omega_L < omega_T
    with pytest.raises(ValueError):
        mat.LorentzModel(mat.DRUDE, 1.0, 1e14, 1e16, 1e13)  # drude needs omega_T = 0
    with pytest.raises(ValueError):
        mat.LorentzModel("bogus", 1.0, 1e14, 2e14, 1e11)
    mat.LorentzModel(mat.DRUDE, 1.0, 0.0, 1e16, 1e13)


def test_epsilon_high_frequency_limit(catalog):
    # eps -> eps_inf far above every resonance
    sic = catalog.get("SiC")
    assert mat.epsilon_real_axis(sic, 1e19).real == pytest.approx(6.7, rel=1e-8)
    assert mat.epsilon_imag_axis(sic, 1e19) == pytest.approx(6.7, rel=1e-8)


def test_epsilon_static_values(catalog):
    # static limit of the phonon form is eps_inf (omega_L/omega_T)^2
    sic = catalog.get("SiC")
    expect = 6.7 * (1.8e14 / 1.5e14) ** 2
    assert expect == pytest.approx(9.648)
    assert mat.epsilon_real_axis(sic, 0.0) == pytest.approx(expect, rel=1e-12)
    assert mat.epsilon_imag_axis(sic, 0.0) == pytest.approx(expect, rel=1e-12)

    # single-oscillator static limit is eps_inf (1 + B / omega_T^2)
    meta = catalog.get("Metamaterial")
    expect = meta.eps_inf * (1.0 + meta.strength / meta.omega_T**2)
    assert mat.epsilon_real_axis(meta, 0.0).real == pytest.approx(expect, rel=1e-12)
    unit = mat.LorentzModel(mat.SINGLE_OSCILLATOR, 1.0, meta.omega_T, meta.strength, meta.gamma)
    assert mat.epsilon_real_axis(unit, 0.0).real == pytest.approx(6.0661, rel=1e-4)


def test_imag_axis_monotone_and_bounded(catalog):
    for name in catalog.names():
        model = catalog.get(name)
        lo = model.gamma * 1e-3 if model.form == mat.DRUDE else model.omega_T * 1e-3
        xi = np.geomspace(lo, max(model.strength, model.omega_T, model.gamma) * 1e3, 100)
        eps = mat.epsilon_imag_axis(model, xi)
        assert np.all(eps >= model.eps_inf - 1e-12)
        assert np.all(np.diff(eps) < 0.0), name


def test_kramers_kronig_positivity(catalog):
    for name in catalog.names():
        model = catalog.get(name)
        scale = max(model.omega_T, model.strength if model.form != mat.SINGLE_OSCILLATOR
                    else math.sqrt(model.strength), model.gamma)
        w = np.geomspace(scale * 1e-4, scale * 1e3, 200)
        eps = mat.epsilon_real_axis(model, w)
        assert np.all(eps.imag >= 0.0), name


def test_reflection_nearfield_limits(catalog):
    # vacuum-like material reflects nothing
    weak = mat.LorentzModel(mat.SINGLE_OSCILLATOR, 1.0, 1e5, 1e-6, 1.0)
    assert abs(mat.reflection_p_nearfield(weak, 2e5)) < 1e-12
    # perfect-conductor limit
    assert mat.reflection_p_nearfield(mat.ideal_metal(), 1e10) == 1.0
    big = mat.LorentzModel(mat.PHONON_PAIR, 1.0, 1.0, 1e9, 1e-3)
    assert abs(mat.reflection_p_nearfield(big, 0.0) - 1.0) < 1e-12


def test_reflection_peaks_at_surface_resonance(catalog):
    sic = catalog.get("SiC")
    ws = mat.surface_resonance(sic)
    w = np.linspace(ws - 5 * sic.gamma, ws + 5 * sic.gamma, 4001)
    r = np.abs(mat.reflection_p_nearfield(sic, w))
    w_peak = w[np.argmax(r)]
    assert abs(w_peak - ws) < 1.0 * sic.gamma
    assert np.max(r) >= abs(mat.reflection_p_nearfield(sic, ws)) - 1e-9


def test_reflection_retarded_normal_incidence(catalog):
    from scipy.constants import c

    sic = catalog.get("SiC")
    w = 1.0e14
    eps = mat.epsilon_real_axis(sic, w)
    expect = (np.sqrt(eps) - 1.0) / (np.sqrt(eps) + 1.0)
    for pol in ("p", "s"):
        got = mat.reflection_retarded(sic, w, 0.0, pol)
        assert got == pytest.approx(expect, rel=1e-12), pol
    del c


def test_reflection_retarded_nearfield_limit(catalog):
    from scipy.constants import c

    for name in ("SiC", "BST", "Metamaterial"):
        model = catalog.get(name)
        w = model.omega_T * 1.3
        q = 1e3 * w / c
        rp = mat.reflection_retarded(model, w, q, "p")
        rnf = mat.reflection_p_nearfield(model, w)
        assert abs(rp - rnf) / abs(rnf) < 1e-3, name
        assert abs(mat.reflection_retarded(model, w, q, "s")) < 1e-3


def test_reflection_passivity_propagating():
    from scipy.constants import c

    # lossy dielectric, propagating sector: |R| < 1
    model = mat.LorentzModel(mat.PHONON_PAIR, 2.0, 1e14, 1.5e14, 5e12)
    w = 3e14  # above the absorption band, eps real > 1
    eps = mat.epsilon_real_axis(model, w)
    assert eps.real > 1.0
    for q in np.linspace(0.0, 0.99 * w / c * math.sqrt(eps.real), 25):
        for pol in ("p", "s"):
            assert abs(mat.reflection_retarded(model, w, q, pol)) < 1.0


def test_surface_resonance_paper_values(catalog):
    targets = {
        "SiC": 1.76e14,
        "BST": 2 * math.pi * 1.84e9,
        "Metamaterial": 2 * math.pi * 1.18e4,
    }
    for name, target in targets.items():
        ws = mat.surface_resonance(catalog.get(name))
        assert ws == pytest.approx(target, rel=0.02), name
    # cross-check 2 pi x 2.80e13 Hz for SiC
    assert mat.surface_resonance(catalog.get("SiC")) == pytest.approx(
        2 * math.pi * 2.80e13, rel=0.01
    )


def test_surface_resonance_root_quality(catalog):
    for name in ("SiC", "BST", "Metamaterial"):
        model = catalog.get(name)
        ws = mat.surface_resonance(model)
        assert mat.epsilon_real_axis(model, ws).real == pytest.approx(-1.0, abs=1e-6)


def test_no_surface_mode():
    weak = mat.LorentzModel(mat.SINGLE_OSCILLATOR, 1.0, 1e5, 1e4, 10.0)
    with pytest.raises(NoSurfaceMode):
        mat.surface_resonance(weak)
    with pytest.raises(NoSurfaceMode):
        mat.critical_velocity(weak, 100e-9)
    with pytest.raises(NoSurfaceMode):
        mat.surface_resonance(mat.ideal_metal())


def test_critical_velocity_paper_values(catalog):
    targets = {"SiC": 1.31e7, "BST": 840.0, "Metamaterial": 5.2e-3}
    for name, target in targets.items():
        v0 = mat.critical_velocity(catalog.get(name), 100e-9)
        assert v0 == pytest.approx(target, rel=0.05), name


def test_critical_velocity_linear_in_d(catalog):
    for name in ("SiC", "BST", "Metamaterial"):
        model = catalog.get(name)
        v1 = mat.critical_velocity(model, 100e-9)
        v2 = mat.critical_velocity(model, 200e-9)
        assert v2 == pytest.approx(2.0 * v1, rel=1e-14), name


def test_catalog_lookup_and_errors(catalog):
    assert catalog.get("sic") is catalog.get("SiC")
    with pytest.raises(KeyError, match="Metamaterial"):
        catalog.get("unobtainium")
    with pytest.raises(ValueError):
        mat.MaterialCatalog({"A": mat.ideal_metal(), "a": mat.ideal_metal()})


def test_catalog_file_roundtrip(tmp_path, catalog):
    toml_path = tmp_path / "mats.toml"
    toml_path.write_text(catalog.dump_toml())
    loaded = mat.MaterialCatalog.from_file(toml_path)
    assert set(loaded.names()) == set(catalog.names())
    for name in catalog.names():
        assert loaded.get(name) == catalog.get(name)

    json_path = tmp_path / "mats.json"
    json_path.write_text(json.dumps({
        "material": {
            "Custom": {"form": "single_oscillator", "eps_inf": 2.0,
                       "omega_T": 1e5, "B": 1e9, "gamma": 100.0}
        }
    }))
    loaded = mat.MaterialCatalog.from_file(json_path)
    assert loaded.get("Custom").strength == 1e9
