import numpy as np
import pytest
from hypothesis import assume, given, settings

from dopedom.analytics import StandardOMParams, standard_om_correction, standard_om_spectrum
from dopedom.model import Direct, ModelParams, linearize, quadrature_transform
from dopedom.presets import PRESETS
from dopedom.spectral import (FrequencyGrid, SusceptibilityKernel, effective_damping, kernel,
                              spectrum, write_spectrum_csv)
from dopedom.stability import check_stability, solve_lyapunov
from dopedom.workflows import at_axis

from conftest import FIG2A, direct_params, hand_drift


def resolvent_spectrum(p, w):
    """Position spectrum straight from the linear equations of motion.

    q(w) = sum_j R_qj(w) n_j(w) with R = (-i w - M)^-1 in the mode basis
    (c, c^dag, a, a^dag, q, p) and <n_j(w) n_k(w')> = 2 pi delta(w + w') N_jk.
    """
    T = quadrature_transform()
    M = np.linalg.inv(T) @ hand_drift(p, p.coupling.g, p.coupling.G) @ T
    N = np.zeros((6, 6))
    N[0, 1] = 2 * p.gamma
    N[2, 3] = 2 * p.kappa
    N[5, 5] = p.gamma_m * (1 + 2 * p.n_m)
    out = []
    for x in np.atleast_1d(w):
        Rp = np.linalg.inv(-1j * x * np.eye(6) - M)
        Rm = np.linalg.inv(1j * x * np.eye(6) - M)
        out.append((Rp[4] @ N @ Rm[4]).real)
    return np.array(out)


def bare_kernel(**kw):
    base = dict(gamma=0.01, delta_a=1.0, kappa=10.0, delta_c=1.0, gamma_m=1e-5, omega_m=1.0,
                g=0.01, G=0.01)
    base.update(kw)
    return SusceptibilityKernel(**base)


def test_theta_at_zero_frequency():
    k = bare_kernel(G=1.0, delta_a=2.0, gamma=1.0)
    assert complex(k.theta(0.0)) == pytest.approx(-0.8, abs=1e-15)


def test_theta_vanishes_for_resonant_dopant():
    w = np.linspace(-30, 30, 401)
    assert np.all(bare_kernel(delta_a=0.0, g=3.0).theta(w) == 0)


def test_zero_G_leaves_bare_mechanics():
    k = bare_kernel(G=0.0, g=2.0)
    w = np.linspace(-5, 5, 301)
    for name in ("theta", "xi", "lam", "upsilon"):
        assert np.all(getattr(k, name)(w) == 0)
    np.testing.assert_array_equal(k.chi_eff_inv(w), k.chi_m_inv(w))


def test_inverse_susceptibility_is_assembled(rng):
    k = bare_kernel(g=0.8, delta_a=0.3, delta_c=0.3, kappa=0.1)
    w = rng.uniform(-5, 5, 100)
    np.testing.assert_allclose(k.chi_eff_inv(w), k.chi_m_inv(w) + k.theta(w) + k.xi(w),
                               rtol=0, atol=0)


def test_substitution_reproduces_radiation_pressure_term(rng):
    w = rng.uniform(-20, 20, 1000)
    k = bare_kernel(G=0.03, gamma=0.7, delta_a=1.3)
    std = standard_om_correction(w, G_om=0.03, kappa=0.7, delta_c=1.3)
    assert np.max(np.abs(k.theta(w) - std)) < 1e-12


def test_reduction_to_standard_optomechanics():
    std = StandardOMParams(kappa=2.0, delta_c=0.8, gamma_m=1e-4, G_om=0.05, n_m=40.0)
    # dopant plays the bare cavity: g -> 0, gamma -> kappa, delta_a -> delta_c
    k = SusceptibilityKernel(gamma=std.kappa, delta_a=std.delta_c, kappa=5.0, delta_c=-3.0,
                             gamma_m=std.gamma_m, omega_m=1.0, g=0.0, G=std.G_om)
    w = np.linspace(-10, 10, 2001)
    ref = standard_om_spectrum(std, w)
    np.testing.assert_allclose(k.position_spectrum(w, std.n_m), ref, rtol=1e-10)


@pytest.mark.parametrize("name,value", [("fig2a", 1.0), ("fig2b", 0.0), ("fig3a", -8.0),
                                        ("fig3b", -15.0), ("fig4a", 7.0), ("fig4b", 0.2)])
def test_spectrum_matches_resolvent(name, value):
    pr = PRESETS[name]
    p = at_axis(pr.params, pr.axis, value)
    k = kernel(p)
    w = np.concatenate([np.linspace(-3 * abs(value) - 3, 3 * abs(value) + 3, 97), [1.0, -1.0]])
    got = k.position_spectrum(w, p.n_m)
    np.testing.assert_allclose(got, resolvent_spectrum(p, w), rtol=1e-8)


def test_bare_thermal_lorentzian():
    p = FIG2A.replace(G=0.0)
    res = spectrum(kernel(p), p.n_m)
    assert res.n_f_spectral == pytest.approx(1000.0, rel=1e-6)
    assert res.rel_error < 1e-6


def test_fig2a_routes_agree():
    res = spectrum(kernel(FIG2A), FIG2A.n_m)
    lyap = solve_lyapunov(linearize(FIG2A)).n_f_q
    assert abs(res.n_f_spectral - lyap) / max(lyap, 0.01) < 0.01
    # frozen from the Lyapunov route
    assert lyap == pytest.approx(1.49900046669, rel=1e-9)
    assert res.n_f_spectral == pytest.approx(lyap, rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(direct_params())
def test_routes_agree_on_random_stable_points(p):
    L = linearize(p)
    v = check_stability(L)
    assume(v.stable and v.spectral_abscissa < -1e-6)
    lyap = solve_lyapunov(L, v).n_f_q
    res = spectrum(kernel(p), p.n_m)
    assert abs(res.n_f_spectral - lyap) / max(lyap, 0.01) < 0.01
    assert np.all(res.S_q >= 0)
    assert np.all(np.isfinite(kernel(p).chi_eff(res.omega)))


def test_damping_without_coupling():
    assert effective_damping(bare_kernel(G=0.0, g=1.0)) == 1e-5


def test_damping_red_sideband_dopant():
    # weak-coupling estimate G^2 / (gamma (1 + C)) with C = g^2 / (kappa gamma)
    C = 0.01**2 / (10 * 0.01)
    prediction = 0.01**2 / (0.01 * (1 + C))
    gamma_eff = effective_damping(kernel(FIG2A))
    assert abs((gamma_eff - FIG2A.gamma_m) - prediction) < 0.1 * prediction
    assert gamma_eff == pytest.approx(0.00999975883049, rel=1e-9)


def test_damping_reduces_to_radiation_pressure_formula():
    std = StandardOMParams(kappa=10.0, delta_c=5.0, gamma_m=1e-5, G_om=0.01)
    k = SusceptibilityKernel(gamma=10.0, delta_a=5.0, kappa=1.0, delta_c=0.0, gamma_m=1e-5,
                             omega_m=1.0, g=0.0, G=0.01)
    z = (10.0 - 1j)**2 + 25.0
    assert effective_damping(k) == pytest.approx(1e-5 + (2 * 1e-4 * 5.0 / z).imag, rel=1e-12)


def test_interference_damping_sign():
    base = PRESETS["fig4b"].params
    cooling = effective_damping(kernel(base.replace(delta_a=0.2, delta_c=0.2)))
    heating = effective_damping(kernel(base.replace(delta_a=-0.2, delta_c=-0.2)))
    assert cooling / base.gamma_m > 1
    assert heating < 0


def test_spectrum_csv(tmp_path):
    res = spectrum(kernel(FIG2A), FIG2A.n_m, grid=FrequencyGrid(np.array([1.0, -1.0, 0.0])))
    path = tmp_path / "s.csv"
    write_spectrum_csv(path, res)
    lines = path.read_text().splitlines()
    assert lines[0] == "omega,S_q"
    assert [float(l.split(",")[0]) for l in lines[1:]] == [-1.0, 0.0, 1.0]
    assert float(lines[3].split(",")[1]) == pytest.approx(
        float(kernel(FIG2A).position_spectrum(1.0, 1000.0)), rel=1e-11)


def test_pole_structure():
    k = kernel(FIG2A)
    pole = k.mechanical_pole()
    assert abs(k.chi_eff_inv(pole)) < 1e-10
    assert pole.imag < 0
