import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ccatrap.dynamics import (
    alpha_bound,
    alpha_markov,
    alpha_unbound,
    alpha_unbound_bessel,
    alpha_unbound_quad,
    evolve,
    psi_bound,
    psi_unbound_quad,
    unbound_coefficients,
)
from ccatrap.errors import DomainError
from ccatrap.model import ModelParams
from ccatrap.oracle import build_hamiltonian, eigendecompose, propagate_exact
from ccatrap.quadrature import QuadratureSpec
from ccatrap.spectrum import bound_energies, bound_state


@pytest.fixture(scope="module")
def ring_08():
    p = ModelParams.from_eta(0.8)
    return p, eigendecompose(build_hamiltonian(p, 256))


@pytest.mark.parametrize("eta", [0.1, 0.4, 0.8, 1.0, 2.0, 10.0])
def test_initial_sum_rule(eta):
    p = ModelParams.from_eta(eta)
    au = alpha_unbound_quad(p, 0.0)
    assert abs(au.imag) < 1e-14
    assert au.real + alpha_bound(p, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_decoupled_atom_stays_excited():
    p = ModelParams(g=0.0)
    trace, frames = evolve(p, [0.0, 3.0], 4)
    np.testing.assert_array_equal(trace.p_e, [1.0, 1.0])
    assert all(np.all(fr.p_x == 0) for fr in frames)


def test_bound_part_is_cosine():
    p = ModelParams(g=1.0)
    bs = bound_state(p)
    t = np.linspace(0, 5, 11)
    np.testing.assert_allclose(alpha_bound(p, t), 2 * bs.p_b * np.cos(bs.omega * t))


@pytest.mark.parametrize("eta", [0.4, 0.8, 2.0])
@pytest.mark.parametrize("t", [0.0, 0.7, 5.0, 23.3, 50.0])
def test_two_routes_agree(eta, t):
    p = ModelParams.from_eta(eta)
    assert alpha_unbound_bessel(p, t) == pytest.approx(alpha_unbound_quad(p, t).real, abs=1e-9)
    assert abs(alpha_unbound_quad(p, t).imag) < 1e-10


def test_unbound_amplitude_is_real():
    # the continuum part is a sum of cosines with real weights
    p = ModelParams.from_eta(1.3)
    for t in (1.0, 9.0, 31.0):
        assert abs(alpha_unbound_quad(p, t).imag) < 1e-10


def test_coefficients_sum_to_initial_value():
    a = unbound_coefficients(0.8, 400)
    p = ModelParams.from_eta(0.8)
    # J_{2n}(0) = delta_n0
    assert a[0] == pytest.approx(alpha_unbound_quad(p, 0.0).real, abs=1e-12)


def test_coefficients_cached_prefix_stable():
    a1 = unbound_coefficients(0.55, 10)
    a2 = unbound_coefficients(0.55, 300)
    np.testing.assert_allclose(a1, a2[:11], rtol=0, atol=1e-14)


def test_switch_uses_bessel_beyond_threshold():
    p = ModelParams.from_eta(0.8)
    trace, _ = evolve(p, [10.0, 250.0], with_field=False)
    assert [d["route"] for d in trace.diagnostics] == ["quadrature", "bessel"]
    assert alpha_unbound(p, 250.0).real == pytest.approx(alpha_unbound_quad(p, 250.0).real, abs=1e-9)


def test_markov_limit_weak_coupling():
    p = ModelParams.from_eta(0.1)
    t = np.linspace(0, 100, 21)
    trace, _ = evolve(p, t, with_field=False)
    assert np.abs(trace.p_e - np.abs(alpha_markov(p, t)) ** 2).max() < 0.01


def test_rabi_limit_strong_coupling():
    p = ModelParams.from_eta(10.0)
    wp, _ = bound_energies(p)
    t = np.linspace(0, 3, 61)
    trace, _ = evolve(p, t, with_field=False)
    dev = np.abs(trace.p_e - np.cos(wp * t) ** 2)
    # the continuum part adds a transient of about 4 % at Jt < 1
    assert dev[t >= 1].max() < 0.05
    assert dev.max() < 0.08


def test_matches_finite_ring(ring_08):
    p, eig = ring_08
    t = np.array([0.0, 3.1, 17.0, 40.0])
    a_N, psi_N = propagate_exact(eig, t)
    trace, frames = evolve(p, t, 30, QuadratureSpec(tol=1e-11))
    np.testing.assert_allclose(trace.alpha, a_N, atol=1e-9)
    sites = np.arange(-30, 31) + 128
    for fr, row in zip(frames, psi_N):
        np.testing.assert_allclose(fr.psi, row[sites], atol=1e-9)


@given(st.floats(0.1, 3.0), st.floats(0.0, 30.0))
@settings(max_examples=15)
def test_field_mirror_symmetric(eta, t):
    p = ModelParams.from_eta(eta)
    x = np.arange(-12, 13)
    psi = psi_unbound_quad(p, x, t) + psi_bound(p, x, t)
    np.testing.assert_allclose(psi, psi[::-1], atol=1e-10)


@given(st.floats(0.2, 3.0), st.floats(0.0, 12.0))
@settings(max_examples=15)
def test_norm_inside_light_cone(eta, t):
    p = ModelParams.from_eta(eta)
    X = int(2 * t + 12)
    trace, (fr,) = evolve(p, [t], X, check_norm=True)
    assert trace.p_e[0] + fr.p_x.sum() == pytest.approx(1.0, abs=1e-8)


def test_bound_field_parity_quadrature():
    # even sites carry -i sin, odd sites cos: their weights trade off in time
    p = ModelParams.from_eta(0.8)
    bs = bound_state(p)
    t = np.pi / (2 * bs.omega)
    pb = psi_bound(p, np.arange(-3, 4), t)
    np.testing.assert_allclose(pb[0::2], 0.0, atol=1e-15)
    assert abs(pb[3]) == pytest.approx(2 * np.sqrt(bs.p_b) * bs.norm_N)


def test_scalar_site_returns_scalar():
    p = ModelParams.from_eta(1.0)
    assert np.ndim(psi_unbound_quad(p, 2, 1.0)) == 0
    assert np.ndim(psi_bound(p, 2, 1.0)) == 0


@pytest.mark.parametrize("times", [[], [-1.0], [2.0, 1.0]])
def test_evolve_rejects_bad_times(times):
    with pytest.raises(DomainError):
        evolve(ModelParams(g=1.0), times)


def test_evolve_window_forms():
    p = ModelParams(g=1.0)
    _, (fr,) = evolve(p, [1.0], (-2, 5))
    np.testing.assert_array_equal(fr.x, np.arange(-2, 6))
    with pytest.raises(DomainError):
        evolve(p, [1.0], (3, 1))
    with pytest.raises(DomainError):
        evolve(p, [10.0], 5, check_norm=True)


def test_bound_half_period():
    p = ModelParams(g=1.0)
    bs = bound_state(p)
    assert np.pi / bs.omega == pytest.approx(1.5264, abs=1e-3)
    assert alpha_bound(p, np.pi / bs.omega) == pytest.approx(-2 * bs.p_b)
    assert -2 * bs.p_b == pytest.approx(-0.10557, abs=1e-5)


def test_unbound_initial_value_eta1():
    assert alpha_unbound_quad(ModelParams(g=1.0), 0.0).real == pytest.approx(0.89443, abs=1e-5)


def test_strong_coupling_continuum_bounded():
    p = ModelParams.from_eta(10.0)
    assert abs(alpha_unbound_quad(p, 1.0)) <= 1 - 2 * bound_state(p).p_b


def test_markov_amplitude_weak_coupling():
    p = ModelParams.from_eta(0.1)
    assert alpha_markov(p, 200.0) == pytest.approx(np.exp(-1.0))
    t = np.linspace(0, 600, 301)
    trace, _ = evolve(p, t, with_field=False)
    assert np.abs(alpha_markov(p, t) - trace.alpha_u).max() <= 0.02


def test_bessel_route_decays_at_long_times():
    p = ModelParams(g=1.0)
    assert abs(alpha_unbound_bessel(p, 900.0)) < 0.01


def test_no_photon_initially():
    p = ModelParams.from_eta(0.8)
    x = np.arange(-6, 7)
    np.testing.assert_allclose(psi_unbound_quad(p, x, 0.0), -psi_bound(p, x, 0.0), atol=1e-8)
    trace, (fr,) = evolve(ModelParams.from_eta(2.0), [0.0], 5)
    assert trace.p_e[0] == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(fr.p_x, 0.0, atol=1e-20)


def test_bound_field_examples():
    p = ModelParams.from_eta(2.0)
    bs = bound_state(p)
    amp = 2 * np.sqrt(bs.p_b) * bs.norm_N
    assert psi_bound(p, 0, 0.0) == 0
    assert psi_bound(p, 1, 0.0) == pytest.approx(amp * bs.rho)
    assert psi_bound(p, 0, np.pi / (2 * bs.omega)) == pytest.approx(-1j * amp)


def test_bound_field_exponential_form():
    from ccatrap.observables import localization_metrics

    p = ModelParams.from_eta(1.3)
    m = localization_metrics(p)
    x = np.arange(-5, 6)
    # at t=0 odd sites carry cos = 1; a quarter period later even sites carry -i
    odd = x[np.abs(x) % 2 == 1]
    np.testing.assert_allclose(psi_bound(p, odd, 0.0), m.A * np.exp(-np.abs(odd) / m.lam), rtol=1e-12)
    ev = x[np.abs(x) % 2 == 0]
    tq = np.pi / (2 * bound_state(p).omega)
    np.testing.assert_allclose(psi_bound(p, ev, tq), -1j * m.A * np.exp(-np.abs(ev) / m.lam),
                               rtol=1e-12)


def test_field_point_against_ring():
    p = ModelParams.from_eta(0.8)
    _, psi_N = propagate_exact(eigendecompose(build_hamiltonian(p, 1024)), 20.0)
    got = psi_unbound_quad(p, 5, 20.0) + psi_bound(p, 5, 20.0)
    assert got == pytest.approx(psi_N[512 + 5], abs=1e-3)


def test_weak_coupling_leaves_no_light_near_atom():
    p = ModelParams.from_eta(0.1)
    _, (fr,) = evolve(p, [350.0], 20)
    assert fr.p_x.sum() < 0.01


def test_parity_quadrature_at_long_times():
    p = ModelParams.from_eta(2.0)
    x = np.arange(-8, 9)
    even = np.abs(x) % 2 == 0
    for t in (60.0, 77.7, 100.0):
        pu = psi_unbound_quad(p, x, t)
        psi = pu + psi_bound(p, x, t)
        mixing = np.where(even, np.abs(psi.real), np.abs(psi.imag))
        assert np.all(mixing <= np.abs(pu) + 1e-12)
        assert np.abs(pu).max() < 0.02


@pytest.mark.parametrize("eta", [0.1, 0.4, 0.8, 1.0, 2.0, 10.0])
def test_reality_and_sum_rule(eta):
    p = ModelParams.from_eta(eta)
    q = QuadratureSpec(tol=1e-10)
    trace, _ = evolve(p, np.linspace(0, 40, 9), q=q, with_field=False)
    assert np.abs(trace.alpha.imag).max() < 10 * q.tol
    assert abs(trace.alpha[0] - 1) < 10 * q.tol
