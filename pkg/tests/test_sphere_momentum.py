import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ltbounds.errors import DomainError
from ltbounds.special import constants
from ltbounds.sphere_momentum import (
    big_g,
    central_difference_derivatives,
    default_energy_grid,
    delta_crossover,
    delta_e,
    delta_sign_audit,
    derivatives_at_zero,
    em_boundary_prediction,
    em_linear_coefficient,
    em_series,
    em_summand,
    em_taylor_derivatives,
    euler_maclaurin_audit,
    kernel_chain_audit,
    kernel_g,
    spectral_ratio_audit,
    spectral_ratio,
    spectral_series,
    sphere_upper_bound,
)

C = constants()
RHO, B = C.rho, C.beta_2_3_4_3


def test_kernel_values():
    assert kernel_g(0.0, RHO) == 1.0
    assert kernel_g(1 / RHO, RHO) == pytest.approx(0.5, rel=1e-15)
    assert big_g(0.0) == 0.0
    assert big_g(1.0) == 0.25


@pytest.mark.parametrize("call", [lambda: kernel_g(-1.0, RHO), lambda: kernel_g(1.0, 0.0),
                                  lambda: big_g(-0.1), lambda: spectral_series(0.0),
                                  lambda: delta_e(-1.0), lambda: em_series(0.0),
                                  lambda: euler_maclaurin_audit(1.5)])
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()


def test_small_energy_asymptotics():
    # every term scales like a^6 for small a = rho E; n = 1 carries ~99% of the sum
    with mpmath.workdps(30):
        const = mpmath.nsum(lambda n: (2 * n + 3) * (n * (n + 3) + 2) / (n * (n + 3)) ** 6, [1, mpmath.inf])
    for E in (1e-3, 1e-2):
        a = RHO * E
        v = spectral_series(E, tol=1e-12 * a ** 6).value
        assert v / a ** 6 == pytest.approx(float(const), rel=1e-6)
        assert 1.0 <= v / (30 * a ** 6 / 4096) <= 1.02


def test_series_tail_is_rigorous():
    for E in (0.5, 5.0, 50.0):
        coarse = spectral_series(E, tol=1e-4)
        fine = spectral_series(E, tol=1e-12)
        assert coarse.converged and fine.converged
        assert coarse.value <= fine.value + fine.tail_bound
        assert fine.value <= coarse.value + coarse.tail_bound


@settings(max_examples=30)
@given(st.floats(0.01, 20.0), st.floats(0.0, 5.0))
def test_series_nondecreasing_in_energy(E, dE):
    lo, hi = spectral_series(E), spectral_series(E + dE)
    assert lo.value <= hi.value + lo.tail_bound + hi.tail_bound


def test_doubling_step_exact():
    n = np.arange(1, 10**5 + 1, dtype=np.int64)
    x = n * (n + 3)
    assert np.all((2 * n + 3) * (x + 2) <= (2 * n + 3) * 2 * x)


def test_spectral_ratio_direct_oracle():
    a = RHO * 1.0
    terms = [(2 * n + 3) * (n * (n + 3) + 2) / (a ** 3 + (n * (n + 3)) ** 3) ** 2 for n in range(1, 10**4 + 1)]
    direct = 3 * a ** 4 / (2 * B) * math.fsum(terms)
    r = spectral_ratio(1.0)
    assert 0 < r < 1
    # spectral_ratio is an upper enclosure: value plus tail bound
    assert direct <= r <= direct * (1 + 1e-7)


def test_spectral_ratio_vanishes_at_zero():
    assert spectral_ratio(1e-3) < 1e-8
    assert spectral_ratio(1e-2) < spectral_ratio(1e-1) < spectral_ratio(1.0)


def test_delta_at_one_against_mpmath():
    a = RHO
    first = 30 / (1 + 64 / a ** 3) ** 2
    with mpmath.workdps(30):
        second = 2 * a * a * mpmath.quad(lambda x: x / (1 + x ** 3) ** 2, [0, 1, 4 / a])
    assert first == pytest.approx(0.00198, abs=1e-5)
    assert float(second) == pytest.approx(0.523, abs=1e-3)
    assert delta_e(1.0) == pytest.approx(first - float(second), abs=1e-13)
    assert delta_e(1.0) < 0


def test_delta_limits():
    d_small = delta_e(1e-3)
    assert d_small < 0
    assert d_small == pytest.approx(-(2 * RHO ** 2 * B / 3) * 1e-6, rel=1e-3)
    assert delta_e(1e5) == pytest.approx(14.0, abs=1e-3)


def test_delta_crossover():
    e_star = delta_crossover()
    assert 5.0 < e_star < 6.0
    assert abs(delta_e(e_star)) <= 1e-8
    assert delta_e(e_star / 2) < 0
    assert delta_e(2 * e_star) > 0


def test_energy_grid():
    g = default_energy_grid(0.05, 0.01)
    assert g == [0.01, 0.02, 0.03, 0.04, 0.05]
    r = default_energy_grid(1.0, 0.1, refine_to=0.55)
    assert max(r) < 0.55 and len([E for E in r if E > 0.53]) == 10
    with pytest.raises(DomainError):
        default_energy_grid(0.001, 0.01)


def test_grid_audits():
    d = delta_sign_audit(e_max=2.0)
    assert d.verdict and max(d.values) <= 0 and max(d.grid) <= 2.0
    s = spectral_ratio_audit(e_max=2.0)
    assert s.verdict and max(s.values) <= 1.0
    k = kernel_chain_audit([0.1, 1.0, 5.0, 100.0])
    assert k.verdict


def test_em_summand_and_integral():
    nu = 0.1
    audit = euler_maclaurin_audit(nu)
    assert audit.integral_value == pytest.approx(B / 0.3, rel=1e-15)
    assert audit.integral_value == pytest.approx(4.030665, abs=1e-6)
    assert audit.integral_quadrature == pytest.approx(audit.integral_value, rel=1e-10)
    assert audit.derivative_table[0] == pytest.approx(0.9, abs=1e-5)
    assert audit.series_below_integral


def test_derivatives_against_mpmath():
    for nu in (0.5, 0.1, 0.02):
        with mpmath.workdps(40):
            f = lambda x: (2 * x + 3) * nu * x * (x + 3) / (1 + (nu * x * (x + 3)) ** 3) ** 2
            ref = [float(mpmath.diff(f, 0, j)) for j in range(1, 6)]
        got = derivatives_at_zero(nu)
        for g, r in zip(got, ref):
            assert g == pytest.approx(r, rel=1e-8)
        assert got == pytest.approx(em_taylor_derivatives(nu), rel=1e-8)


def test_central_differences_low_orders():
    for nu in (0.5, 0.1, 0.02, 0.005):
        cd = central_difference_derivatives(nu, orders=(1, 2))
        assert cd == pytest.approx(em_taylor_derivatives(nu)[:2], rel=1e-4)
        cd3 = central_difference_derivatives(nu, orders=(3,), step=1e-3)
        assert cd3[0] == pytest.approx(12 * nu, rel=1e-3)
    with pytest.raises(DomainError):
        central_difference_derivatives(0.1, orders=(4,))


def test_em_complex_evaluation():
    z = 0.05 + 0.02j
    nu = 0.3
    t = nu * z * (z + 3)
    assert em_summand(z, nu) == pytest.approx((2 * z + 3) * t / (1 + t ** 3) ** 2)


@settings(max_examples=25)
@given(st.floats(0.005, 1.0))
def test_series_below_integral(nu):
    s = em_series(nu)
    assert s.value + s.tail_bound <= B / (3 * nu)


def test_em_series_direct_oracle():
    nu = 0.5
    direct = math.fsum(float(em_summand(float(n), nu)) for n in range(0, 20001))
    assert em_series(nu).value == pytest.approx(direct, rel=1e-13)


def test_em_linear_coefficient():
    fit = em_linear_coefficient()
    assert fit.intercept < 0
    assert em_boundary_prediction() == pytest.approx(-11 / 15, rel=1e-15)
    assert fit.intercept == pytest.approx(-11 / 15, rel=5e-3)
    assert fit.published_value == pytest.approx(-0.44)


def test_sphere_upper_bound():
    v = sphere_upper_bound()
    assert round(v, 4) == 0.1728
    assert v == pytest.approx(0.17279, abs=1e-5)
    assert abs(3 * math.sqrt(C.c0) - math.sqrt(2 * B) / 9) <= 1e-12
