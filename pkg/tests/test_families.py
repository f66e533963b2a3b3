import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ltbounds.errors import DomainError, FamilyValidationError
from ltbounds.families import (
    TrigFamily,
    dual_constant,
    extrapolate_in_inverse,
    kinetic_constant,
    random_trig_family,
    real_trig_family,
    sphere_shell_family,
    torus_box_family,
    torus_box_ratio_exact,
    torus_lower_closed_form,
    trig_family_ratio,
)
from ltbounds.sphere_momentum import sphere_upper_bound
from ltbounds.sphere_spectrum import lower_bound_ratio
from ltbounds.torus_lattice import torus_upper_bound

S2 = 1 / math.sqrt(2)


def exp_family(freqs):
    freqs = np.array(freqs)
    return TrigFamily(freqs, np.eye(len(freqs), dtype=complex))


def test_sphere_shell_family_m2():
    r = sphere_shell_family(2)
    w4 = 8 * math.pi ** 2 / 3
    assert r.lhs == pytest.approx(5 ** 1.5 / math.sqrt(w4), rel=1e-14)
    assert r.lhs == pytest.approx(2.1793, abs=1e-4)
    assert r.rhs == 20
    assert r.ratio == pytest.approx(0.10897, abs=1e-5)
    assert r.ratio <= sphere_upper_bound()


def test_sphere_shell_family_consistency_and_limit():
    for M in range(2, 101):
        r = sphere_shell_family(M)
        assert r.ratio ** 2 == pytest.approx(lower_bound_ratio(M), rel=1e-12)
        assert r.ratio <= sphere_upper_bound()
    assert sphere_shell_family(10**6).ratio == pytest.approx(0.08440, abs=1e-4)
    with pytest.raises(DomainError):
        sphere_shell_family(1)


def test_torus_box_m1():
    z = torus_box_family(1, include_zero_mode=True)
    assert z.lhs == pytest.approx(2 ** 6 / (4 * math.pi ** 2), rel=1e-14)
    assert z.rhs == pytest.approx(32)
    assert z.ratio == pytest.approx(0.05066, abs=1e-5)
    assert "includes-zero-mode" in z.flags
    m = torus_box_family(1)
    assert m.lhs == pytest.approx(15 ** 1.5 / (4 * math.pi ** 2), rel=1e-14)
    assert m.ratio == pytest.approx(0.04599, abs=1e-5)
    assert m.flags == ()
    with pytest.raises(DomainError):
        torus_box_family(0)


def test_torus_box_closed_forms():
    for M in range(1, 21):
        for zero in (False, True):
            r = torus_box_family(M, zero)
            assert r.ratio == pytest.approx(torus_box_ratio_exact(M, zero), rel=1e-13)
            assert r.ratio <= torus_upper_bound()
    # 3/(16 pi^2) = 0.0189977
    assert torus_lower_closed_form() == pytest.approx(0.0189977, abs=1e-7)
    nodes = (10**2, 10**3, 10**4)
    ext = extrapolate_in_inverse(nodes, [torus_box_ratio_exact(m) for m in nodes])
    assert abs(ext - torus_lower_closed_form()) <= 1e-5


def test_extrapolation_exact_on_polynomials():
    nodes = (2, 5, 9)
    vals = [1.5 - 2 / m + 3 / m ** 2 for m in nodes]
    assert extrapolate_in_inverse(nodes, vals) == pytest.approx(1.5, rel=1e-13)


def test_single_mode():
    r = trig_family_ratio(exp_family([[1, 0, 0, 0]]))
    assert r.lhs == pytest.approx(1 / (4 * math.pi ** 2), abs=1e-10)
    assert r.ratio == pytest.approx(1 / (4 * math.pi ** 2), abs=1e-10)
    assert r.ratio == pytest.approx(0.025330, abs=1e-6)
    assert r.flags == ()


def test_two_modes():
    r = trig_family_ratio(exp_family([[1, 0, 0, 0], [0, 1, 0, 0]]))
    assert r.ratio == pytest.approx(2 ** 1.5 / (4 * math.pi ** 2 * 2), abs=1e-10)
    # sqrt2 / (4 pi^2) = 0.0358224
    assert r.ratio == pytest.approx(0.0358224, abs=1e-7)


@pytest.mark.parametrize("freqs", [
    [[1, 2, 0, -1], [0, 0, 3, 1], [-2, 1, 1, 1]],
    [[1, 0, 0, 0], [-1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 0, -3]],
])
def test_constant_density_closed_form(freqs):
    n = len(freqs)
    kinetic = sum(sum(v * v for v in k) for k in freqs)
    closed = n ** 1.5 / (4 * math.pi ** 2) / kinetic
    assert trig_family_ratio(exp_family(freqs)).ratio == pytest.approx(closed, abs=1e-10)


def test_cos_sin_pair_constant_density():
    fam = real_trig_family([[1, 1, 0, 0], [1, 1, 0, 0]], kinds=["cos", "sin"])
    r = trig_family_ratio(fam)
    assert r.ratio == pytest.approx(2 ** 1.5 / (4 * math.pi ** 2 * 4), abs=1e-10)


def test_mixed_family():
    fam = TrigFamily(np.array([[1, 0, 0, 0], [2, 0, 0, 0]]), np.array([[S2, S2]]))
    r = trig_family_ratio(fam)
    # density (1 + cos x0)/(16 pi^4): lhs = 2 sqrt2 / (3 pi^3), rhs = 5/2
    closed = 4 * math.sqrt(2) / (15 * math.pi ** 3)
    assert r.ratio == pytest.approx(closed, rel=1e-6)
    # oracle: 1D trapezoid at far higher resolution than the 4D grid
    x = 2 * math.pi * np.arange(4 * 4096) / (4 * 4096)
    lhs = (2 * math.pi) ** 3 * np.mean((1 + np.cos(x)) ** 1.5) * 2 * math.pi / (16 * math.pi ** 4) ** 1.5
    assert r.ratio == pytest.approx(lhs / 2.5, rel=1e-6)
    assert r.ratio < torus_upper_bound()
    # the density vanishes at x0 = pi, so the trapezoid converges only algebraically
    assert r.flags and r.flags[0].startswith("quadrature-not-converged")


def test_validation():
    with pytest.raises(FamilyValidationError):
        exp_family([[0, 0, 0, 0]]).validate()
    with pytest.raises(FamilyValidationError):
        TrigFamily(np.array([[1, 0, 0, 0], [1, 0, 0, 0]]), np.eye(2)).validate()
    with pytest.raises(FamilyValidationError):
        TrigFamily(np.array([[1, 0, 0, 0], [0, 1, 0, 0]]), np.array([[1.0, 0.1]])).validate()
    with pytest.raises(FamilyValidationError):
        TrigFamily(np.array([[1, 0, 0, 0]]), np.eye(2))
    with pytest.raises(FamilyValidationError):
        trig_family_ratio(TrigFamily(np.array([[1, 0, 0, 0]]), np.array([[2.0]])))


def test_quadrature_cap():
    with pytest.raises(DomainError):
        trig_family_ratio(exp_family([[40, 0, 0, 0]]))


def test_json_round_trip(tmp_path):
    fam = random_trig_family(np.random.default_rng(3), 4, 2, max_component=2)
    path = tmp_path / "fam.json"
    path.write_text(fam.to_json())
    back = TrigFamily.load(path)
    assert np.array_equal(back.frequencies, fam.frequencies)
    assert np.allclose(back.coefficients, fam.coefficients, rtol=0, atol=1e-15)


@pytest.mark.parametrize("text", [
    "not json",
    '{"frequencies": [[1, 0, 0]], "coefficients": [[[1, 0]]]}',
    '{"frequencies": [[1, 0, 0, 0.5]], "coefficients": [[[1, 0]]]}',
    '{"frequencies": [[1, 0, 0, 0]], "coefficients": [[1]]}',
    '{"frequencies": [[1, 0, 0, 0], [0, 1, 0, 0]], "coefficients": [[[1, 0]]]}',
    '{"coefficients": [[[1, 0]]]}',
    '{"frequencies": [], "coefficients": []}',
])
def test_json_rejects_malformed(text):
    with pytest.raises(FamilyValidationError):
        TrigFamily.from_json(text)


@settings(max_examples=10)
@given(st.integers(0, 2**32 - 1), st.permutations(range(3)))
def test_permutation_invariance(seed, order):
    fam = random_trig_family(np.random.default_rng(seed), 4, 3, max_component=1)
    a = trig_family_ratio(fam)
    b = trig_family_ratio(fam.permuted(list(order)))
    assert b.rhs == pytest.approx(a.rhs, rel=1e-13)
    assert b.lhs == pytest.approx(a.lhs, rel=1e-12)
    assert b.ratio == pytest.approx(a.ratio, rel=1e-12)


def test_random_families_respect_upper_bound():
    rng = np.random.default_rng(11)
    for _ in range(3):
        fam = random_trig_family(rng, 5, 3, max_component=2)
        assert fam.gram_deviation() <= 1e-10
        assert trig_family_ratio(fam).ratio <= torus_upper_bound()


def test_dual_constant_values():
    assert dual_constant(2 / 3, 4) == pytest.approx(1 / 3, rel=1e-15)
    # (1.5 * 0.17279)^-2 / 3 = 4.96204
    assert dual_constant(0.17279, 4) == pytest.approx(4.962, abs=5e-4)
    with pytest.raises(DomainError):
        dual_constant(0.0, 4)
    with pytest.raises(DomainError):
        kinetic_constant(-1.0, 4)


@given(st.floats(1e-3, 10.0), st.sampled_from([1, 2, 3, 4, 5, 6]))
def test_dual_round_trip(K, d):
    assert kinetic_constant(dual_constant(K, d), d) == pytest.approx(K, rel=1e-12)


@given(st.floats(1e-3, 10.0))
def test_dual_is_involution_only_in_two_dimensions(K):
    assert dual_constant(dual_constant(K, 2), 2) == pytest.approx(K, rel=1e-12)


def test_dual_relation():
    for K in (0.019, 0.0844, 0.1222, 0.1728):
        L = dual_constant(K, 4)
        assert (3 * L) ** 1.5 * (1.5 * K) ** 3 == pytest.approx(1.0, rel=1e-13)
