"""Momentum-decomposition upper bound on S^4.

With the kernel g(t) = 1/(1 + (rho t)^3) and a = rho E, the squared norm of the
high-momentum projector kernel is (1 / 6 omega4) times the spectral series

    S(E) = sum_{n>=1} (2n+3)(x_n + 2) / (1 + (x_n / a)^3)^2,   x_n = n(n+3).

The upper bound needs S(E) <= (2/3) B(2/3,4/3) a^2 for every E > 0. This module
evaluates S with rigorous tails and audits the two routes used to bound it: the
delta(E) comparison for small E and the Euler-Maclaurin comparison
sum R(n) <= int R for large E (nu = 1/a -> 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .special import bernoulli, constants, integrate

MAX_TERMS = 10_000_000
SCAN_STEP = 0.01
SCAN_LIMIT = 1e3
PUBLISHED_EM_COEFFICIENT = -11.0 / 25.0
EM_FIT_NUS = (0.04, 0.02, 0.01, 0.005)


@dataclass(frozen=True)
class SeriesEstimate:
    """Partial sum of a positive series plus a rigorous bound on what was dropped.

    The true sum lies in [value, value + tail_bound].
    """

    value: float
    terms_used: int
    tail_bound: float
    parameter: float
    tol: float = math.inf

    @property
    def converged(self) -> bool:
        return self.tail_bound <= self.tol

    @property
    def upper(self) -> float:
        return self.value + self.tail_bound


def kernel_g(t, scale: float):
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("kernel_g is defined for t >= 0")
    if not scale > 0:
        raise DomainError("kernel scale must be positive")
    out = 1.0 / (1.0 + (scale * t_arr) ** 3)
    return float(out) if out.ndim == 0 else out


def big_g(t):
    """G(t) = t / (1 + t^3)^2."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("big_g is defined for t >= 0")
    out = t_arr / (1.0 + t_arr ** 3) ** 2
    return float(out) if out.ndim == 0 else out


def _spectral_terms(n: np.ndarray, a: float) -> np.ndarray:
    x = n * (n + 3.0)
    return (2.0 * n + 3.0) * (x + 2.0) / (1.0 + (x / a) ** 3) ** 2


def _spectral_tail(N: int, a: float) -> float:
    # term_n <= 2 a^6 (2n+3) / x_n^5 (uses x_n + 2 <= 2 x_n), decreasing, and
    # int_N^inf (2x+3) / (x(x+3))^5 dx = 1 / (4 (N(N+3))^4).
    x = float(N) * (N + 3.0)
    return a ** 6 / (2.0 * x ** 4)


def _terms_for_tail(tail_tol: float, coef: float, power: float = 4.0) -> int:
    """Smallest N with coef / (N(N+3))^power <= tail_tol (at least 1)."""
    x_needed = (coef / tail_tol) ** (1.0 / power)
    n = max(1, math.ceil((-3.0 + math.sqrt(9.0 + 4.0 * x_needed)) / 2.0))
    while coef / (n * (n + 3.0)) ** power > tail_tol:
        n += 1
    return n


def spectral_series(E: float, tol: float | None = None,
                    max_terms: int = MAX_TERMS) -> SeriesEstimate:
    """S(E) with a rigorous integral-comparison tail bound.

    Default tolerance is 1e-10 * max(1, value).
    """
    if not E > 0:
        raise DomainError(f"spectral_series needs E > 0, got {E}")
    if tol is not None and not tol > 0:
        raise DomainError("tol must be positive")
    a = constants().rho * E
    # first pass sized off the expected magnitude (2/3) B a^2
    target = tol if tol is not None else 1e-10 * max(1.0, a * a)
    while True:
        N = min(_terms_for_tail(target, a ** 6 / 2.0), max_terms)
        n = np.arange(1, N + 1, dtype=float)
        value = math.fsum(_spectral_terms(n, a))
        tail = _spectral_tail(N, a)
        wanted = tol if tol is not None else 1e-10 * max(1.0, value)
        if tail <= wanted or N >= max_terms:
            return SeriesEstimate(value=value, terms_used=N, tail_bound=tail,
                                  parameter=E, tol=wanted)
        target = wanted


def spectral_ratio(E: float) -> float:
    """(3 a^4 / 2B) sum (2n+3)(x_n+2)/(a^3 + x_n^3)^2, evaluated as an upper enclosure.

    Equals 3 S(E) / (2 B a^2); the bound argument requires it to be <= 1.
    """
    c = constants()
    est = spectral_series(E)
    a = c.rho * E
    return 3.0 * est.upper / (2.0 * c.beta_2_3_4_3 * a * a)


def _xg_integrand(x):
    return x / (1.0 + x ** 3) ** 2


def delta_e(E: float) -> float:
    """delta(E) = 30/(1 + 64/a^3)^2 - 2 a^2 int_0^{4/a} x/(1+x^3)^2 dx, a = rho E."""
    if not E > 0:
        raise DomainError(f"delta_e needs E > 0, got {E}")
    a = constants().rho * E
    upper = 4.0 / a
    quad = integrate(_xg_integrand, 0.0, upper, tol=1e-14)
    first = 30.0 / (1.0 + 64.0 / a ** 3) ** 2
    return first - 2.0 * a * a * quad.value


@lru_cache(maxsize=1)
def delta_crossover() -> float:
    """First E* > 0 where delta changes sign, scanning up from E = 0.01.

    Returns nan when no sign change is found up to E = 1000.
    """
    k = 1
    prev_E, prev_d = SCAN_STEP, delta_e(SCAN_STEP)
    if prev_d > 0:
        return math.nan
    while True:
        k += 1
        E = round(k * SCAN_STEP, 10)
        if E > SCAN_LIMIT:
            return math.nan
        d = delta_e(E)
        if d > 0:
            return brentq(delta_e, prev_E, E, xtol=1e-12, rtol=4 * np.finfo(float).eps)
        prev_E, prev_d = E, d


@dataclass(frozen=True)
class GridAudit:
    """Sign/threshold audit of a function on a grid of energies."""

    name: str
    grid: tuple[float, ...]
    values: tuple[float, ...]
    threshold: float
    verdict: bool
    worst_margin: float
    description: str = ""


def default_energy_grid(e_max: float, step: float = SCAN_STEP, refine_to: float | None = None,
                        refine_points: int = 10, refine_width: float = 1e-3) -> list[float]:
    """Uniform grid step..e_max, plus a refined cluster just below ``refine_to``."""
    if not (step > 0 and e_max >= step):
        raise DomainError("need step > 0 and e_max >= step")
    count = int(math.floor(e_max / step + 1e-9))
    grid = [round(k * step, 12) for k in range(1, count + 1)]
    if refine_to is not None and math.isfinite(refine_to) and refine_to <= e_max:
        grid = [E for E in grid if E < refine_to]
        grid += [refine_to - j * refine_width for j in range(refine_points, 0, -1)]
        grid = sorted(set(E for E in grid if E > 0))
    return grid


def delta_sign_audit(e_max: float | None = None, step: float = SCAN_STEP) -> GridAudit:
    """delta(E) <= 0 on [step, min(e_max, E*)], refined just below E*."""
    e_star = delta_crossover()
    top = e_star if e_max is None else min(e_max, e_star)
    grid = default_energy_grid(top, step, refine_to=e_star)
    vals = [delta_e(E) for E in grid]
    worst = max(vals)
    return GridAudit(name="delta_sign", grid=tuple(grid), values=tuple(vals), threshold=0.0,
                     verdict=math.isfinite(e_star) and worst <= 0.0, worst_margin=worst,
                     description=f"delta(E) <= 0 for E in [{step:g}, {top:.10g}], E* = {e_star:.10g}")


def spectral_ratio_audit(e_max: float | None = None, step: float = SCAN_STEP) -> GridAudit:
    e_star = delta_crossover()
    top = e_star if e_max is None else min(e_max, e_star)
    grid = default_energy_grid(top, step, refine_to=e_star)
    vals = [spectral_ratio(E) for E in grid]
    worst = max(vals)
    return GridAudit(name="spectral_ratio", grid=tuple(grid), values=tuple(vals), threshold=1.0,
                     verdict=worst <= 1.0, worst_margin=worst - 1.0,
                     description=f"ratio <= 1 for E in [{step:g}, {top:.10g}]")


def kernel_chain_audit(grid) -> GridAudit:
    """S(E) <= 6 omega4 C0 E^2 (the bound that yields C0) at every grid energy."""
    c = constants()
    margins = []
    for E in grid:
        est = spectral_series(E)
        margins.append(est.upper - 6.0 * c.omega4 * c.c0 * E * E)
    worst = max(margins)
    return GridAudit(name="kernel_chain", grid=tuple(grid), values=tuple(margins), threshold=0.0,
                     verdict=worst <= 0.0, worst_margin=worst,
                     description="S(E) - 6 omega4 C0 E^2 <= 0")


# --- Euler-Maclaurin comparison ----------------------------------------------

def em_summand(x, nu: float):
    """R(x) = (2x + 3) G(nu x (x + 3)); accepts complex x."""
    x = np.asarray(x)
    t = nu * x * (x + 3.0)
    return (2.0 * x + 3.0) * t / (1.0 + t ** 3) ** 2


def em_taylor_derivatives(nu: float) -> list[float]:
    """Exact R^{(j)}(0), j = 1..5, from G(t) = t - 2 t^4 + O(t^7)."""
    return [9.0 * nu, 18.0 * nu, 12.0 * nu, -11664.0 * nu ** 4, -116640.0 * nu ** 4]


def leading_order_derivatives(nu: float) -> list[float]:
    return [9.0 * nu, 18.0 * nu, 12.0 * nu, 0.0, 0.0]


def derivatives_at_zero(nu: float, orders=range(1, 6), radius: float | None = None,
                        points: int = 64) -> list[float]:
    """R^{(j)}(0) by a discrete Cauchy formula on a circle around 0.

    Trapezoid sums on the circle are a difference formula on complex nodes;
    unlike real central differences they stay accurate for the 4th and 5th
    derivatives. The nearest pole of R is at |x| > 0.3 for nu <= 1.
    """
    if radius is None:
        radius = 0.1 if nu >= 0.05 else min(1.0, 0.005 / nu)
    theta = 2.0 * np.pi * np.arange(points) / points
    z = radius * np.exp(1j * theta)
    samples = em_summand(z, nu)
    coeffs = np.fft.fft(samples) / points
    return [float((coeffs[j] / radius ** j).real * math.factorial(j)) for j in orders]


def central_difference_derivatives(nu: float, orders=(1, 2), step: float | None = None) -> list[float]:
    """Real-axis central differences for low orders, step 1e-4 nu^(1/3)."""
    h = 1e-4 * nu ** (1.0 / 3.0) if step is None else step
    f = lambda x: float(em_summand(x, nu))
    out = []
    for j in orders:
        if j == 1:
            out.append((f(h) - f(-h)) / (2 * h))
        elif j == 2:
            out.append((f(h) - 2 * f(0.0) + f(-h)) / h ** 2)
        elif j == 3:
            out.append((f(2 * h) - 2 * f(h) + 2 * f(-h) - f(-2 * h)) / (2 * h ** 3))
        else:
            raise DomainError("central differences implemented for orders 1..3")
    return out


def em_series(nu: float, rel_tol: float = 1e-14) -> SeriesEstimate:
    """sum_{n>=0} R(n) with tail bound from R(x) <= (2x+3) / (nu^5 (x(x+3))^5)."""
    if not 0 < nu:
        raise DomainError(f"nu must be positive, got {nu}")
    c = constants()
    scale = c.beta_2_3_4_3 / (3.0 * nu)
    coef = 1.0 / (4.0 * nu ** 5)
    N = _terms_for_tail(rel_tol * scale, coef)
    n = np.arange(0, N + 1, dtype=float)
    value = math.fsum(em_summand(n, nu))
    x = N * (N + 3.0)
    return SeriesEstimate(value=value, terms_used=N + 1, tail_bound=coef / x ** 4,
                          parameter=nu, tol=rel_tol * scale)


def em_boundary_prediction() -> float:
    """First-order coefficient of sum - integral from the Euler-Maclaurin boundary terms.

    -sum_{j=2}^{5} B_j / j! * R^{(j-1)}(0) / nu with the leading-order derivatives.
    """
    d = leading_order_derivatives(1.0)
    total = 0.0
    for j in range(2, 6):
        total -= float(bernoulli(j)) / math.factorial(j) * d[j - 2]
    return total


@dataclass(frozen=True)
class EulerMaclaurinAudit:
    nu: float
    series_value: float
    series_tail: float
    integral_value: float
    integral_quadrature: float
    derivative_table: list[float]
    derivative_exact: list[float]
    derivative_leading: list[float]
    empirical_linear_coeff: float
    series_below_integral: bool = field(default=False)


def euler_maclaurin_audit(nu: float) -> EulerMaclaurinAudit:
    if not 0 < nu <= 1:
        raise DomainError(f"euler_maclaurin_audit needs 0 < nu <= 1, got {nu}")
    c = constants()
    series = em_series(nu)
    closed = c.beta_2_3_4_3 / (3.0 * nu)
    quad = integrate(lambda x: em_summand(x, nu), 0.0, math.inf, tol=1e-12 * closed)
    return EulerMaclaurinAudit(
        nu=nu,
        series_value=series.value,
        series_tail=series.tail_bound,
        integral_value=closed,
        integral_quadrature=quad.value,
        derivative_table=derivatives_at_zero(nu),
        derivative_exact=em_taylor_derivatives(nu),
        derivative_leading=leading_order_derivatives(nu),
        empirical_linear_coeff=(series.value - closed) / nu,
        series_below_integral=series.upper <= closed,
    )


@dataclass(frozen=True)
class EMCoefficientFit:
    intercept: float
    slope: float
    nus: tuple[float, ...]
    scaled_gaps: tuple[float, ...]
    variation: float
    published_value: float = PUBLISHED_EM_COEFFICIENT
    boundary_prediction: float = field(default_factory=em_boundary_prediction)


def em_linear_coefficient(nus=EM_FIT_NUS) -> EMCoefficientFit:
    """Fit (sum - integral)/nu linearly in nu and extrapolate to nu = 0.

    Reported next to the published coefficient; no equality is asserted.
    """
    c = constants()
    gaps = []
    for nu in nus:
        s = em_series(nu)
        gaps.append((s.value - c.beta_2_3_4_3 / (3.0 * nu)) / nu)
    slope, intercept = np.polyfit(np.asarray(nus), np.asarray(gaps), 1)
    variation = (max(gaps) - min(gaps)) / abs(intercept)
    return EMCoefficientFit(intercept=float(intercept), slope=float(slope), nus=tuple(nus),
                            scaled_gaps=tuple(gaps), variation=float(variation))


def sphere_upper_bound() -> float:
    """3 sqrt(C0) = sqrt(2 B(2/3,4/3)) / 9."""
    return 3.0 * math.sqrt(constants().c0)
