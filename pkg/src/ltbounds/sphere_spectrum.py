"""Laplace-Beltrami spectrum of S^d and the shell-family lower bound on S^4.

Shells n = 1..M-1 of spherical harmonics form an orthonormal mean-zero family
whose density is constant (addition theorem), so Hoelder's inequality is an
equality and every quantity reduces to the two integer sums

    P(M) = sum_{n=1}^{M-1} (2n+3)(n+2)(n+1)          = 6 * sum alpha_n
    Q(M) = sum_{n=1}^{M-1} (2n+3)(n+3)(n+2)(n+1) n   = 6 * sum Lambda_n alpha_n

All sums are exact Python integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .special import constants

RICHARDSON_NODES = (10**3, 10**4, 10**5, 10**6)
EXTRAPOLATION_FAIL = 1e-4


@dataclass(frozen=True)
class SphereShell:
    d: int
    n: int
    eigenvalue: int
    multiplicity: int


@dataclass(frozen=True)
class ShellSums:
    M: int
    P: int
    Q: int


def shell(d: int, n: int) -> SphereShell:
    if d < 2 or n < 0:
        raise DomainError(f"shell needs d >= 2 and n >= 0, got d={d}, n={n}")
    mult = math.comb(d + n, n)
    if n >= 2:
        mult -= math.comb(d + n - 2, n - 2)
    return SphereShell(d=d, n=n, eigenvalue=n * (n + d - 1), multiplicity=mult)


def shell_sum_range(lo: int, hi: int) -> tuple[int, int]:
    """Partial sums of the P and Q summands over degrees lo <= n < hi.

    Disjoint ranges add exactly, so long sums may be split and merged.
    """
    p = q = 0
    for n in range(lo, hi):
        a = (2 * n + 3) * (n + 2) * (n + 1)
        p += a
        q += a * n * (n + 3)
    return p, q


@lru_cache(maxsize=64)
def shell_sums(M: int) -> ShellSums:
    if M < 2:
        raise DomainError(f"shell_sums needs M >= 2, got {M}")
    p, q = shell_sum_range(1, M)
    return ShellSums(M=M, P=p, Q=q)


def _interpolate_exact(xs: list[int], ys: list[int]) -> list[Fraction]:
    """Monomial coefficients (low to high) of the interpolating polynomial."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        # build prod_{j != i} (x - x_j) / (x_i - x_j)
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k, c in enumerate(basis):
            coeffs[k] += yi * c / denom
    return coeffs


@lru_cache(maxsize=1)
def shell_sum_polynomials() -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Exact coefficients (constant term first) of P and Q as polynomials in M.

    Recovered by interpolating exact sums at 7 points; used only as a cross-check.
    """
    xs = list(range(2, 9))
    ps = [shell_sums(m).P for m in xs]
    qs = [shell_sums(m).Q for m in xs]
    return tuple(_interpolate_exact(xs, ps)), tuple(_interpolate_exact(xs, qs))


def eval_polynomial(coeffs, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _ratio_rational(M: int) -> Fraction:
    s = shell_sums(M)
    return Fraction(s.P ** 3, 6 * s.Q ** 2)


def lower_bound_ratio(M: int) -> float:
    """r(M) = P^3 / (6 omega4 Q^2); K4(S^4) >= sqrt(r(M)) for every M >= 2."""
    return float(_ratio_rational(M)) / constants().omega4


def lower_bound_closed_form() -> float:
    return 3.0 / (8.0 * math.sqrt(2.0) * math.pi)


def richardson_limit(hs: list[Fraction], values: list[Fraction]) -> Fraction:
    """Neville extrapolation of values(h) to h = 0, exact in rational arithmetic."""
    table = list(values)
    n = len(hs)
    for level in range(1, n):
        for i in range(n - level):
            h_lo, h_hi = hs[i], hs[i + level]
            table[i] = (h_lo * table[i + 1] - h_hi * table[i]) / (h_lo - h_hi)
    return table[0]


@dataclass(frozen=True)
class LowerBoundLimit:
    closed_form: float
    extrapolated: float
    nodes: tuple[int, ...]
    disagreement: float
    passed: bool
    best_finite: float
    best_finite_M: int


def lower_bound_limit(nodes=RICHARDSON_NODES, finite_range=range(2, 101)) -> LowerBoundLimit:
    """Asymptotic lower bound on K4(S^4), closed form and extrapolated.

    The extrapolation runs in exact arithmetic on P^3/(6Q^2), which is a
    rational function of M, before dividing by omega4 and taking the root.
    ``passed`` is False (not an exception) if the two disagree beyond 1e-4.
    """
    hs = [Fraction(1, m) for m in nodes]
    vals = [_ratio_rational(m) for m in nodes]
    limit_ratio = float(richardson_limit(hs, vals)) / constants().omega4
    extrapolated = math.sqrt(limit_ratio)
    closed = lower_bound_closed_form()
    gap = abs(extrapolated - closed)

    best_M = max(finite_range, key=lambda m: _ratio_rational(m))
    return LowerBoundLimit(
        closed_form=closed,
        extrapolated=extrapolated,
        nodes=tuple(nodes),
        disagreement=gap,
        passed=gap <= EXTRAPOLATION_FAIL,
        best_finite=math.sqrt(lower_bound_ratio(best_M)),
        best_finite_M=best_M,
    )
