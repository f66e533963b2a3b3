"""Special functions, adaptive quadrature and the fixed constants of the problem.

Quadrature is an adaptive Gauss-Kronrod (7/15) scheme. A semi-infinite range
(a, inf) is mapped onto [0, 1) with t = a + s/(1 - s); every integrand used in
this package decays at least like t**-4, so the mapped integrand stays bounded.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, RangeError

DEFAULT_TOL = 1e-10
MAX_SUBDIVISIONS = 4000

# 15-point Kronrod nodes on [-1, 1]; the odd-indexed entries are the 7 Gauss nodes.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_WEIGHTS_K = np.concatenate([_WK[:-1], _WK[::-1]])
# Gauss weights laid out on the same 15 nodes (zero on the Kronrod-only ones).
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:3], [_WG[3]], _WG[2::-1]])


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    subdivisions: int
    converged: bool


def _as_vectorized(f: Callable) -> Callable[[np.ndarray], np.ndarray]:
    probe = np.array([0.25, 0.5])
    try:
        out = np.asarray(f(probe), dtype=float)
        if out.shape == probe.shape:
            return lambda x: np.asarray(f(x), dtype=float)
    except (TypeError, ValueError):
        pass
    return np.vectorize(lambda x: float(f(x)), otypes=[float])


def _gk15(fv, lo: float, hi: float) -> tuple[float, float]:
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    y = fv(mid + half * _NODES)
    k = half * float(np.dot(_WEIGHTS_K, y))
    g = half * float(np.dot(_WEIGHTS_G, y))
    return k, abs(k - g)


def integrate(f: Callable, a: float, b: float = math.inf, tol: float = DEFAULT_TOL,
              max_subdivisions: int = MAX_SUBDIVISIONS) -> QuadratureResult:
    """Integrate ``f`` over (a, b), where ``b`` may be ``math.inf``.

    ``f`` may accept a numpy array (preferred) or a scalar. The error estimate
    is the summed |K15 - G7| over all panels, which is pessimistic for smooth
    integrands. If the panel budget runs out the best value so far is returned
    with ``converged=False``.
    """
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if not math.isfinite(a):
        raise DomainError("lower limit must be finite")
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")

    fv = _as_vectorized(f)
    if math.isinf(b):
        def g(s):
            s = np.asarray(s, dtype=float)
            one_minus = 1.0 - s
            return fv(a + s / one_minus) / (one_minus * one_minus)
        lo, hi = 0.0, 1.0
    else:
        g = fv
        lo, hi = float(a), float(b)

    value, err = _gk15(g, lo, hi)
    # max-heap on panel error
    heap = [(-err, lo, hi, value)]
    total_val, total_err = value, err
    panels = 1
    while total_err > tol and panels < max_subdivisions:
        neg_err, p_lo, p_hi, p_val = heapq.heappop(heap)
        p_mid = 0.5 * (p_lo + p_hi)
        if not p_lo < p_mid < p_hi:
            heapq.heappush(heap, (neg_err, p_lo, p_hi, p_val))
            break
        v1, e1 = _gk15(g, p_lo, p_mid)
        v2, e2 = _gk15(g, p_mid, p_hi)
        heapq.heappush(heap, (-e1, p_lo, p_mid, v1))
        heapq.heappush(heap, (-e2, p_mid, p_hi, v2))
        panels += 1
        total_val += v1 + v2 - p_val
        total_err += e1 + e2 + neg_err

    total_val = math.fsum(item[3] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    return QuadratureResult(value=total_val, error_estimate=total_err,
                            subdivisions=panels, converged=total_err <= tol)


def beta(a: float, b: float) -> float:
    """Euler Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)."""
    if not (a > 0 and b > 0):
        raise DomainError(f"beta requires positive arguments, got ({a}, {b})")
    if a + b < 170:
        return math.gamma(a) * math.gamma(b) / math.gamma(a + b)
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


BERNOULLI_MAX = 32


@lru_cache(maxsize=None)
def _bernoulli_table() -> tuple[Fraction, ...]:
    # B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k, with the B_1 = -1/2 convention.
    table = [Fraction(1)]
    for m in range(1, BERNOULLI_MAX + 1):
        acc = sum((math.comb(m + 1, k) * table[k] for k in range(m)), Fraction(0))
        table.append(-acc / (m + 1))
    return tuple(table)


def bernoulli(j: int) -> Fraction:
    """Exact Bernoulli number B_j (B_1 = -1/2, odd j > 1 give 0)."""
    if not isinstance(j, (int, np.integer)) or isinstance(j, bool):
        raise RangeError(f"bernoulli index must be an integer, got {j!r}")
    if j < 0 or j > BERNOULLI_MAX:
        raise RangeError(f"bernoulli index {j} outside supported range [0, {BERNOULLI_MAX}]")
    return _bernoulli_table()[int(j)]


@dataclass(frozen=True)
class Constants:
    """Scales and geometric constants entering both upper-bound arguments."""

    rho: float
    mu: float
    omega3: float
    omega4: float
    beta_2_3_4_3: float
    c0: float
    cbar: float

    def c0_literal(self) -> float:
        """C0 as the unsimplified product B rho^2 / (9 omega4)."""
        return self.beta_2_3_4_3 * self.rho ** 2 / (9.0 * self.omega4)

    def cbar_literal(self) -> float:
        """Torus constant as mu^2 omega3 B / (96 pi^4)."""
        return self.mu ** 2 * self.omega3 * self.beta_2_3_4_3 / (96.0 * math.pi ** 4)


@lru_cache(maxsize=None)
def constants() -> Constants:
    scale = 4.0 * math.pi / (9.0 * math.sqrt(3.0))
    b = beta(2.0 / 3.0, 4.0 / 3.0)
    return Constants(
        rho=scale,
        mu=scale,
        omega3=2.0 * math.pi ** 2,
        omega4=8.0 * math.pi ** 2 / 3.0,
        beta_2_3_4_3=b,
        c0=2.0 * b / 729.0,
        cbar=b / 729.0,
    )
