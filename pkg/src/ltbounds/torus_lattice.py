"""Lattice side of the torus upper bound.

The high-momentum kernel on T^4 has squared norm (1/16 pi^4) sum_{k != 0} phi(k/nu)
with phi(x) = 1/(1 + |x|^6)^2 and nu = sqrt(mu E). The bound needs this lattice
sum to stay below nu^4 int_{R^4} phi = nu^4 omega3 B(2/3,4/3)/6 for every nu.
Sums run shell by shell over |k|^2 = n using exact counts r4(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, RangeError
from .special import constants, integrate
from .sphere_momentum import SeriesEstimate

MAX_TABLE = 1 << 22
MIN_TABLE = 1 << 10


@dataclass(frozen=True)
class LatticeShellTable:
    """r4(n) for 0 <= n <= max_norm_sq, indexable as ``table[n]``."""

    max_norm_sq: int
    counts: np.ndarray

    def __getitem__(self, n: int) -> int:
        return int(self.counts[n])

    def __len__(self) -> int:
        return self.max_norm_sq + 1

    def as_dict(self) -> dict[int, int]:
        return {n: int(c) for n, c in enumerate(self.counts)}


def _exact_convolve(a: np.ndarray, b: np.ndarray, size: int) -> np.ndarray:
    """First ``size`` entries of a*b for nonnegative integer arrays, exactly."""
    if size <= 1 << 14:
        return np.convolve(a, b)[:size].astype(np.int64)
    n_fft = 1 << int(math.ceil(math.log2(2 * size)))
    fa = np.fft.rfft(a.astype(float), n_fft)
    fb = np.fft.rfft(b.astype(float), n_fft)
    raw = np.fft.irfft(fa * fb, n_fft)[:size]
    out = np.rint(raw).astype(np.int64)
    if np.max(np.abs(raw - out)) > 0.25:
        raise RangeError("FFT convolution lost integer precision")
    return out


def r2_counts(max_norm_sq: int) -> np.ndarray:
    """Number of (a, b) in Z^2 with a^2 + b^2 = n, by enumeration."""
    r = math.isqrt(max_norm_sq)
    v = np.arange(-r, r + 1, dtype=np.int64) ** 2
    norms = (v[:, None] + v[None, :]).ravel()
    return np.bincount(norms[norms <= max_norm_sq], minlength=max_norm_sq + 1).astype(np.int64)


def jacobi_r4(max_norm_sq: int) -> np.ndarray:
    """8 * sum_{d | n, 4 does not divide d} d for 0 <= n <= max_norm_sq (r4(0) = 1)."""
    N = max_norm_sq
    sig = np.zeros(N + 1, dtype=np.int64)
    root = math.isqrt(N)
    # small divisors d <= root: stride over their multiples
    for d in range(1, root + 1):
        if d % 4:
            sig[d::d] += d
    # large divisors d > root pair with cofactors q < N/root
    for q in range(1, N // (root + 1) + 1):
        d = np.arange(root + 1, N // q + 1, dtype=np.int64)
        d = d[d % 4 != 0]
        sig[q * d] += d
    out = 8 * sig
    out[0] = 1
    return out


@lru_cache(maxsize=8)
def r4_table(max_norm_sq: int) -> LatticeShellTable:
    """Exact r4 counts by enumeration (pairs of Z^2 points), checked against Jacobi."""
    if max_norm_sq < 1:
        raise DomainError("max_norm_sq must be >= 1")
    if max_norm_sq > MAX_TABLE:
        raise RangeError(f"r4 table limited to n <= {MAX_TABLE}")
    r2 = r2_counts(max_norm_sq)
    counts = _exact_convolve(r2, r2, max_norm_sq + 1)
    if not np.array_equal(counts, jacobi_r4(max_norm_sq)):
        raise RangeError("enumerated r4 disagrees with Jacobi's formula")
    counts.setflags(write=False)
    return LatticeShellTable(max_norm_sq=max_norm_sq, counts=counts)


def phi(x_norm_sq):
    s = np.asarray(x_norm_sq, dtype=float)
    if np.any(s < 0):
        raise DomainError("phi takes a squared norm >= 0")
    out = 1.0 / (1.0 + s ** 3) ** 2
    return float(out) if out.ndim == 0 else out


def _lattice_tail(N: int, nu: float) -> float:
    # r4(n) <= 8 sigma(n) <= 8 n (1 + ln n) and phi(n/nu^2) <= nu^12 / n^6; the
    # majorant is decreasing for n >= 1, so the tail is below its integral from N.
    return 8.0 * nu ** 12 * ((1.0 + math.log(N)) / (4.0 * N ** 4) + 1.0 / (16.0 * N ** 4))


def _table_size_for(nu: float, tol: float) -> int:
    size = MIN_TABLE
    while size < MAX_TABLE and _lattice_tail(size, nu) > tol:
        size <<= 1
    # shrink to the smallest multiple of MIN_TABLE that still meets tol
    lo, hi = MIN_TABLE, size
    while lo < hi:
        mid = (lo + hi) // 2
        if _lattice_tail(mid, nu) <= tol:
            hi = mid
        else:
            lo = mid + 1
    return max(lo, MIN_TABLE)


def _shared_table(size: int) -> LatticeShellTable:
    # reuse one power-of-two table for all requests up to that size
    cap = MIN_TABLE
    while cap < size:
        cap <<= 1
    return r4_table(cap)


def lattice_sum(nu: float, tol: float | None = None) -> SeriesEstimate:
    """sum_{k in Z^4 \\ 0} phi(k / nu) as a shell sum with a rigorous tail bound.

    Default tolerance is 1e-10 * max(1, nu^4 * int phi).
    """
    if not nu > 0:
        raise DomainError(f"lattice_sum needs nu > 0, got {nu}")
    if tol is None:
        tol = 1e-10 * max(1.0, nu ** 4 * continuum_integral())
    elif not tol > 0:
        raise DomainError("tol must be positive")
    N = _table_size_for(nu, tol)
    table = _shared_table(N)
    n = np.arange(1, N + 1, dtype=float)
    terms = table.counts[1:N + 1] * phi(n / (nu * nu))
    return SeriesEstimate(value=math.fsum(terms), terms_used=N,
                          tail_bound=_lattice_tail(N, nu), parameter=nu, tol=tol)


def continuum_integral() -> float:
    """int_{R^4} phi = omega3 B(2/3,4/3) / 6 (closed form)."""
    c = constants()
    return c.omega3 * c.beta_2_3_4_3 / 6.0


def radial_continuum_integral(tol: float = 1e-12):
    """omega3 * int_0^inf r^3 / (1 + r^6)^2 dr by quadrature."""
    c = constants()
    q = integrate(lambda r: r ** 3 / (1.0 + r ** 6) ** 2, 0.0, math.inf, tol=tol)
    return q.__class__(value=c.omega3 * q.value, error_estimate=c.omega3 * q.error_estimate,
                       subdivisions=q.subdivisions, converged=q.converged)


@dataclass(frozen=True)
class PoissonAudit:
    nu: float
    lattice_value: SeriesEstimate
    continuum_value: float
    gap: float
    verdict: bool

    @property
    def relative_gap(self) -> float:
        return self.gap / self.continuum_value


def poisson_audit(nu: float, tol: float | None = None) -> PoissonAudit:
    """Check lattice_sum(nu) + tail <= nu^4 omega3 B / 6."""
    est = lattice_sum(nu, tol)
    cont = nu ** 4 * continuum_integral()
    return PoissonAudit(nu=nu, lattice_value=est, continuum_value=cont,
                        gap=est.value - cont, verdict=est.upper <= cont)


def nu_grid(nu_max: float = 20.0, step: float = 0.1) -> list[float]:
    if not (step > 0 and nu_max >= step):
        raise DomainError("need step > 0 and nu_max >= step")
    count = int(math.floor(nu_max / step + 1e-9))
    return [round(k * step, 12) for k in range(1, count + 1)]


def torus_upper_bound() -> float:
    """3 sqrt(Cbar) = sqrt(B(2/3,4/3)) / 9."""
    return 3.0 * math.sqrt(constants().cbar)
