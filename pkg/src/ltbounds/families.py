"""Direct evaluation of the kinetic-energy inequality on explicit families.

For an orthonormal family u_1..u_N the tested quantity is

    ratio = int (sum_j |u_j|^2)^{3/2} / sum_j int |grad u_j|^2,

which is a lower bound for K4 of the manifold. Torus functions are written as
u_j = (1 / 4 pi^2) sum_k c_{jk} e^{i k.x} on [0, 2 pi]^4.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError, FamilyValidationError
from .special import constants
from .sphere_spectrum import shell_sums

GRAM_TOL = 1e-10
QUAD_REL_TOL = 1e-8
MAX_QUAD_POINTS = 64
TORUS_VOLUME = (2.0 * math.pi) ** 4
BASIS_DENSITY = 1.0 / (16.0 * math.pi ** 4)  # |e^{ikx} / 4 pi^2|^2


@dataclass(frozen=True)
class FamilyRatio:
    family_id: str
    lhs: float
    rhs: float
    ratio: float
    flags: tuple[str, ...] = ()


def sphere_shell_family(M: int) -> FamilyRatio:
    """All spherical harmonics of degrees 1..M-1 on S^4 (constant density)."""
    if M < 2:
        raise DomainError(f"sphere_shell_family needs M >= 2, got {M}")
    omega4 = constants().omega4
    s = shell_sums(M)
    density = s.P / (6.0 * omega4)
    lhs = omega4 * density ** 1.5
    rhs = s.Q / 6.0
    return FamilyRatio(family_id=f"sphere-shells M={M}", lhs=lhs, rhs=rhs, ratio=lhs / rhs)


def torus_box_family(M: int, include_zero_mode: bool = False) -> FamilyRatio:
    """Exponentials e^{im.x}/(4 pi^2) with 0 <= m_k <= M.

    With ``include_zero_mode`` the constant function is kept, which breaks the
    mean-zero hypothesis; the result is then flagged.
    """
    if M < 1:
        raise DomainError(f"torus_box_family needs M >= 1, got {M}")
    count = (M + 1) ** 4 - (0 if include_zero_mode else 1)
    lhs = TORUS_VOLUME * (count * BASIS_DENSITY) ** 1.5
    rhs = 2.0 * M * (M + 1) ** 4 * (2 * M + 1) / 3.0
    flags = ("includes-zero-mode",) if include_zero_mode else ()
    variant = "with zero mode" if include_zero_mode else "mean-zero"
    return FamilyRatio(family_id=f"torus-box M={M} ({variant})", lhs=lhs, rhs=rhs,
                       ratio=lhs / rhs, flags=flags)


def torus_box_ratio_exact(M: int, include_zero_mode: bool = False) -> float:
    """Same ratio simplified: count^{3/2} / (4 pi^2 rhs)."""
    count = (M + 1) ** 4 - (0 if include_zero_mode else 1)
    rhs = 2 * M * (M + 1) ** 4 * (2 * M + 1) / 3
    return count ** 1.5 / (4.0 * math.pi ** 2 * rhs)


def torus_lower_closed_form() -> float:
    return 3.0 / (16.0 * math.pi ** 2)


def extrapolate_in_inverse(nodes: Sequence[int], values: Sequence[float]) -> float:
    """Neville extrapolation of values(1/M) to 1/M = 0."""
    hs = [1.0 / m for m in nodes]
    table = list(values)
    n = len(hs)
    for level in range(1, n):
        for i in range(n - level):
            table[i] = (hs[i] * table[i + 1] - hs[i + level] * table[i]) / (hs[i] - hs[i + level])
    return table[0]


@dataclass
class TrigFamily:
    frequencies: np.ndarray            # (F, 4) integers, none zero
    coefficients: np.ndarray           # (N, F) complex
    normalization: float = field(default=1.0 / (4.0 * math.pi ** 2))

    def __post_init__(self):
        self.frequencies = np.asarray(self.frequencies, dtype=np.int64).reshape(-1, 4)
        self.coefficients = np.atleast_2d(np.asarray(self.coefficients, dtype=complex))
        if self.coefficients.shape[1] != self.frequencies.shape[0]:
            raise FamilyValidationError(
                f"coefficient matrix has {self.coefficients.shape[1]} columns "
                f"for {self.frequencies.shape[0]} frequencies")

    @property
    def size(self) -> int:
        return self.coefficients.shape[0]

    def gram_deviation(self) -> float:
        c = self.coefficients
        gram = c @ c.conj().T
        return float(np.max(np.abs(gram - np.eye(c.shape[0]))))

    def validate(self) -> None:
        if np.any(np.all(self.frequencies == 0, axis=1)):
            raise FamilyValidationError("zero frequency present; family is not mean-zero")
        if len({tuple(k) for k in self.frequencies}) != len(self.frequencies):
            raise FamilyValidationError("duplicate frequencies")
        dev = self.gram_deviation()
        if dev > GRAM_TOL:
            raise FamilyValidationError(f"Gram matrix deviates from identity by {dev:.3e}")

    def kinetic_energy(self) -> float:
        """sum_j ||grad u_j||^2 = sum_{j,k} |k|^2 |c_jk|^2, exact."""
        k2 = np.sum(self.frequencies ** 2, axis=1).astype(float)
        return float(np.sum(np.abs(self.coefficients) ** 2 * k2[None, :]))

    def max_frequency(self) -> int:
        return int(np.max(np.abs(self.frequencies)))

    def permuted(self, order: Sequence[int]) -> "TrigFamily":
        return TrigFamily(self.frequencies.copy(), self.coefficients[list(order)].copy())

    # -- text I/O ---------------------------------------------------------

    def to_json(self) -> str:
        coeffs = [[[float(z.real), float(z.imag)] for z in row] for row in self.coefficients]
        return json.dumps({"frequencies": self.frequencies.tolist(), "coefficients": coeffs},
                          indent=2)

    @classmethod
    def from_json(cls, text: str) -> "TrigFamily":
        """Parse {"frequencies": [[k1,k2,k3,k4], ...], "coefficients": [[[re, im], ...], ...]}.

        The family is validated before it is returned.
        """
        try:
            doc = json.loads(text)
            freqs = doc["frequencies"]
            rows = doc["coefficients"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise FamilyValidationError(f"malformed family document: {exc}") from exc
        if any(len(k) != 4 for k in freqs):
            raise FamilyValidationError("each frequency must have 4 integer components")
        if any(not all(isinstance(v, int) for v in k) for k in freqs):
            raise FamilyValidationError("frequencies must be integers")
        try:
            coeffs = [[complex(float(p[0]), float(p[1])) for p in row] for row in rows]
        except (TypeError, ValueError, IndexError) as exc:
            raise FamilyValidationError(f"coefficients must be [re, im] pairs: {exc}") from exc
        if not freqs or not coeffs or any(len(row) != len(freqs) for row in coeffs):
            raise FamilyValidationError("need one [re, im] pair per frequency in every member")
        fam = cls(np.array(freqs, dtype=np.int64), np.array(coeffs, dtype=complex))
        fam.validate()
        return fam

    @classmethod
    def load(cls, path) -> "TrigFamily":
        return cls.from_json(Path(path).read_text())


def real_trig_family(modes: Sequence[Sequence[int]], kinds: Sequence[str] | None = None) -> TrigFamily:
    """Family of sqrt(2) cos(k.x) / 4 pi^2 and sqrt(2) sin(k.x) / 4 pi^2 functions.

    ``kinds`` picks "cos" or "sin" per mode (default: cos). Each mode uses the
    pair of frequencies +k, -k, so modes must not repeat up to sign unless a
    cos and sin of the same k are both wanted.
    """
    kinds = list(kinds) if kinds is not None else ["cos"] * len(modes)
    freq_index: dict[tuple[int, ...], int] = {}
    for k in modes:
        for sign in (1, -1):
            kk = tuple(sign * int(v) for v in k)
            freq_index.setdefault(kk, len(freq_index))
    coeffs = np.zeros((len(modes), len(freq_index)), dtype=complex)
    s = 1.0 / math.sqrt(2.0)
    for j, (k, kind) in enumerate(zip(modes, kinds)):
        plus = freq_index[tuple(int(v) for v in k)]
        minus = freq_index[tuple(-int(v) for v in k)]
        if kind == "cos":
            coeffs[j, plus] += s
            coeffs[j, minus] += s
        elif kind == "sin":
            coeffs[j, plus] += -1j * s
            coeffs[j, minus] += 1j * s
        else:
            raise DomainError(f"unknown kind {kind!r}")
    freqs = np.array(list(freq_index), dtype=np.int64)
    fam = TrigFamily(freqs, coeffs)
    fam.validate()
    return fam


def random_trig_family(rng: np.random.Generator, n_frequencies: int, n_members: int,
                       max_component: int = 3) -> TrigFamily:
    """Random orthonormal family: distinct nonzero frequencies, QR-orthonormalized rows."""
    if not 1 <= n_members <= n_frequencies:
        raise DomainError("need 1 <= n_members <= n_frequencies")
    chosen: set[tuple[int, ...]] = set()
    while len(chosen) < n_frequencies:
        k = tuple(int(v) for v in rng.integers(-max_component, max_component + 1, size=4))
        if any(k):
            chosen.add(k)
    freqs = np.array(sorted(chosen), dtype=np.int64)
    raw = rng.standard_normal((n_frequencies, n_members)) + 1j * rng.standard_normal((n_frequencies, n_members))
    q, _ = np.linalg.qr(raw)
    return TrigFamily(freqs, q.T.copy())


def _density_slab(family: TrigFamily, q: int, m0: int) -> np.ndarray:
    """sum_j |u_j|^2 on the q^3 slab x_0 = 2 pi m0 / q of the tensor grid."""
    k0 = family.frequencies[:, 0]
    phase = np.exp(2j * np.pi * k0 * m0 / q)
    idx = tuple((family.frequencies[:, 1:] % q).T)
    density = np.zeros((q,) * 3)
    for row in family.coefficients:
        spec = np.zeros((q,) * 3, dtype=complex)
        np.add.at(spec, idx, row * phase)
        # ifftn carries 1/q^3; undo it to get plain sum_k c_k e^{ik.x}
        vals = np.fft.ifftn(spec) * q ** 3
        density += vals.real ** 2 + vals.imag ** 2
    return density * family.normalization ** 2


def _trapezoid_lhs(family: TrigFamily, q: int) -> float:
    # one x_0 slab at a time keeps memory at O(q^3)
    partials = [float(np.sum(_density_slab(family, q, m0) ** 1.5)) for m0 in range(q)]
    return TORUS_VOLUME * math.fsum(partials) / q ** 4


def trig_family_ratio(family: TrigFamily, quad_points_per_axis: int | None = None,
                      rel_tol: float = QUAD_REL_TOL, max_points: int = MAX_QUAD_POINTS) -> FamilyRatio:
    """Ratio for a trigonometric family on T^4.

    The kinetic term is exact. The 3/2-power integral uses the periodic
    trapezoid rule, doubling the grid until two successive values agree to
    ``rel_tol``; if ``max_points`` is reached first the result is flagged.
    """
    family.validate()
    q_min = 2 * family.max_frequency() + 2
    q = max(q_min, quad_points_per_axis or q_min)
    if q > max_points:
        raise DomainError(f"need at least {q} points per axis, above the cap {max_points}")
    prev = _trapezoid_lhs(family, q)
    converged = False
    while 2 * q <= max_points:
        q *= 2
        cur = _trapezoid_lhs(family, q)
        if abs(cur - prev) <= rel_tol * abs(cur):
            prev, converged = cur, True
            break
        prev = cur
    rhs = family.kinetic_energy()
    flags = () if converged else (f"quadrature-not-converged@{q}",)
    return FamilyRatio(family_id=f"trig N={family.size} F={len(family.frequencies)}",
                       lhs=prev, rhs=rhs, ratio=prev / rhs, flags=flags)


def dual_constant(K: float, d: int) -> float:
    """L with ((1 + d/2) L)^{1 + 2/d} ((1 + 2/d) K)^{1 + d/2} = 1."""
    if not K > 0:
        raise DomainError(f"K must be positive, got {K}")
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    p, q = 1.0 + d / 2.0, 1.0 + 2.0 / d
    return (q * K) ** (-p / q) / p


def kinetic_constant(L: float, d: int) -> float:
    """Inverse of :func:`dual_constant`: recover K from L."""
    if not L > 0:
        raise DomainError(f"L must be positive, got {L}")
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    p, q = 1.0 + d / 2.0, 1.0 + 2.0 / d
    return (p * L) ** (-q / p) / q
