"""Audit assembly and canonical report serialization.

Every command builds a :class:`Report`. Its body is deterministic for fixed
options; run metadata (version, tolerances, timestamp) lives in a separate
provenance block. Floats are written as 12-significant-digit strings with
sorted keys, so a parsed and re-serialized report is byte-identical.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import platform
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Iterable

import numpy as np

from . import __version__
from .families import (
    TrigFamily,
    dual_constant,
    extrapolate_in_inverse,
    kinetic_constant,
    sphere_shell_family,
    torus_box_family,
    torus_box_ratio_exact,
    torus_lower_closed_form,
    trig_family_ratio,
)
from .special import beta, constants, integrate
from .sphere_momentum import (
    default_energy_grid,
    delta_crossover,
    delta_e,
    delta_sign_audit,
    em_linear_coefficient,
    euler_maclaurin_audit,
    kernel_chain_audit,
    kernel_g,
    spectral_ratio_audit,
    spectral_ratio,
    sphere_upper_bound,
    spectral_series,
)
from .sphere_spectrum import lower_bound_limit, lower_bound_ratio, shell_sum_range
from .torus_lattice import (
    continuum_integral,
    jacobi_r4,
    nu_grid,
    poisson_audit,
    r4_table,
    radial_continuum_integral,
    torus_upper_bound,
)

SIG_DIGITS = 12
EM_AUDIT_NUS = (0.5, 0.1, 0.02, 0.005)
TORUS_EXTRAPOLATION_NODES = (10**2, 10**3, 10**4)
LARGE_ENERGIES = (10.0, 100.0, 1000.0)

PUBLISHED_BOUNDS = {
    "sphere_lower": 0.0844,
    "sphere_upper": 0.1728,
    "torus_lower": 0.0190,
    "torus_upper": 0.1222,
}


@dataclass
class Defaults:
    e_max: float = 5.0
    step: float = 0.01
    nu_max: float = 20.0
    nu_step: float = 0.1
    shells: int = 100
    box: int = 20
    tol: float | None = None


@dataclass(frozen=True)
class AuditEntry:
    name: str
    grid: str
    verdict: bool
    worst_margin: float
    detail: str = ""


@dataclass
class Report:
    command: str
    values: dict[str, Any] = field(default_factory=dict)
    audits: list[AuditEntry] = field(default_factory=list)
    findings: list[dict[str, Any]] = field(default_factory=list)
    table: dict[str, Any] | None = None

    @property
    def passed(self) -> bool:
        return all(a.verdict for a in self.audits)

    def failing(self) -> list[str]:
        return [a.name for a in self.audits if not a.verdict]

    def body(self) -> dict[str, Any]:
        out: dict[str, Any] = {"command": self.command, "passed": self.passed}
        out.update(self.values)
        out["audits"] = [dataclasses.asdict(a) for a in self.audits]
        if self.findings:
            out["findings"] = self.findings
        if self.table is not None:
            out["table"] = self.table
        return out


@dataclass
class BoundsCertificate:
    sphere_lower_asymptotic: float
    sphere_lower_best_finite: float
    sphere_lower_best_M: int
    sphere_upper: float
    torus_lower_asymptotic: float
    torus_lower_best_finite: float
    torus_lower_best_M: int
    torus_upper: float
    dual_L_values: dict[str, float]
    delta_crossover: float
    audits: list[AuditEntry]
    findings: list[dict[str, Any]]

    @property
    def passed(self) -> bool:
        return all(a.verdict for a in self.audits)


# --- serialization -----------------------------------------------------------

def format_number(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, f".{SIG_DIGITS}g")


def canonical(obj: Any) -> Any:
    """JSON-safe copy with floats as fixed-precision strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return format_number(float(obj))
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return canonical(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [canonical(v) for v in obj.tolist()]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc: Any) -> str:
    return json.dumps(canonical(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def provenance(defaults: Defaults) -> dict[str, Any]:
    return {
        "tool": "ltbounds",
        "tool_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "timestamp_utc": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        "tolerances": {
            "quadrature": 1e-10,
            "series": defaults.tol if defaults.tol is not None else "1e-10 relative",
            "report_significant_digits": SIG_DIGITS,
        },
        "grids": {
            "energy": f"[{defaults.step:g}, {defaults.e_max:g}] step {defaults.step:g}",
            "nu": f"[{defaults.nu_step:g}, {defaults.nu_max:g}] step {defaults.nu_step:g}",
        },
    }


def to_json(report: Report, defaults: Defaults) -> str:
    return dumps({"provenance": provenance(defaults), "report": report.body()})


def _flatten(prefix: str, obj: Any, out: list[tuple[str, str]]) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, "" if obj is None else str(obj).lower() if isinstance(obj, bool) else str(obj)))


def to_csv(report: Report, defaults: Defaults) -> str:
    buf = io.StringIO()
    prov: list[tuple[str, str]] = []
    _flatten("", canonical(provenance(defaults)), prov)
    for k, v in prov:
        buf.write(f"# {k}: {v}\n")
    writer = csv.writer(buf, lineterminator="\n")
    body = canonical(report.body())
    table = body.pop("table", None)
    rows: list[tuple[str, str]] = []
    _flatten("", body, rows)
    writer.writerow(["key", "value"])
    writer.writerows(rows)
    if table is not None:
        buf.write("\n")
        writer.writerow(table["columns"])
        writer.writerows([[str(v).lower() if isinstance(v, bool) else v for v in row] for row in table["rows"]])
    return buf.getvalue()


# --- audit builders ----------------------------------------------------------

def _entry(name: str, grid: str, margin: float, detail: str = "") -> AuditEntry:
    """Audit passes iff margin <= 0."""
    return AuditEntry(name=name, grid=grid, verdict=bool(margin <= 0.0), worst_margin=margin, detail=detail)


def constants_audits() -> list[AuditEntry]:
    c = constants()
    b_closed = 2.0 * math.pi / (3.0 * math.sqrt(3.0))
    rel = max(abs(c.c0_literal() / c.c0 - 1.0), abs(c.cbar_literal() / c.cbar - 1.0),
              abs(c.rho - c.mu) / c.rho, abs(c.beta_2_3_4_3 / b_closed - 1.0))
    norm = integrate(lambda t: kernel_g(t, c.rho) ** 2, 0.0, math.inf, tol=1e-12)
    g_int = integrate(lambda t: t / (1.0 + t ** 3) ** 2, 0.0, math.inf, tol=1e-12)
    rad = radial_continuum_integral()
    cont = continuum_integral()
    upper_rel = max(abs(sphere_upper_bound() / (math.sqrt(2.0 * c.beta_2_3_4_3) / 9.0) - 1.0),
                    abs(torus_upper_bound() / (math.sqrt(c.beta_2_3_4_3) / 9.0) - 1.0))
    quad_rel = max(abs(g_int.value / (c.beta_2_3_4_3 / 3.0) - 1.0), abs(rad.value / cont - 1.0))
    return [
        _entry("constant_identities", "C0, Cbar, rho = mu, B = 2pi/(3 sqrt 3)", rel - 1e-14,
               f"max relative deviation {rel:.3e}"),
        _entry("kernel_normalization", "int_0^inf g^2, rho = 4pi/(9 sqrt 3)",
               abs(norm.value - 1.0) - 1e-10, f"integral {norm.value:.15f}"),
        _entry("upper_bound_closed_forms", "3 sqrt(C0) vs sqrt(2B)/9; 3 sqrt(Cbar) vs sqrt(B)/9",
               upper_rel - 1e-12, f"max relative deviation {upper_rel:.3e}"),
        _entry("closed_form_vs_quadrature", "int G = B/3; omega3 int r^3 phi(r) dr = omega3 B/6",
               quad_rel - 1e-10, f"max relative deviation {quad_rel:.3e}"),
    ]


def sphere_lower_audits(shells: int = 100, monotone_upto: int = 1000):
    lim = lower_bound_limit()
    entries = [
        _entry("sphere_lower_extrapolation", "Richardson in 1/M over M = 1e3..1e6",
               lim.disagreement - 1e-6,
               f"closed {lim.closed_form:.12f}, extrapolated {lim.extrapolated:.12f}"),
    ]
    # r(M) strictly decreasing, from running exact sums
    p = q = 0
    prev = None
    worst = -math.inf
    for M in range(2, max(monotone_upto, shells) + 1):
        dp, dq = shell_sum_range(M - 1, M)
        p, q = p + dp, q + dq
        cur = (p ** 3, q ** 2)
        if prev is not None:
            # r(M) - r(M-1) sign via cross multiplication of P^3/Q^2
            diff = cur[0] * prev[1] - prev[0] * cur[1]
            worst = max(worst, 1.0 if diff >= 0 else -1.0)
        prev = cur
    entries.append(_entry("sphere_ratio_monotone", f"r(M) strictly decreasing on M in [2, {max(monotone_upto, shells)}]",
                          worst, "sign of r(M) - r(M-1)"))
    return lim, entries


def sphere_upper_audits(e_max: float | None = None, step: float = 0.01):
    """delta and spectral ratio audits up to min(e_max, E*); e_max=None audits all of [step, E*]."""
    d_audit = delta_sign_audit(e_max=e_max, step=step)
    s_audit = spectral_ratio_audit(e_max=e_max, step=step)
    chain_top = e_max if e_max is not None else 5.0
    chain_grid = default_energy_grid(chain_top, step) + list(LARGE_ENERGIES)
    chain = kernel_chain_audit(chain_grid)
    entries = [
        AuditEntry("delta_sign", d_audit.description, d_audit.verdict, d_audit.worst_margin,
                   f"{len(d_audit.grid)} points, max delta {d_audit.worst_margin:.6e}"),
        _entry("spectral_ratio", s_audit.description, s_audit.worst_margin,
               f"{len(s_audit.grid)} points, max ratio {s_audit.worst_margin + 1.0:.9f}"),
        _entry("kernel_chain", f"E in [{step:g}, {chain_top:g}] step {step:g} and E in {LARGE_ENERGIES}",
               chain.worst_margin, chain.description),
    ]
    return d_audit, s_audit, entries


def euler_maclaurin_audits(nus=EM_AUDIT_NUS):
    audits = [euler_maclaurin_audit(nu) for nu in nus]
    ineq = max(a.series_value + a.series_tail - a.integral_value for a in audits)
    quad = max(abs(a.integral_quadrature / a.integral_value - 1.0) for a in audits)
    lead = max(abs(t / p - 1.0) for a in audits for t, p in zip(a.derivative_table[:3], a.derivative_leading[:3]))
    exact = max(abs(t / e - 1.0) for a in audits for t, e in zip(a.derivative_table, a.derivative_exact))
    grid = f"nu in {tuple(nus)}"
    entries = [
        _entry("euler_maclaurin_inequality", grid, ineq, "max of sum R(n) + tail - B/(3 nu)"),
        _entry("euler_maclaurin_integral", grid, quad - 1e-8, f"quadrature vs closed form, max rel {quad:.3e}"),
        _entry("em_derivatives_leading", grid, lead - 1e-4, f"R', R'', R''' vs 9nu, 18nu, 12nu; max rel {lead:.3e}"),
        _entry("em_derivatives_taylor", grid, exact - 1e-4,
               f"R^(1..5)(0) vs exact Taylor values; max rel {exact:.3e}"),
    ]
    fit = em_linear_coefficient()
    findings = [
        {
            "claim": "R''''(0) = R'''''(0) = 0",
            "published": [0.0, 0.0],
            "computed_at_nu": {format_number(a.nu): a.derivative_table[3:] for a in audits},
            "exact": "-11664 nu^4, -116640 nu^4 (G(t) = t - 2t^4 + ...)",
            "status": "holds only at first order in nu",
        },
        {
            "claim": "sum R(n) - int R = -(11/25) nu + O(nu^2)",
            "published": fit.published_value,
            "empirical_intercept": fit.intercept,
            "boundary_term_prediction": fit.boundary_prediction,
            "fit_nus": list(fit.nus),
            "scaled_gaps": list(fit.scaled_gaps),
            "variation": fit.variation,
            "status": "reported, not asserted",
        },
    ]
    return audits, fit, entries, findings


def torus_lower_values(box: int = 20):
    exact = [torus_box_ratio_exact(m) for m in TORUS_EXTRAPOLATION_NODES]
    exact_zero = [torus_box_ratio_exact(m, True) for m in TORUS_EXTRAPOLATION_NODES]
    extrap = extrapolate_in_inverse(TORUS_EXTRAPOLATION_NODES, exact)
    extrap_zero = extrapolate_in_inverse(TORUS_EXTRAPOLATION_NODES, exact_zero)
    closed = torus_lower_closed_form()
    families = [torus_box_family(m) for m in range(1, box + 1)]
    best = max(families, key=lambda f: f.ratio)
    best_M = families.index(best) + 1
    gap = max(abs(extrap - closed), abs(extrap_zero - closed))
    entry = _entry("torus_lower_extrapolation", f"Richardson in 1/M over M = {TORUS_EXTRAPOLATION_NODES}",
                   gap - 1e-5, f"mean-zero {extrap:.10f}, with zero mode {extrap_zero:.10f}, closed {closed:.10f}")
    return {"closed": closed, "extrapolated": extrap, "extrapolated_with_zero_mode": extrap_zero,
            "best": best.ratio, "best_M": best_M}, entry


def torus_upper_audits(nu_max: float = 20.0, nu_step: float = 0.1, tol: float | None = None,
                       r4_check: int = 10**4):
    grid = nu_grid(nu_max, nu_step)
    audits = [poisson_audit(nu, tol) for nu in grid]
    worst = max(a.lattice_value.upper - a.continuum_value for a in audits)
    table = r4_table(r4_check)
    mismatch = int(np.count_nonzero(table.counts != jacobi_r4(r4_check)))
    entries = [
        _entry("r4_jacobi", f"n <= {r4_check}", float(mismatch), "enumerated r4(n) vs 8 sum_{d|n, 4 !| d} d"),
        _entry("poisson_lattice", f"nu in [{nu_step:g}, {nu_max:g}] step {nu_step:g}", worst,
               "max of lattice sum + tail - nu^4 int phi"),
    ]
    if nu_max >= 20.0:
        a20 = poisson_audit(20.0, tol)
        entries.append(_entry("poisson_closeness", "nu = 20", abs(a20.relative_gap) - 1e-3,
                              f"relative gap {a20.relative_gap:.3e}"))
    return audits, entries


def family_audits(shells: int = 100, box: int = 20) -> list[AuditEntry]:
    s_up, t_up = sphere_upper_bound(), torus_upper_bound()
    s_worst = max(sphere_shell_family(m).ratio for m in range(2, shells + 1)) - s_up
    t_worst = max(max(torus_box_family(m).ratio, torus_box_family(m, True).ratio)
                  for m in range(1, box + 1)) - t_up
    consistency = max(abs(sphere_shell_family(m).ratio ** 2 / lower_bound_ratio(m) - 1.0)
                      for m in range(2, shells + 1))
    return [
        _entry("sphere_family_respects_upper", f"shell families M in [2, {shells}]", s_worst,
               "max ratio - sqrt(2B)/9"),
        _entry("torus_family_respects_upper", f"box families M in [1, {box}], both variants", t_worst,
               "max ratio - sqrt(B)/9"),
        _entry("sphere_family_consistency", f"M in [2, {shells}]", consistency - 1e-12,
               "ratio^2 vs P^3/(6 omega4 Q^2)"),
    ]


def duality_audit() -> AuditEntry:
    worst = abs(dual_constant(2.0 / 3.0, 4) - 1.0 / 3.0)
    for K in (0.0190, 0.0844, 0.1222, 0.1728, 2.0 / 3.0, 1.7):
        for d in (2, 3, 4):
            worst = max(worst, abs(kinetic_constant(dual_constant(K, d), d) / K - 1.0))
    return _entry("duality_round_trip", "K in {0.019, 0.0844, 0.1222, 0.1728, 2/3, 1.7}, d in {2,3,4}",
                      worst - 1e-12, "K -> L -> K and L(2/3) = 1/3 at d = 4")


# --- command reports ---------------------------------------------------------

def constants_report(defaults: Defaults) -> Report:
    c = constants()
    values = dataclasses.asdict(c)
    values.update({
        "c0_literal": c.c0_literal(),
        "cbar_literal": c.cbar_literal(),
        "sphere_upper": sphere_upper_bound(),
        "torus_upper": torus_upper_bound(),
        "continuum_integral": continuum_integral(),
        "beta_closed_form": 2.0 * math.pi / (3.0 * math.sqrt(3.0)),
        "beta_gamma_route": beta(2.0 / 3.0, 4.0 / 3.0),
    })
    return Report("constants", values=values, audits=constants_audits())


def sphere_lower_report(defaults: Defaults) -> Report:
    lim, entries = sphere_lower_audits(defaults.shells)
    Ms = list(range(2, defaults.shells + 1)) + [10**3, 10**4, 10**5, 10**6]
    rows = []
    from .sphere_spectrum import shell_sums
    for M in Ms:
        s = shell_sums(M)
        r = lower_bound_ratio(M)
        rows.append([M, s.P, s.Q, r, math.sqrt(r)])
    values = {
        "sphere_lower_asymptotic": lim.closed_form,
        "sphere_lower_extrapolated": lim.extrapolated,
        "sphere_lower_best_finite": lim.best_finite,
        "sphere_lower_best_M": lim.best_finite_M,
        "published_value": PUBLISHED_BOUNDS["sphere_lower"],
    }
    return Report("sphere-lower", values=values, audits=entries,
                  table={"columns": ["M", "P", "Q", "ratio", "sqrt_ratio"], "rows": rows})


def sphere_upper_report(defaults: Defaults) -> Report:
    d_audit, s_audit, entries = sphere_upper_audits(defaults.e_max, defaults.step)
    em, fit, em_entries, findings = euler_maclaurin_audits()
    e_star = delta_crossover()
    grid = default_energy_grid(defaults.e_max, defaults.step, refine_to=e_star)
    rows = []
    for E in grid:
        est = spectral_series(E, defaults.tol)
        rows.append([E, delta_e(E), spectral_ratio(E), est.value, est.tail_bound, E <= e_star])
    values = {
        "delta_crossover": e_star,
        "sphere_upper": sphere_upper_bound(),
        "c0": constants().c0,
        "delta_max_below_crossover": d_audit.worst_margin,
        "spectral_ratio_max": s_audit.worst_margin + 1.0,
        "em_linear_coefficient": fit.intercept,
        "em_linear_coefficient_published": fit.published_value,
        "em_boundary_prediction": fit.boundary_prediction,
        "euler_maclaurin": [
            {"nu": a.nu, "series": a.series_value, "tail": a.series_tail, "integral": a.integral_value,
             "derivatives": a.derivative_table} for a in em
        ],
    }
    return Report("sphere-upper-audit", values=values, audits=entries + em_entries, findings=findings,
                  table={"columns": ["E", "delta", "spectral_ratio", "spectral_series", "tail_bound", "below_crossover"],
                         "rows": rows})


def torus_lower_report(defaults: Defaults) -> Report:
    vals, entry = torus_lower_values(defaults.box)
    rows = []
    for m in range(1, defaults.box + 1):
        a, b = torus_box_family(m), torus_box_family(m, True)
        rows.append([m, a.lhs, a.rhs, a.ratio, b.lhs, b.ratio])
    values = {
        "torus_lower_asymptotic": vals["closed"],
        "torus_lower_extrapolated": vals["extrapolated"],
        "torus_lower_extrapolated_with_zero_mode": vals["extrapolated_with_zero_mode"],
        "torus_lower_best_finite": vals["best"],
        "torus_lower_best_M": vals["best_M"],
        "published_value": PUBLISHED_BOUNDS["torus_lower"],
    }
    return Report("torus-lower", values=values, audits=[entry],
                  table={"columns": ["M", "lhs_mean_zero", "rhs", "ratio_mean_zero",
                                     "lhs_with_zero_mode", "ratio_with_zero_mode"], "rows": rows})


def torus_audit_report(defaults: Defaults) -> Report:
    audits, entries = torus_upper_audits(defaults.nu_max, defaults.nu_step, defaults.tol)
    rows = [[a.nu, a.lattice_value.value, a.lattice_value.tail_bound, a.lattice_value.terms_used,
             a.continuum_value, a.gap, a.verdict] for a in audits]
    values = {
        "torus_upper": torus_upper_bound(),
        "cbar": constants().cbar,
        "continuum_integral": continuum_integral(),
        "max_gap": max(a.gap for a in audits),
    }
    return Report("torus-audit", values=values, audits=entries,
                  table={"columns": ["nu", "lattice_sum", "tail_bound", "shells", "continuum", "gap", "verdict"],
                         "rows": rows})


def family_check_report(defaults: Defaults, manifold: str = "torus", family_path: str | None = None,
                        include_zero_mode: bool = False, box: int | None = None,
                        shells: int | None = None) -> Report:
    if family_path is not None:
        fam = TrigFamily.load(family_path)
        res = trig_family_ratio(fam)
        bound, manifold = torus_upper_bound(), "torus"
    elif manifold == "sphere":
        res = sphere_shell_family(shells if shells is not None else defaults.shells)
        bound = sphere_upper_bound()
    else:
        res = torus_box_family(box if box is not None else defaults.box, include_zero_mode)
        bound = torus_upper_bound()
    values = {"manifold": manifold, "family_id": res.family_id, "lhs": res.lhs, "rhs": res.rhs,
              "ratio": res.ratio, "upper_bound": bound, "flags": list(res.flags)}
    entry = _entry("family_ratio_below_upper", res.family_id, res.ratio - bound, "ratio - upper bound")
    return Report("family-check", values=values, audits=[entry])


def build_certificate(defaults: Defaults) -> BoundsCertificate:
    entries: list[AuditEntry] = []
    entries += constants_audits()
    lim, lower_entries = sphere_lower_audits(defaults.shells)
    entries += lower_entries
    _, _, upper_entries = sphere_upper_audits(None, defaults.step)
    entries += upper_entries
    _, _, em_entries, findings = euler_maclaurin_audits()
    entries += em_entries
    torus_vals, torus_entry = torus_lower_values(defaults.box)
    entries.append(torus_entry)
    _, torus_entries = torus_upper_audits(defaults.nu_max, defaults.nu_step, defaults.tol)
    entries += torus_entries
    entries += family_audits(defaults.shells, defaults.box)
    entries.append(duality_audit())

    s_up, t_up = sphere_upper_bound(), torus_upper_bound()
    entries.append(_entry("bound_ordering", "lower <= upper on both manifolds",
                          max(lim.closed_form - s_up, torus_vals["closed"] - t_up)))
    # L is decreasing in K, so upper K bounds give lower L bounds
    dual = {
        "sphere_L_from_K_lower": dual_constant(lim.closed_form, 4),
        "sphere_L_from_K_upper": dual_constant(s_up, 4),
        "torus_L_from_K_lower": dual_constant(torus_vals["closed"], 4),
        "torus_L_from_K_upper": dual_constant(t_up, 4),
    }
    return BoundsCertificate(
        sphere_lower_asymptotic=lim.closed_form,
        sphere_lower_best_finite=lim.best_finite,
        sphere_lower_best_M=lim.best_finite_M,
        sphere_upper=s_up,
        torus_lower_asymptotic=torus_vals["closed"],
        torus_lower_best_finite=torus_vals["best"],
        torus_lower_best_M=torus_vals["best_M"],
        torus_upper=t_up,
        dual_L_values=dual,
        delta_crossover=delta_crossover(),
        audits=entries,
        findings=findings,
    )


def certify_report(defaults: Defaults) -> Report:
    cert = build_certificate(defaults)
    values = {k: v for k, v in dataclasses.asdict(cert).items() if k not in ("audits", "findings")}
    values["published_bounds"] = dict(PUBLISHED_BOUNDS)
    values["rounded_4dp"] = {
        "sphere_lower": round(cert.sphere_lower_asymptotic, 4),
        "sphere_upper": round(cert.sphere_upper, 4),
        "torus_lower": round(cert.torus_lower_asymptotic, 4),
        "torus_upper": round(cert.torus_upper, 4),
    }
    return Report("certify", values=values, audits=cert.audits, findings=cert.findings)


COMMANDS = {
    "constants": constants_report,
    "sphere-lower": sphere_lower_report,
    "sphere-upper-audit": sphere_upper_report,
    "torus-lower": torus_lower_report,
    "torus-audit": torus_audit_report,
    "certify": certify_report,
}


def iter_audits(report: Report) -> Iterable[str]:
    for a in report.audits:
        yield f"{'PASS' if a.verdict else 'FAIL'}  {a.name:<32} margin {format_number(a.worst_margin):>20}  {a.grid}"
