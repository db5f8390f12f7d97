"""The exact and numeric verification suites driven by ``qeis verify``."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from . import families as fam
from . import modular as mod
from . import partitions as part
from . import recursions as rec
from .reports import RecursionReport, combine, residual_report
from .series import QExpansion, format_rational

SUITES = ("exact", "numeric", "all")
TAMPER_TARGETS = ("g", "h")
LIMIT_LADDER = (1.0, 3.0, 10.0, 30.0)
LIMIT_SAMPLES = {
    "psihat": (0.1, 1j),
    "That": (0, 1j),
    "Hhat": (0.13, 1.2j),
}


@dataclass(frozen=True)
class CheckResult:
    """One line of suite output."""

    name: str
    passed: bool
    measure: str
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{status}  {self.name}  {self.measure}{extra}"

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "measure": self.measure,
                "detail": self.detail}


def _from_report(r: RecursionReport) -> CheckResult:
    return CheckResult(r.identity_name, r.passed,
                       f"order={r.order_checked} max|residual|={format_rational(r.max_abs_residual)}",
                       r.detail)


def _tampered(which: str, k_max: int, N: int) -> list[QExpansion]:
    """Extraction with one coefficient of the third member bumped by one."""
    series = list(fam.extract_coeffs(which, k_max, N))
    series[2] = series[2] + QExpansion.monomial(1, N)
    return series


# ---------------------------------------------------------------------------
# exact checks

def thresholds_check(n_a: int = 30, n_b: int = 20) -> RecursionReport:
    bad = [(n, m) for n in range(1, n_a + 1) for m in part.a_row(n) if m < part.a_threshold(n)]
    bad += [(n, m) for n in range(1, n_b + 1) for m in part.b_row(n) if m < part.b_threshold(n)]
    return RecursionReport("vanishing thresholds", max(n_a, n_b), Fraction(len(bad)), not bad,
                           detail=f"violations: {bad}" if bad else "")


def bijections_check(n_max: int = 25) -> RecursionReport:
    failures = []
    for n in range(n_max + 1):
        parts = list(part.partitions_of(n))
        g_set = {lam for lam in parts if part.in_g_set(lam)}
        h_set = {lam for lam in parts if part.in_h_set(lam)}
        tri = part.triangular_partitions(n)
        pent = part.pentagonal_partitions(n)
        if {part.triangular_to_g(c) for c in tri} != g_set or len(tri) != len(g_set):
            failures.append(("triangular image", n))
        if any(part.g_to_triangular(part.triangular_to_g(c)) != c for c in tri):
            failures.append(("triangular inverse", n))
        if any(part.triangular_to_g(part.g_to_triangular(lam)) != lam for lam in g_set):
            failures.append(("triangular inverse", n))
        if {part.pentagonal_to_h(c) for c in pent} != h_set or len(pent) != len(h_set):
            failures.append(("pentagonal image", n))
        if any(part.h_to_pentagonal(part.pentagonal_to_h(c)) != c for c in pent):
            failures.append(("pentagonal inverse", n))
        if any(part.pentagonal_to_h(part.h_to_pentagonal(lam)) != lam for lam in h_set):
            failures.append(("pentagonal inverse", n))
    return RecursionReport("triangular and pentagonal bijections", n_max,
                           Fraction(len(failures)), not failures,
                           detail=f"failures: {failures}" if failures else "")


def cycle_index_check(seed: int, k_max: int = 8, trials: int = 5) -> RecursionReport:
    rng = random.Random(seed)
    checks = []
    for t in range(trials):
        xs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(k_max)]
        lhs = part.cycle_index_coefficients(xs, k_max)
        rhs = QExpansion([0] + xs, k_max).exp()
        checks.append(residual_report(f"trial {t}", QExpansion(lhs, k_max) - rhs, k_max))
    return combine("cycle index identity", checks, k_max)


def unimodal_check(n_max: int = 12) -> RecursionReport:
    counts = fam.unimodal_rank_counts(n_max)
    bad = []
    for n in range(n_max + 1):
        hist = fam.unimodal_bruteforce(n)
        gf = {m: c for (k, m), c in counts.items() if k == n}
        if hist.counts != gf or any(hist.counts.get(-r) != c for r, c in hist.counts.items()):
            bad.append(n)
    return RecursionReport("unimodal ranks: generating function vs enumeration", n_max,
                           Fraction(len(bad)), not bad, detail=f"sizes: {bad}" if bad else "")


def exact_checks(order: int, seed: int = 0,
                 tamper: str | None = None) -> Iterator[Callable[[], RecursionReport]]:
    N = order
    n_small = min(N, 15)
    yield lambda: rec.route_agreement(
        "g", 8, N, _tampered("g", 8, N) if tamper == "g" else None)
    yield lambda: rec.route_agreement(
        "h", 8, N, _tampered("h", 8, N) if tamper == "h" else None)
    yield lambda: fam.product_identity_check("T0", N)
    yield lambda: fam.product_identity_check("eta", N)
    yield thresholds_check
    yield lambda: fam.heat_annihilation_check("PartialTheta", 100)
    yield lambda: fam.heat_annihilation_check("FalseTheta", 100)
    yield lambda: cycle_index_check(seed)
    yield bijections_check
    yield lambda: rec.verify_ramanujan(N)
    yield lambda: rec.eta_log_derivative_check(N)
    yield lambda: rec.g1_identity_check(N)
    yield lambda: fam.unimodal_at_one_check(N)
    yield lambda: fam.triple_product_check(8, min(N, 12))
    yield lambda: fam.master_identity_check(6, n_small)
    yield unimodal_check
    yield lambda: rec.closure_witness(n_small)
    yield lambda: _u_variants(n_small)
    yield lambda: rec.odd_u_relations([1, 3, 5, 7], n_small)


def _u_variants(N: int) -> RecursionReport:
    """Exactly one normalization of the u-recursion must reproduce extraction."""
    reports = rec.u_variant_reports(8, N)
    valid = [v for v, r in reports.items() if r.passed]
    detail = "; ".join(f"{v}: {'valid' if r.passed else 'fails'}" for v, r in reports.items())
    worst = min(r.max_abs_residual for r in reports.values())
    return RecursionReport("u trace recursion (one valid normalization)", N, worst,
                           len(valid) == 1, detail=detail)


def run_exact(order: int, seed: int = 0, tamper: str | None = None) -> list[CheckResult]:
    return [_from_report(check()) for check in exact_checks(order, seed, tamper)]


# ---------------------------------------------------------------------------
# numeric checks

def transform_suite(law: str, seed: int, tol: float, n_matrices: int = 20,
                    n_points: int = 5) -> tuple[CheckResult, list[mod.TransformReport]]:
    kind, _ = mod.TRANSFORM_LAWS[law]
    if kind == "shift":
        group = mod.sample_shifts(n_matrices, seed)
    else:
        group = mod.sample_matrices(n_matrices, seed, gamma0=law == "frakHhat_modular")
    reports = []
    for g in group:
        for z, tau, w in mod.sample_points(n_points, seed):
            reports.append(mod.check_transform(law, g, mod.ComplexSample(z, tau, w, tol=tol)))
    worst = max(r.residual for r in reports)
    passed = all(r.passed for r in reports)
    detail = f"{len(group)} {'shifts' if kind == 'shift' else 'matrices'} x {n_points} points"
    return CheckResult(law, passed, f"max residual={worst:.3e}", detail), reports


def chi_square_check(seed: int, count: int = 200) -> CheckResult:
    rng = random.Random(seed + 3)
    pool = mod.sample_matrices(10_000, seed)
    worst = 0.0
    for _ in range(count):
        g = rng.choice(pool)
        tau = complex(rng.uniform(-2, 2), rng.uniform(0.1, 3))
        w = complex(rng.uniform(-2, 2), rng.uniform(0.1, 3))
        worst = max(worst, abs(mod.chi(g, tau, w) ** 2 - 1))
    return CheckResult("chi squared = 1", worst == 0, f"max |chi^2 - 1|={worst:.1e}",
                       f"{count} samples")


def nu_eta_independence(seed: int, n_matrices: int = 20, tol: float = 1e-9) -> CheckResult:
    bases = [1j, 0.5 + 2j, -0.3 + 0.9j, 0.25 + 1.4j, 0.1 + 0.7j]
    worst = 0.0
    for g in mod.sample_matrices(n_matrices, seed):
        vals = [mod.nu_eta(g, t) for t in bases]
        worst = max(worst, max(abs(a - b) for a in vals for b in vals))
    return CheckResult("nu_eta independent of tau", worst < tol, f"max deviation={worst:.3e}",
                       f"{n_matrices} matrices x {len(bases)} base points")


def bridge_check(tol: float, order: int = 40) -> CheckResult:
    """Exact series evaluated at ``q = e^{2 pi i tau}`` against the float evaluators."""
    worst = 0.0
    for tau in (0.8j, 1j, 0.3 + 0.9j, -0.4 + 1.3j):
        worst = max(worst, abs(fam.eta_product(order).evaluate(tau) - mod.eta(tau)))
        worst = max(worst, abs(mod.partial_theta_zero_bridge(tau, order)
                               - mod.partial_theta(0, tau)))
    return CheckResult("exact-vs-float bridge", worst < tol, f"max gap={worst:.3e}",
                       f"order {order}")


def limit_checks(tol: float = 1e-7) -> list[tuple[CheckResult, mod.LimitReport]]:
    out = []
    for name, (z, tau) in LIMIT_SAMPLES.items():
        r = mod.check_limit(name, mod.ComplexSample(z, tau, tol=tol), LIMIT_LADDER)
        gaps = ", ".join(f"{g:.2e}" for g in r.gaps)
        detail = f"t={list(LIMIT_LADDER)} gaps=[{gaps}]"
        if not r.monotone:
            detail += " (not monotone)"
        out.append((CheckResult(f"limit {name}", r.passed, f"final gap={r.gaps[-1]:.3e}", detail),
                    r))
    return out


def run_numeric(seed: int, tol: float) -> list[CheckResult]:
    results = [transform_suite(law, seed, tol)[0] for law in mod.TRANSFORM_LAWS]
    results.append(chi_square_check(seed))
    results.append(nu_eta_independence(seed))
    results.append(bridge_check(tol))
    results.extend(c for c, _ in limit_checks())
    return results


def run_suite(suite: str, order: int, seed: int, tol: float,
              tamper: str | None = None) -> list[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    results = []
    if suite in ("exact", "all"):
        results += run_exact(order, seed, tamper)
    if suite in ("numeric", "all"):
        results += run_numeric(seed, tol)
    return results


def results_json(results: list[CheckResult]) -> str:
    return json.dumps([r.to_dict() for r in results], indent=2)
