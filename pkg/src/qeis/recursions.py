"""Differential recursions, the Ramanujan system and the partition-trace recursion for u_k.

Every check is exact: a report passes only when the residual series is identically zero.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .families import (
    closed_form,
    eisenstein_G,
    euler_product,
    extract_coeffs,
    partial_theta_zero,
)
from .partitions import partition_trace, partitions_of, phi_weight, psi_weight
from .reports import RecursionReport, combine, residual_report
from .series import QExpansion, TruncationError

__all__ = [
    "U_VARIANTS",
    "verify_ramanujan",
    "g_recursion",
    "h_recursion",
    "u_recursion_rhs",
    "u_from_recursion",
    "u_variant_reports",
    "g1_identity_check",
    "eta_log_derivative_check",
    "closure_witness",
    "CLOSURE_MONOMIALS",
    "odd_u_relations",
    "route_agreement",
]

HALF = Fraction(1, 2)

# "literal": the trace of gamma enters unscaled; "scaled": it carries k!/2 like the u-terms.
U_VARIANTS = ("literal", "scaled")


def verify_ramanujan(N: int) -> RecursionReport:
    G2, G4, G6 = (eisenstein_G(k, N) for k in (2, 4, 6))
    checks = [
        residual_report("D G2", G2.D() - (G2 * G2 * -2 + G4 * Fraction(5, 6)), N),
        residual_report("D G4", G4.D() - (G2 * G4 * -8 + G6 * Fraction(7, 10)), N),
        residual_report("D G6", G6.D() - (G2 * G6 * -12 + G4 * G4 * Fraction(400, 7)), N),
    ]
    return combine("Ramanujan system", checks, N)


def _pair_sum(f: Sequence[QExpansion], k: int) -> QExpansion:
    """``sum_{d=0}^k C(k,d) f_{d+1} f_{k-d+1}`` with ``f[0] = f_1``."""
    total = QExpansion.zero(f[0].order)
    for d in range(k + 1):
        total = total + f[d] * f[k - d] * math.comb(k, d)
    return total


def _recurse(seeds: Sequence[QExpansion], k_max: int, weight: int) -> list[QExpansion]:
    out = list(seeds)
    for k in range(1, k_max - 1):
        out.append(out[k - 1].D() * weight + _pair_sum(out, k))
    return out[:k_max]


def _check_k_max(k_max: int):
    if k_max < 3:
        raise TruncationError("recursions need k_max >= 3")


def g_recursion(k_max: int, N: int) -> tuple[list[QExpansion], RecursionReport]:
    """``g_{k+2} = 2 D(g_k) + sum C(k,d) g_{d+1} g_{k-d+1}`` from extracted ``g_1, g_2``."""
    _check_k_max(k_max)
    extracted = extract_coeffs("g", k_max, N)
    rec = _recurse(extracted[:2], k_max, 2)
    g1, g2 = extracted[0], extracted[1]
    # Log T_0 = log(2i) + (pi i/4) tau + log(stored T_0) so D(Log T_0) = 1/8 + D log
    d_log_t0 = partial_theta_zero(N).log().D() + Fraction(1, 8)
    checks = [residual_report(f"g_{k} recursion vs extraction", rec[k - 1] - extracted[k - 1], N)
              for k in range(3, k_max + 1)]
    checks.append(residual_report("D Log T_0 = -g_2/2 + g_1^2/2",
                                  d_log_t0 - (g2 * Fraction(-1, 2) + g1 * g1 * HALF), N))
    return rec, combine(f"g recursion (k<={k_max})", checks, N)


def h_recursion(k_max: int, N: int) -> tuple[list[QExpansion], RecursionReport]:
    """``h_{k+2} = 6 D(h_k) + sum C(k,d) h_{d+1} h_{k-d+1}`` from extracted ``h_1, h_2``."""
    _check_k_max(k_max)
    extracted = extract_coeffs("h", k_max, N)
    rec = _recurse(extracted[:2], k_max, 6)
    h1, h2 = extracted[0], extracted[1]
    checks = [residual_report(f"h_{k} recursion vs extraction", rec[k - 1] - extracted[k - 1], N)
              for k in range(3, k_max + 1)]
    checks.append(residual_report("h_2 = 6 G_2 + h_1^2",
                                  h2 - (eisenstein_G(2, N) * 6 + h1 * h1), N))
    return rec, combine(f"h recursion (k<={k_max})", checks, N)


@lru_cache(maxsize=None)
def _inputs(k_max: int, N: int):
    g = extract_coeffs("g", k_max, N)
    h = extract_coeffs("h", k_max, N)
    gamma = [eisenstein_G(j, N) - g[j - 1] * 2 ** (j - 1) for j in range(1, k_max + 1)]
    return g, h, gamma


def _lower_u_trace(u: Sequence[QExpansion], k: int, N: int) -> QExpansion:
    """``sum_{lambda |- k, lambda != (k)} phi(lambda) u_lambda``."""
    total = QExpansion.zero(N)
    for lam in partitions_of(k):
        if lam.m(k) == 1:
            continue
        term = QExpansion.constant(phi_weight(lam), N)
        for j, mj in enumerate(lam.multiplicities, 1):
            if mj:
                term = term * u[j - 1] ** mj
        total = total + term
    return total


def u_recursion_rhs(k: int, u_lower: Sequence[QExpansion], N: int,
                    variant: str = "literal") -> QExpansion:
    """Right-hand side of the trace recursion for ``u_k`` given ``u_1 .. u_{k-1}``.

    ``-(k!/2) sum_{lambda != (k)} phi u_lambda + c_k Tr_k(phi, gamma) + k! g_1 Tr_{k-1}(psi, h)``
    with ``gamma_j = G_j - 2^{j-1} g_j`` and ``c_k = 1`` (literal) or ``k!/2`` (scaled).
    """
    if variant not in U_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    g, h, gamma = _inputs(max(k, 1), N)
    fk = math.factorial(k)
    half_fk = Fraction(fk, 2)
    scale = 1 if variant == "literal" else half_fk
    lower = _lower_u_trace(list(u_lower) + [QExpansion.zero(N)], k, N)
    trace_gamma = partition_trace(phi_weight, gamma, k, order=N)
    trace_h = partition_trace(psi_weight, h, k - 1, order=N)
    return lower * -half_fk + trace_gamma * scale + g[0] * trace_h * fk


def u_from_recursion(k_max: int, N: int,
                     variant: str = "literal") -> tuple[list[QExpansion], RecursionReport]:
    """Build ``u_1 .. u_{k_max}`` bottom-up and compare with extraction; odd ``k`` must vanish."""
    u: list[QExpansion] = []
    for k in range(1, k_max + 1):
        u.append(u_recursion_rhs(k, u, N, variant))
    extracted = extract_coeffs("u", k_max, N)
    checks = [residual_report(f"u_{k} ({variant}) vs extraction", u[k - 1] - extracted[k - 1], N)
              for k in range(1, k_max + 1)]
    checks += [residual_report(f"u_{k} ({variant}) vanishes", u[k - 1], N)
               for k in range(1, k_max + 1, 2)]
    return u, combine(f"u trace recursion [{variant}] (k<={k_max})", checks, N)


def u_variant_reports(k_max: int, N: int) -> dict[str, RecursionReport]:
    return {v: u_from_recursion(k_max, N, v)[1] for v in U_VARIANTS}


def odd_u_relations(ks: Sequence[int], N: int, variant: str = "scaled") -> RecursionReport:
    """With extracted ``u, g, h, G`` substituted, the recursion's right side vanishes at odd ``k``."""
    k_top = max(ks)
    u = extract_coeffs("u", k_top, N)
    checks = [residual_report(f"odd relation k={k}", u_recursion_rhs(k, u[: k - 1], N, variant), N)
              for k in ks]
    return combine("odd-k trace relations", checks, N)


def g1_identity_check(N: int) -> RecursionReport:
    """``2 g_1 T_0 = -P^3`` and ``D(g_1) = g_1 (-3 G_2 + g_2/2 - g_1^2/2)``."""
    g1, g2 = extract_coeffs("g", 2, N)
    P = euler_product(N)
    checks = [
        residual_report("2 g_1 T_0 = -P^3", g1 * partial_theta_zero(N) * 2 + P ** 3, N),
        residual_report("D g_1 / g_1", g1.D() - g1 * (eisenstein_G(2, N) * -3 + g2 * HALF
                                                         - g1 * g1 * HALF), N),
    ]
    return combine("g_1 identities", checks, N)


def eta_log_derivative_check(N: int) -> RecursionReport:
    """``D(Log eta) = 1/24 + D log P = -G_2``."""
    lhs = euler_product(N).log().D() + Fraction(1, 24)
    return residual_report("D Log eta = -G_2", lhs + eisenstein_G(2, N), N)


# ---------------------------------------------------------------------------
# closure witness: D acting on polynomials in g_1, g_2, ...

Monomial = tuple[int, ...]  # exponent of g_1, g_2, ...

CLOSURE_MONOMIALS: tuple[Monomial, ...] = (
    (1,), (0, 1), (2,), (1, 1), (0, 0, 1), (1, 0, 1), (0, 0, 0, 1),
    (3,), (0, 2, 0, 0, 1), (1, 0, 0, 0, 0, 1),
)


def _d_rule(k: int) -> Counter:
    """``D(g_k)`` as a polynomial: ``g_{k+2}/2 - (1/2) sum C(k,d) g_{d+1} g_{k-d+1}``."""
    poly: Counter = Counter()
    top = [0] * (k + 2)
    top[k + 1] = 1
    poly[tuple(top)] += HALF
    for d in range(k + 1):
        e = [0] * (k + 2)
        e[d] += 1
        e[k - d] += 1
        poly[tuple(e)] -= HALF * math.comb(k, d)
    return poly


def _poly_mul(a: Counter, b: Counter) -> Counter:
    out: Counter = Counter()
    for ea, ca in a.items():
        for eb, cb in b.items():
            n = max(len(ea), len(eb))
            e = tuple((ea[i] if i < len(ea) else 0) + (eb[i] if i < len(eb) else 0)
                      for i in range(n))
            out[e] += ca * cb
    return out


def _d_monomial(mono: Monomial) -> Counter:
    """Leibniz rule applied to ``prod g_j^{e_j}``."""
    out: Counter = Counter()
    for j, e in enumerate(mono):
        if not e:
            continue
        rest = list(mono)
        rest[j] -= 1
        term = _poly_mul(Counter({tuple(rest): Fraction(e)}), _d_rule(j + 1))
        out.update(term)
    return out


def _evaluate(poly: Counter, g: Sequence[QExpansion], N: int) -> QExpansion:
    total = QExpansion.zero(N)
    for e, c in poly.items():
        if not c:
            continue
        term = QExpansion.constant(c, N)
        for j, p in enumerate(e):
            if p:
                term = term * g[j] ** p
        total = total + term
    return total


def closure_witness(N: int, monomials: Sequence[Monomial] = CLOSURE_MONOMIALS) -> RecursionReport:
    """``D`` of each monomial, computed on q-series, equals the polynomial predicted by the rule."""
    depth = max(len(m) for m in monomials) + 2
    g = extract_coeffs("g", depth, N)
    checks = []
    for mono in monomials:
        direct = _evaluate(Counter({tuple(mono): Fraction(1)}), g, N).D()
        checks.append(residual_report(f"D{mono}", direct - _evaluate(_d_monomial(mono), g, N), N))
    return combine(f"closure witness ({len(monomials)} monomials)", checks, N)


def route_agreement(which: str, k_max: int, N: int,
                    extracted: Sequence[QExpansion] | None = None) -> RecursionReport:
    """Extraction, closed form and recursion give identical ``g_k`` (or ``h_k``) for ``k <= k_max``.

    ``extracted`` replaces the extraction route (used for fault injection).
    """
    if extracted is None:
        extracted = extract_coeffs(which, k_max, N)
    rec, rec_report = (g_recursion if which == "g" else h_recursion)(k_max, N)
    checks = [rec_report]
    for k in range(1, k_max + 1):
        checks.append(residual_report(f"{which}_{k} closed form vs extraction",
                                      closed_form(which, k, N) - extracted[k - 1], N))
    return combine(f"{which}: three routes (k<={k_max})", checks, N)
