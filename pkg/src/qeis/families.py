"""Exact expansions of the theta-type families and their exponential Taylor coefficients.

Normalization table
-------------------
Every object is stored with its analytic prefactor stripped.  ``x = 2 pi i z``,
``zeta = e^x``, ``P(q) = prod_{n>=1} (1 - q^n)``, ``S(x) = e^{x/2} - e^{-x/2}``.

==========================  =========================================  ==========================
analytic object             stored as                                  relation
==========================  =========================================  ==========================
partial theta ``T(z;tau)``  ``PartialTheta`` = sum (-1)^n e^{(n+1/2)x}   ``T = 2i q^{1/8} * stored``
                            q^{n(n+1)/2}, n >= 0
``T_0(tau) = T(0;tau)``     ``partial_theta_zero`` (x^0 slice)          ``T_0 = 2i q^{1/8} * stored``
false theta ``h(zeta;q)``   ``FalseTheta`` = i h / (2 sin(pi z))        ``h = -S(x) * stored``
Jacobi ``theta(z;tau)``     ``JacobiTheta*`` = theta / (-i q^{1/8})     ``theta = -i q^{1/8} * stored``
``eta(tau)``                ``eta_product`` with prefactor 1/24         ``eta = q^{1/24} P``
``sin(pi z)``               ``S(x)``                                    ``sin(pi z) = S(x) / (2i)``
``2 pi z``                  ``-i x``
``U(zeta;q)``               ``UnimodalRank``, unchanged                 --
==========================  =========================================  ==========================

With these conventions the defining identities read

* ``PartialTheta(x) / PartialTheta(0) = exp(-sum g_k x^k / k!)``
* ``FalseTheta(x) = P(q) exp(-sum h_k x^k / k!)``
* ``U(x) = (S(x)/x) U(0) exp(2 sum u_k x^k / k!)``
* ``U = -S P PartialTheta(2x) / JacobiTheta - S FalseTheta``
* ``2 g_1 T_0 = -P^3`` and ``U(0) P^2 = T_0``  (``T_0`` the stored x^0 slice).
"""

from __future__ import annotations

import enum
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .partitions import a_row, b_row
from .reports import RecursionReport, residual_report
from .series import BiExpansion, DomainError, QExpansion, TruncationError

__all__ = [
    "FamilyId",
    "ThetaTermList",
    "RankHistogram",
    "ResourceError",
    "bernoulli",
    "divisor_sigma",
    "eisenstein_G",
    "eta_product",
    "euler_product",
    "partial_theta_zero",
    "family_bivar",
    "sinh_factor",
    "sinc_factor",
    "extract_coeffs",
    "closed_form",
    "g0_series",
    "h0_series",
    "product_identity_check",
    "partial_theta_terms",
    "false_theta_terms",
    "false_theta_h_terms",
    "heat_annihilation_check",
    "unimodal_rank_counts",
    "unimodal_bruteforce",
    "unimodal_at_one_check",
    "triple_product_check",
    "master_identity_check",
]

HALF = Fraction(1, 2)


class ResourceError(RuntimeError):
    """Requested enumeration exceeds the configured cap."""


class FamilyId(enum.Enum):
    PartialTheta = "PartialTheta"
    FalseTheta = "FalseTheta"
    UnimodalRank = "UnimodalRank"
    JacobiThetaSum = "JacobiThetaSum"
    JacobiThetaProduct = "JacobiThetaProduct"
    JacobiThetaEisenstein = "JacobiThetaEisenstein"


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


# ---------------------------------------------------------------------------
# univariate building blocks

@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """Bernoulli numbers with ``B_1 = -1/2`` from ``sum_{j<=m} C(m+1, j) B_j = 0``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return Fraction(1)
    total = sum(math.comb(k + 1, j) * bernoulli(j) for j in range(k))
    return -total / (k + 1)


def divisor_sigma(power: int, n: int) -> int:
    return sum(d ** power for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def eisenstein_G(k: int, N: int) -> QExpansion:
    """``G_k = -B_k/(2k) + sum sigma_{k-1}(n) q^n`` for even ``k``, zero for odd ``k``."""
    if k < 1:
        raise ValueError("k must be positive")
    if k % 2:
        return QExpansion.zero(N)
    coeffs = [-bernoulli(k) / (2 * k)] + [divisor_sigma(k - 1, n) for n in range(1, N + 1)]
    return QExpansion(coeffs, N)


@lru_cache(maxsize=None)
def euler_product(N: int) -> QExpansion:
    """``prod_{n=1..N} (1 - q^n)`` truncated at ``q^N``."""
    coeffs = [0] * (N + 1)
    coeffs[0] = 1
    for n in range(1, N + 1):
        for d in range(N, n - 1, -1):
            coeffs[d] -= coeffs[d - n]
    return QExpansion(coeffs, N)


def eta_product(N: int) -> QExpansion:
    """``eta = q^{1/24} prod (1 - q^n)``."""
    return QExpansion(euler_product(N).coeffs, N, Fraction(1, 24))


@lru_cache(maxsize=None)
def partial_theta_zero(N: int) -> QExpansion:
    """``T_0 / (2i q^{1/8}) = sum_{n>=0} (-1)^n q^{n(n+1)/2}`` by direct summation."""
    coeffs = [0] * (N + 1)
    n = 0
    while n * (n + 1) // 2 <= N:
        coeffs[n * (n + 1) // 2] += _sign(n)
        n += 1
    return QExpansion(coeffs, N)


# ---------------------------------------------------------------------------
# theta term lists

@dataclass(frozen=True)
class ThetaTermList:
    """Finite sum ``sum sign * zeta^alpha * q^beta`` with ``beta <= cutoff``."""

    terms: tuple[tuple[int, Fraction, Fraction], ...]
    cutoff: Fraction

    def __post_init__(self):
        betas = [b for _, _, b in self.terms]
        if any(b2 < b1 for b1, b2 in zip(betas, betas[1:])):
            raise ValueError("terms must be sorted by q-exponent")

    def heat_residuals(self, index: Fraction) -> list[Fraction]:
        """``4 m beta - alpha^2`` per term: the heat operator ``H_m`` eigenvalue."""
        index = Fraction(index)
        return [4 * index * beta - alpha * alpha for _, alpha, beta in self.terms]

    def evaluate(self, z: complex, tau: complex) -> complex:
        import cmath
        total = 0j
        for sign, alpha, beta in self.terms:
            total += sign * cmath.exp(2j * cmath.pi * (float(alpha) * z + float(beta) * tau))
        return total


def partial_theta_terms(cutoff) -> ThetaTermList:
    """Terms of ``T / (2i)``: ``(-1)^n zeta^{n+1/2} q^{(n+1/2)^2/2}``, ``n >= 0``."""
    cutoff = Fraction(cutoff)
    terms = []
    n = 0
    while True:
        # stored series exponent n(n+1)/2 plus the q^{1/8} prefactor
        beta = Fraction(n * (n + 1), 2) + Fraction(1, 8)
        if beta > cutoff:
            break
        terms.append((_sign(n), n + HALF, beta))
        n += 1
    return ThetaTermList(tuple(terms), cutoff)


def false_theta_h_terms(q_cutoff: int) -> list[tuple[int, int, int]]:
    """Expand ``h(zeta;q) = (1-zeta) sum_{n>=0} (-1)^n zeta^{3n} q^{n(3n+1)/2}
    (1 - zeta^2 q^{2n+1})`` into ``(coef, zeta-exponent, q-exponent)`` triples."""
    out: Counter = Counter()
    n = 0
    while n * (3 * n + 1) // 2 <= q_cutoff:
        base = n * (3 * n + 1) // 2
        s = _sign(n)
        for c1, a1 in ((1, 0), (-1, 1)):  # (1 - zeta)
            out[(a1 + 3 * n, base)] += c1 * s
            out[(a1 + 3 * n + 2, base + 2 * n + 1)] -= c1 * s
        n += 1
    return sorted(((c, a, b) for (a, b), c in out.items() if c and b <= q_cutoff),
                  key=lambda t: (t[2], t[1]))


def false_theta_terms(cutoff) -> ThetaTermList:
    """Terms of ``q^{1/24} zeta^{1/2} h / (1 - zeta)`` as two pentagonal sums:
    ``alpha = 3n + 1/2`` (``n >= 0``) and ``alpha = 3n - 1/2`` (``n >= 1``), ``beta = alpha^2 / 6``."""
    cutoff = Fraction(cutoff)
    terms = []
    n = 0
    while Fraction(n * (3 * n - 1), 2) + Fraction(1, 24) <= cutoff:
        for alpha in (3 * n + HALF, 3 * n - HALF):
            if alpha > 0:
                beta = alpha * alpha / 6
                if beta <= cutoff:
                    terms.append((_sign(n), alpha, beta))
        n += 1
    terms.sort(key=lambda t: t[2])
    return ThetaTermList(tuple(terms), cutoff)


def heat_annihilation_check(which: FamilyId | str, cutoff) -> RecursionReport:
    """Termwise ``H_m`` annihilation: ``m = 1/2`` for the partial theta function,
    ``m = 3/2`` for the normalized false theta function."""
    which = FamilyId(which)
    if which is FamilyId.PartialTheta:
        terms, index = partial_theta_terms(cutoff), HALF
    elif which is FamilyId.FalseTheta:
        terms, index = false_theta_terms(cutoff), Fraction(3, 2)
    else:
        raise DomainError(f"no heat check for {which.value}")
    res = terms.heat_residuals(index)
    return residual_report(f"heat[{which.value}]", res, len(res),
                           detail=f"{len(res)} terms, beta <= {cutoff}")


# ---------------------------------------------------------------------------
# bivariate families

def _partial_theta_bivar(K, N):
    terms = []
    n = 0
    while n * (n + 1) // 2 <= N:
        terms.append((_sign(n), n + HALF, n * (n + 1) // 2))
        n += 1
    return BiExpansion.from_exponentials(terms, K, N)


def _false_theta_bivar(K, N):
    terms = []
    n = 0
    while n * (3 * n + 1) // 2 <= N:
        terms.append((_sign(n), 3 * n + HALF, n * (3 * n + 1) // 2))
        n += 1
    n = 1
    while n * (3 * n - 1) // 2 <= N:
        terms.append((_sign(n), 3 * n - HALF, n * (3 * n - 1) // 2))
        n += 1
    return BiExpansion.from_exponentials(terms, K, N)


@lru_cache(maxsize=None)
def unimodal_rank_counts(N: int) -> dict[tuple[int, int], int]:
    """``u(n, m)`` for ``n <= N`` from ``sum_k q^k / ((zeta q)_k (zeta^-1 q)_k)``."""
    # poly[n] is a Counter of zeta-exponents
    total = [Counter() for _ in range(N + 1)]
    term = [Counter() for _ in range(N + 1)]
    term[0][0] = 1
    total[0][0] = 1
    for k in range(1, N + 1):
        shifted = [Counter() for _ in range(N + 1)]
        for n in range(N):
            shifted[n + 1] = Counter(term[n])
        term = shifted
        for step in (1, -1):
            # divide by (1 - zeta^step q^k): new[n] = old[n] + zeta^step new[n-k]
            for n in range(k, N + 1):
                for m, c in term[n - k].items():
                    term[n][m + step] += c
        for n in range(N + 1):
            total[n].update(term[n])
    return {(n, m): c for n in range(N + 1) for m, c in total[n].items() if c}


def _unimodal_bivar(K, N):
    counts = unimodal_rank_counts(N)
    return BiExpansion.from_exponentials(((c, m, n) for (n, m), c in counts.items()), K, N)


def _theta_sum_bivar(K, N):
    terms = []
    n = 0
    while n * (n + 1) // 2 <= N:
        for ell in {n, -n - 1}:
            terms.append((-_sign(ell), ell + HALF, n * (n + 1) // 2))
        n += 1
    return BiExpansion.from_exponentials(terms, K, N)


def _theta_product_bivar(K, N):
    poly: Counter = Counter({(0, 0): 1})

    def times_one_minus(a, b):
        nonlocal poly
        new = Counter(poly)
        for (m, n), c in poly.items():
            if n + b <= N:
                new[(m + a, n + b)] -= c
        poly = Counter({k: v for k, v in new.items() if v})

    for n in range(1, N + 1):
        times_one_minus(0, n)
    for n in range(0, N + 1):
        times_one_minus(1, n)
    for n in range(1, N + 1):
        times_one_minus(-1, n)
    return BiExpansion.from_exponentials(((c, m - HALF, n) for (m, n), c in poly.items()), K, N)


def _theta_eisenstein_bivar(K, N):
    rows = [QExpansion.zero(N)]
    for k in range(1, K):
        rows.append(eisenstein_G(k, N) * Fraction(-2, math.factorial(k)))
    exponent = BiExpansion.from_rows(rows)
    body = exponent.exp() * (euler_product(N) ** 3)
    # multiply by -x: shift every row up by one
    shifted = [QExpansion.zero(N)] + [-body.coeff_x(k) for k in range(K)]
    return BiExpansion.from_rows(shifted)


_BUILDERS = {
    FamilyId.PartialTheta: _partial_theta_bivar,
    FamilyId.FalseTheta: _false_theta_bivar,
    FamilyId.UnimodalRank: _unimodal_bivar,
    FamilyId.JacobiThetaSum: _theta_sum_bivar,
    FamilyId.JacobiThetaProduct: _theta_product_bivar,
    FamilyId.JacobiThetaEisenstein: _theta_eisenstein_bivar,
}


@lru_cache(maxsize=None)
def family_bivar(which: FamilyId | str, K: int, N: int) -> BiExpansion:
    """Normalized bivariate expansion through ``x^K`` and ``q^N`` (see module table)."""
    which = FamilyId(which)
    if K < 1 or N < 1:
        raise ValueError("K and N must be positive")
    return _BUILDERS[which](K, N)


def sinh_factor(K: int, N: int) -> BiExpansion:
    """``S(x) = e^{x/2} - e^{-x/2} = 2i sin(pi z)``."""
    return BiExpansion.from_exponentials([(1, HALF, 0), (-1, -HALF, 0)], K, N)


def sinc_factor(K: int, N: int) -> BiExpansion:
    """``sin(pi z)/(pi z) = sum_m x^{2m} / (4^m (2m+1)!)``."""
    coeffs = [Fraction(1, 4 ** (k // 2) * math.factorial(k + 1)) if k % 2 == 0 else 0
              for k in range(K + 1)]
    return BiExpansion.x_series(coeffs, N)


# ---------------------------------------------------------------------------
# exponential Taylor coefficients

@lru_cache(maxsize=None)
def _log_family(which: FamilyId, K: int, N: int) -> BiExpansion:
    return family_bivar(which, K, N).log()


def extract_coeffs(which: str, k_max: int, N: int) -> list[QExpansion]:
    """``[f_1, ..., f_{k_max}]`` for ``which`` in ``{"g", "h", "u"}`` read off the logarithm
    of the corresponding bivariate family."""
    if which not in ("g", "h", "u"):
        raise ValueError(f"unknown family {which!r}")
    if k_max < 0 or N < 0:
        raise TruncationError("orders must be non-negative")
    if k_max == 0:
        return []
    K = k_max
    if which == "g":
        L = _log_family(FamilyId.PartialTheta, K, N)
        return [L.coeff_x(k) * (-math.factorial(k)) for k in range(1, K + 1)]
    if which == "h":
        L = _log_family(FamilyId.FalseTheta, K, N)
        return [L.coeff_x(k) * (-math.factorial(k)) for k in range(1, K + 1)]
    L = _log_family(FamilyId.UnimodalRank, K, N) - sinc_factor(K, N).log()
    return [L.coeff_x(k) * Fraction(math.factorial(k), 2) for k in range(1, K + 1)]


def g0_series(N: int) -> QExpansion:
    """``g_0 = -log`` of the stored ``T_0`` slice."""
    return -(partial_theta_zero(N).log())


def h0_series(N: int) -> QExpansion:
    """``h_0 = -log(q^{-1/24} eta)``."""
    return -(euler_product(N).log())


def closed_form(which: str, k: int, N: int) -> QExpansion:
    """``-delta_{k,1}/2 + sum_n sum_m c_{n,m} m^{k-1} q^n`` with ``c = a`` (g) or ``b`` (h)."""
    if which not in ("g", "h"):
        raise ValueError(f"unknown family {which!r}")
    if k < 1:
        raise ValueError("k must be positive")
    row = a_row if which == "g" else b_row
    coeffs = [Fraction(-1, 2) if k == 1 else Fraction(0)]
    for n in range(1, N + 1):
        coeffs.append(Fraction(sum(v * m ** (k - 1) for m, v in row(n).items())))
    return QExpansion(coeffs, N)


def product_identity_check(which: str, N: int) -> RecursionReport:
    """``log T_0 = -sum a_{n,m}/m q^n`` (``which="T0"``) or
    ``log prod(1-q^n) = -sum b_{n,m}/m q^n`` (``which="eta"``), exactly to ``q^N``."""
    if which == "T0":
        lhs, row = partial_theta_zero(N).log(), a_row
    elif which == "eta":
        lhs, row = euler_product(N).log(), b_row
    else:
        raise ValueError(f"unknown product identity {which!r}")
    rhs = [Fraction(0)] + [-sum((Fraction(v, m) for m, v in row(n).items()), Fraction(0))
                           for n in range(1, N + 1)]
    return residual_report(f"product[{which}]", lhs - QExpansion(rhs, N), N)


# ---------------------------------------------------------------------------
# unimodal sequences

@dataclass(frozen=True)
class RankHistogram:
    """Counts of unimodal sequences of a fixed size by rank."""

    size: int
    counts: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def moment(self, k: int) -> int:
        return sum(c * r ** k for r, c in self.counts.items())

    def to_dict(self) -> dict:
        return {"size": self.size, "counts": [[r, c] for r, c in sorted(self.counts.items())]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data) -> RankHistogram:
        return cls(int(data["size"]), {int(r): int(c) for r, c in data["counts"]})


def _weakly_increasing(total: int, bound: int) -> Iterable[tuple[int, ...]]:
    """Weakly increasing sequences of positive integers ``<= bound`` summing to ``total``."""
    if total == 0:
        yield ()
        return
    for first in range(1, min(total, bound) + 1):
        for rest in _weakly_increasing(total - first, bound):
            if not rest or rest[0] >= first:
                yield (first,) + rest


def unimodal_bruteforce(n: int, cap: int = 18) -> RankHistogram:
    """Enumerate ``a_1 <= ... <= a_r <= c >= b_1 >= ... >= b_s`` with marked peak ``c``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > cap:
        raise ResourceError(f"n={n} exceeds the enumeration cap {cap}")
    counts: Counter = Counter()
    if n == 0:
        counts[0] = 1
        return RankHistogram(0, dict(counts))
    for peak in range(1, n + 1):
        rest = n - peak
        for left_size in range(rest + 1):
            lefts = list(_weakly_increasing(left_size, peak))
            rights = list(_weakly_increasing(rest - left_size, peak))  # read backwards
            for left in lefts:
                for right in rights:
                    counts[len(right) - len(left)] += 1
    return RankHistogram(n, dict(sorted(counts.items())))


# ---------------------------------------------------------------------------
# whole-function identities

def unimodal_at_one_check(N: int) -> RecursionReport:
    """``U(1;q) * prod(1 - q^n)^2 = T_0`` (stored normalizations)."""
    u_at_one = family_bivar(FamilyId.UnimodalRank, 1, N).coeff_x(0)
    lhs = u_at_one * euler_product(N) ** 2
    return residual_report("U(1;q) P^2 = T_0", lhs - partial_theta_zero(N), N)


def triple_product_check(K: int, N: int) -> RecursionReport:
    """Sum, product and Eisenstein-exponential forms of the Jacobi theta function agree."""
    s = family_bivar(FamilyId.JacobiThetaSum, K, N)
    p = family_bivar(FamilyId.JacobiThetaProduct, K, N)
    e = family_bivar(FamilyId.JacobiThetaEisenstein, K, N)
    reports = [residual_report("sum-product", s - p, N),
               residual_report("sum-eisenstein", s - e, N)]
    worst = max(r.max_abs_residual for r in reports)
    return RecursionReport(f"jacobi triple product (K={K})", N, worst, worst == 0)


def master_identity_check(K: int, N: int) -> RecursionReport:
    """``U = -S P PartialTheta(2x)/JacobiTheta - S FalseTheta`` through ``x^K``, ``q^N``.

    The Jacobi theta function vanishes to first order at ``x = 0``, so its inverse
    carries one x-pole; two extra x-orders are built to absorb it.
    """
    Kb = K + 2
    S = sinh_factor(Kb, N)
    theta = family_bivar(FamilyId.JacobiThetaSum, Kb, N)
    partial2 = family_bivar(FamilyId.PartialTheta, Kb, N).scale_x(2)
    false_ = family_bivar(FamilyId.FalseTheta, Kb, N)
    U = family_bivar(FamilyId.UnimodalRank, Kb, N)
    first = S * (partial2 * euler_product(N)) * theta.inverse()
    residual = (U + first + S * false_).truncate(K, N)
    return residual_report(f"master identity (K={K})", residual, N)


def format_histogram(h: RankHistogram) -> str:
    return ", ".join(f"{r}: {c}" for r, c in sorted(h.counts.items()))


def series_json(named: dict[str, QExpansion]) -> str:
    return json.dumps({k: v.to_dict() for k, v in named.items()})
