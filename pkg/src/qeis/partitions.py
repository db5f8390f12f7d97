"""Partitions in multiplicity-vector form and the coefficient sums built on them.

A partition ``lambda = (1^{m_1}, 2^{m_2}, ..., n^{m_n})`` of ``n`` is stored as
the tuple ``(m_1, ..., m_n)``.  Besides plain enumeration this module provides

* the sets ``Lambda(n, m)`` (non-increasing multiplicities, length ``m``) and
  ``Omega(n, m)`` (mod-3 chain conditions, ``3*len = m + m_1``), generated from
  partitions into triangular resp. generalized pentagonal numbers;
* the integer coefficients ``a_{n,m}`` and ``b_{n,m}``;
* partition traces ``Tr_n(weight, f) = sum_{lambda |- n} weight(lambda) f_lambda``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Mapping, Sequence

from .series import DomainError, QExpansion

__all__ = [
    "Partition",
    "InvariantError",
    "partitions_of",
    "partition_count",
    "triangular_partitions",
    "pentagonal_partitions",
    "triangular_to_g",
    "g_to_triangular",
    "pentagonal_to_h",
    "h_to_pentagonal",
    "in_g_set",
    "in_h_set",
    "lambda_nm",
    "omega_nm",
    "multinomial",
    "a_nm",
    "b_nm",
    "a_row",
    "b_row",
    "a_threshold",
    "b_threshold",
    "TraceWeight",
    "phi_weight",
    "psi_weight",
    "partition_trace",
    "cycle_index_coefficients",
]


class InvariantError(AssertionError):
    """An internal arithmetic invariant (integrality, divisibility) failed."""


@dataclass(frozen=True)
class Partition:
    """Multiplicity vector ``(m_1, ..., m_n)`` with ``sum j*m_j == n``."""

    multiplicities: tuple[int, ...]

    def __post_init__(self):
        mults = tuple(int(m) for m in self.multiplicities)
        if any(m < 0 for m in mults):
            raise ValueError("multiplicities must be non-negative")
        n = sum(j * m for j, m in enumerate(mults, 1))
        # normalize to exactly n entries
        if len(mults) > n:
            if any(mults[n:]):
                raise ValueError("inconsistent multiplicity vector")
            mults = mults[:n]
        else:
            mults = mults + (0,) * (n - len(mults))
        object.__setattr__(self, "multiplicities", mults)

    @classmethod
    def from_parts(cls, parts: Sequence[int]) -> Partition:
        if any(p <= 0 for p in parts):
            raise ValueError("parts must be positive")
        mults = [0] * (max(parts) if parts else 0)
        for p in parts:
            mults[p - 1] += 1
        return cls(tuple(mults))

    @property
    def n(self) -> int:
        return len(self.multiplicities)

    @property
    def length(self) -> int:
        return sum(self.multiplicities)

    def m(self, j: int) -> int:
        """Multiplicity of the part ``j`` (zero outside ``1..n``)."""
        if 1 <= j <= len(self.multiplicities):
            return self.multiplicities[j - 1]
        return 0

    def parts(self) -> tuple[int, ...]:
        """Parts in non-increasing order."""
        out = []
        for j in range(len(self.multiplicities), 0, -1):
            out.extend([j] * self.multiplicities[j - 1])
        return tuple(out)

    def __str__(self):
        if not self.n:
            return "()"
        body = " ".join(f"{j}^{m}" for j, m in enumerate(self.multiplicities, 1) if m)
        return f"({body})"


# ---------------------------------------------------------------------------
# enumeration

def _descending(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for p in range(min(n, largest), 0, -1):
        for rest in _descending(n - p, p):
            yield (p,) + rest


def partitions_of(n: int) -> Iterator[Partition]:
    """All partitions of ``n``, largest part first, lexicographically descending.

    ``n = 5`` yields (5), (4,1), (3,2), (3,1,1), (2,2,1), (2,1,1,1), (1,1,1,1,1).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    for parts in _descending(n, n):
        yield Partition.from_parts(parts)


@lru_cache(maxsize=None)
def partition_count(n: int, largest: int | None = None) -> int:
    """Number of partitions of ``n`` with parts at most ``largest``."""
    if largest is None:
        largest = n
    if n == 0:
        return 1
    if n < 0 or largest == 0:
        return 0
    return partition_count(n, largest - 1) + partition_count(n - largest, largest)


def _parts_from(n: int, values: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Multiplicity tuples ``c`` with ``sum c_i * values[i] == n``."""
    if not values:
        if n == 0:
            yield ()
        return
    v, rest = values[-1], values[:-1]
    for c in range(n // v + 1):
        for head in _parts_from(n - c * v, rest):
            yield head + (c,)


def _triangular(ell: int) -> int:
    return ell * (ell + 1) // 2


def _pentagonal(ell: int) -> int:
    # generalized pentagonal number P_ell = ell*(3*ell - 1)/2, ell may be negative
    return ell * (3 * ell - 1) // 2


def triangular_partitions(n: int) -> list[tuple[int, ...]]:
    """Partitions of ``n`` into triangular numbers as ``(c_1, c_2, ...)``,
    ``c_l`` being the multiplicity of ``T_l = l(l+1)/2``.  Trailing zeros trimmed."""
    values = []
    ell = 1
    while _triangular(ell) <= n:
        values.append(_triangular(ell))
        ell += 1
    out = []
    for c in _parts_from(n, values):
        c = list(c)
        while c and c[-1] == 0:
            c.pop()
        out.append(tuple(c))
    return out


def pentagonal_partitions(n: int) -> list[dict[int, int]]:
    """Partitions of ``n`` into generalized pentagonal numbers.

    Each is a mapping ``ell -> multiplicity`` over nonzero ``ell``, where part
    ``P_ell = ell(3 ell - 1)/2`` (so ``P_1 = 1``, ``P_-1 = 2``, ``P_2 = 5``, ...).
    """
    labels = []
    ell = 1
    while _pentagonal(ell) <= n or _pentagonal(-ell) <= n:
        for lab in (ell, -ell):
            if _pentagonal(lab) <= n:
                labels.append(lab)
        ell += 1
    out = []
    for c in _parts_from(n, [_pentagonal(lab) for lab in labels]):
        out.append({lab: k for lab, k in zip(labels, c) if k})
    return out


def triangular_to_g(c: Sequence[int]) -> Partition:
    """Write each ``T_l`` as ``1 + 2 + ... + l``: ``m_j = sum_{l >= j} c_l``."""
    n = sum(k * _triangular(ell) for ell, k in enumerate(c, 1))
    mults = [sum(c[j - 1:]) for j in range(1, len(c) + 1)]
    return Partition(tuple(mults) + (0,) * max(0, n - len(mults)))


def g_to_triangular(lam: Partition) -> tuple[int, ...]:
    """Inverse of :func:`triangular_to_g`: ``c_l = m_l - m_{l+1}``."""
    c = [lam.m(ell) - lam.m(ell + 1) for ell in range(1, lam.n + 1)]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def pentagonal_to_h(c: Mapping[int, int]) -> Partition:
    """``P_l = 1 + 4 + ... + (3l-2)`` and ``P_-l = 2 + 5 + ... + (3l-1)``."""
    n = sum(k * _pentagonal(lab) for lab, k in c.items())
    mults = [0] * n
    for lab, k in c.items():
        ell = abs(lab)
        for i in range(1, ell + 1):
            part = 3 * i - 2 if lab > 0 else 3 * i - 1
            mults[part - 1] += k
    return Partition(tuple(mults))


def h_to_pentagonal(lam: Partition) -> dict[int, int]:
    """Inverse of :func:`pentagonal_to_h`: ``c_l = m_{3l-2} - m_{3l+1}``,
    ``c_-l = m_{3l-1} - m_{3l+2}``."""
    out = {}
    for ell in range(1, lam.n + 1):
        pos = lam.m(3 * ell - 2) - lam.m(3 * ell + 1)
        neg = lam.m(3 * ell - 1) - lam.m(3 * ell + 2)
        if pos:
            out[ell] = pos
        if neg:
            out[-ell] = neg
    return out


def in_g_set(lam: Partition) -> bool:
    """Non-increasing multiplicities ``m_1 >= m_2 >= ... >= m_n >= 0``."""
    m = lam.multiplicities
    return all(m[i] >= m[i + 1] for i in range(len(m) - 1))


def in_h_set(lam: Partition) -> bool:
    """No multiples of 3, and ``m_{3j-2} >= m_{3j+1}``, ``m_{3j-1} >= m_{3j+2}``."""
    n = lam.n
    for j in range(1, n + 1):
        if lam.m(3 * j):
            return False
        if lam.m(3 * j - 2) < lam.m(3 * j + 1) or lam.m(3 * j - 1) < lam.m(3 * j + 2):
            return False
    return True


@lru_cache(maxsize=None)
def _g_by_length(n: int) -> dict[int, tuple[Partition, ...]]:
    groups: dict[int, list[Partition]] = {}
    for c in triangular_partitions(n):
        lam = triangular_to_g(c)
        groups.setdefault(lam.length, []).append(lam)
    return {m: tuple(sorted(v, key=lambda p: p.parts(), reverse=True))
            for m, v in groups.items()}


@lru_cache(maxsize=None)
def _h_by_m(n: int) -> dict[int, tuple[Partition, ...]]:
    groups: dict[int, list[Partition]] = {}
    for c in pentagonal_partitions(n):
        lam = pentagonal_to_h(c)
        m = 3 * lam.length - lam.m(1)
        groups.setdefault(m, []).append(lam)
    return {m: tuple(sorted(v, key=lambda p: p.parts(), reverse=True))
            for m, v in groups.items()}


def lambda_nm(n: int, m: int) -> tuple[Partition, ...]:
    """``Lambda(n, m)``: partitions of ``n`` with ``m_1 >= m_2 >= ...`` and length ``m``."""
    if n < 0 or m < 0:
        raise ValueError("n and m must be non-negative")
    return _g_by_length(n).get(m, ())


def omega_nm(n: int, m: int) -> tuple[Partition, ...]:
    """``Omega(n, m)``: partitions of ``n`` in the mod-3 chain set with ``3*len = m + m_1``."""
    if n < 0 or m < 0:
        raise ValueError("n and m must be non-negative")
    return _h_by_m(n).get(m, ())


# ---------------------------------------------------------------------------
# multinomials and the coefficient sums

def multinomial(top: int, parts: Sequence[int], check: bool = True) -> int:
    """``top! / prod(p!)``.

    With ``check`` the divisibility ``top / gcd(parts) | multinomial`` is asserted.
    """
    if any(p < 0 for p in parts):
        raise DomainError("negative block in multinomial")
    if sum(parts) != top:
        raise DomainError(f"blocks sum to {sum(parts)}, expected {top}")
    value = math.factorial(top)
    for p in parts:
        value //= math.factorial(p)
    if check and top:
        g = math.gcd(*parts)
        if value % (top // g):
            raise InvariantError(f"{top}/gcd{tuple(parts)} does not divide {value}")
    return value


def _a_term(lam: Partition, m: int) -> Fraction:
    m1 = lam.m(1)
    blocks = [lam.m(j) - lam.m(j + 1) for j in range(1, lam.n + 1)]
    sign = -1 if (m + m1) % 2 else 1
    return sign * Fraction(m, m1) * multinomial(m1, blocks)


def _b_blocks(lam: Partition) -> list[int]:
    # 2-residue chain first, then the 1-residue chain
    blocks = []
    for start in (2, 1):
        j = start
        while j <= lam.n:
            blocks.append(lam.m(j) - lam.m(j + 3))
            j += 3
    return blocks


def _b_term(lam: Partition, m: int) -> Fraction:
    m1, m2 = lam.m(1), lam.m(2)
    sign = -1 if (m + m2) % 2 else 1
    return sign * Fraction(m, m1 + m2) * multinomial(m1 + m2, _b_blocks(lam))


def _integral(total: Fraction, label: str) -> int:
    if total.denominator != 1:
        raise InvariantError(f"{label} = {total} is not an integer")
    return int(total)


@lru_cache(maxsize=None)
def a_row(n: int) -> dict[int, int]:
    """Nonzero ``a_{n,m}`` keyed by ``m``."""
    out = {}
    for m, lams in _g_by_length(n).items():
        if n == 0:
            continue
        val = _integral(sum((_a_term(lam, m) for lam in lams), Fraction(0)), f"a[{n},{m}]")
        if val:
            out[m] = val
    return dict(sorted(out.items()))


@lru_cache(maxsize=None)
def b_row(n: int) -> dict[int, int]:
    """Nonzero ``b_{n,m}`` keyed by ``m``."""
    out = {}
    for m, lams in _h_by_m(n).items():
        if n == 0:
            continue
        val = _integral(sum((_b_term(lam, m) for lam in lams), Fraction(0)), f"b[{n},{m}]")
        if val:
            out[m] = val
    return dict(sorted(out.items()))


def a_nm(n: int, m: int) -> int:
    if not 1 <= m <= n:
        raise DomainError(f"a_(n,m) needs 1 <= m <= n, got n={n}, m={m}")
    return a_row(n).get(m, 0)


def b_nm(n: int, m: int) -> int:
    if not 1 <= m <= 2 * n:
        raise DomainError(f"b_(n,m) needs 1 <= m <= 2n, got n={n}, m={m}")
    return b_row(n).get(m, 0)


def a_threshold(n: int) -> int:
    """``ceil((sqrt(8n+1) - 1)/2)``, i.e. the least ``m`` with ``m(m+1)/2 >= n``."""
    m = 0
    while m * (m + 1) // 2 < n:
        m += 1
    return m


def b_threshold(n: int) -> int:
    """``floor((sqrt(24n+1) - 1)/2)``, i.e. the largest ``m`` with ``m(m+1) <= 6n``."""
    m = 0
    while (m + 1) * (m + 2) <= 6 * n:
        m += 1
    return m


# ---------------------------------------------------------------------------
# traces

@dataclass(frozen=True)
class TraceWeight:
    """A named function on partitions with exact rational values."""

    name: str
    evaluator: Callable[[Partition], Fraction]

    def __call__(self, lam: Partition) -> Fraction:
        return self.evaluator(lam)


def _phi(lam: Partition) -> Fraction:
    value = Fraction(1)
    for j, mj in enumerate(lam.multiplicities, 1):
        if mj:
            value *= Fraction(2 ** mj, math.factorial(j) ** mj * math.factorial(mj))
    return value


def _psi(lam: Partition) -> Fraction:
    value = Fraction(1)
    for j, mj in enumerate(lam.multiplicities, 1):
        if mj:
            value *= Fraction((-1) ** mj, math.factorial(j) ** mj * math.factorial(mj))
    return value


phi_weight = TraceWeight("phi_weight", _phi)
psi_weight = TraceWeight("psi_weight", _psi)


def _member(family, j: int) -> QExpansion:
    try:
        if isinstance(family, Mapping):
            return family[j]
        if j - 1 < 0:
            raise IndexError
        return family[j - 1]
    except (KeyError, IndexError):
        raise DomainError(f"family has no member f_{j}") from None


def partition_trace(weight: TraceWeight, family: Mapping[int, QExpansion] | Sequence[QExpansion],
                    n: int, order: int | None = None) -> QExpansion:
    """``Tr_n(weight, f) = sum_{lambda |- n} weight(lambda) prod_j f_j^{m_j}``.

    ``family`` is either a mapping ``j -> f_j`` or a sequence ``[f_1, f_2, ...]``.
    ``order`` is only needed when ``n == 0`` and the family is empty.
    """
    members = {j: _member(family, j) for j in range(1, n + 1)}
    if order is None:
        pool = list(members.values()) or (list(family.values()) if isinstance(family, Mapping)
                                          else list(family))
        if not pool:
            raise DomainError("cannot infer truncation order from an empty family")
        order = min(f.order for f in pool)
    total = QExpansion.zero(order)
    powers: dict[tuple[int, int], QExpansion] = {}
    for lam in partitions_of(n):
        w = weight(lam)
        if not w:
            continue
        term = QExpansion.constant(w, order)
        for j, mj in enumerate(lam.multiplicities, 1):
            if mj:
                key = (j, mj)
                if key not in powers:
                    powers[key] = members[j].truncate(min(order, members[j].order)) ** mj
                term = term * powers[key]
        total = total + term
    return total


def cycle_index_coefficients(xs: Sequence[Fraction], k_max: int) -> list[Fraction]:
    """``[w^k] sum_k sum_{lambda |- k} prod_j x_j^{m_j} / m_j!`` for ``k <= k_max``.

    ``xs[0]`` is ``x_1``.
    """
    out = []
    for k in range(k_max + 1):
        total = Fraction(0)
        for lam in partitions_of(k):
            term = Fraction(1)
            for j, mj in enumerate(lam.multiplicities, 1):
                if mj:
                    term *= Fraction(xs[j - 1]) ** mj / math.factorial(mj)
            total += term
        out.append(total)
    return out
