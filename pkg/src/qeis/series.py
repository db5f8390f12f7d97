"""Exact truncated power series in ``q`` and in ``(x, q)``.

Two value types live here:

``QExpansion``
    ``q**prefactor * sum(c_n q**n for n <= order)`` with ``Fraction`` coefficients.

``BiExpansion``
    ``q**prefactor * sum(c_{k,n} x**k q**n)`` for ``-pole <= k <= x_order`` and
    ``0 <= n <= q_order``.  The variable ``x`` stands for ``2*pi*i*z`` so that
    ``zeta**alpha == exp(alpha*x)`` has rational Taylor coefficients.

Every binary operation truncates to what both operands actually determine, and
nothing is ever silently extended.  Both types are immutable.
"""

from __future__ import annotations

import cmath
import json
from fractions import Fraction
from math import factorial
from numbers import Rational
from typing import Iterable, Mapping, Sequence

__all__ = [
    "SeriesError",
    "TruncationError",
    "SingularDivisorError",
    "DomainError",
    "QExpansion",
    "BiExpansion",
    "as_fraction",
    "format_rational",
    "parse_rational",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class SeriesError(ArithmeticError):
    """Base class for series arithmetic failures."""


class TruncationError(SeriesError, IndexError):
    """A coefficient was requested beyond what the truncation determines."""


class SingularDivisorError(SeriesError, ZeroDivisionError):
    """Division by a series without an invertible leading term."""


class DomainError(SeriesError, ValueError):
    """Precondition of exp/log/add violated."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """``"p/q"``, or ``"p"`` when the denominator is 1."""
    return str(Fraction(value))


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


# ---------------------------------------------------------------------------
# dense kernels on lists of Fractions, all truncated at degree n

def _mul(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> list[Fraction]:
    out = [ZERO] * (n + 1)
    nb = min(len(b) - 1, n)
    for i, ai in enumerate(a[: n + 1]):
        if not ai:
            continue
        for j in range(min(nb, n - i) + 1):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def _inv(a: Sequence[Fraction], n: int) -> list[Fraction]:
    a0 = a[0]
    if not a0:
        raise SingularDivisorError("constant term is zero")
    inv0 = 1 / a0
    out = [inv0] + [ZERO] * n
    for k in range(1, n + 1):
        s = ZERO
        for j in range(1, k + 1):
            aj = a[j]
            if aj:
                s += aj * out[k - j]
        out[k] = -s * inv0
    return out


def _log(a: Sequence[Fraction], n: int) -> list[Fraction]:
    # a[0] == 1;  k*a_k = sum_{j=1..k} j*l_j*a_{k-j}
    out = [ZERO] * (n + 1)
    for k in range(1, n + 1):
        s = k * a[k]
        for j in range(1, k):
            if out[j] and a[k - j]:
                s -= j * out[j] * a[k - j]
        out[k] = s / k
    return out


def _exp(a: Sequence[Fraction], n: int) -> list[Fraction]:
    # a[0] == 0;  k*e_k = sum_{j=1..k} j*a_j*e_{k-j}
    out = [ONE] + [ZERO] * n
    for k in range(1, n + 1):
        s = ZERO
        for j in range(1, k + 1):
            if a[j]:
                s += j * a[j] * out[k - j]
        out[k] = s / k
    return out


def _add(a, b, n, sign=1):
    if sign == 1:
        return [a[i] + b[i] for i in range(n + 1)]
    return [a[i] - b[i] for i in range(n + 1)]


def _scale(a, c, n):
    return [c * v for v in a[: n + 1]]


# ---------------------------------------------------------------------------


class QExpansion:
    """Truncated q-series ``q**prefactor * sum_{n<=order} c_n q**n``."""

    __slots__ = ("_prefactor", "_order", "_coeffs")

    def __init__(self, coeffs: Sequence | Mapping[int, object], order: int | None = None,
                 prefactor=0):
        if isinstance(coeffs, Mapping):
            if order is None:
                raise ValueError("order is required when coefficients are given as a mapping")
            dense = [ZERO] * (order + 1)
            for deg, val in coeffs.items():
                if deg < 0:
                    raise ValueError("negative q-degree")
                if deg > order:
                    raise TruncationError(f"degree {deg} exceeds order {order}")
                dense[deg] = as_fraction(val)
        else:
            dense = [as_fraction(c) for c in coeffs]
            if order is None:
                order = len(dense) - 1
            if len(dense) > order + 1:
                if any(dense[order + 1:]):
                    raise TruncationError(f"coefficients beyond order {order}")
                dense = dense[: order + 1]
            dense += [ZERO] * (order + 1 - len(dense))
        if order < 0:
            raise ValueError("order must be non-negative")
        self._order = order
        self._coeffs = tuple(dense)
        self._prefactor = as_fraction(prefactor)

    # construction helpers
    @classmethod
    def _raw(cls, coeffs, order, prefactor):
        obj = cls.__new__(cls)
        obj._coeffs = tuple(coeffs)
        obj._order = order
        obj._prefactor = prefactor
        return obj

    @classmethod
    def zero(cls, order: int, prefactor=0) -> QExpansion:
        return cls._raw([ZERO] * (order + 1), order, as_fraction(prefactor))

    @classmethod
    def constant(cls, value, order: int) -> QExpansion:
        return cls._raw([as_fraction(value)] + [ZERO] * order, order, ZERO)

    @classmethod
    def monomial(cls, degree: int, order: int, coeff=1) -> QExpansion:
        return cls({degree: coeff}, order)

    # accessors
    @property
    def prefactor(self) -> Fraction:
        return self._prefactor

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return ZERO
        if n > self._order:
            raise TruncationError(f"q^{n} is beyond order {self._order}")
        return self._coeffs[n]

    def items(self):
        """Nonzero ``(degree, coefficient)`` pairs in increasing degree."""
        return [(n, c) for n, c in enumerate(self._coeffs) if c]

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def truncate(self, order: int) -> QExpansion:
        if order > self._order:
            raise TruncationError(f"cannot extend order {self._order} to {order}")
        return QExpansion._raw(self._coeffs[: order + 1], order, self._prefactor)

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return (self._order == other._order and self._prefactor == other._prefactor
                and self._coeffs == other._coeffs)

    def __hash__(self):
        return hash((self._order, self._prefactor, self._coeffs))

    def __repr__(self):
        return f"QExpansion({self.to_string()})"

    def to_string(self, var: str = "q") -> str:
        return _render(self.items(), var) + f" + O({var}^{self._order + 1})"

    # arithmetic
    def _coerce(self, other) -> QExpansion | None:
        if isinstance(other, QExpansion):
            return other
        if isinstance(other, (int, Rational)):
            return QExpansion.constant(other, self._order)
        return None

    def _check_prefactor(self, other: QExpansion):
        if self._prefactor != other._prefactor:
            raise DomainError(
                f"prefactor mismatch q^{self._prefactor} vs q^{other._prefactor}")

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_prefactor(other)
        n = min(self._order, other._order)
        return QExpansion._raw(_add(self._coeffs, other._coeffs, n), n, self._prefactor)

    __radd__ = __add__

    def __neg__(self):
        return QExpansion._raw([-c for c in self._coeffs], self._order, self._prefactor)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_prefactor(other)
        n = min(self._order, other._order)
        return QExpansion._raw(_add(self._coeffs, other._coeffs, n, -1), n, self._prefactor)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return QExpansion._raw(_scale(self._coeffs, Fraction(other), self._order),
                                   self._order, self._prefactor)
        if isinstance(other, BiExpansion):
            return other * self
        if not isinstance(other, QExpansion):
            return NotImplemented
        n = min(self._order, other._order)
        return QExpansion._raw(_mul(self._coeffs, other._coeffs, n), n,
                               self._prefactor + other._prefactor)

    __rmul__ = __mul__

    def inverse(self) -> QExpansion:
        """Truncated inverse.  A leading zero block moves into the prefactor."""
        lead = next((i for i, c in enumerate(self._coeffs) if c), None)
        if lead is None:
            raise SingularDivisorError("division by a series that vanishes to its order")
        n = self._order - lead
        return QExpansion._raw(_inv(self._coeffs[lead:], n), n, -(self._prefactor + lead))

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise SingularDivisorError("division by zero scalar")
            return self * (1 / Fraction(other))
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QExpansion._raw([ONE] + [ZERO] * self._order, self._order, ZERO)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exp(self) -> QExpansion:
        if self._prefactor != 0 or self._coeffs[0] != 0:
            raise DomainError("exp needs prefactor 0 and constant term 0")
        return QExpansion._raw(_exp(self._coeffs, self._order), self._order, ZERO)

    def log(self) -> QExpansion:
        if self._prefactor != 0 or self._coeffs[0] != 1:
            raise DomainError("log needs prefactor 0 and constant term 1")
        return QExpansion._raw(_log(self._coeffs, self._order), self._order, ZERO)

    def D(self) -> QExpansion:
        """``q d/dq``, acting on the prefactor as well."""
        rho = self._prefactor
        return QExpansion._raw([(n + rho) * c for n, c in enumerate(self._coeffs)],
                               self._order, rho)

    def evaluate(self, tau: complex) -> complex:
        """Numerical value at ``q = exp(2 pi i tau)``."""
        q = cmath.exp(2j * cmath.pi * tau)
        total = 0j
        for c in reversed(self._coeffs):
            total = total * q + float(c)
        return total * cmath.exp(2j * cmath.pi * tau * float(self._prefactor))

    # serialization
    def to_dict(self) -> dict:
        return {
            "prefactor": format_rational(self._prefactor),
            "order": self._order,
            "coeffs": [[n, format_rational(c)] for n, c in self.items()],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> QExpansion:
        order = int(data["order"])
        coeffs = {int(n): parse_rational(c) for n, c in data["coeffs"]}
        return cls(coeffs, order, parse_rational(str(data["prefactor"])))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> QExpansion:
        return cls.from_dict(json.loads(text))


def _render(items, var: str) -> str:
    parts = []
    for n, c in items:
        mono = "" if n == 0 else (var if n == 1 else f"{var}^{n}")
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------


class BiExpansion:
    """Truncated series in ``x`` (with a bounded pole) and ``q``.

    Stored as one q-coefficient tuple per x-degree, from ``-x_pole_order`` up to
    ``x_order``; all rows share ``q_order`` and the q-prefactor.
    """

    __slots__ = ("_prefactor", "_xlow", "_x_order", "_q_order", "_rows")

    def __init__(self, coeffs: Mapping[tuple[int, int], object], x_order: int, q_order: int,
                 x_pole_order: int = 0, prefactor=0):
        if x_pole_order < 0:
            raise ValueError("x_pole_order must be non-negative")
        xlow = -x_pole_order
        rows = [[ZERO] * (q_order + 1) for _ in range(x_order - xlow + 1)]
        for (k, n), val in coeffs.items():
            if k < xlow or n < 0:
                raise ValueError(f"coefficient x^{k} q^{n} below the representable range")
            if k > x_order or n > q_order:
                raise TruncationError(f"coefficient x^{k} q^{n} beyond truncation")
            rows[k - xlow][n] = as_fraction(val)
        self._init(rows, xlow, x_order, q_order, as_fraction(prefactor))

    def _init(self, rows, xlow, x_order, q_order, prefactor):
        self._rows = tuple(tuple(r) for r in rows)
        self._xlow = xlow
        self._x_order = x_order
        self._q_order = q_order
        self._prefactor = prefactor

    @classmethod
    def _raw(cls, rows, xlow, x_order, q_order, prefactor) -> BiExpansion:
        obj = cls.__new__(cls)
        obj._init(rows, xlow, x_order, q_order, prefactor)
        return obj

    @classmethod
    def from_rows(cls, rows: Sequence[QExpansion | Sequence], x_order: int | None = None,
                  x_pole_order: int = 0) -> BiExpansion:
        """Build from q-series rows for x-degrees ``-x_pole_order, ..., x_order``."""
        qs = [r if isinstance(r, QExpansion) else QExpansion(r) for r in rows]
        if not qs:
            raise ValueError("need at least one row")
        prefactors = {r.prefactor for r in qs}
        if len(prefactors) != 1:
            raise DomainError("rows carry different prefactors")
        n = min(r.order for r in qs)
        if x_order is None:
            x_order = len(qs) - 1 - x_pole_order
        if len(qs) != x_order + x_pole_order + 1:
            raise ValueError("row count does not match the x-range")
        return cls._raw([r.coeffs[: n + 1] for r in qs], -x_pole_order, x_order, n,
                        prefactors.pop())

    @classmethod
    def from_exponentials(cls, terms: Iterable[tuple[object, object, int]], x_order: int,
                          q_order: int) -> BiExpansion:
        """``sum c * zeta**alpha * q**beta`` with ``zeta**alpha = exp(alpha*x)``.

        ``beta`` must be a non-negative integer; terms with ``beta > q_order`` are dropped.
        """
        rows = [[ZERO] * (q_order + 1) for _ in range(x_order + 1)]
        inv_fact = [Fraction(1, factorial(k)) for k in range(x_order + 1)]
        for c, alpha, beta in terms:
            if beta > q_order:
                continue
            if beta < 0 or int(beta) != beta:
                raise DomainError(f"q-exponent {beta} is not a non-negative integer")
            beta = int(beta)
            c = as_fraction(c)
            alpha = as_fraction(alpha)
            power = ONE
            for k in range(x_order + 1):
                rows[k][beta] += c * power * inv_fact[k]
                power *= alpha
        return cls._raw(rows, 0, x_order, q_order, ZERO)

    @classmethod
    def from_q(cls, series: QExpansion, x_order: int) -> BiExpansion:
        rows = [series.coeffs] + [(ZERO,) * (series.order + 1)] * x_order
        return cls._raw(rows, 0, x_order, series.order, series.prefactor)

    @classmethod
    def x_series(cls, coeffs: Sequence, q_order: int) -> BiExpansion:
        """A pure power series in ``x`` (no q-dependence); ``coeffs[k]`` multiplies ``x**k``."""
        rows = [[as_fraction(c)] + [ZERO] * q_order for c in coeffs]
        return cls._raw(rows, 0, len(coeffs) - 1, q_order, ZERO)

    # accessors
    @property
    def prefactor(self) -> Fraction:
        return self._prefactor

    @property
    def x_pole_order(self) -> int:
        return -self._xlow

    @property
    def x_order(self) -> int:
        return self._x_order

    @property
    def q_order(self) -> int:
        return self._q_order

    def coeff(self, k: int, n: int) -> Fraction:
        return self.coeff_x(k)[n]

    def coeff_x(self, k: int) -> QExpansion:
        """The q-series multiplying ``x**k``."""
        if k < self._xlow or k > self._x_order:
            raise TruncationError(
                f"x^{k} outside [{self._xlow}, {self._x_order}]")
        return QExpansion._raw(self._rows[k - self._xlow], self._q_order, self._prefactor)

    def items(self):
        return [(k + self._xlow, n, c) for k, row in enumerate(self._rows)
                for n, c in enumerate(row) if c]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._rows)

    def truncate(self, x_order: int, q_order: int) -> BiExpansion:
        if x_order > self._x_order or q_order > self._q_order:
            raise TruncationError("cannot extend a truncated series")
        rows = [r[: q_order + 1] for r in self._rows[: x_order - self._xlow + 1]]
        return BiExpansion._raw(rows, self._xlow, x_order, q_order, self._prefactor)

    def __eq__(self, other):
        if not isinstance(other, BiExpansion):
            return NotImplemented
        return (self._xlow == other._xlow and self._x_order == other._x_order
                and self._q_order == other._q_order and self._prefactor == other._prefactor
                and self._rows == other._rows)

    def __hash__(self):
        return hash((self._xlow, self._x_order, self._q_order, self._prefactor, self._rows))

    def __repr__(self):
        return (f"BiExpansion(x in [{self._xlow}, {self._x_order}], "
                f"q_order={self._q_order}, prefactor={self._prefactor})")

    # arithmetic
    def _check_prefactor(self, other):
        if self._prefactor != other._prefactor:
            raise DomainError(
                f"prefactor mismatch q^{self._prefactor} vs q^{other._prefactor}")

    def _row(self, k, n):
        if k < self._xlow:
            return [ZERO] * (n + 1)
        return self._rows[k - self._xlow][: n + 1]

    def _lift(self, other):
        if isinstance(other, BiExpansion):
            return other
        if isinstance(other, (int, Rational)):
            return BiExpansion.x_series([other], self._q_order)._widen(self._x_order)
        if isinstance(other, QExpansion):
            return BiExpansion.from_q(other, self._x_order)
        return None

    def _widen(self, x_order):
        # only for x-constant lifts: constants are exact in x to any order
        rows = list(self._rows) + [(ZERO,) * (self._q_order + 1)] * (x_order - self._x_order)
        return BiExpansion._raw(rows, self._xlow, x_order, self._q_order, self._prefactor)

    def _addsub(self, other, sign):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        self._check_prefactor(other)
        xlow = min(self._xlow, other._xlow)
        K = min(self._x_order, other._x_order)
        n = min(self._q_order, other._q_order)
        rows = [_add(self._row(k, n), other._row(k, n), n, sign) for k in range(xlow, K + 1)]
        return BiExpansion._raw(rows, xlow, K, n, self._prefactor)

    def __add__(self, other):
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return BiExpansion._raw([[-c for c in r] for r in self._rows], self._xlow,
                                self._x_order, self._q_order, self._prefactor)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            c = Fraction(other)
            return BiExpansion._raw([[c * v for v in r] for r in self._rows], self._xlow,
                                    self._x_order, self._q_order, self._prefactor)
        if isinstance(other, QExpansion):
            n = min(self._q_order, other.order)
            rows = [_mul(r, other.coeffs, n) for r in self._rows]
            return BiExpansion._raw(rows, self._xlow, self._x_order, n,
                                    self._prefactor + other.prefactor)
        if not isinstance(other, BiExpansion):
            return NotImplemented
        n = min(self._q_order, other._q_order)
        xlow = self._xlow + other._xlow
        K = min(self._x_order + other._xlow, other._x_order + self._xlow)
        rows = [[ZERO] * (n + 1) for _ in range(K - xlow + 1)]
        for i, ra in enumerate(self._rows):
            if not any(ra):
                continue
            ka = i + self._xlow
            for j, rb in enumerate(other._rows):
                k = ka + j + other._xlow
                if k > K:
                    break
                if not any(rb):
                    continue
                prod = _mul(ra, rb, n)
                target = rows[k - xlow]
                for m in range(n + 1):
                    if prod[m]:
                        target[m] += prod[m]
        return BiExpansion._raw(rows, xlow, K, n, self._prefactor + other._prefactor)

    __rmul__ = __mul__

    def inverse(self, max_pole: int = 1) -> BiExpansion:
        """Truncated inverse; a zero of order v at ``x = 0`` becomes a pole of order v."""
        lead = next((i for i, r in enumerate(self._rows) if any(r)), None)
        if lead is None:
            raise SingularDivisorError("division by a series that vanishes to its order")
        val = lead + self._xlow
        if self._rows[lead][0] == 0:
            raise SingularDivisorError(
                f"leading x^{val} coefficient has no invertible constant term")
        if val > max_pole:
            raise DomainError(f"inverse would need an x-pole of order {val} > {max_pole}")
        n = self._q_order
        unit = self._rows[lead:]
        m = len(unit) - 1  # x-degrees 0..m of the inverse unit are determined
        if m - val < 0:
            raise TruncationError("not enough x-order to invert")
        inv0 = _inv(unit[0], n)
        inv = [inv0]
        for k in range(1, m + 1):
            s = [ZERO] * (n + 1)
            for j in range(1, k + 1):
                if any(unit[j]):
                    s = _add(s, _mul(unit[j], inv[k - j], n), n)
            inv.append([-v for v in _mul(s, inv0, n)])
        # result is x^(-val) * inv, valid through x^(m - val)
        x_order = m - val
        rows = inv
        if val < 0:
            rows = [[ZERO] * (n + 1) for _ in range(-val)] + rows
            return BiExpansion._raw(rows, 0, x_order, n, -self._prefactor)
        return BiExpansion._raw(rows, -val, x_order, n, -self._prefactor)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise SingularDivisorError("division by zero scalar")
            return self * (1 / Fraction(other))
        if isinstance(other, QExpansion):
            return self * other.inverse()
        if not isinstance(other, BiExpansion):
            return NotImplemented
        return self * other.inverse()

    def _require_regular(self, what):
        if self._prefactor != 0:
            raise DomainError(f"{what} needs prefactor 0")
        if any(any(r) for r in self._rows[: -self._xlow]):
            raise DomainError(f"{what} needs a series without x-pole")

    def exp(self) -> BiExpansion:
        self._require_regular("exp")
        if self.coeff(0, 0) != 0:
            raise DomainError("exp needs constant term 0")
        n, K = self._q_order, self._x_order
        a = [self._row(k, n) for k in range(K + 1)]
        e = [[ONE] + [ZERO] * n]
        for k in range(1, K + 1):
            s = [ZERO] * (n + 1)
            for j in range(1, k + 1):
                if any(a[j]):
                    s = _add(s, _scale(_mul(a[j], e[k - j], n), j, n), n)
            e.append(_scale(s, Fraction(1, k), n))
        base = _exp(a[0], n)
        return BiExpansion._raw([_mul(r, base, n) for r in e], 0, K, n, ZERO)

    def log(self) -> BiExpansion:
        self._require_regular("log")
        if self.coeff(0, 0) != 1:
            raise DomainError("log needs constant term 1")
        n, K = self._q_order, self._x_order
        a = [self._row(k, n) for k in range(K + 1)]
        inv0 = _inv(a[0], n)
        f = [None] + [_mul(r, inv0, n) for r in a[1:]]
        out = [_log(a[0], n)]
        for k in range(1, K + 1):
            s = _scale(f[k], k, n)
            for j in range(1, k):
                if any(out[j]) and any(f[k - j]):
                    s = _add(s, _scale(_mul(out[j], f[k - j], n), j, n), n, -1)
            out.append(_scale(s, Fraction(1, k), n))
        return BiExpansion._raw(out, 0, K, n, ZERO)

    def D(self) -> BiExpansion:
        """``q d/dq`` applied coefficientwise."""
        rho = self._prefactor
        rows = [[(m + rho) * c for m, c in enumerate(r)] for r in self._rows]
        return BiExpansion._raw(rows, self._xlow, self._x_order, self._q_order, rho)

    def scale_x(self, factor) -> BiExpansion:
        """Substitute ``x -> factor * x`` (``zeta -> zeta**factor``)."""
        c = as_fraction(factor)
        rows = []
        for i, r in enumerate(self._rows):
            w = c ** (i + self._xlow)
            rows.append([w * v for v in r])
        return BiExpansion._raw(rows, self._xlow, self._x_order, self._q_order, self._prefactor)

    def evaluate(self, z: complex, tau: complex) -> complex:
        """Numerical value at ``x = 2 pi i z``, ``q = exp(2 pi i tau)``."""
        x = 2j * cmath.pi * z
        total = 0j
        for i, r in enumerate(self._rows):
            k = i + self._xlow
            qs = QExpansion._raw(r, self._q_order, ZERO).evaluate(tau)
            total += qs * x ** k
        return total * cmath.exp(2j * cmath.pi * tau * float(self._prefactor))

    def to_dict(self) -> dict:
        return {
            "prefactor": format_rational(self._prefactor),
            "x_pole_order": self.x_pole_order,
            "x_order": self._x_order,
            "q_order": self._q_order,
            "coeffs": [[k, n, format_rational(c)] for k, n, c in self.items()],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> BiExpansion:
        coeffs = {(int(k), int(n)): parse_rational(c) for k, n, c in data["coeffs"]}
        return cls(coeffs, int(data["x_order"]), int(data["q_order"]),
                   int(data["x_pole_order"]), parse_rational(str(data["prefactor"])))
