"""Exact scalars: prime fields F_p and the rational function field Q(x).

Two layers live here. ``Fp`` and ``RatFun`` are user-facing immutable values
with operator overloading. ``PrimeField`` and ``RationalFunctionField`` are
field descriptors that know how to store many scalars at once in a numpy
array (int64 residues for F_p, object arrays of ``RatFun`` for Q(x)); the
linear algebra works on those arrays directly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

import numpy as np
from sympy import ZZ, isprime
from sympy.polys.rings import ring

from .errors import DivisionByZero, FieldNotPrime, MixedFields, ParseError

_RING, _X = ring("x", ZZ)


# ---------------------------------------------------------------------------
# scalar values


@dataclass(frozen=True)
class Fp:
    """Residue class ``residue mod modulus``."""

    residue: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "residue", int(self.residue) % self.modulus)

    @property
    def field(self) -> "PrimeField":
        return prime_field(self.modulus)

    def _coerce(self, other) -> "Fp":
        if isinstance(other, Fp):
            if other.modulus != self.modulus:
                raise MixedFields(f"F_{self.modulus} vs F_{other.modulus}")
            return other
        if isinstance(other, (int, np.integer)):
            return Fp(int(other), self.modulus)
        if isinstance(other, RatFun):
            raise MixedFields(f"F_{self.modulus} vs Q(x)")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.residue + o.residue, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.residue - o.residue, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.residue * o.residue, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.residue, self.modulus)

    def inv(self) -> "Fp":
        if self.residue == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.modulus}")
        return Fp(pow(self.residue, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inv()

    def is_zero(self) -> bool:
        return self.residue == 0

    def __str__(self):
        return str(self.residue)


def _poly_from_coeffs(coeffs: Iterable[int]):
    return _RING.from_dict({(i,): int(c) for i, c in enumerate(coeffs) if c})


def _poly_coeffs(poly) -> tuple[int, ...]:
    if not poly:
        return (0,)
    out = [0] * (poly.degree() + 1)
    for (e,), c in poly.terms():
        out[e] = int(c)
    return tuple(out)


def _render_poly(coeffs: tuple[int, ...]) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0 and len(coeffs) > 1:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append(f"{c}*x")
        else:
            terms.append(f"{c}*x^{i}")
    # no spaces: relation files separate entries by single spaces
    return "+".join(terms).replace("+-", "-")


class RatFun:
    """Element of Q(x) held as num/den in Z[x], coprime, den with positive lead."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        if isinstance(num, RatFun) or isinstance(den, RatFun):
            q = (num if isinstance(num, RatFun) else RatFun(num)) / den
            self.num, self.den, self._hash = q.num, q.den, None
            return
        num = _as_poly(num)
        den = _as_poly(den)
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            num, den = _RING.zero, _RING.one
        else:
            _, num, den = num.cofactors(den)
            if den.LC < 0:
                num, den = -num, -den
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num, den) -> "RatFun":
        out = object.__new__(cls)
        out.num, out.den, out._hash = num, den, None
        return out

    @classmethod
    def from_coeffs(cls, num: Iterable[int], den: Iterable[int] = (1,)) -> "RatFun":
        return cls(_poly_from_coeffs(num), _poly_from_coeffs(den))

    @classmethod
    def x(cls) -> "RatFun":
        return cls._raw(_X, _RING.one)

    @property
    def numerator(self) -> tuple[int, ...]:
        return _poly_coeffs(self.num)

    @property
    def denominator(self) -> tuple[int, ...]:
        return _poly_coeffs(self.den)

    @property
    def field(self) -> "RationalFunctionField":
        return QX

    def _coerce(self, other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, (int, np.integer)):
            return RatFun._raw(_RING(int(other)), _RING.one)
        if isinstance(other, Fraction):
            return RatFun(other.numerator, other.denominator)
        if isinstance(other, Fp):
            raise MixedFields("Q(x) vs F_p")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFun(self.num + o.num, self.den)
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num or not o.num:
            return RatFun()
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "RatFun":
        if not self.num:
            raise DivisionByZero("0 has no inverse in Q(x)")
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inv()

    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.numerator, self.denominator))
        return self._hash

    def __str__(self):
        return f"{_render_poly(self.numerator)}/{_render_poly(self.denominator)}"

    def __repr__(self):
        return f"RatFun({self})"


def _as_poly(v):
    if isinstance(v, (int, np.integer)):
        return _RING(int(v))
    if isinstance(v, (list, tuple)):
        return _poly_from_coeffs(v)
    if v.ring == _RING:
        return v
    raise TypeError(f"cannot read {v!r} as a polynomial")


FieldElement = Union[Fp, RatFun]


def field_arith(op: str, a: FieldElement, b: FieldElement | None = None):
    """Dispatch a named field operation; mirrors the operator overloads."""
    if b is not None and type(a) is not type(b):
        raise MixedFields(f"{type(a).__name__} vs {type(b).__name__}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    if op == "eq":
        return a.field == b.field and a == b
    raise ValueError(f"unknown field operation {op!r}")


# ---------------------------------------------------------------------------
# field descriptors


class PrimeField:
    """F_p, with scalars stored as int64 residues."""

    dtype = np.int64
    is_prime = True

    def __init__(self, p: int):
        if p < 2 or not isprime(p):
            raise FieldNotPrime(f"{p} is not prime")
        if p >= 2**31:
            raise FieldNotPrime(f"modulus {p} too large for int64 elimination")
        self.p = p
        self.char = p

    def __repr__(self):
        return f"F_{self.p}"

    def spec(self) -> str:
        return f"Fp {self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    # scalar conversions
    def raw(self, v) -> int:
        if isinstance(v, Fp):
            if v.modulus != self.p:
                raise MixedFields(f"F_{v.modulus} element in F_{self.p}")
            return v.residue
        if isinstance(v, RatFun):
            raise MixedFields("Q(x) element in a prime field")
        if isinstance(v, Fraction):
            return self.raw(v.numerator) * self.inv(v.denominator) % self.p
        if isinstance(v, str):
            return self.parse(v)
        return int(v) % self.p

    def element(self, raw) -> Fp:
        return Fp(int(raw), self.p)

    def parse(self, token: str) -> int:
        try:
            return int(token) % self.p
        except ValueError:
            raise ParseError(f"bad F_{self.p} scalar {token!r}") from None

    def render(self, raw) -> str:
        return str(int(raw) % self.p)

    def elements(self):
        return range(self.p)

    def random(self, rng) -> int:
        return int(rng.integers(self.p))

    # array operations
    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def array(self, rows) -> np.ndarray:
        rows = [[self.raw(v) for v in row] for row in rows]
        if not rows:
            return np.zeros((0, 0), dtype=np.int64)
        return np.array(rows, dtype=np.int64).reshape(len(rows), -1)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return np.mod(a, self.p)

    def neg(self, a):
        return np.mod(-a, self.p)

    def nonzero(self, a: np.ndarray) -> np.ndarray:
        return a != 0

    def inv(self, raw) -> int:
        raw = int(raw) % self.p
        if raw == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.p}")
        return pow(raw, -1, self.p)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # entries < 2^31 so object fallback is only needed for long sums
        if self.p < 3_000_000:
            return np.mod(a @ b, self.p)
        return np.mod(a.astype(object) @ b.astype(object), self.p).astype(np.int64)

    def one(self) -> int:
        return 1

    def zero(self) -> int:
        return 0


_RATIONAL = re.compile(r"^\s*(-?\d+)(?:/(\d+))?\s*$")


class RationalFunctionField:
    """Q(x), with scalars stored as ``RatFun`` objects in object arrays."""

    dtype = object
    is_prime = False
    char = 0

    def __repr__(self):
        return "Q(x)"

    def spec(self) -> str:
        return "Qx"

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField)

    def __hash__(self):
        return hash("Qx")

    def raw(self, v) -> RatFun:
        if isinstance(v, RatFun):
            return v
        if isinstance(v, Fp):
            raise MixedFields("F_p element in Q(x)")
        if isinstance(v, str):
            return self.parse(v)
        if isinstance(v, Fraction):
            return RatFun(v.numerator, v.denominator)
        return RatFun(int(v))

    def element(self, raw) -> RatFun:
        return self.raw(raw)

    def parse(self, token: str) -> RatFun:
        return parse_ratfun(token)

    def render(self, raw) -> str:
        return str(raw)

    def random(self, rng, degree: int = 1, size: int = 3) -> RatFun:
        num = [int(c) for c in rng.integers(-size, size + 1, degree + 1)]
        den = [int(c) for c in rng.integers(-size, size + 1, degree + 1)]
        if not any(den):
            den = [1]
        return RatFun.from_coeffs(num, den)

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(_ZERO)
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = _ONE
        return out

    def array(self, rows) -> np.ndarray:
        rows = [[self.raw(v) for v in row] for row in rows]
        if not rows:
            return self.zeros((0, 0))
        out = self.zeros((len(rows), len(rows[0])))
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                out[i, j] = v
        return out

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return a

    def neg(self, a):
        return -a

    def nonzero(self, a: np.ndarray) -> np.ndarray:
        return np.fromiter((not v.is_zero() for v in a.flat), dtype=bool, count=a.size).reshape(a.shape)

    def inv(self, raw) -> RatFun:
        return raw.inv()

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = self.zeros((a.shape[0], b.shape[1]))
        for i in range(a.shape[0]):
            for j in range(b.shape[1]):
                acc = _ZERO
                for k in range(a.shape[1]):
                    if not a[i, k].is_zero() and not b[k, j].is_zero():
                        acc = acc + a[i, k] * b[k, j]
                out[i, j] = acc
        return out

    def one(self) -> RatFun:
        return _ONE

    def zero(self) -> RatFun:
        return _ZERO


_ZERO = RatFun()
_ONE = RatFun(1)
QX = RationalFunctionField()

Field = Union[PrimeField, RationalFunctionField]


@lru_cache(maxsize=None)
def prime_field(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str) -> Field:
    """Read a field declaration such as ``Fp 7`` or ``Qx``."""
    parts = text.split()
    if parts == ["Qx"]:
        return QX
    if len(parts) == 2 and parts[0] == "Fp":
        try:
            p = int(parts[1])
        except ValueError:
            raise ParseError(f"bad modulus {parts[1]!r}") from None
        return prime_field(p)
    raise ParseError(f"unknown field {text!r}")


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(\*?\s*x(?:\s*\^\s*(\d+))?)?")


def _parse_poly(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    if not text:
        raise ParseError("empty polynomial")
    coeffs: dict[int, int] = {}
    pos = 0
    compact = text.replace(" ", "")
    while pos < len(compact):
        m = _TERM.match(compact, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ParseError(f"bad polynomial {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        if m.group(3):
            c = int(m.group(2)) if m.group(2) else 1
            e = int(m.group(4)) if m.group(4) else 1
        else:
            c, e = int(m.group(2)), 0
        coeffs[e] = coeffs.get(e, 0) + sign * c
        pos = m.end()
    top = max(coeffs)
    return [coeffs.get(i, 0) for i in range(top + 1)]


def parse_ratfun(text: str) -> RatFun:
    """Parse ``num/den`` with polynomials written as ``c0 + c1*x + c2*x^2``.

    A bare polynomial or a rational constant like ``-3/4`` is accepted too.
    """
    m = _RATIONAL.match(text)
    if m:
        return RatFun(int(m.group(1)), int(m.group(2) or 1))
    if "/" in text:
        num, _, den = text.rpartition("/")
        return RatFun.from_coeffs(_parse_poly(num), _parse_poly(den))
    return RatFun.from_coeffs(_parse_poly(text))
