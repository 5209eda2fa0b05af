"""Certified real arithmetic.

Two number systems live here:

* :class:`Ball` -- a dyadic midpoint-radius enclosure. Every operation
  returns a ball containing the exact result of the operation applied to any
  members of the operand balls; rounding errors are folded into the radius.
* :class:`FieldElement` -- exact arithmetic in Q(beta), where beta is the
  unique root of an integer polynomial inside a rational bracket.

Comparisons between the two go through :func:`certified_compare`, which
never guesses: overlapping balls come back as ``Ordering.AMBIGUOUS``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .errors import MixedFields, MultipleRoots, NoRootInBracket, PrecisionExhausted

Rational = Union[int, Fraction]

#: Bits of the first attempt when deciding the sign of a field element.
SIGN_START_BITS = 64
#: Hard ceiling for sign decisions; reached only for reducible polynomials.
SIGN_MAX_BITS = 1 << 14


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1
    AMBIGUOUS = 2


def _log2_floor(q: Fraction) -> int:
    """floor(log2(q)) for a positive rational, without float overflow."""
    q = abs(q)
    e = q.numerator.bit_length() - q.denominator.bit_length()
    return e if (q.numerator << max(0, -e)) >= (q.denominator << max(0, e)) else e - 1


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # decimal meaning of the literal, not the binary double
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


# ---------------------------------------------------------------------------
# Ball arithmetic
# ---------------------------------------------------------------------------

class Ball:
    """Dyadic enclosure ``[(man - rad) * 2**exp, (man + rad) * 2**exp]``.

    ``prec`` bounds the bit length of the mantissa; results are rounded to it
    and the rounding error is added to ``rad``.
    """

    __slots__ = ("man", "rad", "exp", "prec")

    def __init__(self, man: int, rad: int = 0, exp: int = 0, prec: int = 128):
        if rad < 0:
            raise ValueError("radius must be nonnegative")
        if prec < 2:
            raise ValueError("precision must be at least 2 bits")
        self.man = man
        self.rad = rad
        self.exp = exp
        self.prec = prec
        self._normalize()

    def _normalize(self) -> None:
        excess = abs(self.man).bit_length() - self.prec
        if excess > 0:
            # floor rounding costs at most one unit in the new last place
            self.man >>= excess
            self.rad = -((-self.rad) >> excess) + 1
            self.exp += excess

    # -- construction -------------------------------------------------------

    @classmethod
    def exact(cls, value, prec: int = 128) -> "Ball":
        """Enclose an exact rational; the radius is zero when it is dyadic and fits."""
        if isinstance(value, Ball):
            return value
        q = _as_fraction(value)
        p, d = q.numerator, q.denominator
        if d & (d - 1) == 0 and abs(p).bit_length() <= prec:
            return cls(p, 0, -(d.bit_length() - 1), prec)
        exp = abs(p).bit_length() - d.bit_length() - prec - 1
        if exp < 0:
            man, r = divmod(p << -exp, d)
        else:
            man, r = divmod(p, d << exp)
        return cls(man, 1 if r else 0, exp, prec)

    @classmethod
    def from_interval(cls, lo, hi, prec: int = 128, grid: int | None = None) -> "Ball":
        """Smallest dyadic ball on the grid ``2**-grid`` containing ``[lo, hi]``."""
        lo, hi = _as_fraction(lo), _as_fraction(hi)
        if lo > hi:
            raise ValueError("empty interval")
        if grid is None:
            width = hi - lo
            mag = max(abs(lo), abs(hi), Fraction(1, 1 << 60))
            grid = prec - (_log2_floor(mag) + 1)
            if width:
                grid = min(grid, -_log2_floor(width) + 2)
        scale = Fraction(2) ** grid
        a = math.floor(lo * scale)
        b = math.ceil(hi * scale)
        man = (a + b) // 2
        rad = max(b - man, man - a)
        return cls(man, rad, -grid, max(prec, abs(man).bit_length() + 1))

    # -- views --------------------------------------------------------------

    def _scale(self) -> Fraction:
        return Fraction(2) ** self.exp

    @property
    def midpoint(self) -> Fraction:
        return self.man * self._scale()

    @property
    def radius(self) -> Fraction:
        return self.rad * self._scale()

    @property
    def precision_bits(self) -> int:
        return self.prec

    @property
    def lower(self) -> Fraction:
        return (self.man - self.rad) * self._scale()

    @property
    def upper(self) -> Fraction:
        return (self.man + self.rad) * self._scale()

    def contains(self, value) -> bool:
        if isinstance(value, Ball):
            return self.lower <= value.lower and value.upper <= self.upper
        q = _as_fraction(value)
        return self.lower <= q <= self.upper

    def sign(self) -> int | None:
        """Certified sign, or ``None`` when the ball straddles zero."""
        if self.man - self.rad > 0:
            return 1
        if self.man + self.rad < 0:
            return -1
        if self.man == 0 and self.rad == 0:
            return 0
        return None

    def abs_upper(self) -> Fraction:
        return (abs(self.man) + self.rad) * self._scale()

    def __float__(self) -> float:
        return float(self.midpoint)

    def __repr__(self) -> str:
        return f"Ball({float(self.midpoint)!r} +/- {float(self.radius):.3g}, prec={self.prec})"

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Ball":
        if isinstance(other, Ball):
            return other
        if isinstance(other, FieldElement):
            return other.to_ball(self.prec)
        return Ball.exact(other, self.prec)

    def __neg__(self) -> "Ball":
        return Ball(-self.man, self.rad, self.exp, self.prec)

    def __add__(self, other) -> "Ball":
        o = self._coerce(other)
        e = min(self.exp, o.exp)
        sa, so = self.exp - e, o.exp - e
        return Ball((self.man << sa) + (o.man << so), (self.rad << sa) + (o.rad << so),
                    e, max(self.prec, o.prec))

    __radd__ = __add__

    def __sub__(self, other) -> "Ball":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Ball":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Ball":
        o = self._coerce(other)
        man = self.man * o.man
        rad = abs(self.man) * o.rad + abs(o.man) * self.rad + self.rad * o.rad
        return Ball(man, rad, self.exp + o.exp, max(self.prec, o.prec))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Ball":
        o = self._coerce(other)
        if abs(o.man) <= o.rad:
            raise ZeroDivisionError("divisor ball contains zero")
        prec = max(self.prec, o.prec)
        ma, ra, mb, rb = self.man, self.rad, o.man, o.rad
        # quotient mantissa with prec + 2 significant bits
        shift = max(0, prec + 2 + mb.bit_length() - ma.bit_length())
        q = (ma << shift) // mb
        amb = abs(mb)
        # |a/b - ma/mb| <= (ra*|mb| + rb*|ma|) / (|mb| * (|mb| - rb)), plus one unit for floor
        num = (ra * amb + rb * abs(ma)) << shift
        den = amb * (amb - rb)
        rad = -(-num // den) + 1
        return Ball(q, rad, self.exp - o.exp - shift, prec)

    def __rtruediv__(self, other) -> "Ball":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "Ball":
        if n < 0:
            return Ball.exact(1, self.prec) / (self ** -n)
        result = Ball.exact(1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def with_precision(self, prec: int) -> "Ball":
        return Ball(self.man, self.rad, self.exp, prec)


# ---------------------------------------------------------------------------
# Polynomials with exact rational coefficients (ascending order)
# ---------------------------------------------------------------------------

def _strip(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    _strip(a)
    _strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] / b[-1]
        q[k] = c
        for i, bc in enumerate(b):
            a[i + k] -= c * bc
        a.pop()
        _strip(a)
    return _strip(q), a


def _poly_deriv(p: Sequence) -> list:
    return [i * c for i, c in enumerate(p)][1:]


def _poly_sign_at(asc: Sequence[int], x: Fraction) -> int:
    """Exact sign of an integer polynomial at a rational point."""
    p, q = x.numerator, x.denominator
    d = len(asc) - 1
    acc = 0
    qp = 1
    # homogenised Horner: sum c_i p^i q^(d-i)
    for i in range(d, -1, -1):
        acc = acc * p + asc[i] * qp
        qp *= q
    return (acc > 0) - (acc < 0)


def _sturm_chain(asc: Sequence) -> list[list]:
    chain = [[Fraction(c) for c in asc], [Fraction(c) for c in _poly_deriv(asc)]]
    _strip(chain[1])
    while chain[-1] and len(chain[-1]) > 1:
        _, r = _poly_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain: list[list], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = sum(c * x ** i for i, c in enumerate(p))
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(poly: Sequence[int], lo, hi) -> int:
    """Number of distinct real roots in ``(lo, hi]`` (Sturm's theorem)."""
    asc = list(reversed(poly))
    chain = _sturm_chain(asc)
    return _sign_changes(chain, _as_fraction(lo)) - _sign_changes(chain, _as_fraction(hi))


def _check_single_root(poly: tuple[int, ...], lo: Fraction, hi: Fraction) -> None:
    asc = list(reversed(poly))
    at_lo = _poly_sign_at(asc, lo) == 0
    n_roots = count_real_roots(poly, lo, hi) + at_lo
    if n_roots == 0:
        raise NoRootInBracket(f"polynomial {poly} has no root in [{lo}, {hi}]")
    if n_roots > 1:
        raise MultipleRoots(f"polynomial {poly} has {n_roots} roots in [{lo}, {hi}]")
    g = _gcd_poly(asc, _poly_deriv(asc))
    if len(g) > 1:
        # a repeated root of poly is a root of gcd(poly, poly')
        g_chain = _sturm_chain(g)
        at_lo_g = sum(c * lo ** i for i, c in enumerate(g)) == 0
        if _sign_changes(g_chain, lo) - _sign_changes(g_chain, hi) + at_lo_g > 0:
            raise MultipleRoots(f"root of {poly} in [{lo}, {hi}] is not simple")


def _gcd_poly(a: Sequence, b: Sequence) -> list:
    a = _strip([Fraction(c) for c in a])
    b = _strip([Fraction(c) for c in b])
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return a


@lru_cache(maxsize=512)
def _refine_bracket(poly: tuple[int, ...], lo: Fraction, hi: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Bisect until the bracket is no wider than ``2**-bits``; nested in the coarser results."""
    if bits > 64:
        lo, hi = _refine_bracket(poly, lo, hi, bits - 64)
    asc = tuple(reversed(poly))
    s_lo = _poly_sign_at(asc, lo)
    if s_lo == 0:
        return lo, lo
    if _poly_sign_at(asc, hi) == 0:
        return hi, hi
    target = Fraction(1, 1 << bits)
    while hi - lo > target:
        mid = (lo + hi) / 2
        s = _poly_sign_at(asc, mid)
        if s == 0:
            return mid, mid
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def isolate_root(poly: Sequence[int], bracket, width) -> Ball:
    """Certified enclosure of the unique simple root of ``poly`` in ``bracket``.

    ``poly`` lists integer coefficients from the highest degree down, so
    ``(1, -1, -1)`` is ``t**2 - t - 1``. The result has radius at most
    ``width``; tighter widths give nested enclosures.
    """
    poly = tuple(int(c) for c in poly)
    lo, hi = (_as_fraction(b) for b in bracket)
    width = _as_fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if lo > hi:
        lo, hi = hi, lo
    _check_single_root(poly, lo, hi)
    bits = max(1, -_log2_floor(width) + 3)
    a, b = _refine_bracket(poly, lo, hi, bits)
    return Ball.from_interval(a, b, prec=bits + 8, grid=bits + 1)


# ---------------------------------------------------------------------------
# Exact arithmetic in Q(beta)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NumberField:
    """Q(beta) for beta the root of ``poly`` (highest degree first) inside ``bracket``."""

    poly: tuple[int, ...]
    bracket: tuple[Fraction, Fraction]

    def __post_init__(self):
        poly = tuple(int(c) for c in self.poly)
        while poly and poly[0] == 0:
            poly = poly[1:]
        if len(poly) < 2:
            raise ValueError("defining polynomial must have degree >= 1")
        if poly[0] < 0:
            poly = tuple(-c for c in poly)
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "bracket", tuple(_as_fraction(b) for b in self.bracket))

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def is_monic(self) -> bool:
        return self.poly[0] == 1

    @property
    def ascending(self) -> tuple[int, ...]:
        return tuple(reversed(self.poly))

    def root_bracket(self, bits: int) -> tuple[Fraction, Fraction]:
        lo, hi = self.bracket
        if self.degree == 1:
            r = Fraction(-self.poly[1], self.poly[0])
            return r, r
        return _refine_bracket(self.poly, lo, hi, bits)

    @lru_cache(maxsize=64)
    def enclosure(self, prec: int) -> Ball:
        lo, hi = self.root_bracket(prec + 4)
        return Ball.from_interval(lo, hi, prec=prec + 8, grid=prec + 4)

    # -- element construction -----------------------------------------------

    def element(self, coeffs: Sequence) -> "FieldElement":
        """Element ``sum(coeffs[i] * beta**i)`` with rational coefficients."""
        fr = [_as_fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = [c.numerator * (den // c.denominator) for c in fr]
        if len(num) > self.degree:
            return FieldElement._reduce(self, num, den)
        return FieldElement._make(self, num + [0] * (self.degree - len(num)), den)

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise MixedFields("element belongs to a different field")
            return value
        return self.element([_as_fraction(value)])

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.element([Fraction(-self.poly[1], self.poly[0])])
        return self.element([0, 1])

    @property
    def zero(self) -> "FieldElement":
        return self.element([0])

    @property
    def one(self) -> "FieldElement":
        return self.element([1])


class FieldElement:
    """``sum(num[i] * beta**i) / den`` with ``len(num) == field.degree``."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: NumberField, num: tuple[int, ...], den: int):
        self.field = field
        self.num = num
        self.den = den

    @staticmethod
    def _make(field: NumberField, num: Sequence[int], den: int) -> "FieldElement":
        if den < 0:
            num, den = [-c for c in num], -den
        g = math.gcd(den, *num)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        return FieldElement(field, tuple(num), den)

    @staticmethod
    def _reduce(field: NumberField, vec: list[int], den: int) -> "FieldElement":
        """Reduce an integer coefficient vector of any length modulo the defining polynomial."""
        d = field.degree
        asc = field.ascending
        lead = asc[d]
        vec = list(vec)
        for k in range(len(vec) - 1, d - 1, -1):
            r = vec[k]
            if not r:
                continue
            if lead != 1:
                vec = [c * lead for c in vec]
                den *= lead
                r = vec[k]
            # t^k = t^(k-d) * t^d and lead * t^d = -sum(asc[i] t^i)
            r //= lead
            for i in range(d):
                vec[k - d + i] -= r * asc[i]
            vec[k] = 0
        vec = vec[:d] + [0] * (d - len(vec))
        return FieldElement._make(field, vec, den)

    # -- views --------------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    @property
    def poly(self) -> tuple[int, ...]:
        return self.field.poly

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def to_ball(self, prec: int = 128) -> Ball:
        if self.field.degree == 1 or self.is_rational():
            return Ball.exact(Fraction(self.num[0], self.den), prec)
        guard = max(abs(c) for c in self.num).bit_length() + 8
        beta = self.field.enclosure(prec + guard)
        acc = Ball.exact(self.num[-1], prec + guard)
        for c in reversed(self.num[:-1]):
            acc = acc * beta + c
        return (acc / Ball.exact(self.den, prec + guard)).with_precision(prec)

    def __float__(self) -> float:
        return float(self.to_ball(64))

    def sign(self, max_bits: int = SIGN_MAX_BITS) -> int:
        if self.is_zero():
            return 0
        if self.field.degree == 1 or self.is_rational():
            return 1 if self.num[0] > 0 else -1
        bits = SIGN_START_BITS
        while bits <= max_bits:
            s = self.to_ball(bits).sign()
            if s is not None and s != 0:
                return s
            bits *= 2
        raise PrecisionExhausted(
            f"sign undecided at {max_bits} bits; is {self.field.poly} irreducible?")

    def __repr__(self) -> str:
        terms = " + ".join(f"({c})*b^{i}" for i, c in enumerate(self.coeffs) if c)
        return f"FieldElement({terms or '0'} ~ {float(self):.12g})"

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise MixedFields("operands belong to different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([other])
        return NotImplemented

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-c for c in self.num), self.den)

    def __add__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return FieldElement._make(self.field, [a + b for a, b in zip(self.num, o.num)], self.den)
        return FieldElement._make(
            self.field, [a * o.den + b * self.den for a, b in zip(self.num, o.num)], self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self.field.degree
        if d == 1:
            return FieldElement._make(self.field, [self.num[0] * o.num[0]], self.den * o.den)
        if o.is_rational():
            return FieldElement._make(self.field, [c * o.num[0] for c in self.num], self.den * o.den)
        if self.is_rational():
            return FieldElement._make(self.field, [c * self.num[0] for c in o.num], self.den * o.den)
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(o.num):
                    prod[i + j] += a * b
        return FieldElement._reduce(self.field, prod, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.field.degree == 1 or self.is_rational():
            return FieldElement._make(self.field, [self.den] + [0] * (self.field.degree - 1), self.num[0])
        # extended Euclid in Q[t]: s*a + u*p = g, g a nonzero constant when p is irreducible
        p = [Fraction(c) for c in self.field.ascending]
        a = [Fraction(c, self.den) for c in self.num]
        r0, r1 = p, _strip(list(a))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            prod = [Fraction(0)] * (len(q) + len(s1))
            for i, qc in enumerate(q):
                for j, sc in enumerate(s1):
                    prod[i + j] += qc * sc
            s_new = [Fraction(0)] * max(len(s0), len(prod))
            for i, c in enumerate(s0):
                s_new[i] += c
            for i, c in enumerate(prod):
                s_new[i] -= c
            s0, s1 = s1, _strip(s_new)
            if not r1:
                raise ZeroDivisionError("element is a zero divisor; polynomial is reducible")
        inv = [c / r1[0] for c in s1]
        den = 1
        for c in inv:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return FieldElement._reduce(self.field, [int(c * den) for c in inv], den)

    def __truediv__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_rational():
            if o.num[0] == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement._make(self.field, [c * o.den for c in self.num], self.den * o.num[0])
        return self * o.inverse()

    def __rtruediv__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse() ** -n
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.element([other])
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.field, self.num, self.den))

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare FieldElement with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0


def certified_compare(a, b) -> Ordering:
    """Compare two numbers without ever returning a wrong strict answer.

    Exact operands (ints, Fractions, field elements) are decided exactly;
    as soon as a Ball is involved the answer is strict only when the
    enclosures are disjoint.
    """
    if isinstance(a, Ball) or isinstance(b, Ball):
        prec = max(x.prec for x in (a, b) if isinstance(x, Ball))
        ba = a if isinstance(a, Ball) else Ball(0, prec=prec)._coerce(a)
        bb = b if isinstance(b, Ball) else Ball(0, prec=prec)._coerce(b)
        if ba.upper < bb.lower:
            return Ordering.LESS
        if ba.lower > bb.upper:
            return Ordering.GREATER
        return Ordering.AMBIGUOUS
    if isinstance(a, FieldElement) or isinstance(b, FieldElement):
        if isinstance(a, FieldElement) and isinstance(b, FieldElement) and a.field != b.field:
            raise MixedFields("operands belong to different number fields")
        s = (a - b).sign() if isinstance(a, FieldElement) else -(b - a).sign()
    else:
        fa, fb = _as_fraction(a), _as_fraction(b)
        s = (fa > fb) - (fa < fb)
    return Ordering(s)


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working-precision budget for certified orbit runs.

    ``digits_budget`` is the number of digits one precision window must
    certify; a window of that many steps at base ``beta`` loses
    ``digits_budget * log2(beta)`` bits, so the working precision adds
    ``base_bits`` of headroom on top.
    """

    base_bits: int = 64
    max_restarts: int = 3
    digits_budget: int = 2048

    def __post_init__(self):
        if self.base_bits < 8 or self.digits_budget < 1 or self.max_restarts < 0:
            raise ValueError("invalid precision policy")

    def working_bits(self, log2_beta: float) -> int:
        return math.ceil(self.digits_budget * log2_beta) + self.base_bits

    def doubled(self) -> "PrecisionPolicy":
        return PrecisionPolicy(2 * self.base_bits, self.max_restarts, 2 * self.digits_budget)
