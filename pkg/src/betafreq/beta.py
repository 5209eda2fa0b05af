"""The base beta, its alphabet and interval, digit maps and greedy expansions."""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (AmbiguousAtPrecision, DegenerateEndpoint, DigitOutOfAlphabet,
                     InvalidSpec, MultipleRoots, NoRootInBracket, OutOfDomain,
                     PrecisionExhausted, UnsupportedBase)
from .numerics import Ball, FieldElement, NumberField, _as_fraction, count_real_roots

#: Digits are stored as uint8, which bounds the alphabet size.
MAX_FLOOR = 255

#: Sampled points are dyadic rationals on this grid.
SAMPLE_BITS = 40


def pseudo_golden_poly(m: int) -> tuple[int, ...]:
    """``t^m - t^(m-1) - ... - t - 1``, highest degree first."""
    return (1,) + (-1,) * m


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with exact endpoints."""

    lo: FieldElement
    hi: FieldElement

    def contains(self, y) -> bool:
        return self.lo <= y <= self.hi

    @property
    def length(self) -> FieldElement:
        return self.hi - self.lo


@dataclass(frozen=True, eq=False)
class Beta:
    """A base ``beta > 1`` known exactly as an element of a number field."""

    spec: str
    field: NumberField
    floor: int
    ceil: int
    pg_index: int | None = None

    def __eq__(self, other):
        return isinstance(other, Beta) and self.field == other.field

    def __hash__(self):
        return hash(self.field)

    def __repr__(self):
        return f"Beta({self.spec!r} ~ {float(self):.12g})"

    def __float__(self):
        return float(self.value(64))

    @property
    def exact(self) -> FieldElement:
        return self.field.gen

    def value(self, prec: int = 128) -> Ball:
        return self.exact.to_ball(prec)

    @property
    def is_integer(self) -> bool:
        return self.floor == self.ceil

    @property
    def is_rational(self) -> bool:
        return self.field.degree == 1

    @property
    def rational(self) -> Fraction:
        return self.exact.as_fraction()

    @property
    def max_digit(self) -> int:
        return self.floor - 1 if self.is_integer else self.floor

    @property
    def alphabet(self) -> tuple[int, ...]:
        return tuple(range(self.max_digit + 1))

    @cached_property
    def hi(self) -> FieldElement:
        if self.is_integer:
            return self.field.one
        return self.floor / (self.exact - 1)

    @property
    def interval(self) -> Interval:
        return Interval(self.field.zero, self.hi)

    @cached_property
    def log2(self) -> float:
        return math.log2(float(self))

    def __call__(self, value) -> FieldElement:
        """Coerce an int, Fraction, decimal string or float into Q(beta)."""
        return self.field(value)

    def require_non_integer(self, what: str = "this operation") -> None:
        if self.is_integer:
            raise UnsupportedBase(f"{what} requires a non-integer base, got {self.floor}")


_PG = re.compile(r"^\s*pg\s*:\s*(-?\d+)\s*$", re.I)
_POLY = re.compile(r"^\s*poly\s*:\s*([^:]+):\s*([^,]+),\s*([^,]+)\s*$", re.I)


def _minimal_factor(poly: tuple[int, ...], lo: Fraction, hi: Fraction) -> tuple[int, ...]:
    """Irreducible factor of ``poly`` owning the single root in ``(lo, hi]``."""
    import sympy

    t = sympy.Symbol("t")
    _, factors = sympy.Poly(list(poly), t).factor_list()
    for f, _mult in factors:
        coeffs = tuple(int(c) for c in f.all_coeffs())
        if len(coeffs) > 1 and count_real_roots(coeffs, lo, hi) > 0:
            return coeffs
    raise NoRootInBracket(f"no root of {poly} in ({lo}, {hi}]")


def _floor_of(fld: NumberField) -> int:
    if fld.degree == 1:
        return math.floor(Fraction(-fld.poly[1], fld.poly[0]))
    bits = 64
    while True:
        lo, hi = fld.root_bracket(bits)
        if math.floor(lo) == math.floor(hi):
            return math.floor(lo)
        bits *= 2
        if bits > 1 << 16:
            raise PrecisionExhausted("could not certify floor of beta")


def _from_field(spec: str, fld: NumberField, pg_index: int | None = None) -> Beta:
    one = fld.one
    if fld.gen <= one:
        raise InvalidSpec(f"base must exceed 1: {spec}")
    fl = _floor_of(fld)
    integer = fld.degree == 1 and fld.gen == fl
    if fl > MAX_FLOOR:
        raise InvalidSpec(f"floor(beta) = {fl} exceeds the supported maximum {MAX_FLOOR}")
    return Beta(spec, fld, fl, fl if integer else fl + 1, pg_index)


def pseudo_golden(m: int) -> Beta:
    """Root in (1, 2) of ``t^m - t^(m-1) - ... - 1``."""
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 2:
        raise InvalidSpec(f"pseudo-golden index must be an integer >= 2, got {m!r}")
    m = int(m)
    fld = NumberField(pseudo_golden_poly(m), (Fraction(1), Fraction(2)))
    return _from_field(f"pg:{m}", fld, m)


def from_polynomial(poly: Sequence[int], bracket) -> Beta:
    """Base defined as the single real root of ``poly`` (highest degree first) in ``bracket``."""
    try:
        poly = tuple(int(c) for c in poly)
        lo, hi = (_as_fraction(b) for b in bracket)
    except (TypeError, ValueError) as exc:
        raise InvalidSpec(f"bad polynomial spec: {exc}") from exc
    if lo >= hi:
        raise InvalidSpec("empty bracket")
    try:
        n = count_real_roots(poly, lo, hi)
        if n == 0:
            raise NoRootInBracket(f"no root of {poly} in ({lo}, {hi}]")
        minimal = _minimal_factor(poly, lo, hi)
        if count_real_roots(minimal, lo, hi) != 1:
            raise MultipleRoots(f"{poly} has several roots in ({lo}, {hi}]")
    except (NoRootInBracket, MultipleRoots) as exc:
        raise InvalidSpec(str(exc)) from exc
    name = "poly:" + ",".join(map(str, poly)) + f":{lo},{hi}"
    return _from_field(name, NumberField(minimal, (lo, hi)))


def from_rational(value) -> Beta:
    try:
        q = _as_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidSpec(f"not a number: {value!r}") from exc
    if q <= 1:
        raise InvalidSpec(f"base must exceed 1, got {q}")
    fld = NumberField((q.denominator, -q.numerator), (q, q))
    return _from_field(str(value) if isinstance(value, str) else str(q), fld)


def make_beta(spec) -> Beta:
    """Build a base from ``pg:<m>``, ``poly:<coeffs>:<lo>,<hi>``, a decimal or a number.

    >>> make_beta("2.5").floor
    2
    >>> make_beta("pg:2").hi == make_beta("pg:2").exact
    True
    """
    if isinstance(spec, Beta):
        return spec
    if isinstance(spec, str):
        if m := _PG.match(spec):
            return pseudo_golden(int(m.group(1)))
        if m := _POLY.match(spec):
            try:
                coeffs = [int(c) for c in m.group(1).split(",")]
            except ValueError as exc:
                raise InvalidSpec(f"bad coefficients in {spec!r}") from exc
            return from_polynomial(coeffs, (m.group(2).strip(), m.group(3).strip()))
        return from_rational(spec.strip())
    if isinstance(spec, bool):
        raise InvalidSpec(f"not a base: {spec!r}")
    if isinstance(spec, (int, float, Fraction, np.integer, np.floating)):
        if isinstance(spec, (float, np.floating)) and not math.isfinite(spec):
            raise InvalidSpec(f"not a finite number: {spec!r}")
        return from_rational(spec if not isinstance(spec, np.generic) else spec.item())
    raise InvalidSpec(f"unrecognised base spec: {spec!r}")


# ---------------------------------------------------------------------------
# digit maps and expansions
# ---------------------------------------------------------------------------

def _check_digit(beta: Beta, k) -> int:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 0 <= k <= beta.max_digit:
        raise DigitOutOfAlphabet(f"digit {k!r} not in alphabet 0..{beta.max_digit}")
    return int(k)


def apply_map(beta: Beta, k: int, x):
    """``beta * x - k``; exact for exact input, an enclosure for a Ball."""
    k = _check_digit(beta, k)
    if isinstance(x, Ball):
        return beta.value(x.prec + 8) * x - k
    return beta.exact * beta(x) - k


def partial_sum(beta: Beta, digits: Iterable[int]) -> FieldElement:
    """Exact value of ``sum(d_i * beta**-i)`` for the given finite digit string."""
    ds = [_check_digit(beta, d) for d in digits]
    # Horner from the tail: s = (d_1 + (d_2 + ...)/beta)/beta
    inv = beta.exact.inverse()
    acc = beta.field.zero
    for d in reversed(ds):
        acc = (acc + d) * inv
    return acc


def tail_bound(beta: Beta, n: int) -> FieldElement:
    """``beta**-n * floor(beta)/(beta-1)``, the residual bound after n digits."""
    return beta.hi * beta.exact.inverse() ** n


def in_domain(beta: Beta, x) -> FieldElement:
    y = beta(x)
    if not beta.interval.contains(y):
        raise OutOfDomain(f"{float(y):.12g} is outside [0, {float(beta.hi):.12g}]")
    return y


@dataclass(eq=False)
class DigitSeq:
    """Digits of a finite prefix of an expansion of ``x``.

    ``ties`` lists positions where the orbit sat exactly on a cut point, so
    the branch convention rather than arithmetic decided the digit.
    """

    digits: np.ndarray
    x: FieldElement
    beta: Beta
    ties: tuple[int, ...] = ()
    flags: frozenset = frozenset()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.digits = np.ascontiguousarray(self.digits, dtype=np.uint8)

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits.tolist())

    def __getitem__(self, i):
        return self.digits[i]

    @property
    def length(self) -> int:
        return len(self.digits)

    def tolist(self) -> list[int]:
        return self.digits.tolist()

    def as_string(self) -> str:
        if self.beta.max_digit < 10:
            return (self.digits + ord("0")).tobytes().decode("ascii")
        return ",".join(map(str, self.digits.tolist()))

    def __repr__(self):
        s = self.as_string()
        if len(s) > 40:
            s = s[:37] + "..."
        return f"DigitSeq({s!r}, n={len(self)}, beta={self.beta.spec})"


def is_feasible(beta: Beta, x, digits: Sequence[int], *, policy=None) -> bool:
    """True iff every orbit point along ``digits`` stays in the interval."""
    from .orbit import Orbit

    y = in_domain(beta, x)
    ds = np.asarray([_check_digit(beta, d) for d in digits], dtype=np.uint8)
    try:
        return Orbit(beta, y, policy=policy).follow(ds) is None
    except PrecisionExhausted as exc:
        raise AmbiguousAtPrecision(str(exc)) from exc


def endpoint_flags(beta: Beta, y: FieldElement) -> frozenset:
    if y == 0 or y == beta.hi:
        warnings.warn(DegenerateEndpoint(
            f"x = {float(y):.12g} is an endpoint; its expansion is unique"), stacklevel=3)
        return frozenset({"degenerate_endpoint"})
    return frozenset()


def greedy_expand(beta: Beta, x, n: int, *, policy=None, backend=None) -> DigitSeq:
    """First ``n`` digits of the greedy expansion (largest digit keeping the orbit nonnegative)."""
    from .orbit import Orbit, greedy_cuts

    if n < 0:
        raise ValueError("n must be nonnegative")
    y = in_domain(beta, x)
    orbit = Orbit(beta, y, greedy_cuts(beta), policy=policy, backend=backend)
    try:
        digits = orbit.take(n)
    except PrecisionExhausted as exc:
        raise AmbiguousAtPrecision(str(exc)) from exc
    return DigitSeq(digits, y, beta, tuple(orbit.ties), meta={"generator": "greedy"})


def sample_points(beta: Beta, count: int, seed: int, *, lo=None, hi=None) -> list[Fraction]:
    """Reproducible uniform samples in ``[lo, hi]`` as dyadic rationals.

    Each point is ``lo + K / 2**SAMPLE_BITS`` with ``K`` uniform on the grid
    points that are certified to stay inside the interval.
    """
    lo_q = Fraction(0) if lo is None else _as_fraction(lo)
    top = beta.hi if hi is None else beta(hi)
    span = top - lo_q
    scale = 1 << SAMPLE_BITS
    # largest K with K/2^bits <= span, decided exactly
    k_max = math.floor(span.to_ball(SAMPLE_BITS + 64).lower * scale)
    while span - Fraction(k_max + 1, scale) >= 0:
        k_max += 1
    while k_max > 0 and span - Fraction(k_max, scale) < 0:
        k_max -= 1
    rng = np.random.default_rng(seed)
    ks = rng.integers(0, k_max, size=count, endpoint=True, dtype=np.int64)
    return [lo_q + Fraction(int(k), scale) for k in ks]
