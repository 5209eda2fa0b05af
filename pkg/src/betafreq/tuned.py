"""Zero-frequency tuning for pseudo-golden bases.

For the root of ``t^m - t^(m-1) - ... - 1`` the two-branch map reading 0 on
``[0, (b+1)/beta)`` and 1 above has zero-frequency ``f(b)`` for almost every
start, with ``f`` affine and decreasing. Inverting ``f`` tunes the
frequency anywhere in ``[1/2 - c, 1/2 + c]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .beta import Beta, DigitSeq, endpoint_flags, in_domain
from .beta import pseudo_golden as _pg
from .errors import (AmbiguousAtPrecision, FrequencyOutOfRange, IdentityViolated,
                     InvalidIndex, InvalidSpec, PrecisionExhausted, UnsupportedBase)
from .numerics import FieldElement, _as_fraction
from .orbit import Orbit


def pseudo_golden(m: int) -> Beta:
    try:
        return _pg(m)
    except InvalidSpec as exc:
        raise InvalidIndex(str(exc)) from exc


def _index_of(beta: Beta) -> int:
    if beta.pg_index is None:
        raise UnsupportedBase(f"{beta.spec} is not a pseudo-golden base")
    return beta.pg_index


def _denominator(beta: Beta, m: int) -> FieldElement:
    b = beta.exact
    return m * b + b - 2 * m


def freq_radius(beta: Beta) -> FieldElement:
    """Half-width ``c = (m-1)(2-beta) / (2(m beta + beta - 2m))``."""
    m = _index_of(beta)
    return (m - 1) * (2 - beta.exact) / (2 * _denominator(beta, m))


def f_value(beta: Beta, x) -> FieldElement:
    """Zero-frequency of the map with left point ``x``: ``(beta-1)(1-(m-1)x) / (m beta+beta-2m)``."""
    m = _index_of(beta)
    return (beta.exact - 1) * (1 - (m - 1) * beta(x)) / _denominator(beta, m)


def b_max(beta: Beta) -> FieldElement:
    """Right end ``1/(beta-1) - 1`` of the admissible range of b."""
    return beta.hi - 1


@dataclass(frozen=True)
class TunedParams:
    m: int
    beta: Beta
    p: Fraction | FieldElement  # a FieldElement only when p is irrational
    c: FieldElement
    b: FieldElement
    cut: FieldElement

    @property
    def ends(self) -> tuple[FieldElement, FieldElement]:
        return self.b, self.b + 1


def _as_p(beta: Beta, p) -> Fraction | FieldElement:
    if isinstance(p, FieldElement):
        p = beta(p)
        return p.as_fraction() if p.is_rational() else p
    try:
        return _as_fraction(p)
    except (TypeError, ValueError) as exc:
        raise FrequencyOutOfRange(f"not a frequency: {p!r}") from exc


def target_to_cut(beta: Beta, m: int | None = None, p=Fraction(1, 2)) -> TunedParams:
    """Parameters whose map has zero-frequency ``p``; ``p`` is taken exactly.

    ``p`` may be a rational, a decimal string or an element of Q(beta) such
    as ``1/2 + c``.
    """
    if m is None:
        m = _index_of(beta)
    if beta.pg_index != m:
        raise UnsupportedBase(f"{beta.spec} is not the pseudo-golden base of index {m}")
    q = _as_p(beta, p)
    c = freq_radius(beta)
    half = Fraction(1, 2)
    if beta(q) < half - c or beta(q) > half + c:
        raise FrequencyOutOfRange(
            f"p = {q} outside [{float(half - c):.9f}, {float(half + c):.9f}]")
    b = (1 - q * _denominator(beta, m) / (beta.exact - 1)) / (m - 1)
    return TunedParams(m, beta, q, c, b, (b + 1) / beta.exact)


def tuned_step(params: TunedParams, y: FieldElement) -> FieldElement:
    """One step of the tuned map: ``beta*y`` below the cut, ``beta*y - 1`` from it on."""
    k = 0 if y < params.cut else 1
    return params.beta.exact * y - k


def tuned_expand(params: TunedParams, x, n: int, *, policy=None, backend=None) -> DigitSeq:
    beta = params.beta
    y = in_domain(beta, x)
    flags = endpoint_flags(beta, y)
    orbit = Orbit(beta, y, [params.cut], policy=policy, backend=backend)
    try:
        digits = orbit.take(n)
    except PrecisionExhausted as exc:
        raise AmbiguousAtPrecision(str(exc)) from exc
    return DigitSeq(digits, y, beta, tuple(orbit.ties), flags,
                    {"generator": "tuned", "p": str(params.p)})


def tuned_oracle(params: TunedParams):
    """Adapter with the ``oracle(beta, y, n)`` signature used by ``variants``."""
    def oracle(beta, y, n, **kw):
        return tuned_expand(params, y, n, **kw)
    return oracle


def orbit_identities(params: TunedParams) -> dict:
    """Verify the orbit facts of the two endpoints ``b`` and ``b+1`` exactly.

    For 1 <= n < m the orbit of ``b`` is ``beta^n b`` and stays below the
    cut while that of ``b+1`` is ``beta^n b + beta^n - ... - 1`` and lies at
    or above it; after m steps the two orbits coincide. Raises
    IdentityViolated on any failure.
    """
    beta, m, b, cut = params.beta, params.m, params.b, params.cut
    B = beta.exact
    lo, hi = b, b + 1
    lo, hi = tuned_step(params, lo), tuned_step(params, hi)
    rows = []
    for n in range(1, m):
        want_lo = B ** n * b
        want_hi = want_lo + B ** n - sum((B ** j for j in range(n)), beta.field.zero)
        row = {
            "n": n,
            "lo_closed_form": lo == want_lo,
            "hi_closed_form": hi == want_hi,
            "lo_below_cut": lo < cut,
            "hi_at_or_above_cut": cut <= hi,
        }
        rows.append(row)
        if not all(v for k, v in row.items() if k != "n"):
            raise IdentityViolated(f"orbit fact fails at n={n}: {row}")
        lo, hi = tuned_step(params, lo), tuned_step(params, hi)
    if lo != hi:
        raise IdentityViolated(f"orbits of b and b+1 do not merge after {m} steps")
    return {"m": m, "p": str(params.p), "rows": rows, "merge_step": m, "merged_point": lo}


def constant_checks(params: TunedParams) -> dict[str, bool]:
    """Exact checks of the endpoint values of f and of ``f(b) = p``."""
    beta = params.beta
    half = Fraction(1, 2)
    c = params.c
    m = params.m
    closed_c = (m - 1) * (2 - beta.exact) / (2 * _denominator(beta, m))
    return {
        "c_positive": c > 0,
        "c_closed_form": c == closed_c,
        "f0_is_half_plus_c": f_value(beta, 0) == half + c,
        "fmax_is_half_minus_c": f_value(beta, b_max(beta)) == half - c,
        "f_b_is_p": f_value(beta, params.b) == params.p,
        "b_in_range": beta.field.zero <= params.b <= b_max(beta),
        "cut_inside": params.b < params.cut < params.b + 1,
    }
