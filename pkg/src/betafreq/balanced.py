"""Symmetric digit map for non-integer bases above 2 and balanced expansions.

The cut points ``z_0 < z_1 < ... < z_M`` (``M = ceil(beta)``) are placed so
that ``y -> hi - y`` conjugates branch ``k`` into branch ``floor(beta) - k``;
digit k is read on ``[z_k, z_{k+1})``, digit 0 below ``z_1`` and the top
digit from ``z_{floor(beta)}`` up to ``hi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beta import Beta, DigitSeq, endpoint_flags, in_domain, make_beta
from .errors import AmbiguousAtPrecision, BoundaryHit, OutOfDomain, PrecisionExhausted, UnsupportedBase
from .numerics import FieldElement
from .orbit import Orbit


@dataclass(frozen=True)
class CutPoints:
    beta: Beta
    z: tuple[FieldElement, ...]

    @property
    def inner(self) -> list[FieldElement]:
        """The cuts that decide digits: ``z_1 .. z_floor``."""
        return list(self.z[1:-1])

    @property
    def core(self) -> tuple[FieldElement, FieldElement]:
        """``[z_0, z_M]``, the region the orbit never leaves once inside."""
        return self.z[0], self.z[-1]


def _require(beta: Beta) -> None:
    if beta.is_integer or beta.floor < 2:
        raise UnsupportedBase(f"balanced map needs a non-integer base above 2, got {beta.spec}")


def cut_points(beta) -> CutPoints:
    beta = make_beta(beta)
    _require(beta)
    b, fl = beta.exact, beta.floor
    inv = b.inverse()
    z0 = fl / (2 * (b - 1)) - beta(1) / 2
    z = [z0, (beta.hi - (fl - 1) * inv) / 2]
    for _ in range(1, fl):
        z.append(z[-1] + inv)
    z.append(z0 + 1)
    return CutPoints(beta, tuple(z))


def cut_identities(cp: CutPoints) -> dict[str, FieldElement]:
    """Residuals of the defining identities; all are exactly zero.

    Keys: ``sym_k`` for ``z_k + z_{M-k} - hi``, ``fix_k`` for
    ``T_k(z_k) - z_0`` and ``top_k`` for ``T_{k-1}(z_k) - z_M``.
    """
    beta = cp.beta
    z, M, b = cp.z, len(cp.z) - 1, beta.exact
    out = {}
    for k in range(M + 1):
        out[f"sym_{k}"] = z[k] + z[M - k] - beta.hi
    for k in range(1, beta.floor + 1):
        out[f"fix_{k}"] = b * z[k] - k - z[0]
        out[f"top_{k}"] = b * z[k] - (k - 1) - z[M]
    return out


def entry_steps(cp: CutPoints, x: FieldElement) -> int:
    """Number of leading steps spent outside ``[z_0, z_M]`` (the entry phase)."""
    beta = cp.beta
    z0, zM = cp.core
    if x == 0 or x == beta.hi:
        return 0
    y, k = x, 0
    if y < z0:
        while y < z0:
            y, k = beta.exact * y, k + 1
    elif y > zM:
        top = beta.floor
        while y > zM:
            y, k = beta.exact * y - top, k + 1
    if not z0 <= y <= zM:
        raise AssertionError("entry phase overshot the core region")
    return k


def balanced_expand(beta, x, n: int, *, policy=None, backend=None) -> DigitSeq:
    """First ``n`` digits of the balanced expansion of ``x``."""
    beta = make_beta(beta)
    cp = cut_points(beta)
    y = in_domain(beta, x)
    flags = endpoint_flags(beta, y)
    entry = entry_steps(cp, y)
    orbit = Orbit(beta, y, cp.inner, policy=policy, backend=backend)
    try:
        digits = orbit.take(n)
    except PrecisionExhausted as exc:
        raise AmbiguousAtPrecision(str(exc)) from exc
    return DigitSeq(digits, y, beta, tuple(orbit.ties), flags,
                    {"generator": "balanced", "entry_steps": entry})


def mirror_check(beta, x, n: int, *, policy=None, backend=None) -> bool:
    """Do the digits of ``hi - x`` mirror those of ``x`` for ``n`` steps?

    Raises BoundaryHit when either orbit lands exactly on a cut point,
    where the conjugacy does not fix the digit.
    """
    beta = make_beta(beta)
    cp = cut_points(beta)
    y = in_domain(beta, x)
    z0, zM = cp.core
    if not z0 <= y <= zM:
        raise OutOfDomain("mirror check needs x in [z_0, z_M]")
    runs = []
    for start in (y, beta.hi - y):
        o = Orbit(beta, start, cp.inner, policy=policy, backend=backend)
        d = o.take(n)
        if o.ties:
            raise BoundaryHit(f"orbit hits a cut point at step {o.ties[0]}")
        runs.append(d)
    return bool(np.array_equal(runs[1], beta.floor - runs[0]))
