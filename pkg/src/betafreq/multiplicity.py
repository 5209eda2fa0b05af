"""Many expansions of one point: branch search, splicing, and prefix enumeration."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .beta import Beta, DigitSeq, greedy_expand, in_domain, make_beta
from .errors import BudgetExceeded, DegenerateEndpoint, HorizonExhausted, InfeasibleOrbit, OutOfDomain
from .numerics import FieldElement
from .orbit import Orbit

DEFAULT_HORIZON = 10_000
DEFAULT_BUDGET = 10_000_000

Oracle = Callable[..., DigitSeq]


@dataclass(frozen=True)
class BranchPoint:
    """Position ``index`` (1-based) where ``alt_digit`` also keeps the orbit in the interval."""

    index: int
    alt_digit: int
    point: FieldElement  # orbit point before digit ``index``


def greedy_oracle(beta, y, n, **kw) -> DigitSeq:
    return greedy_expand(beta, y, n, **kw)


def _alternatives(beta: Beta, y: FieldElement, taken: int) -> list[int]:
    """Digits other than ``taken`` whose branch keeps ``beta*y - w`` in ``[0, hi]``."""
    by = beta.exact * y
    out = []
    for w in beta.alphabet:
        if w == taken:
            continue
        t = by - w
        if t.sign() >= 0 and (beta.hi - t).sign() >= 0:
            out.append(w)
    return out


class _Scanner:
    """Walks the orbit of ``x`` along ``digits`` one position at a time."""

    def __init__(self, beta: Beta, x: FieldElement, digits: np.ndarray, policy=None, backend=None):
        self.beta = beta
        self.digits = digits
        self.orbit = Orbit(beta, x, policy=policy, backend=backend)
        self.pos = 0  # digits applied so far

    def seek(self, n: int) -> None:
        """Advance so that ``pos == n``."""
        if n < self.pos:
            raise ValueError("scanner cannot move backwards")
        bad = self.orbit.follow(self.digits[self.pos:n])
        if bad is not None:
            raise InfeasibleOrbit(f"digit {self.pos + bad + 1} leaves the interval")
        self.pos = n

    def find(self, start: int, horizon: int) -> BranchPoint:
        if start < 1:
            raise ValueError("start is 1-based and must be >= 1")
        stop = min(start + horizon, len(self.digits))
        self.seek(start - 1)
        for n in range(start, stop + 1):
            y = self.orbit.point
            alts = _alternatives(self.beta, y, int(self.digits[n - 1]))
            if alts:
                return BranchPoint(n, alts[0], y)
            if n == len(self.digits):
                break
            self.seek(n)
        limit = "end of the digit prefix" if stop < start + horizon else f"horizon {horizon}"
        raise HorizonExhausted(f"no branch point in [{start}, {stop}] ({limit})")


def _digits_of(seq) -> np.ndarray:
    return np.ascontiguousarray(getattr(seq, "digits", seq), dtype=np.uint8)


def find_branch(beta, x, digits, start: int = 1, horizon: int = DEFAULT_HORIZON,
                *, policy=None, backend=None) -> BranchPoint:
    """Smallest ``n >= start`` where another digit keeps the orbit feasible."""
    beta = make_beta(beta)
    y = in_domain(beta, x)
    return _Scanner(beta, y, _digits_of(digits), policy, backend).find(start, horizon)


def variants(beta, x, oracle: Oracle = greedy_oracle, count: int = 2,
             horizon: int = DEFAULT_HORIZON, n: int = 1000, *, policy=None,
             backend=None) -> list[DigitSeq]:
    """The oracle's expansion of ``x`` followed by ``count - 1`` spliced variants.

    Variant j copies the base expansion up to its switch index ``n_j``,
    takes the alternative digit there and continues with the oracle's
    expansion of the resulting orbit point. Switch indices increase, so
    variant j differs from the base at ``n_j`` and from every earlier
    variant at that variant's switch index.
    """
    beta = make_beta(beta)
    y = in_domain(beta, x)
    if y == 0 or y == beta.hi:
        raise OutOfDomain("variants need an interior point; endpoints have one expansion")
    if count <= 0:
        return []
    kw = {"policy": policy, "backend": backend}
    base = oracle(beta, y, n, **kw)
    base.meta.update(switch_index=None, alt_digit=None)
    out = [base]
    scan = _Scanner(beta, y, _digits_of(base), policy, backend)
    start = 1
    for _ in range(count - 1):
        bp = scan.find(start, horizon)
        j = bp.index
        nxt = beta.exact * bp.point - bp.alt_digit
        with warnings.catch_warnings():
            # a tail starting on an endpoint is fine; its expansion is just constant
            warnings.simplefilter("ignore", DegenerateEndpoint)
            tail = oracle(beta, nxt, n - j, **kw)
        digits = np.concatenate([base.digits[: j - 1], [bp.alt_digit], tail.digits]).astype(np.uint8)
        ties = tuple(t for t in base.ties if t < j - 1) + tuple(t + j for t in tail.ties)
        out.append(DigitSeq(digits, y, beta, ties, base.flags,
                            {"generator": base.meta.get("generator"), "switch_index": j,
                             "alt_digit": bp.alt_digit}))
        start = j + 1
    return out


def enumerate_prefixes(beta, x, depth: int, budget: int = DEFAULT_BUDGET) -> tuple[int, list[str]]:
    """All length-``depth`` digit words that extend to an expansion of ``x``.

    Depth-first search, pruning any word whose remainder
    ``beta^d x - sum(e_i beta^(d-i))`` leaves ``[0, hi]``. Words are returned
    sorted, as digit strings (comma separated once digits exceed 9).
    """
    beta = make_beta(beta)
    y0 = in_domain(beta, x)
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    B, hi, alpha = beta.exact, beta.hi, beta.alphabet
    sep = "" if beta.max_digit < 10 else ","
    found: list[str] = []
    visited = 0
    stack: list[tuple[FieldElement, tuple[int, ...]]] = [(y0, ())]
    while stack:
        y, word = stack.pop()
        visited += 1
        if visited > budget:
            raise BudgetExceeded(f"more than {budget} nodes visited at depth {depth}")
        if len(word) == depth:
            found.append(sep.join(map(str, word)))
            continue
        by = B * y
        for w in reversed(alpha):
            t = by - w
            if t.sign() >= 0 and (hi - t).sign() >= 0:
                stack.append((t, word + (w,)))
    found.sort()
    return len(found), found


def export_prefixes(prefixes: list[str]) -> str:
    return "".join(p + "\n" for p in prefixes)
