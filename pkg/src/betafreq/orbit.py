"""Certified orbit engine for piecewise maps ``y -> beta*y - k``.

A generator is described by its sorted cut points: the digit at ``y`` is the
number of cuts ``c`` with ``c <= y``, so every branch interval is closed on
the left. Orbits are followed exactly; fast kernels do the bulk of the work
on enclosures and hand back any step they cannot certify.

Three engines cover the supported bases:

* lattice: monic integer polynomial (pseudo-golden ratios, integers).
  The state is an integer vector over a fixed denominator and stays small
  for Pisot bases.
* window: rational ``beta = P/Q``. The exact state ``N/E`` is refreshed
  every ``digits_budget`` steps; in between, nested fixed-point windows of
  decreasing width carry the orbit.
* exact: anything else, one field operation per step.
"""

from __future__ import annotations

import math
import os
from functools import lru_cache
from operator import mul
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _pykernels
from .errors import InfeasibleOrbit, OutOfDomain, UnsupportedBase
from .numerics import FieldElement, PrecisionPolicy

try:
    if os.environ.get("BETAFREQ_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("compiled kernels disabled by environment")
    from . import _kernels as _ckernels
except ImportError:
    _ckernels = None

try:
    from gmpy2 import mpz as _bigint
except ImportError:  # plain ints are correct, only slower on the exact refresh
    _bigint = int

DONE, AMBIG_DIGIT, AMBIG_BOUND, OVERFLOW, INFEASIBLE = range(5)

_U = 2.0 ** -53
_INT64_HEADROOM = 1 << 62
_PY_FLOAT_LIMIT = 1 << 900


def available_backends() -> list[str]:
    return ["cython", "python"] if _ckernels is not None else ["python"]


def default_backend() -> str:
    return available_backends()[0]


def _kernels_for(backend: str | None):
    name = backend or default_backend()
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built")
        return _ckernels
    if name == "python":
        return _pykernels
    raise ValueError(f"unknown backend {backend!r}")


def greedy_cuts(beta) -> list[FieldElement]:
    """Cuts ``k/beta`` for k = 1..max_digit (largest digit keeping ``beta*y - k >= 0``)."""
    inv = beta.exact.inverse()
    return [inv * k for k in range(1, beta.max_digit + 1)]


def _down(q: Fraction) -> float:
    f = float(q)
    return math.nextafter(f, -math.inf) if Fraction(f) > q else f


def _up(q: Fraction) -> float:
    f = float(q)
    return math.nextafter(f, math.inf) if Fraction(f) < q else f


def _float_bounds(e: FieldElement) -> tuple[float, float]:
    b = e.to_ball(96)
    return _down(b.lower), _up(b.upper)


@lru_cache(maxsize=512)
def _coef_table(P: int, Q: int, k: int) -> tuple[tuple[int, ...], int, int]:
    return tuple(P ** (k - j) * Q ** j for j in range(1, k + 1)), P ** k, Q ** k


def _digit_sum(ds: list[int], P: int, Q: int) -> tuple[int, int, int]:
    """``(S, P**k, Q**k)`` with ``S = sum(d_j * P**(k-j) * Q**j)`` over j = 1..k."""
    k = len(ds)
    if k <= 64:
        coef, pk, qk = _coef_table(P, Q, k)
        return sum(map(mul, ds, coef)), pk, qk
    m = k // 2
    sl, pl, ql = _digit_sum(ds[:m], P, Q)
    sr, pr, qr = _digit_sum(ds[m:], P, Q)
    return sl * pr + ql * sr, pl * pr, ql * qr


class Orbit:
    """Orbit of an exact point under a cut map, or along forced digits.

    ``take(n)`` emits the next ``n`` digits chosen by the cuts;
    ``follow(digits)`` applies given digits and reports the first one that
    pushes the orbit out of the interval. Positions in ``ties`` mark steps
    where the point sat exactly on a cut.
    """

    def __init__(self, beta, x, cuts: Sequence[FieldElement] = (), *,
                 policy: PrecisionPolicy | None = None, backend: str | None = None,
                 check_domain: bool = True):
        self.beta = beta
        self.policy = policy or PrecisionPolicy()
        self.kernels = _kernels_for(backend)
        self.cuts = [beta(c) for c in cuts]
        if any(a >= b for a, b in zip(self.cuts, self.cuts[1:])):
            raise ValueError("cut points must be strictly increasing")
        if len(self.cuts) > 255:
            raise ValueError("at most 255 cut points are supported")
        y = beta(x)
        if check_domain and not beta.interval.contains(y):
            raise OutOfDomain(f"{float(y):.12g} is outside [0, {float(beta.hi):.12g}]")
        self.position = 0
        self.ties: list[int] = []
        fld = beta.field
        if fld.is_monic:
            self._engine = _LatticeEngine(self, y)
        elif fld.degree == 1:
            self._engine = _WindowEngine(self, y)
        else:
            self._engine = _ExactEngine(self, y)

    @property
    def engine(self) -> str:
        return self._engine.name

    @property
    def point(self) -> FieldElement:
        """Exact current orbit point."""
        return self._engine.point()

    def exact_digit(self, y: FieldElement) -> int:
        k = 0
        for c in self.cuts:
            s = (y - c).sign()
            if s < 0:
                break
            if s == 0:
                self.ties.append(self.position)
            k += 1
        return k

    def in_interval(self, y: FieldElement) -> bool:
        return y.sign() >= 0 and (self.beta.hi - y).sign() >= 0

    def take(self, n: int, *, hist: np.ndarray | None = None, hist_scale: float = 0.0) -> np.ndarray:
        """Next ``n`` digits. ``hist`` (int64) receives a count of each visited point's bin."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        if hist is not None and hist.dtype != np.int64:
            raise TypeError("histogram must be int64")
        out = np.zeros(n, dtype=np.uint8)
        bad = self._engine.run(out, None, hist, hist_scale)
        if bad is not None:
            raise InfeasibleOrbit(f"orbit left the interval at step {self.position}")
        return out

    def follow(self, digits) -> int | None:
        """Apply ``digits``; index of the first digit leaving the interval, else None.

        The orbit stops on that digit, so ``position`` then counts the digits
        that were applied.
        """
        forced = np.ascontiguousarray(digits, dtype=np.uint8)
        if len(forced) and int(forced.max()) > self.beta.max_digit:
            from .errors import DigitOutOfAlphabet
            raise DigitOutOfAlphabet(f"digit {int(forced.max())} not in alphabet")
        out = np.zeros(len(forced), dtype=np.uint8)
        return self._engine.run(out, forced, None, 0.0)


class _LatticeEngine:
    """State ``sum(Y[j] beta^j) / D`` with integer ``Y``; monic defining polynomial."""

    name = "lattice"

    def __init__(self, orbit: Orbit, y: FieldElement):
        self.o = orbit
        beta = orbit.beta
        fld = beta.field
        self.Y = list(y.num)
        self.D = y.den
        self.d = fld.degree
        self.rec = [-c for c in fld.ascending[:-1]]
        bfloat = [float(beta.exact ** j) for j in range(self.d)]
        self.bpow = bfloat
        bounds = [_float_bounds(c) for c in orbit.cuts]
        self.cut_lo = [b[0] for b in bounds]
        self.cut_hi = [b[1] for b in bounds]
        self.h_lo, self.h_hi = _float_bounds(beta.hi)
        self.errf = (4 * self.d + 16) * _U
        rmax = max(1, max(abs(r) for r in self.rec))
        self.c_limit = (_INT64_HEADROOM - 256 * self.D) // (1 + rmax)
        self.use_compiled = orbit.kernels is _ckernels and _ckernels is not None and self.D < (1 << 53)
        if self.use_compiled:
            self._np = (np.array(self.rec, dtype=np.int64), np.array(bfloat),
                        np.array(self.cut_lo), np.array(self.cut_hi))
        self.exact_mode = self.D > _PY_FLOAT_LIMIT

    def point(self) -> FieldElement:
        return self.o.beta.field.element([Fraction(v, self.D) for v in self.Y])

    def _step(self, k: int) -> None:
        Y, rec, d = self.Y, self.rec, self.d
        top = Y[d - 1]
        for j in range(d - 1, 0, -1):
            Y[j] = Y[j - 1] + rec[j] * top
        Y[0] = rec[0] * top - k * self.D

    def _kernel(self, Y, out, forced, forced_list, i, n, skip, hist, hist_scale):
        if self.use_compiled and max(abs(v) for v in Y) <= self.c_limit:
            rec, bp, cl, ch = self._np
            Ya = np.array(Y, dtype=np.int64)
            pos, st = _ckernels.lattice_run(Ya, self.D, rec, bp, cl, ch, self.h_lo, self.h_hi,
                                            forced, out, i, n, skip, hist, hist_scale,
                                            self.errf, self.c_limit)
            Y[:] = Ya.tolist()
            return pos, st
        if max(abs(v) for v in Y) > _PY_FLOAT_LIMIT:
            self.exact_mode = True
            return i, OVERFLOW
        hl = None if hist is None else hist.tolist()
        pos, st = _pykernels.lattice_run(Y, self.D, self.rec, self.bpow, self.cut_lo, self.cut_hi,
                                         self.h_lo, self.h_hi, forced_list, out, i, n, skip,
                                         hl, hist_scale, self.errf, _PY_FLOAT_LIMIT)
        if hist is not None:
            hist[:] = hl
        return pos, st

    def run(self, out, forced, hist, hist_scale):
        o = self.o
        n = len(out)
        base = o.position
        forced_list = None if forced is None else forced.tolist()
        i, skip = 0, False
        while True:
            if self.exact_mode:
                o.position = base + i
                return _exact_steps(o, self, out, i, forced, hist, hist_scale, skip)
            pos, st = self._kernel(self.Y, out, forced, forced_list, i, n, skip, hist, hist_scale)
            i, skip = pos, False
            o.position = base + i
            if st == DONE:
                return None
            if st == AMBIG_DIGIT:
                k = o.exact_digit(self.point())
                self._step(k)
                out[i] = k
                i += 1
            elif st == AMBIG_BOUND:
                if not o.in_interval(self.point()):
                    return i - 1
                skip = True
            elif st == INFEASIBLE:
                if forced is None:
                    raise InfeasibleOrbit(f"orbit left the interval at step {o.position}")
                return i - 1
            elif st == OVERFLOW:
                self.use_compiled = False
                skip = True


class _ExactEngine:
    """One exact field operation per step; used for non-monic polynomial bases."""

    name = "exact"

    def __init__(self, orbit: Orbit, y: FieldElement):
        self.o = orbit
        self.y = y

    def point(self) -> FieldElement:
        return self.y

    def _step(self, k: int) -> None:
        self.y = self.o.beta.exact * self.y - k

    def run(self, out, forced, hist, hist_scale):
        return _exact_steps(self.o, self, out, 0, forced, hist, hist_scale, False)


def _exact_steps(o: Orbit, eng, out, i, forced, hist, hist_scale, skip):
    """Exact stepping from ``out`` index ``i``; same contract as ``engine.run``."""
    n = len(out)
    base = o.position - i
    while True:
        y = eng.point()
        o.position = base + i
        if not skip and (forced is not None or i > 0) and not o.in_interval(y):
            if forced is None:
                raise InfeasibleOrbit(f"orbit left the interval at step {o.position}")
            return i - 1
        skip = False
        if i == n:
            return None
        if hist is not None:
            b = min(max(int(float(y) * hist_scale), 0), len(hist) - 1)
            hist[b] += 1
        k = o.exact_digit(y) if forced is None else int(forced[i])
        eng._step(k)
        out[i] = k
        i += 1


class _WindowEngine:
    """Rational base ``P/Q`` with exact state ``N/E`` and nested fixed-point windows."""

    name = "window"

    def __init__(self, orbit: Orbit, y: FieldElement):
        self.o = orbit
        beta = orbit.beta
        q = beta.rational
        self.P, self.Q = q.numerator, q.denominator
        yq = y.as_fraction()
        self.N, self.E = _bigint(yq.numerator), _bigint(yq.denominator)
        self.cutq = [c.as_fraction() for c in orbit.cuts]
        self.hq = beta.hi.as_fraction()
        pol = orbit.policy
        self.L1 = pol.digits_budget
        hbits = max(1, math.ceil(self.hq)).bit_length() + 1
        self.W2 = 125 - self.P.bit_length() - hbits
        self.L2 = min(int((self.W2 - 40) / beta.log2), self.L1) if self.W2 > 48 else 0
        # the wide window must still hold W2 good bits at the end of its segment
        self.W1 = pol.working_bits(beta.log2) + (self.W2 if self.L2 else 0)
        self._scaled: dict[int, tuple] = {}
        self.k2 = orbit.kernels

    def point(self) -> FieldElement:
        return self.o.beta(Fraction(int(self.N), int(self.E)))

    def _scale(self, W: int):
        if W not in self._scaled:
            cl = [(c.numerator << W) // c.denominator for c in self.cutq]
            ch = [-((-c.numerator << W) // c.denominator) for c in self.cutq]
            h = self.hq
            hl = (h.numerator << W) // h.denominator
            hh = -((-h.numerator << W) // h.denominator)
            self._scaled[W] = (cl, ch, hl, hh)
        return self._scaled[W]

    def _extract(self, W: int) -> tuple[int, int]:
        N, E = self.N, self.E
        neg = N < 0
        if neg:
            N = -N
        t = max(0, E.bit_length() - W - 64)
        if t:
            Nt, Et = N >> t, E >> t
            lo = (Nt << W) // (Et + 1)
            hi = -((-((Nt + 1) << W)) // Et)
        else:
            lo = (N << W) // E
            hi = -((-(N << W)) // E)
        lo, hi = int(lo), int(hi)
        return (-hi, -lo) if neg else (lo, hi)

    def _advance_window(self, lo: int, hi: int, W: int, ds: list[int]) -> tuple[int, int]:
        s, pk, qk = _digit_sum(ds, self.P, self.Q)
        shift = s << W
        return (pk * lo - shift) // qk, -((shift - pk * hi) // qk)

    def _advance_exact(self, ds: list[int]) -> None:
        if not ds:
            return
        s, pk, qk = _digit_sum(ds, self.P, self.Q)
        self.N = pk * self.N - self.E * s
        self.E = self.E * qk

    def _exact_cmp_in(self) -> bool:
        h = self.hq
        return self.N >= 0 and self.N * h.denominator <= h.numerator * self.E

    def _resolve_digit(self, forced_list) -> int:
        """Digit at the current exact state after cheaper windows failed."""
        W = self.W1
        buf = np.zeros(1, dtype=np.uint8)
        for _ in range(self.o.policy.max_restarts):
            W *= 2
            lo, hi = self._extract(W)
            cl, ch, hl, hh = self._scale(W)
            _, st, _, _ = _pykernels.window_run(lo, hi, W, self.P, self.Q, cl, ch, hl, hh,
                                                 None, buf, 0, 1, True)
            if st != AMBIG_DIGIT:
                return int(buf[0])
        k = 0
        for c in self.cutq:
            lhs, rhs = c.numerator * self.E, c.denominator * self.N
            if lhs > rhs:
                break
            if lhs == rhs:
                self.o.ties.append(self.o.position)
            k += 1
        return k

    def run(self, out, forced, hist, hist_scale):
        if hist is not None:
            raise UnsupportedBase("histograms are only available for monic polynomial bases")
        o = self.o
        n = len(out)
        base = o.position
        forced_list = None if forced is None else forced.tolist()
        k2 = self.k2
        f2 = forced if k2 is _ckernels else forced_list
        W1, W2, L1, L2 = self.W1, self.W2, self.L1, self.L2
        c1 = self._scale(W1)
        c2 = self._scale(W2) if L2 else None
        pyk = _pykernels
        i = 0
        skip = False
        while True:
            # one segment: windows from the exact state at i, escalation at j
            seg_end = min(n, i + L1)
            lo1, hi1 = self._extract(W1)
            j = i
            status = DONE
            while j < seg_end or (j == n and not skip):
                if L2:
                    s_end = min(seg_end, j + L2)
                    d2 = W1 - W2
                    lo2, hi2 = lo1 >> d2, -((-hi1) >> d2)
                    pos, st, _, _ = k2.window_run(lo2, hi2, W2, self.P, self.Q, c2[0], c2[1],
                                                  c2[2], c2[3], f2, out, j, s_end, skip)
                    if pos > j:
                        lo1, hi1 = self._advance_window(lo1, hi1, W1, out[j:pos].tolist())
                    skip = False
                    j = pos
                    if st == DONE:
                        skip = True
                        if j == n:
                            break
                        continue
                    if st == INFEASIBLE:
                        status = INFEASIBLE
                        break
                # retry the undecided step on the wide window
                s_end = min(seg_end, j + 1) if L2 else seg_end
                pos, st, nlo, nhi = pyk.window_run(lo1, hi1, W1, self.P, self.Q, c1[0], c1[1],
                                                   c1[2], c1[3], forced_list, out, j, s_end, skip)
                lo1, hi1, j = nlo, nhi, pos
                skip = st == DONE
                if st == DONE:
                    if j == n:
                        break
                    continue
                status = st
                break
            self._advance_exact(out[i:j].tolist())
            i = j
            o.position = base + i
            if status == DONE:
                if i == n:
                    return None
                continue
            if status == INFEASIBLE:
                if forced is None:
                    raise InfeasibleOrbit(f"orbit left the interval at step {o.position}")
                return i - 1
            if status == AMBIG_BOUND:
                if not self._exact_cmp_in():
                    return i - 1
                skip = True
                if i == n:
                    return None
                continue
            # AMBIG_DIGIT: only in cut mode
            k = self._resolve_digit(forced_list)
            out[i] = k
            self._advance_exact([k])
            i += 1
            o.position = base + i
            skip = False
