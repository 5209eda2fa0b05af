"""Digit-frequency statistics of finished digit buffers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import EmptySequence


@dataclass(frozen=True)
class FrequencyProfile:
    """Per-digit counts over a run plus tail-prefix extrema past ``burn_in``.

    ``upper[k]``/``lower[k]`` are the largest/smallest values of
    ``#{i <= j : d_i = k} / j`` over ``burn_in < j <= n``; they estimate the
    lim sup / lim inf of the running frequency and are only estimates.
    """

    counts: tuple[int, ...]
    n: int
    burn_in: int
    upper: tuple[Fraction, ...]
    lower: tuple[Fraction, ...]

    @property
    def point(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.n) for c in self.counts)

    @property
    def size(self) -> int:
        return len(self.counts)

    def freq(self, k: int) -> float:
        return self.counts[k] / self.n

    def as_floats(self) -> dict:
        return {
            "point": [float(v) for v in self.point],
            "upper": [float(v) for v in self.upper],
            "lower": [float(v) for v in self.lower],
        }


def _as_array(digits) -> np.ndarray:
    d = getattr(digits, "digits", digits)
    return np.ascontiguousarray(d, dtype=np.uint8)


def digit_counts(digits, size: int | None = None) -> np.ndarray:
    d = _as_array(digits)
    if size is None:
        size = _alphabet_size(digits, d)
    return np.bincount(d, minlength=size)[:size].astype(np.int64)


def _alphabet_size(digits, d: np.ndarray) -> int:
    beta = getattr(digits, "beta", None)
    if beta is not None:
        return beta.max_digit + 1
    return int(d.max()) + 1 if len(d) else 1


def freq_profile(digits, burn_in: int | None = None, size: int | None = None) -> FrequencyProfile:
    """Profile of a digit sequence; ``burn_in`` defaults to a tenth of the length.

    ``size`` fixes the alphabet length when ``digits`` is a bare array; a
    DigitSeq carries it through its base.
    """
    d = _as_array(digits)
    n = len(d)
    if burn_in is None:
        burn_in = n // 10
    if n == 0 or not 0 <= burn_in < n:
        raise EmptySequence(f"need n > burn_in >= 0, got n={n}, burn_in={burn_in}")
    if size is None:
        size = _alphabet_size(digits, d)
    if len(d) and int(d.max()) >= size:
        raise ValueError(f"digit {int(d.max())} outside alphabet of size {size}")
    idx = np.arange(burn_in + 1, n + 1, dtype=np.float64)
    upper, lower = [], []
    for k in range(size):
        cum = np.cumsum(d == k, dtype=np.int64)[burn_in:]
        ratio = cum / idx
        hi, lo = int(np.argmax(ratio)), int(np.argmin(ratio))
        upper.append(Fraction(int(cum[hi]), burn_in + 1 + hi))
        lower.append(Fraction(int(cum[lo]), burn_in + 1 + lo))
    counts = tuple(int(c) for c in np.bincount(d, minlength=size)[:size])
    return FrequencyProfile(counts, n, burn_in, tuple(upper), tuple(lower))


def is_balanced(profile: FrequencyProfile, tol: float) -> bool:
    """True iff digit k and digit M-k have point frequencies within ``tol``."""
    return balance_gap(profile) <= tol


def balance_gap(profile: FrequencyProfile) -> float:
    """``max_k |freq_k - freq_{M-k}|`` for the alphabet ``0..M``."""
    m = profile.size - 1
    return max((abs(profile.counts[k] - profile.counts[m - k]) / profile.n
                for k in range(profile.size)), default=0.0)
