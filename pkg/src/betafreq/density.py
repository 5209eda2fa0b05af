"""Invariant density of the tuned two-branch map and histogram validation.

The density of the absolutely continuous invariant measure is the series
``sum_n (1[0, T^n(b+1)] - 1[0, T^n(b)]) / beta^n``; the orbits of ``b`` and
``b+1`` merge after m steps, so only m terms are nonzero and the density
is a finite step function with exact breakpoints in Q(beta).
"""

from __future__ import annotations

import csv
import io
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec, OutOfDomain
from .numerics import FieldElement
from .orbit import Orbit
from .tuned import TunedParams, tuned_step


@dataclass(frozen=True)
class DensityModel:
    """Step density on ``[0, hi]``: ``heights[i]`` on ``[breakpoints[i], breakpoints[i+1])``.

    ``breakpoints`` starts at 0 and ends at ``hi``; the last height also
    covers the point ``hi`` itself.
    """

    params: TunedParams
    breakpoints: tuple[FieldElement, ...]
    heights: tuple[FieldElement, ...]
    mu_total: FieldElement
    nu_scale: FieldElement
    terms: int

    def canonical(self) -> tuple[tuple[FieldElement, ...], tuple[FieldElement, ...]]:
        """Breakpoints and heights with equal neighbouring cells merged."""
        bps, hs = [self.breakpoints[0]], []
        for i, h in enumerate(self.heights):
            if hs and hs[-1] == h:
                bps[-1] = self.breakpoints[i + 1]
                continue
            hs.append(h)
            bps.append(self.breakpoints[i + 1])
        return tuple(bps), tuple(hs)

    def same_function(self, other: "DensityModel") -> bool:
        return self.canonical() == other.canonical()

    def mass(self, lo, hi) -> FieldElement:
        """Exact ``mu([lo, hi])``."""
        beta = self.params.beta
        lo, hi = beta(lo), beta(hi)
        total = beta.field.zero
        for a, b, h in zip(self.breakpoints, self.breakpoints[1:], self.heights):
            left = a if a > lo else lo
            right = b if b < hi else hi
            if left < right and h != 0:
                total = total + h * (right - left)
        return total

    def nu_mass(self, lo, hi) -> FieldElement:
        return self.mass(lo, hi) * self.nu_scale

    def bin_edges(self, bins: int) -> list[FieldElement]:
        hi = self.params.beta.hi
        return [hi * i / bins for i in range(bins + 1)]

    def bin_masses(self, bins: int) -> list[FieldElement]:
        """Exact normalised masses of ``bins`` equal-width bins over the interval."""
        edges = self.bin_edges(bins)
        cum = [self.nu_mass(0, e) for e in edges]
        return [b - a for a, b in zip(cum, cum[1:])]


def _orbit_pair(params: TunedParams, terms: int):
    lo, hi = params.b, params.b + 1
    for _ in range(terms):
        yield lo, hi
        lo, hi = tuned_step(params, lo), tuned_step(params, hi)


def build_density(params: TunedParams, terms: int | None = None) -> DensityModel:
    """Density model from the first ``terms`` series terms (default m, which is exact)."""
    beta = params.beta
    m = params.m
    terms = m if terms is None else terms
    if terms < 1:
        raise ValueError("need at least one term")
    zero, top = beta.field.zero, beta.hi
    inv = beta.exact.inverse()
    spans = []  # (lo, hi, weight): weight on (lo, hi]
    w = beta.field.one
    for lo, hi in _orbit_pair(params, terms):
        if lo != hi:
            spans.append((lo, hi, w))
        w = w * inv
    pts = {zero, top}
    for lo, hi, _ in spans:
        for p in (lo, hi):
            p = zero if p < zero else top if p > top else p
            pts.add(p)
    bps = sorted(pts)
    heights = []
    for a, b in zip(bps, bps[1:]):
        h = zero
        for lo, hi, wt in spans:
            if lo <= a and b <= hi:
                h = h + wt
        heights.append(h)
    mu_total = sum((h * (b - a) for a, b, h in zip(bps, bps[1:], heights)), zero)
    b = beta.exact
    nu_scale = (b - 1) / (m * b + b - 2 * m)
    return DensityModel(params, tuple(bps), tuple(heights), mu_total, nu_scale, terms)


def density_eval(model: DensityModel, x) -> FieldElement:
    """Step value at ``x``; cells are closed on the left."""
    beta = model.params.beta
    y = beta(x)
    if not beta.interval.contains(y):
        raise OutOfDomain(f"{float(y):.12g} outside the interval")
    i = bisect_right(model.breakpoints, y) - 1
    return model.heights[min(i, len(model.heights) - 1)]


def density_identities(model: DensityModel) -> dict[str, bool]:
    """Exact closed-form checks of total mass, cut mass and normalisation."""
    p = model.params
    beta, m, b = p.beta, p.m, p.b
    B = beta.exact
    zero = beta.field.zero
    in_core = [h >= 1 for a, c, h in zip(model.breakpoints, model.breakpoints[1:], model.heights)
               if b <= a and c <= b + 1]
    return {
        "mu_total_closed_form": model.mu_total == (m * B + B - 2 * m) / (B - 1),
        "mu_below_cut": model.mass(0, p.cut) == 1 - (m - 1) * b,
        "nu_below_cut_is_p": model.nu_mass(0, p.cut) == p.p,
        "nu_total_is_one": model.nu_mass(0, beta.hi) == 1,
        "heights_nonnegative": all(h >= zero for h in model.heights),
        "at_least_one_on_core": all(in_core),
    }


@dataclass
class HistogramComparison:
    l1: float
    edges: np.ndarray
    empirical: np.ndarray
    analytic: np.ndarray
    counts: np.ndarray
    n_steps: int
    burn_in: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin_lo", "bin_hi", "empirical_mass", "analytic_mass"])
        for i in range(len(self.empirical)):
            w.writerow([f"{self.edges[i]:.17g}", f"{self.edges[i + 1]:.17g}",
                        f"{self.empirical[i]:.17g}", f"{self.analytic[i]:.17g}"])
        return buf.getvalue()


def orbit_histogram(params: TunedParams, x0, n_steps: int, burn_in: int, bins: int,
                    *, policy=None, backend=None) -> np.ndarray:
    """Bin counts of the orbit points ``y_burn_in .. y_{n_steps-1}``."""
    if not 0 <= burn_in < n_steps:
        raise InvalidSpec(f"need 0 <= burn_in < n_steps, got {burn_in}, {n_steps}")
    if bins < 1:
        raise InvalidSpec("bins must be positive")
    beta = params.beta
    orbit = Orbit(beta, x0, [params.cut], policy=policy, backend=backend)
    orbit.take(burn_in)
    counts = np.zeros(bins, dtype=np.int64)
    orbit.take(n_steps - burn_in, hist=counts, hist_scale=bins / float(beta.hi))
    return counts


def orbit_histogram_compare(params: TunedParams, x0, n_steps: int, burn_in: int, bins: int,
                            *, model: DensityModel | None = None, policy=None,
                            backend=None) -> HistogramComparison:
    """L1 distance between the orbit's occupation histogram and the exact bin masses."""
    model = model or build_density(params)
    counts = orbit_histogram(params, x0, n_steps, burn_in, bins, policy=policy, backend=backend)
    empirical = counts / counts.sum()
    analytic = np.array([float(v) for v in model.bin_masses(bins)])
    edges = np.array([float(e) for e in model.bin_edges(bins)])
    l1 = float(np.abs(empirical - analytic).sum())
    return HistogramComparison(l1, edges, empirical, analytic, counts, n_steps, burn_in)
