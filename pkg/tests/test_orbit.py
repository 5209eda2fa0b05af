"""Orbit engines against a plain exact reference, across backends."""

import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from betafreq.beta import make_beta, sample_points
from betafreq.errors import DegenerateEndpoint, InfeasibleOrbit
from betafreq.numerics import PrecisionPolicy
from betafreq.orbit import Orbit, available_backends, greedy_cuts

SPECS = ["pg:2", "pg:3", "2.5", "3.3", "1.5", "3", "poly:2,-3,-1:1,3"]


def reference_digits(beta, x, cuts, n):
    """Digit = number of cuts at or below y, stepping in exact arithmetic."""
    y = beta(x)
    out = []
    for _ in range(n):
        d = sum(1 for c in cuts if c <= y)
        out.append(d)
        y = beta.exact * y - d
    return out


@pytest.mark.parametrize("spec", SPECS)
def test_greedy_matches_reference(spec, backend):
    beta = make_beta(spec)
    cuts = greedy_cuts(beta)
    for x in sample_points(beta, 5, 31):
        got = Orbit(beta, x, cuts, backend=backend).take(300)
        assert got.tolist() == reference_digits(beta, x, cuts, 300)


def test_engine_choice():
    assert Orbit(make_beta("pg:3"), Fraction(1, 3)).engine == "lattice"
    assert Orbit(make_beta("3"), Fraction(1, 3)).engine == "lattice"
    assert Orbit(make_beta("2.5"), Fraction(1, 3)).engine == "window"
    assert Orbit(make_beta("poly:2,-3,-1:1,3"), Fraction(1, 3)).engine == "exact"


def test_backends_agree_long_run():
    if len(available_backends()) < 2:
        pytest.skip("compiled kernels not built")
    for spec in ("pg:2", "pg:5", "3.3"):
        beta = make_beta(spec)
        x = sample_points(beta, 1, 5)[0]
        runs = [Orbit(beta, x, greedy_cuts(beta), backend=b).take(20_000).tobytes()
                for b in available_backends()]
        assert len(set(runs)) == 1


def test_small_policy_still_exact():
    # a tiny digits budget forces many window refreshes and escalations
    beta = make_beta("3.3")
    cuts = greedy_cuts(beta)
    pol = PrecisionPolicy(base_bits=8, max_restarts=0, digits_budget=3)
    x = Fraction(1, 7)
    got = Orbit(beta, x, cuts, policy=pol).take(400)
    assert got.tolist() == reference_digits(beta, x, cuts, 400)


def test_ties_recorded_and_resolved_left_closed():
    beta = make_beta("2.5")
    cut = Fraction(2, 5)
    orbit = Orbit(beta, cut, [cut])
    digits = orbit.take(3)
    assert digits.tolist() == [1, 0, 0]
    assert orbit.ties == [0]


def test_take_raises_when_orbit_leaves():
    beta = make_beta("pg:2")
    # with no cuts every digit is 0 and the orbit of 1 leaves at step 2
    with pytest.raises(InfeasibleOrbit):
        Orbit(beta, 1, []).take(5)


def test_follow_reports_first_bad_index():
    beta = make_beta("pg:2")
    o = Orbit(beta, 1)
    assert o.follow(np.array([1, 1, 0], dtype=np.uint8)) is None
    o = Orbit(beta, 1)
    assert o.follow(np.array([0, 0], dtype=np.uint8)) == 1


@pytest.mark.parametrize("backend", available_backends())
@pytest.mark.parametrize("spec", ["pg:2", "2.5", "1.5"])
@given(digits=st.lists(st.integers(min_value=0, max_value=2), max_size=30),
       u=st.fractions(min_value=0, max_value=1, max_denominator=10**6))
def test_follow_matches_brute_force(spec, digits, u, backend):
    beta = make_beta(spec)
    digits = [min(d, beta.max_digit) for d in digits]
    x = beta.hi * u
    y, bad = beta(x), None
    for i, d in enumerate(digits):
        y = beta.exact * y - d
        if y < 0 or y > beta.hi:
            bad = i
            break
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateEndpoint)
        got = Orbit(beta, x, backend=backend).follow(np.array(digits, dtype=np.uint8))
    assert got == bad


def test_histogram_counts_every_step(backend):
    beta = make_beta("pg:2")
    hist = np.zeros(16, dtype=np.int64)
    Orbit(beta, Fraction(1, 3), greedy_cuts(beta), backend=backend).take(
        5000, hist=hist, hist_scale=16 / float(beta.hi))
    assert hist.sum() == 5000
