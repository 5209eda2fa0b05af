import warnings
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from betafreq.beta import greedy_expand, is_feasible, make_beta, partial_sum, sample_points, tail_bound
from betafreq.errors import BudgetExceeded, DegenerateEndpoint, HorizonExhausted, OutOfDomain
from betafreq.multiplicity import enumerate_prefixes, export_prefixes, find_branch, variants
from betafreq.tuned import pseudo_golden, target_to_cut, tuned_oracle

PHI = make_beta("pg:2")
B25 = make_beta("2.5")


def brute_prefixes(beta, x, depth):
    """Every word over the alphabet, kept when all remainders stay in the interval."""
    out = []
    for word in product(beta.alphabet, repeat=depth):
        y = beta(x)
        for d in word:
            y = beta.exact * y - d
            if y < 0 or y > beta.hi:
                break
        else:
            out.append("".join(map(str, word)))
    return sorted(out)


def test_find_branch_at_one():
    bp = find_branch(PHI, 1, greedy_expand(PHI, 1, 10))
    assert (bp.index, bp.alt_digit) == (1, 0)
    assert bp.point == 1


def test_find_branch_at_zero():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateEndpoint)
        digits = greedy_expand(PHI, 0, 200)
    with pytest.raises(HorizonExhausted):
        find_branch(PHI, 0, digits, horizon=100)


def test_find_branch_respects_start():
    digits = greedy_expand(PHI, 1, 10)
    assert find_branch(PHI, 1, digits, start=2).index == 2
    with pytest.raises(HorizonExhausted):
        find_branch(PHI, 1, digits, start=3)


def test_branches_found_early():
    xs = sample_points(B25, 1000, 17)
    hits = [find_branch(B25, x, greedy_expand(B25, x, 60), horizon=50).index <= 50 for x in xs]
    assert np.mean(hits) >= 0.99


def test_variants_golden_greedy():
    base, other = variants(PHI, 1, count=2, n=12)
    assert base.tolist() == [1, 1] + [0] * 10
    assert other.tolist() == [0] + [1] * 11
    assert other.meta["switch_index"] == 1


def test_variants_count_zero():
    assert variants(PHI, 1, count=0) == []


def test_variants_need_interior_point():
    with pytest.raises(OutOfDomain):
        variants(PHI, 0, count=2)


def test_tuned_variants():
    params = target_to_cut(PHI, 2, Fraction(1, 2))
    x = sample_points(PHI, 1, 3)[0]
    streams = variants(PHI, x, tuned_oracle(params), count=10, n=20_000)
    assert len(streams) == 10
    assert len({s.digits.tobytes() for s in streams}) == 10
    idx = [s.meta["switch_index"] for s in streams[1:]]
    assert idx == sorted(idx) and len(set(idx)) == len(idx)
    for s in streams:
        assert is_feasible(PHI, x, s.tolist())
        assert abs((s.digits == 0).mean() - 0.5) <= 0.02


@pytest.mark.parametrize("spec", ["pg:2", "2.5"])
@given(u=st.fractions(min_value=0, max_value=1, max_denominator=10**6).filter(lambda v: 0 < v < 1))
def test_spliced_variants_converge(spec, u):
    beta = make_beta(spec)
    x = beta.hi * u
    try:
        streams = variants(beta, x, count=3, n=40, horizon=30)
    except HorizonExhausted:
        return
    for s in streams:
        ds = s.tolist()
        for n in (1, 10, 40):
            r = x - partial_sum(beta, ds[:n])
            assert 0 <= r <= tail_bound(beta, n)


def test_enumerate_examples():
    assert enumerate_prefixes(PHI, 1, 2) == (3, ["01", "10", "11"])
    assert enumerate_prefixes(B25, 0, 6) == (1, ["000000"])


def test_enumerate_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_prefixes(PHI, 1, 20, budget=100)


def test_enumerate_rejects_outside():
    with pytest.raises(OutOfDomain):
        enumerate_prefixes(PHI, 2, 3)


@pytest.mark.parametrize("spec", ["pg:2", "2.5", "pg:3"])
@given(u=st.fractions(min_value=0, max_value=1, max_denominator=10**6))
def test_enumerate_matches_brute_force(spec, u):
    beta = make_beta(spec)
    x = beta.hi * u
    count, words = enumerate_prefixes(beta, x, 6)
    assert words == brute_prefixes(beta, x, 6)
    assert count == len(words)


@given(u=st.fractions(min_value=0, max_value=1, max_denominator=10**6))
def test_prefix_counts_monotone(u):
    x = B25.hi * u
    counts = [enumerate_prefixes(B25, x, d)[0] for d in range(8)]
    assert counts == sorted(counts)
    assert counts[0] == 1


def test_export():
    assert export_prefixes(["01", "10"]) == "01\n10\n"
    assert export_prefixes([]) == ""


def test_greedy_variants_in_enumeration():
    _, words = enumerate_prefixes(PHI, 1, 20)
    for s in variants(PHI, 1, count=3, n=40):
        assert "".join(map(str, s.tolist()[:20])) in words


def test_tuned_variants_in_enumeration():
    beta = pseudo_golden(3)
    params = target_to_cut(beta, 3, Fraction(1, 2))
    x = sample_points(beta, 1, 21)[0]
    _, words = enumerate_prefixes(beta, x, 12)
    for s in variants(beta, x, tuned_oracle(params), count=5, n=100):
        assert "".join(map(str, s.tolist()[:12])) in words
