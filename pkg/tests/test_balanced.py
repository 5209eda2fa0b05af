import warnings
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from betafreq.balanced import balanced_expand, cut_identities, cut_points, entry_steps, mirror_check
from betafreq.beta import apply_map, make_beta
from betafreq.errors import BoundaryHit, DegenerateEndpoint, OutOfDomain, UnsupportedBase

B25 = make_beta("2.5")


def test_cut_points_at_two_and_a_half():
    cp = cut_points(B25)
    assert cp.z == (Fraction(1, 6), Fraction(7, 15), Fraction(13, 15), Fraction(7, 6))
    assert apply_map(B25, 1, cp.z[1]) == cp.z[0]
    assert cp.z[0] + cp.z[3] == cp.z[1] + cp.z[2] == Fraction(4, 3)


@pytest.mark.parametrize("spec", ["2.5", "3.3", "poly:1,-2,-1:2,3", "4.75"])
def test_identities_exact(spec):
    cp = cut_points(spec)
    assert all(v == 0 for v in cut_identities(cp).values())
    assert list(cp.z) == sorted(cp.z)


@pytest.mark.parametrize("spec", ["pg:2", "1.5", "3", "2"])
def test_rejects_small_or_integer(spec):
    with pytest.raises(UnsupportedBase):
        cut_points(spec)


def test_expand_example():
    # orbit 1/2 -> 1/4 -> 5/8 -> 9/16 -> 13/32, checked by hand against z_1 = 7/15, z_2 = 13/15
    assert balanced_expand(B25, Fraction(1, 2), 5).tolist() == [1, 0, 1, 1, 0]


def test_entry_phase():
    seq = balanced_expand(B25, Fraction(1, 10), 20)
    assert seq[0] == 0
    assert seq.meta["entry_steps"] == 1
    assert balanced_expand(B25, Fraction(1, 4), 19).tolist() == seq.tolist()[1:]


def test_entry_phase_from_the_top():
    cp = cut_points(B25)
    x = Fraction(4, 3) - Fraction(1, 100)
    assert x > cp.z[3]
    seq = balanced_expand(B25, x, 10)
    assert seq.meta["entry_steps"] >= 1
    assert seq[0] == 2


def test_endpoint_is_flagged():
    with pytest.warns(DegenerateEndpoint):
        seq = balanced_expand(B25, 0, 5)
    assert seq.tolist() == [0] * 5
    assert "degenerate_endpoint" in seq.flags


@given(st.fractions(min_value=0, max_value=1, max_denominator=10**9).filter(lambda u: 0 < u < 1))
def test_entry_phase_length(u):
    cp = cut_points(B25)
    x = B25.hi * u
    k = entry_steps(cp, B25(x))
    if x < cp.z[0]:
        # smallest j with beta^j x >= z_0
        j = 0
        while Fraction(5, 2) ** j * x < cp.z[0]:
            j += 1
        assert k == j
    elif x > cp.z[3]:
        assert k >= 1
    else:
        assert k == 0


def test_mirror_examples():
    assert balanced_expand(B25, Fraction(1, 2), 1)[0] == 1
    assert balanced_expand(B25, Fraction(5, 6), 1)[0] == 1
    assert mirror_check(B25, Fraction(3, 10), 50)


def test_mirror_at_midpoint_hits_cut_for_odd_floor():
    # for floor 3 the midpoint is itself a cut point
    beta = make_beta("3.3")
    mid = beta.hi / 2
    with pytest.raises(BoundaryHit):
        mirror_check(beta, mid, 10)


def test_mirror_at_midpoint_even_floor():
    assert mirror_check(B25, B25.hi / 2, 30)


def test_mirror_outside_core():
    with pytest.raises(OutOfDomain):
        mirror_check(B25, Fraction(1, 10), 10)


@pytest.mark.parametrize("spec", ["2.5", "3.3"])
@given(u=st.fractions(min_value=0, max_value=1, max_denominator=10**9))
def test_mirror_property(spec, u):
    beta = make_beta(spec)
    cp = cut_points(beta)
    x = cp.z[0] + (cp.z[-1] - cp.z[0]) * u
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateEndpoint)
        try:
            assert mirror_check(beta, x, 200)
        except BoundaryHit:
            pass
