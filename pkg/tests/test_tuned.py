import warnings
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from betafreq.beta import is_feasible
from betafreq.errors import DegenerateEndpoint, FrequencyOutOfRange, InvalidIndex, UnsupportedBase
from betafreq.tuned import (b_max, constant_checks, f_value, freq_radius, orbit_identities,
                            pseudo_golden, target_to_cut, tuned_expand, tuned_step)

# mpmath at 40 digits: real root in (1, 2) and the closed-form radius
ROOTS = {2: 1.6180339887498948482, 3: 1.8392867552141611326, 4: 1.9275619754829253043,
         5: 1.9659482366454853372, 6: 1.9835828434243263304}
RADII = {2: 0.22360679774997896964, 3: 0.11841992231939255095, 4: 0.066342887702651534849,
         5: 0.037926116819159784924, 6: 0.021772494286709641072}

PHI = pseudo_golden(2)
HALF = Fraction(1, 2)


@pytest.mark.parametrize("m", sorted(ROOTS))
def test_roots_and_radii(m):
    beta = pseudo_golden(m)
    assert float(beta) == pytest.approx(ROOTS[m], abs=1e-15)
    assert float(freq_radius(beta)) == pytest.approx(RADII[m], abs=1e-15)


def test_golden_radius_is_one_over_two_root_five():
    c = freq_radius(PHI)
    assert c * c == Fraction(1, 20)


def test_index_below_two():
    with pytest.raises(InvalidIndex):
        pseudo_golden(1)


@pytest.mark.parametrize("m", sorted(ROOTS))
def test_f_endpoints_exact(m):
    beta = pseudo_golden(m)
    c = freq_radius(beta)
    assert f_value(beta, 0) - HALF - c == 0
    assert f_value(beta, b_max(beta)) == HALF - c


def test_target_to_cut_half():
    params = target_to_cut(PHI, 2, "0.5")
    assert params.p == HALF
    assert float(params.b) == pytest.approx(0.30901699437494742410, abs=1e-15)
    assert float(params.cut) == pytest.approx(0.80901699437494742410, abs=1e-15)


def test_target_top_of_range():
    params = target_to_cut(PHI, 2, HALF + freq_radius(PHI))
    assert params.b == 0
    assert params.cut == 1 / PHI.exact


def test_target_bottom_of_range_accepted():
    params = target_to_cut(PHI, 2, HALF - freq_radius(PHI))
    assert params.b == b_max(PHI)
    assert all(constant_checks(params).values())


def test_target_out_of_range():
    with pytest.raises(FrequencyOutOfRange):
        target_to_cut(PHI, 2, "0.9")


def test_target_wrong_base():
    with pytest.raises(UnsupportedBase):
        target_to_cut(pseudo_golden(3), 2, HALF)


def test_decimal_p_is_exact():
    assert target_to_cut(PHI, 2, "0.35").p == Fraction(7, 20)


def test_expand_examples():
    top = target_to_cut(PHI, 2, HALF + freq_radius(PHI))
    assert tuned_expand(top, 1, 5).tolist() == [1, 1, 0, 0, 0]
    half = target_to_cut(PHI, 2, HALF)
    assert tuned_expand(half, HALF, 6).tolist() == [0, 1, 0, 0, 1, 0]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateEndpoint)
        assert tuned_expand(half, 0, 8).tolist() == [0] * 8


def test_periodic_point_frequency():
    # 1/2 is periodic with zero-frequency 2/3, not p
    half = target_to_cut(PHI, 2, HALF)
    digits = tuned_expand(half, HALF, 3000).digits
    assert (digits == 0).mean() == pytest.approx(2 / 3)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_orbit_identities(m):
    beta = pseudo_golden(m)
    report = orbit_identities(target_to_cut(beta, m, HALF))
    assert len(report["rows"]) == m - 1
    assert report["merge_step"] == m


def test_orbit_identities_golden_top():
    params = target_to_cut(PHI, 2, HALF + freq_radius(PHI))
    report = orbit_identities(params)
    # for the golden ratio beta - 1 equals 1/beta, so the second orbit lands on the cut
    assert PHI.exact - 1 == params.cut
    assert report["rows"][0]["hi_at_or_above_cut"]


def test_branch_boundary_values():
    params = target_to_cut(pseudo_golden(3), 3, Fraction(11, 20))
    beta = params.beta.exact
    assert beta * params.cut == params.b + 1
    assert beta * params.cut - 1 == params.b
    assert tuned_step(params, params.cut) == params.b


@pytest.mark.parametrize("m", [2, 3])
@given(s=st.fractions(min_value=0, max_value=1, max_denominator=10**6),
       t=st.fractions(min_value=0, max_value=1, max_denominator=10**6))
def test_f_affine_decreasing(m, s, t):
    beta = pseudo_golden(m)
    a, b = b_max(beta) * s, b_max(beta) * t
    mid = (a + b) / 2
    assert 2 * f_value(beta, mid) == f_value(beta, a) + f_value(beta, b)
    if s < t:
        assert f_value(beta, a) > f_value(beta, b)


@pytest.mark.parametrize("m", [2, 3])
@given(p=st.fractions(min_value=Fraction(46, 100), max_value=Fraction(54, 100),
                      max_denominator=1000))
def test_rational_targets_round_trip(m, p):
    beta = pseudo_golden(m)
    c = freq_radius(beta)
    if not HALF - c <= p <= HALF + c:
        return
    params = target_to_cut(beta, m, p)
    assert f_value(beta, params.b) == p
    assert all(constant_checks(params).values())


@given(st.fractions(min_value=0, max_value=1, max_denominator=10**6))
def test_tuned_output_feasible(u):
    params = target_to_cut(pseudo_golden(3), 3, HALF)
    x = params.beta.hi * u
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateEndpoint)
        assert is_feasible(params.beta, x, tuned_expand(params, x, 300).tolist())
