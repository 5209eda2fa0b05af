from fractions import Fraction

import numpy as np
import pytest

from betafreq.beta import sample_points
from betafreq.density import (build_density, density_eval, density_identities, orbit_histogram,
                              orbit_histogram_compare)
from betafreq.errors import InvalidSpec, OutOfDomain
from betafreq.tuned import freq_radius, pseudo_golden, target_to_cut

PHI = pseudo_golden(2)
HALF = Fraction(1, 2)
HALF_PARAMS = target_to_cut(PHI, 2, HALF)


def test_golden_half_steps():
    model = build_density(HALF_PARAMS)
    bps, hs = model.canonical()
    # mpmath: b, beta*b, beta*(b+1) - 1, b + 1, hi
    want = [0, 0.30901699437494742, 0.5, 1.1180339887498948, 1.3090169943749474,
            1.6180339887498948]
    assert [float(v) for v in bps] == pytest.approx(want, abs=1e-15)
    assert [float(v) for v in hs] == pytest.approx([0, 1, 1.6180339887498948, 1, 0], abs=1e-15)
    assert hs[2] == 1 + 1 / PHI.exact


def test_density_eval_examples():
    model = build_density(HALF_PARAMS)
    assert density_eval(model, Fraction(1, 5)) == 0
    assert density_eval(model, Fraction(2, 5)) == 1
    assert density_eval(model, Fraction(3, 5)) == 1 + 1 / PHI.exact
    assert density_eval(model, HALF_PARAMS.b) == 1
    assert density_eval(model, PHI.hi) == 0
    with pytest.raises(OutOfDomain):
        density_eval(model, 2)


def test_total_mass_at_b_zero():
    params = target_to_cut(PHI, 2, HALF + freq_radius(PHI))
    model = build_density(params)
    beta = PHI.exact
    assert model.mu_total == 1 + (beta - 1) / beta == (3 * beta - 4) / (beta - 1)
    assert float(model.mu_total) == pytest.approx(1.3819660112501052, abs=1e-15)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("p", ["0.5", "lo", "hi"])
def test_identities(m, p):
    beta = pseudo_golden(m)
    c = freq_radius(beta)
    target = {"0.5": HALF, "lo": HALF - c, "hi": HALF + c}[p]
    model = build_density(target_to_cut(beta, m, target))
    assert all(density_identities(model).values())


@pytest.mark.parametrize("m", [2, 3])
def test_truncation_equivalence(m):
    params = target_to_cut(pseudo_golden(m), m, HALF)
    model = build_density(params)
    for n in range(m, m + 6):
        assert build_density(params, n).same_function(model)
    if m > 1:
        assert not build_density(params, m - 1).same_function(model)


def test_bin_masses_sum_exactly():
    model = build_density(HALF_PARAMS)
    masses = model.bin_masses(64)
    assert sum(masses, PHI.field.zero) == 1
    assert all(v >= 0 for v in masses)


def test_histogram_validation():
    x0 = sample_points(PHI, 1, 4)[0]
    cmp = orbit_histogram_compare(HALF_PARAMS, x0, 200_000, 1000, 64)
    assert cmp.l1 <= 0.05
    assert cmp.empirical.sum() == pytest.approx(1, abs=1e-12)
    assert cmp.analytic.sum() == pytest.approx(1, abs=1e-12)


def test_histogram_error_shrinks_with_length():
    x0 = sample_points(PHI, 1, 8)[0]
    short = orbit_histogram_compare(HALF_PARAMS, x0, 5_000, 100, 32).l1
    long = orbit_histogram_compare(HALF_PARAMS, x0, 500_000, 100, 32).l1
    assert long < short


def test_histogram_burn_in_checked():
    with pytest.raises(InvalidSpec):
        orbit_histogram(HALF_PARAMS, Fraction(1, 3), 100, 100, 8)


def test_histogram_backends_agree():
    from betafreq.orbit import available_backends
    runs = [orbit_histogram(HALF_PARAMS, Fraction(1, 3), 50_000, 10, 32, backend=b)
            for b in available_backends()]
    for r in runs[1:]:
        assert np.array_equal(r, runs[0])


def test_csv_export():
    cmp = orbit_histogram_compare(HALF_PARAMS, Fraction(1, 3), 10_000, 100, 8)
    lines = cmp.to_csv().splitlines()
    assert lines[0] == "bin_lo,bin_hi,empirical_mass,analytic_mass"
    assert len(lines) == 9
    assert float(lines[-1].split(",")[1]) == pytest.approx(float(PHI.hi))
