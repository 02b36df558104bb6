import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from entropic_uncertainty import errors
from entropic_uncertainty.binning import (EPS_TRUNC, BinGrid, bin_probabilities, tail_mass,
                                          tail_second_moment, tail_variance)
from entropic_uncertainty.states import (UniformDensity, bump_state, even_superposition,
                                         make_gaussian, moment)


def test_central_midpoint_bin_against_erf_oracle():
    dist = bin_probabilities(make_gaussian(1.0), BinGrid.midpoint(1.0))
    q0 = dist.probs[list(dist.ks).index(0)]
    expected = float(oracles.gaussian_bin_probs(1.0, 0.0, [-0.5, 0.5])[0])
    assert q0 == pytest.approx(expected, abs=1e-15)
    assert q0 == pytest.approx(0.520500, abs=1e-6)


def test_all_bins_against_erf_oracle():
    dist = bin_probabilities(make_gaussian(0.7, 0.3), BinGrid(0.4, 0.13))
    expected = oracles.gaussian_bin_probs(0.7, 0.3, list(dist.edges))
    np.testing.assert_allclose(dist.probs, [float(e) for e in expected], rtol=1e-12, atol=1e-300)


def test_large_border_bins_split_in_half():
    dist = bin_probabilities(make_gaussian(1.0), BinGrid.border(100.0))
    assert sorted(dist.probs[dist.probs > 0]) == pytest.approx([0.5, 0.5], abs=1e-15)


def test_single_wide_midpoint_bin_takes_everything():
    dist = bin_probabilities(make_gaussian(1.0), BinGrid.midpoint(100.0, 0))
    assert dist.probs.size == 1
    assert dist.probs[0] == pytest.approx(1.0, abs=1e-15)
    assert dist.tail_mass < 1e-15


def test_tail_second_moment_vanishes_for_wide_window():
    assert tail_second_moment(make_gaussian(1.0), BinGrid.midpoint(1.0, 20)) < 1e-12


def test_tail_second_moment_against_oracle():
    got = tail_second_moment(make_gaussian(1.0), BinGrid.midpoint(1.0, 0))
    assert got == pytest.approx(oracles.gaussian_tail_second_moment(1.0, 0.5), rel=1e-10)


def test_tail_second_moment_uniform():
    got = tail_second_moment(UniformDensity(-1.0, 1.0), BinGrid.midpoint(1.0, 0))
    assert got == pytest.approx(7 / 24, rel=1e-12)


def test_tail_variance_symmetric_equals_ratio():
    g, grid = make_gaussian(1.0), BinGrid.midpoint(1.0, 0)
    ratio = tail_second_moment(g, grid) / tail_mass(g, grid)
    assert tail_variance(g, grid) == pytest.approx(ratio, rel=1e-10)


def test_tail_variance_displaced_below_ratio():
    g, grid = make_gaussian(1.0, 0.3), BinGrid.midpoint(1.0, 0)
    q, first, second = oracles.gaussian_tail_moments(1.0, 0.3, 0.5)
    assert tail_variance(g, grid) == pytest.approx(second / q - (first / q) ** 2, rel=1e-9)
    assert tail_variance(g, grid) < tail_second_moment(g, grid) / tail_mass(g, grid)


def test_tail_variance_degenerate():
    with pytest.raises(errors.DegenerateTailError):
        tail_variance(make_gaussian(1.0), BinGrid.midpoint(1.0, 20))


def test_finite_window_requires_midpoint():
    with pytest.raises(errors.DomainError):
        BinGrid(1.0, 0.0, 3)
    with pytest.raises(errors.DomainError):
        BinGrid.from_convention("border", 1.0, 3)
    with pytest.raises(errors.DomainError):
        BinGrid(-1.0)


def test_index_cap():
    with pytest.raises(errors.TruncationError) as info:
        bin_probabilities(make_gaussian(1.0), BinGrid.border(1e-6))
    assert 0 <= info.value.achieved_tail < 1


def test_full_line_tail_below_threshold():
    for state in (make_gaussian(4.0, 0.3), even_superposition(1.0, 3.0), bump_state()):
        dist = bin_probabilities(state, BinGrid.midpoint(0.3))
        assert dist.tail_mass < EPS_TRUNC


def test_conventions_differ_for_displaced_state():
    g = make_gaussian(1.0, 0.37)
    a = np.sort(bin_probabilities(g, BinGrid.border(1.0)).probs)
    b = np.sort(bin_probabilities(g, BinGrid.midpoint(1.0)).probs)
    assert a.size != b.size or np.max(np.abs(a - b)) > 1e-3


def test_csv_schema():
    dist = bin_probabilities(make_gaussian(1.0), BinGrid.midpoint(1.0, 2))
    buf = io.StringIO()
    dist.write_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "k,lower_edge,upper_edge,prob"
    assert len(lines) == 6
    k, lo, hi, p = lines[1].split(",")
    assert (int(k), float(lo), float(hi)) == (-2, -2.5, -1.5)
    assert float(p) == dist.probs[0]


grids = st.builds(BinGrid, st.floats(0.05, 3.0), st.floats(-1.0, 1.0))
states = st.builds(make_gaussian, st.floats(0.2, 4.0), st.floats(-2, 2), st.floats(-2, 2))


@settings(max_examples=40, deadline=None)
@given(state=states, grid=grids)
def test_mass_conservation_full_line(state, grid):
    dist = bin_probabilities(state, grid)
    assert abs(dist.covered_mass + dist.tail_mass - 1) < 1e-10
    assert np.all((dist.probs >= 0) & (dist.probs <= 1))


@settings(max_examples=40, deadline=None)
@given(state=states, delta=st.floats(0.05, 3.0), m=st.integers(0, 30))
def test_mass_conservation_window(state, delta, m):
    dist = bin_probabilities(state, BinGrid.midpoint(delta, m))
    assert abs(dist.covered_mass + dist.tail_mass - 1) < 1e-10


@settings(max_examples=40, deadline=None)
@given(state=states, grid=grids)
def test_refinement_consistency(state, grid):
    coarse = bin_probabilities(state, grid)
    fine = bin_probabilities(state, BinGrid(grid.delta / 2, grid.xi0))
    fine_by_k = dict(zip(fine.ks.tolist(), fine.probs))
    for k, q in zip(coarse.ks.tolist(), coarse.probs):
        if 2 * k in fine_by_k and 2 * k + 1 in fine_by_k:
            assert abs(fine_by_k[2 * k] + fine_by_k[2 * k + 1] - q) < 1e-12


TAIL_STATES = [make_gaussian(s, x0) for s in (0.25, 1.0, 4.0) for x0 in (0.0, 0.3)]
TAIL_STATES += [even_superposition(1.0, 3.0), bump_state()]
WINDOWS = [(1.0, 0), (0.5, 1), (0.3, 2), (0.1, 5)]


def _near_centred(state):
    return abs(moment(state, 1)) <= 0.1 * math.sqrt(moment(state, 2))


@pytest.mark.parametrize("state", [s for s in TAIL_STATES if _near_centred(s)])
@pytest.mark.parametrize("delta,m", WINDOWS)
def test_tail_variance_bounded_by_second_moment_ratio(state, delta, m):
    grid = BinGrid.midpoint(delta, m)
    q = tail_mass(state, grid)
    assert q > EPS_TRUNC
    assert tail_variance(state, grid) <= tail_second_moment(state, grid) / q + 1e-12


@pytest.mark.parametrize("state", [s for s in TAIL_STATES if not _near_centred(s)])
@pytest.mark.parametrize("delta,m", WINDOWS)
def test_tail_variance_bound_also_holds_off_centre(state, delta, m):
    # the variance about the tail mean never exceeds the second moment about 0
    grid = BinGrid.midpoint(delta, m)
    q = tail_mass(state, grid)
    assert tail_variance(state, grid) <= tail_second_moment(state, grid) / q + 1e-12
