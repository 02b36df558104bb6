import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import spherical_jn

import oracles
from entropic_uncertainty import errors
from entropic_uncertainty.bounds import bound_b, bound_r
from entropic_uncertainty.specfun import (radial_s1_at_one, radial_s1_bessel_series,
                                          spherical_bessel_j, spheroidal_eigensystem, write_table)


def dense_recurrence_eigenvalue(c, terms):
    """Lowest eigenvalue of the unsymmetrised recurrence matrix, general dense solver."""
    mat = np.zeros((terms, terms))
    c2 = c * c
    for i in range(terms):
        r = 2 * i
        mat[i, i] = r * (r + 1) + (2 * r * (r + 1) - 1) * c2 / ((2 * r - 1) * (2 * r + 3))
        if i + 1 < terms:
            mat[i, i + 1] = (r + 1) * (r + 2) * c2 / ((2 * r + 3) * (2 * r + 5))
        if i > 0:
            mat[i, i - 1] = r * (r - 1) * c2 / ((2 * r - 3) * (2 * r - 1))
    return float(np.min(np.linalg.eigvals(mat).real))


def test_zero_spheroidicity():
    sol = spheroidal_eigensystem(0.0)
    assert sol.eigenvalue == 0.0
    assert sol.coeffs[0] == 1.0 and np.all(sol.coeffs[1:] == 0)
    assert radial_s1_at_one(0.0) == 1.0


def test_eigenvalue_against_dense_solve():
    sol = spheroidal_eigensystem(0.5)
    assert sol.eigenvalue == pytest.approx(dense_recurrence_eigenvalue(0.5, 2 * sol.truncation), abs=1e-12)


@pytest.mark.parametrize("c", [0.5, 2.0, 5.0])
def test_eigenvalue_against_ode_oracle(c):
    lam, _ = oracles.spheroidal_ode(c)
    assert spheroidal_eigensystem(c).eigenvalue == pytest.approx(lam, abs=1e-9)


def test_small_c_value():
    value = radial_s1_at_one(0.1)
    assert value == pytest.approx(math.sin(0.1) / 0.1, rel=2e-3)
    assert value == pytest.approx(oracles.spheroidal_ode(0.1)[1], abs=1e-10)


def test_crossover_consistency():
    assert abs(bound_r(7.167) - bound_b(7.167)) < 1e-3


def test_coefficients_decay_and_residual():
    sol = spheroidal_eigensystem(12.5)
    assert sol.residual < 1e-12
    tail = np.abs(sol.coeffs[int(12.5):])
    assert np.all(np.diff(tail) <= 0)
    # d_r alternate in sign and grow with c, so the unit sum holds up to
    # rounding on the scale of sum |d_r|
    assert abs(math.fsum(sol.coeffs) - 1.0) < 1e-15 * np.sum(np.abs(sol.coeffs))


@pytest.mark.parametrize("c", [0.3, 4.0, 15.0])
def test_eigenvalue_stable_under_doubling(c):
    sol = spheroidal_eigensystem(c)
    assert abs(spheroidal_eigensystem(c, 2 * sol.truncation).eigenvalue - sol.eigenvalue) < 1e-12


@pytest.mark.parametrize("c", [0.2, 1.0, 3.0, 6.0])
def test_bessel_series_cross_check(c):
    assert radial_s1_bessel_series(c) == pytest.approx(radial_s1_at_one(c), abs=1e-11)


def test_out_of_range():
    with pytest.raises(errors.DomainError):
        radial_s1_at_one(-1.0)
    with pytest.raises(errors.DomainError):
        spheroidal_eigensystem(60.0)


def test_positive_on_required_range():
    assert all(radial_s1_at_one(c) > 0 for c in np.linspace(0, 12.5, 126))


def test_small_c_slope():
    cs = [1e-1, 1e-2, 1e-3]
    gaps = [abs(radial_s1_at_one(c) - math.sin(c) / c) for c in cs]
    slopes = [math.log(gaps[i] / gaps[i + 1]) / math.log(cs[i] / cs[i + 1]) for i in range(2)]
    assert min(slopes) >= 2 - 1e-3


@settings(max_examples=40, deadline=None)
@given(x=st.floats(1e-3, 120.0), nmax=st.integers(0, 80))
def test_spherical_bessel_against_scipy(x, nmax):
    ours = spherical_bessel_j(nmax, x)
    ref = spherical_jn(np.arange(nmax + 1), x)
    # absolute error relative to the envelope max|j_n| <= 1
    np.testing.assert_allclose(ours, ref, rtol=1e-9, atol=1e-13)


def test_spherical_bessel_at_zero():
    np.testing.assert_array_equal(spherical_bessel_j(3, 0.0), [1, 0, 0, 0])


def test_table_csv(tmp_path):
    path = tmp_path / "table.csv"
    write_table(path, [0.0, 1.0, 2.0])
    rows = list(csv.DictReader(open(path)))
    assert list(rows[0]) == ["c", "eigenvalue", "R00_at_1"]
    assert float(rows[2]["R00_at_1"]) == radial_s1_at_one(2.0)
