import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from longsafe.roots import earliest_contact, poly_eval, quadratic_roots, smallest_positive_root


def numpy_smallest_positive(coeffs):
    """Oracle: companion-matrix eigenvalues, independent of the bracketing path."""
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    roots = np.roots(c[::-1])
    real = [r.real for r in roots if abs(r.imag) <= 1e-7 * max(1.0, abs(r)) and r.real > 0]
    return min(real) if real else None


def test_quadratic_roots_basic():
    assert quadratic_roots(1.0, -3.0, 2.0) == (1.0, 2.0)
    assert quadratic_roots(1.0, 0.0, 1.0) == ()
    assert quadratic_roots(1.0, -2.0, 1.0) == (1.0, 1.0)


def test_quadratic_avoids_cancellation():
    # roots 1e-8 and 1e8; the textbook formula loses the small one entirely
    small, large = quadratic_roots(1.0, -(1e8 + 1e-8), 1.0)
    assert small == pytest.approx(1e-8, rel=1e-12)
    assert large == pytest.approx(1e8, rel=1e-12)


def test_pure_cubic():
    # T**3 - 1 = 0
    assert smallest_positive_root([-1.0, 0.0, 0.0, 1.0]) == pytest.approx(1.0, abs=1e-12)


def test_cubic_with_three_positive_roots_picks_first():
    # (T - 1)(T - 2)(T - 3) = T^3 - 6T^2 + 11T - 6
    assert smallest_positive_root([-6.0, 11.0, -6.0, 1.0]) == pytest.approx(1.0, abs=1e-12)


def test_cubic_without_positive_root():
    # -(T + 1)(T^2 + 1) = -T^3 - T^2 - T - 1
    assert smallest_positive_root([-1.0, -1.0, -1.0, -1.0]) is None


def test_constant_term_must_be_negative():
    with pytest.raises(ValueError):
        smallest_positive_root([1.0, 1.0])


@pytest.mark.parametrize(
    "dv, da, dj, expected",
    [
        (1.0, 0.0, 0.0, 0.0),     # touching and closing
        (-1.0, 0.0, 0.0, None),   # touching and opening
        (0.0, 1.0, 0.0, 0.0),     # closing through acceleration
        (0.0, 0.0, 0.0, None),    # frozen contact
        (-1.0, 1.0, 0.0, 2.0),    # opens, then relative acceleration brings it back
    ],
)
def test_earliest_contact_at_zero_gap(dv, da, dj, expected):
    assert earliest_contact(0.0, dv, da, dj) == expected


def test_earliest_contact_rejects_overlap():
    with pytest.raises(ValueError):
        earliest_contact(-1.0, 1.0)


def achievable_residual(coeffs, T, d):
    """1e-9 * max(1, d), widened to the float64 floor at very distant roots.

    A float T can sit half an ulp from the true root, and Horner evaluation
    rounds each term; both grow without bound with T.
    """
    slope = abs(sum(i * c * T ** (i - 1) for i, c in enumerate(coeffs) if i))
    terms = sum(abs(c) * T ** i for i, c in enumerate(coeffs))
    floor = slope * math.ulp(T) + 8 * 2.2e-16 * terms
    return max(1e-9 * max(1.0, d), floor)


coef = st.one_of(st.just(0.0), st.floats(1e-6, 60), st.floats(-60, -1e-6))


@settings(max_examples=400, deadline=None)
@given(d=st.floats(1e-3, 100), dv=coef, da=coef, dj=coef)
def test_cubic_root_matches_oracle_and_residual(d, dv, da, dj):
    coeffs = [-d, dv, 0.5 * da, dj / 6.0]
    T = smallest_positive_root(coeffs)
    if T is None:
        # no sign change on a dense grid out to the root bound
        lead = next(c for c in reversed(coeffs) if c != 0)
        bound = min(1e6, 1.0 + max(abs(c / lead) for c in coeffs))  # Cauchy
        grid = np.linspace(0, bound, 20001)[1:]
        assert max(poly_eval(coeffs, g) for g in grid) <= 1e-9 * max(1.0, d)
        return
    assert T > 0
    assert abs(poly_eval(coeffs, T)) <= achievable_residual(coeffs, T, d)
    # nothing earlier: p stays negative on (0, T)
    probe = np.linspace(0, T, 2001)[1:-1]
    assert all(poly_eval(coeffs, g) <= achievable_residual(coeffs, g, d) for g in probe)
    oracle = numpy_smallest_positive(coeffs)
    if oracle is not None:
        assert T <= oracle * (1 + 1e-6) + 1e-9


def test_tangent_double_root():
    # (T - 2)^2 (T + 1) = T^3 - 3T^2 + 4 -> scaled to negative constant
    coeffs = [-4.0, 0.0, 3.0, -1.0]
    T = smallest_positive_root(coeffs)
    # double root at T = 2 touches zero from below
    assert T is None or math.isclose(T, 2.0, abs_tol=1e-6)
