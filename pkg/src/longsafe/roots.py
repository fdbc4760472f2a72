"""Earliest-contact roots of low-degree gap polynomials.

The gap closure after ``T`` seconds under constant jerk is

    p(T) = dj/6 * T**3 + da/2 * T**2 + dv * T - d

with relative quantities taken follower-minus-leader and ``d`` the current
gap.  A collision happens at the first ``T`` where ``p(T) = 0``.
"""

from __future__ import annotations

import math

_MAX_ITER = 400


def poly_eval(coeffs, T):
    """Horner evaluation; ``coeffs`` are ascending (c0, c1, ...)."""
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * T + c
    return acc


def _poly_deriv(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs.pop()
    return coeffs


def quadratic_roots(a, b, c):
    """Real roots of a*x**2 + b*x + c (a != 0), cancellation-free."""
    disc = b * b - 4.0 * a * c
    if disc < 0:
        return ()
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b))
    if q == 0.0:
        return (0.0,)
    return tuple(sorted((q / a, c / q)))


def _polish(coeffs, T):
    """A few Newton steps, kept only while they shrink the residual."""
    deriv = _poly_deriv(coeffs)
    best, best_r = T, abs(poly_eval(coeffs, T))
    for _ in range(3):
        slope = poly_eval(deriv, best)
        if slope == 0.0 or best_r == 0.0:
            break
        cand = best - poly_eval(coeffs, best) / slope
        r = abs(poly_eval(coeffs, cand))
        if not r < best_r:
            break
        best, best_r = cand, r
    return best


def root_bound(coeffs):
    """Fujiwara's upper bound on the magnitude of every root."""
    n = len(coeffs) - 1
    lead = coeffs[n]
    terms = [abs(coeffs[n - k] / lead) ** (1.0 / k) for k in range(1, n)]
    terms.append(abs(coeffs[0] / (2.0 * lead)) ** (1.0 / n))
    return 2.0 * max(terms)


def _midpoint(lo, hi):
    if lo == 0.0 and hi > 1.0:
        return 1.0
    if lo > 0.0 and hi > 4.0 * lo:
        return math.sqrt(lo) * math.sqrt(hi)
    return 0.5 * (lo + hi)


def _bracketed_root(coeffs, deriv, lo, hi, p_lo):
    """Root of a function monotone on [lo, hi] with a sign change.

    Newton steps, falling back to bisection whenever a step leaves the
    bracket.  Bisection is geometric while the bracket spans orders of
    magnitude, so huge root bounds cost few iterations.
    """
    x = _midpoint(lo, hi)
    for _ in range(_MAX_ITER):
        px = poly_eval(coeffs, x)
        if px == 0.0:
            return x
        if (px < 0) == (p_lo < 0):
            lo, p_lo = x, px
        else:
            hi = x
        slope = poly_eval(deriv, x)
        nx = x - px / slope if slope != 0.0 else lo - 1.0
        if not lo < nx < hi:
            nx = _midpoint(lo, hi)
        if nx == x or hi - lo <= 4 * math.ulp(max(abs(lo), abs(hi))):
            x = nx
            break
        x = nx
    return x


def smallest_positive_root(coeffs):
    """Smallest strictly positive real root of a polynomial of degree <= 3.

    ``coeffs`` are ascending and the constant term must be negative (a
    positive gap).  Returns ``None`` when there is no positive real root.
    """
    coeffs = _trim(coeffs)
    if coeffs[0] >= 0:
        raise ValueError("constant term must be negative")
    deg = len(coeffs) - 1
    if deg == 0:
        return None
    if deg == 1:
        return -coeffs[0] / coeffs[1] if coeffs[1] > 0 else None
    if deg == 2:
        positive = [r for r in quadratic_roots(coeffs[2], coeffs[1], coeffs[0]) if r > 0]
        return _polish(coeffs, positive[0]) if positive else None
    if deg != 3:
        raise ValueError("degree above 3 not supported")

    # Split (0, bound] at the positive critical points; p is monotone on each
    # piece, so the first piece whose right end is >= 0 holds the root.
    deriv = _poly_deriv(coeffs)
    crit = [r for r in quadratic_roots(deriv[2], deriv[1], deriv[0]) if r > 0]
    bound = root_bound(coeffs)
    knots = [0.0] + [r for r in crit if r < bound] + [bound]
    lo, p_lo = 0.0, coeffs[0]
    for hi in knots[1:]:
        p_hi = poly_eval(coeffs, hi)
        if p_hi == 0.0:
            return hi
        if p_hi > 0:
            return _bracketed_root(coeffs, deriv, lo, hi, p_lo)
        lo, p_lo = hi, p_hi
    return None


def earliest_contact(d, dv, da=0.0, dj=0.0):
    """First time T >= 0 at which the gap closes, or ``None``.

    ``d`` must be non-negative.  At ``d == 0`` the vehicles touch now; the
    answer is 0 when the leading nonzero of (dv, da, dj) is positive (gap
    about to go negative), otherwise the next positive root.
    """
    if d < 0:
        raise ValueError("gap must be non-negative")
    coeffs = [-d, dv, 0.5 * da, dj / 6.0]
    if d == 0.0:
        k = next((i for i, c in enumerate(coeffs) if c != 0.0), None)
        if k is None:
            return None
        if coeffs[k] > 0:
            return 0.0
        # T = 0 is a root of order k; the next contact is a root of p(T) / T**k,
        # whose constant term coeffs[k] is negative.
        return smallest_positive_root(coeffs[k:])
    return smallest_positive_root(coeffs)
