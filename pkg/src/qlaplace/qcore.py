"""Scalar q-calculus primitives.

q-Pochhammer symbols (finite and truncated-infinite), Gaussian q-binomial
coefficients, the basic hypergeometric sum 3phi2 with vanishing second lower
parameter, the Jackson integral on the lattice x = q^(-2j), and the forward /
backward q-difference quotients.

All routines are dtype-preserving: they accept Python floats/complex or numpy
scalars (including ``np.longdouble`` / ``np.clongdouble``) and carry the input
precision through.  No logarithmic rescaling is used anywhere, since
q-Pochhammer factors routinely change sign.
"""

from __future__ import annotations

from typing import Mapping, NamedTuple

__all__ = [
    "ConvergenceError",
    "qpoch",
    "qpoch_inf",
    "qbinomial",
    "Phi32Result",
    "phi32",
    "phi32_info",
    "jackson_integral",
    "bminus",
    "bplus",
]

#: default truncation tolerance for infinite products; the dropped tail has
#: relative size O(tol / (1 - |base|))
DEFAULT_INF_TOL = 1e-16

#: relative snap width for detecting an exactly vanishing series factor.
#: Lattice arguments such as a = q^(-2j) with base q^2 produce a factor
#: 1 - a*base^j that is zero in exact arithmetic but O(j*eps) in floats;
#: factors this close to zero terminate the series.
TERMINATION_SNAP = 1e-12


class ConvergenceError(ArithmeticError):
    """A truncated summation failed to meet its tolerance."""


def qpoch(a, base, k: int):
    """Finite q-Pochhammer symbol (a; base)_k = prod_{i<k} (1 - a*base^i).

    The empty product (k = 0) is exactly 1.  Any complex ``a``/``base`` are
    accepted; the value is computed as an explicit product of factors.
    """
    if k < 0:
        raise ValueError(f"q-Pochhammer order must be nonnegative, got {k}")
    acc = a * 0 + 1.0
    p = a * 0 + 1.0
    for _ in range(k):
        acc = acc * (1 - a * p)
        p = p * base
    return acc


def qpoch_inf(a, base, tol: float = DEFAULT_INF_TOL):
    """Infinite q-Pochhammer symbol (a; base)_inf, truncated.

    Multiplies factors 1 - a*base^i until |a*base^i| < tol; no tail
    correction is applied.  Requires |base| < 1.  The neglected tail has
    relative size O(tol / (1 - |base|)).
    """
    if abs(base) >= 1:
        raise ValueError(f"infinite product requires |base| < 1, got {base!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    acc = a * 0 + base * 0 + 1.0
    t = acc * a
    while abs(t) >= tol:
        acc = acc * (1 - t)
        t = t * base
    return acc


def qbinomial(a: int, b: int, base):
    """Gaussian binomial coefficient [a; b] at the given base.

    Equals (base; base)_a / ((base; base)_b (base; base)_{a-b}).
    """
    if b < 0 or a < 0 or b > a:
        raise ValueError(f"need 0 <= b <= a, got a={a}, b={b}")
    return qpoch(base, base, a) / (qpoch(base, base, b) * qpoch(base, base, a - b))


class Phi32Result(NamedTuple):
    """Outcome of a 3phi2 summation."""

    value: complex
    terms: int
    #: which rule stopped the sum: "terminated" (a numerator Pochhammer
    #: vanished, so the value is exact), "tol", or "max_terms"
    stop: str


def _snapped_zero(factor, magnitude) -> bool:
    return abs(factor) <= TERMINATION_SNAP * max(1.0, float(abs(magnitude)))


def phi32_info(a1, a2, a3, b1, z, base, max_terms: int = 1000,
               tol: float = 1e-15) -> Phi32Result:
    """Sum the basic hypergeometric series 3phi2 with second lower parameter 0.

    The k-th term carries
    (a1;base)_k (a2;base)_k (a3;base)_k / ((base;base)_k (b1;base)_k) * z^k;
    the vanishing lower parameter contributes (0;base)_k = 1.  If some
    (ai;base)_k vanishes the series terminates there and the result is exact
    up to rounding; otherwise summation stops once |term| < tol, and running
    past ``max_terms`` without converging reports stop="max_terms".

    Direct summation is accurate only while the partial terms stay comparable
    to the result; for lattice arguments a1 = base^(-j) with large j the terms
    grow like base^(-j(j-1)/2) and cancellation destroys the sum.  Higher
    modules use dedicated stable evaluations for that regime.
    """
    total = (a1 * 0 + a2 * 0 + a3 * 0 + z * 0) * 1.0
    term = total + 1.0
    p = term * 0 + 1.0  # base^k
    k = 0
    while k < max_terms:
        total = total + term
        k += 1
        f1, f2, f3 = 1 - a1 * p, 1 - a2 * p, 1 - a3 * p
        if (_snapped_zero(f1, a1 * p) or _snapped_zero(f2, a2 * p)
                or _snapped_zero(f3, a3 * p)):
            return Phi32Result(total, k, "terminated")
        den = (1 - base * p) * (1 - b1 * p)
        if _snapped_zero(den, 1.0):
            raise ValueError(
                "vanishing denominator factor: b1 lies on base^(-j) before "
                "the series terminates")
        term = term * f1 * f2 * f3 * z / den
        p = p * base
        if abs(term) < tol:
            return Phi32Result(total + term, k + 1, "tol")
    return Phi32Result(total, k, "max_terms")


def phi32(a1, a2, a3, b1, z, base, max_terms: int = 1000, tol: float = 1e-15):
    """Value of the 3phi2 sum; raises ConvergenceError on non-termination."""
    res = phi32_info(a1, a2, a3, b1, z, base, max_terms=max_terms, tol=tol)
    if res.stop == "max_terms":
        raise ConvergenceError(
            f"3phi2 did not reach tol={tol} within {max_terms} terms")
    return res.value


def jackson_integral(f: Mapping[int, complex], q):
    """Jackson integral of a finitely supported function on x = q^(-2j).

    Returns sum_j f(j) * q^(-2j), an exact finite sum over the support.
    The map ``f`` sends the lattice index j >= 0 to the value at x = q^(-2j).
    """
    total = q * 0
    for j in sorted(f):
        total = total + f[j] * q ** (-2 * j)
    return total


def bminus(f: Mapping[int, complex], j: int, q):
    """Backward q-difference quotient (f(q^-2 x) - f(x)) / (q^-2 x - x).

    Evaluated at the lattice point x = q^(-2j); reads indices j and j+1.
    Missing indices read as 0, so bilateral (q^(2Z)) supports work too.
    """
    x = q ** (-2 * j)
    upper = f.get(j + 1, 0.0)
    here = f.get(j, 0.0)
    return (upper - here) / (q**-2 * x - x)


def bplus(f: Mapping[int, complex], j: int, q):
    """Forward q-difference quotient (f(q^2 x) - f(x)) / (q^2 x - x).

    Evaluated at x = q^(-2j); reads indices j-1 and j.  On the half-line
    lattice q^(-2Z+) the point q^2*x falls off-lattice at j = 0, so callers
    restricted to that lattice must supply their own boundary policy there
    (the difference operators in :mod:`qlaplace.laplace` never call this at
    the boundary).  Missing indices read as 0.
    """
    x = q ** (-2 * j)
    lower = f.get(j - 1, 0.0)
    here = f.get(j, 0.0)
    return (lower - here) / (q**2 * x - x)
