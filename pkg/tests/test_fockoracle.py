"""Tests for the trace oracle and the four summation identities."""

import itertools

import pytest

from qlaplace.fockoracle import (FockIndex, diagonal_action, invariant_integral,
                                 negative_block_sum, pochhammer_geometric_sum,
                                 positive_block_sum, qbinomial_convolution)
from qlaplace.lattice import (LatticeFunction, ModelParams, Quadruple,
                              hwv_inner_product, invariant_integral_normalizer)
from qlaplace.qcore import ConvergenceError, qpoch

F0 = LatticeFunction.basis(0)
F1 = LatticeFunction.basis(1)
F2 = LatticeFunction.basis(2)
F01 = F0 + F1


def quadruples(max_entry):
    rng = range(max_entry + 1)
    return [Quadruple(*t) for t in itertools.product(rng, repeat=4)
            if t[0] + t[3] == t[1] + t[2]]


# ----------------------------------------------------------- diagonal action

def test_diagonal_action_trivial_index():
    params = ModelParams(0.4, 2, 2)
    idx = FockIndex((0, 0, 1))
    val = diagonal_action(params, Quadruple(0, 0, 0, 0), F0, F0, idx)
    assert float(val) == pytest.approx(1.0)


def test_diagonal_action_vanishing_factor():
    # a_n = 0 with l >= 1 kills the value through (q^(2 a_n); q^2)_l
    params = ModelParams(0.4, 2, 2)
    quad = Quadruple(0, 1, 0, 1)
    idx = FockIndex((-1, 0, 1))
    assert float(diagonal_action(params, quad, F1 + F0, F1 + F0, idx)) == 0.0


def test_diagonal_action_off_lattice_read_is_zero():
    params = ModelParams(0.4, 2, 2)
    # sum of negative entries 0 with l = 1: read point q^2 is off-lattice
    quad = Quadruple(0, 1, 0, 1)
    idx = FockIndex((0, -1, 1))
    assert float(diagonal_action(params, quad, F0, F0, idx)) == 0.0


def test_fock_index_validation():
    params = ModelParams(0.4, 2, 2)
    with pytest.raises(ValueError):
        FockIndex((0, 0)).validate(params)
    with pytest.raises(ValueError):
        FockIndex((1, 0, 1)).validate(params)
    with pytest.raises(ValueError):
        FockIndex((0, 0, 0)).validate(params)


def test_n1_rejected():
    params = ModelParams(0.4, 1, 3)
    with pytest.raises(ValueError, match="n = 1"):
        diagonal_action(params, Quadruple(0, 0, 0, 0), F0, F0,
                        FockIndex((0, 1, 1, 1)))
    with pytest.raises(ValueError, match="n = 1"):
        invariant_integral(params, Quadruple(0, 0, 0, 0), F0, F0)


# ----------------------------------------------------------- the oracle

def _literal_trace(params, quad, phi, psi, depth):
    """Reference: literal sum of diagonal_action times the trace weight."""
    q = params.q
    n, N = params.n, params.N
    total = 0.0
    neg_axes = [range(0, -depth - 1, -1)] * n
    pos_axes = [range(1, depth + 1)] * (params.m - 1)
    for neg in itertools.product(*neg_axes):
        for pos in itertools.product(*pos_axes):
            idx = FockIndex(neg + pos)
            val = diagonal_action(params, quad, phi, psi, idx)
            if val == 0:
                continue
            e = sum((N - (i + 1)) * a for i, a in enumerate(idx.values))
            total += float(val) * q ** (2 * e)
    return float(invariant_integral_normalizer(params)) * total


def test_oracle_equals_literal_enumeration():
    params = ModelParams(0.5, 2, 2)
    for quad in (Quadruple(0, 0, 0, 0), Quadruple(1, 0, 1, 0), Quadruple(1, 1, 1, 1)):
        for phi, psi in ((F0, F0), (F01, F01), (F01, F1)):
            fast = float(invariant_integral(params, quad, phi, psi,
                                            depth=6, check=False))
            literal = _literal_trace(params, quad, phi, psi, 6)
            assert fast == pytest.approx(literal, rel=1e-13, abs=1e-15)


def test_oracle_unit_mass_of_base_indicator():
    for q in (0.4, 0.6):
        for n, m in ((2, 2), (2, 3)):
            params = ModelParams(q, n, m)
            val = float(invariant_integral(params, Quadruple(0, 0, 0, 0), F0, F0))
            assert abs(val - 1.0) < 1e-12


def test_oracle_matches_closed_form():
    params = ModelParams(0.6, 2, 3)
    for quad in quadruples(2)[::3]:
        for phi, psi in ((F0, F0), (F1, F1), (F01, F01), (F01, F0)):
            o = invariant_integral(params, quad, phi, psi, depth=40)
            c = hwv_inner_product(params, quad, phi, psi)
            assert abs(o - c) <= 1e-9 * abs(c)


def test_oracle_disjoint_supports_vanish():
    params = ModelParams(0.5, 2, 2)
    assert float(invariant_integral(params, Quadruple(1, 1, 1, 1), F0, F2)) \
        == pytest.approx(0.0, abs=1e-12)


def test_oracle_positivity():
    params = ModelParams(0.5, 2, 2)
    for quad in quadruples(2)[::4]:
        val = float(invariant_integral(params, quad, F01, F01))
        assert val > 0


def test_depth_doubling_detects_truncation():
    params = ModelParams(0.6, 2, 2)
    with pytest.raises(ConvergenceError):
        invariant_integral(params, Quadruple(0, 0, 0, 0), F0, F0, depth=2)


def test_depth_doubling_stability_at_default():
    params = ModelParams(0.6, 2, 3)
    v40 = invariant_integral(params, Quadruple(1, 1, 1, 1), F01, F01,
                             depth=40, check=False)
    v80 = invariant_integral(params, Quadruple(1, 1, 1, 1), F01, F01,
                             depth=80, check=False)
    assert abs(v80 - v40) <= 1e-12 * max(1.0, float(abs(v80)))


# ----------------------------------------------------------- identity 1

def test_negative_block_trivial_cases():
    q = 0.5
    for n in (1, 2, 3):
        for k in range(4):
            lhs, rhs = negative_block_sum(q, n, k, 0, 0)
            want = float(qpoch(q**-2.0, q**-2.0, k))
            assert float(lhs) == pytest.approx(want, rel=1e-13)
            assert float(rhs) == pytest.approx(want, rel=1e-13)
        for l in range(1, 4):
            lhs, rhs = negative_block_sum(q, n, 1, l, 0)
            assert float(lhs) == pytest.approx(0.0, abs=1e-13)
            assert float(rhs) == pytest.approx(0.0, abs=1e-13)


def test_negative_block_example():
    lhs, rhs = negative_block_sum(0.5, 3, 2, 1, 2)
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


def test_negative_block_grid_n_ge_2():
    for q in (0.3, 0.5, 0.7):
        for n in (2, 3, 4):
            for k in range(5):
                for l in range(5):
                    for t in range(5):
                        lhs, rhs = negative_block_sum(q, n, k, l, t)
                        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_negative_block_n1_collision_documented():
    """For n = 1 the two Pochhammer factors act on one index; the closed form
    does not extend to k, l, t all positive.  Pin the boundary: degenerate
    cells still agree, the collision cell genuinely does not."""
    q = 0.5
    for (k, l, t) in ((0, 2, 3), (2, 0, 3), (2, 2, 0)):
        lhs, rhs = negative_block_sum(q, 1, k, l, t)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))
    lhs, rhs = negative_block_sum(q, 1, 1, 1, 1)
    assert float(lhs) == pytest.approx(11.25)
    assert float(rhs) == pytest.approx(2.25)


# ----------------------------------------------------------- identity 2

def test_positive_block_single_geometric():
    q = 0.5
    lhs, rhs = positive_block_sum(q, 2, 0, 0, depth=80)
    want = q**2 / (1 - q**2)
    assert float(lhs) == pytest.approx(want, rel=1e-13)
    assert float(rhs) == pytest.approx(want, rel=1e-13)


def test_positive_block_example():
    lhs, rhs = positive_block_sum(0.5, 3, 1, 1, depth=60)
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


def test_positive_block_rejects_small_m():
    with pytest.raises(ValueError):
        positive_block_sum(0.5, 1, 0, 0)


# ----------------------------------------------------------- identity 3

def test_qbinomial_convolution_trivial():
    q = 0.5
    lhs, rhs = qbinomial_convolution(q, 3, 2, 0)
    assert float(lhs) == pytest.approx(1.0)
    assert float(rhs) == pytest.approx(1.0)


def test_qbinomial_convolution_geometric_case():
    q, t = 0.5, 5
    lhs, rhs = qbinomial_convolution(q, 0, 0, t)
    want = (1 - q ** (-2.0 * (t + 1))) / (1 - q**-2.0)
    assert float(lhs) == pytest.approx(want, rel=1e-13)
    assert float(rhs) == pytest.approx(want, rel=1e-13)


def test_qbinomial_convolution_example():
    lhs, rhs = qbinomial_convolution(0.5, 2, 3, 4)
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


# ----------------------------------------------------------- identity 4

def test_geometric_sum_pure():
    q, y = 0.5, 2
    lhs, rhs = pochhammer_geometric_sum(q, 0, y, depth=80)
    want = q ** (2 * y) / (1 - q ** (2 * y))
    assert float(lhs) == pytest.approx(want, rel=1e-13)
    assert float(rhs) == pytest.approx(want, rel=1e-13)


def test_geometric_sum_leading_terms_vanish():
    # terms a = 1..x carry a vanishing Pochhammer factor
    q, x = 0.5, 3
    partial = sum(float(qpoch(q ** (2.0 * a - 2), q**-2.0, x)) for a in range(1, x + 1))
    assert partial == 0.0


def test_geometric_sum_example():
    lhs, rhs = pochhammer_geometric_sum(0.5, 2, 3, depth=80)
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


def test_geometric_sum_requires_positive_exponent():
    with pytest.raises(ValueError):
        pochhammer_geometric_sum(0.5, 2, 0)
