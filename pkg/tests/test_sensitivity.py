"""Sampling design, equilibrium evaluation and Sobol' index estimators."""

from __future__ import annotations

import numpy as np
import pytest

from lvdyn import (
    ContinuousParams,
    InvalidN,
    ParamBounds,
    TooManyRejections,
    ValidationError,
    ZeroBaseline,
    analyze_sensitivity,
    bounds_from_baseline,
    evaluate_equilibria,
    saltelli_sample,
    sobol_indices,
)
from lvdyn.params import PARAM_NAMES

from conftest import PUBLISHED


def cp_for(key: str) -> ContinuousParams:
    return ContinuousParams(**PUBLISHED[key]["continuous"])


def unit_bounds() -> ParamBounds:
    return ParamBounds(lower=np.zeros(6), upper=np.ones(6))


def indices_for(f, bounds: ParamBounds, n_base=1024, seed=99):
    """Run the estimator on a scalar test function (same output both slots)."""
    design = saltelli_sample(bounds, n_base, seed)
    vals = f(design.matrix)
    outputs = np.column_stack([vals, vals])
    valid = np.ones(len(vals), dtype=bool)
    return sobol_indices(design, outputs, valid)


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------

def test_bounds_from_baseline_arithmetic():
    cp = ContinuousParams(a1=3.8526, b11=-1, b12=-1, a2=1, b21=1, b22=-1)
    bounds = bounds_from_baseline(cp, 0.1)
    assert bounds.lower[0] == pytest.approx(3.46734, abs=1e-9)
    assert bounds.upper[0] == pytest.approx(4.23786, abs=1e-9)


def test_bounds_preserve_sign_for_negatives():
    cp = ContinuousParams(a1=1, b11=-0.000126, b12=-1, a2=1, b21=1, b22=-1)
    bounds = bounds_from_baseline(cp, 0.1)
    assert bounds.lower[1] == pytest.approx(-0.0001386, abs=1e-12)
    assert bounds.upper[1] == pytest.approx(-0.0001134, abs=1e-12)
    assert bounds.upper[1] < 0


@pytest.mark.parametrize("fraction", [0.0, 1.0, -0.1, 1.5])
def test_bounds_reject_bad_fraction(fraction):
    with pytest.raises(ValidationError):
        bounds_from_baseline(cp_for("ai_physical"), fraction)


def test_bounds_reject_zero_baseline():
    cp = ContinuousParams(a1=1, b11=-1, b12=0.0, a2=1, b21=1, b22=-1)
    with pytest.raises(ZeroBaseline):
        bounds_from_baseline(cp, 0.1)


def test_param_bounds_validation():
    with pytest.raises(ValidationError):
        ParamBounds(lower=np.ones(6), upper=np.zeros(6))
    with pytest.raises(ValidationError):
        ParamBounds(lower=np.zeros(5), upper=np.ones(5))


# ---------------------------------------------------------------------------
# Saltelli design
# ---------------------------------------------------------------------------

def test_design_row_counts():
    bounds = unit_bounds()
    assert saltelli_sample(bounds, 64, 1).matrix.shape == (896, 6)
    assert saltelli_sample(bounds, 1024, 1).matrix.shape == (14336, 6)


def test_design_within_bounds():
    cp = cp_for("ai_physical")
    bounds = bounds_from_baseline(cp, 0.1)
    design = saltelli_sample(bounds, 128, 5)
    assert np.all(design.matrix >= bounds.lower)
    assert np.all(design.matrix <= bounds.upper)


def test_design_block_structure():
    design = saltelli_sample(unit_bounds(), 64, 3)
    a, b = design.rows_a(), design.rows_b()
    for i in range(6):
        ab = design.rows_ab(i)
        ba = design.rows_ba(i)
        other = [j for j in range(6) if j != i]
        assert np.array_equal(ab[:, other], a[:, other])
        assert np.array_equal(ab[:, i], b[:, i])
        assert np.array_equal(ba[:, other], b[:, other])
        assert np.array_equal(ba[:, i], a[:, i])


def test_design_deterministic_in_seed():
    one = saltelli_sample(unit_bounds(), 128, 42)
    two = saltelli_sample(unit_bounds(), 128, 42)
    other = saltelli_sample(unit_bounds(), 128, 43)
    assert np.array_equal(one.matrix, two.matrix)
    assert not np.array_equal(one.matrix, other.matrix)


@pytest.mark.parametrize("n", [0, -4, 32, 100, 1000])
def test_design_rejects_bad_n(n):
    with pytest.raises(InvalidN):
        saltelli_sample(unit_bounds(), n, 1)


# ---------------------------------------------------------------------------
# Equilibrium evaluation
# ---------------------------------------------------------------------------

def test_evaluate_baseline_row():
    theta = np.array([cp_for("ai_physical").as_tuple()])
    out, valid = evaluate_equilibria(theta)
    assert valid[0]
    assert out[0, 0] == pytest.approx(198.18, abs=0.5)
    assert out[0, 1] == pytest.approx(51506.42, abs=0.5)


def test_evaluate_singular_denominator_row():
    # b12*b21 == b11*b22 exactly.
    theta = np.array([[1.0, 2.0, -2.0, 1.0, 3.0, -3.0]])
    out, valid = evaluate_equilibria(theta)
    assert not valid[0]
    assert np.all(np.isnan(out[0]))


def test_evaluate_negative_equilibrium_rejected():
    theta = np.array([[-1.0, -1.0, 0.5, -1.0, 0.5, -1.0]])
    out, valid = evaluate_equilibria(theta)
    assert not valid[0]


def test_evaluate_fixture_box_has_no_rejections():
    for key in ("ai_physical", "ai_labor"):
        bounds = bounds_from_baseline(cp_for(key), 0.1)
        design = saltelli_sample(bounds, 256, 7)
        _, valid = evaluate_equilibria(design.matrix)
        assert np.all(valid)


# ---------------------------------------------------------------------------
# Index estimation
# ---------------------------------------------------------------------------

def test_single_variable_function():
    res = indices_for(lambda m: m[:, 0], unit_bounds())
    assert res.first_order[0, 0] == pytest.approx(1.0, abs=0.02)
    for i in range(1, 6):
        assert abs(res.first_order[0, i]) <= 0.02
        assert abs(res.total_order[0, i]) <= 0.02


def test_additive_function_equal_shares():
    res = indices_for(lambda m: m.sum(axis=1), unit_bounds())
    assert res.first_order[0].sum() == pytest.approx(1.0, abs=0.03)
    for i in range(6):
        assert res.first_order[0, i] == pytest.approx(1 / 6, abs=0.03)
        assert res.total_order[0, i] == pytest.approx(1 / 6, abs=0.03)


def test_additive_function_variance_shares():
    # f = x1 + x2 with width-2 and width-1 boxes: shares 4/5 and 1/5.
    lower = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    upper = np.array([2.0, 1.0, 1e-9, 1e-9, 1e-9, 1e-9])
    res = indices_for(lambda m: m[:, 0] + m[:, 1],
                      ParamBounds(lower=lower, upper=upper))
    assert res.first_order[0, 0] == pytest.approx(0.8, abs=0.02)
    assert res.first_order[0, 1] == pytest.approx(0.2, abs=0.02)


def test_ishigami_reference_values():
    # Nonlinear benchmark with known analytic indices; inputs 4..6 are inert.
    a, b = 7.0, 0.1
    bounds = ParamBounds(lower=-np.pi * np.ones(6), upper=np.pi * np.ones(6))

    def ishigami(m):
        return (np.sin(m[:, 0]) + a * np.sin(m[:, 1]) ** 2
                + b * m[:, 2] ** 4 * np.sin(m[:, 0]))

    res = indices_for(ishigami, bounds, n_base=2048, seed=5)
    assert res.first_order[0, 0] == pytest.approx(0.3139, abs=0.03)
    assert res.first_order[0, 1] == pytest.approx(0.4424, abs=0.03)
    assert abs(res.first_order[0, 2]) <= 0.03
    assert res.total_order[0, 0] == pytest.approx(0.5574, abs=0.03)
    assert res.total_order[0, 1] == pytest.approx(0.4424, abs=0.03)
    assert res.total_order[0, 2] == pytest.approx(0.2437, abs=0.03)


@pytest.mark.parametrize("key", ["ai_physical", "ai_labor"])
def test_fixture_indices_match_linearized_shares(key):
    # Over a +/-10% box the equilibrium is near-linear in the parameters, so
    # first-order indices must agree with the gradient-based variance shares
    # g_i^2 * w_i^2 / 3 computed by central differences -- an oracle fully
    # independent of the sampling design.
    cp = cp_for(key)
    theta = np.array(cp.as_tuple())
    res = analyze_sensitivity(cp, 0.1, 1024, seed=1024)
    for oi in (0, 1):
        contrib = np.empty(6)
        for i in range(6):
            h = 1e-7 * abs(theta[i])
            up, dn = theta.copy(), theta.copy()
            up[i] += h
            dn[i] -= h
            grad = (evaluate_equilibria(up[None, :])[0][0, oi]
                    - evaluate_equilibria(dn[None, :])[0][0, oi]) / (2 * h)
            contrib[i] = grad**2 * (0.1 * abs(theta[i])) ** 2 / 3.0
        shares = contrib / contrib.sum()
        assert np.allclose(res.first_order[oi], shares, atol=0.01)


@pytest.mark.parametrize("key", ["ai_physical", "ai_labor"])
def test_fixture_indices_near_additive_and_banded(key):
    res = analyze_sensitivity(cp_for(key), 0.1, 1024, seed=1024)
    for oi in (0, 1):
        assert 0.94 <= res.first_order[oi].sum() <= 1.04
        for i in range(6):
            assert res.total_order[oi, i] >= res.first_order[oi, i] - 0.05
    assert res.rejected_count == 0
    assert res.retained_triples == 1024


def test_result_determinism():
    one = analyze_sensitivity(cp_for("ai_physical"), 0.1, 256, seed=11)
    two = analyze_sensitivity(cp_for("ai_physical"), 0.1, 256, seed=11)
    assert np.array_equal(one.first_order, two.first_order)
    assert np.array_equal(one.total_order, two.total_order)
    assert np.array_equal(one.total_variance, two.total_variance)


def test_clipped_view():
    res = analyze_sensitivity(cp_for("ai_physical"), 0.1, 128, seed=2)
    s1c, stc = res.clipped()
    assert np.all(s1c >= 0) and np.all(s1c <= 1)
    assert np.all(stc >= 0) and np.all(stc <= 1)


def test_too_many_rejections():
    # Positive b11/b22 here force both equilibrium components negative, so
    # every sampled row is rejected.
    bounds = ParamBounds(lower=np.array([0.9, 0.9, -0.1, 0.9, -0.1, 0.9]),
                         upper=np.array([1.1, 1.1, 0.1, 1.1, 0.1, 1.1]))
    design = saltelli_sample(bounds, 64, 1)
    outputs, valid = evaluate_equilibria(design.matrix)
    with pytest.raises(TooManyRejections):
        sobol_indices(design, outputs, valid)


def test_partial_rejection_drops_whole_triples():
    design = saltelli_sample(unit_bounds(), 128, 9)
    vals = design.matrix.sum(axis=1)
    outputs = np.column_stack([vals, vals])
    valid = np.ones(len(vals), dtype=bool)
    block = design.block_size

    # Invalidate the A-row of the first 30 base blocks: those triples drop.
    valid[0:30 * block:block] = False
    res = sobol_indices(design, outputs, valid)
    assert res.retained_triples == 98
    assert res.rejected_count == 30
    assert res.first_order[0].sum() == pytest.approx(1.0, abs=0.05)

    # Invalidating only swapped-into-B rows must not drop any triple.
    valid2 = np.ones(len(vals), dtype=bool)
    valid2[1 + 6::block] = False  # the first B_A-row of every block
    res2 = sobol_indices(design, outputs, valid2)
    assert res2.retained_triples == 128


def test_indices_reject_mismatched_shapes():
    design = saltelli_sample(unit_bounds(), 64, 1)
    with pytest.raises(ValidationError):
        sobol_indices(design, np.zeros((10, 2)), np.ones(10, dtype=bool))


def test_param_names_order_matches_result_columns():
    assert PARAM_NAMES == ("a1", "b11", "b12", "a2", "b21", "b22")
