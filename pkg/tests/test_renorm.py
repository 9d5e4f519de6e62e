import math

import numpy as np
import pytest

from scalekit import grammar
from scalekit.blocks import DimensionSequence, socle_norm_op
from scalekit.indexsets import IndexSet
from scalekit.logvalue import LogValue
from scalekit.renorm import (
    BlockSocleInstance,
    PairAlgebraInstance,
    PointwiseInstance,
    TrivialMulInstance,
    dagger_norm,
    pair_star_grid_oracle,
    sampled_star_lower_bound,
    star_norm,
    star_plus_norm,
    two_norm,
    two_plus_norm,
    verify_renorm_contract,
)
from scalekit.scales import Scale, ScaleFamily
from scalekit.schwartz import FinSuppVector


def pointwise_instance(K=40, levels=3):
    dom = IndexSet.integers(K)
    fam = ScaleFamily.from_powers(Scale(dom, grammar.parse("k"), "k"), levels)
    return PointwiseInstance(fam)


def block_instance(levels=3):
    dims = DimensionSequence.from_ints([2, 3, 2, 4])
    ell = ScaleFamily.from_powers(
        Scale(dims.domain, grammar.parse("k"), "k"), levels
    )
    return BlockSocleInstance(ell, dims), dims


def pair_instance(K=30, levels=3):
    dom = IndexSet.integers(K)
    return PairAlgebraInstance(Scale(dom, grammar.parse("k"), "k"), levels=levels)


# ----------------------------------------------------------------------
# closed forms per instance
# ----------------------------------------------------------------------

def test_pointwise_star_equals_original():
    inst = pointwise_instance()
    rng = np.random.default_rng(0)
    for _ in range(30):
        a = inst.sample_carrier(rng)
        for n in range(inst.levels):
            assert star_norm(a, inst, n).approx_eq(inst.norm(a, n), 1e-12)
            # commutative, so both one-sided variants agree
            assert dagger_norm(a, inst, n).approx_eq(star_norm(a, inst, n), 1e-12)
            assert two_norm(a, inst, n).approx_eq(star_norm(a, inst, n), 1e-12)


def test_block_multiplier_norms_equal_original():
    inst, dims = block_instance()
    rng = np.random.default_rng(1)
    for _ in range(30):
        a = inst.sample_carrier(rng)
        for n in range(inst.levels):
            orig = socle_norm_op(a, inst.ell, n)
            assert star_norm(a, inst, n).approx_eq(orig, 1e-6)
            assert two_norm(a, inst, n).approx_eq(orig, 1e-6)


def test_trivial_multiplication_kills_star():
    dom = IndexSet.integers(20)
    fam = ScaleFamily.from_powers(Scale(dom, grammar.parse("k"), "k"), 3)
    inst = TrivialMulInstance(fam)
    a = FinSuppVector({3: 2.0, 5: 1j})
    for n in range(3):
        assert star_norm(a, inst, n).is_zero
        assert two_norm(a, inst, n).is_zero
        # the plus-variant falls back to the original norm
        assert star_plus_norm(a, inst, n).approx_eq(inst.norm(a, n), 1e-12)
    assert star_plus_norm(a, inst, 0).approx_eq(inst.banach_norm(a), 1e-12)


def test_pair_star_closed_form_point_mass():
    inst = pair_instance()
    k = 7
    a = FinSuppVector({2 * k: 1.5})
    got = star_norm(a, inst, 1)
    assert got.to_float() == pytest.approx(k**2 * 1.5)


def test_pair_star_matches_grid_oracle():
    inst = pair_instance()
    rng = np.random.default_rng(9)
    for _ in range(10):
        a = inst.sample_carrier(rng)
        for n in (1, 2):
            closed = star_norm(a, inst, n)
            grid = pair_star_grid_oracle(a, inst, n)
            assert grid.approx_le(closed, 1e-6)
            assert closed.log - grid.log <= 1e-5


def test_pair_original_norms_fail_constant_one():
    # the raw family needs a counter-ratio of s(k); the starred family fixes it
    inst = pair_instance()
    k = 9
    d_plus = FinSuppVector({2 * k: 1.0, 2 * k + 1: 1.0})
    d_minus = FinSuppVector({2 * k: 1.0, 2 * k + 1: -1.0})
    prod = inst.mul(d_plus, d_minus)
    lhs = inst.norm(prod, 1)
    rhs = inst.norm(d_plus, 1) * inst.banach_norm(d_minus)
    assert (lhs / rhs).to_float() == pytest.approx(float(k))
    star_rhs = star_norm(d_plus, inst, 1) * inst.banach_norm(d_minus)
    assert lhs.approx_le(star_rhs, 1e-9)


# ----------------------------------------------------------------------
# sampling is a lower bound
# ----------------------------------------------------------------------

@pytest.mark.parametrize("maker", [pointwise_instance, pair_instance])
def test_sampled_sup_below_factorized_sup(maker):
    inst = maker()
    rng = np.random.default_rng(17)
    for _ in range(10):
        a = inst.sample_carrier(rng)
        for n in range(inst.levels):
            lb = sampled_star_lower_bound(a, inst, n, rng, samples=30)
            assert lb.approx_le(star_norm(a, inst, n), 1e-9)


def test_sampled_sup_below_factorized_sup_blocks():
    inst, _dims = block_instance()
    rng = np.random.default_rng(18)
    for _ in range(5):
        a = inst.sample_carrier(rng)
        for n in range(inst.levels):
            lb = sampled_star_lower_bound(a, inst, n, rng, samples=15)
            assert lb.approx_le(star_norm(a, inst, n), 1e-6)


# ----------------------------------------------------------------------
# instance-declared domination of the starred family
# ----------------------------------------------------------------------

def test_star_dominated_by_original_family():
    for inst in (pointwise_instance(levels=3), pair_instance(levels=3)):
        rng = np.random.default_rng(23)
        for _ in range(20):
            a = inst.sample_carrier(rng)
            for n in range(1, inst.levels):
                c_log, m = inst.star_domination(n)
                if m >= inst.levels:
                    continue  # the witness index lies past the built family
                bound = LogValue.from_log(c_log) * inst.norm(a, m)
                assert star_norm(a, inst, n).approx_le(bound, 1e-9)


# ----------------------------------------------------------------------
# the full contract
# ----------------------------------------------------------------------

@pytest.mark.parametrize(
    "maker",
    [
        lambda: pointwise_instance(),
        lambda: pair_instance(),
        lambda: block_instance()[0],
        lambda: TrivialMulInstance(
            ScaleFamily.from_powers(
                Scale(IndexSet.integers(25), grammar.parse("k"), "k"), 3
            )
        ),
    ],
)
def test_renorm_contract_passes(maker):
    inst = maker()
    rep = verify_renorm_contract(inst, trials=150, seed=42)
    assert rep.passed, rep.worst
    assert rep.zeroth_preserved
    assert rep.monotone


def test_contract_report_shape():
    rep = verify_renorm_contract(pointwise_instance(), trials=20, seed=0)
    d = rep.to_dict()
    assert set(d["worst_log_ratios"]) == {
        "star_plus_right",
        "half_star",
        "submultiplicative",
        "two_plus_right",
        "two_plus_left",
    }
    assert d["passed"]
