import math
from fractions import Fraction

import numpy as np
import pytest

from scalekit import grammar
from scalekit.blocks import BlockElement, DimensionSequence, cstar_norm, ones_column
from scalekit.counterexamples import (
    CantorReport,
    cantor_domain,
    cantor_scale_report,
    ceil_exp,
    enumeration_reordering,
    pair_algebra_report,
    power_series_embedding_report,
    power_sum_log,
    rapid_decay_escape,
    socle_ideal_blowup,
    theta_chi,
)
from scalekit.indexsets import IndexSet
from scalekit.logvalue import LogValue
from scalekit.scales import Scale, ScaleFamily
from scalekit.schwartz import FinSuppVector, convolve, norm_l1, pointwise_mul


# ----------------------------------------------------------------------
# power sums
# ----------------------------------------------------------------------

def test_faulhaber_matches_brute_force():
    for n in range(0, 9):
        for P in (1, 2, 3, 10, 57, 200):
            exact = sum(i**n for i in range(1, P + 1))
            got, method = power_sum_log(LogValue.from_int(P), n)
            assert method == "faulhaber"
            assert got.log == pytest.approx(math.log(exact), abs=1e-11)


def test_power_sum_falls_back_to_bound():
    got, method = power_sum_log(LogValue.from_log(100.0), 9)
    assert method == "bounded"
    assert got.log == pytest.approx(900.0)


# ----------------------------------------------------------------------
# the blow-up report
# ----------------------------------------------------------------------

def test_blowup_closed_forms_match_literal_norms():
    # oracle: build the actual elements and take the entrywise weighted sum
    # over the triple index set, with the explicit beta weight
    values = (2, 3, 5)
    dims = DimensionSequence.from_ints(values)
    triples = []
    beta_vals = []
    s_entries = {}
    t_entries = {}
    p_prev = {1: 1, 2: values[0], 3: values[1]}  # p_0 = 1
    for k in (1, 2, 3):
        p = values[k - 1]
        for i in range(1, p + 1):
            for j in range(1, p + 1):
                triples.append((k, i, j))
                beta_vals.append(i * k * p_prev[k] + (j - 1) * p)
                if j == 1:
                    s_entries[(k, i, j)] = 1.0 / math.sqrt(p)
        t_entries[(k, 1, 1)] = 1.0
    dom = IndexSet.from_indices(triples)
    beta = Scale.from_table(dom, [LogValue.from_int(b) for b in beta_vals], "beta")
    fam = ScaleFamily.from_powers(beta, 3)
    S = FinSuppVector(s_entries)
    T = FinSuppVector(t_entries)
    rep = socle_ideal_blowup(dims, n=1, m=2, K_max=3)
    K3 = rep.rows[-1]
    assert K3[1] == pytest.approx(norm_l1(S, fam, 1).log, abs=1e-9)
    assert K3[2] == pytest.approx(norm_l1(T, fam, 2).log, abs=1e-9)


def test_blowup_normalized_stack_norm_is_one():
    values = (2, 3, 5, 8)
    dims = DimensionSequence.from_ints(values)
    blocks = {
        z: ones_column(dims, z).block(z) / math.sqrt(dims.dim(z))
        for z in dims.domain.indices
    }
    assert cstar_norm(BlockElement(dims, blocks)).to_float() == pytest.approx(1.0)


def test_blowup_reproduced_for_tower_dims():
    dims = DimensionSequence.from_expr(grammar.parse("exp(k^k)"), 8)
    rep = socle_ideal_blowup(dims, n=1, m=2, K_max=8)
    assert rep.blowup_reproduced
    assert not rep.growth_holds
    for K, _s, _t, ratio_log, bound_log in rep.rows:
        assert ratio_log >= bound_log - 1e-9
    ratio_logs = [r[3] for r in rep.rows]
    assert all(b > a for a, b in zip(ratio_logs, ratio_logs[1:]))


def test_blowup_warning_path_for_polynomial_dims():
    dims = DimensionSequence.from_ints(list(range(1, 61)))
    rep = socle_ideal_blowup(dims, n=1, m=2, K_max=60)
    assert rep.growth_holds
    assert not rep.blowup_reproduced
    ratio_logs = [r[3] for r in rep.rows]
    assert ratio_logs[-1] < ratio_logs[0] + 5.0  # bounded trend, no blow-up


def test_blowup_requires_m_above_n():
    dims = DimensionSequence.from_ints([2, 3])
    with pytest.raises(ValueError):
        socle_ideal_blowup(dims, n=2, m=2)


# ----------------------------------------------------------------------
# paired algebra
# ----------------------------------------------------------------------

def test_pair_closed_forms_exact():
    sigma = Scale(IndexSet.integers(1000), grammar.parse("k"), "k")
    rep = pair_algebra_report(sigma)
    assert rep.exact_identities
    assert rep.not_an_ideal
    k, de, dp, dm, fr = rep.rows[4]  # k = 5
    assert math.exp(de) == pytest.approx(25.0)
    assert math.exp(dp) == pytest.approx(10.0)
    assert math.exp(dm) == pytest.approx(50.0)
    assert math.exp(fr) == pytest.approx(5.0)


def test_pair_report_rejects_flat_scale():
    sigma = Scale.constant(IndexSet.integers(100), 2)
    with pytest.raises(ValueError):
        pair_algebra_report(sigma)


# ----------------------------------------------------------------------
# power-series substitution
# ----------------------------------------------------------------------

def chi_standard(domain):
    return FinSuppVector({k: 1.0 / (1.0 + k) for k in domain.indices})


def test_theta_of_delta_one_is_chi():
    dom = IndexSet.integers(50)
    chi = chi_standard(dom)
    out = theta_chi(FinSuppVector.delta(1), chi, dom)
    for x in dom.indices:
        assert out[x] == pytest.approx(chi[x])


def test_theta_respects_convolution_of_point_masses():
    dom = IndexSet.integers(50)
    chi = chi_standard(dom)
    d1 = FinSuppVector.delta(1)
    lhs = theta_chi(convolve(d1, d1), chi, dom)
    rhs = pointwise_mul(theta_chi(d1, chi, dom), theta_chi(d1, chi, dom))
    for x in dom.indices:
        assert lhs[x] == pytest.approx(rhs[x], abs=1e-15)
        assert lhs[x] == pytest.approx(chi[x].real ** 2)


def test_theta_requires_vanishing_at_zero_and_chi_in_unit_interval():
    dom = IndexSet.integers(10)
    with pytest.raises(ValueError):
        theta_chi(FinSuppVector({0: 1.0}), chi_standard(dom), dom)
    bad_chi = FinSuppVector({k: 1.5 for k in dom.indices})
    with pytest.raises(ValueError):
        theta_chi(FinSuppVector.delta(1), bad_chi, dom)


def test_embedding_report_randomized():
    rep = power_series_embedding_report(X_size=200, trials=200, seed=3)
    assert rep.passed
    assert rep.worst_homomorphism_defect <= 1e-12


# ----------------------------------------------------------------------
# escape from rapid decay
# ----------------------------------------------------------------------

def escape_setup(K=500, levels=4):
    dom = IndexSet.integers(K)
    fam = ScaleFamily.from_family_expr(
        grammar.parse("pow(1+k, n)"), dom, levels, "(1+k)^n"
    )
    chi = FinSuppVector({k: 1.0 / (1.0 + k) for k in dom.indices})
    return dom, fam, chi


def test_escape_for_delta_one():
    _dom, fam, chi = escape_setup()
    rep = rapid_decay_escape(FinSuppVector.delta(1), chi, fam, d=2)
    assert rep.escapes and rep.p == 1
    assert rep.exceptional == [1]


def test_escape_for_delta_two_at_higher_weight():
    _dom, fam, chi = escape_setup()
    rep = rapid_decay_escape(FinSuppVector.delta(2), chi, fam, d=3)
    assert rep.escapes and rep.p == 2


def test_escape_exceptional_set_for_signed_series():
    _dom, fam, chi = escape_setup()
    f = FinSuppVector({1: 1.0, 2: -1.0})
    rep = rapid_decay_escape(f, chi, fam, d=2)
    # chi(x) * 2 >= 1/2 exactly when k <= 3
    assert rep.exceptional == [1, 2, 3]
    assert rep.chain_holds and rep.escapes


def test_escape_rejects_bounded_hypothesis():
    _dom, fam, chi = escape_setup()
    with pytest.raises(ValueError):
        rapid_decay_escape(FinSuppVector.delta(1), chi, fam, d=1)


# ----------------------------------------------------------------------
# sparse enumeration reordering
# ----------------------------------------------------------------------

def test_exact_ceilings():
    assert ceil_exp(0) == 1
    assert ceil_exp(1) == 3
    assert ceil_exp(4) == 55
    assert ceil_exp(27) == 532048240602
    # the next one has 112 digits; spot-check the leading digits
    assert str(ceil_exp(256)).startswith("15114276650041")


def test_reordering_worked_values():
    rep = enumeration_reordering(i_max=3, d_max=6)
    values = {s: g for _i, s, g in rep.special}
    assert values[3] == 2
    assert values[55] == 4
    assert values[ceil_exp(27)] == 56
    assert rep.comparison_ok and rep.injective


def test_reordering_refutes_every_power():
    rep = enumeration_reordering(i_max=5, d_max=8)
    assert rep.reproduced
    assert len(rep.power_refutations) == 8
    assert all(v == "refuted-by-trend" for _d, v in rep.power_refutations)
    # the ratio at the special points outruns any fixed power
    logs = [r for _i, r in rep.special_ratios]
    assert all(b > a for a, b in zip(logs, logs[1:]))


def test_reordering_missing_special_point_rejected():
    with pytest.raises(ValueError):
        enumeration_reordering(i_max=2, index_list=[1, 2, 3, 4])


# ----------------------------------------------------------------------
# dyadic rationals
# ----------------------------------------------------------------------

def test_cantor_enumeration_first_values():
    rep = cantor_scale_report(p_max=3)
    dom = cantor_domain(3)
    gamma = {x: 1 if x == 0 else None for x in dom.indices}
    # recompute the closed form straight from the definition
    from scalekit.counterexamples import _dyadic_level

    for x in dom.indices:
        p, l = _dyadic_level(x)
        gamma[x] = 1 if p == 0 else 2 ** (p - 1) + (l // 2) + 1
    assert gamma[Fraction(0)] == 1
    assert gamma[Fraction(1, 2)] == 2
    assert gamma[Fraction(1, 4)] == 3
    assert gamma[Fraction(3, 4)] == 4
    assert rep.bijective


def test_cantor_full_report():
    rep = cantor_scale_report(p_max=10)
    assert rep.count == 1024
    assert rep.standard
    assert rep.gamma_le_sigma and rep.sigma_le_two_gamma
    c_fwd, c_bwd = rep.equivalence_constants
    assert c_fwd <= 1.0 + 1e-9
    assert c_bwd <= 2.0 + 1e-9
    for row in rep.summability_rows:
        assert row.verdict == "certified"
        assert row.m == row.n + 2
    assert rep.inverse_square_sum == pytest.approx(rep.inverse_square_sum_expected, abs=1e-12)


def test_cantor_rejects_out_of_range_levels():
    with pytest.raises(ValueError):
        cantor_domain(0)
    with pytest.raises(ValueError):
        cantor_domain(21)
