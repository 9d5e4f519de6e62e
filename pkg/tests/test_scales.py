import math
from fractions import Fraction

import numpy as np
import pytest

from scalekit import grammar
from scalekit.grammar import DomainError
from scalekit.indexsets import Enumeration, IndexSet
from scalekit.logvalue import LogValue
from scalekit.scales import (
    InvalidScaleError,
    Scale,
    ScaleFamily,
    dominates,
    equivalent,
    family_dominates,
    power_dominates,
    scale_power,
    scale_product,
    standard_family,
)


def K_dom(K):
    return IndexSet.integers(K)


def k_scale(dom, text, name=""):
    return Scale(dom, grammar.parse(text), name or text)


# ----------------------------------------------------------------------
# evaluation
# ----------------------------------------------------------------------

def test_identity_enumeration_scale_evaluates_to_index():
    dom = K_dom(10)
    gamma = Enumeration.identity(dom).as_scale()
    assert gamma.eval(5).to_float() == pytest.approx(5.0)


def test_tower_scale_log_magnitude():
    dom = K_dom(8)
    s = k_scale(dom, "exp(k^k)")
    assert s.eval(4).log == pytest.approx(256.0, rel=1e-12)


def test_dyadic_table_scale():
    points = [Fraction(0), Fraction(1, 2), Fraction(1, 4), Fraction(3, 4), Fraction(3, 8)]
    dom = IndexSet.from_indices(points)
    sigma = Scale.from_table(dom, [1, 2, 4, 4, 8], "sigma")
    assert sigma.eval(Fraction(3, 8)).to_float() == pytest.approx(8.0)


def test_out_of_prefix_and_invalid_scale_errors():
    dom = K_dom(5)
    s = k_scale(dom, "k")
    with pytest.raises(DomainError):
        s.eval(6)
    with pytest.raises(InvalidScaleError):
        Scale(dom, grammar.parse("1/k"), "bad").log_values()


# ----------------------------------------------------------------------
# domination
# ----------------------------------------------------------------------

def test_k_dominated_by_k_squared_with_constant_one():
    dom = K_dom(1000)
    rep = dominates(k_scale(dom, "k"), k_scale(dom, "k^2"))
    assert rep.dominated
    assert rep.constant.to_float() == pytest.approx(1.0)


def test_dominated_constant_bounds_everywhere():
    # the reported constant is the exact prefix max, checked exhaustively
    dom = K_dom(500)
    tau = k_scale(dom, "k + 3")
    sigma = k_scale(dom, "k")
    rep = dominates(tau, sigma)
    assert rep.dominated
    c = rep.constant
    for x in dom.indices:
        assert tau.eval(x).approx_le(c * sigma.eval(x), 1e-9)
    assert c.to_float() == pytest.approx(4.0)  # attained at k = 1


def test_growing_ratio_refuted_by_trend():
    dom = K_dom(100)
    rep = dominates(k_scale(dom, "exp(k)"), k_scale(dom, "k"))
    assert rep.verdict == "refuted-by-trend"
    assert rep.tail_increase > 1.0


def test_dominates_reflexive_and_transitive():
    dom = K_dom(300)
    a, b, c = k_scale(dom, "k"), k_scale(dom, "k^2"), k_scale(dom, "k^3 + k")
    assert dominates(a, a).constant.to_float() == pytest.approx(1.0)
    r_ab, r_bc = dominates(a, b), dominates(b, c)
    assert r_ab.dominated and r_bc.dominated
    r_ac = dominates(a, c)
    assert r_ac.dominated
    composite = r_ab.constant * r_bc.constant
    assert r_ac.constant.approx_le(composite, 1e-9)


def test_equivalence_reflexive_with_unit_constants():
    dom = K_dom(200)
    s = k_scale(dom, "k^2")
    rep = equivalent(s, s)
    assert rep.equivalent
    assert rep.constants[0].to_float() == pytest.approx(1.0)
    assert rep.constants[1].to_float() == pytest.approx(1.0)


def test_k_and_exp_k_not_equivalent():
    dom = K_dom(100)
    rep = equivalent(k_scale(dom, "k"), k_scale(dom, "exp(k)"))
    assert not rep.equivalent
    assert rep.forward.dominated  # k below e^k
    assert not rep.backward.dominated


def test_equivalence_is_transitive_on_clean_scales():
    dom = K_dom(400)
    a = k_scale(dom, "k")
    b = k_scale(dom, "2 * k")
    c = k_scale(dom, "3 * k + 1")
    ab, bc, ac = equivalent(a, b), equivalent(b, c), equivalent(a, c)
    assert ab.equivalent and bc.equivalent and ac.equivalent


def test_power_domination_search():
    dom = K_dom(2000)
    gamma = Enumeration.identity(dom).as_scale()
    rep = power_dominates(gamma, k_scale(dom, "sqrt(k)"))
    assert rep.found and rep.d == 2
    assert rep.constant.to_float() == pytest.approx(1.0)


# ----------------------------------------------------------------------
# families
# ----------------------------------------------------------------------

def test_family_must_be_nondecreasing():
    dom = K_dom(50)
    up = ScaleFamily.from_powers(k_scale(dom, "k"), 4)
    assert up.sigma0_is_one
    with pytest.raises(InvalidScaleError):
        ScaleFamily((k_scale(dom, "k^2"), k_scale(dom, "k")))


def test_family_dominates_same_powers():
    dom = K_dom(500)
    fam = ScaleFamily.from_powers(k_scale(dom, "k"), 5)
    rows = family_dominates(fam, fam)
    for n, m, rep in rows:
        assert m == n
        assert rep.constant.to_float() == pytest.approx(1.0)


def test_family_dominates_sandwiched_family():
    # ell_n <= beta_n <= ell_(n+1) pointwise forces mutual domination
    dom = K_dom(800)
    ell = ScaleFamily.from_powers(k_scale(dom, "k"), 4)
    beta_members = []
    for n in range(4):
        vals = [LogValue.from_float(k**n * (2.0 - 1.0 / k)) for k in dom.indices]
        beta_members.append(Scale.from_table(dom, vals, f"beta_{n}"))
    beta = ScaleFamily(tuple(beta_members), "beta")
    fwd = family_dominates(ell, beta)
    bwd = family_dominates(beta, ell)
    assert all(m is not None for _n, m, _r in fwd)
    assert all(m is not None for _n, m, _r in bwd)


def test_family_dominates_constant_members_find_m_zero():
    dom = K_dom(300)
    tau = ScaleFamily(tuple(k_scale(dom, "1 + k", f"t{n}") for n in range(3)), "tau")
    sigma = ScaleFamily(tuple(k_scale(dom, "exp(k)", f"s{n}") for n in range(3)), "sigma")
    rows = family_dominates(sigma, tau)
    assert all(m == 0 for _n, m, _r in rows)


# ----------------------------------------------------------------------
# standard families and grammar-level products
# ----------------------------------------------------------------------

def test_standard_family_values():
    dom = K_dom(10)
    gammas = [Enumeration.identity(dom) for _ in range(3)]
    plain = standard_family(gammas, "plain")
    assert plain[0].eval(7).to_float() == pytest.approx(1.0)
    assert plain[3].eval(2).to_float() == pytest.approx(8.0)  # 2*2*2
    squared = standard_family(gammas, "squared")
    assert squared[2].eval(3).to_float() == pytest.approx(81.0)  # (3*3)^2
    root = standard_family(gammas, "sqrt")
    assert root[2].eval(4).to_float() == pytest.approx(4.0)  # sqrt(4*4)


def test_standard_family_squared_is_plain_squared_pointwise():
    dom = K_dom(64)
    gammas = [Enumeration.identity(dom) for _ in range(4)]
    plain = standard_family(gammas, "plain")
    squared = standard_family(gammas, "squared")
    for n in range(len(plain)):
        diff = np.abs(2.0 * plain[n].log_values() - squared[n].log_values())
        assert np.max(diff) <= 1e-12


def test_scale_product_and_power():
    dom = K_dom(20)
    theta = Enumeration.identity(dom).as_scale()
    two = Scale.constant(dom, 2)
    assert scale_product(theta, two).eval(5).to_float() == pytest.approx(10.0)
    assert scale_power(k_scale(dom, "k"), Fraction(1, 2)).eval(9).to_float() == pytest.approx(3.0)
    tab = Scale.from_table(IndexSet.integers(3), [1, 2, 3], "p")
    ident = Enumeration.identity(IndexSet.integers(3)).as_scale()
    with pytest.raises(ValueError):
        scale_product(theta, tab)  # different index sets
    prod = scale_product(ident, tab)
    assert prod.eval(3).to_float() == pytest.approx(9.0)
    with pytest.raises(ValueError):
        scale_power(theta, -1)


def test_enumeration_bijection_invariants():
    dom = K_dom(8)
    g = Enumeration.from_order(dom, [3, 1, 4, 2, 8, 7, 5, 6])
    for x in dom.indices:
        assert g.inv(g(x)) == x
    for r in range(1, 9):
        assert g(g.inv(r)) == r
    with pytest.raises(ValueError):
        Enumeration(dom, {x: 1 for x in dom.indices})


# ----------------------------------------------------------------------
# sparse prefixes
# ----------------------------------------------------------------------

def test_sparse_refutation_with_astronomical_indices():
    # identity vs a nearly-in-order enumeration, evaluated sparsely out to
    # ceil(e^27); the identity is not dominated
    from scalekit.counterexamples import ceil_exp

    s3 = ceil_exp(27)
    points = [1, 2, 3, 4, 54, 55, 56, s3 - 1, s3, s3 + 1]
    dom = IndexSet.from_indices(points)
    gamma2_vals = {1: 1, 2: 3, 3: 2, 4: 5, 54: 55, 55: 4, 56: 57,
                   s3 - 1: s3, s3: 56, s3 + 1: s3 + 2}
    gamma2 = Scale.from_table(
        dom, [LogValue.from_int(gamma2_vals[k]) for k in points], "gamma2"
    )
    gamma1 = Scale(dom, grammar.Var(), "gamma1")
    plus_one = Scale(dom, grammar.parse("k + 1"), "gamma1+1")
    fwd = dominates(gamma2, plus_one)
    assert fwd.dominated and fwd.constant.to_float() == pytest.approx(1.0)
    assert dominates(gamma1, gamma2).verdict == "refuted-by-trend"
