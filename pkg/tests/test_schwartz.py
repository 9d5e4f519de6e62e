import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scalekit import grammar
from scalekit.grammar import DomainError
from scalekit.indexsets import IndexSet
from scalekit.scales import Scale, ScaleFamily
from scalekit.schwartz import (
    FinSuppVector,
    convolve,
    fourier_seminorm_demo,
    ideal_inequality_check,
    norm_l1,
    norm_profile,
    norm_sup,
    pointwise_mul,
    read_sparse_vector,
    write_sparse_vector,
)


def power_family(K, count):
    dom = IndexSet.integers(K)
    return ScaleFamily.from_powers(Scale(dom, grammar.parse("k"), "k"), count)


# ----------------------------------------------------------------------
# norms
# ----------------------------------------------------------------------

def test_point_mass_norm_is_the_weight():
    fam = power_family(10, 4)
    phi = FinSuppVector.delta(3)
    assert norm_l1(phi, fam, 2).to_float() == pytest.approx(9.0)
    assert norm_sup(phi, fam, 2).to_float() == pytest.approx(9.0)


def test_zero_vector_has_zero_norm():
    fam = power_family(10, 3)
    zero = FinSuppVector({})
    assert norm_l1(zero, fam, 2).is_zero
    assert norm_sup(zero, fam, 2).is_zero


def test_three_ones_sum_and_sup():
    dom = IndexSet.integers(10)
    fam = ScaleFamily.from_powers(Scale(dom, grammar.parse("k^2"), "k^2"), 2)
    phi = FinSuppVector({1: 1.0, 2: 1.0, 3: 1.0})
    assert norm_l1(phi, fam, 1).to_float() == pytest.approx(14.0)  # 1 + 4 + 9
    assert norm_sup(phi, fam, 1).to_float() == pytest.approx(9.0)


def test_support_outside_prefix_rejected():
    fam = power_family(5, 2)
    with pytest.raises(DomainError):
        norm_l1(FinSuppVector.delta(6), fam, 1)


complex_entries = st.dictionaries(
    st.integers(min_value=1, max_value=40),
    st.tuples(
        st.floats(-5, 5, allow_nan=False), st.floats(-5, 5, allow_nan=False)
    ).map(lambda t: complex(*t)),
    min_size=0,
    max_size=10,
)


@given(complex_entries)
@settings(max_examples=60, deadline=None)
def test_sup_never_exceeds_l1(entries):
    fam = power_family(40, 3)
    phi = FinSuppVector(entries)
    for n in range(3):
        assert norm_sup(phi, fam, n).approx_le(norm_l1(phi, fam, n), 1e-12)


@given(complex_entries)
@settings(max_examples=60, deadline=None)
def test_basis_expansion_identity(entries):
    # summing |phi(x)| times the point-mass norm reproduces the full norm
    fam = power_family(40, 3)
    phi = FinSuppVector(entries)
    for n in range(3):
        from scalekit.logvalue import LogValue

        lhs = LogValue.sum_of(
            LogValue.from_float(abs(v)) * norm_l1(FinSuppVector.delta(x), fam, n)
            for x, v in phi.entries.items()
        )
        rhs = norm_l1(phi, fam, n)
        if rhs.is_zero:
            assert lhs.is_zero
        else:
            assert lhs.approx_eq(rhs, 1e-12)


def test_norm_profile_monotone():
    fam = power_family(30, 5)
    rng = np.random.default_rng(3)
    for _ in range(20):
        from scalekit.schwartz import random_finsupp

        phi = random_finsupp(rng, fam.domain)
        prof = norm_profile(phi, fam)
        for a, b in zip(prof, prof[1:]):
            assert a.approx_le(b, 1e-12)


# ----------------------------------------------------------------------
# products
# ----------------------------------------------------------------------

def test_pointwise_mul_intersects_supports():
    f = FinSuppVector({1: 1.0, 2: 2.0})
    g = FinSuppVector({1: 3.0, 3: 1.0})
    fg = pointwise_mul(f, g)
    assert fg.entries == {1: 3.0 + 0j}
    assert pointwise_mul(f, FinSuppVector({})).is_zero()
    d = FinSuppVector.delta(2)
    assert pointwise_mul(f, d).entries == {2: 2.0 + 0j}


def test_convolution_on_supports():
    d1 = FinSuppVector.delta(1)
    assert convolve(d1, d1).entries == {2: 1.0 + 0j}
    f = FinSuppVector({0: 1.0, 1: 1.0})
    ff = convolve(f, f)
    assert ff.entries == {0: 1.0 + 0j, 1: 2.0 + 0j, 2: 1.0 + 0j}


# ----------------------------------------------------------------------
# the multiplier inequality
# ----------------------------------------------------------------------

def test_ideal_inequality_randomized():
    fam = power_family(50, 3)
    rep = ideal_inequality_check(fam, trials=300, seed=12345)
    assert rep.passed
    for r in rep.worst_ratio_log:
        assert r <= math.log1p(1e-9)


def test_ideal_inequality_equality_witness():
    # f = g = a unimodular point mass attains ratio exactly 1
    fam = power_family(50, 3)
    f = FinSuppVector.delta(7, cmath.exp(0.3j))
    fg = pointwise_mul(f, f)
    from scalekit.logvalue import LogValue

    for n in range(3):
        lhs = norm_sup(fg, fam, n)
        rhs = norm_sup(f, fam, n) * LogValue.from_float(f.sup_abs())
        assert lhs.approx_eq(rhs, 1e-12)


def test_l1_variant_of_the_inequality():
    fam = power_family(40, 3)
    rng = np.random.default_rng(77)
    from scalekit.logvalue import LogValue
    from scalekit.schwartz import random_finsupp

    for _ in range(200):
        f, g = random_finsupp(rng, fam.domain), random_finsupp(rng, fam.domain)
        fg = pointwise_mul(f, g)
        for n in range(3):
            lhs = norm_l1(fg, fam, n)
            rhs = norm_l1(f, fam, n) * LogValue.from_float(g.sup_abs())
            if not lhs.is_zero:
                assert lhs.approx_le(rhs, 1e-9)


# ----------------------------------------------------------------------
# circle-group demo
# ----------------------------------------------------------------------

def test_pure_tone():
    rep = fourier_seminorm_demo(FinSuppVector.delta(1), order=1, grid=16)
    assert rep.lhs == pytest.approx(1.0)
    assert rep.rhs == pytest.approx(1.0, abs=1e-12)
    assert rep.holds


def test_constant_function_has_zero_seminorm():
    rep = fourier_seminorm_demo(FinSuppVector.delta(0), order=3, grid=8)
    assert rep.lhs == 0.0
    assert rep.holds


def test_two_tone_second_derivative():
    phi_hat = FinSuppVector({1: 1.0, 2: 1.0})
    rep = fourier_seminorm_demo(phi_hat, order=2, grid=64)
    assert rep.lhs == pytest.approx(4.0)
    # |(-1) e^(i t) + (-4) e^(2 i t)| peaks at 5 (t = pi, by alignment)
    assert rep.rhs == pytest.approx(5.0, abs=1e-3)
    assert rep.holds


def test_fine_grid_oracle_agrees():
    rng = np.random.default_rng(5)
    phi_hat = FinSuppVector(
        {int(j): complex(a, b) for j, a, b in zip(rng.integers(-6, 7, 5),
                                                  rng.standard_normal(5),
                                                  rng.standard_normal(5))}
    )
    coarse = fourier_seminorm_demo(phi_hat, order=2, grid=64)
    fine = fourier_seminorm_demo(phi_hat, order=2, grid=8192)
    assert coarse.holds and fine.holds
    assert coarse.rhs <= fine.rhs + 1e-12
    assert abs(fine.rhs - coarse.rhs) <= coarse.grid_error_bound + 1e-12


def test_grid_too_coarse_rejected():
    with pytest.raises(ValueError):
        fourier_seminorm_demo(FinSuppVector.delta(5), order=1, grid=10)


# ----------------------------------------------------------------------
# fixtures
# ----------------------------------------------------------------------

def test_sparse_vector_roundtrip(tmp_path):
    phi = FinSuppVector({3: 1.5 - 2j, 1: 0.25, 10: 1j})
    path = tmp_path / "vec.txt"
    write_sparse_vector(phi, path)
    back = read_sparse_vector(path)
    assert back.entries == phi.entries
    with pytest.raises(ValueError):
        bad = tmp_path / "bad.txt"
        bad.write_text("1 2\n")
        read_sparse_vector(bad)
