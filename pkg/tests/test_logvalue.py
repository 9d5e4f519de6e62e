import math

import pytest
from hypothesis import given, strategies as st

from scalekit.logvalue import LogValue, log_sum_exp

finite_pos = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


@given(finite_pos, finite_pos)
def test_add_roundtrip(a, b):
    got = (LogValue.from_float(a) + LogValue.from_float(b)).to_float()
    assert abs(got - (a + b)) / (a + b) <= 1e-12


@given(finite_pos, finite_pos)
def test_mul_div_roundtrip(a, b):
    x, y = LogValue.from_float(a), LogValue.from_float(b)
    assert math.isclose((x * y).to_float(), a * b, rel_tol=1e-12)
    assert math.isclose((x / y).to_float(), a / b, rel_tol=1e-12)


@given(finite_pos)
def test_pow_sqrt(a):
    x = LogValue.from_float(a)
    assert math.isclose(x.pow(3).to_float(), a**3, rel_tol=1e-12)
    assert math.isclose(x.sqrt().to_float(), math.sqrt(a), rel_tol=1e-12)


def test_huge_magnitudes_survive():
    x = LogValue.from_log(1e6)
    y = x * x
    assert y.log_mag == 2e6
    assert (y + y).log_mag == pytest.approx(2e6 + math.log(2))
    assert (y / x).log_mag == 1e6


def test_zero_semantics():
    z = LogValue.zero()
    one = LogValue.one()
    assert (z + one).approx_eq(one)
    assert (z * one).is_zero
    assert z.pow(3).is_zero
    assert z.pow(0).approx_eq(one)
    with pytest.raises(ZeroDivisionError):
        one / z
    with pytest.raises(ZeroDivisionError):
        z.pow(-1)


def test_sub():
    a, b = LogValue.from_float(7.0), LogValue.from_float(4.5)
    assert math.isclose(a.sub(b).to_float(), 2.5, rel_tol=1e-12)
    assert a.sub(a).is_zero
    with pytest.raises(ArithmeticError):
        b.sub(a)


def test_from_int_handles_huge_integers():
    n = 10**5000
    assert LogValue.from_int(n).log_mag == pytest.approx(5000 * math.log(10))


def test_comparisons_and_tolerance():
    a = LogValue.from_float(2.0)
    b = LogValue.from_log(math.log(2.0) + 5e-10)
    assert a < b
    assert a.approx_eq(b)
    assert LogValue.zero() < a
    assert a.approx_le(b) and b.approx_le(a)


def test_sum_of_matches_fsum():
    vals = [0.5, 1.25, 3.0, 0.125, 2.0]
    got = LogValue.sum_of(LogValue.from_float(v) for v in vals).to_float()
    assert math.isclose(got, math.fsum(vals), rel_tol=1e-14)
    assert LogValue.sum_of([]).is_zero


def test_log_sum_exp_array():
    import numpy as np

    logs = np.log(np.array([1.0, 2.0, 3.0]))
    assert math.isclose(math.exp(log_sum_exp(logs)), 6.0, rel_tol=1e-14)
    assert log_sum_exp(np.array([-math.inf])) == -math.inf
