"""Log-domain arithmetic for nonnegative magnitudes.

Quantities handled by this package routinely reach sizes like e**(8**8),
far beyond IEEE-754 range, so every magnitude is carried as its natural
logarithm together with an exact-zero flag.  Addition goes through
log-sum-exp; multiplication, division, powers and roots act directly on the
stored logarithm and are exact up to float round-off.  Arithmetic stays
finite for stored logarithms up to at least 1e6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

__all__ = ["LogValue", "LOG_CMP_TOL", "log_sum_exp"]

# Tolerance, in log domain, used for approximate comparisons throughout the
# package.  A log-domain difference of t corresponds to a relative error of
# about t in linear domain.
LOG_CMP_TOL = 1e-9

_NumberLike = Union[int, float, Fraction]


@dataclass(frozen=True, slots=True)
class LogValue:
    """A value in [0, inf), stored as an exact-zero flag plus log magnitude."""

    is_zero: bool
    log_mag: float

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @staticmethod
    def zero() -> "LogValue":
        return LogValue(True, 0.0)

    @staticmethod
    def one() -> "LogValue":
        return LogValue(False, 0.0)

    @staticmethod
    def from_float(x: float) -> "LogValue":
        if x < 0:
            raise ValueError(f"LogValue represents nonnegative values, got {x!r}")
        if x == 0:
            return LogValue.zero()
        return LogValue(False, math.log(x))

    @staticmethod
    def from_int(n: int) -> "LogValue":
        """Exact construction from a (possibly huge) Python integer."""
        if n < 0:
            raise ValueError(f"LogValue represents nonnegative values, got {n!r}")
        if n == 0:
            return LogValue.zero()
        # math.log accepts arbitrary-precision ints without overflow
        return LogValue(False, math.log(n))

    @staticmethod
    def from_log(log_mag: float) -> "LogValue":
        if log_mag == -math.inf:
            return LogValue.zero()
        if not math.isfinite(log_mag):
            raise ValueError(f"log magnitude must be finite, got {log_mag!r}")
        return LogValue(False, log_mag)

    @staticmethod
    def coerce(x: "LogValue | int | float | Fraction") -> "LogValue":
        if isinstance(x, LogValue):
            return x
        if isinstance(x, int):
            return LogValue.from_int(x)
        if isinstance(x, Fraction):
            if x < 0:
                raise ValueError("LogValue represents nonnegative values")
            if x == 0:
                return LogValue.zero()
            return LogValue(False, math.log(x.numerator) - math.log(x.denominator))
        return LogValue.from_float(float(x))

    # ------------------------------------------------------------------
    # access
    # ------------------------------------------------------------------
    @property
    def log(self) -> float:
        """Natural log of the value; -inf for exact zero."""
        return -math.inf if self.is_zero else self.log_mag

    def to_float(self) -> float:
        """Linear-domain value; returns inf when the magnitude overflows."""
        if self.is_zero:
            return 0.0
        try:
            return math.exp(self.log_mag)
        except OverflowError:
            return math.inf

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------
    def __add__(self, other: "LogValue") -> "LogValue":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        a, b = self.log_mag, other.log_mag
        if a < b:
            a, b = b, a
        return LogValue(False, a + math.log1p(math.exp(b - a)))

    def sub(self, other: "LogValue") -> "LogValue":
        """Log-domain subtraction; the result must be nonnegative."""
        if other.is_zero:
            return self
        if self.is_zero:
            raise ArithmeticError("subtraction result would be negative")
        d = other.log_mag - self.log_mag
        if d > LOG_CMP_TOL:
            raise ArithmeticError("subtraction result would be negative")
        if d >= 0:
            return LogValue.zero()
        e = math.exp(d)
        if e >= 1.0:
            return LogValue.zero()
        return LogValue(False, self.log_mag + math.log1p(-e))

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.is_zero or other.is_zero:
            return LogValue.zero()
        return LogValue(False, self.log_mag + other.log_mag)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.is_zero:
            raise ZeroDivisionError("LogValue division by zero")
        if self.is_zero:
            return LogValue.zero()
        return LogValue(False, self.log_mag - other.log_mag)

    def pow(self, exponent: _NumberLike) -> "LogValue":
        e = float(exponent)
        if self.is_zero:
            if e > 0:
                return LogValue.zero()
            if e == 0:
                return LogValue.one()
            raise ZeroDivisionError("zero raised to a negative power")
        return LogValue(False, self.log_mag * e)

    def __pow__(self, exponent: _NumberLike) -> "LogValue":
        return self.pow(exponent)

    def sqrt(self) -> "LogValue":
        if self.is_zero:
            return LogValue.zero()
        return LogValue(False, 0.5 * self.log_mag)

    # ------------------------------------------------------------------
    # comparisons (exact; use approx_* at decision points)
    # ------------------------------------------------------------------
    def _key(self) -> float:
        return -math.inf if self.is_zero else self.log_mag

    def __lt__(self, other: "LogValue") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "LogValue") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "LogValue") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "LogValue") -> bool:
        return self._key() >= other._key()

    def approx_le(self, other: "LogValue", tol: float = LOG_CMP_TOL) -> bool:
        """self <= other up to a relative slack of tol (log domain)."""
        if self.is_zero:
            return True
        if other.is_zero:
            return False
        return self.log_mag <= other.log_mag + tol

    def approx_eq(self, other: "LogValue", tol: float = LOG_CMP_TOL) -> bool:
        return self.approx_le(other, tol) and other.approx_le(self, tol)

    # ------------------------------------------------------------------
    # reductions
    # ------------------------------------------------------------------
    @classmethod
    def sum_of(cls, values: Iterable["LogValue"]) -> "LogValue":
        """Log-sum-exp over an iterable, stable under huge magnitudes."""
        logs = [v.log_mag for v in values if not v.is_zero]
        if not logs:
            return cls.zero()
        m = max(logs)
        acc = math.fsum(math.exp(x - m) for x in logs)
        return cls(False, m + math.log(acc))

    def __repr__(self) -> str:
        if self.is_zero:
            return "LogValue(0)"
        if abs(self.log_mag) < 500:
            return f"LogValue({math.exp(self.log_mag):.12g})"
        return f"LogValue(exp({self.log_mag:.12g}))"


def log_sum_exp(logs) -> float:
    """Stable log-sum-exp of an array of log magnitudes (-inf allowed)."""
    import numpy as np

    arr = np.asarray(logs, dtype=float)
    if arr.size == 0:
        return -math.inf
    m = float(np.max(arr))
    if m == -math.inf:
        return -math.inf
    return m + math.log(float(np.sum(np.exp(arr - m))))
