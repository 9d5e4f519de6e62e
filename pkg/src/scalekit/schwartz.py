"""Finitely supported sequences, weighted norms, and ideal-inequality trials.

Everything here computes on the dense subspace of finite-support functions.
The two norm variants are the weighted absolute sum and the weighted sup;
the sup never exceeds the sum, and both are monotone in the family index.

The pointwise-multiplication ideal inequality ||f*g||_n <= ||f||_n ||g||_inf
is exercised on randomized trials with a recorded seed; the worst observed
ratio per n is reported and must sit at or below 1 up to round-off.

Magnitudes route through log-domain values, so norms stay finite even when
scale weights reach e^(k^k) territory.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from .grammar import DomainError
from .indexsets import IndexSet
from .logvalue import LOG_CMP_TOL, LogValue
from .scales import Scale, ScaleFamily

__all__ = [
    "FinSuppVector",
    "norm_l1",
    "norm_sup",
    "norm_profile",
    "pointwise_mul",
    "convolve",
    "ideal_inequality_check",
    "IdealCheckReport",
    "fourier_seminorm_demo",
    "FourierDemoReport",
    "random_finsupp",
    "read_sparse_vector",
    "write_sparse_vector",
]


@dataclass(eq=False)
class FinSuppVector:
    """A finitely supported complex-valued function; absent entries are 0."""

    entries: Mapping[object, complex]

    def __post_init__(self):
        self.entries = {x: complex(v) for x, v in self.entries.items() if v != 0}

    @staticmethod
    def delta(x, value: complex = 1.0) -> "FinSuppVector":
        return FinSuppVector({x: value})

    @staticmethod
    def from_pairs(pairs: Iterable[Tuple[object, complex]]) -> "FinSuppVector":
        return FinSuppVector(dict(pairs))

    def __getitem__(self, x) -> complex:
        return self.entries.get(x, 0j)

    @property
    def support(self):
        return self.entries.keys()

    def __len__(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def sup_abs(self) -> float:
        """Unweighted sup norm, the ambient c0 norm."""
        return max((abs(v) for v in self.entries.values()), default=0.0)

    def l1_abs(self) -> float:
        return math.fsum(abs(v) for v in self.entries.values())

    def scaled(self, c: complex) -> "FinSuppVector":
        return FinSuppVector({x: c * v for x, v in self.entries.items()})

    def __add__(self, other: "FinSuppVector") -> "FinSuppVector":
        out = dict(self.entries)
        for x, v in other.entries.items():
            out[x] = out.get(x, 0j) + v
        return FinSuppVector(out)


def pointwise_mul(f: FinSuppVector, g: FinSuppVector) -> FinSuppVector:
    """Entrywise product; the support shrinks to the intersection."""
    small, large = (f, g) if len(f) <= len(g) else (g, f)
    return FinSuppVector(
        {x: v * large[x] for x, v in small.entries.items() if x in large.entries}
    )


def convolve(f: FinSuppVector, g: FinSuppVector) -> FinSuppVector:
    """Convolution on nonnegative integer indices, exact on finite supports."""
    out: dict = {}
    for r, fv in f.entries.items():
        for s, gv in g.entries.items():
            out[r + s] = out.get(r + s, 0j) + fv * gv
    return FinSuppVector(out)


def _check_support(phi: FinSuppVector, domain: IndexSet):
    for x in phi.support:
        if x not in domain:
            raise DomainError(f"support point {x!r} outside the evaluated prefix")


def norm_l1(phi: FinSuppVector, family: ScaleFamily, n: int) -> LogValue:
    """Weighted absolute sum: sum over x of sigma_n(x) |phi(x)|."""
    scale = family[n]
    _check_support(phi, scale.domain)
    return LogValue.sum_of(
        scale.eval(x) * LogValue.from_float(abs(v)) for x, v in phi.entries.items()
    )


def norm_sup(phi: FinSuppVector, family: ScaleFamily, n: int) -> LogValue:
    """Weighted sup: max over x of sigma_n(x) |phi(x)|."""
    scale = family[n]
    _check_support(phi, scale.domain)
    best = LogValue.zero()
    for x, v in phi.entries.items():
        cand = scale.eval(x) * LogValue.from_float(abs(v))
        if cand > best:
            best = cand
    return best


def norm_profile(phi: FinSuppVector, family: ScaleFamily, kind: str = "sup") -> list:
    """All member norms of phi; nondecreasing for an increasing family."""
    fn = norm_sup if kind == "sup" else norm_l1
    return [fn(phi, family, n) for n in range(len(family))]


def random_finsupp(
    rng: np.random.Generator,
    domain: IndexSet,
    max_support: int = 20,
) -> FinSuppVector:
    """Support size uniform on 1..max_support, positions uniform on the
    prefix, values standard complex Gaussian."""
    size = int(rng.integers(1, max_support + 1))
    positions = rng.choice(len(domain), size=size, replace=False)
    vals = (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2)
    return FinSuppVector(
        {domain.indices[int(j)]: complex(v) for j, v in zip(positions, vals)}
    )


@dataclass
class IdealCheckReport:
    seed: int
    trials: int
    K: int
    worst_ratio_log: list  # per family index n
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(r <= math.log1p(self.tolerance) for r in self.worst_ratio_log)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "K": self.K,
            "worst_ratio_log": self.worst_ratio_log,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def ideal_inequality_check(
    family: ScaleFamily,
    trials: int = 1000,
    K: Optional[int] = None,
    seed: int = 0,
    tolerance: float = 1e-9,
    max_support: int = 20,
) -> IdealCheckReport:
    """Randomized check of ||f*g||_n <= ||f||_n ||g||_inf (sup norms,
    pointwise products).

    Reports the worst ratio per n over all trials.  The contract is that no
    ratio exceeds 1 beyond the stated tolerance; equality is attained, for
    example, by f = g = a unimodular point mass.
    """
    rng = np.random.default_rng(seed)
    domain = family.domain if K is None else family.domain.prefix(K)
    worst = [-math.inf] * len(family)
    for _ in range(trials):
        f = random_finsupp(rng, domain, max_support)
        g = random_finsupp(rng, domain, max_support)
        fg = pointwise_mul(f, g)
        if fg.is_zero():
            continue
        g_inf = LogValue.from_float(g.sup_abs())
        for n in range(len(family)):
            lhs = norm_sup(fg, family, n)
            rhs = norm_sup(f, family, n) * g_inf
            if lhs.is_zero:
                continue
            ratio = (lhs / rhs).log
            if ratio > worst[n]:
                worst[n] = ratio
    return IdealCheckReport(seed, trials, len(domain), worst, tolerance)


# ----------------------------------------------------------------------
# circle-group demo: transform-side seminorms vs derivative sups
# ----------------------------------------------------------------------

@dataclass
class FourierDemoReport:
    order: int
    grid: int
    lhs: float  # sup over frequencies of |j^i * coeff(j)|
    rhs: float  # grid-sampled sup over the circle of |i-th derivative|
    grid_error_bound: float
    holds: bool

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "grid": self.grid,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "grid_error_bound": self.grid_error_bound,
            "holds": self.holds,
        }


def fourier_seminorm_demo(
    phi_hat: FinSuppVector, order: int, grid: int
) -> FourierDemoReport:
    """Compare sup_j |j^order coeff(j)| against the sampled sup of the
    order-th derivative of the trigonometric polynomial with those
    coefficients.

    The left side is a single Fourier coefficient of the derivative, so it
    is bounded by the true sup; sampling can undershoot the true sup by at
    most (next-derivative l1 bound) * (half the grid spacing), which is the
    reported error bound.
    """
    freqs = [int(j) for j in phi_hat.support]
    max_freq = max((abs(j) for j in freqs), default=0)
    if grid < 4 * max(1, max_freq):
        raise ValueError(f"grid {grid} too coarse for max frequency {max_freq}")
    lhs = max(
        (abs(j) ** order * abs(v) for j, v in phi_hat.entries.items()),
        default=0.0,
    )
    theta = 2.0 * math.pi * np.arange(grid) / grid
    total = np.zeros(grid, dtype=complex)
    for j, v in phi_hat.entries.items():
        total += v * (1j * j) ** order * np.exp(1j * j * theta)
    rhs = float(np.max(np.abs(total)))
    deriv_l1 = math.fsum(abs(j) ** (order + 1) * abs(v) for j, v in phi_hat.entries.items())
    bound = deriv_l1 * math.pi / grid
    holds = lhs <= rhs + bound + 1e-12
    return FourierDemoReport(order, grid, lhs, rhs, bound, holds)


# ----------------------------------------------------------------------
# sparse vector text fixtures: lines of "index value_re value_im"
# ----------------------------------------------------------------------

def write_sparse_vector(phi: FinSuppVector, path) -> None:
    with open(path, "w") as fh:
        for x in sorted(phi.support):
            v = phi[x]
            fh.write(f"{x} {v.real!r} {v.imag!r}\n")


def read_sparse_vector(path) -> FinSuppVector:
    entries = {}
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3:
                raise ValueError(
                    f"{path}:{line_no}: expected 'index value_re value_im'"
                )
            entries[int(parts[0])] = float(parts[1]) + 1j * float(parts[2])
    return FinSuppVector(entries)
