"""Scales, scale families, and domination checking at finite truncation.

A scale maps an index set into [1, inf); a family is a pointwise
nondecreasing sequence of scales.  Domination (tau <= C * sigma for some
constant) cannot be proved from a finite prefix, so the checks here issue
certificates-at-truncation: the verdict is "dominated-with-constant" when
the ratio tau/sigma shows no growth trend across the tail of the prefix,
and "refuted-by-trend" otherwise, with the running-maximum history
attached either way.  The trend rule compares the largest ratio in the
final quarter against the largest in the quarter before it; a late rise
beyond the stabilization budget refutes, whether or not the early part of
the prefix happened to contain a bigger spike.

The stabilization budget is a log-domain allowance, deliberately larger
than the comparison tolerance: ratios that converge to a finite constant
from below (common for prefix-sum scales) still creep upward by O(1/K) at
truncation K and must not be refuted for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import grammar
from .grammar import Expr, Mul, Num, Pow, Sqrt, num
from .indexsets import Enumeration, IndexSet
from .logvalue import LOG_CMP_TOL, LogValue

__all__ = [
    "Scale",
    "ScaleFamily",
    "DominationReport",
    "PowerDominationReport",
    "EquivalenceReport",
    "InvalidScaleError",
    "STABILIZATION_BUDGET",
    "dominates",
    "power_dominates",
    "equivalent",
    "family_dominates",
    "standard_family",
    "scale_product",
    "scale_power",
    "checkpoint_index",
]

# Log-domain growth allowed for a running maximum over the final quarter of
# a prefix before the verdict flips to refuted-by-trend.
STABILIZATION_BUDGET = 1e-2


class InvalidScaleError(ValueError):
    """An expression evaluated below 1 somewhere on its prefix."""


@dataclass(eq=False)
class Scale:
    """A grammar expression over an index-set prefix, with values >= 1."""

    domain: IndexSet
    expr: Expr
    name: str = ""
    _logs: Optional[np.ndarray] = field(default=None, repr=False)

    def log_values(self, K: Optional[int] = None) -> np.ndarray:
        """Log magnitudes over the prefix (validated against the >= 1 bound)."""
        if self._logs is None:
            logs = self.expr.eval_log_vec(self.domain)
            if np.min(logs) < -LOG_CMP_TOL:
                bad = self.domain.indices[int(np.argmin(logs))]
                raise InvalidScaleError(
                    f"scale {self.name or self.expr!r} evaluates below 1 at {bad!r}"
                )
            self._logs = logs
        if K is None or K >= len(self._logs):
            return self._logs
        return self._logs[:K]

    def eval(self, x) -> LogValue:
        self.domain.position(x)  # raises DomainError when outside the prefix
        v = self.expr.eval(x)
        if v.log < -LOG_CMP_TOL:
            raise InvalidScaleError(
                f"scale {self.name or self.expr!r} evaluates below 1 at {x!r}"
            )
        return v

    def __call__(self, x) -> LogValue:
        return self.eval(x)

    @staticmethod
    def from_table(domain: IndexSet, values, name: str = "") -> "Scale":
        """Tabulated scale; values align with the prefix order."""
        table = {
            x: LogValue.coerce(v) for x, v in zip(domain.indices, values)
        }
        if len(table) != len(domain):
            raise ValueError("need exactly one value per prefix index")
        return Scale(domain, grammar.TableNode(table, label=name or "table"), name)

    @staticmethod
    def constant(domain: IndexSet, value, name: str = "") -> "Scale":
        return Scale(domain, num(value), name or f"const {value}")


@dataclass(eq=False)
class ScaleFamily:
    """A pointwise nondecreasing sequence of scales over a shared prefix.

    sigma0_is_one records the usual convention that member 0 is identically
    1; it is detected automatically when not declared, and declaring it for
    a family that violates it is an error.
    """

    members: tuple
    name: str = ""
    sigma0_is_one: Optional[bool] = None

    def __post_init__(self):
        if not self.members:
            raise ValueError("family needs at least one member")
        dom = self.members[0].domain
        for s in self.members:
            if s.domain is not dom:
                raise ValueError("family members must share one index set")
        prev = self.members[0].log_values()
        for s in self.members[1:]:
            cur = s.log_values()
            if np.min(cur - prev) < -LOG_CMP_TOL:
                raise InvalidScaleError(
                    f"family {self.name!r} is not pointwise nondecreasing"
                )
            prev = cur
        member0_is_one = bool(
            np.max(np.abs(self.members[0].log_values())) <= LOG_CMP_TOL
        )
        if self.sigma0_is_one is None:
            self.sigma0_is_one = member0_is_one
        elif self.sigma0_is_one and not member0_is_one:
            raise InvalidScaleError("member 0 was declared identically 1 but is not")

    @property
    def domain(self) -> IndexSet:
        return self.members[0].domain

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, n: int) -> Scale:
        return self.members[n]

    def __iter__(self):
        return iter(self.members)

    @staticmethod
    def from_powers(base: Scale, count: int, name: str = "") -> "ScaleFamily":
        """The family base**n for n = 0..count-1 (member 0 is constant 1)."""
        members = tuple(
            Scale(base.domain, Pow(base.expr, num(n)), f"{base.name or 'sigma'}^{n}")
            for n in range(count)
        )
        return ScaleFamily(members, name or f"powers of {base.name}", sigma0_is_one=True)

    @staticmethod
    def from_family_expr(expr: Expr, domain: IndexSet, count: int, name: str = "") -> "ScaleFamily":
        """Instantiate an expression with free parameter n at n = 0..count-1."""
        members = tuple(
            Scale(domain, grammar.substitute_family_param(expr, n), f"{name or 'sigma'}_{n}")
            for n in range(count)
        )
        return ScaleFamily(members, name)


# ----------------------------------------------------------------------
# domination
# ----------------------------------------------------------------------

def checkpoint_index(K: int) -> int:
    """1-based position where the final quarter of a prefix begins."""
    return max(1, (3 * K) // 4)


@dataclass
class DominationReport:
    tau_name: str
    sigma_name: str
    K: int
    verdict: str  # 'dominated-with-constant' | 'refuted-by-trend'
    constant: LogValue  # least C on the prefix (max ratio), even when refuted
    trend: np.ndarray  # running maxima of log(tau/sigma)
    checkpoint: int
    tail_increase: float  # final-quarter max minus previous-quarter max (log)

    @property
    def dominated(self) -> bool:
        return self.verdict == "dominated-with-constant"

    def to_dict(self, trend_points: int = 16) -> dict:
        step = max(1, len(self.trend) // trend_points)
        sampled = [float(v) for v in self.trend[::step]]
        if float(self.trend[-1]) != sampled[-1]:
            sampled.append(float(self.trend[-1]))
        return {
            "tau": self.tau_name,
            "sigma": self.sigma_name,
            "K": self.K,
            "verdict": self.verdict,
            "constant_log": self.constant.log,
            "checkpoint": self.checkpoint,
            "tail_increase": self.tail_increase,
            "trend_log": sampled,
        }


def _running_max_verdict(ratio_log: np.ndarray, stab_budget: float):
    """Trend decision: the largest ratio seen in the final quarter must not
    exceed the largest seen in the quarter before it, beyond the budget.

    This subsumes running-max stabilization (a new global record in the
    final quarter beats the previous quarter a fortiori) and additionally
    refutes ratios that are still climbing toward an early peak, the
    signature of slow divergence at truncation.
    """
    running = np.maximum.accumulate(ratio_log)
    K = len(ratio_log)
    q = checkpoint_index(K)
    if q >= K:
        return running, q, 0.0, True
    tail_max = float(np.max(ratio_log[q:]))
    half = max(1, K // 2)
    if q > half:
        baseline = float(np.max(ratio_log[half:q]))
    else:
        baseline = float(running[q - 1])
    increase = tail_max - baseline
    stabilized = increase <= stab_budget
    return running, q, increase, stabilized


def dominates(
    tau: Scale,
    sigma: Scale,
    K: Optional[int] = None,
    stab_budget: float = STABILIZATION_BUDGET,
) -> DominationReport:
    """Certificate-at-truncation for tau <= C * sigma on the shared prefix.

    When dominated, the reported constant satisfies tau(x) <= C * sigma(x)
    at every evaluated index (it is the exact prefix maximum of the ratio).
    """
    if tau.domain is not sigma.domain and tau.domain.indices != sigma.domain.indices:
        raise ValueError("scales live on different index sets")
    ratio = tau.log_values(K) - sigma.log_values(K)
    running, q, increase, stabilized = _running_max_verdict(ratio, stab_budget)
    return DominationReport(
        tau_name=tau.name,
        sigma_name=sigma.name,
        K=len(ratio),
        verdict="dominated-with-constant" if stabilized else "refuted-by-trend",
        constant=LogValue.from_log(float(running[-1])),
        trend=running,
        checkpoint=q,
        tail_increase=increase,
    )


@dataclass
class PowerDominationReport:
    """Search result for the least d with tau <= C * sigma**d on the prefix."""

    tau_name: str
    sigma_name: str
    K: int
    d_max: int
    found: bool
    d: Optional[int]
    constant: Optional[LogValue]
    attempts: list  # (d, verdict, tail_increase, constant_log)

    def to_dict(self) -> dict:
        return {
            "tau": self.tau_name,
            "sigma": self.sigma_name,
            "K": self.K,
            "d_max": self.d_max,
            "found": self.found,
            "d": self.d,
            "constant_log": self.constant.log if self.constant is not None else None,
            "attempts": [
                {"d": d, "verdict": v, "tail_increase": t, "constant_log": c}
                for d, v, t, c in self.attempts
            ],
        }


def power_dominates(
    tau: Scale,
    sigma: Scale,
    d_max: int = 8,
    K: Optional[int] = None,
    stab_budget: float = STABILIZATION_BUDGET,
) -> PowerDominationReport:
    """Least integer d >= 1 with tau <= C * sigma**d stable on the prefix."""
    if tau.domain is not sigma.domain and tau.domain.indices != sigma.domain.indices:
        raise ValueError("scales live on different index sets")
    t = tau.log_values(K)
    s = sigma.log_values(K)
    attempts = []
    for d in range(1, d_max + 1):
        running, q, increase, stabilized = _running_max_verdict(t - d * s, stab_budget)
        verdict = "dominated-with-constant" if stabilized else "refuted-by-trend"
        attempts.append((d, verdict, increase, float(running[-1])))
        if stabilized:
            return PowerDominationReport(
                tau.name, sigma.name, len(t), d_max, True, d,
                LogValue.from_log(float(running[-1])), attempts,
            )
    return PowerDominationReport(
        tau.name, sigma.name, len(t), d_max, False, None, None, attempts
    )


@dataclass
class EquivalenceReport:
    equivalent: bool
    forward: DominationReport  # a <= C_ab * b
    backward: DominationReport  # b <= C_ba * a

    @property
    def constants(self):
        return (self.forward.constant, self.backward.constant)

    def to_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "forward": self.forward.to_dict(),
            "backward": self.backward.to_dict(),
        }


def equivalent(
    a: Scale,
    b: Scale,
    K: Optional[int] = None,
    stab_budget: float = STABILIZATION_BUDGET,
) -> EquivalenceReport:
    """Mutual domination on the prefix, with both witness constants."""
    fwd = dominates(a, b, K, stab_budget)
    bwd = dominates(b, a, K, stab_budget)
    return EquivalenceReport(fwd.dominated and bwd.dominated, fwd, bwd)


def family_dominates(
    sigma: ScaleFamily,
    tau: ScaleFamily,
    K: Optional[int] = None,
    stab_budget: float = STABILIZATION_BUDGET,
) -> list:
    """For each member tau_n, the least m with tau_n dominated by sigma_m.

    Returns one row per n: (n, m or None, DominationReport for the found m,
    or the last refutation when none is found).
    """
    rows = []
    for n, tn in enumerate(tau.members):
        found = None
        last = None
        for m, sm in enumerate(sigma.members):
            rep = dominates(tn, sm, K, stab_budget)
            last = rep
            if rep.dominated:
                found = (m, rep)
                break
        if found is not None:
            rows.append((n, found[0], found[1]))
        else:
            rows.append((n, None, last))
    return rows


# ----------------------------------------------------------------------
# construction helpers
# ----------------------------------------------------------------------

def standard_family(
    gammas: Sequence[Enumeration],
    variant: str = "plain",
    name: str = "",
) -> ScaleFamily:
    """Family of products gamma_1 * ... * gamma_n, n = 0..len(gammas).

    variant 'plain' uses the product itself, 'squared' its square, 'sqrt'
    its square root.  Member 0 is identically 1.
    """
    if variant not in ("plain", "squared", "sqrt"):
        raise ValueError(f"unknown variant {variant!r}")
    if not gammas:
        raise ValueError("need at least one enumeration")
    domain = gammas[0].domain
    for g in gammas:
        if g.domain is not domain and g.domain.indices != domain.indices:
            raise ValueError("enumerations must share one prefix")
    members = [Scale(domain, num(1), "1")]
    prod: Expr = None
    for n, g in enumerate(gammas, start=1):
        node = grammar.EnumNode(g, label=g.name)
        prod = node if prod is None else Mul(prod, node)
        if variant == "plain":
            expr = prod
        elif variant == "squared":
            expr = Pow(prod, num(2))
        else:
            expr = Sqrt(prod)
        members.append(Scale(domain, expr, f"{variant}-standard_{n}"))
    return ScaleFamily(
        tuple(members), name or f"{variant} standard family", sigma0_is_one=True
    )


def scale_product(a: Scale, b: Scale, name: str = "") -> Scale:
    """Pointwise product, formed at grammar level."""
    if a.domain is not b.domain and a.domain.indices != b.domain.indices:
        raise ValueError("scales live on different index sets")
    return Scale(a.domain, Mul(a.expr, b.expr), name or f"{a.name}*{b.name}")


def scale_power(a: Scale, d, name: str = "") -> Scale:
    """Pointwise power with rational exponent d >= 0, at grammar level."""
    frac = d if isinstance(d, Fraction) else Fraction(d)
    if frac < 0:
        raise ValueError("scale powers take nonnegative exponents")
    return Scale(a.domain, Pow(a.expr, Num(frac)), name or f"{a.name}^{d}")
