"""Summability tests for scale families, with honest tail certificates.

The central question: given an increasing family sigma_0 <= sigma_1 <= ...,
does every n admit an m with sum_x sigma_n(x)/sigma_m(x) finite?  A finite
prefix can only bound the partial sum, so a row is marked

* ``certified`` when a symbolic tail bound exists (the ratio expression
  factors into enumeration-backed decay with total exponent at least 2, the
  route every convergence argument here ultimately takes through
  sum 1/k^2 = pi^2/6, or is a pure monomial C/k^p with p > 1),
* ``prefix-bounded`` when the terms visibly decay but no certificate of the
  above shape exists,
* ``refuted-trend`` when the largest term still appears in the final quarter
  of the prefix, so no decay is in evidence.

Tail bounds are conservative: for decay exponent p over factors that are
bijections onto 1..K, the off-prefix mass is at most K^(1-p)/(p-1) by the
arithmetic-geometric mean inequality and an integral comparison.

Also here: the constructive enumeration machinery.  Sorting a summable
ratio into nonincreasing order yields an enumeration gamma with
sigma_n * sqrt(gamma) <= C * sigma_m on the prefix (the condensation
construction), and chaining that step produces enumerations gamma_1,
gamma_2, ... witnessing that the family dominates sqrt(gamma_1...gamma_n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import grammar
from .grammar import Div, Expr, Mul, Pow
from .indexsets import Enumeration, IndexSet
from .logvalue import LOG_CMP_TOL, LogValue, log_sum_exp
from .scales import (
    STABILIZATION_BUDGET,
    DominationReport,
    PowerDominationReport,
    Scale,
    ScaleFamily,
    checkpoint_index,
    dominates,
    power_dominates,
    scale_power,
    scale_product,
)

__all__ = [
    "SummabilityRow",
    "SummabilityReport",
    "TailCertificate",
    "analyze_ratio_tail",
    "summability_check",
    "p_summability_check",
    "single_scale_summable",
    "SingleScaleReport",
    "condensation_enumeration",
    "CondensationResult",
    "sqrt_standard_chain",
    "ChainResult",
    "ChainStallError",
    "prop_power_check",
    "PowerSummabilityReport",
]

DEFAULT_MAX_M = 12
DEFAULT_K = 100_000

# Minimal total decay exponent over enumeration factors for a certificate.
# Exponent 2 is the threshold every certificate here reduces to (pairing
# factors against sum 1/k^2); a pure identity monomial is certified already
# for any exponent > 1 by the integral bound.
_ENUM_DECAY_THRESHOLD = Fraction(2)


@dataclass
class TailCertificate:
    method: str  # 'p-series' | 'condensation'
    decay_exponent: float
    constant_log: float
    tail_log: float  # bound on the off-prefix mass

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "decay_exponent": self.decay_exponent,
            "constant_log": self.constant_log,
            "tail_bound_log": self.tail_log,
        }


def analyze_ratio_tail(
    ratio_expr: Expr, domain: IndexSet, K: int
) -> Optional[TailCertificate]:
    """Symbolic tail bound for sum over x outside the prefix of ratio(x).

    Only sound on prefixes that are bijective onto 1..K under every decay
    factor: the plain variable k requires the contiguous prefix 1..K, and an
    enumeration factor requires its stored prefix (which is 1..K-complete by
    construction).  Returns None when no certificate of the supported shape
    exists.
    """
    const_log, factors = grammar.factorize(ratio_expr)
    decay = Fraction(0)
    pure_monomial = True
    for node, exponent in factors.items():
        if exponent > 0:
            # only a factor identically equal to 1 may appear upstairs
            max_log = getattr(node, "max_log", None)
            if (
                max_log is not None
                and max_log() <= 1e-12
                and grammar.at_least_one(node)
            ):
                pure_monomial = False
                continue
            return None  # growing non-constant factor, no certificate
        if isinstance(node, grammar.Var):
            if not domain.contiguous_ints:
                return None
            decay += -exponent
        elif isinstance(node, grammar.EnumNode):
            if len(node.enumeration) < K:
                return None
            decay += -exponent
            pure_monomial = False
        else:
            # a shrinking leftover in the denominator only helps, provided
            # it is provably >= 1
            if not grammar.at_least_one(node):
                return None
            pure_monomial = False
    p = float(decay)
    if decay >= _ENUM_DECAY_THRESHOLD or (pure_monomial and p > 1.0):
        tail_log = const_log + (1.0 - p) * math.log(K) - math.log(p - 1.0)
        method = "p-series" if pure_monomial else "condensation"
        return TailCertificate(method, p, const_log, tail_log)
    return None


@dataclass
class SummabilityRow:
    n: int
    m: Optional[int]
    partial_sum: LogValue
    tail: Optional[TailCertificate]
    verdict: str  # 'certified' | 'prefix-bounded' | 'refuted-trend'

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "m": self.m,
            "partial_sum_log": self.partial_sum.log,
            "method": self.tail.method if self.tail else "none",
            "verdict": self.verdict,
        }
        if self.tail:
            d["tail_bound_log"] = self.tail.tail_log
        return d


@dataclass
class SummabilityReport:
    family_name: str
    K: int
    max_m: int
    weighted: bool
    rows: list

    @property
    def all_certified(self) -> bool:
        return all(r.verdict == "certified" for r in self.rows)

    @property
    def any_refuted(self) -> bool:
        return any(r.verdict == "refuted-trend" for r in self.rows)

    def row(self, n: int) -> SummabilityRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)

    def to_dict(self) -> dict:
        return {
            "family": self.family_name,
            "K": self.K,
            "max_m": self.max_m,
            "weighted": self.weighted,
            "rows": [r.to_dict() for r in self.rows],
        }


def _terms_decay(term_logs: np.ndarray) -> bool:
    """False when the largest term still sits in the final quarter."""
    q = checkpoint_index(len(term_logs))
    top = float(np.max(term_logs))
    if top == -math.inf:
        return True
    return float(np.max(term_logs[q - 1 :])) < top - LOG_CMP_TOL or q == 1


def _check_one_n(
    family: ScaleFamily,
    n: int,
    max_m: int,
    K: int,
    weight_logs: Optional[np.ndarray],
    weight_expr_sq: Optional[Expr],
) -> SummabilityRow:
    domain = family.domain
    sig_n = family[n].log_values(K)
    best_m = None
    best_sum = None
    for m in range(n + 1, max_m + 1):
        term_logs = sig_n - family[m].log_values(K)
        if weight_logs is not None:
            term_logs = term_logs + weight_logs
        ratio_expr = Div(family[n].expr, family[m].expr)
        if weight_expr_sq is not None:
            ratio_expr = Mul(weight_expr_sq, ratio_expr)
        cert = analyze_ratio_tail(ratio_expr, domain, K)
        partial = LogValue.from_log(log_sum_exp(term_logs))
        if cert is not None:
            return SummabilityRow(n, m, partial, cert, "certified")
        if best_sum is None or partial < best_sum:
            best_m, best_sum, best_terms = m, partial, term_logs
    verdict = "prefix-bounded" if _terms_decay(best_terms) else "refuted-trend"
    return SummabilityRow(n, best_m, best_sum, None, verdict)


def summability_check(
    family: ScaleFamily,
    max_m: int = DEFAULT_MAX_M,
    K: Optional[int] = None,
    ns: Optional[list] = None,
) -> SummabilityReport:
    """Per-n search for the least m certifying sum sigma_n/sigma_m < inf.

    For each requested n the search walks m in (n, max_m] and stops at the
    first m carrying a symbolic tail certificate; with no certificate
    anywhere, the m with the smallest partial sum is reported together with
    a trend verdict.
    """
    max_m = min(max_m, len(family) - 1)
    K = len(family.domain) if K is None else min(K, len(family.domain))
    if ns is None:
        ns = list(range(0, max(1, max_m - 1)))
    for n in ns:
        if max_m <= n:
            raise ValueError(f"max_m={max_m} leaves no m > n for n={n}")
    rows = [_check_one_n(family, n, max_m, K, None, None) for n in ns]
    return SummabilityReport(family.name, K, max_m, False, rows)


def p_summability_check(
    ell: ScaleFamily,
    dims,
    max_m: int = DEFAULT_MAX_M,
    K: Optional[int] = None,
    ns: Optional[list] = None,
) -> SummabilityReport:
    """Weighted variant: sum of p_z^2 * ell_n(z)/ell_m(z) per n.

    ``dims`` is a DimensionSequence on the same index set; the square of the
    dimension enters both the numeric terms and the symbolic certificate.
    """
    if len(dims) < len(ell.domain):
        raise ValueError("dimension sequence shorter than the index prefix")
    max_m = min(max_m, len(ell) - 1)
    K = len(ell.domain) if K is None else min(K, len(ell.domain))
    if ns is None:
        # squared-dimension weights typically need offset 4, leave headroom
        ns = list(range(0, max(1, max_m - 3)))
    for n in ns:
        if max_m <= n:
            raise ValueError(f"max_m={max_m} leaves no m > n for n={n}")
    dim_scale = dims.as_scale()
    weight_logs = 2.0 * dim_scale.log_values(K)
    weight_expr = Pow(dim_scale.expr, grammar.num(2))
    rows = [
        _check_one_n(ell, n, max_m, K, weight_logs, weight_expr) for n in ns
    ]
    return SummabilityReport(ell.name, K, max_m, True, rows)


# ----------------------------------------------------------------------
# single-scale criterion: some power of sigma dominates an enumeration
# ----------------------------------------------------------------------

@dataclass
class SingleScaleReport:
    verdict: str  # 'certified' | 'refuted-trend'
    d: Optional[int]
    constant: Optional[LogValue]
    implied_offset: Optional[int]  # the family sigma**n is summable at m = n + 2d
    sum_bound_log: Optional[float]  # C^2 * pi^2 / 6
    search: PowerDominationReport

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "d": self.d,
            "constant_log": self.constant.log if self.constant else None,
            "implied_offset": self.implied_offset,
            "sum_bound_log": self.sum_bound_log,
            "search": self.search.to_dict(),
        }


def single_scale_summable(
    sigma: Scale,
    gamma: Enumeration,
    K: Optional[int] = None,
    d_max: int = 8,
) -> SingleScaleReport:
    """Least d with gamma <= C * sigma**d on the prefix.

    A hit certifies summability of the power family sigma**n: the ratio at
    offset m - n = 2d is bounded by C^2/gamma^2, whose full sum is
    C^2 * pi^2/6.
    """
    search = power_dominates(gamma.as_scale(), sigma, d_max=d_max, K=K)
    if not search.found:
        return SingleScaleReport("refuted-trend", None, None, None, None, search)
    c = search.constant
    bound = 2.0 * c.log + math.log(math.pi**2 / 6.0)
    return SingleScaleReport(
        "certified", search.d, c, 2 * search.d, bound, search
    )


# ----------------------------------------------------------------------
# condensation construction
# ----------------------------------------------------------------------

@dataclass
class CondensationResult:
    enumeration: Optional[Enumeration]
    constant: Optional[LogValue]  # least C with sigma_n * sqrt(gamma) <= C sigma_m
    error: Optional[str]

    @property
    def ok(self) -> bool:
        return self.error is None


def condensation_enumeration(
    sigma_n: Scale, sigma_m: Scale, K: Optional[int] = None
) -> CondensationResult:
    """Sort sigma_n/sigma_m nonincreasing; the sort ranks define gamma.

    The construction needs a prefix-summable ratio; a ratio whose sorted
    values show no decay (a constant ratio in the extreme) is reported as an
    error rather than certified.  Ties are broken by original prefix order,
    so the result is reproducible.
    """
    domain = sigma_n.domain
    ratio = sigma_n.log_values(K) - sigma_m.log_values(K)
    Kk = len(ratio)
    order = np.argsort(-ratio, kind="stable")
    sorted_ratio = ratio[order]
    q = checkpoint_index(Kk)
    if Kk > 1 and float(sorted_ratio[q - 1]) >= float(sorted_ratio[0]) - LOG_CMP_TOL:
        return CondensationResult(
            None, None, "ratio shows no decay on the prefix; not summable there"
        )
    ordered_indices = [domain.indices[j] for j in order]
    gamma = Enumeration.from_order(
        domain.prefix(Kk) if Kk < len(domain) else domain,
        ordered_indices,
        name="condensation",
    )
    ranks = np.empty(Kk)
    ranks[order] = np.arange(1, Kk + 1)
    c_log = float(np.max(ratio + 0.5 * np.log(ranks)))
    return CondensationResult(gamma, LogValue.from_log(c_log), None)


class ChainStallError(RuntimeError):
    """Chain construction ran out of family members before completing."""


@dataclass
class ChainResult:
    steps: list  # (Enumeration gamma_t, m_t)
    verifications: list  # DominationReport for sqrt(gamma_1..gamma_t) vs sigma_{m_t}

    @property
    def all_verified(self) -> bool:
        return all(rep.dominated for rep in self.verifications)


def sqrt_standard_chain(
    family: ScaleFamily,
    K: Optional[int] = None,
    max_m: Optional[int] = None,
    steps: int = 3,
) -> ChainResult:
    """Enumerations gamma_1, gamma_2, ... with sigma_{m_(t-1)} * sqrt(gamma_t)
    dominated by sigma_{m_t}, starting from member 1.

    Each step reuses the condensation construction and then re-verifies the
    domination of the accumulated product sqrt(gamma_1...gamma_t) on the
    prefix.  Raises ChainStallError when no usable m remains.
    """
    max_m = len(family) - 1 if max_m is None else min(max_m, len(family) - 1)
    m_prev = 1
    chain = []
    verifications = []
    accum: Optional[Scale] = None
    for _ in range(steps):
        placed = False
        for m in range(m_prev + 1, max_m + 1):
            cond = condensation_enumeration(family[m_prev], family[m], K)
            if not cond.ok:
                continue
            lifted = scale_product(
                family[m_prev], scale_power(cond.enumeration.as_scale(), Fraction(1, 2))
            )
            if not dominates(lifted, family[m], K).dominated:
                continue
            gamma_scale = cond.enumeration.as_scale()
            accum = (
                gamma_scale
                if accum is None
                else scale_product(accum, gamma_scale, name="gamma-product")
            )
            verifications.append(
                dominates(scale_power(accum, Fraction(1, 2)), family[m], K)
            )
            chain.append((cond.enumeration, m))
            m_prev = m
            placed = True
            break
        if not placed:
            if not chain:
                raise ChainStallError(
                    "no first chain step exists below max_m; family does not "
                    "look summable on this prefix"
                )
            break
    if not chain:
        raise ChainStallError("chain construction stalled")
    return ChainResult(chain, verifications)


# ----------------------------------------------------------------------
# dimension-weighted single-scale criterion
# ----------------------------------------------------------------------

@dataclass
class PowerSummabilityReport:
    verdict: str  # 'certified' | 'refuted-trend'
    d: Optional[int]
    constant: Optional[LogValue]
    predicted_m_offset: Optional[int]  # 2d
    cross_check_partial_log: Optional[float]  # sum p^2 ell^n/ell^(n+2d) at n=0
    cross_check_bound_log: Optional[float]  # C^2 pi^2/6
    cross_check_ok: Optional[bool]
    search: PowerDominationReport

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "d": self.d,
            "constant_log": self.constant.log if self.constant else None,
            "predicted_m_offset": self.predicted_m_offset,
            "cross_check_partial_log": self.cross_check_partial_log,
            "cross_check_bound_log": self.cross_check_bound_log,
            "cross_check_ok": self.cross_check_ok,
            "search": self.search.to_dict(),
        }


def prop_power_check(
    ell: Scale,
    dims,
    theta: Enumeration,
    K: Optional[int] = None,
    d_max: int = 8,
    tol: float = 1e-6,
) -> PowerSummabilityReport:
    """Least d with theta(z) * p_z <= C * ell(z)**d; implies weighted
    summability of the power family ell**n at offset m - n = 2d.

    The implication is cross-checked numerically: the weighted partial sum
    at the predicted offset must stay within C^2 * pi^2/6 plus tolerance.
    """
    target = scale_product(theta.as_scale(), dims.as_scale(), name="theta*p")
    search = power_dominates(target, ell, d_max=d_max, K=K)
    if not search.found:
        return PowerSummabilityReport(
            "refuted-trend", None, None, None, None, None, None, search
        )
    d = search.d
    c = search.constant
    Kk = len(ell.domain) if K is None else min(K, len(ell.domain))
    term_logs = (
        2.0 * dims.as_scale().log_values(Kk) - 2.0 * d * ell.log_values(Kk)
    )
    partial = log_sum_exp(term_logs)
    bound = 2.0 * c.log + math.log(math.pi**2 / 6.0)
    ok = partial <= bound + tol
    return PowerSummabilityReport(
        "certified", d, c, 2 * d, partial, bound, ok, search
    )
