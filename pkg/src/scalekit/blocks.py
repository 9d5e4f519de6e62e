"""Direct sums of matrix blocks at finite truncation.

Elements are finitely supported matrix-valued functions z -> M_{p_z}(C).
The ambient norm is the sup over blocks of the operator norm; weighted
variants multiply each block's contribution by a scale on the block index.

Dimension sequences come in two regimes.  Machine-integer dimensions (at
most 512) back actual matrices; log-domain dimensions exist for analysis
only (growth checks on sequences like e^(k^k)), and any operation that
materializes a matrix rejects them.

Largest singular values are computed by closed form where one exists
(matrix units, diagonal blocks, single nonzero column or row) and otherwise
by power iteration on the Gram matrix with a deterministic start; failure
to converge raises, never returns silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import grammar
from .grammar import Expr, ProviderNode
from .indexsets import Enumeration, IndexSet
from .logvalue import LOG_CMP_TOL, LogValue, log_sum_exp
from .scales import (
    PowerDominationReport,
    Scale,
    ScaleFamily,
    power_dominates,
)
from .schwartz import FinSuppVector

__all__ = [
    "DimensionSequence",
    "BlockIndex",
    "BlockElement",
    "block_mul",
    "block_adjoint",
    "operator_norm",
    "cstar_norm",
    "socle_norm_op",
    "socle_norms_l1_sup",
    "sandwich_check",
    "two_sided_ideal_check",
    "TwoSidedIdealReport",
    "diagonal_embed",
    "diagonal_pair_domain",
    "lift_to_pairs",
    "block_index_set",
    "ell_min_max",
    "growth_condition_check",
    "GrowthReport",
    "gamma_block_enumeration",
    "reorder_with_padding",
    "PaddingReport",
    "nondecreasing_reorder",
    "standard_schwartz_classify",
    "ClassifyReport",
    "PowerIterationError",
    "MatrixRegimeError",
    "matrix_unit",
    "ones_column",
    "random_block_element",
    "read_dimension_file",
    "read_block_fixture",
    "write_block_fixture",
]

MAX_MATRIX_DIM = 512
_POWER_ITER_CAP = 10_000
_POWER_ITER_TOL = 1e-13


class MatrixRegimeError(TypeError):
    """An operation needed machine-integer dimensions but got log-domain ones."""


class PowerIterationError(ArithmeticError):
    """Power iteration failed to converge within its iteration cap."""


class BlockIndex(NamedTuple):
    z: object
    i: int
    j: int


@dataclass(eq=False)
class DimensionSequence:
    """Dimensions p_z >= 1 over a prefix of the block index set Z.

    Machine-integer values allow matrices; a grammar expression alone puts
    the sequence in the log-domain analysis regime.  Both together keep the
    integers authoritative while the expression feeds symbolic certificate
    work (they are checked for agreement on the prefix).
    """

    domain: IndexSet
    values: Optional[tuple] = None  # ints, aligned with the prefix order
    expr: Optional[Expr] = None
    name: str = "p"
    _logs: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.values is None and self.expr is None:
            raise ValueError("give integer values, an expression, or both")
        if self.values is not None:
            self.values = tuple(int(v) for v in self.values)
            if len(self.values) != len(self.domain):
                raise ValueError("need one dimension per prefix index")
            if any(v < 1 for v in self.values):
                raise ValueError("dimensions must be at least 1")
            if self.expr is not None:
                for z, v in zip(self.domain.indices, self.values):
                    if abs(self.expr.eval(z).log - math.log(v)) > 1e-9:
                        raise ValueError(
                            f"expression disagrees with value {v} at {z!r}"
                        )

    @staticmethod
    def from_ints(values: Sequence[int], domain: Optional[IndexSet] = None, name: str = "p") -> "DimensionSequence":
        domain = domain or IndexSet.integers(len(values))
        return DimensionSequence(domain, values=tuple(values), name=name)

    @staticmethod
    def from_expr(expr: Expr, K: int, name: str = "p") -> "DimensionSequence":
        return DimensionSequence(IndexSet.integers(K), expr=expr, name=name)

    @property
    def machine(self) -> bool:
        return self.values is not None

    def __len__(self) -> int:
        return len(self.domain)

    def dim(self, z) -> int:
        """Integer dimension, for enumeration and prefix-sum work."""
        if not self.machine:
            raise MatrixRegimeError(
                "log-domain dimensions have no integer value"
            )
        return self.values[self.domain.position(z) - 1]

    def matrix_dim(self, z) -> int:
        """Integer dimension, gated for actual matrix materialization."""
        d = self.dim(z)
        if d > MAX_MATRIX_DIM:
            raise MatrixRegimeError(
                f"dimension {d} at {z!r} exceeds the matrix cap {MAX_MATRIX_DIM}"
            )
        return d

    def value_log(self, z) -> float:
        if self.machine:
            return math.log(self.values[self.domain.position(z) - 1])
        return self.expr.eval(z).log

    def log_values(self, domain: Optional[IndexSet] = None) -> np.ndarray:
        domain = domain or self.domain
        if domain is self.domain:
            if self._logs is None:
                if self.machine:
                    self._logs = np.log(np.array(self.values, dtype=float))
                else:
                    self._logs = self.expr.eval_log_vec(self.domain)
            return self._logs
        return np.array([self.value_log(z) for z in domain.indices])

    @property
    def min_log(self) -> float:
        return float(np.min(self.log_values()))

    @property
    def max_log(self) -> float:
        return float(np.max(self.log_values()))

    def node(self) -> Expr:
        """A stable grammar node for this sequence, so repeated uses cancel
        symbolically in quotients."""
        if self.expr is not None:
            return self.expr
        cached = getattr(self, "_node", None)
        if cached is None:
            cached = ProviderNode(self, label=self.name)
            object.__setattr__(self, "_node", cached)
        return cached

    def as_scale(self, name: str = "") -> Scale:
        return Scale(self.domain, self.node(), name or self.name)


def read_dimension_file(path, name: str = "p") -> DimensionSequence:
    """One entry per line: an integer, or a grammar expression evaluated at
    k = the line number (log-domain regime when any line is an expression)."""
    raw = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                raw.append(line)
    if not raw:
        raise ValueError(f"{path}: empty dimension file")
    if all(s.isdigit() for s in raw):
        return DimensionSequence.from_ints([int(s) for s in raw], name=name)
    exprs = [grammar.parse(s) for s in raw]
    values = {
        k: LogValue.from_log(e.eval(k).log) for k, e in enumerate(exprs, start=1)
    }
    domain = IndexSet.integers(len(raw))
    table = grammar.TableNode(
        {k: values[k] for k in domain.indices}, label=name
    )
    return DimensionSequence(domain, expr=table, name=name)


# ----------------------------------------------------------------------
# block elements
# ----------------------------------------------------------------------

@dataclass(eq=False)
class BlockElement:
    """Finitely many nonzero blocks; block z is a p_z x p_z complex matrix."""

    dims: DimensionSequence
    blocks: dict

    def __post_init__(self):
        clean = {}
        for z, mat in self.blocks.items():
            arr = np.asarray(mat, dtype=complex)
            p = self.dims.matrix_dim(z)
            if arr.shape != (p, p):
                raise ValueError(
                    f"block at {z!r} has shape {arr.shape}, expected {(p, p)}"
                )
            if np.any(arr != 0):
                clean[z] = arr
        self.blocks = clean

    @property
    def support(self):
        return self.blocks.keys()

    def block(self, z) -> np.ndarray:
        p = self.dims.matrix_dim(z)
        return self.blocks.get(z, np.zeros((p, p), dtype=complex))

    def is_zero(self) -> bool:
        return not self.blocks

    def __add__(self, other: "BlockElement") -> "BlockElement":
        out = {z: m.copy() for z, m in self.blocks.items()}
        for z, m in other.blocks.items():
            out[z] = out[z] + m if z in out else m.copy()
        return BlockElement(self.dims, out)

    def scaled(self, c: complex) -> "BlockElement":
        return BlockElement(self.dims, {z: c * m for z, m in self.blocks.items()})

    def entry(self, x: BlockIndex) -> complex:
        z, i, j = x
        return complex(self.block(z)[i - 1, j - 1])


def matrix_unit(dims: DimensionSequence, z, i: int, j: int) -> BlockElement:
    p = dims.matrix_dim(z)
    if not (1 <= i <= p and 1 <= j <= p):
        raise ValueError(f"entry ({i},{j}) outside a {p}x{p} block")
    m = np.zeros((p, p), dtype=complex)
    m[i - 1, j - 1] = 1.0
    return BlockElement(dims, {z: m})


def ones_column(dims: DimensionSequence, z, col: int = 1) -> BlockElement:
    """All ones in one column; its operator norm is sqrt(p_z)."""
    p = dims.matrix_dim(z)
    m = np.zeros((p, p), dtype=complex)
    m[:, col - 1] = 1.0
    return BlockElement(dims, {z: m})


def block_mul(a: BlockElement, b: BlockElement) -> BlockElement:
    """Blockwise matrix product; disjoint supports multiply to zero."""
    if a.dims is not b.dims and a.dims.values != b.dims.values:
        raise ValueError("block elements have mismatched dimension sequences")
    out = {}
    for z, m in a.blocks.items():
        other = b.blocks.get(z)
        if other is not None:
            out[z] = m @ other
    return BlockElement(a.dims, out)


def block_adjoint(a: BlockElement) -> BlockElement:
    return BlockElement(a.dims, {z: m.conj().T for z, m in a.blocks.items()})


# ----------------------------------------------------------------------
# operator norms
# ----------------------------------------------------------------------

def _closed_form_op_norm(mat: np.ndarray) -> Optional[float]:
    p = mat.shape[0]
    if p == 1:
        return float(abs(mat[0, 0]))
    nz_cols = np.flatnonzero(np.any(mat != 0, axis=0))
    if len(nz_cols) == 0:
        return 0.0
    if len(nz_cols) == 1:
        return float(np.linalg.norm(mat[:, nz_cols[0]]))
    nz_rows = np.flatnonzero(np.any(mat != 0, axis=1))
    if len(nz_rows) == 1:
        return float(np.linalg.norm(mat[nz_rows[0], :]))
    if np.count_nonzero(mat - np.diag(np.diagonal(mat))) == 0:
        return float(np.max(np.abs(np.diagonal(mat))))
    return None


def _power_iteration(gram: np.ndarray, start: np.ndarray) -> Optional[float]:
    v = start / np.linalg.norm(start)
    lam = float(np.real(np.vdot(v, gram @ v)))
    for _ in range(_POWER_ITER_CAP):
        w = gram @ v
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            return 0.0
        v = w / norm_w
        new_lam = float(np.real(np.vdot(v, gram @ v)))
        if abs(new_lam - lam) <= _POWER_ITER_TOL * max(new_lam, 1e-300):
            return new_lam
        lam = new_lam
    return None


def operator_norm(mat: np.ndarray) -> float:
    """Largest singular value of a single block."""
    mat = np.asarray(mat, dtype=complex)
    closed = _closed_form_op_norm(mat)
    if closed is not None:
        return closed
    gram = mat.conj().T @ mat
    p = gram.shape[0]
    # two deterministic starts; an alternating-sign start catches top
    # singular vectors orthogonal to the all-ones direction
    best = None
    for start in (np.ones(p, dtype=complex),
                  np.array([(-1.0) ** t for t in range(p)], dtype=complex) + 0.5):
        lam = _power_iteration(gram, start)
        if lam is None:
            raise PowerIterationError(
                f"power iteration did not converge on a {p}x{p} block"
            )
        best = lam if best is None else max(best, lam)
    return math.sqrt(max(best, 0.0))


def cstar_norm(f: BlockElement) -> LogValue:
    """Sup over blocks of the operator norm (the ambient norm)."""
    best = 0.0
    for z in f.support:
        best = max(best, operator_norm(f.blocks[z]))
    return LogValue.from_float(best)


def socle_norm_op(f: BlockElement, ell: ScaleFamily, n: int) -> LogValue:
    """Sup over blocks of ell_n(z) * (operator norm of the block)."""
    scale = ell[n]
    best = LogValue.zero()
    for z in f.support:
        cand = scale.eval(z) * LogValue.from_float(operator_norm(f.blocks[z]))
        if cand > best:
            best = cand
    return best


def socle_norms_l1_sup(f: BlockElement, ell: ScaleFamily, n: int):
    """Entrywise weighted l1 and sup norms over all matrix entries."""
    scale = ell[n]
    total = []
    best = LogValue.zero()
    for z in f.support:
        w = scale.eval(z)
        a = np.abs(f.blocks[z])
        total.append(w * LogValue.from_float(float(np.sum(a))))
        cand = w * LogValue.from_float(float(np.max(a)))
        if cand > best:
            best = cand
    return LogValue.sum_of(total), best


def sandwich_check(f: BlockElement, ell: ScaleFamily, n: int, tol: float = 1e-9) -> bool:
    """sup <= op <= l1 for the three weighted norm variants."""
    l1, sup = socle_norms_l1_sup(f, ell, n)
    op = socle_norm_op(f, ell, n)
    return sup.approx_le(op, tol) and op.approx_le(l1, tol)


def random_block_element(
    rng: np.random.Generator,
    dims: DimensionSequence,
    max_blocks: int = 6,
    bounded: bool = False,
) -> BlockElement:
    """Random element; with bounded=True every block is scaled into the
    operator-norm unit ball."""
    count = int(rng.integers(1, max_blocks + 1))
    chosen = rng.choice(len(dims.domain), size=min(count, len(dims.domain)), replace=False)
    blocks = {}
    for jz in chosen:
        z = dims.domain.indices[int(jz)]
        p = dims.matrix_dim(z)
        m = (rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))) / math.sqrt(2)
        if bounded:
            nrm = operator_norm(m)
            if nrm > 0:
                m = m / nrm
        blocks[z] = m
    return BlockElement(dims, blocks)


@dataclass
class TwoSidedIdealReport:
    seed: int
    trials: int
    worst_left_log: list  # ||f phi||_n vs ||f||_B ||phi||_n, per n
    worst_right_log: list  # ||phi f||_n vs ||phi||_n ||f||_B, per n
    tolerance: float

    @property
    def passed(self) -> bool:
        lim = math.log1p(self.tolerance)
        return all(r <= lim for r in self.worst_left_log) and all(
            r <= lim for r in self.worst_right_log
        )

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "worst_left_log": self.worst_left_log,
            "worst_right_log": self.worst_right_log,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def two_sided_ideal_check(
    ell: ScaleFamily,
    dims: DimensionSequence,
    trials: int = 1000,
    seed: int = 0,
    tolerance: float = 1e-9,
) -> TwoSidedIdealReport:
    """Randomized check of both weighted-norm ideal inequalities against the
    ambient norm: multiply by a bounded element on either side and the
    weighted operator norm grows by at most that element's ambient norm."""
    rng = np.random.default_rng(seed)
    N = len(ell)
    worst_left = [-math.inf] * N
    worst_right = [-math.inf] * N
    for _ in range(trials):
        f = random_block_element(rng, dims, max_blocks=len(dims.domain))
        phi = random_block_element(rng, dims, max_blocks=3)
        f_b = cstar_norm(f)
        if f_b.is_zero:
            continue
        for n in range(N):
            phi_n = socle_norm_op(phi, ell, n)
            if phi_n.is_zero:
                continue
            left = socle_norm_op(block_mul(f, phi), ell, n)
            right = socle_norm_op(block_mul(phi, f), ell, n)
            if not left.is_zero:
                worst_left[n] = max(worst_left[n], (left / (f_b * phi_n)).log)
            if not right.is_zero:
                worst_right[n] = max(worst_right[n], (right / (phi_n * f_b)).log)
    return TwoSidedIdealReport(seed, trials, worst_left, worst_right, tolerance)


# ----------------------------------------------------------------------
# diagonal embedding
# ----------------------------------------------------------------------

def diagonal_pair_domain(dims: DimensionSequence) -> IndexSet:
    """The diagonal index set: pairs (z, i) with 1 <= i <= p_z."""
    pairs = []
    for z in dims.domain.indices:
        for i in range(1, dims.matrix_dim(z) + 1):
            pairs.append((z, i))
    return IndexSet.from_indices(pairs, name="diagonal pairs")


def lift_to_pairs(ell: ScaleFamily, pair_domain: IndexSet) -> ScaleFamily:
    """Scales tau_n(z, i) = ell_n(z) on the diagonal index set."""
    members = []
    for n in range(len(ell)):
        values = [ell[n].eval(z) for (z, _i) in pair_domain.indices]
        members.append(Scale.from_table(pair_domain, values, f"lifted_{n}"))
    return ScaleFamily(tuple(members), "lifted to pairs")


def diagonal_embed(phi: FinSuppVector, dims: DimensionSequence) -> BlockElement:
    """Place phi(z, i) on the diagonal of block z.

    The embedding is isometric: the weighted operator norm of the image
    equals the weighted sup norm of phi, exactly, because the operator norm
    of a diagonal matrix is its largest absolute entry.
    """
    per_block: dict = {}
    for (z, i), v in phi.entries.items():
        p = dims.matrix_dim(z)
        if not (1 <= i <= p):
            raise ValueError(f"diagonal index {i} outside block of size {p}")
        per_block.setdefault(z, {})[i] = v
    blocks = {}
    for z, diag in per_block.items():
        p = dims.matrix_dim(z)
        m = np.zeros((p, p), dtype=complex)
        for i, v in diag.items():
            m[i - 1, i - 1] = v
        blocks[z] = m
    return BlockElement(dims, blocks)


# ----------------------------------------------------------------------
# growth condition machinery
# ----------------------------------------------------------------------

def ell_min_max(dims: DimensionSequence, theta: Enumeration):
    """Prefix-sum scales under the theta ordering.

    ell_min(z) sums the dimensions strictly before z, with the first block
    pinned to 1; ell_max includes z itself, so ell_max - ell_min = p away
    from the first block.
    """
    order = theta.inverse  # indices in rank order
    if dims.machine:
        mins, maxs = [], []
        acc = 0
        for rank, z in enumerate(order, start=1):
            p = dims.values[dims.domain.position(z) - 1]
            mins.append(LogValue.from_int(max(acc, 1) if rank == 1 else acc))
            acc += p
            maxs.append(LogValue.from_int(acc))
        # first block's ell_min is 1 by convention (strict sum is empty)
        mins[0] = LogValue.one()
    else:
        logs = dims.log_values()
        mins, maxs = [], []
        acc = LogValue.zero()
        for rank, z in enumerate(order, start=1):
            p = LogValue.from_log(float(logs[dims.domain.position(z) - 1]))
            mins.append(LogValue.one() if rank == 1 else acc)
            acc = acc + p
            maxs.append(acc)
    by_index_min = {z: mins[r] for r, z in enumerate(order)}
    by_index_max = {z: maxs[r] for r, z in enumerate(order)}
    lo = Scale.from_table(
        dims.domain, [by_index_min[z] for z in dims.domain.indices], "ell_min"
    )
    hi = Scale.from_table(
        dims.domain, [by_index_max[z] for z in dims.domain.indices], "ell_max"
    )
    return lo, hi


@dataclass
class GrowthReport:
    """Power-domination verdicts for the three equivalent growth conditions:
    (i) p, (ii) theta * p, (iii) ell_max, each against powers of ell_min."""

    cond_p: PowerDominationReport
    cond_theta_p: PowerDominationReport
    cond_max: PowerDominationReport

    @property
    def satisfied(self) -> bool:
        return self.cond_p.found

    @property
    def consistent(self) -> bool:
        return self.cond_p.found == self.cond_theta_p.found == self.cond_max.found

    def to_dict(self) -> dict:
        return {
            "p_vs_ell_min": self.cond_p.to_dict(),
            "theta_p_vs_ell_min": self.cond_theta_p.to_dict(),
            "ell_max_vs_ell_min": self.cond_max.to_dict(),
            "satisfied": self.satisfied,
            "consistent": self.consistent,
        }


def growth_condition_check(
    dims: DimensionSequence,
    theta: Optional[Enumeration] = None,
    K: Optional[int] = None,
    d_max: int = 8,
) -> GrowthReport:
    """Check the three provably equivalent growth conditions independently.

    Disagreement between the three verdicts is flagged (consistent=False);
    it would indicate a defect in the domination machinery, not in the
    input.
    """
    theta = theta or Enumeration.identity(dims.domain, "theta")
    lo, hi = ell_min_max(dims, theta)
    p_scale = dims.as_scale()
    theta_p = Scale(
        dims.domain,
        grammar.Mul(grammar.EnumNode(theta, label=theta.name), p_scale.expr),
        "theta*p",
    )
    return GrowthReport(
        cond_p=power_dominates(p_scale, lo, d_max=d_max, K=K),
        cond_theta_p=power_dominates(theta_p, lo, d_max=d_max, K=K),
        cond_max=power_dominates(hi, lo, d_max=d_max, K=K),
    )


def block_index_set(dims: DimensionSequence, K: Optional[int] = None) -> IndexSet:
    """All triples (z, i, j) over the first K blocks, in enumeration order."""
    K = len(dims.domain) if K is None else min(K, len(dims.domain))
    tuples = []
    for z in dims.domain.indices[:K]:
        p = dims.dim(z)
        for j in range(1, p + 1):
            for i in range(1, p + 1):
                tuples.append(BlockIndex(z, i, j))
    return IndexSet.from_indices(tuples, name="block triples")


def gamma_block_enumeration(
    dims: DimensionSequence,
    theta: Optional[Enumeration] = None,
    K: Optional[int] = None,
    size_cap: int = 4_000_000,
) -> Enumeration:
    """The explicit block enumeration: past blocks contribute their squared
    dimensions, then the current block is walked down rows one column at a
    time.  Verified exhaustively to hit {1..sum of squares} exactly.
    """
    theta = theta or Enumeration.identity(dims.domain, "theta")
    K = len(dims.domain) if K is None else min(K, len(dims.domain))
    total = 0
    for rank in range(1, K + 1):
        z = theta.inv(rank)
        total += dims.dim(z) ** 2
        if total > size_cap:
            raise OverflowError(
                f"sum of squared dimensions exceeds the cap {size_cap}"
            )
    forward = {}
    base = 0
    tuples = []
    for rank in range(1, K + 1):
        z = theta.inv(rank)
        p = dims.dim(z)
        for j in range(1, p + 1):
            for i in range(1, p + 1):
                x = BlockIndex(z, i, j)
                forward[x] = base + (i - 1) + (j - 1) * p + 1
                tuples.append(x)
        base += p * p
    domain = IndexSet.from_indices(tuples, name="block triples")
    gamma = Enumeration(domain, forward, name="gamma-blocks")
    ranks = sorted(forward.values())
    if ranks != list(range(1, total + 1)):
        raise AssertionError("block enumeration failed to cover an initial segment")
    return gamma


# ----------------------------------------------------------------------
# reordering
# ----------------------------------------------------------------------

@dataclass
class PaddingReport:
    prefix: list  # emitted dimensions (LogValue entries allowed)
    placed: int  # how many of the declared large entries made it in
    truncated: bool
    verified: bool  # p_k < sum of earlier entries, at every placed entry

    def to_dict(self) -> dict:
        return {
            "length": len(self.prefix),
            "placed": self.placed,
            "truncated": self.truncated,
            "verified": self.verified,
        }


def reorder_with_padding(
    entries: Sequence, repeated_value: Optional[int], K: int
) -> PaddingReport:
    """Insert copies of the infinitely repeated value ahead of each declared
    entry until the running sum of earlier entries strictly exceeds it.

    The first emitted entry is exempt (no earlier sum exists to compare
    against).  Only what fits in a length-K prefix is emitted; an entry
    whose padding requirement blows past K is dropped along with everything
    after it, and the report flags the truncation.  A declared sequence that
    already satisfies the inequality comes back unchanged.
    """
    if repeated_value is None:
        raise ValueError("no repeated value declared; padding is impossible")
    filler = LogValue.from_int(repeated_value)
    out: list = []
    acc = LogValue.zero()
    placed = 0
    truncated = False
    for raw in entries:
        v = LogValue.coerce(raw)
        while out and not v < acc and len(out) < K:
            out.append(filler)
            acc = acc + filler
        if out and not v < acc:
            truncated = True  # ran out of room while padding
            break
        if len(out) >= K:
            truncated = True
            break
        out.append(v)
        acc = acc + v
        placed += 1
    verified = True
    run = LogValue.zero()
    for pos, v in enumerate(out):
        if pos >= 1 and not v < run:
            verified = False
        run = run + v
    return PaddingReport(out, placed, truncated, verified)


def nondecreasing_reorder(
    values: Sequence[int], C: float, d: int, K: Optional[int] = None
) -> list:
    """Sort a growth-satisfying dimension prefix into nondecreasing order.

    Requires the growth inequality p_k <= C * (p_1 + ... + p_(k-1))**d on
    the input (checked, k >= 2); the sorted prefix is re-verified with the
    same constants before being returned.
    """
    vals = list(values if K is None else values[:K])

    def verify(seq) -> Optional[int]:
        acc = 0
        for idx, p in enumerate(seq):
            if idx >= 1 and p > C * acc**d + 1e-9:
                return idx
            acc += p
        return None

    bad = verify(vals)
    if bad is not None:
        raise ValueError(
            f"growth inequality fails on the input at position {bad + 1}; "
            "reordering is only guaranteed under the stated constants"
        )
    ordered = sorted(vals)
    bad = verify(ordered)
    if bad is not None:
        raise AssertionError(
            f"sorted prefix lost the growth inequality at position {bad + 1}"
        )
    return ordered


# ----------------------------------------------------------------------
# classification
# ----------------------------------------------------------------------

@dataclass
class ClassifyReport:
    growth: GrowthReport
    standard: bool
    gamma: Optional[Enumeration]
    gamma_blocks: Optional[int]  # blocks covered by the verified enumeration
    sandwich_ok: Optional[bool]  # sigma_min <= gamma <= sigma_max^2 pointwise

    def to_dict(self) -> dict:
        return {
            "growth": self.growth.to_dict(),
            "standard": self.standard,
            "gamma_blocks": self.gamma_blocks,
            "sandwich_ok": self.sandwich_ok,
        }


def standard_schwartz_classify(
    dims: DimensionSequence,
    theta: Optional[Enumeration] = None,
    K: Optional[int] = None,
    d_max: int = 8,
    size_cap: int = 1_000_000,
) -> ClassifyReport:
    """Growth check plus, on success, the explicit standard-scale witness.

    The witness enumeration is materialized on the longest block prefix
    whose squared-dimension total fits under size_cap, and the two-sided
    pointwise bound ell_min(z) <= gamma(z,i,j) <= ell_max(z)^2 is verified
    exhaustively there.
    """
    theta = theta or Enumeration.identity(dims.domain, "theta")
    growth = growth_condition_check(dims, theta, K=K, d_max=d_max)
    if not growth.satisfied or not dims.machine:
        return ClassifyReport(growth, False, None, None, None)
    budget = 0
    blocks = 0
    for rank in range(1, len(dims.domain) + 1):
        z = theta.inv(rank)
        sq = dims.dim(z) ** 2
        if budget + sq > size_cap:
            break
        budget += sq
        blocks = rank
    if blocks == 0:
        return ClassifyReport(growth, True, None, 0, None)
    gamma = gamma_block_enumeration(dims, theta, K=blocks, size_cap=size_cap)
    lo, hi = ell_min_max(dims, theta)
    ok = True
    for x, rank in gamma.forward.items():
        z = x.z
        lo_v = lo.eval(z)
        hi_sq = hi.eval(z).pow(2)
        g = LogValue.from_int(rank)
        if not (lo_v.approx_le(g, LOG_CMP_TOL) and g.approx_le(hi_sq, LOG_CMP_TOL)):
            ok = False
            break
    return ClassifyReport(growth, bool(ok), gamma, blocks, ok)


# ----------------------------------------------------------------------
# fixtures: "z i j re im" lines
# ----------------------------------------------------------------------

def write_block_fixture(f: BlockElement, path) -> None:
    with open(path, "w") as fh:
        for z in sorted(f.support, key=lambda z: f.dims.domain.position(z)):
            mat = f.blocks[z]
            p = mat.shape[0]
            for i in range(1, p + 1):
                for j in range(1, p + 1):
                    v = complex(mat[i - 1, j - 1])
                    if v != 0:
                        fh.write(f"{z} {i} {j} {v.real!r} {v.imag!r}\n")


def read_block_fixture(path, dims: DimensionSequence) -> BlockElement:
    per_block: dict = {}
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 5:
                raise ValueError(f"{path}:{line_no}: expected 'z i j re im'")
            z, i, j = int(parts[0]), int(parts[1]), int(parts[2])
            per_block.setdefault(z, []).append(
                (i, j, float(parts[3]) + 1j * float(parts[4]))
            )
    blocks = {}
    for z, entries in per_block.items():
        p = dims.matrix_dim(z)
        m = np.zeros((p, p), dtype=complex)
        for i, j, v in entries:
            m[i - 1, j - 1] = v
        blocks[z] = m
    return BlockElement(dims, blocks)
