"""Closed expression grammar for scales on countable index sets.

The grammar is deliberately small: numerals, the index variable ``k``, the
family parameter ``n``, sums, products, quotients, powers, ``sqrt``, ``exp``,
``floor``, finite tables, and composition with a stored enumeration.
Arbitrary user code is not accepted.  Keeping the surface closed is what
makes symbolic tail certificates possible downstream: a quotient of grammar
expressions can be factored into enumeration-backed decay factors plus
leftovers that are provably >= 1.

Surface syntax (CLI and config files)::

    k                 index variable (positive integer indices)
    n                 family parameter, resolved when a family is built
    2, 1.5            numerals
    + * / ^           arithmetic, ^ binds tightest
    pow(a, b)         same as a ^ b
    sqrt(a)  exp(a)  floor(a)
    table[v1, v2, ...]   tabulated data, entry j is the value at index j
    enum(name)        a named, stored enumeration

Every expression evaluates to a nonnegative magnitude; there is no
subtraction and there are no negative literals.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from .logvalue import LogValue

__all__ = [
    "Expr",
    "Num",
    "Var",
    "FamilyVar",
    "Add",
    "Mul",
    "Div",
    "Pow",
    "Sqrt",
    "Exp",
    "Floor",
    "TableNode",
    "EnumNode",
    "ProviderNode",
    "parse",
    "ParseError",
    "GrammarEvalError",
    "DomainError",
    "substitute_family_param",
    "factorize",
    "is_constant",
    "constant_log",
    "at_least_one",
]

# exp() in the grammar produces a value whose *logarithm* is the linear value
# of its argument, so the argument itself must stay below float range.
_EXP_ARG_LIMIT = 1e306

# floor() is applied in linear domain; above this log magnitude the value is
# indistinguishable from its floor at float precision and is passed through.
_FLOOR_PASSTHROUGH_LOG = 50.0


class ParseError(ValueError):
    """Raised when surface syntax cannot be parsed."""


class GrammarEvalError(ArithmeticError):
    """Raised when an expression cannot be evaluated (overflow, bad node)."""


class DomainError(KeyError):
    """Raised when an index lies outside the evaluated prefix."""


class Expr:
    """Base class for grammar nodes."""

    def eval(self, x, n: Optional[int] = None) -> LogValue:
        raise NotImplementedError

    def eval_log_vec(self, domain, n: Optional[int] = None) -> np.ndarray:
        """Vector of log magnitudes over the domain prefix (-inf for zero)."""
        raise NotImplementedError


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("grammar constants are nonnegative")

    def eval(self, x, n=None) -> LogValue:
        return LogValue.coerce(self.value)

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        return np.full(len(domain), LogValue.coerce(self.value).log)


def num(value) -> Num:
    if isinstance(value, Fraction):
        return Num(value)
    return Num(Fraction(value))


@dataclass(frozen=True)
class Var(Expr):
    """The index variable k; valid on integer index sets."""

    def eval(self, x, n=None) -> LogValue:
        if not isinstance(x, int):
            raise GrammarEvalError(
                f"the variable k needs an integer index, got {x!r}"
            )
        return LogValue.from_int(x)

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        return domain.log_index_array()


@dataclass(frozen=True)
class FamilyVar(Expr):
    """The family parameter n; must be substituted before point evaluation."""

    def eval(self, x, n=None) -> LogValue:
        if n is None:
            raise GrammarEvalError("family parameter n is unresolved")
        return LogValue.from_int(n)

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        if n is None:
            raise GrammarEvalError("family parameter n is unresolved")
        return np.full(len(domain), LogValue.from_int(n).log)


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr

    def eval(self, x, n=None) -> LogValue:
        return self.left.eval(x, n) + self.right.eval(x, n)

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        return np.logaddexp(
            self.left.eval_log_vec(domain, n), self.right.eval_log_vec(domain, n)
        )


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr

    def eval(self, x, n=None) -> LogValue:
        return self.left.eval(x, n) * self.right.eval(x, n)

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        return self.left.eval_log_vec(domain, n) + self.right.eval_log_vec(domain, n)


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr

    def eval(self, x, n=None) -> LogValue:
        return self.left.eval(x, n) / self.right.eval(x, n)

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        denom = self.right.eval_log_vec(domain, n)
        if np.any(denom == -math.inf):
            raise GrammarEvalError("division by an exactly-zero value")
        return self.left.eval_log_vec(domain, n) - denom


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr

    def eval(self, x, n=None) -> LogValue:
        e = self.exponent.eval(x, n).to_float()
        if not math.isfinite(e):
            raise GrammarEvalError("power exponent overflows linear range")
        return self.base.eval(x, n).pow(e)

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        e = np.exp(self.exponent.eval_log_vec(domain, n))
        if not np.all(np.isfinite(e)):
            raise GrammarEvalError("power exponent overflows linear range")
        base = self.base.eval_log_vec(domain, n)
        with np.errstate(invalid="ignore"):
            out = base * e
        # 0^0 = 1; 0^positive stays 0
        zero_base = base == -math.inf
        if np.any(zero_base):
            out = np.where(zero_base & (e == 0), 0.0, out)
            out = np.where(zero_base & (e > 0), -math.inf, out)
        return out


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr

    def eval(self, x, n=None) -> LogValue:
        return self.arg.eval(x, n).sqrt()

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        return 0.5 * self.arg.eval_log_vec(domain, n)


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr

    def eval(self, x, n=None) -> LogValue:
        v = self.arg.eval(x, n).to_float()
        if v > _EXP_ARG_LIMIT:
            raise GrammarEvalError("exp() argument too large even for log domain")
        return LogValue.from_log(v)

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        v = np.exp(self.arg.eval_log_vec(domain, n))
        if np.any(v > _EXP_ARG_LIMIT):
            raise GrammarEvalError("exp() argument too large even for log domain")
        return v


@dataclass(frozen=True)
class Floor(Expr):
    arg: Expr

    def eval(self, x, n=None) -> LogValue:
        v = self.arg.eval(x, n)
        if v.is_zero or v.log_mag >= _FLOOR_PASSTHROUGH_LOG:
            return v
        return LogValue.from_float(math.floor(v.to_float()))

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        logs = self.arg.eval_log_vec(domain, n)
        small = (logs < _FLOOR_PASSTHROUGH_LOG) & (logs > -math.inf)
        if not np.any(small):
            return logs
        out = logs.copy()
        floored = np.floor(np.exp(logs[small]))
        with np.errstate(divide="ignore"):
            out[small] = np.log(floored)
        return out


@dataclass(eq=False)
class TableNode(Expr):
    """Finite tabulated data, keyed by index object."""

    values: Mapping[object, LogValue]
    label: str = "table"

    def __post_init__(self):
        self._vec_cache = {}
        self._min_log = min(
            (v.log for v in self.values.values()), default=math.inf
        )

    def eval(self, x, n=None) -> LogValue:
        try:
            return self.values[x]
        except KeyError:
            raise DomainError(f"index {x!r} outside tabulated prefix of {self.label}")

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        key = id(domain)
        cached = self._vec_cache.get(key)
        if cached is None or cached[0] is not domain:
            cached = (domain, np.array([self.eval(x).log for x in domain.indices]))
            self._vec_cache[key] = cached
        return cached[1]

    def min_log(self) -> float:
        return self._min_log

    def max_log(self) -> float:
        return max((v.log for v in self.values.values()), default=-math.inf)


@dataclass(eq=False)
class EnumNode(Expr):
    """Composition with a stored enumeration: evaluates to its rank."""

    enumeration: object  # scalekit.indexsets.Enumeration
    label: str = "enum"

    def __post_init__(self):
        self._vec_cache = {}

    def eval(self, x, n=None) -> LogValue:
        return LogValue.from_int(self.enumeration(x))

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        key = id(domain)
        cached = self._vec_cache.get(key)
        if cached is None or cached[0] is not domain:
            cached = (
                domain,
                np.array(
                    [math.log(self.enumeration(x)) for x in domain.indices]
                ),
            )
            self._vec_cache[key] = cached
        return cached[1]


@dataclass(eq=False)
class ProviderNode(Expr):
    """Values supplied by an external provider (dimension sequences)."""

    provider: object  # needs value_log(x) and log_values(domain)
    label: str = "provider"

    def eval(self, x, n=None) -> LogValue:
        return LogValue.from_log(self.provider.value_log(x))

    def eval_log_vec(self, domain, n=None) -> np.ndarray:
        return self.provider.log_values(domain)

    def min_log(self) -> float:
        return getattr(self.provider, "min_log", -math.inf)

    def max_log(self) -> float:
        return getattr(self.provider, "max_log", math.inf)


# ----------------------------------------------------------------------
# constant folding and factor analysis
# ----------------------------------------------------------------------

def is_constant(expr: Expr) -> bool:
    """True when the expression contains no index-dependent node."""
    if isinstance(expr, Num):
        return True
    if isinstance(expr, (Var, FamilyVar, TableNode, EnumNode, ProviderNode)):
        return False
    if isinstance(expr, (Add, Mul, Div)):
        return is_constant(expr.left) and is_constant(expr.right)
    if isinstance(expr, Pow):
        return is_constant(expr.base) and is_constant(expr.exponent)
    if isinstance(expr, (Sqrt, Exp, Floor)):
        return is_constant(expr.arg)
    return False


def constant_log(expr: Expr) -> float:
    """Log magnitude of a constant expression."""
    if not is_constant(expr):
        raise GrammarEvalError("expression is not constant")
    return expr.eval(1).log


def _constant_exponent(expr: Expr) -> Optional[Fraction]:
    """Exact rational value of a constant exponent, if available."""
    if isinstance(expr, Num):
        return expr.value
    if is_constant(expr):
        v = math.exp(constant_log(expr))
        return Fraction(v).limit_denominator(1_000_000)
    return None


def factorize(expr: Expr):
    """Decompose into (constant log, {atomic factor node: rational exponent}).

    Mul, Div, Pow-by-constant and Sqrt are unfolded; everything else becomes
    an atomic factor with exponent 1.  Two factors merge when their nodes
    compare equal (structural for pure-grammar nodes, identity for tables,
    enumerations and providers).
    """
    if is_constant(expr):
        return constant_log(expr), {}
    if isinstance(expr, Mul):
        c1, f1 = factorize(expr.left)
        c2, f2 = factorize(expr.right)
        return c1 + c2, _merge(f1, f2, 1)
    if isinstance(expr, Div):
        c1, f1 = factorize(expr.left)
        c2, f2 = factorize(expr.right)
        return c1 - c2, _merge(f1, f2, -1)
    if isinstance(expr, Pow):
        e = _constant_exponent(expr.exponent)
        if e is not None:
            c, f = factorize(expr.base)
            return c * float(e), {k: v * e for k, v in f.items() if v * e != 0}
    if isinstance(expr, Sqrt):
        c, f = factorize(expr.arg)
        return c * 0.5, {k: v / 2 for k, v in f.items()}
    return 0.0, {expr: Fraction(1)}


def _merge(f1, f2, sign):
    out = dict(f1)
    for k, v in f2.items():
        out[k] = out.get(k, Fraction(0)) + sign * v
        if out[k] == 0:
            del out[k]
    return out


def at_least_one(expr: Expr) -> bool:
    """Conservatively certify expr(x) >= 1 for all indices in its domain.

    Sound but incomplete; used when dropping denominator factors from tail
    certificates.  All grammar values are nonnegative, which the Add rule
    relies on.
    """
    if isinstance(expr, Num):
        return expr.value >= 1
    if isinstance(expr, Var):
        return True  # indices are >= 1
    if isinstance(expr, EnumNode):
        return True  # ranks are >= 1
    if isinstance(expr, TableNode):
        return expr.min_log() >= 0
    if isinstance(expr, ProviderNode):
        return expr.min_log() >= 0
    if isinstance(expr, Add):
        return at_least_one(expr.left) or at_least_one(expr.right)
    if isinstance(expr, Mul):
        return at_least_one(expr.left) and at_least_one(expr.right)
    if isinstance(expr, Exp):
        return True  # exp of a nonnegative value
    if isinstance(expr, Sqrt):
        return at_least_one(expr.arg)
    if isinstance(expr, Floor):
        return at_least_one(expr.arg)
    if isinstance(expr, Pow):
        e = _constant_exponent(expr.exponent)
        return e is not None and e >= 0 and at_least_one(expr.base)
    return False


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),\[\]]))"
)

_FUNCTIONS = {"sqrt", "exp", "floor", "pow"}


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character at position {pos}: {text[pos:]!r}")
        pos = m.end()
        if m.lastgroup == "number":
            tokens.append(("number", m.group("number")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, tokens, enums):
        self.tokens = tokens
        self.pos = 0
        self.enums = enums or {}

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or kind}, got {tok[1]!r}")
        return tok

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek() == ("op", "+"):
            self.next()
            node = Add(node, self.parse_term())
        return node

    def parse_term(self) -> Expr:
        node = self.parse_power()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.next()[1]
            rhs = self.parse_power()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.peek() == ("op", "^"):
            self.next()
            return Pow(base, self.parse_power())  # right associative
        return base

    def parse_atom(self) -> Expr:
        kind, value = self.next()
        if kind == "number":
            if "." in value:
                return Num(Fraction(value))
            return Num(Fraction(int(value)))
        if kind == "op" and value == "(":
            node = self.parse_expr()
            self.expect("op", ")")
            return node
        if kind == "name":
            if value == "k":
                return Var()
            if value == "n":
                return FamilyVar()
            if value == "table":
                return self.parse_table()
            if value == "enum":
                return self.parse_enum()
            if value in _FUNCTIONS:
                return self.parse_call(value)
            raise ParseError(f"unknown name {value!r}")
        raise ParseError(f"unexpected token {value!r}")

    def parse_call(self, fname: str) -> Expr:
        self.expect("op", "(")
        first = self.parse_expr()
        if fname == "pow":
            self.expect("op", ",")
            second = self.parse_expr()
            self.expect("op", ")")
            return Pow(first, second)
        self.expect("op", ")")
        if fname == "sqrt":
            return Sqrt(first)
        if fname == "exp":
            return Exp(first)
        return Floor(first)

    def parse_table(self) -> Expr:
        self.expect("op", "[")
        entries = []
        while True:
            kind, value = self.next()
            if kind != "number":
                raise ParseError("table entries must be numerals")
            entries.append(Fraction(value) if "." in value else Fraction(int(value)))
            kind, value = self.next()
            if (kind, value) == ("op", "]"):
                break
            if (kind, value) != ("op", ","):
                raise ParseError("expected ',' or ']' in table")
        values = {
            j + 1: LogValue.coerce(v) for j, v in enumerate(entries)
        }
        return TableNode(values)

    def parse_enum(self) -> Expr:
        self.expect("op", "(")
        kind, name = self.next()
        if kind != "name":
            raise ParseError("enum() takes a name")
        self.expect("op", ")")
        if name not in self.enums:
            raise ParseError(f"unknown enumeration {name!r}")
        return EnumNode(self.enums[name], label=name)


def parse(text: str, enums: Optional[Mapping[str, object]] = None) -> Expr:
    """Parse surface syntax into a grammar expression."""
    parser = _Parser(_tokenize(text), enums)
    node = parser.parse_expr()
    if parser.peek()[0] != "end":
        raise ParseError(f"trailing input near {parser.peek()[1]!r}")
    return node


def substitute_family_param(expr: Expr, n: int) -> Expr:
    """Replace the family parameter n by a concrete value."""
    if isinstance(expr, FamilyVar):
        return num(n)
    if isinstance(expr, Add):
        return Add(substitute_family_param(expr.left, n), substitute_family_param(expr.right, n))
    if isinstance(expr, Mul):
        return Mul(substitute_family_param(expr.left, n), substitute_family_param(expr.right, n))
    if isinstance(expr, Div):
        return Div(substitute_family_param(expr.left, n), substitute_family_param(expr.right, n))
    if isinstance(expr, Pow):
        return Pow(substitute_family_param(expr.base, n), substitute_family_param(expr.exponent, n))
    if isinstance(expr, Sqrt):
        return Sqrt(substitute_family_param(expr.arg, n))
    if isinstance(expr, Exp):
        return Exp(substitute_family_param(expr.arg, n))
    if isinstance(expr, Floor):
        return Floor(substitute_family_param(expr.arg, n))
    return expr
