"""Demand-driven evaluator for multidimensional stream equations.

A stream expression denotes a value at every evaluation context (a finite
map from dimension names to natural tags).  Evaluation computes only the
positions actually demanded and memoizes named stream values in a
warehouse keyed by (name, context).  ``None`` is the undefined value and
propagates through every pointwise operation.

The filtering operators unfold their defining recursions iteratively:

    X wvr Y   value t of the subsequence of X at positions where Y holds
    X asa Y   value 0 of (X wvr Y), at every position
    X upon Y  X advanced once for every position below t where Y holds

A per-query demand budget turns divergent scans (a guard that is never
true) into a DemandExhausted error instead of a hang.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Tuple, Union

from .errors import (
    DemandExhausted,
    DuplicateName,
    ExprSyntaxError,
    KindMismatch,
    UnresolvedReference,
)
from .lexer import END, INT, NAME, Token, tokenize

TIME = "time"

Value = Union[int, bool, None]

DEFAULT_BUDGET = 1_000_000


class EvalContext:
    """Immutable map from dimension names to natural tags.

    Absent dimensions read as 0, and zero entries are normalized away so
    equal positions hash identically in the warehouse.
    """

    __slots__ = ("_tags", "_key")

    def __init__(self, tags: Mapping[str, int] = ()):
        items = dict(tags)
        for d, t in items.items():
            if not isinstance(t, int) or isinstance(t, bool) or t < 0:
                raise KindMismatch(
                    f"tag for dimension {d!r} must be a natural number, got {t!r}"
                )
        clean = {d: t for d, t in items.items() if t != 0}
        object.__setattr__(self, "_tags", clean)
        object.__setattr__(self, "_key", frozenset(clean.items()))

    def __setattr__(self, name, value):
        raise AttributeError("EvalContext is immutable")

    def tag(self, dim: str) -> int:
        return self._tags.get(dim, 0)

    def with_tag(self, dim: str, t: int) -> "EvalContext":
        new = dict(self._tags)
        new[dim] = t
        return EvalContext(new)

    def __eq__(self, other):
        return isinstance(other, EvalContext) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        inner = ", ".join(f"{d}: {t}" for d, t in sorted(self._tags.items()))
        return f"EvalContext({{{inner}}})"


# --- stream expression AST ---------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Value


@dataclass(frozen=True)
class Literal:
    """A finite prefix varying along one dimension; nil past the end."""

    values: Tuple[Value, ...]
    dim: str = TIME


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Pointwise:
    op: str  # + - * == != < <= > >= and or
    left: "StreamExpr"
    right: "StreamExpr"


@dataclass(frozen=True)
class NotOp:
    operand: "StreamExpr"


@dataclass(frozen=True)
class If:
    cond: "StreamExpr"
    then: "StreamExpr"
    orelse: "StreamExpr"


@dataclass(frozen=True)
class First:
    operand: "StreamExpr"
    dim: str = TIME


@dataclass(frozen=True)
class Next:
    operand: "StreamExpr"
    dim: str = TIME


@dataclass(frozen=True)
class Prev:
    operand: "StreamExpr"
    dim: str = TIME


@dataclass(frozen=True)
class Fby:
    left: "StreamExpr"
    right: "StreamExpr"
    dim: str = TIME


@dataclass(frozen=True)
class Wvr:
    left: "StreamExpr"
    right: "StreamExpr"
    dim: str = TIME


@dataclass(frozen=True)
class Asa:
    left: "StreamExpr"
    right: "StreamExpr"
    dim: str = TIME


@dataclass(frozen=True)
class Upon:
    left: "StreamExpr"
    right: "StreamExpr"
    dim: str = TIME


@dataclass(frozen=True)
class At:
    """Intensional navigation: the operand at a shifted tag along dim."""

    operand: "StreamExpr"
    dim: str
    index: "StreamExpr"


@dataclass(frozen=True)
class Query:
    """Intensional query: the current tag along dim."""

    dim: str


StreamExpr = Union[
    Const, Literal, Ref, Pointwise, NotOp, If,
    First, Next, Prev, Fby, Wvr, Asa, Upon, At, Query,
]


def references(expr: StreamExpr):
    """All stream names an expression refers to."""
    out = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Ref):
            out.add(node.name)
        elif dataclasses.is_dataclass(node):
            for f in dataclasses.fields(node):
                value = getattr(node, f.name)
                if dataclasses.is_dataclass(value):
                    stack.append(value)
    return out


class EquationSet:
    """A validated, immutable mapping from stream names to expressions."""

    def __init__(self, equations: Mapping[str, StreamExpr]):
        self._eqs = dict(equations)

    def get(self, name: str) -> StreamExpr:
        try:
            return self._eqs[name]
        except KeyError:
            raise UnresolvedReference(f"no equation for stream {name!r}") from None

    def names(self):
        return list(self._eqs)

    def __contains__(self, name):
        return name in self._eqs

    def __len__(self):
        return len(self._eqs)


def define_streams(equations) -> EquationSet:
    """Validate a set of stream equations.

    ``equations`` is a mapping or an iterable of (name, expression) pairs.
    Names must be unique and every reference must resolve within the set;
    recursion is allowed.
    """
    if isinstance(equations, Mapping):
        pairs = list(equations.items())
    else:
        pairs = list(equations)
    eqs = {}
    for name, expr in pairs:
        if name in eqs:
            raise DuplicateName(f"stream {name!r} is defined twice")
        eqs[name] = expr
    for name, expr in eqs.items():
        for ref in references(expr):
            if ref not in eqs:
                raise UnresolvedReference(
                    f"stream {name!r} references undefined stream {ref!r}"
                )
    return EquationSet(eqs)


class Warehouse:
    """Memo cache for named stream values, keyed by (name, context).

    Entries are write-once: equations are referentially transparent, so a
    key always recomputes to the same value and duplicate concurrent
    computation is benign.
    """

    def __init__(self):
        self._cache = {}
        self.hits = 0
        self.misses = 0

    def lookup(self, key):
        if key in self._cache:
            self.hits += 1
            return True, self._cache[key]
        return False, None

    def store(self, key, value):
        self.misses += 1
        self._cache[key] = value

    def __len__(self):
        return len(self._cache)


class _Demand:
    __slots__ = ("remaining",)

    def __init__(self, budget: int):
        self.remaining = budget

    def spend(self):
        self.remaining -= 1
        if self.remaining < 0:
            raise DemandExhausted("demand budget exhausted")


@dataclass
class _State:
    eqs: EquationSet
    warehouse: Optional[Warehouse]
    demand: _Demand


def _truthy(value) -> bool:
    return bool(value)


def _pointwise(op: str, a, b):
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "==":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    if op == "and":
        return _truthy(a) and _truthy(b)
    if op == "or":
        return _truthy(a) or _truthy(b)
    raise KindMismatch(f"unknown pointwise operator {op!r}")


def _eval(expr: StreamExpr, ctx: EvalContext, st: _State) -> Value:
    st.demand.spend()

    if isinstance(expr, Const):
        return expr.value

    if isinstance(expr, Literal):
        t = ctx.tag(expr.dim)
        return expr.values[t] if t < len(expr.values) else None

    if isinstance(expr, Ref):
        key = (expr.name, ctx)
        if st.warehouse is not None:
            hit, value = st.warehouse.lookup(key)
            if hit:
                return value
        value = _eval(st.eqs.get(expr.name), ctx, st)
        if st.warehouse is not None:
            st.warehouse.store(key, value)
        return value

    if isinstance(expr, Pointwise):
        a = _eval(expr.left, ctx, st)
        b = _eval(expr.right, ctx, st)
        if a is None or b is None:
            return None
        return _pointwise(expr.op, a, b)

    if isinstance(expr, NotOp):
        a = _eval(expr.operand, ctx, st)
        return None if a is None else not _truthy(a)

    if isinstance(expr, If):
        cond = _eval(expr.cond, ctx, st)
        if cond is None:
            return None
        return _eval(expr.then if _truthy(cond) else expr.orelse, ctx, st)

    if isinstance(expr, Query):
        return ctx.tag(expr.dim)

    if isinstance(expr, At):
        index = _eval(expr.index, ctx, st)
        if index is None:
            return None
        if not isinstance(index, int) or isinstance(index, bool) or index < 0:
            raise KindMismatch(
                f"navigation tag must be a natural number, got {index!r}"
            )
        return _eval(expr.operand, ctx.with_tag(expr.dim, index), st)

    if isinstance(expr, First):
        return _eval(expr.operand, ctx.with_tag(expr.dim, 0), st)

    if isinstance(expr, Next):
        t = ctx.tag(expr.dim)
        return _eval(expr.operand, ctx.with_tag(expr.dim, t + 1), st)

    if isinstance(expr, Prev):
        t = ctx.tag(expr.dim)
        if t == 0:
            return None
        return _eval(expr.operand, ctx.with_tag(expr.dim, t - 1), st)

    if isinstance(expr, Fby):
        t = ctx.tag(expr.dim)
        if t == 0:
            return _eval(expr.left, ctx, st)
        return _eval(expr.right, ctx.with_tag(expr.dim, t - 1), st)

    if isinstance(expr, Wvr):
        # Scan the guard from position 0, counting down the demanded
        # position through the true spots.
        remaining = ctx.tag(expr.dim)
        s = 0
        while True:
            st.demand.spend()
            guard = _eval(expr.right, ctx.with_tag(expr.dim, s), st)
            if guard is None:
                return None
            if _truthy(guard):
                if remaining == 0:
                    return _eval(expr.left, ctx.with_tag(expr.dim, s), st)
                remaining -= 1
            s += 1

    if isinstance(expr, Asa):
        return _eval(Wvr(expr.left, expr.right, expr.dim), ctx.with_tag(expr.dim, 0), st)

    if isinstance(expr, Upon):
        # The left stream advances once per true guard strictly below the
        # demanded position; the guard itself always advances.
        remaining = ctx.tag(expr.dim)
        sx = 0
        sy = 0
        while remaining > 0:
            st.demand.spend()
            guard = _eval(expr.right, ctx.with_tag(expr.dim, sy), st)
            if guard is None:
                return None
            if _truthy(guard):
                sx += 1
            sy += 1
            remaining -= 1
        return _eval(expr.left, ctx.with_tag(expr.dim, sx), st)

    raise KindMismatch(f"not a stream expression: {expr!r}")


def eval_stream(
    expr: StreamExpr,
    ctx: EvalContext,
    eqs: EquationSet,
    warehouse: Optional[Warehouse] = None,
    budget: int = DEFAULT_BUDGET,
) -> Value:
    """Evaluate one stream expression at one context."""
    if budget <= 0:
        raise DemandExhausted("demand budget must be positive")
    return _eval(expr, ctx, _State(eqs, warehouse, _Demand(budget)))


def eval_prefix(
    expr,
    dim: str = TIME,
    count: int = 10,
    eqs: Optional[EquationSet] = None,
    warehouse: Optional[Warehouse] = None,
    budget: int = DEFAULT_BUDGET,
) -> list:
    """Evaluate an expression (or stream name) at tags 0..count-1 along dim."""
    if isinstance(expr, str):
        expr = Ref(expr)
    if eqs is None:
        eqs = EquationSet({})
    return [
        eval_stream(expr, EvalContext({dim: t}), eqs, warehouse, budget)
        for t in range(count)
    ]


# --- stream expression syntax ---------------------------------------------
#
# Precedence, loosest to tightest:
#   if/then/else; fby wvr asa upon (right assoc); or; and; comparison;
#   + -; *; @.d; first next prev not - (prefix); atoms.
# Temporal operators take an optional .dimension suffix and default to
# the time dimension.

_TEMPORAL_BINARY = {"fby": Fby, "wvr": Wvr, "asa": Asa, "upon": Upon}
_TEMPORAL_UNARY = {"first": First, "next": Next, "prev": Prev}
_CMP = ("==", "!=", "<", "<=", ">", ">=")
_KEYWORDS = (
    set(_TEMPORAL_BINARY)
    | set(_TEMPORAL_UNARY)
    | {"if", "then", "else", "and", "or", "not", "true", "false", "nil"}
)


class _StreamParser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != END:
            self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExprSyntaxError(
                f"expected {kind!r} but found {tok.text or 'end of input'!r} "
                f"at position {tok.column}",
                position=tok.column,
            )
        return self.advance()

    def expect_word(self, word: str):
        tok = self.peek()
        if tok.kind != NAME or tok.text != word:
            raise ExprSyntaxError(
                f"expected {word!r} at position {tok.column}", position=tok.column
            )
        self.advance()

    def at_word(self, *words) -> bool:
        tok = self.peek()
        return tok.kind == NAME and tok.text in words

    def fail(self, message: str):
        tok = self.peek()
        raise ExprSyntaxError(
            f"{message} at position {tok.column}", position=tok.column
        )

    def opt_dim(self) -> str:
        if self.peek().kind == ".":
            self.advance()
            return self.expect(NAME).text
        return TIME

    def expr(self) -> StreamExpr:
        if self.at_word("if"):
            self.advance()
            cond = self.expr()
            self.expect_word("then")
            then = self.expr()
            self.expect_word("else")
            orelse = self.expr()
            return If(cond, then, orelse)
        return self.temporal()

    def temporal(self) -> StreamExpr:
        left = self.or_expr()
        if self.at_word(*_TEMPORAL_BINARY):
            word = self.advance().text
            dim = self.opt_dim()
            right = self.temporal()  # right associative
            return _TEMPORAL_BINARY[word](left, right, dim)
        return left

    def or_expr(self) -> StreamExpr:
        node = self.and_expr()
        while self.at_word("or"):
            self.advance()
            node = Pointwise("or", node, self.and_expr())
        return node

    def and_expr(self) -> StreamExpr:
        node = self.cmp_expr()
        while self.at_word("and"):
            self.advance()
            node = Pointwise("and", node, self.cmp_expr())
        return node

    def cmp_expr(self) -> StreamExpr:
        node = self.add_expr()
        if self.peek().kind in _CMP:
            op = self.advance().kind
            node = Pointwise(op, node, self.add_expr())
        return node

    def add_expr(self) -> StreamExpr:
        node = self.mul_expr()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            node = Pointwise(op, node, self.mul_expr())
        return node

    def mul_expr(self) -> StreamExpr:
        node = self.at_expr()
        while self.peek().kind == "*":
            self.advance()
            node = Pointwise("*", node, self.at_expr())
        return node

    def at_expr(self) -> StreamExpr:
        node = self.unary()
        while self.peek().kind == "@":
            self.advance()
            self.expect(".")
            dim = self.expect(NAME).text
            node = At(node, dim, self.unary())
        return node

    def unary(self) -> StreamExpr:
        if self.at_word(*_TEMPORAL_UNARY):
            word = self.advance().text
            dim = self.opt_dim()
            return _TEMPORAL_UNARY[word](self.unary(), dim)
        if self.at_word("not"):
            self.advance()
            return NotOp(self.unary())
        if self.peek().kind == "-":
            self.advance()
            operand = self.unary()
            if isinstance(operand, Const) and isinstance(operand.value, int):
                return Const(-operand.value)
            return Pointwise("-", Const(0), operand)
        return self.atom()

    def atom(self) -> StreamExpr:
        tok = self.peek()
        if tok.kind == INT:
            self.advance()
            return Const(int(tok.text))
        if tok.kind == NAME:
            self.advance()
            if tok.text == "nil":
                return Const(None)
            if tok.text == "true":
                return Const(True)
            if tok.text == "false":
                return Const(False)
            if tok.text in _KEYWORDS:
                raise ExprSyntaxError(
                    f"unexpected keyword {tok.text!r} at position {tok.column}",
                    position=tok.column,
                )
            return Ref(tok.text)
        if tok.kind == "#":
            self.advance()
            self.expect(".")
            return Query(self.expect(NAME).text)
        if tok.kind == "[":
            self.advance()
            values = []
            if self.peek().kind != "]":
                values.append(self.literal_item())
                while self.peek().kind == ",":
                    self.advance()
                    values.append(self.literal_item())
            self.expect("]")
            return Literal(tuple(values))
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail(f"unexpected {tok.text or 'end of input'!r}")

    def literal_item(self) -> Value:
        tok = self.peek()
        if tok.kind == INT:
            self.advance()
            return int(tok.text)
        if tok.kind == "-":
            self.advance()
            return -int(self.expect(INT).text)
        if tok.kind == NAME and tok.text in ("nil", "true", "false"):
            self.advance()
            return {"nil": None, "true": True, "false": False}[tok.text]
        self.fail("expected a stream literal element")


def parse_stream_expr(source) -> StreamExpr:
    """Parse a complete stream expression from text or tokens."""
    tokens = tokenize(source) if isinstance(source, str) else list(source)
    parser = _StreamParser(tokens)
    expr = parser.expr()
    tok = parser.peek()
    if tok.kind != END:
        raise ExprSyntaxError(
            f"unexpected {tok.text!r} at position {tok.column}",
            position=tok.column,
        )
    return expr


def parse_stream_expr_prefix(tokens) -> Tuple[StreamExpr, list]:
    """Parse a leading stream expression; return it and the leftover
    tokens (used by commands that take trailing arguments)."""
    parser = _StreamParser(list(tokens))
    expr = parser.expr()
    return expr, parser.tokens[parser.i:]
