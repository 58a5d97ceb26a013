"""Operators over sets of simple contexts, plus intensional Box sets.

The lifted operators apply a context operator member-wise (or pairwise);
the relational operators treat context sets like relations over their
shared dimensions.  A Box describes a context set by a dimension list and
a predicate over the current tags instead of by enumeration.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Tuple, Union

from .errors import (
    IllTypedPredicate,
    NonSimpleOperand,
    NonSimpleResidue,
    UnboundedBox,
)
from .model import (
    Context,
    ContextSet,
    Dimension,
    EnumValue,
    MicroContext,
    TagKind,
    TagValue,
    format_tag,
    kind_of,
    tag_lt,
)
from . import ops


# --- lifted operators -------------------------------------------------------

def lift_projection(s: ContextSet, dims: frozenset) -> ContextSet:
    """Project every member onto ``dims``."""
    return ContextSet(ops.projection(c, dims) for c in s)


def lift_hiding(s: ContextSet, dims: frozenset) -> ContextSet:
    """Hide ``dims`` in every member."""
    return ContextSet(ops.hiding(c, dims) for c in s)


def lift_substitution(s: ContextSet, dimension: Dimension, tag) -> ContextSet:
    """Substitute the micro context (dimension, tag) into every member."""
    micro = Context([MicroContext(dimension, tag)])
    return ContextSet(ops.substitution(c, micro) for c in s)


def lift_choice(s1: ContextSet, s2: ContextSet, rng: random.Random) -> ContextSet:
    """Return one of the two sets, picked uniformly by the rng."""
    return (s1, s2)[rng.randrange(2)]


def lift_override(s1: ContextSet, s2: ContextSet) -> ContextSet:
    """Pairwise override over the cartesian product of the two sets."""
    return ContextSet(ops.override(a, b) for a in s1 for b in s2)


def lift_difference(s1: ContextSet, s2: ContextSet) -> ContextSet:
    """Pairwise difference over the cartesian product of the two sets."""
    return ContextSet(ops.difference(a, b) for a in s1 for b in s2)


# --- relational operators -----------------------------------------------------

def _shared_dims(s1: ContextSet, s2: ContextSet) -> frozenset:
    return s1.dims_union() & s2.dims_union()


def join(s1: ContextSet, s2: ContextSet) -> ContextSet:
    """Natural join: unite pairs that agree on the shared dimensions."""
    shared = _shared_dims(s1, s2)
    members = []
    for a in s1:
        pa = ops.projection(a, shared)
        for b in s2:
            if pa == ops.projection(b, shared):
                members.append(ops.disjunction(a, b))
    return ContextSet(members)


def set_intersection(s1: ContextSet, s2: ContextSet) -> ContextSet:
    """Pairwise conjunction over the cartesian product of the two sets."""
    return ContextSet(ops.conjunction(a, b) for a in s1 for b in s2)


def set_union(s1: ContextSet, s2: ContextSet) -> ContextSet:
    """Pairwise union where each member keeps the other's unshared part."""
    shared = _shared_dims(s1, s2)
    members = []
    for a in s1:
        for b in s2:
            members.append(ops.disjunction(a, ops.hiding(b, shared)))
            members.append(ops.disjunction(b, ops.hiding(a, shared)))
    for m in members:
        # Unshared-dimension clashes cannot arise: any clashing dimension
        # is shared and therefore hidden from the other operand.
        if not m.is_simple():
            raise NonSimpleResidue(f"set union produced a non-simple member {m}")
    return ContextSet(members)


# --- box predicates -----------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    value: TagValue


@dataclass(frozen=True)
class Name:
    """A bare identifier: a dimension variable or an enum symbol."""

    name: str


@dataclass(frozen=True)
class Arith:
    op: str  # + - *
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Cmp:
    op: str  # == != < <= > >=
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Logic:
    op: str  # and / or
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Not:
    operand: "BoolExpr"


BoolExpr = Union[Lit, Name, Arith, Cmp, Logic, Not]

_CMP_OPS = ("==", "!=", "<", "<=", ">", ">=")
_PRED_LEVEL = {"or": 0, "and": 1, "not": 2, "cmp": 3, "add": 4, "mul": 5}


def _resolve_symbol(name: str, dims) -> EnumValue:
    """Resolve a non-dimension identifier as an enum symbol of one box dim."""
    hits = [
        member
        for d in dims
        if d.tag_type is TagKind.ENUM
        for member in d.domain
        if member.symbol == name
    ]
    if len(hits) == 1:
        return hits[0]
    if not hits:
        raise IllTypedPredicate(f"unbound name {name!r} in box predicate")
    raise IllTypedPredicate(f"ambiguous enum symbol {name!r} in box predicate")


def _kind_descriptor(value_kind, enumeration=None):
    return (value_kind, enumeration)


def _predicate_kind(node: BoolExpr, dims_by_name) -> tuple:
    """Kind of a predicate node: (TagKind, enumeration-or-None)."""
    if isinstance(node, Lit):
        k = kind_of(node.value)
        enum_name = node.value.enumeration if k is TagKind.ENUM else None
        return _kind_descriptor(k, enum_name)
    if isinstance(node, Name):
        dim = dims_by_name.get(node.name)
        if dim is not None:
            if dim.tag_type is TagKind.ENUM:
                return _kind_descriptor(TagKind.ENUM, dim.domain[0].enumeration)
            return _kind_descriptor(dim.tag_type)
        member = _resolve_symbol(node.name, dims_by_name.values())
        return _kind_descriptor(TagKind.ENUM, member.enumeration)
    if isinstance(node, Arith):
        for side in (node.left, node.right):
            if _predicate_kind(side, dims_by_name) != _kind_descriptor(TagKind.INT):
                raise IllTypedPredicate(
                    f"arithmetic {node.op!r} needs integer operands"
                )
        return _kind_descriptor(TagKind.INT)
    if isinstance(node, Cmp):
        lk = _predicate_kind(node.left, dims_by_name)
        rk = _predicate_kind(node.right, dims_by_name)
        if lk != rk:
            raise IllTypedPredicate(
                f"comparison {node.op!r} over mismatched kinds"
            )
        return _kind_descriptor(TagKind.BOOL)
    if isinstance(node, Logic):
        for side in (node.left, node.right):
            if _predicate_kind(side, dims_by_name) != _kind_descriptor(TagKind.BOOL):
                raise IllTypedPredicate(f"{node.op!r} needs boolean operands")
        return _kind_descriptor(TagKind.BOOL)
    if isinstance(node, Not):
        if _predicate_kind(node.operand, dims_by_name) != _kind_descriptor(TagKind.BOOL):
            raise IllTypedPredicate("'not' needs a boolean operand")
        return _kind_descriptor(TagKind.BOOL)
    raise IllTypedPredicate(f"not a predicate node: {node!r}")


def eval_predicate(node: BoolExpr, dims_by_name, assignment) -> TagValue:
    """Evaluate a predicate under an assignment of dimension names to tags."""
    if isinstance(node, Lit):
        return node.value
    if isinstance(node, Name):
        if node.name in assignment:
            return assignment[node.name]
        return _resolve_symbol(node.name, dims_by_name.values())
    if isinstance(node, Arith):
        a = eval_predicate(node.left, dims_by_name, assignment)
        b = eval_predicate(node.right, dims_by_name, assignment)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        return a * b
    if isinstance(node, Cmp):
        a = eval_predicate(node.left, dims_by_name, assignment)
        b = eval_predicate(node.right, dims_by_name, assignment)
        if node.op == "==":
            return a == b
        if node.op == "!=":
            return a != b
        if node.op == "<":
            return tag_lt(a, b)
        if node.op == "<=":
            return not tag_lt(b, a)
        if node.op == ">":
            return tag_lt(b, a)
        return not tag_lt(a, b)
    if isinstance(node, Logic):
        a = eval_predicate(node.left, dims_by_name, assignment)
        if node.op == "and":
            return bool(a) and bool(eval_predicate(node.right, dims_by_name, assignment))
        return bool(a) or bool(eval_predicate(node.right, dims_by_name, assignment))
    if isinstance(node, Not):
        return not eval_predicate(node.operand, dims_by_name, assignment)
    raise IllTypedPredicate(f"not a predicate node: {node!r}")


def predicate_text(node: BoolExpr, parent_level: int = -1) -> str:
    """Render a predicate in the syntax the box-literal parser accepts."""
    if isinstance(node, Lit):
        return format_tag(node.value)
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Not):
        level = _PRED_LEVEL["not"]
        inner = predicate_text(node.operand, level)
        text = f"not {inner}"
    elif isinstance(node, Cmp):
        level = _PRED_LEVEL["cmp"]
        text = (
            f"{predicate_text(node.left, level)} {node.op} "
            f"{predicate_text(node.right, level)}"
        )
    elif isinstance(node, Logic):
        level = _PRED_LEVEL[node.op]
        text = (
            f"{predicate_text(node.left, level - 1)} {node.op} "
            f"{predicate_text(node.right, level)}"
        )
    elif isinstance(node, Arith):
        level = _PRED_LEVEL["mul"] if node.op == "*" else _PRED_LEVEL["add"]
        text = (
            f"{predicate_text(node.left, level - 1)} {node.op} "
            f"{predicate_text(node.right, level)}"
        )
    else:
        raise IllTypedPredicate(f"not a predicate node: {node!r}")
    if level <= parent_level:
        return f"({text})"
    return text


# --- boxes ----------------------------------------------------------------------

@dataclass(frozen=True)
class Box:
    """An intensional context set: ordered dimensions plus a tag predicate.

    Membership is always decidable; enumeration needs every dimension to
    carry a declared finite domain.
    """

    dims: Tuple[Dimension, ...]
    predicate: BoolExpr

    def __str__(self):
        names = ", ".join(d.name for d in self.dims)
        return f"Box[{names} | {predicate_text(self.predicate)}]"


def box_make(dims, predicate: BoolExpr) -> Box:
    """Validate and build a box; the predicate must be boolean-kinded."""
    dims = tuple(dims)
    if not dims:
        raise IllTypedPredicate("a box needs at least one dimension")
    by_name = {d.name: d for d in dims}
    if len(by_name) != len(dims):
        raise IllTypedPredicate("box dimensions must be distinct")
    if _predicate_kind(predicate, by_name) != _kind_descriptor(TagKind.BOOL):
        raise IllTypedPredicate("box predicate must be boolean")
    return Box(dims, predicate)


def box_contains(box: Box, c: Context) -> bool:
    """Whether a simple context over exactly the box dimensions satisfies
    the predicate."""
    if not c.is_simple():
        raise NonSimpleOperand("box membership is defined for simple contexts")
    if c.dims() != frozenset(box.dims):
        return False
    by_name = {d.name: d for d in box.dims}
    assignment = {m.dimension.name: m.tag for m in c}
    return bool(eval_predicate(box.predicate, by_name, assignment))


def box_enumerate(box: Box) -> ContextSet:
    """Materialize the box over the declared domains of its dimensions."""
    for d in box.dims:
        if d.domain is None:
            raise UnboundedBox(
                f"dimension {d.name!r} has no finite domain to enumerate"
            )
    by_name = {d.name: d for d in box.dims}
    members = []
    for combo in itertools.product(*(d.domain for d in box.dims)):
        assignment = {d.name: v for d, v in zip(box.dims, combo)}
        if eval_predicate(box.predicate, by_name, assignment):
            members.append(
                Context(MicroContext(d, v) for d, v in zip(box.dims, combo))
            )
    return ContextSet(members)
