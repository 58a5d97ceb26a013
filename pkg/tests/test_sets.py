import random

import pytest
from hypothesis import given
import hypothesis.strategies as st

from ctxcalc import ops, sets
from ctxcalc.errors import (
    IllTypedPredicate,
    NonSimpleOperand,
    TagTypeMismatch,
    UnboundedBox,
)
from ctxcalc.model import (
    NULL_CONTEXT,
    Context,
    ContextSet,
    DimensionRegistry,
    TagKind,
    make_context,
)
from ctxcalc.sets import (
    Box,
    Cmp,
    Lit,
    Logic,
    Name,
    box_contains,
    box_enumerate,
    box_make,
    eval_predicate,
    join,
    lift_choice,
    lift_difference,
    lift_hiding,
    lift_override,
    lift_projection,
    lift_substitution,
    set_intersection,
    set_union,
)

from conftest import int_registry

REG = int_registry("defgh")


def ctx(*pairs):
    return make_context(REG, pairs)


def cs(*contexts):
    return ContextSet(contexts)


def dims(*names):
    return frozenset(REG.get(n) for n in names)


simple_st = st.dictionaries(
    st.sampled_from("defg"), st.integers(0, 3), max_size=3
).map(lambda d: make_context(REG, list(d.items())))
set_st = st.lists(simple_st, max_size=4).map(ContextSet)


# --- construction ----------------------------------------------------------


def test_context_set_rejects_non_simple_member():
    with pytest.raises(NonSimpleOperand):
        ContextSet([ctx(("d", 1), ("d", 2))])


def test_context_set_dedupes():
    assert len(cs(ctx(("d", 1)), ctx(("d", 1)))) == 1


# --- lifted operators ---------------------------------------------------------


def test_lift_projection():
    s = cs(ctx(("d", 1), ("e", 2)), ctx(("d", 3), ("e", 4)))
    assert lift_projection(s, dims("d")) == cs(ctx(("d", 1)), ctx(("d", 3)))
    assert lift_projection(s, frozenset()) == cs(NULL_CONTEXT)
    assert lift_projection(cs(), dims("d")) == cs()


def test_lift_hiding():
    s = cs(ctx(("d", 1), ("e", 2)))
    assert lift_hiding(s, dims("d")) == cs(ctx(("e", 2)))
    assert lift_hiding(s, frozenset()) == s
    assert lift_hiding(cs(), dims("d")) == cs()


def test_lift_substitution():
    d = REG.get("d")
    assert lift_substitution(cs(ctx(("d", 1), ("e", 2))), d, 9) == cs(
        ctx(("d", 9), ("e", 2))
    )
    assert lift_substitution(cs(ctx(("e", 2))), d, 9) == cs(ctx(("e", 2)))
    assert lift_substitution(cs(), d, 9) == cs()
    with pytest.raises(TagTypeMismatch):
        lift_substitution(cs(ctx(("e", 2))), d, "nine")


def test_lift_choice():
    s1, s2 = cs(ctx(("d", 1))), cs(ctx(("e", 2)))
    for seed in range(50):
        assert lift_choice(s1, s2, random.Random(seed)) in (s1, s2)
    fixed = lift_choice(s1, s2, random.Random(7))
    assert all(
        lift_choice(s1, s2, random.Random(7)) == fixed for _ in range(100)
    )
    assert lift_choice(s1, s1, random.Random(0)) == s1


def test_lift_override():
    got = lift_override(cs(ctx(("d", 1))), cs(ctx(("d", 2)), ctx(("e", 3))))
    assert got == cs(ctx(("d", 2)), ctx(("d", 1), ("e", 3)))
    s = cs(ctx(("d", 1)), ctx(("e", 5)))
    assert lift_override(cs(NULL_CONTEXT), s) == s
    assert lift_override(cs(), s) == cs()


def test_lift_difference():
    assert lift_difference(cs(ctx(("d", 1), ("e", 2))), cs(ctx(("e", 2)))) == cs(
        ctx(("d", 1))
    )
    s = cs(ctx(("d", 1)), ctx(("e", 5)))
    assert lift_difference(s, cs(NULL_CONTEXT)) == s
    assert lift_difference(cs(), s) == cs()


# --- relational operators ----------------------------------------------------


def test_join_agreeing_pair():
    got = join(cs(ctx(("d", 1), ("e", 2))), cs(ctx(("d", 1), ("f", 3))))
    assert got == cs(ctx(("d", 1), ("e", 2), ("f", 3)))


def test_join_disagreeing_pair_drops():
    assert join(cs(ctx(("d", 1))), cs(ctx(("d", 2)))) == cs()


def test_join_disjoint_universes():
    assert join(cs(ctx(("e", 2))), cs(ctx(("f", 3)))) == cs(ctx(("e", 2), ("f", 3)))


def test_set_intersection():
    got = set_intersection(cs(ctx(("d", 1), ("e", 2))), cs(ctx(("d", 1), ("f", 3))))
    assert got == cs(ctx(("d", 1)))
    assert set_intersection(cs(ctx(("d", 1))), cs(ctx(("d", 2)))) == cs(NULL_CONTEXT)
    assert set_intersection(cs(), cs(ctx(("d", 1)))) == cs()


def test_set_union_worked_value():
    got = set_union(cs(ctx(("d", 1), ("e", 2))), cs(ctx(("d", 3), ("f", 4))))
    assert got == cs(
        ctx(("d", 1), ("e", 2), ("f", 4)), ctx(("d", 3), ("f", 4), ("e", 2))
    )
    assert set_union(cs(), cs(ctx(("d", 1)))) == cs()


def test_set_union_same_domain_idempotent():
    s = cs(ctx(("d", 1), ("e", 2)), ctx(("d", 3), ("e", 0)))
    assert set_union(s, s) == s


@given(set_st, set_st)
def test_relational_commutativity(s1, s2):
    assert join(s1, s2) == join(s2, s1)
    assert set_intersection(s1, s2) == set_intersection(s2, s1)
    assert set_union(s1, s2) == set_union(s2, s1)


@given(set_st)
def test_lift_results_stay_simple(s):
    for c in lift_override(s, s):
        assert c.is_simple()
    for c in lift_difference(s, s):
        assert c.is_simple()
    for c in join(s, s):
        assert c.is_simple()


def _agreeing_sets(base_pairs, extras1, extras2):
    """Two sets whose every cross pair agrees on the shared dimensions."""
    base = make_context(REG, base_pairs)
    s1 = ContextSet(
        ops.disjunction(base, make_context(REG, [e])) for e in extras1
    )
    s2 = ContextSet(
        ops.disjunction(base, make_context(REG, [e])) for e in extras2
    )
    return s1, s2


def test_restricted_intersection_identity():
    # when every cross pair agrees on the shared dimensions, pairwise
    # intersection equals join projected onto them
    s1, s2 = _agreeing_sets(
        [("d", 1)], [("e", 2), ("e", 3)], [("f", 4), ("f", 5)]
    )
    shared = s1.dims_union() & s2.dims_union()
    assert set_intersection(s1, s2) == lift_projection(join(s1, s2), shared)


def test_unrestricted_intersection_identity_fails():
    # a disagreeing pair keeps its (empty) intersection on the left side
    # but is dropped by the join on the right side
    s1, s2 = cs(ctx(("d", 1))), cs(ctx(("d", 2)))
    shared = s1.dims_union() & s2.dims_union()
    assert set_intersection(s1, s2) == cs(NULL_CONTEXT)
    assert lift_projection(join(s1, s2), shared) == cs()


# --- boxes ------------------------------------------------------------------


def box_registry():
    reg = DimensionRegistry()
    reg.register("d1", TagKind.INT, [1, 2, 3])
    reg.register("d2", TagKind.INT, [1, 2, 3])
    return reg


def test_box_enumerate_less_than():
    reg = box_registry()
    b = box_make(
        [reg.get("d1"), reg.get("d2")], Cmp("<", Name("d1"), Name("d2"))
    )
    got = box_enumerate(b)
    want = ContextSet(
        make_context(reg, [("d1", i), ("d2", j)])
        for i in (1, 2, 3)
        for j in (1, 2, 3)
        if i < j
    )
    assert got == want
    assert len(got) == 3


def test_box_contains_exact_domain():
    reg = int_registry("de")
    b = box_make([reg.get("d")], Lit(True))
    assert box_contains(b, make_context(reg, [("d", 1)]))
    assert not box_contains(b, make_context(reg, [("d", 1), ("e", 2)]))
    assert not box_contains(b, make_context(reg, [("e", 2)]))


def test_box_contains_needs_simple():
    reg = int_registry("d")
    b = box_make([reg.get("d")], Lit(True))
    with pytest.raises(NonSimpleOperand):
        box_contains(b, make_context(reg, [("d", 1), ("d", 2)]))


def test_box_false_is_empty():
    reg = box_registry()
    b = box_make([reg.get("d1")], Lit(False))
    assert box_enumerate(b) == cs()


def test_box_enumerate_needs_domains():
    reg = int_registry("d")
    b = box_make([reg.get("d")], Lit(True))
    with pytest.raises(UnboundedBox):
        box_enumerate(b)


def test_box_predicate_type_errors():
    reg = box_registry()
    d1, d2 = reg.get("d1"), reg.get("d2")
    with pytest.raises(IllTypedPredicate):
        box_make([d1], Name("zz"))  # unbound name
    with pytest.raises(IllTypedPredicate):
        box_make([d1], Cmp("<", Name("d1"), Lit("text")))  # mixed kinds
    with pytest.raises(IllTypedPredicate):
        box_make([d1], Lit(3))  # not boolean
    with pytest.raises(IllTypedPredicate):
        box_make([d1, d2], Logic("and", Name("d1"), Lit(True)))


def test_box_enum_symbol_resolution():
    reg = DimensionRegistry()
    reg.register("month", TagKind.ENUM, ["Ja", "Fe", "Mr"])
    b = box_make([reg.get("month")], Cmp("<", Name("month"), Name("Mr")))
    got = box_enumerate(b)
    want = ContextSet(
        make_context(reg, [("month", s)]) for s in ("Ja", "Fe")
    )
    assert got == want


def test_box_members_share_domain():
    reg = box_registry()
    b = box_make(
        [reg.get("d1"), reg.get("d2")], Cmp("<=", Name("d1"), Name("d2"))
    )
    domains = {frozenset(c.dims()) for c in box_enumerate(b)}
    assert domains == {frozenset([reg.get("d1"), reg.get("d2")])}


def test_box_enumerate_matches_contains_brute_force():
    reg = box_registry()
    d1, d2 = reg.get("d1"), reg.get("d2")
    b = box_make(
        [d1, d2],
        Logic("or", Cmp("==", Name("d1"), Lit(2)), Cmp(">", Name("d2"), Name("d1"))),
    )
    enumerated = box_enumerate(b)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            c = make_context(reg, [("d1", i), ("d2", j)])
            assert box_contains(b, c) == (c in enumerated)
