"""Shared builders for the test suite."""

import itertools

from ctxcalc.model import (
    Context,
    ContextSet,
    DimensionRegistry,
    MicroContext,
    TagKind,
    make_context,
)
from ctxcalc import ops


def int_registry(names="defgh"):
    reg = DimensionRegistry()
    for n in names:
        reg.register(n, TagKind.INT)
    return reg


def context_over(reg, pairs):
    return make_context(reg, pairs)


def undirected_range_oracle(c1, c2):
    """Independent enumeration of the undirected range over integer dims.

    All simple contexts on the merged dimension set whose shared-dimension
    tags lie in the per-dimension min/max envelope, each carrying the
    unshared remainders of both operands.
    """
    shared = c1.dims() & c2.dims()
    residue = ops.disjunction(ops.hiding(c1, shared), ops.hiding(c2, shared))
    dims = sorted(shared, key=lambda d: d.name)
    envelopes = []
    for d in dims:
        tags = [m.tag for m in c1 if m.dimension == d]
        tags += [m.tag for m in c2 if m.dimension == d]
        envelopes.append(range(min(tags), max(tags) + 1))
    members = set()
    for combo in itertools.product(*envelopes):
        micros = set(residue.entries)
        micros.update(MicroContext(d, v) for d, v in zip(dims, combo))
        members.add(Context(micros))
    return ContextSet(members)
