"""Hypothesis strategies and small brute-force references for the tests."""

from __future__ import annotations

from itertools import product

from hypothesis import strategies as st

from wf2powl.corpus import PowlParams, random_powl
from wf2powl.petri import PetriNet
from wf2powl.powl import Leaf, Loop, PartialOrder, Xor

LABELS = "abcdefgh"


@st.composite
def models(draw, max_leaves: int = 7, silent: bool = True):
    """Small POWL models; labels may repeat across leaves."""
    budget = [draw(st.integers(1, max_leaves))]

    def leaf():
        if silent and draw(st.integers(0, 9)) == 0:
            return Leaf(None)
        return Leaf(draw(st.sampled_from(LABELS)))

    def build(n: int):
        if n == 1:
            return leaf()
        op = draw(st.sampled_from(["xor", "loop", "po"]))
        if op == "loop":
            k = draw(st.integers(1, n - 1))
            return Loop(build(k), build(n - k))
        parts = draw(st.integers(2, min(n, 3)))
        cuts = sorted(draw(st.lists(st.integers(1, n - 1), min_size=parts - 1,
                                    max_size=parts - 1, unique=True)))
        sizes = [b - a for a, b in zip([0, *cuts], [*cuts, n])]
        kids = [build(s) for s in sizes]
        if op == "xor":
            return Xor(kids)
        pairs = [(i, j) for i in range(len(kids)) for j in range(i + 1, len(kids))
                 if draw(st.booleans())]
        perm = draw(st.permutations(range(len(kids))))
        return PartialOrder(kids, [(perm[i], perm[j]) for i, j in pairs])

    return build(budget[0])


def seeded_models(count: int, seed: int = 0, **params):
    p = PowlParams(**params)
    return [random_powl(p, seed + i) for i in range(count)]


def brute_reachability(net: PetriNet) -> set[tuple[str, str]]:
    """Closure of the one-step relation t -> p -> t' by repeated squaring."""
    ts = sorted(net.transitions)
    rel = {(a, b) for a, b in product(ts, ts) if net.postset(a) & net.preset(b)}
    while True:
        extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        if not extra:
            return rel
        rel |= extra


def pattern_instances(wf, max_depth: int = 30):
    """Walk the pattern decomposition of ``wf`` in detection order (xor,
    loop, partial order) and yield ``(kind, parent, projections)`` for every
    instance found, recursing into the projections."""
    from wf2powl.patterns import (
        check_po_pattern,
        check_xor_pattern,
        find_loop_pattern,
        po_partition,
        xor_partition,
    )
    from wf2powl.projections import loop_project, po_project, xor_project

    stack = [(wf, 0)]
    while stack:
        net, depth = stack.pop()
        if len(net.transitions) == 1 or depth > max_depth:
            continue
        part = xor_partition(net)
        if check_xor_pattern(net, part):
            kind, subs = "xor", [xor_project(net, p) for p in part]
        else:
            dec = find_loop_pattern(net)
            if dec is not None:
                kind, subs = "loop", [loop_project(net, dec, "do"), loop_project(net, dec, "redo")]
            else:
                part = po_partition(net)
                po = check_po_pattern(net, part)
                if po is None:
                    continue
                kind, subs = "po", [po_project(net, p) for p in part]
        yield kind, net, subs
        stack.extend((s, depth + 1) for s in subs)
