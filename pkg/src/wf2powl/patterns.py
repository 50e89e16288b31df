"""Detection of the XOR, loop and partial-order patterns.

Reachability between transitions is computed once per net as bit masks over
the sorted transition list (SCC condensation plus a reverse topological
sweep), which keeps every pattern check close to linear in practice.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from .petri import Partition, PetriNet, WorkflowNet, entry_points, exit_points, places_equivalent
from .powl import StrictOrder, transitive_closure


# -- transition reachability ------------------------------------------------

class _Reach:
    """Irreflexive transition reachability as bit masks."""

    def __init__(self, net: PetriNet) -> None:
        self.names = sorted(net.transitions)
        self.index = {t: i for i, t in enumerate(self.names)}
        n = len(self.names)
        succ: list[list[int]] = []
        for t in self.names:
            nxt = set()
            for p in net.postset(t):
                nxt.update(self.index[u] for u in net.postset(p))
            succ.append(sorted(nxt))
        self.masks = _closure_masks(n, succ)

    def bit(self, t: str) -> int:
        return 1 << self.index[t]

    def reach(self, t: str) -> int:
        return self.masks[self.index[t]]

    def reach_refl(self, t: str) -> int:
        i = self.index[t]
        return self.masks[i] | (1 << i)

    def decode(self, mask: int) -> frozenset[str]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.names[low.bit_length() - 1])
            mask ^= low
        return frozenset(out)


def _closure_masks(n: int, succ: list[list[int]]) -> list[int]:
    # iterative Tarjan; components come out sinks first
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = len(comps)
                    members.append(w)
                    if w == v:
                        break
                comps.append(members)
    comp_reach = [0] * len(comps)
    for c, members in enumerate(comps):
        out = 0
        cyclic = len(members) > 1
        for v in members:
            for w in succ[v]:
                if comp[w] == c:
                    cyclic = True
                else:
                    out |= (1 << w) | comp_reach[comp[w]]
        if cyclic:
            for v in members:
                out |= 1 << v
        comp_reach[c] = out
    return [comp_reach[comp[v]] for v in range(n)]


def transition_reachability(net: PetriNet) -> dict[str, frozenset[str]]:
    """``t -> {t' | t ~> t'}`` over non-empty transition-place paths.

    The relation is irreflexive unless ``t`` lies on a cycle.
    """
    r = _Reach(net)
    return {t: r.decode(r.masks[i]) for i, t in enumerate(r.names)}


def reachability_pairs(net: PetriNet) -> frozenset[tuple[str, str]]:
    rel = transition_reachability(net)
    return frozenset((t, u) for t, us in rel.items() for u in us)


# -- deterministic part ordering --------------------------------------------

def _bfs_rank(wf: WorkflowNet) -> dict[str, int]:
    rank: dict[str, int] = {}
    seen = {wf.source}
    queue = deque([wf.source])
    while queue:
        node = queue.popleft()
        if node in wf.transitions:
            rank[node] = len(rank)
        for nxt in sorted(wf.postset(node)):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return rank


def _ordered_partition(wf: WorkflowNet, groups: Iterable[Iterable[str]]) -> Partition:
    rank = _bfs_rank(wf)
    parts = [frozenset(g) for g in groups]
    parts.sort(key=lambda part: min(rank[t] for t in part))
    return Partition(parts, wf.transitions)


class _UnionFind:
    def __init__(self, items: Iterable[str]) -> None:
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self) -> list[list[str]]:
        out: dict[str, list[str]] = {}
        for x in sorted(self.parent):
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


# -- XOR --------------------------------------------------------------------

def xor_partition(wf: WorkflowNet) -> Partition:
    """Finest partition in which reachable transitions share a part.

    Connected components of the reachability relation coincide with those of
    the one-step successor relation, so no closure is needed here.
    """
    uf = _UnionFind(wf.transitions)
    for t in wf.transitions:
        for p in wf.postset(t):
            for u in wf.postset(p):
                uf.union(t, u)
    return _ordered_partition(wf, uf.groups())


def check_xor_pattern(wf: WorkflowNet, partition: Partition) -> bool:
    if len(partition) < 2:
        return False
    for t in wf.transitions:
        i = partition.part_of(t)
        for p in wf.postset(t):
            for u in wf.postset(p):
                if partition.part_of(u) != i:
                    return False
    return True


# -- loop -------------------------------------------------------------------

def in_between_reachable(net: PetriNet, p: str, p_end: str) -> frozenset[str]:
    """Transitions on paths from ``p`` to ``p_end`` that visit ``p_end`` only
    at the very end. Places other than ``p_end`` may repeat."""
    net.preset(p)
    net.preset(p_end)
    if p == p_end:
        return frozenset()
    forward: set[str] = set()
    seen = {p}
    stack = [p]
    while stack:
        place = stack.pop()
        for t in net.postset(place):
            if t in forward:
                continue
            forward.add(t)
            for q in net.postset(t):
                if q != p_end and q not in seen:
                    seen.add(q)
                    stack.append(q)
    backward: set[str] = set()
    seen = {p_end}
    stack = [p_end]
    while stack:
        place = stack.pop()
        for t in net.preset(place):
            if t in backward:
                continue
            backward.add(t)
            for q in net.preset(t):
                if q != p_end and q not in seen:
                    seen.add(q)
                    stack.append(q)
    return frozenset(forward & backward)


@dataclass(frozen=True)
class LoopDecomposition:
    p_do: str
    p_redo: str
    t_source: str
    t_sink: str
    do_part: frozenset[str]
    redo_part: frozenset[str]


def _loop_borders(wf: WorkflowNet) -> tuple[tuple[str, str, str, str] | None, str]:
    """Candidate ``(t_source, t_sink, p_do, p_redo)`` per conditions 1-4."""
    starts = wf.postset(wf.source)
    ends = wf.preset(wf.sink)
    if len(starts) != 1:
        return None, "source place does not have a single successor"
    if len(ends) != 1:
        return None, "sink place does not have a single predecessor"
    (ts,) = starts
    (te,) = ends
    if ts == te:
        return None, "loop border transitions coincide"
    if not (wf.is_silent(ts) and wf.is_silent(te)):
        return None, "loop border transitions are not silent"
    if wf.preset(ts) != {wf.source} or len(wf.postset(ts)) != 1:
        return None, f"{ts} does not lead from the source to a single place"
    if wf.postset(te) != {wf.sink} or len(wf.preset(te)) != 1:
        return None, f"{te} does not lead from a single place to the sink"
    (p_do,) = wf.postset(ts)
    (p_redo,) = wf.preset(te)
    if p_do == p_redo:
        return None, f"do and redo place coincide ({p_do})"
    return (ts, te, p_do, p_redo), ""


def loop_pattern_diagnosis(wf: WorkflowNet) -> tuple[LoopDecomposition | None, str]:
    """Loop decomposition, or ``None`` with the first violated condition."""
    border, why = _loop_borders(wf)
    if border is None:
        return None, why
    ts, te, p_do, p_redo = border
    t_do = in_between_reachable(wf, p_do, p_redo)
    t_redo = in_between_reachable(wf, p_redo, p_do)
    rest = set(wf.transitions) - {ts, te}
    if not t_do or not t_redo:
        return None, "empty do or redo part"
    if t_do & t_redo or (t_do | t_redo) != rest:
        return None, "do and redo parts do not partition the inner transitions"
    if wf.preset(p_do) & t_do or wf.preset(p_redo) & t_redo:
        return None, "requirement 6 fails (a part feeds its own start place)"
    if wf.postset(p_redo) & t_do or wf.postset(p_do) & t_redo:
        # implied by the earlier conditions on sound nets
        return None, "requirement 7 fails (inconsistent loop places)"
    return LoopDecomposition(p_do, p_redo, ts, te, t_do, t_redo), ""


def find_loop_pattern(wf: WorkflowNet) -> LoopDecomposition | None:
    return loop_pattern_diagnosis(wf)[0]


# -- partial order ----------------------------------------------------------

@dataclass(frozen=True)
class OrderDecomposition:
    partition: Partition
    order: StrictOrder


def _decision_sets(wf: WorkflowNet, r: _Reach) -> list[int]:
    # S_p = union minus intersection of the reflexive reach of p's consumers
    out = []
    for p in sorted(wf.places):
        consumers = wf.postset(p)
        if len(consumers) < 2:
            continue
        union = 0
        inter = -1
        for t in consumers:
            m = r.reach_refl(t)
            union |= m
            inter &= m
        s = union & ~inter
        if s:
            out.append(s)
    return out


def po_partition(wf: WorkflowNet) -> Partition:
    """Finest partition merging, for every decision place, all transitions
    reachable from some but not all of its consumers."""
    r = _Reach(wf)
    uf = _UnionFind(wf.transitions)
    for s in _decision_sets(wf, r):
        members = sorted(r.decode(s))
        for t in members[1:]:
            uf.union(members[0], t)
    return _ordered_partition(wf, uf.groups())


def execution_order(wf: WorkflowNet, partition: Partition) -> frozenset[tuple[int, int]]:
    """Raw order between parts: ``(i, j)`` when an exit point of part ``i`` is
    an entry point of part ``j``."""
    entries = [entry_points(wf, part) for part in partition]
    exits = [exit_points(wf, part) for part in partition]
    return frozenset(
        (i, j)
        for i in range(len(partition))
        for j in range(len(partition))
        if exits[i] & entries[j]
    )


def _fmt(items: Iterable[str]) -> str:
    return "{" + ", ".join(sorted(items)) + "}"


def _odd_places(wf: WorkflowNet, places: frozenset[str], part: frozenset[str]) -> list[str]:
    sig = {p: (wf.preset(p) & part, wf.postset(p) & part) for p in places}
    full = (
        frozenset().union(*(s[0] for s in sig.values())),
        frozenset().union(*(s[1] for s in sig.values())),
    )
    odd = sorted(p for p in places if sig[p] != full)
    return odd if len(odd) >= 2 else sorted(places)


def _all_equivalent(wf: WorkflowNet, places: frozenset[str], part: frozenset[str]) -> bool:
    ordered = sorted(places)
    return all(places_equivalent(wf, ordered[0], q, part) for q in ordered[1:])


def po_pattern_diagnosis(
    wf: WorkflowNet, partition: Partition
) -> tuple[OrderDecomposition | None, str]:
    """Order decomposition, or ``None`` with the first violated condition."""
    n = len(partition)
    if n < 2:
        return None, "partition has a single part"
    r = _Reach(wf)
    for s in _decision_sets(wf, r):
        members = r.decode(s)
        if len({partition.part_of(t) for t in members}) > 1:
            return None, f"decision-point transitions {_fmt(members)} span several parts"
    raw = execution_order(wf, partition)
    closed = transitive_closure(raw)
    cyclic = sorted(i for i, j in closed if i == j)
    if cyclic:
        return None, f"execution order is cyclic through part {_fmt(partition[cyclic[0]])}"
    for i, part in enumerate(partition):
        ordinal = _ordinal(i + 1)
        entries = entry_points(wf, part)
        if not _all_equivalent(wf, entries, part):
            where = ", ".join(_odd_places(wf, entries, part))
            return None, (
                f"unique local start fails on the {ordinal} part {_fmt(part)} at places {where}"
            )
        exits = exit_points(wf, part)
        if not _all_equivalent(wf, exits, part):
            where = ", ".join(_odd_places(wf, exits, part))
            return None, (
                f"unique local end fails on the {ordinal} part {_fmt(part)} at places {where}"
            )
    return OrderDecomposition(partition, StrictOrder(n, closed)), ""


def check_po_pattern(wf: WorkflowNet, partition: Partition) -> OrderDecomposition | None:
    return po_pattern_diagnosis(wf, partition)[0]


_ORDINALS = ("first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth")


def _ordinal(k: int) -> str:
    return _ORDINALS[k - 1] if k <= len(_ORDINALS) else f"{k}th"
