"""Bounded languages as canonical acyclic automata.

A finite language is stored as a node of a hash-consed, minimal, acyclic
DFA: each node is the pair (accepting, sorted outgoing edges) and every
distinct pair gets one integer id. Two languages built in the same
``DawgTable`` are equal exactly when their ids are equal, so the bounded
languages of a net and of a POWL model can be compared without listing
their traces, which matters when loops make the trace sets explode.

Both constructions mirror ``semantics.bounded_language`` and
``powl.bounded_powl_language``; ``traces`` enumerates a node to cross-check.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

from .petri import WorkflowNet
from .powl import Leaf, Loop, PartialOrder, PowlModel, StrictOrder, Xor
from .errors import BoundExceeded
from .semantics import DEFAULT_LIMITS, ExplorationLimits, Trace, _SafeEngine, _visible_potential


class DawgTable:
    EMPTY = 0
    EPSILON = 1

    def __init__(self) -> None:
        self._nodes: list[tuple[bool, tuple[tuple[str, int], ...]]] = [(False, ()), (True, ())]
        self._ids = {n: i for i, n in enumerate(self._nodes)}
        self._minlen = [1 << 30, 0]
        self._memo: dict = {}

    def node(self, accepting: bool, edges) -> int:
        edges = tuple(sorted((a, c) for a, c in edges if c != self.EMPTY))
        key = (accepting, edges)
        nid = self._ids.get(key)
        if nid is None:
            nid = len(self._nodes)
            self._nodes.append(key)
            self._ids[key] = nid
            best = 0 if accepting else min((self._minlen[c] + 1 for _, c in edges), default=1 << 30)
            self._minlen.append(best)
        return nid

    def accepting(self, n: int) -> bool:
        return self._nodes[n][0]

    def edges(self, n: int) -> tuple[tuple[str, int], ...]:
        return self._nodes[n][1]

    def step(self, n: int, label: str) -> int:
        for a, c in self._nodes[n][1]:
            if a == label:
                return c
        return self.EMPTY

    def minlen(self, n: int) -> int:
        return self._minlen[n]

    def __len__(self) -> int:
        return len(self._nodes)

    # -- algebra ------------------------------------------------------------

    def symbol(self, label: str, budget: int) -> int:
        return self.node(False, [(label, self.EPSILON)]) if budget >= 1 else self.EMPTY

    def union(self, a: int, b: int) -> int:
        if a == b or b == self.EMPTY:
            return a
        if a == self.EMPTY:
            return b
        if a > b:
            a, b = b, a
        key = ("u", a, b)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        ea, eb = dict(self.edges(a)), dict(self.edges(b))
        labels = set(ea) | set(eb)
        res = self.node(
            self.accepting(a) or self.accepting(b),
            [(x, self.union(ea.get(x, self.EMPTY), eb.get(x, self.EMPTY))) for x in labels],
        )
        self._memo[key] = res
        return res

    def truncate(self, a: int, budget: int) -> int:
        if a <= self.EPSILON:
            return a
        if self.minlen(a) > budget:
            return self.EMPTY
        key = ("t", a, budget)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if budget == 0:
            res = self.EPSILON if self.accepting(a) else self.EMPTY
        else:
            res = self.node(self.accepting(a), [(x, self.truncate(c, budget - 1)) for x, c in self.edges(a)])
        self._memo[key] = res
        return res

    def concat(self, a: int, b: int, budget: int) -> int:
        """``a . b`` restricted to words of length at most ``budget``."""
        if a == self.EMPTY or b == self.EMPTY:
            return self.EMPTY
        if self.minlen(a) + self.minlen(b) > budget:
            return self.EMPTY
        if a == self.EPSILON:
            return self.truncate(b, budget)
        key = ("c", a, b, budget)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        res = self.node(False, [(x, self.concat(c, b, budget - 1)) for x, c in self.edges(a)])
        if self.accepting(a):
            res = self.union(res, self.truncate(b, budget))
        self._memo[key] = res
        return res

    def shuffle(self, children: list[int], order: StrictOrder, budget: int) -> int:
        """Order-preserving shuffle of the children's languages."""
        if any(c == self.EMPTY for c in children):
            return self.EMPTY
        preds = [order.predecessors(j) for j in range(len(children))]
        done = -1

        def close(configs, left: int) -> frozenset:
            # a child sitting in an accepting node may finish silently
            out = set()
            stack = list(configs)
            while stack:
                cfg = stack.pop()
                if cfg in out:
                    continue
                out.add(cfg)
                for j, n in enumerate(cfg):
                    if n != done and self.accepting(n) and all(cfg[i] == done for i in preds[j]):
                        stack.append(cfg[:j] + (done,) + cfg[j + 1:])
            return frozenset(
                cfg for cfg in out if sum(self.minlen(n) for n in cfg if n != done) <= left
            )

        memo: dict = {}

        def build(configs: frozenset, left: int) -> int:
            key = (configs, left)
            hit = memo.get(key)
            if hit is not None:
                return hit
            accepting = any(all(n == done for n in cfg) for cfg in configs)
            moves: dict[str, set] = {}
            if left > 0:
                for cfg in configs:
                    for j, n in enumerate(cfg):
                        if n == done or not all(cfg[i] == done for i in preds[j]):
                            continue
                        for x, c in self.edges(n):
                            moves.setdefault(x, set()).add(cfg[:j] + (c,) + cfg[j + 1:])
            edges = []
            for x, nxt in moves.items():
                edges.append((x, build(close(nxt, left - 1), left - 1)))
            res = self.node(accepting, edges)
            memo[key] = res
            return res

        return build(close([tuple(children)], budget), budget)

    # -- enumeration --------------------------------------------------------

    def traces(self, n: int) -> Iterator[Trace]:
        stack = [(n, ())]
        while stack:
            node, prefix = stack.pop()
            if self.accepting(node):
                yield prefix
            for x, c in self.edges(node):
                stack.append((c, prefix + (x,)))

    def count(self, n: int) -> int:
        memo: dict[int, int] = {}

        def go(x: int) -> int:
            if x not in memo:
                memo[x] = int(self.accepting(x)) + sum(go(c) for _, c in self.edges(x))
            return memo[x]

        return go(n)


def model_dawg(table: DawgTable, model: PowlModel, k: int, loop_unroll: int) -> int:
    """Node for ``bounded_powl_language(model, loop_unroll, max_trace_len=k)``."""
    cache: dict[int, int] = {}

    def go(m: PowlModel) -> int:
        if isinstance(m, Leaf):
            return table.EPSILON if m.silent else table.symbol(m.label, k)
        hit = cache.get(id(m))
        if hit is not None:
            return hit
        if isinstance(m, Xor):
            res = table.EMPTY
            for c in m.children:
                res = table.union(res, go(c))
        elif isinstance(m, Loop):
            body, redo = go(m.do), go(m.redo)
            step = table.concat(redo, body, k)
            res = cur = body
            for _ in range(loop_unroll):
                cur = table.concat(cur, step, k)
                if cur == table.EMPTY:
                    break
                nxt = table.union(res, cur)
                if nxt == res:
                    break
                res = nxt
        else:
            res = table.shuffle([go(c) for c in m.children], m.order, k)
        cache[id(m)] = res
        return res

    return go(model)


def net_dawg(
    table: DawgTable,
    wf: WorkflowNet,
    k: int,
    limits: ExplorationLimits = DEFAULT_LIMITS,
) -> int:
    """Node for ``bounded_language(wf, k)`` built by a subset construction
    over silent closures (the net must be safe; unsafe markings met during
    the search raise ``UnsafeDetected``)."""
    eng = _SafeEngine(wf)
    start = eng.place_bit[wf.source]
    sink = eng.place_bit[wf.sink]
    phi = _visible_potential(eng, sink)
    labels = eng.labels
    need_cache: dict[int, int] = {}
    succ_cache: dict[int, list[tuple[int, int]]] = {}
    visited = [0]

    def need(m: int) -> int:
        v = need_cache.get(m)
        if v is None:
            v = 0
            rest = m
            while rest:
                low = rest & -rest
                v += phi[low.bit_length() - 1]
                rest ^= low
            need_cache[m] = v
        return v

    def successors(m: int):
        s = succ_cache.get(m)
        if s is None:
            s = succ_cache[m] = eng.successors(m)
            visited[0] += 1
            if visited[0] > limits.max_states:
                raise BoundExceeded(f"more than {limits.max_states} markings visited")
        return s

    def close(marks, left: int) -> frozenset[int]:
        out = set()
        stack = [m for m in marks if need(m) <= left]
        while stack:
            m = stack.pop()
            if m in out:
                continue
            out.add(m)
            for ti, m2 in successors(m):
                if labels[ti] is None and m2 not in out and need(m2) <= left:
                    stack.append(m2)
        return frozenset(out)

    memo: dict[tuple[frozenset[int], int], int] = {}

    def build(marks: frozenset[int], left: int) -> int:
        key = (marks, left)
        hit = memo.get(key)
        if hit is not None:
            return hit
        moves: dict[str, set[int]] = {}
        if left > 0:
            for m in marks:
                for ti, m2 in successors(m):
                    label = labels[ti]
                    if label is not None:
                        moves.setdefault(label, set()).add(m2)
        edges = [(x, build(close(nxt, left - 1), left - 1)) for x, nxt in moves.items()]
        res = table.node(sink in marks, edges)
        memo[key] = res
        return res

    return build(close([start], k), k)


@dataclass(frozen=True)
class LanguageDiff:
    """A shortest trace accepted by exactly one side."""

    trace: Trace
    in_net: bool

    @property
    def side(self) -> str:
        return "net only" if self.in_net else "model only"


def language_diff(
    wf: WorkflowNet,
    model: PowlModel,
    k: int = 6,
    loop_unroll: int | None = None,
    limits: ExplorationLimits = DEFAULT_LIMITS,
) -> LanguageDiff | None:
    """``None`` when the length-``k`` languages of net and model agree."""
    table = DawgTable()
    a = net_dawg(table, wf, k, limits)
    b = model_dawg(table, model, k, k if loop_unroll is None else loop_unroll)
    if a == b:
        return None
    return _witness(table, a, b)


def same_bounded_language(
    wf: WorkflowNet,
    model: PowlModel,
    k: int = 6,
    loop_unroll: int | None = None,
    limits: ExplorationLimits = DEFAULT_LIMITS,
) -> tuple[bool, Trace | None]:
    """Exact comparison of the length-``k`` languages of a net and a model.

    Returns ``(True, None)`` or ``(False, witness)`` with a shortest trace in
    the symmetric difference.
    """
    diff = language_diff(wf, model, k, loop_unroll, limits)
    return (True, None) if diff is None else (False, diff.trace)


def _witness(table: DawgTable, a: int, b: int) -> LanguageDiff:
    # breadth first, so the first difference found is a shortest one
    frontier = [(a, b, ())]
    seen = set()
    while frontier:
        nxt = []
        for x, y, prefix in frontier:
            if table.accepting(x) != table.accepting(y):
                return LanguageDiff(prefix, table.accepting(x))
            for label in sorted({l for l, _ in table.edges(x)} | {l for l, _ in table.edges(y)}):
                pair = (table.step(x, label), table.step(y, label))
                if pair[0] != pair[1] and pair not in seen:
                    seen.add(pair)
                    nxt.append((pair[0], pair[1], prefix + (label,)))
        frontier = nxt
    raise AssertionError("distinct canonical nodes must differ on some trace")
