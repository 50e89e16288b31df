"""Token game, state-space exploration, soundness checking and the bounded
visible language of a workflow net.

Safe exploration encodes a marking as an int bit mask over the sorted place
list; that is what keeps the soundness check and the language oracle usable
on nets with a few hundred nodes. The ``Marking`` class is the public,
multiset-valued view.
"""

from __future__ import annotations

from collections import Counter, deque
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from .errors import BoundExceeded, NotEnabled, NotInNet, UnsafeDetected
from .petri import PetriNet, WorkflowNet

Trace = tuple[str, ...]


class Marking(Mapping[str, int]):
    """Multiset of places. ``m[p]`` is 0 for unmarked places."""

    __slots__ = ("_counts", "_key")

    def __init__(self, tokens: Mapping[str, int] | Iterable[str] = ()) -> None:
        if isinstance(tokens, Mapping):
            counts = {p: int(c) for p, c in tokens.items() if c}
        else:
            counts = dict(Counter(tokens))
        if any(c < 0 for c in counts.values()):
            raise ValueError("token counts must be non-negative")
        self._key = tuple(sorted(counts.items()))
        self._counts = dict(self._key)

    @classmethod
    def of(cls, *places: str) -> Marking:
        return cls(places)

    def __getitem__(self, place: str) -> int:
        return self._counts.get(place, 0)

    def __contains__(self, place: object) -> bool:
        return place in self._counts

    def __iter__(self) -> Iterator[str]:
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Marking):
            return self._key == other._key
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._key)

    def __lt__(self, other: Marking) -> bool:
        return self._key < other._key

    def total(self) -> int:
        return sum(self._counts.values())

    def __str__(self) -> str:
        parts = [p if c == 1 else f"{p}^{c}" for p, c in self._key]
        return "[" + ", ".join(parts) + "]"

    def __repr__(self) -> str:
        return f"Marking({str(self)})"


@dataclass(frozen=True)
class ExplorationLimits:
    max_states: int = 1_000_000
    max_token_count_per_place: int = 2

    def __post_init__(self) -> None:
        if self.max_states <= 0 or self.max_token_count_per_place <= 0:
            raise ValueError("exploration limits must be positive")


DEFAULT_LIMITS = ExplorationLimits()


@dataclass(frozen=True)
class ReachabilityGraph:
    initial: Marking
    states: tuple[Marking, ...]
    edges: tuple[tuple[Marking, str, Marking], ...]

    def successors(self, state: Marking) -> list[tuple[str, Marking]]:
        return [(t, m2) for m1, t, m2 in self.edges if m1 == state]


@dataclass(frozen=True)
class SoundnessReport:
    no_dead_transitions: bool
    option_to_complete: bool
    proper_completion: bool
    dead_transitions: tuple[str, ...] = ()
    stuck_states: tuple[Marking, ...] = field(default=(), repr=False)
    improper_states: tuple[Marking, ...] = field(default=(), repr=False)
    state_count: int = 0

    @property
    def sound(self) -> bool:
        return self.no_dead_transitions and self.option_to_complete and self.proper_completion

    def __bool__(self) -> bool:
        return self.sound

    def summary(self) -> str:
        if self.sound:
            return f"sound ({self.state_count} reachable markings)"
        problems = []
        if not self.no_dead_transitions:
            problems.append(f"dead transitions {list(self.dead_transitions)}")
        if not self.option_to_complete:
            problems.append(f"{len(self.stuck_states)} markings cannot reach the sink")
        if not self.proper_completion:
            problems.append(f"{len(self.improper_states)} markings mark the sink with leftover tokens")
        return "; ".join(problems)


# -- plain token game -------------------------------------------------------

def enabled(net: PetriNet, marking: Marking) -> set[str]:
    return {t for t in net.transitions if all(marking[p] >= 1 for p in net.preset(t))}


def fire(net: PetriNet, marking: Marking, t: str) -> Marking:
    if t not in net.transitions:
        raise NotInNet(t)
    pre = net.preset(t)
    if any(marking[p] < 1 for p in pre):
        raise NotEnabled(t)
    counts = dict(marking.items())
    for p in pre:
        counts[p] -= 1
    for p in net.postset(t):
        counts[p] = counts.get(p, 0) + 1
    return Marking(counts)


# -- compiled safe engine ---------------------------------------------------

class _SafeEngine:
    """Bit-mask token game, valid while the net stays safe."""

    def __init__(self, net: PetriNet) -> None:
        self.places = sorted(net.places)
        self.place_bit = {p: 1 << i for i, p in enumerate(self.places)}
        self.transitions = sorted(net.transitions)
        self.labels = [net.transitions[t] for t in self.transitions]
        self.pre = [self._mask(net.preset(t)) for t in self.transitions]
        self.post = [self._mask(net.postset(t)) for t in self.transitions]
        consumers: dict[int, list[int]] = {}
        for i, t in enumerate(self.transitions):
            for p in net.preset(t):
                consumers.setdefault(self.place_bit[p], []).append(i)
        self.consumers = consumers
        self.always = [i for i, m in enumerate(self.pre) if m == 0]

    def _mask(self, places: Iterable[str]) -> int:
        m = 0
        for p in places:
            m |= self.place_bit[p]
        return m

    def marking(self, mask: int) -> Marking:
        return Marking(p for i, p in enumerate(self.places) if mask >> i & 1)

    def successors(self, m: int) -> list[tuple[int, int]]:
        cands = set(self.always)
        rest = m
        while rest:
            low = rest & -rest
            cands.update(self.consumers.get(low, ()))
            rest ^= low
        out = []
        pre, post = self.pre, self.post
        for i in sorted(cands):
            need = pre[i]
            if m & need == need:
                left = m ^ need
                clash = left & post[i]
                if clash:
                    low = clash & -clash
                    raise UnsafeDetected(self.places[low.bit_length() - 1])
                out.append((i, left | post[i]))
        return out


def _explore_masks(wf: WorkflowNet, limits: ExplorationLimits):
    eng = _SafeEngine(wf)
    init = eng.place_bit[wf.source]
    index = {init: 0}
    order = [init]
    edges: list[tuple[int, int, int]] = []
    queue = deque([init])
    while queue:
        m = queue.popleft()
        for ti, m2 in eng.successors(m):
            if m2 not in index:
                if len(index) >= limits.max_states:
                    raise BoundExceeded(f"more than {limits.max_states} reachable markings")
                index[m2] = len(order)
                order.append(m2)
                queue.append(m2)
            edges.append((index[m], ti, index[m2]))
    return eng, order, edges


def _explore_counts(wf: WorkflowNet, limits: ExplorationLimits) -> ReachabilityGraph:
    init = Marking.of(wf.source)
    transitions = sorted(wf.transitions)
    index = {init: 0}
    order = [init]
    edges = []
    queue = deque([init])
    while queue:
        m = queue.popleft()
        for t in transitions:
            if all(m[p] >= 1 for p in wf.preset(t)):
                m2 = fire(wf, m, t)
                for p in wf.postset(t):
                    if m2[p] > limits.max_token_count_per_place:
                        raise BoundExceeded(
                            f"place {p!r} exceeds {limits.max_token_count_per_place} tokens"
                        )
                if m2 not in index:
                    if len(index) >= limits.max_states:
                        raise BoundExceeded(f"more than {limits.max_states} reachable markings")
                    index[m2] = len(order)
                    order.append(m2)
                    queue.append(m2)
                edges.append((m, t, m2))
    return ReachabilityGraph(init, tuple(order), tuple(edges))


def explore(
    wf: WorkflowNet, limits: ExplorationLimits = DEFAULT_LIMITS, *, safe: bool = True
) -> ReachabilityGraph:
    """Breadth-first reachability graph from ``[source]``.

    In safe mode the first marking with two tokens on a place raises
    ``UnsafeDetected``; otherwise token counts are tracked up to
    ``limits.max_token_count_per_place``.
    """
    if not safe:
        return _explore_counts(wf, limits)
    eng, order, edges = _explore_masks(wf, limits)
    states = [eng.marking(m) for m in order]
    return ReachabilityGraph(
        initial=states[0],
        states=tuple(states),
        edges=tuple((states[a], eng.transitions[t], states[b]) for a, t, b in edges),
    )


def check_safe(wf: WorkflowNet, limits: ExplorationLimits = DEFAULT_LIMITS) -> bool:
    try:
        _explore_masks(wf, limits)
    except UnsafeDetected:
        return False
    return True


def check_sound(wf: WorkflowNet, limits: ExplorationLimits = DEFAULT_LIMITS) -> SoundnessReport:
    """Soundness of a safe WF-net; raises ``UnsafeDetected`` for unsafe nets."""
    eng, order, edges = _explore_masks(wf, limits)
    sink = eng.place_bit[wf.sink]
    fired = {t for _, t, _ in edges}
    dead = tuple(t for i, t in enumerate(eng.transitions) if i not in fired)

    preds: list[list[int]] = [[] for _ in order]
    for a, _, b in edges:
        preds[b].append(a)
    can_finish = [False] * len(order)
    stack = [i for i, m in enumerate(order) if m == sink]
    for i in stack:
        can_finish[i] = True
    while stack:
        for a in preds[stack.pop()]:
            if not can_finish[a]:
                can_finish[a] = True
                stack.append(a)
    stuck = tuple(eng.marking(order[i]) for i, ok in enumerate(can_finish) if not ok)
    improper = tuple(eng.marking(m) for m in order if m & sink and m != sink)
    return SoundnessReport(
        no_dead_transitions=not dead,
        option_to_complete=not stuck,
        proper_completion=not improper,
        dead_transitions=dead,
        stuck_states=stuck,
        improper_states=improper,
        state_count=len(order),
    )


def _visible_potential(eng: _SafeEngine, sink: int) -> list[int]:
    """Per-place lower bounds ``phi`` on visible firings still needed.

    For every transition ``t`` the potentials satisfy
    ``sum(phi[•t]) <= visible(t) + sum(phi[t•])`` and ``phi[sink] = 0``, i.e.
    ``phi`` is a feasible dual of the marking equation with visible cost. Any
    run from ``M`` to ``[sink]`` therefore fires at least ``sum(phi[M])``
    visible transitions. Each transition hands its whole budget to its
    first input place and nothing to the others.
    """
    n = len(eng.places)
    inf = 1 << 60
    phi = [inf] * n
    phi[sink.bit_length() - 1] = 0
    ins = [[i for i in range(n) if m >> i & 1] for m in eng.pre]
    outs = [[i for i in range(n) if m >> i & 1] for m in eng.post]
    changed = True
    while changed:
        changed = False
        for t in range(len(eng.transitions)):
            if not ins[t]:
                continue
            budget = 0 if eng.labels[t] is None else 1
            for q in outs[t]:
                budget += phi[q]
            budget = min(budget, inf)
            first = ins[t][0]
            for p in ins[t]:
                share = budget if p == first else 0
                if share < phi[p]:
                    phi[p] = share
                    changed = True
    return [0 if v >= inf else v for v in phi]


def bounded_language(
    wf: WorkflowNet,
    k_visible: int,
    limits: ExplorationLimits = DEFAULT_LIMITS,
    *,
    check_safety: bool = True,
) -> set[Trace]:
    """All visible traces of length at most ``k_visible`` of complete runs
    from ``[source]`` to ``[sink]``.

    Silent firings are free; (marking, trace) pairs are deduplicated, so
    silent cycles terminate. ``limits.max_states`` caps the number of pairs.
    States that provably need more than the remaining budget of visible
    firings to finish are cut, which keeps large concurrent nets tractable
    without changing the result.

    With ``check_safety`` the whole state space is explored first and an
    unsafe net raises ``UnsafeDetected``; without it only the explored part
    is checked.
    """
    if k_visible < 0:
        raise ValueError("k_visible must be non-negative")
    if check_safety:
        _explore_masks(wf, limits)  # raises UnsafeDetected
    eng = _SafeEngine(wf)
    start = eng.place_bit[wf.source]
    sink = eng.place_bit[wf.sink]
    phi = _visible_potential(eng, sink)
    need_cache: dict[int, int] = {}

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

    # traces are interned as nodes of a prefix trie
    trie: dict[tuple[int, str], int] = {}
    parent: list[tuple[int, str | None]] = [(-1, None)]
    depth = [0]
    done: set[int] = set()
    seen = {(start, 0)}
    stack = [(start, 0)] if need(start) <= k_visible else []
    labels = eng.labels
    while stack:
        m, tr = stack.pop()
        if m == sink:
            done.add(tr)
            continue
        for ti, m2 in eng.successors(m):
            label = labels[ti]
            if label is None:
                nxt = tr
                used = depth[tr]
            else:
                used = depth[tr] + 1
                if used > k_visible:
                    continue
            if used + need(m2) > k_visible:
                continue
            if label is not None:
                key = (tr, label)
                nxt = trie.get(key)
                if nxt is None:
                    nxt = trie[key] = len(parent)
                    parent.append(key)
                    depth.append(used)
            state = (m2, nxt)
            if state not in seen:
                if len(seen) >= limits.max_states:
                    raise BoundExceeded(f"more than {limits.max_states} (marking, trace) pairs")
                seen.add(state)
                stack.append(state)
    return {_unroll(parent, node) for node in done}


def _unroll(parent: list, node: int) -> Trace:
    out = []
    while node > 0:
        node, label = parent[node]
        out.append(label)
    return tuple(reversed(out))

