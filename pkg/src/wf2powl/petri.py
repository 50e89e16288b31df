"""Place/transition nets, workflow nets and the structural queries on them.

Nets are values: every rewrite or projection builds a new object and the
original is left untouched. Node identifiers are plain strings; places and
transitions share one namespace and must not collide.

A transition label is either a non-empty activity name or ``None`` for the
silent activity.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping
from types import MappingProxyType

from .errors import (
    DisconnectedNode,
    InvalidNet,
    NoUniqueSink,
    NoUniqueSource,
    NotInNet,
)

GENERATED_PREFIX = "__gen_"
_GENERATED_RE = re.compile(r"^__gen_[a-z]+(\d+)$")


class PetriNet:
    """An ordinary (unweighted) Petri net ``(P, T, F)`` with a labelling."""

    __slots__ = ("_places", "_transitions", "_arcs", "_pre", "_post")

    def __init__(
        self,
        places: Iterable[str] = (),
        transitions: Mapping[str, str | None] | None = None,
        arcs: Iterable[tuple[str, str]] = (),
    ) -> None:
        self._places = frozenset(places)
        self._transitions = MappingProxyType(dict(transitions or {}))
        self._arcs = frozenset((str(a), str(b)) for a, b in arcs)
        self._check()
        pre: dict[str, set[str]] = {n: set() for n in self.nodes()}
        post: dict[str, set[str]] = {n: set() for n in self.nodes()}
        for x, y in self._arcs:
            post[x].add(y)
            pre[y].add(x)
        self._pre = {n: frozenset(s) for n, s in pre.items()}
        self._post = {n: frozenset(s) for n, s in post.items()}

    def _check(self) -> None:
        overlap = self._places & self._transitions.keys()
        if overlap:
            raise InvalidNet(f"ids used for both places and transitions: {sorted(overlap)}")
        for t, label in self._transitions.items():
            if label is not None and (not isinstance(label, str) or not label):
                raise InvalidNet(f"transition {t!r} has an empty or non-text label")
        for x, y in self._arcs:
            x_place, y_place = x in self._places, y in self._places
            x_trans, y_trans = x in self._transitions, y in self._transitions
            if not (x_place or x_trans):
                raise InvalidNet(f"arc ({x!r}, {y!r}) starts at an unknown node")
            if not (y_place or y_trans):
                raise InvalidNet(f"arc ({x!r}, {y!r}) ends at an unknown node")
            if x_place == y_place:
                raise InvalidNet(f"arc ({x!r}, {y!r}) is not bipartite")

    # -- basic views --------------------------------------------------------

    @property
    def places(self) -> frozenset[str]:
        return self._places

    @property
    def transitions(self) -> Mapping[str, str | None]:
        return self._transitions

    @property
    def arcs(self) -> frozenset[tuple[str, str]]:
        return self._arcs

    def nodes(self) -> Iterator[str]:
        yield from self._places
        yield from self._transitions

    def label(self, t: str) -> str | None:
        try:
            return self._transitions[t]
        except KeyError:
            raise NotInNet(t) from None

    def is_silent(self, t: str) -> bool:
        return self.label(t) is None

    def preset(self, node: str) -> frozenset[str]:
        try:
            return self._pre[node]
        except KeyError:
            raise NotInNet(node) from None

    def postset(self, node: str) -> frozenset[str]:
        try:
            return self._post[node]
        except KeyError:
            raise NotInNet(node) from None

    # -- value semantics ----------------------------------------------------

    def _key(self):
        return (self._places, frozenset(self._transitions.items()), self._arcs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PetriNet):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(|P|={len(self._places)}, "
            f"|T|={len(self._transitions)}, |F|={len(self._arcs)})"
        )

    def as_petri_net(self) -> PetriNet:
        return PetriNet(self._places, self._transitions, self._arcs)


class WorkflowNet(PetriNet):
    """A Petri net with a unique source place, a unique sink place, and every
    node on a directed path from the source to the sink.

    The constructor validates the shape and raises a ``NotWorkflowNet``
    subclass when it does not hold.
    """

    __slots__ = ("source", "sink")

    def __init__(
        self,
        places: Iterable[str] = (),
        transitions: Mapping[str, str | None] | None = None,
        arcs: Iterable[tuple[str, str]] = (),
    ) -> None:
        super().__init__(places, transitions, arcs)
        sources = sorted(p for p in self._places if not self._pre[p])
        sinks = sorted(p for p in self._places if not self._post[p])
        if len(sources) != 1:
            raise NoUniqueSource(f"expected one place with empty pre-set, found {sources}")
        if len(sinks) != 1:
            raise NoUniqueSink(f"expected one place with empty post-set, found {sinks}")
        self.source: str = sources[0]
        self.sink: str = sinks[0]
        forward = _closure(self.source, self._post)
        backward = _closure(self.sink, self._pre)
        for node in sorted(self.nodes()):
            if node not in forward or node not in backward:
                raise DisconnectedNode(node)

    @property
    def net(self) -> PetriNet:
        return self.as_petri_net()

    def __repr__(self) -> str:
        return (
            f"WorkflowNet(|P|={len(self._places)}, |T|={len(self._transitions)}, "
            f"source={self.source!r}, sink={self.sink!r})"
        )


def _closure(start: str, succ: Mapping[str, frozenset[str]]) -> set[str]:
    seen = {start}
    stack = [start]
    while stack:
        for nxt in succ[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


class Partition:
    """An ordered partition of a set of transitions into non-empty parts."""

    __slots__ = ("parts", "_index")

    def __init__(self, parts: Iterable[Iterable[str]], universe: Iterable[str] | None = None):
        self.parts: tuple[frozenset[str], ...] = tuple(frozenset(p) for p in parts)
        self._index: dict[str, int] = {}
        for i, part in enumerate(self.parts):
            if not part:
                raise ValueError(f"part {i} is empty")
            for t in part:
                if t in self._index:
                    raise ValueError(f"{t!r} occurs in parts {self._index[t]} and {i}")
                self._index[t] = i
        if universe is not None:
            universe = set(universe)
            if universe != self._index.keys():
                missing = sorted(universe - self._index.keys())
                extra = sorted(self._index.keys() - universe)
                raise ValueError(f"partition does not cover universe (missing={missing}, extra={extra})")

    def part_of(self, t: str) -> int:
        return self._index[t]

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[frozenset[str]]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> frozenset[str]:
        return self.parts[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return set(self.parts) == set(other.parts)

    def __hash__(self) -> int:
        return hash(frozenset(self.parts))

    def __repr__(self) -> str:
        inner = ", ".join("{" + ", ".join(sorted(p)) + "}" for p in self.parts)
        return f"Partition([{inner}])"


# -- structural queries -----------------------------------------------------

def preset(net: PetriNet, node: str) -> frozenset[str]:
    return net.preset(node)


def postset(net: PetriNet, node: str) -> frozenset[str]:
    return net.postset(node)


def _check_transitions(net: PetriNet, subset: Iterable[str]) -> frozenset[str]:
    subset = frozenset(subset)
    for t in subset:
        if t not in net.transitions:
            raise NotInNet(t)
    return subset


def project_places(net: PetriNet, subset: Iterable[str]) -> frozenset[str]:
    """Places connected to at least one transition of ``subset``."""
    subset = _check_transitions(net, subset)
    out: set[str] = set()
    for t in subset:
        out |= net.preset(t)
        out |= net.postset(t)
    return frozenset(out)


def project_flow(
    net: PetriNet, places: Iterable[str], transitions: Iterable[str]
) -> frozenset[tuple[str, str]]:
    nodes = frozenset(places) | frozenset(transitions)
    return frozenset((x, y) for x, y in net.arcs if x in nodes and y in nodes)


def places_equivalent(net: PetriNet, p: str, q: str, subset: Iterable[str]) -> bool:
    subset = frozenset(subset)
    return (
        net.preset(p) & subset == net.preset(q) & subset
        and net.postset(p) & subset == net.postset(q) & subset
    )


def entry_points(wf: WorkflowNet, subset: Iterable[str]) -> frozenset[str]:
    """Places through which control enters ``subset`` from outside (or from
    the source place)."""
    subset = _check_transitions(wf, subset)
    candidates: set[str] = set()
    for t in subset:
        candidates |= wf.preset(t)
    return frozenset(
        p for p in candidates
        if p == wf.source or not wf.preset(p) <= subset
    )


def exit_points(wf: WorkflowNet, subset: Iterable[str]) -> frozenset[str]:
    subset = _check_transitions(wf, subset)
    candidates: set[str] = set()
    for t in subset:
        candidates |= wf.postset(t)
    return frozenset(
        p for p in candidates
        if p == wf.sink or not wf.postset(p) <= subset
    )


def is_free_choice(net: PetriNet) -> bool:
    # overlapping presets must coincide; equivalently every place shared by
    # two consumers has consumers with identical presets
    for p in net.places:
        consumers = list(net.postset(p))
        if len(consumers) < 2:
            continue
        first = net.preset(consumers[0])
        if any(net.preset(t) != first for t in consumers[1:]):
            return False
    return True


def is_marked_graph(net: PetriNet) -> bool:
    return all(len(net.preset(p)) <= 1 and len(net.postset(p)) <= 1 for p in net.places)


def validate_workflow_net(net: PetriNet) -> WorkflowNet:
    if isinstance(net, WorkflowNet):
        return net
    return WorkflowNet(net.places, net.transitions, net.arcs)


class IdFactory:
    """Deterministic supplier of fresh node ids for rewrites of ``net``.

    Ids look like ``__gen_p7`` / ``__gen_t8``; numbering continues after the
    highest generated id already present, so the same input always yields
    the same output ids.
    """

    def __init__(self, net: PetriNet) -> None:
        top = 0
        for node in net.nodes():
            m = _GENERATED_RE.match(node)
            if m:
                top = max(top, int(m.group(1)))
        self._next = top + 1

    def _take(self, kind: str) -> str:
        n = self._next
        self._next += 1
        return f"{GENERATED_PREFIX}{kind}{n}"

    def place(self) -> str:
        return self._take("p")

    def transition(self) -> str:
        return self._take("t")
