"""POWL models: leaves, exclusive choice, loops and strict partial orders,
plus their (bounded) language.

Child indices of a partial order are 0-based throughout the package.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .errors import BadArity, InvalidModel, NotStrict

Trace = tuple[str, ...]


def transitive_closure(pairs: Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    succ: dict[int, set[int]] = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    closed: set[tuple[int, int]] = set()
    for start in succ:
        seen: set[int] = set()
        stack = list(succ[start])
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(succ.get(x, ()))
        closed.update((start, x) for x in seen)
    return frozenset(closed)


def transitive_reduction(closed: Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    """Hasse diagram of a transitively closed strict order."""
    closed = frozenset(closed)
    succ: dict[int, set[int]] = {}
    for a, b in closed:
        succ.setdefault(a, set()).add(b)
    keep = set()
    for a, b in closed:
        if not any((c, b) in closed for c in succ[a] if c != b):
            keep.add((a, b))
    return frozenset(keep)


@dataclass(frozen=True)
class StrictOrder:
    """Strict partial order over ``range(size)``, stored transitively closed."""

    size: int
    pairs: frozenset[tuple[int, int]]

    def __init__(self, size: int, pairs: Iterable[tuple[int, int]] = ()) -> None:
        if size < 2:
            raise BadArity(f"a partial order needs at least 2 elements, got {size}")
        raw = set()
        for a, b in pairs:
            if not (0 <= a < size and 0 <= b < size):
                raise InvalidModel(f"order pair ({a}, {b}) out of range for size {size}")
            raw.add((int(a), int(b)))
        closed = transitive_closure(raw)
        loops = [a for a, b in closed if a == b]
        if loops:
            raise NotStrict(min(loops))
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "pairs", closed)

    @classmethod
    def _from_closed(cls, size: int, pairs: Iterable[tuple[int, int]]) -> StrictOrder:
        # caller guarantees ``pairs`` is already a closed strict order
        obj = object.__new__(cls)
        object.__setattr__(obj, "size", size)
        object.__setattr__(obj, "pairs", frozenset(pairs))
        return obj

    def precedes(self, i: int, j: int) -> bool:
        return (i, j) in self.pairs

    def predecessors(self, j: int) -> list[int]:
        return sorted(i for i, b in self.pairs if b == j)

    def reduction(self) -> frozenset[tuple[int, int]]:
        return transitive_reduction(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))


class PowlModel:
    """Base class of the four model kinds."""

    __slots__ = ()

    def key(self) -> str:
        """Structural text key; deterministic across processes."""
        raise NotImplementedError

    def __str__(self) -> str:
        return self.key()


@dataclass(frozen=True, repr=False)
class Leaf(PowlModel):
    label: str | None = None

    def __post_init__(self) -> None:
        if self.label is not None and (not isinstance(self.label, str) or not self.label):
            raise InvalidModel("visible leaves need a non-empty label")

    @property
    def silent(self) -> bool:
        return self.label is None

    def key(self) -> str:
        return "tau" if self.label is None else repr(self.label)

    def __repr__(self) -> str:
        return f"Leaf({self.label!r})"


@dataclass(frozen=True, repr=False)
class Xor(PowlModel):
    children: tuple[PowlModel, ...]

    def __init__(self, *children: PowlModel | Sequence[PowlModel]) -> None:
        if len(children) == 1 and not isinstance(children[0], PowlModel):
            children = tuple(children[0])
        if len(children) < 2:
            raise BadArity(f"xor needs at least 2 children, got {len(children)}")
        object.__setattr__(self, "children", tuple(children))

    def key(self) -> str:
        return "X(" + ", ".join(c.key() for c in self.children) + ")"

    def __repr__(self) -> str:
        return f"Xor({', '.join(map(repr, self.children))})"


@dataclass(frozen=True, repr=False)
class Loop(PowlModel):
    do: PowlModel
    redo: PowlModel

    def key(self) -> str:
        return f"*({self.do.key()}, {self.redo.key()})"

    @property
    def children(self) -> tuple[PowlModel, PowlModel]:
        return (self.do, self.redo)

    def __repr__(self) -> str:
        return f"Loop({self.do!r}, {self.redo!r})"


@dataclass(frozen=True, repr=False)
class PartialOrder(PowlModel):
    children: tuple[PowlModel, ...]
    order: StrictOrder

    def __init__(
        self,
        children: Sequence[PowlModel],
        order: StrictOrder | Iterable[tuple[int, int]] = (),
    ) -> None:
        children = tuple(children)
        if len(children) < 2:
            raise BadArity(f"partial order needs at least 2 children, got {len(children)}")
        if not isinstance(order, StrictOrder):
            order = StrictOrder(len(children), order)
        if order.size != len(children):
            raise BadArity(f"order over {order.size} elements for {len(children)} children")
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "order", order)

    def key(self) -> str:
        kids = ", ".join(c.key() for c in self.children)
        rel = ",".join(f"{a}<{b}" for a, b in sorted(self.order.pairs))
        return f"PO({kids} | {rel})"

    def __repr__(self) -> str:
        return f"PartialOrder([{', '.join(map(repr, self.children))}], {sorted(self.order.pairs)})"


def sequence(*children: PowlModel) -> PowlModel:
    """Total order over ``children`` (a single child is returned as-is)."""
    if len(children) == 1:
        return children[0]
    return PartialOrder(children, [(i, i + 1) for i in range(len(children) - 1)])


def validate(model: PowlModel) -> None:
    """Raise ``InvalidModel`` (``BadArity``/``NotStrict``) unless ``model`` is
    well formed. Constructors already enforce this; the check guards against
    hand-assembled objects."""
    stack = [model]
    while stack:
        m = stack.pop()
        if isinstance(m, Leaf):
            if m.label is not None and not m.label:
                raise InvalidModel("empty leaf label")
        elif isinstance(m, Xor):
            if len(m.children) < 2:
                raise BadArity("xor with fewer than 2 children")
            stack.extend(m.children)
        elif isinstance(m, Loop):
            stack.extend((m.do, m.redo))
        elif isinstance(m, PartialOrder):
            n = len(m.children)
            if n < 2 or m.order.size != n:
                raise BadArity("partial order arity mismatch")
            closed = transitive_closure(m.order.pairs)
            if closed != m.order.pairs:
                raise InvalidModel("stored order is not transitively closed")
            for a, b in closed:
                if a == b:
                    raise NotStrict(a)
            stack.extend(m.children)
        else:
            raise InvalidModel(f"unknown model node {m!r}")


def leaves(model: PowlModel) -> list[Leaf]:
    if isinstance(model, Leaf):
        return [model]
    out: list[Leaf] = []
    for c in model.children:
        out.extend(leaves(c))
    return out


def size(model: PowlModel) -> int:
    if isinstance(model, Leaf):
        return 1
    return 1 + sum(size(c) for c in model.children)


def depth(model: PowlModel) -> int:
    if isinstance(model, Leaf):
        return 0
    return 1 + max(depth(c) for c in model.children)


# -- canonical form ---------------------------------------------------------

def canonicalize(model: PowlModel) -> PowlModel:
    """Sort xor and partial-order children by structural key."""
    if isinstance(model, Leaf):
        return model
    if isinstance(model, Loop):
        return Loop(canonicalize(model.do), canonicalize(model.redo))
    kids = [canonicalize(c) for c in model.children]
    keys = [k.key() for k in kids]
    perm = sorted(range(len(kids)), key=lambda i: keys[i])
    if isinstance(model, Xor):
        return Xor([kids[i] for i in perm])
    where = {old: new for new, old in enumerate(perm)}
    # relabelling keeps the relation closed and strict
    order = StrictOrder._from_closed(len(kids), ((where[a], where[b]) for a, b in model.order.pairs))
    return PartialOrder([kids[i] for i in perm], order)


def simplify(model: PowlModel) -> PowlModel:
    """Language-preserving clean-up: drop silent leaves from partial orders
    and flatten nested xors. The stored order is closed, so removing a child
    keeps every constraint that ran through it."""
    if isinstance(model, Leaf):
        return model
    if isinstance(model, Loop):
        return Loop(simplify(model.do), simplify(model.redo))
    kids = [simplify(c) for c in model.children]
    if isinstance(model, Xor):
        flat: list[PowlModel] = []
        for k in kids:
            flat.extend(k.children if isinstance(k, Xor) else [k])
        return Xor(flat)
    keep = [i for i, k in enumerate(kids) if not (isinstance(k, Leaf) and k.silent)]
    if not keep:
        return Leaf(None)
    if len(keep) == 1:
        return kids[keep[0]]
    where = {old: new for new, old in enumerate(keep)}
    pairs = [(where[a], where[b]) for a, b in model.order.pairs if a in where and b in where]
    return PartialOrder([kids[i] for i in keep], pairs)


# -- language ---------------------------------------------------------------

@dataclass(frozen=True)
class LanguageBounds:
    loop_unroll: int = 6
    max_trace_len: int = 6

    def __post_init__(self) -> None:
        if self.loop_unroll < 0 or self.max_trace_len < 0:
            raise ValueError("language bounds must be non-negative")


def ordered_shuffle(
    sequences: Sequence[Sequence[str]],
    order: StrictOrder | Iterable[tuple[int, int]] = (),
) -> set[Trace]:
    """Interleavings of ``sequences`` that keep each sequence's own order and
    let sequence ``j`` start only after every ``i`` with ``i < j`` in
    ``order`` has finished."""
    seqs = [tuple(s) for s in sequences]
    if not isinstance(order, StrictOrder):
        order = StrictOrder(len(seqs), order)
    return _shuffle(seqs, order)


def _shuffle(seqs: list[Trace], order: StrictOrder) -> set[Trace]:
    n = len(seqs)
    preds = [order.predecessors(j) for j in range(n)]
    lengths = [len(s) for s in seqs]
    out: set[Trace] = set()
    seen: set[tuple[tuple[int, ...], Trace]] = set()

    def walk(pos: tuple[int, ...], acc: Trace) -> None:
        if (pos, acc) in seen:
            return
        seen.add((pos, acc))
        if all(pos[i] == lengths[i] for i in range(n)):
            out.add(acc)
            return
        for j in range(n):
            if pos[j] < lengths[j] and all(pos[i] == lengths[i] for i in preds[j]):
                nxt = pos[:j] + (pos[j] + 1,) + pos[j + 1:]
                walk(nxt, acc + (seqs[j][pos[j]],))

    walk((0,) * n, ())
    return out


def bounded_powl_language(
    model: PowlModel, bounds: LanguageBounds | None = None, **kwargs
) -> set[Trace]:
    """Traces of ``model`` no longer than ``bounds.max_trace_len``; loops are
    expanded at most ``bounds.loop_unroll`` times through their redo part."""
    if bounds is None:
        bounds = LanguageBounds(**kwargs)
    elif kwargs:
        raise TypeError("pass either bounds or keyword bounds, not both")
    cache: dict[int, set[Trace]] = {}
    return set(_lang(model, bounds, cache))


def _concat(left: set[Trace], right: set[Trace], k: int) -> set[Trace]:
    return {a + b for a in left for b in right if len(a) + len(b) <= k}


def _lang(model: PowlModel, b: LanguageBounds, cache: dict) -> set[Trace]:
    k = b.max_trace_len
    if isinstance(model, Leaf):
        if model.label is None:
            return {()}
        return {(model.label,)} if k >= 1 else set()
    cached = cache.get(id(model))
    if cached is not None:
        return cached
    if isinstance(model, Xor):
        out: set[Trace] = set()
        for c in model.children:
            out |= _lang(c, b, cache)
    elif isinstance(model, Loop):
        body = _lang(model.do, b, cache)
        redo = _lang(model.redo, b, cache)
        out = set(body)
        frontier = body
        step = _concat(redo, body, k)
        for _ in range(b.loop_unroll):
            frontier = _concat(frontier, step, k) - out
            if not frontier:
                break
            out |= frontier
    else:
        out = _po_lang(model, b, cache)
    cache[id(model)] = out
    return out


def _po_lang(model: PartialOrder, b: LanguageBounds, cache: dict) -> set[Trace]:
    k = b.max_trace_len
    langs = [sorted(_lang(c, b, cache), key=len) for c in model.children]
    if any(not lang for lang in langs):
        return set()
    mins = [len(lang[0]) for lang in langs]
    tail = [0] * (len(langs) + 1)
    for i in range(len(langs) - 1, -1, -1):
        tail[i] = tail[i + 1] + mins[i]
    if tail[0] > k:
        return set()
    out: set[Trace] = set()
    pick: list[Trace] = []

    def choose(i: int, used: int) -> None:
        if i == len(langs):
            out.update(_shuffle(list(pick), model.order))
            return
        for seq in langs[i]:
            if used + len(seq) + tail[i + 1] > k:
                break
            pick.append(seq)
            choose(i + 1, used + len(seq))
            pick.pop()

    choose(0, 0)
    return out
