"""Seeded random POWL models and benchmark corpora built from them."""

from __future__ import annotations

import json
import os
import random
from dataclasses import asdict, dataclass, field

from .model_io import write_pnml, write_powl_json
from .petri import WorkflowNet
from .powl import Leaf, Loop, PartialOrder, PowlModel, Xor
from .powl_to_net import to_wf_net


@dataclass(frozen=True)
class PowlParams:
    max_depth: int = 4
    leaf_count_range: tuple[int, int] = (1, 40)
    xor_weight: float = 1.0
    loop_weight: float = 1.0
    po_weight: float = 1.0
    order_density: float = 0.4
    silent_probability: float = 0.05
    max_branching: int = 4

    def __post_init__(self) -> None:
        lo, hi = self.leaf_count_range
        if not 1 <= lo <= hi:
            raise ValueError("leaf_count_range must satisfy 1 <= low <= high")
        if not 0.0 <= self.order_density <= 1.0:
            raise ValueError("order_density must lie in [0, 1]")
        if not 0.0 <= self.silent_probability <= 1.0:
            raise ValueError("silent_probability must lie in [0, 1]")
        if min(self.xor_weight, self.loop_weight, self.po_weight) < 0:
            raise ValueError("operator weights must be non-negative")
        if self.max_depth < 0 or self.max_branching < 2:
            raise ValueError("max_depth >= 0 and max_branching >= 2 required")


def _label(i: int) -> str:
    # a, b, ..., z, aa, ab, ...
    out = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        out = chr(ord("a") + r) + out
    return out


class _Generator:
    def __init__(self, params: PowlParams, rng: random.Random) -> None:
        self.p = params
        self.rng = rng
        self.labels = 0

    def leaf(self) -> Leaf:
        if self.rng.random() < self.p.silent_probability:
            return Leaf(None)
        name = _label(self.labels)
        self.labels += 1
        return Leaf(name)

    def split(self, n: int, parts: int) -> list[int]:
        cuts = sorted(self.rng.sample(range(1, n), parts - 1))
        return [b - a for a, b in zip([0, *cuts], [*cuts, n])]

    def build(self, n: int, depth: int) -> PowlModel:
        if n == 1:
            return self.leaf()
        p = self.p
        ops, weights = [], []
        for op, w in (("xor", p.xor_weight), ("loop", p.loop_weight), ("po", p.po_weight)):
            if w > 0:
                ops.append(op)
                weights.append(w)
        if not ops:
            ops, weights = ["po"], [1.0]
        op = self.rng.choices(ops, weights)[0]
        if depth + 1 >= p.max_depth:
            # out of depth: put the remaining leaves side by side
            op = "po" if "po" in ops else "xor"
            sizes = [1] * n
        elif op == "loop":
            sizes = self.split(n, 2)
        else:
            sizes = self.split(n, self.rng.randint(2, min(n, p.max_branching)))
        kids = [self.build(s, depth + 1) for s in sizes]
        if op == "loop":
            return Loop(kids[0], kids[1])
        if op == "xor":
            return Xor(kids)
        pairs = [
            (i, j)
            for i in range(len(kids))
            for j in range(i + 1, len(kids))
            if self.rng.random() < p.order_density
        ]
        perm = list(range(len(kids)))
        self.rng.shuffle(perm)
        return PartialOrder(kids, [(perm[i], perm[j]) for i, j in pairs])


def random_powl(params: PowlParams | None = None, seed: int = 0, leaves: int | None = None) -> PowlModel:
    """Random model with a leaf count drawn from ``params.leaf_count_range``
    (or exactly ``leaves``). Order relations are random DAGs over the
    children; the same seed always gives the same model."""
    params = params or PowlParams()
    rng = random.Random(seed)
    if leaves is None:
        leaves = rng.randint(*params.leaf_count_range)
    if params.max_depth == 0 and leaves > 1:
        raise ValueError("max_depth 0 only allows a single leaf")
    return _Generator(params, rng).build(leaves, 0)


@dataclass(frozen=True)
class BenchItem:
    name: str
    net: WorkflowNet
    model: PowlModel
    target: int
    seed: int


BENCH_PARAMS = PowlParams(max_depth=6, leaf_count_range=(8, 250), silent_probability=0.02)


def make_benchmark(
    count: int,
    min_transitions: int = 20,
    max_transitions: int = 400,
    seed: int = 0,
    params: PowlParams = BENCH_PARAMS,
    tolerance: float = 0.2,
    max_tries: int = 400,
) -> list[BenchItem]:
    """``count`` nets whose transition counts are spread log-uniformly over
    ``[min_transitions, max_transitions]``, each within ``tolerance`` of its
    target and inside the range. Size is steered through the leaf count of
    the generated model; a bounded rejection loop retries until the net
    lands in range."""
    if count <= 0 or not 1 <= min_transitions <= max_transitions:
        raise ValueError("need count > 0 and 1 <= min_transitions <= max_transitions")
    rng = random.Random(seed)
    items = []
    for i in range(count):
        if count == 1:
            target = min_transitions
        else:
            frac = i / (count - 1)
            target = round(min_transitions * (max_transitions / min_transitions) ** frac)
        ratio = 1.8  # transitions per leaf, refined as we go
        for _ in range(max_tries):
            item_seed = rng.randrange(2**32)
            leaves = max(1, round(target / ratio))
            model = random_powl(params, item_seed, leaves=leaves)
            net = to_wf_net(model)
            size = len(net.transitions)
            if abs(size - target) <= tolerance * target and min_transitions <= size <= max_transitions:
                items.append(BenchItem(f"net{i:04d}", net, model, target, item_seed))
                break
            ratio = 0.7 * ratio + 0.3 * (size / leaves)
        else:
            raise RuntimeError(f"no net within {tolerance:.0%} of {target} transitions")
    return items


@dataclass
class CorpusManifest:
    seed: int
    count: int
    min_transitions: int
    max_transitions: int
    params: dict
    items: list[dict] = field(default_factory=list)


def write_corpus(directory: str, items: list[BenchItem], manifest: CorpusManifest) -> None:
    """Write ``<name>.pnml`` and ``<name>.json`` per item plus
    ``manifest.json``."""
    os.makedirs(directory, exist_ok=True)
    manifest.items = []
    for it in items:
        with open(os.path.join(directory, f"{it.name}.pnml"), "wb") as fh:
            fh.write(write_pnml(it.net, it.name))
        with open(os.path.join(directory, f"{it.name}.json"), "wb") as fh:
            fh.write(write_powl_json(it.model))
        manifest.items.append({
            "name": it.name,
            "seed": it.seed,
            "target": it.target,
            "transitions": len(it.net.transitions),
            "places": len(it.net.places),
        })
    with open(os.path.join(directory, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(asdict(manifest), fh, indent=2)
        fh.write("\n")


def generate_corpus(
    directory: str,
    count: int,
    seed: int,
    min_transitions: int = 20,
    max_transitions: int = 400,
    params: PowlParams = BENCH_PARAMS,
) -> list[BenchItem]:
    items = make_benchmark(count, min_transitions, max_transitions, seed, params)
    manifest = CorpusManifest(seed, count, min_transitions, max_transitions, asdict(params))
    write_corpus(directory, items, manifest)
    return items
