"""Compositional construction of a safe and sound WF-net from a POWL model."""

from __future__ import annotations

from .powl import Leaf, Loop, PartialOrder, PowlModel, Xor, validate
from .petri import WorkflowNet


class _Builder:
    def __init__(self) -> None:
        self.places: list[str] = ["source", "sink"]
        self.transitions: dict[str, str | None] = {}
        self.arcs: set[tuple[str, str]] = set()

    def place(self) -> str:
        p = f"p{len(self.places) - 1}"
        self.places.append(p)
        return p

    def transition(self, label: str | None) -> str:
        t = f"t{len(self.transitions) + 1}"
        self.transitions[t] = label
        return t

    def link(self, inputs, t: str, outputs) -> None:
        self.arcs.update((p, t) for p in inputs)
        self.arcs.update((t, p) for p in outputs)

    def build(self, model: PowlModel, src: str, snk: str) -> None:
        if isinstance(model, Leaf):
            self.link([src], self.transition(model.label), [snk])
        elif isinstance(model, Xor):
            for child in model.children:
                self.build(child, src, snk)
        elif isinstance(model, Loop):
            p_do, p_redo = self.place(), self.place()
            self.link([src], self.transition(None), [p_do])
            self.build(model.do, p_do, p_redo)
            self.build(model.redo, p_redo, p_do)
            self.link([p_redo], self.transition(None), [snk])
        elif isinstance(model, PartialOrder):
            self._order(model, src, snk)
        else:
            raise TypeError(f"not a POWL model: {model!r}")

    def _order(self, model: PartialOrder, src: str, snk: str) -> None:
        n = len(model.children)
        edges = sorted(model.order.reduction())
        ins: list[list[str]] = [[] for _ in range(n)]
        outs: list[list[str]] = [[] for _ in range(n)]
        for a, b in edges:
            p = self.place()
            outs[a].append(p)
            ins[b].append(p)
        starts, ends = [], []
        for i in range(n):
            if not ins[i]:
                p = self.place()
                starts.append(p)
                ins[i].append(p)
            if not outs[i]:
                p = self.place()
                ends.append(p)
                outs[i].append(p)
        self.link([src], self.transition(None), starts)
        for i, child in enumerate(model.children):
            if isinstance(child, Leaf):
                self.link(ins[i], self.transition(child.label), outs[i])
                continue
            c_src, c_snk = self.place(), self.place()
            self.link(ins[i], self.transition(None), [c_src])
            self.build(child, c_src, c_snk)
            self.link([c_snk], self.transition(None), outs[i])
        self.link(ends, self.transition(None), [snk])


def to_wf_net(model: PowlModel) -> WorkflowNet:
    """Safe, sound WF-net with the same language as ``model``.

    Places are named ``source``, ``sink``, ``p1``, ``p2``, ...; transitions
    ``t1``, ``t2``, ... in construction order, so equal models give equal nets.
    """
    validate(model)
    b = _Builder()
    b.build(model, "source", "sink")
    return WorkflowNet(b.places, b.transitions, b.arcs)
