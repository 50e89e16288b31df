"""Projection of a WF-net onto one part of a detected pattern, plus the
normalization step used by the partial-order projection."""

from __future__ import annotations

from collections.abc import Iterable
from typing import Literal

from .petri import (
    IdFactory,
    PetriNet,
    WorkflowNet,
    entry_points,
    exit_points,
    project_flow,
    project_places,
)
from .patterns import LoopDecomposition


def xor_project(wf: WorkflowNet, part: Iterable[str]) -> WorkflowNet:
    part = frozenset(part)
    places = project_places(wf, part)
    arcs = project_flow(wf, places, part)
    return WorkflowNet(places, {t: wf.label(t) for t in part}, arcs)


def loop_project(
    wf: WorkflowNet, decomp: LoopDecomposition, which: Literal["do", "redo"]
) -> WorkflowNet:
    if which == "do":
        part, p_start, p_end = decomp.do_part, decomp.p_do, decomp.p_redo
    elif which == "redo":
        part, p_start, p_end = decomp.redo_part, decomp.p_redo, decomp.p_do
    else:
        raise ValueError(f"which must be 'do' or 'redo', not {which!r}")
    places = (project_places(wf, part) - {decomp.p_do, decomp.p_redo}) | {wf.source, wf.sink}
    arcs = set(project_flow(wf, places, part))
    arcs.update((wf.source, t) for t in wf.postset(p_start) if t in part)
    arcs.update((t, wf.sink) for t in wf.preset(p_end) if t in part)
    return WorkflowNet(places, {t: wf.label(t) for t in part}, arcs)


def normalize(net: PetriNet, p_s: str, p_e: str, ids: IdFactory | None = None) -> WorkflowNet:
    """Give ``net`` a fresh source (sink) place in front of ``p_s`` (after
    ``p_e``) when ``p_s`` has producers (``p_e`` has consumers)."""
    ids = ids or IdFactory(net)
    places = set(net.places)
    transitions = dict(net.transitions)
    arcs = set(net.arcs)
    if net.preset(p_s):
        src, tau = ids.place(), ids.transition()
        places.add(src)
        transitions[tau] = None
        arcs |= {(src, tau), (tau, p_s)}
    if net.postset(p_e):
        snk, tau = ids.place(), ids.transition()
        places.add(snk)
        transitions[tau] = None
        arcs |= {(p_e, tau), (tau, snk)}
    return WorkflowNet(places, transitions, arcs)


def po_project(wf: WorkflowNet, part: Iterable[str], ids: IdFactory | None = None) -> WorkflowNet:
    """Projection onto one part; pass one ``ids`` for all parts of a
    partition to avoid rescanning ``wf`` per part."""
    part = frozenset(part)
    entries = entry_points(wf, part)
    exits = exit_points(wf, part)
    ids = ids or IdFactory(wf)
    p_s, p_e = ids.place(), ids.place()
    places = (project_places(wf, part) - entries - exits) | {p_s, p_e}
    arcs = set(project_flow(wf, places, part))
    for border, fresh in ((entries, p_s), (exits, p_e)):
        for p in border:
            arcs.update((fresh, t) for t in wf.postset(p) if t in part)
            arcs.update((t, fresh) for t in wf.preset(p) if t in part)
    net = PetriNet(places, {t: wf.label(t) for t in part}, arcs)
    return normalize(net, p_s, p_e, ids)
