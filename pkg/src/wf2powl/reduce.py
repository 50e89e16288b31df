"""Language-preserving rewrites that expose patterns to the translator.

Every rule only inserts or merges places around silent transitions, so the
visible language stays the same under the rule's guard. ``reduce_fixpoint``
can additionally gate each application with the bounded-language oracle and
the safeness/soundness checks, rolling back rewrites that fail.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from .automata import DawgTable, net_dawg
from .errors import BoundExceeded, UnsafeDetected
from .patterns import _loop_borders, in_between_reachable
from .petri import IdFactory, WorkflowNet
from .semantics import DEFAULT_LIMITS, ExplorationLimits, check_sound

MAX_APPLICATIONS = 10_000


@dataclass
class RewriteReport:
    rule: str
    applied: int = 0
    rejected: int = 0
    # (nodes added, nodes removed) per accepted application
    changes: list[tuple[int, int]] = field(default_factory=list)

    def record(self, before: WorkflowNet, after: WorkflowNet) -> None:
        old = set(before.nodes())
        new = set(after.nodes())
        self.applied += 1
        self.changes.append((len(new - old), len(old - new)))

    def __str__(self) -> str:
        text = f"{self.rule}: {self.applied} applied"
        if self.rejected:
            text += f", {self.rejected} rejected by verification"
        return text


def _rebuild(wf: WorkflowNet, add_places=(), add_transitions=None, drop_places=(),
             add_arcs=(), drop_arcs=()) -> WorkflowNet:
    places = (set(wf.places) - set(drop_places)) | set(add_places)
    transitions = dict(wf.transitions)
    transitions.update(add_transitions or {})
    arcs = (set(wf.arcs) - set(drop_arcs)) | set(add_arcs)
    return WorkflowNet(places, transitions, arcs)


# -- explicit XOR split / join ----------------------------------------------

def _group_candidates(wf: WorkflowNet, forward: bool) -> list[tuple[str, ...]]:
    """Place groups for the split rule (forward) or the join rule.

    For the split, ``pre``/``post`` keep their meaning; for the join the net
    is read backwards.
    """
    pre = wf.preset if forward else wf.postset
    post = wf.postset if forward else wf.preset
    seen = set()
    out = []
    for d in sorted(wf.transitions):
        group = pre(d)
        if len(group) < 2 or group in seen:
            continue
        seen.add(group)
        ordered = sorted(group)
        producers = pre(ordered[0])
        if not producers or any(pre(p) != producers for p in ordered[1:]):
            continue
        common = frozenset.intersection(*(post(p) for p in ordered))
        if any(pre(t) != group for t in common):
            continue
        residual = [post(p) - common for p in ordered]
        if any(residual) and not all(residual):
            continue
        if any(pre(t) != {p} for p, rest in zip(ordered, residual) for t in rest):
            continue
        out.append(tuple(ordered))
    return out


def _rewrite_group(wf: WorkflowNet, group: tuple[str, ...], forward: bool) -> WorkflowNet:
    ids = IdFactory(wf)
    pre = wf.preset if forward else wf.postset
    post = wf.postset if forward else wf.preset

    def arc(x: str, y: str) -> tuple[str, str]:
        return (x, y) if forward else (y, x)

    merged = ids.place()
    common = frozenset.intersection(*(post(p) for p in group))
    drop = set()
    for p in group:
        drop.update(arc(x, p) for x in pre(p))
        drop.update(arc(p, y) for y in post(p))
    add = {arc(x, merged) for x in pre(group[0])}
    add.update(arc(merged, t) for t in common)
    new_places = [merged]
    new_transitions = {}
    if any(post(p) - common for p in group):
        tau = ids.transition()
        new_transitions[tau] = None
        add.add(arc(merged, tau))
        for p in group:
            q = ids.place()
            new_places.append(q)
            add.add(arc(tau, q))
            add.update(arc(q, t) for t in post(p) - common)
    return _rebuild(wf, new_places, new_transitions, group, add, drop)


def _split_candidates(wf: WorkflowNet):
    return _group_candidates(wf, True)


def _apply_split(wf: WorkflowNet, cand) -> WorkflowNet:
    return _rewrite_group(wf, cand, True)


def _join_candidates(wf: WorkflowNet):
    return _group_candidates(wf, False)


def _apply_join(wf: WorkflowNet, cand) -> WorkflowNet:
    return _rewrite_group(wf, cand, False)


# -- self-loops -------------------------------------------------------------

def _strong_components(wf: WorkflowNet) -> dict[str, int]:
    nodes = sorted(wf.nodes())
    succ = {n: sorted(wf.postset(n)) for n in nodes}
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    comp: dict[str, int] = {}
    stack: list[str] = []
    on_stack: set[str] = set()
    ncomp = 0
    for root in nodes:
        if root in index:
            continue
        index[root] = low[root] = len(index)
        stack.append(root)
        on_stack.add(root)
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if w not in index:
                    index[w] = low[w] = len(index)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, 0))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def _self_loop_candidates(wf: WorkflowNet) -> list[str]:
    """Places entered and left both from outside and from a cycle through
    the place itself."""
    comp = _strong_components(wf)
    out = []
    for p in sorted(wf.places):
        c = comp[p]
        producers, consumers = wf.preset(p), wf.postset(p)
        inner_in = any(comp[t] == c for t in producers)
        outer_in = any(comp[t] != c for t in producers)
        inner_out = any(comp[t] == c for t in consumers)
        outer_out = any(comp[t] != c for t in consumers)
        if inner_in and outer_in and inner_out and outer_out:
            out.append(p)
    return out


def _apply_self_loop(wf: WorkflowNet, p: str) -> WorkflowNet:
    # p keeps its producers, a fresh place takes its consumers, and a silent
    # transition in between becomes the (empty) do-part
    ids = IdFactory(wf)
    q, tau = ids.place(), ids.transition()
    drop = {(p, t) for t in wf.postset(p)}
    add = {(q, t) for t in wf.postset(p)} | {(p, tau), (tau, q)}
    return _rebuild(wf, [q], {tau: None}, (), add, drop)


# -- loop requirement 6 -----------------------------------------------------

def _loop_parts(wf: WorkflowNet):
    border, _ = _loop_borders(wf)
    if border is None:
        return None
    ts, te, p_do, p_redo = border
    t_do = in_between_reachable(wf, p_do, p_redo)
    t_redo = in_between_reachable(wf, p_redo, p_do)
    if not t_do or not t_redo or t_do & t_redo:
        return None
    if (t_do | t_redo) != set(wf.transitions) - {ts, te}:
        return None
    return p_do, p_redo, t_do, t_redo


def _loop_ok(wf: WorkflowNet) -> bool:
    parts = _loop_parts(wf)
    if parts is None:
        return False
    p_do, p_redo, t_do, t_redo = parts
    return not (
        wf.preset(p_do) & t_do
        or wf.preset(p_redo) & t_redo
        or wf.postset(p_redo) & t_do
        or wf.postset(p_do) & t_redo
    )


def _reaches_avoiding(wf: WorkflowNet, t: str, target: str, avoid: str) -> bool:
    seen = {t}
    stack = [t]
    while stack:
        node = stack.pop()
        for nxt in wf.postset(node):
            if nxt == target:
                return True
            if nxt == avoid or nxt in seen:
                continue
            seen.add(nxt)
            stack.append(nxt)
    return False


def _req6_rewrite(wf: WorkflowNet) -> WorkflowNet | None:
    parts = _loop_parts(wf)
    if parts is None:
        return None
    p_do, p_redo, t_do, t_redo = parts
    bad_do = bool(wf.preset(p_do) & t_do)
    bad_redo = bool(wf.preset(p_redo) & t_redo)
    if not (bad_do or bad_redo):
        return None
    ids = IdFactory(wf)
    new_places, new_transitions, add, drop = [], {}, set(), set()
    if bad_do:
        # entry into the do-part goes through a fresh place and a silent step
        q, tau = ids.place(), ids.transition()
        new_places.append(q)
        new_transitions[tau] = None
        for t in wf.preset(p_do) - t_do:
            drop.add((t, p_do))
            add.add((t, q))
        add |= {(q, tau), (tau, p_do)}
    if bad_redo:
        leaving = [
            t for t in sorted(wf.postset(p_redo))
            if not _reaches_avoiding(wf, t, p_redo, p_do)
        ]
        if not leaving or any(wf.preset(t) != {p_redo} for t in leaving):
            return None
        q, tau = ids.place(), ids.transition()
        new_places.append(q)
        new_transitions[tau] = None
        for t in leaving:
            drop.add((p_redo, t))
            add.add((q, t))
        add |= {(p_redo, tau), (tau, q)}
    new = _rebuild(wf, new_places, new_transitions, (), add, drop)
    return new if _loop_ok(new) else None


def _req6_candidates(wf: WorkflowNet) -> list[str]:
    return ["loop"] if _req6_rewrite(wf) is not None else []


def _apply_req6(wf: WorkflowNet, cand) -> WorkflowNet:
    new = _req6_rewrite(wf)
    assert new is not None
    return new


# -- rule table and public entry points -------------------------------------

@dataclass(frozen=True)
class Rule:
    name: str
    candidates: Callable[[WorkflowNet], list]
    apply: Callable[[WorkflowNet, object], WorkflowNet]


RULES: dict[str, Rule] = {
    r.name: r
    for r in (
        Rule("explicit_xor_split", _split_candidates, _apply_split),
        Rule("explicit_xor_join", _join_candidates, _apply_join),
        Rule("self_loop_do_insertion", _self_loop_candidates, _apply_self_loop),
        Rule("loop_requirement6_fix", _req6_candidates, _apply_req6),
    )
}
DEFAULT_RULES: tuple[str, ...] = tuple(RULES)


def _exhaust(wf: WorkflowNet, rule: Rule) -> tuple[WorkflowNet, RewriteReport]:
    report = RewriteReport(rule.name)
    for _ in range(MAX_APPLICATIONS):
        cands = rule.candidates(wf)
        if not cands:
            return wf, report
        new = rule.apply(wf, cands[0])
        report.record(wf, new)
        wf = new
    raise AssertionError(f"{rule.name} did not reach a fixpoint")


def explicit_xor_split(wf: WorkflowNet) -> tuple[WorkflowNet, RewriteReport]:
    return _exhaust(wf, RULES["explicit_xor_split"])


def explicit_xor_join(wf: WorkflowNet) -> tuple[WorkflowNet, RewriteReport]:
    return _exhaust(wf, RULES["explicit_xor_join"])


def self_loop_do_insertion(wf: WorkflowNet) -> tuple[WorkflowNet, RewriteReport]:
    return _exhaust(wf, RULES["self_loop_do_insertion"])


def loop_requirement6_fix(wf: WorkflowNet) -> tuple[WorkflowNet, RewriteReport]:
    return _exhaust(wf, RULES["loop_requirement6_fix"])


class _Verifier:
    # languages live in one shared table, so equality is a node id check
    def __init__(self, wf: WorkflowNet, k: int, limits: ExplorationLimits) -> None:
        self.k = k
        self.limits = limits
        self.table = DawgTable()
        self.reference = net_dawg(self.table, wf, k, limits)

    def accepts(self, new: WorkflowNet) -> bool:
        try:
            if not check_sound(new, self.limits).sound:
                return False
            return net_dawg(self.table, new, self.k, self.limits) == self.reference
        except (UnsafeDetected, BoundExceeded):
            return False


def reduce_fixpoint(
    wf: WorkflowNet,
    rules: Sequence[str] | None = None,
    verify: bool = False,
    k: int = 6,
    limits: ExplorationLimits = DEFAULT_LIMITS,
    on_rewrite: Callable[[str, WorkflowNet, WorkflowNet], None] | None = None,
) -> tuple[WorkflowNet, list[RewriteReport]]:
    """Apply ``rules`` (default: split, join, self-loop, requirement 6) until
    none fires. After each accepted rewrite the scan restarts at the first
    rule. With ``verify`` every rewrite must keep the bounded language at
    length ``k``, safeness and soundness, otherwise it is undone and that
    candidate is not tried again. ``on_rewrite(rule, before, after)`` is
    called for every accepted rewrite.
    """
    names = tuple(rules) if rules is not None else DEFAULT_RULES
    unknown = [n for n in names if n not in RULES]
    if unknown:
        raise ValueError(f"unknown rules {unknown}; choose from {list(RULES)}")
    reports = {n: RewriteReport(n) for n in names}
    verifier = None
    blocked: set[tuple[str, object]] = set()
    for _ in range(MAX_APPLICATIONS):
        for name in names:
            rule = RULES[name]
            progressed = False
            for cand in rule.candidates(wf):
                if (name, cand) in blocked:
                    continue
                new = rule.apply(wf, cand)
                if verify:
                    if verifier is None:
                        verifier = _Verifier(wf, k, limits)
                    if not verifier.accepts(new):
                        reports[name].rejected += 1
                        blocked.add((name, cand))
                        continue
                reports[name].record(wf, new)
                if on_rewrite is not None:
                    on_rewrite(name, wf, new)
                wf = new
                progressed = True
                break
            if progressed:
                break
        else:
            return wf, [reports[n] for n in names]
    raise AssertionError("reduction did not reach a fixpoint")
