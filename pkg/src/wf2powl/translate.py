"""Recursive WF-net to POWL conversion.

``convert`` tries, in this order, the single-transition base case, an XOR
pattern, a loop pattern and a partial-order pattern, recursing on the
projected sub-nets. When nothing matches the outcome is ``null`` with a
diagnostic naming the first violated condition.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Literal

from .automata import language_diff
from .errors import BoundExceeded, InvalidModel, NotWorkflowNet, UnsafeDetected
from .patterns import (
    check_xor_pattern,
    loop_pattern_diagnosis,
    po_partition,
    po_pattern_diagnosis,
    xor_partition,
)
from .petri import IdFactory, PetriNet, WorkflowNet, validate_workflow_net
from .powl import (
    Leaf,
    Loop,
    PartialOrder,
    PowlModel,
    Xor,
    canonicalize,
    validate,
)
from .projections import loop_project, po_project, xor_project
from .reduce import RewriteReport, reduce_fixpoint
from .semantics import DEFAULT_LIMITS, ExplorationLimits, check_sound

Status = Literal["model", "null", "rejected", "error"]


@dataclass(frozen=True)
class ConvertOptions:
    apply_reductions: bool = True
    verify_reductions: bool = False
    verify_with_oracle: bool = False
    oracle_trace_bound: int = 6
    # skip the state-space soundness check for nets known to be sound
    check_soundness: bool = True
    limits: ExplorationLimits = DEFAULT_LIMITS

    def __post_init__(self) -> None:
        if self.oracle_trace_bound <= 0:
            raise ValueError("oracle_trace_bound must be positive")


@dataclass
class ConvertStats:
    reduce_seconds: float = 0.0
    pattern_seconds: float = 0.0
    check_seconds: float = 0.0
    calls: int = 0
    reductions: dict[str, RewriteReport] = field(default_factory=dict)

    @property
    def rewrites(self) -> int:
        return sum(r.applied for r in self.reductions.values())


@dataclass
class ConvertOutcome:
    status: Status
    model: PowlModel | None = None
    reason: str = ""
    stats: ConvertStats = field(default_factory=ConvertStats)

    @property
    def ok(self) -> bool:
        return self.status == "model"

    def __str__(self) -> str:
        if self.ok:
            return f"model: {self.model}"
        return f"{self.status}: {self.reason}"


class _Null(Exception):
    pass


def _is_base_case(wf: WorkflowNet) -> bool:
    if len(wf.transitions) != 1 or len(wf.places) != 2:
        return False
    (t,) = wf.transitions
    return wf.arcs == {(wf.source, t), (t, wf.sink)}


def _fmt(part) -> str:
    return "{" + ", ".join(sorted(part)) + "}"


class _Converter:
    def __init__(self, opts: ConvertOptions, size: int) -> None:
        self.opts = opts
        self.stats = ConvertStats()
        # projections shrink the net except for the silent steps added by
        # normalization; this bound only stops pathological inputs
        self.max_depth = 4 * size + 16

    def reduce(self, wf: WorkflowNet) -> WorkflowNet:
        start = time.perf_counter()
        wf, reports = reduce_fixpoint(
            wf,
            verify=self.opts.verify_reductions,
            k=self.opts.oracle_trace_bound,
            limits=self.opts.limits,
        )
        for r in reports:
            total = self.stats.reductions.setdefault(r.rule, RewriteReport(r.rule))
            total.applied += r.applied
            total.rejected += r.rejected
            total.changes.extend(r.changes)
        self.stats.reduce_seconds += time.perf_counter() - start
        return wf

    def run(self, wf: WorkflowNet, depth: int = 0) -> PowlModel:
        self.stats.calls += 1
        if depth > self.max_depth:
            raise _Null("recursion makes no progress")
        if self.opts.apply_reductions:
            wf = self.reduce(wf)
        start = time.perf_counter()
        if _is_base_case(wf):
            (t,) = wf.transitions
            self.stats.pattern_seconds += time.perf_counter() - start
            return Leaf(wf.label(t))

        partition = xor_partition(wf)
        if check_xor_pattern(wf, partition):
            subnets = [xor_project(wf, part) for part in partition]
            self.stats.pattern_seconds += time.perf_counter() - start
            return Xor([self._sub(n, part, depth) for n, part in zip(subnets, partition)])

        loop, loop_why = loop_pattern_diagnosis(wf)
        if loop is not None:
            do_net = loop_project(wf, loop, "do")
            redo_net = loop_project(wf, loop, "redo")
            self.stats.pattern_seconds += time.perf_counter() - start
            return Loop(
                self._sub(do_net, loop.do_part, depth),
                self._sub(redo_net, loop.redo_part, depth),
            )

        partition = po_partition(wf)
        order, po_why = po_pattern_diagnosis(wf, partition)
        if order is not None:
            ids = IdFactory(wf)
            subnets = [po_project(wf, part, ids) for part in partition]
            self.stats.pattern_seconds += time.perf_counter() - start
            children = [self._sub(n, part, depth) for n, part in zip(subnets, partition)]
            return PartialOrder(children, order.order)

        self.stats.pattern_seconds += time.perf_counter() - start
        raise _Null(
            f"no pattern matches: {po_why} (partial order); {loop_why} (loop); "
            f"transitions are connected (xor)"
        )

    def _sub(self, wf: WorkflowNet, part, depth: int) -> PowlModel:
        try:
            return self.run(wf, depth + 1)
        except _Null as exc:
            msg = str(exc)
            if " [in part " not in msg:
                msg += f" [in part {_fmt(part)}]"
            raise _Null(msg) from None


def convert(net: PetriNet, opts: ConvertOptions | None = None) -> ConvertOutcome:
    """Translate a safe and sound WF-net into an equivalent POWL model."""
    opts = opts or ConvertOptions()
    stats = ConvertStats()
    try:
        wf = validate_workflow_net(net)
    except NotWorkflowNet as exc:
        return ConvertOutcome("rejected", reason=f"not a workflow net: {exc}", stats=stats)
    if opts.check_soundness:
        start = time.perf_counter()
        try:
            report = check_sound(wf, opts.limits)
        except UnsafeDetected as exc:
            return ConvertOutcome("rejected", reason=f"net is not safe: {exc}", stats=stats)
        except BoundExceeded as exc:
            return ConvertOutcome("rejected", reason=f"state space too large: {exc}", stats=stats)
        stats.check_seconds = time.perf_counter() - start
        if not report.sound:
            return ConvertOutcome("rejected", reason=f"net is not sound: {report.summary()}", stats=stats)
    conv = _Converter(opts, len(wf.transitions))
    conv.stats.check_seconds = stats.check_seconds
    try:
        model = conv.run(wf)
    except _Null as exc:
        return ConvertOutcome("null", reason=str(exc), stats=conv.stats)
    except (UnsafeDetected, BoundExceeded) as exc:
        return ConvertOutcome("rejected", reason=str(exc), stats=conv.stats)
    model = canonicalize(model)
    try:
        validate(model)
    except InvalidModel as exc:  # pragma: no cover - constructors already check
        return ConvertOutcome("error", reason=f"malformed output: {exc}", stats=conv.stats)
    outcome = ConvertOutcome("model", model=model, stats=conv.stats)
    if opts.verify_with_oracle:
        return _oracle(wf, outcome, opts)
    return outcome


def _oracle(wf: WorkflowNet, outcome: ConvertOutcome, opts: ConvertOptions) -> ConvertOutcome:
    k = opts.oracle_trace_bound
    try:
        diff = language_diff(wf, outcome.model, k, limits=opts.limits)
    except (UnsafeDetected, BoundExceeded) as exc:
        return ConvertOutcome("rejected", reason=f"oracle failed: {exc}", stats=outcome.stats)
    if diff is not None:
        return ConvertOutcome(
            "error",
            model=outcome.model,
            reason=f"language mismatch at k={k}: {list(diff.trace)} ({diff.side})",
            stats=outcome.stats,
        )
    return outcome


def convert_verified(net: PetriNet, opts: ConvertOptions | None = None) -> ConvertOutcome:
    """``convert`` followed by a bounded-language comparison of input and
    output; a mismatch yields status ``error``."""
    opts = opts or ConvertOptions()
    if not opts.verify_with_oracle:
        opts = replace(opts, verify_with_oracle=True)
    return convert(net, opts)
