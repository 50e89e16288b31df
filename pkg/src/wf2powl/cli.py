"""Command-line entry point.

Exit codes (stable):

* 0  success (model produced, net valid, languages equal)
* 1  rejected input, malformed file or internal error
* 2  the net is valid but no pattern applies (null outcome)
* 3  bounded languages differ

Payloads (JSON, PNML, CSV, DOT) go to stdout or ``-o``; diagnostics go to
stderr. Set ``WF2POWL_LOG=DEBUG`` (or INFO, WARNING) for log output.
"""

from __future__ import annotations

import argparse
import csv
import glob
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .automata import language_diff
from .corpus import generate_corpus
from .errors import BoundExceeded, NotWorkflowNet, ParseError, UnsafeDetected, Wf2PowlError
from .model_io import read_model, read_net, to_dot, write_pnml, write_powl_json
from .petri import is_free_choice, is_marked_graph, validate_workflow_net
from .powl_to_net import to_wf_net
from .reduce import reduce_fixpoint
from .semantics import check_sound, explore
from .translate import ConvertOptions, convert

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_NULL = 2
EXIT_DIFF = 3

log = logging.getLogger("wf2powl")


def _emit(payload: bytes | str, path: str | None) -> None:
    data = payload.encode() if isinstance(payload, str) else payload
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _explain_stats(outcome) -> None:
    st = outcome.stats
    for report in st.reductions.values():
        _err(f"  {report}")
    _err(
        f"  calls={st.calls} check={st.check_seconds:.4f}s "
        f"reduce={st.reduce_seconds:.4f}s patterns={st.pattern_seconds:.4f}s"
    )


# -- subcommands ------------------------------------------------------------

def cmd_convert(args) -> int:
    net = read_net(args.input, strict=args.strict)
    opts = ConvertOptions(
        apply_reductions=not args.no_reduce,
        verify_reductions=not args.no_verify_reductions,
        verify_with_oracle=args.verify,
        oracle_trace_bound=args.k,
        check_soundness=not args.assume_sound,
    )
    outcome = convert(net, opts)
    if args.explain:
        _err(f"{args.input}: {outcome.status}")
        _explain_stats(outcome)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(_json({
                "status": outcome.status,
                "reason": outcome.reason,
                "rewrites": {r.rule: r.applied for r in outcome.stats.reductions.values()},
            }))
    if outcome.ok:
        _emit(write_powl_json(outcome.model), args.output)
        return EXIT_OK
    _err(f"{outcome.status}: {outcome.reason}")
    return EXIT_NULL if outcome.status == "null" else EXIT_FAIL


def cmd_validate(args) -> int:
    net = read_net(args.input, strict=args.strict)
    report: dict = {"workflow_net": False}
    try:
        wf = validate_workflow_net(net)
    except NotWorkflowNet as exc:
        report["error"] = str(exc)
        _emit(_json(report), None)
        _err(f"not a workflow net: {exc}")
        return EXIT_FAIL
    report.update(
        workflow_net=True,
        places=len(wf.places),
        transitions=len(wf.transitions),
        free_choice=is_free_choice(wf),
        marked_graph=is_marked_graph(wf),
    )
    try:
        sound = check_sound(wf)
    except UnsafeDetected as exc:
        report.update(safe=False, sound=False, error=str(exc))
    except BoundExceeded as exc:
        report.update(error=str(exc))
        _emit(_json(report), None)
        _err(str(exc))
        return EXIT_FAIL
    else:
        report.update(
            safe=True,
            sound=sound.sound,
            states=sound.state_count,
            dead_transitions=list(sound.dead_transitions),
            option_to_complete=sound.option_to_complete,
            proper_completion=sound.proper_completion,
        )
    _emit(_json(report), None)
    if report["safe"] and report["sound"]:
        return EXIT_OK
    _err(report.get("error") or f"not sound: {sound.summary()}")
    return EXIT_FAIL


def cmd_reduce(args) -> int:
    wf = validate_workflow_net(read_net(args.input, strict=args.strict))
    reduced, reports = reduce_fixpoint(wf, verify=not args.no_verify, k=args.k)
    if args.explain:
        for r in reports:
            _err(f"{r}")
            for added, removed in r.changes:
                _err(f"  +{added} / -{removed} nodes")
        _err(
            f"{len(wf.places)}P/{len(wf.transitions)}T -> "
            f"{len(reduced.places)}P/{len(reduced.transitions)}T"
        )
    _emit(write_pnml(reduced, os.path.splitext(os.path.basename(args.input))[0]), args.output)
    return EXIT_OK


def cmd_lang_diff(args) -> int:
    wf = validate_workflow_net(read_net(args.net, strict=args.strict))
    model = read_model(args.model)
    diff = language_diff(wf, model, args.k)
    if diff is None:
        _emit(_json({"equal": True, "k": args.k}), None)
        return EXIT_OK
    _emit(_json({"equal": False, "k": args.k, "witness": list(diff.trace), "side": diff.side}), None)
    _err(f"languages differ at k={args.k}: {list(diff.trace)} ({diff.side})")
    return EXIT_DIFF


def cmd_roundtrip(args) -> int:
    model = read_model(args.model)
    net = to_wf_net(model)
    # nets built from models are safe and sound by construction
    outcome = convert(net, ConvertOptions(check_soundness=args.check_soundness))
    result = {
        "status": outcome.status,
        "places": len(net.places),
        "transitions": len(net.transitions),
        "k": args.k,
    }
    if not outcome.ok:
        result["reason"] = outcome.reason
        _emit(_json(result), None)
        _err(f"{outcome.status}: {outcome.reason}")
        return EXIT_NULL if outcome.status == "null" else EXIT_FAIL
    result["model"] = json.loads(write_powl_json(outcome.model))
    # the recovered model must agree with the net, and so with the input
    diff = language_diff(net, outcome.model, args.k) or language_diff(net, model, args.k)
    result["equal"] = diff is None
    if diff is not None:
        result["witness"] = list(diff.trace)
    _emit(_json(result), None)
    if diff is not None:
        _err(f"languages differ at k={args.k}: {list(diff.trace)}")
        return EXIT_DIFF
    return EXIT_OK


def cmd_gen(args) -> int:
    items = generate_corpus(
        args.output, args.count, args.seed, args.min_transitions, args.max_transitions
    )
    sizes = [len(it.net.transitions) for it in items]
    _emit(_json({
        "directory": args.output,
        "count": len(items),
        "min_transitions": min(sizes),
        "max_transitions": max(sizes),
    }), None)
    return EXIT_OK


BENCH_COLUMNS = ("name", "transitions", "places", "status", "seconds", "reduce_seconds", "pattern_seconds")


def _bench_one(job: tuple[str, bool, bool]) -> dict:
    path, verify, check = job
    name = os.path.splitext(os.path.basename(path))[0]
    try:
        net = read_net(path)
    except (OSError, ParseError) as exc:
        return {"name": name, "transitions": "", "places": "", "status": f"error: {exc}",
                "seconds": "", "reduce_seconds": "", "pattern_seconds": ""}
    start = time.perf_counter()
    outcome = convert(net, ConvertOptions(verify_reductions=verify, check_soundness=check))
    elapsed = time.perf_counter() - start
    return {
        "name": name,
        "transitions": len(net.transitions),
        "places": len(net.places),
        "status": outcome.status,
        "seconds": f"{elapsed:.6f}",
        "reduce_seconds": f"{outcome.stats.reduce_seconds:.6f}",
        "pattern_seconds": f"{outcome.stats.pattern_seconds:.6f}",
    }


def cmd_bench(args) -> int:
    paths = sorted(glob.glob(os.path.join(args.corpus, "*.pnml")))
    if not paths:
        _err(f"no .pnml files in {args.corpus}")
        return EXIT_FAIL
    jobs = [(p, args.verify_reductions, not args.assume_sound) for p in paths]
    if args.parallel:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_one, jobs, chunksize=4))
    else:
        rows = [_bench_one(j) for j in jobs]
    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.output:
            out.close()
    failed = [r for r in rows if r["status"] != "model"]
    if failed:
        _err(f"{len(failed)} of {len(rows)} nets did not convert")
        return EXIT_FAIL
    return EXIT_OK


def cmd_dot(args) -> int:
    if args.input.endswith(".json"):
        obj = read_model(args.input)
    else:
        obj = read_net(args.input, strict=args.strict)
        if args.reachability:
            obj = explore(validate_workflow_net(obj))
    _emit(to_dot(obj), args.output)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wf2powl",
        description="Translate safe and sound workflow nets into POWL models.",
        epilog="exit codes: 0 ok, 1 rejected or malformed input, 2 null outcome, 3 languages differ",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def net_input(p, name="input", help="PNML file"):
        p.add_argument(name, help=help)
        p.add_argument("--strict", action="store_true", help="reject unknown PNML elements")

    p = sub.add_parser("convert", help="translate a net into a POWL model (JSON)")
    net_input(p)
    p.add_argument("-o", "--output", help="write the model here instead of stdout")
    p.add_argument("--no-reduce", action="store_true", help="skip the reduction rules")
    p.add_argument("--no-verify-reductions", action="store_true",
                   help="accept rewrites without the language/soundness gate")
    p.add_argument("--verify", action="store_true", help="compare bounded languages of input and output")
    p.add_argument("--k", type=int, default=6, help="trace bound for verification (default 6)")
    p.add_argument("--explain", action="store_true", help="print rewrites and timings to stderr")
    p.add_argument("--report", help="write a JSON outcome report to this file")
    p.add_argument("--assume-sound", action="store_true", help="skip the state-space soundness check")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("validate", help="report workflow-net shape, safeness and soundness")
    net_input(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("reduce", help="apply the reduction rules and write the result (PNML)")
    net_input(p)
    p.add_argument("-o", "--output", help="write the reduced net here instead of stdout")
    p.add_argument("--explain", action="store_true", help="print applied rules to stderr")
    p.add_argument("--no-verify", action="store_true", help="do not gate rewrites with the oracle")
    p.add_argument("--k", type=int, default=6, help="trace bound for the gate (default 6)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("lang-diff", help="compare bounded languages of a net and a model")
    net_input(p, "net")
    p.add_argument("model", help="POWL JSON file")
    p.add_argument("--k", type=int, default=6, help="trace bound (default 6)")
    p.set_defaults(func=cmd_lang_diff)

    p = sub.add_parser("roundtrip", help="model -> net -> model, then compare languages")
    p.add_argument("model", help="POWL JSON file")
    p.add_argument("--k", type=int, default=6, help="trace bound (default 6)")
    p.add_argument("--check-soundness", action="store_true",
                   help="also run the state-space soundness check on the built net")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("gen", help="write a seeded benchmark corpus")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-transitions", type=int, default=20)
    p.add_argument("--max-transitions", type=int, default=400)
    p.add_argument("-o", "--output", required=True, help="target directory")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="convert every net of a corpus and print CSV timings")
    p.add_argument("--corpus", required=True, help="directory with .pnml files")
    p.add_argument("--parallel", action="store_true", help="use a process pool")
    p.add_argument("--jobs", type=int, default=None, help="pool size (default: CPU count)")
    p.add_argument("--verify-reductions", action="store_true", help="gate rewrites with the oracle")
    p.add_argument("--assume-sound", action="store_true",
                   help="skip the soundness check (generated corpora are sound by construction)")
    p.add_argument("-o", "--output", help="write the CSV here instead of stdout")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("dot", help="render a net (.pnml) or model (.json) as Graphviz DOT")
    net_input(p)
    p.add_argument("--reachability", action="store_true", help="render the reachability graph")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("WF2POWL_LOG")
    if level:
        logging.basicConfig(level=level.upper(), stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if getattr(args, "k", 1) <= 0:
        _err("error: --k must be positive")
        return EXIT_FAIL
    log.debug("running %s", args.command)
    try:
        return args.func(args)
    except ParseError as exc:
        _err(f"error: {exc}")
    except NotWorkflowNet as exc:
        _err(f"rejected: not a workflow net: {exc}")
    except (UnsafeDetected, BoundExceeded) as exc:
        _err(f"rejected: {exc}")
    except Wf2PowlError as exc:
        _err(f"error: {exc}")
    except OSError as exc:
        _err(f"error: {exc}")
    return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
