"""Small hand-built WF-nets used by the tests, demos and CLI examples."""

from __future__ import annotations

from .petri import WorkflowNet


def _net(transitions: dict[str, str | None], flows: list[tuple[str, ...]]) -> WorkflowNet:
    """Build a net from chains ``x -> y -> z``; names not in ``transitions``
    are places."""
    arcs = set()
    nodes = set()
    for chain in flows:
        nodes.update(chain)
        arcs.update(zip(chain, chain[1:]))
    places = nodes - transitions.keys()
    return WorkflowNet(places, transitions, arcs)


def single_net(label: str | None = "a") -> WorkflowNet:
    return _net({"t": label}, [("src", "t", "snk")])


def sequence_net() -> WorkflowNet:
    """src -> a -> p -> b -> snk"""
    return _net({"a": "a", "b": "b"}, [("src", "a", "p", "b", "snk")])


def xor_net() -> WorkflowNet:
    """src -> {a, b} -> snk"""
    return _net({"a": "a", "b": "b"}, [("src", "a", "snk"), ("src", "b", "snk")])


def concurrent_net() -> WorkflowNet:
    """t0 splits into a || b, t3 joins."""
    return _net(
        {"t0": "t0", "a": "a", "b": "b", "t3": "t3"},
        [("src", "t0", "q1", "a", "r1", "t3", "snk"), ("t0", "q2", "b", "r2", "t3")],
    )


def loop_net() -> WorkflowNet:
    """Do-part ``a``, redo-part ``b`` between silent border transitions."""
    return _net(
        {"ts": None, "a": "a", "b": "b", "te": None},
        [("src", "ts", "p1", "a", "p2", "te", "snk"), ("p2", "b", "p1")],
    )


def self_loop_net() -> WorkflowNet:
    """One loop place ``p`` with ``a`` as a self-loop on it."""
    return _net(
        {"ts": None, "a": "a", "te": None},
        [("src", "ts", "p", "te", "snk"), ("p", "a", "p")],
    )


def loop_redo_exit_net() -> WorkflowNet:
    """Loop whose do-part ``a`` has a self-loop feeding the do place."""
    return _net(
        {"ts": None, "a": "a", "b": "b", "c": "c", "te": None},
        [("src", "ts", "pd", "b", "pr", "te", "snk"), ("pd", "a", "pd"), ("pr", "c", "pd")],
    )


def loop_do_exit_net() -> WorkflowNet:
    """Loop whose redo place carries a self-loop ``d``."""
    return _net(
        {"ts": None, "a": "a", "b": "b", "d": "d", "te": None},
        [("src", "ts", "pd", "a", "pr", "te", "snk"), ("pr", "d", "pr"), ("pr", "b", "pd")],
    )


def nonblock_choice_net() -> WorkflowNet:
    """Free-choice net whose choices do not nest into blocks: after ``a`` one
    may finish with ``c`` or continue with ``d`` into the branch of ``b``."""
    return _net(
        {"a": "a", "b": "b", "c": "c", "d": "d", "e": "e"},
        [
            ("src", "a", "p1", "c", "snk"),
            ("src", "b", "p2", "e", "snk"),
            ("p1", "d", "p2"),
        ],
    )


def long_term_dependency_net() -> WorkflowNet:
    """Choice ``a``/``b`` decides, much later, between ``d`` and ``e``."""
    return _net(
        {"a": "a", "b": "b", "c": "c", "d": "d", "e": "e"},
        [
            ("src", "a", "p1", "c", "p2", "d", "snk"),
            ("src", "b", "p1"),
            ("a", "p3", "d"),
            ("b", "p4", "e"),
            ("p2", "e", "snk"),
        ],
    )


def choice_with_concurrency_net() -> WorkflowNet:
    """After ``a``: either ``d`` alone or ``b`` and ``c`` concurrently, then
    ``e``. The choice is spread over two places."""
    return _net(
        {"a": "a", "b": "b", "c": "c", "d": "d", "e": "e"},
        [
            ("src", "a", "p2", "b", "p4", "e", "snk"),
            ("a", "p3", "c", "p5", "e"),
            ("p2", "d", "p4"),
            ("p3", "d", "p5"),
        ],
    )


def unsafe_net() -> WorkflowNet:
    """``a`` puts two tokens into ``p`` via two paths."""
    return _net(
        {"a": "a", "b": "b", "c": "c", "d": "d"},
        [("src", "a", "q1", "b", "p", "d", "snk"), ("a", "q2", "c", "p")],
    )


def dead_transition_net() -> WorkflowNet:
    """``x`` needs a token in ``q`` that only ``x`` itself produces."""
    return _net(
        {"a": "a", "x": "x", "b": "b"},
        [("src", "a", "snk"), ("src", "x", "q", "b", "snk"), ("q", "x")],
    )


def leftover_token_net() -> WorkflowNet:
    """Firing ``b`` early reaches the sink while ``q`` (later ``q2``) still
    holds a token."""
    return _net(
        {"a": "a", "b": "b", "c": "c", "d": "d"},
        [
            ("src", "a", "p", "b", "snk"),
            ("a", "q", "c", "q2", "d", "snk"),
            ("p", "d"),
        ],
    )


ALL = {
    "single": single_net,
    "sequence": sequence_net,
    "xor": xor_net,
    "concurrent": concurrent_net,
    "loop": loop_net,
    "self_loop": self_loop_net,
    "loop_redo_exit": loop_redo_exit_net,
    "loop_do_exit": loop_do_exit_net,
    "nonblock_choice": nonblock_choice_net,
    "long_term_dependency": long_term_dependency_net,
    "choice_with_concurrency": choice_with_concurrency_net,
}
