import pytest
from hypothesis import given, settings

from helpers import models
from wf2powl import fixtures
from wf2powl.errors import BoundExceeded, NotEnabled, UnsafeDetected
from wf2powl.powl_to_net import to_wf_net
from wf2powl.semantics import (
    ExplorationLimits,
    Marking,
    bounded_language,
    check_safe,
    check_sound,
    enabled,
    explore,
    fire,
)


def test_marking_is_a_multiset():
    m = Marking({"p": 2, "q": 1})
    assert m == Marking({"q": 1, "p": 2})
    assert m.total() == 3
    assert Marking.of("p", "p") == Marking({"p": 2})
    assert hash(m) == hash(Marking({"q": 1, "p": 2}))
    assert Marking({"p": 0}) == Marking()
    with pytest.raises(ValueError):
        Marking({"p": -1})


def test_enabled(seq):
    assert enabled(seq, Marking.of("src")) == {"a"}
    assert enabled(fixtures.self_loop_net(), Marking.of("p")) == {"a", "te"}
    assert enabled(seq, Marking()) == set()


def test_fire(seq):
    m = fire(seq, Marking.of("src"), "a")
    assert m == Marking.of("p")
    assert fire(seq, m, "b") == Marking.of("snk")
    with pytest.raises(NotEnabled):
        fire(seq, Marking(), "a")


def test_explore_sizes(seq, loop):
    g = explore(seq)
    assert len(g.states) == 3 and len(g.edges) == 2
    assert g.initial == Marking.of("src")
    assert len(explore(loop).states) == 4


def test_explore_is_deterministic(conc):
    assert explore(conc) == explore(conc)


def test_explore_detects_unsafe():
    with pytest.raises(UnsafeDetected) as info:
        explore(fixtures.unsafe_net())
    assert info.value.place == "p"
    graph = explore(fixtures.unsafe_net(), safe=False)
    assert Marking({"p": 2}) in graph.states


def test_explore_limit(conc):
    with pytest.raises(BoundExceeded):
        explore(conc, ExplorationLimits(max_states=2))


def test_check_safe(seq):
    assert check_safe(seq)
    assert not check_safe(fixtures.unsafe_net())


def test_check_sound_reports():
    assert check_sound(fixtures.concurrent_net()).sound
    dead = check_sound(fixtures.dead_transition_net())
    assert not dead.no_dead_transitions and "x" in dead.dead_transitions
    leftover = check_sound(fixtures.leftover_token_net())
    assert not leftover.proper_completion
    assert not leftover.sound and "leftover" in leftover.summary()


def test_bounded_language_examples(seq, loop, xor):
    assert bounded_language(seq, 5) == {("a", "b")}
    assert bounded_language(loop, 3) == {("a",), ("a", "b", "a")}
    assert bounded_language(xor, 1) == {("a",), ("b",)}


def test_bounded_language_silent_cycle_terminates():
    # the do-part is silent, so the redo loop can spin without output
    lang = bounded_language(to_wf_net(_silent_do_loop()), 3)
    assert lang == {(), ("a",), ("a", "a"), ("a", "a", "a")}


def _silent_do_loop():
    from wf2powl.powl import Leaf, Loop
    return Loop(Leaf(None), Leaf("a"))


def test_bounded_language_rejects_unsafe():
    with pytest.raises(UnsafeDetected):
        bounded_language(fixtures.unsafe_net(), 4)


@settings(max_examples=50, deadline=None)
@given(models())
def test_generated_nets_safe_and_sound(model):
    net = to_wf_net(model)
    assert check_sound(net).sound


@settings(max_examples=50, deadline=None)
@given(models())
def test_fire_token_balance(model):
    net = to_wf_net(model)
    m = Marking.of(net.source)
    for _ in range(6):
        ts = sorted(enabled(net, m))
        if not ts:
            break
        t = ts[0]
        m2 = fire(net, m, t)
        assert m2.total() == m.total() - len(net.preset(t)) + len(net.postset(t))
        m = m2


@settings(max_examples=40, deadline=None)
@given(models(max_leaves=6))
def test_bounded_language_monotone(model):
    net = to_wf_net(model)
    small = bounded_language(net, 3)
    large = bounded_language(net, 4)
    assert small == {tr for tr in large if len(tr) <= 3}
