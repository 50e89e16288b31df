from hypothesis import given, settings

from helpers import models, pattern_instances
from wf2powl.patterns import find_loop_pattern
from wf2powl.petri import PetriNet
from wf2powl.powl import Leaf, Xor, sequence
from wf2powl.powl_to_net import to_wf_net
from wf2powl.projections import loop_project, normalize, po_project, xor_project
from wf2powl.semantics import bounded_language, check_sound


def shape(wf):
    """Labels along arcs, ignoring node ids."""
    return sorted(
        (wf.label(t) or "tau", len(wf.preset(t)), len(wf.postset(t))) for t in wf.transitions
    )


def test_xor_project_examples(xor):
    sub = xor_project(xor, {"a"})
    assert sub.transitions == {"a": "a"}
    assert sub.arcs == {("src", "a"), ("a", "snk")}
    wf = to_wf_net(Xor(*(sequence(Leaf(x), Leaf(x.upper())) for x in "abc")))
    part = next(t for t in wf.transitions if wf.label(t) == "b")
    part = {part} | {t for t in wf.transitions if wf.label(t) == "B"}
    sub = xor_project(wf, part)
    assert bounded_language(sub, 4) == {("b", "B")}
    assert check_sound(sub).sound


def test_loop_project_examples(loop):
    dec = find_loop_pattern(loop)
    do = loop_project(loop, dec, "do")
    redo = loop_project(loop, dec, "redo")
    assert do.arcs == {("src", "a"), ("a", "snk")}
    assert redo.arcs == {("src", "b"), ("b", "snk")}
    assert check_sound(do).sound and check_sound(redo).sound


def test_normalize_cases(seq):
    assert normalize(seq, "src", "snk").arcs == seq.arcs
    # p is the intended start but b feeds it back
    net = PetriNet({"p", "q", "snk"}, {"a": "a", "b": "b", "c": "c"},
                   {("p", "a"), ("a", "q"), ("q", "b"), ("b", "p"), ("q", "c"), ("c", "snk")})
    once = normalize(net, "p", "snk")
    assert len(once.places) == len(net.places) + 1
    assert len(once.transitions) == len(net.transitions) + 1
    (tau,) = once.postset(once.source)
    assert once.is_silent(tau) and once.postset(tau) == {"p"}
    assert normalize(once, once.source, once.sink).arcs == once.arcs


def test_po_project_examples(conc):
    sub = po_project(conc, {"a"})
    assert shape(sub) == [("a", 1, 1)]
    sub = po_project(conc, {"t0"})
    assert len(sub.transitions) == 1 and check_sound(sub).sound
    assert bounded_language(sub, 2) == {("t0",)}


@settings(max_examples=60, deadline=None)
@given(models(max_leaves=8))
def test_projection_outputs_are_sound_and_smaller(model):
    for _, parent, subs in pattern_instances(to_wf_net(model)):
        for sub in subs:
            assert check_sound(sub).sound
            assert len(sub.transitions) < len(parent.transitions)
            nodes = set(sub.nodes())
            assert all(x in nodes and y in nodes for x, y in sub.arcs)
