import pytest
from hypothesis import given, settings

from helpers import models
from wf2powl import fixtures
from wf2powl.errors import (
    DisconnectedNode,
    InvalidNet,
    NoUniqueSink,
    NoUniqueSource,
    NotInNet,
)
from wf2powl.petri import (
    IdFactory,
    Partition,
    PetriNet,
    WorkflowNet,
    entry_points,
    exit_points,
    is_free_choice,
    is_marked_graph,
    places_equivalent,
    postset,
    preset,
    project_flow,
    project_places,
    validate_workflow_net,
)
from wf2powl.powl_to_net import to_wf_net


def test_preset_examples(seq):
    assert preset(seq, seq.source) == set()
    assert preset(seq, "p") == {"a"}
    assert preset(seq, "b") == {"p"}


def test_postset_examples(seq, xor):
    assert postset(seq, seq.sink) == set()
    assert postset(seq, "a") == {"p"}
    assert postset(xor, "src") == {"a", "b"}


def test_unknown_node_raises(seq):
    with pytest.raises(NotInNet):
        preset(seq, "nope")
    with pytest.raises(NotInNet):
        postset(seq, "nope")


def test_project_places(seq):
    touching = {p for p in seq.places if seq.preset(p) or seq.postset(p)}
    assert project_places(seq, seq.transitions) == touching
    assert project_places(seq, {"a"}) == {"src", "p"}
    assert project_places(seq, {"b"}) == {"p", "snk"}
    with pytest.raises(NotInNet):
        project_places(seq, {"zz"})


def test_project_flow(seq):
    assert project_flow(seq, seq.places, seq.transitions) == seq.arcs
    assert project_flow(seq, {"src", "p"}, {"a"}) == {("src", "a"), ("a", "p")}
    assert project_flow(seq, {"snk"}, {"a"}) == set()


def test_places_equivalent():
    wf = fixtures.long_term_dependency_net()
    assert places_equivalent(wf, "p3", "p3", {"a", "b"})
    # a feeds p3, b feeds p4: no unique local end on {a, b}
    assert not places_equivalent(wf, "p3", "p4", {"a", "b"})
    net = PetriNet({"x", "y", "q1", "q2"}, {"t": "t", "u": "u"}, {("x", "t"), ("u", "y")})
    assert places_equivalent(net, "q1", "q2", {"t", "u"})


def test_entry_exit_points(conc):
    assert entry_points(conc, conc.transitions) == {conc.source}
    assert exit_points(conc, conc.transitions) == {conc.sink}
    assert entry_points(conc, {"a"}) == {"q1"}
    assert exit_points(conc, {"a"}) == {"r1"}
    assert entry_points(conc, {"t0"}) == {"src"}
    assert exit_points(conc, {"t0"}) == {"q1", "q2"}


def test_free_choice_and_marked_graph(seq, conc):
    assert is_free_choice(seq) and is_marked_graph(seq)
    assert not is_free_choice(fixtures.long_term_dependency_net())
    assert is_marked_graph(conc)
    assert is_free_choice(fixtures.nonblock_choice_net())
    assert not is_marked_graph(fixtures.xor_net())


def test_validate_workflow_net(seq):
    assert validate_workflow_net(seq.as_petri_net()).source == "src"
    two_sources = PetriNet({"s1", "s2", "o"}, {"t": "t"}, {("s1", "t"), ("s2", "t"), ("t", "o")})
    with pytest.raises(NoUniqueSource):
        validate_workflow_net(two_sources)
    two_sinks = PetriNet({"i", "o1", "o2"}, {"t": "t"}, {("i", "t"), ("t", "o1"), ("t", "o2")})
    with pytest.raises(NoUniqueSink):
        validate_workflow_net(two_sinks)
    isolated = PetriNet(seq.places, {**seq.transitions, "lonely": "z"}, seq.arcs)
    with pytest.raises(DisconnectedNode) as info:
        validate_workflow_net(isolated)
    assert info.value.node == "lonely"


def test_net_construction_errors():
    with pytest.raises(InvalidNet):
        PetriNet({"x"}, {"x": "a"}, ())
    with pytest.raises(InvalidNet):
        PetriNet({"p", "q"}, {}, {("p", "q")})
    with pytest.raises(InvalidNet):
        PetriNet({"p"}, {"t": ""}, ())
    with pytest.raises(InvalidNet):
        PetriNet({"p"}, {"t": "a"}, {("p", "ghost")})


def test_partition_checks():
    part = Partition([{"a"}, {"b", "c"}], universe={"a", "b", "c"})
    assert part.part_of("c") == 1
    assert len(part) == 2
    with pytest.raises(ValueError):
        Partition([{"a"}, set()])
    with pytest.raises(ValueError):
        Partition([{"a"}, {"a"}])
    with pytest.raises(ValueError):
        Partition([{"a"}], universe={"a", "b"})


def test_id_factory_continues_after_existing_ids():
    net = PetriNet({"__gen_p4", "x"}, {"t": "a"}, {("__gen_p4", "t"), ("t", "x")})
    ids = IdFactory(net)
    assert ids.place() == "__gen_p5"
    assert ids.transition() == "__gen_t6"


@settings(max_examples=60, deadline=None)
@given(models())
def test_preset_postset_duality(model):
    net = to_wf_net(model)
    for x in net.nodes():
        for y in net.postset(x):
            assert x in net.preset(y)
        for y in net.preset(x):
            assert x in net.postset(y)


@settings(max_examples=60, deadline=None)
@given(models())
def test_generated_nets_are_workflow_nets(model):
    net = to_wf_net(model)
    assert isinstance(validate_workflow_net(net.as_petri_net()), WorkflowNet)
    sub = sorted(net.transitions)[: max(1, len(net.transitions) // 2)]
    places = project_places(net, sub)
    for x, y in project_flow(net, places, sub):
        assert {x, y} <= places | set(sub)


@settings(max_examples=40, deadline=None)
@given(models(max_leaves=5))
def test_places_equivalent_is_an_equivalence(model):
    net = to_wf_net(model)
    places = sorted(net.places)[:10]
    sub = set(sorted(net.transitions)[::2])
    eq = {(p, q): places_equivalent(net, p, q, sub) for p in places for q in places}
    for p in places:
        assert eq[p, p]
        for q in places:
            assert eq[p, q] == eq[q, p]
            for r in places:
                if eq[p, q] and eq[q, r]:
                    assert eq[p, r]
