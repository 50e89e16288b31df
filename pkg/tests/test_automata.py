from hypothesis import given, settings

from helpers import models
from wf2powl import fixtures
from wf2powl.automata import DawgTable, language_diff, model_dawg, net_dawg, same_bounded_language
from wf2powl.powl import Leaf, Loop, PartialOrder, bounded_powl_language
from wf2powl.powl_to_net import to_wf_net
from wf2powl.semantics import bounded_language


def test_equal_languages_share_a_node():
    table = DawgTable()
    m1 = PartialOrder([Leaf("a"), Leaf("b")])
    m2 = PartialOrder([Leaf("b"), Leaf("a")])
    assert model_dawg(table, m1, 4, 4) == model_dawg(table, m2, 4, 4)
    assert table.count(model_dawg(table, m1, 4, 4)) == 2


def test_witness_is_shortest():
    diff = language_diff(fixtures.loop_net(), Loop(Leaf("a"), Leaf("c")), 6)
    assert diff is not None
    assert diff.trace == ("a", "b", "a") and diff.side == "net only"
    ok, witness = same_bounded_language(fixtures.loop_net(), Loop(Leaf("a"), Leaf("b")), 6)
    assert ok and witness is None


@settings(max_examples=100, deadline=None)
@given(models(max_leaves=7))
def test_automata_match_set_enumeration(model):
    k = 5
    table = DawgTable()
    net = to_wf_net(model)
    assert set(table.traces(model_dawg(table, model, k, k))) == bounded_powl_language(
        model, loop_unroll=k, max_trace_len=k
    )
    assert set(table.traces(net_dawg(table, net, k))) == bounded_language(net, k)
