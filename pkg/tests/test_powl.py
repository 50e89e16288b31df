import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import models
from wf2powl.errors import BadArity, InvalidModel, NotStrict
from wf2powl.powl import (
    LanguageBounds,
    Leaf,
    Loop,
    PartialOrder,
    StrictOrder,
    Xor,
    bounded_powl_language,
    canonicalize,
    depth,
    leaves,
    ordered_shuffle,
    sequence,
    simplify,
    size,
    transitive_closure,
    transitive_reduction,
    validate,
)

a, b, c, d, e = (Leaf(x) for x in "abcde")
tau = Leaf(None)


def test_transitive_closure_examples():
    assert transitive_closure({(1, 2), (2, 3)}) == {(1, 2), (2, 3), (1, 3)}
    assert transitive_closure(set()) == set()
    assert (1, 1) in transitive_closure({(1, 2), (2, 1)})


def test_transitive_reduction_inverts_closure():
    closed = transitive_closure({(0, 1), (1, 2), (0, 3)})
    assert transitive_reduction(closed) == {(0, 1), (1, 2), (0, 3)}


def test_strict_order_rejects_cycles():
    with pytest.raises(NotStrict):
        StrictOrder(2, {(0, 1), (1, 0)})
    with pytest.raises(InvalidModel):
        StrictOrder(2, {(0, 5)})
    with pytest.raises(BadArity):
        StrictOrder(1)
    assert StrictOrder(3, {(0, 1), (1, 2)}).precedes(0, 2)


def test_validate_examples():
    validate(a)
    validate(Loop(a, b))
    with pytest.raises(NotStrict):
        PartialOrder([a, b], {(0, 1), (1, 0)})
    with pytest.raises(BadArity):
        Xor([a])
    with pytest.raises(InvalidModel):
        Leaf("")


def test_ordered_shuffle_example():
    got = ordered_shuffle([("a", "b"), ("c",), ("d", "e")], {(0, 1), (0, 2)})
    assert got == {tuple("abcde"), tuple("abdce"), tuple("abdec")}


def test_ordered_shuffle_small_cases():
    assert ordered_shuffle([(), ()], {(0, 1)}) == {()}
    assert ordered_shuffle([(), ()], set()) == {()}
    assert ordered_shuffle([("a",), ("b",)], set()) == {("a", "b"), ("b", "a")}


def test_bounded_language_examples():
    assert bounded_powl_language(Xor(a, b)) == {("a",), ("b",)}
    assert bounded_powl_language(Loop(a, b), loop_unroll=1) == {("a",), ("a", "b", "a")}
    assert bounded_powl_language(PartialOrder([a, b])) == {("a", "b"), ("b", "a")}


def test_bounded_language_silent_and_length_cap():
    assert bounded_powl_language(tau) == {()}
    lang = bounded_powl_language(Loop(tau, a), loop_unroll=6, max_trace_len=2)
    assert lang == {(), ("a",), ("a", "a")}
    with pytest.raises(ValueError):
        LanguageBounds(loop_unroll=-1)
    with pytest.raises(TypeError):
        bounded_powl_language(a, LanguageBounds(), loop_unroll=2)


def test_sequence_and_metrics():
    m = sequence(a, Xor(b, c), Loop(d, e))
    assert bounded_powl_language(m, loop_unroll=0) == {("a", "b", "d"), ("a", "c", "d")}
    assert sequence(a) is a
    assert [leaf.label for leaf in leaves(m)] == list("abcde")
    assert size(m) == 8
    assert depth(m) == 2


def test_canonicalize_is_order_insensitive():
    m1 = PartialOrder([b, a, c], {(0, 2)})
    m2 = PartialOrder([c, a, b], {(2, 0)})
    assert canonicalize(m1) == canonicalize(m2)
    assert canonicalize(Xor(b, a)) == Xor(a, b)


def test_simplify_drops_silent_children_keeping_order():
    m = PartialOrder([a, tau, b], {(0, 1), (1, 2)})
    s = simplify(m)
    assert s == PartialOrder([a, b], {(0, 1)})
    assert simplify(Xor(a, Xor(b, c))) == Xor(a, b, c)


@settings(max_examples=80, deadline=None)
@given(models(), st.integers(0, 3), st.integers(0, 5))
def test_monotone_in_both_bounds(model, unroll, k):
    small = bounded_powl_language(model, loop_unroll=unroll, max_trace_len=k)
    more_loops = bounded_powl_language(model, loop_unroll=unroll + 1, max_trace_len=k)
    longer = bounded_powl_language(model, loop_unroll=unroll, max_trace_len=k + 1)
    assert small <= more_loops
    assert small == {tr for tr in longer if len(tr) <= k}


@settings(max_examples=80, deadline=None)
@given(models())
def test_canonical_form_keeps_language(model):
    canon = canonicalize(model)
    validate(canon)
    assert canonicalize(canon) == canon
    assert bounded_powl_language(canon, max_trace_len=5) == bounded_powl_language(model, max_trace_len=5)


@settings(max_examples=80, deadline=None)
@given(models())
def test_simplify_keeps_language(model):
    assert bounded_powl_language(simplify(model), max_trace_len=5) == bounded_powl_language(
        model, max_trace_len=5
    )
