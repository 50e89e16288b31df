import filecmp
import os

import pytest

from wf2powl.corpus import PowlParams, generate_corpus, make_benchmark, random_powl
from wf2powl.model_io import parse_powl_json, write_powl_json
from wf2powl.powl import PartialOrder, depth, validate
from wf2powl.powl_to_net import to_wf_net
from wf2powl.semantics import check_sound
from wf2powl.translate import ConvertOptions, convert


def _po_nodes(model):
    stack = [model]
    while stack:
        m = stack.pop()
        if isinstance(m, PartialOrder):
            yield m
        stack.extend(getattr(m, "children", ()))


def test_seeded_generation_is_deterministic():
    assert random_powl(seed=5) == random_powl(seed=5)
    assert write_powl_json(random_powl(seed=5)) == write_powl_json(random_powl(seed=5))


def test_zero_density_gives_concurrency():
    params = PowlParams(order_density=0.0, leaf_count_range=(10, 30))
    for seed in range(30):
        for po in _po_nodes(random_powl(params, seed)):
            assert not po.order.pairs


def test_params_validation():
    with pytest.raises(ValueError):
        PowlParams(leaf_count_range=(0, 3))
    with pytest.raises(ValueError):
        PowlParams(order_density=1.5)


def test_thousand_models_validate_and_roundtrip():
    params = PowlParams(max_depth=5)
    opts = ConvertOptions(check_soundness=False)
    for seed in range(1000):
        m = random_powl(params, seed)
        validate(m)
        assert depth(m) <= 5
        assert parse_powl_json(write_powl_json(m)) == m
        assert convert(to_wf_net(m), opts).ok


def test_benchmark_sizes():
    items = make_benchmark(30, 20, 400, seed=3)
    assert len(items) == 30
    for it in items:
        size = len(it.net.transitions)
        assert abs(size - it.target) <= 0.2 * it.target
        assert 20 <= size <= 400
    targets = [it.target for it in items]
    assert targets[0] == 20 and targets[-1] == 400


def test_small_benchmark_is_sound_and_converts():
    for it in make_benchmark(15, 20, 40, seed=11):
        assert check_sound(it.net).sound
        assert convert(it.net).ok


def test_corpus_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    generate_corpus(str(a), 5, seed=9, min_transitions=20, max_transitions=60)
    generate_corpus(str(b), 5, seed=9, min_transitions=20, max_transitions=60)
    names = sorted(os.listdir(a))
    assert names == sorted(os.listdir(b))
    assert "manifest.json" in names and len(names) == 11
    match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
    assert not mismatch and not errors
