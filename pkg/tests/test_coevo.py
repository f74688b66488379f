from __future__ import annotations

import itertools

import pytest

from technometrics.coevo import (
    coevolution_balance,
    coevolution_index,
    evolution_index,
    parse_tech_spec,
)
from technometrics.errors import DataError, InvalidCount, InvalidDuration, TooFewComponents


def test_smartphone_example():
    iphone = evolution_index("iPhone", 10, 9)
    whatsapp = evolution_index("WhatsApp", 14, 7)
    assert iphone.ev == pytest.approx(10 / 9, abs=1e-12)
    assert whatsapp.ev == pytest.approx(2.0, abs=1e-12)
    index = coevolution_index([iphone, whatsapp])
    assert index.cv == pytest.approx(20 / 9, abs=1e-12)
    assert f"{iphone.ev:.2f}" == "1.11"
    assert f"{whatsapp.ev:.2f}" == "2.00"
    assert f"{index.cv:.2f}" == "2.22"
    assert index.host is iphone
    assert index.coevolving
    assert index.warnings == ()


def test_three_components():
    index = coevolution_index(
        [evolution_index("a", 1, 2), evolution_index("b", 2, 1), evolution_index("c", 3, 1)]
    )
    assert index.cv == pytest.approx(3.0, abs=1e-12)
    assert len(index.warnings) == 1
    assert "a" in index.warnings[0]


def test_permutation_invariance():
    items = [evolution_index(name, g, y) for name, g, y in (("x", 3, 7), ("y", 5, 2), ("z", 4, 3))]
    values = {coevolution_index(order).cv for order in itertools.permutations(items)}
    assert max(values) == pytest.approx(min(values), rel=1e-12)


def test_product_dominates_each_component_when_all_at_least_one(rng):
    for _ in range(1000):
        count = int(rng.integers(2, 6))
        items = []
        for k in range(count):
            duration = float(rng.uniform(0.5, 20.0))
            generations = int(rng.integers(int(duration) + 1, int(duration) + 30))
            items.append(evolution_index(f"t{k}", generations, duration))
        index = coevolution_index(items)
        assert all(item.ev >= 1.0 for item in items)
        assert index.cv >= max(item.ev for item in items) - 1e-12


def test_doubling_generations_doubles_contribution():
    base = coevolution_index([evolution_index("h", 4, 5), evolution_index("s", 6, 5)])
    doubled = coevolution_index([evolution_index("h", 8, 5), evolution_index("s", 6, 5)])
    assert doubled.cv == pytest.approx(2.0 * base.cv, rel=1e-12)


def test_balance():
    host = evolution_index("h", 10, 9)
    sub = evolution_index("s", 18, 9)
    assert coevolution_balance(host, sub) == pytest.approx(1.8, rel=1e-12)


@pytest.mark.parametrize("generations", [0, -1, 2.5])
def test_invalid_generations(generations):
    with pytest.raises(InvalidCount):
        evolution_index("t", generations, 5)


@pytest.mark.parametrize("duration", [0, -3.0, float("inf")])
def test_invalid_duration(duration):
    with pytest.raises(InvalidDuration):
        evolution_index("t", 3, duration)


def test_single_component_rejected():
    with pytest.raises(TooFewComponents):
        coevolution_index([evolution_index("only", 3, 4)])


def test_parse_tech_spec():
    parsed = parse_tech_spec("Mac OS X:17:18")
    assert parsed.tech_name == "Mac OS X"
    assert parsed.generations == 17
    assert parsed.ev == pytest.approx(17 / 18)
    assert parse_tech_spec("https://x:3:2").tech_name == "https://x"


@pytest.mark.parametrize(
    "text, error",
    [("nocolons", DataError), (":3:4", DataError), ("x:three:4", InvalidCount), ("x:3:soon", InvalidDuration)],
)
def test_parse_tech_spec_errors(text, error):
    with pytest.raises(error):
        parse_tech_spec(text)
