import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowneat.environments import EvalResult
from flowneat.graph_metrics import MetricsReport
from flowneat.selection import (
    MAXIMIZE,
    MINIMIZE,
    VARIANT_NAMES,
    VARIANTS,
    MeasureVariant,
    ObjectiveVector,
    SelectionConfig,
    ShapeMismatch,
    dominates,
    lexicographic_order,
    objective_vector,
    rank_population,
)


def ov(*slots):
    dirs = (MAXIMIZE, MAXIMIZE, MINIMIZE)
    return ObjectiveVector(tuple((v, dirs[i]) for i, v in enumerate(slots)))


def result(perf, ec=0.4, cost=27):
    m = MetricsReport(0.1, 0.2, 0.3, ec, 0.5, cost, 10, True)
    return EvalResult(perf, m, 10, cost)


def random_population(rng, n, shape_len, coarse=True):
    # coarse values make ties common so later slots matter
    pick = (lambda: rng.randint(0, 3) / 4) if coarse else rng.random
    return [ov(*(pick() if i < 2 else rng.randint(1, 4) for i in range(shape_len))) for _ in range(n)]


def test_eleven_variants():
    assert len(VARIANTS) == 11 == len(set(VARIANT_NAMES))
    assert VARIANT_NAMES == (
        "perf", "le_cost", "le_ratio", "ge_cost", "ge_ratio", "dc_cost", "dc_ratio", "ec_cost", "ec_ratio", "ent_cost", "ent_ratio",
    )
    for name in VARIANT_NAMES:
        assert MeasureVariant.parse(name).name == name
    with pytest.raises(ValueError):
        MeasureVariant.parse("bogus_cost")


def test_objective_vectors():
    assert objective_vector(result(0.9), MeasureVariant.parse("perf")).slots == ((0.9, MAXIMIZE),)
    assert objective_vector(result(0.9), MeasureVariant.parse("ec_cost")).slots == ((0.9, MAXIMIZE), (0.4, MAXIMIZE), (27, MINIMIZE))
    ratio = objective_vector(result(0.9), MeasureVariant.parse("ec_ratio"))
    assert ratio.values == (0.9, 0.4 / 27)
    assert objective_vector(result(0.9, cost=0), MeasureVariant.parse("ec_ratio")).values == (0.9, 0.0)


def test_dominance_examples():
    assert dominates(ov(0.9, 0.4, 27), ov(0.9, 0.3, 27))
    assert not dominates(ov(0.9, 0.4, 27), ov(0.9, 0.4, 27))
    assert not dominates(ov(0.9, 0.5, 30), ov(0.9, 0.4, 27))
    with pytest.raises(ShapeMismatch):
        dominates(ov(0.9), ov(0.9, 0.4, 27))


def test_rank_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        rank_population([ov(0.9), ov(0.9, 0.4, 27)], SelectionConfig(), random.Random(0))


def test_p1_tie_breaks():
    cfg = SelectionConfig(p=1.0)
    assert rank_population([ov(0.9, 0.3, 10), ov(0.9, 0.4, 10)], cfg, random.Random(0)) == [1, 0]
    assert rank_population([ov(0.9, 0.4, 12), ov(0.9, 0.4, 10)], cfg, random.Random(0)) == [1, 0]


def test_tie_epsilon_treats_close_values_as_equal():
    cfg = SelectionConfig(p=1.0, tie_epsilon=1e-9)
    assert rank_population([ov(0.5, 0.4, 20), ov(0.5 + 1e-12, 0.4, 10)], cfg, random.Random(0)) == [1, 0]


@pytest.mark.parametrize("size", [1, 5, 50])
def test_one_draw_per_ranking(size):
    probe, ref = random.Random(9), random.Random(9)
    rank_population([ov(1.0, 1.0, 1)] * size, SelectionConfig(), probe)
    ref.random()
    assert probe.random() == ref.random()


def test_config_validation():
    with pytest.raises(ValueError):
        SelectionConfig(p=1.5)
    with pytest.raises(ValueError):
        SelectionConfig(tie_epsilon=0)


def _perf_only(objs):
    return sorted(range(len(objs)), key=lambda i: -objs[i].values[0])


def test_p0_equals_performance_only_over_1000_populations():
    rng = random.Random(0)
    for _ in range(1000):
        objs = random_population(rng, rng.randint(1, 12), 3)
        assert rank_population(objs, SelectionConfig(p=0.0), rng) == _perf_only(objs)


def test_p1_equals_lexicographic_over_1000_populations():
    rng = random.Random(1)
    for _ in range(1000):
        objs = random_population(rng, rng.randint(1, 12), 3)
        key = lambda i: (-objs[i].values[0], -objs[i].values[1], objs[i].values[2])
        assert rank_population(objs, SelectionConfig(p=1.0), rng) == sorted(range(len(objs)), key=key)


def test_dominance_implies_precedence_over_1000_populations():
    rng = random.Random(2)
    for _ in range(1000):
        objs = random_population(rng, rng.randint(2, 10), 3)
        order = rank_population(objs, SelectionConfig(p=1.0), rng)
        pos = {k: i for i, k in enumerate(order)}
        for a in range(len(objs)):
            for b in range(len(objs)):
                if dominates(objs[a], objs[b]):
                    assert pos[a] < pos[b]


@pytest.mark.parametrize("transform", [math.exp, lambda v: 3 * v - 7, lambda v: v**3, math.atan])
def test_slot0_monotone_transform_invariance_over_1000_populations(transform):
    rng = random.Random(3)
    for _ in range(1000):
        objs = random_population(rng, rng.randint(1, 10), rng.choice([1, 2, 3]))
        moved = [ObjectiveVector(((transform(o.slots[0][0]), MAXIMIZE),) + o.slots[1:]) for o in objs]
        p = rng.random()
        seed = rng.random()
        assert rank_population(objs, SelectionConfig(p=p), random.Random(seed)) == rank_population(
            moved, SelectionConfig(p=p), random.Random(seed)
        )


@settings(max_examples=200)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1), st.integers(0, 50)), max_size=15), st.floats(0, 1), st.integers(0, 2**32))
def test_ranking_is_a_permutation(rows, p, seed):
    objs = [ov(*r) for r in rows]
    order = rank_population(objs, SelectionConfig(p=p), random.Random(seed))
    assert sorted(order) == list(range(len(objs)))


@given(st.tuples(st.floats(0, 1), st.floats(0, 1), st.integers(0, 9)), st.tuples(st.floats(0, 1), st.floats(0, 1), st.integers(0, 9)))
def test_dominance_irreflexive_and_asymmetric(a, b):
    va, vb = ov(*a), ov(*b)
    assert not dominates(va, va)
    assert not (dominates(va, vb) and dominates(vb, va))


def test_lexicographic_order_is_stable():
    objs = [ov(0.5, 0.1, 3)] * 4
    assert lexicographic_order(objs, 3, 1e-9) == [0, 1, 2, 3]
