import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minlab.distributions import JointTable, independence_set
from minlab.fixtures import all_fixtures, get_state
from minlab.graphs import Dag, chain, class_of, complete_dag, empty_dag, equivalence_classes, statement_universe
from minlab.learner import (
    HypothesisOrder,
    Learner,
    OrderError,
    default_order,
    learner_from_config,
    order_preferring,
    order_violations,
    patched_learner,
    select_f,
)
from minlab.sampling import derive_seed, draw
from minlab.states import classify_state, is_u_minimal
from oracles import random_valid_order

COLLIDER = Dag(3, {(0, 2), (1, 2)})


def test_default_order_k2():
    seq = default_order(2).sequence
    assert seq[0] == class_of(empty_dag(2)) and seq[1] == class_of(Dag(2, {(0, 1)}))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_default_order_is_valid_and_complete(k):
    seq = default_order(k).sequence
    assert len(seq) == len(equivalence_classes(k))
    assert order_violations(seq) == []
    assert seq[0] == class_of(empty_dag(k)) and seq[-1] == class_of(complete_dag(k))


def test_order_rejects_violations():
    seq = list(default_order(2).sequence)
    with pytest.raises(OrderError, match="strictly contains"):
        HypothesisOrder(2, tuple(reversed(seq)))
    with pytest.raises(OrderError):
        HypothesisOrder(2, tuple(seq[:1]))


def test_preferring_chain_puts_it_before_the_collider():
    ids = order_preferring(3, class_of(chain(3))).sequence
    assert ids.index(class_of(chain(3))) < ids.index(class_of(COLLIDER))
    ids = order_preferring(3, class_of(COLLIDER)).sequence
    assert ids.index(class_of(COLLIDER)) < ids.index(class_of(chain(3)))


def test_preferring_the_empty_graph_keeps_the_default_head():
    assert order_preferring(3, class_of(empty_dag(3))).sequence[0] == default_order(3).sequence[0]


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_preferred_orders_are_valid_and_prefer(seed):
    rng = np.random.default_rng(seed)
    classes = equivalence_classes(3)
    h = classes[rng.integers(len(classes))]
    seq = order_preferring(3, h).sequence
    assert order_violations(seq) == []
    pos = seq.index(h)
    for o in seq[pos + 1:]:
        assert not o.iset > h.iset


def test_select_f_examples():
    order = default_order(3)
    assert select_f(order, statement_universe(3)) == class_of(empty_dag(3))
    assert select_f(order, frozenset()) == class_of(complete_dag(3))
    p = get_state("degenerate_edge").p
    assert select_f(default_order(2), independence_set(p)) == class_of(empty_dag(2))


@st.composite
def order_and_subset(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    universe = statement_universe(3)
    s = frozenset(x for x in universe if rng.random() < 0.5)
    return random_valid_order(3, rng), s, rng


@given(order_and_subset())
@settings(max_examples=200, deadline=None)
def test_selected_class_is_subset_maximal_and_stable(args):
    seq, s, rng = args
    order = HypothesisOrder(3, tuple(seq))
    h = select_f(order, s)
    assert h.iset <= s
    assert not any(h.iset < o.iset <= s for o in equivalence_classes(3))
    # any S' between I(selected) and S selects the same class
    extra = [x for x in s if x not in h.iset]
    between = h.iset | frozenset(x for x in extra if rng.random() < 0.5)
    assert select_f(order, between) == h


def test_u_minimal_fixtures_are_forced_under_every_order(rng):
    orders = [default_order(3)] + [HypothesisOrder(3, tuple(random_valid_order(3, rng))) for _ in range(30)]
    for fx in all_fixtures():
        g, p = fx.state.g, fx.state.p
        if g.k != 3 or not is_u_minimal(g, p):
            continue
        for order in orders:
            assert select_f(order, independence_set(p)) == class_of(g), fx.name


def test_order_choice_decides_among_rival_minimal_classes():
    s1, s2 = get_state("cancellation_collider"), get_state("cancellation_collider_twin")
    ip = independence_set(s1.p)
    assert select_f(order_preferring(3, class_of(s1.g)), ip) == class_of(s1.g)
    assert select_f(order_preferring(3, class_of(s2.g)), ip) == class_of(s2.g)


def test_learn_on_point_mass_sample():
    s = draw(JointTable.point_mass((2, 2, 2), (1, 1, 0)), 10, 0)
    assert Learner.default(3).learn(s) == class_of(empty_dag(3))


def test_learn_generic_chain_large_sample():
    s = draw(get_state("generic_chain").p, 100_000, 8)
    assert Learner.default(3).learn(s) == class_of(chain(3))


def test_learn_degenerate_edge_picks_empty_graph():
    s = draw(get_state("degenerate_edge").p, 10_000, 3)
    assert Learner.default(2).learn(s) == class_of(empty_dag(2))


def test_patched_learner():
    s1 = get_state("cancellation_collider")
    target = independence_set(s1.p)
    twin = class_of(get_state("cancellation_collider_twin").g)
    base = Learner.preferring(3, class_of(s1.g))
    patched = patched_learner(base, twin, target)
    on_target = [patched.learn(draw(s1.p, 10_000, derive_seed(1, t))) for t in range(40)]
    assert sum(h == twin for h in on_target) >= 38
    chain_p = get_state("generic_chain").p
    for t in range(20):
        sample = draw(chain_p, 10_000, derive_seed(2, t))
        assert patched.learn(sample) == base.learn(sample)
    assert patched.describe()["patched_target"] == twin.class_id


def test_learner_config():
    lr = learner_from_config({"k": 3, "order": "prefer:" + class_of(COLLIDER).class_id, "threshold_constant": 2})
    assert lr.threshold_constant == 2.0
    assert lr.order.sequence.index(class_of(COLLIDER)) < lr.order.sequence.index(class_of(chain(3)))
    assert learner_from_config({"k": 2}).describe()["order"] == default_order(2).ids()
    with pytest.raises(ValueError):
        learner_from_config({"k": 2, "order": "random"})
    with pytest.raises(KeyError):
        learner_from_config({"k": 3, "order": "prefer:bogus"})


def test_fixture_classifications_are_as_designed():
    flags = {fx.name: classify_state(fx.state) for fx in all_fixtures()}
    for name in ("generic_chain", "generic_collider", "uniform_pair"):
        assert flags[name].faithful
    for name in ("cancellation_collider", "cancellation_collider_twin", "ternary_cancellation"):
        assert flags[name].minimal and not flags[name].u_minimal and not flags[name].quasi_faithful
    for name in ("degenerate_edge", "degenerate_chain"):
        assert not flags[name].minimal and flags[name].quasi_faithful
