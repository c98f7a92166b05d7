import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minlab.distributions import (
    JointTable,
    MarkovViolationError,
    independence_set,
    is_markov,
    joint_of,
    mix,
    random_network,
)
from minlab.fixtures import all_fixtures, cancellation_table, fixture_names, get_fixture, get_state
from minlab.graphs import CiStatement, Dag, empty_dag, entailment_set, enumerate_dags, equivalence_classes
from minlab.states import (
    CausalState,
    StateClass,
    classify,
    classify_state,
    is_faithful,
    is_minimal,
    is_quasi_faithful,
    is_u_minimal,
    minimal_classes,
    minimality_witness,
)

CORRELATED = JointTable.from_probs((2, 2), [0.5, 0, 0, 0.5])


def oracle_minimal_graphs(p):
    """Every DAG minimal to ``p``, by a direct scan over all DAGs."""
    ip = independence_set(p)
    fit = [g for g in enumerate_dags(p.k) if entailment_set(g) <= ip]
    return [g for g in fit if not any(entailment_set(g) < entailment_set(o) for o in fit)]


def test_classify_examples():
    assert classify_state(get_state("generic_chain")) == StateClass(True, True, True, True, True)
    assert classify_state(get_state("degenerate_edge")) == StateClass(True, False, False, False, True)
    assert classify(empty_dag(2), CORRELATED).markov is False


def test_faithfulness_examples():
    assert is_faithful(*_gp("generic_chain"))
    assert not is_faithful(*_gp("degenerate_edge"))
    assert is_faithful(*_gp("uniform_pair"))
    with pytest.raises(MarkovViolationError):
        is_faithful(empty_dag(2), CORRELATED)


def _gp(name):
    s = get_state(name)
    return s.g, s.p


def test_minimality_examples():
    g, p = _gp("degenerate_edge")
    assert not is_minimal(g, p)
    assert minimality_witness(g, p).members == (empty_dag(2),)
    assert is_minimal(*_gp("generic_chain"))
    assert is_minimal(*_gp("uniform_pair"))


def test_generic_chain_is_u_minimal_with_its_own_class():
    g, p = _gp("generic_chain")
    assert is_u_minimal(g, p)
    (h,) = minimal_classes(p)
    assert len(h.members) == 3 and g in h.members


def test_minimal_not_u_minimal_witness_by_direct_scan():
    p = cancellation_table()
    graphs = oracle_minimal_graphs(p)
    isets = {entailment_set(g) for g in graphs}
    assert len(isets) == 2
    for name in ("cancellation_collider", "cancellation_collider_twin"):
        g, p2 = _gp(name)
        assert g in graphs
        assert is_minimal(g, p2) and not is_u_minimal(g, p2)


def test_ternary_witness_also_minimal_not_u_minimal():
    g, p = _gp("ternary_cancellation")
    assert g in oracle_minimal_graphs(p)
    assert len({entailment_set(o) for o in oracle_minimal_graphs(p)}) > 1
    assert is_minimal(g, p) and not is_u_minimal(g, p)


def test_cancellation_table_is_not_quasi_faithful():
    p = cancellation_table()
    ip = independence_set(p)
    assert ip == {CiStatement.make([0], [1]), CiStatement.make([0], [2])}
    assert all(h.iset != ip for h in equivalence_classes(3))
    assert not is_quasi_faithful(p)


def test_quasi_faithful_examples(rng):
    assert is_quasi_faithful(JointTable.uniform((2, 2, 2)))
    for g in enumerate_dags(3)[::4]:
        assert is_quasi_faithful(joint_of(random_network(g, (2, 2, 2), rng)))


def test_every_fixture_follows_the_implication_chain():
    for fx in all_fixtures():
        c = classify_state(fx.state)
        assert c.markov
        assert not c.faithful or c.u_minimal, fx.name
        assert not c.u_minimal or c.minimal, fx.name
        assert not c.faithful or c.quasi_faithful, fx.name


def test_every_fixture_has_a_minimal_graph_above_it():
    for fx in all_fixtures():
        g, p = fx.state.g, fx.state.p
        above = [h for h in minimal_classes(p) if entailment_set(g) <= h.iset]
        assert above, fx.name


def test_fixture_catalogue():
    assert {"generic_chain", "degenerate_edge", "cancellation_collider"} <= set(fixture_names())
    with pytest.raises(KeyError, match="known"):
        get_fixture("nope")


def test_causal_state_requires_markov():
    with pytest.raises(MarkovViolationError):
        CausalState(empty_dag(2), CORRELATED)
    with pytest.raises(ValueError):
        CausalState(empty_dag(3), CORRELATED)


@given(idx=st.integers(0, 24), seed=st.integers(0, 2**32 - 1), lam=st.sampled_from([0.0, 0.5, 1.0]))
@settings(max_examples=120, deadline=None)
def test_implications_and_u_minimal_faithful_on_random_states(idx, seed, lam):
    # mixing with an independent table keeps some states on the boundary
    rng = np.random.default_rng(seed)
    g = enumerate_dags(3)[idx]
    p = joint_of(random_network(g, (2, 2, 2), rng))
    p = mix(p, JointTable.uniform((2, 2, 2)), lam) if lam < 1 else JointTable.uniform((2, 2, 2))
    if not is_markov(g, p):
        return
    c = classify(g, p)
    assert c.u_minimal <= c.minimal
    assert c.faithful <= c.u_minimal
    # at these sizes every u-minimal state turns out to be faithful
    assert c.u_minimal == c.faithful


def test_adding_any_realizable_set_creates_a_rival_minimal_class():
    # any statement set containing I(G) strictly yields a rival minimal class
    for h in equivalence_classes(3):
        for extra in equivalence_classes(3):
            if extra.iset <= h.iset:
                continue
            union = h.iset | extra.iset
            fits = [o for o in equivalence_classes(3) if o.iset <= union]
            maximal = [o for o in fits if not any(o.iset < x.iset for x in fits)]
            assert not (len(maximal) == 1 and maximal[0] == h)
