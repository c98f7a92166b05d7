import pytest

from minlab.experiments import (
    HIGH,
    ConvergenceCurve,
    CurvePoint,
    PreconditionError,
    TrialPlan,
    acceptance_trace,
    decays,
    dumps,
    lemma5_replay,
    quasi_faithful_suite,
    run_convergence,
    run_outputs,
    uniformity_probe,
    verify_classification_behavior,
    wilson,
)
from minlab.fixtures import get_state
from minlab.graphs import class_of, empty_dag
from minlab.learner import HypothesisOrder, Learner
from oracles import random_valid_order

GRID = (100, 1000, 10_000)


def test_trial_plan_validation():
    st = get_state("generic_chain")
    with pytest.raises(ValueError):
        TrialPlan(st, Learner.default(3), (1000, 100), 10, 0)
    with pytest.raises(ValueError):
        TrialPlan(st, Learner.default(3), (100,), 0, 0)
    with pytest.raises(ValueError):
        TrialPlan(st, Learner.default(2), (100,), 10, 0)


def test_point_mass_always_succeeds():
    st = get_state("point_mass")
    curve = run_convergence(TrialPlan(st, Learner.default(2), (10, 100), 20, 1))
    assert curve.rates() == [1.0, 1.0]


def test_generic_chain_curve():
    curve = run_convergence(TrialPlan(get_state("generic_chain"), Learner.default(3), GRID, 100, 42))
    rates = curve.rates()
    assert rates == sorted(rates) and rates[-1] >= HIGH
    for p in curve.points:
        assert 0 <= p.lo <= p.rate <= p.hi <= 1
    assert decays(curve)


def test_degenerate_edge_is_sacrificed():
    st = get_state("degenerate_edge")
    curve = run_convergence(TrialPlan(st, Learner.default(2), GRID, 100, 42))
    assert curve.terminal() <= 0.05
    assert curve.modal_output() == class_of(empty_dag(2)).class_id
    empty = run_convergence(TrialPlan(st, Learner.default(2), GRID, 100, 42, target=class_of(empty_dag(2))))
    assert empty.terminal() >= HIGH


def test_parallel_runs_match_serial():
    p = get_state("generic_collider").p
    lr = Learner.default(3)
    assert run_outputs(p, lr, 300, 12, 5, jobs=1) == run_outputs(p, lr, 300, 12, 5, jobs=3)


def test_reports_are_reproducible():
    st = get_state("generic_collider")
    a = run_convergence(TrialPlan(st, Learner.default(3), (100, 1000), 30, 9))
    b = run_convergence(TrialPlan(st, Learner.default(3), (100, 1000), 30, 9))
    assert dumps(a.to_dict()) == dumps(b.to_dict())
    assert a.to_csv().splitlines()[0] == "n,trials,successes,rate,lo,hi"


def test_wilson_interval():
    lo, hi = wilson(95, 100)
    assert lo < 0.95 < hi and hi <= 1
    assert wilson(0, 10)[0] == 0


def test_decays():
    def curve(rates):
        return ConvergenceCurve("x", tuple(CurvePoint(10**i, 0, 1, r, 0, 1) for i, r in enumerate(rates)))

    assert decays(curve([0.2, 0.7, 0.9, 1.0]))
    assert not decays(curve([0.6, 0.7, 0.9]))


def test_classification_behavior_on_fixture_suite():
    names = ["generic_chain", "generic_collider", "degenerate_edge", "degenerate_chain", "cancellation_collider", "cancellation_collider_twin"]
    report = verify_classification_behavior([get_state(n) for n in names], GRID, 60, 11)
    assert report["passed"], [r["state"] for r in report["states"] if not r["consistent"]]
    regimes = {r["state"]: r["regime"] for r in report["states"]}
    assert regimes["degenerate_chain"] == "non-minimal"
    assert regimes["cancellation_collider"] == "minimal, not u-minimal"


def test_faithful_state_succeeds_under_other_valid_orders(rng):
    st = get_state("generic_chain")
    for _ in range(3):
        lr = Learner(HypothesisOrder(3, tuple(random_valid_order(3, rng))))
        assert run_convergence(TrialPlan(st, lr, (10_000,), 40, 3)).terminal() >= HIGH


def test_replay_on_degenerate_edge():
    rep = lemma5_replay(get_state("degenerate_edge"), GRID, 60, 5)
    assert rep["passed"] and rep["shared_seed_identical"]
    assert rep["s3"]["modal_output"] == class_of(empty_dag(2)).class_id
    assert rep["s3"]["truth"] != rep["s3"]["modal_output"]


def test_replay_refuses_minimal_states():
    with pytest.raises(PreconditionError, match="precondition: state is minimal"):
        lemma5_replay(get_state("generic_chain"), GRID, 10, 5)


def test_uniformity_probe_small():
    center = get_state("generic_chain")
    rep = uniformity_probe(center, 0.01, 3, (10_000,), 30, 4)
    assert rep.max_tv < 0.01
    assert rep.verdict == "no violation found"
    assert not rep.informational
    for _, _, c in rep.probes:
        assert c.target == center.truth().class_id


def test_uniformity_probe_at_zero_radius_repeats_the_center():
    center = get_state("generic_chain")
    rep = uniformity_probe(center, 0.0, 2, (1000,), 20, 4)
    own = run_convergence(TrialPlan(center, Learner.default(3), (1000,), 20, 4))
    for _, tv, c in rep.probes:
        assert tv == 0 and c.to_dict() == own.to_dict()


def test_uniformity_probe_flags_non_u_minimal_center():
    rep = uniformity_probe(get_state("degenerate_edge"), 0.0, 1, (100,), 5, 1)
    assert rep.informational


def test_quasi_faithful_suite():
    states = [get_state(n) for n in ("generic_chain", "degenerate_edge", "cancellation_collider")]
    rep = quasi_faithful_suite(states, (1000, 10_000), 60, 2)
    names = [r["state"] for r in rep["states"]]
    assert names == ["generic_chain", "degenerate_edge"]
    assert rep["passed"]
    assert quasi_faithful_suite(states, (100,), 5, 2, k=4) == {"states": [], "passed": True}


def test_acceptance_trace():
    rep = acceptance_trace(Learner.default(3), get_state("generic_chain"), 10_000, 40, 6)
    assert rep["relation_with_true_accepted_rate"] >= 0.95
    assert all(r["fits"] for r in rep["records"])
    edge = acceptance_trace(Learner.default(2), get_state("degenerate_edge"), 10_000, 40, 6)
    assert edge["relation_rate"] == 1.0
    assert list(edge["outputs"]) == [class_of(empty_dag(2)).class_id]

