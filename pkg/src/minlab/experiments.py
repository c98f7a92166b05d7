"""
Monte-Carlo harness for convergence behavior.

Almost-sure convergence cannot be observed in finitely many trials. It is
rendered here as success-rate curves over a grid of sample sizes, judged
against fixed terminal thresholds (HIGH / LOW) plus simple decay trends. Every
trial seed is derived from ``(base_seed, n, trial)``, so reports are
reproducible byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from statsmodels.stats.proportion import proportion_confint

from .distributions import (
    MarkovViolationError,
    independence_set,
    is_markov,
    joint_of,
    network_from_joint,
    perturb_network,
    tv_distance,
)
from .graphs import equivalence_classes
from .learner import Learner
from .sampling import derive_seed, draw
from .states import (
    CausalState,
    classify,
    is_minimal,
    minimal_classes,
    minimality_witness,
)

HIGH = 0.95
LOW = 0.05


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TrialPlan:
    state: CausalState
    learner: object
    n_grid: tuple
    trials_per_n: int
    base_seed: int
    target: object = None  # hypothesis counted as success; defaults to the state's truth

    def __post_init__(self):
        grid = tuple(int(n) for n in self.n_grid)
        object.__setattr__(self, "n_grid", grid)
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 1:
            raise ValueError(f"n_grid must be positive and strictly increasing, got {grid}")
        if self.trials_per_n < 1:
            raise ValueError("trials_per_n must be >= 1")
        if self.learner.k != self.state.k:
            raise ValueError("learner and state have different variable counts")

    def success_target(self):
        return self.target if self.target is not None else self.state.truth()


@dataclass(frozen=True)
class CurvePoint:
    n: int
    successes: int
    trials: int
    rate: float
    lo: float
    hi: float
    outputs: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "n": self.n,
            "trials": self.trials,
            "successes": self.successes,
            "rate": self.rate,
            "lo": self.lo,
            "hi": self.hi,
            "outputs": dict(sorted(self.outputs.items())),
        }


@dataclass(frozen=True)
class ConvergenceCurve:
    target: str
    points: tuple

    def rates(self):
        return [p.rate for p in self.points]

    def terminal(self):
        return self.points[-1].rate

    def modal_output(self, index=-1):
        outputs = self.points[index].outputs
        return max(sorted(outputs), key=lambda c: outputs[c])

    def to_dict(self):
        return {"target": self.target, "points": [p.to_dict() for p in self.points]}

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "trials", "successes", "rate", "lo", "hi"])
        for p in self.points:
            writer.writerow([p.n, p.trials, p.successes, repr(p.rate), repr(p.lo), repr(p.hi)])
        return buf.getvalue()


def wilson(successes, trials):
    lo, hi = proportion_confint(successes, trials, alpha=0.05, method="wilson")
    return float(lo), float(hi)


def _outputs_for(args):
    p, learner, n, trials, base_seed = args
    return [learner.learn(draw(p, n, derive_seed(base_seed, n, t))).class_id for t in trials]


def run_outputs(p, learner, n, trials, base_seed, jobs=1):
    """Class ids output on ``trials`` seeded samples of size ``n`` from ``p``."""
    idx = list(range(trials))
    if jobs <= 1:
        return _outputs_for((p, learner, n, idx, base_seed))
    chunks = [idx[i::jobs] for i in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        parts = list(ex.map(_outputs_for, [(p, learner, n, c, base_seed) for c in chunks]))
    out = [None] * trials
    for c, part in zip(chunks, parts):
        for i, cid in zip(c, part):
            out[i] = cid
    return out


def run_convergence(plan, jobs=1):
    if not is_markov(plan.state.g, plan.state.p):
        raise MarkovViolationError("convergence runs need a Markov state")
    target = plan.success_target()
    points = []
    for n in plan.n_grid:
        outs = run_outputs(plan.state.p, plan.learner, n, plan.trials_per_n, plan.base_seed, jobs)
        hits = sum(1 for c in outs if c == target.class_id)
        lo, hi = wilson(hits, plan.trials_per_n)
        points.append(
            CurvePoint(n, hits, plan.trials_per_n, hits / plan.trials_per_n, lo, hi, dict(Counter(outs)))
        )
    return ConvergenceCurve(target.class_id, tuple(points))


def decays(curve, factor=0.5):
    """Error rates shrink by ``factor`` per grid step once they are below 0.5.

    A zero error counts as decayed. Steps where the earlier error is still at or
    above 0.5 are not judged.
    """
    errs = [1.0 - r for r in curve.rates()]
    return all(b == 0.0 or b <= factor * a for a, b in zip(errs, errs[1:]) if a < 0.5)


def _class_by_id(k, class_id):
    for h in equivalence_classes(k):
        if h.class_id == class_id:
            return h
    raise KeyError(class_id)


def _default_factory(k):
    return Learner.default(k)


def regime(cls):
    if cls.u_minimal:
        return "u-minimal"
    if cls.minimal:
        return "minimal, not u-minimal"
    return "non-minimal"


def verify_classification_behavior(states, n_grid, trials_per_n, base_seed, learner_factory=None, jobs=1):
    """Check each state's terminal success rate against the regime its class predicts.

    * u-minimal: success must be high under the default order.
    * non-minimal: success must be low. The class actually converged to must
      contain the true graph's entailment set and be minimal to the table.
    * minimal, not u-minimal: preferring the true class must give high success
      and preferring any rival minimal class must give low success.
    """
    factory = learner_factory or _default_factory
    rows = []
    for st in states:
        cls = classify(st.g, st.p)
        truth = st.truth()
        entry = {"state": st.name, "class": cls.to_dict(), "regime": regime(cls), "truth": truth.class_id}
        if cls.minimal and not cls.u_minimal:
            runs = {}
            for h in minimal_classes(st.p):
                lrn = Learner.preferring(st.k, h, factory(st.k).threshold_constant)
                curve = run_convergence(TrialPlan(st, lrn, n_grid, trials_per_n, base_seed), jobs)
                runs[h.class_id] = curve
            own = runs[truth.class_id].terminal()
            others = [c.terminal() for cid, c in runs.items() if cid != truth.class_id]
            entry["curves"] = {cid: c.to_dict() for cid, c in sorted(runs.items())}
            entry["consistent"] = bool(own >= HIGH and others and all(r <= LOW for r in others))
        else:
            curve = run_convergence(TrialPlan(st, factory(st.k), n_grid, trials_per_n, base_seed), jobs)
            entry["curves"] = {"default": curve.to_dict()}
            if cls.u_minimal:
                entry["decays"] = decays(curve)
                entry["consistent"] = bool(curve.terminal() >= HIGH)
            else:
                won = _class_by_id(st.k, curve.modal_output())
                entry["converged_to"] = won.class_id
                entry["converged_contains_truth"] = bool(won.iset >= truth.iset)
                entry["converged_minimal"] = won in minimal_classes(st.p)
                entry["consistent"] = bool(
                    curve.terminal() <= LOW and entry["converged_contains_truth"] and entry["converged_minimal"]
                )
        rows.append(entry)
    return {"states": rows, "passed": all(r["consistent"] for r in rows)}


@dataclass(frozen=True)
class UniformityReport:
    center: str
    epsilon: float
    probes: tuple  # (probe id, tv distance, curve)
    inf_success_per_n: tuple  # (n, worst rate over probes)
    informational: bool
    success_floor: float

    @property
    def max_tv(self):
        return max((tv for _, tv, _ in self.probes), default=0.0)

    @property
    def verdict(self):
        # a finite probe set can refute local uniformity, never establish it
        ok = self.inf_success_per_n[-1][1] >= self.success_floor
        return "no violation found" if ok else "violation found"

    def to_dict(self):
        return {
            "center": self.center,
            "epsilon": self.epsilon,
            "informational": self.informational,
            "success_floor": self.success_floor,
            "max_tv": self.max_tv,
            "inf_success_per_n": [[n, r] for n, r in self.inf_success_per_n],
            "verdict": self.verdict,
            "probes": [{"id": pid, "tv": tv, "curve": c.to_dict()} for pid, tv, c in self.probes],
        }


def _probe_tables(center, epsilon, probes, base_seed, max_attempts):
    net = network_from_joint(center.g, center.p)
    target = independence_set(center.p)
    found = []
    attempt = 0
    eps = epsilon
    while len(found) < probes:
        if attempt >= max_attempts:
            eps /= 2.0
            attempt = 0
            warnings.warn(f"probe rejection sampling exhausted; shrinking epsilon to {eps}")
        seed = derive_seed(base_seed, 7, len(found), attempt)
        attempt += 1
        p = joint_of(perturb_network(net, eps, seed))
        tv = tv_distance(center.p, p)
        if tv < epsilon and is_markov(center.g, p) and independence_set(p) == target:
            found.append((f"probe-{len(found)}", tv, p))
    return found


def uniformity_probe(center, epsilon, probes, n_grid, trials_per_n, base_seed,
                     learner=None, success_floor=0.9, max_attempts=50, jobs=1):
    """Worst-case success of the learner over perturbed tables inside the center's hypothesis.

    Perturbations act on the CPTs of the center's graph, so every probe stays
    Markov to it; probes whose independence set differs from the center's are
    rejected. ``epsilon == 0`` runs ``probes`` copies of the center.
    """
    cls = classify(center.g, center.p)
    learner = learner or Learner.default(center.k)
    if epsilon == 0:
        tables = [(f"probe-{i}", 0.0, center.p) for i in range(probes)]
    else:
        tables = _probe_tables(center, epsilon, probes, base_seed, max_attempts)
    results = []
    for pid, tv, p in tables:
        st = CausalState(center.g, p, pid)
        plan = TrialPlan(st, learner, n_grid, trials_per_n, base_seed, target=center.truth())
        results.append((pid, tv, run_convergence(plan, jobs)))
    grid = tuple(int(n) for n in n_grid)
    inf = tuple((n, min(c.points[i].rate for _, _, c in results)) for i, n in enumerate(grid))
    return UniformityReport(center.name, float(epsilon), tuple(results), inf, not cls.u_minimal, success_floor)


def lemma5_replay(s0, n_grid, trials_per_n, base_seed, learner_factory=None,
                  epsilon=0.05, max_attempts=20):
    """Replay the four-state construction showing why a non-minimal state is sacrificed.

    s1 = (G', P) with G' minimal to P and I(G) a subset of I(G'); s2 = (G', P')
    nearby where the learner converges; s3 = (G, P'). Because s2 and s3 share
    P', shared seeds give identical samples and identical outputs, and in s3
    those outputs are the false hypothesis [G'].
    """
    factory = learner_factory or _default_factory
    if is_minimal(s0.g, s0.p):
        raise PreconditionError("precondition: state is minimal; the replay needs a non-minimal state")
    learner = factory(s0.k)
    witness = minimality_witness(s0.g, s0.p)
    g_prime = witness.members[0]
    s1 = CausalState(g_prime, s0.p, "s1")

    def converges(state):
        plan = TrialPlan(state, learner, n_grid, trials_per_n, base_seed)
        curve = run_convergence(plan)
        return curve, curve.terminal() >= HIGH

    curve1, ok = converges(s1)
    p_prime = s0.p
    perturbed = False
    if not ok:
        net = network_from_joint(g_prime, s0.p)
        for attempt in range(max_attempts):
            cand = joint_of(perturb_network(net, epsilon, derive_seed(base_seed, 5, attempt)))
            if not is_markov(s0.g, cand):
                continue
            curve1, ok = converges(CausalState(g_prime, cand, "s2"))
            if ok:
                p_prime, perturbed = cand, True
                break
        else:
            raise RuntimeError("no nearby state found where the learner converges")
    s2 = CausalState(g_prime, p_prime, "s2")
    s3 = CausalState(s0.g, p_prime, "s3")

    n_term = n_grid[-1]
    out2 = run_outputs(s2.p, learner, n_term, trials_per_n, base_seed)
    out3 = run_outputs(s3.p, learner, n_term, trials_per_n, base_seed)
    curve3 = run_convergence(TrialPlan(s3, learner, n_grid, trials_per_n, base_seed))
    truth3 = s3.truth().class_id
    modal3 = curve3.modal_output()
    return {
        "s0": {"graph": s0.g.to_dict(), "truth": s0.truth().class_id, "name": s0.name},
        "s1": {"graph": g_prime.to_dict(), "class": witness.class_id},
        "s2": {"perturbed": perturbed, "tv_from_s0": tv_distance(s0.p, p_prime), "curve": curve1.to_dict()},
        "s3": {"truth": truth3, "curve": curve3.to_dict(), "modal_output": modal3},
        "shared_seed_identical": out2 == out3,
        "s3_converges_to_falsehood": bool(modal3 != truth3 and curve3.terminal() <= LOW),
        "passed": bool(out2 == out3 and modal3 != truth3 and curve3.terminal() <= LOW),
    }


def quasi_faithful_suite(states, n_grid, trials_per_n, base_seed, learner_factory=None, k=None):
    """Among quasi-faithful states, high terminal success must coincide with faithfulness."""
    factory = learner_factory or _default_factory
    rows = []
    for st in states:
        if k is not None and st.k != k:
            continue
        cls = classify(st.g, st.p)
        if not cls.quasi_faithful:
            continue
        curve = run_convergence(TrialPlan(st, factory(st.k), n_grid, trials_per_n, base_seed))
        high = curve.terminal() >= HIGH
        low = curve.terminal() <= LOW
        rows.append({
            "state": st.name,
            "faithful": cls.faithful,
            "terminal_rate": curve.terminal(),
            "curve": curve.to_dict(),
            "consistent": bool(high if cls.faithful else low),
        })
    return {"states": rows, "passed": all(r["consistent"] for r in rows)}


def _subset_maximal(h, accepted, k):
    return not any(h.iset < other.iset <= accepted for other in equivalence_classes(k))


def acceptance_trace(learner, state, n, trials, base_seed):
    """Per-trial (accepted set, output) pairs at sample size ``n``.

    Checks that the output's entailment set fits the accepted set and is
    subset-maximal among classes that fit it.
    """
    ip = independence_set(state.p)
    records = []
    for t in range(trials):
        sample = draw(state.p, n, derive_seed(base_seed, n, t))
        accepted, out = learner.learn_with_trace(sample)
        records.append({
            "trial": t,
            "output": out.class_id,
            "fits": out.iset <= accepted,
            "maximal": _subset_maximal(out, accepted, state.k),
            "accepted_is_truth": accepted == ip,
        })
    holds = [r["fits"] and r["maximal"] for r in records]
    exact = [r["fits"] and r["maximal"] and r["accepted_is_truth"] for r in records]
    return {
        "state": state.name,
        "n": n,
        "trials": trials,
        "relation_rate": sum(holds) / trials,
        "relation_with_true_accepted_rate": sum(exact) / trials,
        "outputs": dict(sorted(Counter(r["output"] for r in records).items())),
        "records": records,
    }


def dumps(report):
    """Canonical JSON text for a report."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
