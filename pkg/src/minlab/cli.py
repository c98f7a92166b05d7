"""
Command line entry point.

Exit codes: 0 success, 1 a verdict failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments as ex
from .citest import parse_statement, super_test, ci_test
from .distributions import CptNetwork, JointTable, is_markov, joint_of
from .fixtures import fixture_names, get_fixture, get_state
from .graphs import (
    CapExceededError,
    Dag,
    check_cap,
    enumerate_dags,
    equivalence_classes,
    statement_universe,
)
from .learner import learner_from_config
from .sampling import Sample, draw
from .states import CausalState, classify, minimality_witness

SCHEMA_VERSION = 1
EXPERIMENTS = ("theorem1", "convergence", "lemma5", "uniformity", "quasi_faithful", "acceptance_trace")


class UsageError(Exception):
    pass


def _load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _emit(obj, out=None):
    text = ex.dumps(obj)
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _plural(n, word):
    return f"{n} {word}" if n == 1 else f"{n} {word}{'es' if word.endswith('s') else 's'}"


def cmd_enumerate(args):
    dags = enumerate_dags(args.k)
    classes = equivalence_classes(args.k)
    if args.out:
        _emit({
            "k": args.k,
            "dags": [g.to_dict() for g in dags],
            "classes": [h.to_dict() for h in classes],
        }, args.out)
    print(f"{_plural(len(dags), 'DAG')}, {_plural(len(classes), 'class')}")
    return 0


def _state_from_args(args):
    if args.fixture:
        try:
            return get_state(args.fixture)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    if args.network:
        try:
            net = CptNetwork.from_dict(_load_json(args.network))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{args.network}: not a CPT network ({exc})") from None
        g = net.dag
        if args.graph:
            g = Dag.from_dict(_load_json(args.graph))
        p = joint_of(net)
    elif args.table:
        if not args.graph:
            raise UsageError("--table needs --graph")
        try:
            p = JointTable.from_dict(_load_json(args.table))
            g = Dag.from_dict(_load_json(args.graph))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed table or graph: {exc}") from None
    else:
        raise UsageError("give --fixture, --network or --table/--graph")
    check_cap(g.k)
    if not is_markov(g, p):
        raise UsageError("not a causal state: the graph is not Markov to the table")
    return CausalState(g, p)


def cmd_classify(args):
    st = _state_from_args(args)
    cls = classify(st.g, st.p)
    out = cls.to_dict()
    if not cls.minimal:
        w = minimality_witness(st.g, st.p)
        out["witness"] = {"class_id": w.class_id, "graph": w.members[0].to_dict()}
    _emit(out, args.out)
    return 0


def _read_sample(args):
    cards = tuple(int(c) for c in args.cards.split(",")) if args.cards else None
    try:
        return Sample.from_csv(args.data, cards)
    except OSError as exc:
        raise UsageError(f"cannot read {args.data}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_ci_test(args):
    sample = _read_sample(args)
    if sample.n == 0:
        raise UsageError("empty sample")
    try:
        statements = [parse_statement(s) for s in args.statement] if args.statement else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if statements is None:
        out = super_test(sample, statement_universe(sample.vars.k), args.threshold_constant)
        verdicts = out.verdicts
    else:
        for s in statements:
            if max(s.variables()) >= sample.vars.k:
                raise UsageError(f"statement {s} mentions a variable not in the data")
        verdicts = [ci_test(sample, s, args.threshold_constant) for s in statements]
    _emit([v.to_dict() for v in verdicts], args.out)
    return 0


def cmd_learn(args):
    sample = _read_sample(args)
    if sample.n == 0:
        raise UsageError("empty sample")
    cfg = _load_json(args.config) if args.config else {}
    cfg.setdefault("k", sample.vars.k)
    if args.order:
        cfg["order"] = args.order
    if args.threshold_constant is not None:
        cfg["threshold_constant"] = args.threshold_constant
    if int(cfg["k"]) != sample.vars.k:
        raise UsageError(f"learner k={cfg['k']} but the data has {sample.vars.k} columns")
    check_cap(int(cfg["k"]))
    try:
        learner = learner_from_config(cfg)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    _emit(learner.learn(sample).to_dict(), args.out)
    return 0


def cmd_sample(args):
    st = get_state(args.fixture)
    draw(st.p, args.n, args.seed).to_csv(args.out)
    return 0


def cmd_fixtures(args):
    if args.show:
        f = get_fixture(args.show)
        out = {
            "name": f.name,
            "description": f.description,
            "graph": f.state.g.to_dict(),
            "table": f.state.p.to_dict(),
            "network": f.network.to_dict() if f.network else None,
        }
        _emit(out, args.out)
        return 0
    for name in fixture_names():
        print(f"{name}\t{get_fixture(name).description}")
    return 0


def _require(cfg, key, kind):
    if key not in cfg:
        raise UsageError(f"config is missing required field {key!r}")
    try:
        return kind(cfg[key])
    except (TypeError, ValueError):
        raise UsageError(f"config field {key!r} has the wrong type") from None


def _validate_config(cfg):
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    if cfg.get("schema") != SCHEMA_VERSION:
        raise UsageError(f"config schema must be {SCHEMA_VERSION}")
    kind = _require(cfg, "experiment", str)
    if kind not in EXPERIMENTS:
        raise UsageError(f"unknown experiment {kind!r}; choose from {', '.join(EXPERIMENTS)}")
    seed = _require(cfg, "seed", int)
    grid = tuple(int(n) for n in cfg.get("n_grid", (100, 1000, 10000)))
    trials = int(cfg.get("trials", 200))
    return kind, seed, grid, trials


def _fixture_states(cfg):
    names = cfg.get("fixtures") or ([cfg["fixture"]] if "fixture" in cfg else fixture_names())
    try:
        return [get_state(n) for n in names]
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _factory(cfg):
    constant = float(cfg.get("threshold_constant", 1.0))
    order = cfg.get("order", "default")
    return lambda k: learner_from_config({"k": k, "order": order, "threshold_constant": constant})


def run_experiment(cfg, jobs=1):
    """Run a validated experiment config; returns the report dict (with a ``passed`` flag)."""
    kind, seed, grid, trials = _validate_config(cfg)
    states = _fixture_states(cfg)
    factory = _factory(cfg)
    if kind == "theorem1":
        report = ex.verify_classification_behavior(states, grid, trials, seed, factory, jobs)
    elif kind == "convergence":
        st = states[0]
        plan = ex.TrialPlan(st, factory(st.k), grid, trials, seed)
        curve = ex.run_convergence(plan, jobs)
        report = {"state": st.name, "curve": curve.to_dict(), "passed": True}
    elif kind == "lemma5":
        report = ex.lemma5_replay(states[0], grid, trials, seed, factory)
    elif kind == "uniformity":
        st = states[0]
        rep = ex.uniformity_probe(
            st, float(cfg.get("epsilon", 0.01)), int(cfg.get("probes", 20)), grid, trials, seed,
            learner=factory(st.k), success_floor=float(cfg.get("success_floor", 0.9)), jobs=jobs,
        )
        report = rep.to_dict()
        report["passed"] = rep.verdict == "no violation found"
    elif kind == "quasi_faithful":
        report = ex.quasi_faithful_suite(states, grid, trials, seed, factory)
    else:
        st = states[0]
        report = ex.acceptance_trace(factory(st.k), st, grid[-1], trials, seed)
        report["passed"] = report["relation_rate"] == 1.0
    return {"schema": SCHEMA_VERSION, "experiment": kind, "seed": seed, "report": report}


def _curves(obj, path=()):
    if isinstance(obj, dict):
        if "points" in obj and "target" in obj:
            yield path, obj
            return
        for key in sorted(obj):
            yield from _curves(obj[key], path + (str(key),))
    elif isinstance(obj, list):
        for i, item in enumerate(obj):
            label = item.get("state") or item.get("id") if isinstance(item, dict) else None
            yield from _curves(item, path + (str(label or i),))


def curve_csv(curve):
    lines = ["n,trials,successes,rate,lo,hi"]
    for p in curve["points"]:
        lines.append(f"{p['n']},{p['trials']},{p['successes']},{p['rate']!r},{p['lo']!r},{p['hi']!r}")
    return "\n".join(lines) + "\n"


def write_report(result, out_dir):
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(ex.dumps(result))
        for path, curve in _curves(result["report"]):
            name = "__".join(p.replace(">", "").replace(",", "_").replace("-", "") for p in path)
            (out / f"curve__{name or 'main'}.csv").write_text(curve_csv(curve))
    except OSError as exc:
        raise UsageError(f"cannot write reports to {out}: {exc.strerror}") from None


def cmd_run(args):
    cfg = _load_json(args.config)
    try:
        result = run_experiment(cfg, args.jobs)
    except ex.PreconditionError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    out_dir = args.out or cfg.get("output") or "."
    write_report(result, out_dir)
    passed = bool(result["report"].get("passed"))
    print(f"{result['experiment']}: {'all verdicts consistent' if passed else 'verdict failure'} -> {out_dir}")
    return 0 if passed else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="minlab", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list DAGs and Markov-equivalence classes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", help="classify a causal state")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--fixture")
    src.add_argument("--network", help="CPT network JSON")
    src.add_argument("--table", help="joint table JSON (needs --graph)")
    p.add_argument("--graph", help="DAG JSON; overrides the network's own graph")
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    for name, func, helptext in (
        ("ci-test", cmd_ci_test, "L1 conditional-independence test on CSV data"),
        ("learn", cmd_learn, "run the learner on CSV data"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--data", required=True)
        p.add_argument("--cards", help="comma-separated cardinalities (default: inferred)")
        p.add_argument("--out")
        p.set_defaults(func=func)
        if name == "ci-test":
            p.add_argument("--statement", action="append",
                           help='u|v||w with comma-separated indices, e.g. "0|1||2"; repeatable; '
                                "omit to test every statement")
            p.add_argument("--threshold-constant", type=float, default=1.0)
        else:
            p.add_argument("--config", help="learner config JSON")
            p.add_argument("--order", help="'default' or 'prefer:<class-id>'")
            p.add_argument("--threshold-constant", type=float)

    p = sub.add_parser("sample", help="draw a CSV sample from a fixture")
    p.add_argument("--fixture", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("run", help="run an experiment config")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (default: config 'output' or .)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("fixtures", help="list named fixtures")
    p.add_argument("--show", help="dump one fixture as JSON")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "k", None) is not None and args.command == "enumerate":
            check_cap(args.k)
        return args.func(args)
    except (UsageError, CapExceededError, KeyError, ValueError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"minlab {args.command}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
