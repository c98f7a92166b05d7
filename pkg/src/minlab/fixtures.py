"""
Named causal states used by tests, demos and the CLI.

Unfaithful and non-minimal states are built by exact parameter cancellation
(identical CPT rows, or conditionals tuned so a dependence averages out).
Random parameterizations essentially never land on them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import CptNetwork, JointTable, joint_of
from .graphs import Dag, chain, empty_dag
from .states import CausalState


@dataclass(frozen=True, eq=False)
class Fixture:
    name: str
    state: CausalState
    network: CptNetwork | None
    description: str


def _generic_chain():
    net = CptNetwork.build(
        chain(3),
        (2, 2, 2),
        [
            [0.3, 0.7],
            [[0.95, 0.05], [0.2, 0.8]],
            [[0.8, 0.2], [0.2, 0.8]],
        ],
    )
    return net, "chain 0->1->2 with strong, unremarkable CPTs (faithful)"


def _generic_collider():
    g = Dag(3, {(0, 2), (1, 2)})
    net = CptNetwork.build(
        g,
        (2, 2, 2),
        [
            [0.6, 0.4],
            [0.4, 0.6],
            [[[0.95, 0.05], [0.05, 0.95]], [[0.5, 0.5], [0.95, 0.05]]],
        ],
    )
    return net, "collider 0->2<-1 with unremarkable CPTs (faithful)"


def _degenerate_edge():
    net = CptNetwork.build(
        Dag(2, {(0, 1)}),
        (2, 2),
        [[0.7, 0.3], [[0.4, 0.6], [0.4, 0.6]]],
    )
    return net, "edge 0->1 whose CPT rows are identical (Markov, not minimal)"


def _degenerate_chain():
    net = CptNetwork.build(
        chain(3),
        (2, 2, 2),
        [
            [0.7, 0.3],
            [[0.95, 0.05], [0.2, 0.8]],
            [[0.35, 0.65], [0.35, 0.65]],
        ],
    )
    return net, "chain 0->1->2 with identical rows on 1->2 (not minimal)"


def cancellation_table():
    """Joint of X1->X2, (X1,X2)->X0 where X0 is marginally independent of X1 and of X2.

    With P(x1, x2) = p12 and P(X0=1 | x1, x2) = 1/2 + sign * c / p12, where sign
    is +1 on the diagonal and -1 off it, both marginal dependences of X0 cancel
    exactly.
    """
    p12 = np.array([[0.35, 0.15], [0.15, 0.35]])
    c = 0.0675
    sign = np.array([[1.0, -1.0], [-1.0, 1.0]])
    px0 = 0.5 + sign * c / p12
    probs = np.stack([p12 * (1.0 - px0), p12 * px0])
    return JointTable.from_probs((2, 2, 2), probs)


def _ternary_cancellation():
    # X0 -> X2 -> X1 with ternary X2; E[X1 | X0] does not depend on X0
    g = Dag(3, {(0, 2), (2, 1)})
    net = CptNetwork.build(
        g,
        (2, 2, 3),
        [
            [0.5, 0.5],
            [[0.15, 0.85], [0.5, 0.5], [0.85, 0.15]],
            [[0.4, 0.2, 0.4], [0.15, 0.7, 0.15]],
        ],
    )
    return net, "chain 0->2->1, ternary 2, with 0 and 1 marginally independent"


_NETWORKS = {
    "generic_chain": _generic_chain,
    "generic_collider": _generic_collider,
    "degenerate_edge": _degenerate_edge,
    "degenerate_chain": _degenerate_chain,
    "ternary_cancellation": _ternary_cancellation,
}

# the two graphs minimal to cancellation_table(); neither contains the other
CANCELLATION_GRAPHS = {
    "cancellation_collider": Dag(3, {(0, 2), (1, 2)}),
    "cancellation_collider_twin": Dag(3, {(0, 1), (2, 1)}),
}


def _build(name):
    if name in _NETWORKS:
        net, desc = _NETWORKS[name]()
        return Fixture(name, CausalState(net.dag, joint_of(net), name), net, desc)
    if name in CANCELLATION_GRAPHS:
        g = CANCELLATION_GRAPHS[name]
        desc = (
            f"collider {g.label()} on a table where 0 is independent of 1 and of 2 "
            "but not of (1, 2); minimal, not u-minimal"
        )
        return Fixture(name, CausalState(g, cancellation_table(), name), None, desc)
    if name == "point_mass":
        p = JointTable.point_mass((2, 2), (0, 0))
        return Fixture(name, CausalState(empty_dag(2), p, name), None, "all mass on cell 00")
    if name == "uniform_pair":
        p = JointTable.uniform((2, 2))
        return Fixture(name, CausalState(empty_dag(2), p, name), None, "two fair coins")
    raise KeyError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")


def fixture_names():
    return sorted([*_NETWORKS, *CANCELLATION_GRAPHS, "point_mass", "uniform_pair"])


def get_fixture(name):
    return _build(name)


def get_state(name):
    return _build(name).state


def all_fixtures():
    return [_build(n) for n in fixture_names()]
