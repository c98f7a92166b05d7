"""
Exact categorical joint distributions.

A :class:`JointTable` stores the full joint as a dense numpy array whose axes
are the variables (C order, so the last variable varies fastest when
flattened). :class:`CptNetwork` is a DAG plus one conditional table per
variable; :func:`joint_of` multiplies them out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import (
    Dag,
    VariableSet,
    check_cap,
    default_names,
    entailment_set,
    parents,
    statement_universe,
)

CI_TOLERANCE = 1e-9
SUM_TOLERANCE = 1e-12


class MarkovViolationError(ValueError):
    """A graph/distribution pair was required to satisfy the Markov condition."""


@dataclass(frozen=True, eq=False)
class JointTable:
    vars: VariableSet
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float).reshape(self.vars.cards)
        if np.any(probs < 0):
            raise ValueError("negative probability in joint table")
        total = probs.sum()
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"joint table sums to {total!r}, not 1")
        probs = probs.copy()
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_probs(cls, cards, probs, names=None):
        cards = tuple(cards)
        return cls(VariableSet(names or default_names(len(cards)), cards), probs)

    @classmethod
    def uniform(cls, cards, names=None):
        n = int(np.prod(cards))
        return cls.from_probs(cards, np.full(n, 1.0 / n), names)

    @classmethod
    def point_mass(cls, cards, cell, names=None):
        probs = np.zeros(tuple(cards))
        probs[tuple(cell)] = 1.0
        return cls.from_probs(cards, probs, names)

    @property
    def cards(self):
        return self.vars.cards

    @property
    def k(self):
        return self.vars.k

    def flat(self):
        return self.probs.ravel()

    def marginal(self, idx):
        """Marginal over ``idx`` with axes in the given order."""
        idx = list(idx)
        drop = tuple(i for i in range(self.k) if i not in idx)
        m = self.probs.sum(axis=drop)
        kept = sorted(idx)
        return np.transpose(m, [kept.index(i) for i in idx])

    def to_dict(self):
        return {"cards": list(self.cards), "probs": self.flat().tolist()}

    @classmethod
    def from_dict(cls, d, names=None):
        return cls.from_probs(d["cards"], d["probs"], names)

    def __eq__(self, other):
        if not isinstance(other, JointTable):
            return NotImplemented
        return self.vars == other.vars and np.array_equal(self.probs, other.probs)

    __hash__ = None


def _grouped(table, s):
    """The (U,V,W) marginal as a 3-D array indexed by joint values of U, V, W."""
    u, v, w = s.u, s.v, s.w
    m = table.marginal(u + v + w)
    cards = table.cards
    shape = (
        int(np.prod([cards[i] for i in u])),
        int(np.prod([cards[i] for i in v])),
        int(np.prod([cards[i] for i in w])) if w else 1,
    )
    return m.reshape(shape)


def factorization_residual(table, s):
    """Array of ``P(u,v,w)P(w) - P(u,w)P(v,w)`` over all value combinations."""
    m = _grouped(table, s)
    pw = m.sum(axis=(0, 1))
    puw = m.sum(axis=1)
    pvw = m.sum(axis=0)
    return m * pw[None, None, :] - puw[:, None, :] * pvw[None, :, :]


def ci_holds(p, s, tol=CI_TOLERANCE):
    # cells with P(w) = 0 have zero residual automatically, so they never count
    return bool(np.max(np.abs(factorization_residual(p, s))) <= tol)


def independence_set(p, tol=CI_TOLERANCE):
    check_cap(p.k)
    return frozenset(s for s in statement_universe(p.k) if ci_holds(p, s, tol))


def tv_distance(p, q):
    if p.cards != q.cards:
        raise ValueError(f"tables over different spaces: {p.cards} vs {q.cards}")
    return 0.5 * float(np.abs(p.flat() - q.flat()).sum())


def mix(p, q, lam):
    """``(1 - lam) * p + lam * q``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"mixing weight must be in [0, 1], got {lam}")
    probs = (1.0 - lam) * p.probs + lam * q.probs
    return JointTable(p.vars, probs / probs.sum())


def random_table(cards, rng, names=None):
    n = int(np.prod(cards))
    return JointTable.from_probs(cards, rng.dirichlet(np.ones(n)), names)


def perturb(p, epsilon, rng_seed, lam=None):
    """A table strictly inside the open TV ball of radius ``epsilon`` around ``p``.

    Mixes ``p`` with a seeded Dirichlet(1) table ``q``. The weight is chosen so
    the realized distance is ``0.9 * epsilon`` (or less when ``q`` is close to
    ``p``). Pass ``lam`` to force the weight, e.g. ``lam=0`` returns ``p``.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    rng = np.random.default_rng(rng_seed)
    q = random_table(p.cards, rng, p.vars.names)
    if lam is None:
        gap = tv_distance(p, q)
        lam = 0.0 if gap == 0.0 else min(1.0, 0.9 * epsilon / gap)
    out = mix(p, q, lam)
    if tv_distance(p, out) >= epsilon:
        raise ValueError(f"forced weight lam={lam} leaves the epsilon={epsilon} ball")
    return out


def is_markov(g, p, tol=CI_TOLERANCE):
    if g.k != p.k:
        raise ValueError(f"graph has {g.k} variables, table has {p.k}")
    return all(ci_holds(p, s, tol) for s in entailment_set(g))


@dataclass(frozen=True, eq=False)
class CptNetwork:
    """A DAG with one conditional table per variable.

    ``cpts[i]`` has shape ``(*cards of sorted parents, cards[i])``; the last axis
    is the child's value and every row sums to one.
    """

    dag: Dag
    vars: VariableSet
    cpts: tuple

    def __post_init__(self):
        if self.dag.k != self.vars.k:
            raise ValueError("dag and variable set differ in size")
        cpts = []
        for i, cpt in enumerate(self.cpts):
            cpt = np.array(cpt, dtype=float)
            ps = sorted(parents(self.dag, i))
            want = tuple(self.vars.cards[j] for j in ps) + (self.vars.cards[i],)
            cpt = cpt.reshape(want)
            if np.any(cpt < 0):
                raise ValueError(f"negative entry in CPT of variable {i}")
            rows = cpt.sum(axis=-1)
            if np.any(np.abs(rows - 1.0) > SUM_TOLERANCE):
                raise ValueError(f"CPT rows of variable {i} do not sum to 1")
            cpt.setflags(write=False)
            cpts.append(cpt)
        if len(cpts) != self.vars.k:
            raise ValueError("need exactly one CPT per variable")
        object.__setattr__(self, "cpts", tuple(cpts))

    @classmethod
    def build(cls, dag, cards, cpts, names=None):
        return cls(dag, VariableSet(names or default_names(dag.k), cards), cpts)

    def to_dict(self):
        return {
            "dag": self.dag.to_dict(),
            "cards": list(self.vars.cards),
            "cpts": [c.reshape(-1, c.shape[-1]).tolist() for c in self.cpts],
        }

    @classmethod
    def from_dict(cls, d, names=None):
        return cls.build(Dag.from_dict(d["dag"]), tuple(d["cards"]), d["cpts"], names)


def joint_of(net):
    cards = net.vars.cards
    k = len(cards)
    probs = np.ones(cards)
    for i, cpt in enumerate(net.cpts):
        axes = sorted(parents(net.dag, i)) + [i]
        order = np.argsort(axes)
        arr = np.transpose(cpt, order)
        shape = [cards[j] if j in axes else 1 for j in range(k)]
        probs = probs * arr.reshape(shape)
    return JointTable(net.vars, probs / probs.sum())


def random_network(dag, cards, rng, concentration=1.0, names=None):
    """CPT rows drawn iid from a symmetric Dirichlet."""
    cpts = []
    for i in range(dag.k):
        ps = sorted(parents(dag, i))
        shape = tuple(cards[j] for j in ps)
        rows = rng.dirichlet(np.full(cards[i], concentration), size=int(np.prod(shape)))
        cpts.append(rows.reshape(shape + (cards[i],)))
    return CptNetwork.build(dag, tuple(cards), cpts, names)


def network_from_joint(dag, p):
    """Read the conditionals ``P(x_i | parents)`` off ``p``.

    Rows for parent configurations of probability zero are set uniform. When
    ``dag`` is Markov to ``p``, ``joint_of`` of the result reproduces ``p``.
    """
    cpts = []
    for i in range(p.k):
        ps = sorted(parents(dag, i))
        m = p.marginal(ps + [i])
        denom = m.sum(axis=-1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            cond = np.where(denom > 0, m / np.where(denom > 0, denom, 1.0), 1.0 / p.cards[i])
        cpts.append(cond / cond.sum(axis=-1, keepdims=True))
    return CptNetwork(dag, p.vars, tuple(cpts))


def mix_networks(net, other, lam):
    """Row-wise mixture of the CPTs of two networks on the same DAG."""
    if net.dag != other.dag or net.vars != other.vars:
        raise ValueError("networks must share DAG and variables")
    cpts = tuple((1.0 - lam) * a + lam * b for a, b in zip(net.cpts, other.cpts))
    cpts = tuple(c / c.sum(axis=-1, keepdims=True) for c in cpts)
    return CptNetwork(net.dag, net.vars, cpts)


def perturb_network(net, epsilon, rng_seed, max_halvings=60):
    """Perturb CPT rows so the joint stays Markov to ``net.dag``.

    The joint of the result lies strictly within TV distance ``epsilon`` of the
    joint of ``net``. The mixing weight starts at the value a linear TV response
    would need for ``0.9 * epsilon`` and is shrunk until the realized distance is
    below ``epsilon``.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    rng = np.random.default_rng(rng_seed)
    other = random_network(net.dag, net.vars.cards, rng, names=net.vars.names)
    base = joint_of(net)
    full = tv_distance(base, joint_of(other))
    lam = 1.0 if full == 0.0 else min(1.0, 0.9 * epsilon / full)
    for _ in range(max_halvings):
        out = mix_networks(net, other, lam)
        d = tv_distance(base, joint_of(out))
        if d < epsilon:
            return out
        lam *= min(0.5, 0.9 * epsilon / d)
    return net
