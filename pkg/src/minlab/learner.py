"""
Learning methods of the form F o T.

T is the L1 super-test over every statement on the variables. F walks a fixed
order of Markov-equivalence classes and returns the first class whose
entailment set fits inside the accepted set. The order must never place a class
after one whose entailment set it strictly contains.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .citest import super_test
from .graphs import canonical_key, class_by_id, equivalence_classes, statement_universe


class OrderError(ValueError):
    """A hypothesis sequence violates the ordering constraint or misses classes."""


def order_violations(sequence):
    """Index pairs ``(i, j)`` with ``i < j`` and I(G_j) a strict superset of I(G_i)."""
    bad = []
    for i, hi in enumerate(sequence):
        for j in range(i + 1, len(sequence)):
            if sequence[j].iset > hi.iset:
                bad.append((i, j))
    return bad


@dataclass(frozen=True)
class HypothesisOrder:
    k: int
    sequence: tuple

    def __post_init__(self):
        seq = tuple(self.sequence)
        object.__setattr__(self, "sequence", seq)
        if set(seq) != set(equivalence_classes(self.k)) or len(seq) != len(set(seq)):
            raise OrderError("an order must list every equivalence class exactly once")
        if not any(not h.iset for h in seq):
            raise OrderError("the class with an empty entailment set is missing")
        bad = order_violations(seq)
        if bad:
            i, j = bad[0]
            raise OrderError(f"{seq[j].class_id} strictly contains {seq[i].class_id} but follows it")

    def index(self, h):
        return self.sequence.index(h)

    def ids(self):
        return [h.class_id for h in self.sequence]


@lru_cache(maxsize=None)
def default_order(k):
    """Classes by entailment-set size, largest first; ties by canonical serialization."""
    classes = equivalence_classes(k)
    seq = sorted(classes, key=lambda h: (-len(h.iset), canonical_key(h.iset)))
    return HypothesisOrder(k, tuple(seq))


def order_preferring(k, preferred):
    """A valid order where ``preferred`` comes before every class incomparable to it.

    Strict supersets of ``preferred`` must still precede it, so they are kept in
    front (in default order), then ``preferred``, then everything else.
    """
    base = default_order(k).sequence
    if isinstance(preferred, str):
        preferred = class_by_id(k, preferred)
    if preferred not in base:
        raise OrderError(f"{preferred!r} is not an equivalence class at k={k}")
    head = [h for h in base if h.iset > preferred.iset]
    tail = [h for h in base if h != preferred and not h.iset > preferred.iset]
    return HypothesisOrder(k, tuple(head + [preferred] + tail))


def select_f(order, s):
    """First class in ``order`` whose entailment set is a subset of ``s``."""
    s = frozenset(s)
    for h in order.sequence:
        if h.iset <= s:
            return h
    raise AssertionError("unreachable: the empty-entailment class always fits")


@dataclass(frozen=True)
class Learner:
    order: HypothesisOrder
    threshold_constant: float = 1.0

    @property
    def k(self):
        return self.order.k

    @property
    def universe(self):
        return statement_universe(self.k)

    @classmethod
    def default(cls, k, threshold_constant=1.0):
        return cls(default_order(k), threshold_constant)

    @classmethod
    def preferring(cls, k, preferred, threshold_constant=1.0):
        return cls(order_preferring(k, preferred), threshold_constant)

    def accepted(self, sample):
        return super_test(sample, self.universe, self.threshold_constant).s

    def learn_with_trace(self, sample):
        """``(accepted set, selected class)`` for one sample."""
        accepted = self.accepted(sample)
        return accepted, select_f(self.order, accepted)

    def learn(self, sample):
        return self.learn_with_trace(sample)[1]

    def describe(self):
        return {"k": self.k, "order": self.order.ids(), "threshold_constant": self.threshold_constant}


def learn(learner, sample):
    return learner.learn(sample)


@dataclass(frozen=True)
class PatchedLearner:
    """Outputs ``target_class`` when the accepted set equals ``target_iset``, else defers."""

    base: Learner
    target_class: object
    target_iset: frozenset

    @property
    def k(self):
        return self.base.k

    def learn_with_trace(self, sample):
        accepted = self.base.accepted(sample)
        if accepted == self.target_iset:
            return accepted, self.target_class
        return accepted, select_f(self.base.order, accepted)

    def learn(self, sample):
        return self.learn_with_trace(sample)[1]

    def describe(self):
        d = self.base.describe()
        d["patched_target"] = self.target_class.class_id
        return d


def patched_learner(base, target_class, target_iset):
    return PatchedLearner(base, target_class, frozenset(target_iset))


def learner_from_config(cfg):
    """Build a learner from ``{"k": .., "order": "default" | "prefer:<class-id>", ...}``."""
    k = int(cfg["k"])
    constant = float(cfg.get("threshold_constant", 1.0))
    kind = cfg.get("order", "default")
    if kind == "default":
        return Learner.default(k, constant)
    if kind.startswith("prefer:"):
        return Learner.preferring(k, kind[len("prefer:"):], constant)
    raise ValueError(f"unknown order {kind!r}; use 'default' or 'prefer:<class-id>'")
