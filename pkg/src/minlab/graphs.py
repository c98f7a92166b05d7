"""
DAGs over small indexed variable sets.

Covers exhaustive enumeration, parent/descendant queries, d-separation,
entailment sets and partitioning into Markov-equivalence classes. Everything
here is exhaustive, so the number of variables is capped (default 4, where
there are 543 labeled DAGs). The cap can be raised through the ``MINLAB_CAP``
environment variable at your own risk.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from graphlib import CycleError, TopologicalSorter
from itertools import combinations, product

DEFAULT_CAP = 4


class CapExceededError(ValueError):
    """Raised when an exhaustive operation is asked for too many variables."""


def variable_cap():
    raw = os.environ.get("MINLAB_CAP")
    if raw is None:
        return DEFAULT_CAP
    return max(DEFAULT_CAP, int(raw))


def check_cap(k):
    cap = variable_cap()
    if k < 1:
        raise ValueError(f"need at least one variable, got k={k}")
    if k > cap:
        raise CapExceededError(
            f"k={k} exceeds the variable cap of {cap}; exhaustive operations are "
            f"intended for k <= 4 (543 labeled DAGs at k=4). Set MINLAB_CAP to override."
        )


@dataclass(frozen=True)
class VariableSet:
    names: tuple
    cards: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "cards", tuple(int(c) for c in self.cards))
        if len(self.names) < 1:
            raise ValueError("a variable set needs at least one variable")
        if len(self.names) != len(self.cards):
            raise ValueError("names and cardinalities differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names: {self.names}")
        if any(c < 2 for c in self.cards):
            raise ValueError(f"every cardinality must be >= 2, got {self.cards}")

    @classmethod
    def binary(cls, k):
        return cls(default_names(k), (2,) * k)

    @property
    def k(self):
        return len(self.names)


def default_names(k):
    return tuple(f"X{i}" for i in range(k))


@dataclass(frozen=True)
class Dag:
    """A DAG on variables ``0..k-1``; ``edges`` holds (parent, child) pairs."""

    k: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        edges = frozenset((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        for a, b in edges:
            if not (0 <= a < self.k and 0 <= b < self.k):
                raise ValueError(f"edge {(a, b)} out of range for k={self.k}")
            if a == b:
                raise ValueError(f"self-loop on {a}")
        self.topological_order()

    def topological_order(self):
        ts = TopologicalSorter({i: [] for i in range(self.k)})
        for a, b in self.edges:
            ts.add(b, a)
        try:
            return tuple(ts.static_order())
        except CycleError as exc:
            raise ValueError(f"edges {sorted(self.edges)} contain a cycle") from exc

    def sorted_edges(self):
        return sorted(self.edges)

    def reversed(self):
        return Dag(self.k, frozenset((b, a) for a, b in self.edges))

    def label(self):
        if not self.edges:
            return "empty"
        return ",".join(f"{a}->{b}" for a, b in self.sorted_edges())

    def to_dict(self):
        return {"k": self.k, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["k"]), frozenset(tuple(e) for e in d["edges"]))

    def __repr__(self):
        return f"Dag(k={self.k}, {self.label()})"


def chain(k):
    return Dag(k, frozenset((i, i + 1) for i in range(k - 1)))


def complete_dag(k):
    return Dag(k, frozenset(combinations(range(k), 2)))


def empty_dag(k):
    return Dag(k)


def parents(g, i):
    if not 0 <= i < g.k:
        raise IndexError(f"variable {i} out of range for k={g.k}")
    return frozenset(a for a, b in g.edges if b == i)


def children(g, i):
    return frozenset(b for a, b in g.edges if a == i)


def descendants(g, i):
    """Reflexive-transitive closure of the child relation (i is its own descendant)."""
    if not 0 <= i < g.k:
        raise IndexError(f"variable {i} out of range for k={g.k}")
    seen = {i}
    stack = [i]
    while stack:
        node = stack.pop()
        for c in children(g, node):
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return frozenset(seen)


def ancestors(g, nodes):
    seen = set(nodes)
    stack = list(nodes)
    while stack:
        node = stack.pop()
        for p in parents(g, node):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def _edge_key(g):
    # adjacency matrix flattened row-major, as a bit string
    bits = ["0"] * (g.k * g.k)
    for a, b in g.edges:
        bits[a * g.k + b] = "1"
    return "".join(bits)


@lru_cache(maxsize=None)
def enumerate_dags(k):
    """Every labeled DAG on ``k`` nodes, by edge count then adjacency encoding."""
    check_cap(k)
    slots = [(a, b) for a in range(k) for b in range(k) if a != b]
    out = []
    for mask in product((0, 1), repeat=len(slots)):
        edges = frozenset(s for s, on in zip(slots, mask) if on)
        # skip 2-cycles early; Dag() rejects the longer ones
        if any((b, a) in edges for a, b in edges):
            continue
        try:
            out.append(Dag(k, edges))
        except ValueError:
            continue
    out.sort(key=lambda g: (len(g.edges), _edge_key(g)))
    return tuple(out)


@dataclass(frozen=True, order=True)
class CiStatement:
    """``u`` independent of ``v`` given ``w``; index tuples, sorted and disjoint.

    Use :meth:`make` to get the canonical form (smaller of u, v first).
    """

    u: tuple
    v: tuple
    w: tuple = ()

    def __post_init__(self):
        u, v, w = (tuple(sorted(int(x) for x in s)) for s in (self.u, self.v, self.w))
        if not u or not v:
            raise ValueError("both sides of a CI statement must be nonempty")
        for s in (u, v, w):
            if len(set(s)) != len(s):
                raise ValueError(f"repeated index in {s}")
        if set(u) & set(v) or set(u) & set(w) or set(v) & set(w):
            raise ValueError(f"u={u}, v={v}, w={w} are not pairwise disjoint")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)

    @classmethod
    def make(cls, u, v, w=()):
        s = cls(u, v, w)
        if s.v < s.u:
            return cls(s.v, s.u, s.w)
        return s

    def sort_key(self):
        return (len(self.w), self.w, self.u, self.v)

    def variables(self):
        return frozenset(self.u + self.v + self.w)

    def to_dict(self):
        return {"u": list(self.u), "v": list(self.v), "w": list(self.w)}

    @classmethod
    def from_dict(cls, d):
        return cls.make(d["u"], d["v"], d.get("w", ()))

    def __str__(self):
        def fmt(s):
            return "{" + ",".join(map(str, s)) + "}"

        return f"{fmt(self.u)}_||_{fmt(self.v)}|{fmt(self.w)}"


def sorted_statements(statements):
    return sorted(statements, key=CiStatement.sort_key)


def statements_to_json(statements):
    return [s.to_dict() for s in sorted_statements(statements)]


def statements_from_json(items):
    return frozenset(CiStatement.from_dict(d) for d in items)


def canonical_key(statements):
    """Stable string form of a statement set; used for tie-breaking and ids."""
    return json.dumps(statements_to_json(statements), separators=(",", ":"))


@lru_cache(maxsize=None)
def statement_universe(k):
    """All canonical statements over ``k`` variables, in canonical order."""
    check_cap(k)
    found = set()
    # each variable goes to u (1), v (2), w (3) or nowhere (0)
    for roles in product(range(4), repeat=k):
        u = [i for i, r in enumerate(roles) if r == 1]
        v = [i for i, r in enumerate(roles) if r == 2]
        w = [i for i, r in enumerate(roles) if r == 3]
        if u and v:
            found.add(CiStatement.make(u, v, w))
    return tuple(sorted_statements(found))


def _as_triple(s):
    if isinstance(s, CiStatement):
        return s.u, s.v, s.w
    u, v, w = s
    return tuple(u), tuple(v), tuple(w)


def d_separated(g, s):
    """Whether u and v are d-separated by w in ``g``.

    ``s`` is a CiStatement or a raw ``(u, v, w)`` triple. Uses the moralized
    ancestral graph: u and v are d-separated by w iff w disconnects them in
    the moral graph of the ancestors of u, v and w.
    """
    u, v, w = _as_triple(s)
    u, v, w = set(u), set(v), set(w)
    relevant = ancestors(g, u | v | w)
    adj = {i: set() for i in relevant}
    for child in relevant:
        ps = [p for p in parents(g, child)]
        for p in ps:
            adj[p].add(child)
            adj[child].add(p)
        for a, b in combinations(ps, 2):
            adj[a].add(b)
            adj[b].add(a)
    seen = set(u)
    stack = list(u)
    while stack:
        node = stack.pop()
        if node in v:
            return False
        for nb in adj[node]:
            if nb not in seen and nb not in w:
                seen.add(nb)
                stack.append(nb)
    return True


@lru_cache(maxsize=None)
def entailment_set(g):
    """The statements entailed by ``g``, as a frozenset of CiStatement."""
    check_cap(g.k)
    return frozenset(s for s in statement_universe(g.k) if d_separated(g, s))


def markov_equivalent(g1, g2):
    if g1.k != g2.k:
        raise ValueError(f"graphs over different variable counts ({g1.k} vs {g2.k})")
    return entailment_set(g1) == entailment_set(g2)


@dataclass(frozen=True)
class Hypothesis:
    """A Markov-equivalence class, identified by its shared entailment set.

    Equality and hashing look only at ``iset``; ``members`` and ``class_id`` are
    attached for reporting. ``class_id`` is the label of the first member DAG
    in enumeration order.
    """

    iset: frozenset
    members: tuple = field(default=(), compare=False)
    class_id: str = field(default="", compare=False)

    def to_dict(self):
        return {
            "class_id": self.class_id,
            "iset": statements_to_json(self.iset),
            "member_dags": [g.to_dict() for g in self.members],
        }

    def __repr__(self):
        return f"Hypothesis({self.class_id}, |I|={len(self.iset)}, {len(self.members)} DAGs)"


@lru_cache(maxsize=None)
def equivalence_classes(k):
    """Partition of ``enumerate_dags(k)`` by entailment set, in first-seen order."""
    check_cap(k)
    groups = {}
    for g in enumerate_dags(k):
        groups.setdefault(entailment_set(g), []).append(g)
    return tuple(
        Hypothesis(iset, tuple(members), members[0].label())
        for iset, members in groups.items()
    )


def class_of(g):
    """The Hypothesis whose members include ``g``."""
    target = entailment_set(g)
    for h in equivalence_classes(g.k):
        if h.iset == target:
            return h
    raise AssertionError("every DAG belongs to some class")


def class_by_id(k, class_id):
    for h in equivalence_classes(k):
        if h.class_id == class_id or any(m.label() == class_id for m in h.members):
            return h
    raise KeyError(f"no equivalence class {class_id!r} at k={k}")
