"""
Causal states and their classification.

A causal state is a (DAG, joint table) pair with the DAG Markov to the table.
The predicates below are exhaustive over every DAG on the same variables, so
they are exact at the sizes the graph module allows.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .distributions import (
    CI_TOLERANCE,
    MarkovViolationError,
    independence_set,
    is_markov,
)
from .graphs import check_cap, class_of, entailment_set, equivalence_classes


@dataclass(frozen=True, eq=False)
class CausalState:
    g: object
    p: object
    name: str = ""

    def __post_init__(self):
        if self.g.k != self.p.k:
            raise ValueError(f"graph has {self.g.k} variables, table has {self.p.k}")
        if not is_markov(self.g, self.p):
            raise MarkovViolationError(
                f"{self.g!r} is not Markov to the given table"
                + (f" (state {self.name!r})" if self.name else "")
            )

    @property
    def k(self):
        return self.g.k

    def truth(self):
        """The hypothesis true in this state: the class of its graph."""
        return class_of(self.g)


@dataclass(frozen=True)
class StateClass:
    markov: bool
    faithful: bool
    minimal: bool
    u_minimal: bool
    quasi_faithful: bool

    def to_dict(self):
        return asdict(self)


def _require_markov(g, p):
    if not is_markov(g, p):
        raise MarkovViolationError(f"{g!r} is not Markov to the given table")


def fitting_classes(iset, k):
    """Classes whose entailment set is contained in ``iset``."""
    return [h for h in equivalence_classes(k) if h.iset <= iset]


def minimal_classes(p, tol=CI_TOLERANCE):
    """Classes whose graphs are minimal to ``p``: subset-maximal among fitting classes."""
    check_cap(p.k)
    fit = fitting_classes(independence_set(p, tol), p.k)
    return [h for h in fit if not any(h.iset < other.iset for other in fit)]


def is_faithful(g, p):
    _require_markov(g, p)
    return entailment_set(g) == independence_set(p)


def minimality_witnesses(g, p):
    """Classes ``h`` with I(g) < h.iset <= I(p); empty iff ``g`` is minimal to ``p``."""
    _require_markov(g, p)
    check_cap(g.k)
    ig = entailment_set(g)
    return [h for h in fitting_classes(independence_set(p), g.k) if ig < h.iset]


def minimality_witness(g, p):
    """A witness graph class that is itself minimal to ``p``, or None."""
    found = minimality_witnesses(g, p)
    if not found:
        return None
    return max(found, key=lambda h: len(h.iset))


def is_minimal(g, p):
    return not minimality_witnesses(g, p)


def is_u_minimal(g, p):
    if not is_minimal(g, p):
        return False
    ig = entailment_set(g)
    return all(h.iset == ig for h in minimal_classes(p))


def is_quasi_faithful(p):
    check_cap(p.k)
    ip = independence_set(p)
    return any(h.iset == ip for h in equivalence_classes(p.k))


def classify(g, p):
    """All five flags. If ``g`` is not Markov to ``p`` the rest are reported False."""
    if g.k != p.k:
        raise ValueError(f"graph has {g.k} variables, table has {p.k}")
    if not is_markov(g, p):
        return StateClass(False, False, False, False, False)
    return StateClass(
        markov=True,
        faithful=is_faithful(g, p),
        minimal=is_minimal(g, p),
        u_minimal=is_u_minimal(g, p),
        quasi_faithful=is_quasi_faithful(p),
    )


def classify_state(state):
    return classify(state.g, state.p)
