"""
The L1 conditional-independence test and the super-test built from it.

For a statement U _||_ V | W the statistic is

    L1(P) = sum_{u,v,w} |P(u,v,w) P(w) - P(u,w) P(v,w)|

and the test accepts independence when ``L1(empirical) < c / n**(1/4)``
(``c = 1`` by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import factorization_residual, tv_distance
from .graphs import CiStatement, sorted_statements, statements_to_json
from .sampling import empirical


def l1_stat(p, s):
    return float(np.abs(factorization_residual(p, s)).sum())


def threshold(n, constant=1.0):
    return constant / n**0.25


@dataclass(frozen=True)
class CiVerdict:
    statement: CiStatement
    accepted: bool
    statistic: float
    threshold: float
    n: int

    def to_dict(self):
        return {
            "statement": self.statement.to_dict(),
            "statistic": self.statistic,
            "threshold": self.threshold,
            "accepted": self.accepted,
            "n": self.n,
        }


def verdict_on_table(table, s, n, constant=1.0):
    stat = l1_stat(table, s)
    thr = threshold(n, constant)
    return CiVerdict(s, stat < thr, stat, thr, n)


def ci_test(sample, s, constant=1.0):
    if sample.n == 0:
        raise ValueError("cannot test on an empty sample")
    return verdict_on_table(empirical(sample), s, sample.n, constant)


@dataclass(frozen=True)
class SuperTestOutput:
    s: frozenset
    verdicts: tuple

    def to_dict(self):
        return {
            "accepted": statements_to_json(self.s),
            "verdicts": [v.to_dict() for v in self.verdicts],
        }


def super_test(sample, universe, constant=1.0):
    """Run the L1 test on every statement of ``universe`` against one shared sample."""
    if sample.n == 0:
        raise ValueError("cannot test on an empty sample")
    table = empirical(sample)
    verdicts = tuple(
        verdict_on_table(table, s, sample.n, constant) for s in sorted_statements(universe)
    )
    return SuperTestOutput(frozenset(v.statement for v in verdicts if v.accepted), verdicts)


def lipschitz_gap(p, q, s):
    """``(|L1(p) - L1(q)|, 8 * TV(p, q))``; the first never exceeds the second."""
    return abs(l1_stat(p, s) - l1_stat(q, s)), 8.0 * tv_distance(p, q)


def hoeffding_envelope(n, epsilon, cells):
    """Lower bound on ``P(TV(empirical_n, P) < epsilon)`` over ``cells`` outcomes."""
    if n < 1 or epsilon <= 0 or cells < 1:
        raise ValueError("need n >= 1, epsilon > 0 and cells >= 1")
    return min(1.0, max(0.0, 1.0 - 2.0**cells * math.exp(-2.0 * n * epsilon**2)))


def hoeffding_failure_bound(n, epsilon, cells):
    """``2**cells * exp(-2 n epsilon**2)``, the complement of the envelope (unclamped)."""
    return 2.0**cells * math.exp(-2.0 * n * epsilon**2)


def statement_cells(cards, s):
    """Number of joint cells of the marginal table over U, V and W."""
    return int(np.prod([cards[i] for i in s.variables()]))


def type2_bound(n, l1_alt, cells):
    """Lower bound on the rejection probability under an alternative with L1 = ``l1_alt``.

    Valid once ``n**(-1/4) <= l1_alt / 4``; returns None before that.
    """
    if threshold(n) > l1_alt / 4.0:
        return None
    return max(0.0, 1.0 - 2.0**cells * math.exp(-n * l1_alt**2 / 128.0))


def parse_statement(text):
    """Parse ``"0,1|2||3"`` as u={0,1}, v={2}, w={3}. The ``||w`` part is optional."""
    left, _, right = text.partition("||")
    if "|" not in left:
        raise ValueError(f"statement {text!r} needs the form u|v||w")
    u_text, v_text = left.split("|", 1)

    def idx(part):
        part = part.strip()
        return [int(x) for x in part.split(",")] if part else []

    return CiStatement.make(idx(u_text), idx(v_text), idx(right))
