"""IID sampling from joint tables and empirical tables from samples."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .distributions import JointTable
from .graphs import VariableSet


def derive_seed(base_seed, *keys):
    """A 64-bit seed determined by ``base_seed`` and integer ``keys``."""
    ss = np.random.SeedSequence([int(base_seed), *(int(k) for k in keys)])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True, eq=False)
class Sample:
    vars: VariableSet
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64).reshape(-1, self.vars.k)
        cards = np.asarray(self.vars.cards)
        if rows.size and (rows.min() < 0 or np.any(rows >= cards)):
            raise ValueError("sample row outside the variables' value ranges")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n(self):
        return self.rows.shape[0]

    def cell_indices(self):
        if self.n == 0:
            return np.zeros(0, dtype=np.int64)
        return np.ravel_multi_index(self.rows.T, self.vars.cards)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.vars.names)
            writer.writerows(self.rows.tolist())

    @classmethod
    def from_csv(cls, path, cards=None):
        """Read a CSV with a header row. Cardinalities default to max value + 1 (at least 2)."""
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ValueError(f"{path}: empty file, expected a header row") from None
            rows = []
            for lineno, rec in enumerate(reader, start=2):
                if not rec:
                    continue
                if len(rec) != len(header):
                    raise ValueError(f"{path}:{lineno}: expected {len(header)} fields")
                try:
                    rows.append([int(x) for x in rec])
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: non-integer value in {rec}") from None
        arr = np.asarray(rows, dtype=np.int64).reshape(-1, len(header))
        if cards is None:
            top = arr.max(axis=0) if len(arr) else np.zeros(len(header), dtype=np.int64)
            cards = tuple(max(2, int(m) + 1) for m in top)
        return cls(VariableSet(header, cards), arr)


def draw(p, n, seed):
    """``n`` iid rows from ``p`` by inverse CDF over the flattened cells."""
    if n < 0:
        raise ValueError(f"sample size must be >= 0, got {n}")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(p.flat())
    cdf /= cdf[-1]
    cells = np.searchsorted(cdf, rng.random(n), side="right")
    rows = np.stack(np.unravel_index(cells, p.cards), axis=1) if n else np.zeros((0, p.k))
    return Sample(p.vars, rows)


def empirical(s):
    """Frequency table of a sample, as a JointTable."""
    if s.n == 0:
        raise ValueError("empirical distribution of an empty sample is undefined")
    counts = np.bincount(s.cell_indices(), minlength=int(np.prod(s.vars.cards)))
    return JointTable(s.vars, counts / s.n)
