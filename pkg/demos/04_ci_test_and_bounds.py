# The L1 independence statistic on data, and the bounds that drive its
# consistency.

import math

import numpy as np

from minlab.citest import ci_test, hoeffding_envelope, l1_stat, lipschitz_gap, threshold, type2_bound
from minlab.distributions import JointTable, random_table
from minlab.graphs import CiStatement
from minlab.sampling import derive_seed, draw

pair = CiStatement.make([0], [1])
r = 0.6
dep = JointTable.from_probs((2, 2), [(1 + r) / 4, (1 - r) / 4, (1 - r) / 4, (1 + r) / 4])
ind = JointTable.uniform((2, 2))
print("L1 of the dependent pair:", l1_stat(dep, pair))

# the acceptance threshold shrinks like n^(-1/4)
for n in (100, 1000, 10_000, 100_000):
    acc_ind = sum(ci_test(draw(ind, n, derive_seed(1, n, t)), pair).accepted for t in range(200)) / 200
    acc_dep = sum(ci_test(draw(dep, n, derive_seed(2, n, t)), pair).accepted for t in range(200)) / 200
    bound = type2_bound(n, l1_stat(dep, pair), 4)
    print(f"n={n:>6}  threshold {threshold(n):.3f}  accept|indep {acc_ind:.3f}  accept|dep {acc_dep:.3f}"
          f"  reject bound {'-' if bound is None else f'{bound:.3f}'}")

# the statistic moves at most 8x the TV distance
rng = np.random.default_rng(3)
ratios = []
for _ in range(1000):
    p, q = random_table((2, 2), rng), random_table((2, 2), rng)
    gap, bound = lipschitz_gap(p, q, pair)
    ratios.append(gap / bound)
print("largest |dL1| / (8 TV) over 1000 pairs:", round(max(ratios), 3))

print("P(TV < 0.05) at n=1000 over 4 cells >=", round(hoeffding_envelope(1000, 0.05, 4), 4),
      "  (failure bound", round(16 * math.exp(-5), 4), ")")
