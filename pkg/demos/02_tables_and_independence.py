# Joint tables from conditional tables, and reading independences off them.

import numpy as np

from minlab.distributions import (
    CptNetwork, JointTable, independence_set, is_markov, joint_of, network_from_joint, perturb,
    perturb_network, random_network, tv_distance,
)
from minlab.graphs import Dag, chain, entailment_set

# P(X0=1) = 0.3, P(X1=1 | X0=0) = 0.2, P(X1=1 | X0=1) = 0.9
net = CptNetwork.build(Dag(2, {(0, 1)}), (2, 2), [[0.7, 0.3], [[0.8, 0.2], [0.1, 0.9]]])
p = joint_of(net)
print("joint over 00, 01, 10, 11:", p.flat())

# a random parameterization of a chain is faithful: its independences are
# exactly the ones the graph entails
rng = np.random.default_rng(0)
q = joint_of(random_network(chain(3), (2, 2, 2), rng))
print("I(P) == I(G):", independence_set(q) == entailment_set(chain(3)))

# identical rows in a CPT switch the edge off, which adds an independence
flat = CptNetwork.build(Dag(2, {(0, 1)}), (2, 2), [[0.7, 0.3], [[0.4, 0.6], [0.4, 0.6]]])
print("degenerate edge I(P):", [str(s) for s in independence_set(joint_of(flat))])

# total variation and a small perturbation
u = JointTable.uniform((2, 2, 2))
print("TV(uniform, chain table) =", round(tv_distance(u, q), 4))

# mixing the whole joint with noise leaves the ball's center hypothesis:
# the chain's one independence is lost
r = perturb(q, 0.01, rng_seed=42)
print("joint perturbation: TV", round(tv_distance(q, r), 4), " Markov to the chain:", is_markov(chain(3), r))

# perturbing the conditional tables instead keeps the factorization
net_q = network_from_joint(chain(3), q)
r = joint_of(perturb_network(net_q, 0.01, rng_seed=42))
print("CPT perturbation:   TV", round(tv_distance(q, r), 4), " Markov to the chain:", is_markov(chain(3), r))
