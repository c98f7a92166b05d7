# Two colliders share one table and both are minimal to it. Which one the
# learner converges to is decided by the hypothesis order alone.

from minlab.experiments import TrialPlan, run_convergence
from minlab.fixtures import get_state
from minlab.graphs import class_of
from minlab.learner import Learner

s1 = get_state("cancellation_collider")
s2 = get_state("cancellation_collider_twin")
grid = (100, 1000, 10_000)

for state in (s1, s2):
    lr = Learner.preferring(3, class_of(state.g))
    print(f"order preferring {class_of(state.g).class_id}:")
    for target in (s1, s2):
        c = run_convergence(TrialPlan(target, lr, grid, 200, base_seed=6))
        print(f"   success in {target.name:28s} {c.rates()}")
