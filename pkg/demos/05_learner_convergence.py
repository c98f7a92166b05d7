# Success curves for the default learner. A faithful chain is learned; a
# chain with a dead edge converges to the empty graph instead.

from minlab.experiments import TrialPlan, run_convergence
from minlab.fixtures import get_state
from minlab.graphs import class_of, empty_dag
from minlab.learner import Learner

grid = (30, 100, 300, 1000, 3000, 10_000)

chain = get_state("generic_chain")
curve = run_convergence(TrialPlan(chain, Learner.default(3), grid, 200, base_seed=1))
print("generic_chain, target", curve.target)
for pt in curve.points:
    print(f"  n={pt.n:>6}  success {pt.rate:.3f}  95% CI [{pt.lo:.3f}, {pt.hi:.3f}]")

edge = get_state("degenerate_edge")
plan = TrialPlan(edge, Learner.default(2), grid, 200, base_seed=1)
truth = run_convergence(plan)
empty = run_convergence(TrialPlan(edge, Learner.default(2), grid, 200, 1, target=class_of(empty_dag(2))))
print("\ndegenerate_edge: rate of the true edge class vs the empty graph")
for a, b in zip(truth.points, empty.points):
    print(f"  n={a.n:>6}  edge {a.rate:.3f}  empty {b.rate:.3f}")

# the curve as CSV, ready for any plotting tool
print()
print(curve.to_csv())
