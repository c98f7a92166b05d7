# The named states shipped with the package, with their five flags.
# Faithful states are u-minimal; the cancellation states are minimal but have
# a rival minimal graph; the degenerate states are not minimal at all.

from minlab.distributions import independence_set
from minlab.fixtures import all_fixtures, cancellation_table
from minlab.graphs import sorted_statements
from minlab.states import classify_state, minimal_classes, minimality_witness

header = ("markov", "faithful", "minimal", "u_minimal", "quasi_faithful")
print(f"{'state':28s}" + "".join(f"{h:>15s}" for h in header))
for fx in all_fixtures():
    c = classify_state(fx.state).to_dict()
    print(f"{fx.name:28s}" + "".join(f"{str(c[h]):>15s}" for h in header))

# why degenerate_edge is not minimal: the empty graph explains more
edge = [f for f in all_fixtures() if f.name == "degenerate_edge"][0].state
print("\nwitness for degenerate_edge:", minimality_witness(edge.g, edge.p).class_id)

# the cancellation table: X0 is independent of X1 and of X2, yet not of the pair
p = cancellation_table()
print("I(P) =", [str(s) for s in sorted_statements(independence_set(p))])
print("minimal classes:", [h.class_id for h in minimal_classes(p)])
