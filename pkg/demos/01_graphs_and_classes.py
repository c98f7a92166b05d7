# DAGs on a handful of variables, the independences they entail, and
# how they group into Markov-equivalence classes.

from minlab import graphs as gr

for k in range(1, 5):
    print(k, "variables:", len(gr.enumerate_dags(k)), "DAGs,", len(gr.equivalence_classes(k)), "classes")

# d-separation on the three textbook shapes
chain = gr.chain(3)                          # 0 -> 1 -> 2
fork = gr.Dag(3, {(1, 0), (1, 2)})           # 0 <- 1 -> 2
collider = gr.Dag(3, {(0, 1), (2, 1)})       # 0 -> 1 <- 2

s = gr.CiStatement.make([0], [2], [1])       # X0 _||_ X2 | X1
for name, g in [("chain", chain), ("fork", fork), ("collider", collider)]:
    print(f"{name:9s} {s}: {gr.d_separated(g, s)}   I(G) = {[str(x) for x in gr.sorted_statements(gr.entailment_set(g))]}")

# chain and fork entail the same set, so they are one hypothesis
print("chain ~ fork:", gr.markov_equivalent(chain, fork))
print("chain ~ collider:", gr.markov_equivalent(chain, collider))

# every class at k=3, largest entailment set first
for h in sorted(gr.equivalence_classes(3), key=lambda h: -len(h.iset)):
    members = ", ".join(m.label() for m in h.members)
    print(f"  |I|={len(h.iset)}  [{members}]")
