# Replays the construction showing a non-minimal state must be given up:
# a state with the same table but a minimal graph gets learned, and since
# the data cannot tell the two apart, the non-minimal one gets the wrong
# answer on exactly the same samples.

import json

from minlab.experiments import lemma5_replay, uniformity_probe
from minlab.fixtures import get_state

rep = lemma5_replay(get_state("degenerate_edge"), (100, 1000, 10_000), 200, base_seed=5)
summary = {k: rep[k] for k in ("shared_seed_identical", "s3_converges_to_falsehood", "passed")}
summary["s3 truth"] = rep["s3"]["truth"]
summary["s3 output"] = rep["s3"]["modal_output"]
print(json.dumps(summary, indent=2))

# contrast: around a faithful state success stays high on a whole TV ball
u = uniformity_probe(get_state("generic_chain"), 0.01, 10, (100, 1000, 10_000), 100, base_seed=5)
print("worst success over 10 nearby tables:", u.inf_success_per_n, "->", u.verdict)
