"""Exact and Monte-Carlo checks of how constraint-based causal learners behave
on faithful, minimal and non-minimal causal states over a few categorical
variables."""

from .citest import ci_test, hoeffding_envelope, l1_stat, lipschitz_gap, super_test
from .distributions import (
    CptNetwork,
    JointTable,
    MarkovViolationError,
    ci_holds,
    independence_set,
    is_markov,
    joint_of,
    perturb,
    tv_distance,
)
from .graphs import (
    CapExceededError,
    CiStatement,
    Dag,
    Hypothesis,
    VariableSet,
    d_separated,
    descendants,
    entailment_set,
    enumerate_dags,
    equivalence_classes,
    markov_equivalent,
    parents,
)
from .learner import Learner, default_order, order_preferring, patched_learner, select_f
from .sampling import Sample, draw, empirical
from .states import (
    CausalState,
    StateClass,
    classify,
    is_faithful,
    is_minimal,
    is_quasi_faithful,
    is_u_minimal,
)

__version__ = "0.1.0"
