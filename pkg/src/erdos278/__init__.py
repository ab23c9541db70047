"""Uncovered density of congruence systems, prime-family partition optima,
and hard subset-sum instances from prime log-weights."""

__version__ = "0.1.0"

from .core import (
    Congruence,
    CongruenceSystem,
    ExactRational,
    Partition,
    PrimeFamily,
    format_rational,
    mk_congruence,
    parse_rational,
    system_lcm,
    validate_q_family,
)
from .density import (
    DensityResult,
    eq1_density,
    q_partition_density,
    realize_partition,
    sieve_uncovered_density,
)
from .errors import (
    BudgetError,
    PrecisionError,
    ResourceError,
    StructureError,
    ValidationError,
)
from .hardlab import (
    ConditionReport,
    EpsilonCertificate,
    HardInstance,
    epsilon_certified,
    floor_weight_times_x,
    generate_hard_instance,
    verify_chvatal_conditions,
)
from .interval import PrecisionPolicy
from .kernels import BACKEND
from .knapsack import (
    KnapsackResult,
    distinct_subset_sums,
    solve_branch_and_bound,
    subset_sum_exists,
)
from .partition import (
    KnapsackLogInstance,
    PartitionValue,
    min_sum_partition,
    partition_bruteforce,
    to_knapsack_log_form,
)
from .residues import (
    OptimizationResult,
    optimize_residues_exhaustive,
    optimize_structured_family,
    residue_extrema,
    worst_case_density,
)
