"""Online rent-or-buy and non-clairvoyant scheduling with predictions."""

from .bounds import (
    BoundReport,
    E_OVER_E_MINUS_1,
    check_appendix_lemmas,
    det_consistency,
    det_robustness,
    det_ski_bound,
    prr_bound,
    prr_perfect_bound,
    rand_consistency,
    rand_robustness,
    rand_ski_bound,
    spjf_bound,
)
from .experiments import (
    DEFAULT_SEED,
    LAMBDA_RAND_DEFAULT,
    ExperimentConfig,
    TradeoffPoint,
    TrialReport,
    run_scheduling_sweep,
    run_ski_sweep,
    run_tradeoff_curve,
)
from .scheduling import (
    ActiveJob,
    Job,
    JobSet,
    ScheduleResult,
    combine,
    prediction_error,
    prr,
    round_robin,
    run_rate_schedule,
    sjf_opt,
    spjf,
)
from .ski_demand import (
    DemandInstance,
    DemandLevel,
    decompose,
    demand_algorithm_cost,
    demand_opt,
)
from .ski_rental import (
    BuyDayDistribution,
    PolicyKind,
    SkiInstance,
    SkiPolicy,
    deterministic_buy_day,
    naive_buy_day,
    policy_cost,
    randomized_distribution,
    randomized_expected_cost,
    sample_buy_day,
    simulate_buy_day,
    ski_opt,
)
from .workloads import (
    NoiseModel,
    ParetoJobModel,
    apply_noise,
    derived_rng,
    gen_pareto_jobs,
    gen_ski_instance,
)

__version__ = "0.1.0"
