"""Grid verification of every proven guarantee against the simulators.

Each check family enumerates instances (exhaustively where the domain is
finite, from a seeded generator otherwise), runs the real decision rule, and
compares the observed ratio against the closed-form guarantee.  A positive
excess beyond the family tolerance is a violation, and since every guarantee
is proven, any violation is an implementation bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import bounds
from .scheduling import JobSet, prediction_error, prr, sjf_opt, spjf
from .ski_rental import (
    SkiInstance,
    deterministic_buy_day,
    naive_buy_day,
    randomized_expected_cost,
    simulate_buy_day,
)
from .experiments import DEFAULT_SEED
from .workloads import derived_rng

NINE_LAMBDAS = tuple(round(0.1 * i, 10) for i in range(1, 10))


@dataclass(frozen=True)
class FamilyResult:
    """Aggregate outcome of one check family."""

    family: str
    points: int
    violations: int
    worst_excess: float
    tolerance: float
    worst_case: str

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _collect(family: str, tolerance: float, excesses, labels) -> FamilyResult:
    """Fold per-point excesses (observed - allowed) into a family result."""
    worst = -math.inf
    worst_label = ""
    violations = 0
    points = 0
    for excess, label in zip(excesses, labels):
        points += 1
        if excess > worst:
            worst = excess
            worst_label = label
        if excess > tolerance:
            violations += 1
    return FamilyResult(family, points, violations, worst, tolerance, worst_label)


def _det_cost_vector(b: int, lam: float, branch_big: bool) -> np.ndarray:
    """Deterministic-rule cost for every x in 1..4b on one prediction branch."""
    y = float(b) if branch_big else 0.0
    day = deterministic_buy_day(SkiInstance(b, 1, y), lam)
    return np.array(
        [simulate_buy_day(SkiInstance(b, x, y), day) for x in range(1, 4 * b + 1)],
        dtype=float,
    )


def _rand_cost_vector(b: int, lam: float, branch_big: bool) -> np.ndarray:
    y = float(b) if branch_big else 0.0
    return np.array(
        [randomized_expected_cost(SkiInstance(b, x, y), lam) for x in range(1, 4 * b + 1)],
        dtype=float,
    )


def _naive_cost_vector(b: int, branch_big: bool) -> np.ndarray:
    y = float(b) if branch_big else 0.0
    return np.array(
        [
            simulate_buy_day(SkiInstance(b, x, y), naive_buy_day(SkiInstance(b, x, y)))
            for x in range(1, 4 * b + 1)
        ],
        dtype=float,
    )


def _ski_grid_excess(
    b: int,
    cost_small: np.ndarray,
    cost_big: np.ndarray,
    bound_fn,
    tolerance: float,
) -> Tuple[float, int, str]:
    """Worst excess of cost/OPT over its bound across all (x, y) pairs.

    The cost depends on y only through the branch y >= b, so two cost vectors
    cover the whole y range while the bound is evaluated on the full grid.
    """
    xs = np.arange(1, 4 * b + 1, dtype=float)[:, None]
    ys = np.arange(0, 4 * b + 1, dtype=float)[None, :]
    opt = np.minimum(xs, float(b))
    eta = np.abs(ys - xs)
    cost = np.where(ys >= b, cost_big[:, None], cost_small[:, None])
    allowed = bound_fn(eta, opt)
    excess = cost / opt - allowed
    flat = int(np.argmax(excess))
    xi, yi = np.unravel_index(flat, excess.shape)
    worst = float(excess[xi, yi])
    violations = int(np.count_nonzero(excess > tolerance))
    return worst, violations, f"b={b} x={int(xs[xi, 0])} y={int(ys[0, yi])}"


def check_det_ski_guarantee(
    b_max: int = 50,
    lambdas: Sequence[float] = NINE_LAMBDAS,
    tolerance: float = 1e-9,
) -> FamilyResult:
    """Deterministic rule vs its guarantee, exhaustively over b, x, y, lambda."""
    worst = -math.inf
    worst_label = ""
    violations = 0
    points = 0
    for b in range(2, b_max + 1):
        for lam in lambdas:
            cost_small = _det_cost_vector(b, lam, branch_big=False)
            cost_big = _det_cost_vector(b, lam, branch_big=True)
            rob = bounds.det_robustness(lam)
            cons = bounds.det_consistency(lam)

            def allowed(eta, opt, rob=rob, cons=cons, lam=lam):
                return np.minimum(rob, cons + eta / ((1.0 - lam) * opt))

            excess, nviol, label = _ski_grid_excess(
                b, cost_small, cost_big, allowed, tolerance
            )
            points += (4 * b) * (4 * b + 1)
            violations += nviol
            if excess > worst:
                worst = excess
                worst_label = f"{label} lambda={lam}"
    return FamilyResult(
        "deterministic-rule-guarantee", points, violations, worst, tolerance, worst_label
    )


def check_rand_ski_guarantee(
    b_max: int = 50,
    lambdas: Sequence[float] = NINE_LAMBDAS,
    tolerance: float = 1e-9,
) -> FamilyResult:
    """Randomized rule (exact expectation) vs its guarantee on the same grid.

    Lambdas at or below 1/b are outside the rule's domain and are skipped.
    """
    worst = -math.inf
    worst_label = ""
    violations = 0
    points = 0
    for b in range(2, b_max + 1):
        for lam in lambdas:
            if lam <= 1.0 / b:
                continue
            cost_small = _rand_cost_vector(b, lam, branch_big=False)
            cost_big = _rand_cost_vector(b, lam, branch_big=True)
            rob = bounds.rand_robustness(b, lam)
            cons = bounds.rand_consistency(lam)

            def allowed(eta, opt, rob=rob, cons=cons):
                return np.minimum(rob, cons * (1.0 + eta / opt))

            excess, nviol, label = _ski_grid_excess(
                b, cost_small, cost_big, allowed, tolerance
            )
            points += (4 * b) * (4 * b + 1)
            violations += nviol
            if excess > worst:
                worst = excess
                worst_label = f"{label} lambda={lam}"
    return FamilyResult(
        "randomized-rule-guarantee", points, violations, worst, tolerance, worst_label
    )


def check_naive_lemma(b_max: int = 50, tolerance: float = 1e-9) -> FamilyResult:
    """Naive rule: cost <= OPT + eta on every instance of the grid."""
    worst = -math.inf
    worst_label = ""
    violations = 0
    points = 0
    for b in range(2, b_max + 1):
        cost_small = _naive_cost_vector(b, branch_big=False)
        cost_big = _naive_cost_vector(b, branch_big=True)

        def allowed(eta, opt):
            return 1.0 + eta / opt  # cost <= OPT + eta, as a ratio

        excess, nviol, label = _ski_grid_excess(b, cost_small, cost_big, allowed, tolerance)
        points += (4 * b) * (4 * b + 1)
        violations += nviol
        if excess > worst:
            worst = excess
            worst_label = label
    return FamilyResult(
        "naive-rule-additive-guarantee", points, violations, worst, tolerance, worst_label
    )


def check_classical_recovery(
    b_max: int = 50, b_ratio: int = 100, tolerance: float = 1e-9
) -> FamilyResult:
    """lambda = 1 recovers the classical rules.

    Deterministic: the buy day equals b on both prediction branches for every
    b.  Randomized: for b = b_ratio the worst expected ratio over x in
    {1..4b} sits within 1/b of e/(e-1); for smaller b it stays below
    e/(e-1) + 1/b.
    """
    excesses = []
    labels = []
    for b in range(2, b_max + 1):
        for y in (0.0, float(b)):
            day = deterministic_buy_day(SkiInstance(b, 1, y), 1.0)
            excesses.append(float(abs(day - b)))
            labels.append(f"deterministic b={b} y={y}")
        costs = _rand_cost_vector(b, 1.0, branch_big=True)
        opts = np.minimum(np.arange(1, 4 * b + 1, dtype=float), float(b))
        worst_ratio = float(np.max(costs / opts))
        excesses.append(worst_ratio - (bounds.E_OVER_E_MINUS_1 + 1.0 / b))
        labels.append(f"randomized-ceiling b={b}")

    costs = _rand_cost_vector(b_ratio, 1.0, branch_big=True)
    opts = np.minimum(np.arange(1, 4 * b_ratio + 1, dtype=float), float(b_ratio))
    worst_ratio = float(np.max(costs / opts))
    excesses.append(abs(worst_ratio - bounds.E_OVER_E_MINUS_1) - 1.0 / b_ratio)
    labels.append(f"randomized-proximity b={b_ratio} worst_ratio={worst_ratio:.6f}")
    return _collect("classical-recovery", tolerance, excesses, labels)


def random_jobsets(count: int, seed: int, n_max: int = 8, x_max: float = 10.0) -> List[JobSet]:
    """Seeded job sets with lengths in [1, x_max] and assorted prediction styles.

    Prediction modes rotate by index: perfect, mild noise, heavy noise,
    unrelated uniform (may be negative), and fully reversed order.
    """
    sets = []
    for s in range(count):
        rng = derived_rng(seed, s)
        n = int(rng.integers(1, n_max + 1))
        lengths = rng.uniform(1.0, x_max, n)
        mode = s % 5
        if mode == 0:
            preds = lengths.copy()
        elif mode == 1:
            preds = lengths + rng.normal(0.0, 0.5, n)
        elif mode == 2:
            preds = lengths + rng.normal(0.0, 5.0, n)
        elif mode == 3:
            preds = rng.uniform(-5.0, 15.0, n)
        else:
            preds = -lengths
        sets.append(JobSet.from_lengths(lengths.tolist(), preds.tolist()))
    return sets


def check_spjf_lemma(
    count: int = 10000, seed: int = DEFAULT_SEED, tolerance: float = 1e-9
) -> FamilyResult:
    """SPJF ratio <= 1 + 2*eta/n on the random job-set grid."""
    excesses = []
    labels = []
    for idx, jobs in enumerate(random_jobsets(count, seed)):
        opt = sjf_opt(jobs).objective
        ratio = spjf(jobs).objective / opt
        allowed = bounds.spjf_bound(jobs.n, prediction_error(jobs))
        excesses.append(ratio - allowed)
        labels.append(f"jobset#{idx} n={jobs.n}")
    return _collect("spjf-guarantee", tolerance, excesses, labels)


def check_spjf_tightness(
    n: int = 50, eps: float = 1e-3, safety: float = 0.9
) -> FamilyResult:
    """The equal-predictions family drives SPJF close to its guarantee.

    n-1 unit jobs plus one of length 1+eps, all predicted 1; scheduling the
    long job first (worst tie order) must reach at least ``safety`` of the
    guarantee's excess 2(n-1)eta / (n(n+1)).
    """
    lengths = [1.0] * (n - 1) + [1.0 + eps]
    jobs = JobSet.from_lengths(lengths, [1.0] * n)
    opt = sjf_opt(jobs).objective
    ratio = spjf(jobs, adversarial_ties=True).objective / opt
    eta = prediction_error(jobs)
    required = 1.0 + safety * 2.0 * (n - 1) * eta / (n * (n + 1))
    return _collect(
        "spjf-tightness-family",
        0.0,
        [required - ratio],
        [f"n={n} eps={eps} ratio={ratio:.9f} required>={required:.9f}"],
    )


def check_prr_guarantee(
    count: int = 10000,
    lambdas: Sequence[float] = NINE_LAMBDAS,
    seed: int = DEFAULT_SEED,
    tolerance: float = 1e-9,
) -> FamilyResult:
    """PRR ratio <= min((1/lam)(1 + 2*eta/n), 2/(1-lam)) on the random grid."""
    excesses = []
    labels = []
    for idx, jobs in enumerate(random_jobsets(count, seed)):
        opt = sjf_opt(jobs).objective
        eta = prediction_error(jobs)
        for lam in lambdas:
            ratio = prr(jobs, lam).objective / opt
            excesses.append(ratio - bounds.prr_bound(jobs.n, eta, lam))
            labels.append(f"jobset#{idx} lambda={lam}")
    return _collect("prr-guarantee", tolerance, excesses, labels)


def check_prr_perfect_guarantee(
    count: int = 10000,
    lambdas: Sequence[float] = NINE_LAMBDAS,
    seed: int = DEFAULT_SEED,
    tolerance: float = 1e-9,
) -> FamilyResult:
    """With perfect predictions, PRR ratio <= (1+lam)/(2*lam) on the same grid."""
    excesses = []
    labels = []
    for idx, jobs in enumerate(random_jobsets(count, seed)):
        perfect = jobs.with_predictions([j.length for j in jobs.jobs])
        opt = sjf_opt(perfect).objective
        for lam in lambdas:
            ratio = prr(perfect, lam).objective / opt
            excesses.append(ratio - bounds.prr_perfect_bound(lam))
            labels.append(f"jobset#{idx} lambda={lam}")
    return _collect("prr-perfect-prediction-guarantee", tolerance, excesses, labels)


def check_appendix_families(
    a1_step: float = 1e-3, a2_b_max: int = 1000, a2_lambda_points: int = 100
) -> List[FamilyResult]:
    """Wrap the helper-inequality reports into family results."""
    results = []
    for report in bounds.check_appendix_lemmas(a1_step, a2_b_max, a2_lambda_points):
        worst = report.parameters["max_gap"]
        points = int(report.parameters["points"])
        violations = int(report.parameters["violations"])
        case = ", ".join(
            f"{k}={v:.6g}"
            for k, v in report.parameters.items()
            if k not in ("points", "max_gap", "violations")
        )
        results.append(
            FamilyResult(report.bound_name, points, violations, worst, report.slack, case)
        )
    return results


def check_tradeoff_dominance(
    b: int = 100,
    det_lambdas: Sequence[float] = tuple(round(0.05 * i, 10) for i in range(1, 21)),
    rand_grid_size: int = 20000,
) -> FamilyResult:
    """At every deterministic lambda some randomized lambda dominates it.

    Dominance: no worse robustness with strictly better consistency.  At the
    shared classical endpoint (lambda = 1) equal consistency is accepted.
    """
    lo = 1.0 / b + 1e-9
    grid = np.linspace(lo, 1.0, rand_grid_size)
    rand_rob = np.array([bounds.rand_robustness(b, lam) for lam in grid])
    rand_cons = np.array([bounds.rand_consistency(lam) for lam in grid])

    excesses = []
    labels = []
    for lam_d in det_lambdas:
        dr = bounds.det_robustness(lam_d)
        dc = bounds.det_consistency(lam_d)
        mask = rand_rob <= dr
        best = float(np.min(rand_cons[mask])) if np.any(mask) else math.inf
        strict = best < dc or (lam_d == 1.0 and best <= dc)
        excesses.append(-1.0 if strict else best - dc)
        labels.append(f"lambda_det={lam_d} best_rand_consistency={best:.6f}")
    return _collect("tradeoff-dominance", 0.0, excesses, labels)


DENSITIES: Dict[str, Dict] = {
    "tiny": dict(
        b_max=12,
        lambdas=(0.3, 0.5, 0.7),
        jobsets=200,
        a1_step=1e-2,
        a2_b_max=50,
        a2_lambda_points=25,
        rand_grid_size=2000,
    ),
    "default": dict(
        b_max=50,
        lambdas=NINE_LAMBDAS,
        jobsets=10000,
        a1_step=1e-3,
        a2_b_max=1000,
        a2_lambda_points=100,
        rand_grid_size=20000,
    ),
    "dense": dict(
        b_max=60,
        lambdas=tuple(round(0.05 * i, 10) for i in range(1, 20)),
        jobsets=20000,
        a1_step=5e-4,
        a2_b_max=1200,
        a2_lambda_points=150,
        rand_grid_size=40000,
    ),
}


def run_all_checks(density: str = "default", seed: int = DEFAULT_SEED) -> List[FamilyResult]:
    """Every check family at the chosen grid density."""
    if density not in DENSITIES:
        raise ValueError(f"unknown grid density {density!r}; choose from {sorted(DENSITIES)}")
    d = DENSITIES[density]
    results = [
        check_det_ski_guarantee(d["b_max"], d["lambdas"]),
        check_rand_ski_guarantee(d["b_max"], d["lambdas"]),
        check_naive_lemma(d["b_max"]),
        check_classical_recovery(d["b_max"]),
        check_spjf_lemma(d["jobsets"], seed),
        check_spjf_tightness(),
        check_prr_guarantee(d["jobsets"], d["lambdas"], seed),
        check_prr_perfect_guarantee(d["jobsets"], d["lambdas"], seed),
    ]
    results.extend(
        check_appendix_families(d["a1_step"], d["a2_b_max"], d["a2_lambda_points"])
    )
    results.append(check_tradeoff_dominance(rand_grid_size=d["rand_grid_size"]))
    return results
