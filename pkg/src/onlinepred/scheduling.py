"""Preemptive single-machine schedulers driven by an exact rate-based executor.

A schedule is described by a rate policy: given the set of unfinished jobs it
assigns each one an execution rate, with rates summing to at most 1.  The
executor advances from completion to completion, so any policy whose rates
are constant between completions is simulated exactly (up to float error).
The objective throughout is the sum of completion times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

# Remaining work below this fraction of the original length counts as done;
# prevents zero-length phases caused by float residue.
COMPLETION_EPS = 1e-12

RATE_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Job:
    """A job with its true length and a (possibly wrong) predicted length."""

    id: int
    length: float
    predicted: float

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length >= 1):
            raise ValueError(f"job length must be finite and >= 1, got {self.length!r}")
        if not math.isfinite(self.predicted):
            raise ValueError(f"predicted length must be finite, got {self.predicted!r}")


@dataclass(frozen=True)
class JobSet:
    """An immutable collection of jobs with distinct ids."""

    jobs: Tuple[Job, ...]

    def __post_init__(self):
        if len(self.jobs) < 1:
            raise ValueError("a JobSet needs at least one job")
        ids = [j.id for j in self.jobs]
        if len(set(ids)) != len(ids):
            raise ValueError("job ids must be distinct")

    @classmethod
    def from_lengths(cls, lengths: Iterable[float], predictions: Optional[Iterable[float]] = None) -> "JobSet":
        lengths = [float(v) for v in lengths]
        if predictions is None:
            predictions = lengths
        preds = [float(v) for v in predictions]
        if len(preds) != len(lengths):
            raise ValueError("lengths and predictions must have equal length")
        return cls(tuple(Job(i, x, y) for i, (x, y) in enumerate(zip(lengths, preds))))

    def with_predictions(self, predictions: Iterable[float]) -> "JobSet":
        preds = [float(v) for v in predictions]
        if len(preds) != len(self.jobs):
            raise ValueError("predictions must match the number of jobs")
        return JobSet(tuple(Job(j.id, j.length, y) for j, y in zip(self.jobs, preds)))

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def total_length(self) -> float:
        return sum(j.length for j in self.jobs)


def prediction_error(jobs: JobSet) -> float:
    """Total L1 prediction error over the job set."""
    return sum(abs(j.length - j.predicted) for j in jobs.jobs)


@dataclass(frozen=True)
class ActiveJob:
    """Executor view of an unfinished job, handed to rate policies."""

    id: int
    length: float
    predicted: float
    remaining: float


@dataclass(frozen=True)
class ScheduleResult:
    """Completion time per job id, the summed objective, and the event log."""

    completions: Dict[int, float]
    objective: float
    executed_work: float
    events: Tuple[Tuple[float, Tuple[int, ...]], ...]


class UniformRates:
    """Round-robin: all k unfinished jobs run at rate 1/k."""

    def rates(self, active: Sequence[ActiveJob]) -> Mapping[int, float]:
        share = 1.0 / len(active)
        return {job.id: share for job in active}


class PredictedFirstRates:
    """Full rate to the unfinished job with the smallest prediction (ties by id)."""

    def rates(self, active: Sequence[ActiveJob]) -> Mapping[int, float]:
        current = min(active, key=lambda job: (job.predicted, job.id))
        return {job.id: (1.0 if job.id == current.id else 0.0) for job in active}


class TrueSizeFirstRates:
    """Full rate to the unfinished job with the smallest true length (clairvoyant)."""

    def rates(self, active: Sequence[ActiveJob]) -> Mapping[int, float]:
        current = min(active, key=lambda job: (job.length, job.id))
        return {job.id: (1.0 if job.id == current.id else 0.0) for job in active}


class MixedRates:
    """Convex combination of two policies: lam * first + (1 - lam) * second."""

    def __init__(self, lam: float, first, second):
        self.lam = lam
        self.first = first
        self.second = second

    def rates(self, active: Sequence[ActiveJob]) -> Mapping[int, float]:
        ra = self.first.rates(active)
        rb = self.second.rates(active)
        lam = self.lam
        return {
            job.id: lam * ra.get(job.id, 0.0) + (1.0 - lam) * rb.get(job.id, 0.0)
            for job in active
        }


def run_rate_schedule(jobs: JobSet, policy) -> ScheduleResult:
    """Event-driven execution of ``policy`` until every job completes.

    Between events each job advances at its policy rate; the next event is the
    earliest completion.  Simultaneous completions are processed as one event
    and the policy is re-queried afterwards.  A policy that leaves all
    remaining jobs at rate zero is rejected as a livelock.
    """
    remaining = {j.id: j.length for j in jobs.jobs}
    by_id = {j.id: j for j in jobs.jobs}
    active = [j.id for j in jobs.jobs]
    completions: Dict[int, float] = {}
    events = []
    t = 0.0
    executed = 0.0

    while active:
        state = tuple(
            ActiveJob(i, by_id[i].length, by_id[i].predicted, remaining[i]) for i in active
        )
        rates = policy.rates(state)
        total_rate = 0.0
        for i in active:
            r = rates.get(i, 0.0)
            if r < -1e-15:
                raise ValueError(f"policy assigned negative rate {r!r} to job {i}")
            total_rate += r
        if total_rate > 1.0 + RATE_SUM_TOLERANCE:
            raise ValueError(f"policy rates sum to {total_rate!r} > 1")

        dt = math.inf
        for i in active:
            r = rates.get(i, 0.0)
            if r > 0.0:
                dt = min(dt, remaining[i] / r)
        if not math.isfinite(dt):
            raise ValueError("livelock: policy assigned total rate 0 while jobs remain")

        t += dt
        done = []
        for i in active:
            r = rates.get(i, 0.0)
            if r > 0.0:
                work = r * dt
                remaining[i] -= work
                executed += work
            if remaining[i] <= COMPLETION_EPS * by_id[i].length:
                done.append(i)
        if not done:  # the argmin job always crosses the threshold
            raise RuntimeError("event advanced time without completing a job")
        for i in done:
            completions[i] = t
        events.append((t, tuple(done)))
        active = [i for i in active if remaining[i] > COMPLETION_EPS * by_id[i].length]

    objective = sum(completions[j.id] for j in jobs.jobs)
    return ScheduleResult(completions, objective, executed, tuple(events))


def _run_sequential(jobs: JobSet, order: Sequence[Job]) -> ScheduleResult:
    t = 0.0
    completions = {}
    events = []
    for job in order:
        t += job.length
        completions[job.id] = t
        events.append((t, (job.id,)))
    objective = sum(completions[j.id] for j in jobs.jobs)
    return ScheduleResult(completions, objective, jobs.total_length, tuple(events))


def sjf_opt(jobs: JobSet) -> ScheduleResult:
    """Clairvoyant optimum: run jobs to completion in ascending true length."""
    order = sorted(jobs.jobs, key=lambda j: (j.length, j.id))
    return _run_sequential(jobs, order)


def round_robin(jobs: JobSet) -> ScheduleResult:
    """Equal-rate sharing among all unfinished jobs."""
    return run_rate_schedule(jobs, UniformRates())


def spjf(jobs: JobSet, adversarial_ties: bool = False) -> ScheduleResult:
    """Shortest predicted job first, run sequentially.

    Ties in the predicted length break by ascending id; ``adversarial_ties``
    flips the tie order (descending id), which is only useful for driving the
    worst-case tie schedule in tests.
    """
    if adversarial_ties:
        order = sorted(jobs.jobs, key=lambda j: (j.predicted, -j.id))
    else:
        order = sorted(jobs.jobs, key=lambda j: (j.predicted, j.id))
    return _run_sequential(jobs, order)


def _check_mix_lambda(lam: float) -> None:
    if not (isinstance(lam, (int, float)) and 0 < lam < 1):
        raise ValueError(f"combination parameter lambda must lie in (0, 1), got {lam!r}")


def combine(jobs: JobSet, policy_a, policy_b, lam: float) -> ScheduleResult:
    """Run two rate policies in parallel at rates lam and 1 - lam.

    Each constituent policy sees the true remaining-work state, so (for
    monotone policies) neither can be hurt by the other's progress.
    """
    _check_mix_lambda(lam)
    return run_rate_schedule(jobs, MixedRates(lam, policy_a, policy_b))


def prr(jobs: JobSet, lam: float) -> ScheduleResult:
    """Preferential round-robin: predicted-shortest-first blended with round-robin.

    With k jobs unfinished every job runs at rate (1-lam)/k and the unfinished
    job with the smallest prediction gets an additional lam.
    """
    _check_mix_lambda(lam)
    return combine(jobs, PredictedFirstRates(), UniformRates(), lam)
