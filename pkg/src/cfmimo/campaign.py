"""Monte-Carlo campaign over independent channel realizations."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from .channel import SimConfig, draw_realization
from .evaluation import CampaignStats, EvalConfig, RealizationOutcome, evaluate_realization


class RealizationError(RuntimeError):
    def __init__(self, index: int, cause: Exception):
        super().__init__(f"realization {index}: {type(cause).__name__}: {cause}")
        self.index = index


def simulate_realization(sim: SimConfig, ev: EvalConfig, index: int) -> RealizationOutcome:
    try:
        ch, sched_rng = draw_realization(sim, index)
        return evaluate_realization(ch, ev, sched_rng)
    except Exception as exc:
        raise RealizationError(index, exc) from exc


def _job(args):
    return simulate_realization(*args)


def run_realizations(sim: SimConfig, ev: EvalConfig, workers: int = 1,
                     indices=None) -> list[RealizationOutcome]:
    """Outcomes in realization-index order; identical for any worker count."""
    indices = list(range(sim.num_realizations)) if indices is None else list(indices)
    jobs = [(sim, ev, i) for i in indices]
    if workers <= 1:
        return [_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def run_stats(sim: SimConfig, ev: EvalConfig, workers: int = 1) -> CampaignStats:
    return CampaignStats.from_outcomes(run_realizations(sim, ev, workers), sim.num_users)
