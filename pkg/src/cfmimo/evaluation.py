"""Per-realization outcomes and campaign statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .baselines import mrc_rates, smallcell_assign, smallcell_rates
from .channel import ChannelRealization, ConfigError
from .cnf import DEFAULT_PHASE_SAMPLES, Equation, ap_equations
from .recovery import EquationSet, backhaul_load, greedy_select

SCHEMES = ("cnf", "mrc", "sc")
LABELS = {"cnf": "C&F", "mrc": "MRC", "sc": "SC"}


@dataclass(frozen=True)
class EvalConfig:
    r0: float = 0.5
    rho: float = 1 / 8
    phase_samples: int = DEFAULT_PHASE_SAMPLES
    prune_criterion: str = "magnitude"

    def __post_init__(self):
        if not (self.r0 >= 0 and math.isfinite(self.r0)):
            raise ConfigError(f"r0={self.r0!r} violates >= 0")
        if not 0 <= self.rho < 1:
            raise ConfigError(f"rho={self.rho!r} violates 0 <= rho < 1")
        if isinstance(self.phase_samples, bool) or not isinstance(self.phase_samples, int) \
                or self.phase_samples < 1:
            raise ConfigError(f"phase_samples={self.phase_samples!r} violates integer >= 1")
        if self.prune_criterion not in ("magnitude", "literal"):
            raise ConfigError(f"prune_criterion={self.prune_criterion!r} violates one of magnitude/literal")


@dataclass(frozen=True)
class RealizationOutcome:
    index: int
    m_rank: int
    rates: dict  # scheme -> ascending np.ndarray of length L
    n_outage: dict  # scheme -> int
    throughput: dict  # scheme -> per-user outage rate at rho
    backhaul_all: float
    backhaul_selected: float
    selected: tuple[Equation, ...] = field(default=(), repr=False)
    ap_of_user: tuple[int, ...] = field(default=(), repr=False)


def count_outage(rates, r0: float) -> int:
    """Users (or equations) strictly below the target rate."""
    return int(np.count_nonzero(np.asarray(rates, dtype=float) < r0))


def outage_probability(outcomes, scheme: str) -> float:
    """Mean fraction of users in outage across realizations."""
    if not outcomes:
        raise ValueError("no outcomes")
    fr = [o.n_outage[scheme] / len(o.rates[scheme]) for o in outcomes]
    return float(np.mean(fr))


def per_realization_outage_rate(rates, rho: float) -> float:
    """Rate of the (floor(rho L) + 1)-th worst user: the common rate when the
    floor(rho L) worst users are left unscheduled."""
    rates = np.sort(np.asarray(rates, dtype=float))
    k = math.floor(rho * rates.size)
    if k >= rates.size:
        raise ValueError(f"rho={rho} deschedules all {rates.size} users")
    return float(rates[k])


def empirical_cdf(samples):
    """Distinct sample values and the fraction of samples <= each."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empirical CDF of an empty sample")
    values, counts = np.unique(x, return_counts=True)
    return values, np.cumsum(counts) / x.size


def cnf_padded_rates(selected_rates, num_users: int) -> np.ndarray:
    """Selected equation rates padded with zeros up to L, ascending."""
    out = np.zeros(num_users)
    r = np.sort(np.asarray(selected_rates, dtype=float))
    out[num_users - r.size:] = r
    return out


def evaluate_realization(ch: ChannelRealization, ev: EvalConfig,
                         rng: np.random.Generator) -> RealizationOutcome:
    eqs = EquationSet(ap_equations(ch.gains, ch.snr, ev.phase_samples, ev.prune_criterion))
    sel = greedy_select(eqs)
    chosen = tuple(eqs.equations[i] for i in sel.selected)
    L = ch.num_users
    asg = smallcell_assign(ch, rng)
    rates = {
        "cnf": cnf_padded_rates([e.rate for e in chosen], L),
        "mrc": np.sort(mrc_rates(ch)),
        "sc": np.sort(smallcell_rates(ch, asg)),
    }
    return RealizationOutcome(
        index=ch.realization_index,
        m_rank=sel.m_rank,
        rates=rates,
        n_outage={s: count_outage(r, ev.r0) for s, r in rates.items()},
        throughput={s: per_realization_outage_rate(r, ev.rho) for s, r in rates.items()},
        backhaul_all=backhaul_load(sel, ch.num_aps, ev.r0, "all"),
        backhaul_selected=backhaul_load(sel, ch.num_aps, ev.r0, "selected"),
        selected=chosen,
        ap_of_user=tuple(int(a) for a in asg),
    )


@dataclass(frozen=True)
class CampaignStats:
    num_users: int
    m_rank: np.ndarray
    n_outage: dict
    throughput: dict
    outage_probability: dict

    @classmethod
    def from_outcomes(cls, outcomes, num_users: int) -> "CampaignStats":
        outcomes = sorted(outcomes, key=lambda o: o.index)
        return cls(
            num_users=num_users,
            m_rank=np.array([o.m_rank for o in outcomes]),
            n_outage={s: np.array([o.n_outage[s] for o in outcomes]) for s in SCHEMES},
            throughput={s: np.array([o.throughput[s] for o in outcomes]) for s in SCHEMES},
            outage_probability={s: outage_probability(outcomes, s) for s in SCHEMES},
        )

    @property
    def full_rank_fraction(self) -> float:
        return float(np.mean(self.m_rank == self.num_users))

    def rank_cdf(self):
        return empirical_cdf(self.m_rank)

    def outage_cdf(self, scheme: str):
        return empirical_cdf(self.n_outage[scheme])

    def throughput_cdf(self, scheme: str):
        return empirical_cdf(self.throughput[scheme])
