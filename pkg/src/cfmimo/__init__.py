"""Compute-and-forward for the uplink of cell-free massive MIMO.

Monte-Carlo library comparing compute-and-forward (with pathloss-pruned
coefficient search and greedy max-min AP selection) against MRC and small
cells.
"""
__version__ = "0.1.0"

from .channel import (ChannelRealization, ConfigError, NetworkLayout, SimConfig,
                      draw_realization, noise_power_w, pathloss_db, sample_channel,
                      sample_layout)
from .cnf import (Equation, GaussInt, InfeasibleError, PruneResult, alpha_opt,
                  best_coeff_search, brute_force_best, computation_rate,
                  effective_noise_variance, prune_users)
from .exactrank import rank, rank_without_row
from .recovery import (EquationSet, SelectionResult, backhaul_load, exhaustive_select,
                       greedy_select)
from .baselines import mrc_rates, smallcell_assign, smallcell_rates, symmetric_rate
from .evaluation import (CampaignStats, EvalConfig, RealizationOutcome, count_outage,
                         empirical_cdf, evaluate_realization, outage_probability,
                         per_realization_outage_rate)
from .campaign import run_realizations, run_stats
