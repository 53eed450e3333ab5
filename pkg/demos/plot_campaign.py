"""
A short campaign
================

Run a few realizations end to end and write the CSV tables and SVG plots.
The full figures use 200 realizations: ``simulate --scenario fig2-m100``.
"""

import tempfile

import numpy as np
from cfmimo import EvalConfig, SimConfig, run_realizations, CampaignStats
from cfmimo.cli import run_campaign

sim = SimConfig(num_aps=100, num_users=40, num_realizations=10)
ev = EvalConfig()

outcomes = run_realizations(sim, ev)
stats = CampaignStats.from_outcomes(outcomes, sim.num_users)
print("ranks", stats.m_rank)
for s in ("cnf", "mrc", "sc"):
    print(s, "median users in outage", np.median(stats.n_outage[s]),
          "median throughput %.3f" % np.median(stats.throughput[s]))

# %%
# Writing the artifacts. Every CSV is determined by the config and the seed.
out = tempfile.mkdtemp()
for name, path in sorted(run_campaign(sim, ev, out).items()):
    print(name, path.stat().st_size, "bytes")
