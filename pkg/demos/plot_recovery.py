"""
Picking equations at the CPU
============================

Each AP sends its best equation. The CPU needs a full-rank set and wants the
weakest kept equation to be as strong as possible.
"""

import numpy as np
from cfmimo import (EquationSet, backhaul_load, draw_realization,
                    exhaustive_select, greedy_select, rank, SimConfig)

# a toy case: e1 (rate .5), e2 (1.0) and e1 + e2 (2.0)
from cfmimo.cnf import Equation, ap_equations, to_gauss
toy = EquationSet([Equation(i, to_gauss(np.array(r, dtype=complex)), q, 0j)
                   for i, (r, q) in enumerate([([1, 0], .5), ([0, 1], 1.0), ([1, 1], 2.0)])])
print(greedy_select(toy))
print(exhaustive_select(toy))

# %%
# The same on a real realization. The rank is exact (integer arithmetic).
cfg = SimConfig(num_aps=100, num_users=40)
ch, _ = draw_realization(cfg, 0)
eqs = EquationSet(ap_equations(ch.gains, ch.snr))
print("rank", rank(eqs.matrix), "of", cfg.num_users)
sel = greedy_select(eqs)
print("kept", len(sel.selected), "equations, weakest %.3f bit" % sel.min_rate)

# %%
# Backhaul: forward everything, or only the chosen equations.
print("all      ", backhaul_load(sel, cfg.num_aps, 0.5, "all"))
print("selected ", backhaul_load(sel, cfg.num_aps, 0.5, "selected"))
