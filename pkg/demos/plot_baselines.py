"""
Baselines
=========

"""

import numpy as np
from cfmimo import SimConfig, draw_realization, mrc_rates, smallcell_assign, smallcell_rates, symmetric_rate

cfg = SimConfig(num_aps=100, num_users=40)
ch, sched = draw_realization(cfg, 0)

mrc = mrc_rates(ch)

# small cells: users in random order grab their strongest free AP
ap_of_user = smallcell_assign(ch, sched)
sc = smallcell_rates(ch, ap_of_user)

print("         min    median  max")
for name, r in (("MRC", mrc), ("SC", sc)):
    print("%-5s %7.3f %7.3f %7.3f" % (name, symmetric_rate(r), np.median(r), r.max()))
