"""
Drawing one network
===================

Place APs and users in the square, then look at the gain matrix.
"""

import numpy as np
from cfmimo import SimConfig, draw_realization, pathloss_db, noise_power_w

cfg = SimConfig(num_aps=100, num_users=40)

# every realization index owns its own random streams
ch, _ = draw_realization(cfg, 0)
print("gain matrix", ch.gains.shape, "SNR (dB) %.1f" % (10 * np.log10(ch.snr)))

# %%
# Pathloss is flat up to 10 m, then slope 2 up to 50 m, then slope 3.5.
for d in (1, 10, 30, 50, 200, 1000):
    print("%5d m  %6.1f dB" % (d, pathloss_db(d, cfg)))

print("noise %.1f dBm" % (10 * np.log10(noise_power_w(cfg) * 1e3)))

# %%
# Received SNR of each user at its strongest AP. Shadowing spreads it over
# tens of dB.
best = (np.abs(ch.gains) ** 2).max(axis=0) * ch.snr
print("strongest-AP SNR per user (dB):")
print(np.round(np.sort(10 * np.log10(best)), 1))
