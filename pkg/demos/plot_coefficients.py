"""
Choosing an equation at one AP
==============================

"""

import numpy as np
from cfmimo import best_coeff_search, brute_force_best, computation_rate, prune_users

rng = np.random.default_rng(1)
g = (rng.standard_normal(3) + 1j * rng.standard_normal(3)) / np.sqrt(2)
snr = 50.0

# Users whose channel is too weak can never get a nonzero coefficient, so
# they are dropped before the search and their power counts as noise.
print(prune_users(g, snr))

fast = best_coeff_search(g, snr)
exact = brute_force_best(g, snr)
print("search    ", fast.vector, "rate %.4f" % fast.rate)
print("brute     ", exact.vector, "rate %.4f" % exact.rate)

# %%
# Decoding a single user is always available. The integer combination has to
# beat the best of these.
for l in range(3):
    e = np.eye(3)[l]
    print("user %d alone: %.4f" % (l, computation_rate(g, e, snr)))

# %%
# At high SNR the best vector lines up with the (rounded) channel direction.
g2 = np.array([2 + 1j, -1 + 3j, 1])
print(best_coeff_search(g2, 1e6).vector)
