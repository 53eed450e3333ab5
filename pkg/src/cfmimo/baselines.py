"""MRC and small-cell reference schemes."""
from __future__ import annotations

import numpy as np

from .channel import ChannelRealization, ConfigError


def mrc_rates(ch: ChannelRealization) -> np.ndarray:
    """Per-user rates of cell-wide maximum ratio combining.

    With ``g_l`` the column of user ``l`` across all APs, the SINR is
    ``SNR ||g_l||^4 / (||g_l||^2 + SNR sum_{i != l} |g_i^H g_l|^2)``.
    """
    g = ch.gains
    gram = g.conj().T @ g  # (L, L), gram[i, l] = g_i^H g_l
    power = np.real(np.diag(gram))
    cross = np.abs(gram) ** 2
    np.fill_diagonal(cross, 0.0)
    interference = cross.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        sinr = ch.snr * power ** 2 / (power + ch.snr * interference)
    sinr = np.where(power > 0, sinr, 0.0)
    return np.log2(1.0 + sinr)


def smallcell_assign(ch: ChannelRealization, rng: np.random.Generator) -> np.ndarray:
    """Exclusive AP for each user: users in random priority order each take
    the strongest AP not yet taken. Returns ``ap_of_user`` (length L)."""
    m, l = ch.gains.shape
    if m < l:
        raise ConfigError(f"small cells need num_aps >= num_users, got {m} < {l}")
    strength = np.abs(ch.gains)
    taken = np.zeros(m, dtype=bool)
    ap_of_user = np.empty(l, dtype=np.int64)
    for user in rng.permutation(l):
        col = np.where(taken, -np.inf, strength[:, user])
        ap = int(np.argmax(col))
        taken[ap] = True
        ap_of_user[user] = ap
    return ap_of_user


def smallcell_rates(ch: ChannelRealization, ap_of_user) -> np.ndarray:
    g2 = np.abs(ch.gains[np.asarray(ap_of_user)]) ** 2  # (L, L): row = serving AP of user
    own = np.diag(g2).copy()
    np.fill_diagonal(g2, 0.0)
    other = g2.sum(axis=1)
    return np.log2(1.0 + ch.snr * own / (1.0 + ch.snr * other))


def symmetric_rate(rates) -> float:
    rates = np.asarray(rates, dtype=float)
    if rates.size == 0:
        raise ValueError("symmetric rate of an empty rate list")
    return float(rates.min())
