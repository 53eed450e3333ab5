"""Compute-and-forward kernel for a single access point.

Everything here is a function of one AP's channel vector ``g`` (length L)
and the linear SNR ``P / sigma^2``. Coefficient vectors are Gaussian-integer
vectors; they are carried as tuples of :class:`GaussInt` and converted to
complex arrays for arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DEFAULT_PHASE_SAMPLES = 64
UNITS = (1, -1, 1j, -1j)


class InfeasibleError(RuntimeError):
    """Exhaustive search would exceed its candidate cap."""


class GaussInt(NamedTuple):
    re: int
    im: int

    def __complex__(self):
        return complex(self.re, self.im)


@dataclass(frozen=True)
class PruneResult:
    active: tuple[int, ...]
    snr_eff: float

    @property
    def l_eff(self) -> int:
        return len(self.active)


@dataclass(frozen=True)
class Equation:
    ap_index: int
    coeffs: tuple[GaussInt, ...]
    rate: float
    alpha: complex

    @property
    def vector(self) -> np.ndarray:
        return as_complex(self.coeffs)

    def is_unit_vector(self) -> bool:
        nz = [c for c in self.coeffs if c != (0, 0)]
        return len(nz) == 1 and abs(complex(nz[0])) == 1


def round_gauss(x):
    """Nearest Gaussian integer, component-wise, halves rounded away from zero."""
    x = np.asarray(x, dtype=complex)
    re = np.sign(x.real) * np.floor(np.abs(x.real) + 0.5)
    im = np.sign(x.imag) * np.floor(np.abs(x.imag) + 0.5)
    return re + 1j * im


def as_complex(a) -> np.ndarray:
    return np.array([complex(v) for v in a], dtype=complex)


def to_gauss(a) -> tuple[GaussInt, ...]:
    a = np.asarray(a, dtype=complex)
    re, im = np.rint(a.real), np.rint(a.imag)
    if np.any(re != a.real) or np.any(im != a.imag):
        raise ValueError("coefficients must be Gaussian integers")
    return tuple(GaussInt(int(r), int(i)) for r, i in zip(re, im))


def canonical(a) -> np.ndarray:
    """Rotate ``a`` by a unit so its first nonzero entry has re > 0, im >= 0."""
    a = np.asarray(a, dtype=complex)
    nz = np.flatnonzero(a)
    if nz.size == 0:
        return a
    lead = a[nz[0]]
    for u in UNITS:
        z = lead * u
        if z.real > 0 and z.imag >= 0:
            return a * u
    raise AssertionError("unreachable")


def _check(g, a):
    g = np.asarray(g, dtype=complex)
    a = np.asarray(a if isinstance(a, np.ndarray) else as_complex(a), dtype=complex)
    if g.shape != a.shape:
        raise ValueError(f"dimension mismatch: g has {g.shape}, a has {a.shape}")
    return g, a


def effective_noise_variance(alpha, g, a, p, sigma2) -> float:
    """Quantisation plus scaled thermal noise: ||alpha g - a||^2 P + |alpha|^2 sigma^2."""
    g, a = _check(g, a)
    resid = alpha * g - a
    return float(np.vdot(resid, resid).real * p + abs(alpha) ** 2 * sigma2)


def alpha_opt(g, a, snr) -> complex:
    """MMSE scaling factor ``SNR g^H a / (1 + SNR ||g||^2)``."""
    g, a = _check(g, a)
    if not np.any(a):
        raise ValueError("coefficient vector must be nonzero")
    return complex(snr * np.vdot(g, a) / (1.0 + snr * np.vdot(g, g).real))


def _rates(g, a, snr, outside=0.0):
    """Computation rates of the rows of ``a`` (shape (N, n)) for channel ``g``.

    ``g`` may be a sub-vector of the channel; ``outside`` is the power of the
    coordinates left out, where every row of ``a`` is zero. With ``g_perp`` the
    part of ``g`` orthogonal to ``a``,

        1 / (a^H M a) - 1 = SNR |a^H g|^2 / (||a||^4 (1 + SNR ||g_perp||^2)) + 1/||a||^2 - 1,

    which avoids cancellation when one user dominates and keeps full relative
    precision for tiny rates.
    """
    norm_a = np.einsum("nl,nl->n", a.conj(), a).real
    inner = a.conj() @ g
    perp = g[None, :] - (inner / norm_a)[:, None] * a
    perp2 = np.einsum("nl,nl->n", perp.conj(), perp).real + outside
    x = snr * np.abs(inner) ** 2 / (norm_a ** 2 * (1.0 + snr * perp2)) + (1.0 / norm_a - 1.0)
    return np.maximum(np.log1p(x) / math.log(2.0), 0.0)


def computation_rate(g, a, snr) -> float:
    """Achievable computation rate of coefficient vector ``a``, clamped at zero."""
    g, a = _check(g, a)
    if not np.any(a):
        raise ValueError("coefficient vector must be nonzero")
    return float(_rates(g, a[None, :], snr)[0])


def prune_users(g, snr, criterion: str = "magnitude") -> PruneResult:
    """Drop users whose coefficient is zero for every admissible scaling factor.

    ``criterion="magnitude"`` keeps ``l`` iff ``sqrt(SNR)|g_l| >= 1/2``, which
    is sound for every phase of alpha. ``"literal"`` keeps ``l`` iff
    ``round(sqrt(SNR) g_l) != 0`` component-wise. Pruned users' received power
    is moved into the noise to form the effective SNR.
    """
    g = np.asarray(g, dtype=complex)
    scaled = math.sqrt(snr) * g
    if criterion == "magnitude":
        keep = np.abs(scaled) >= 0.5
    elif criterion == "literal":
        keep = round_gauss(scaled) != 0
    else:
        raise ValueError(f"unknown pruning criterion {criterion!r}")
    interference = float(np.sum(np.abs(g[~keep]) ** 2))
    snr_eff = 1.0 / (1.0 / snr + interference)
    return PruneResult(tuple(int(i) for i in np.flatnonzero(keep)), snr_eff)


def _crossings(c, t_max):
    """Magnitudes t in (0, t_max] where a component of t*c hits a half-integer.

    ``c`` has shape (K, n) (one row per phase sample). Returns flat arrays
    (phase_index, t).
    """
    comps = np.concatenate([np.abs(c.real), np.abs(c.imag)], axis=1)
    counts = np.floor(t_max * comps + 0.5).astype(np.int64)
    counts[comps == 0] = 0
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64), np.empty(0)
    flat_counts = counts.ravel()
    owner = np.repeat(np.arange(flat_counts.size), flat_counts)
    starts = np.cumsum(flat_counts) - flat_counts
    j = np.arange(total) - np.repeat(starts, flat_counts)
    t = (j + 0.5) / comps.ravel()[owner]
    phase = owner // comps.shape[1]
    keep = t <= t_max
    return phase[keep], t[keep]


def best_coeff_search(g, snr, phase_samples: int = DEFAULT_PHASE_SAMPLES,
                      criterion: str = "magnitude", ap_index: int = 0,
                      refine_top: int = 4) -> Equation:
    """Best coefficient vector found by sweeping the scaling factor alpha.

    For each phase sample in [0, pi/2) the magnitude of alpha is swept over
    every critical point in (0, sqrt(SNR_eff)] where a component of
    ``alpha * g`` crosses a Gaussian-integer cell boundary; each distinct
    rounded vector is scored at its own optimal scaling. The best few are then
    polished by alternating ``alpha <- alpha_opt(a)``, ``a <- round(alpha g)``.
    The strongest single-user vector is always a candidate, so the result is
    never worse than small-cell access at this AP.
    """
    g = np.asarray(g, dtype=complex)
    L = g.size
    if not np.any(g):
        raise ValueError("channel vector must be nonzero")
    best_unit = np.zeros(L, dtype=complex)
    best_unit[int(np.argmax(np.abs(g)))] = 1.0
    pool = [best_unit[None, :]]

    pr = prune_users(g, snr, criterion)
    active = np.array(pr.active, dtype=np.int64)
    if active.size:
        h = g[active]
        outside = float(np.sum(np.abs(np.delete(g, active)) ** 2))
        t_max = math.sqrt(pr.snr_eff)
        theta = np.arange(phase_samples) * (np.pi / 2) / phase_samples
        c = np.exp(1j * theta)[:, None] * h[None, :]
        phase, t = _crossings(c, t_max)
        if t.size:
            order = np.lexsort((t, phase))
            phase, t = phase[order], t[order]
            # interval midpoints within each phase, plus the stretch up to t_max
            same = phase[1:] == phase[:-1]
            mid_t = np.concatenate([(t[1:] + t[:-1])[same] / 2, (t + t_max) / 2])
            mid_p = np.concatenate([phase[1:][same], phase])
            alpha = mid_t * np.exp(1j * theta[mid_p])
            cand = round_gauss(alpha[:, None] * h[None, :])
            cand = cand[np.any(cand != 0, axis=1)]
            if cand.size:
                rates = _rates(h, cand, snr, outside)
                top = np.argsort(-rates, kind="stable")[:refine_top]
                full = np.zeros((top.size, L), dtype=complex)
                full[:, active] = cand[top]
                pool.append(full)

    cands = np.concatenate(pool, axis=0)
    extra = []
    for a in cands:
        for _ in range(20):
            al = alpha_opt(g, a, snr)
            nxt = np.zeros(L, dtype=complex)
            if active.size:
                nxt[active] = round_gauss(al * g[active])
            if not np.any(nxt) or np.array_equal(nxt, a):
                break
            extra.append(nxt)
            a = nxt
    if extra:
        cands = np.concatenate([cands, np.array(extra)], axis=0)
    rates = _rates(g, cands, snr)
    best = canonical(cands[int(np.argmax(rates))])
    return Equation(ap_index, to_gauss(best), computation_rate(g, best, snr), alpha_opt(g, best, snr))


def _enumerate_ellipsoid(q, bound, cap):
    """All nonzero integer vectors v with v^T q v <= bound (Fincke-Pohst)."""
    n = q.shape[0]
    r = np.linalg.cholesky(q).T  # q = r^T r, r upper triangular
    diag = np.diag(r)
    mu = r / diag[:, None]
    found = []
    v = np.zeros(n, dtype=np.int64)

    def level(i, remaining):
        centre = -float(mu[i, i + 1:] @ v[i + 1:])
        radius = math.sqrt(max(remaining, 0.0)) / diag[i]
        lo, hi = math.ceil(centre - radius), math.floor(centre + radius)
        for x in range(lo, hi + 1):
            v[i] = x
            used = (diag[i] * (x - centre)) ** 2
            if used > remaining:
                continue
            if i == 0:
                if np.any(v):
                    found.append(v.copy())
                    if len(found) > cap:
                        raise InfeasibleError(f"more than {cap} candidates")
            else:
                level(i - 1, remaining - used)
        v[i] = 0

    level(n - 1, bound)
    return found


def brute_force_best(g, snr, cap: int = 2_000_000, ap_index: int = 0) -> Equation:
    """Exact maximiser of the computation rate by exhaustive enumeration.

    Only vectors with ``a^H M a < 1`` have positive rate; they are all
    enumerated as lattice points of that ellipsoid in the real 2L-dimensional
    representation. If there are none, the strongest unit vector is returned
    (rate 0).
    """
    g = np.asarray(g, dtype=complex)
    L = g.size
    h = math.sqrt(snr) * g
    m = np.eye(L) - np.outer(h, h.conj()) / (1.0 + np.vdot(h, h).real)
    q = np.block([[m.real, -m.imag], [m.imag, m.real]])
    q = (q + q.T) / 2
    pts = _enumerate_ellipsoid(q, 1.0 + 1e-9, cap)
    unit = np.zeros(L, dtype=complex)
    unit[int(np.argmax(np.abs(g)))] = 1.0
    cands = [unit]
    cands += [p[:L] + 1j * p[L:] for p in pts]
    cands = np.array(cands, dtype=complex)
    rates = _rates(g, cands, snr)
    best = canonical(cands[int(np.argmax(rates))])
    return Equation(ap_index, to_gauss(best), computation_rate(g, best, snr), alpha_opt(g, best, snr))


def ap_equations(gains, snr, phase_samples: int = DEFAULT_PHASE_SAMPLES,
                 criterion: str = "magnitude") -> list[Equation]:
    """Local best equation of every AP (rows of ``gains``)."""
    return [best_coeff_search(row, snr, phase_samples, criterion, ap_index=m)
            for m, row in enumerate(np.asarray(gains))]
