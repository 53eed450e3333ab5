"""End-to-end acceptance checks, one test and one PASS/FAIL line per criterion.

The three full campaigns (L = 40, 200 realizations, seed 0) are computed once
per module and shared by the rank, outage and throughput criteria.
"""
import math
import time

import numpy as np
import pytest

from cfmimo.campaign import run_realizations
from cfmimo.cli import SCENARIOS, main, parse_config
from cfmimo.cnf import (alpha_opt, best_coeff_search, brute_force_best, canonical,
                        computation_rate, effective_noise_variance, prune_users, round_gauss)
from cfmimo.evaluation import CampaignStats
from cfmimo.exactrank import rank
from cfmimo.recovery import EquationSet, exhaustive_select, greedy_select

from conftest import crandn, random_gauss_matrix, rational_rank

pytestmark = pytest.mark.slow

CSVS = ("rank-cdf.csv", "outage-cdf.csv", "throughput-cdf.csv", "rates-example.csv",
        "realizations.csv")


@pytest.fixture
def report(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        return ok
    return emit


@pytest.fixture(scope="module")
def campaigns():
    out, seconds = {}, 0.0
    for m in (40, 100, 200):
        sim, ev = parse_config(None, f"fig2-m{m}", {"master_seed": 0, "num_realizations": 200})
        start = time.perf_counter()
        outcomes = run_realizations(sim, ev)
        seconds += time.perf_counter() - start
        out[m] = CampaignStats.from_outcomes(outcomes, sim.num_users)
    return out, seconds


def test_criterion_1_rank_statistics(campaigns, report):
    stats, seconds = campaigns
    checks = {
        40: stats[40].full_rank_fraction <= 0.05,
        100: 0.05 <= stats[100].full_rank_fraction <= 0.50 and stats[100].m_rank.min() >= 30,
        200: stats[200].full_rank_fraction >= 0.85 and stats[200].m_rank.min() >= 37,
    }
    timely = seconds <= 600
    detail = "; ".join(
        f"M={m} full-rank {stats[m].full_rank_fraction:.3f} min {stats[m].m_rank.min()} "
        f"({'ok' if checks[m] else 'out of band'})" for m in checks) + f"; {seconds:.0f} s"
    ok = all(checks.values()) and timely
    report(1, ok, detail)
    assert ok, detail


def test_criterion_2_outage_ordering(campaigns, report):
    stats, _ = campaigns
    parts, ok = [], True
    for m in (100, 200):
        med = {s: float(np.median(stats[m].n_outage[s])) for s in ("cnf", "mrc", "sc")}
        ok &= med["cnf"] < med["mrc"] and med["cnf"] < med["sc"]
        parts.append(f"M={m} median C&F/MRC/SC {med['cnf']:g}/{med['mrc']:g}/{med['sc']:g}")
    free = float(np.mean(stats[200].n_outage["cnf"] == 0))
    ok &= free >= 0.5
    detail = "; ".join(parts) + f"; M=200 outage-free C&F {free:.3f}"
    report(2, ok, detail)
    assert ok, detail


def test_criterion_3_throughput_advantage(campaigns, report):
    stats, _ = campaigns
    med = {s: float(np.median(stats[100].throughput[s])) for s in ("cnf", "mrc", "sc")}
    ok = med["cnf"] >= 1.5 * med["mrc"] and med["cnf"] >= 2.0 * med["sc"]
    detail = (f"median C&F {med['cnf']:.3f}, {med['cnf'] / med['mrc']:.2f}x MRC, "
              f"{med['cnf'] / med['sc']:.2f}x SC")
    report(3, ok, detail)
    assert ok, detail


def test_criterion_4_max_min_optimality(report):
    rng = np.random.default_rng(4)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(100):
        m, l = int(rng.integers(1, 11)), int(rng.integers(1, 5))
        # equations as the search would produce them, on random channels
        g = crandn(rng, m, l) * 10 ** rng.uniform(-1.5, 0.5, (m, l))
        eqs = EquationSet([best_coeff_search(g[i], 10 ** rng.uniform(0, 2), ap_index=i)
                           for i in range(m)])
        if abs(greedy_select(eqs).min_rate - exhaustive_select(eqs).min_rate) > 1e-12:
            mismatches += 1
    seconds = time.perf_counter() - start
    ok = mismatches == 0 and seconds <= 60
    detail = f"{mismatches} mismatches in 100 instances, {seconds:.1f} s"
    report(4, ok, detail)
    assert ok, detail


def test_criterion_5_search_matches_oracle(report):
    rng = np.random.default_rng(5)
    start = time.perf_counter()
    agree = exceed = 0
    for _ in range(200):
        l = int(rng.integers(1, 4))
        g = crandn(rng, l) * 10 ** rng.uniform(-0.5, 0.3, l)
        snr = 10 ** rng.uniform(0, 2)
        assert prune_users(g, snr).l_eff <= 3
        fast, exact = best_coeff_search(g, snr).rate, brute_force_best(g, snr).rate
        agree += abs(fast - exact) <= 1e-9
        exceed += fast > exact + 1e-9
    seconds = time.perf_counter() - start
    ok = agree >= 190 and exceed == 0 and seconds <= 120
    detail = f"{agree}/200 agree within 1e-9, {exceed} exceed the oracle, {seconds:.1f} s"
    report(5, ok, detail)
    assert ok, detail


def test_criterion_6_closed_form_identities(report):
    rng = np.random.default_rng(6)
    bad = {"a": 0, "b": 0, "c": 0}
    for _ in range(1000):
        l = int(rng.integers(1, 6))
        g = crandn(rng, l) * 10 ** rng.uniform(-1, 0.5, l)
        snr = 10 ** rng.uniform(-1, 3)
        a = round_gauss(crandn(rng, l) * 2)
        if not a.any():
            a[0] = 1
        # (a) rate from the effective noise at alpha_opt
        var = effective_noise_variance(alpha_opt(g, a, snr), g, a, snr, 1.0)
        bad["a"] += abs(max(0.0, math.log2(snr / var)) - computation_rate(g, a, snr)) > 1e-9
        # (b) unit vector against the single-user SINR formula
        k = int(rng.integers(0, l))
        e = np.zeros(l)
        e[k] = 1
        interference = float(np.sum(np.abs(np.delete(g, k)) ** 2))
        ref = math.log2(1 + snr * abs(g[k]) ** 2 / (1 + snr * interference))
        bad["b"] += abs(computation_rate(g, e, snr) - ref) > 1e-12
        # (c) units leave the rate and the canonical maximiser unchanged
        best = best_coeff_search(g, snr)
        u = (1, -1, 1j, -1j)[int(rng.integers(0, 4))]
        rotated = best.vector * u
        bad["c"] += (abs(computation_rate(g, rotated, snr) - best.rate) > 1e-12
                     or not np.array_equal(canonical(rotated), best.vector)
                     or abs(computation_rate(g, u * a, snr) - computation_rate(g, a, snr)) > 1e-12)
    ok = not any(bad.values())
    detail = ", ".join(f"({k}) {v}/1000 violations" for k, v in bad.items())
    report(6, ok, detail)
    assert ok, detail


def test_criterion_7_pruning_soundness(report):
    rng = np.random.default_rng(7)
    violations = checked = 0
    for _ in range(1000):
        snr = 10 ** rng.uniform(-2, 6)
        # magnitudes concentrated around the pruning threshold
        mag = rng.uniform(0, 1.2, 100) * 0.5 / math.sqrt(snr)
        g = mag * np.exp(2j * math.pi * rng.random(100))
        pruned = np.setdiff1d(np.arange(100), prune_users(g, snr).active)
        alpha = math.sqrt(snr) * np.sqrt(rng.random(pruned.size)) * np.exp(2j * math.pi * rng.random(pruned.size))
        edge = rng.random(pruned.size) < 0.2
        alpha[edge] = math.sqrt(snr) * np.exp(1j * math.pi / 4)  # |alpha| at the bound
        violations += int(np.count_nonzero(round_gauss(alpha * g[pruned])))
        checked += 100
    ok = violations == 0 and checked == 100_000
    detail = f"{violations} violations in {checked} samples"
    report(7, ok, detail)
    assert ok, detail


def test_criterion_8_determinism(tmp_path, report):
    mismatched = []
    for name in SCENARIOS:
        args = ["--scenario", name, "--seed", "11", "--realizations", "8"]
        for workers in (1, 8):
            code = main(args + ["--workers", str(workers), "--out-dir", str(tmp_path / name / str(workers))])
            assert code == 0
        for f in CSVS:
            if (tmp_path / name / "1" / f).read_bytes() != (tmp_path / name / "8" / f).read_bytes():
                mismatched.append(f"{name}/{f}")
    ok = not mismatched
    detail = f"{len(SCENARIOS)} scenarios, 1 vs 8 workers, mismatched files: {mismatched or 'none'}"
    report(8, ok, detail)
    assert ok, detail


def test_criterion_9_exact_rank(report):
    rng = np.random.default_rng(9)
    wrong = 0
    for i in range(200):
        r, c = int(rng.integers(1, 13)), int(rng.integers(1, 9))
        a = random_gauss_matrix(rng, r, c, 5, density=rng.uniform(0.3, 1.0))
        if i % 2:
            # dependent rows built from a few generators, entries kept within 5
            k = int(rng.integers(1, max(2, min(r, c))))
            basis = random_gauss_matrix(rng, k, c, 1)
            mix = random_gauss_matrix(rng, r, k, 1)
            a = np.clip((mix @ basis).real, -5, 5) + 1j * np.clip((mix @ basis).imag, -5, 5)
        wrong += rank(a) != rational_rank(a)
    ok = wrong == 0
    detail = f"{200 - wrong}/200 ranks match the rational oracle"
    report(9, ok, detail)
    assert ok, detail
