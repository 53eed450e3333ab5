"""``simulate`` command: configuration, campaign execution and artifact output."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import os
import sys
import tempfile
import time
from pathlib import Path
from xml.sax.saxutils import escape

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .campaign import run_realizations
from .channel import ConfigError, SimConfig
from .evaluation import LABELS, SCHEMES, CampaignStats, EvalConfig

SIM_KEYS = {f.name for f in dataclasses.fields(SimConfig)}
EVAL_KEYS = {f.name for f in dataclasses.fields(EvalConfig)}

SCENARIOS = {
    "fig2-m40": dict(num_aps=40, num_users=40),
    "fig2-m100": dict(num_aps=100, num_users=40),
    "fig2-m200": dict(num_aps=200, num_users=40),
    "fig4a": dict(num_aps=100, num_users=40, r0=0.5),
    "fig4b": dict(num_aps=200, num_users=40, r0=0.5),
    "fig5a": dict(num_aps=100, num_users=40, rho=1 / 8),
    "fig5b": dict(num_aps=200, num_users=40, rho=1 / 8),
    "fig5c": dict(num_aps=200, num_users=40, rho=1 / 40),
}

EXIT_CONFIG, EXIT_IO, EXIT_RUNTIME = 2, 3, 4


def build_configs(values: dict) -> tuple[SimConfig, EvalConfig]:
    unknown = sorted(set(values) - SIM_KEYS - EVAL_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    for key in ("num_aps", "num_users"):
        if key not in values:
            raise ConfigError(f"{key} is required")
    sim = SimConfig(**{k: v for k, v in values.items() if k in SIM_KEYS})
    ev = EvalConfig(**{k: v for k, v in values.items() if k in EVAL_KEYS})
    return sim, ev


def read_config_file(path) -> dict:
    """Key/value config document. A run manifest is accepted too: its
    ``[config]`` table holds the resolved values of the run."""
    with open(path, "rb") as fh:
        try:
            doc = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    if set(doc) == {"config", "run", "checksums"}:
        return doc["config"]
    return doc


def parse_config(path, scenario: str | None = None, overrides: dict | None = None):
    """Resolve a config file (plus optional preset and overrides) to configs.

    Precedence, lowest first: built-in defaults, scenario preset, file,
    overrides.
    """
    values: dict = {}
    if scenario is not None:
        if scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}")
        values.update(SCENARIOS[scenario])
    if path is not None:
        values.update(read_config_file(path))
    values.update(overrides or {})
    return build_configs(values)


def fmt(x) -> str:
    """Shortest round-trip text for a CSV cell."""
    if isinstance(x, float):
        return repr(float(x))
    if hasattr(x, "item"):
        return fmt(x.item())
    return str(x)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, float):
        return repr(v)
    return str(v)


def manifest_toml(sim: SimConfig, ev: EvalConfig, run: dict, checksums: dict) -> str:
    lines = ["[config]"]
    for obj in (sim, ev):
        lines += [f"{f.name} = {_toml_value(getattr(obj, f.name))}" for f in dataclasses.fields(obj)]
    lines += ["", "[run]"]
    lines += [f"{k} = {_toml_value(v)}" for k, v in run.items()]
    lines += ["", "[checksums]"]
    lines += [f'"{name}" = "{digest}"' for name, digest in sorted(checksums.items())]
    return "\n".join(lines) + "\n"


_COLOURS = ("#1f4e9c", "#b22222", "#2e8b57", "#8b5a00", "#6a3d9a")


def render_cdf_svg(series: dict, title: str = "", xlabel: str = "", ylabel: str = "CDF",
                   width: int = 640, height: int = 420) -> str:
    """Step plot of empirical CDFs, one series per ``label -> (values, cdf)``."""
    if not series or any(len(v[0]) == 0 for v in series.values()):
        raise ValueError("cannot render an empty CDF table")
    left, right, top, bottom = 64, 150, 36, 52
    pw, ph = width - left - right, height - top - bottom
    xs = [float(x) for vals, _ in series.values() for x in vals]
    lo, hi = min(xs), max(xs)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.04 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    def sx(x):
        return left + (x - lo) / (hi - lo) * pw

    def sy(y):
        return top + (1.0 - y) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + pw / 2:.2f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for k in range(6):
        y = k / 5
        out.append(f'<line x1="{left - 4}" y1="{sy(y):.2f}" x2="{left}" y2="{sy(y):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{sy(y) + 4:.2f}" text-anchor="end">{y:.1f}</text>')
        x = lo + (hi - lo) * k / 5
        out.append(f'<line x1="{sx(x):.2f}" y1="{top + ph}" x2="{sx(x):.2f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{sx(x):.2f}" y="{top + ph + 18}" text-anchor="middle">{x:.3g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {top + ph / 2:.2f})">{escape(ylabel)}</text>')
    for n, (label, (vals, cdf)) in enumerate(series.items()):
        colour = _COLOURS[n % len(_COLOURS)]
        pts = [(sx(lo), sy(0.0))]
        prev = 0.0
        for x, y in zip(vals, cdf):
            pts.append((sx(float(x)), sy(prev)))
            pts.append((sx(float(x)), sy(float(y))))
            prev = float(y)
        pts.append((sx(hi), sy(prev)))
        d = " ".join(f"{'M' if i == 0 else 'L'}{x:.2f},{y:.2f}" for i, (x, y) in enumerate(pts))
        out.append(f'<path d="{d}" fill="none" stroke="{colour}" stroke-width="1.8"/>')
        ly = top + 16 + 20 * n
        lx = left + pw + 14
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{colour}" stroke-width="1.8"/>')
        out.append(f'<text x="{lx + 30}" y="{ly + 4}">{escape(str(label))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def campaign_tables(outcomes, stats: CampaignStats) -> dict[str, str]:
    """CSV documents keyed by file name."""
    tables = {}
    v, c = stats.rank_cdf()
    tables["rank-cdf.csv"] = csv_text(["m_rank", "cdf"], zip(v.astype(int), c))
    rows = []
    for s in SCHEMES:
        v, c = stats.outage_cdf(s)
        rows += [(s, int(x), y) for x, y in zip(v, c)]
    tables["outage-cdf.csv"] = csv_text(["scheme", "n_outage", "cdf"], rows)
    rows = []
    for s in SCHEMES:
        v, c = stats.throughput_cdf(s)
        rows += [(s, x, y) for x, y in zip(v, c)]
    tables["throughput-cdf.csv"] = csv_text(["scheme", "rate", "cdf"], rows)
    first = outcomes[0]
    tables["rates-example.csv"] = csv_text(
        ["position", "cnf", "mrc", "sc"],
        ((i + 1, *(first.rates[s][i] for s in SCHEMES)) for i in range(stats.num_users)))
    tables["realizations.csv"] = csv_text(
        ["realization", "m_rank"] + [f"n_outage_{s}" for s in SCHEMES]
        + [f"throughput_{s}" for s in SCHEMES] + ["backhaul_all", "backhaul_selected"],
        ((o.index, o.m_rank, *(o.n_outage[s] for s in SCHEMES), *(o.throughput[s] for s in SCHEMES),
          o.backhaul_all, o.backhaul_selected) for o in outcomes))
    return tables


def campaign_plots(stats: CampaignStats, ev: EvalConfig) -> dict[str, str]:
    return {
        "rank-cdf.svg": render_cdf_svg({"C&F": stats.rank_cdf()}, "Rank of the equation matrix",
                                       "M_rank"),
        "outage-cdf.svg": render_cdf_svg({LABELS[s]: stats.outage_cdf(s) for s in SCHEMES},
                                         f"Outage users at R0 = {ev.r0:g}", "N_outage"),
        "throughput-cdf.svg": render_cdf_svg({LABELS[s]: stats.throughput_cdf(s) for s in SCHEMES},
                                             f"Per-user throughput at rho = {ev.rho:.4g}",
                                             "rate [bit/channel use]"),
    }


def run_campaign(sim: SimConfig, ev: EvalConfig, out_dir, workers: int = 1) -> dict[str, Path]:
    """Simulate every realization and write CSVs, SVGs and a manifest.

    The manifest records the resolved config, run metadata and a sha256 per
    output; passing it back as ``--config`` repeats the run exactly.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise PermissionError(f"output directory {out} is not writable")
    start = time.perf_counter()
    outcomes = run_realizations(sim, ev, workers)
    stats = CampaignStats.from_outcomes(outcomes, sim.num_users)
    docs = campaign_tables(outcomes, stats)
    docs.update(campaign_plots(stats, ev))
    paths = {}
    for name, text in docs.items():
        write_atomic(out / name, text)
        paths[name] = out / name
    run = {
        "code_version": __version__,
        "master_seed": sim.master_seed,
        "num_realizations": sim.num_realizations,
        "workers": workers,
        "duration_s": round(time.perf_counter() - start, 3),
        "full_rank_fraction": stats.full_rank_fraction,
    }
    run.update({f"outage_probability_{s}": stats.outage_probability[s] for s in SCHEMES})
    checksums = {name: hashlib.sha256(text.encode()).hexdigest() for name, text in docs.items()}
    write_atomic(out / "manifest.toml", manifest_toml(sim, ev, run, checksums))
    paths["manifest.toml"] = out / "manifest.toml"
    return paths


def _parser():
    p = argparse.ArgumentParser(prog="simulate",
                                description="Compute-and-forward cell-free Monte-Carlo campaign.")
    p.add_argument("--config", type=Path, help="TOML key/value config file")
    p.add_argument("--scenario", choices=sorted(SCENARIOS), help="named preset (file values override)")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--realizations", type=int, help="number of channel realizations")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", type=Path, default=Path("out"))
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.realizations is not None:
        overrides["num_realizations"] = args.realizations
    try:
        if args.config is None and args.scenario is None:
            raise ConfigError("give --config, --scenario, or both")
        if args.workers < 1:
            raise ConfigError(f"workers={args.workers} violates >= 1")
        sim, ev = parse_config(args.config, args.scenario, overrides)
    except FileNotFoundError as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, TypeError) as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        paths = run_campaign(sim, ev, args.out_dir, args.workers)
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # component failure
        print(f"error[runtime]: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for name in sorted(paths):
        print(paths[name])
    return 0


if __name__ == "__main__":
    sys.exit(main())
