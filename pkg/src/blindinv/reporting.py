"""Report emission (CSV tables, SVG overlays) and config-file parsing.

CSV values are printed with 17 significant digits so a re-parse reproduces
the in-memory doubles exactly; identical configs and seeds therefore yield
byte-identical CSV files.
"""

from __future__ import annotations

import dataclasses
import json
import os

from .basis import evaluate_on_grid
from .bench import (
    ExperimentConfig,
    ExperimentReport,
    deconv62_config,
    heat61_config,
)
from .errors import ConfigError

PLOT_GRID_POINTS = 512


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_rmise_csv(report: ExperimentReport, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("eps,delta,rmise_post,rmise_galerkin,rmse_theta,n_mc\n")
        for c in report.cells:
            fh.write(
                f"{_fmt(c.eps)},{_fmt(c.delta)},{_fmt(c.rmise_post)},"
                f"{_fmt(c.rmise_galerkin)},{_fmt(c.rmse_theta)},{c.n_mc}\n"
            )


def write_lepski_hist_csv(report: ExperimentReport, path) -> None:
    counts = {}
    for c in report.cells:
        for level, n in (c.lepski_counts or {}).items():
            counts[level] = counts.get(level, 0) + n
    with open(path, "w", newline="") as fh:
        fh.write("level,count\n")
        for level in sorted(counts):
            fh.write(f"{level},{counts[level]}\n")


def write_replications_csv(report: ExperimentReport, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("eps,delta,rep,seed,level,err_post,err_galerkin,theta_err\n")
        for c in report.cells:
            for r in c.records:
                fh.write(
                    f"{_fmt(c.eps)},{_fmt(c.delta)},{r.rep},{r.seed},{r.level},"
                    f"{_fmt(r.err_post)},{_fmt(r.err_galerkin)},{_fmt(r.theta_err)}\n"
                )


def _plot_cell(cell, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .basis import CoefficientVector

    p = cell.plot_payload
    truth = evaluate_on_grid(p["truth"], PLOT_GRID_POINTS)
    post = evaluate_on_grid(p["post_mean"], PLOT_GRID_POINTS)
    gal = evaluate_on_grid(p["galerkin"], PLOT_GRID_POINTS)
    fig, ax = plt.subplots(figsize=(6, 4))
    basis = p["post_mean"].basis
    level = p["post_mean"].level
    for draw in p["draws"]:
        d = evaluate_on_grid(CoefficientVector(basis, level, draw), PLOT_GRID_POINTS)
        ax.plot(d[:, 0], d[:, 1], color="red", lw=0.4, ls=":", alpha=0.5)
    ax.plot(truth[:, 0], truth[:, 1], "k-", lw=1.5, label="truth")
    ax.plot(gal[:, 0], gal[:, 1], "b-", lw=1.2, label="projection estimator")
    ax.plot(post[:, 0], post[:, 1], "r-", lw=1.2, label="posterior mean")
    ax.set_xlabel("x")
    ax.set_title(f"eps={cell.eps:g}, delta={cell.delta:g}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def emit_report(report: ExperimentReport, out_dir, formats=("csv", "svg")) -> list:
    """Write rmise.csv, lepski_hist.csv, per_replication.csv, report.json and
    one SVG overlay per cell. Returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if "csv" in formats:
        for name, writer in [
            ("rmise.csv", write_rmise_csv),
            ("lepski_hist.csv", write_lepski_hist_csv),
            ("per_replication.csv", write_replications_csv),
        ]:
            path = os.path.join(out_dir, name)
            writer(report, path)
            written.append(path)
        meta = {
            "preset": report.preset,
            "partial": report.partial,
            "wall_clock_seconds": report.wall_clock,
            "config": {
                k: v for k, v in dataclasses.asdict(report.config).items()
            },
        }
        path = os.path.join(out_dir, "report.json")
        with open(path, "w") as fh:
            json.dump(meta, fh, indent=1, sort_keys=True, default=str)
        written.append(path)
    if "svg" in formats:
        for c in report.cells:
            if c.plot_payload is None:
                continue
            path = os.path.join(out_dir, f"cell_eps{c.eps:g}_delta{c.delta:g}.svg")
            _plot_cell(c, path)
            written.append(path)
    return written


# --- flat key = value config files -------------------------------------------

_LIST_KEYS = {"eps_grid", "delta_grid"}
_FLOAT_KEYS = {
    "tau_sq", "sigma_theta_sq", "proposal_sd", "galerkin_tau", "delta_tune",
    "s0", "t_ill", "grid_base", "exponent_override", "t_time", "theta0",
    "laplace_h",
}
_INT_KEYS = {"n_mc", "base_seed", "burn_in", "n_keep", "thin", "dim_d",
             "n_sim_factor", "workers"}
_BOOL_KEYS = {"adapt_proposal"}
_STR_KEYS = {"preset", "output_dir"}


def parse_config_file(path) -> dict:
    """Parse a flat `key = value` file into config overrides."""
    overrides = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected `key = value`")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            try:
                if key in _LIST_KEYS:
                    overrides[key] = tuple(
                        float(v) for v in value.split(",") if v.strip()
                    )
                elif key in _FLOAT_KEYS:
                    overrides[key] = None if value.lower() == "none" else float(value)
                elif key in _INT_KEYS:
                    overrides[key] = int(value)
                elif key in _BOOL_KEYS:
                    if value.lower() not in ("true", "false"):
                        raise ValueError(value)
                    overrides[key] = value.lower() == "true"
                elif key in _STR_KEYS:
                    overrides[key] = value
                else:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return overrides


def config_from_overrides(overrides: dict) -> ExperimentConfig:
    preset = overrides.pop("preset", None)
    if preset == "heat61":
        cfg = heat61_config(**overrides)
    elif preset == "deconv62":
        cfg = deconv62_config(**overrides)
    else:
        raise ConfigError(f"config must set preset to heat61 or deconv62, got {preset!r}")
    cfg.validate()
    return cfg
