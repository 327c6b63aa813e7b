"""Command line interface.

    blindinv heat   --eps 1e-6 --delta 1e-6 --n-mc 500 --seed 42 --out DIR
    blindinv deconv --eps 1e-2 --delta 1e-2 --n-mc 500 --seed 42 --out DIR
    blindinv custom --config FILE --out DIR
    blindinv replay --preset heat61 --eps 1e-6 --delta 1e-6 --rep 3 --seed 42

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .bench import (
    deconv62_config,
    heat61_config,
    run_deconv_replication,
    run_experiment,
    run_heat_replication,
)
from .errors import BlindinvError, ConfigError
from .reporting import config_from_overrides, emit_report, parse_config_file


def _grid(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from exc


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=_grid, help="noise level(s), comma separated")
    p.add_argument("--delta", type=_grid, help="parameter noise level(s)")
    p.add_argument("--n-mc", type=int, dest="n_mc", help="Monte Carlo replications")
    p.add_argument("--seed", type=int, dest="base_seed", help="base seed")
    p.add_argument("--tau-sq", type=float, dest="tau_sq", help="prior variance for f")
    p.add_argument("--sigma-sq", type=float, dest="sigma_theta_sq",
                   help="prior variance for the operator parameter")
    p.add_argument("--burn-in", type=int, dest="burn_in")
    p.add_argument("--n-keep", type=int, dest="n_keep")
    p.add_argument("--thin", type=int)
    p.add_argument("--delta-tune", type=float, dest="delta_tune",
                   help="adaptive-selection threshold constant")
    p.add_argument("--workers", type=int, help="parallel replication workers")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--out", help="output directory (reports and plots)")
    p.add_argument("--no-plots", action="store_true", help="skip SVG emission")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blindinv", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("heat", "backward heat equation experiment"),
        ("deconv", "blind deconvolution experiment"),
        ("custom", "experiment fully described by a config file"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
    rp = sub.add_parser("replay", help="re-run one replication by seed")
    rp.add_argument("--preset", required=True, choices=["heat61", "deconv62"])
    rp.add_argument("--eps", type=float, required=True)
    rp.add_argument("--delta", type=float, required=True)
    rp.add_argument("--rep", type=int, default=0)
    rp.add_argument("--seed", type=int, dest="base_seed", default=0)
    rp.add_argument("--tau-sq", type=float, dest="tau_sq")
    rp.add_argument("--delta-tune", type=float, dest="delta_tune")
    return parser


def _collect_overrides(args) -> dict:
    overrides = {}
    if args.config:
        overrides.update(parse_config_file(args.config))
    mapping = {
        "eps": "eps_grid",
        "delta": "delta_grid",
        "n_mc": "n_mc",
        "base_seed": "base_seed",
        "tau_sq": "tau_sq",
        "sigma_theta_sq": "sigma_theta_sq",
        "burn_in": "burn_in",
        "n_keep": "n_keep",
        "thin": "thin",
        "delta_tune": "delta_tune",
        "workers": "workers",
        "out": "output_dir",
    }
    for attr, key in mapping.items():
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    return overrides


def _run_command(args) -> int:
    overrides = _collect_overrides(args)
    if args.command == "heat":
        overrides["preset"] = "heat61"
    elif args.command == "deconv":
        overrides["preset"] = "deconv62"
    elif "preset" not in overrides:
        raise ConfigError("custom runs need a config file that sets `preset`")
    cfg = config_from_overrides(overrides)
    report = run_experiment(cfg)
    for c in report.cells:
        line = (f"eps={c.eps:g} delta={c.delta:g} rmise_post={c.rmise_post:.4g} "
                f"rmise_galerkin={c.rmise_galerkin:.4g} rmse_theta={c.rmse_theta:.4g}")
        if c.lepski_counts:
            line += f" levels={dict(sorted(c.lepski_counts.items()))}"
        print(line)
    out = cfg.output_dir
    if out:
        formats = ("csv",) if args.no_plots else ("csv", "svg")
        for path in emit_report(report, out, formats=formats):
            print(f"wrote {path}")
    return 0


def _replay_command(args) -> int:
    overrides = {k: v for k, v in
                 [("base_seed", args.base_seed), ("tau_sq", args.tau_sq),
                  ("delta_tune", args.delta_tune)] if v is not None}
    if args.preset == "heat61":
        cfg = heat61_config(**overrides)
        record, _ = run_heat_replication(cfg, args.eps, args.delta, args.rep)
    else:
        cfg = deconv62_config(**overrides)
        record, _ = run_deconv_replication(cfg, args.eps, args.delta, args.rep)
    print(dataclasses.asdict(record))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            return _replay_command(args)
        return _run_command(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BlindinvError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
