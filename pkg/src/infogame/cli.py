"""Command-line front end.

    infogame run --preset troll --seed 42 --out out/
    infogame presets

Configuration precedence: preset < --config file < individual flags.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import metrics
from .engine import SimulationConfig, run, validate_config
from .model import ConfigError
from .presets import PRESETS

log = logging.getLogger("infogame")

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _u64(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="infogame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run one simulation and write CSV outputs")
    r.add_argument("--preset", choices=sorted(PRESETS))
    r.add_argument("--config", type=Path, help="JSON config (same schema as params.json)")
    r.add_argument("--seed", type=_u64)
    r.add_argument("--actors", type=int, dest="actor_count")
    r.add_argument("--assertions", type=int, dest="big_n")
    r.add_argument("--phi", type=float)
    r.add_argument("--delta", type=float)
    r.add_argument("--lambda", type=float, dest="lambda_")
    r.add_argument("--steps-per-actor", type=float, dest="steps_per_actor")
    r.add_argument("--sample-every", type=float, dest="sample_interval")
    r.add_argument("--snapshot-at", type=_float_list, dest="snapshot_times", metavar="T[,T...]")
    r.add_argument("--bins", type=int)
    r.add_argument("--out", type=Path, default=Path("out"))
    r.add_argument("--log-events", action="store_true", help="also write events.csv")
    r.add_argument("-v", "--verbose", action="store_true")

    sub.add_parser("presets", help="list built-in presets")
    return parser


def _read_config_file(path: Path) -> dict:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"cannot read config {path}: {exc.strerror}"]) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"]) from None
    if not isinstance(data, dict):
        raise ConfigError([f"{path}: top level must be a JSON object"])
    return data


def load_config(path: Optional[Path], overrides: dict, preset_name: Optional[str] = None) -> SimulationConfig:
    """Resolve preset, config file and flag overrides into a validated config.

    ``overrides`` uses flag destinations; ``None`` values are ignored.
    Without an explicit preset the troll preset is the base.
    """
    base = PRESETS[preset_name or "troll"].to_dict()
    if path is not None:
        file_data = _read_config_file(path)
        params = file_data.pop("params", None)
        base.update(file_data)
        if params is not None:
            if not isinstance(params, dict):
                raise ConfigError([f"{path}: params must be an object"])
            base["params"] = {**base["params"], **params}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    for key, name in (("phi", "phi"), ("delta", "delta"), ("lambda_", "lambda"), ("big_n", "big_n")):
        if key in overrides:
            base["params"][name] = overrides.pop(key)
    if "snapshot_times" in overrides:
        overrides["snapshot_times"] = list(overrides["snapshot_times"])
    base.update(overrides)
    config = SimulationConfig.from_dict(base)
    errors = validate_config(config)
    if errors:
        raise ConfigError(errors)
    return config


def _write_csv(path: Path, writer, records) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer(records, fh)


def _write_events(path: Path, summary) -> None:
    ev = summary.events
    n = summary.config.actor_count
    names = np.array(["Forward+Feedback", "Forward+NoFeedback", "Hold"])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("step,sim_time,sender_id,receiver_id,outcome\n")
        for st, s, r, o in zip(ev.step, ev.sender, ev.receiver, ev.outcome):
            fh.write(f"{st},{st / n:.9g},{s},{r},{names[o]}\n")


def cmd_run(args) -> int:
    overrides = {
        name: getattr(args, name)
        for name in (
            "seed", "actor_count", "big_n", "phi", "delta", "lambda_",
            "steps_per_actor", "sample_interval", "snapshot_times", "bins",
        )
    }
    config = load_config(args.config, overrides, args.preset)
    if args.seed is None and (args.config is None or "seed" not in _read_config_file(args.config)):
        # fresh entropy; recorded in params.json so the run can be repeated
        config = replace(config, seed=int(np.random.SeedSequence().entropy % 2**64))

    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    summary = run(config, log_events=args.log_events)

    (out / "params.json").write_text(json.dumps(config.to_dict(), indent=2) + "\n", encoding="utf-8")
    _write_csv(out / "timeseries.csv", metrics.write_timeseries, summary.quality)
    _write_csv(out / "hist.csv", metrics.write_histograms, summary.histograms)
    for t, records in summary.snapshots.items():
        _write_csv(out / f"snapshot_{t:.9g}.csv", metrics.write_snapshot, records)
    if args.log_events:
        _write_events(out / "events.csv", summary)

    final = summary.quality[-1]
    print(
        f"t={final.sim_time:.9g} mean_k={final.mean_k:.6f} mean_f_plus={final.mean_f_plus:.6f} "
        f"mean_f_minus={final.mean_f_minus:.6f} clamps={summary.clamp_count}"
    )
    return EXIT_OK


def cmd_presets(args) -> int:
    for name, cfg in PRESETS.items():
        p = cfg.params
        personas = ", ".join(
            f"{x.fraction:g}×{x.name}(κ={x.personality.kappa:g}, σ={x.personality.sigma:g}, π={x.personality.pi:g})"
            for x in cfg.personas
        )
        groups = ", ".join(f"{g.fraction:.3g}@k={g.k:g}" for g in cfg.initial_k_groups)
        print(
            f"{name}: actors={cfg.actor_count} phi={p.phi:g} delta={p.delta:g} lambda={p.lambda_:g} "
            f"N={p.big_n} steps_per_actor={cfg.steps_per_actor:g} personas=[{personas}] k_groups=[{groups}]"
            + (f" snapshots={list(cfg.snapshot_times)}" if cfg.snapshot_times else "")
        )
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliError as exc:
        print(f"infogame: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "presets":
            return cmd_presets(args)
        return cmd_run(args)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"infogame: config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - report any runtime failure with an exit code
        log.exception("run failed")
        print(f"infogame: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
