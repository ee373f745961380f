"""Command line entry point: ``fogplace {solve,compare,omega-study,sweep,gen}``.

Exit codes: 0 success, 2 invalid configuration, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Sequence

from . import lab
from .network import save_scenario, scenario_to_dict

log = logging.getLogger("fogplace")

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from exc


def _range(text: str) -> float | tuple[float, float]:
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return float(lo), float(hi)
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected R or R_lo:R_hi, got {text!r}") from exc


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON experiment config; flags override its values")
    p.add_argument("--scenario", help="scenario JSON file (instead of generating one)")
    p.add_argument("--fog", type=int, help="number of fog nodes")
    p.add_argument("--edge", type=int, help="number of edge nodes")
    p.add_argument("--range", type=_range, help="fog range R, or R_lo:R_hi for uniform ranges")
    p.add_argument("--width", type=float)
    p.add_argument("--height", type=float)
    p.add_argument("--capacity", type=int, help="max edge nodes assigned per fog node")
    p.add_argument("--scenario-seed", type=int, help="seed of the scenario generator")
    p.add_argument("--algo", type=lambda s: [a.strip().lower() for a in s.split(",") if a.strip()],
                   help="mpa|pso|sca|hho, comma separated where several are allowed")
    p.add_argument("--pop", type=int, help="population size")
    p.add_argument("--iters", type=int, help="iteration budget t_max")
    p.add_argument("--omega", type=float, help="connectivity weight in [0, 1]")
    p.add_argument("--seeds", type=_ints, help="comma separated optimiser seeds")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.add_argument("--out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fogplace", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="one algorithm, one seed, one scenario")
    _add_common(p)
    p = sub.add_parser("compare", help="compare algorithms over several seeds")
    _add_common(p)
    p = sub.add_parser("omega-study", help="MPA runs across connectivity weights")
    _add_common(p)
    p.add_argument("--omegas", type=_floats, default=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    p = sub.add_parser("sweep", help="MPA runs across fog count, edge count or range")
    _add_common(p)
    p.add_argument("--axis", required=True, choices=lab.SWEEP_AXES)
    p.add_argument("--values", type=_floats, required=True)
    p = sub.add_parser("gen", help="generate a scenario JSON")
    _add_common(p)
    return parser


def config_from_args(args: argparse.Namespace) -> lab.ExperimentConfig:
    doc: dict[str, Any] = {}
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"{args.config}: config must be a JSON object")
    cfg = lab.ExperimentConfig.from_dict(doc)

    gen_over = {
        "n_fog": args.fog,
        "n_edge": args.edge,
        "range": args.range,
        "width": args.width,
        "height": args.height,
        "capacity": args.capacity,
        "seed": args.scenario_seed,
    }
    gen_over = {k: v for k, v in gen_over.items() if v is not None}
    over = {
        "algorithms": tuple(args.algo) if args.algo else None,
        "population": args.pop,
        "t_max": args.iters,
        "omega": args.omega,
        "seeds": tuple(args.seeds) if args.seeds else None,
        "workers": args.workers,
        "out_dir": args.out,
        "scenario_path": args.scenario,
    }
    over = {k: v for k, v in over.items() if v is not None}
    if gen_over:
        over["generator"] = replace(cfg.generator, **gen_over)
    return replace(cfg, **over)


def _out_dir(cfg: lab.ExperimentConfig) -> Path | None:
    return Path(cfg.out_dir) if cfg.out_dir else None


def _cmd_gen(cfg, args) -> None:
    scenario = lab.resolve_scenario(cfg)
    out = _out_dir(cfg)
    if out is None:
        json.dump(scenario_to_dict(scenario), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        path = out if out.suffix == ".json" else out / "scenario.json"
        save_scenario(scenario, path)
        print(path)


def _cmd_solve(cfg, args) -> None:
    scenario = lab.resolve_scenario(cfg)
    algo, seed = cfg.algorithms[0], cfg.seeds[0]
    rec = lab.run_algorithm(scenario, algo, omega=cfg.omega, population=cfg.population, t_max=cfg.t_max, seed=seed)
    print(
        f"{algo} seed={seed} f={rec.final.f:.4f} zeta={rec.final.zeta}/{rec.n} "
        f"({rec.final_zeta_pct:.2f}%) phi={rec.final.phi}/{rec.m} ({rec.final_phi_pct:.2f}%)"
    )
    out = _out_dir(cfg)
    if out is not None:
        save_scenario(scenario, out / "scenario.json")
        lab.write_convergence_csv(rec, out / f"convergence_{algo}_seed{seed}.csv")
        lab.write_summary_csv([rec], out / "summary.csv")
        placement = [[float(rec.best_position[2 * i]), float(rec.best_position[2 * i + 1])] for i in range(rec.n)]
        (out / "placement.json").write_text(json.dumps({"fog_locations": placement}, indent=2) + "\n")
        lab.write_metadata(out / "metadata.json", {"config": cfg.to_dict(), "wall_time_s": rec.wall_time})


def _cmd_compare(cfg, args) -> None:
    result = lab.run_comparison(cfg)
    print(f"{'algorithm':<10}{'median_f':>10}{'mean_f':>10}{'zeta%':>9}{'phi%':>9}{'it95':>7}")
    for algo, s in result.summary.items():
        print(
            f"{algo:<10}{s.median_f:>10.4f}{s.mean_f:>10.4f}{s.median_zeta_pct:>9.2f}"
            f"{s.median_phi_pct:>9.2f}{s.median_iters_to_95pct:>7.0f}"
        )
    out = _out_dir(cfg)
    if out is not None:
        save_scenario(result.scenario, out / "scenario.json")
        lab.write_summary_csv(result.all_records(), out / "summary.csv")
        for rec in result.all_records():
            lab.write_convergence_csv(rec, out / "convergence" / f"{rec.algorithm}_seed{rec.seed}.csv")
        lab.write_metadata(
            out / "metadata.json",
            {
                "config": cfg.to_dict(),
                "wall_time_s": {f"{r.algorithm}_seed{r.seed}": r.wall_time for r in result.all_records()},
            },
        )


def _cmd_omega(cfg, args) -> None:
    rows = lab.omega_study(cfg, args.omegas)
    print(f"{'omega':>6}{'zeta%':>9}{'phi%':>9}{'f%':>9}")
    for r in rows:
        print(f"{r.omega:>6.2f}{r.connectivity_pct:>9.2f}{r.coverage_pct:>9.2f}{r.fitness_pct:>9.2f}")
    out = _out_dir(cfg)
    if out is not None:
        lab.write_omega_csv(rows, out / "omega_study.csv")
        lab.write_metadata(out / "metadata.json", {"config": cfg.to_dict(), "omegas": args.omegas})


def _cmd_sweep(cfg, args) -> None:
    values = [int(v) if args.axis != "range" and float(v).is_integer() else v for v in args.values]
    table = lab.sweep(cfg, args.axis, values)
    print(f"{args.axis:>10}{'conn%':>9}{'cov%':>9}{'f%':>9}")
    for r in table.rows:
        print(f"{r.axis_value:>10}{r.connectivity_pct:>9.2f}{r.coverage_pct:>9.2f}{r.fitness_pct:>9.2f}")
    out = _out_dir(cfg)
    if out is not None:
        lab.write_sweep_csv(table, out / f"sweep_{args.axis}.csv")
        lab.write_metadata(out / "metadata.json", {"config": cfg.to_dict(), "axis": args.axis, "values": values})


COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "compare": _cmd_compare,
    "omega-study": _cmd_omega,
    "sweep": _cmd_sweep,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
        COMMANDS[args.command](cfg, args)
    except (ValueError, TypeError) as exc:
        print(f"fogplace: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"fogplace: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
