"""Scenario generation, experiment orchestration and CSV/JSON reporting."""

from __future__ import annotations

import csv
import hashlib
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import baselines, mpa
from .network import EdgeNode, FogNode, Point2D, Scenario, load_scenario
from .objective import EvaluationContext
from .record import RunRecord

__all__ = [
    "ALGORITHMS",
    "SWEEP_AXES",
    "GeneratorSpec",
    "ExperimentConfig",
    "AlgorithmSummary",
    "ComparisonResult",
    "OmegaRow",
    "SweepRow",
    "SweepTable",
    "derive_seed",
    "generate_scenario",
    "resolve_scenario",
    "run_algorithm",
    "run_comparison",
    "omega_study",
    "sweep",
    "write_convergence_csv",
    "write_summary_csv",
    "write_sweep_csv",
    "write_omega_csv",
    "write_metadata",
]

ALGORITHMS = ("mpa",) + baselines.ALGORITHMS
SWEEP_AXES = ("fog_count", "edge_count", "range")

CONVERGENCE_HEADER = ("iter", "best_f", "zeta", "phi")
SUMMARY_HEADER = ("algorithm", "seed", "final_f", "final_zeta_pct", "final_phi_pct", "iters_to_95pct")
SWEEP_HEADER = ("axis_value", "connectivity_pct", "coverage_pct", "fitness_pct")
OMEGA_HEADER = ("omega", "connectivity_pct", "coverage_pct", "fitness_pct")


@dataclass(frozen=True)
class GeneratorSpec:
    """Random scenario recipe. Defaults are the reference network setup:
    45 fog nodes, 120 edge nodes, 100 m range, 1000 m x 1000 m."""

    width: float = 1000.0
    height: float = 1000.0
    n_fog: int = 45
    n_edge: int = 120
    range: float | tuple[float, float] = 100.0
    seed: int = 0
    capacity: int | None = None

    def __post_init__(self):
        if isinstance(self.range, list):
            object.__setattr__(self, "range", tuple(self.range))
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"region must have positive size, got {self.width}x{self.height}")
        if self.n_fog < 1 or self.n_edge < 1:
            raise ValueError(f"node counts must be positive, got fog={self.n_fog} edge={self.n_edge}")
        lo, hi = self.range_interval
        if not 0 < lo <= hi <= max(self.width, self.height):
            raise ValueError(f"range must satisfy 0 < lo <= hi <= {max(self.width, self.height)}, got {self.range}")

    @property
    def range_interval(self) -> tuple[float, float]:
        if isinstance(self.range, tuple):
            lo, hi = self.range
            return float(lo), float(hi)
        return float(self.range), float(self.range)


def derive_seed(*parts: Any) -> int:
    """Stable 63-bit seed from arbitrary printable parts (independent of PYTHONHASHSEED)."""
    digest = hashlib.sha256("\x1f".join(repr(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def generate_scenario(spec: GeneratorSpec) -> Scenario:
    """Uniform random fog/edge locations; ranges fixed or uniform on an interval.

    Draw order: fog locations ``(n, 2)``, edge locations ``(m, 2)``, then fog
    ranges ``(n,)`` only when an interval is given.
    """
    rng = mpa.make_rng(spec.seed)
    scale = [spec.width, spec.height]
    fog_xy = rng.random((spec.n_fog, 2)) * scale
    edge_xy = rng.random((spec.n_edge, 2)) * scale
    lo, hi = spec.range_interval
    if lo == hi:
        ranges = [lo] * spec.n_fog
    else:
        ranges = (lo + rng.random(spec.n_fog) * (hi - lo)).tolist()
    return Scenario(
        width=float(spec.width),
        height=float(spec.height),
        fog_nodes=tuple(
            FogNode(i, Point2D(float(x), float(y)), float(r)) for i, ((x, y), r) in enumerate(zip(fog_xy, ranges))
        ),
        edge_nodes=tuple(EdgeNode(i, Point2D(float(x), float(y))) for i, (x, y) in enumerate(edge_xy)),
        capacity=spec.capacity,
    )


@dataclass(frozen=True)
class ExperimentConfig:
    generator: GeneratorSpec = field(default_factory=GeneratorSpec)
    algorithms: tuple[str, ...] = ALGORITHMS
    population: int = 30
    t_max: int = 1000
    omega: float = 0.5
    seeds: tuple[int, ...] = tuple(range(10))
    out_dir: str | None = None
    scenario_path: str | None = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple(a.lower() for a in self.algorithms))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown or not self.algorithms:
            raise ValueError(f"algorithms must be a non-empty subset of {ALGORITHMS}, got {self.algorithms}")
        if not self.seeds:
            raise ValueError("at least one seed (repetition) is required")
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError(f"omega must lie in [0, 1], got {self.omega}")
        if self.population < 2 or self.t_max < 3:
            raise ValueError(f"need population >= 2 and t_max >= 3, got {self.population}, {self.t_max}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> ExperimentConfig:
        doc = dict(doc)
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        if "generator" in doc:
            gen = dict(doc["generator"])
            gen_known = {f.name for f in fields(GeneratorSpec)}
            if set(gen) - gen_known:
                raise ValueError(f"unknown generator keys: {sorted(set(gen) - gen_known)}")
            doc["generator"] = GeneratorSpec(**gen)
        for key in ("algorithms", "seeds"):
            if key in doc:
                doc[key] = tuple(doc[key])
        return cls(**doc)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def resolve_scenario(cfg: ExperimentConfig) -> Scenario:
    if cfg.scenario_path:
        return load_scenario(cfg.scenario_path)
    return generate_scenario(cfg.generator)


def run_algorithm(
    scenario: Scenario, algorithm: str, *, omega: float, population: int, t_max: int, seed: int
) -> RunRecord:
    ctx = EvaluationContext(scenario, omega)
    if algorithm == "mpa":
        return mpa.run(ctx, mpa.MpaParams(population=population, t_max=t_max, seed=seed))
    return baselines.run_baseline(
        ctx, baselines.BaselineParams(algorithm, population=population, t_max=t_max, seed=seed)
    )


def _run_job(job: tuple) -> RunRecord:
    scenario, algorithm, omega, population, t_max, seed = job
    return run_algorithm(scenario, algorithm, omega=omega, population=population, t_max=t_max, seed=seed)


def _run_jobs(jobs: list[tuple], workers: int) -> list[RunRecord]:
    if workers <= 1 or len(jobs) <= 1:
        return [_run_job(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job, jobs))


# -- comparison ------------------------------------------------------------


@dataclass
class AlgorithmSummary:
    algorithm: str
    runs: int
    median_f: float
    mean_f: float
    median_zeta_pct: float
    median_phi_pct: float
    mean_zeta_pct: float
    mean_phi_pct: float
    median_iters_to_95pct: float


@dataclass
class ComparisonResult:
    scenario: Scenario
    records: dict[str, list[RunRecord]]
    summary: dict[str, AlgorithmSummary]

    def all_records(self) -> list[RunRecord]:
        return [r for algo in sorted(self.records) for r in sorted(self.records[algo], key=lambda r: r.seed)]


def summarize(algorithm: str, records: Sequence[RunRecord]) -> AlgorithmSummary:
    f = [r.final.f for r in records]
    zeta = [r.final_zeta_pct for r in records]
    phi = [r.final_phi_pct for r in records]
    return AlgorithmSummary(
        algorithm=algorithm,
        runs=len(records),
        median_f=statistics.median(f),
        mean_f=statistics.fmean(f),
        median_zeta_pct=statistics.median(zeta),
        median_phi_pct=statistics.median(phi),
        mean_zeta_pct=statistics.fmean(zeta),
        mean_phi_pct=statistics.fmean(phi),
        median_iters_to_95pct=statistics.median(r.iters_to_fraction(0.95) for r in records),
    )


def run_comparison(cfg: ExperimentConfig, scenario: Scenario | None = None) -> ComparisonResult:
    """Run every configured algorithm for every seed on one shared scenario."""
    scenario = scenario if scenario is not None else resolve_scenario(cfg)
    jobs = [
        (scenario, algo, cfg.omega, cfg.population, cfg.t_max, seed) for algo in cfg.algorithms for seed in cfg.seeds
    ]
    records: dict[str, list[RunRecord]] = {algo: [] for algo in cfg.algorithms}
    for rec in _run_jobs(jobs, cfg.workers):
        records[rec.algorithm].append(rec)
    summary = {algo: summarize(algo, recs) for algo, recs in records.items()}
    return ComparisonResult(scenario=scenario, records=records, summary=summary)


# -- omega study -----------------------------------------------------------


@dataclass
class OmegaRow:
    omega: float
    connectivity_pct: float
    coverage_pct: float
    fitness_pct: float
    records: list[RunRecord] = field(default_factory=list, repr=False)


def omega_study(
    cfg: ExperimentConfig, omegas: Iterable[float], scenario: Scenario | None = None, algorithm: str = "mpa"
) -> list[OmegaRow]:
    """Repeated runs per weight on one scenario; rows sorted by omega."""
    omegas = sorted(float(w) for w in omegas)
    for w in omegas:
        if not 0.0 <= w <= 1.0:
            raise ValueError(f"omega must lie in [0, 1], got {w}")
    scenario = scenario if scenario is not None else resolve_scenario(cfg)
    jobs = [(scenario, algorithm, w, cfg.population, cfg.t_max, seed) for w in omegas for seed in cfg.seeds]
    results = _run_jobs(jobs, cfg.workers)
    rows = []
    k = len(cfg.seeds)
    for i, w in enumerate(omegas):
        recs = results[i * k : (i + 1) * k]
        rows.append(
            OmegaRow(
                omega=w,
                connectivity_pct=statistics.fmean(r.final_zeta_pct for r in recs),
                coverage_pct=statistics.fmean(r.final_phi_pct for r in recs),
                fitness_pct=statistics.fmean(100.0 * r.final.f for r in recs),
                records=recs,
            )
        )
    return rows


# -- density / range sweeps ------------------------------------------------


@dataclass(frozen=True)
class SweepRun:
    scenario_seed: int
    run_seed: int
    n: int
    m: int
    zeta: int
    phi: int
    f: float


@dataclass
class SweepRow:
    axis_value: float
    connectivity_pct: float
    coverage_pct: float
    fitness_pct: float
    runs: tuple[SweepRun, ...] = ()


@dataclass
class SweepTable:
    axis: str
    rows: list[SweepRow]

    def column(self, name: str) -> list[float]:
        return [getattr(row, name) for row in self.rows]


def _sweep_generator(base: GeneratorSpec, axis: str, value, seed: int) -> GeneratorSpec:
    if axis == "fog_count":
        return replace(base, n_fog=int(value), seed=seed)
    if axis == "edge_count":
        return replace(base, n_edge=int(value), seed=seed)
    return replace(base, range=float(value), seed=seed)


def sweep(cfg: ExperimentConfig, axis: str, values: Iterable[float], algorithm: str = "mpa") -> SweepTable:
    """One row per swept value, averaging one run per configured seed.

    Each (value, repetition) gets a fresh scenario and optimiser seed derived
    from the base seeds, the axis and the value, so rows do not depend on which
    other values are in the list.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    values = list(values)
    jobs, meta = [], []
    for value in values:
        for rep, base_seed in enumerate(cfg.seeds):
            scenario_seed = derive_seed("scenario", cfg.generator.seed, axis, value, rep)
            run_seed = derive_seed("run", base_seed, axis, value, rep)
            scenario = generate_scenario(_sweep_generator(cfg.generator, axis, value, scenario_seed))
            jobs.append((scenario, algorithm, cfg.omega, cfg.population, cfg.t_max, run_seed))
            meta.append(scenario_seed)
    results = _run_jobs(jobs, cfg.workers)

    rows = []
    k = len(cfg.seeds)
    for i, value in enumerate(values):
        runs = tuple(
            SweepRun(meta[j], rec.seed, rec.n, rec.m, rec.final.zeta, rec.final.phi, rec.final.f)
            for j, rec in zip(range(i * k, (i + 1) * k), results[i * k : (i + 1) * k])
        )
        rows.append(
            SweepRow(
                axis_value=value,
                connectivity_pct=statistics.fmean(100.0 * r.zeta / r.n for r in runs),
                coverage_pct=statistics.fmean(100.0 * r.phi / r.m for r in runs),
                fitness_pct=statistics.fmean(100.0 * r.f for r in runs),
                runs=runs,
            )
        )
    return SweepTable(axis=axis, rows=rows)


# -- export ----------------------------------------------------------------


def _write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def write_convergence_csv(record: RunRecord, path: str | Path) -> Path:
    rows = (
        (t + 1, repr(float(f)), int(z), int(p))
        for t, (f, z, p) in enumerate(zip(record.best_f, record.best_zeta, record.best_phi))
    )
    return _write_csv(path, CONVERGENCE_HEADER, rows)


def write_summary_csv(records: Iterable[RunRecord], path: str | Path) -> Path:
    ordered = sorted(records, key=lambda r: (r.algorithm, r.seed))
    rows = (
        (
            r.algorithm,
            r.seed,
            repr(r.final.f),
            repr(r.final_zeta_pct),
            repr(r.final_phi_pct),
            r.iters_to_fraction(0.95),
        )
        for r in ordered
    )
    return _write_csv(path, SUMMARY_HEADER, rows)


def write_sweep_csv(table: SweepTable, path: str | Path) -> Path:
    rows = ((r.axis_value, repr(r.connectivity_pct), repr(r.coverage_pct), repr(r.fitness_pct)) for r in table.rows)
    return _write_csv(path, SWEEP_HEADER, rows)


def write_omega_csv(rows: Iterable[OmegaRow], path: str | Path) -> Path:
    out = ((r.omega, repr(r.connectivity_pct), repr(r.coverage_pct), repr(r.fitness_pct)) for r in rows)
    return _write_csv(path, OMEGA_HEADER, out)


def write_metadata(path: str | Path, info: dict[str, Any]) -> Path:
    """Sidecar JSON; the only output that carries timestamps and wall times."""
    path = Path(path)
    doc = {"created_utc": datetime.now(timezone.utc).isoformat(), **info}
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, indent=2, default=str) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path
