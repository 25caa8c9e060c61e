"""
Experiment harness.

Sweeps datasets x variants x budgets x algorithms, measures alpha against the
LP lower bound and beta against the budget, and writes CSV tables.
"""

import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import pandas as pd

from algorithms.exact import optimize_via_decision
from algorithms.greedy import run_greedy
from algorithms.lp_relaxation import build_lp, solve_lp
from algorithms.rounding import RoundingError, RoundingParams, presets, round_lp
from coloring import EvaluationReport, Variant, VariantKind, evaluate
from config import EXPERIMENT_WORKERS
from hypergraph import EdgeColoredHypergraph, load_hypergraph
from metrics import measure_alpha, measure_beta, round_up, satisfied_fraction_of_bound

logger = logging.getLogger(__name__)

ALGORITHMS = ("greedy", "lp-round", "exact")

COLUMNS = [
    "dataset", "variant", "algorithm", "b", "param", "lp_value", "mistakes",
    "alpha", "budget_used", "beta", "satisfied", "satisfied_pct_of_bound",
    "unused_nodes", "runtime_ms", "error",
]

INTEGER_COLUMNS = ["b", "mistakes", "budget_used", "satisfied", "unused_nodes"]

SUMMARY_COLUMNS = ["dataset", "variant", "algorithm", "param", "max_alpha", "max_beta",
                   "max_runtime_ms"]

COMPARE_COLUMNS = [
    "dataset", "b", "global_budget", "local_mistakes", "global_mistakes",
    "local_satisfied_pct", "global_satisfied_pct", "satisfied_pct_diff",
    "mistake_reduction", "unused_reduction",
]


class ExperimentConfigError(Exception):
    pass


# ── Config ───────────────────────────────────────────────────────


def _grid_value(value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"budget grid values must be numbers, got {value!r}")
    if not math.isfinite(value):
        raise ValueError(f"budget grid values must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed experiment JSON.

    Budget grids: local values are absolute budgets, global values are
    multiples of |V| and robust values are fractions of |V|; the latter two
    are floored to integers per dataset.
    """

    datasets: tuple[Path, ...]
    variants: tuple[VariantKind, ...]
    algorithms: tuple[str, ...]
    budgets: dict[VariantKind, tuple[float, ...]]
    # explicit thresholds per variant; "single" means rho = b/(b+1)
    params: dict[VariantKind, tuple] = field(default_factory=dict)
    workers: int = EXPERIMENT_WORKERS
    solver: str | None = None
    compare_models: bool = False
    compare_budgets: tuple[int, ...] = (2, 3)

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        base_dir = base_dir or Path.cwd()
        try:
            datasets = tuple(base_dir / p for p in data["datasets"])
            variants = tuple(VariantKind(v) for v in data.get("variants", []))
            algorithms = tuple(data.get("algorithms", []))
            budgets = {VariantKind(k): tuple(_grid_value(x) for x in v)
                       for k, v in data.get("budgets", {}).items()}
            params = {VariantKind(k): tuple(v) for k, v in data.get("params", {}).items()}
            workers = int(data.get("workers", EXPERIMENT_WORKERS))
            compare_budgets = tuple(int(b) for b in data.get("compare_budgets", (2, 3)))
        except (AttributeError, KeyError, TypeError, ValueError) as e:
            raise ExperimentConfigError(f"invalid experiment config: {e}") from e

        config = cls(
            datasets=datasets,
            variants=variants,
            algorithms=algorithms,
            budgets=budgets,
            params=params,
            workers=workers,
            solver=data.get("solver"),
            compare_models=bool(data.get("compare_models", False)),
            compare_budgets=compare_budgets,
        )
        config.validate()
        return config

    def validate(self):
        if not self.datasets:
            raise ExperimentConfigError("no datasets configured")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ExperimentConfigError(f"unknown algorithms: {', '.join(unknown)}")
        if self.workers < 1:
            raise ExperimentConfigError("workers must be >= 1")
        for kind in self.variants:
            grid = self.budgets.get(kind)
            if not grid:
                raise ExperimentConfigError(f"empty budget grid for {kind.value}")
            if kind is VariantKind.LOCAL and any(b < 1 or int(b) != b for b in grid):
                raise ExperimentConfigError("local budgets must be integers >= 1")
            if kind is VariantKind.GLOBAL and any(b < 0 for b in grid):
                raise ExperimentConfigError("global budget multiples must be >= 0")
            if kind is VariantKind.ROBUST and any(not 0 <= b <= 1 for b in grid):
                raise ExperimentConfigError("robust budget fractions must lie in [0, 1]")
        for kind, values in self.params.items():
            for value in values:
                if value == "single" and kind is VariantKind.LOCAL:
                    continue
                try:
                    RoundingParams(kind, float(value))
                except (TypeError, ValueError, RoundingError) as e:
                    raise ExperimentConfigError(f"bad {kind.value} rounding parameter {value!r}: {e}") from e
        if self.compare_models and any(b < 1 for b in self.compare_budgets):
            raise ExperimentConfigError("compare_budgets must be >= 1")

    def resolve_budgets(self, kind: VariantKind, num_nodes: int) -> list[int]:
        resolved = []
        for value in self.budgets[kind]:
            if kind is VariantKind.LOCAL:
                b = int(value)
            else:
                b = math.floor(value * num_nodes + 1e-9)
            if b not in resolved:
                resolved.append(b)
        return resolved

    def rounding_params(self, variant: Variant) -> list[RoundingParams]:
        values = self.params.get(variant.kind)
        if not values:
            return presets(variant)
        out = []
        for value in values:
            if value == "single":
                out.append(RoundingParams.single_criteria(variant.budget))
            else:
                out.append(RoundingParams(variant.kind, float(value)))
        return out


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ExperimentConfigError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ExperimentConfigError(f"{path}: line {e.lineno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise ExperimentConfigError(f"{path}: top level must be an object")
    return ExperimentConfig.from_dict(data, base_dir=path.parent)


# ── Rows ─────────────────────────────────────────────────────────


@dataclass(frozen=True)
class _Task:
    dataset: Path
    kind: VariantKind
    budget: int
    algorithms: tuple[str, ...]
    params: tuple[RoundingParams, ...]
    solver: str | None


@lru_cache(maxsize=8)
def _load(path: Path) -> EdgeColoredHypergraph:
    return load_hypergraph(path)


def _row(dataset: str, variant: Variant, algorithm: str, param: str) -> dict:
    row = dict.fromkeys(COLUMNS, math.nan)
    row.update(dataset=dataset, variant=variant.kind.value, algorithm=algorithm,
               b=variant.budget, param=param, error="")
    return row


def _fill_metrics(row: dict, hg: EdgeColoredHypergraph, variant: Variant,
                  report: EvaluationReport, lp_value: float):
    row.update(
        lp_value=lp_value,
        mistakes=report.mistakes,
        alpha=round_up(measure_alpha(report.mistakes, lp_value)),
        budget_used=report.budget_used,
        beta=round_up(measure_beta(variant.kind, report.budget_used, variant.budget)),
        satisfied=report.satisfied,
        satisfied_pct_of_bound=satisfied_fraction_of_bound(
            report.satisfied, hg.num_edges, lp_value),
        unused_nodes=report.unused_nodes,
    )


def _run_task(task: _Task) -> list[dict]:
    """All rows for one (dataset, variant, budget); the LP is solved once."""
    name = task.dataset.name
    variant = Variant(task.kind, task.budget)
    rows = []
    try:
        hg = _load(task.dataset)
    except Exception as e:
        logger.warning("Dataset %s failed to load: %s", task.dataset, e)
        for algorithm in task.algorithms:
            row = _row(name, variant, algorithm, "")
            row["error"] = str(e)
            rows.append(row)
        return rows

    lp_value, lp_ms, lp_error = math.nan, 0.0, ""
    start = time.perf_counter()
    try:
        solution = solve_lp(build_lp(hg, variant), task.solver)
        lp_value = solution.objective
    except Exception as e:
        solution = None
        lp_error = f"LP: {e}"
        logger.warning("LP for %s %s failed: %s", name, variant, e, exc_info=True)
    lp_ms = (time.perf_counter() - start) * 1000

    for algorithm in task.algorithms:
        if algorithm == "lp-round":
            for params in task.params:
                row = _row(name, variant, algorithm, params.label())
                rows.append(row)
                if solution is None:
                    row["error"] = lp_error
                    continue
                start = time.perf_counter()
                try:
                    result = round_lp(hg, variant, solution, params)
                    result.certificate.verify()
                    _fill_metrics(row, hg, variant, result.report, lp_value)
                except Exception as e:
                    row["error"] = str(e)
                    logger.warning("Row %s %s %s failed: %s", name, variant, params.label(), e,
                                   exc_info=True)
                row["runtime_ms"] = lp_ms + (time.perf_counter() - start) * 1000
            continue

        row = _row(name, variant, algorithm, "")
        rows.append(row)
        start = time.perf_counter()
        try:
            if algorithm == "greedy":
                assignment = run_greedy(hg, variant).assignment
            else:
                assignment = optimize_via_decision(hg, variant)[1].assignment
            _fill_metrics(row, hg, variant, evaluate(hg, assignment, variant), lp_value)
            if lp_error:
                row["error"] = lp_error
        except Exception as e:
            row["error"] = str(e)
            logger.warning("Row %s %s %s failed: %s", name, variant, algorithm, e, exc_info=True)
        row["runtime_ms"] = (time.perf_counter() - start) * 1000

    for row in rows:
        logger.info("%s %s b=%s %s %s: mistakes=%s alpha=%s beta=%s",
                    row["dataset"], row["variant"], row["b"], row["algorithm"], row["param"],
                    row["mistakes"], row["alpha"], row["beta"])
    return rows


def _tasks(config: ExperimentConfig) -> list[_Task]:
    tasks = []
    if not config.algorithms:
        return tasks
    for path in config.datasets:
        try:
            n = _load(path).num_nodes
        except Exception as e:
            raise ExperimentConfigError(f"dataset {path}: {e}") from e
        for kind in config.variants:
            for b in config.resolve_budgets(kind, n):
                variant = Variant(kind, b)
                params = tuple(config.rounding_params(variant)) if "lp-round" in config.algorithms else ()
                tasks.append(_Task(path, kind, b, config.algorithms, params, config.solver))
    return tasks


def run_experiment(config: ExperimentConfig) -> pd.DataFrame:
    """One row per (dataset, variant, algorithm, b, param), in config order."""
    tasks = _tasks(config)
    logger.info("Running %d experiment groups with %d worker(s)", len(tasks), config.workers)
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            groups = list(pool.map(_run_task, tasks))
    else:
        groups = [_run_task(task) for task in tasks]

    rows = [row for group in groups for row in group]
    frame = pd.DataFrame(rows, columns=COLUMNS)
    for column in INTEGER_COLUMNS:
        frame[column] = frame[column].astype("Int64")
    return frame


def summarize_experiment(rows: pd.DataFrame) -> pd.DataFrame:
    """Worst alpha, beta and runtime per (dataset, variant, algorithm, param) across budgets."""
    if rows.empty:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    ok = rows[rows["error"].fillna("") == ""]
    keys = ["dataset", "variant", "algorithm", "param"]
    summary = (
        ok.groupby(keys, sort=False, dropna=False)
        .agg(max_alpha=("alpha", "max"), max_beta=("beta", "max"),
             max_runtime_ms=("runtime_ms", "max"))
        .reset_index()
    )
    summary["max_alpha"] = summary["max_alpha"].map(round_up)
    summary["max_beta"] = summary["max_beta"].map(round_up)
    return summary[SUMMARY_COLUMNS]


def compare_overlap_models(
    hg: EdgeColoredHypergraph,
    local_budgets,
    solver: str | None = None,
    dataset: str = "",
) -> pd.DataFrame:
    """lp-round local at b against lp-round global at (b - 1)|V|."""
    records = []
    for b in local_budgets:
        local = Variant.local(b)
        glob = Variant.global_((b - 1) * hg.num_nodes)
        local_report = round_lp(hg, local, solve_lp(build_lp(hg, local), solver),
                                RoundingParams.single_criteria(b)).report
        global_report = round_lp(hg, glob, solve_lp(build_lp(hg, glob), solver),
                                 RoundingParams.global_(0.5)).report

        m = hg.num_edges or 1
        local_pct = 100 * local_report.satisfied / m
        global_pct = 100 * global_report.satisfied / m
        records.append({
            "dataset": dataset,
            "b": b,
            "global_budget": glob.budget,
            "local_mistakes": local_report.mistakes,
            "global_mistakes": global_report.mistakes,
            "local_satisfied_pct": local_pct,
            "global_satisfied_pct": global_pct,
            "satisfied_pct_diff": global_pct - local_pct,
            "mistake_reduction": _relative_drop(local_report.mistakes, global_report.mistakes),
            "unused_reduction": _relative_drop(local_report.unused_nodes,
                                               global_report.unused_nodes),
        })
        logger.info("Compare %s b=%d: local %d vs global %d mistakes",
                    dataset, b, local_report.mistakes, global_report.mistakes)
    return pd.DataFrame(records, columns=COMPARE_COLUMNS)


def _relative_drop(before: int, after: int) -> float:
    return (before - after) / before if before else math.nan


# ── Output ───────────────────────────────────────────────────────


def summary_path(out: str | Path) -> Path:
    return Path(out).with_suffix(".summary.csv")


def compare_path(out: str | Path) -> Path:
    return Path(out).with_suffix(".compare.csv")


def write_experiment(config: ExperimentConfig, out: str | Path) -> pd.DataFrame:
    """Run ``config`` and write the row, summary and optional comparison CSVs."""
    out = Path(out)
    rows = run_experiment(config)
    rows.to_csv(out, index=False)
    summarize_experiment(rows).to_csv(summary_path(out), index=False)
    logger.info("Wrote %d rows to %s", len(rows), out)

    if config.compare_models:
        frames = []
        for path in config.datasets:
            try:
                frames.append(compare_overlap_models(_load(path), config.compare_budgets,
                                                     config.solver, path.name))
            except Exception as e:
                logger.warning("Model comparison on %s failed: %s", path, e, exc_info=True)
        compare = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(
            columns=COMPARE_COLUMNS)
        compare.to_csv(compare_path(out), index=False)
    return rows
