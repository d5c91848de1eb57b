"""Command-line entry point.

Runs the exact identity suite and the numeric diagnostics on configured
analytic solutions, writing a deterministic JSON report plus CSV
artifacts.  Exit status: 0 when every identity is exactly zero and
every numeric check is within tolerance, 1 when any check fails (the
report then names a witness), 2 for configuration errors.

Configuration is a TOML file; every key has a documented default (see
docs/config.md), so all tasks run with no config at all.  The
``ZILCHLAB_WORKERS`` environment variable sets the worker-pool size
used for per-(signature, task) jobs and grid evaluation.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import numeric as nm
from .minkowski import MetricConvention
from .noether import MUTATIONS, ZilchForm, run_identity_suite, run_mutation
from .report import convention_block, identity_entry, write_report
from .solutions import random_field_sample, sample, solution_from_config

TASKS = ("verify-identities", "eval-zilch", "decompose", "divergence", "convergence")
SIGNATURES = ("+---", "-+++")
WORKERS_ENV = "ZILCHLAB_WORKERS"


class ConfigError(ValueError):
    """Configuration problem; maps to exit status 2."""


# ---------------------------------------------------------------------------
# configuration


DEFAULT_SOLUTIONS = (
    {"name": "circular", "kind": "circular-plane-wave"},
    {
        "name": "linear",
        "kind": "linear-plane-wave",
        "polarization": [1.0, 0.0, 0.0],
    },
    {"name": "standing", "kind": "standing-wave"},
    {
        "name": "bichromatic-pair",
        "kind": "superposition",
        "parts": [
            {"kind": "circular-plane-wave"},
            {
                "kind": "circular-plane-wave",
                "frequency": 2.0,
                "amplitude": 0.8,
                "direction": [0.0, 0.0, -1.0],
            },
        ],
    },
)

_TOP_KEYS = {
    "signatures",
    "epsilon0123",
    "tasks",
    "out",
    "seed",
    "events",
    "forms",
    "solution",
    "grid",
}
_GRID_KEYS = {
    "solution",
    "spacing",
    "extents",
    "stencil_order",
    "levels",
    "forms",
    "origin",
}


def _require(condition: bool, message: str):
    if not condition:
        raise ConfigError(message)


def _form_list(values, where: str):
    out = []
    for i, value in enumerate(values):
        try:
            out.append(ZilchForm(value))
        except ValueError:
            names = ", ".join(f.value for f in nm.NUMERIC_FORMS)
            raise ConfigError(
                f"{where}[{i}]: unknown family {value!r} (known: {names})"
            ) from None
    return tuple(out)


class RunConfig:
    """Validated run settings with documented defaults."""

    def __init__(self, table: dict | None = None):
        table = dict(table or {})
        unknown = sorted(set(table) - _TOP_KEYS)
        _require(not unknown, f"config.{unknown[0]}: unknown key" if unknown else "")

        signatures = table.get("signatures", ["+---"])
        _require(
            isinstance(signatures, list) and signatures,
            "config.signatures: expected a non-empty list",
        )
        for s in signatures:
            _require(
                s in SIGNATURES,
                f"config.signatures: expected values from {SIGNATURES}, got {s!r}",
            )
        epsilon = table.get("epsilon0123", 1)
        _require(
            epsilon in (1, -1), "config.epsilon0123: expected 1 or -1"
        )
        self.conventions = tuple(
            MetricConvention(s, epsilon0123=epsilon) for s in signatures
        )

        tasks = table.get("tasks", list(TASKS))
        _require(isinstance(tasks, list) and tasks, "config.tasks: expected a non-empty list")
        for t in tasks:
            _require(
                t in TASKS,
                f"config.tasks: unknown task {t!r} (known: {', '.join(TASKS)})",
            )
        self.tasks = tuple(dict.fromkeys(tasks))

        self.out = Path(table.get("out", "zilch-out"))
        self.seed = int(table.get("seed", 0))
        self.events = int(table.get("events", 20))
        _require(self.events >= 1, "config.events: expected a positive count")
        self.forms = _form_list(
            table.get("forms", [f.value for f in nm.NUMERIC_FORMS]), "config.forms"
        )

        sol_tables = table.get("solution", [dict(t) for t in DEFAULT_SOLUTIONS])
        _require(
            isinstance(sol_tables, list) and sol_tables,
            "config.solution: expected a non-empty array of solution tables",
        )
        self.solutions = {}
        for i, sol_table in enumerate(sol_tables):
            where = f"config.solution[{i}]"
            _require(isinstance(sol_table, dict), f"{where}: expected a table")
            sol_table = dict(sol_table)
            name = sol_table.pop("name", f"solution-{i}")
            _require(
                isinstance(name, str) and name,
                f"{where}.name: expected a non-empty string",
            )
            _require(
                name not in self.solutions, f"{where}.name: duplicate name {name!r}"
            )
            try:
                self.solutions[name] = solution_from_config(sol_table, where)
            except ValueError as err:
                raise ConfigError(str(err)) from None

        grid_table = dict(table.get("grid", {}))
        unknown = sorted(set(grid_table) - _GRID_KEYS)
        _require(
            not unknown,
            f"config.grid.{unknown[0]}: unknown key" if unknown else "",
        )
        self.grid_solution = grid_table.get("solution", "bichromatic-pair")
        if self.grid_solution not in self.solutions:
            if "solution" in grid_table:
                raise ConfigError(
                    f"config.grid.solution: no solution named {self.grid_solution!r}"
                )
            self.grid_solution = next(iter(self.solutions))
        self.grid_levels = int(grid_table.get("levels", 3))
        _require(self.grid_levels >= 1, "config.grid.levels: expected >= 1")
        self.grid_forms = _form_list(
            grid_table.get("forms", ["kibble-3"]), "config.grid.forms"
        )
        try:
            self.grid = nm.GridSpec(
                origin=tuple(grid_table.get("origin", (0.0, 0.0, 0.0, 0.0))),
                spacing=grid_table.get("spacing", 0.19),
                extents=grid_table.get("extents", 8),
                stencil_order=int(grid_table.get("stencil_order", 4)),
            )
        except ValueError as err:
            raise ConfigError(f"config.grid: {err}") from None


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as err:
        raise ConfigError(f"config parse error in {path}: {err}") from None


# ---------------------------------------------------------------------------
# events


def seeded_events(seed: int, count: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-2.0, 2.0, size=(count, 4))


# ---------------------------------------------------------------------------
# tasks (each returns a report section and may write CSV artifacts)


def task_verify_identities(cfg: RunConfig, conv: MetricConvention, out: Path) -> dict:
    reports = list(run_identity_suite(conv))
    entries = [identity_entry(rep, out) for rep in reports]
    return {
        "identities": entries,
        "count": len(entries),
        "all_zero": all(rep.residual_zero for rep in reports),
        "passed": all(rep.residual_zero for rep in reports),
    }


def _sig_slug(conv: MetricConvention) -> str:
    return "pmmm" if conv.signature == "+---" else "mppp"


def task_eval_zilch(cfg: RunConfig, conv: MetricConvention, out: Path) -> dict:
    events = seeded_events(cfg.seed, cfg.events)
    section = {"files": [], "max_abs": {}, "passed": True}
    for name, sol in sorted(cfg.solutions.items()):
        samples = [sample(sol, ev, depth=2) for ev in events]
        for form in cfg.forms:
            rows = [
                (s.event, nm.eval_zilch(s, form, conv)) for s in samples
            ]
            fname = f"eval-zilch-{name}-{form.value}-{_sig_slug(conv)}.csv"
            (out / fname).write_text(nm.rank3_csv(rows))
            section["files"].append(fname)
            section["max_abs"][f"{name}/{form.value}"] = float(
                max(np.abs(z).max() for _, z in rows)
            )
    return section


def task_decompose(cfg: RunConfig, conv: MetricConvention, out: Path) -> dict:
    events = seeded_events(cfg.seed, cfg.events)
    tolerance = {"off-shell": 1e-11, "on-shell-form": 1e-10}
    section = {"files": [], "residuals": {}, "tolerances": tolerance, "passed": True}
    for name, sol in sorted(cfg.solutions.items()):
        lines = ["t,x,y,z,variant,block,i,j,k,value"]
        worst = {v: 0.0 for v in nm.DECOMPOSITION_VARIANTS}
        for ev in events:
            s = sample(sol, ev, depth=2)
            prefix = ",".join(format(float(x), ".17g") for x in s.event)
            for variant in nm.DECOMPOSITION_VARIANTS:
                worst[variant] = max(
                    worst[variant], nm.decomposition_residual(s, variant, conv)
                )
                rep = nm.eval_decomposition(s, variant, conv)
                for block, arr in sorted(rep.blocks().items()):
                    arr = np.atleast_1d(np.asarray(arr))
                    for idx in np.ndindex(arr.shape):
                        pads = [str(i) for i in idx] + [""] * (3 - len(idx))
                        value = format(float(arr[idx]), ".17g")
                        lines.append(
                            f"{prefix},{variant},{block},{','.join(pads)},{value}"
                        )
                lines.append(
                    f"{prefix},{variant},optical-chirality,,,,"
                    f"{format(rep.optical_chirality, '.17g')}"
                )
        fname = f"decompose-{name}-{_sig_slug(conv)}.csv"
        (out / fname).write_text("\n".join(lines) + "\n")
        section["files"].append(fname)
        for variant, value in worst.items():
            section["residuals"][f"{name}/{variant}"] = value
            if value > tolerance[variant]:
                section["passed"] = False
    return section


def task_divergence(cfg: RunConfig, conv: MetricConvention, out: Path) -> dict:
    events = seeded_events(cfg.seed, cfg.events)
    tolerance, control_floor = 1e-10, 1e-2
    section = {
        "tolerance": tolerance,
        "negative_control_floor": control_floor,
        "residuals": {},
        "negative_control": {},
        "passed": True,
    }
    lines = ["solution,family,residual,tolerance,pass"]
    for name, sol in sorted(cfg.solutions.items()):
        for form in cfg.forms:
            res = nm.divergence_residual_analytic(sol, form, events, conv)
            ok = res <= tolerance
            section["residuals"][f"{name}/{form.value}"] = res
            section["passed"] = section["passed"] and ok
            lines.append(
                f"{name},{form.value},{format(res, '.17g')},"
                f"{format(tolerance, '.17g')},{str(ok).lower()}"
            )
    controls = [random_field_sample(cfg.seed + i, depth=3) for i in range(5)]
    for form in cfg.forms:
        res = nm.divergence_residual_samples(controls, form, conv)
        ok = res >= control_floor
        section["negative_control"][form.value] = res
        section["passed"] = section["passed"] and ok
        lines.append(
            f"random-jets,{form.value},{format(res, '.17g')},"
            f">={format(control_floor, '.17g')},{str(ok).lower()}"
        )
    fname = f"divergence-{_sig_slug(conv)}.csv"
    (out / fname).write_text("\n".join(lines) + "\n")
    section["files"] = [fname]
    return section


def task_convergence(cfg: RunConfig, conv: MetricConvention, out: Path) -> dict:
    sol = cfg.solutions[cfg.grid_solution]
    workers = worker_count()
    order = cfg.grid.stencil_order
    band = (order - 0.5, order + 0.5)
    section = {
        "solution": cfg.grid_solution,
        "stencil_order": order,
        "expected_order_band": list(band),
        "files": [],
        "observed_orders": {},
        "passed": True,
    }
    for form in cfg.grid_forms:
        table = nm.divergence_residual_grid(
            sol, form, cfg.grid, levels=cfg.grid_levels, conv=conv, workers=workers
        )
        fname = f"convergence-{form.value}-{_sig_slug(conv)}.csv"
        (out / fname).write_text(table.to_csv())
        section["files"].append(fname)
        orders = table.observed_orders()
        section["observed_orders"][form.value] = list(orders)
        in_band = bool(orders) and all(band[0] <= o <= band[1] for o in orders)
        section["passed"] = section["passed"] and in_band
    return section


_TASK_RUNNERS = {
    "verify-identities": task_verify_identities,
    "eval-zilch": task_eval_zilch,
    "decompose": task_decompose,
    "divergence": task_divergence,
    "convergence": task_convergence,
}


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(
            f"{WORKERS_ENV} must be an integer, got {raw!r}"
        ) from None
    return max(1, value)


# ---------------------------------------------------------------------------
# orchestration


def run(cfg: RunConfig) -> tuple[int, Path]:
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(conv, task) for conv in cfg.conventions for task in cfg.tasks]

    def execute(job):
        conv, task = job
        return _TASK_RUNNERS[task](cfg, conv, out)

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(execute, jobs))
    else:
        results = [execute(job) for job in jobs]

    runs = []
    ok = True
    for conv in cfg.conventions:
        block = {"convention": convention_block(conv), "tasks": {}}
        for task in cfg.tasks:
            section = results[jobs.index((conv, task))]
            block["tasks"][task] = section
            ok = ok and bool(section.get("passed", True))
        runs.append(block)

    payload = {
        "seed": cfg.seed,
        "events_per_solution": cfg.events,
        "solutions": sorted(cfg.solutions),
        "runs": runs,
        "passed": ok,
    }
    path = write_report(payload, out)
    return (0 if ok else 1), path


def run_mutation_debug(name: str, cfg: RunConfig) -> int:
    """Debug hook: re-run one identity with a documented coefficient
    mutated.  A sensitive suite yields a witness and exit status 1."""
    if name not in MUTATIONS:
        print(
            f"config error: unknown mutation {name!r}; "
            f"known: {', '.join(sorted(MUTATIONS))}",
            file=sys.stderr,
        )
        return 2
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    runs = []
    found_witness = True
    for conv in cfg.conventions:
        rep = run_mutation(name, conv)
        entry = identity_entry(rep, out)
        runs.append({"convention": convention_block(conv), "mutation": entry})
        found_witness = found_witness and not rep.residual_zero
        if not rep.residual_zero:
            print(
                f"mutation {name!r} under {conv.signature}: nonzero witness "
                f"({entry['witness'].get('polynomial_path', 'inline')})"
            )
        else:
            print(
                f"mutation {name!r} under {conv.signature}: residual stayed zero "
                "(suite is NOT sensitive to this coefficient)",
                file=sys.stderr,
            )
    write_report({"runs": runs, "passed": False}, out, name="mutation-report.json")
    return 1 if found_witness else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zilchlab",
        description=(
            "Verification laboratory for the conservation-law family of "
            "duality-symmetric electrodynamics: exact identity suite plus "
            "numeric diagnostics on analytic wave solutions."
        ),
        epilog=(
            f"Environment: {WORKERS_ENV} sets the worker-pool size "
            "(default 1). Exit status: 0 all checks pass, 1 witness found, "
            "2 configuration error."
        ),
    )
    parser.add_argument("--config", metavar="PATH", help="TOML run configuration")
    parser.add_argument(
        "--task",
        action="append",
        metavar="NAME",
        choices=TASKS,
        help=f"task to run (repeatable); default: all of {', '.join(TASKS)}",
    )
    parser.add_argument("--out", metavar="DIR", help="output directory (default zilch-out)")
    parser.add_argument("--seed", type=int, metavar="N", help="event seed (default 0)")
    parser.add_argument(
        "--signature",
        choices=SIGNATURES,
        help=(
            "restrict the run to one metric signature "
            "(write --signature=-+++ for the mostly-plus one)"
        ),
    )
    parser.add_argument(
        "--mutate",
        metavar="NAME",
        help=(
            "debug: re-run one identity with a documented coefficient "
            f"mutated and report the witness; one of {', '.join(sorted(MUTATIONS))}"
        ),
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        table = load_config(args.config)
        if args.task:
            table["tasks"] = list(args.task)
        if args.out:
            table["out"] = args.out
        if args.seed is not None:
            table["seed"] = args.seed
        if args.signature:
            table["signatures"] = [args.signature]
        cfg = RunConfig(table)
        if args.mutate:
            return run_mutation_debug(args.mutate, cfg)
        status, path = run(cfg)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    print(f"report: {path} ({'pass' if status == 0 else 'FAIL'})")
    return status


if __name__ == "__main__":
    sys.exit(main())
