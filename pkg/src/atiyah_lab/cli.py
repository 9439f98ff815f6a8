"""Command-line entry point.

Subcommands: eval, fuzz, minimize, cases, identities.

Exit codes
    0  success, nothing flagged
    1  invalid arguments or unreadable input (parse errors, coincident points)
    2  the ratio fell below 1 - tol somewhere (inequality flag), or a
       cross-check / identity check failed
    3  a configuration came out linearly dependent (independence flag)

Reports: a human summary on stdout. With --output, one JSON object per line
is written (per-sample records where applicable) followed by a summary line
with "record": "summary".
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .closed_forms import specialized_identity
from .core import DEFAULT_TOL, evaluate
from .fileio import ConfigFormatError, read_configuration, write_records
from .generators import GeneratorKind, GeneratorSpec, random_config, table1_policy
from .geometry import CANONICAL
from .harness import (
    VIOLATION_TOL,
    crosscheck_special_cases,
    fuzz,
    multistart_minimize,
    policy_to_dict,
)

EXIT_OK, EXIT_ERROR, EXIT_BOUND, EXIT_DEPENDENT = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def parse_range(s: str) -> tuple[int, int]:
    """'3..6' -> (3, 6); '5' -> (5, 5)."""
    try:
        if ".." in s:
            lo, hi = s.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(s)
    except ValueError:
        raise UsageError(f"bad range {s!r}; expected 'LO..HI' or an integer") from None
    if hi < lo:
        raise UsageError(f"empty range {s!r}")
    return lo, hi


def parse_grid(s: str) -> np.ndarray:
    """'start:stop:step' -> inclusive grid."""
    try:
        start, stop, step = (float(t) for t in s.split(":"))
    except ValueError:
        raise UsageError(f"bad grid {s!r}; expected 'start:stop:step'") from None
    if step <= 0 or stop < start:
        raise UsageError(f"bad grid {s!r}")
    k = int(round((stop - start) / step))
    return np.linspace(start, start + k * step, k + 1)


@dataclass
class RunConfig:
    """Validated run parameters; unknown keys are rejected."""

    subcommand: str
    input: str | None = None
    output: str | None = None
    seed: int = 0
    samples: int = 1000
    n: str | None = None
    m: str | None = None
    m_max: int = 10
    tol: float = DEFAULT_TOL
    violation_tol: float = VIOLATION_TOL
    orientation: str = "canonical"
    grid: str = "0.01:4:0.01"
    kind: str = GeneratorKind.RANDOM_GAUSSIAN.value
    scale: float = 1.0
    workers: int = 1
    restarts: int = 10
    budget: int = 2000
    perturbation: float = 0.05
    trials: int = 10
    reproducers: str | None = None

    def __post_init__(self):
        if self.orientation not in ("canonical", "table1"):
            raise UsageError(f"unknown orientation {self.orientation!r}")
        if self.tol <= 0 or self.violation_tol <= 0:
            raise UsageError("tolerances must be positive")
        if self.samples < 1 or self.restarts < 1 or self.trials < 1 or self.workers < 1:
            raise UsageError("counts must be >= 1")
        if self.budget < 0:
            raise UsageError("budget must be >= 0")
        try:
            GeneratorKind(self.kind)
        except ValueError:
            raise UsageError(f"unknown generator kind {self.kind!r}") from None

    @classmethod
    def from_sources(cls, ns: argparse.Namespace) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        values: dict = {}
        if getattr(ns, "config", None):
            try:
                loaded = json.loads(Path(ns.config).read_text())
            except (OSError, json.JSONDecodeError) as e:
                raise UsageError(f"cannot read config {ns.config}: {e}") from None
            unknown = set(loaded) - names
            if unknown:
                raise UsageError(f"unknown config keys: {sorted(unknown)}")
            values.update(loaded)
        for k, v in vars(ns).items():
            if k in names and v is not None:
                values[k] = v
        values["subcommand"] = ns.subcommand
        try:
            return cls(**values)
        except TypeError as e:
            raise UsageError(str(e)) from None


def _emit(cfg: RunConfig, records: list[dict], summary: dict) -> None:
    if cfg.output:
        with open(cfg.output, "w") as fh:
            write_records(records + [{"record": "summary", **summary}], fh)


def _ratio_exit(ratio: float, independent: bool, tol: float) -> int:
    if not independent:
        return EXIT_DEPENDENT
    if ratio < 1 - tol:
        return EXIT_BOUND
    return EXIT_OK


def cmd_eval(cfg: RunConfig) -> int:
    if not cfg.input:
        raise UsageError("eval needs --input")
    c, _ = read_configuration(cfg.input)
    if cfg.orientation == "table1":
        if cfg.m is not None:
            m = parse_range(cfg.m)[0]
        else:
            m = next((k for k, p in enumerate(c) if p.z != 0), len(c))
        if not 1 <= m < len(c):
            raise UsageError("table1 orientation needs 1 <= m < N points on the first line")
        policy = table1_policy(m, len(c) - m)
    else:
        policy = CANONICAL
    e = evaluate(c, policy, cfg.tol)
    print(f"N            {e.n}")
    print(f"log|det P|   {e.log_abs_det:.17g}")
    print(f"log bound    {e.log_rhs:.17g}")
    print(f"ratio        {e.ratio:.17g}")
    print(f"independent  {e.independent}")
    summary = {
        "n": e.n,
        "log_abs_det": e.log_abs_det,
        "det_phase": e.det_phase,
        "log_rhs": e.log_rhs,
        "ratio": e.ratio,
        "independent": e.independent,
        "orientation": policy_to_dict(policy),
        "points": c.as_array().tolist(),
    }
    _emit(cfg, [], summary)
    return _ratio_exit(e.ratio, e.independent, cfg.violation_tol)


def cmd_fuzz(cfg: RunConfig) -> int:
    lo, hi = parse_range(cfg.n or "3..7")
    spec = GeneratorSpec(kind=cfg.kind, n_min=lo, n_max=hi, seed=cfg.seed, scale=cfg.scale)
    rep = fuzz(
        spec,
        cfg.samples,
        tol=cfg.tol,
        violation_tol=cfg.violation_tol,
        workers=cfg.workers,
        keep_records=bool(cfg.output),
    )
    print(f"samples      {rep.samples}  (N in {lo}..{hi}, kind {rep.kind}, seed {rep.seed})")
    print(f"min ratio    {rep.min_ratio:.17g}  (sample {rep.argmin['sample']})")
    print(f"dependent    {len(rep.independence_failures)}")
    print(f"violations   {len(rep.violations)}")
    print(f"wall time    {rep.wall_time:.2f} s")
    _emit(cfg, [{"record": "sample", **r.to_dict()} for r in rep.records], rep.to_dict())
    if rep.independence_failures:
        return EXIT_DEPENDENT
    return EXIT_BOUND if rep.violations else EXIT_OK


def cmd_minimize(cfg: RunConfig) -> int:
    if cfg.input:
        c0, _ = read_configuration(cfg.input)
    else:
        n = parse_range(cfg.n or "4")[0]
        c0 = random_config(n, cfg.seed, cfg.kind, cfg.scale)
    rep = multistart_minimize(
        c0,
        restarts=cfg.restarts,
        seed=cfg.seed,
        perturbation=cfg.perturbation,
        workers=cfg.workers,
        budget=cfg.budget,
        reproducer_dir=cfg.reproducers,
    )
    best = rep.best
    print(f"restarts     {rep.restarts}  (seed {rep.seed}, perturbation {rep.perturbation})")
    print(f"min ratio    {best.final_ratio:.17g}")
    print(f"converged    {sum(r.converged for r in rep.results)}/{rep.restarts}")
    for r in rep.results:
        if r.reproducer_path:
            print(f"reproducer   {r.reproducer_path}")
    records = [{"record": "restart", "restart": k, **r.to_dict()} for k, r in enumerate(rep.results)]
    summary = {k: v for k, v in rep.to_dict().items() if k != "results"}
    summary["best_final"] = best.final.as_array().tolist()
    _emit(cfg, records, summary)
    return EXIT_BOUND if best.final_ratio < 1 - 1e-6 else EXIT_OK


def cmd_cases(cfg: RunConfig) -> int:
    rep = crosscheck_special_cases(cfg.m_max, trials=cfg.trials, seed=cfg.seed)
    errs = rep.max_errors()
    n_a = sum(e.case == "A" for e in rep.entries)
    print(f"entries      {len(rep.entries)}  (case A {n_a}, case B {len(rep.entries) - n_a})")
    print(f"max det err  {errs['det_rel_err']:.3e}")
    print(f"max bnd err  {errs['bound_rel_err']:.3e}")
    print(f"min A ratio  {min(e.ratio for e in rep.entries if e.case == 'A'):.17g}")
    print(f"min B ratio  {min(e.ratio for e in rep.entries if e.case == 'B'):.17g}")
    print(f"failures     {len(rep.failures)}")
    summary = {
        "m_max": cfg.m_max,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "passed": rep.passed,
        "failures": len(rep.failures),
        "case_b_below_one": len(rep.case_b_below_one),
        **errs,
    }
    _emit(cfg, [{"record": "case", **e.to_dict()} for e in rep.entries], summary)
    return EXIT_OK if rep.passed else EXIT_BOUND


def cmd_identities(cfg: RunConfig) -> int:
    lo, hi = parse_range(cfg.m or "1..20")
    if lo < 1:
        raise UsageError("m must be >= 1")
    grid = parse_grid(cfg.grid)
    if grid[0] <= 0:
        raise UsageError("grid must be positive")
    records = []
    worst, all_hold = 0.0, True
    for m in range(lo, hi + 1):
        ident = specialized_identity(m, grid)
        res = float(ident.residual.max())
        holds = bool(ident.holds.all())
        worst = max(worst, res)
        all_hold &= holds
        records.append({"record": "identity", "m": m, "max_residual": res, "inequality_holds": holds})
    ok = worst <= 1e-12 and all_hold
    print(f"m range      {lo}..{hi}, {grid.size} grid points in [{grid[0]}, {grid[-1]}]")
    print(f"max residual {worst:.3e}")
    print(f"inequality   {'holds' if all_hold else 'FAILS'} everywhere on the grid")
    _emit(cfg, records, {"max_residual": worst, "inequality_holds": all_hold, "ok": ok})
    return EXIT_OK if ok else EXIT_BOUND


COMMANDS = {
    "eval": cmd_eval,
    "fuzz": cmd_fuzz,
    "minimize": cmd_minimize,
    "cases": cmd_cases,
    "identities": cmd_identities,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="atiyah-lab", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p, seed=True):
        p.add_argument("--config", help="JSON file with run parameters")
        p.add_argument("--output", help="write line-delimited JSON records here")
        p.add_argument("--tol", type=float, help="independence threshold on the ratio")
        p.add_argument("--violation-tol", dest="violation_tol", type=float)
        if seed:
            p.add_argument("--seed", type=int)

    p = sub.add_parser("eval", help="evaluate one configuration file")
    common(p, seed=False)
    p.add_argument("--input", required=True)
    p.add_argument("--orientation", choices=["canonical", "table1"])
    p.add_argument("--m", help="number of leading points on L (table1 orientation)")

    p = sub.add_parser("fuzz", help="seeded random campaign")
    common(p)
    p.add_argument("--n", help="point-count range, e.g. 3..7")
    p.add_argument("--samples", type=int)
    p.add_argument("--kind", choices=[k.value for k in GeneratorKind])
    p.add_argument("--scale", type=float)
    p.add_argument("--workers", type=int)

    p = sub.add_parser("minimize", help="multistart Nelder-Mead on the ratio")
    common(p)
    p.add_argument("--input")
    p.add_argument("--n", help="point count of a random start when --input is absent")
    p.add_argument("--kind", choices=[k.value for k in GeneratorKind if "case" not in k.value])
    p.add_argument("--scale", type=float)
    p.add_argument("--restarts", type=int)
    p.add_argument("--budget", type=int, help="objective evaluations per restart")
    p.add_argument("--perturbation", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--reproducers", help="directory for sub-1 reproducer files")

    p = sub.add_parser("cases", help="cross-check special cases against closed forms")
    common(p)
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--trials", type=int)

    p = sub.add_parser("identities", help="check the equal-lambda identity on a grid")
    common(p, seed=False)
    p.add_argument("--m", help="range of m, e.g. 1..20")
    p.add_argument("--grid", help="start:stop:step")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    try:
        cfg = RunConfig.from_sources(ns)
        return COMMANDS[cfg.subcommand](cfg)
    except (UsageError, ConfigFormatError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
