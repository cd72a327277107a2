"""Repeated timed runs with median aggregation and ratio quartiles."""

from __future__ import annotations

import csv
import enum
import io
import json
import random
import time
from dataclasses import dataclass, field

import numpy as np

from ..game import compile as compile_game
from ..gr1solve import SolverOptions, solve_gr1
from ..rabinsolve import solve_rabin
from ..speclang import Specification
from ..symcore import DDManager

COLUMNS = ["spec", "engine", "efp", "eun", "fpr", "rep", "wall_ns", "z_sweeps",
           "js_body", "y_iters", "x_iters", "cpre_calls", "verdict"]
COUNTERS = ["z_sweeps", "js_body", "y_iters", "x_iters", "cpre_calls"]
BASELINE = SolverOptions()


class EngineChoice(str, enum.Enum):
    GR1 = "gr1"
    RABIN = "rabin"
    BOTH = "both"

    def engines(self) -> list[str]:
        return ["gr1", "rabin"] if self == EngineChoice.BOTH else [self.value]


@dataclass
class BenchConfig:
    specs: list                                   # [(name, Specification)]
    engine: EngineChoice = EngineChoice.GR1
    matrix: list = field(default_factory=SolverOptions.all_combinations)
    reps: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError("repetitions must be at least 1")
        self.engine = EngineChoice(self.engine)


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)

    def medians(self) -> dict:
        """(spec, engine, label) -> median wall time and the run counters."""
        groups: dict = {}
        for r in self.rows:
            label = SolverOptions(r["efp"], r["eun"], r["fpr"]).label
            groups.setdefault((r["spec"], r["engine"], label), []).append(r)
        out = {}
        for key, rs in groups.items():
            entry = {"wall_ns": int(np.median([r["wall_ns"] for r in rs])),
                     "verdict": rs[0]["verdict"]}
            for c in COUNTERS:
                entry[c] = rs[0][c]
            out[key] = entry
        return out

    def ratios(self) -> dict:
        """(engine, label) -> per-spec ratio of median wall time to baseline."""
        med = self.medians()
        out: dict = {}
        for (spec, engine, label), e in sorted(med.items()):
            base = med.get((spec, engine, BASELINE.label))
            if base is None or base["wall_ns"] == 0:
                continue
            out.setdefault((engine, label), []).append(e["wall_ns"] / base["wall_ns"])
        return out

    def quartiles(self) -> dict:
        """(engine, label) -> MIN, Q1, Q2, Q3, MAX of the ratios over specs."""
        out = {}
        for key, rs in self.ratios().items():
            q = np.percentile(rs, [0, 25, 50, 75, 100])
            out[key] = dict(zip(["MIN", "Q1", "Q2", "Q3", "MAX"], (float(v) for v in q)))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(r)
        return buf.getvalue()

    def to_json(self) -> str:
        summary = [{"engine": e, "config": lab, **q} for (e, lab), q in sorted(self.quartiles().items())]
        return json.dumps({"rows": self.rows, "quartiles": summary}, indent=1)

    def table(self) -> str:
        """Quartile table, one row per engine and configuration."""
        lines = [f"{'engine':<6} {'config':<12} " + " ".join(f"{h:>7}" for h in ["MIN", "Q1", "Q2", "Q3", "MAX"])]
        for (e, lab), q in sorted(self.quartiles().items()):
            lines.append(f"{e:<6} {lab:<12} " + " ".join(f"{q[h]:7.3f}" for h in ["MIN", "Q1", "Q2", "Q3", "MAX"]))
        return "\n".join(lines)


def _run(spec: Specification, engine: str, opts: SolverOptions) -> tuple:
    mgr = DDManager()
    g = compile_game(spec, mgr)
    t0 = time.monotonic_ns()
    if engine == "gr1":
        res = solve_gr1(g, opts)
        verdict = "REAL" if res.realizable else "UNREAL"
    else:
        res = solve_rabin(g, opts)
        verdict = "UNREAL" if res.env_realizable else "REAL"
    return time.monotonic_ns() - t0, res.stats, verdict


def run_bench(cfg: BenchConfig) -> BenchReport:
    """Run every (spec, engine, options) ``reps`` times, strictly in sequence."""
    rng = random.Random(cfg.seed)
    report = BenchReport()
    matrix = list(cfg.matrix)
    if BASELINE not in matrix:
        matrix.insert(0, BASELINE)
    for name, spec in cfg.specs:
        for engine in cfg.engine.engines():
            for rep in range(cfg.reps):
                order = list(matrix)
                rng.shuffle(order)
                for opts in order:
                    wall, st, verdict = _run(spec, engine, opts)
                    report.rows.append({
                        "spec": name, "engine": engine, "efp": opts.efp, "eun": opts.eun,
                        "fpr": opts.fpr, "rep": rep, "wall_ns": wall, "z_sweeps": st.z_sweeps,
                        "js_body": st.js_body_executions, "y_iters": st.y_iterations,
                        "x_iters": st.x_iterations, "cpre_calls": st.cpre_calls,
                        "verdict": verdict})
    return report
