"""Command-line entry point.

Exit codes: 0 success, 1 unrealizable (``check``, ``synth``) or failed
validation, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..corefind import CoreOptions, Engine, NotUnrealizable, find_core
from ..game import compile as compile_game
from ..gr1solve import SolverOptions, solve_gr1
from ..rabinsolve import solve_rabin
from ..speclang import SpecError, parse_spec
from ..strategy import MemoryIncomplete, build_counterstrategy, build_strategy
from .bench import BenchConfig, EngineChoice, run_bench
from .corpus import CORPUS_DIR, load_corpus, write_corpus
from .families import Variant, family_text
from .validate import validate_all


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _solver_flags(p):
    p.add_argument("--efp", action="store_true", help="stop at an early fixed point")
    p.add_argument("--eun", action="store_true", help="stop as soon as an initial input is lost")
    p.add_argument("--fpr", action="store_true", help="recycle inner fixed points across sweeps")


def _opts(a) -> SolverOptions:
    return SolverOptions(a.efp, a.eun, a.fpr)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="gr1perf", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="realizability verdict and solver statistics")
    p.add_argument("spec")
    _solver_flags(p)
    p.add_argument("--rabin", action="store_true", help="play the environment game instead")

    p = sub.add_parser("synth", help="strategy (or counterstrategy) as JSON")
    p.add_argument("spec")
    _solver_flags(p)

    p = sub.add_parser("core", help="unrealizable core of the guarantees")
    p.add_argument("spec")
    _solver_flags(p)
    p.add_argument("--sets", action="store_true", help="skip subsets of known realizable sets")
    p.add_argument("--inc", action="store_true", help="seed checks from earlier results")
    p.add_argument("--check-with", choices=[e.value for e in Engine], default="gr1")

    p = sub.add_parser("bench", help="timed runs with median and ratio quartiles")
    p.add_argument("paths", nargs="*", help="spec files or directories (default: bundled corpus)")
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--engine", choices=[e.value for e in EngineChoice], default="gr1")
    p.add_argument("--rabin", action="store_true", help="same as --engine rabin")
    p.add_argument("--out", default="bench", help="prefix of the CSV and JSON outputs")

    p = sub.add_parser("validate", help="cross-validate solvers, strategies and cores")
    p.add_argument("paths", nargs="*", help="spec files or directories (default: bundled corpus)")
    p.add_argument("--no-cores", action="store_true")
    p.add_argument("--no-strategies", action="store_true")

    p = sub.add_parser("gen", help="emit a family specification")
    p.add_argument("variant", nargs="?", choices=[v.value for v in Variant])
    p.add_argument("n", nargs="?", type=int, default=16)
    p.add_argument("-o", "--output")
    p.add_argument("--corpus", metavar="DIR", help="regenerate the family files under DIR")
    return ap


def _load(path: str):
    return parse_spec(Path(path).read_text())


def _corpus(paths):
    if not paths:
        return load_corpus(CORPUS_DIR)
    out = []
    for p in paths:
        out += load_corpus(p)
    return out


def _cmd_check(a) -> int:
    g = compile_game(_load(a.spec))
    if a.rabin:
        res = solve_rabin(g, _opts(a))
    else:
        res = solve_gr1(g, _opts(a))
    out = {"realizable": res.realizable, "engine": "rabin" if a.rabin else "gr1",
           "options": _opts(a).label, "stats": res.stats.to_dict()}
    print(json.dumps(out, indent=1))
    return 0 if res.realizable else 1


def _cmd_synth(a) -> int:
    g = compile_game(_load(a.spec))
    res = solve_gr1(g, _opts(a))
    if res.realizable:
        print(build_strategy(g, res.memory).to_json(g))
        return 0
    opts = SolverOptions(a.efp, False, a.fpr)
    print(build_counterstrategy(g, solve_rabin(g, opts).memory).to_json(g))
    return 1


def _cmd_core(a) -> int:
    opts = CoreOptions(a.sets, a.inc, Engine(a.check_with), _opts(a))
    try:
        res = find_core(_load(a.spec), opts)
    except NotUnrealizable:
        print("the specification is realizable; it has no unrealizable core", file=sys.stderr)
        return 1
    print(res.to_json(indent=1))
    return 0


def _cmd_bench(a) -> int:
    engine = "rabin" if a.rabin else a.engine
    rep = run_bench(BenchConfig(_corpus(a.paths), engine, reps=a.reps, seed=a.seed))
    Path(f"{a.out}.csv").write_text(rep.to_csv())
    Path(f"{a.out}.json").write_text(rep.to_json())
    print(rep.table())
    return 0


def _cmd_validate(a) -> int:
    rep = validate_all(_corpus(a.paths), cores=not a.no_cores, strategies=not a.no_strategies)
    print(rep.summary())
    return 0 if rep.ok else 1


def _cmd_gen(a) -> int:
    if a.corpus:
        for p in write_corpus(Path(a.corpus)):
            print(p)
        return 0
    if a.variant is None:
        print("gen: a variant or --corpus is required", file=sys.stderr)
        return 2
    text = family_text(a.variant, a.n) + "\n"
    if a.output:
        Path(a.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {"check": _cmd_check, "synth": _cmd_synth, "core": _cmd_core,
            "bench": _cmd_bench, "validate": _cmd_validate, "gen": _cmd_gen}


def run_cli(argv=None) -> int:
    try:
        a = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[a.cmd](a)
    except SpecError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except MemoryIncomplete as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
