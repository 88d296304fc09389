"""Command-line front end.  Every report is a JSON document with schema_version "1".

Exit codes: 0 success (all checks passed), 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import interp
from .classifier import classify
from .cohesive import DEFAULT_FAMILY, MaximalRun, dump_run, eqc_check, run_maximal, totalize
from .core import SpecError, spec_from_json
from .logic import SentenceTemplate, axioms_check, eval_sentence
from .realize import extract, realize
from .witness import default_family, verify_family, witnesses

SCHEMA = "1"


class UsageError(Exception):
    pass


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"{path}: no such file") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None


def _load_spec(path: str):
    try:
        return spec_from_json(_load_json(path))
    except SpecError as e:
        raise UsageError(f"{path}: {e}") from None


def _load_program(path: str):
    try:
        return interp.from_json(_load_json(path))
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from None


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"window must look like lo:hi, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise UsageError("window needs 0 <= lo <= hi")
    return lo, hi


def _emit(doc: dict, out: str | None):
    text = json.dumps({"schema_version": SCHEMA, **doc}, indent=1, sort_keys=False)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_classify(a) -> int:
    paths = [a.spec] if a.spec else sorted(str(p) for p in Path(a.batch).glob("*.json"))
    if not paths:
        raise UsageError("classify needs --spec or a --batch directory with .json files")
    reports = {p: classify(_load_spec(p)).to_json() for p in paths}
    _emit(reports[paths[0]] if a.spec else {"reports": reports}, a.out)
    return 0


def cmd_realize(a) -> int:
    spec = _load_spec(a.spec)
    r = realize(spec, a.stage)
    _emit({"kind": spec.kind, "stage": a.stage, "elements": len(r.elements), "closed": r.closed(),
           "extracted": extract(r).to_json(), "axioms": axioms_check(spec.kind, r).to_json(),
           "dump": r.dump(a.dump)}, a.out)
    return 0


def cmd_witness(a) -> int:
    spec = _load_spec(a.spec)
    kind = a.family or default_family(realize(spec, 1))
    if kind is None:
        raise UsageError("no witness family applies to this spec; pass --family")
    try:
        w = witnesses(realize(spec, 1).presentation, kind, a.m_max, a.k_max)
    except ValueError as e:
        raise UsageError(str(e)) from None
    results = verify_family(w, _window(a.window) if a.window else None, a.budget)
    ok = all(r.passed for r in results)
    _emit({"family": kind, "pass": ok, "claims": [r.to_json() for r in results]}, a.report or a.out)
    return 0 if ok else 1


def _family_arg(text: str | None):
    if not text:
        return list(DEFAULT_FAMILY)
    if Path(text).exists():
        return _load_json(text)
    return [s for s in text.split(",") if s]


def cmd_maximal(a) -> int:
    try:
        run = run_maximal(_family_arg(a.family), a.stages)
    except ValueError as e:
        raise UsageError(str(e)) from None
    text = dump_run(run, a.dump)
    if a.out:
        Path(a.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def _load_run(path: str) -> MaximalRun:
    try:
        return MaximalRun.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{path}: not a run snapshot ({e})") from None


def cmd_eqc(a) -> int:
    run = _load_run(a.run)
    v = eqc_check(_load_program(a.p1), _load_program(a.p2), run, a.window_size, a.budget)
    _emit(v.to_json(), a.out)
    return 0


def cmd_totalize(a) -> int:
    run = _load_run(a.run)
    t = totalize(_load_program(a.program), run, a.N, (lambda i: a.default) if a.default is not None
                 else (lambda i: i))
    _emit({"table": [[i, t.table[i], t.source[i]] for i in sorted(t.table)], "unresolved": t.unresolved},
          a.out)
    return 0 if not t.unresolved else 1


def cmd_check(a) -> int:
    spec = _load_spec(a.spec)
    try:
        t = SentenceTemplate.from_json(json.loads(a.sentence))
        r = realize(spec, a.stage)
        v = eval_sentence(t, r, a.budget, a.max_arity)
    except json.JSONDecodeError as e:
        raise UsageError(f"--sentence is not JSON: {e.msg}") from None
    except (TypeError, ValueError) as e:
        raise UsageError(str(e)) from None
    _emit({"sentence": t.id, "complexity": t.complexity, "stage": a.stage, "verdict": v.to_json()}, a.out)
    return 0


def cmd_suite(a) -> int:
    from .acceptance import run_all
    results = run_all(seed=a.seed, skip=set(a.skip or ()))
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.ok for r in results)
    _emit({"header": {"generated": time.strftime("%Y-%m-%dT%H:%M:%S")}, "seed": a.seed, "pass": ok,
           "criteria": [r.to_json() for r in results]}, a.out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cohpow", description="Cohesive powers of computable structures.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--seed", type=int, default=0)
        return sp

    sp = add("classify", cmd_classify, "predict the power's invariants")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--spec")
    g.add_argument("--batch", help="classify every .json file in a directory")

    sp = add("realize", cmd_realize, "materialize a spec and read its invariants back")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--stage", type=int, required=True)
    sp.add_argument("--dump", choices=("elements", "tables"), default="tables")

    sp = add("witness", cmd_witness, "build and verify a witness family")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--family")
    sp.add_argument("--window", help="lo:hi (default: 50 indices past the largest threshold)")
    sp.add_argument("--budget", type=int, default=10**5)
    sp.add_argument("--m-max", type=int, default=3)
    sp.add_argument("--k-max", type=int, default=3, help="largest n or |z|")
    sp.add_argument("--report")

    sp = add("maximal-set", cmd_maximal, "run the maximal-set construction")
    sp.add_argument("--family", help="comma-separated engine names or a JSON file")
    sp.add_argument("--stages", type=int, required=True)
    sp.add_argument("--dump", choices=("markers", "estate-log"), default="markers")

    sp = add("eqc", cmd_eqc, "compare two programs on the complement window of a run")
    sp.add_argument("--run", required=True)
    sp.add_argument("--p1", required=True)
    sp.add_argument("--p2", required=True)
    sp.add_argument("--window", dest="window_size", type=int, default=20)
    sp.add_argument("--budget", type=int, default=10**4)

    sp = add("totalize", cmd_totalize, "totalize a program against a run")
    sp.add_argument("--run", required=True)
    sp.add_argument("--program", required=True)
    sp.add_argument("--N", type=int, default=200)
    sp.add_argument("--default", type=int, help="constant default a_i (default a_i = i)")

    sp = add("check", cmd_check, "evaluate a sentence template on a snapshot")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--stage", type=int, required=True)
    sp.add_argument("--sentence", required=True, help='JSON, e.g. {"shape": "CycleCharMember", "n": 1, "k": 2}')
    sp.add_argument("--budget", type=int, default=10**5)
    sp.add_argument("--max-arity", type=int, default=8)

    sp = add("suite", cmd_suite, "run the acceptance battery")
    sp.add_argument("--skip", type=int, action="append", help="criterion number to skip")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    for name in ("stage", "stages"):
        if getattr(a, name, 1) is not None and getattr(a, name, 1) < 1:
            print(f"error: --{name} must be >= 1", file=sys.stderr)
            return 2
    try:
        return a.fn(a)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
