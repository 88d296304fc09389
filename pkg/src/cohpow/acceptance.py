"""The acceptance battery: nine end-to-end checks, each timed against its limit."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .classifier import classify
from .cohesive import (DEFAULT_FAMILY, cohesion_exceptions, eqc_check, estate_monotone, run_maximal,
                       settled, totalize)
from .core import OMEGA, Character, TwoToOneSpec, invariant_fields, is_omega
from .interp import Const, IfLess, Input, Mul, Undefined, parity
from .logic import axioms_check, character_template, eval_sentence
from .realize import CHARACTER_FIELDS, Presentation, closure_stage, extract, realize
from .suite import check_entry, curated_suite
from .witness import build_slf_graph, spacing_window_size, verify_family, verify_graph_embedding, witnesses


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float
    details: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds < self.limit

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "" if self.passed else f" ({len(self.details)} problems, first: {self.details[:1]})"
        timing = f"{self.seconds:.2f}s < {self.limit:g}s" if self.seconds < self.limit else \
            f"{self.seconds:.2f}s exceeds {self.limit:g}s"
        return f"[{status}] {self.number}. {self.name}: {timing}{extra}"

    def to_json(self):
        return {"criterion": self.number, "name": self.name, "pass": self.ok, "seconds": round(self.seconds, 3),
                "limit": self.limit, "details": [str(d) for d in self.details[:20]]}


def _timed(number, name, limit, fn: Callable[[], list]) -> CriterionResult:
    t = time.perf_counter()
    problems = fn()
    return CriterionResult(number, name, not problems, time.perf_counter() - t, limit, problems)


def classification_fidelity() -> list:
    suite = curated_suite()
    problems = []
    kinds = {}
    for e in suite:
        kinds[e.spec.kind] = kinds.get(e.spec.kind, 0) + 1
        problems += [f"{e.name}: {d}" for d in check_entry(e, classify(e.spec))]
    if len(suite) < 20:
        problems.append(f"suite has {len(suite)} specs")
    problems += [f"{k}: only {n} specs" for k, n in kinds.items() if n < 4]
    if len(kinds) < 5:
        problems.append(f"classes covered: {sorted(kinds)}")
    return problems


def fixed_point() -> list:
    problems = []
    for e in curated_suite():
        rep = classify(e.spec)
        if rep.fully_determined():
            again = classify(rep.power_spec())
            if again.isomorphic_to_original != "yes":
                problems.append(f"{e.name}: power reclassifies as {again.isomorphic_to_original}")
    return problems


def witness_windows(bound: int = 5) -> list:
    problems = []
    for e in curated_suite():
        P = Presentation(e.spec)
        for kind in e.families:
            for res in verify_family(witnesses(P, kind, bound, bound)):
                if not res.passed or res.inconclusive or res.window[1] - res.window[0] < 50:
                    problems.append(f"{e.name}/{kind}: {res.claim} threshold {res.threshold} "
                                    f"window {res.window} {res.counterexamples[:1]}")
    return problems


def spacing_identity(m_max: int = 8) -> list:
    P = Presentation(TwoToOneSpec(cycle_character=Character.of({1: 1})))
    return [f"m={m}: {spacing_window_size(P, m)} != {(m + 1) ** 2}"
            for m in range(m_max + 1) if spacing_window_size(P, m) != (m + 1) ** 2]


def random_graph(seed: int, n: int = 30, p: float = 0.3) -> np.ndarray:
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < p, 1)
    return upper | upper.T


def _related(adj: np.ndarray):
    n = adj.shape[0]
    return lambda a, b: 1 <= a <= n and 1 <= b <= n and bool(adj[a - 1, b - 1])


def graph_embedding(seed: int = 0, window=(0, 60), max_vertex: int = 10) -> list:
    graphs = {f"random[{seed + i}]": _related(random_graph(seed + i)) for i in range(10)}
    graphs["path"] = lambda a, b: abs(a - b) == 1
    graphs["edgeless"] = lambda a, b: False
    pairs = [(a, b) for a in range(1, max_vertex + 1) for b in range(1, max_vertex + 1)]
    problems = []
    for name, rel in graphs.items():
        g = build_slf_graph(rel, (window[1] + 1) * (window[1] + 2) // 2)
        res = verify_graph_embedding(g, pairs, window)
        if not res.passed or res.inconclusive:
            problems.append(f"{name}: {res.counterexamples[:1]}")
    return problems


def maximal_set(stages: int = 10**5) -> list:
    run = run_maximal(list(DEFAULT_FAMILY), stages)
    problems = []
    bad = estate_monotone(run)
    if bad:
        problems.append(f"{len(bad)} e-state decreases, first at marker {bad[0][0]}")
    if not settled(run, 4, stages - stages // 2):
        problems.append("markers 0..4 moved during the final half of the run")
    for e, n in enumerate(cohesion_exceptions(run)):
        if n > e:
            problems.append(f"generator {e}: {n} exceptions > {e}")
    return problems


def evens_only_program():
    """x*x on even x, undefined on odd x."""
    return IfLess(parity(Input()), Const(1), Mul(Input(), Input()), Undefined())


def totalization(N: int = 200) -> list:
    run = run_maximal(["evens"], 4 * N, markers=128)
    problems = [f"odd {x} not enumerated into E" for x in range(1, N + 1, 2) if not run.in_E(x)]
    p = evens_only_program()
    tot = totalize(p, run, N, defaults=lambda i: 0)
    if tot.unresolved:
        problems.append(f"unresolved indices {tot.unresolved[:5]}")
    for i in range(N + 1):
        want = i * i if i % 2 == 0 else 0
        if tot.table.get(i) != want:
            problems.append(f"table[{i}] = {tot.table.get(i)}, want {want}")
    window = len([x for x in run.complement_window(N) if x <= N])
    v = eqc_check(p, tot.program(), run, window, 10**4)
    if v.kind != "agree" or len(v.checked) != window:
        problems.append(f"eqc verdict {v.kind}, checked {len(v.checked)} of {window}")
    return problems


def oracle_triangle(k_max: int = 6, n_max: int = 6) -> list:
    problems = []
    for e in curated_suite():
        s = e.spec
        rep = classify(s)
        r = realize(s, closure_stage(s, k_max, n_max))
        got = extract(r).fields
        for name in CHARACTER_FIELDS[s.kind]:
            echoed = getattr(rep.input, name)
            for k in range(1, k_max + 1):
                t = got[name].get(k)
                for n in range(1, n_max + 1):
                    a = n <= echoed.count(k)
                    verdict = eval_sentence(character_template(s.kind, name, k, n), r,
                                            max_arity=k_max + n_max).value
                    sides = {"classifier": a, "logic": verdict == "true"}
                    if t.exact:
                        sides["extract"] = n <= t.value
                    elif t.value < min(echoed.count(k), n_max):
                        sides["extract"] = False
                    if verdict == "boundary" or len(set(sides.values())) > 1:
                        problems.append(f"{e.name} {name}<{k},{n}>: {sides} logic={verdict}")
    return problems


def axiom_preservation() -> list:
    problems = []
    for e in curated_suite():
        s = e.spec
        v = axioms_check(s.kind, realize(s, 6))
        if v.value != "true":
            problems.append(f"{e.name}: axioms {v.value} {v.note}")
        rep = classify(s)
        if set(rep.power_invariants) != set(invariant_fields(s)):
            problems.append(f"{e.name}: power fields {sorted(rep.power_invariants)}")
        for name, fv in rep.power_invariants.items():
            val = getattr(fv, "value", None)
            if val is None:
                continue
            if isinstance(getattr(s, name), Character) != isinstance(val, Character):
                problems.append(f"{e.name}: {name} has the wrong type")
            elif not isinstance(val, Character) and not (is_omega(val) or (isinstance(val, int) and val >= 0)):
                problems.append(f"{e.name}: {name} = {val!r} is not a count")
        if rep.fully_determined() and type(rep.power_spec()) is not type(s):
            problems.append(f"{e.name}: predicted power is not a {s.kind} spec")
    return problems


CRITERIA = [
    (1, "classification fidelity", 5, classification_fidelity),
    (2, "fixed-point property", 1, fixed_point),
    (3, "witness windows", 60, witness_windows),
    (4, "spacing identity", 5, spacing_identity),
    (5, "graph embedding", 30, graph_embedding),
    (6, "maximal-set behavior", 120, maximal_set),
    (7, "totalization", 5, totalization),
    (8, "oracle triangle", 60, oracle_triangle),
    (9, "axiom preservation", 5, axiom_preservation),
]


def run_criterion(number: int, **kw) -> CriterionResult:
    n, name, limit, fn = CRITERIA[number - 1]
    return _timed(n, name, limit, lambda: fn(**kw))


def run_all(seed: int = 0, skip=()) -> list[CriterionResult]:
    out = []
    for n, name, limit, fn in CRITERIA:
        if n in skip:
            continue
        out.append(_timed(n, name, limit, (lambda: fn(seed=seed)) if fn is graph_embedding else fn))
    return out
