"""Maximal-set construction by e-states, stage-relative =_C checks, totalization.

A c.e. set is modelled by an engine that knows, for each x, the stage at
which x gets enumerated (``enum_stage``); the set enumerated by stage s is
``{x < s : enum_stage(x) <= s}``.  That makes every engine monotone in s and
lets the maximal-set run jump straight between stages where something
actually changes.

The run lives inside a finite universe ``[0, universe)``: markers never move
past it.  Within that universe the construction is the textbook one: marker
i moves to the first later complement element with the largest i-state,
every element skipped over goes into E, and lower-priority markers are
re-packed onto the next free elements (they are *injured*).
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from math import isqrt
from typing import Callable, Sequence

import numpy as np

from . import interp
from .interp import Const, Expr, Halt, STILL_RUNNING, UNDEFINED, evaluate


# ---------------------------------------------------------------- engines

class Engine:
    """A c.e. set given by the stage at which each element is enumerated."""

    def enum_stage(self, x: int, horizon: int) -> int | None:
        """Stage at which x is enumerated, or None if not by ``horizon``."""
        raise NotImplementedError

    def enumerated(self, s: int) -> set[int]:
        return {x for x in range(s) if (t := self.enum_stage(x, s)) is not None and t <= s}

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass
class PredicateEngine(Engine):
    """x enters at stage x+1 when the predicate holds."""
    name: str
    pred: Callable[[int], bool]
    cheap = True

    def enum_stage(self, x, horizon):
        t = x + 1
        return t if t <= horizon and self.pred(x) else None

    def to_json(self):
        return {"engine": "builtin", "name": self.name}


@dataclass
class ResidueEngine(Engine):
    modulus: int
    residue: int
    cheap = True

    @property
    def name(self):
        return f"res{self.residue}mod{self.modulus}"

    def enum_stage(self, x, horizon):
        t = x + 1
        return t if t <= horizon and x % self.modulus == self.residue else None

    def to_json(self):
        return {"engine": "residue", "modulus": self.modulus, "residue": self.residue}


@dataclass
class HaltingEngine(Engine):
    """Domain of a PartialFnProgram: x enters once p(x) halts within the stage as budget."""
    program: Expr
    name: str = "halting"

    def enum_stage(self, x, horizon):
        c = interp.cost(self.program, x, cap=horizon)
        if c is None or evaluate(self.program, x, max(c, 1)) is UNDEFINED:
            return None
        t = max(x + 1, c)
        return t if t <= horizon else None

    def to_json(self):
        return {"engine": "halting", "program": interp.to_json(self.program)}


# Register machine: registers r0 (input), r1, r2, ...; instructions
#   ("inc", r, _)  ("dec", r, _)   truncated
#   ("jz", r, target)  jump if register r is zero
#   ("jmp", _, target)
# Running off the end halts.  A jump to itself is an explicit infinite loop.
URM_PROGRAMS = {
    # halts iff the input is triangular: subtract 1, 2, 3, ... from r0 until it
    # hits 0 exactly (halt) or runs out mid-subtraction (self-loop)
    "triangular": [
        ("jz", 0, 17),   # 0: r0 == 0 -> halt
        ("inc", 1, 0),   # 1: k += 1
        ("jz", 1, 7),    # 2: copy r1 into r2 and r3
        ("dec", 1, 0),   # 3
        ("inc", 2, 0),   # 4
        ("inc", 3, 0),   # 5
        ("jmp", 0, 2),   # 6
        ("jz", 3, 11),   # 7: restore r1 from r3
        ("dec", 3, 0),   # 8
        ("inc", 1, 0),   # 9
        ("jmp", 0, 7),   # 10
        ("jz", 2, 0),    # 11: subtract r2 from r0
        ("jz", 0, 16),   # 12
        ("dec", 0, 0),   # 13
        ("dec", 2, 0),   # 14
        ("jmp", 0, 11),  # 15
        ("jmp", 0, 16),  # 16: not triangular
    ],
}


@dataclass
class URMEngine(Engine):
    """W_e for a tiny register machine: x enters at stage max(x+1, steps to halt)."""
    program: Sequence[tuple]
    name: str = "urm"
    _cache: dict = field(default_factory=dict, repr=False)

    def _loops(self):
        # Transfer loops "jz g1; ...; jz gk; dec/inc ...; jmp back" where each
        # guard register is decremented exactly once and everything else is
        # only incremented: n full iterations can be applied at once.
        loops = {}
        prog = list(self.program)
        for p in range(len(prog)):
            guards, q = [], p
            while q < len(prog) and prog[q][0] == "jz":
                guards.append(prog[q][1])
                q += 1
            if not guards:
                continue
            decs, incs = [], []
            while q < len(prog) and prog[q][0] in ("inc", "dec"):
                (decs if prog[q][0] == "dec" else incs).append(prog[q][1])
                q += 1
            if (q < len(prog) and prog[q][0] == "jmp" and prog[q][2] == p
                    and sorted(decs) == sorted(set(guards)) and len(set(guards)) == len(guards)
                    and not set(incs) & set(guards)):
                loops[p] = (guards, incs, q - p + 1)
        return loops

    def _run(self, x, horizon):
        # cache: x -> [halt_steps | None, steps_done, pc, regs, looping]
        st = self._cache.get(x)
        if st is None:
            nreg = 1 + max(max(r for _, r, _ in self.program), 0)
            st = [None, 0, 0, [x] + [0] * nreg, False]
            self._cache[x] = st
        if st[0] is not None or st[4] or st[1] >= horizon:
            return st[0]
        if "_loopmap" not in self.__dict__:
            self._loopmap = self._loops()
        loops = self._loopmap
        ops = [op for op, _, _ in self.program]
        regs_ix = [r for _, r, _ in self.program]
        tgt = [t for _, _, t in self.program]
        n = len(ops)
        steps, pc, regs = st[1], st[2], st[3]
        while steps < horizon:
            if pc >= n:
                st[0] = steps
                break
            lp = loops.get(pc)
            if lp is not None:
                guards, incs, length = lp
                k = min(regs[g] for g in guards)
                k = min(k, (horizon - steps) // length)
                if k > 0:
                    for g in guards:
                        regs[g] -= k
                    for r in incs:
                        regs[r] += k
                    steps += k * length
                    continue
            op = ops[pc]
            steps += 1
            if op == "dec":
                r = regs_ix[pc]
                if regs[r]:
                    regs[r] -= 1
                pc += 1
            elif op == "jz":
                pc = tgt[pc] if regs[regs_ix[pc]] == 0 else pc + 1
            elif op == "inc":
                regs[regs_ix[pc]] += 1
                pc += 1
            else:
                if tgt[pc] == pc:
                    st[4] = True
                    break
                pc = tgt[pc]
        st[1], st[2] = steps, pc
        return st[0]

    def run_plain(self, x, horizon):
        """Reference interpreter without the loop fast path (for testing)."""
        regs = [x] + [0] * (1 + max(r for _, r, _ in self.program))
        pc = steps = 0
        prog = self.program
        while steps < horizon:
            if pc >= len(prog):
                return steps
            op, r, t = prog[pc]
            steps += 1
            if op == "inc":
                regs[r] += 1
                pc += 1
            elif op == "dec":
                regs[r] = max(regs[r] - 1, 0)
                pc += 1
            elif op == "jz":
                pc = t if regs[r] == 0 else pc + 1
            else:
                if t == pc:
                    return None
                pc = t
        return None

    def enum_stage(self, x, horizon):
        h = self._run(x, horizon)
        if h is None:
            return None
        t = max(x + 1, h)
        return t if t <= horizon else None

    def to_json(self):
        return {"engine": "urm", "program": [list(i) for i in self.program]}


def _is_prime(x):
    return x >= 2 and all(x % d for d in range(2, isqrt(x) + 1))


def _square_program() -> Expr:
    # defined iff x is a perfect square: search j < x//64 + 17 (>= sqrt(x)) with j*j == x
    x, j = interp.Input(), interp.SearchVar()
    eq = interp.IfLess(interp.Mul(j, j), x, Const(0),
                       interp.IfLess(x, interp.Mul(j, j), Const(0), Const(1)))
    return interp.BoundedSearch(interp.Add(interp.DivFloor(x, Const(64)), Const(17)), eq)


BUILTIN_ENGINES: dict[str, Callable[[], Engine]] = {
    "evens": lambda: ResidueEngine(2, 0),
    "odds": lambda: ResidueEngine(2, 1),
    "mult3": lambda: ResidueEngine(3, 0),
    "primes": lambda: PredicateEngine("primes", _is_prime),
    "res1mod4": lambda: ResidueEngine(4, 1),
    "mult5": lambda: ResidueEngine(5, 0),
    "squares": lambda: HaltingEngine(_square_program(), "squares"),
    "triangular": lambda: URMEngine(URM_PROGRAMS["triangular"], "triangular"),
    "res2mod7": lambda: ResidueEngine(7, 2),
}

DEFAULT_FAMILY = ("evens", "mult3", "primes", "res1mod4", "mult5", "res2mod7", "squares", "triangular")


def make_family(spec: Sequence) -> list[Engine]:
    """Engines from names or JSON engine descriptions."""
    out = []
    for item in spec:
        if isinstance(item, Engine):
            out.append(item)
        elif isinstance(item, str):
            if item not in BUILTIN_ENGINES:
                raise ValueError(f"unknown engine {item!r}")
            out.append(BUILTIN_ENGINES[item]())
        elif isinstance(item, dict):
            kind = item.get("engine")
            if kind == "builtin":
                out.append(BUILTIN_ENGINES[item["name"]]())
            elif kind == "residue":
                out.append(ResidueEngine(item["modulus"], item["residue"]))
            elif kind == "halting":
                out.append(HaltingEngine(interp.from_json(item["program"])))
            elif kind == "urm":
                out.append(URMEngine([tuple(i) for i in item["program"]]))
            else:
                raise ValueError(f"unknown engine description {item!r}")
        else:
            raise ValueError(f"bad engine {item!r}")
    return out


def family_to_json(family) -> list:
    return [e.to_json() for e in family]


# ---------------------------------------------------------------- maximal set

@dataclass
class LogEntry:
    stage: int
    element: int
    estate: str
    event: str  # "start" | "move" | "enum" | "injured"


@dataclass
class MaximalRun:
    family: list
    stage: int
    universe: int
    markers: list[int]
    enumerated_E: dict[int, int]  # element -> stage it entered E
    estate_log: list[list[LogEntry]]
    moves: list[int]
    last_move_stage: list[int]
    n_report: int

    def reported_markers(self) -> list[int]:
        return self.markers[: self.n_report]

    def estate(self, x: int, upto: int | None = None, stage: int | None = None) -> str:
        s = self.stage if stage is None else stage
        gens = self.family if upto is None else self.family[: upto + 1]
        return "".join("1" if (t := e.enum_stage(x, s)) is not None and t <= s and x < s else "0"
                       for e in gens)

    def in_E(self, x: int, stage: int | None = None) -> bool:
        t = self.enumerated_E.get(x)
        return t is not None and (stage is None or t <= stage)

    def complement_window(self, bound: int) -> list[int]:
        out, x = [], 0
        while len(out) < bound:
            if x not in self.enumerated_E:
                out.append(x)
            x += 1
        return out

    def to_json(self) -> dict:
        return {
            "schema_version": "1",
            "family": family_to_json(self.family),
            "stage": self.stage,
            "universe": self.universe,
            "markers": self.markers,
            "n_report": self.n_report,
            "enumerated_E": sorted([x, s] for x, s in self.enumerated_E.items()),
            "moves": self.moves,
            "last_move_stage": self.last_move_stage,
        }

    @classmethod
    def from_json(cls, d: dict) -> "MaximalRun":
        return cls(make_family(d["family"]), d["stage"], d["universe"], list(d["markers"]),
                   {x: s for x, s in d["enumerated_E"]}, [[] for _ in d["markers"]],
                   list(d["moves"]), list(d["last_move_stage"]), d["n_report"])


def run_maximal(family, stages: int, markers: int = 24, universe: int = 8192,
                pool: int | None = None) -> MaximalRun:
    """Run the e-state construction for ``stages`` stages.

    ``markers`` are reported; ``pool`` (default 2*markers) are maintained so the
    reported ones always have later competitors to compare against.  Engines
    without a ``cheap`` flag are queried lazily: a generator's bit is only
    computed for elements that tie with the best candidate on every
    higher-priority generator, and computing it schedules the stage at which
    the bit flips as a future event.
    """
    family = make_family(family)
    if stages < 1 or not family:
        raise ValueError("need stages >= 1 and a nonempty family")
    pool = pool or 2 * markers
    G = len(family)
    never = stages + 1
    T = np.full((G, universe), -1, dtype=np.int64)
    changed: dict[int, set[int]] = {}
    heap: list[int] = []

    def add_event(t, x):
        if t not in changed:
            changed[t] = set()
            heapq.heappush(heap, t)
        changed[t].add(x)

    def known(g, xs):
        for x in xs:
            if T[g, x] < 0:
                t = family[g].enum_stage(int(x), stages)
                T[g, x] = never if t is None else t
                if t is not None:
                    add_event(t, int(x))

    for g, e in enumerate(family):
        if getattr(e, "cheap", False):
            known(g, range(universe))
    for x in range(min(universe, stages)):
        add_event(x + 1, x)

    def bit(g, x, s):
        if T[g, x] < 0:
            known(g, (x,))
        return x < s and T[g, x] <= s

    def estate(x, s):
        return "".join("1" if bit(g, x, s) else "0" for g in range(G))

    def lex_gt(y, x, s, upto):
        for g in range(upto + 1):
            by, bx = bit(g, y, s), bit(g, x, s)
            if by != bx:
                return by
        return False

    free = np.ones(universe, dtype=bool)
    idx = np.arange(universe)

    def best_after(x, s, upto):
        cand = free & (idx > x) & (idx < min(s, universe))
        xs = np.nonzero(cand)[0]
        if not len(xs):
            return None
        for g in range(upto + 1):
            unknown = xs[T[g, xs] < 0]
            if len(unknown):
                known(g, unknown)
            on = T[g, xs] <= s
            if on.any():
                xs = xs[on]
        return int(xs[0])

    pos = list(range(pool))
    E: dict[int, int] = {}
    log: list[list[LogEntry]] = [[LogEntry(1, x, estate(x, 1), "start")] for x in pos]
    moves = [0] * pool
    last_move = [0] * pool

    s = 1
    full_scan = True
    while True:
        news = changed.get(s, ())
        moved = False
        i = 0
        while i < len(pos):
            x = pos[i]
            upto = min(i, G - 1)
            if full_scan or any(free[y] and x < y < s and lex_gt(y, x, s, upto) for y in news):
                y = best_after(x, s, upto)
                if y is not None and lex_gt(y, x, s, upto):
                    for z in range(x, y):
                        if free[z]:
                            free[z] = False
                            E[z] = s
                    pos[i] = y
                    moves[i] += 1
                    last_move[i] = s
                    log[i].append(LogEntry(s, y, estate(y, s), "move"))
                    # re-pack lower-priority markers onto the next free elements
                    nxt = y + 1
                    for j in range(i + 1, len(pos)):
                        while nxt < universe and not free[nxt]:
                            nxt += 1
                        if nxt >= universe:
                            del pos[j:]
                            break
                        if pos[j] != nxt:
                            pos[j] = nxt
                            log[j].append(LogEntry(s, nxt, estate(nxt, s), "injured"))
                        nxt += 1
                    moved = True
                    full_scan = True
            i += 1
        # enumeration-driven state changes of markers that stayed put
        for i, x in enumerate(pos):
            if x in news or full_scan:
                st = estate(x, s)
                if log[i][-1].element == x and log[i][-1].estate != st:
                    log[i].append(LogEntry(s, x, st, "enum"))
        if s >= stages:
            break
        if moved:
            s += 1
            full_scan = True
            continue
        full_scan = False
        while heap and heap[0] <= s:
            heapq.heappop(heap)
        s = heap[0] if heap and heap[0] <= stages else stages
        if s == stages:
            full_scan = True
    n_report = min(markers, len(pos))
    return MaximalRun(family, stages, universe, pos, E, log[: len(pos)], moves[: len(pos)],
                      last_move[: len(pos)], n_report)


def stable(run: MaximalRun) -> bool:
    """No marker could improve its e-state at the final stage (brute force)."""
    s, ms = run.stage, run.markers
    free = [x for x in range(min(s, run.universe)) if x not in run.enumerated_E]
    for i, x in enumerate(ms):
        upto = min(i, len(run.family) - 1)
        mine = run.estate(x, upto)
        if any(y > x and run.estate(y, upto) > mine for y in free):
            return False
    return True


def estate_monotone(run: MaximalRun) -> list[tuple[int, LogEntry, LogEntry]]:
    """Violations of lexicographic monotonicity between uninjured log neighbours."""
    bad = []
    for i, entries in enumerate(run.estate_log):
        for a, b in zip(entries, entries[1:]):
            if b.event != "injured" and b.estate < a.estate:
                bad.append((i, a, b))
    return bad


def settled(run: MaximalRun, upto: int, since: int) -> bool:
    """Markers 0..upto have not moved (nor been injured) at any stage > since."""
    for i in range(min(upto + 1, len(run.estate_log))):
        if any(e.stage > since and e.event in ("move", "injured") for e in run.estate_log[i]):
            return False
    return True


def cohesion_exceptions(run: MaximalRun) -> list[int]:
    """For each generator e, the minority size among reported markers with index > e."""
    out = []
    ms = run.reported_markers()
    for gi, eng in enumerate(run.family):
        inside = 0
        tail = ms[gi + 1:]
        for x in tail:
            t = eng.enum_stage(x, run.stage)
            if t is not None and t <= run.stage:
                inside += 1
        out.append(min(inside, len(tail) - inside))
    return out


# ---------------------------------------------------------------- =_C checks

@dataclass
class EqCVerdict:
    kind: str  # "agree" | "disagree" | "inconclusive"
    checked: list[int] = field(default_factory=list)
    witnesses: list[tuple[int, int, int]] = field(default_factory=list)
    pending: list[int] = field(default_factory=list)
    stage: int = 0
    window: int = 0
    budget: int = 0

    def to_json(self):
        return {"verdict": self.kind, "checked": self.checked,
                "witnesses": [list(w) for w in self.witnesses], "pending": self.pending,
                "stage": self.stage, "window": self.window, "budget": self.budget}


def eqc_check(p1: Expr, p2: Expr, run: MaximalRun, window: int, budget: int) -> EqCVerdict:
    """Compare two programs on the first ``window`` elements of the complement of E."""
    if window < 1:
        raise ValueError("window must be >= 1")
    checked, wit, pending = [], [], []
    for i in run.complement_window(window):
        a, b = evaluate(p1, i, budget), evaluate(p2, i, budget)
        if isinstance(a, Halt) and isinstance(b, Halt):
            if a.value == b.value:
                checked.append(i)
            else:
                wit.append((i, a.value, b.value))
        elif a is STILL_RUNNING or b is STILL_RUNNING:
            pending.append(i)
    kind = "disagree" if wit else ("inconclusive" if pending else "agree")
    return EqCVerdict(kind, checked, wit, pending, run.stage, window, budget)


@dataclass
class Totalized:
    table: dict[int, int]
    source: dict[int, str]  # "program" | "default"
    unresolved: list[int]

    def handle(self, name="totalized"):
        return interp.TableHandle.from_dict(name, self.table)

    def program(self, name="totalized") -> Expr:
        return interp.Apply(self.handle(name), interp.Input())


def totalize(p: Expr, run: MaximalRun, N: int, defaults: Callable[[int], int] = lambda i: i,
             budgets: Sequence[int] = (1, 4, 16, 64, 256, 1024, 4096)) -> Totalized:
    """Race p(i) against the enumeration of i into E, for i <= N.

    Round r runs p(i) with ``budgets[r]`` steps and asks whether i entered E by
    stage ``run.stage * (r+1) // len(budgets)``.  Program halting wins ties.
    """
    table, source, unresolved = {}, {}, []
    R = len(budgets)
    for i in range(N + 1):
        for r, b in enumerate(budgets):
            out = evaluate(p, i, b)
            if isinstance(out, Halt):
                table[i], source[i] = out.value, "program"
                break
            if run.in_E(i, run.stage * (r + 1) // R):
                table[i], source[i] = defaults(i), "default"
                break
        else:
            unresolved.append(i)
    return Totalized(table, source, unresolved)


def canonical_embed(a: int) -> Expr:
    return Const(a)


def dump_run(run: MaximalRun, what: str) -> str:
    if what == "markers":
        return json.dumps(run.to_json(), indent=1)
    return json.dumps({"schema_version": "1",
                       "estate_log": [[e.__dict__ for e in entries] for entries in run.estate_log]})
