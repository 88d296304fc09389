"""Step-bounded partial functions on the naturals, and Cantor pairing.

Programs are small immutable expression trees.  ``evaluate`` charges one step
per node visited and per structure-function application, so the outcome at a
given budget is deterministic and monotone in the budget.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Any, Callable, Protocol


def pair(k: int, n: int) -> int:
    return (k + n) * (k + n + 1) // 2 + n


def unpair(m: int) -> tuple[int, int]:
    w = (isqrt(8 * m + 1) - 1) // 2
    n = m - w * (w + 1) // 2
    return w - n, n


# ---------------------------------------------------------------- outcomes

@dataclass(frozen=True)
class Halt:
    value: int


class _Marker:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


STILL_RUNNING = _Marker("StillRunning")
UNDEFINED = _Marker("DefinedNowhereHere")


class _OutOfBudget(Exception):
    pass


class _Diverge(Exception):
    pass


# ---------------------------------------------------------------- handles

class StructureFn(Protocol):
    """Anything with a name and a partial unary ``apply`` (None = undefined)."""
    name: str

    def apply(self, x: int) -> int | None: ...


@dataclass(frozen=True)
class FnHandle:
    """Wraps a Python callable as a named structure function."""
    name: str
    fn: Callable[[int], int | None]

    def apply(self, x):
        return self.fn(x)


@dataclass(frozen=True)
class TableHandle:
    """Finite lookup table; undefined off the table."""
    name: str
    table: tuple[tuple[int, int], ...]

    @classmethod
    def from_dict(cls, name, d):
        return cls(name, tuple(sorted(d.items())))

    def apply(self, x):
        return dict(self.table).get(x)


# ---------------------------------------------------------------- expressions

class Expr:
    op: str = ""

    def args(self) -> tuple:
        return ()


@dataclass(frozen=True)
class Const(Expr):
    n: int
    op = "const"

    def args(self):
        return (self.n,)


@dataclass(frozen=True)
class Input(Expr):
    op = "input"


@dataclass(frozen=True)
class SearchVar(Expr):
    """The variable bound by the innermost enclosing BoundedSearch."""
    op = "var"


@dataclass(frozen=True)
class Undefined(Expr):
    op = "undefined"


@dataclass(frozen=True)
class _Bin(Expr):
    a: Expr
    b: Expr

    def args(self):
        return (self.a, self.b)


class Pair(_Bin):
    op = "pair"


class Add(_Bin):
    op = "add"


class Sub(_Bin):
    """Truncated subtraction."""
    op = "sub"


class Mul(_Bin):
    op = "mul"


class DivFloor(_Bin):
    op = "div"


@dataclass(frozen=True)
class ProjLeft(Expr):
    e: Expr
    op = "left"

    def args(self):
        return (self.e,)


@dataclass(frozen=True)
class ProjRight(Expr):
    e: Expr
    op = "right"

    def args(self):
        return (self.e,)


@dataclass(frozen=True)
class IfLess(Expr):
    a: Expr
    b: Expr
    then: Expr
    other: Expr
    op = "ifless"

    def args(self):
        return (self.a, self.b, self.then, self.other)


@dataclass(frozen=True)
class Apply(Expr):
    fn: Any
    e: Expr
    op = "apply"

    def args(self):
        return (self.fn, self.e)


@dataclass(frozen=True)
class Iterate(Expr):
    """Apply ``fn`` to ``start`` ``times`` times (use an inverse handle for negative powers)."""
    fn: Any
    times: Expr
    start: Expr
    op = "iterate"

    def args(self):
        return (self.fn, self.times, self.start)


@dataclass(frozen=True)
class NthOfClass(Expr):
    """n-th (1-based) element of the class of ``rep``; ``fn.nth(rep, n)`` does the lookup."""
    fn: Any
    rep: Expr
    n: Expr
    op = "nth"

    def args(self):
        return (self.fn, self.rep, self.n)


@dataclass(frozen=True)
class BoundedSearch(Expr):
    """Least j < max with pred(j) nonzero; undefined if none."""
    max: Expr
    pred: Expr
    op = "search"

    def args(self):
        return (self.max, self.pred)


OPS = {c.op: c for c in (Const, Input, SearchVar, Undefined, Pair, Add, Sub, Mul, DivFloor,
                         ProjLeft, ProjRight, IfLess, Apply, Iterate, NthOfClass, BoundedSearch)}


# ---------------------------------------------------------------- evaluation

class _Machine:
    def __init__(self, budget):
        self.left = budget

    def tick(self, n=1):
        self.left -= n
        if self.left < 0:
            raise _OutOfBudget

    def run(self, e: Expr, x: int, var: int | None) -> int:
        self.tick()
        op = e.op
        if op == "const":
            return e.n
        if op == "input":
            return x
        if op == "var":
            if var is None:
                raise _Diverge
            return var
        if op == "undefined":
            raise _Diverge
        if op in ("pair", "add", "sub", "mul", "div"):
            a = self.run(e.a, x, var)
            b = self.run(e.b, x, var)
            if op == "pair":
                return pair(a, b)
            if op == "add":
                return a + b
            if op == "sub":
                return max(a - b, 0)
            if op == "mul":
                return a * b
            if b == 0:
                raise _Diverge
            return a // b
        if op in ("left", "right"):
            k, n = unpair(self.run(e.e, x, var))
            return k if op == "left" else n
        if op == "ifless":
            a = self.run(e.a, x, var)
            b = self.run(e.b, x, var)
            return self.run(e.then if a < b else e.other, x, var)
        if op == "apply":
            v = self.run(e.e, x, var)
            self.tick()
            r = e.fn.apply(v)
            if r is None:
                raise _Diverge
            return r
        if op == "iterate":
            t = self.run(e.times, x, var)
            v = self.run(e.start, x, var)
            for _ in range(t):
                self.tick()
                v = e.fn.apply(v)
                if v is None:
                    raise _Diverge
            return v
        if op == "nth":
            rep = self.run(e.rep, x, var)
            n = self.run(e.n, x, var)
            self.tick()
            r = e.fn.nth(rep, n)
            if r is None:
                raise _Diverge
            return r
        if op == "search":
            m = self.run(e.max, x, var)
            for j in range(m):
                try:
                    if self.run(e.pred, x, j):
                        return j
                except _Diverge:
                    # a guard failing inside the predicate counts as false
                    continue
            raise _Diverge
        raise ValueError(f"unknown op {op!r}")


def evaluate(p: Expr, x: int, budget: int):
    """Halt(v), STILL_RUNNING or UNDEFINED."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    m = _Machine(budget)
    try:
        return Halt(m.run(p, x, None))
    except _OutOfBudget:
        return STILL_RUNNING
    except _Diverge:
        return UNDEFINED


def cost(p: Expr, x: int, cap: int = 10**7):
    """Least budget at which ``p`` resolves on ``x`` (None if not within ``cap``)."""
    m = _Machine(cap)
    try:
        m.run(p, x, None)
    except _OutOfBudget:
        return None
    except _Diverge:
        pass
    return cap - m.left


# ---------------------------------------------------------------- JSON

def to_json(e: Expr) -> dict:
    out = []
    for a in e.args():
        if isinstance(a, Expr):
            out.append(to_json(a))
        elif isinstance(a, int):
            out.append(a)
        else:
            out.append({"handle": a.name})
    return {"op": e.op, "args": out}


def from_json(d: Any, handles: dict | None = None, path: str = "$") -> Expr:
    from .core import SpecError

    handles = handles or {}
    if not isinstance(d, dict) or d.get("op") not in OPS:
        raise SpecError(path, f"expected program object with op in {sorted(OPS)}")
    cls = OPS[d["op"]]
    raw = d.get("args", [])
    if not isinstance(raw, list):
        raise SpecError(path + ".args", "args must be a list")
    args = []
    for i, a in enumerate(raw):
        p = f"{path}.args[{i}]"
        if isinstance(a, dict) and "handle" in a:
            if a["handle"] not in handles:
                raise SpecError(p, f"unknown handle {a['handle']!r}")
            args.append(handles[a["handle"]])
        elif isinstance(a, dict):
            args.append(from_json(a, handles, p))
        elif isinstance(a, int) and not isinstance(a, bool) and a >= 0:
            args.append(a)
        else:
            raise SpecError(p, f"bad argument {a!r}")
    try:
        return cls(*args)
    except TypeError as exc:
        raise SpecError(path, f"wrong arity for {d['op']!r}: {exc}") from None


# ---------------------------------------------------------------- helpers

def parity(e: Expr) -> Expr:
    """e mod 2 built from the primitive ops."""
    return Sub(e, Mul(Const(2), DivFloor(e, Const(2))))


def guard_le(lhs: Expr, rhs: Expr, body: Expr) -> Expr:
    """body if lhs <= rhs, undefined otherwise."""
    return IfLess(rhs, lhs, Undefined(), body)
