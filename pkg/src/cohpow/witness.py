"""Witness families of partial computable functions and finite-window checks.

A witness family is an indexed set of interpreted programs psi.  The claims
about their classes in the cohesive power ("equal for almost every i",
"differ for almost every i") are rendered as: a computed threshold i0 plus a
check that the claim holds at every index of a window [lo, hi].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt
from typing import Callable

from .core import EquivalenceSpec, InjectionSpec, PartialInjectionSpec, TwoToOneSpec, TwoZeroToOneSpec
from .interp import (STILL_RUNNING, UNDEFINED, Add, Apply, Const, DivFloor, Expr, FnHandle, Halt,
                     IfLess, Input, Iterate, Mul, NthOfClass, Pair, Sub, evaluate, guard_le, pair)
from .realize import Presentation, Realization, handles, zig

FAMILY_KINDS = ("EqvInfiniteClass", "InjZChain_unboundedChar", "InjZChain_infiniteOrbit",
                "TwoToOneZChain", "TwoZeroOneZChain", "OmegaChain_ranComputable",
                "OmegaStarChain_domComputable", "GraphEmbedding")


@dataclass
class WindowCheckResult:
    claim: str
    window: tuple[int, int]
    threshold: int
    counterexamples: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.counterexamples and self.threshold <= self.window[0]

    def to_json(self):
        return {"claim": self.claim, "window": list(self.window), "threshold": self.threshold,
                "pass": self.passed, "counterexamples": self.counterexamples[:20],
                "inconclusive": self.inconclusive[:20], "note": self.note}


def _result(claim, window, bad_at: dict, inconclusive, note="") -> WindowCheckResult:
    """``bad_at`` maps every failing index in [0, hi] to a description."""
    lo, hi = window
    threshold = max(bad_at, default=-1) + 1
    cex = [{"i": i, "detail": d} for i, d in sorted(bad_at.items()) if lo <= i <= hi]
    return WindowCheckResult(claim, window, threshold, cex, inconclusive, note)


# ---------------------------------------------------------------- graphs

def segment(a: int) -> tuple[int, int]:
    """(k, m) with a = k(k+1)/2 + m and 1 <= m <= k+1 (a >= 1)."""
    if a < 1:
        raise ValueError("vertices start at 1")
    k = (isqrt(8 * a + 1) - 1) // 2  # largest k with k(k+1)/2 <= a
    m = a - k * (k + 1) // 2
    if m == 0:
        k -= 1
        m = k + 1
    return k, m


@dataclass
class SLFGraph:
    """Strongly locally finite copy of a graph, one segment per size 1, 2, 3, ...

    ``related(m, n)`` says whether the m-th and n-th vertices of the source
    graph (1-based enumeration) are adjacent.
    """
    related: Callable[[int, int], bool]
    bound: int
    edges: frozenset = frozenset()

    def adjacent(self, a: int, b: int) -> bool:
        (k1, m), (k2, n) = segment(a), segment(b)
        return k1 == k2 and a != b and bool(self.related(m, n))


def build_slf_graph(related: Callable[[int, int], bool], bound: int) -> SLFGraph:
    if bound < 1:
        raise ValueError("bound must be >= 1")
    g = SLFGraph(related, bound)
    edges = set()
    for a in range(1, bound + 1):
        k, m = segment(a)
        base = k * (k + 1) // 2
        for n in range(m + 1, k + 2):
            b = base + n
            if b <= bound and related(m, n):
                edges.add((a, b))
    g.edges = frozenset(edges)
    return g


def graph_psi(n: int) -> Expr:
    """x(x+1)/2 + n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    x = Input()
    return Add(DivFloor(Mul(x, Add(x, Const(1))), Const(2)), Const(n))


def verify_graph_embedding(g: SLFGraph, pairs, window=(1, 30), budget: int = 10**4) -> WindowCheckResult:
    """E(psi_n(x), psi_n'(x)) iff the source vertices n, n' are adjacent, at every valid x."""
    lo, hi = window
    bad, inc = {}, []
    for n1, n2 in pairs:
        p1, p2 = graph_psi(n1), graph_psi(n2)
        for x in range(0, hi + 1):
            if max(n1, n2) > x + 1:
                continue  # offset outside segment x: not a valid point
            r1, r2 = evaluate(p1, x, budget), evaluate(p2, x, budget)
            if not (isinstance(r1, Halt) and isinstance(r2, Halt)):
                inc.append({"i": x, "pair": [n1, n2]})
                continue
            want = n1 != n2 and bool(g.related(n1, n2))
            if g.adjacent(r1.value, r2.value) != want:
                bad[x] = f"pair ({n1},{n2}): E({r1.value},{r2.value}) != R(f({n1}),f({n2}))"
    return _result(f"graph-embedding{list(map(list, pairs))}", window, bad, inc,
                   "valid points need both offsets <= x+1")


# ---------------------------------------------------------------- selections

def _next_key(view, lo: int) -> int:
    """Least size >= lo with a nonzero count."""
    char = getattr(view, "char", view)
    k = lo - 1
    while True:
        k = char.least_key_above(k)
        if k is None:
            raise ValueError("character is bounded: no witness sequence exists")
        if view.count(k) != 0:
            return k


class _Increasing:
    """s_0 < s_1 < ... with s_n the least key >= lower(n) above s_{n-1}."""

    def __init__(self, view, lower: Callable[[int], int]):
        self.view, self.lower, self.keys = view, lower, []

    def __call__(self, n: int) -> int:
        while len(self.keys) <= n:
            i = len(self.keys)
            prev = self.keys[-1] if self.keys else 0
            self.keys.append(_next_key(self.view, max(self.lower(i), prev + 1)))
        return self.keys[n]


def _fam(P: Presentation, tag: str):
    return dict(P.finite_fams)[tag]


def _block(P: Presentation, tag, key, copy=0):
    b = P.find_block(tag, key, copy)
    if b is None:
        raise ValueError(f"no {tag} block of key {key} copy {copy}")
    return b


def class_representatives(P: Presentation) -> Callable[[int], int]:
    """a(k): first element of a class of size > k, in distinct classes."""
    sizes = _Increasing(_fam(P, "class"), lambda k: k + 1)
    return lambda k: pair(_block(P, "class", sizes(k)).index, 0)


def orbit_representatives(P: Presentation) -> Callable[[int], int]:
    """a(k): an element of a finite orbit of size > k, in distinct orbits."""
    sizes = _Increasing(_fam(P, "cycle"), lambda k: k + 1)
    return lambda k: P.encode(_block(P, "cycle", sizes(k)), 0)


def _heap_rl(n: int) -> int:
    """Heap index of the node reached from the root by n right steps then n left steps."""
    v = 0
    for _ in range(n):
        v = 2 * v + 2
    for _ in range(n):
        v = 2 * v + 1
    return v


def z_selector(P: Presentation) -> Callable[[int], int]:
    """g with |{f^z(g(n)) : |z| <= n <= m}| = (m+1)^2 under the canonical inverse."""
    if P.kind == "two-to-one":
        b = P.block(0)
        return lambda n: P.encode(b, 0, _heap_rl(n))
    if P.kind != "two-zero-to-one":
        raise ValueError("spacing functions are for 2:1 and (2,0):1 structures")
    spec = P.spec
    if spec.z_chains != 0 or spec.omega_chains != 0:
        # backbone windows [n^2+n, n^2+3n] are disjoint; the canonical inverse
        # of a backbone node with a predecessor is that predecessor
        tag = "z" if spec.z_chains != 0 else "omega"
        b = _block(P, tag, None)
        code = zig if tag == "z" else (lambda u: u)
        return lambda n: P.encode(b, code(n * n + 2 * n))
    if not P.cats.bounded():
        depths = _Increasing(_fam(P, "cat"), lambda n: 2 * n + 1)
        # spine node n+1 of a caterpillar deep enough for n steps down the spine
        return lambda n: P.encode(_block(P, "cat", depths(n)), 0, 2 ** n - 1)
    cycles = _fam(P, "cycle")
    if not cycles.bounded():
        sizes = _Increasing(cycles, lambda n: 2 * n + 1)
        return lambda n: P.encode(_block(P, "cycle", sizes(n)), n)
    raise ValueError("bounded path character and no infinite orbit: no Z-chain witnesses")


def omega_selector(P: Presentation) -> Callable[[int], int]:
    """g into A - f(A) with disjoint forward windows {f^k(g(n)) : k <= n}."""
    spec = P.spec
    if P.kind == "partial-injection":
        if not spec.range_computable:
            raise ValueError("needs a computable range")
        sizes = _Increasing(_fam(P, "chain"), lambda n: n + 1)
        return lambda n: P.encode(_block(P, "chain", sizes(n)), 0)
    if P.kind != "two-zero-to-one":
        raise ValueError("omega-chain witnesses are for (2,0):1 and partial injection structures")
    if not spec.highly_computable:
        raise ValueError("needs a highly computable structure (computable range)")
    if P.tree == "leaf":
        tag = "z" if spec.z_chains != 0 else "omega"
        b = _block(P, tag, None)
        code = zig if tag == "z" else (lambda p: p + 1)
        # leaf hanging off backbone position n(n+1)/2; windows are disjoint intervals
        return lambda n: P.encode(b, code(n * (n + 1) // 2), 0)
    if spec.omega_chains == float("inf"):
        return lambda n: P.encode(_block(P, "omega", None, n), 0)
    if not P.cats.bounded():
        depths = _Increasing(_fam(P, "cat"), lambda n: max(n, 1))
        return lambda n: P.encode(_block(P, "cat", depths(n)), 0, 2 ** (depths(n) - 1) - 1)
    cycles = _fam(P, "cycle")
    if not cycles.bounded():
        sizes = _Increasing(cycles, lambda n: max(n, 1))
        return lambda n: P.encode(_block(P, "cycle", sizes(n)), 0, 0)
    raise ValueError("bounded endpath character and finitely many infinite-length endpoints")


def omega_star_selector(P: Presentation) -> Callable[[int], int]:
    """g outside dom(f) with disjoint backward windows."""
    if P.kind != "partial-injection":
        raise ValueError("omega*-chain witnesses are for partial injection structures")
    if not P.spec.domain_computable:
        raise ValueError("needs a computable domain")
    sizes = _Increasing(_fam(P, "chain"), lambda n: n + 1)

    def g(n):
        k = sizes(n)
        return P.encode(_block(P, "chain", k), k - 1)
    return g


def spacing_g(r, n: int) -> int:
    """g(n) for a 2:1 or (2,0):1 realization (or presentation).

    With a Realization, n is rejected unless the whole window of g(n) is
    materialized.
    """
    P = r.presentation if isinstance(r, Realization) else r
    x = z_selector(P)(n)
    if isinstance(r, Realization):
        window = _z_window(P, x, n)
        if any(y not in r.block_of for y in window):
            raise ValueError(f"window of g({n}) goes beyond the materialized depth")
    return x


def _z_window(P: Presentation, x: int, n: int) -> list[int]:
    out = [x]
    up = down = x
    for _ in range(n):
        up = P.f(up) if up is not None else None
        down = P.inverse(down) if down is not None else None
        out += [y for y in (up, down) if y is not None]
    return out


def spacing_window_size(P: Presentation, m: int) -> int:
    """|{f^z(g(n)) : defined, -n <= z <= n, 0 <= n <= m}|."""
    g = z_selector(P)
    seen = set()
    for n in range(m + 1):
        seen.update(_z_window(P, g(n), n))
    return len(seen)


# ---------------------------------------------------------------- families

@dataclass
class WitnessFamily:
    """psi_{m,k} for 0 <= m <= m_max and k in ``indices``.

    ``relation`` names the same-m law: "class" (same equivalence class),
    "successor" (f(psi_{m,k}) = psi_{m,k+1}) or "predecessor"
    (f(psi_{m,k+1}) = psi_{m,k}).  ``guard(m, k, x)`` is the definedness
    condition of guarded formulas, None for cofinite ones.
    """
    kind: str
    presentation: Presentation
    m_max: int
    indices: tuple
    programs: dict
    relation: str
    head: str | None = None
    guard: Callable[[int, int, int], bool] | None = None
    note: str = ""

    def psi(self, m: int, k: int) -> Expr:
        return self.programs[(m, k)]

    def to_json(self):
        from .interp import to_json as expr_json
        return {"kind": self.kind, "m_max": self.m_max, "indices": list(self.indices),
                "relation": self.relation, "head": self.head, "note": self.note,
                "programs": {f"{m},{k}": expr_json(p) for (m, k), p in sorted(self.programs.items())}}


def _presentation(r) -> Presentation:
    return r.presentation if isinstance(r, Realization) else r


def _index(m: int) -> Expr:
    return Pair(Const(m), Input())


def eqv_witnesses(r, m_max: int = 3, n_max: int = 4) -> WitnessFamily:
    """psi_{m,n}(i) = n-th element of the class of a(<m,i>)."""
    P = _presentation(r)
    if P.kind != "equivalence" or P.spec.character.bounded():
        raise ValueError("needs an equivalence structure with unbounded character")
    a = FnHandle("a", class_representatives(P))
    eqv = handles(P)["eqv"]
    progs = {(m, n): NthOfClass(eqv, Apply(a, _index(m)), Const(n))
             for m in range(m_max + 1) for n in range(1, n_max + 1)}
    return WitnessFamily("EqvInfiniteClass", P, m_max, tuple(range(1, n_max + 1)), progs, "class")


def _power(h: dict, z: int, start: Expr) -> Expr:
    return Iterate(h["f"] if z >= 0 else h["finv"], Const(abs(z)), start)


def injection_z_witnesses(r, m_max: int = 3, z_max: int = 3, kind: str | None = None) -> WitnessFamily:
    """Z-orbit witnesses for injection structures.

    Unbounded character: psi_{m,z}(i) = f^z(a(<m,i>)).  An infinite orbit
    through a: psi_{m,z}(n) = f^{m(2n+1)+n-1+z}(a).
    """
    P = _presentation(r)
    if P.kind != "injection":
        raise ValueError("needs an injection structure")
    spec = P.spec
    if kind is None:
        kind = "InjZChain_unboundedChar" if not spec.character.bounded() else "InjZChain_infiniteOrbit"
    h = handles(P)
    zs = tuple(range(-z_max, z_max + 1))
    progs = {}
    if kind == "InjZChain_unboundedChar":
        if spec.character.bounded():
            raise ValueError("needs an unbounded character")
        a = FnHandle("a", orbit_representatives(P))
        for m in range(m_max + 1):
            for z in zs:
                progs[(m, z)] = _power(h, z, Apply(a, _index(m)))
    elif kind == "InjZChain_infiniteOrbit":
        if spec.omega_orbits == 0 and spec.z_orbits == 0:
            raise ValueError("needs an infinite orbit")
        b = _block(P, "omega" if spec.omega_orbits != 0 else "z", None)
        a = Const(P.encode(b, 0))
        x = Input()
        for m in range(m_max + 1):
            for z in zs:
                # exponent E = P - Q with both sides kept nonnegative
                pos = Add(Mul(Const(m), Add(Mul(Const(2), x), Const(1))), Add(x, Const(max(z, 0))))
                neg = Const(1 + max(-z, 0))
                progs[(m, z)] = IfLess(pos, neg, Iterate(h["finv"], Sub(neg, pos), a),
                                       Iterate(h["f"], Sub(pos, neg), a))
    else:
        raise ValueError(f"unknown injection family {kind}")
    return WitnessFamily(kind, P, m_max, zs, progs, "successor")


def _guarded(P, kind, g, m_max, indices, step, relation, head, note="") -> WitnessFamily:
    """psi_{m,k}(x) = step^|k|(g(<m,x>)) if |k| <= <m,x>."""
    gh = FnHandle("g", g)
    h = handles(P)
    progs = {}
    for m in range(m_max + 1):
        for k in indices:
            body = Iterate(h[step(k)], Const(abs(k)), Apply(gh, _index(m)))
            progs[(m, k)] = guard_le(Const(abs(k)), _index(m), body)
    return WitnessFamily(kind, P, m_max, tuple(indices), progs, relation, head,
                         lambda m, k, x: abs(k) <= pair(m, x), note)


def tree_z_witnesses(r, m_max: int = 3, z_max: int = 3) -> WitnessFamily:
    """psi_{m,z}(x) = f^z(g(<m,x>)) if |z| <= <m,x>, for 2:1 and (2,0):1 structures."""
    P = _presentation(r)
    kind = {"two-to-one": "TwoToOneZChain", "two-zero-to-one": "TwoZeroOneZChain"}.get(P.kind)
    if kind is None:
        raise ValueError("needs a 2:1 or (2,0):1 structure")
    return _guarded(P, kind, z_selector(P), m_max, range(-z_max, z_max + 1),
                    lambda z: "f" if z >= 0 else "finv", "successor", None,
                    "negative powers use the canonical (smaller) preimage")


def omega_chain_witnesses(r, m_max: int = 3, n_max: int = 4) -> WitnessFamily:
    """psi_{m,n}(x) = f^n(g(<m,x>)) if 0 <= n <= <m,x>."""
    P = _presentation(r)
    return _guarded(P, "OmegaChain_ranComputable", omega_selector(P), m_max, range(n_max + 1),
                    lambda n: "f", "successor", "no-preimage")


def omega_star_witnesses(r, m_max: int = 3, n_max: int = 4) -> WitnessFamily:
    """psi_{m,n}(x) = f^{-n}(g(<m,x>)) if n <= <m,x>."""
    P = _presentation(r)
    return _guarded(P, "OmegaStarChain_domComputable", omega_star_selector(P), m_max,
                    range(n_max + 1), lambda n: "finv", "predecessor", "no-image")


def witnesses(r, kind: str, m_max: int = 3, k_max: int = 3) -> WitnessFamily:
    """Build the family named ``kind`` (one of FAMILY_KINDS except GraphEmbedding)."""
    if kind == "EqvInfiniteClass":
        return eqv_witnesses(r, m_max, k_max)
    if kind in ("InjZChain_unboundedChar", "InjZChain_infiniteOrbit"):
        return injection_z_witnesses(r, m_max, k_max, kind)
    if kind in ("TwoToOneZChain", "TwoZeroOneZChain"):
        w = tree_z_witnesses(r, m_max, k_max)
        if w.kind != kind:
            raise ValueError(f"{kind} does not match a {w.presentation.kind} structure")
        return w
    if kind == "OmegaChain_ranComputable":
        return omega_chain_witnesses(r, m_max, k_max)
    if kind == "OmegaStarChain_domComputable":
        return omega_star_witnesses(r, m_max, k_max)
    raise ValueError(f"unknown family kind {kind!r}")


def default_family(r) -> str | None:
    """The family a structure's classification theorem uses, if any applies."""
    P = _presentation(r)
    s = P.spec
    try:
        if P.kind == "equivalence":
            return "EqvInfiniteClass" if not s.character.bounded() else None
        if P.kind == "injection":
            if not s.character.bounded():
                return "InjZChain_unboundedChar"
            return "InjZChain_infiniteOrbit" if (s.omega_orbits or s.z_orbits) else None
        if P.kind == "two-to-one":
            return "TwoToOneZChain"
        if P.kind == "two-zero-to-one":
            z_selector(P)
            return "TwoZeroOneZChain"
        if P.kind == "partial-injection":
            if not s.chain_character.bounded():
                return "OmegaChain_ranComputable" if s.range_computable else (
                    "OmegaStarChain_domComputable" if s.domain_computable else None)
    except ValueError:
        return None
    return None


# ---------------------------------------------------------------- verification

DEFAULT_CONNECT = 16
DEFAULT_WIDTH = 50


class _Values:
    """Memoized psi_{m,k}(i): an int, None (undefined) or STILL_RUNNING."""

    def __init__(self, w: WitnessFamily, budget: int):
        self.w, self.budget, self.memo = w, budget, {}

    def __call__(self, m, k, i):
        key = (m, k, i)
        if key not in self.memo:
            out = evaluate(self.w.psi(m, k), i, self.budget)
            self.memo[key] = out.value if isinstance(out, Halt) else (
                None if out is UNDEFINED else STILL_RUNNING)
        return self.memo[key]


def _connected(P, x, y, bound):
    """Some f^k(x) = y or f^k(y) = x with 0 <= k <= bound."""
    for a, b in ((x, y), (y, x)):
        c = a
        for _ in range(bound + 1):
            if c == b:
                return True
            c = P.f(c)
            if c is None:
                break
    return False


def _claims(w: WitnessFamily, hi: int, val: _Values, connect: int):
    """Yield (claim id, bad dict, inconclusive list, note) over indices [0, hi]."""
    P = w.presentation
    ms, ks = range(w.m_max + 1), w.indices
    base = ks[0] if w.relation == "class" else 0
    for m in ms:
        for k in ks:
            bad, inc = {}, []
            for i in range(hi + 1):
                v = val(m, k, i)
                if v is STILL_RUNNING:
                    inc.append(i)
                elif v is None:
                    bad[i] = "undefined"
            yield f"defined[m={m},k={k}]", bad, inc, "threshold = first index past the last undefined point"
            if w.guard is not None:
                bad = {}
                for i in range(hi + 1):
                    v = val(m, k, i)
                    if v is not STILL_RUNNING and (v is not None) != w.guard(m, k, i):
                        bad[i] = f"defined={v is not None} but guard says {w.guard(m, k, i)}"
                yield f"guard[m={m},k={k}]", bad, [], "definedness matches the guard at every index"
    for m in ms:
        for a, k1 in enumerate(ks):
            for k2 in ks[a + 1:]:
                bad, inc = {}, []
                for i in range(hi + 1):
                    v1, v2 = val(m, k1, i), val(m, k2, i)
                    if STILL_RUNNING in (v1, v2):
                        inc.append(i)
                    elif v1 is not None and v2 is not None and v1 == v2:
                        bad[i] = f"both equal {v1}"
                yield f"distinct[m={m},k={k1},{k2}]", bad, inc, ""
        if w.relation == "class":
            for k in ks[1:]:
                bad, inc = {}, []
                for i in range(hi + 1):
                    v1, v2 = val(m, base, i), val(m, k, i)
                    if STILL_RUNNING in (v1, v2):
                        inc.append(i)
                    elif v1 is not None and v2 is not None and P.class_of(v1) != P.class_of(v2):
                        bad[i] = f"{v1} and {v2} in different classes"
                yield f"related[m={m},k={base},{k}]", bad, inc, ""
        else:
            for k in ks[:-1]:
                lo_k, hi_k = (k, k + 1) if w.relation == "successor" else (k + 1, k)
                bad, inc = {}, []
                for i in range(hi + 1):
                    v1, v2 = val(m, lo_k, i), val(m, hi_k, i)
                    if STILL_RUNNING in (v1, v2):
                        inc.append(i)
                    elif v1 is not None and v2 is not None and P.f(v1) != v2:
                        bad[i] = f"f({v1}) = {P.f(v1)} != {v2}"
                yield f"successor[m={m},k={k}]", bad, inc, ""
        if w.head is not None:
            bad, inc = {}, []
            for i in range(hi + 1):
                v = val(m, 0, i)
                if v is STILL_RUNNING:
                    inc.append(i)
                elif v is not None:
                    if w.head == "no-preimage" and P.preimages(v):
                        bad[i] = f"{v} has preimages {P.preimages(v)}"
                    if w.head == "no-image" and P.f(v) is not None:
                        bad[i] = f"{v} maps to {P.f(v)}"
            yield f"{w.head}[m={m}]", bad, inc, ""
    for a, m1 in enumerate(ms):
        for m2 in ms[a + 1:]:
            bad, inc = {}, []
            for i in range(hi + 1):
                v1, v2 = val(m1, base, i), val(m2, base, i)
                if STILL_RUNNING in (v1, v2):
                    inc.append(i)
                elif v1 is None or v2 is None:
                    continue
                elif w.relation == "class":
                    if P.class_of(v1) == P.class_of(v2):
                        bad[i] = f"{v1} and {v2} share a class"
                elif _connected(P, v1, v2, connect):
                    bad[i] = f"{v1} and {v2} connected within {connect} steps"
            note = "" if w.relation == "class" else f"no f^k connection for k <= {connect}"
            yield f"separated[m={m1},{m2}]", bad, inc, note


def verify_family(w: WitnessFamily, window: tuple[int, int] | None = None, budget: int = 10**5,
                  connect: int = DEFAULT_CONNECT) -> list[WindowCheckResult]:
    """Check every family claim on ``window``; default is [T, T+50] with T the largest threshold."""
    val = _Values(w, budget)
    if window is None:
        hi = DEFAULT_WIDTH
        while True:
            t = max((max(bad, default=-1) + 1 for _, bad, _, _ in _claims(w, hi, val, connect)), default=0)
            if t + DEFAULT_WIDTH <= hi:
                break
            hi = t + DEFAULT_WIDTH
        window = (t, t + DEFAULT_WIDTH)
    lo, hi = window
    if lo < 0 or hi < lo:
        raise ValueError("window must satisfy 0 <= lo <= hi")
    return [_result(cid, window, bad, inc, note) for cid, bad, inc, note in _claims(w, hi, val, connect)]
