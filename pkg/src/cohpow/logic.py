"""Bounded evaluation of sentence templates on finite snapshots.

Quantifiers range over the materialized elements of a Realization.  Images
of frontier elements are computed through the presentation (charged to a
budget), while facts that depend on elements not yet materialized (missing
preimages or classmates) are unknown.  Evaluation is three-valued and an
unknown outcome is reported as the verdict "boundary".
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields

from .realize import Realization

COMPLEXITY = {
    "AtLeastNKCycles": "Sigma1",
    "CycleCharMember": "Sigma1",
    "PathCharMember": "Sigma1",
    "EndpathCharMember": "Sigma2",
    "ChainCharMember": "Sigma2",
    "ClassCharMember": "Sigma2",
    "AtLeastNOmegaOrbits": "Sigma2",
    "NoKPlus1Classes": "Pi1",
    "ExactlyMInfiniteClasses": "Sigma2",
    "InfiniteClassAlpha": "computable-Sigma3",
    "NoOrbitSizeKPlus1": "Pi1",
    "InfiniteOrbitAlpha": "computable-Sigma2",
    "ZChainAlpha": "computable-Sigma2",
    "OmegaChainAlpha": "computable-Sigma2",
    "OmegaChainsAtLeastN": "Sigma2",
    "OmegaStarChainsAtLeastN": "Sigma2",
    "PartialInjectionAxioms": "Pi1",
    "TwoToOneAxioms": "Pi2",
    "TwoZeroToOneAxioms": "Pi2",
    "GraphSymmetryAxiom": "Pi1",
}
SHAPES = tuple(COMPLEXITY)
AXIOM_SHAPES = {"PartialInjectionAxioms": "partial-injection", "TwoToOneAxioms": "two-to-one",
                "TwoZeroToOneAxioms": "two-zero-to-one", "GraphSymmetryAxiom": "graph"}
CUTOFF_SHAPES = {"InfiniteClassAlpha", "InfiniteOrbitAlpha", "ZChainAlpha", "OmegaChainAlpha"}
MAX_ARITY = 8


@dataclass(frozen=True)
class SentenceTemplate:
    shape: str
    n: int | None = None
    k: int | None = None
    m: int | None = None
    cutoff: int | None = None

    def __post_init__(self):
        if self.shape not in COMPLEXITY:
            raise ValueError(f"unknown sentence shape {self.shape!r}")
        for name in ("n", "k", "m", "cutoff"):
            v = getattr(self, name)
            if v is not None and (not isinstance(v, int) or v < 0):
                raise ValueError(f"{name} must be a natural number")

    @property
    def complexity(self) -> str:
        return COMPLEXITY[self.shape]

    @property
    def id(self) -> str:
        params = ",".join(f"{f.name}={getattr(self, f.name)}" for f in fields(self)[1:]
                          if getattr(self, f.name) is not None)
        return f"{self.shape}({params})"

    def to_json(self):
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_json(cls, d):
        if not isinstance(d, dict) or "shape" not in d:
            raise ValueError("$: sentence needs a 'shape' field")
        extra = set(d) - {"shape", "n", "k", "m", "cutoff"}
        if extra:
            raise ValueError(f"$: unknown sentence fields {sorted(extra)}")
        return cls(**d)


@dataclass(frozen=True)
class EvalVerdict:
    value: str  # "true" | "false" | "boundary"
    note: str = ""
    witnesses: tuple = ()

    def to_json(self):
        return {"value": self.value, "note": self.note, "witnesses": list(self.witnesses)}


TRUE, FALSE = EvalVerdict("true"), EvalVerdict("false")


class _OutOfBudget(Exception):
    pass


class _View:
    """Three-valued access to a snapshot: None means unknown."""

    def __init__(self, r: Realization, budget: int):
        self.r, self.budget = r, budget
        self.elements = r.elements
        self.members = set(r.elements)
        pre: dict[int, list[int]] = {}
        for x, y in r.f.items():
            pre.setdefault(y, []).append(x)
        self.pre = pre
        self.eq = r.kind == "equivalence"
        if self.eq:
            self.cls = r.classes()

    def f(self, x):
        """Image of x, or -1 when f(x) is undefined."""
        if x in self.r.f:
            return self.r.f[x]
        if x in self.members and x not in self.r.open_fwd:
            return -1
        if self.budget <= 0:
            raise _OutOfBudget
        self.budget -= 1
        y = self.r.presentation.f(x)
        return -1 if y is None else y

    def orbit(self, x, n):
        """[x, f(x), ..., f^n(x)], stopping early where f is undefined."""
        out = [x]
        for _ in range(n):
            y = self.f(out[-1])
            if y == -1:
                break
            out.append(y)
        return out

    def preimages(self, x):
        """Materialized preimages, or None when some preimage is missing."""
        if x in self.r.open_pre or x not in self.members:
            return None
        return self.pre.get(x, [])

    def classmates(self, x):
        return self.cls[self.r.block_of[x]]

    def class_complete(self, x):
        return x not in self.r.open_pre


def _and(*vals):
    if any(v is False for v in vals):
        return False
    return None if any(v is None for v in vals) else True


def _search(view: _View, n: int, unary, apart):
    """Look for n materialized x's with unary(x) and apart(x_i, x_j) for i < j.

    Returns (value, witnesses): True with a tuple found from definite
    candidates, None if only possible with unknown candidates, else False.
    """
    sure, maybe = [], []
    for x in view.elements:
        v = unary(x)
        if v:
            sure.append(x)
        elif v is None:
            maybe.append(x)

    def dfs(cands, chosen, start):
        if len(chosen) == n:
            return list(chosen)
        for i in range(start, len(cands)):
            x = cands[i]
            if all(apart(y, x) is not False for y in chosen):
                found = dfs(cands, chosen + [x], i + 1)
                if found:
                    return found
        return None

    def definite(tup):
        return all(apart(tup[i], tup[j]) is True for i in range(len(tup)) for j in range(i + 1, len(tup)))

    found = dfs(sure, [], 0)
    if found and definite(found):
        return True, tuple(found)
    if found or (maybe and dfs(sorted(sure + maybe), [], 0)):
        return None, ()
    return False, ()


def _distinct_path(view, x, k):
    """f^l(x) pairwise distinct for 0 <= l < k, and f^k(x) = f^l(x) for some 0 <= l < k."""
    orb = view.orbit(x, k)
    if len(orb) < k + 1:
        return False
    head = orb[:k]
    return len(set(head)) == k and orb[k] in head


def _is_k_cycle(view, x, k):
    orb = view.orbit(x, k)
    return len(orb) == k + 1 and orb[k] == x and x not in orb[1:k]


def _no_preimage(view, x):
    pre = view.preimages(x)
    return None if pre is None else not pre


def _verdict(v, witnesses=(), note=""):
    if v is True:
        return EvalVerdict("true", note, tuple(witnesses))
    if v is False:
        return EvalVerdict("false", note)
    return EvalVerdict("boundary", note or "depends on elements at the truncation frontier")


def _need(t, *names):
    for name in names:
        if getattr(t, name) is None or (name in ("n", "k", "cutoff") and getattr(t, name) < 1):
            raise ValueError(f"{t.shape} needs a positive parameter {name}")


def _check_capacity(t: SentenceTemplate, r, max_arity: int):
    a = (t.n or 0) + (t.k or 0) if t.m is None else t.m + (t.k or 0)
    if a > max_arity:
        raise ValueError(f"{t.id}: n + k = {a} exceeds the arity cap {max_arity}")
    if t.shape in CUTOFF_SHAPES and t.cutoff is not None and t.cutoff > r.window:
        raise ValueError(f"{t.id}: cutoff {t.cutoff} exceeds the materialized depth {r.window}")
    if t.k is not None and t.k > r.window + 1:
        raise ValueError(f"{t.id}: k = {t.k} exceeds the stage capacity {r.window + 1}")


def _functional(r, t):
    if r.kind == "equivalence":
        raise ValueError(f"{t.shape} is a sentence about a unary function")


def eval_sentence(t: SentenceTemplate, r, budget: int = 10**5, max_arity: int = MAX_ARITY) -> EvalVerdict:
    """Evaluate ``t`` on a snapshot, with infinitary conjunctions cut at ``t.cutoff``."""
    if t.shape in AXIOM_SHAPES:
        return axioms_check(AXIOM_SHAPES[t.shape], r)
    _check_capacity(t, r, max_arity)
    view = _View(r, budget)
    try:
        return _eval(t, r, view)
    except _OutOfBudget:
        return EvalVerdict("boundary", "budget exhausted computing images past the frontier")


def _eval(t, r, view) -> EvalVerdict:
    s = t.shape
    if s in ("AtLeastNKCycles", "CycleCharMember"):
        _need(t, "n", "k")
        _functional(r, t)
        k = t.k

        def apart(a, b):
            # no f^l(a) = b for 0 <= l < k (l = 0 keeps the x's distinct)
            return b not in view.orbit(a, k - 1)
        v, w = _search(view, t.n, lambda x: _is_k_cycle(view, x, k), apart)
        return _verdict(v, w)
    if s in ("PathCharMember", "EndpathCharMember"):
        _need(t, "n", "k")
        _functional(r, t)
        if s == "PathCharMember":
            def unary(x):
                return _distinct_path(view, x, t.k)
        else:
            def unary(x):
                return _and(_distinct_path(view, x, t.k), _no_preimage(view, x))
        v, w = _search(view, t.n, unary, lambda a, b: a != b)
        return _verdict(v, w)
    if s == "ChainCharMember":
        _need(t, "n", "k")
        _functional(r, t)

        def unary(x):
            orb = view.orbit(x, t.k)
            return _and(len(orb) == t.k, _no_preimage(view, x))
        v, w = _search(view, t.n, unary, lambda a, b: a != b)
        return _verdict(v, w)
    if s == "ClassCharMember":
        _need(t, "n", "k")

        def unary(x):
            size = len(_eq_view(view, r, t).classmates(x))
            if size > t.k:
                return False
            return (size == t.k) if view.class_complete(x) else None
        v, w = _search(view, t.n, unary, lambda a, b: r.block_of[a] != r.block_of[b])
        return _verdict(v, w)
    if s == "NoKPlus1Classes":
        _need(t, "k")
        _eq_view(view, r, t)
        reps = list(view.cls)
        if len(reps) >= t.k + 1:
            return _verdict(False, note=f"{len(reps)} pairwise inequivalent elements")
        return _verdict(True)
    if s == "ExactlyMInfiniteClasses":
        _need(t, "m", "k")
        _eq_view(view, r, t)
        big = [c for c in view.cls.values() if len(c) >= t.k + 1]
        growing = [c for c in view.cls.values() if len(c) <= t.k and c[0] in r.open_pre]
        if len(big) > t.m:
            return _verdict(False, note=f"{len(big)} classes with >= {t.k + 1} elements")
        if growing:
            return _verdict(None)
        return _verdict(len(big) == t.m, [c[0] for c in big])
    if s == "InfiniteClassAlpha":
        _need(t, "cutoff")
        _eq_view(view, r, t)
        big = [c[0] for c in view.cls.values() if len(c) >= t.cutoff]
        if big:
            return EvalVerdict("boundary", f"class of size >= {t.cutoff} witnessed", tuple(big[:1]))
        if any(c[0] in r.open_pre for c in view.cls.values()):
            return _verdict(None)
        return _verdict(False, note=f"every class is complete with < {t.cutoff} elements")
    _functional(r, t)
    if s == "AtLeastNOmegaOrbits":
        _need(t, "n")
        v, w = _search(view, t.n, lambda x: _no_preimage(view, x), lambda a, b: a != b)
        return _verdict(v, w)
    if s == "NoOrbitSizeKPlus1":
        _need(t, "k")

        def long_orbit(x):
            orb = view.orbit(x, t.k + 1)
            return x not in orb[1:]
        bad = [x for x in view.elements if long_orbit(x)]
        if bad:
            return _verdict(False, note=f"f^i({bad[0]}) != {bad[0]} for 1 <= i <= {t.k + 1}")
        return _verdict(True)
    if s in ("InfiniteOrbitAlpha", "ZChainAlpha", "OmegaChainAlpha"):
        _need(t, "cutoff")
        N = t.cutoff
        if s == "InfiniteOrbitAlpha":
            def unary(x):
                return x not in view.orbit(x, N)[1:]
        else:
            def unary(x):
                orb = view.orbit(x, N)
                ok = len(orb) == N + 1 and len(set(orb)) == N + 1
                return _and(ok, _no_preimage(view, x)) if s == "OmegaChainAlpha" else ok
        sure = maybe = None
        for x in view.elements:
            v = unary(x)
            if v:
                sure = x
                break
            if v is None and maybe is None:
                maybe = x
        if sure is not None:
            return EvalVerdict("boundary", f"conjuncts up to cutoff {N} witnessed", (sure,))
        return _verdict(None if maybe is not None else False)
    if s == "OmegaChainsAtLeastN":
        _need(t, "n", "k")
        v, w = _search(view, t.n, lambda x: _and(_no_preimage(view, x), len(view.orbit(x, t.k)) == t.k + 1),
                       lambda a, b: a != b)
        return _verdict(v, w)
    if s == "OmegaStarChainsAtLeastN":
        _need(t, "n", "k")

        def back(x):
            if view.f(x) != -1:
                return False
            y = x
            for _ in range(t.k):
                pre = view.preimages(y)
                if pre is None:
                    return None
                if not pre:
                    return False
                y = pre[0]
            return True
        v, w = _search(view, t.n, back, lambda a, b: a != b)
        return _verdict(v, w)
    raise ValueError(f"no evaluator for {s}")


def _eq_view(view, r, t):
    if r.kind != "equivalence":
        raise ValueError(f"{t.shape} is a sentence about an equivalence relation")
    return view


# ---------------------------------------------------------------- axioms

def axioms_check(tag: str, r) -> EvalVerdict:
    """Check the class axioms on every materialized tuple whose images are materialized."""
    if tag == "graph":
        return _graph_axiom(r)
    if tag == "equivalence":
        return _equivalence_axioms(r)
    if tag not in ("injection", "two-to-one", "two-zero-to-one", "partial-injection"):
        raise ValueError(f"unknown structure class {tag!r}")
    members = set(r.elements)
    pre: dict[int, list[int]] = {}
    for x, y in r.f.items():
        if x not in members or y not in members:
            return _verdict(False, note=f"table entry f({x}) = {y} leaves the domain")
        pre.setdefault(y, []).append(x)
    if tag != "partial-injection":
        for x in r.elements:
            if x not in r.f and x not in r.open_fwd:
                return _verdict(False, note=f"f({x}) undefined in a total structure")
    for y in r.elements:
        ps = pre.get(y, [])
        if tag in ("injection", "partial-injection") and len(ps) > 1:
            return _verdict(False, note=f"f({ps[0]}) = f({ps[1]}) = {y}")
        if len(ps) > 2:
            return _verdict(False, note=f"three preimages of {y}: {ps[:3]}")
        if y in r.open_pre:
            continue
        if tag == "two-to-one" and len(ps) != 2:
            return _verdict(False, note=f"{y} has {len(ps)} preimages")
        if tag == "two-zero-to-one" and len(ps) == 1:
            return _verdict(False, note=f"{y} has exactly one preimage")
    return TRUE


def _equivalence_axioms(r) -> EvalVerdict:
    rel = {x: {x} for x in r.elements}
    for line in r.dump():
        if line.startswith("E "):
            _, a, b = line.split()
            rel[int(a)].add(int(b))
            rel[int(b)].add(int(a))
    for x, nbrs in rel.items():
        for y in nbrs:
            if rel[y] != nbrs:
                return _verdict(False, note=f"E not transitive at {x}, {y}")
    return TRUE


def _graph_axiom(g) -> EvalVerdict:
    for a, b in g.edges:
        if not (g.adjacent(a, b) and g.adjacent(b, a)):
            return _verdict(False, note=f"edge ({a},{b}) is not symmetric")
    for a in range(1, g.bound + 1):
        for b in range(a + 1, g.bound + 1):
            if g.adjacent(a, b) != g.adjacent(b, a):
                return _verdict(False, note=f"E({a},{b}) != E({b},{a})")
    return TRUE


def character_template(kind: str, name: str, k: int, n: int) -> SentenceTemplate:
    """The membership template for <k, n> in the named character of a structure kind."""
    if kind == "equivalence":
        return SentenceTemplate("ClassCharMember", n=n, k=k)
    shape = {"character": "CycleCharMember", "cycle_character": "CycleCharMember",
             "path_character": "PathCharMember", "endpath_character": "EndpathCharMember",
             "chain_character": "ChainCharMember"}[name]
    return SentenceTemplate(shape, n=n, k=k)
