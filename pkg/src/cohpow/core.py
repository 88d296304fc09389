"""Cardinal counts, characters, structure specs and power reports.

An ``ExtCount`` is a plain ``int`` (finite count) or ``OMEGA`` (countably
infinite).  ``OMEGA`` is ``math.inf`` so ordering and absorbing addition come
for free; the JSON encoding uses the string ``"omega"``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Any, Iterator, Union

OMEGA = math.inf
ExtCount = Union[int, float]


class SpecError(ValueError):
    """Malformed spec or JSON document; ``path`` is a JSON path like ``$.character[2].k``."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def is_omega(x: ExtCount) -> bool:
    return x == OMEGA


def ext_add(a: ExtCount, b: ExtCount) -> ExtCount:
    if is_omega(a) or is_omega(b):
        return OMEGA
    return a + b


def ext_str(x: ExtCount) -> str:
    return "omega" if is_omega(x) else str(int(x))


def ext_to_json(x: ExtCount) -> int | str:
    return "omega" if is_omega(x) else int(x)


def ext_from_json(v: Any, path: str = "$") -> ExtCount:
    if v == "omega":
        return OMEGA
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise SpecError(path, f"expected nonnegative integer or 'omega', got {v!r}")
    return v


@dataclass(frozen=True)
class Progression:
    """Every size k >= start with k = start (mod step) gets ``count`` extra blocks."""
    start: int
    step: int
    count: ExtCount

    def __post_init__(self):
        if self.start < 1 or self.step < 1:
            raise SpecError("$", f"malformed progression start={self.start} step={self.step}")

    def __contains__(self, k: int) -> bool:
        return k >= self.start and (k - self.start) % self.step == 0


@dataclass(frozen=True)
class Character:
    """Size -> number of classes/orbits/chains of exactly that size.

    ``counts`` holds the explicit finite part, ``progressions`` the generator
    part that lets unbounded characters be written down finitely.  The count
    for a size is the sum of the explicit entry and every matching progression.
    """
    counts: tuple[tuple[int, ExtCount], ...] = ()
    progressions: tuple[Progression, ...] = ()

    def __post_init__(self):
        seen = set()
        for k, c in self.counts:
            if k < 1:
                raise SpecError("$", f"character size must be >= 1, got {k}")
            if k in seen:
                raise SpecError("$", f"duplicate character size {k}")
            seen.add(k)
        # normalise: drop zero entries, keep keys sorted
        object.__setattr__(self, "counts", tuple(sorted((k, c) for k, c in self.counts if c != 0)))
        object.__setattr__(self, "progressions", tuple(p for p in self.progressions if p.count != 0))

    @classmethod
    def of(cls, mapping: dict[int, ExtCount] | None = None, *progressions: Progression) -> "Character":
        return cls(tuple((mapping or {}).items()), tuple(progressions))

    @classmethod
    def every_size(cls, count: ExtCount = 1, start: int = 1, step: int = 1) -> "Character":
        return cls((), (Progression(start, step, count),))

    def count(self, k: int) -> ExtCount:
        total: ExtCount = dict(self.counts).get(k, 0)
        for p in self.progressions:
            if k in p:
                total = ext_add(total, p.count)
        return total

    def keys_upto(self, bound: int) -> Iterator[int]:
        """Sizes <= bound with a nonzero count, ascending."""
        for k in range(1, bound + 1):
            if self.count(k) != 0:
                yield k

    def least_key_above(self, k: int) -> int | None:
        """Least size > k with a nonzero count, or None if there is none."""
        cands = [j for j, _ in self.counts if j > k]
        for p in self.progressions:
            if p.start > k:
                cands.append(p.start)
            else:
                cands.append(p.start + ((k - p.start) // p.step + 1) * p.step)
        return min(cands) if cands else None

    def bounded(self) -> bool:
        return not self.progressions

    def max_key(self) -> int:
        """Largest size present; 0 for the empty character.  Only for bounded characters."""
        if not self.bounded():
            raise ValueError("unbounded character has no largest size")
        return max((k for k, _ in self.counts), default=0)

    def is_empty(self) -> bool:
        return not self.counts and not self.progressions

    def total(self) -> ExtCount:
        if self.progressions:
            return OMEGA
        t: ExtCount = 0
        for _, c in self.counts:
            t = ext_add(t, c)
        return t

    def to_json(self) -> list:
        out: list = [{"k": k, "count": ext_to_json(c)} for k, c in self.counts]
        out += [{"progression": {"start": p.start, "step": p.step}, "count": ext_to_json(p.count)}
                for p in self.progressions]
        return out

    @classmethod
    def from_json(cls, data: Any, path: str = "$") -> "Character":
        if not isinstance(data, list):
            raise SpecError(path, "character must be a list")
        counts, progs, seen = [], [], set()
        for i, entry in enumerate(data):
            p = f"{path}[{i}]"
            if not isinstance(entry, dict) or "count" not in entry:
                raise SpecError(p, "entry needs 'count' and 'k' or 'progression'")
            c = ext_from_json(entry["count"], p + ".count")
            if "progression" in entry:
                pr = entry["progression"]
                if not isinstance(pr, dict) or not all(isinstance(pr.get(x), int) for x in ("start", "step")):
                    raise SpecError(p + ".progression", "needs integer 'start' and 'step'")
                if pr["start"] < 1 or pr["step"] < 1:
                    raise SpecError(p + ".progression", "start and step must be >= 1")
                progs.append(Progression(pr["start"], pr["step"], c))
            else:
                k = entry.get("k")
                if isinstance(k, bool) or not isinstance(k, int) or k < 1:
                    raise SpecError(p + ".k", f"size must be an integer >= 1, got {k!r}")
                if k in seen:
                    raise SpecError(p + ".k", f"duplicate size {k}")
                seen.add(k)
                counts.append((k, c))
        return cls(tuple(counts), tuple(progs))

    def __str__(self):
        parts = [f"{k}:{ext_str(c)}" for k, c in self.counts]
        parts += [f"{p.start}+{p.step}n:{ext_str(p.count)}" for p in self.progressions]
        return "{" + ", ".join(parts) + "}"


def char_bounded(c: Character) -> bool:
    return c.bounded()


def char_member(c: Character, k: int, n: int) -> bool:
    """<k, n> is in the character: at least n blocks of size k."""
    if k < 1 or n < 1:
        raise ValueError("character indices start at 1")
    return n <= c.count(k)


# ---------------------------------------------------------------- specs

@dataclass(frozen=True)
class EquivalenceSpec:
    character: Character = Character()
    infinite_classes: ExtCount = 0
    kind = "equivalence"


@dataclass(frozen=True)
class InjectionSpec:
    character: Character = Character()
    omega_orbits: ExtCount = 0
    z_orbits: ExtCount = 0
    kind = "injection"


@dataclass(frozen=True)
class TwoToOneSpec:
    cycle_character: Character = Character()
    z_chains: ExtCount = 0
    kind = "two-to-one"


@dataclass(frozen=True)
class TwoZeroToOneSpec:
    cycle_character: Character = Character()
    path_character: Character = Character()
    endpath_character: Character = Character()
    z_chains: ExtCount = 0
    omega_chains: ExtCount = 0
    infinite_length_endpoints: ExtCount = 0
    highly_computable: bool = True
    has_infinite_tree_branch: bool = False
    # Presentation hint: depth -> number of 1-cycles whose attached tree is a
    # caterpillar of that depth.  Not an isomorphism invariant on its own.
    caterpillars: Character = Character()
    kind = "two-zero-to-one"


@dataclass(frozen=True)
class PartialInjectionSpec:
    cycle_character: Character = Character()
    chain_character: Character = Character()
    z_chains: ExtCount = 0
    omega_chains: ExtCount = 0
    omega_star_chains: ExtCount = 0
    range_computable: bool = True
    domain_computable: bool = True
    kind = "partial-injection"


StructureSpec = Union[EquivalenceSpec, InjectionSpec, TwoToOneSpec, TwoZeroToOneSpec, PartialInjectionSpec]
SPEC_TYPES = {t.kind: t for t in (EquivalenceSpec, InjectionSpec, TwoToOneSpec,
                                   TwoZeroToOneSpec, PartialInjectionSpec)}

# fields that are presentation/effectivity data rather than isomorphism invariants
NON_INVARIANT_FIELDS = {"highly_computable", "has_infinite_tree_branch", "caterpillars",
                        "range_computable", "domain_computable"}


def invariant_fields(spec) -> list[str]:
    return [f.name for f in fields(spec) if f.name not in NON_INVARIANT_FIELDS]


def spec_is_empty(spec) -> bool:
    for name in invariant_fields(spec):
        v = getattr(spec, name)
        if isinstance(v, Character):
            if not v.is_empty():
                return False
        elif v != 0:
            return False
    return True


def spec_to_json(spec) -> dict:
    out: dict[str, Any] = {"kind": spec.kind}
    for f in fields(spec):
        v = getattr(spec, f.name)
        if isinstance(v, Character):
            out[f.name] = v.to_json()
        elif isinstance(v, bool):
            out[f.name] = v
        else:
            out[f.name] = ext_to_json(v)
    return out


def spec_from_json(data: Any, path: str = "$"):
    if not isinstance(data, dict):
        raise SpecError(path, "spec must be an object")
    kind = data.get("kind")
    if kind not in SPEC_TYPES:
        raise SpecError(path + ".kind", f"unknown kind {kind!r}; expected one of {sorted(SPEC_TYPES)}")
    cls = SPEC_TYPES[kind]
    known = {f.name: f for f in fields(cls)}
    for key in data:
        if key != "kind" and key not in known:
            raise SpecError(f"{path}.{key}", f"unknown field for kind {kind!r}")
    kwargs: dict[str, Any] = {}
    for name, f in known.items():
        if name not in data:
            continue
        v = data[name]
        p = f"{path}.{name}"
        if f.type == "Character":
            kwargs[name] = Character.from_json(v, p)
        elif f.type == "bool":
            if not isinstance(v, bool):
                raise SpecError(p, "expected boolean")
            kwargs[name] = v
        else:
            kwargs[name] = ext_from_json(v, p)
    spec = cls(**kwargs)
    if spec_is_empty(spec):
        raise SpecError(path, "spec describes an empty structure (every count is zero)")
    return spec


# ---------------------------------------------------------------- reports

# Stable theorem tags.  Every Determined field cites one of these.
CITATIONS = {
    "S1.finite": "a finite structure is isomorphic to its cohesive powers",
    "S3.char": "equivalence structures: the power has the same character",
    "S3.embedding": "equivalence structures: the canonical embedding preserves infinite classes",
    "S3.bounded-char": "equivalence structures with bounded character are isomorphic to their powers",
    "S3.unbounded-char": "unbounded character gives infinitely many infinite classes in the power",
    "S3.alpha": "computable Sigma_3 sentence: there is an infinite class",
    "S4.char": "injection structures: same character",
    "S4.omega-orbits": "injection structures: same number of omega-orbits",
    "S4.bounded": "bounded character and no infinite orbits gives an isomorphic power",
    "S4.unbounded-char": "unbounded character gives infinitely many Z-orbits",
    "S4.infinite-orbit": "an infinite orbit gives infinitely many Z-orbits",
    "S4.corollary": "injection power is isomorphic iff bounded and no infinite orbits, or infinitely many Z-orbits",
    "S4.alpha": "computable Sigma_2 sentence: there is an infinite orbit",
    "S5.thm-i": "2:1 structures: same number of k-cycles",
    "S5.thm-ii": "2:1 structures: the power has infinitely many Z-chains",
    "S5.corollary": "2:1 power is isomorphic iff infinitely many Z-chains",
    "S5.alpha": "computable Sigma_2 sentence: there is a Z-chain",
    "S6.chars": "(2,0):1 structures: same cycle, path and endpath characters",
    "S6.thm-i": "bounded path character and no infinite orbits gives an isomorphic power",
    "S6.thm-ii": "unbounded path character or an infinite orbit gives infinitely many Z-chains",
    "S6.omega-same": "bounded endpath character and finitely many infinite-length endpoints: same omega-chains",
    "S6.omega-chains": "highly computable with unbounded endpath or infinitely many infinite-length endpoints: infinitely many omega-chains",
    "S6.alpha": "computable Sigma_2 sentence: there is an omega-chain",
    "S7.chars": "partial injections: same cycle and finite chain characters",
    "S7.bounded": "bounded characters and no infinite orbits gives an isomorphic power",
    "S7.unbounded": "unbounded character or an infinite orbit gives infinitely many Z-chains",
    "S7.omega-same": "bounded chain character: same number of omega- and omega*-chains",
    "S7.omega": "unbounded chain character, computable range: infinitely many omega-chains",
    "S7.omega-star": "unbounded chain character, computable domain: infinitely many omega*-chains",
}


@dataclass(frozen=True)
class Determined:
    value: Any  # ExtCount or Character
    citation: str

    def __post_init__(self):
        if self.citation not in CITATIONS:
            raise ValueError(f"unregistered citation {self.citation!r}")

    def to_json(self):
        v = self.value.to_json() if isinstance(self.value, Character) else ext_to_json(self.value)
        return {"status": "determined", "value": v, "citation": self.citation}


@dataclass(frozen=True)
class Undetermined:
    reason: str

    def to_json(self):
        return {"status": "undetermined", "reason": self.reason}


PowerField = Union[Determined, Undetermined]


@dataclass
class PowerReport:
    input: Any
    power_invariants: dict[str, PowerField]
    isomorphic_to_original: str  # "yes" | "no" | "unknown"
    distinguishing_sentence: str | None = None
    citations: list[str] = field(default_factory=list)

    def fully_determined(self) -> bool:
        return all(isinstance(v, Determined) for v in self.power_invariants.values())

    def power_spec(self):
        """The predicted power as a spec of the same kind (only when fully determined)."""
        if not self.fully_determined():
            raise ValueError("power invariants are not fully determined")
        kw = {k: v.value for k, v in self.power_invariants.items()}
        for name in NON_INVARIANT_FIELDS:
            if hasattr(self.input, name) and name != "caterpillars":
                kw[name] = getattr(self.input, name)
        return type(self.input)(**kw)

    def to_json(self) -> dict:
        return {
            "schema_version": "1",
            "input": spec_to_json(self.input),
            "power_invariants": {k: v.to_json() for k, v in self.power_invariants.items()},
            "isomorphic_to_original": self.isomorphic_to_original,
            "distinguishing_sentence": self.distinguishing_sentence,
            "citations": list(self.citations),
        }
