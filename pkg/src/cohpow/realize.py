"""Concrete presentations on the naturals, stage-truncated snapshots of them,
and invariant extraction back from the snapshots.

Layout law.  Element names are ``pair(j, i)``: local element ``i`` of block
``j``.  Blocks are the classes/orbits of the structure, listed shell by shell.
A finite block of size key ``k`` and copy index ``c`` lives in shell
``max(k, c + 1)``; copy ``c`` of an infinite block type lives in shell
``c + 1``.  Inside a shell, finite blocks come first ordered by
(family, k, c), then infinite blocks in family order.  Every shell is finite,
so this is a dovetailed enumeration even when a character has infinitely
many keys or counts.

Local coding inside a block:

* equivalence class: ``0 .. k-1`` (all naturals for an infinite class);
* cycle / chain / omega orbit: position along the orbit;
* Z orbit: zigzag code of the integer position (z >= 0 -> 2z, z < 0 -> -2z-1);
* tree-decorated blocks (2:1 and (2,0):1): ``pair(u, h)`` with backbone code
  ``u``; ``h = 0`` is the backbone node, ``h >= 1`` is heap node ``h - 1`` of
  the tree hanging off it (children of heap node v are 2v+1 and 2v+2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (OMEGA, Character, EquivalenceSpec, InjectionSpec, PartialInjectionSpec,
                   Progression, SpecError, TwoToOneSpec, TwoZeroToOneSpec, ext_add, is_omega)
from .interp import pair, unpair

TREE_DEPTH_CAP = 8


def zig(z: int) -> int:
    return 2 * z if z >= 0 else -2 * z - 1


def unzig(u: int) -> int:
    return u // 2 if u % 2 == 0 else -(u + 1) // 2


def _mul(k: int, c):
    if c == 0:
        return 0
    return OMEGA if is_omega(c) else k * c


@dataclass(frozen=True)
class Block:
    index: int
    tag: str
    key: int | None  # size (cycle/class/chain length) or caterpillar depth
    copy: int
    shell: int

    @property
    def finite(self) -> bool:
        return self.key is not None


class _Counts:
    """Character-like view: count(k) and keys_upto(bound), possibly adjusted at one key."""

    def __init__(self, char: Character, override: dict | None = None):
        self.char = char
        self.override = override or {}

    def count(self, k):
        return self.override.get(k, self.char.count(k))

    def keys_upto(self, bound):
        keys = {k for k, _ in self.char.counts if k <= bound}
        for p in self.char.progressions:
            keys.update(range(p.start, bound + 1, p.step))
        keys |= {k for k in self.override if k <= bound}
        return sorted(k for k in keys if self.count(k) != 0)

    def bounded(self):
        return self.char.bounded()



def _tail_count(char: Character, lo: int):
    """Number of blocks with key >= lo."""
    if not char.bounded():
        return OMEGA
    total = 0
    for k in char.keys_upto(char.max_key()):
        if k >= lo:
            total = ext_add(total, char.count(k))
    return total


# ---------------------------------------------------------------- (2,0):1 bookkeeping

def _two_zero_shape(spec: TwoZeroToOneSpec):
    """(leaf-cycle counts, caterpillar counts, tree type on chains)."""
    if spec.has_infinite_tree_branch:
        raise SpecError("$.has_infinite_tree_branch",
                        "trees with an infinite branch hanging off cycles are not realizable here")
    cats = spec.caterpillars
    cat_total = cats.total()
    one = spec.cycle_character.count(1)
    if is_omega(cat_total):
        if not is_omega(one):
            raise SpecError("$.caterpillars", "infinitely many caterpillars need infinitely many 1-cycles")
        leaf_one = 0
    else:
        if not is_omega(one) and one < cat_total:
            raise SpecError("$.caterpillars", f"{cat_total} caterpillars but only {one} 1-cycles")
        leaf_one = one if is_omega(one) else one - cat_total
    cycles = _Counts(spec.cycle_character, {1: leaf_one})
    has_chain = spec.z_chains != 0 or spec.omega_chains != 0
    if spec.infinite_length_endpoints == spec.omega_chains:
        tree = "full"
    elif is_omega(spec.infinite_length_endpoints) and has_chain:
        tree = "leaf"
    else:
        raise SpecError("$.infinite_length_endpoints",
                        "must equal omega_chains (full trees on chains) or be omega (leaf trees)")
    return cycles, cats, tree


def _derived_lengths(cycles, cats: Character, L: int):
    """(#elements of length L, #endpoints of length L) for leaf cycles plus caterpillars."""
    path = ext_add(_mul(L, cycles.count(L)), _mul(L - 1, cycles.count(L - 1)) if L > 1 else 0)
    end = _mul(L - 1, cycles.count(L - 1)) if L > 1 else 0
    total = cats.total()
    if L in (1, 2):
        path = ext_add(path, total)
    else:
        path = ext_add(path, _mul(2, _tail_count(cats, L - 1)))
        end = ext_add(end, _tail_count(cats, L - 1))
    if L >= 2:
        end = ext_add(end, cats.count(L - 1))
    return path, end


def _explicit_max(c: Character) -> int:
    return max((k for k, _ in c.counts), default=0)


def two_zero_characters(cycle_character: Character, caterpillars: Character = Character()):
    """Path and endpath characters produced by leaf-decorated cycles plus caterpillars.

    Raises ValueError when the result has no finite description (e.g. an
    unbounded cycle character with finite counts, whose path counts grow).
    """
    cycles, cats, _ = _two_zero_shape(
        TwoZeroToOneSpec(cycle_character=cycle_character, caterpillars=caterpillars,
                         z_chains=1, infinite_length_endpoints=OMEGA))
    progs = cycle_character.progressions + caterpillars.progressions
    explicit = max(_explicit_max(cycle_character), _explicit_max(caterpillars)) + 2
    tail = None
    if progs:
        tail = max(explicit, max(p.start for p in progs) + 2, 3)
        period = math.lcm(*(p.step for p in progs))
        for L in range(tail, tail + 2 * period + 2):
            pc, ec = _derived_lengths(cycles, cats, L)
            if not (is_omega(pc) and is_omega(ec)):
                raise ValueError("path/endpath counts are not eventually infinite; "
                                 "no finite character describes them")
        explicit = tail - 1
    out = []
    for which in (0, 1):
        d = {L: _derived_lengths(cycles, cats, L)[which] for L in range(1, explicit + 1)}
        extra = (Progression(tail, 1, OMEGA),) if tail else ()
        out.append(Character.of(d, *extra))
    return out[0], out[1]


# ---------------------------------------------------------------- presentations

TREE_CLASSES = ("two-to-one", "two-zero-to-one")


class Presentation:
    """The full (infinite) canonical structure of a spec, computed lazily.

    ``f``, ``preimages`` and ``inverse`` are exact on every name; names that
    are not elements give None / empty.
    """

    def __init__(self, spec):
        self.spec = spec
        self.kind = spec.kind
        self.tree = None
        self.cats = Character()
        if isinstance(spec, EquivalenceSpec):
            self.finite_fams = [("class", _Counts(spec.character))]
            self.infinite_fams = [("iclass", spec.infinite_classes)]
        elif isinstance(spec, InjectionSpec):
            self.finite_fams = [("cycle", _Counts(spec.character))]
            self.infinite_fams = [("omega", spec.omega_orbits), ("z", spec.z_orbits)]
        elif isinstance(spec, TwoToOneSpec):
            self.finite_fams = [("cycle", _Counts(spec.cycle_character))]
            self.infinite_fams = [("z", spec.z_chains)]
            self.tree = "full"
        elif isinstance(spec, TwoZeroToOneSpec):
            cycles, cats, tree = _two_zero_shape(spec)
            self.cats, self.tree = cats, tree
            self.finite_fams = [("cycle", cycles), ("cat", _Counts(cats))]
            self.infinite_fams = [("omega", spec.omega_chains), ("z", spec.z_chains)]
        elif isinstance(spec, PartialInjectionSpec):
            self.finite_fams = [("cycle", _Counts(spec.cycle_character)),
                                ("chain", _Counts(spec.chain_character))]
            self.infinite_fams = [("omega", spec.omega_chains), ("z", spec.z_chains),
                                  ("ostar", spec.omega_star_chains)]
        else:
            raise SpecError("$.kind", f"unknown spec type {type(spec).__name__}")
        self._ends = np.zeros(1, dtype=np.int64)  # _ends[s] = #blocks in shells <= s
        self._shells: dict[int, list[Block]] = {}
        self.last_shell = self._last_nonempty_shell()

    # ---- block enumeration

    def _last_nonempty_shell(self):
        """Shell after which nothing new appears, or None if blocks never run out."""
        bound = 0
        for _, c in self.finite_fams:
            if not c.bounded():
                return None
            for k in c.keys_upto(max([k for k, _ in c.char.counts] + [1])):
                n = c.count(k)
                if is_omega(n):
                    return None
                bound = max(bound, k, n)
        for _, n in self.infinite_fams:
            if is_omega(n):
                return None
            bound = max(bound, n)
        return bound

    def _grow(self, S: int):
        """Cumulative shell sizes up to shell S (vectorised; no Block objects)."""
        if len(self._ends) > S:
            return
        S = max(S, 2 * (len(self._ends) - 1), 16)
        t = np.arange(S + 1)
        size = np.zeros(S + 1, dtype=np.int64)
        for _, c in self.finite_fams:
            cnt = np.zeros(S + 2)
            for k in c.keys_upto(S):
                cnt[k] = c.count(k)
            # copies of size t sitting in shell t
            size += np.minimum(cnt[:S + 1], t).astype(np.int64)
            # size k < t contributes copy t-1 to shell t while count >= t
            diff = np.zeros(S + 3, dtype=np.int64)
            ks = np.nonzero(cnt[:S + 1] >= np.arange(S + 1) + 1)[0]
            np.add.at(diff, ks + 1, 1)
            hi = cnt[ks]
            fin = np.isfinite(hi) & (hi <= S)
            np.add.at(diff, hi[fin].astype(np.int64) + 1, -1)
            size += np.cumsum(diff)[:S + 1]
        for _, n in self.infinite_fams:
            size += (n > t - 1).astype(np.int64)
        size[0] = 0
        self._ends = np.cumsum(size)

    def shell_blocks(self, s: int) -> list[tuple[str, int | None, int]]:
        out = []
        for tag, c in self.finite_fams:
            for k in c.keys_upto(s):
                n = c.count(k)
                if k == s:
                    out += [(tag, k, i) for i in range(s if is_omega(n) else min(n, s))]
                elif n > s - 1:
                    out.append((tag, k, s - 1))
        order = [t for t, _ in self.finite_fams]
        out.sort(key=lambda b: (order.index(b[0]), b[1], b[2]))
        for tag, n in self.infinite_fams:
            if n > s - 1:
                out.append((tag, None, s - 1))
        return out

    def shell(self, s: int) -> list[Block]:
        if s not in self._shells:
            self._grow(s)
            start = int(self._ends[s - 1])
            self._shells[s] = [Block(start + i, tag, k, c, s)
                               for i, (tag, k, c) in enumerate(self.shell_blocks(s))]
        return self._shells[s]

    def blocks_upto_shell(self, s: int) -> list[Block]:
        return [b for t in range(1, s + 1) for b in self.shell(t)]

    def block(self, j: int) -> Block | None:
        if j < 0:
            return None
        while int(self._ends[-1]) <= j:
            S = len(self._ends) - 1
            if self.last_shell is not None and S >= self.last_shell:
                return None
            self._grow(max(2 * S, 16))
        s = int(np.searchsorted(self._ends, j, side="right"))
        return self.shell(s)[j - int(self._ends[s - 1])]

    def find_block(self, tag: str, key: int | None, copy: int) -> Block | None:
        s = max(key, copy + 1) if key is not None else copy + 1
        for b in self.shell(s):
            if (b.tag, b.key, b.copy) == (tag, key, copy):
                return b
        return None

    # ---- trees

    def tree_kind(self, b: Block, u: int) -> str | None:
        """Tree type hanging off backbone node u of block b (None: no tree)."""
        if b.tag == "cat":
            return "cat"
        if self.kind == "two-zero-to-one" and b.tag == "cycle":
            return "leaf"
        if b.tag == "omega" and u == 0:
            return None
        return self.tree

    @staticmethod
    def _in_tree(kind: str, v: int, depth: int | None) -> bool:
        if kind == "full":
            return True
        if kind == "leaf":
            return v == 0
        # caterpillar of the given depth: spine nodes 2^i - 1 (i < depth),
        # plus the right child of every spine node but the last
        if (v + 1) & v == 0:
            return (v + 1).bit_length() - 1 < depth
        if v % 2 == 0:
            w = (v - 2) // 2
            return (w + 1) & w == 0 and (w + 1).bit_length() - 1 < depth - 1
        return False

    # ---- backbone

    def _backbone_ok(self, b: Block, u: int) -> bool:
        if b.tag in ("cycle", "class", "chain"):
            return u < b.key
        if b.tag == "cat":
            return u == 0
        return True  # omega, ostar, z, iclass

    def _backbone_next(self, b: Block, u: int) -> int | None:
        t = b.tag
        if t == "cycle":
            return (u + 1) % b.key
        if t == "cat":
            return 0
        if t == "chain":
            return u + 1 if u + 1 < b.key else None
        if t == "omega":
            return u + 1
        if t == "ostar":
            return u - 1 if u > 0 else None
        if t == "z":
            return zig(unzig(u) + 1)
        return None

    def _backbone_prev(self, b: Block, u: int) -> int | None:
        t = b.tag
        if t == "cycle":
            return (u - 1) % b.key
        if t == "cat":
            return 0
        if t in ("chain", "omega"):
            return u - 1 if u > 0 else None
        if t == "ostar":
            return u + 1
        if t == "z":
            return zig(unzig(u) - 1)
        return None

    # ---- elements

    def decode(self, x: int):
        """(block, backbone u, heap node v or None) for an element, else None."""
        j, i = unpair(x)
        b = self.block(j)
        if b is None:
            return None
        if not self._tree_decorated(b):
            return (b, i, None) if self._backbone_ok(b, i) else None
        u, h = unpair(i)
        if not self._backbone_ok(b, u):
            return None
        if h == 0:
            return b, u, None
        kind = self.tree_kind(b, u)
        if kind is None or not self._in_tree(kind, h - 1, b.key):
            return None
        return b, u, h - 1

    def _tree_decorated(self, b: Block) -> bool:
        return self.kind in TREE_CLASSES

    def encode(self, b: Block, u: int, v: int | None = None) -> int:
        if not self._tree_decorated(b):
            return pair(b.index, u)
        return pair(b.index, pair(u, 0 if v is None else v + 1))

    def is_element(self, x: int) -> bool:
        return self.decode(x) is not None

    def f(self, x: int) -> int | None:
        d = self.decode(x)
        if d is None or self.kind == "equivalence":
            return None
        b, u, v = d
        if v is None:
            n = self._backbone_next(b, u)
            return None if n is None else self.encode(b, n)
        if v == 0:
            return self.encode(b, u)
        return self.encode(b, u, (v - 1) // 2)

    def preimages(self, x: int) -> list[int]:
        d = self.decode(x)
        if d is None or self.kind == "equivalence":
            return []
        b, u, v = d
        out = []
        if v is None:
            p = self._backbone_prev(b, u)
            if p is not None and self._backbone_ok(b, p):
                out.append(self.encode(b, p))
            kind = self.tree_kind(b, u) if self._tree_decorated(b) else None
            if kind is not None:
                out.append(self.encode(b, u, 0))
        else:
            kind = self.tree_kind(b, u)
            for c in (2 * v + 1, 2 * v + 2):
                if self._in_tree(kind, c, b.key):
                    out.append(self.encode(b, u, c))
        return sorted(out)

    def inverse(self, x: int) -> int | None:
        """Canonical inverse: the unique preimage, or the smaller of two."""
        pre = self.preimages(x)
        return pre[0] if pre else None

    def class_of(self, x: int) -> int | None:
        """Block index of x's class (equivalence structures)."""
        d = self.decode(x)
        return None if d is None else d[0].index

    def nth(self, rep: int, n: int) -> int | None:
        """n-th (1-based) element of the class of rep."""
        d = self.decode(rep)
        if d is None or n < 1:
            return None
        b = d[0]
        if b.key is not None and n > b.key:
            return None
        return pair(b.index, n - 1)


# ---------------------------------------------------------------- snapshots

@dataclass
class Realization:
    """Stage-``stage`` snapshot of a presentation.

    ``open_fwd`` holds elements whose image exists but is not materialized;
    ``open_pre`` holds elements with a preimage (or classmate) still missing.
    ``complete`` lists (family tag, key) pairs all of whose blocks are
    present; key None stands for an infinite family.  ``full_families`` are
    the tags that will never gain another block.
    """
    spec: object
    stage: int
    elements: tuple[int, ...]
    block_of: dict[int, int]
    blocks: tuple[Block, ...]
    f: dict[int, int] = field(default_factory=dict)
    inverse: dict[int, int] = field(default_factory=dict)
    open_fwd: frozenset = frozenset()
    open_pre: frozenset = frozenset()
    complete: frozenset = frozenset()
    full_families: frozenset = frozenset()
    window: int = 0
    tree_depth: int = 0
    presentation: Presentation | None = field(default=None, repr=False, compare=False)

    @property
    def kind(self) -> str:
        return self.spec.kind

    def closed(self) -> bool:
        return not self.open_fwd and not self.open_pre

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for x in self.elements:
            out.setdefault(self.block_of[x], []).append(x)
        return out

    def dump(self, what: str = "tables") -> list[str]:
        lines = [f"elem {x}" for x in self.elements]
        if what == "elements":
            return lines
        if self.kind == "equivalence":
            for members in self.classes().values():
                lines += [f"E {x} {y}" for x in members for y in members if x < y]
        else:
            lines += [f"f {x} {y}" for x, y in sorted(self.f.items())]
        return lines


def _backbone_codes(b: Block, stage: int) -> range:
    if b.tag in ("cycle", "class", "chain"):
        return range(b.key)
    if b.tag == "cat":
        return range(1)
    if b.tag == "z":
        return range(2 * stage + 1)
    return range(stage + 1)  # omega, ostar, iclass


def _tree_nodes(kind: str | None, depth: int | None, full_depth: int) -> list[int]:
    if kind is None:
        return []
    if kind == "leaf":
        return [0]
    if kind == "full":
        return list(range(2 ** full_depth - 1))
    spine = [2 ** i - 1 for i in range(depth)]
    return spine + [2 ** (i + 1) for i in range(depth - 1)]


def _check_two_zero(P: Presentation, bound: int):
    spec = P.spec
    cycles = P.finite_fams[0][1]
    for L in range(1, bound + 1):
        p, e = _derived_lengths(cycles, P.cats, L)
        if spec.path_character.count(L) != p:
            raise SpecError("$.path_character",
                            f"declares {spec.path_character.count(L)} elements of length {L}, "
                            f"the cycles and caterpillars give {p}")
        if spec.endpath_character.count(L) != e:
            raise SpecError("$.endpath_character",
                            f"declares {spec.endpath_character.count(L)} endpoints of length {L}, "
                            f"the cycles and caterpillars give {e}")


def realize(spec, stage: int, tree_depth: int = TREE_DEPTH_CAP) -> Realization:
    """Materialize every block in shells <= stage + 1, infinite ones to length ``stage``."""
    if stage < 1:
        raise ValueError("stage must be >= 1")
    P = Presentation(spec)
    W = stage + 1
    if isinstance(spec, TwoZeroToOneSpec):
        declared = [_explicit_max(spec.path_character), _explicit_max(spec.endpath_character)]
        declared += [p.start + 2 * p.step for p in
                     spec.path_character.progressions + spec.endpath_character.progressions]
        _check_two_zero(P, max([W + 2] + declared))
    depth = min(stage, tree_depth)
    blocks = P.blocks_upto_shell(W)
    elems: list[int] = []
    block_of: dict[int, int] = {}
    for b in blocks:
        for u in _backbone_codes(b, stage):
            xs = [P.encode(b, u)]
            if P._tree_decorated(b):
                xs += [P.encode(b, u, v) for v in _tree_nodes(P.tree_kind(b, u), b.key, depth)]
            for x in xs:
                elems.append(x)
                block_of[x] = b.index
    M = set(elems)
    f, inv, ofwd, opre = {}, {}, set(), set()
    if P.kind == "equivalence":
        for x in elems:
            if P.block(block_of[x]).key is None:
                ofwd.add(x)
                opre.add(x)
    else:
        for x in elems:
            y = P.f(x)
            if y is not None:
                if y in M:
                    f[x] = y
                else:
                    ofwd.add(x)
            pre = P.preimages(x)
            if any(p not in M for p in pre):
                opre.add(x)
            elif pre:
                inv[x] = pre[0]
    complete, full = set(), set()
    for tag, c in P.finite_fams:
        done = True
        for k in range(1, W + 1):
            n = c.count(k)
            if not is_omega(n) and n <= W:
                complete.add((tag, k))
            else:
                done = False
        if done and c.bounded() and all(k <= W for k, _ in c.char.counts if c.count(k) != 0):
            full.add(tag)
    for tag, n in P.infinite_fams:
        if not is_omega(n) and n <= W:
            complete.add((tag, None))
            full.add(tag)
    return Realization(spec, stage, tuple(sorted(elems)), block_of, tuple(blocks), f, inv,
                       frozenset(ofwd), frozenset(opre), frozenset(complete), frozenset(full),
                       W, depth, P)


# ---------------------------------------------------------------- extraction

@dataclass(frozen=True)
class Tagged:
    """A count read off a snapshot: exact, or a lower bound that may still grow."""
    value: object
    exact: bool

    def to_json(self):
        from .core import ext_to_json
        return {"value": ext_to_json(self.value), "tag": "Exact" if self.exact else "AtLeast"}


@dataclass(frozen=True)
class TaggedCharacter:
    """Observed counts for every size k <= window (absent sizes are Exact 0)."""
    entries: tuple[tuple[int, Tagged], ...]
    window: int

    def get(self, k: int) -> Tagged:
        return dict(self.entries).get(k, Tagged(0, True))

    def to_json(self):
        return {"window": self.window,
                "entries": [{"k": k, **t.to_json()} for k, t in self.entries]}


@dataclass
class ExtractedInvariants:
    kind: str
    stage: int
    fields: dict

    def disagreements(self, spec) -> list[str]:
        """Fields where an Exact value differs from the spec or an AtLeast value exceeds it."""
        out = []
        for name, got in self.fields.items():
            want = getattr(spec, name)
            if isinstance(got, TaggedCharacter):
                for k in range(1, got.window + 1):
                    t = got.get(k)
                    if (t.exact and t.value != want.count(k)) or (not t.exact and t.value > want.count(k)):
                        out.append(f"{name}[{k}]: extracted {t.value} "
                                   f"({'Exact' if t.exact else 'AtLeast'}), spec {want.count(k)}")
            elif (got.exact and got.value != want) or (not got.exact and got.value > want):
                out.append(f"{name}: extracted {got.value}, spec {want}")
        return out

    def to_json(self):
        return {"kind": self.kind, "stage": self.stage,
                "fields": {k: v.to_json() for k, v in self.fields.items()}}


def _components(r: Realization) -> list[list[int]]:
    parent = {x: x for x in r.elements}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in r.f.items():
        a, b = find(x), find(y)
        if a != b:
            parent[a] = b
    comps: dict[int, list[int]] = {}
    for x in r.elements:
        comps.setdefault(find(x), []).append(x)
    return list(comps.values())


def _cycle_of(r: Realization, comp: list[int]) -> list[int] | None:
    """Cycle inside a component, following the materialized table."""
    x, seen, order = comp[0], {}, []
    while x in r.f and x not in seen:
        seen[x] = len(order)
        order.append(x)
        x = r.f[x]
    if x in seen:
        return order[seen[x]:]
    return None


def length(r: Realization, a: int) -> int | None:
    """l(a): number of distinct elements on the forward path from a (None if it leaves the snapshot)."""
    seen = set()
    x = a
    while x not in seen:
        seen.add(x)
        if x in r.open_fwd:
            return None
        if x not in r.f:
            return len(seen)
        x = r.f[x]
    return len(seen)


def _orbit_type(r: Realization, comp: list[int]) -> tuple[str, int | None]:
    cyc = _cycle_of(r, comp)
    if cyc is not None:
        return "cycle", len(cyc)
    if r.kind in TREE_CLASSES:
        # backbone type of an infinite tree-decorated orbit comes from its block
        return r.presentation.block(r.block_of[comp[0]]).tag, None
    heads = [x for x in comp if x not in r.open_pre and r.inverse.get(x) is None]
    tails = [x for x in comp if x not in r.open_fwd and x not in r.f]
    if heads and tails:
        return "chain", len(comp)
    if heads:
        return "omega", None
    if tails:
        return "ostar", None
    return "z", None


def _tally(r, observed: dict, tag: str, name: str, also=()) -> TaggedCharacter:
    # ``also``: families that contribute 1-cycles too (caterpillars)
    entries = []
    for k in range(1, r.window + 1):
        n = observed.get(k, 0)
        exact = (tag, k) in r.complete and (k != 1 or all(t in r.full_families for t in also))
        if n or not exact:
            entries.append((k, Tagged(n, exact)))
    return TaggedCharacter(tuple(entries), r.window)


def _scalar(r, n: int, tag: str) -> Tagged:
    return Tagged(n, (tag, None) in r.complete)


def extract(r: Realization) -> ExtractedInvariants:
    spec = r.spec
    out: dict = {}
    if r.kind == "equivalence":
        sizes: dict[int, int] = {}
        infinite = 0
        for members in r.classes().values():
            if members[0] in r.open_pre:
                infinite += 1
            else:
                sizes[len(members)] = sizes.get(len(members), 0) + 1
        out["character"] = _tally(r, sizes, "class", "character")
        out["infinite_classes"] = _scalar(r, infinite, "iclass")
        return ExtractedInvariants(r.kind, r.stage, out)
    cycles: dict[int, int] = {}
    chains: dict[int, int] = {}
    infinite = {"omega": 0, "z": 0, "ostar": 0}
    for comp in _components(r):
        t, k = _orbit_type(r, comp)
        if t == "cycle":
            cycles[k] = cycles.get(k, 0) + 1
        elif t == "chain":
            chains[k] = chains.get(k, 0) + 1
        else:
            infinite[t] += 1
    if isinstance(spec, InjectionSpec):
        out["character"] = _tally(r, cycles, "cycle", "character")
        out["omega_orbits"] = _scalar(r, infinite["omega"], "omega")
        out["z_orbits"] = _scalar(r, infinite["z"], "z")
    elif isinstance(spec, TwoToOneSpec):
        out["cycle_character"] = _tally(r, cycles, "cycle", "cycle_character")
        out["z_chains"] = _scalar(r, infinite["z"], "z")
    elif isinstance(spec, PartialInjectionSpec):
        out["cycle_character"] = _tally(r, cycles, "cycle", "cycle_character")
        out["chain_character"] = _tally(r, chains, "chain", "chain_character")
        out["omega_chains"] = _scalar(r, infinite["omega"], "omega")
        out["z_chains"] = _scalar(r, infinite["z"], "z")
        out["omega_star_chains"] = _scalar(r, infinite["ostar"], "ostar")
    else:
        out.update(_extract_two_zero(r, cycles, infinite))
    return ExtractedInvariants(r.kind, r.stage, out)


def _extract_two_zero(r: Realization, cycles: dict, infinite: dict) -> dict:
    path: dict[int, int] = {}
    end: dict[int, int] = {}
    endless = 0
    for x in r.elements:
        L = length(r, x)
        is_endpoint = x not in r.open_pre and r.inverse.get(x) is None
        if L is None:
            endless += is_endpoint
            continue
        path[L] = path.get(L, 0) + 1
        if is_endpoint:
            end[L] = end.get(L, 0) + 1
    out = {"cycle_character": _tally(r, cycles, "cycle", "cycle_character", also=("cat",))}
    finite_done = {"cycle", "cat"} <= r.full_families
    for name, obs in (("path_character", path), ("endpath_character", end)):
        entries = []
        for L in range(1, r.window + 1):
            n = obs.get(L, 0)
            if n or not finite_done:
                entries.append((L, Tagged(n, finite_done)))
        out[name] = TaggedCharacter(tuple(entries), r.window)
    out["z_chains"] = _scalar(r, infinite["z"], "z")
    out["omega_chains"] = _scalar(r, infinite["omega"], "omega")
    chains_done = {"z", "omega"} <= r.full_families
    tree = r.presentation.tree
    out["infinite_length_endpoints"] = Tagged(endless, chains_done and (tree == "full" or endless == 0))
    return out


# ---------------------------------------------------------------- finite isomorphism

def _tree_code(r: Realization, x: int, skip: int | None, pre: dict) -> str:
    kids = sorted(_tree_code(r, y, None, pre) for y in pre.get(x, ()) if y != skip)
    return "(" + "".join(kids) + ")"


def _signature(r: Realization, comp: list[int], pre: dict):
    if r.kind == "equivalence":
        return ("class", len(comp))
    cyc = _cycle_of(r, comp)
    if cyc is None:
        root = next(x for x in comp if x not in r.f)
        return ("tree", _tree_code(r, root, None, pre))
    k = len(cyc)
    # tree hanging off each cycle node, excluding its cycle predecessor
    codes = [_tree_code(r, x, cyc[i - 1], pre) for i, x in enumerate(cyc)]
    return ("cycle", min(tuple(codes[i:] + codes[:i]) for i in range(k)))


def signatures(r: Realization) -> list:
    if not r.closed():
        raise ValueError("realization still has growing blocks")
    pre: dict[int, list[int]] = {}
    for x, y in r.f.items():
        pre.setdefault(y, []).append(x)
    comps = list(r.classes().values()) if r.kind == "equivalence" else _components(r)
    return sorted(_signature(r, c, pre) for c in comps)


def finite_iso(r1: Realization, r2: Realization) -> bool:
    """Isomorphism of two closed snapshots, by comparing component signatures."""
    if not r1.closed() or not r2.closed():
        raise ValueError("finite_iso needs realizations without growing blocks")
    if r1.kind != r2.kind or len(r1.elements) != len(r2.elements):
        return False
    return signatures(r1) == signatures(r2)


def brute_force_iso(r1: Realization, r2: Realization, limit: int = 12) -> bool:
    """Exhaustive bijection search with early pruning; for cross-checking only."""
    if not r1.closed() or not r2.closed():
        raise ValueError("brute_force_iso needs realizations without growing blocks")
    if r1.kind != r2.kind or len(r1.elements) != len(r2.elements):
        return False
    if len(r1.elements) > limit:
        raise ValueError(f"more than {limit} elements")
    xs, ys = list(r1.elements), list(r2.elements)
    eqv = r1.kind == "equivalence"

    def rel(r, a, b):
        return r.block_of[a] == r.block_of[b] if eqv else r.f.get(a) == b

    def indeg(r):
        d = {x: 0 for x in r.elements}
        for y in r.f.values():
            d[y] += 1
        return d

    d1, d2 = (indeg(r1), indeg(r2)) if not eqv else ({}, {})
    phi: dict[int, int] = {}
    used: set[int] = set()

    def ok(x, y):
        if not eqv and (d1[x] != d2[y] or (x in r1.f) != (y in r2.f)):
            return False
        for a, b in phi.items():
            if rel(r1, x, a) != rel(r2, y, b) or rel(r1, a, x) != rel(r2, b, y):
                return False
        return rel(r1, x, x) == rel(r2, y, y)

    def go(i):
        if i == len(xs):
            return True
        x = xs[i]
        for y in ys:
            if y not in used and ok(x, y):
                phi[x] = y
                used.add(y)
                if go(i + 1):
                    return True
                del phi[x]
                used.discard(y)
        return False

    return go(0)


# ---------------------------------------------------------------- handles for programs

@dataclass(frozen=True)
class StructureHandle:
    """A presentation's function as seen by interpreted programs.

    role "f" is the structure function, "finv" the canonical inverse and
    "eqv" the class-element enumerator (``nth``).
    """
    name: str
    presentation: Presentation = field(repr=False, compare=False)
    role: str = "f"

    def apply(self, x: int) -> int | None:
        if self.role == "f":
            return self.presentation.f(x)
        if self.role == "finv":
            return self.presentation.inverse(x)
        return x if self.presentation.is_element(x) else None

    def nth(self, rep: int, n: int) -> int | None:
        return self.presentation.nth(rep, n)


def handles(P: Presentation) -> dict[str, StructureHandle]:
    if P.kind == "equivalence":
        return {"eqv": StructureHandle("eqv", P, "eqv")}
    return {"f": StructureHandle("f", P, "f"), "finv": StructureHandle("finv", P, "finv")}


# ---------------------------------------------------------------- closure stages

CHARACTER_FIELDS = {
    "equivalence": ("character",),
    "injection": ("character",),
    "two-to-one": ("cycle_character",),
    "two-zero-to-one": ("cycle_character", "path_character", "endpath_character"),
    "partial-injection": ("cycle_character", "chain_character"),
}


def closure_stage(spec, k_max: int = 6, n_max: int = 6, limit: int = 64) -> int:
    """Least stage at which every fact <k, n> in a character, k, n <= the bounds, is visible.

    Visible means the snapshot shows min(count(k), n_max) elements, orbits or
    classes of size k, so a bounded search over it decides membership.
    """
    for stage in range(max(k_max, 1), limit + 1):
        r = realize(spec, stage)
        got = extract(r).fields
        if all(got[name].get(k).value >= min(getattr(spec, name).count(k), n_max)
               for name in CHARACTER_FIELDS[spec.kind] for k in range(1, k_max + 1)):
            return stage
    raise ValueError(f"facts up to <{k_max},{n_max}> not visible by stage {limit}")
