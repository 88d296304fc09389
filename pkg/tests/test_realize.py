import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cohpow.core import (OMEGA, Character, EquivalenceSpec, InjectionSpec, PartialInjectionSpec, Progression,
                         SpecError, TwoToOneSpec)
from cohpow.interp import pair
from cohpow.realize import (CHARACTER_FIELDS, brute_force_iso, closure_stage, extract, finite_iso, length,
                            realize, unzig, zig)
from cohpow.suite import curated_suite

C = Character.of
SUITE = curated_suite()


def preimage_counts(r):
    d = {x: 0 for x in r.elements}
    for y in r.f.values():
        d[y] += 1
    return d


def test_single_finite_class():
    r = realize(EquivalenceSpec(character=C({2: 1})), 5)
    assert r.elements == (pair(0, 0), pair(0, 1))
    assert list(r.classes().values()) == [[pair(0, 0), pair(0, 1)]]
    ex = extract(r)
    assert ex.fields["character"].get(2).value == 1 and ex.fields["character"].get(2).exact
    assert ex.fields["infinite_classes"].value == 0 and ex.fields["infinite_classes"].exact


def test_omega_orbit_is_a_successor_table():
    r = realize(InjectionSpec(omega_orbits=1), 3)
    assert r.f == {pair(0, i): pair(0, i + 1) for i in range(3)}
    assert r.open_fwd == {pair(0, 3)}
    assert extract(r).fields["omega_orbits"].value == 1


def test_two_to_one_loop_with_heap_tree():
    r = realize(TwoToOneSpec(cycle_character=C({1: 1})), 3)
    a = r.elements[0]
    assert r.f[a] == a
    pre = sorted(x for x, y in r.f.items() if y == a)
    assert len(pre) == 2
    b = pre[1]
    # b roots a binary tree; every interior node has exactly two preimages
    counts = preimage_counts(r)
    interior = [x for x in r.elements if x not in r.open_pre]
    assert all(counts[x] == 2 for x in interior)
    assert r.inverse[a] == min(pre)
    assert counts[b] == 2


def test_three_chain_endpoints_visible():
    r = realize(PartialInjectionSpec(chain_character=C({3: 1})), 3)
    x1, x2, x3 = r.elements
    assert r.f == {x1: x2, x2: x3}
    t = extract(r).fields["chain_character"].get(3)
    assert (t.value, t.exact) == (1, True)


def test_stage_must_be_positive():
    with pytest.raises(ValueError):
        realize(EquivalenceSpec(character=C({1: 1})), 0)


def test_inconsistent_two_zero_characters_rejected():
    from cohpow.core import TwoZeroToOneSpec
    with pytest.raises(SpecError):
        realize(TwoZeroToOneSpec(cycle_character=C({1: 1}), path_character=C({5: 3})), 3)


@pytest.mark.parametrize("z", range(-20, 21))
def test_zigzag_inverse(z):
    assert unzig(zig(z)) == z
    assert zig(z) >= 0


@pytest.mark.parametrize("entry", SUITE, ids=lambda e: e.name)
def test_snapshots_are_monotone(entry):
    prev = None
    for s in range(1, 6):
        r = realize(entry.spec, s)
        if prev is not None:
            assert set(prev.elements) <= set(r.elements)
            assert all(r.f.get(x) == y for x, y in prev.f.items())
            assert all(prev.block_of[x] == r.block_of[x] for x in prev.elements)
        prev = r


@pytest.mark.parametrize("entry", SUITE, ids=lambda e: e.name)
def test_round_trip_at_closure_stage(entry):
    s = closure_stage(entry.spec)
    assert extract(realize(entry.spec, s)).disagreements(entry.spec) == []


@pytest.mark.parametrize("entry", SUITE, ids=lambda e: e.name)
def test_lower_bounds_grow_with_stage(entry):
    prev = None
    for s in range(1, 7):
        fields = extract(realize(entry.spec, s)).fields
        if prev is not None:
            for name, got in fields.items():
                if name in CHARACTER_FIELDS[entry.spec.kind]:
                    for k in range(1, 6):
                        assert got.get(k).value >= prev[name].get(k).value
                else:
                    assert got.value >= prev[name].value
        prev = fields


@pytest.mark.parametrize("entry", [e for e in SUITE if e.spec.kind in ("two-to-one", "two-zero-to-one")],
                         ids=lambda e: e.name)
def test_degree_law(entry):
    allowed = {2} if entry.spec.kind == "two-to-one" else {0, 2}
    for s in range(1, 6):
        r = realize(entry.spec, s)
        counts = preimage_counts(r)
        assert all(counts[x] in allowed for x in r.elements if x not in r.open_pre)


def test_length_on_a_caterpillar_path():
    from cohpow.suite import _two_zero
    r = realize(_two_zero(C({1: 1})), 4)
    loop = next(x for x in r.elements if r.f.get(x) == x)
    # a fixed point has length 1; its other preimage reaches it in one step
    assert length(r, loop) == 1
    other = next(x for x, y in r.f.items() if y == loop and x != loop)
    assert length(r, other) == 2


def test_finite_iso_examples():
    a = realize(EquivalenceSpec(character=C({2: 2})), 5)
    b = realize(EquivalenceSpec(character=C({2: 2})), 6)
    assert finite_iso(a, b) and brute_force_iso(a, b)
    c = realize(EquivalenceSpec(character=C({2: 1})), 5)
    d = realize(EquivalenceSpec(character=C({3: 1})), 5)
    assert not finite_iso(c, d) and not brute_force_iso(c, d)


def test_finite_iso_rejects_growing_blocks():
    r = realize(InjectionSpec(omega_orbits=1), 3)
    with pytest.raises(ValueError):
        finite_iso(r, r)


CLOSED_SPECS = [
    EquivalenceSpec(character=C({1: 2, 2: 1})), EquivalenceSpec(character=C({1: 1, 2: 1, 1: 2})),
    EquivalenceSpec(character=C({1: 4})), EquivalenceSpec(character=C({2: 2})), EquivalenceSpec(character=C({4: 1})),
    EquivalenceSpec(character=C({1: 1, 3: 1})), InjectionSpec(character=C({1: 2, 2: 1})),
    InjectionSpec(character=C({4: 1})), InjectionSpec(character=C({1: 1, 3: 1})), InjectionSpec(character=C({2: 2})),
    PartialInjectionSpec(chain_character=C({2: 2})), PartialInjectionSpec(cycle_character=C({2: 2})),
    PartialInjectionSpec(chain_character=C({1: 1, 3: 1})), PartialInjectionSpec(cycle_character=C({1: 1}),
                                                                                chain_character=C({3: 1})),
]


def test_finite_iso_agrees_with_exhaustive_search():
    rs = [realize(s, 6) for s in CLOSED_SPECS]
    for r1, r2 in itertools.product(rs, repeat=2):
        assert finite_iso(r1, r2) == brute_force_iso(r1, r2)


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.integers(1, 3), st.integers(1, 2), min_size=1, max_size=3),
       st.dictionaries(st.integers(1, 3), st.integers(1, 2), min_size=1, max_size=3))
def test_iso_iff_same_character(c1, c2):
    r1 = realize(EquivalenceSpec(character=C(c1)), 6)
    r2 = realize(EquivalenceSpec(character=C(c2)), 6)
    if len(r1.elements) <= 8 and len(r2.elements) <= 8:
        assert finite_iso(r1, r2) == brute_force_iso(r1, r2) == (C(c1) == C(c2))


def test_closure_stage_for_progressions():
    spec = EquivalenceSpec(character=Character.of({}, Progression(2, 2, 1)), infinite_classes=OMEGA)
    s = closure_stage(spec)
    got = extract(realize(spec, s)).fields["character"]
    assert all(got.get(k).value >= spec.character.count(k) for k in range(1, 7))
