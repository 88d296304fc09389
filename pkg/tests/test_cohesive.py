import json
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from cohpow.cohesive import (MaximalRun, ResidueEngine, canonical_embed, cohesion_exceptions, eqc_check,
                             estate_monotone, make_family, run_maximal, settled, stable, totalize)
from cohpow.interp import Const, Halt, IfLess, Input, Sub, Undefined, evaluate, pair


@pytest.fixture(scope="module")
def evens_run():
    return run_maximal(["evens"], 2000)


@pytest.fixture(scope="module")
def two_gen_run():
    return run_maximal(["evens", "mult3"], 3000)


def test_first_stage_is_identity():
    r = run_maximal(["evens", "primes"], 1)
    assert r.reported_markers() == list(range(24))
    assert r.enumerated_E == {}


def test_evens_markers_sit_on_evens(evens_run):
    ms = evens_run.reported_markers()
    assert all(x % 2 == 0 for x in ms[1:])
    # every odd number below the last marker has been thrown into E
    assert all(evens_run.in_E(x) for x in range(1, ms[-1], 2))


def test_two_generators_prefer_multiples_of_six(two_gen_run):
    ms = two_gen_run.reported_markers()
    assert all(x % 6 == 0 for x in ms[2:])
    assert stable(two_gen_run)


def test_markers_increase_and_avoid_E(two_gen_run):
    ms = two_gen_run.markers
    assert ms == sorted(set(ms))
    assert not any(two_gen_run.in_E(x) for x in ms)


def test_run_invariants(two_gen_run):
    assert estate_monotone(two_gen_run) == []
    assert settled(two_gen_run, 4, 1500)
    assert all(n <= e for e, n in enumerate(cohesion_exceptions(two_gen_run)))


def test_bad_arguments():
    with pytest.raises(ValueError):
        run_maximal([], 5)
    with pytest.raises(ValueError):
        run_maximal(["evens"], 0)
    with pytest.raises(ValueError):
        make_family(["no-such-engine"])


def test_engines_are_monotone():
    for eng in make_family(["evens", "primes", "squares", "triangular"]) + [ResidueEngine(7, 2)]:
        prev = set()
        for s in range(0, 60, 3):
            now = eng.enumerated(s)
            assert prev <= now
            prev = now


def test_run_json_round_trip(evens_run):
    doc = json.loads(json.dumps(evens_run.to_json()))
    back = MaximalRun.from_json(doc)
    assert back.markers == evens_run.markers
    assert back.enumerated_E == evens_run.enumerated_E
    assert back.complement_window(30) == evens_run.complement_window(30)


def test_eqc_examples(evens_run):
    v = eqc_check(Const(3), Const(3), evens_run, 10, 100)
    assert v.kind == "agree" and len(v.checked) == 10
    v = eqc_check(Const(3), Const(4), evens_run, 10, 100)
    assert v.kind == "disagree" and len(v.witnesses) == 10


def test_eqc_guarded_pair_agrees_above_threshold():
    run = run_maximal(["evens"], 200)
    guarded = IfLess(Input(), Const(5), Undefined(), Sub(Input(), Const(5)))
    patched = IfLess(Input(), Const(5), Const(0), Sub(Input(), Const(5)))
    v = eqc_check(guarded, patched, run, 12, 100)
    # brute force over the same window: both sides halt exactly at complement elements >= 5
    window = run.complement_window(12)
    assert v.kind == "agree"
    assert v.checked == [x for x in window if x >= 5]


def test_eqc_inconclusive_when_budget_tiny(evens_run):
    deep = Input()
    for _ in range(20):
        deep = Sub(deep, Const(0))
    v = eqc_check(deep, Input(), evens_run, 5, 3)
    assert v.kind == "inconclusive" and len(v.pending) == 5


def test_eqc_window_must_be_positive(evens_run):
    with pytest.raises(ValueError):
        eqc_check(Const(1), Const(1), evens_run, 0, 10)


programs = st.one_of(st.integers(0, 5).map(Const), st.just(Input()), st.just(Undefined()),
                     st.builds(lambda c: IfLess(Input(), Const(c), Undefined(), Input()), st.integers(0, 30)),
                     st.builds(lambda c: Sub(Input(), Const(c)), st.integers(0, 3)))


@settings(max_examples=60, deadline=None)
@given(programs, programs)
def test_eqc_reflexive_and_symmetric(p1, p2):
    run = run_maximal(["evens"], 100)
    assert eqc_check(p1, p1, run, 15, 100).kind != "disagree"
    a, b = eqc_check(p1, p2, run, 15, 100), eqc_check(p2, p1, run, 15, 100)
    assert a.kind == b.kind and a.checked == b.checked
    assert sorted((i, y, x) for i, x, y in a.witnesses) == sorted(b.witnesses)


def test_totalize_examples():
    run = run_maximal(["evens"], 800, markers=128)
    t = totalize(Const(9), run, 50)
    assert set(t.table.values()) == {9} and len(t.table) == 51
    t = totalize(Undefined(), run, 50)
    # only indices that enter E get a default; the rest stay unresolved
    assert all(t.table[i] == i for i in t.table)
    assert t.unresolved == [i for i in range(51) if not run.in_E(i)]


def test_totalize_identity_when_everything_enters_E():
    base = run_maximal(["evens"], 100)
    # a hand-made snapshot whose E covers [0, 40]
    run = replace(base, enumerated_E={x: x + 1 for x in range(41)})
    t = totalize(Undefined(), run, 40)
    assert t.unresolved == []
    assert t.table == {i: i for i in range(41)}
    assert set(t.source.values()) == {"default"}


@pytest.mark.parametrize("a", [0, 5, pair(2, 3)])
def test_canonical_embedding(a, evens_run):
    p = canonical_embed(a)
    assert p == Const(a)
    assert all(evaluate(p, i, 1) == Halt(a) for i in range(20))
    t = totalize(p, evens_run, 30)
    assert set(t.table.values()) == {a}
