import json

import pytest
from hypothesis import given, settings, strategies as st

from cohpow import interp
from cohpow.core import SpecError
from cohpow.interp import (STILL_RUNNING, UNDEFINED, Add, Apply, BoundedSearch, Const, DivFloor, FnHandle, Halt,
                           IfLess, Input, Iterate, Mul, Pair, ProjLeft, ProjRight, SearchVar, Sub, TableHandle,
                           Undefined, cost, evaluate, guard_le, pair, parity, unpair)


def diagonal_pairs(limit):
    """Independent oracle: walk the anti-diagonals k+n = 0, 1, 2, ... in order of increasing n."""
    out = {}
    code, d = 0, 0
    while code < limit:
        for n in range(d + 1):
            out[(d - n, n)] = code
            code += 1
        d += 1
    return out


def test_eval_examples():
    assert evaluate(Const(7), 42, 10) == Halt(7)
    assert evaluate(Undefined(), 0, 1000) is UNDEFINED
    assert evaluate(BoundedSearch(Const(0), Const(0)), 5, 100) is UNDEFINED


def test_budget_below_one_rejected():
    with pytest.raises(ValueError):
        evaluate(Const(1), 0, 0)


def test_out_of_budget_is_an_outcome():
    deep = Input()
    for _ in range(50):
        deep = Add(deep, Const(1))
    assert evaluate(deep, 0, 10) is STILL_RUNNING
    assert evaluate(deep, 0, 10**4) == Halt(50)


@pytest.mark.parametrize("k,n,code", [(0, 0, 0), (1, 1, 4), (2, 3, 18)])
def test_pair_examples(k, n, code):
    assert pair(k, n) == code
    assert unpair(code) == (k, n)
    assert diagonal_pairs(code + 1)[(k, n)] == code


def test_pair_matches_diagonal_enumeration():
    for (k, n), code in diagonal_pairs(5000).items():
        assert pair(k, n) == code


def test_pair_unpair_inverse_exhaustive():
    for m in range(10**4 + 1):
        k, n = unpair(m)
        assert pair(k, n) == m
        assert k <= m and n <= m


def test_pair_strictly_increasing_exhaustive():
    for k in range(101):
        for n in range(101):
            if k < 100:
                assert pair(k, n) < pair(k + 1, n)
            if n < 100:
                assert pair(k, n) < pair(k, n + 1)


def test_arithmetic_and_projections():
    assert evaluate(Sub(Const(3), Const(5)), 0, 10) == Halt(0)
    assert evaluate(DivFloor(Input(), Const(0)), 4, 10) is UNDEFINED
    assert evaluate(ProjLeft(Pair(Const(2), Const(3))), 0, 10) == Halt(2)
    assert evaluate(ProjRight(Const(18)), 0, 10) == Halt(3)
    assert [evaluate(parity(Input()), x, 50).value for x in range(6)] == [0, 1, 0, 1, 0, 1]


def test_guard_le():
    p = guard_le(Const(5), Input(), Mul(Input(), Const(2)))
    assert evaluate(p, 4, 50) is UNDEFINED
    assert evaluate(p, 5, 50) == Halt(10)


def test_bounded_search_finds_least():
    # least j < x with j*j >= 10
    p = BoundedSearch(Input(), IfLess(Mul(SearchVar(), SearchVar()), Const(10), Const(0), Const(1)))
    assert evaluate(p, 10, 1000) == Halt(4)
    assert evaluate(p, 4, 1000) is UNDEFINED


def test_structure_function_application():
    succ = FnHandle("succ", lambda x: x + 1)
    half = TableHandle.from_dict("t", {0: 5, 5: 7})
    assert evaluate(Iterate(succ, Const(3), Input()), 10, 100) == Halt(13)
    assert evaluate(Apply(half, Apply(half, Const(0))), 0, 100) == Halt(7)
    assert evaluate(Apply(half, Const(1)), 0, 100) is UNDEFINED


def test_each_application_costs_a_step():
    succ = FnHandle("succ", lambda x: x + 1)
    assert cost(Iterate(succ, Const(10), Const(0)), 0) > cost(Iterate(succ, Const(1), Const(0)), 0) + 8


def test_json_round_trip_with_handles():
    succ = FnHandle("succ", lambda x: x + 1)
    p = IfLess(Input(), Const(3), Iterate(succ, Input(), Const(0)), Undefined())
    doc = json.loads(json.dumps(interp.to_json(p)))
    assert interp.from_json(doc, {"succ": succ}) == p


@pytest.mark.parametrize("doc,where", [
    ({"op": "frobnicate"}, r"\$"),
    ({"op": "add", "args": [{"op": "const", "args": [-1]}, {"op": "input"}]}, r"\$\.args\[0\]\.args\[0\]"),
    ({"op": "apply", "args": [{"handle": "nope"}, {"op": "input"}]}, r"\$\.args\[0\]"),
    ({"op": "add", "args": [{"op": "input"}]}, r"\$"),
])
def test_from_json_errors(doc, where):
    with pytest.raises(SpecError, match=where):
        interp.from_json(doc)


leaves = st.one_of(st.integers(0, 9).map(Const), st.just(Input()), st.just(Undefined()))


def _extend(children):
    return st.one_of(
        st.builds(Add, children, children), st.builds(Sub, children, children),
        st.builds(Mul, children, children), st.builds(DivFloor, children, children),
        st.builds(Pair, children, children), st.builds(ProjLeft, children),
        st.builds(ProjRight, children), st.builds(IfLess, children, children, children, children),
        st.builds(Iterate, st.just(FnHandle("succ", lambda x: x + 1)), children, children),
    )


programs = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=200)
@given(programs, st.integers(0, 20), st.integers(1, 60))
def test_budget_monotone(p, x, b):
    first = evaluate(p, x, b)
    later = evaluate(p, x, 2 * b)
    if isinstance(first, Halt):
        assert later == first
    if first is UNDEFINED:
        assert later is UNDEFINED


@given(programs, st.integers(0, 20))
def test_deterministic(p, x):
    assert evaluate(p, x, 200) == evaluate(p, x, 200)
