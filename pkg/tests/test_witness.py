import pytest
from hypothesis import given, strategies as st

from cohpow.core import Character, EquivalenceSpec, InjectionSpec, PartialInjectionSpec, TwoToOneSpec
from cohpow.interp import UNDEFINED, Halt, evaluate, pair
from cohpow.realize import Presentation, realize
from cohpow.suite import curated_suite
from cohpow.witness import (build_slf_graph, default_family, eqv_witnesses, graph_psi, injection_z_witnesses,
                            omega_chain_witnesses, omega_star_witnesses, segment, spacing_g,
                            spacing_window_size, verify_family, verify_graph_embedding, witnesses)

C = Character.of
ALL = Character.every_size()


def path(a, b):
    return abs(a - b) == 1


def by_claim(results):
    return {r.claim: r for r in results}


def test_segment_examples():
    assert segment(7) == (3, 1)
    assert segment(1) == (0, 1)
    assert segment(6) == (2, 3)


@given(st.integers(1, 10**6))
def test_segment_inverts_triangular_layout(a):
    k, m = segment(a)
    assert 1 <= m <= k + 1
    assert k * (k + 1) // 2 + m == a


def test_path_graph_segment_two():
    g = build_slf_graph(path, 10)
    assert {e for e in g.edges if 4 <= e[0] <= 6} == {(4, 5), (5, 6)}
    # no edge leaves a segment
    assert all(segment(a)[0] == segment(b)[0] for a, b in g.edges)


def test_edgeless_graph_has_no_edges():
    assert build_slf_graph(lambda a, b: False, 100).edges == frozenset()


def test_graph_psi_examples():
    assert evaluate(graph_psi(1), 3, 100) == Halt(7)
    assert evaluate(graph_psi(1), 0, 100) == Halt(1)
    assert evaluate(graph_psi(2), 0, 100) == Halt(2)
    with pytest.raises(ValueError):
        graph_psi(0)


@given(st.integers(1, 6), st.integers(0, 200))
def test_graph_psi_closed_form(n, x):
    assert evaluate(graph_psi(n), x, 1000) == Halt(x * (x + 1) // 2 + n)


def test_graph_embedding_examples():
    g = build_slf_graph(path, 600)
    assert verify_graph_embedding(g, [(1, 2)], (1, 30)).passed
    assert verify_graph_embedding(g, [(1, 3)], (2, 30)).passed
    empty = build_slf_graph(lambda a, b: False, 600)
    assert verify_graph_embedding(empty, [(1, 2), (2, 5)], (4, 30)).passed


class _NoEdges(type(build_slf_graph(path, 1))):
    def adjacent(self, a, b):
        return False


def test_graph_embedding_catches_a_wrong_copy():
    g = build_slf_graph(path, 600)
    broken = _NoEdges(g.related, g.bound, g.edges)
    res = verify_graph_embedding(broken, [(1, 2)], (1, 30))
    assert not res.passed and len(res.counterexamples) == 30  # x = 1..30


def test_eqv_family_layout():
    P = Presentation(EquivalenceSpec(character=ALL))
    w = eqv_witnesses(P, 1, 2)
    for i in range(10):
        v = evaluate(w.psi(0, 1), i, 10**4)
        assert isinstance(v, Halt) and P.is_element(v.value)
    assert evaluate(w.psi(0, 2), 0, 10**4) is UNDEFINED  # a(<0,0>) has a single member


def test_eqv_window_example():
    w = eqv_witnesses(realize(EquivalenceSpec(character=ALL), 5), 0, 2)
    res = by_claim(verify_family(w, (5, 50)))
    assert res["distinct[m=0,k=1,2]"].passed
    assert res["related[m=0,k=1,2]"].passed
    assert res["defined[m=0,k=1]"].threshold == 0


def test_eqv_needs_unbounded_character():
    with pytest.raises(ValueError):
        eqv_witnesses(Presentation(EquivalenceSpec(character=C({2: 3}))))


def test_injection_infinite_orbit_separation_threshold():
    P = Presentation(InjectionSpec(omega_orbits=1))
    w = injection_z_witnesses(P, 2, 1, "InjZChain_infiniteOrbit")
    res = by_claim(verify_family(w, (0, 40), connect=16))
    # oracle: at index n the m=1 and m=2 exponents 3n and 5n+1 are 2n+1 apart,
    # so they are joined by at most 16 steps exactly when n < 8
    want = 1 + max(n for n in range(41) if (5 * n + 1) - 3 * n <= 16)
    assert res["separated[m=1,2]"].threshold == want == 8
    late = by_claim(verify_family(w, (want, want + 50), connect=16))
    assert all(r.passed for r in late.values())


def test_infinite_orbit_values_follow_exponent_formula():
    P = Presentation(InjectionSpec(omega_orbits=1))
    w = injection_z_witnesses(P, 2, 1, "InjZChain_infiniteOrbit")
    a = evaluate(w.psi(0, 0), 1, 10**4).value  # exponent 0*3 + 1 - 1 = 0
    for m in range(3):
        for n in range(1, 8):
            want = a
            for _ in range(m * (2 * n + 1) + n - 1):
                want = P.f(want)
            assert evaluate(w.psi(m, 0), n, 10**5) == Halt(want)


def test_omega_chain_heads_have_no_preimage():
    P = Presentation(PartialInjectionSpec(chain_character=ALL))
    w = omega_chain_witnesses(P, 2, 3)
    res = verify_family(w)
    assert all(r.passed for r in res)
    assert any(r.claim.startswith("no-preimage") for r in res)
    for x in range(20):
        for n in range(4):
            v = evaluate(w.psi(0, n), x, 10**5)
            assert (v is UNDEFINED) == (n > pair(0, x))


def test_omega_star_family_passes():
    P = Presentation(PartialInjectionSpec(chain_character=ALL))
    assert all(r.passed for r in verify_family(omega_star_witnesses(P, 2, 3)))


def test_spacing_examples():
    P = Presentation(TwoToOneSpec(cycle_character=C({1: 1})))
    assert [spacing_window_size(P, m) for m in (0, 1, 3)] == [1, 4, 16]


def _window_from_tables(r, m):
    """Oracle: walk the realization's own f and inverse tables."""
    seen = set()
    for n in range(m + 1):
        x = spacing_g(r, n)
        seen.add(x)
        up = down = x
        for _ in range(n):
            up = r.f.get(up)
            down = r.inverse.get(down)
            seen.update(v for v in (up, down) if v is not None)
    return len(seen)


def test_spacing_matches_materialized_tables():
    spec = TwoToOneSpec(cycle_character=C({1: 1}))
    r = realize(spec, 8)
    P = Presentation(spec)
    for m in range(3):
        assert _window_from_tables(r, m) == spacing_window_size(P, m) == (m + 1) ** 2


def test_spacing_rejects_depth_overrun():
    r = realize(TwoToOneSpec(cycle_character=C({1: 1})), 2)
    with pytest.raises(ValueError):
        spacing_g(r, 5)


@pytest.mark.parametrize("entry", [e for e in curated_suite() if e.families], ids=lambda e: e.name)
def test_suite_families_pass(entry):
    P = Presentation(entry.spec)
    assert default_family(P) in entry.families or default_family(P) is None
    for kind in entry.families:
        results = verify_family(witnesses(P, kind, 2, 2))
        assert all(r.passed and not r.inconclusive for r in results), \
            [r.to_json() for r in results if not r.passed][:1]
        assert all(r.window[1] - r.window[0] >= 50 for r in results)


def test_unknown_family_kind():
    with pytest.raises(ValueError):
        witnesses(Presentation(EquivalenceSpec(character=ALL)), "Nonsense")


def _probes():
    """Shifted copies of psi_n, and parity mixtures of two of them."""
    from cohpow.interp import Add, Const, IfLess, Input, parity
    out = {}
    for n in range(1, 5):
        for d in range(0, 3):
            out[f"psi{n}+{d}"] = Add(graph_psi(n), Const(d))
    for n1 in range(1, 4):
        for n2 in range(1, 4):
            out[f"mix{n1},{n2}"] = IfLess(parity(Input()), Const(1), graph_psi(n1), graph_psi(n2))
    return out


def test_adjacent_probes_collapse_to_some_psi():
    # on the path graph, a probe adjacent to psi_1 at every point of an index set
    # must coincide there with psi_2, the only neighbour of vertex 1
    g = build_slf_graph(path, 2000)
    window = range(10, 40)
    hits = 0
    for name, phi in _probes().items():
        for part in (window, window[::2], window[1::2]):
            vals = [evaluate(phi, x, 10**4).value for x in part]
            base = [evaluate(graph_psi(1), x, 10**4).value for x in part]
            if all(g.adjacent(a, b) for a, b in zip(vals, base)):
                assert vals == [evaluate(graph_psi(2), x, 10**4).value for x in part], name
                hits += 1
    assert hits >= 4  # psi1+1, psi2+0 and the mixtures with psi2 on one parity
