"""Shared hypothesis strategies."""
from hypothesis import strategies as st

from cohpow.core import (OMEGA, Character, EquivalenceSpec, InjectionSpec, PartialInjectionSpec, Progression,
                         TwoToOneSpec, TwoZeroToOneSpec)

ext_counts = st.one_of(st.integers(0, 20), st.just(OMEGA))
positive_counts = st.one_of(st.integers(1, 5), st.just(OMEGA))


@st.composite
def characters(draw, unbounded=None, max_key=8):
    counts = draw(st.dictionaries(st.integers(1, max_key), positive_counts, max_size=4))
    want_prog = draw(st.booleans()) if unbounded is None else unbounded
    progs = []
    if want_prog:
        progs.append(Progression(draw(st.integers(1, 5)), draw(st.integers(1, 3)), draw(positive_counts)))
    return Character.of(counts, *progs)


small_counts = st.one_of(st.integers(0, 3), st.just(OMEGA))


@st.composite
def specs(draw):
    kind = draw(st.sampled_from(["equivalence", "injection", "two-to-one", "two-zero-to-one",
                                 "partial-injection"]))
    if kind == "equivalence":
        return EquivalenceSpec(character=draw(characters()), infinite_classes=draw(small_counts))
    if kind == "injection":
        return InjectionSpec(character=draw(characters()), omega_orbits=draw(small_counts),
                             z_orbits=draw(small_counts))
    if kind == "two-to-one":
        return TwoToOneSpec(cycle_character=draw(characters()), z_chains=draw(small_counts))
    if kind == "two-zero-to-one":
        return TwoZeroToOneSpec(cycle_character=draw(characters()), path_character=draw(characters()),
                                endpath_character=draw(characters()), z_chains=draw(small_counts),
                                omega_chains=draw(small_counts),
                                infinite_length_endpoints=draw(small_counts),
                                highly_computable=draw(st.booleans()))
    return PartialInjectionSpec(cycle_character=draw(characters()), chain_character=draw(characters()),
                                z_chains=draw(small_counts), omega_chains=draw(small_counts),
                                omega_star_chains=draw(small_counts), range_computable=draw(st.booleans()),
                                domain_computable=draw(st.booleans()))
