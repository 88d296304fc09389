"""Curated structure specs with hand-derived expectations for their cohesive powers.

Each expectation records the predicted verdict, the distinguishing sentence
(if any), the power fields that differ from the input ("same" otherwise, or
"undetermined"), and the one theorem tag that justifies the verdict.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import (OMEGA, Character, Determined, EquivalenceSpec, InjectionSpec, PartialInjectionSpec,
                   Progression, TwoToOneSpec, TwoZeroToOneSpec, Undetermined)
from .realize import two_zero_characters

C = Character.of
ALL = Character.every_size()


@dataclass
class SuiteEntry:
    name: str
    spec: object
    verdict: str
    cite: str
    sentence: str | None = None
    power: dict = field(default_factory=dict)  # field -> value or "undetermined"; others "same"
    families: tuple = ()

    def expected_field(self, name):
        return self.power.get(name, "same")


def _two_zero(cycles: Character, cats: Character = Character(), **kw) -> TwoZeroToOneSpec:
    path, end = two_zero_characters(cycles, cats)
    return TwoZeroToOneSpec(cycle_character=cycles, caterpillars=cats, path_character=path,
                            endpath_character=end, **kw)


def curated_suite() -> list[SuiteEntry]:
    evens = Character.of({}, Progression(2, 2, 1))
    return [
        # equivalence structures
        SuiteEntry("eq_finite", EquivalenceSpec(character=C({2: 2})), "yes", "S3.bounded-char"),
        SuiteEntry("eq_bounded_two_infinite", EquivalenceSpec(character=C({1: OMEGA, 3: 2}), infinite_classes=2),
                   "yes", "S3.bounded-char"),
        SuiteEntry("eq_unbounded", EquivalenceSpec(character=ALL), "no", "S3.unbounded-char",
                   "InfiniteClassAlpha", {"infinite_classes": OMEGA}, ("EqvInfiniteClass",)),
        SuiteEntry("eq_unbounded_one_infinite", EquivalenceSpec(character=ALL, infinite_classes=1), "no",
                   "S3.unbounded-char", None, {"infinite_classes": OMEGA}, ("EqvInfiniteClass",)),
        SuiteEntry("eq_unbounded_omega_infinite", EquivalenceSpec(character=evens, infinite_classes=OMEGA),
                   "yes", "S3.embedding", None, {}, ("EqvInfiniteClass",)),
        # injection structures
        SuiteEntry("inj_finite", InjectionSpec(character=C({1: 1, 3: 2})), "yes", "S4.corollary"),
        SuiteEntry("inj_unbounded", InjectionSpec(character=ALL), "no", "S4.corollary", "InfiniteOrbitAlpha",
                   {"z_orbits": OMEGA}, ("InjZChain_unboundedChar",)),
        SuiteEntry("inj_one_omega", InjectionSpec(character=C({2: 1}), omega_orbits=1), "no", "S4.corollary",
                   None, {"z_orbits": OMEGA}, ("InjZChain_infiniteOrbit",)),
        SuiteEntry("inj_one_z", InjectionSpec(character=C({1: 1}), z_orbits=1), "no", "S4.corollary",
                   None, {"z_orbits": OMEGA}, ("InjZChain_infiniteOrbit",)),
        SuiteEntry("inj_omega_z", InjectionSpec(character=ALL, z_orbits=OMEGA), "yes", "S4.corollary",
                   None, {}, ("InjZChain_unboundedChar",)),
        # 2:1 structures
        SuiteEntry("tto_one_loop", TwoToOneSpec(cycle_character=C({1: 1})), "no", "S5.corollary",
                   "ZChainAlpha", {"z_chains": OMEGA}, ("TwoToOneZChain",)),
        SuiteEntry("tto_many_triangles", TwoToOneSpec(cycle_character=C({1: 1, 3: OMEGA})), "no",
                   "S5.corollary", "ZChainAlpha", {"z_chains": OMEGA}, ("TwoToOneZChain",)),
        SuiteEntry("tto_one_z", TwoToOneSpec(cycle_character=C({2: 1}), z_chains=1), "no", "S5.corollary",
                   None, {"z_chains": OMEGA}, ("TwoToOneZChain",)),
        SuiteEntry("tto_omega_z", TwoToOneSpec(cycle_character=C({1: 1}), z_chains=OMEGA), "yes",
                   "S5.corollary", None, {}, ("TwoToOneZChain",)),
        # (2,0):1 structures
        SuiteEntry("tz_bounded", _two_zero(C({1: 1, 2: 1})), "yes", "S6.thm-i"),
        SuiteEntry("tz_caterpillars", _two_zero(C({1: OMEGA}), ALL), "no", "S6.thm-ii", "OmegaChainAlpha",
                   {"z_chains": OMEGA, "omega_chains": OMEGA, "infinite_length_endpoints": "undetermined"},
                   ("TwoZeroOneZChain", "OmegaChain_ranComputable")),
        SuiteEntry("tz_cycles_unbounded", _two_zero(Character.every_size(OMEGA)), "no", "S6.thm-ii",
                   "OmegaChainAlpha",
                   {"z_chains": OMEGA, "omega_chains": OMEGA, "infinite_length_endpoints": "undetermined"},
                   ("TwoZeroOneZChain", "OmegaChain_ranComputable")),
        SuiteEntry("tz_one_z_leaves", TwoZeroToOneSpec(z_chains=1, infinite_length_endpoints=OMEGA), "no",
                   "S6.thm-ii", "OmegaChainAlpha",
                   {"z_chains": OMEGA, "omega_chains": OMEGA, "infinite_length_endpoints": "undetermined"},
                   ("TwoZeroOneZChain", "OmegaChain_ranComputable")),
        SuiteEntry("tz_one_omega", TwoZeroToOneSpec(omega_chains=1, infinite_length_endpoints=1), "no",
                   "S6.thm-ii", None, {"z_chains": OMEGA, "infinite_length_endpoints": "undetermined"},
                   ("TwoZeroOneZChain",)),
        SuiteEntry("tz_not_highly_computable", _two_zero(C({1: OMEGA}), ALL, highly_computable=False), "no",
                   "S6.thm-ii", None,
                   {"z_chains": OMEGA, "omega_chains": "undetermined",
                    "infinite_length_endpoints": "undetermined"}, ("TwoZeroOneZChain",)),
        SuiteEntry("tz_omega_everything",
                   TwoZeroToOneSpec(z_chains=OMEGA, omega_chains=OMEGA, infinite_length_endpoints=OMEGA),
                   "unknown", "S6.thm-ii", None, {"infinite_length_endpoints": "undetermined"},
                   ("TwoZeroOneZChain", "OmegaChain_ranComputable")),
        # partial injection structures
        SuiteEntry("pi_finite", PartialInjectionSpec(cycle_character=C({1: 1}), chain_character=C({2: 1})),
                   "yes", "S7.bounded"),
        SuiteEntry("pi_chains_unbounded", PartialInjectionSpec(chain_character=ALL), "no", "S7.unbounded", None,
                   {"z_chains": OMEGA, "omega_chains": OMEGA, "omega_star_chains": OMEGA},
                   ("OmegaChain_ranComputable", "OmegaStarChain_domComputable")),
        SuiteEntry("pi_chains_no_range", PartialInjectionSpec(chain_character=ALL, range_computable=False),
                   "no", "S7.unbounded", None,
                   {"z_chains": OMEGA, "omega_chains": "undetermined", "omega_star_chains": OMEGA},
                   ("OmegaStarChain_domComputable",)),
        SuiteEntry("pi_one_omega", PartialInjectionSpec(chain_character=C({1: 2}), omega_chains=1), "no",
                   "S7.unbounded", None, {"z_chains": OMEGA}),
        SuiteEntry("pi_cycles_unbounded", PartialInjectionSpec(cycle_character=ALL), "no", "S7.unbounded",
                   None, {"z_chains": OMEGA}),
        SuiteEntry("pi_everything_omega",
                   PartialInjectionSpec(cycle_character=ALL, chain_character=ALL, z_chains=OMEGA,
                                        omega_chains=OMEGA, omega_star_chains=OMEGA),
                   "yes", "S7.unbounded", None, {},
                   ("OmegaChain_ranComputable", "OmegaStarChain_domComputable")),
    ]


def check_entry(entry: SuiteEntry, report) -> list[str]:
    """Differences between a PowerReport and the entry's expectation."""
    out = []
    if report.isomorphic_to_original != entry.verdict:
        out.append(f"verdict {report.isomorphic_to_original} != {entry.verdict}")
    if report.distinguishing_sentence != entry.sentence:
        out.append(f"sentence {report.distinguishing_sentence} != {entry.sentence}")
    if entry.cite not in report.citations:
        out.append(f"citation {entry.cite} missing from {report.citations}")
    for name, got in report.power_invariants.items():
        want = entry.expected_field(name)
        if want == "undetermined":
            if not isinstance(got, Undetermined):
                out.append(f"{name}: expected undetermined, got {got}")
            continue
        if want == "same":
            want = getattr(entry.spec, name)
        if not isinstance(got, Determined) or got.value != want:
            out.append(f"{name}: expected {want}, got {got}")
    return out
