"""Predict the isomorphism invariants of a cohesive power from those of the base.

Every determined field carries a theorem tag from ``core.CITATIONS``; when no
theorem covers a case the field is left ``Undetermined`` rather than guessed.
"""
from __future__ import annotations

from .core import (OMEGA, Determined, EquivalenceSpec, InjectionSpec, PartialInjectionSpec,
                   PowerReport, TwoToOneSpec, TwoZeroToOneSpec, Undetermined, is_omega)


def _finite_structure(spec) -> bool:
    """All characters bounded with finite counts and no infinite blocks."""
    for name in ("character", "cycle_character", "chain_character"):
        c = getattr(spec, name, None)
        if c is not None and (not c.bounded() or is_omega(c.total())):
            return False
    infinite = ("infinite_classes", "omega_orbits", "z_orbits", "z_chains", "omega_chains",
                "omega_star_chains")
    if any(getattr(spec, n, 0) != 0 for n in infinite):
        return False
    if isinstance(spec, TwoZeroToOneSpec):
        # every element of a (2,0):1 cycle carries a tree; finite only without them
        return False
    return True


def _verdict(spec, fields, complete_invariants: bool, forced_yes: str | None):
    """Assemble yes/no/unknown from the power fields."""
    if forced_yes:
        return "yes"
    differs = any(isinstance(v, Determined) and v.value != getattr(spec, k) for k, v in fields.items())
    if differs:
        return "no"
    if complete_invariants and all(isinstance(v, Determined) for v in fields.values()):
        return "yes"
    return "unknown"


def _report(spec, fields, verdict, sentence=None, extra=()):
    cites = []
    for v in list(fields.values()):
        if isinstance(v, Determined) and v.citation not in cites:
            cites.append(v.citation)
    for c in extra:
        if c not in cites:
            cites.append(c)
    return PowerReport(spec, fields, verdict, sentence, cites)


def classify_equivalence(s: EquivalenceSpec) -> PowerReport:
    bounded = s.character.bounded()
    fields = {"character": Determined(s.character, "S3.char")}
    if bounded:
        fields["infinite_classes"] = Determined(s.infinite_classes, "S3.bounded-char")
    else:
        fields["infinite_classes"] = Determined(OMEGA, "S3.unbounded-char")
    extra = []
    forced = None
    if bounded:
        forced = "S3.bounded-char"
    elif is_omega(s.infinite_classes):
        forced = "S3.embedding"
    if forced:
        extra.append(forced)
    if _finite_structure(s):
        extra.append("S1.finite")
    verdict = _verdict(s, fields, True, forced)
    sentence = None
    if verdict == "no" and s.infinite_classes == 0:
        sentence = "InfiniteClassAlpha"
        extra.append("S3.alpha")
    return _report(s, fields, verdict, sentence, extra)


def classify_injection(s: InjectionSpec) -> PowerReport:
    bounded = s.character.bounded()
    no_infinite = s.omega_orbits == 0 and s.z_orbits == 0
    fields = {"character": Determined(s.character, "S4.char"),
              "omega_orbits": Determined(s.omega_orbits, "S4.omega-orbits")}
    if not bounded:
        fields["z_orbits"] = Determined(OMEGA, "S4.unbounded-char")
    elif not no_infinite:
        fields["z_orbits"] = Determined(OMEGA, "S4.infinite-orbit")
    else:
        fields["z_orbits"] = Determined(s.z_orbits, "S4.bounded")
    extra = ["S4.corollary"]
    if _finite_structure(s):
        extra.append("S1.finite")
    forced = (bounded and no_infinite) or is_omega(s.z_orbits)
    verdict = "yes" if forced else "no"
    sentence = None
    if verdict == "no" and no_infinite:
        sentence = "InfiniteOrbitAlpha"
        extra.append("S4.alpha")
    return _report(s, fields, verdict, sentence, extra)


def classify_two_to_one(s: TwoToOneSpec) -> PowerReport:
    fields = {"cycle_character": Determined(s.cycle_character, "S5.thm-i"),
              "z_chains": Determined(OMEGA, "S5.thm-ii")}
    verdict = "yes" if is_omega(s.z_chains) else "no"
    extra = ["S5.corollary"]
    sentence = None
    if s.z_chains == 0:
        sentence = "ZChainAlpha"
        extra.append("S5.alpha")
    return _report(s, fields, verdict, sentence, extra)


def classify_two_zero_to_one(s: TwoZeroToOneSpec) -> PowerReport:
    chars = (s.cycle_character, s.path_character, s.endpath_character)
    infinite_orbit = (s.z_chains != 0 or s.omega_chains != 0 or s.infinite_length_endpoints != 0
                      or s.has_infinite_tree_branch)
    thm_i = all(c.bounded() for c in chars) and not infinite_orbit
    fields = {"cycle_character": Determined(s.cycle_character, "S6.chars"),
              "path_character": Determined(s.path_character, "S6.chars"),
              "endpath_character": Determined(s.endpath_character, "S6.chars")}
    if thm_i:
        fields["z_chains"] = Determined(s.z_chains, "S6.thm-i")
    elif not s.path_character.bounded() or infinite_orbit:
        fields["z_chains"] = Determined(OMEGA, "S6.thm-ii")
    else:
        fields["z_chains"] = Undetermined("no theorem covers a bounded path character with "
                                          "unbounded cycle or endpath character")
    endpath_bounded = s.endpath_character.bounded()
    if endpath_bounded and not is_omega(s.infinite_length_endpoints):
        fields["omega_chains"] = Determined(s.omega_chains, "S6.omega-same")
    elif s.highly_computable:
        fields["omega_chains"] = Determined(OMEGA, "S6.omega-chains")
    else:
        fields["omega_chains"] = Undetermined(
            "infinitely many omega-chains is only known for highly computable structures "
            "(computable range)")
    # infinite-length endpoints are not among the invariants the power is known to share
    fields["infinite_length_endpoints"] = Undetermined(
        "no theorem describes the infinite-length endpoints of the power")
    if thm_i:
        fields["infinite_length_endpoints"] = Determined(s.infinite_length_endpoints, "S6.thm-i")
    verdict = _verdict(s, fields, False, "S6.thm-i" if thm_i else None)
    extra = ["S6.thm-i"] if thm_i else []
    sentence = None
    om = fields["omega_chains"]
    if isinstance(om, Determined) and om.citation == "S6.omega-chains" and s.omega_chains == 0:
        sentence = "OmegaChainAlpha"
        extra.append("S6.alpha")
    return _report(s, fields, verdict, sentence, extra)


def classify_partial_injection(s: PartialInjectionSpec) -> PowerReport:
    no_infinite = s.z_chains == 0 and s.omega_chains == 0 and s.omega_star_chains == 0
    chain_bounded = s.chain_character.bounded()
    thm = s.cycle_character.bounded() and chain_bounded and no_infinite
    fields = {"cycle_character": Determined(s.cycle_character, "S7.chars"),
              "chain_character": Determined(s.chain_character, "S7.chars")}
    if thm:
        fields["z_chains"] = Determined(s.z_chains, "S7.bounded")
    else:
        fields["z_chains"] = Determined(OMEGA, "S7.unbounded")
    if chain_bounded:
        fields["omega_chains"] = Determined(s.omega_chains, "S7.omega-same")
        fields["omega_star_chains"] = Determined(s.omega_star_chains, "S7.omega-same")
    else:
        fields["omega_chains"] = (Determined(OMEGA, "S7.omega") if s.range_computable else
                                  Undetermined("unbounded chain character without a computable range"))
        fields["omega_star_chains"] = (
            Determined(OMEGA, "S7.omega-star") if s.domain_computable else
            Undetermined("unbounded chain character without a computable domain"))
    extra = []
    if _finite_structure(s):
        extra.append("S1.finite")
    verdict = _verdict(s, fields, True, "S7.bounded" if thm else None)
    return _report(s, fields, verdict, None, extra)


_DISPATCH = {
    "equivalence": classify_equivalence,
    "injection": classify_injection,
    "two-to-one": classify_two_to_one,
    "two-zero-to-one": classify_two_zero_to_one,
    "partial-injection": classify_partial_injection,
}


def classify(spec) -> PowerReport:
    try:
        fn = _DISPATCH[spec.kind]
    except (AttributeError, KeyError):
        raise ValueError(f"not a structure spec: {spec!r}") from None
    return fn(spec)
