"""Sheaf locale construction, local homeomorphisms, cross-sections, the
adjunction with its triangles, spatiality, POSL/CPOSL."""
from __future__ import annotations

import itertools

import pytest

from posheaf.frames import FiniteFrame, FinitePoset, frame_iso
from posheaf.locale_equiv import (
    LocaleOverX,
    Section,
    check_cposl,
    check_posl,
    counit,
    cross_sections,
    etale_locale,
    is_local_homeomorphism,
    is_spatial,
    lambda_on_morphism,
    triangle_gamma_side,
    triangle_identities,
    triangle_lambda_side,
    unit,
    verify_sh_lh_equivalence,
)
from posheaf.orders import omega
from posheaf.report import OrderNotProvided, ResourceLimit
from posheaf.report import Budget
from posheaf.sheaves import Presheaf, SheafMorphism, subterminal, terminal, verify_sheaf
from posheaf.fixtures import (
    frame_2,
    frame_3,
    frame_6,
    frame_d,
    identity_locale,
    open_inclusion,
    sections_free_locale,
    sheaf_ab,
    three_chain_over_2,
)




def test_lambda_of_terminal_is_base(FD, F3, F6):
    for X in (FD, F3, F6):
        E = etale_locale(terminal(X))
        assert E.report.passed
        assert len(E.frame.elements) == len(X.elements)
        # p* itself is the isomorphism over X
        mapping = E.locale.fstar.mapping
        assert len(set(mapping.values())) == len(X.elements)
        iso = frame_iso(X, E.frame, fixed=dict(mapping))
        assert iso == mapping


def test_lambda_of_sheaf_ab_matches_hand_built_frame(SAB, FD):
    E = etale_locale(SAB)
    assert E.report.passed
    # expected: opens of two copies of the a-sheet and one b-sheet,
    # i.e. the product of the three sublocale frames
    expected_elements = list(itertools.product(["0", "a"], ["0", "a"], ["0", "b"]))
    assert len(E.frame.elements) == len(expected_elements) == 8
    pairs = [
        (str(p), str(q))
        for p in expected_elements
        for q in expected_elements
        if all(FD.leq(x, y) for x, y in zip(p, q))
    ]
    expected = FiniteFrame(FinitePoset([str(e) for e in expected_elements], pairs, closed=True))
    assert expected.verify().passed
    assert frame_iso(E.frame, expected) is not None


def test_lambda_of_empty_above_bottom_is_trivial(FD):
    P = subterminal(FD, "0")
    E = etale_locale(P)
    assert len(E.frame.elements) == 1


def test_lambda_budget_guard(SAB):
    with pytest.raises(ResourceLimit):
        etale_locale(SAB, budget=Budget(lambda_elements=3))


def test_lambda_on_morphisms(SAB, FD):
    T = terminal(FD)
    E_sab = etale_locale(SAB)
    E_t = etale_locale(T)
    ident, rep_i = lambda_on_morphism(SheafMorphism.identity(SAB), E_sab, E_sab)
    assert rep_i.passed
    assert all(ident(lab) == lab for lab in E_sab.frame.elements)

    bang = SheafMorphism(SAB, T, {u: {x: "*" for x in SAB.carriers[u]} for u in FD.elements})
    lam_bang, rep_b = lambda_on_morphism(bang, E_sab, E_t)
    assert rep_b.passed
    # functoriality over a two-step chain: (bang ∘ id) = bang
    composed, rep_c = lambda_on_morphism(bang.compose(SheafMorphism.identity(SAB)), E_sab, E_t)
    assert rep_c.passed
    assert composed.mapping == {lab: ident(lam_bang(lab)) for lab in E_t.frame.elements}


def test_local_homeomorphism_verdicts(FD):
    assert is_local_homeomorphism(open_inclusion(FD, "a")).passed
    assert is_local_homeomorphism(identity_locale(FD)).passed
    rep = is_local_homeomorphism(three_chain_over_2())
    assert not rep.passed
    assert rep.witness["good_opens"] == ["0", "m"]
    assert rep.witness["join"] == "m"


def test_lambda_is_always_a_local_homeomorphism(SAB, FD):
    for P in (terminal(FD), SAB, omega(FD).sheaf):
        E = etale_locale(P)
        assert is_local_homeomorphism(E.locale).passed


def test_gamma_of_identity_is_terminal(FD):
    G = cross_sections(identity_locale(FD))
    assert G.report.passed
    assert [len(G.sheaf.carriers[u]) for u in FD.elements] == [1, 1, 1, 1]


def test_gamma_of_open_inclusion_is_subterminal(FD):
    G = cross_sections(open_inclusion(FD, "a"))
    assert G.report.passed
    sub = subterminal(FD, "a")
    assert [len(G.sheaf.carriers[u]) for u in FD.elements] == [len(sub.carriers[u]) for u in FD.elements]


def test_gamma_lambda_recovers_sheaf_ab(SAB):
    E = etale_locale(SAB)
    G = cross_sections(E.locale)
    eta, rep = unit(SAB, E, G)
    assert rep.passed
    for u in SAB.frame.elements:
        images = {eta(u, s) for s in SAB.carriers[u]}
        assert len(images) == len(SAB.carriers[u])
        assert images == set(G.sheaf.carriers[u])


def test_counit_iso_on_open_inclusion(FD):
    f = open_inclusion(FD, "a")
    G = cross_sections(f)
    E = etale_locale(G.sheaf)
    hom, rep = counit(f, G, E)
    assert rep.passed
    values = list(hom.mapping.values())
    assert len(set(values)) == len(values) and set(values) == set(E.frame.elements)


def test_triangles_on_fixtures(SAB, FD):
    assert triangle_identities(terminal(FD)).passed
    assert triangle_identities(SAB).passed
    assert triangle_lambda_side(omega(FD).sheaf).passed
    assert triangle_gamma_side(open_inclusion(FD, "a")).passed
    assert triangle_gamma_side(three_chain_over_2()).passed  # triangles hold for any locale


def test_sh_lh_equivalence_on_sheaves(SAB, FD):
    assert verify_sh_lh_equivalence(terminal(FD)).passed
    assert verify_sh_lh_equivalence(SAB).passed
    rep = verify_sh_lh_equivalence(omega(FD).sheaf)
    assert rep.passed


def test_sh_lh_equivalence_on_locales(SAB, FD):
    E = etale_locale(omega(FD).sheaf)
    rep = verify_sh_lh_equivalence(E.locale)
    assert rep.passed

    bad = verify_sh_lh_equivalence(three_chain_over_2())
    by_name = {r.name: r for r in bad.subreports}
    assert not by_name["local_homeomorphism"].passed
    assert not by_name["counit_iso"].passed
    assert by_name["counit_iso"].witness["unreached"]
    assert by_name["counit_iso_iff_lh"].passed  # verdicts line up: not LH, not iso


def test_unit_reflects_non_sheaf(FD):
    # a presheaf violating gluing: the sheafification drops nothing here but
    # adds the missing amalgamation
    carriers = {"0": ("*",), "a": ("x", "y"), "b": ("z",), "1": ("xz",)}
    res = {
        ("a", "0"): {"x": "*", "y": "*"},
        ("b", "0"): {"z": "*"},
        ("1", "0"): {"xz": "*"},
        ("1", "a"): {"xz": "x"},
        ("1", "b"): {"xz": "z"},
    }
    P = Presheaf(FD, carriers, res)
    assert not verify_sheaf(P).passed
    rep = verify_sh_lh_equivalence(P)
    assert rep.passed  # the reflection is idempotent
    assert rep.details["input_is_sheaf"] is False


def test_spatiality(FD):
    for f in (identity_locale(FD), open_inclusion(FD, "a")):
        rep = is_spatial(f)
        assert rep.passed

    rep_bad = is_spatial(sections_free_locale())
    assert not rep_bad.passed
    forms = {r.name: r for r in rep_bad.subreports}
    assert forms["spatial.agreement"].passed
    assert forms["spatial.sections_separate"].witness == {"pair": ["0", "1"]}


def test_posl_cposl_on_identity(FD):
    f = identity_locale(FD)
    G = cross_sections(f)
    trivial = {u: [] for u in FD.elements}
    assert check_posl(f, trivial).passed
    assert check_cposl(f, trivial).passed
    with pytest.raises(OrderNotProvided):
        check_posl(f, None)


def test_posl_requires_local_homeomorphism():
    from posheaf.report import PosheafError

    with pytest.raises(PosheafError):
        check_posl(three_chain_over_2(), {})


def test_cposl_transported_from_omega(FD):
    # orders transported along the unit from the subobject classifier
    Om = omega(FD)
    E = etale_locale(Om.sheaf)
    G = cross_sections(E.locale)
    eta, rep = unit(Om.sheaf, E, G)
    assert rep.passed
    orders = {
        u: [
            (eta(u, v), eta(u, w))
            for v in Om.carrier(u)
            for w in Om.carrier(u)
            if FD.leq(v, w)
        ]
        for u in FD.elements
    }
    assert check_posl(E.locale, orders).passed
    assert check_cposl(E.locale, orders).passed


def test_cposl_fails_without_bottoms(SAB, FD):
    # two incomparable stalks over a: a posheaf locale that is not complete
    E = etale_locale(SAB)
    G = cross_sections(E.locale)
    eta, rep = unit(SAB, E, G)
    assert rep.passed
    discrete_orders = {u: [] for u in FD.elements}
    assert check_posl(E.locale, discrete_orders).passed
    rep_c = check_cposl(E.locale, discrete_orders)
    assert not rep_c.passed
    forms = {r.name: r for r in rep_c.subreports}
    assert not forms["cposl.CPOSL1"].passed
    assert forms["cposl.agreement_with_completeness"].passed
