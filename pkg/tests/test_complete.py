"""Completeness layer: bounds, the multi-form completeness certificate, sup
morphism, sup-preserving morphisms, finite completeness, frame sheaves."""
from __future__ import annotations

import pytest

from posheaf.complete import (
    bounds,
    check_finite_completeness,
    image_subsheaf,
    is_complete,
    is_frame_sheaf,
    meet_morphism,
    product_posheaf,
    sup_in_open,
    sup_morphism,
    verify_frame_morphism,
    verify_sup_preserving,
)
from posheaf.orders import (
    PoSheaf,
    discrete,
    down_power_sheaf,
    enumerate_downsheaves,
    omega,
    power_inclusion,
    power_sheaf,
    verify_posheaf,
)
from posheaf.report import NotComplete
from posheaf.sheaves import (
    Point,
    Presheaf,
    SheafMorphism,
    SubSheaf,
    enumerate_subsheaves,
    generate_subsheaf,
    terminal,
)
from posheaf.fixtures import frame_2, frame_3, frame_6, frame_d, m3_posheaf, posheaf_ab, sheaf_ab




def test_bounds_examples_on_omega():
    Om = omega(frame_d())
    least = generate_subsheaf(Om.sheaf, SubSheaf(Om.sheaf, {"0": ["0"]}))
    b = bounds(Om, least)
    assert b.sup == Point("0", "0")
    assert b.inf == Point("0", "0")
    full = SubSheaf(Om.sheaf, {u: Om.carrier(u) for u in Om.frame.elements})
    b_full = bounds(Om, full)
    assert b_full.sup == Point("1", "1")


def test_bounds_on_posheaf_ab(PAB):
    A = generate_subsheaf(PAB.sheaf, SubSheaf(PAB.sheaf, {"0": ["*"], "a": ["x"]}))
    b = bounds(PAB, A)
    assert b.sup == Point("a", "x")
    assert {(p.dom, p.value) for p in b.upper_bounds} == {("a", "x"), ("a", "y"), ("1", "xz"), ("1", "yz")}


def test_omega_complete_on_every_fixture_frame():
    for build in (frame_2, frame_3, frame_d, frame_6):
        cert = is_complete(omega(build()))
        assert cert.passed
        assert cert.agreement.passed
        assert cert.adjoint_square.passed


def test_posheaf_ab_is_complete(PAB):
    cert = is_complete(PAB)
    assert cert.passed


def test_discrete_pair_not_complete(SAB):
    # discrete {x, y} at a: no least element there; both checkers fail
    F = discrete(SAB)
    cert = is_complete(F)
    assert not cert.passed
    assert not cert.per_open_form.passed
    assert not cert.downsheaf_sups.passed
    assert not cert.subsheaf_sups.passed
    assert cert.agreement.passed
    assert cert.per_open_form.witness["complete_lattice"]["open"] == "a"


def test_power_sheaves_complete_with_example_adjoints(SAB):
    P = power_sheaf(SAB)
    cert = is_complete(P)
    assert cert.passed
    frame = SAB.frame
    for u in frame.elements:
        for v in frame.down(u):
            if v == u:
                continue
            data = cert.restriction_data[(u, v)]
            assert data["surjective"]
            left = data["left_adjoint"]
            right = data["right_adjoint"]
            for S in P.carrier(v):
                # minimal extension: same parts viewed in Sub(F^u)
                assert left[S].parts == S.parts
                # right adjoint: generated from sections whose meet-restriction lands in S
                parts = {
                    w: [x for x in SAB.carriers[w] if S.contains(frame.meet(w, v), SAB.restrict(w, x, frame.meet(w, v)))]
                    for w in frame.down(u)
                }
                expected = generate_subsheaf(SAB, SubSheaf(SAB, parts), require_closed=False)
                assert right[S].parts == expected.parts


def test_down_power_sheaf_complete(PAB):
    D = down_power_sheaf(PAB)
    assert is_complete(D).passed


def test_sup_morphism_on_omega():
    Om = omega(frame_d())
    sup_d, sup_p, report = sup_morphism(Om)
    assert report.passed
    # sup of a downsheaf of opens is the join of its members
    for u in Om.frame.elements:
        for S in sup_d.source.carriers[u]:
            members = [w for v in Om.frame.elements for w in S.sorted_part(v)]
            assert sup_d(u, S) == Om.frame.meet(Om.frame.join_all(members), u)


def test_sup_morphism_on_posheaf_ab(PAB):
    sup_d, sup_p, report = sup_morphism(PAB)
    assert report.passed
    # sup of a principal ideal recovers the generating point, pushed to u
    from posheaf.orders import principal

    pr = principal(PAB, Point("a", "x"))
    assert sup_p("1", pr.clip("1")) == "xz"  # least above x at the top
    assert sup_p("a", pr.clip("a")) == "x"
    least = generate_subsheaf(PAB.sheaf, SubSheaf(PAB.sheaf, {"0": ["*"]}))
    assert sup_p("1", least) == "xz"  # least global point


def test_sup_morphism_requires_completeness(SAB):
    with pytest.raises(NotComplete):
        sup_morphism(discrete(SAB))


def test_sup_preserving_three_forms(PAB):
    ident = SheafMorphism.identity(PAB.sheaf)
    rep = verify_sup_preserving(ident, PAB, PAB)
    assert rep.passed

    # constant-to-top endomorphism of Omega: order-preserving, natural, and
    # join-breaking: all three forms must agree negatively
    Om = omega(PAB.frame)
    const_top = SheafMorphism(Om.sheaf, Om.sheaf, {u: {w: u for w in Om.carrier(u)} for u in Om.frame.elements})
    rep_neg = verify_sup_preserving(const_top, Om, Om)
    assert not rep_neg.passed
    forms = {r.name: r for r in rep_neg.subreports}
    assert not forms["sup_preserving.square"].passed
    assert not forms["sup_preserving.per_open"].passed
    assert not forms["sup_preserving.right_adjoint"].passed
    assert forms["sup_preserving.agreement"].passed


def test_inclusion_down_into_power_is_sup_preserving(PAB):
    # derived verdict: the inclusion has the interior operator as right
    # adjoint, so the three forms agree positively (and meets are preserved)
    P = power_sheaf(PAB.sheaf)
    D = down_power_sheaf(PAB)
    inc = power_inclusion(D, P)
    rep = verify_sup_preserving(inc, D, P)
    forms = {r.name: r for r in rep.subreports}
    assert forms["sup_preserving.agreement"].passed
    assert rep.passed
    from posheaf.frames import MonotoneMap, preserves_all_meets

    for u in PAB.frame.elements:
        assert preserves_all_meets(MonotoneMap(D.poset(u), P.poset(u), inc.maps[u]))


def test_image_morphism_on_power_sheaves_is_sup_preserving(SAB):
    # the induced map on powersheaves of any morphism preserves sups
    T = terminal(SAB.frame)
    alpha = SheafMorphism(SAB, T, {u: {x: "*" for x in SAB.carriers[u]} for u in SAB.frame.elements})
    PF = power_sheaf(SAB)
    PT = power_sheaf(T)
    maps = {
        u: {S: image_subsheaf(alpha, _anchor(SAB, S), u) for S in PF.carrier(u)}
        for u in SAB.frame.elements
    }
    alpha_star = SheafMorphism(PF.sheaf, PT.sheaf, maps)
    assert alpha_star.verify().passed
    rep = verify_sup_preserving(alpha_star, PF, PT)
    assert rep.passed


def _anchor(F, S):
    return SubSheaf(F, {u: S.sorted_part(u) for u in F.frame.elements})


def test_finite_completeness_forms(PAB, SAB):
    rep = check_finite_completeness(omega(PAB.frame))
    assert rep.passed
    # discrete two-element stalk: no binary joins or meets at a
    rep2 = check_finite_completeness(discrete(SAB), mode="both")
    assert not rep2.passed
    # the two forms agree in every mode
    for mode in ("sup", "inf"):
        sub = check_finite_completeness(discrete(SAB), mode=mode)
        inner = sub.subreports[0]
        agreement = [r for r in inner.subreports if r.name.endswith("agreement")]
        assert all(r.passed for r in agreement)
    # complete implies finite complete
    assert check_finite_completeness(PAB).passed


def test_frame_sheaf_positive(PAB):
    for build in (frame_2, frame_3, frame_d):
        Om = omega(build())
        rep = is_frame_sheaf(Om)
        assert rep.passed
    assert is_frame_sheaf(PAB).passed


def test_power_sheaves_are_frame_sheaves(SAB, PAB):
    assert is_frame_sheaf(power_sheaf(SAB)).passed
    assert is_frame_sheaf(down_power_sheaf(PAB)).passed


def test_m3_fixture_fails_both_frame_sheaf_forms():
    F = m3_posheaf()
    assert verify_posheaf(F).passed
    assert is_complete(F).passed
    rep = is_frame_sheaf(F)
    assert not rep.passed
    forms = {r.name: r for r in rep.subreports}
    assert not forms["frame_sheaf.definition_square"].passed
    assert not forms["frame_sheaf.heyting_frobenius"].passed
    assert forms["frame_sheaf.agreement"].passed


def test_frame_morphism_identity_and_meet_breaker():
    Om = omega(frame_d())
    ident = SheafMorphism.identity(Om.sheaf)
    assert verify_frame_morphism(ident, Om, Om).passed

    # v ↦ v ∧ a: natural, sup-preserving, binary meets fine, top broken
    frame = Om.frame
    shrink = SheafMorphism(
        Om.sheaf,
        Om.sheaf,
        {u: {w: frame.meet(w, "a") for w in Om.carrier(u)} for u in frame.elements},
    )
    assert shrink.verify().passed
    assert verify_sup_preserving(shrink, Om, Om).passed
    rep = verify_frame_morphism(shrink, Om, Om)
    assert not rep.passed
    meets = [r for r in rep.subreports if r.name == "frame_morphism.finite_meets"][0]
    assert not meets.passed
    assert meets.witness == {"open": "b", "not": "top-preserving"}
    forms = {r.name: r for r in rep.subreports}
    assert forms["frame_morphism.agreement"].passed


def test_adjoint_square_check_square_on_complete_fixtures(PAB):
    for F in (omega(frame_d()), omega(frame_6()), PAB, power_sheaf(sheaf_ab())):
        cert = is_complete(F)
        assert cert.passed and cert.adjoint_square.passed


def test_completeness_self_dual(PAB, SAB):
    for F in (PAB, omega(frame_3()), discrete(SAB), m3_posheaf()):
        assert is_complete(F).passed == is_complete(F.opposite()).passed


def test_meet_morphism_lands_in_power_sheaf(PAB):
    P = power_sheaf(PAB.sheaf)
    mu = meet_morphism(PAB, P)
    assert mu.verify().passed


def test_left_adjoints_are_frame_mono_homs_on_frame_sheaves():
    # for frame sheaves every adjoint of a restriction embeds frames
    from posheaf.frames import MonotoneMap, preserves_all_joins, preserves_all_meets
    from posheaf.complete import _left_adjoint_table

    for F in (omega(frame_d()), posheaf_ab()):
        frame = F.frame
        assert is_frame_sheaf(F).passed
        for u in frame.elements:
            for v in frame.down(u):
                if v == u:
                    continue
                table = _left_adjoint_table(F, u, v)
                assert len(set(table.values())) == len(table)  # injective
                m = MonotoneMap(F.poset(v), F.poset(u), table)
                assert m.verify().passed
                # binary meets and all joins land where they should
                pv, pu = F.poset(v), F.poset(u)
                for x in pv.elements:
                    for y in pv.elements:
                        assert table[pv.meet(x, y)] == pu.meet(table[x], table[y])
                assert preserves_all_joins(m)
