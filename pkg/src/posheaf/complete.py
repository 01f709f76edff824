"""Suprema and infima of subsheaves, the completeness criterion in all its
equivalent forms, the sup morphism, sup-preserving morphisms, finite
completeness, and frame (complete Heyting) sheaves.

Every multi-form characterization is computed once per form, independently,
and the verdicts are reconciled; a disagreement is itself a failure."""
from __future__ import annotations

from dataclasses import dataclass, field

from .frames import (
    FiniteFrame,
    FinitePoset,
    FrameHom,
    MonotoneMap,
    left_adjoint,
    preserves_all_joins,
    preserves_all_meets,
    right_adjoint,
    verify_frame_hom,
)
from .report import Budget, BudgetMeter, CheckReport, NotComplete, timed
from .orders import (
    PoSheaf,
    _three_way,
    down_embedding,
    down_power_sheaf,
    enumerate_downsheaves,
    point_leq_bool,
    power_sheaf,
    verify_galois,
    verify_morphism,
    verify_order_preserving,
    verify_posheaf,
)
from .sheaves import (
    Point,
    Presheaf,
    SheafMorphism,
    SubSheaf,
    enumerate_points,
    enumerate_subsheaves,
    generate_subsheaf,
    product_sheaf,
    terminal,
)


@dataclass
class BoundReport:
    """Upper bounds, supremum, and infimum of a subsheaf over the point set.

    When several minimal upper bounds exist the sup is absent and the
    antichain is reported instead of tie-breaking."""

    target: SubSheaf
    upper_bounds: list
    sup: Point | None
    inf: Point | None
    sup_antichain: list = field(default_factory=list)
    inf_antichain: list = field(default_factory=list)


def _point_minimum(F: PoSheaf, pts: list[Point]):
    mins = [p for p in pts if not any(q != p and point_leq_bool(F, q, p) for q in pts)]
    if len(mins) == 1 and all(point_leq_bool(F, mins[0], q) for q in pts):
        return mins[0], mins
    return None, mins


def upper_bound_points(F: PoSheaf, A: SubSheaf) -> list[Point]:
    apts = A.points()
    return [p for p in enumerate_points(F.sheaf) if all(point_leq_bool(F, a, p) for a in apts)]


def bounds(F: PoSheaf, A: SubSheaf) -> BoundReport:
    """A sub-presheaf is closed to its generated subsheaf first; the bound set
    is unchanged by that closure."""
    A = generate_subsheaf(F.sheaf, A, require_closed=False)
    ups = upper_bound_points(F, A)
    sup, sup_min = _point_minimum(F, ups)
    op = F.opposite()
    downs = upper_bound_points(op, A)
    inf, inf_min = _point_minimum(op, downs)
    return BoundReport(
        target=A,
        upper_bounds=ups,
        sup=sup,
        inf=inf,
        sup_antichain=[] if sup else sup_min,
        inf_antichain=[] if inf else inf_min,
    )


def sup_in_open(F: PoSheaf, S: SubSheaf, u):
    """Brute-force bound scan: the least y in F(u) with S^u ⊆ ↓y, or None."""
    frame = F.frame
    cands = [
        y
        for y in F.carrier(u)
        if all(
            F.leq(v, x, F.sheaf.restrict(u, y, v))
            for v in frame.down(u)
            for x in S.sorted_part(v)
        )
    ]
    return F.poset(u).least(cands)


def _restriction_map(F: PoSheaf, u, v) -> MonotoneMap:
    return MonotoneMap(F.poset(u), F.poset(v), dict(F.sheaf.res[(u, v)]))


@dataclass
class CompletenessCertificate:
    """Both sides of every completeness characterization plus the square and
    duality cross-checks; agreement is part of the verdict."""

    passed: bool
    downsheaf_sups: CheckReport
    subsheaf_sups: CheckReport
    per_open_form: CheckReport
    complete_surjections: CheckReport
    opposite_per_open: CheckReport
    adjoint_square: CheckReport
    agreement: CheckReport
    lattice_witnesses: dict = field(default_factory=dict)
    restriction_data: dict = field(default_factory=dict)
    sup_tables: dict | None = None

    def report(self) -> CheckReport:
        subs = [
            self.downsheaf_sups,
            self.subsheaf_sups,
            self.per_open_form,
            self.complete_surjections,
            self.opposite_per_open,
            self.adjoint_square,
            self.agreement,
        ]
        first = next((r for r in subs if not r.passed), None)
        return CheckReport(
            name="complete",
            passed=self.passed,
            witness=None if first is None else {"first_failed": first.name, "witness": first.witness},
            subreports=subs,
        )


def _per_open_form(F: PoSheaf) -> tuple[CheckReport, dict, dict]:
    """Per-open complete lattices plus surjective restrictions having both
    adjoints; returns the report with the per-open/per-pair evidence."""
    frame = F.frame
    lattice_witnesses = {}
    restriction_data = {}
    verdict_wit = None
    for u in frame.elements:
        poset = F.poset(u)
        entry = {"bottom": poset.bottom, "top": poset.top}
        bad = None
        if poset.bottom is None:
            bad = {"open": u, "missing": "bottom"}
        elif poset.top is None:
            bad = {"open": u, "missing": "top"}
        else:
            for x in poset.elements:
                for y in poset.elements:
                    if poset.join(x, y) is None:
                        bad = {"open": u, "pair": [F.label(u, x), F.label(u, y)], "missing": "join"}
                        break
                    if poset.meet(x, y) is None:
                        bad = {"open": u, "pair": [F.label(u, x), F.label(u, y)], "missing": "meet"}
                        break
                if bad:
                    break
        lattice_witnesses[u] = entry if not bad else bad
        if bad and verdict_wit is None:
            verdict_wit = {"complete_lattice": bad}
    for u in frame.elements:
        for v in frame.down(u):
            if v == u:
                continue
            res = _restriction_map(F, u, v)
            surjective = set(res.mapping.values()) == set(F.carrier(v))
            la, _ = left_adjoint(res)
            ra, _ = right_adjoint(res)
            restriction_data[(u, v)] = {
                "surjective": surjective,
                "left_adjoint": None if la is None else dict(la.mapping),
                "right_adjoint": None if ra is None else dict(ra.mapping),
            }
            if verdict_wit is None and not (surjective and la is not None and ra is not None):
                verdict_wit = {
                    "restriction": [u, v],
                    "surjective": surjective,
                    "left_adjoint": la is not None,
                    "right_adjoint": ra is not None,
                }
    report = CheckReport("complete.per_open", verdict_wit is None, witness=verdict_wit)
    return report, lattice_witnesses, restriction_data


def _sup_extension_form(name: str, F: PoSheaf, subsheaves: list[SubSheaf]) -> CheckReport:
    """Sup-extension forms: every listed subsheaf has a sup extendable to a global
    point whose every restriction is the least dominating element."""
    frame = F.frame
    for S in subsheaves:
        b = bounds(F, S)
        if b.sup is None:
            return CheckReport.fail(name, {"subsheaf": S.describe(), "missing": "sup", "minimal_upper_bounds": [list(p) for p in b.sup_antichain]})
        least_at = {}
        for u in frame.elements:
            cand = sup_in_open(F, S, u)
            if cand is None:
                return CheckReport.fail(name, {"subsheaf": S.describe(), "open": u, "missing": "least dominating element"})
            least_at[u] = cand
        globals_ = [g for g in F.carrier(frame.top) if all(F.sheaf.restrict(frame.top, g, u) == least_at[u] for u in frame.elements)]
        if not globals_:
            return CheckReport.fail(name, {"subsheaf": S.describe(), "missing": "global point extending the sup"})
    return CheckReport.ok(name, checked=len(subsheaves))


def _complete_surjections_form(F: PoSheaf) -> CheckReport:
    """The surjective-complete-maps reading: per-open complete lattices with surjective restrictions
    preserving arbitrary sups and infs (POS3 is a posheaf precondition)."""
    frame = F.frame
    for u in frame.elements:
        poset = F.poset(u)
        if poset.bottom is None or poset.top is None:
            return CheckReport.fail("complete.complete_surjections", {"open": u, "missing": "bounds"})
        for x in poset.elements:
            for y in poset.elements:
                if poset.join(x, y) is None or poset.meet(x, y) is None:
                    return CheckReport.fail("complete.complete_surjections", {"open": u, "pair": [F.label(u, x), F.label(u, y)]})
    for u in frame.elements:
        for v in frame.down(u):
            if v == u:
                continue
            res = _restriction_map(F, u, v)
            if set(res.mapping.values()) != set(F.carrier(v)):
                return CheckReport.fail("complete.complete_surjections", {"restriction": [u, v], "not": "surjective"})
            if not preserves_all_joins(res):
                return CheckReport.fail("complete.complete_surjections", {"restriction": [u, v], "not": "sup-preserving"})
            if not preserves_all_meets(res):
                return CheckReport.fail("complete.complete_surjections", {"restriction": [u, v], "not": "inf-preserving"})
    return CheckReport.ok("complete.complete_surjections")


def _adjoint_square_check(F: PoSheaf, restriction_data: dict) -> CheckReport:
    """(l_{v,u∨v} x)|_u = l_{u∧v,u}(x|_{u∧v}) for all pairs of opens; runs when
    the needed left adjoints exist (the law's hypothesis)."""
    frame = F.frame
    for u in frame.elements:
        for v in frame.elements:
            uv = frame.join(u, v)
            uw = frame.meet(u, v)
            l_v_uv = restriction_data.get((uv, v), {}).get("left_adjoint") if uv != v else {x: x for x in F.carrier(v)}
            l_uw_u = restriction_data.get((u, uw), {}).get("left_adjoint") if u != uw else {x: x for x in F.carrier(u)}
            if l_v_uv is None or l_uw_u is None:
                return CheckReport.ok("complete.adjoint_square", skipped="missing left adjoints")
            for x in F.carrier(v):
                lhs = F.sheaf.restrict(uv, l_v_uv[x], u)
                rhs = l_uw_u[F.sheaf.restrict(v, x, uw)]
                if lhs != rhs:
                    return CheckReport.fail(
                        "complete.adjoint_square",
                        {"opens": [u, v], "section": F.label(v, x), "via_join": F.label(u, lhs), "via_meet": F.label(u, rhs)},
                    )
    return CheckReport.ok("complete.adjoint_square")


@timed
def is_complete(F: PoSheaf, *, budget: Budget | None = None) -> CompletenessCertificate:
    """Both characterizations of completeness run independently — downsheaf
    and subsheaf sup-extension against the per-open lattice/adjoint form —
    plus the square, surjection, and opposite cross-checks, with agreement asserted."""
    verify_posheaf(F).require()
    budget = budget or Budget()
    meter = BudgetMeter("completeness enumeration", budget.subsheaves)

    per_open_form, lattice_witnesses, restriction_data = _per_open_form(F)
    downs = enumerate_downsheaves(F, meter=meter)
    downsheaf_sups = _sup_extension_form("complete.downsheaf_sups", F, downs)
    subs = enumerate_subsheaves(F.sheaf, meter=meter)
    subsheaf_sups = _sup_extension_form("complete.subsheaf_sups", F, subs)
    surjections = _complete_surjections_form(F)
    op4, _, _ = _per_open_form(F.opposite())
    op4.name = "complete.opposite_per_open"
    square = _adjoint_square_check(F, restriction_data)

    verdicts = {
        "downsheaf_sups": downsheaf_sups.passed,
        "subsheaf_sups": subsheaf_sups.passed,
        "per_open_form": per_open_form.passed,
        "complete_surjections": surjections.passed,
        "opposite_per_open": op4.passed,
    }
    agree = len(set(verdicts.values())) == 1
    agreement = CheckReport("complete.agreement", agree, witness=None if agree else verdicts)

    sup_tables = None
    if per_open_form.passed and agree:
        sup_tables = {}
        for u in F.frame.elements:
            table = []
            for S in enumerate_downsheaves(F, u, meter=meter):
                table.append([S.describe(), F.label(u, sup_in_open(F, S, u))])
            sup_tables[u] = table

    passed = per_open_form.passed and agree and (square.passed if per_open_form.passed else True)
    return CompletenessCertificate(
        passed=passed,
        downsheaf_sups=downsheaf_sups,
        subsheaf_sups=subsheaf_sups,
        per_open_form=per_open_form,
        complete_surjections=surjections,
        opposite_per_open=op4,
        adjoint_square=square,
        agreement=agreement,
        lattice_witnesses=lattice_witnesses,
        restriction_data=restriction_data,
        sup_tables=sup_tables,
    )


def _left_adjoint_table(F: PoSheaf, u, v) -> dict:
    """l_{v→u} for v ≤ u on a complete posheaf."""
    if u == v:
        return {x: x for x in F.carrier(v)}
    la, rep = left_adjoint(_restriction_map(F, u, v))
    if la is None:
        raise NotComplete(f"restriction {u!r} -> {v!r} has no left adjoint", report=rep)
    return la.mapping


def sup_morphism(F: PoSheaf, *, budget: Budget | None = None) -> tuple[SheafMorphism, SheafMorphism, CheckReport]:
    """The left adjoint of the principal-ideal embedding, on downsheaves and on
    all subsheaves: primary path is the adjoint-composition construction, the
    brute-force bound scan is the oracle, and the two must agree."""
    budget = budget or Budget()
    cert = is_complete(F, budget=budget)
    if not cert.passed:
        raise NotComplete("sup morphism needs a complete posheaf", report=cert.report())
    frame = F.frame
    D = down_power_sheaf(F, budget=budget, verify=False)
    P = power_sheaf(F.sheaf, budget=budget, verify=False)

    def primary(u, S: SubSheaf):
        support = [v for v in frame.down(u) if S.sorted_part(v)]
        w = frame.join_all(support)
        joins = []
        for v in frame.down(w):
            sv = S.sorted_part(v)
            join_v = F.poset(v).join_all(sv) if sv else F.poset(v).bottom
            joins.append(_left_adjoint_table(F, w, v)[join_v])
        s = F.poset(w).join_all(joins) if joins else F.poset(w).bottom
        return _left_adjoint_table(F, u, w)[s]

    mismatch = None
    maps_d, maps_p = {}, {}
    for u in frame.elements:
        maps_d[u] = {}
        maps_p[u] = {}
        for S in P.carrier(u):
            via_formula = primary(u, S)
            via_scan = sup_in_open(F, S, u)
            if via_formula != via_scan and mismatch is None:
                mismatch = {"open": u, "subsheaf": S.describe(), "formula": F.label(u, via_formula), "scan": F.label(u, via_scan)}
            maps_p[u][S] = via_scan
        for S in D.carrier(u):
            maps_d[u][S] = maps_p[u][S]
    sup_d = SheafMorphism(D.sheaf, F.sheaf, maps_d)
    sup_p = SheafMorphism(P.sheaf, F.sheaf, maps_p)

    checks = [
        CheckReport("sup_morphism.formula_vs_scan", mismatch is None, witness=mismatch),
        verify_morphism(sup_d),
        verify_morphism(sup_p),
        verify_galois(sup_d, down_embedding(F, D), D, F),
    ]
    report = CheckReport.combine("sup_morphism", checks)
    return sup_d, sup_p, report


def image_subsheaf(alpha: SheafMorphism, S: SubSheaf, u=None) -> SubSheaf:
    """Per-open image, then the generated subsheaf (the image of S)."""
    G = alpha.target
    parts = {
        v: sorted({alpha(v, x) for x in S.sorted_part(v)}, key=lambda y: G.section_key(v, y))
        for v in G.frame.elements
    }
    img = generate_subsheaf(G, SubSheaf(G, parts), require_closed=False)
    return img if u is None else img.clip(u)


@timed
def verify_sup_preserving(
    alpha: SheafMorphism, F: PoSheaf, G: PoSheaf, *, budget: Budget | None = None
) -> CheckReport:
    """Three forms: the defining square over the powersheaf, per-open join
    preservation with commuting left-adjoint squares, and right-adjoint
    existence — reconciled."""
    pre = verify_order_preserving(alpha, F, G)
    if not pre.passed:
        return CheckReport.fail("sup_preserving", {"precondition": pre.witness}, stage="order_preserving")
    budget = budget or Budget()
    frame = F.frame

    square_ok, square_wit = True, None
    P = power_sheaf(F.sheaf, budget=budget, verify=False)
    for u in frame.elements:
        for S in P.carrier(u):
            lhs = alpha(u, sup_in_open(F, S, u))
            rhs = sup_in_open(G, image_subsheaf(alpha, S, u), u)
            if lhs != rhs:
                square_ok, square_wit = False, {
                    "open": u,
                    "subsheaf": S.describe(),
                    "alpha_of_sup": G.label(u, lhs),
                    "sup_of_image": G.label(u, rhs),
                }
                break
        if not square_ok:
            break

    open_ok, open_wit = True, None
    for u in frame.elements:
        au = MonotoneMap(F.poset(u), G.poset(u), alpha.maps[u])
        if not preserves_all_joins(au):
            open_ok, open_wit = False, {"open": u, "not": "join-preserving"}
            break
        for v in frame.down(u):
            if v == u:
                continue
            f_uv = _left_adjoint_table(F, u, v)
            g_uv = _left_adjoint_table(G, u, v)
            for x in F.carrier(v):
                if alpha(u, f_uv[x]) != g_uv[alpha(v, x)]:
                    open_ok, open_wit = False, {
                        "square": [u, v],
                        "section": F.label(v, x),
                        "alpha_after_adjoint": G.label(u, alpha(u, f_uv[x])),
                        "adjoint_after_alpha": G.label(u, g_uv[alpha(v, x)]),
                    }
                    break
            if not open_ok:
                break
        if not open_ok:
            break

    adj_ok, adj_wit = True, None
    beta_maps = {}
    for u in frame.elements:
        table = {}
        for y in G.carrier(u):
            cand = F.poset(u).greatest([x for x in F.carrier(u) if G.leq(u, alpha(u, x), y)])
            if cand is None:
                adj_ok, adj_wit = False, {"open": u, "section": G.label(u, y), "missing": "greatest preimage"}
                break
            table[y] = cand
        if not adj_ok:
            break
        beta_maps[u] = table
    if adj_ok:
        beta = SheafMorphism(G.sheaf, F.sheaf, beta_maps)
        nat = verify_morphism(beta)
        if not nat.passed:
            adj_ok, adj_wit = False, {"beta_naturality": nat.witness}
        else:
            gal = verify_galois(alpha, beta, F, G)
            if not gal.passed:
                adj_ok, adj_wit = False, {"galois": gal.witness}

    return _three_way(
        "sup_preserving",
        [("square", square_ok, square_wit), ("per_open", open_ok, open_wit), ("right_adjoint", adj_ok, adj_wit)],
    )


def product_posheaf(F: PoSheaf, G: PoSheaf) -> PoSheaf:
    """F × G with the componentwise order."""
    sheaf = product_sheaf(F.sheaf, G.sheaf)
    orders = {
        u: [
            (p, q)
            for p in sheaf.carriers[u]
            for q in sheaf.carriers[u]
            if F.leq(u, p[0], q[0]) and G.leq(u, p[1], q[1])
        ]
        for u in F.frame.elements
    }
    return PoSheaf(sheaf, orders)


def _terminal_posheaf(X: FiniteFrame) -> PoSheaf:
    from .orders import discrete

    return discrete(terminal(X))


def _morphism_left_adjoint(alpha: SheafMorphism, F: PoSheaf, G: PoSheaf) -> SheafMorphism | None:
    """Left adjoint of a posheaf morphism: per-open minimum construction, then
    naturality and the Galois laws; None when any step fails."""
    maps = {}
    for u in F.frame.elements:
        table = {}
        for y in G.carrier(u):
            cand = F.poset(u).least([x for x in F.carrier(u) if G.leq(u, y, alpha(u, x))])
            if cand is None:
                return None
            table[y] = cand
        maps[u] = table
    try:
        candidate = SheafMorphism(G.sheaf, F.sheaf, maps)
    except Exception:
        return None
    if not verify_morphism(candidate).passed:
        return None
    if not verify_galois(candidate, alpha, G, F).passed:
        return None
    return candidate


def _morphism_right_adjoint(alpha: SheafMorphism, F: PoSheaf, G: PoSheaf) -> SheafMorphism | None:
    op = _morphism_left_adjoint(alpha, F.opposite(), G.opposite())
    return op


@timed
def check_finite_completeness(F: PoSheaf, mode: str = "both") -> CheckReport:
    """Adjoint-existence form (adjoints of F → 1 and of the diagonal) against
    the per-open semilattice form; agreement asserted. mode: sup | inf | both."""
    verify_posheaf(F).require()
    frame = F.frame
    one = _terminal_posheaf(frame)
    bang = SheafMorphism(F.sheaf, one.sheaf, {u: {x: "*" for x in F.carrier(u)} for u in frame.elements})
    FF = product_posheaf(F, F)
    diag = SheafMorphism(
        F.sheaf, FF.sheaf, {u: {x: (x, x) for x in F.carrier(u)} for u in frame.elements}
    )

    reports = []
    if mode in ("sup", "both"):
        adj = _morphism_left_adjoint(bang, F, one) is not None and _morphism_left_adjoint(diag, F, FF) is not None
        open_ok, wit = True, None
        for u in frame.elements:
            poset = F.poset(u)
            if poset.bottom is None:
                open_ok, wit = False, {"open": u, "missing": "bottom"}
                break
            for x in poset.elements:
                for y in poset.elements:
                    if poset.join(x, y) is None:
                        open_ok, wit = False, {"open": u, "pair": [F.label(u, x), F.label(u, y)], "missing": "join"}
                        break
                if not open_ok:
                    break
            if not open_ok:
                break
        if open_ok:
            for u in frame.elements:
                for v in frame.down(u):
                    if v == u:
                        continue
                    poset_u, poset_v = F.poset(u), F.poset(v)
                    if F.sheaf.restrict(u, poset_u.bottom, v) != poset_v.bottom:
                        open_ok, wit = False, {"restriction": [u, v], "not": "bottom-preserving"}
                        break
                    for x in poset_u.elements:
                        for y in poset_u.elements:
                            lhs = F.sheaf.restrict(u, poset_u.join(x, y), v)
                            rhs = poset_v.join(F.sheaf.restrict(u, x, v), F.sheaf.restrict(u, y, v))
                            if lhs != rhs:
                                open_ok, wit = False, {"restriction": [u, v], "pair": [F.label(u, x), F.label(u, y)]}
                                break
                        if not open_ok:
                            break
                    if not open_ok:
                        break
                if not open_ok:
                    break
        reports.append(
            _three_way("finite_sup_complete", [("adjoint_form", adj, None), ("per_open_form", open_ok, wit)])
        )
    if mode in ("inf", "both"):
        op_report = check_finite_completeness(F.opposite(), mode="sup")
        reports.append(
            CheckReport(
                "finite_inf_complete",
                op_report.passed,
                witness=op_report.witness,
                subreports=op_report.subreports,
            )
        )
    return CheckReport.combine(f"finite_complete[{mode}]", reports)


def meet_morphism(F: PoSheaf, P: PoSheaf) -> SheafMorphism:
    """μ: F × ℙF → ℙF, sending (x, S) to the subsheaf generated by the
    per-open meets of S's members with the matching restrictions of x."""
    FP = product_posheaf(F, P)
    frame = F.frame
    maps = {}
    for u in frame.elements:
        table = {}
        for (x, S) in FP.sheaf.carriers[u]:
            parts = {}
            for v in frame.down(u):
                xv = F.sheaf.restrict(u, x, v)
                parts[v] = sorted(
                    {F.poset(v).meet(xv, y) for y in S.sorted_part(v)},
                    key=lambda z: F.sheaf.section_key(v, z),
                )
            gen = generate_subsheaf(F.sheaf, SubSheaf(F.sheaf, parts), require_closed=False).clip(u)
            table[(x, S)] = gen
        maps[u] = table
    return SheafMorphism(FP.sheaf, P.sheaf, maps)


def _lattice_frame(F: PoSheaf, u) -> FiniteFrame:
    return FiniteFrame(F.poset(u))


@timed
def is_frame_sheaf(F: PoSheaf, *, budget: Budget | None = None) -> CheckReport:
    """The defining square (sup after meet-morphism against binary meet after sup)
    versus the per-open complete-Heyting + Frobenius characterization."""
    budget = budget or Budget()
    cert = is_complete(F, budget=budget)
    if not cert.passed:
        raise NotComplete("frame sheaf check needs a complete posheaf", report=cert.report())
    frame = F.frame
    P = power_sheaf(F.sheaf, budget=budget, verify=False)
    mu = meet_morphism(F, P)

    square_ok, square_wit = True, None
    for u in frame.elements:
        for x in F.carrier(u):
            for S in P.carrier(u):
                lhs = sup_in_open(F, mu(u, (x, S)), u)
                rhs = F.poset(u).meet(x, sup_in_open(F, S, u))
                if lhs != rhs:
                    square_ok, square_wit = False, {
                        "open": u,
                        "section": F.label(u, x),
                        "subsheaf": S.describe(),
                        "sup_of_meets": F.label(u, lhs),
                        "meet_of_sup": F.label(u, rhs),
                    }
                    break
            if not square_ok:
                break
        if not square_ok:
            break

    heyting_ok, heyting_wit = True, None
    for u in frame.elements:
        lat = _lattice_frame(F, u)
        rep = lat.verify()
        if not rep.passed:
            heyting_ok, heyting_wit = False, {"open": u, "law": rep.name, "witness": rep.witness}
            break
    if heyting_ok:
        for u in frame.elements:
            for v in frame.down(u):
                if v == u:
                    continue
                l_vu = _left_adjoint_table(F, u, v)
                for x in F.carrier(u):
                    xv = F.sheaf.restrict(u, x, v)
                    for y in F.carrier(v):
                        lhs = F.poset(u).meet(x, l_vu[y])
                        rhs = l_vu[F.poset(v).meet(xv, y)]
                        if lhs != rhs:
                            heyting_ok, heyting_wit = False, {
                                "opens": [u, v],
                                "sections": [F.label(u, x), F.label(v, y)],
                                "meet_then_adjoint": F.label(u, rhs),
                                "adjoint_then_meet": F.label(u, lhs),
                            }
                            break
                    if not heyting_ok:
                        break
                if not heyting_ok:
                    break
            if not heyting_ok:
                break

    return _three_way(
        "frame_sheaf",
        [("definition_square", square_ok, square_wit), ("heyting_frobenius", heyting_ok, heyting_wit)],
    )


@timed
def verify_frame_morphism(
    alpha: SheafMorphism, F: PoSheaf, G: PoSheaf, *, budget: Budget | None = None
) -> CheckReport:
    """Sup-preserving plus finite-meet preservation (binary meet square and
    tops), cross-checked against per-open frame homomorphisms with commuting
    left-adjoint squares."""
    budget = budget or Budget()
    sup_rep = verify_sup_preserving(alpha, F, G, budget=budget)
    if sup_rep.name == "sup_preserving" and sup_rep.details.get("stage") == "order_preserving":
        return sup_rep

    meets_ok, meets_wit = True, None
    for u in F.frame.elements:
        if alpha(u, F.poset(u).top) != G.poset(u).top:
            meets_ok, meets_wit = False, {"open": u, "not": "top-preserving"}
            break
        for x in F.carrier(u):
            for y in F.carrier(u):
                lhs = alpha(u, F.poset(u).meet(x, y))
                rhs = G.poset(u).meet(alpha(u, x), alpha(u, y))
                if lhs != rhs:
                    meets_ok, meets_wit = False, {
                        "open": u,
                        "pair": [F.label(u, x), F.label(u, y)],
                        "alpha_of_meet": G.label(u, lhs),
                        "meet_of_alphas": G.label(u, rhs),
                    }
                    break
            if not meets_ok:
                break
        if not meets_ok:
            break
    path_a = sup_rep.passed and meets_ok

    hom_ok, hom_wit = True, None
    for u in F.frame.elements:
        hom = FrameHom(_lattice_frame(F, u), _lattice_frame(G, u), alpha.maps[u])
        rep = verify_frame_hom(hom)
        if not rep.passed:
            hom_ok, hom_wit = False, {"open": u, "law": rep.name, "witness": rep.witness}
            break
    if hom_ok:
        for u in F.frame.elements:
            for v in F.frame.down(u):
                if v == u:
                    continue
                f_uv = _left_adjoint_table(F, u, v)
                g_uv = _left_adjoint_table(G, u, v)
                for x in F.carrier(v):
                    if alpha(u, f_uv[x]) != g_uv[alpha(v, x)]:
                        hom_ok, hom_wit = False, {"square": [u, v], "section": F.label(v, x)}
                        break
                if not hom_ok:
                    break
            if not hom_ok:
                break

    forms = _three_way(
        "frame_morphism",
        [
            ("sup_and_meets", path_a, meets_wit if not meets_ok else (sup_rep.witness if not sup_rep.passed else None)),
            ("per_open_frame_hom", hom_ok, hom_wit),
        ],
    )
    forms.subreports.insert(0, sup_rep)
    forms.subreports.insert(
        1, CheckReport("frame_morphism.finite_meets", meets_ok, witness=meets_wit)
    )
    return forms
