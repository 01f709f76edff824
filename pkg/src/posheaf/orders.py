"""The order layer: partially ordered sheaves, the internal order subsheaf,
point and morphism orders, order-preserving maps, downsheaves and their
classifier, principal ideals/filters, powersheaves, downward closure, and
Galois connections — each characterization checked in every one of its equivalent
form, with the verdicts reconciled."""
from __future__ import annotations

from dataclasses import dataclass

from .frames import FiniteFrame, FinitePoset, MonotoneMap, galois_check
from .report import (
    Budget,
    BudgetMeter,
    CheckReport,
    MalformedInput,
    timed,
)
from .sheaves import (
    Point,
    Presheaf,
    SheafMorphism,
    SubSheaf,
    _close_parts,
    enumerate_closed_subsheaves,
    enumerate_points,
    full_subsheaf,
    product_sheaf,
    verify_morphism,
    verify_restriction_closed,
    verify_sheaf,
    verify_subsheaf,
)


class PoSheaf:
    """A sheaf plus one partial-order relation per open.

    The relation tables are reflexively closed on construction; POS1-POS3 are
    verified properties (verify_posheaf), not construction invariants.
    """

    def __init__(self, sheaf: Presheaf, orders: dict):
        self.sheaf = sheaf
        self.frame = sheaf.frame
        closed = {}
        for u in self.frame.elements:
            carrier = set(sheaf.carriers[u])
            pairs = set()
            for x, y in orders.get(u, ()):
                if x not in carrier or y not in carrier:
                    raise MalformedInput(f"order pair at {u!r} outside the carrier: {(x, y)!r}")
                pairs.add((x, y))
            pairs |= {(x, x) for x in sheaf.carriers[u]}
            closed[u] = frozenset(pairs)
        self.orders = closed
        self._posets: dict = {}

    @property
    def carriers(self):
        return self.sheaf.carriers

    def carrier(self, u):
        return self.sheaf.carriers[u]

    def label(self, u, x) -> str:
        return self.sheaf.label(u, x)

    def leq(self, u, x, y) -> bool:
        return (x, y) in self.orders[u]

    def poset(self, u) -> FinitePoset:
        if u not in self._posets:
            self._posets[u] = FinitePoset(self.sheaf.carriers[u], self.orders[u], closed=True)
        return self._posets[u]

    def opposite(self) -> "PoSheaf":
        """Same underlying sheaf, per-open orders reversed."""
        return PoSheaf(self.sheaf, {u: [(y, x) for (x, y) in rel] for u, rel in self.orders.items()})

    def discrete_like(self) -> bool:
        return all(len(rel) == len(self.sheaf.carriers[u]) for u, rel in self.orders.items())


def discrete(sheaf: Presheaf) -> PoSheaf:
    return PoSheaf(sheaf, {})


def order_subsheaf(F: PoSheaf) -> tuple[Presheaf, SubSheaf]:
    """The product sheaf F×F together with the order relation as its subsheaf."""
    cached = getattr(F, "_order_subsheaf", None)
    if cached is not None:
        return cached
    square = product_sheaf(F.sheaf, F.sheaf)
    parts = {u: [pair for pair in square.carriers[u] if pair in F.orders[u]] for u in F.frame.elements}
    out = (square, SubSheaf(square, parts))
    F._order_subsheaf = out
    return out


@timed
def verify_posheaf(F: PoSheaf) -> CheckReport:
    """POS1–POS3 with witnesses, cross-checked against the internal-poset
    reading: the order relation must be a subsheaf of F×F satisfying internal
    reflexivity, antisymmetry, and transitivity. Verdicts must agree."""
    cached = getattr(F, "_posheaf_report", None)
    if cached is not None:
        return cached
    report = _verify_posheaf_fresh(F)
    F._posheaf_report = report
    return report


def _verify_posheaf_fresh(F: PoSheaf) -> CheckReport:
    cert = verify_sheaf(F.sheaf)
    if not cert.passed:
        return CheckReport.fail("posheaf", {"precondition": cert.witness}, stage="sheaf")

    subs = []
    pos1 = CheckReport.ok("posheaf.POS1")
    for u in F.frame.elements:
        law = F.poset(u).verify()
        if not law.passed:
            pos1 = CheckReport.fail("posheaf.POS1", {"open": u, "law": law.name, "witness": law.witness})
            break
    subs.append(pos1)

    pos2 = CheckReport.ok("posheaf.POS2")
    done = False
    for u in F.frame.elements:
        for v in F.frame.down(u):
            for (x, y) in sorted(F.orders[u], key=lambda p: (F.sheaf.section_key(u, p[0]), F.sheaf.section_key(u, p[1]))):
                if not F.leq(v, F.sheaf.restrict(u, x, v), F.sheaf.restrict(u, y, v)):
                    pos2 = CheckReport.fail(
                        "posheaf.POS2",
                        {"square": [u, v], "pair": [F.label(u, x), F.label(u, y)]},
                    )
                    done = True
                    break
            if done:
                break
        if done:
            break
    subs.append(pos2)

    pos3 = CheckReport.ok("posheaf.POS3")
    done = False
    for u in F.frame.elements:
        for cover in F.frame.covers(u):
            for s in F.sheaf.carriers[u]:
                for t in F.sheaf.carriers[u]:
                    if F.leq(u, s, t):
                        continue
                    if all(F.leq(ui, F.sheaf.restrict(u, s, ui), F.sheaf.restrict(u, t, ui)) for ui in cover):
                        pos3 = CheckReport.fail(
                            "posheaf.POS3",
                            {
                                "open": u,
                                "cover": list(cover),
                                "lower_family": [F.label(ui, F.sheaf.restrict(u, s, ui)) for ui in cover],
                                "upper_family": [F.label(ui, F.sheaf.restrict(u, t, ui)) for ui in cover],
                                "patched": [F.label(u, s), F.label(u, t)],
                            },
                        )
                        done = True
                        break
                if done:
                    break
            if done:
                break
        if done:
            break
    subs.append(pos3)

    square, rel = order_subsheaf(F)
    internal_subs = []
    internal_subs.append(
        CheckReport(
            "internal.subsheaf_restriction",
            verify_restriction_closed(rel).passed,
            witness=verify_restriction_closed(rel).witness,
        )
    )
    sub_rep = verify_subsheaf(rel)
    internal_subs.append(CheckReport("internal.subsheaf_amalgamation", sub_rep.passed, witness=sub_rep.witness))
    refl = CheckReport.ok("internal.reflexive")
    antisym = CheckReport.ok("internal.antisymmetric")
    trans = CheckReport.ok("internal.transitive")
    for u in F.frame.elements:
        for x in F.sheaf.carriers[u]:
            if refl.passed and not rel.contains(u, (x, x)):
                refl = CheckReport.fail("internal.reflexive", {"open": u, "section": F.label(u, x)})
        for (x, y) in F.orders[u]:
            if antisym.passed and x != y and (y, x) in F.orders[u]:
                antisym = CheckReport.fail("internal.antisymmetric", {"open": u, "pair": [F.label(u, x), F.label(u, y)]})
            for (y2, z) in F.orders[u]:
                if trans.passed and y2 == y and (x, z) not in F.orders[u]:
                    trans = CheckReport.fail(
                        "internal.transitive", {"open": u, "chain": [F.label(u, x), F.label(u, y), F.label(u, z)]}
                    )
    internal_subs.extend([refl, antisym, trans])
    internal = CheckReport.combine("posheaf.internal_poset", internal_subs)
    subs.append(internal)

    pos_verdict = pos1.passed and pos2.passed and pos3.passed
    agreement = pos_verdict == internal.passed
    subs.append(
        CheckReport(
            "posheaf.agreement",
            agreement,
            witness=None if agreement else {"pos_forms": pos_verdict, "internal": internal.passed},
        )
    )
    first = next((r for r in subs if not r.passed), None)
    return CheckReport(
        name="posheaf",
        passed=pos_verdict and agreement,
        witness=None if first is None else {"first_failed": first.name, "witness": first.witness},
        subreports=subs,
    )


@dataclass
class PointOrderWitness:
    """Both readings of the point order: the displayed dom-then-value
    comparison and the factoring through the order subsheaf."""

    p: Point
    q: Point
    holds: bool
    via: object = None
    factoring: bool = False

    def agree(self) -> bool:
        return self.holds == self.factoring


def point_leq(F: PoSheaf, p: Point, q: Point) -> PointOrderWitness:
    frame = F.frame
    if not frame.leq(p.dom, q.dom):
        return PointOrderWitness(p, q, holds=False, factoring=False)
    via = F.sheaf.restrict(q.dom, q.value, p.dom)
    holds = F.leq(p.dom, p.value, via)
    factoring = all(
        (F.sheaf.restrict(p.dom, p.value, v), F.sheaf.restrict(q.dom, q.value, v)) in F.orders[v]
        for v in frame.down(p.dom)
    )
    return PointOrderWitness(p, q, holds=holds, via=via, factoring=factoring)


def point_leq_bool(F: PoSheaf, p: Point, q: Point) -> bool:
    w = point_leq(F, p, q)
    if not w.agree():
        raise AssertionError(f"point order readings disagree on {p} vs {q}")
    return w.holds


def _three_way(name: str, forms: list[tuple[str, bool, object]]) -> CheckReport:
    """Combine independently computed forms; passed iff all hold, and the
    report fails loudly if the forms disagree."""
    verdicts = [ok for _, ok, _ in forms]
    agree = len(set(verdicts)) == 1
    subs = [CheckReport(f"{name}.{label}", ok, witness=wit) for label, ok, wit in forms]
    subs.append(CheckReport(f"{name}.agreement", agree, witness=None if agree else {"verdicts": dict((l, v) for l, v, _ in forms)}))
    return CheckReport(
        name=name,
        passed=all(verdicts) and agree,
        witness=None if all(verdicts) and agree else next((s.witness for s in subs if not s.passed), None),
        subreports=subs,
        details={"verdict": all(verdicts)},
    )


@timed
def verify_order_preserving(alpha: SheafMorphism, F: PoSheaf, G: PoSheaf) -> CheckReport:
    """Point order preserved, per-open monotonicity, and factoring through the
    target order subsheaf — computed independently, agreement asserted."""
    nat = verify_morphism(alpha)
    if not nat.passed:
        return CheckReport.fail("order_preserving", {"precondition": nat.witness}, stage="morphism")

    pts = enumerate_points(F.sheaf)
    point_ok, point_wit = True, None
    for p in pts:
        for q in pts:
            if point_leq_bool(F, p, q) and not point_leq_bool(G, alpha.on_point(p), alpha.on_point(q)):
                point_ok, point_wit = False, {"points": [list(p), list(q)]}
                break
        if not point_ok:
            break

    open_ok, open_wit = True, None
    for u in F.frame.elements:
        m = MonotoneMap(F.poset(u), G.poset(u), alpha.maps[u]).verify()
        if not m.passed:
            open_ok, open_wit = False, {"open": u, "pair": m.witness["pair"]}
            break

    fact_ok, fact_wit = True, None
    square, rel = order_subsheaf(G)
    for u in F.frame.elements:
        for (x, y) in sorted(F.orders[u], key=lambda p: (F.sheaf.section_key(u, p[0]), F.sheaf.section_key(u, p[1]))):
            if not rel.contains(u, (alpha(u, x), alpha(u, y))):
                fact_ok, fact_wit = False, {"open": u, "pair": [F.label(u, x), F.label(u, y)]}
                break
        if not fact_ok:
            break

    return _three_way(
        "order_preserving",
        [("points", point_ok, point_wit), ("per_open", open_ok, open_wit), ("factoring", fact_ok, fact_wit)],
    )


@timed
def morphism_leq(alpha: SheafMorphism, beta: SheafMorphism, F: PoSheaf, G: PoSheaf) -> tuple[bool, CheckReport]:
    """α ≤ β in the three equivalent readings; verdict plus report."""
    pts = enumerate_points(F.sheaf)
    point_ok, point_wit = True, None
    for p in pts:
        if not point_leq_bool(G, alpha.on_point(p), beta.on_point(p)):
            point_ok, point_wit = False, {"point": list(p)}
            break

    open_ok, open_wit = True, None
    for u in F.frame.elements:
        for x in F.sheaf.carriers[u]:
            if not G.leq(u, alpha(u, x), beta(u, x)):
                open_ok, open_wit = False, {"open": u, "section": F.label(u, x)}
                break
        if not open_ok:
            break

    _, rel = order_subsheaf(G)
    diag_ok, diag_wit = True, None
    for u in F.frame.elements:
        for x in F.sheaf.carriers[u]:
            if not rel.contains(u, (alpha(u, x), beta(u, x))):
                diag_ok, diag_wit = False, {"open": u, "section": F.label(u, x)}
                break
        if not diag_ok:
            break

    report = _three_way(
        "morphism_leq",
        [("points", point_ok, point_wit), ("per_open", open_ok, open_wit), ("diagonal", diag_ok, diag_wit)],
    )
    return point_ok and report.subreports[-1].passed, report


def omega(X: FiniteFrame) -> PoSheaf:
    """The subobject classifier: Ω(u) = opens below u, restriction by meet,
    inclusion order."""
    carriers = {u: tuple(X.down(u)) for u in X.elements}
    res = {
        (u, v): {w: X.meet(w, v) for w in carriers[u]}
        for u in X.elements
        for v in X.down(u)
        if v != u
    }
    sheaf = Presheaf(X, carriers, res)
    orders = {u: [(w, w2) for w in carriers[u] for w2 in carriers[u] if X.leq(w, w2)] for u in X.elements}
    return PoSheaf(sheaf, orders)


def classifier(G: SubSheaf, F: PoSheaf, Om: PoSheaf | None = None) -> tuple[SheafMorphism, CheckReport]:
    """The classifying map φ_u(x) = ⋁{v ≤ u : x|_v ∈ G(v)} into Ω, verified
    natural and classifying G via the subterminal truth values."""
    frame = F.frame
    Om = Om or omega(frame)
    maps = {
        u: {
            x: frame.join_all(v for v in frame.down(u) if G.contains(v, F.sheaf.restrict(u, x, v)))
            for x in F.sheaf.carriers[u]
        }
        for u in frame.elements
    }
    phi = SheafMorphism(F.sheaf, Om.sheaf, maps)
    nat = verify_morphism(phi)
    classify_ok, wit = True, None
    for u in frame.elements:
        members = {x for x in F.sheaf.carriers[u] if phi(u, x) == u}
        if members != set(G.part(u)):
            classify_ok = False
            wit = {"open": u, "classified": sorted(F.label(u, x) for x in members), "part": sorted(F.label(u, x) for x in G.part(u))}
            break
    report = CheckReport.combine(
        "classifier",
        [nat, CheckReport("classifier.pullback", classify_ok, witness=wit)],
    )
    return phi, report


@timed
def is_downsheaf(G: SubSheaf, F: PoSheaf) -> CheckReport:
    """Downward closure in the point order, per-open downsets, and
    order-preservation of the classifier on the opposite — three forms."""
    pre = verify_subsheaf(G)
    if not pre.passed:
        return CheckReport.fail("downsheaf", {"precondition": pre.witness}, stage="subsheaf")

    pts = enumerate_points(F.sheaf)
    gpts = {(p.dom, p.value) for p in G.points()}
    point_ok, point_wit = True, None
    for p in pts:
        for q in pts:
            if point_leq_bool(F, p, q) and (q.dom, q.value) in gpts and (p.dom, p.value) not in gpts:
                point_ok, point_wit = False, {"below": list(p), "member": list(q)}
                break
        if not point_ok:
            break

    open_ok, open_wit = True, None
    for u in F.frame.elements:
        for y in G.sorted_part(u):
            for x in F.sheaf.carriers[u]:
                if F.leq(u, x, y) and not G.contains(u, x):
                    open_ok, open_wit = False, {"open": u, "pair": [F.label(u, x), F.label(u, y)]}
                    break
            if not open_ok:
                break
        if not open_ok:
            break

    phi, phi_rep = classifier(G, F)
    cls_ok, cls_wit = phi_rep.passed, None if phi_rep.passed else phi_rep.witness
    if cls_ok:
        for u in F.frame.elements:
            for (a, b) in sorted(F.orders[u], key=lambda p: (F.sheaf.section_key(u, p[0]), F.sheaf.section_key(u, p[1]))):
                if not F.frame.leq(phi(u, b), phi(u, a)):
                    cls_ok, cls_wit = False, {"open": u, "pair": [F.label(u, a), F.label(u, b)], "truth": [phi(u, a), phi(u, b)]}
                    break
            if not cls_ok:
                break

    return _three_way(
        "downsheaf",
        [("points", point_ok, point_wit), ("per_open", open_ok, open_wit), ("classifier", cls_ok, cls_wit)],
    )


def principal(F: PoSheaf, p: Point, direction: str = "ideal") -> SubSheaf:
    """↓p (or ↑p): the displayed case formula — comparisons against p's
    restrictions on opens below dom(p), empty elsewhere."""
    if direction not in ("ideal", "filter"):
        raise MalformedInput(f"direction must be ideal or filter, not {direction!r}")
    frame = F.frame
    parts = {}
    for u in frame.elements:
        if frame.leq(u, p.dom):
            pu = F.sheaf.restrict(p.dom, p.value, u)
            if direction == "ideal":
                parts[u] = [x for x in F.sheaf.carriers[u] if F.leq(u, x, pu)]
            else:
                parts[u] = [x for x in F.sheaf.carriers[u] if F.leq(u, pu, x)]
        else:
            parts[u] = []
    return SubSheaf(F.sheaf, parts)


def down_closure(F: PoSheaf, S: SubSheaf) -> SubSheaf:
    """↓S by the cover formula: x lands at u when some cover of u admits
    members of S dominating the matching restrictions of x."""
    frame = F.frame
    parts = {}
    for u in frame.elements:
        keep = []
        for x in F.sheaf.carriers[u]:
            for cover in frame.covers(u):
                if all(
                    any(F.leq(ui, F.sheaf.restrict(u, x, ui), xi) for xi in S.sorted_part(ui))
                    for ui in cover
                ):
                    keep.append(x)
                    break
        parts[u] = keep
    return SubSheaf(F.sheaf, parts)


def _downsheaf_closure(F: PoSheaf):
    """Closure operator for enumerating downsheaves: subsheaf closure plus
    per-open downward closure, to joint fixpoint."""

    def extra(parts):
        changed = False
        for u in F.frame.elements:
            iu = F.frame.index[u]
            for y in list(parts[iu]):
                for x in F.sheaf.carriers[u]:
                    if F.leq(u, x, y) and x not in parts[iu]:
                        parts[iu].add(x)
                        changed = True
        return changed

    def close(sections):
        parts = [set() for _ in F.frame.elements]
        for u, x in sections:
            parts[F.frame.index[u]].add(x)
        _close_parts(F.sheaf, parts, extra=extra)
        return SubSheaf(F.sheaf, tuple(frozenset(p) for p in parts))

    return close


def enumerate_downsheaves(F: PoSheaf, u=None, *, budget: Budget | None = None, meter: BudgetMeter | None = None) -> list[SubSheaf]:
    """Dow(F^u) in deterministic order, budget-metered."""
    return enumerate_closed_subsheaves(F.sheaf, u, close=_downsheaf_closure(F), budget=budget, meter=meter)


def _power_carrier_order(subs: list[SubSheaf]) -> list[SubSheaf]:
    return sorted(subs, key=lambda s: s.key())


def _power_posheaf(F_sheaf: Presheaf, per_open: dict) -> PoSheaf:
    """Assemble a powersheaf-style posheaf from per-open subsheaf carriers."""
    frame = F_sheaf.frame
    carriers = {u: tuple(per_open[u]) for u in frame.elements}
    res = {}
    for u in frame.elements:
        lookup = {s: s for s in per_open[u]}
        for v in frame.down(u):
            if v == u:
                continue
            table = {}
            for s in per_open[u]:
                table[s] = s.clip(v)
            res[(u, v)] = table
    sheaf = Presheaf(frame, carriers, res, labeler=lambda u, s: s.describe())
    orders = {
        u: [(s, t) for s in per_open[u] for t in per_open[u] if s.issubset(t)]
        for u in frame.elements
    }
    return PoSheaf(sheaf, orders)


def power_sheaf(F: Presheaf, *, budget: Budget | None = None, verify: bool = True) -> PoSheaf:
    """ℙF: u ↦ Sub(F^u) under inclusion, restriction by clipping."""
    budget = budget or Budget()
    meter = BudgetMeter("power sheaf subsheaves", budget.subsheaves)
    per_open = {u: _power_carrier_order(enumerate_closed_subsheaves(F, u, meter=meter)) for u in F.frame.elements}
    P = _power_posheaf(F, per_open)
    if verify:
        verify_posheaf(P).require()
    return P


def down_power_sheaf(F: PoSheaf, *, budget: Budget | None = None, verify: bool = True) -> PoSheaf:
    """𝔻F: u ↦ Dow(F^u), a subsheaf of ℙF."""
    budget = budget or Budget()
    meter = BudgetMeter("down-power sheaf downsheaves", budget.subsheaves)
    close = _downsheaf_closure(F)
    per_open = {
        u: _power_carrier_order(enumerate_closed_subsheaves(F.sheaf, u, close=close, meter=meter))
        for u in F.frame.elements
    }
    D = _power_posheaf(F.sheaf, per_open)
    if verify:
        verify_posheaf(D).require()
    return D


def down_embedding(F: PoSheaf, target: PoSheaf) -> SheafMorphism:
    """The principal-ideal embedding F → 𝔻F (or into ℙF): x at u goes to the
    downsheaf of everything below x within the downset of u."""
    frame = F.frame
    maps = {}
    for u in frame.elements:
        table = {}
        for x in F.sheaf.carriers[u]:
            parts = {
                v: [y for y in F.sheaf.carriers[v] if F.leq(v, y, F.sheaf.restrict(u, x, v))]
                for v in frame.down(u)
            }
            table[x] = SubSheaf(F.sheaf, parts)
        maps[u] = table
    return SheafMorphism(F.sheaf, target.sheaf, maps)


def power_inclusion(D: PoSheaf, P: PoSheaf) -> SheafMorphism:
    """𝔻F ↣ ℙF elementwise."""
    return SheafMorphism(D.sheaf, P.sheaf, {u: {s: s for s in D.sheaf.carriers[u]} for u in D.frame.elements})


@timed
def verify_galois(
    alpha: SheafMorphism,
    beta: SheafMorphism,
    F: PoSheaf,
    G: PoSheaf,
) -> CheckReport:
    """α ⊣ β in three forms: the point equivalence, the unit/counit
    inequalities, and per-open adjointness plus naturality — reconciled."""
    pre_a = verify_order_preserving(alpha, F, G)
    pre_b = verify_order_preserving(beta, G, F)
    if not (pre_a.passed and pre_b.passed):
        return CheckReport.fail(
            "galois",
            {"precondition": (pre_a if not pre_a.passed else pre_b).witness},
            stage="order_preserving",
        )

    fpts = enumerate_points(F.sheaf)
    gpts = enumerate_points(G.sheaf)
    pt_ok, pt_wit = True, None
    for x in fpts:
        for y in gpts:
            lhs = point_leq_bool(G, alpha.on_point(x), y)
            rhs = point_leq_bool(F, x, beta.on_point(y))
            if lhs != rhs:
                pt_ok, pt_wit = False, {"points": [list(x), list(y)], "alpha_leq": lhs, "leq_beta": rhs}
                break
        if not pt_ok:
            break

    unit_ok, _ = morphism_leq(SheafMorphism.identity(F.sheaf), beta.compose(alpha), F, F)
    counit_ok, _ = morphism_leq(alpha.compose(beta), SheafMorphism.identity(G.sheaf), G, G)
    uc_ok = unit_ok and counit_ok
    uc_wit = None if uc_ok else {"unit": unit_ok, "counit": counit_ok}

    open_ok, open_wit = True, None
    for u in F.frame.elements:
        au = MonotoneMap(F.poset(u), G.poset(u), alpha.maps[u])
        bu = MonotoneMap(G.poset(u), F.poset(u), beta.maps[u])
        rep = galois_check(au, bu)
        if not rep.passed:
            open_ok, open_wit = False, {"open": u, "witness": rep.witness}
            break
    if open_ok:
        nat_b = verify_morphism(beta)
        if not nat_b.passed:
            open_ok, open_wit = False, {"beta_naturality": nat_b.witness}

    return _three_way(
        "galois",
        [("points", pt_ok, pt_wit), ("unit_counit", uc_ok, uc_wit), ("per_open", open_ok, open_wit)],
    )
