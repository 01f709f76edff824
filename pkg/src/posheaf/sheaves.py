"""Presheaves and sheaves of finite sets on a finite frame: the gluing axiom,
subsheaves and their enumeration, points, restriction, subterminals, and the
largest-agreement-open computation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, NamedTuple

from .frames import FiniteFrame
from .report import (
    Budget,
    BudgetMeter,
    CheckReport,
    DomainMismatch,
    MalformedInput,
    MissingRestriction,
    NotRestrictionClosed,
    SectionNotInCarrier,
    timed,
)


class Point(NamedTuple):
    """A point of a sheaf, extensionally: the largest open where it lives and
    the carrier element there."""

    dom: str
    value: Hashable


class Presheaf:
    """Finite carrier per open plus total restriction tables for every v ≤ u.

    Carrier elements are hashable; iteration order is the carrier tuple order.
    Sheaf status is a verified property (verify_sheaf), not a subclass.
    """

    def __init__(
        self,
        frame: FiniteFrame,
        carriers: dict,
        res: dict,
        labeler: Callable | None = None,
    ):
        self.frame = frame
        self.carriers = {u: tuple(carriers.get(u, ())) for u in frame.elements}
        for u, xs in self.carriers.items():
            if len(set(xs)) != len(xs):
                raise MalformedInput(f"duplicate sections at {u!r}")
        self.res = {}
        for u in frame.elements:
            for v in frame.down(u):
                if v == u:
                    table = {x: x for x in self.carriers[u]}
                else:
                    if (u, v) not in res:
                        raise MissingRestriction(f"no restriction table {u!r} -> {v!r}")
                    table = dict(res[(u, v)])
                    for x in self.carriers[u]:
                        if x not in table:
                            raise MissingRestriction(f"restriction {u!r} -> {v!r} missing {x!r}")
                        if table[x] not in set(self.carriers[v]):
                            raise MalformedInput(
                                f"restriction {u!r} -> {v!r} sends {x!r} outside the carrier"
                            )
                self.res[(u, v)] = table
        self._labeler = labeler

    def carrier(self, u) -> tuple:
        return self.carriers[u]

    def restrict(self, u, x, v):
        """x|_v for x in the carrier at u and v ≤ u."""
        return self.res[(u, v)][x]

    def sections(self) -> list[tuple]:
        return [(u, x) for u in self.frame.elements for x in self.carriers[u]]

    def label(self, u, x) -> str:
        if self._labeler is not None:
            return self._labeler(u, x)
        return str(x)

    def section_key(self, u, x) -> tuple:
        return (self.frame.index[u], self.carriers[u].index(x))

    @timed
    def verify(self) -> CheckReport:
        """Identity restrictions and composition over every chain w ≤ v ≤ u."""
        for u in self.frame.elements:
            for x in self.carriers[u]:
                if self.restrict(u, x, u) != x:
                    return CheckReport.fail("presheaf.identity", {"open": u, "section": self.label(u, x)})
        for u in self.frame.elements:
            for v in self.frame.down(u):
                for w in self.frame.down(v):
                    for x in self.carriers[u]:
                        direct = self.restrict(u, x, w)
                        via = self.restrict(v, self.restrict(u, x, v), w)
                        if direct != via:
                            return CheckReport.fail(
                                "presheaf.composition",
                                {"triple": [u, v, w], "section": self.label(u, x)},
                            )
        return CheckReport.ok("presheaf")


def verify_presheaf(P: Presheaf) -> CheckReport:
    return P.verify()


def compatible_families(P: Presheaf, cover: tuple):
    """All families (x_i in P(u_i)) agreeing on pairwise meets, by DFS with
    early pruning; the empty cover yields the single empty family."""
    cover = list(cover)
    frame = P.frame
    chosen: list = []

    def rec(i):
        if i == len(cover):
            yield tuple(chosen)
            return
        ui = cover[i]
        for x in P.carriers[ui]:
            ok = True
            for j in range(i):
                w = frame.meet(ui, cover[j])
                if P.restrict(ui, x, w) != P.restrict(cover[j], chosen[j], w):
                    ok = False
                    break
            if ok:
                chosen.append(x)
                yield from rec(i + 1)
                chosen.pop()

    yield from rec(0)


def amalgamations(P: Presheaf, u, cover: tuple, family: tuple) -> list:
    return [
        x
        for x in P.carriers[u]
        if all(P.restrict(u, x, ui) == xi for ui, xi in zip(cover, family))
    ]


@dataclass
class SheafCertificate:
    """Per-(open, cover) amalgamation summary; passed iff every compatible
    family over every cover has exactly one amalgamation."""

    passed: bool
    entries: list
    witness: dict | None = None
    precondition: CheckReport | None = None

    def report(self) -> CheckReport:
        rep = CheckReport(
            name="sheaf",
            passed=self.passed,
            witness=self.witness,
            details={"entries": self.entries},
        )
        if self.precondition is not None and not self.precondition.passed:
            rep.subreports.append(self.precondition)
        return rep


@timed
def verify_sheaf(P: Presheaf) -> SheafCertificate:
    """Every compatible family over every cover patches to exactly one section.

    Presheaves are immutable, so the certificate is memoized on the instance.
    """
    cached = getattr(P, "_sheaf_certificate", None)
    if cached is not None:
        return cached
    cert = _verify_sheaf_fresh(P)
    P._sheaf_certificate = cert
    return cert


def _verify_sheaf_fresh(P: Presheaf) -> SheafCertificate:
    pre = P.verify()
    if not pre.passed:
        return SheafCertificate(False, [], {"precondition": pre.witness}, precondition=pre)
    entries = []
    for u in P.frame.elements:
        for cover in P.frame.covers(u):
            families = 0
            for family in compatible_families(P, cover):
                families += 1
                glue = amalgamations(P, u, cover, family)
                if len(glue) != 1:
                    witness = {
                        "open": u,
                        "cover": list(cover),
                        "family": [P.label(ui, xi) for ui, xi in zip(cover, family)],
                        "amalgamations": len(glue),
                    }
                    return SheafCertificate(False, entries, witness)
            entries.append({"open": u, "cover": list(cover), "families": families})
    return SheafCertificate(True, entries)


class SubSheaf:
    """Per-open subsets of a parent presheaf, aligned with the frame's element
    order; equality and hashing are on the parts only."""

    __slots__ = ("parent", "parts")

    def __init__(self, parent: Presheaf, parts):
        self.parent = parent
        if isinstance(parts, dict):
            normalized = tuple(frozenset(parts.get(u, ())) for u in parent.frame.elements)
        else:
            normalized = tuple(frozenset(p) for p in parts)
        for u, part in zip(parent.frame.elements, normalized):
            bad = part - set(parent.carriers[u])
            if bad:
                raise MalformedInput(f"subsheaf part at {u!r} outside the carrier: {sorted(map(str, bad))}")
        self.parts = normalized

    def __eq__(self, other):
        return isinstance(other, SubSheaf) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def part(self, u) -> frozenset:
        return self.parts[self.parent.frame.index[u]]

    def contains(self, u, x) -> bool:
        return x in self.part(u)

    def issubset(self, other: "SubSheaf") -> bool:
        return all(a <= b for a, b in zip(self.parts, other.parts))

    def size(self) -> int:
        return sum(len(p) for p in self.parts)

    def support(self):
        """Join of the opens carrying sections."""
        frame = self.parent.frame
        return frame.join_all(u for u in frame.elements if self.part(u))

    def clip(self, v) -> "SubSheaf":
        """S^v: drop every part not below v."""
        frame = self.parent.frame
        return SubSheaf(
            self.parent,
            tuple(p if frame.leq(u, v) else frozenset() for u, p in zip(frame.elements, self.parts)),
        )

    def sorted_part(self, u) -> list:
        order = self.parent.carriers[u]
        return [x for x in order if x in self.part(u)]

    def points(self) -> list[Point]:
        return [Point(u, x) for u in self.parent.frame.elements for x in self.sorted_part(u)]

    def describe(self) -> str:
        bits = []
        for u in self.parent.frame.elements:
            xs = self.sorted_part(u)
            if xs:
                bits.append(f"{u}:" + ",".join(self.parent.label(u, x) for x in xs))
        return "{" + "|".join(bits) + "}"

    def key(self) -> tuple:
        """Deterministic sort key: (total size, per-open membership masks)."""
        masks = []
        for u, part in zip(self.parent.frame.elements, self.parts):
            mask = 0
            for i, x in enumerate(self.parent.carriers[u]):
                if x in part:
                    mask |= 1 << i
            masks.append(mask)
        return (self.size(), tuple(masks))

    def as_presheaf(self) -> Presheaf:
        """The parts as a standalone presheaf on the same frame."""
        frame = self.parent.frame
        carriers = {u: tuple(self.sorted_part(u)) for u in frame.elements}
        res = {
            (u, v): {x: self.parent.restrict(u, x, v) for x in carriers[u]}
            for u in frame.elements
            for v in frame.down(u)
            if v != u
        }
        return Presheaf(frame, carriers, res, labeler=self.parent._labeler)


def full_subsheaf(P: Presheaf, u=None) -> SubSheaf:
    """F itself, or F^u as the subsheaf with empty carriers above u."""
    frame = P.frame
    if u is None:
        u = frame.top
    return SubSheaf(
        P,
        {v: P.carriers[v] for v in frame.down(u)},
    )


def sheaf_on_down(P: Presheaf, u) -> Presheaf:
    """F^u as a sheaf on the open sublocale frame of u (the other realization
    of the restriction; full_subsheaf gives the empty-above-u form)."""
    sub = P.frame.subframe(u)
    carriers = {v: P.carriers[v] for v in sub.elements}
    res = {
        (v, w): dict(P.res[(v, w)])
        for v in sub.elements
        for w in sub.down(v)
        if w != v
    }
    return Presheaf(sub, carriers, res, labeler=P._labeler)


def verify_restriction_closed(S: SubSheaf) -> CheckReport:
    P = S.parent
    for u in P.frame.elements:
        for x in S.sorted_part(u):
            for v in P.frame.down(u):
                if not S.contains(v, P.restrict(u, x, v)):
                    return CheckReport.fail(
                        "restriction_closed",
                        {"open": u, "section": P.label(u, x), "at": v},
                    )
    return CheckReport.ok("restriction_closed")


def verify_subsheaf(S: SubSheaf) -> CheckReport:
    """Restriction-closed and closed under amalgamation (itself a sheaf)."""
    rc = verify_restriction_closed(S)
    if not rc.passed:
        return CheckReport.fail("subsheaf", rc.witness, reason="restriction")
    P = S.parent
    for u in P.frame.elements:
        for cover in P.frame.covers(u):
            for family in _families_within(S, cover):
                glue = amalgamations(P, u, cover, family)
                missing = [x for x in glue if not S.contains(u, x)]
                if missing:
                    return CheckReport.fail(
                        "subsheaf",
                        {
                            "open": u,
                            "cover": list(cover),
                            "family": [P.label(ui, xi) for ui, xi in zip(cover, family)],
                            "amalgam_outside": [P.label(u, x) for x in missing],
                        },
                        reason="amalgamation",
                    )
    return CheckReport.ok("subsheaf")


def _families_within(S: SubSheaf, cover: tuple):
    """Compatible families drawing only from the subsheaf's parts."""
    P = S.parent
    frame = P.frame
    cover = list(cover)
    chosen: list = []

    def rec(i):
        if i == len(cover):
            yield tuple(chosen)
            return
        ui = cover[i]
        for x in S.sorted_part(ui):
            ok = True
            for j in range(i):
                w = frame.meet(ui, cover[j])
                if P.restrict(ui, x, w) != P.restrict(cover[j], chosen[j], w):
                    ok = False
                    break
            if ok:
                chosen.append(x)
                yield from rec(i + 1)
                chosen.pop()

    yield from rec(0)


def _families_in_parts(P: Presheaf, parts: list[set], cover: tuple):
    frame = P.frame
    cover = list(cover)
    chosen: list = []

    def rec(i):
        if i == len(cover):
            yield tuple(chosen)
            return
        ui = cover[i]
        for x in P.carriers[ui]:
            if x not in parts[frame.index[ui]]:
                continue
            ok = True
            for j in range(i):
                w = frame.meet(ui, cover[j])
                if P.restrict(ui, x, w) != P.restrict(cover[j], chosen[j], w):
                    ok = False
                    break
            if ok:
                chosen.append(x)
                yield from rec(i + 1)
                chosen.pop()

    yield from rec(0)


def _close_parts(P: Presheaf, parts: list[set], extra: Callable | None = None) -> None:
    """In place: close parts under restriction and amalgamation (and an extra
    per-pass rule, e.g. downward closure), to fixpoint."""
    frame = P.frame
    changed = True
    while changed:
        changed = False
        for u in frame.elements:
            iu = frame.index[u]
            for x in list(parts[iu]):
                for v in frame.down(u):
                    y = P.restrict(u, x, v)
                    if y not in parts[frame.index[v]]:
                        parts[frame.index[v]].add(y)
                        changed = True
        for u in frame.elements:
            iu = frame.index[u]
            full = parts[iu] >= set(P.carriers[u])
            if full:
                continue
            for cover in frame.covers(u):
                if any(not parts[frame.index[ui]] for ui in cover):
                    continue
                for family in _families_in_parts(P, parts, cover):
                    for x in amalgamations(P, u, cover, family):
                        if x not in parts[iu]:
                            parts[iu].add(x)
                            changed = True
        if extra is not None and extra(parts):
            changed = True


def generate_subsheaf(F: Presheaf, B, *, require_closed: bool = True) -> SubSheaf:
    """Smallest subsheaf of F containing B: closure under amalgamation (and
    restriction) iterated to fixpoint."""
    seed = B if isinstance(B, SubSheaf) else SubSheaf(F, B)
    if require_closed:
        verify_restriction_closed(seed).require(NotRestrictionClosed)
    parts = [set(p) for p in seed.parts]
    _close_parts(F, parts)
    return SubSheaf(F, tuple(frozenset(p) for p in parts))


def close_to_subsheaf(F: Presheaf, seed_sections: Iterable[tuple]) -> SubSheaf:
    """Closure of an arbitrary set of (open, section) pairs (no precondition)."""
    parts: list[set] = [set() for _ in F.frame.elements]
    for u, x in seed_sections:
        parts[F.frame.index[u]].add(x)
    _close_parts(F, parts)
    return SubSheaf(F, tuple(frozenset(p) for p in parts))


def enumerate_closed_subsheaves(
    F: Presheaf,
    u=None,
    *,
    close: Callable | None = None,
    budget: Budget | None = None,
    meter: BudgetMeter | None = None,
) -> list[SubSheaf]:
    """All closure-system members over the sections of F^u, by next-closure in
    lectic order (deterministic, budget-metered). The default closure yields
    Sub(F^u); pass a stronger closure for downsheaves."""
    frame = F.frame
    if u is None:
        u = frame.top
    if meter is None:
        meter = BudgetMeter("subsheaf enumeration", (budget or Budget()).subsheaves)
    universe = [(v, x) for v in frame.down(u) for x in F.carriers[v]]
    pos = {item: i for i, item in enumerate(universe)}

    if close is None:
        def close(sections):
            return close_to_subsheaf(F, sections)

    def closed_sections(sub: SubSheaf) -> frozenset:
        return frozenset((v, x) for v, x in universe if sub.contains(v, x))

    out = []
    current = closed_sections(close(frozenset()))
    out.append(current)
    meter.tick()
    n = len(universe)
    while len(current) < n:
        nxt = None
        for i in range(n - 1, -1, -1):
            item = universe[i]
            if item in current:
                continue
            seed = frozenset(s for s in current if pos[s] < i) | {item}
            candidate = closed_sections(close(seed))
            if all(pos[s] >= i or s in current for s in candidate):
                nxt = candidate
                break
        if nxt is None:
            break
        current = nxt
        out.append(current)
        meter.tick()
    subs = [SubSheaf(F, _sections_to_parts(F, secs)) for secs in out]
    subs.sort(key=lambda s: s.key())
    return subs


def _sections_to_parts(F: Presheaf, sections: frozenset) -> dict:
    parts: dict = {u: [] for u in F.frame.elements}
    for v, x in sections:
        parts[v].append(x)
    return parts


def enumerate_subsheaves(F: Presheaf, u=None, *, budget: Budget | None = None, meter: BudgetMeter | None = None) -> list[SubSheaf]:
    """Sub(F^u) for a verified sheaf F."""
    return enumerate_closed_subsheaves(F, u, budget=budget, meter=meter)


def enumerate_points(F: Presheaf) -> list[Point]:
    """All (u, x in F(u)) pairs of a verified sheaf, including the unique
    point at bottom; the count is the sum of the carrier sizes."""
    return [Point(u, x) for u in F.frame.elements for x in F.carriers[u]]


def point_restrict(F: Presheaf, p: Point, v):
    """p(v) = value|_v for v ≤ dom(p)."""
    return F.restrict(p.dom, p.value, v)


def epsilon(P: Presheaf, sections: list[tuple]):
    """Largest open below the meet of the domains on which all the given
    sections restrict to the same thing."""
    if not sections:
        raise MalformedInput("epsilon needs at least one section")
    for u, x in sections:
        if u not in P.frame:
            raise SectionNotInCarrier(f"unknown open {u!r}")
        if x not in set(P.carriers[u]):
            raise SectionNotInCarrier(f"section {x!r} not in carrier at {u!r}")
    frame = P.frame
    bound = frame.meet_all(u for u, _ in sections)
    agreeing = []
    for w in frame.down(bound):
        images = {P.restrict(u, x, w) for u, x in sections}
        if len(images) == 1:
            agreeing.append(w)
    return frame.join_all(agreeing)


def subterminal(X: FiniteFrame, u) -> Presheaf:
    """Singleton carrier at every v ≤ u, empty otherwise."""
    if u not in X:
        raise DomainMismatch(f"open not in frame: {u!r}")
    below = set(X.down(u))
    carriers = {v: ("*",) if v in below else () for v in X.elements}
    res = {}
    for v in X.elements:
        for w in X.down(v):
            if w != v:
                res[(v, w)] = {"*": "*"} if v in below else {}
    return Presheaf(X, carriers, res)


def terminal(X: FiniteFrame) -> Presheaf:
    return subterminal(X, X.top)


class SheafMorphism:
    """Per-open maps forming (once verified) a natural transformation."""

    def __init__(self, source: Presheaf, target: Presheaf, maps: dict):
        self.source = source
        self.target = target
        self.maps = {}
        for u in source.frame.elements:
            table = dict(maps.get(u, {}))
            for x in source.carriers[u]:
                if x not in table:
                    raise DomainMismatch(f"morphism map at {u!r} missing {source.label(u, x)!r}")
                if table[x] not in set(target.carriers[u]):
                    raise DomainMismatch(f"morphism at {u!r} sends {source.label(u, x)!r} outside the target")
            self.maps[u] = table

    def __call__(self, u, x):
        return self.maps[u][x]

    @classmethod
    def identity(cls, F: Presheaf) -> "SheafMorphism":
        return cls(F, F, {u: {x: x for x in F.carriers[u]} for u in F.frame.elements})

    def compose(self, other: "SheafMorphism") -> "SheafMorphism":
        """self after other."""
        return SheafMorphism(
            other.source,
            self.target,
            {
                u: {x: self(u, other(u, x)) for x in other.source.carriers[u]}
                for u in other.source.frame.elements
            },
        )

    def on_point(self, p: Point) -> Point:
        return Point(p.dom, self(p.dom, p.value))

    @timed
    def verify(self) -> CheckReport:
        """Naturality squares for all v ≤ u."""
        for u in self.source.frame.elements:
            for v in self.source.frame.down(u):
                for x in self.source.carriers[u]:
                    lhs = self.target.restrict(u, self(u, x), v)
                    rhs = self(v, self.source.restrict(u, x, v))
                    if lhs != rhs:
                        return CheckReport.fail(
                            "morphism.naturality",
                            {
                                "square": [u, v],
                                "section": self.source.label(u, x),
                                "restrict_then_map": self.target.label(v, rhs),
                                "map_then_restrict": self.target.label(v, lhs),
                            },
                        )
        return CheckReport.ok("morphism")


def verify_morphism(alpha: SheafMorphism) -> CheckReport:
    return alpha.verify()


def product_sheaf(F: Presheaf, G: Presheaf) -> Presheaf:
    """F × G with componentwise carriers and restrictions."""
    if F.frame is not G.frame and F.frame.elements != G.frame.elements:
        raise DomainMismatch("product of sheaves on different frames")
    frame = F.frame
    carriers = {
        u: tuple(itertools.product(F.carriers[u], G.carriers[u])) for u in frame.elements
    }
    res = {
        (u, v): {
            (x, y): (F.restrict(u, x, v), G.restrict(u, y, v))
            for (x, y) in carriers[u]
        }
        for u in frame.elements
        for v in frame.down(u)
        if v != u
    }

    def labeler(u, pair):
        return f"({F.label(u, pair[0])},{G.label(u, pair[1])})"

    return Presheaf(frame, carriers, res, labeler=labeler)


def sheaf_iso(F: Presheaf, G: Presheaf) -> dict | None:
    """Per-open bijections commuting with restrictions, by backtracking;
    None when exhausted. Intended for desk-scale witnesses only."""
    frame = F.frame
    if any(len(F.carriers[u]) != len(G.carriers[u]) for u in frame.elements):
        return None
    opens = list(frame.elements)
    assignment: dict = {}

    def consistent(u) -> bool:
        for v in opens:
            if v not in assignment:
                continue
            if frame.leq(v, u):
                hi, lo = u, v
            elif frame.leq(u, v):
                hi, lo = v, u
            else:
                continue
            for x in F.carriers[hi]:
                if G.restrict(hi, assignment[hi][x], lo) != assignment[lo][F.restrict(hi, x, lo)]:
                    return False
        return True

    def rec(i) -> bool:
        if i == len(opens):
            return True
        u = opens[i]
        for perm in itertools.permutations(G.carriers[u]):
            assignment[u] = dict(zip(F.carriers[u], perm))
            if consistent(u) and rec(i + 1):
                return True
            del assignment[u]
        return False

    return dict(assignment) if rec(0) else None


def agreement_meet_diagnostic(P: Presheaf, max_tuple: int = 2) -> dict:
    """Report whether agreement-open equality holds for all tuples (up to the
    given arity on each side) and whether P is terminal; the two need not
    coincide (empty carriers above bottom give equality without terminality)."""
    secs = P.sections()
    equality = True
    witness = None
    for n in range(1, max_tuple + 1):
        for m in range(1, max_tuple + 1):
            for left in itertools.combinations_with_replacement(secs, n):
                for right in itertools.combinations_with_replacement(secs, m):
                    lhs = epsilon(P, list(left) + list(right))
                    rhs = P.frame.meet(epsilon(P, list(left)), epsilon(P, list(right)))
                    if lhs != rhs:
                        equality = False
                        witness = {
                            "left": [[u, P.label(u, x)] for u, x in left],
                            "right": [[u, P.label(u, x)] for u, x in right],
                            "joint": lhs,
                            "meet_of_parts": rhs,
                        }
                        break
                if not equality:
                    break
            if not equality:
                break
        if not equality:
            break
    is_terminal = all(len(P.carriers[u]) == 1 for u in P.frame.elements)
    return {
        "equality_for_all_tuples": equality,
        "is_terminal": is_terminal,
        "biconditional_holds": equality == is_terminal,
        "witness": witness,
    }
