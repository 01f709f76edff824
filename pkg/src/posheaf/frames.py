"""Finite frames (lattices of opens), frame homomorphisms, and adjoint
computation on finite posets.

Everything downstream consumes these: opens are identified by user-supplied
strings, iteration order is the input order, and all values are immutable
after construction.
"""
from __future__ import annotations

from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .report import (
    CheckReport,
    DomainMismatch,
    MalformedInput,
    NotAPoset,
    NotALattice,
    NotDistributive,
    NotMonotone,
    timed,
)


def _closure(elements: Sequence, pairs: Iterable[tuple]) -> frozenset:
    """Reflexive-transitive closure of a relation given as (lo, hi) pairs."""
    idx = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    below = [set() for _ in range(n)]  # below[j] = {i : i <= j}
    for lo, hi in pairs:
        if lo not in idx or hi not in idx:
            raise MalformedInput(f"relation mentions unknown element: {(lo, hi)!r}")
        below[idx[hi]].add(idx[lo])
    for i in range(n):
        below[i].add(i)
    changed = True
    while changed:
        changed = False
        for j in range(n):
            extra = set()
            for i in below[j]:
                extra |= below[i]
            if not extra <= below[j]:
                below[j] |= extra
                changed = True
    return frozenset((elements[i], elements[j]) for j in range(n) for i in below[j])


class FinitePoset:
    """Finite partial order; element iteration order is the construction order."""

    def __init__(self, elements: Sequence[Hashable], leq_pairs: Iterable[tuple], *, closed: bool = False):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise MalformedInput("duplicate elements")
        self.index = {x: i for i, x in enumerate(self.elements)}
        if closed:
            rel = frozenset(leq_pairs) | frozenset((x, x) for x in self.elements)
        else:
            rel = _closure(self.elements, leq_pairs)
        self._rel = rel
        self._uppers = {x: frozenset(y for y in self.elements if (x, y) in rel) for x in self.elements}
        self._lowers = {x: frozenset(y for y in self.elements if (y, x) in rel) for x in self.elements}

    def __contains__(self, x) -> bool:
        return x in self.index

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, x, y) -> bool:
        return (x, y) in self._rel

    def lt(self, x, y) -> bool:
        return x != y and (x, y) in self._rel

    def pairs(self) -> frozenset:
        return self._rel

    def up(self, x) -> frozenset:
        return self._uppers[x]

    def down(self, x) -> frozenset:
        return self._lowers[x]

    def sorted(self, xs: Iterable) -> list:
        return sorted(xs, key=self.index.__getitem__)

    def opposite(self) -> "FinitePoset":
        return FinitePoset(self.elements, [(y, x) for (x, y) in self._rel], closed=True)

    def minimal(self, subset: Iterable) -> list:
        xs = self.sorted(subset)
        return [m for m in xs if not any(self.lt(o, m) for o in xs)]

    def maximal(self, subset: Iterable) -> list:
        xs = self.sorted(subset)
        return [m for m in xs if not any(self.lt(m, o) for o in xs)]

    def least(self, subset: Iterable):
        """The unique minimum of subset, or None."""
        mins = self.minimal(subset)
        if len(mins) == 1 and all(self.leq(mins[0], x) for x in subset):
            return mins[0]
        return None

    def greatest(self, subset: Iterable):
        maxs = self.maximal(subset)
        if len(maxs) == 1 and all(self.leq(x, maxs[0]) for x in subset):
            return maxs[0]
        return None

    def join(self, x, y):
        return self.least(self._uppers[x] & self._uppers[y])

    def meet(self, x, y):
        return self.greatest(self._lowers[x] & self._lowers[y])

    def join_all(self, xs: Iterable):
        """Least upper bound of a subset; for the empty set, the global bottom."""
        uppers = set(self.elements)
        for x in xs:
            uppers &= self._uppers[x]
        return self.least(uppers)

    def meet_all(self, xs: Iterable):
        lowers = set(self.elements)
        for x in xs:
            lowers &= self._lowers[x]
        return self.greatest(lowers)

    @cached_property
    def bottom(self):
        return self.join_all(())

    @cached_property
    def top(self):
        return self.meet_all(())

    def verify(self) -> CheckReport:
        """Reflexivity, antisymmetry, transitivity, with the first witness found."""
        for x in self.elements:
            if not self.leq(x, x):
                return CheckReport.fail("poset.reflexive", {"element": x})
        for x in self.elements:
            for y in self.elements:
                if x != y and self.leq(x, y) and self.leq(y, x):
                    return CheckReport.fail("poset.antisymmetric", {"cycle": [x, y]})
        for x in self.elements:
            for y in self._uppers[x]:
                for z in self._uppers[y]:
                    if not self.leq(x, z):
                        return CheckReport.fail("poset.transitive", {"chain": [x, y, z]})
        return CheckReport.ok("poset")


class FiniteFrame:
    """Finite distributive lattice of opens with derived join/meet/Heyting tables.

    Build with close_and_verify_frame (or from_relation + verify); operations
    assume the frame laws hold.
    """

    def __init__(self, poset: FinitePoset):
        self.poset = poset
        self.elements = poset.elements
        self.index = poset.index
        self._join_cache: dict = {}
        self._meet_cache: dict = {}
        self._heyting_cache: dict = {}
        self._covers_cache: dict = {}

    @classmethod
    def from_relation(cls, elements: Sequence[str], pairs: Iterable[tuple]) -> "FiniteFrame":
        if not elements:
            raise MalformedInput("elements must be nonempty")
        return cls(FinitePoset(elements, pairs))

    def __contains__(self, x) -> bool:
        return x in self.index

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, x, y) -> bool:
        return self.poset.leq(x, y)

    def down(self, u) -> list:
        return self.poset.sorted(self.poset.down(u))

    def up(self, u) -> list:
        return self.poset.sorted(self.poset.up(u))

    @cached_property
    def bottom(self):
        b = self.poset.bottom
        if b is None:
            raise NotALattice("no bottom element")
        return b

    @cached_property
    def top(self):
        t = self.poset.top
        if t is None:
            raise NotALattice("no top element")
        return t

    def join(self, x, y):
        key = (x, y)
        if key not in self._join_cache:
            self._join_cache[key] = self.poset.join(x, y)
        return self._join_cache[key]

    def meet(self, x, y):
        key = (x, y)
        if key not in self._meet_cache:
            self._meet_cache[key] = self.poset.meet(x, y)
        return self._meet_cache[key]

    def join_all(self, xs: Iterable):
        out = self.bottom
        for x in xs:
            out = self.join(out, x)
            if out is None:
                return None
        return out

    def meet_all(self, xs: Iterable):
        out = self.top
        for x in xs:
            out = self.meet(out, x)
            if out is None:
                return None
        return out

    def heyting(self, x, y):
        """Largest z with z ∧ x ≤ y; total on verified frames."""
        key = (x, y)
        if key not in self._heyting_cache:
            zs = [z for z in self.elements if self.leq(self.meet(z, x), y)]
            self._heyting_cache[key] = self.poset.greatest(zs)
        return self._heyting_cache[key]

    def covers(self, u) -> tuple:
        """All subsets S of the downset of u with join S = u (the empty cover
        only covers bottom); ordered by (size, element indices)."""
        if u not in self._covers_cache:
            below = self.down(u)
            found = []
            for mask in range(1 << len(below)):
                subset = tuple(below[i] for i in range(len(below)) if mask >> i & 1)
                if self.join_all(subset) == u:
                    found.append(subset)
            found.sort(key=lambda s: (len(s), tuple(self.index[x] for x in s)))
            self._covers_cache[u] = tuple(found)
        return self._covers_cache[u]

    def subframe(self, u) -> "FiniteFrame":
        """The open sublocale frame on the downset of u."""
        below = self.down(u)
        keep = set(below)
        rel = [(x, y) for (x, y) in self.poset.pairs() if x in keep and y in keep]
        return FiniteFrame(FinitePoset(below, rel, closed=True))

    @timed
    def verify(self) -> CheckReport:
        """Frame laws in order: poset, lattice (pairs + bounds), distributivity,
        Heyting existence. First violated law wins, with its witness."""
        p = self.poset.verify()
        if not p.passed:
            return CheckReport.fail("frame.poset", p.witness, law=p.name)
        if self.poset.bottom is None:
            return CheckReport.fail("frame.lattice", {"missing": "bottom"})
        if self.poset.top is None:
            return CheckReport.fail("frame.lattice", {"missing": "top"})
        for x in self.elements:
            for y in self.elements:
                if self.join(x, y) is None:
                    return CheckReport.fail("frame.lattice", {"pair": [x, y], "missing": "join"})
                if self.meet(x, y) is None:
                    return CheckReport.fail("frame.lattice", {"pair": [x, y], "missing": "meet"})
        for a in self.elements:
            for b in self.elements:
                for c in self.elements:
                    lhs = self.meet(a, self.join(b, c))
                    rhs = self.join(self.meet(a, b), self.meet(a, c))
                    if lhs != rhs:
                        return CheckReport.fail(
                            "frame.distributive",
                            {"triple": [a, b, c], "lhs": lhs, "rhs": rhs},
                        )
        for x in self.elements:
            for y in self.elements:
                if self.heyting(x, y) is None:
                    return CheckReport.fail("frame.heyting", {"pair": [x, y]})
        return CheckReport.ok("frame", elements=len(self.elements))


def close_and_verify_frame(elements: Sequence[str], pairs: Iterable[tuple]) -> tuple[FiniteFrame | None, CheckReport]:
    """Close the generating relation and verify the frame laws.

    Returns (frame, report) on success and (None, report) naming the first
    violated law with its witness.
    """
    frame = FiniteFrame.from_relation(elements, pairs)
    report = frame.verify()
    return (frame if report.passed else None, report)


def build_frame(elements: Sequence[str], pairs: Iterable[tuple]) -> FiniteFrame:
    """close_and_verify_frame that raises the matching error on failure."""
    frame, report = close_and_verify_frame(elements, pairs)
    if frame is not None:
        return frame
    exc = {
        "frame.poset": NotAPoset,
        "frame.lattice": NotALattice,
        "frame.distributive": NotDistributive,
        "frame.heyting": NotALattice,
    }[report.name]
    raise exc(report.name, report=report)


def heyting_implication(frame: FiniteFrame, x, y):
    """max{z : z ∧ x ≤ y} on a verified frame."""
    if x not in frame or y not in frame:
        raise DomainMismatch(f"open not in frame: {x!r}, {y!r}")
    return frame.heyting(x, y)


class FrameHom:
    """Element table between two finite frames, claimed to preserve finite
    meets and arbitrary joins; run verify_frame_hom to certify."""

    def __init__(self, source: FiniteFrame, target: FiniteFrame, mapping: dict):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)

    def __call__(self, x):
        return self.mapping[x]

    def compose(self, other: "FrameHom") -> "FrameHom":
        """self after other (other's target must be self's source)."""
        return FrameHom(other.source, self.target, {x: self(other(x)) for x in other.source.elements})

    @classmethod
    def identity(cls, frame: FiniteFrame) -> "FrameHom":
        return cls(frame, frame, {x: x for x in frame.elements})


_EXHAUSTIVE_JOIN_LIMIT = 12


@timed
def verify_frame_hom(h: FrameHom) -> CheckReport:
    """Finite meets (top and binary) then joins; join subsets are checked
    exhaustively for small sources (witness subset exact) and via the
    equivalent empty+binary criterion for larger ones."""
    src, tgt = h.source, h.target
    for x in src.elements:
        if x not in h.mapping:
            raise DomainMismatch(f"map not total: missing {x!r}")
        if h.mapping[x] not in tgt.index:
            raise DomainMismatch(f"map value outside target: {h.mapping[x]!r}")
    if h(src.top) != tgt.top:
        return CheckReport.fail("frame_hom.finite_meets", {"subset": [], "expected": tgt.top, "got": h(src.top)})
    for x in src.elements:
        for y in src.elements:
            lhs = h(src.meet(x, y))
            rhs = tgt.meet(h(x), h(y))
            if lhs != rhs:
                return CheckReport.fail("frame_hom.finite_meets", {"subset": [x, y], "expected": rhs, "got": lhs})
    if len(src) <= _EXHAUSTIVE_JOIN_LIMIT:
        elems = src.elements
        for mask in range(1 << len(elems)):
            subset = [elems[i] for i in range(len(elems)) if mask >> i & 1]
            lhs = h(src.join_all(subset))
            rhs = tgt.join_all(h(x) for x in subset)
            if lhs != rhs:
                return CheckReport.fail("frame_hom.joins", {"subset": subset, "expected": rhs, "got": lhs})
    else:
        if h(src.bottom) != tgt.bottom:
            return CheckReport.fail("frame_hom.joins", {"subset": [], "expected": tgt.bottom, "got": h(src.bottom)})
        for x in src.elements:
            for y in src.elements:
                lhs = h(src.join(x, y))
                rhs = tgt.join(h(x), h(y))
                if lhs != rhs:
                    return CheckReport.fail("frame_hom.joins", {"subset": [x, y], "expected": rhs, "got": lhs})
    return CheckReport.ok("frame_hom")


class MonotoneMap:
    """Order-preserving element table between finite posets."""

    def __init__(self, source: FinitePoset, target: FinitePoset, mapping: dict):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)

    def __call__(self, x):
        return self.mapping[x]

    @classmethod
    def identity(cls, poset: FinitePoset) -> "MonotoneMap":
        return cls(poset, poset, {x: x for x in poset.elements})

    def verify(self) -> CheckReport:
        for x in self.source.elements:
            if x not in self.mapping:
                raise DomainMismatch(f"map not total: missing {x!r}")
        for x in self.source.elements:
            for y in self.source.elements:
                if self.source.leq(x, y) and not self.target.leq(self(x), self(y)):
                    return CheckReport.fail("monotone", {"pair": [x, y], "images": [self(x), self(y)]})
        return CheckReport.ok("monotone")


def galois_check(left: MonotoneMap, right: MonotoneMap) -> CheckReport:
    """left(b) ≤ a  ⇔  b ≤ right(a), exhaustively over all pairs."""
    A, B = right.source, left.source  # right: A -> B, left: B -> A
    for b in B.elements:
        for a in A.elements:
            lhs = A.leq(left(b), a)
            rhs = B.leq(b, right(a))
            if lhs != rhs:
                return CheckReport.fail("galois", {"pair": [b, a], "left_leq": lhs, "right_leq": rhs})
    return CheckReport.ok("galois")


def left_adjoint(f: MonotoneMap) -> tuple[MonotoneMap | None, CheckReport]:
    """g with g(b) = min{a : b ≤ f(a)} when that minimum exists for every b
    and the pair satisfies the adjunction; otherwise (None, witness report)."""
    mono = f.verify()
    if not mono.passed:
        raise NotMonotone("left_adjoint requires a monotone map", report=mono)
    mapping = {}
    for b in f.target.elements:
        candidates = [a for a in f.source.elements if f.target.leq(b, f(a))]
        m = f.source.least(candidates)
        if m is None:
            return None, CheckReport.fail(
                "left_adjoint.absent",
                {"element": b, "minimal_candidates": f.source.minimal(candidates)},
            )
        mapping[b] = m
    g = MonotoneMap(f.target, f.source, mapping)
    gm = g.verify()
    if not gm.passed:
        return None, CheckReport.fail("left_adjoint.absent", {"not_monotone": gm.witness})
    gc = galois_check(g, f)
    if not gc.passed:
        return None, CheckReport.fail("left_adjoint.absent", {"adjunction": gc.witness})
    return g, CheckReport.ok("left_adjoint")


def right_adjoint(f: MonotoneMap) -> tuple[MonotoneMap | None, CheckReport]:
    """Dual of left_adjoint, computed on the order-opposites."""
    fop = MonotoneMap(f.source.opposite(), f.target.opposite(), f.mapping)
    gop, report = left_adjoint(fop)
    if gop is None:
        report.name = "right_adjoint.absent" if not report.passed else report.name
        return None, report
    return MonotoneMap(f.target, f.source, gop.mapping), CheckReport.ok("right_adjoint")


def preserves_all_meets(f: MonotoneMap) -> bool:
    """f(⋀S) = ⋀f(S) over every subset of the source (finite oracle for the
    left-adjoint existence criterion)."""
    elems = f.source.elements
    for mask in range(1 << len(elems)):
        subset = [elems[i] for i in range(len(elems)) if mask >> i & 1]
        lhs = f.source.meet_all(subset)
        rhs = f.target.meet_all(f(x) for x in subset)
        if lhs is None or rhs is None or f(lhs) != rhs:
            return False
    return True


def frame_iso(A: FiniteFrame, B: FiniteFrame, fixed: dict | None = None) -> dict | None:
    """A frame isomorphism A → B by backtracking with degree-profile pruning;
    None when the search is exhausted. `fixed` pins chosen images."""
    if len(A) != len(B):
        return None

    def profile(frame, x):
        return (len(frame.poset.down(x)), len(frame.poset.up(x)))

    b_by_profile: dict = {}
    for y in B.elements:
        b_by_profile.setdefault(profile(B, y), []).append(y)
    mapping = dict(fixed or {})
    used = set(mapping.values())
    todo = [x for x in A.elements if x not in mapping]

    def consistent(x, y):
        for x2, y2 in mapping.items():
            if A.leq(x, x2) != B.leq(y, y2) or A.leq(x2, x) != B.leq(y2, y):
                return False
        return True

    def rec(i):
        if i == len(todo):
            return True
        x = todo[i]
        for y in b_by_profile.get(profile(A, x), []):
            if y in used or not consistent(x, y):
                continue
            mapping[x] = y
            used.add(y)
            if rec(i + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    if fixed:
        for x, y in fixed.items():
            if profile(A, x) != profile(B, y) or not consistent(x, y):
                return None
    return dict(mapping) if rec(0) else None


def preserves_all_joins(f: MonotoneMap) -> bool:
    elems = f.source.elements
    for mask in range(1 << len(elems)):
        subset = [elems[i] for i in range(len(elems)) if mask >> i & 1]
        lhs = f.source.join_all(subset)
        rhs = f.target.join_all(f(x) for x in subset)
        if lhs is None or rhs is None or f(lhs) != rhs:
            return False
    return True
