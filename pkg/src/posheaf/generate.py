"""Seeded instance generation for the property-test corpus: random frames as
downset lattices, sheaves built from stalks on the join-irreducibles, sampled
orders repaired to the patching laws, natural endomorphisms, and targeted
mutations that each break exactly one named law."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .frames import FiniteFrame, FinitePoset
from .orders import PoSheaf, omega, verify_posheaf
from .report import MalformedInput, RepairFailed
from .sheaves import Presheaf, SheafMorphism, verify_morphism, verify_sheaf

MUTATION_KINDS = (
    "break-POS3",
    "break-naturality",
    "break-distributivity",
    "remove-amalgamation",
    "break-meet-square",
)


@dataclass(frozen=True)
class GenConfig:
    seed: int
    max_opens: int = 6
    max_carrier: int = 3
    mutation: str | None = None

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{salt}:{self.seed}:{self.max_opens}:{self.max_carrier}")


def gen_frame(cfg: GenConfig) -> FiniteFrame:
    """A downset lattice of a random small poset: always a distributive
    lattice, hence a valid frame; deterministic per config."""
    if cfg.max_opens < 1:
        raise MalformedInput("max_opens must be at least 1")
    rng = cfg.rng("frame")
    for _ in range(300):
        k = rng.randint(0, 3)
        rel = [(i, j) for i in range(k) for j in range(k) if i != j and rng.random() < 0.4]
        # force a partial order by keeping only i<j edges, then closing
        rel = [(i, j) for (i, j) in rel if i < j]
        below = {j: {j} for j in range(k)}
        changed = True
        while changed:
            changed = False
            for i, j in rel:
                add = below[i] | {i}
                if not add <= below[j]:
                    below[j] |= add
                    changed = True
        downsets = []
        for mask in range(1 << k):
            members = {i for i in range(k) if mask >> i & 1}
            if all(below[j] - {j} <= members for j in members):
                downsets.append(frozenset(members))
        if not 1 <= len(downsets) <= cfg.max_opens:
            continue
        downsets.sort(key=lambda d: (len(d), sorted(d)))
        names = {d: f"o{i}" for i, d in enumerate(downsets)}
        pairs = [(names[a], names[b]) for a in downsets for b in downsets if a <= b]
        return FiniteFrame(FinitePoset([names[d] for d in downsets], pairs, closed=True))
    raise RepairFailed(f"no frame of at most {cfg.max_opens} opens found for seed {cfg.seed}")


def _join_irreducibles(X: FiniteFrame) -> list:
    out = []
    for j in X.elements:
        if j == X.bottom:
            continue
        strictly_below = [v for v in X.down(j) if v != j]
        lower_covers = [v for v in strictly_below if not any(X.poset.lt(v, w) for w in strictly_below)]
        if len(lower_covers) == 1:
            out.append(j)
    return out


def _stalks(X: FiniteFrame, cfg: GenConfig, rng: random.Random) -> dict:
    """Germ tables on the join-irreducible subposet: each germ is a coherent
    value assignment on the irreducibles below its home, so restriction is
    plain sub-dict extraction and functoriality is automatic."""
    J = sorted(_join_irreducibles(X), key=lambda j: (len(X.down(j)), X.index[j]))
    values = list(range(cfg.max_carrier + 1))
    stalks: dict = {}
    for j in J:
        lower = [j2 for j2 in J if X.leq(j2, j) and j2 != j]
        maximal_lower = [j2 for j2 in lower if not any(X.poset.lt(j2, j3) for j3 in lower)]
        bases = []
        if maximal_lower:
            for combo in itertools.product(*(stalks[j2] for j2 in maximal_lower)):
                merged: dict = {}
                ok = True
                for germ in combo:
                    for key, val in germ:
                        if merged.get(key, val) != val:
                            ok = False
                            break
                        merged[key] = val
                    if not ok:
                        break
                if ok:
                    bases.append(merged)
            if not bases:
                stalks[j] = []
                continue
        else:
            bases = [{}]
        candidates = []
        for base in bases:
            for v in values:
                germ = dict(base)
                germ[j] = v
                candidates.append(tuple(sorted(germ.items())))
        candidates = sorted(set(candidates))
        size = min(len(candidates), rng.randint(1, cfg.max_carrier))
        stalks[j] = sorted(rng.sample(candidates, size))
    return stalks


def gen_sheaf(X: FiniteFrame, cfg: GenConfig) -> Presheaf:
    """Carriers at join-irreducibles, completed to every open by compatible
    families; the sheaf axiom holds by construction and is re-verified."""
    rng = cfg.rng("sheaf")
    J = sorted(_join_irreducibles(X), key=lambda j: (len(X.down(j)), X.index[j]))
    stalks = _stalks(X, cfg, rng)

    def families(u):
        lower = [j for j in J if X.leq(j, u)]
        maximal = [j for j in lower if not any(X.poset.lt(j, j2) for j2 in lower)]
        if not maximal:
            return [tuple()]
        out = []
        for combo in itertools.product(*(stalks[j] for j in maximal)):
            merged: dict = {}
            ok = True
            for germ in combo:
                for key, val in germ:
                    if merged.get(key, val) != val:
                        ok = False
                        break
                    merged[key] = val
                if not ok:
                    break
            if ok:
                out.append(tuple(sorted(merged.items())))
        return sorted(set(out))

    raw_carriers = {u: families(u) for u in X.elements}
    # keep composite carriers at desk scale: trim the largest stalk until the
    # biggest product of stalks stays small
    while max(len(c) for c in raw_carriers.values()) > 12:
        largest = max(
            (j for j in stalks if len(stalks[j]) > 1),
            key=lambda j: (len(stalks[j]), X.index[j]),
            default=None,
        )
        if largest is None:
            break
        stalks[largest] = stalks[largest][:-1]
        raw_carriers = {u: families(u) for u in X.elements}
    labels = {u: {fam: f"e{i}" for i, fam in enumerate(raw_carriers[u])} for u in X.elements}
    carriers = {u: tuple(labels[u][fam] for fam in raw_carriers[u]) for u in X.elements}
    res = {}
    for u in X.elements:
        keep_sets = {v: {j for j in J if X.leq(j, v)} for v in X.down(u)}
        for v in X.down(u):
            if v == u:
                continue
            table = {}
            for fam in raw_carriers[u]:
                sub = tuple(sorted((k, val) for k, val in fam if k in keep_sets[v]))
                table[labels[u][fam]] = labels[v][sub]
            res[(u, v)] = table
    sheaf = Presheaf(X, carriers, res)
    cert = verify_sheaf(sheaf)
    if not cert.passed:
        raise RepairFailed(f"generated carrier system violated the sheaf axiom: {cert.witness}")
    return sheaf


def _order_closure(F: Presheaf, orders: dict) -> dict:
    """Transitive closure per open, then push down restrictions and pull up
    patched pairs, to fixpoint."""
    frame = F.frame
    rel = {u: set(orders.get(u, ())) | {(x, x) for x in F.carriers[u]} for u in frame.elements}
    changed = True
    while changed:
        changed = False
        for u in frame.elements:
            for (x, y) in list(rel[u]):
                for (y2, z) in list(rel[u]):
                    if y2 == y and (x, z) not in rel[u]:
                        rel[u].add((x, z))
                        changed = True
        for u in frame.elements:
            for v in frame.down(u):
                if v == u:
                    continue
                for (x, y) in list(rel[u]):
                    pair = (F.restrict(u, x, v), F.restrict(u, y, v))
                    if pair not in rel[v]:
                        rel[v].add(pair)
                        changed = True
        for u in frame.elements:
            for cover in frame.covers(u):
                for s in F.carriers[u]:
                    for t in F.carriers[u]:
                        if (s, t) in rel[u]:
                            continue
                        if all(
                            (F.restrict(u, s, ui), F.restrict(u, t, ui)) in rel[ui] for ui in cover
                        ):
                            rel[u].add((s, t))
                            changed = True
    return rel


def gen_posheaf(X: FiniteFrame, cfg: GenConfig) -> PoSheaf:
    """A verified posheaf: sampled per-open orders repaired by closure, with
    deterministic resampling when antisymmetry cannot be repaired."""
    sheaf = gen_sheaf(X, cfg)
    for attempt in range(30):
        rng = cfg.rng(f"orders:{attempt}")
        density = 0.35 * (0.7 ** attempt)
        sampled = {}
        for u in X.elements:
            ranked = list(sheaf.carriers[u])
            rng.shuffle(ranked)
            rank = {x: i for i, x in enumerate(ranked)}
            sampled[u] = [
                (x, y)
                for x in sheaf.carriers[u]
                for y in sheaf.carriers[u]
                if x != y and rank[x] < rank[y] and rng.random() < density
            ]
        rel = _order_closure(sheaf, sampled)
        if any(
            x != y and (x, y) in rel[u] and (y, x) in rel[u]
            for u in X.elements
            for (x, y) in rel[u]
        ):
            continue
        F = PoSheaf(sheaf, {u: sorted(rel[u]) for u in X.elements})
        report = verify_posheaf(F)
        if report.passed:
            return F
    raise RepairFailed(f"order repair failed for seed {cfg.seed}")


def gen_endomorphism(F: PoSheaf, cfg: GenConfig, *, cap: int = 400) -> SheafMorphism:
    """A natural endomorphism of the underlying sheaf, sampled uniformly from
    a deterministic enumeration (capped)."""
    rng = cfg.rng("endo")
    sheaf = F.sheaf
    frame = F.frame
    # bottom-up over opens, element by element: every naturality constraint
    # looks only downward, at values already assigned
    opens = sorted(frame.elements, key=lambda u: (len(frame.down(u)), frame.index[u]))
    pairs = [(u, x) for u in opens for x in sheaf.carriers[u]]
    found: list[dict] = []
    assigned: dict = {}

    def rec(i):
        if len(found) >= cap:
            return
        if i == len(pairs):
            table: dict = {u: {} for u in frame.elements}
            for (u, x), y in assigned.items():
                table[u][x] = y
            found.append(table)
            return
        u, x = pairs[i]
        for y in sheaf.carriers[u]:
            if all(
                sheaf.restrict(u, y, v) == assigned[(v, sheaf.restrict(u, x, v))]
                for v in frame.down(u)
                if v != u
            ):
                assigned[(u, x)] = y
                rec(i + 1)
                del assigned[(u, x)]

    rec(0)
    chosen = rng.choice(found)
    alpha = SheafMorphism(sheaf, sheaf, chosen)
    if not verify_morphism(alpha).passed:
        raise RepairFailed("enumerated endomorphism failed naturality")
    return alpha


def gen_frame_morphism(X: FiniteFrame, cfg: GenConfig) -> tuple[PoSheaf, SheafMorphism]:
    """A frame-sheaf endomorphism fixture: the identity on the subobject
    classifier of a generated frame (mutation target for the meet square)."""
    Om = omega(X)
    return Om, SheafMorphism.identity(Om.sheaf)


def _pentagon(names: list[str]) -> FiniteFrame:
    a, b, c, d, e = names
    pairs = [(a, b), (b, d), (d, e), (a, c), (c, e)]
    return FiniteFrame.from_relation(names, pairs)


def mutate(instance, kind: str, cfg: GenConfig | None = None):
    """Inject exactly one named violation; the mutant fails its targeted check
    and nothing earlier (verified before returning)."""
    cfg = cfg or GenConfig(seed=0)
    if kind not in MUTATION_KINDS:
        raise MalformedInput(f"unknown mutation kind {kind!r}")
    if kind == "break-distributivity":
        if not isinstance(instance, FiniteFrame):
            raise MalformedInput("break-distributivity applies to frames")
        base = [str(x) for x in instance.elements][:5]
        while len(base) < 5:
            base.append(f"n{len(base)}")
        if len(set(base)) < 5:
            base = [f"n{i}" for i in range(5)]
        return _pentagon(base)
    if kind == "break-POS3":
        return _mutate_break_pos3(instance)
    if kind == "remove-amalgamation":
        return _mutate_remove_amalgamation(instance)
    if kind == "break-naturality":
        return _mutate_break_naturality(instance)
    if kind == "break-meet-square":
        return _mutate_break_meet_square(instance, cfg)
    raise MalformedInput(kind)


def _mutate_break_pos3(F: PoSheaf) -> PoSheaf:
    frame = F.frame
    for u in frame.elements:
        proper_covers = [c for c in frame.covers(u) if u not in c and c]
        if not proper_covers:
            continue
        for (s, t) in sorted(
            F.orders[u],
            key=lambda p: (F.sheaf.section_key(u, p[0]), F.sheaf.section_key(u, p[1])),
        ):
            if s == t:
                continue
            # must be a covering pair of the order at u: no strict intermediate
            if any(
                m not in (s, t) and F.leq(u, s, m) and F.leq(u, m, t) for m in F.carrier(u)
            ):
                continue
            # some proper cover must witness the patching premise
            if not any(
                all(F.leq(ui, F.sheaf.restrict(u, s, ui), F.sheaf.restrict(u, t, ui)) for ui in cov)
                for cov in proper_covers
            ):
                continue
            # no higher pair may restrict onto (s, t), or POS2 would break first
            if any(
                F.sheaf.restrict(w, a, u) == s and F.sheaf.restrict(w, b, u) == t
                for w in frame.up(u)
                if w != u
                for (a, b) in F.orders[w]
            ):
                continue
            orders = {v: set(F.orders[v]) for v in frame.elements}
            orders[u].discard((s, t))
            mutant = PoSheaf(F.sheaf, {v: sorted(orders[v]) for v in frame.elements})
            report = verify_posheaf(mutant)
            by_name = {r.name: r for r in report.subreports}
            if (
                not report.passed
                and by_name["posheaf.POS1"].passed
                and by_name["posheaf.POS2"].passed
                and not by_name["posheaf.POS3"].passed
            ):
                return mutant
    raise RepairFailed("no POS3-breakable pair found")


def _mutate_remove_amalgamation(instance) -> object:
    F = instance if isinstance(instance, PoSheaf) else None
    sheaf = F.sheaf if F is not None else instance
    frame = sheaf.frame
    top = frame.top
    proper_covers = [c for c in frame.covers(top) if top not in c and c]
    if not proper_covers:
        raise RepairFailed("the top open has no proper cover")
    for x in sheaf.carriers[top]:
        carriers = {u: tuple(sheaf.carriers[u]) for u in frame.elements}
        carriers[top] = tuple(y for y in sheaf.carriers[top] if y != x)
        res = {}
        for u in frame.elements:
            for v in frame.down(u):
                if v == u:
                    continue
                res[(u, v)] = {
                    y: sheaf.restrict(u, y, v) for y in carriers[u]
                }
        mutant_sheaf = Presheaf(frame, carriers, res)
        if not mutant_sheaf.verify().passed:
            continue
        cert = verify_sheaf(mutant_sheaf)
        if cert.passed or cert.witness.get("amalgamations") != 0:
            continue
        if F is None:
            return mutant_sheaf
        orders = {
            u: [
                (a, b)
                for (a, b) in F.orders[u]
                if a in set(carriers[u]) and b in set(carriers[u])
            ]
            for u in frame.elements
        }
        return PoSheaf(mutant_sheaf, orders)
    raise RepairFailed("no removable amalgamation at the top open")


def _mutate_break_naturality(instance) -> SheafMorphism:
    F, alpha = instance
    sheaf = alpha.source
    frame = sheaf.frame
    for u in frame.elements:
        below = [v for v in frame.down(u) if v != u]
        if not below:
            continue
        for x in sheaf.carriers[u]:
            for y in sheaf.carriers[u]:
                if y == alpha(u, x):
                    continue
                maps = {w: dict(alpha.maps[w]) for w in frame.elements}
                maps[u][x] = y
                mutant = SheafMorphism(sheaf, alpha.target, maps)
                if not verify_morphism(mutant).passed:
                    return mutant
    raise RepairFailed("no naturality-breaking redirection found")


def _mutate_break_meet_square(instance, cfg: GenConfig) -> tuple[PoSheaf, SheafMorphism]:
    Om, _ = instance
    frame = Om.frame
    rng = cfg.rng("meet-square")
    candidates = [c for c in frame.elements if c != frame.top]
    if not candidates:
        raise RepairFailed("one-element frame has no meet-square breaker")
    c = rng.choice(sorted(candidates, key=frame.index.__getitem__))
    shrink = SheafMorphism(
        Om.sheaf,
        Om.sheaf,
        {u: {w: frame.meet(w, c) for w in Om.carrier(u)} for u in frame.elements},
    )
    return Om, shrink
