"""JSON document formats for every external interface: frames, presheaves
and posheaves, morphisms, frame homs under the base, locales over the base,
and subsheaf parts. Loaders accept inline objects or relative paths."""
from __future__ import annotations

import json
from pathlib import Path

from .frames import FiniteFrame, FrameHom
from .locale_equiv import LocaleOverX
from .orders import PoSheaf
from .report import MalformedInput
from .sheaves import Presheaf, SheafMorphism, SubSheaf


def _as_doc(value, base_dir: Path | None):
    if isinstance(value, str):
        path = Path(value)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            return json.loads(path.read_text()), path.parent
        except OSError as exc:
            raise MalformedInput(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON in {path}: {exc}") from exc
    if isinstance(value, dict):
        return value, base_dir
    raise MalformedInput(f"expected an object or a path, got {type(value).__name__}")


def read_json(path) -> dict:
    doc, _ = _as_doc(str(path), None)
    return doc


def load_frame(doc, base_dir: Path | None = None) -> FiniteFrame:
    doc, _ = _as_doc(doc, base_dir)
    if "elements" not in doc or "leq" not in doc:
        raise MalformedInput("frame document needs 'elements' and 'leq'")
    elements = [str(x) for x in doc["elements"]]
    pairs = [(str(lo), str(hi)) for lo, hi in doc["leq"]]
    return FiniteFrame.from_relation(elements, pairs)


def dump_frame_doc(frame: FiniteFrame, **extra) -> dict:
    pairs = sorted(
        [list(p) for p in frame.poset.pairs() if p[0] != p[1]],
        key=lambda p: (frame.index[p[0]], frame.index[p[1]]),
    )
    doc = {"elements": list(frame.elements), "leq": pairs}
    doc.update(extra)
    return doc


def load_presheaf(doc, base_dir: Path | None = None) -> Presheaf:
    doc, inner = _as_doc(doc, base_dir)
    if "frame" not in doc or "carriers" not in doc:
        raise MalformedInput("presheaf document needs 'frame' and 'carriers'")
    frame = load_frame(doc["frame"], inner)
    carriers = {str(u): tuple(str(x) for x in xs) for u, xs in doc["carriers"].items()}
    unknown = set(carriers) - set(frame.elements)
    if unknown:
        raise MalformedInput(f"carriers mention unknown opens: {sorted(unknown)}")
    res = {}
    for key, table in doc.get("res", {}).items():
        if "->" not in key:
            raise MalformedInput(f"restriction key {key!r} is not of the form 'u->v'")
        u, v = (part.strip() for part in key.split("->", 1))
        res[(u, v)] = {str(x): str(y) for x, y in table.items()}
    return Presheaf(frame, carriers, res)


def load_posheaf(doc, base_dir: Path | None = None) -> PoSheaf:
    doc, inner = _as_doc(doc, base_dir)
    sheaf = load_presheaf(doc, inner)
    orders = {
        str(u): [(str(x), str(y)) for x, y in pairs]
        for u, pairs in doc.get("order", {}).items()
    }
    return PoSheaf(sheaf, orders)


def dump_presheaf_doc(P: Presheaf, **extra) -> dict:
    res = {}
    for (u, v), table in P.res.items():
        if u == v:
            continue
        res[f"{u}->{v}"] = {str(x): str(y) for x, y in table.items()}
    doc = {
        "frame": dump_frame_doc(P.frame),
        "carriers": {u: [str(x) for x in P.carriers[u]] for u in P.frame.elements},
        "res": res,
    }
    doc.update(extra)
    return doc


def dump_posheaf_doc(F: PoSheaf, **extra) -> dict:
    doc = dump_presheaf_doc(F.sheaf)
    doc["order"] = {
        u: sorted(
            [[str(x), str(y)] for (x, y) in F.orders[u] if x != y],
            key=lambda p: (F.sheaf.carriers[u].index(p[0]), F.sheaf.carriers[u].index(p[1])),
        )
        for u in F.frame.elements
    }
    doc.update(extra)
    return doc


def load_morphism(doc, base_dir: Path | None = None) -> tuple[SheafMorphism, PoSheaf, PoSheaf]:
    doc, inner = _as_doc(doc, base_dir)
    for key in ("source", "target", "maps"):
        if key not in doc:
            raise MalformedInput(f"morphism document needs {key!r}")
    source = load_posheaf(doc["source"], inner)
    target = load_posheaf(doc["target"], inner)
    maps = {str(u): {str(x): str(y) for x, y in table.items()} for u, table in doc["maps"].items()}
    return SheafMorphism(source.sheaf, target.sheaf, maps), source, target


def dump_morphism_doc(alpha: SheafMorphism, source: PoSheaf, target: PoSheaf) -> dict:
    return {
        "source": dump_posheaf_doc(source),
        "target": dump_posheaf_doc(target),
        "maps": {
            u: {str(x): str(alpha(u, x)) for x in alpha.source.carriers[u]}
            for u in alpha.source.frame.elements
        },
    }


def load_frame_under_x(doc, base_dir: Path | None = None):
    from .frame_equiv import FrameUnderX

    doc, inner = _as_doc(doc, base_dir)
    for key in ("source", "target", "map"):
        if key not in doc:
            raise MalformedInput(f"frame-hom document needs {key!r}")
    source = load_frame(doc["source"], inner)
    target = load_frame(doc["target"], inner)
    mapping = {str(x): str(y) for x, y in doc["map"].items()}
    missing = set(source.elements) - set(mapping)
    if missing:
        raise MalformedInput(f"frame-hom map missing {sorted(missing)}")
    return FrameUnderX(FrameHom(source, target, mapping))


def dump_frame_under_x_doc(h) -> dict:
    return {
        "source": dump_frame_doc(h.base),
        "target": dump_frame_doc(h.target),
        "map": {str(x): str(h.hom(x)) for x in h.base.elements},
    }


def load_locale(doc, base_dir: Path | None = None) -> LocaleOverX:
    doc, inner = _as_doc(doc, base_dir)
    if "OY" in doc:
        oy = load_frame(doc["OY"], inner)
        base_key = "OX" if "OX" in doc else "base"
        if base_key not in doc:
            raise MalformedInput("locale document needs a base frame ('OX')")
        ox = load_frame(doc[base_key], inner)
    elif "elements" in doc and "fstar" in doc:
        oy = load_frame(doc, inner)
        if "base" not in doc and "OX" not in doc:
            raise MalformedInput("flat locale document needs 'base'")
        ox = load_frame(doc.get("base", doc.get("OX")), inner)
    else:
        raise MalformedInput("locale document needs 'OY'+'fstar' (or a flat frame with 'fstar')")
    if "fstar" not in doc:
        raise MalformedInput("locale document needs 'fstar'")
    mapping = {str(x): str(y) for x, y in doc["fstar"].items()}
    missing = set(ox.elements) - set(mapping)
    if missing:
        raise MalformedInput(f"fstar missing {sorted(missing)}")
    return LocaleOverX(OY=oy, fstar=FrameHom(ox, oy, mapping))


def dump_locale_doc(f: LocaleOverX) -> dict:
    return {
        "OX": dump_frame_doc(f.fstar.source),
        "OY": dump_frame_doc(f.OY),
        "fstar": {str(x): str(f.fstar(x)) for x in f.fstar.source.elements},
    }


def load_subsheaf(F: Presheaf, doc, base_dir: Path | None = None) -> SubSheaf:
    doc, _ = _as_doc(doc, base_dir)
    if "parts" not in doc:
        raise MalformedInput("subsheaf document needs 'parts'")
    parts = {str(u): [str(x) for x in xs] for u, xs in doc["parts"].items()}
    unknown = set(parts) - set(F.frame.elements)
    if unknown:
        raise MalformedInput(f"parts mention unknown opens: {sorted(unknown)}")
    return SubSheaf(F, parts)


def section_orders_from_doc(G, doc) -> dict:
    """Orders over section labels ('s0', 's1', ...) into Section-keyed pairs."""
    orders = {}
    for u, pairs in doc.items():
        if u not in G.sheaf.frame.elements:
            raise MalformedInput(f"section order mentions unknown open {u!r}")
        by_label = {G.sheaf.label(u, s): s for s in G.sheaf.carriers[u]}
        resolved = []
        for x, y in pairs:
            if x not in by_label or y not in by_label:
                raise MalformedInput(f"unknown section label at {u!r}: {(x, y)!r}")
            resolved.append((by_label[x], by_label[y]))
        orders[u] = resolved
    for u in G.sheaf.frame.elements:
        orders.setdefault(u, [])
    return orders
