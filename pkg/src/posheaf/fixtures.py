"""Desk-scale fixture objects shared by the acceptance battery, the CLI, and
the test suite."""
from __future__ import annotations

from .frames import FiniteFrame, FrameHom, build_frame
from .locale_equiv import LocaleOverX
from .orders import PoSheaf
from .sheaves import Presheaf


def frame_2() -> FiniteFrame:
    return build_frame(["0", "1"], [("0", "1")])


def frame_3() -> FiniteFrame:
    return build_frame(["0", "a", "1"], [("0", "a"), ("a", "1")])


def frame_d() -> FiniteFrame:
    return build_frame(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])


def frame_6() -> FiniteFrame:
    els = ["0", "x", "z", "xz", "xy", "1"]
    rel = [("0", "x"), ("0", "z"), ("x", "xz"), ("z", "xz"), ("x", "xy"), ("xy", "1"), ("xz", "1")]
    return build_frame(els, rel)


FIXTURE_FRAMES = {
    "FRAME_2": frame_2,
    "FRAME_3": frame_3,
    "FRAME_D": frame_d,
    "FRAME_6": frame_6,
}


def sheaf_ab(frame: FiniteFrame | None = None) -> Presheaf:
    """Two stalks over a, one over b, pairs on top of the diamond."""
    fd = frame or frame_d()
    carriers = {"0": ("*",), "a": ("x", "y"), "b": ("z",), "1": ("xz", "yz")}
    res = {
        ("a", "0"): {"x": "*", "y": "*"},
        ("b", "0"): {"z": "*"},
        ("1", "0"): {"xz": "*", "yz": "*"},
        ("1", "a"): {"xz": "x", "yz": "y"},
        ("1", "b"): {"xz": "z", "yz": "z"},
    }
    return Presheaf(fd, carriers, res)


def posheaf_ab(frame: FiniteFrame | None = None) -> PoSheaf:
    """sheaf_ab with x < y at a; the top order is forced by patching."""
    sheaf = sheaf_ab(frame)
    return PoSheaf(sheaf, {"a": [("x", "y")], "1": [("xz", "yz")]})


def m3_posheaf() -> PoSheaf:
    """Complete posheaf on the 3-chain with the non-distributive diamond M3 on
    top: complete but not a frame sheaf."""
    f3 = frame_3()
    carriers = {"0": ("*",), "a": ("s",), "1": ("bo", "p", "q", "r", "to")}
    res = {
        ("a", "0"): {"s": "*"},
        ("1", "0"): {c: "*" for c in carriers["1"]},
        ("1", "a"): {c: "s" for c in carriers["1"]},
    }
    orders = {
        "1": [("bo", "p"), ("bo", "q"), ("bo", "r"), ("p", "to"), ("q", "to"), ("r", "to"), ("bo", "to")],
    }
    return PoSheaf(Presheaf(f3, carriers, res), orders)


def identity_locale(X: FiniteFrame) -> LocaleOverX:
    return LocaleOverX(OY=X, fstar=FrameHom.identity(X))


def open_inclusion(X: FiniteFrame, a) -> LocaleOverX:
    down_a = X.subframe(a)
    return LocaleOverX(OY=down_a, fstar=FrameHom(X, down_a, {x: X.meet(x, a) for x in X.elements}))


def three_chain_over_2() -> LocaleOverX:
    """The designated non-local-homeomorphism fixture."""
    X = frame_2()
    Y = build_frame(["0", "m", "1"], [("0", "m"), ("m", "1")])
    return LocaleOverX(OY=Y, fstar=FrameHom(X, Y, {"0": "0", "1": "1"}))


def sections_free_locale() -> LocaleOverX:
    """No sections above bottom although O(Y) has two opens: not spatial."""
    X = frame_3()
    Y = frame_2()
    return LocaleOverX(OY=Y, fstar=FrameHom(X, Y, {"0": "0", "a": "0", "1": "1"}))
