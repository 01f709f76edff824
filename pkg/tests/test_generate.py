"""Generator determinism and mutation soundness."""
from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from posheaf.frames import close_and_verify_frame
from posheaf.generate import (
    GenConfig,
    gen_endomorphism,
    gen_frame,
    gen_frame_morphism,
    gen_posheaf,
    gen_sheaf,
    mutate,
)
from posheaf.complete import verify_frame_morphism, verify_sup_preserving
from posheaf.orders import verify_order_preserving, verify_posheaf
from posheaf.sheaves import verify_morphism, verify_presheaf, verify_sheaf


def test_one_element_frame():
    X = gen_frame(GenConfig(seed=1, max_opens=1))
    assert len(X.elements) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=99))
def test_generated_frames_are_valid(seed):
    X = gen_frame(GenConfig(seed=seed, max_opens=6))
    _, report = close_and_verify_frame(list(X.elements), list(X.poset.pairs()))
    assert report.passed


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=60))
def test_generated_posheaves_verify(seed):
    cfg = GenConfig(seed=seed, max_opens=6, max_carrier=3)
    X = gen_frame(cfg)
    F = gen_posheaf(X, cfg)
    assert verify_posheaf(F).passed


def test_determinism_byte_identical():
    from posheaf.jsonio import dump_posheaf_doc
    import json

    cfg = GenConfig(seed=7, max_opens=6, max_carrier=3)
    a = gen_posheaf(gen_frame(cfg), cfg)
    b = gen_posheaf(gen_frame(cfg), cfg)
    assert json.dumps(dump_posheaf_doc(a), sort_keys=True) == json.dumps(dump_posheaf_doc(b), sort_keys=True)


def test_mutation_break_distributivity():
    cfg = GenConfig(seed=3)
    X = gen_frame(cfg)
    bad = mutate(X, "break-distributivity", cfg)
    _, report = close_and_verify_frame(list(bad.elements), list(bad.poset.pairs()))
    assert report.name == "frame.distributive"


def _posheaf_for(seed):
    cfg = GenConfig(seed=seed, max_opens=6, max_carrier=3)
    return cfg, gen_posheaf(gen_frame(cfg), cfg)


def test_mutation_break_pos3():
    hit = 0
    for seed in range(40):
        cfg, F = _posheaf_for(seed)
        try:
            mutant = mutate(F, "break-POS3", cfg)
        except Exception:
            continue
        hit += 1
        report = verify_posheaf(mutant)
        by_name = {r.name: r for r in report.subreports}
        assert not report.passed
        assert by_name["posheaf.POS1"].passed and by_name["posheaf.POS2"].passed
        assert not by_name["posheaf.POS3"].passed
        assert by_name["posheaf.agreement"].passed
    assert hit >= 5


def test_mutation_remove_amalgamation():
    hit = 0
    for seed in range(40):
        cfg, F = _posheaf_for(seed)
        try:
            mutant = mutate(F, "remove-amalgamation", cfg)
        except Exception:
            continue
        hit += 1
        assert verify_presheaf(mutant.sheaf).passed
        cert = verify_sheaf(mutant.sheaf)
        assert not cert.passed
        assert cert.witness["amalgamations"] == 0
    assert hit >= 5


def test_mutation_break_naturality():
    hit = 0
    for seed in range(30):
        cfg, F = _posheaf_for(seed)
        alpha = gen_endomorphism(F, cfg)
        assert verify_morphism(alpha).passed
        try:
            mutant = mutate((F, alpha), "break-naturality", cfg)
        except Exception:
            continue
        hit += 1
        assert not verify_morphism(mutant).passed
    assert hit >= 5


def test_mutation_break_meet_square():
    cfg = GenConfig(seed=11, max_opens=6)
    X = gen_frame(cfg)
    if len(X.elements) < 2:
        X = gen_frame(GenConfig(seed=12, max_opens=6))
    Om, ident = gen_frame_morphism(X, cfg)
    Om2, shrink = mutate((Om, ident), "break-meet-square", cfg)
    assert verify_morphism(shrink).passed
    assert verify_order_preserving(shrink, Om2, Om2).passed
    assert verify_sup_preserving(shrink, Om2, Om2).passed
    rep = verify_frame_morphism(shrink, Om2, Om2)
    assert not rep.passed
    meets = [r for r in rep.subreports if r.name == "frame_morphism.finite_meets"][0]
    assert not meets.passed


def test_hundred_seeds_frames_and_posheaves():
    # gen_posheaf verifies its output internally; a RepairFailed or a law
    # violation would raise here
    for seed in range(100):
        cfg = GenConfig(seed=seed, max_opens=6, max_carrier=3)
        X = gen_frame(cfg)
        _, report = close_and_verify_frame(list(X.elements), list(X.poset.pairs()))
        assert report.passed
        F = gen_posheaf(X, cfg)
        assert verify_posheaf(F).passed


def test_budget_env_var(monkeypatch):
    from posheaf.report import Budget

    monkeypatch.setenv("POSH_BUDGET", "123")
    b = Budget.from_env()
    assert b.subsheaves == b.lambda_elements == b.section_nodes == 123
