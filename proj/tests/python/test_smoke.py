import math

import pytest

import kolmo


def abs_func(scale=1.0):
    return kolmo.PolyhedralFunc([[scale, 0.0], [-scale, 0.0]], [0.0, 0.0])


def test_prox_of_abs_shrinks_towards_kink():
    f = abs_func(0.5)
    r = kolmo.prox(f, [2.0, 1.0])
    assert r.y == pytest.approx([1.5, 1.0], abs=1e-12)
    assert r.differentiable
    inside = kolmo.prox(f, [0.3, -1.0])
    assert inside.y == pytest.approx([0.0, -1.0], abs=1e-12)
    assert not inside.differentiable


def test_prox_agrees_with_grid_oracle():
    f = kolmo.PolyhedralFunc([[0.3, 0.1], [-0.2, 0.25], [0.0, -0.4]], [0.0, 0.05, -0.02])
    x = [0.17, -0.08]
    y = kolmo.prox(f, x).y
    z = kolmo.prox_oracle(f, x, radius=1.0)
    assert math.dist(y, z) < 1e-4


def test_classical_strip_membership_and_merge():
    a = kolmo.GenStrip.classical([1.0, 0.0], 0.0, 0.2)
    b = kolmo.GenStrip.classical([0.0, 1.0], 0.5, 0.1)
    assert a.width_bound == pytest.approx(0.2)
    assert a.contains([0.05, 3.0]) and not a.contains([0.2, 0.0])
    m = kolmo.merge(a, b)
    assert m.width_bound <= a.width_bound + b.width_bound + 1e-12
    for p in ([0.05, 3.0], [4.0, 0.52], [0.0, 0.5]):
        assert m.contains(p)


def test_json_round_trip():
    f = abs_func(0.25)
    g = kolmo.PolyhedralFunc.from_json(f.to_json())
    assert len(g) == len(f) and g.lip == f.lip
    with pytest.raises(kolmo.ParseError):
        kolmo.PolyhedralFunc.from_json({"dim": 2, "pieces": []})


def test_dimension_errors_raise_precondition():
    with pytest.raises(kolmo.PreconditionError):
        kolmo.prox(abs_func(), [1.0, 2.0, 3.0])


def test_ball_cover_contains_shell():
    res = kolmo.ball_cover([0.0, 0.0], 1.0, r=0.1, eps=0.05, samples=2000)
    assert res.violations == 0
    s = res.strips[0]
    for k in range(16):
        t = 2 * math.pi * k / 16
        assert s.contains([1.05 * math.cos(t), 1.05 * math.sin(t)])


def test_radial_cover_bound():
    res = kolmo.radial_cover([(0.5, 0.6), (1.0, 1.05)], eps=0.01)
    assert res.total_width_bound <= 2 * (0.1 + 0.05) + 2 * 2 * 0.01 + 1e-12


def test_pipeline_square_passes():
    run = kolmo.run_pipeline("square", eps=0.1, strategy="grid-lines", samples=2000)
    assert run.passed, run.report["failures"]
    rep = run.report
    assert rep["merged"]["lip"] <= 0.1
    assert rep["displacement"]["max"] <= 0.1 + 1e-9
    y = run.map([0.5, 0.5])
    assert math.dist(y, [0.5, 0.5]) <= 0.1 + 1e-9


def test_budget_error_reports_minimum():
    with pytest.raises(kolmo.BudgetError) as info:
        kolmo.merge_all([kolmo.GenStrip.classical([1.0, 0.0], 0.1 * k, 0.01) for k in range(40)], cap=4)
    assert info.value.minimum_budget > 4


def test_render_svg_reports_regions():
    svg, stats = kolmo.render_svg(abs_func(1.0), [-2.0, -2.0], [2.0, 2.0], resolution=40)
    assert svg.startswith("<svg") or "<svg" in svg[:200]
    assert stats["strip_regions"] >= 1
