import json
import os
import re
import subprocess

import pytest

KOLMO = os.environ.get("KOLMO_CLI", "kolmo")

FIGURE = {
    "dim": 2,
    "name": "figure",
    "pieces": [
        {"gradient": [0, 1], "offset": 0},
        {"gradient": [0, -2], "offset": 0},
        {"gradient": [1, -1], "offset": -4},
        {"gradient": [-2, 1], "offset": -4},
    ],
}


def run(*args, check=None):
    proc = subprocess.run([KOLMO, *map(str, args)], capture_output=True, text=True, timeout=600)
    if check is not None:
        assert proc.returncode == check, proc.stderr
    return proc


def write(path, obj):
    path.write_text(json.dumps(obj))
    return path


def slab(normal, center, width):
    # |<v, x> + c| with v = (w/2) n, c = -(w/2) b
    h = width / 2
    return {"dim": 2, "pieces": [{"gradient": [h * n for n in normal], "offset": -h * center},
                                 {"gradient": [-h * n for n in normal], "offset": h * center}]}


def test_prox_reports_active_set(tmp_path):
    f = write(tmp_path / "f.json", FIGURE)
    out = json.loads(run("prox", "--func", f, "--x", "-3,0", check=0).stdout)
    assert out["differentiable"] is False
    y = out["y"]
    # (-3, 0) lies in the left dark triangle, which collapses to the corner point.
    other = json.loads(run("prox", "--func", f, "--x", "-2.5,0.5", check=0).stdout)["y"]
    assert max(abs(a - b) for a, b in zip(y, other)) < 1e-9


def test_member_and_oracle(tmp_path):
    f = write(tmp_path / "f.json", FIGURE)
    assert json.loads(run("member", "--func", f, "--x", "0,0.5", check=0).stdout)["member"] is True
    assert json.loads(run("member", "--func", f, "--x", "0,3", check=0).stdout)["member"] is False
    out = json.loads(run("oracle", "--func", f, "--x", "1,0.3", "--radius", "3", check=0).stdout)
    assert out["distance"] <= 1e-4


def test_merge_contains_both_slabs(tmp_path):
    a = write(tmp_path / "a.json", slab([0, 1], 9, 2))
    b = write(tmp_path / "b.json", slab([0, 1], 1, 2))
    out = tmp_path / "m.json"
    run("merge", a, b, "--out", out, check=0)
    m = json.loads(out.read_text())
    for y in (8.5, 9.5, 0.5, 1.5):
        assert json.loads(run("member", "--func", out, "--x", f"3,{y}", check=0).stdout)["member"]
    lip = max(sum(g * g for g in p["gradient"]) ** 0.5 for p in m["pieces"])
    assert lip <= 2.0 + 1e-12


def test_cover_convex_disk_width(tmp_path):
    out = tmp_path / "c.json"
    run("cover", "convex", "--set", "disk:r=1", "--r", "0.1", "--eps", "0.05", "--out", out, check=0)
    c = json.loads(out.read_text())
    assert c["claimed_width_bound"] <= 2 * (0.1 + 0.05)
    assert c["violations"] == 0
    verify = json.loads(run("verify", "--cover", out, "--set", "disk:r=1", check=0).stdout)
    assert verify["violations"] == 0


def test_understated_cover_is_rejected(tmp_path):
    out = tmp_path / "c.json"
    run("cover", "convex", "--set", "square", "--r", "0.1", "--eps", "0.05", "--out", out, check=0)
    c = json.loads(out.read_text())
    c["claimed_width_bound"] *= 0.5
    bad = write(tmp_path / "bad.json", c)
    assert run("verify", "--cover", bad).returncode == 1


def test_render_figure_regions(tmp_path):
    f = write(tmp_path / "fig.json", FIGURE)
    svg = tmp_path / "fig.svg"
    stats = json.loads(run("render", "--func", f, "--bbox", "-7,-4,8,5", "--out", svg, check=0).stdout)
    assert stats["collapse_regions"] == 2
    assert stats["regions"] == 11
    text = svg.read_text()
    assert text.lstrip().startswith("<?xml") or text.lstrip().startswith("<svg")
    assert "</svg>" in text


def test_pipeline_carpet_report_and_determinism(tmp_path):
    outs = []
    for k in range(2):
        rep = tmp_path / f"rep{k}.json"
        svg = tmp_path / f"fig{k}.svg"
        run("pipeline", "--set", "carpet:k=2", "--eps", "0.05", "--report", rep, "--svg", svg, "--seed", "7",
            check=0)
        outs.append((rep.read_bytes(), svg.read_text()))
    assert outs[0][0] == outs[1][0]
    strip_banner = lambda s: re.sub(r"<!-- kolmo [^>]* -->", "", s)
    assert strip_banner(outs[0][1]) == strip_banner(outs[1][1])
    report = json.loads(outs[0][0])
    assert report["passed"] is True
    assert report["displacement"]["max"] <= 0.05
    assert report["lipschitz"]["violations"] == 0
    assert report["flatten"]["residual"] <= 1e-7


@pytest.mark.parametrize(
    "args,code",
    [
        (("prox", "--func", "{bad}", "--x", "0,0"), 1),
        (("prox", "--func", "{fig}", "--x", "0,0,0"), 2),
        (("prox", "--func", "{fig}", "--nonsense"), 1),
        (("merge", "{a}", "{b}", "{c}", "--cap", "2"), 4),
        (("verify", "--cover", "{thin}", "--set", "disk:r=1"), 3),
        (("pipeline", "--set", "koch:k=12"), 2),
    ],
)
def test_exit_codes(tmp_path, args, code):
    paths = {
        "bad": tmp_path / "bad.json",
        "fig": write(tmp_path / "fig.json", FIGURE),
        "a": write(tmp_path / "a.json", slab([0, 1], 0, 0.1)),
        "b": write(tmp_path / "b.json", slab([1, 0], 0, 0.1)),
        "c": write(tmp_path / "c.json", slab([0.6, 0.8], 0, 0.1)),
        "thin": write(tmp_path / "thin.json",
                      {"target": "x-axis", "claimed_width_bound": 0.1, "strips": [slab([0, 1], 0, 0.1)]}),
    }
    paths["bad"].write_text("{not json")
    proc = run(*[a.format(**paths) for a in args])
    assert proc.returncode == code, proc.stderr
    assert proc.stderr.strip() != ""
