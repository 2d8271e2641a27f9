import io
import json
import pathlib
import subprocess
import sys

import pytest

from starwp.cli import run

PROBLEMS = pathlib.Path(__file__).resolve().parent.parent / "problems"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_wp_on_path_file():
    code, out, _ = call("wp", str(PROBLEMS / "path.txt"), "--trace")
    recs = records(out)
    assert code == 0
    assert [r["verdict"] for r in recs] == ["trivial", "nontrivial", "trivial"]
    steps = [e.get("step") for e in recs[0]["trace"]]
    assert steps[:2] == ["node-split", "direct-product"]
    assert all(r["fuel_used"] > 0 for r in recs)


def test_wp_on_bs12_file():
    code, out, _ = call("wp", str(PROBLEMS / "bs12.txt"))
    assert code == 0
    assert [r["verdict"] for r in records(out)] == ["nontrivial", "trivial", "trivial"]


def test_member_and_epi():
    code, out, _ = call("member", str(PROBLEMS / "membership.txt"))
    recs = records(out)
    assert code == 0
    assert [r["verdict"] for r in recs] == ["in", "in", "not_in", "in"]
    assert recs[0]["witness"] == "g0^-1 g1"
    code, out, _ = call("epi", str(PROBLEMS / "membership.txt"))
    recs = records(out)
    assert [r["images"] for r in recs] == [[2, 3], [1, 0], [1], [1, 1]]
    assert recs[0]["image_of_word"] == 1


def test_frei_and_nf_text_output():
    code, out, _ = call("frei", str(PROBLEMS / "path.txt"), "--format", "text")
    assert code == 0
    assert out.splitlines() == ["frei(v2): guaranteed predicate=nodal",
                                "frei(v1 v2): guaranteed predicate=sub-star"]
    code, out, _ = call("nf", str(PROBLEMS / "path.txt"))
    assert code == 0 and records(out)[0]["normal_form"] == "v1 v3 v1^-1 v3^-1"


def test_free_product_member_file():
    code, out, _ = call("member", str(PROBLEMS / "free_product.txt"))
    recs = records(out)
    assert code == 0
    assert [r["verdict"] for r in recs] == ["in", "not_in", "in", "not_in"]
    assert recs[0]["witness"] == "g0 g1 g0^-1"


def test_rank_two_vertex_file():
    code, out, _ = call("wp", str(PROBLEMS / "rank2.txt"))
    assert [r["verdict"] for r in records(out)] == ["trivial", "nontrivial"]


def test_zero_exponent_is_a_parse_error(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("graph { vertices: x }\nquery wp: x^0\n")
    code, out, err = call("wp", str(f))
    assert code == 1 and out == ""
    assert err.strip() == f"{f}:2:11: error: zero exponent in token 'x^0'"


def test_input_errors(tmp_path):
    code, _, err = call("wp", str(tmp_path / "missing.txt"))
    assert code == 1 and "cannot read" in err
    f = tmp_path / "nofrei.txt"
    f.write_text("graph { vertices: x }\nquery wp: x\n")
    code, _, err = call("frei", str(f))
    assert code == 1 and "relator" in err
    code, _, _ = call("bogus")
    assert code == 1


def test_unknown_verdict_exits_two(tmp_path):
    f = tmp_path / "wide.txt"
    f.write_text("graph { vertices: u v w; edges: (u v) }\nrelator: u w\nquery wp: u w\n")
    code, out, _ = call("wp", str(f))
    rec = records(out)[0]
    assert code == 2 and rec["verdict"] == "unknown" and rec["reason"] == "unsupported-factor"


@pytest.mark.parametrize("suite", ["bs12", "z2"])
def test_check_suites(suite):
    code, out, _ = call("check", suite)
    rec = records(out)[0]
    assert code == 0 and rec["verdict"] == "agree" and rec["agreement_percent"] == 100.0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "starwp", "wp", str(PROBLEMS / "path.txt"),
                           "--format", "text"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "wp: v1 v3 v1^-1 v3^-1: trivial"


def test_output_is_deterministic():
    first = call("wp", str(PROBLEMS / "path.txt"), "--trace")
    second = call("wp", str(PROBLEMS / "path.txt"), "--trace")
    assert first == second
