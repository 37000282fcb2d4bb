import io as stdio
import json

from latres.cli import run


def call(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_resolve_segment(fixtures_dir):
    code, out, _ = call("resolve", "--field", "q", f"{fixtures_dir}/segment.json")
    assert code == 0
    data = json.loads(out)
    assert data["rendered"] == [[["x1 - x2"]]]
    assert data["ranks"] == [1, 1]
    assert len(data["resolution"]["basis"][1]) == 1


def test_primes_triangle(fixtures_dir):
    code, out, _ = call("primes", f"{fixtures_dir}/triangle.cplx")
    assert code == 0
    data = json.loads(out)
    (entry,) = data["primes"]
    assert entry["prime"] == 3
    assert {"quantity": "tau", "i": 1, "value": 3} in entry["provenance"]


def test_bad_lattice_exit_two(fixtures_dir):
    code, _, err = call("lattice", f"{fixtures_dir}/bad.json")
    assert code == 2
    assert "witness: [1, 0]" in err


def test_malformed_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"n": 2, "basis": [[1, -1]')
    code, _, err = call("lattice", str(p))
    assert code == 2 and "line 1" in err


def test_missing_file_and_bad_flags(fixtures_dir):
    assert call("lattice", "/nonexistent.json")[0] == 2
    assert call("resolve", "--field", "fp:9", f"{fixtures_dir}/segment.json")[0] == 2
    assert call("resolve", "--jobs", "0", f"{fixtures_dir}/segment.json")[0] == 2
    assert call("resolve", "--mode", "other", f"{fixtures_dir}/segment.json")[0] == 2
    assert call("koszul", f"{fixtures_dir}/triangle.cplx", "--degree", "1,1,1")[0] == 2


def test_lattice_and_quotient(fixtures_dir):
    code, out, _ = call("lattice", f"{fixtures_dir}/laplacian_k3.json")
    data = json.loads(out)
    assert code == 0
    assert data["lattice"]["grading"] == [1, 1, 1]
    assert data["quotient"] == {"free_rank": 1, "torsion": [3]}


def test_koszul_and_betti(fixtures_dir):
    code, out, _ = call("koszul", f"{fixtures_dir}/segment.json", "--degree", "1,0")
    data = json.loads(out)
    assert code == 0 and data["betti"] == [0, 1, 0]
    code, out, _ = call("betti", f"{fixtures_dir}/twisted_cubic.json")
    assert code == 0 and json.loads(out)["ranks"] == [1, 3, 2]


def test_uncertified_search_exit_one(fixtures_dir):
    code, out, _ = call("betti", f"{fixtures_dir}/twisted_cubic.json", "--radius-cap", "2", "--format", "text")
    assert code == 1 and "UNCERTIFIED" in out


def test_forest_and_paths(fixtures_dir):
    code, out, _ = call("forest", f"{fixtures_dir}/rp2.cplx")
    data = json.loads(out)
    assert code == 0 and data["bad_primes"] == [2, 3] and data["torsion"]["1"] == 2
    code, out, _ = call("forest", f"{fixtures_dir}/koszul_xy.json", "--degree", "1,1")
    assert code == 0 and json.loads(out)["bad_primes"] == [2]
    code, out, _ = call("paths", "0,0", "2,1", "--list")
    data = json.loads(out)
    assert data["count"] == 3 and data["paths"] == [[1, 1, 2], [1, 2, 1], [2, 1, 1]]
    assert call("paths", "1,0", "0,1")[0] == 2


def test_descend_and_verify(fixtures_dir, tmp_path):
    code, out, _ = call("descend", f"{fixtures_dir}/laplacian_k3.json", "--format", "text")
    assert code == 0
    assert {"x1^2 - x2*x3", "x1*x2 - x3^2", "x1*x3 - x2^2"} <= {line.strip() for line in out.splitlines()}
    code, out, _ = call("verify", f"{fixtures_dir}/segment.json", "--bound", "5")
    assert code == 0 and json.loads(out)["passed"]
    # a saved resolution can be reloaded and verified
    code, out, _ = call("resolve", f"{fixtures_dir}/laplacian_k3.json", "--mode", "community")
    saved = tmp_path / "res.json"
    saved.write_text(json.dumps(json.loads(out)["resolution"]))
    code, out, _ = call("verify", str(saved), "--format", "text")
    assert code == 0 and out.strip().endswith("PASS")


def test_verify_detects_corruption(fixtures_dir, tmp_path):
    code, out, _ = call("resolve", f"{fixtures_dir}/laplacian_k3.json")
    res = json.loads(out)["resolution"]
    res["differentials"][2][0][0]["coeff"] = "5"
    saved = tmp_path / "bad.json"
    saved.write_text(json.dumps(res))
    code, out, _ = call("verify", str(saved))
    assert code == 1 and not json.loads(out)["passed"]
