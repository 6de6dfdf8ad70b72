import json

import pytest

from ybh.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_text(capsys, cache_dir):
    code, out, _ = run(capsys, "homology", "--spec", "final:m=3", "--n", "3")
    assert code == 0
    assert out == "(1,8,2)\ntorsion: 1-y^2 ×8, 1-y^4 ×2\n"
    code, again, _ = run(capsys, "homology", "--spec", "final:m=3", "--n", "3")
    assert again == out
    assert (cache_dir / "m3u2l1" / "homology-n3-Zt.json").exists()


def test_homology_specialized(capsys, cache_dir):
    code, out, _ = run(capsys, "homology", "--spec", "final:m=3", "--n", "3", "--at-y", "2")
    assert code == 0 and out == "(1,8,2)\ntorsion: Z3 ×8, Z15 ×2\n"


def test_homology_json_no_cache(capsys, cache_dir):
    code, out, _ = run(capsys, "homology", "--spec", "final:m=2", "--n", "2",
                       "--format", "json", "--no-cache")
    doc = json.loads(out)
    assert doc["notation"] == "(1,1,1)" and doc["spec"] == "final:m=2"
    assert not cache_dir.exists()


def test_table1(capsys, cache_dir):
    code, out, _ = run(capsys, "table1")
    assert code == 0
    lines = out.splitlines()
    assert lines[3].split() == ["3", "(0,0,0)", "(1,1,0)", "(1,8,2)", "(1,33,6)"]
    code, csv, _ = run(capsys, "table1", "--format", "csv", "--threads", "2", "--no-cache")
    rows = csv.splitlines()
    assert rows[0] == "m\\n,H_1,H_2,H_3,H_4"
    assert rows[5] == '5,"(0,0,0)","(0,0,0)","(0,0,0)","(1,23,0)"'


def test_hn(capsys, cache_dir):
    code, out, _ = run(capsys, "hn", "--n", "3", "--m", "6")
    assert code == 0
    assert out.startswith("H_3(C^6) = (26,140,30)")
    assert "closed form agrees: True" in out
    code, out, _ = run(capsys, "hn", "--n", "4", "--m", "3", "--format", "json")
    assert json.loads(out)["closed_form"] is True


def test_ranks(capsys):
    code, out, _ = run(capsys, "ranks", "--csv")
    assert code == 0
    assert out.splitlines()[3] == "3,0,2,12,50,180,602,1932"


def test_verify(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "verify", "--m", "5", "--max-n", "3")
    assert code == 0 and "YBE R_(5)" in out


def test_verify_maps(capsys):
    code, out, _ = run(capsys, "verify-maps", "--format", "json")
    assert code == 0
    results = json.loads(out)["results"]
    assert results and all(r["passed"] for r in results)
    code, out, _ = run(capsys, "verify-maps", "--m", "4", "--n", "4")
    assert code == 0 and "splitting pair m=4 u=1 n=4" in out


def test_boundary_and_snf(capsys, cache_dir, tmp_path):
    out_file = tmp_path / "d3.json"
    code, out, _ = run(capsys, "boundary", "--spec", "final:m=3", "--n", "3", "--out", str(out_file))
    assert code == 0 and out.startswith("final:m=3 d_3: 2 x 12, 8 nonzero")
    assert json.loads(out_file.read_text())["shape"] == [2, 12]
    code, out, _ = run(capsys, "snf", "--spec", "final:m=3", "--n", "4", "--format", "json")
    doc = json.loads(out)
    assert doc["rank"] == 10 and doc["certified_over_Zt"] is True
    assert sorted(set(doc["diagonal"])) == ["1 - y^2", "1 - y^4"]


def test_conjecture(capsys, cache_dir):
    code, out, _ = run(capsys, "conjecture", "mfl", "m=2", "cap=1", "n=4")
    assert code == 0
    assert json.loads(out)["verdict"] == "consistent"
    code, out, _ = run(capsys, "conjecture", "h5-formula", "max_m=5")
    assert json.loads(out)["verdict"] == "consistent"


def test_usage_errors(capsys):
    code, _, err = run(capsys, "homology", "--spec", "usetop:m=3,u=2,l=2", "--n", "3")
    assert code == 2 and "invalid spec" in err
    code, _, err = run(capsys, "conjecture", "torsion", "max_degree=4")
    assert code == 2 and "unknown parameter" in err
    with pytest.raises(SystemExit) as exc:
        main(["table1", "--max-m", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["conjecture", "mfl", "m"])


def test_corrupt_cache_exit_code(capsys, cache_dir):
    run(capsys, "homology", "--spec", "final:m=3", "--n", "3")
    path = cache_dir / "m3u2l1" / "homology-n3-Zt.json"
    path.write_text(path.read_text().replace('"free_rank": 1', '"free_rank": 2'))
    code, _, err = run(capsys, "homology", "--spec", "final:m=3", "--n", "3")
    assert code == 3 and "checksum" in err
    code, out, _ = run(capsys, "cache", "gc")
    assert code == 0 and "removed 1 file(s)" in out
    code, out, _ = run(capsys, "homology", "--spec", "final:m=3", "--n", "3")
    assert code == 0 and out.startswith("(1,8,2)")
