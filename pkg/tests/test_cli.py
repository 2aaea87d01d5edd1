import json
import shutil

import pytest

from abquot import catalog, cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_info(capsys):
    code, out, _ = run(capsys, "info")
    assert code == 0
    assert "st4.json\tok" in out


def test_report_on_k26(capsys):
    code, out, _ = run(capsys, "report", "--scenario", "st26/K26_1", "--point", "1/2,1/2,1/2,0,1/2,1/2")
    assert code == 0
    row = out.strip().splitlines()[-1].split("\t")
    assert row[2:4] == ["36", "18"]


def test_report_json(capsys):
    code, out, _ = run(capsys, "report", "--scenario", "gmpn-2-2-3", "--point", "1/2,0,0,0,1/7,0",
                       "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert (d["S0"], d["P0"], d["smooth"]) == (2, 1, False)


def test_audit_smooth_example(capsys):
    code, out, _ = run(capsys, "audit", "--scenario", "example-b-3")
    assert code == 0
    assert "SmoothAudited" in out


def test_audit_singular_where_smooth_expected(capsys):
    code, out, _ = run(capsys, "audit", "--scenario", "gmpn-3-3-3", "--torsion", "3", "--expect", "smooth")
    assert code == 1
    assert "NotSmooth" in out
    code, _, _ = run(capsys, "audit", "--scenario", "gmpn-3-3-3", "--torsion", "3", "--expect", "singular")
    assert code == 0


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "report", "--scenario", "nope", "--point", "0")[0] == 2
    assert run(capsys, "report", "--scenario", "example-b-2", "--point", "1/2")[0] == 2
    assert run(capsys, "report", "--scenario", "example-b-2", "--point", "a,b,c,d")[0] == 2
    assert run(capsys, "lattices", "--scenario", "example-b-2")[0] == 2
    assert run(capsys, "tables", "paper9")[0] == 2


def test_cap_exceeded(capsys):
    code, _, err = run(capsys, "audit", "--scenario", "gmpn-6-1-3", "--cap", "10")
    assert code == 3
    assert "cap" in err


def test_tables_prop33_is_clean(capsys):
    code, out, err = run(capsys, "tables", "prop33")
    assert code == 0, err
    assert len(out.strip().splitlines()) == 1 + 7


def test_tables_detect_differences(capsys, tmp_path, monkeypatch):
    golden = tmp_path / "golden"
    shutil.copytree(cli.GOLDEN_DIR, golden)
    text = (golden / "prop33.tsv").read_text().replace("(3,3)\t3\t1", "(3,3)\t9\t1")
    (golden / "prop33.tsv").write_text(text)
    monkeypatch.setattr(cli, "GOLDEN_DIR", golden)
    code, _, err = run(capsys, "tables", "prop33")
    assert code == 1
    assert "DIFF" in err


def test_lattices_of_st4(capsys):
    code, out, _ = run(capsys, "lattices", "--scenario", "st4", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert [L["index"] for L in d["lattices"]] == [1, 2, 2, 2, 4]
    assert d["action_trivial"] is True


def test_remark_search(capsys):
    code, out, _ = run(capsys, "remark-search", "--scenario", "st4")
    assert code == 0
    assert "(1/2,0,0,0)\t2\t1\tFalse" in out


def test_data_flag_and_environment(capsys, tmp_path, monkeypatch):
    src = catalog.PACKAGE_DATA / "st4.json"
    code, out, _ = run(capsys, "report", "--data", str(src), "--scenario", "L3", "--point", "0,1/2,1/2,0")
    assert code == 0 and out.strip().endswith("6\t3\tFalse")
    shutil.copy(src, tmp_path / "st4.json")
    monkeypatch.setenv(catalog.DATA_ENV, str(tmp_path))
    code, out, _ = run(capsys, "info")
    assert str(tmp_path) in out
    assert "st4.json\tok" in out and "st26.json" not in out


@pytest.mark.parametrize("argv", [
    ("audit", "--scenario", "gmpn-4-2-3", "--torsion", "2"),
    ("tables", "prop36", "--format", "json"),
])
def test_output_is_deterministic_across_runs_and_jobs(capsys, argv):
    first = run(capsys, *argv)
    again = run(capsys, *argv)
    parallel = run(capsys, *argv, "--jobs", "2")
    strip = lambda s: "\n".join(ln for ln in s.splitlines() if '"seconds"' not in ln)
    assert strip(first[1]) == strip(again[1]) == strip(parallel[1])
    assert first[0] == again[0] == parallel[0]
