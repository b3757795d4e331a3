import csv
import io
import json
import os
import subprocess
import sys

import pytest

from richlines.cli import flatten_keys, render, run


@pytest.fixture
def sets(tmp_path):
    def make(name, values):
        path = tmp_path / name
        path.write_text("".join(f"{v}\n" for v in values))
        return str(path)

    return make


def call(capsys, *argv):
    code = run(list(argv) + ["--quiet"])
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_gen_set_ap(capsys):
    code, out, _ = call(capsys, "gen-set", "--kind", "ap", "--n", "4", "--start", "1")
    assert code == 0 and out == "1\n2\n3\n4\n"


def test_gen_set_gp_and_random(capsys):
    assert call(capsys, "gen-set", "--kind", "gp", "--n", "3", "--ratio", "1/2")[1] == "1/4\n1/2\n1\n"
    a = call(capsys, "gen-set", "--kind", "random", "--n", "5", "--seed", "3")[1]
    assert a == call(capsys, "gen-set", "--kind", "random", "--n", "5", "--seed", "3")[1]
    assert len(a.split()) == 5


def test_gen_set_degenerate_exits_2(capsys):
    code, _, err = call(capsys, "gen-set", "--kind", "gp", "--n", "3", "--ratio", "1")
    assert code == 2 and "degenerate generator" in err


def test_rich_lines_ten_grid(capsys, sets):
    report = call_json(capsys, "rich-lines", "--input", sets("a.txt", range(10)), "--threshold", "10")
    assert report["schema"] == "richlines.rich-lines/1"
    assert report["line_count"] == 12 and report["vertical_count"] == 10
    assert report["classes"][1] == {"slope": "0", "intercepts": [str(i) for i in range(10)]}


def test_rich_lines_rectangular(capsys, sets):
    a, b = sets("a.txt", [0, 1, 2]), sets("b.txt", [0, 2, 4])
    report = call_json(capsys, "rich-lines", "--grid-a", a, "--grid-b", b, "--threshold", "3")
    assert report["n_a"] == 3 and {"slope": "2", "intercepts": ["0"]} in report["classes"]


def test_theorem2(capsys, sets):
    report = call_json(capsys, "theorem2", "--input", sets("a.txt", range(1, 17)),
                       "--epsilon", "1/4", "--delta", "1/10")
    assert report["hypotheses_met"] and report["richness_below_bound"]


def test_overlap(capsys, sets):
    report = call_json(capsys, "overlap", "--input", sets("a.txt", range(10)), "--threshold", "10")
    assert report["line_count"] == 2 and report["threshold_tau"] == 5
    assert report["pair_count_above"] == 4 and report["lemma_holds"]


def test_energy(capsys, sets):
    report = call_json(capsys, "energy", "--input", sets("x.txt", [0, 1, 2]), "--input", sets("y.txt", [10, 11, 12]))
    assert report["energy"] == 19 and report["best_translate"] == "10"
    assert report["best_overlap"] >= report["averaging_bound"] == 3


def test_energy_size_mismatch_exits_2(capsys, sets):
    code, _, err = call(capsys, "energy", "--input", sets("x.txt", [0]), "--input", sets("y.txt", [1, 2]))
    assert code == 2 and "sizes differ" in err


def test_flatten_point_mass(capsys, sets):
    report = call_json(capsys, "flatten", "--input", sets("t.txt", [1]), "--iterations", "3")
    assert report["final"] == {"support_size": 1, "max_weight": "1", "support": ["0"], "weights": ["1"]}
    assert all(step["flattening"] is None for step in report["steps"])


def test_flatten_reports_each_step(capsys, sets):
    report = call_json(capsys, "flatten", "--input", sets("t.txt", [1, 2, 3]), "--iterations", "1")
    step = report["steps"][0]
    assert step["support_size"] == 3
    assert step["flattening"]["m_star"] == "5/27"
    assert step["flattening"]["ratio"].startswith("0.318955378568740617130307215198")


def test_flatten_support_blowup_exits_2(capsys, sets):
    code, _, err = call(capsys, "flatten", "--input", sets("t.txt", [1, 2, 3]), "--iterations", "2",
                        "--cap-support", "10")
    assert code == 2 and "support blowup" in err


def test_st_check_grid_and_config(capsys, sets, tmp_path):
    report = call_json(capsys, "st-check", "--input", sets("a.txt", range(3)), "--threshold", "3")
    assert report["incidences"] == 15 and report["n_lines"] == 5
    cfg = tmp_path / "c.txt"
    cfg.write_text("[points]\n0 0\n1 1\n2 2\n[lines]\n1 -1 0\n")
    report = call_json(capsys, "st-check", "--input", str(cfg))
    assert report["source"] == "configuration" and report["incidences"] == 3


def test_elekes_csv(capsys, sets):
    code, out, _ = call(capsys, "elekes", "--input", sets("a.txt", range(1, 17)), "--format", "csv")
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["sumset_size"] == "31" and row["bound_holds"] == "true"
    assert row["schema"] == "richlines.elekes/1"


def test_elekes_singleton_exits_2(capsys, sets):
    assert call(capsys, "elekes", "--input", sets("a.txt", [3]))[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nope"],
        ["gen-set", "--kind", "ap"],
        ["gen-set", "--kind", "ap", "--n", "x"],
        ["theorem2", "--input", "missing.txt", "--epsilon", "1.5", "--delta", "1"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        run(argv)
    assert exc.value.code == 1


@pytest.mark.parametrize("argv", [["rich-lines", "--threshold", "2"], ["gen-set", "--kind", "random", "--n", "3"]])
def test_incomplete_inputs_exit_1(argv, capsys):
    code, out, err = call(capsys, *argv)
    assert code == 1 and out == "" and "error" in err


def test_missing_file_exits_1(capsys, tmp_path):
    code, _, err = call(capsys, "elekes", "--input", str(tmp_path / "absent.txt"))
    assert code == 1 and "absent.txt" in err


def test_parse_error_names_line(capsys, sets):
    path = sets("bad.txt", [1, 2, "1.5"])
    code, _, err = call(capsys, "elekes", "--input", path)
    assert code == 1 and f"{path}:3:" in err


def test_threshold_too_small_exits_2(capsys, sets):
    assert call(capsys, "rich-lines", "--input", sets("a.txt", [1, 2]), "--threshold", "1")[0] == 2


def test_reruns_are_byte_identical(capsys, sets, tmp_path):
    a = sets("a.txt", range(6))
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert run(["theorem2", "--input", a, "--epsilon", "1/2", "--delta", "1/2", "--out", str(out), "--quiet"]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_out_is_written_atomically(capsys, sets, tmp_path):
    out = tmp_path / "report.json"
    out.write_text("old")
    assert run(["elekes", "--input", sets("a.txt", [1, 2, 3]), "--out", str(out), "--quiet"]) == 0
    assert json.loads(out.read_text())["n"] == 3
    assert sorted(p.name for p in tmp_path.iterdir()) == ["a.txt", "report.json"]
    assert capsys.readouterr().out == ""


def test_precision_env(capsys, sets, monkeypatch):
    monkeypatch.setenv("RICHLINES_PRECISION", "12")
    report = call_json(capsys, "flatten", "--input", sets("t.txt", [1, 2, 3]), "--iterations", "1")
    flat = report["steps"][0]["flattening"]
    assert flat["precision"] == 12
    assert len(flat["ratio"].replace("0.", "", 1)) <= 12


def test_corpus_is_reproducible(capsys, tmp_path):
    trees = []
    for name in ("one", "two"):
        root = tmp_path / name
        assert run(["corpus", "--seed", "1", "--out", str(root), "--quiet"]) == 0
        trees.append({p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()})
    assert trees[0] == trees[1]
    assert trees[0]["sets/ap_10.txt"] == "".join(f"{i}\n" for i in range(10)).encode()
    assert "sets/gp_2_8.txt" in trees[0]
    manifest = json.loads(trees[0]["manifest.json"])
    assert manifest["seed"] == 1


def test_corpus_needs_out(capsys):
    assert call(capsys, "corpus")[0] == 1


def test_every_json_report_has_schema(capsys, sets, tmp_path):
    a = sets("a.txt", range(1, 6))
    runs = [
        ["rich-lines", "--input", a, "--threshold", "3"],
        ["theorem2", "--input", a, "--epsilon", "1/2", "--delta", "1/2"],
        ["overlap", "--input", a, "--threshold", "3"],
        ["energy", "--input", a],
        ["flatten", "--input", a, "--iterations", "1"],
        ["st-check", "--input", a],
        ["elekes", "--input", a],
    ]
    for argv in runs:
        report = call_json(capsys, *argv)
        assert report["schema"] == f"richlines.{argv[0]}/1"


def test_flatten_keys_and_render():
    report = {"a": 1, "b": {"c": [1, 2], "d": []}, "e": None}
    assert flatten_keys(report) == {"a": 1, "b.c.0": 1, "b.c.1": 2, "b.d": "", "e": None}
    assert render(report, "csv") == "a,b.c.0,b.c.1,b.d,e\n1,1,2,,\n"
    assert render({"x": True}, "csv") == "x\ntrue\n"


def test_module_entry_point(tmp_path):
    path = tmp_path / "a.txt"
    path.write_text("1\n2\n3\n4\n")
    proc = subprocess.run([sys.executable, "-m", "richlines", "elekes", "--input", str(path)],
                          capture_output=True, text=True, env={**os.environ, "PYTHONHASHSEED": "0"})
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["product"] == 63
    assert "richlines:" in proc.stderr or proc.stderr == ""
