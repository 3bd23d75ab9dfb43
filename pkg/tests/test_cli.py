import json
import random
import subprocess
import sys

import pytest

from parcalc.cli import run
from parcalc.diagrams import (
    corrupt_split,
    diagram_to_spec,
    dumps,
    random_split_diagram,
    split_to_spec,
)


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def specs(tmp_path_factory):
    d = tmp_path_factory.mktemp("specs")
    g = random_split_diagram(random.Random(3))
    bad = next(
        b for s in range(50)
        if (b := corrupt_split(random.Random(s), random_split_diagram(random.Random(s)), "not_natural")) is not None
    )
    paths = {"diagram": d / "diagram.json", "split": d / "split.json", "bad": d / "bad.json", "junk": d / "junk.json"}
    paths["diagram"].write_text(dumps(diagram_to_spec(g.diagram)))
    paths["split"].write_text(dumps(split_to_spec(g.diagram, g.split)))
    paths["bad"].write_text(dumps(split_to_spec(bad.diagram, bad.split)))
    paths["junk"].write_text("{not json")
    return {k: str(v) for k, v in paths.items()}


def test_tn(capsys):
    code, out, _ = call(capsys, "tn", "--n", "4", "--format", "json")
    assert code == 0
    assert json.loads(out)["result"]["homology"] == [{"degree": 3, "rank": 6}]


def test_collapse_csv(capsys):
    code, out, _ = call(capsys, "collapse", "--k", "5", "--dim", "3", "--format", "csv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "degree,layers,oracle,verdict"
    assert all(line.endswith(",pass") for line in lines[1:])


def test_collapse_json_separates_verdict(capsys):
    _, out, _ = call(capsys, "collapse", "--k", "4", "--dim", "4", "--format", "json")
    obj = json.loads(out)
    assert obj["schema"] == "parcalc.cli/1" and obj["verdict"] == "pass"
    assert obj["result"]["computation"]["layers"] == obj["result"]["computation"]["oracle"]


def test_goodmap(capsys):
    code, out, _ = call(capsys, "goodmap", "--blocks", "1,2|3,4", "--map", "1:a,2:b,3:b,4:c")
    assert code == 0 and "good" in out
    _, out, _ = call(capsys, "goodmap", "--blocks", "1,2|3,4", "--map", "1:a,2:a,3:b,4:c", "--format", "csv")
    assert out == "classification\nbad\n"


def test_layers_csv(capsys):
    _, out, _ = call(capsys, "layers", "--k", "3", "--dim", "3", "--format", "csv")
    assert out == "k,d,i,degree,rank\n3,3,0,0,1\n3,3,1,2,3\n3,3,2,4,2\n"


def test_layers_reduced_and_filtered(capsys):
    _, out, _ = call(capsys, "layers", "--k", "4", "--dim", "3", "--reduced", "--excess", "2", "--format", "csv")
    assert out == "k,d,i,degree,rank\n4,3,2,4,3\n"


def test_empty_result_is_header_only(capsys):
    _, out, _ = call(capsys, "layers", "--k", "3", "--dim", "3", "--excess", "9", "--format", "csv")
    assert out == "k,d,i,degree,rank\n"


def test_ek_json(capsys):
    _, out, _ = call(capsys, "ek", "--k", "2", "--format", "json")
    result = json.loads(out)["result"]
    assert len(result["objects"]) == 4 and result["morphisms"] == 150


def test_tlambda_beyond_direct_range(capsys):
    _, out, _ = call(capsys, "tlambda", "--blocks", "1,2,3,4|5,6,7|8,9", "--format", "json")
    result = json.loads(out)["result"]
    assert result["excess"] == 6 and result["homology"] == [{"degree": 6, "rank": 12}]


def test_holim(capsys, specs):
    code, out, _ = call(capsys, "holim", "--spec", specs["diagram"], "--format", "json")
    assert code == 0 and "betti" in json.loads(out)["result"]


def test_split_check_pass_and_fail(capsys, specs):
    code, out, _ = call(capsys, "split-check", "--spec", specs["split"], "--format", "json")
    assert code == 0 and json.loads(out)["verdict"] == "pass"
    code, out, _ = call(capsys, "split-check", "--spec", specs["bad"], "--format", "json")
    obj = json.loads(out)
    assert code == 1 and obj["verdict"] == "fail" and obj["result"]["problems"]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["tn", "--n", "7"],
        ["tn"],
        ["layers", "--k", "11", "--dim", "3"],
        ["layers", "--k", "3", "--dim", "17"],
        ["layers", "--k", "1", "--dim", "3", "--reduced"],
        ["ek", "--k", "4"],
        ["tlambda", "--blocks", "1,2|2,3"],
        ["tlambda", "--blocks", ",".join(map(str, range(11)))],
        ["goodmap", "--blocks", "1,2", "--map", "1:a"],
        ["goodmap", "--blocks", "1,2", "--map", "1a"],
        ["tn", "--n", "3", "--format", "xml"],
        ["holim", "--spec", "/no/such/file.json"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == ""
    assert err.startswith("parcalc: error:") and err.count("\n") == 1


def test_malformed_spec(capsys, specs):
    code, _, err = call(capsys, "split-check", "--spec", specs["junk"])
    assert code == 2 and "not valid JSON" in err


def test_unwritable_output(capsys, tmp_path):
    code, _, err = call(capsys, "tn", "--n", "3", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 2 and "cannot write" in err


def test_out_file(capsys, tmp_path):
    target = tmp_path / "t.csv"
    code, out, _ = call(capsys, "tn", "--n", "3", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == "degree,rank\n2,2\n"


def test_byte_identical_across_processes(specs):
    argv = [sys.executable, "-m", "parcalc", "split-check", "--spec", specs["split"], "--format", "json"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first.startswith(b"{")
