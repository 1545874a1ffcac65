import json
import subprocess
import sys

import jsonschema
import pytest

from tropell.cli import main
from tropell.faithful import FAITHFUL_SCHEMA
from tropell.plane_curve import CURVE_SCHEMA
from tropell.weierstrass import REPORT_SCHEMA


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out else None, err


# -- trop ---------------------------------------------------------------------


def test_trop_line(capsys):
    code, data, err = run_json(capsys, "trop", "t^-3*x + t^-2*y - 1")
    assert code == 0 and err == ""
    assert data["curve"]["vertices"] == [["3", "2"]]
    assert sorted(tuple(r["dir"]) for r in data["curve"]["rays"]) == [(-1, -1), (0, 1), (1, 0)]
    assert data["cycle"] is None
    assert data["tropical_text"] == "min{0, y - 2, x - 3}"
    jsonschema.validate(data["curve"], CURVE_SCHEMA)


def test_trop_triangle(capsys):
    code, data, _ = run_json(capsys, "trop", "x^2*y + x*y + x*y^2 + t^3")
    assert code == 0
    assert sorted(map(tuple, data["curve"]["vertices"])) == [("0", "0"), ("0", "3"), ("3", "0")]
    assert data["cycle"]["length"] == "9"


@pytest.mark.parametrize("literal", ["t", "x", "x + y + z", "x +", "x^(1/2) + y", "0*x + 0*y"])
def test_trop_bad_input(capsys, literal):
    code, out, err = run(capsys, "trop", literal)
    assert code == 2
    assert out == ""
    assert err.startswith("tropell:")


def test_trop_parse_error_has_position(capsys):
    _, _, err = run(capsys, "trop", "x + ")
    assert "position" in err


def test_trop_writes_files(capsys, tmp_path):
    js, svg = tmp_path / "c.json", tmp_path / "c.svg"
    code, out, _ = run(capsys, "trop", "x + y + 1", "--json", str(js), "--svg", str(svg))
    assert code == 0
    assert js.read_text() == out
    assert "<svg" in svg.read_text()


# -- analyze ------------------------------------------------------------------


def test_analyze_non_minimal(capsys):
    code, data, _ = run_json(capsys, "analyze", "[0,0,0,t^4,t^6]")
    assert code == 0
    jsonschema.validate(data, REPORT_SCHEMA)
    assert data["minimal"] is False
    assert data["reduction"] == "good"
    assert data["minimal_literal"] == "[0,0,0,1,1]"


def test_analyze_multiplicative(capsys):
    code, data, _ = run_json(capsys, "analyze", "[0,1,0,0,t^2]")
    assert code == 0
    jsonschema.validate(data, REPORT_SCHEMA)
    assert data["reduction"] == "mult"
    assert data["singular_point"] == ["0", "0"]


def test_analyze_errors(capsys):
    assert run(capsys, "analyze", "[0,0,0,0,0]")[0] == 3
    assert run(capsys, "analyze", "[0,0,0,1]")[0] == 2
    assert run(capsys, "analyze", "[0,0,0,1,1]", "--precision", "0")[0] == 2
    assert run(capsys, "analyze", "[0,0,0,1,1]", "--precision", "x")[0] == 2


def test_analyze_precision_flag(capsys):
    code, data, _ = run_json(capsys, "analyze", "[0,1,0,0,t^2]", "--precision", "13/2")
    assert code == 0 and data["reduction"] == "mult"


# -- faithful -----------------------------------------------------------------


def test_faithful_family(capsys):
    code, data, err = run_json(capsys, "faithful", "--family", "a=1", "b=t^2")
    assert code == 0 and err == ""
    jsonschema.validate(data, FAITHFUL_SCHEMA)
    assert data["verdict"] is True
    assert data["cycle_length"] == "6"
    assert data["sampling"]["samples"] == 20 and data["sampling"]["seed"] == 0


def test_faithful_model(capsys):
    code, data, _ = run_json(capsys, "faithful", "[0,1,0,-2*t,t^2]", "--samples", "4")
    assert code == 0
    jsonschema.validate(data, FAITHFUL_SCHEMA)
    assert data["verdict"] is True and data["cycle_length"] == "3"
    assert data["family"]["provenance"] == "derived"


def test_faithful_good_reduction(capsys):
    code, data, err = run_json(capsys, "faithful", "[0,0,0,1,1]")
    assert code == 5
    assert data == {"verdict": False, "reduction": "good", "reason": data["reason"], "vj": "0"}
    assert "not multiplicative" in err


def test_faithful_no_rational_torsion_is_a_certification_failure(capsys):
    code, out, err = run(capsys, "faithful", "[0,0,0,-3,2+t]")
    assert code == 4
    assert out == ""
    assert "find_three_torsion" in err


@pytest.mark.parametrize("argv", [
    ["faithful"],
    ["faithful", "[0,1,0,-2*t,t^2]", "--family", "a=1", "b=t"],
    ["faithful", "--family", "a=1"],
    ["faithful", "--family", "a=t", "b=t"],
    ["faithful", "--family", "c=1", "b=t"],
    ["faithful", "--family", "a=1", "b=t^"],
    ["faithful", "--samples", "-1", "--family", "a=1", "b=t"],
    ["faithful", "--sweep", "k=3..1"],
    ["faithful", "--sweep", "k=1..2", "[0,1,0,-2*t,t^2]"],
    ["nonsense"],
])
def test_faithful_input_errors(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_faithful_singular(capsys):
    assert run(capsys, "faithful", "[0,0,0,0,0]")[0] == 3


def test_sweep(capsys, tmp_path):
    js = tmp_path / "s.json"
    code, data, _ = run_json(capsys, "faithful", "--sweep", "k=1..3", "--json", str(js))
    assert code == 0
    assert data["ok"] is True
    assert [(r["k"], r["general"]["cycle_length"], r["family"]["minus_v_j"]) for r in data["sweep"]] == [
        (1, "3", "3"), (2, "6", "6"), (3, "9", "9")]
    assert json.loads(js.read_text()) == data


def test_sweep_with_family_a(capsys):
    code, data, _ = run_json(capsys, "faithful", "--sweep", "k=2..2", "--family", "a=4", "b=t")
    assert code == 0
    assert data["a"] == "4"
    assert data["sweep"][0]["family"]["three_v_b"] == "6"


def test_seed_changes_samples_not_certificate(capsys):
    _, a, _ = run_json(capsys, "faithful", "--family", "a=1", "b=t^3", "--seed", "1")
    _, b, _ = run_json(capsys, "faithful", "--family", "a=1", "b=t^3", "--seed", "2")
    assert a["sampling"]["points"] != b["sampling"]["points"]
    del a["sampling"], b["sampling"]
    assert a == b


def test_module_entry_point_is_deterministic(tmp_path):
    outputs = []
    for i in range(2):
        js, svg = tmp_path / f"{i}.json", tmp_path / f"{i}.svg"
        proc = subprocess.run(
            [sys.executable, "-m", "tropell", "faithful", "--family", "a=1", "b=t^3", "--seed", "7",
             "--json", str(js), "--svg", str(svg)],
            capture_output=True, check=True,
        )
        outputs.append((proc.stdout, js.read_bytes(), svg.read_bytes()))
    assert outputs[0] == outputs[1]
    assert outputs[0][0] == outputs[0][1]
