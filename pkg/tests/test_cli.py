import json
import shutil
from fractions import Fraction

import pytest

from k3walls import golden
from k3walls.cli import main
from k3walls.serialize import dumps, encode, lattice_from_json, parse_rational

M1 = '{"kind":"mukai_from_ns","ns_gram":[[2]]}'
M62 = '{"kind":"mukai_from_ns","ns_gram":[[62]]}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hilb_table(capsys):
    code, out, _ = run(capsys, "hilb", "table", "--d", "1", "--n", "7", "--format", "table")
    assert code == 0
    lines = out.strip().splitlines()[2:]
    assert len(lines) == 8
    assert lines[4].split()[0] == "6/17" and "fake wall" in lines[4]
    assert "(-1, 3H, -10)" in lines[6]
    code, out, _ = run(capsys, "hilb", "table", "--d", "1", "--n", "7")
    rows = json.loads(out)["rows"]
    assert rows[7]["gamma"] == {"num": "2", "den": "5"}
    assert rows[7]["kind"] == "Li-Gieseker-Uhlenbeck"


def test_hilb_nef2_and_movable(capsys):
    code, out, _ = run(capsys, "hilb", "nef2", "--d", "31")
    data = json.loads(out)
    assert data["gamma"] == {"num": "3658", "den": "657"}
    assert data["spherical"] == [329, -59, 328] and data["pell"] == [657, 59]
    code, out, _ = run(capsys, "hilb", "nef2", "--d", "2")
    assert json.loads(out) == {"nef": "equals_movable"}
    code, out, _ = run(capsys, "hilb", "movable", "--d", "1", "--n", "7", "--format", "table")
    assert "2/5" in out and "case 3" in out


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--lattice", M1, "--v", "1,0,-6", "--a", "0,0,-1")
    data = json.loads(out)
    assert code == 0
    assert data["kind"] == "Hilbert-Chow"
    assert data["totally_semistable"] == "for all orientations"
    code, out, _ = run(capsys, "classify", "--gram2", "12,7,-2", "--vh", "1,0")
    assert json.loads(out)["label"] == "fake wall"


def test_classify_from_file(capsys, tmp_path):
    f = tmp_path / "mukai_d1.json"
    f.write_text(M1)
    code, out, _ = run(capsys, "classify", "--lattice", str(f), "--v", "1,0,-6", "--a", "2,-3,5",
                       "--format", "table")
    assert code == 0 and "kind: no contraction" in out


def test_pell_and_represent(capsys):
    code, out, _ = run(capsys, "pell", "2")
    assert json.loads(out) == {"x": "3", "y": "2"}
    code, out, _ = run(capsys, "represent", "--gram", "1,0,-124", "--n", "5")
    assert json.loads(out) == [["657", "59"]]
    code, out, _ = run(capsys, "represent", "--gram=-2,3,-2", "--n=-2", "--mode", "all_in_box",
                       "--bound", "3")
    assert len(json.loads(out)) == 8
    code, out, _ = run(capsys, "represent", "--gram", "1,0,-2", "--n", "7", "--mode",
                       "orbit_representatives")
    assert json.loads(out)["reps"]


def test_exit_codes(capsys):
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys)[0] == 1
    code, _, err = run(capsys, "classify", "--lattice", M1, "--v", "1,0,-1", "--a", "0,1,0")
    assert code == 2 and "not hyperbolic" in err
    code, _, err = run(capsys, "pell", "9")
    assert code == 2
    code, _, err = run(capsys, "classify", "--lattice", M1, "--v", "1,0", "--a", "0,1,0")
    assert code == 2
    code, _, err = run(capsys, "hilb", "table", "--d", "1")
    assert code == 1


def test_cone_commands(capsys):
    region = "1/100,-1,6/100;39/100,-1,234/100"
    ample = "1/10,-1,6/10"
    code, out, _ = run(capsys, "nef", "--lattice", M1, "--v=1,0,-6", "--region", region,
                       "--ample", ample)
    walls = json.loads(out)["walls"]
    assert code == 0 and len(walls) == 5
    assert set(walls[0]) == {"normal", "witness", "witness_square", "witness_pairing", "kind",
                             "totally_semistable"}
    code, out, _ = run(capsys, "nef", "--lattice", M1, "--v=1,0,-6", "--region", region,
                       "--ample", ample, "--format", "table")
    assert "flopping" in out
    code, out, _ = run(capsys, "movable", "--lattice", M1, "--v", "1,0,-6", "--region",
                       "0,-1,0;2/5,-1,12/5", "--ample", ample)
    assert sorted(w["witness_pairing"] for w in json.loads(out)["walls"]) == [1, 2]
    code, out, _ = run(capsys, "mori", "--lattice", M1, "--v=1,0,-6", "--region", region,
                       "--ample", ample)
    assert len(json.loads(out)["generators"]) == 5
    code, out, _ = run(capsys, "effective", "--lattice", M1, "--v", "1,0,-6", "--ample", ample)
    assert [-1, 0, -6] in json.loads(out)["generators"]
    code, out, _ = run(capsys, "fibration", "--lattice", M1, "--v", "1,0,-1")
    assert json.loads(out)["complete"] is True
    code, out, _ = run(capsys, "weyl", "--lattice", M1, "--v", "1,0,-1", "--D=-1,-3,-1",
                       "--exceptional=-1,0,-1")
    data = json.loads(out)
    assert data["D"] == [{"num": "1", "den": "1"}, {"num": "-3", "den": "1"}, {"num": "1", "den": "1"}]
    code, _, err = run(capsys, "nef", "--lattice", M1, "--v", "1,0,-6", "--region", "1/2,-1,3",
                       "--ample", ample)
    assert code == 2 and "positive" in err


def test_wall_lattice_commands(capsys):
    code, out, _ = run(capsys, "minimal", "--gram2=-2,3,-2", "--vh", "1,1")
    assert json.loads(out)["v0"] == [1, 1]
    code, out, _ = run(capsys, "orbit", "--gram2=-2,3,-2", "--vh", "1,1", "--count", "1")
    assert json.loads(out)["orbit"] == [[2, 1], [1, 1], [1, 2]]


def test_flops_command(capsys):
    lat = '{"kind":"gram","rank":2,"gram":[[-4,60],[60,4]]}'
    code, out, _ = run(capsys, "flops", "--lattice", lat, "--v", "3,2", "--strict")
    data = json.loads(out)
    assert code == 0 and data["connected"] == 2
    lat = '{"kind":"gram","rank":2,"gram":[[12,-1],[-1,0]]}'
    code, _, err = run(capsys, "flops", "--lattice", lat, "--v", "1,0", "--strict")
    assert code == 2 and "isotropic" in err


def test_pair(capsys):
    code, out, _ = run(capsys, "pair", "--lattice", M1, "--u", "1,0,-6", "--w", "2,-3,5")
    assert json.loads(out) == {"pairing": 7}


def test_golden_check_and_mismatch(capsys, tmp_path):
    assert run(capsys, "golden", "check", "all")[0] == 0
    for name in golden.NAMES:
        shutil.copy(golden.default_dir() / f"{name}.json", tmp_path / f"{name}.json")
    data = json.loads((tmp_path / "ex13_4.json").read_text())
    data["rows"][4]["label"] = "flop"
    (tmp_path / "ex13_4.json").write_text(json.dumps(data, indent=2) + "\n")
    code, out, _ = run(capsys, "golden", "check", "ex13_4", "--dir", str(tmp_path))
    assert code == 3
    diff = json.loads(out)["mismatch"]["ex13_4"]
    assert diff == [{"path": "$.rows[4].label", "expected": "flop", "actual": "fake wall"}]
    assert run(capsys, "golden", "write", "ex14_4", "--dir", str(tmp_path))[0] == 0
    assert run(capsys, "golden", "check", "nonsense")[0] == 1


def test_golden_contents_pin_reference_values():
    d = json.loads((golden.default_dir() / "ex13_2.json").read_text())
    assert d["nef"]["gamma"] == {"num": "3658", "den": "657"}
    assert d["nef"]["spherical"] == [329, -59, 328]
    d = json.loads((golden.default_dir() / "ex13_4.json").read_text())
    assert [r["a"] for r in d["rows"]] == [[0, 0, -1], [1, -1, 2], [1, -1, 1], [1, -1, 0],
                                           [2, -3, 5], [1, -2, 5], [-1, 3, -10], [1, -2, 4]]


def test_serialization():
    assert encode(2 ** 60) == str(2 ** 60)
    assert encode(2 ** 53 - 1) == 2 ** 53 - 1
    assert encode(Fraction(-6, 4)) == {"num": "-3", "den": "2"}
    assert parse_rational({"num": "-3", "den": "2"}) == Fraction(-3, 2)
    assert dumps({"a": (1, 2)}) == dumps({"a": [1, 2]})
    with pytest.raises(ValueError):
        lattice_from_json({"kind": "gram", "rank": 3, "gram": [[1]]})
    with pytest.raises(ValueError):
        lattice_from_json({"kind": "nope"})


def test_pell_large_values_are_strings(capsys):
    code, out, _ = run(capsys, "pell", "421")
    data = json.loads(out)
    assert isinstance(data["x"], str) and int(data["x"]) ** 2 - 421 * int(data["y"]) ** 2 == 1
