import json

import pytest

from adend import catalog
from adend.algebra import save_algebra
from adend.cli import OK, FAIL, USAGE, parse_pairs, run


@pytest.fixture
def files(tmp_path):
    out = {}
    for entry in ("EX224", "B2", "A2", "EX3D", "IDEM1"):
        path = tmp_path / f"{entry.lower()}.json"
        save_algebra(catalog.algebra(entry), path)
        out[entry] = str(path)
    return out


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_parse_pairs():
    assert parse_pairs("a=b, c = d") == {"a": "b", "c": "d"}
    assert parse_pairs(None) == {}


def test_solve_anti_rb_exact_output(files, capsys):
    assert run(["solve", "anti-rb", files["EX224"], "--op", "mul", "--json"]) == OK
    assert capsys.readouterr().out.strip() == '{"consistent":true,"groebner":["a11","a12","a22"],"free_vars":["a21"]}'


def test_solve_samples_only_when_asked(files, capsys):
    assert run(["solve", "anti-rb", files["EX224"], "--json", "--samples", "2"]) == OK
    data = _json(capsys)
    assert len(data["sample_points"]) == 2
    assert all(p["a11"] == "0" for p in data["sample_points"])


def test_solve_free_with_pins(capsys):
    assert run(["solve", "free", "--dim", "1", "--json"]) == OK
    assert _json(capsys) == {"consistent": True, "groebner": ["r_111", "l_111"], "free_vars": []}
    assert run(["solve", "free", "--dim", "1", "--pin", "r_111=1", "--json"]) == OK
    assert _json(capsys)["consistent"] is False
    assert run(["solve", "free"]) == USAGE


def test_solve_iso(files, capsys):
    assert run(["solve", "iso", files["B2"], "catalog:B1", "--json"]) == OK
    data = _json(capsys)
    assert data["consistent"] is False and data["rational_witness"] is None


class TestCheck:
    def test_structure_pass_and_fail(self, files, capsys):
        assert run(["check", "structure", "anti-dendriform", files["B2"]]) == OK
        assert "holds" in capsys.readouterr().out
        assert run(["check", "structure", "admissible-ntd", files["EX3D"], "--json"]) == FAIL
        data = _json(capsys)
        assert data["holds"] is False and len(data["witness"]) == 3

    def test_structure_glob(self, files, capsys, tmp_path):
        assert run(["check", "structure", "associative", "--glob", str(tmp_path / "*.json"),
                    "--bind", "mul=mul", "--json"]) == USAGE  # B2 has no mul op
        capsys.readouterr()
        assert run(["check", "structure", "associative", files["A2"], files["EX224"], "--json"]) == OK
        assert set(_json(capsys)) == {files["A2"], files["EX224"]}

    def test_identity(self, files, capsys):
        assert run(["check", "identity", "x,y: x.y = y.x", files["EX224"]]) == FAIL
        out = capsys.readouterr().out
        assert "(e1, e2)" in out
        assert run(["check", "identity", "x,y,z: (x>y)>z = x>(y>z)", files["B2"],
                    "--bind", ">=rop"]) == OK

    def test_identity_syntax_error_is_usage(self, files, capsys):
        assert run(["check", "identity", "x,y: x.y.x = 0", files["EX224"]]) == USAGE
        assert "column" in capsys.readouterr().err

    def test_double_and_equiv(self, files, capsys):
        assert run(["check", "double", files["B2"]]) == OK
        capsys.readouterr()
        assert run(["check", "equiv", files["EX3D"], "--json"]) == OK
        assert _json(capsys)["agree"] is True
        assert run(["check", "equiv", "--random", "20", "--seed", "3", "--json"]) == OK
        data = _json(capsys)
        assert data["instances"] == 20 and data["disagreements"] == 0
        assert run(["check", "equiv"]) == USAGE

    def test_q_bundle_needs_allowed_q(self, capsys):
        assert run(["check", "structure", "dendri-q-cond", "catalog:A2_NTD", "--q", "1"]) == USAGE
        assert "q not in" in capsys.readouterr().err
        assert run(["check", "structure", "dendri-q-cond", "catalog:A2_NTD", "--q", "2"]) in (OK, FAIL)


class TestOps:
    def test_anti_rb_strong(self, files, capsys):
        assert run(["op", "anti-rb", files["EX224"], "--matrix", "[[0,0],[1,0]]", "--strong", "--json"]) == OK
        assert _json(capsys) == {"is_operator": True, "is_strong": True}

    def test_anti_rb_failure_text(self, files, capsys):
        assert run(["op", "anti-rb", files["IDEM1"], "--matrix", "[[1]]"]) == FAIL
        assert "fails at (e, e)" in capsys.readouterr().out

    def test_wrong_size_matrix(self, files, capsys):
        assert run(["op", "anti-rb", files["EX224"], "--matrix", "[[1]]"]) == USAGE
        assert "2x2" in capsys.readouterr().err


def test_transform_and_derive(files, tmp_path, capsys):
    out = tmp_path / "ap.json"
    assert run(["transform", "anti-pre-lie", files["B2"], "--ops", "rop,lop", "-o", str(out)]) == OK
    assert run(["check", "structure", "anti-pre-lie", str(out), "--bind", "circ=circ"]) == OK
    assert run(["transform", "q-single", files["A2"], "--ops", "mul"]) == USAGE
    assert run(["derive", "x,y: x.y - y.x", files["EX224"], "--name", "br", "--json"]) == OK
    capsys.readouterr()
    assert run(["transform", "nope", files["A2"], "--ops", "mul"]) == USAGE


def test_construct_and_form(files, tmp_path, capsys):
    assert run(["construct", "double", files["B2"], "--json"]) == OK
    assert len(_json(capsys)["basis"]) == 4
    big = tmp_path / "big.json"
    assert run(["form", "semidirect", "catalog:A1_2", "-o", str(big)]) == OK
    capsys.readouterr()
    assert run(["form", "classify", str(big), "--json"]) == OK
    assert _json(capsys)["commutative_connes"] is True
    assert run(["form", "reconstruct", str(big), "--json"]) == OK
    assert set(_json(capsys)["ops"]) == {"mul", "rop", "lop"}


def test_catalog_verbs(capsys):
    assert run(["catalog", "list"]) == OK
    assert "EX224" in capsys.readouterr().out
    assert run(["catalog", "show", "B3", "--param", "lam=2", "--json"]) == OK
    assert _json(capsys)["params"] == {"lam": "2"}
    assert run(["catalog", "self-test"]) == OK
    capsys.readouterr()
    assert run(["catalog", "show", "Z9"]) == USAGE
    assert "unknown catalog id" in capsys.readouterr().err


class TestValidate:
    def test_good_files(self, files, capsys):
        assert run(["validate", files["B2"], "--json"]) == OK
        assert _json(capsys)[files["B2"]] == {"ok": True, "kind": "algebra"}

    def test_bad_json_reports_position(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"basis": ["e1"],\n "ops": }')
        assert run(["validate", str(bad)]) == USAGE
        out = capsys.readouterr().out
        assert "line 2" in out

    def test_bad_field_is_named(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"basis": ["e1"], "ops": {"mul": {"e1,e9": {"e1": "1"}}}}))
        assert run(["validate", str(bad), "--json"]) == USAGE
        assert "e9" in _json(capsys)[str(bad)]["error"]

    def test_bimodule_that_is_not_one(self, tmp_path, capsys):
        bad = tmp_path / "m.json"
        bad.write_text(json.dumps({"base": {"basis": ["e"], "ops": {"mul": {"e,e": {"e": "1"}}}},
                                   "op": "mul", "space_dim": 1, "l": {"e": [["2"]]}}))
        assert run(["validate", str(bad)]) == USAGE
        assert "not a bimodule" in capsys.readouterr().out


def test_usage_errors(capsys):
    assert run([]) == USAGE
    assert run(["check", "structure", "associative"]) == USAGE
    assert run(["nonsense"]) == USAGE
    assert run(["--help"]) == OK
