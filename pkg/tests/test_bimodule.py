import json
import random
from fractions import Fraction

import pytest

from adend import catalog, sampling
from adend.algebra import AlgebraFormatError, LinearMap
from adend.bimodule import (
    Bimodule,
    BimoduleError,
    NonAssociativeError,
    check_anti_1_cocycle,
    check_anti_O,
    check_anti_rb,
    check_bimodule,
    check_negative_pair,
    check_on_double,
    double_space,
    dual_bimodule,
    hat_identity,
    induced_ops_on_module,
    load_bimodule,
    semidirect,
)
from adend.structures import check_structure


def M(rows):
    return LinearMap.from_rows(rows)


class TestBimodules:
    @pytest.mark.parametrize("entry", ["A2", "EX224", "IDEM1"])
    def test_regular_is_bimodule(self, entry):
        m = Bimodule.regular(catalog.algebra(entry), "mul")
        assert check_bimodule(m)
        assert check_bimodule(dual_bimodule(m))

    def test_semidirect_of_regular_is_associative(self):
        m = Bimodule.regular(catalog.algebra("EX224"), "mul")
        alg = semidirect(m)
        assert alg.basis == ("e1", "e2", "e1'", "e2'")
        assert check_structure(alg, "associative", {"mul": "mul"})

    def test_dual_semidirect_products(self):
        # dual of (A, -L_>, -R_<) for A1_2
        m = dual_bimodule(Bimodule.negative_pair(catalog.algebra("A1_2"), "rop", "lop"))
        assert check_bimodule(m)
        alg = semidirect(m)
        assert alg.basis == ("e1", "e2", "e1*", "e2*")
        assert alg.nonzero_products("mul") == [("e1", "e2*", "e1*"), ("e2*", "e1", "-e1*")]

    def test_broken_module_is_rejected(self):
        base = catalog.algebra("IDEM1")
        m = Bimodule(base, "mul", 1, (M([[2]]),), (M([[0]]),))
        v = check_bimodule(m)
        assert not v and v.identity == "l(x.y) = l(x)l(y)"
        with pytest.raises(BimoduleError, match="not a bimodule"):
            semidirect(m)

    def test_shape_errors(self):
        base = catalog.algebra("A2")
        with pytest.raises(BimoduleError, match="need 2 matrices"):
            Bimodule(base, "mul", 1, (M([[0]]),), (M([[0]]),))
        with pytest.raises(BimoduleError, match="is not 1x1"):
            Bimodule(base, "mul", 1, (M([[0]]), M([[0, 0], [0, 0]])), (M([[0]]), M([[0]])))


class TestNegativePair:
    @pytest.mark.parametrize("entry", catalog.two_op_ids())
    def test_catalog(self, entry):
        alg = catalog.algebra(entry)
        assert check_negative_pair(alg, "rop", "lop")
        assert check_on_double(alg, "rop", "lop")

    def test_agrees_with_identity_check(self):
        rng = random.Random(8)
        for _ in range(60):
            alg = sampling.random_two_op_mixed(rng)
            want = check_structure(alg, "anti-dendriform", {"tri_r": "rop", "tri_l": "lop"}).holds
            assert check_negative_pair(alg, "rop", "lop").holds == want
            assert check_on_double(alg, "rop", "lop").holds == want

    def test_double_space_shape(self):
        dbl = double_space(catalog.algebra("B2"), "rop", "lop")
        assert dbl.dim == 4
        assert dbl.nonzero_products("mul") == [("e1", "e1", "e2"), ("e1'", "e1", "-e2'")]


class TestAntiRotaBaxter:
    def test_ex224_family(self):
        alg = catalog.algebra("EX224")
        for t in (1, -3, Fraction(1, 2)):
            rep = check_anti_rb(M([[0, 0], [t, 0]]), alg, "mul")
            assert rep.is_operator and rep.is_strong

    def test_identity_is_not_anti_rb_on_idempotent(self):
        rep = check_anti_rb(M([[1]]), catalog.algebra("IDEM1"), "mul")
        assert not rep.is_operator and not rep.is_strong
        assert rep.first_failure[1] == ("e", "e")

    def test_non_associative_is_an_error(self):
        bad = catalog.algebra("EX224").with_op("odd", sampling.random_tensor(2, random.Random(1), density=1))
        with pytest.raises(NonAssociativeError):
            check_anti_rb(LinearMap.identity(2), bad, "odd")

    def test_hat_identity_strong_on_a1_2(self):
        alg, P = hat_identity(catalog.algebra("A1_2"), "rop", "lop")
        rep = check_anti_rb(P, alg, "mul")
        assert rep.is_operator and rep.is_strong

    def test_hat_identity_not_strong_on_ex3d(self):
        alg, P = hat_identity(catalog.algebra("EX3D"), "rop", "lop")
        rep = check_anti_rb(P, alg, "mul")
        assert rep.is_operator and not rep.is_strong
        assert rep.strong_failure[1] == ("e1", "e1'", "e1'")
        assert rep.to_json()["strong_failure"]["witness"] == ["e1", "e1'", "e1'"]


class TestAntiO:
    def test_identity_on_negative_pair(self):
        alg = catalog.algebra("B3", lam=2)
        m = Bimodule.negative_pair(alg, "rop", "lop")
        rep = check_anti_O(LinearMap.identity(2), m)
        assert rep.is_operator
        induced = induced_ops_on_module(LinearMap.identity(2), m)
        assert induced.tensor("rop") == alg.tensor("rop")
        assert induced.tensor("lop") == alg.tensor("lop")

    def test_zero_is_always_an_operator(self):
        m = Bimodule.regular(catalog.algebra("EX224"), "mul")
        assert check_anti_O(LinearMap.zero(2, 2), m).is_strong

    def test_non_operator_is_refused_for_induction(self):
        m = Bimodule.regular(catalog.algebra("IDEM1"), "mul")
        assert not check_anti_O(M([[1]]), m).is_operator
        with pytest.raises(BimoduleError, match="not an anti-O-operator"):
            induced_ops_on_module(M([[1]]), m)


def test_anti_1_cocycle():
    m = Bimodule.regular(catalog.algebra("A2"), "mul")
    assert check_anti_1_cocycle(LinearMap.zero(2, 2), m)
    v = check_anti_1_cocycle(LinearMap.identity(2), m)
    assert not v and v.witness == ("e1", "e1")


class TestJson:
    def test_load_with_relative_base(self, tmp_path):
        (tmp_path / "base.json").write_text(json.dumps(
            {"basis": ["e"], "ops": {"mul": {"e,e": {"e": "1"}}}}))
        (tmp_path / "m.json").write_text(json.dumps(
            {"base": "base.json", "op": "mul", "space_dim": 1, "l": {"e": [["1"]]}, "r": {"e": [["1"]]}}))
        m = load_bimodule(tmp_path / "m.json")
        assert check_bimodule(m)
        assert m.to_json()["l"] == {"e": [["1"]]}

    @pytest.mark.parametrize("data, where", [
        ({"op": "mul", "space_dim": 1}, "base"),
        ({"base": {"basis": ["e"], "ops": {"mul": {}}}, "op": "x", "space_dim": 1}, "op"),
        ({"base": {"basis": ["e"], "ops": {"mul": {}}}, "op": "mul", "space_dim": -1}, "space_dim"),
        ({"base": {"basis": ["e"], "ops": {"mul": {}}}, "op": "mul", "space_dim": 1, "l": {"f": [["1"]]}}, "l.f"),
        ({"base": {"basis": ["e"], "ops": {"mul": {}}}, "op": "mul", "space_dim": 1, "l": {"e": [["1", "2"]]}}, "l.e"),
    ])
    def test_format_errors(self, tmp_path, data, where):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(data))
        with pytest.raises(AlgebraFormatError) as info:
            load_bimodule(path)
        assert where in str(info.value)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{")
        with pytest.raises(AlgebraFormatError, match="invalid JSON"):
            load_bimodule(path)
