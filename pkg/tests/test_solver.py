import random
from fractions import Fraction

import pytest

from adend import catalog, sampling
from adend.bimodule import NonAssociativeError
from adend.groebner import buchberger
from adend.poly import parse_poly
from adend.solver import (
    CapExceeded,
    SolverError,
    SymbolicAlgebra,
    check_point_anti_rb,
    check_point_compatible,
    extract_system,
    full_point,
    grid_points,
    is_homomorphism,
    iso_invariants,
    iso_search,
    operator_at,
    sample_points,
    solve_anti_dendriform_free,
    solve_anti_rb,
    solve_compatible_anti_dendriform,
    solve_system,
    tensor_names,
    unknown_tensor,
)
from adend.algebra import LinearMap

TRI = {"tri_r": "rop", "tri_l": "lop"}


def test_tensor_names_are_one_based():
    assert tensor_names(1, "r") == ["r_111"]
    assert tensor_names(2, "l")[:3] == ["l_111", "l_112", "l_121"]


def test_extract_system_one_dim():
    names = ("r_111", "l_111")
    salg = SymbolicAlgebra(1, ("e1",), names, {
        "rop": unknown_tensor(1, "r", names), "lop": unknown_tensor(1, "l", names)})
    system = extract_system(salg, "anti-dendriform", TRI)
    assert all(p.vars == names for p in system)
    assert all(p.degree() == 2 for p in system)
    assert len({str(p) for p in system}) == len(system)
    # a point on the variety: both products zero
    assert all(p.evaluate({"r_111": 0, "l_111": 0}) == 0 for p in system)
    assert any(p.evaluate({"r_111": 1, "l_111": 0}) != 0 for p in system)


def test_extract_system_constant_algebra_is_empty_when_it_holds():
    salg = SymbolicAlgebra.from_algebra(catalog.algebra("B2"))
    assert extract_system(salg, "anti-dendriform", TRI) == []


def test_one_dim_free_solve_is_trivial():
    sol = solve_anti_dendriform_free(1)
    assert sol.consistent
    assert sol.groebner_strings() == ["r_111", "l_111"]
    assert sol.free_vars == ()
    # the raw ideal is not radical
    assert len(sol.raw_basis.as_strings()) == 3


class TestCompatible:
    def test_a2_leaves_only_r112(self):
        sol = solve_compatible_anti_dendriform(catalog.algebra("A2"), "mul")
        assert sol.free_vars == ("r_112",)
        assert sol.groebner_strings() == ["r_111", "r_121", "r_122", "r_211", "r_212", "r_221", "r_222"]
        for v in sol.variables:
            assert sol.forces_zero(v) == (v != "r_112")

    def test_a1_has_more_than_one_free_direction(self):
        sol = solve_compatible_anti_dendriform(catalog.algebra("A1"), "mul")
        assert sol.free_vars == ("r_112", "r_222")
        assert not sol.forces_zero("r_221")

    def test_a1_counterexample_point(self):
        # e2 > e2 = e1, e2 < e2 = -e1 lies outside the family reached from the first basis vector
        sol = solve_compatible_anti_dendriform(catalog.algebra("A1"), "mul")
        point = {v: Fraction(int(v == "r_221")) for v in sol.variables}
        assert sol.contains_point(point)
        assert check_point_compatible(sol, point)
        alg = sol.symbolic.evaluate(point)
        assert alg.nonzero_products("rop") == [("e2", "e2", "e1")]
        assert alg.nonzero_products("lop") == [("e2", "e2", "-e1")]

    def test_samples_are_sound(self):
        for entry in ("A1", "A2"):
            sol = solve_compatible_anti_dendriform(catalog.algebra(entry), "mul")
            points = sample_points(sol)
            assert points
            for p in points:
                assert sol.contains_point(p)
                assert check_point_compatible(sol, p)

    def test_non_associative_is_an_error(self):
        bad = catalog.algebra("A2").with_op("odd", sampling.random_tensor(2, random.Random(1), density=1))
        with pytest.raises(NonAssociativeError):
            solve_compatible_anti_dendriform(bad, "odd")


class TestAntiRotaBaxter:
    def test_ex224(self):
        sol = solve_anti_rb(catalog.algebra("EX224"), "mul")
        assert sol.to_json() == {"consistent": True, "groebner": ["a11", "a12", "a22"], "free_vars": ["a21"]}

    def test_idempotent(self):
        sol = solve_anti_rb(catalog.algebra("IDEM1"), "mul")
        assert sol.groebner_strings() == ["a11"] and sol.free_vars == ()

    def test_trivial_algebra_is_the_zero_ideal(self):
        sol = solve_anti_rb(catalog.algebra("A1"), "mul")
        assert sol.groebner_strings() == []
        assert sol.free_vars == ("a11", "a12", "a21", "a22")

    @pytest.mark.parametrize("entry", ["A2", "EX224", "IDEM1"])
    def test_points_on_grid_are_operators(self, entry):
        alg = catalog.algebra(entry)
        sol = solve_anti_rb(alg, "mul")
        for point in grid_points(sol.variables):
            on = sol.contains_point(point)
            assert check_point_anti_rb(alg, "mul", point).is_operator == on
            if on:
                assert operator_at(sol, point).domain_dim == alg.dim

    def test_samples_with_linear_part(self):
        sol = solve_anti_rb(catalog.algebra("EX224"), "mul")
        points = sample_points(sol, limit=3)
        assert len(points) == 3
        assert sol.to_json(points)["sample_points"][0].keys() == {"a11", "a12", "a21", "a22"}


class TestPinsAndCaps:
    def test_pin_everything_but_one(self):
        b2 = {f"r_{i}{j}{k}": 0 for i in (1, 2) for j in (1, 2) for k in (1, 2)}
        b2.update({f"l_{i}{j}{k}": 0 for i in (1, 2) for j in (1, 2) for k in (1, 2)})
        del b2["l_112"]
        b2["r_112"] = 1
        sol = solve_anti_dendriform_free(2, pins=b2)
        assert sol.consistent and sol.variables == ("l_112",)
        assert sol.free_vars == ("l_112",)
        assert full_point(sol, {"l_112": Fraction(3)})["r_112"] == 1

    def test_pin_everything(self):
        pins = {v: 0 for v in tensor_names(2, "r") + tensor_names(2, "l")}
        sol = solve_anti_dendriform_free(2, pins=pins)
        assert sol.consistent and sol.groebner_strings() == []

    def test_inconsistent_pins(self):
        # e1 > e1 = e1 alone is not anti-dendriform in dimension one
        sol = solve_anti_dendriform_free(1, pins={"r_111": 1})
        assert not sol.consistent
        assert sol.to_json()["groebner"] == ["1"]

    def test_unknown_pin(self):
        with pytest.raises(SolverError, match="unknown pinned variable"):
            solve_anti_dendriform_free(1, pins={"q_111": 1})

    def test_cap(self, monkeypatch):
        with pytest.raises(CapExceeded):
            solve_anti_dendriform_free(4)
        monkeypatch.setenv("ADEND_MAX_DIM", "1")
        with pytest.raises(CapExceeded, match="ADEND_MAX_DIM"):
            solve_anti_dendriform_free(2)
        monkeypatch.setenv("ADEND_MAX_DIM", "many")
        with pytest.raises(SolverError, match="must be an integer"):
            solve_anti_dendriform_free(1)


class TestIsomorphism:
    def test_self_iso_has_identity_witness(self):
        b2 = catalog.algebra("B2")
        res = iso_search(b2, b2, ("rop", "lop"))
        assert res.consistent and res.witness == LinearMap.identity(2)
        assert res.to_json()["rational_witness"] == [["1", "0"], ["0", "1"]]

    def test_b1_b2_not_isomorphic(self):
        res = iso_search(catalog.algebra("B1"), catalog.algebra("B2"), ("rop", "lop"))
        assert not res.consistent and res.witness is None

    def test_b3_parameters_not_isomorphic(self):
        res = iso_search(catalog.algebra("B3", lam=1), catalog.algebra("B3", lam=2), ("rop", "lop"))
        assert not res.consistent

    def test_transported_copy_is_found(self):
        rng = random.Random(6)
        b3 = catalog.algebra("B3", lam=3)
        g = sampling.random_invertible(2, rng, values=(0, 1))
        other = sampling.transport_algebra(b3, g)
        res = iso_search(b3, other, ("rop", "lop"))
        assert res.consistent and res.witness is not None
        assert is_homomorphism(res.witness, b3, other, ("rop", "lop"))

    def test_dimension_mismatch(self):
        with pytest.raises(SolverError, match="dimensions differ"):
            iso_search(catalog.algebra("B2"), catalog.algebra("EX3D"), ("rop",))

    def test_invariants_separate_b_family(self):
        inv = {e: iso_invariants(catalog.algebra(e), ("rop", "lop")) for e in ("B1", "B2", "A1_2")}
        assert inv["B1"]["product_span"] == 0
        assert inv["B2"]["annihilators"] == {"rop": (2, 2, 0), "lop": (1, 1, 1)}
        assert inv["B2"] != inv["A1_2"]


def test_solve_system_generic():
    names = ("x", "y")
    polys = [parse_poly(names, "x*y - 1"), parse_poly(names, "x - y")]
    sol = solve_system(polys, names)
    assert sol.consistent and sol.free_vars == ()
    assert sol.basis.as_strings() == buchberger(polys).as_strings()
    assert not sol.forces_zero("x")
