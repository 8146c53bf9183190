import json
import random
import warnings
from fractions import Fraction

import pytest

from adend import catalog, sampling
from adend.structures import (
    ForbiddenParameter,
    StructureError,
    check_equiv_characterizations,
    check_structure,
    get_structure,
    load_structure,
    registry,
    resolve_binding,
    structure_from_json,
)

TRI = {"tri_r": "rop", "tri_l": "lop"}


def test_registry_has_core_bundles():
    names = set(registry())
    for n in ("associative", "lie", "dendriform", "anti-dendriform", "pre-lie", "anti-pre-lie",
              "novikov", "admissible-novikov", "novikov-type-dendriform", "admissible-ntd"):
        assert n in names


def test_unknown_structure():
    with pytest.raises(StructureError, match="unknown structure"):
        get_structure("not-a-thing")


def test_binding_by_name_or_symbol():
    defn = get_structure("anti-dendriform")
    assert resolve_binding(defn, TRI) == {">": "rop", "<": "lop"}
    assert resolve_binding(defn, {">": "rop", "<": "lop"}) == {">": "rop", "<": "lop"}
    with pytest.raises(StructureError, match="misses slot"):
        resolve_binding(defn, {"tri_r": "rop"})
    with pytest.raises(StructureError, match="no slot"):
        resolve_binding(defn, {"tri_r": "rop", "tri_l": "lop", "mul": "x"})


def test_zero_binding():
    # binding a slot to the zero op
    alg = catalog.algebra("A2")
    assert check_structure(alg, "anti-dendriform", {"tri_r": "0", "tri_l": "0"})


@pytest.mark.parametrize("entry", catalog.two_op_ids())
def test_catalog_two_op_entries_are_anti_dendriform(entry):
    assert check_structure(catalog.algebra(entry), "anti-dendriform", TRI)


def test_failure_carries_a_witness():
    alg = catalog.algebra("EX224").with_op("rop", catalog.algebra("EX224").tensor("mul")).with_op(
        "lop", catalog.algebra("A1").tensor("mul"))
    v = check_structure(alg, "anti-dendriform", TRI)
    assert not v
    assert len(v.witness) == 3 and v.identity


class TestParametric:
    def test_q_required(self):
        with pytest.raises(StructureError, match="needs a value for q"):
            check_structure(catalog.algebra("A2_NTD"), "dendri-q-cond", {"succ": "succ", "prec": "prec"})

    @pytest.mark.parametrize("q", [0, 1, -1, "1", "-1/1"])
    def test_forbidden_q(self, q):
        with pytest.raises(ForbiddenParameter):
            get_structure("dendri-q-cond").instantiate(q)

    def test_q_on_plain_bundle(self):
        with pytest.raises(StructureError, match="takes no parameter q"):
            check_structure(catalog.algebra("A2"), "associative", q=2)

    def test_instantiated_name(self):
        assert get_structure("anti-pre-lie-q-cond").instantiate(Fraction(1, 2)).name == "anti-pre-lie-q-cond[q=1/2]"


EQUIV_PAIRS = [
    ("anti-dendriform", "anti-dendriform-equiv", "tri"),
    ("admissible-ntd", "admissible-ntd-equiv", "tri"),
    ("novikov-type-dendriform", "novikov-type-dendriform-equiv", "dend"),
]


@pytest.mark.parametrize("pair", EQUIV_PAIRS, ids=lambda p: p[0])
def test_equivalent_pairs_agree_on_random_algebras(pair):
    a, b, kind = pair
    rng = random.Random(11)
    for _ in range(40):
        if kind == "tri":
            alg = sampling.random_two_op_mixed(rng)
            binding = TRI
        else:
            alg = sampling.random_two_op(2, rng, names=("succ", "prec"))
            binding = {"succ": "succ", "prec": "prec"}
        assert check_equiv_characterizations(alg, (a, b), binding)


def test_equiv_needs_shared_slots():
    with pytest.raises(StructureError, match="do not share slots"):
        check_equiv_characterizations(catalog.algebra("B2"), ("anti-dendriform", "associative"), TRI)


class TestJsonBundles:
    def test_round_trip_of_registered_bundle(self):
        defn = get_structure("anti-pre-lie")
        again = structure_from_json(defn.to_json())
        assert again.slot_names == defn.slot_names
        assert [i.terms for i in again.identities] == [i.terms for i in defn.identities]

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "comm.json"
        path.write_text(json.dumps({"name": "commutative", "slots": {"mul": "."},
                                    "identities": ["x,y: x.y = y.x"]}))
        defn = load_structure(path)
        assert check_structure(catalog.algebra("A2"), defn, {"mul": "mul"})
        assert not check_structure(catalog.algebra("EX224"), defn, {"mul": "mul"})

    def test_list_slots_and_derived(self):
        defn = structure_from_json({"name": "sum-assoc", "slots": [">", "<"],
                                    "derived": {"s": "x,y: x>y + x<y"},
                                    "identities": ["x,y,z: (x s y) s z = x s (y s z)"]})
        assert check_structure(catalog.algebra("B3", lam=2), defn, {">": "rop", "<": "lop"})

    @pytest.mark.parametrize("data, msg", [
        ({"slots": ["."], "identities": []}, "misses field"),
        ({"name": "n", "slots": ["."], "identities": ["x,y: x*y = 0"]}, "unknown op"),
        ({"name": "n", "slots": ["0"], "identities": []}, "cannot be used"),
        ({"name": "n", "slots": ["."], "derived": {"s": "x,y: x q y"}, "identities": []}, "unknown op"),
    ])
    def test_bad_bundles(self, data, msg):
        with pytest.raises(StructureError, match=msg):
            structure_from_json(data)


def test_default_binding_uses_rop_lop_convention():
    assert check_structure(catalog.algebra("B2"), "anti-dendriform")
    with pytest.raises(StructureError, match="no binding given"):
        check_structure(catalog.algebra("B2"), "dendriform")
