import random
from fractions import Fraction

import pytest

from adend import catalog, sampling
from adend.algebra import BilinForm
from adend.forms import (
    FormError,
    anti_pre_lie_from_cocycle,
    check_invariance_anti_dendriform,
    check_invariance_anti_pre_lie,
    check_invariance_lemma,
    classify_form,
    form_equivalence_check,
    form_on_semidirect,
    hyperbolic_form,
    psi_of_form,
    reconstruct_anti_dendriform,
)
from adend.structures import check_structure
from adend.transforms import commutator


def F(rows):
    return BilinForm.from_rows(rows)


class TestClassify:
    def test_symmetric_degenerate_on_a2(self):
        rep = classify_form(F([[1, 0], [0, 0]]), catalog.algebra("A2"), "mul")
        assert rep.symmetric and not rep.antisymmetric and not rep.nondegenerate
        assert rep.connes and rep.commutative_connes and rep.commutative_2cocycle

    def test_zero_row_is_degenerate(self):
        rep = classify_form(F([[0, 0], [3, 1]]), catalog.algebra("A1"), "mul")
        assert not rep.nondegenerate and not rep.symmetric

    def test_antisymmetric(self):
        rep = classify_form(F([[0, 1], [-1, 0]]), catalog.algebra("A1"), "mul")
        assert rep.antisymmetric and rep.nondegenerate and not rep.commutative_connes

    def test_cyclic_failure(self):
        # B(e1.e1, e2) + B(e1.e2, e1) + B(e2.e1, e1) = 1 + 1 + 0 on EX224 with identity Gram
        rep = classify_form(F([[1, 0], [0, 1]]), catalog.algebra("EX224"), "mul")
        assert not rep.connes

    def test_size_mismatch(self):
        with pytest.raises(FormError, match="size 3"):
            classify_form(F([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), catalog.algebra("A2"), "mul")

    def test_json(self):
        data = classify_form(hyperbolic_form(1), catalog.algebra("A1").only_ops("mul"), "mul").to_json()
        assert set(data) == {"symmetric", "antisymmetric", "nondegenerate", "connes",
                             "commutative_connes", "commutative_2cocycle"}


class TestReconstruction:
    def test_a1_2_semidirect(self):
        big, B = form_on_semidirect(catalog.algebra("A1_2"), "rop", "lop")
        out = reconstruct_anti_dendriform(B, big.only_ops("mul"), "mul")
        f1, f2, f3, f4 = out.basis
        assert ((f1, f4, f3)) in out.nonzero_products("lop")
        assert ((f4, f1, "-" + f3)) in out.nonzero_products("rop")
        assert all((a, b) != (f1, f4) for a, b, _ in out.nonzero_products("rop"))
        assert check_structure(out, "anti-dendriform", {"tri_r": "rop", "tri_l": "lop"})
        assert check_invariance_lemma(B, out, "rop", "lop")

    @pytest.mark.parametrize("entry", ["B1", "B2", "A1_2"])
    def test_recovers_dual_structure_on_catalog(self, entry):
        big, B = form_on_semidirect(catalog.algebra(entry), "rop", "lop")
        out = reconstruct_anti_dendriform(B, big.only_ops("mul"), "mul")
        assert check_invariance_anti_dendriform(B, out, "rop", "lop")
        assert form_equivalence_check(B, out, "rop", "lop")

    def test_degenerate_form_is_refused(self):
        with pytest.raises(FormError, match="degenerate"):
            reconstruct_anti_dendriform(F([[1, 0], [0, 0]]), catalog.algebra("A2"), "mul")

    def test_non_cocycle_is_refused(self):
        with pytest.raises(FormError, match="not a commutative Connes cocycle"):
            reconstruct_anti_dendriform(F([[1, 0], [0, 1]]), catalog.algebra("EX224"), "mul")

    def test_semidirect_needs_anti_dendriform(self):
        alg = catalog.algebra("B2").with_op("rop", catalog.algebra("EX224").tensor("mul"), replace=True)
        with pytest.raises(FormError, match="not anti-dendriform"):
            form_on_semidirect(alg, "rop", "lop")


def test_identity_gram_on_b2_is_not_invariant():
    v = check_invariance_anti_dendriform(F([[1, 0], [0, 1]]), catalog.algebra("B2"), "rop", "lop")
    assert not v
    assert v.witness == ("e1", "e1", "e2")


def test_equivalence_check_matches_invariance():
    rng = random.Random(4)
    for _ in range(25):
        alg = sampling.random_anti_dendriform_2d(rng)
        B = F([[Fraction(rng.randint(-2, 2)) for _ in range(2)] for _ in range(2)])
        want = B.is_nondegenerate() and bool(check_invariance_anti_dendriform(B, alg, "rop", "lop"))
        assert form_equivalence_check(B, alg, "rop", "lop").holds == want


def test_psi_matrix_is_gram_transpose():
    B = F([[1, 2], [3, 4]])
    assert [list(r) for r in psi_of_form(B).matrix] == [[1, 3], [2, 4]]


def test_anti_pre_lie_from_cocycle():
    # the 2-dim nonabelian Lie algebra [e1, e2] = e2; every symmetric form is a 2-cocycle on it
    lie = commutator(catalog.algebra("EX224"), "mul").only_ops("bracket")
    B = F([[0, 1], [1, 0]])
    assert classify_form(B, lie, "bracket").commutative_connes
    out = anti_pre_lie_from_cocycle(B, lie, "bracket")
    assert check_invariance_anti_pre_lie(B, out, "circ")
    assert check_structure(out, "anti-pre-lie", {"circ": "circ"})
    # its commutator is the original bracket
    again = commutator(out, "circ", name="c2")
    assert again.tensor("c2") == lie.tensor("bracket")
