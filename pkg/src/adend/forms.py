"""Bilinear forms: Connes cocycles, invariance, and reconstruction of
compatible anti-dendriform structures from a form."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from . import linalg
from .algebra import (
    AlgebraError,
    AlgebraSpace,
    BilinForm,
    LinearMap,
    basis_vector,
    bilinear,
    freeze_tensor,
    tensor_combine,
    tensor_opposite,
)
from .bimodule import Bimodule, dual_bimodule, semidirect
from .identity import Verdict
from .structures import check_structure


class FormError(AlgebraError):
    pass


@dataclass(frozen=True)
class FormReport:
    symmetric: bool
    antisymmetric: bool
    nondegenerate: bool
    # cyclic condition B(xy,z) + B(yz,x) + B(zx,y) = 0, with no symmetry requirement
    connes: bool
    commutative_connes: bool
    commutative_2cocycle: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _check_shape(B: BilinForm, alg: AlgebraSpace) -> None:
    if B.dim != alg.dim:
        raise FormError(f"form has size {B.dim}, algebra has dimension {alg.dim}")


def _cyclic_ok(B: BilinForm, c, n: int) -> bool:
    e = [basis_vector(n, i) for i in range(n)]
    prod = [[bilinear(c, e[i], e[j]) for j in range(n)] for i in range(n)]
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if B(prod[x][y], e[z]) + B(prod[y][z], e[x]) + B(prod[z][x], e[y]):
                    return False
    return True


def classify_form(B: BilinForm, alg: AlgebraSpace, op: str, bracket: Optional[str] = None) -> FormReport:
    """Symmetry, nondegeneracy and cocycle predicates of ``B`` on ``(alg, op)``.

    The 2-cocycle condition uses ``bracket`` if given, else the commutator of ``op``.
    """
    _check_shape(B, alg)
    n = alg.dim
    c = alg.tensor(op)
    br = alg.tensor(bracket) if bracket else tensor_combine(n, (1, c), (-1, tensor_opposite(c)))
    sym = B.is_symmetric()
    connes = _cyclic_ok(B, c, n)
    return FormReport(
        symmetric=sym,
        antisymmetric=B.is_antisymmetric(),
        nondegenerate=B.is_nondegenerate(),
        connes=connes,
        commutative_connes=sym and connes,
        commutative_2cocycle=sym and _cyclic_ok(B, br, n),
    )


def _sum(alg: AlgebraSpace, tri_r: str, tri_l: str):
    return tensor_combine(alg.dim, (1, alg.tensor(tri_r)), (1, alg.tensor(tri_l)))


def check_invariance_anti_dendriform(B: BilinForm, alg: AlgebraSpace, tri_r: str, tri_l: str) -> Verdict:
    """``B(x>y, z) = -B(y, z.x)`` and ``B(x<y, z) = -B(x, y.z)`` on basis triples."""
    _check_shape(B, alg)
    n = alg.dim
    r, l, dot = alg.tensor(tri_r), alg.tensor(tri_l), _sum(alg, tri_r, tri_l)
    e = [basis_vector(n, i) for i in range(n)]
    names = alg.basis
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if B(bilinear(r, e[x], e[y]), e[z]) != -B(e[y], bilinear(dot, e[z], e[x])):
                    return Verdict(False, (names[x], names[y], names[z]), "B(x>y,z) = -B(y,z.x)")
                if B(bilinear(l, e[x], e[y]), e[z]) != -B(e[x], bilinear(dot, e[y], e[z])):
                    return Verdict(False, (names[x], names[y], names[z]), "B(x<y,z) = -B(x,y.z)")
    return Verdict(True)


def check_invariance_lemma(B: BilinForm, alg: AlgebraSpace, tri_r: str, tri_l: str) -> Verdict:
    """The consequence ``B(x<y, z) = B(z>x, y)`` of invariance."""
    _check_shape(B, alg)
    n = alg.dim
    r, l = alg.tensor(tri_r), alg.tensor(tri_l)
    e = [basis_vector(n, i) for i in range(n)]
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if B(bilinear(l, e[x], e[y]), e[z]) != B(bilinear(r, e[z], e[x]), e[y]):
                    return Verdict(False, (alg.basis[x], alg.basis[y], alg.basis[z]), "B(x<y,z) = B(z>x,y)")
    return Verdict(True)


def check_invariance_anti_pre_lie(B: BilinForm, alg: AlgebraSpace, circ: str) -> Verdict:
    """``B(x o y, z) = B(y, [x, z])`` with ``[,]`` the commutator of ``o``."""
    _check_shape(B, alg)
    n = alg.dim
    c = alg.tensor(circ)
    br = tensor_combine(n, (1, c), (-1, tensor_opposite(c)))
    e = [basis_vector(n, i) for i in range(n)]
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if B(bilinear(c, e[x], e[y]), e[z]) != B(e[y], bilinear(br, e[x], e[z])):
                    return Verdict(False, (alg.basis[x], alg.basis[y], alg.basis[z]), "B(x o y,z) = B(y,[x,z])")
    return Verdict(True)


def _solve_products(B: BilinForm, n: int, rhs_fn) -> tuple:
    """Tensor ``w[i][j]`` with ``B(w[i][j], e_k) = rhs_fn(i, j, k)``, i.e. ``G^T w = rhs``."""
    gt = linalg.transpose(B.gram)
    c = [[linalg.solve(gt, [rhs_fn(i, j, k) for k in range(n)]) for j in range(n)] for i in range(n)]
    return freeze_tensor(c)


def _require_nondegenerate(B: BilinForm) -> None:
    if not B.is_nondegenerate():
        raise FormError("the form is degenerate (determinant 0)")


def reconstruct_anti_dendriform(B: BilinForm, alg: AlgebraSpace, op: str, names=("rop", "lop"),
                                verify: bool = True) -> AlgebraSpace:
    """Solve ``B(x>y,z) = -B(y,z.x)`` and ``B(x<y,z) = -B(x,y.z)`` for ``>`` and ``<``.

    ``B`` must be a nondegenerate commutative Connes cocycle on ``(alg, op)``.
    The result is ``alg`` with the two new ops added.
    """
    _check_shape(B, alg)
    _require_nondegenerate(B)
    rep = classify_form(B, alg, op)
    if not rep.commutative_connes:
        raise FormError("the form is not a commutative Connes cocycle on this product")
    n = alg.dim
    c = alg.tensor(op)
    e = [basis_vector(n, i) for i in range(n)]
    right = _solve_products(B, n, lambda i, j, k: -B(e[j], bilinear(c, e[k], e[i])))
    left = _solve_products(B, n, lambda i, j, k: -B(e[i], bilinear(c, e[j], e[k])))
    out = alg.with_op(names[0], right).with_op(names[1], left)
    if verify:
        v = check_structure(out, "anti-dendriform", {"tri_r": names[0], "tri_l": names[1]})
        if not v:
            raise FormError(f"reconstructed ops are not anti-dendriform: {v.identity} at {v.witness}")
        if _sum(out, *names) != c:
            raise FormError("reconstructed ops do not sum to the product")
        if not check_invariance_anti_dendriform(B, out, *names):
            raise FormError("form is not invariant on the reconstructed structure")
    return out


def anti_pre_lie_from_cocycle(B: BilinForm, alg: AlgebraSpace, bracket: str, name: str = "circ") -> AlgebraSpace:
    """Solve ``B(x o y, z) = B(y, [x, z])`` for ``o`` given a nondegenerate form."""
    _check_shape(B, alg)
    _require_nondegenerate(B)
    n = alg.dim
    br = alg.tensor(bracket)
    e = [basis_vector(n, i) for i in range(n)]
    circ = _solve_products(B, n, lambda i, j, k: B(e[j], bilinear(br, e[i], e[k])))
    return alg.with_op(name, circ)


def hyperbolic_form(n: int) -> BilinForm:
    """Gram ``[[0, I], [I, 0]]``: the pairing between ``A`` and ``A*``."""
    g = linalg.zeros(2 * n, 2 * n)
    for i in range(n):
        g[i][n + i] = Fraction(1)
        g[n + i][i] = Fraction(1)
    return BilinForm.from_rows(g) if n else BilinForm.zero(0)


def form_on_semidirect(alg: AlgebraSpace, tri_r: str, tri_l: str, op_name: str = "mul",
                       form_name: str = "B") -> Tuple[AlgebraSpace, BilinForm]:
    """``A x A*`` for the dual of ``(A, -L_>, -R_<)`` with the canonical pairing."""
    v = check_structure(alg, "anti-dendriform", {"tri_r": tri_r, "tri_l": tri_l})
    if not v:
        raise FormError(f"not anti-dendriform: {v.identity} fails at {v.witness}")
    m = dual_bimodule(Bimodule.negative_pair(alg, tri_r, tri_l, op_name))
    big = semidirect(m, op_name)
    B = hyperbolic_form(alg.dim)
    rep = classify_form(B, big, op_name)
    if not (rep.nondegenerate and rep.commutative_connes):
        raise FormError("pairing form is not a nondegenerate commutative Connes cocycle")
    return big.with_form(form_name, B), B


def psi_of_form(B: BilinForm) -> LinearMap:
    """``psi(x) = B(x, .)`` in the dual basis; its matrix is ``G^T``."""
    return LinearMap.from_rows(linalg.transpose(B.gram), B.dim) if B.dim else LinearMap.zero(0, 0)


def form_equivalence_check(B: BilinForm, alg: AlgebraSpace, tri_r: str, tri_l: str) -> Verdict:
    """Is ``psi = B(x, .)`` an equivalence from ``(A, -L_>, -R_<)`` to ``(A*, R*, L*)``?

    For an anti-dendriform algebra this holds exactly when ``B`` is
    nondegenerate and invariant.
    """
    _check_shape(B, alg)
    n = alg.dim
    src = Bimodule.negative_pair(alg, tri_r, tri_l)
    dst = dual_bimodule(Bimodule.regular(src.base, src.op))
    psi = psi_of_form(B)
    for i in range(n):
        if psi.compose(src.l[i]) != dst.l[i].compose(psi):
            return Verdict(False, (alg.basis[i],), "psi(-L_>(x)y) = R*(x)psi(y)")
        if psi.compose(src.r[i]) != dst.r[i].compose(psi):
            return Verdict(False, (alg.basis[i],), "psi(-R_<(x)y) = L*(x)psi(y)")
    if not psi.is_invertible():
        return Verdict(False, None, "psi is invertible", detail="psi intertwines but is not invertible")
    return Verdict(True)
