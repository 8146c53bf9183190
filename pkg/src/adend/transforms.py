"""Derived operations and q-transforms.

Every function returns a new :class:`AlgebraSpace` that keeps the source
ops and adds the result under a new name, so source and target can be
compared side by side.
"""

from __future__ import annotations

import warnings
from fractions import Fraction

from .algebra import AlgebraSpace, tensor_combine, tensor_opposite
from .rational import parse_rational


def _q(q) -> Fraction:
    q = parse_rational(q)
    if q in (1, -1):
        warnings.warn(f"q = {q} makes the q-transform degenerate (not invertible)", stacklevel=3)
    return q


def _add(alg: AlgebraSpace, name: str, tensor, replace: bool) -> AlgebraSpace:
    return alg.with_op(name, tensor, replace=replace)


def op_sum(alg: AlgebraSpace, op1: str, op2: str, name: str = "sum", replace: bool = False) -> AlgebraSpace:
    """``x . y = x op1 y + x op2 y``."""
    t = tensor_combine(alg.dim, (1, alg.tensor(op1)), (1, alg.tensor(op2)))
    return _add(alg, name, t, replace)


def commutator(alg: AlgebraSpace, op: str, name: str = "bracket", replace: bool = False) -> AlgebraSpace:
    """``[x, y] = x op y - y op x``."""
    c = alg.tensor(op)
    t = tensor_combine(alg.dim, (1, c), (-1, tensor_opposite(c)))
    return _add(alg, name, t, replace)


def assoc_pre_lie(alg: AlgebraSpace, succ: str, prec: str, name: str = "star", replace: bool = False) -> AlgebraSpace:
    """``x * y = x succ y - y prec x``."""
    t = tensor_combine(alg.dim, (1, alg.tensor(succ)), (-1, tensor_opposite(alg.tensor(prec))))
    return _add(alg, name, t, replace)


def assoc_anti_pre_lie(alg: AlgebraSpace, tri_r: str, tri_l: str, name: str = "circ", replace: bool = False) -> AlgebraSpace:
    """``x o y = x > y - y < x``."""
    t = tensor_combine(alg.dim, (1, alg.tensor(tri_r)), (-1, tensor_opposite(alg.tensor(tri_l))))
    return _add(alg, name, t, replace)


def q_pair(alg: AlgebraSpace, succ: str, prec: str, q, names=("q_r", "q_l"), replace: bool = False) -> AlgebraSpace:
    """``x > y = x succ y + q x prec y`` and ``x < y = x prec y + q x succ y``."""
    q = _q(q)
    s, p = alg.tensor(succ), alg.tensor(prec)
    right = tensor_combine(alg.dim, (1, s), (q, p))
    left = tensor_combine(alg.dim, (1, p), (q, s))
    return _add(_add(alg, names[0], right, replace), names[1], left, replace)


def q_pair_alt(alg: AlgebraSpace, succ: str, prec: str, q, names=("q_r_alt", "q_l_alt"), replace: bool = False) -> AlgebraSpace:
    """``x >' y = x succ y + q y succ x`` and ``x <' y = x prec y + q y prec x``."""
    q = _q(q)
    s, p = alg.tensor(succ), alg.tensor(prec)
    right = tensor_combine(alg.dim, (1, s), (q, tensor_opposite(s)))
    left = tensor_combine(alg.dim, (1, p), (q, tensor_opposite(p)))
    return _add(_add(alg, names[0], right, replace), names[1], left, replace)


def q_single(alg: AlgebraSpace, op: str, q, name: str = "diamond", replace: bool = False) -> AlgebraSpace:
    """``x <> y = x op y + q y op x``."""
    q = _q(q)
    c = alg.tensor(op)
    return _add(alg, name, tensor_combine(alg.dim, (1, c), (q, tensor_opposite(c))), replace)


TRANSFORMS = {
    "sum": ("two", op_sum),
    "commutator": ("one", commutator),
    "pre-lie": ("two", assoc_pre_lie),
    "anti-pre-lie": ("two", assoc_anti_pre_lie),
    "q-pair": ("two-q", q_pair),
    "q-pair-alt": ("two-q", q_pair_alt),
    "q-single": ("one-q", q_single),
}
