"""Bimodules, semidirect products, the double space and anti-O-operators."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .algebra import (
    AlgebraError,
    AlgebraFormatError,
    AlgebraSpace,
    LinearMap,
    algebra_from_json,
    basis_vector,
    bilinear,
    format_vector,
    freeze_tensor,
    left_mult,
    load_algebra,
    right_mult,
    tensor_combine,
)
from .identity import Verdict
from .structures import check_structure, get_structure


class BimoduleError(AlgebraError):
    pass


class NonAssociativeError(AlgebraError):
    pass


def _unique_names(base: Sequence[str], wanted: Sequence[str]) -> Tuple[str, ...]:
    taken = set(base)
    out = []
    for name in wanted:
        while name in taken:
            name = name + "'"
        taken.add(name)
        out.append(name)
    return tuple(out)


@dataclass(frozen=True)
class Bimodule:
    """``(V, l, r)`` over ``(base, op)``; ``l[i]`` is the matrix of ``l(e_i)``."""

    base: AlgebraSpace
    op: str
    space_dim: int
    l: Tuple[LinearMap, ...]
    r: Tuple[LinearMap, ...]
    module_basis: Tuple[str, ...] = ()

    def __post_init__(self):
        n, s = self.base.dim, self.space_dim
        self.base.tensor(self.op)
        if len(self.l) != n or len(self.r) != n:
            raise BimoduleError(f"need {n} matrices for l and r, got {len(self.l)} and {len(self.r)}")
        for side, maps in (("l", self.l), ("r", self.r)):
            for i, m in enumerate(maps):
                if m.domain_dim != s or m.codomain_dim != s:
                    raise BimoduleError(f"{side}({self.base.basis[i]}) is not {s}x{s}")
        if not self.module_basis:
            object.__setattr__(self, "module_basis", tuple(f"v{k + 1}" for k in range(s)))
        elif len(self.module_basis) != s:
            raise BimoduleError(f"{len(self.module_basis)} module basis names for dimension {s}")
        else:
            object.__setattr__(self, "module_basis", tuple(self.module_basis))

    def l_of(self, x: Sequence) -> LinearMap:
        return _combine_maps(self.l, x, self.space_dim)

    def r_of(self, x: Sequence) -> LinearMap:
        return _combine_maps(self.r, x, self.space_dim)

    def product(self, x: Sequence, y: Sequence) -> list:
        return bilinear(self.base.tensor(self.op), x, y)

    @classmethod
    def regular(cls, alg: AlgebraSpace, op: str) -> "Bimodule":
        """``(A, L_op, R_op)``."""
        n = alg.dim
        return cls(alg, op, n, tuple(left_mult(alg, op, i) for i in range(n)),
                   tuple(right_mult(alg, op, i) for i in range(n)), alg.basis)

    @classmethod
    def zero(cls, alg: AlgebraSpace, op: str, space_dim: int, module_basis: Sequence[str] = ()) -> "Bimodule":
        z = LinearMap.zero(space_dim, space_dim)
        return cls(alg, op, space_dim, (z,) * alg.dim, (z,) * alg.dim, tuple(module_basis))

    @classmethod
    def negative_pair(cls, alg: AlgebraSpace, tri_r: str, tri_l: str, sum_name: str = "mul") -> "Bimodule":
        """``(A, -L_>, -R_<)`` over the sum algebra ``x.y = x>y + x<y``."""
        n = alg.dim
        total = tensor_combine(n, (1, alg.tensor(tri_r)), (1, alg.tensor(tri_l)))
        base = AlgebraSpace(n, alg.basis, {sum_name: total})
        l = tuple(-left_mult(alg, tri_r, i) for i in range(n))
        r = tuple(-right_mult(alg, tri_l, i) for i in range(n))
        return cls(base, sum_name, n, l, r, alg.basis)

    def to_json(self) -> dict:
        from .algebra import algebra_to_json

        def mats(maps):
            return {name: m.to_json() for name, m in zip(self.base.basis, maps) if not m.is_zero()}

        return {
            "base": algebra_to_json(self.base),
            "op": self.op,
            "space_dim": self.space_dim,
            "module_basis": list(self.module_basis),
            "l": mats(self.l),
            "r": mats(self.r),
        }


def _combine_maps(maps: Sequence[LinearMap], x: Sequence, s: int) -> LinearMap:
    acc = [[Fraction(0)] * s for _ in range(s)]
    for coef, m in zip(x, maps):
        if coef:
            for a in range(s):
                for b in range(s):
                    if m.matrix[a][b]:
                        acc[a][b] += coef * m.matrix[a][b]
    return LinearMap.from_rows(acc, s)


def _mat(m: LinearMap):
    return [list(row) for row in m.matrix]


def check_bimodule(m: Bimodule) -> Verdict:
    """Check ``l(xy) = l(x)l(y)``, ``r(xy) = r(y)r(x)``, ``l(x)r(y) = r(y)l(x)`` on basis pairs."""
    n = m.base.dim
    names = m.base.basis
    for i in range(n):
        for j in range(n):
            xy = m.product(basis_vector(n, i), basis_vector(n, j))
            checks = (
                ("l(x.y) = l(x)l(y)", m.l_of(xy), m.l[i].compose(m.l[j])),
                ("r(x.y) = r(y)r(x)", m.r_of(xy), m.r[j].compose(m.r[i])),
                ("l(x)r(y) = r(y)l(x)", m.l[i].compose(m.r[j]), m.r[j].compose(m.l[i])),
            )
            for label, lhs, rhs in checks:
                if lhs != rhs:
                    return Verdict(False, witness=(names[i], names[j]), identity=label)
    return Verdict(True)


def dual_bimodule(m: Bimodule) -> Bimodule:
    """``(V*, r*, l*)``: transposed matrices with the roles of l and r swapped."""
    return Bimodule(
        m.base, m.op, m.space_dim,
        tuple(x.transpose() for x in m.r),
        tuple(x.transpose() for x in m.l),
        tuple(f"{name}*" for name in m.module_basis),
    )


def semidirect_tensor(m: Bimodule):
    n, s = m.base.dim, m.space_dim
    N = n + s
    c = [[[Fraction(0)] * N for _ in range(N)] for _ in range(N)]
    base = m.base.tensor(m.op)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[i][j][k] = base[i][j][k]
    for i in range(n):
        li, ri = m.l[i].matrix, m.r[i].matrix
        for a in range(s):
            for b in range(s):
                # (e_i, 0)(0, v_a) = (0, l(e_i) v_a);  (0, v_a)(e_i, 0) = (0, r(e_i) v_a)
                c[i][n + a][n + b] = li[b][a]
                c[n + a][i][n + b] = ri[b][a]
    return freeze_tensor(c)


def semidirect(m: Bimodule, name: Optional[str] = None, validate: bool = True) -> AlgebraSpace:
    """The algebra ``A x_{l,r} V`` with basis: base names, then module names."""
    if validate:
        v = check_bimodule(m)
        if not v:
            raise BimoduleError(f"not a bimodule: {v.identity} fails at {v.witness}")
    basis = tuple(m.base.basis) + _unique_names(m.base.basis, m.module_basis)
    return AlgebraSpace.create(basis, {name or m.op: semidirect_tensor(m)})


def double_space(alg: AlgebraSpace, tri_r: str, tri_l: str, name: str = "mul") -> AlgebraSpace:
    """``(x,a).(y,b) = (x>y + x<y, -x>b - a<y)`` on ``A + A``.

    Associative exactly when ``(A, >, <)`` is anti-dendriform.  No
    validation is done here, so non-anti-dendriform pairs are allowed.
    """
    m = Bimodule.negative_pair(alg, tri_r, tri_l, name)
    basis = tuple(alg.basis) + _unique_names(alg.basis, alg.basis)
    return AlgebraSpace.create(basis, {name: semidirect_tensor(m)})


def check_on_double(alg: AlgebraSpace, tri_r: str, tri_l: str, bundle: str = "associative", q=None) -> Verdict:
    """Check a one-op bundle on the double space of ``(A, >, <)``."""
    defn = get_structure(bundle)
    if len(defn.slots) != 1:
        raise BimoduleError(f"bundle {bundle!r} must have exactly one op slot")
    dbl = double_space(alg, tri_r, tri_l, "mul")
    return check_structure(dbl, defn, {defn.slots[0].name: "mul"}, q)


# operators --------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorCheckReport:
    is_operator: bool
    is_strong: bool
    first_failure: Optional[Tuple[str, Tuple[str, ...]]] = None
    strong_failure: Optional[Tuple[str, Tuple[str, ...]]] = None

    def to_json(self) -> dict:
        out: dict = {"is_operator": self.is_operator, "is_strong": self.is_strong}
        if self.first_failure:
            out["first_failure"] = {"equation": self.first_failure[0], "witness": list(self.first_failure[1])}
        if self.strong_failure:
            out["strong_failure"] = {"equation": self.strong_failure[0], "witness": list(self.strong_failure[1])}
        return out


def _report(op_fail, strong_fail) -> OperatorCheckReport:
    return OperatorCheckReport(op_fail is None, op_fail is None and strong_fail is None, op_fail, strong_fail)


def check_anti_O(T: LinearMap, m: Bimodule) -> OperatorCheckReport:
    """``T(u).T(v) = -T(l(T u) v + r(T v) u)``, plus strongness
    ``l(T(u).T(v)) w = r(T(v).T(w)) u`` on basis triples."""
    n, s = m.base.dim, m.space_dim
    if T.domain_dim != s or T.codomain_dim != n:
        raise BimoduleError(f"T must map the {s}-dim module to the {n}-dim base")
    names = m.module_basis
    Tu = [T.column(a) for a in range(s)]
    units = [basis_vector(s, a) for a in range(s)]
    op_fail = None
    for a in range(s):
        for b in range(s):
            lhs = m.product(Tu[a], Tu[b])
            inner = [x + y for x, y in zip(m.l_of(Tu[a]).apply(units[b]), m.r_of(Tu[b]).apply(units[a]))]
            rhs = [-x for x in T.apply(inner)]
            if list(lhs) != rhs:
                op_fail = ("T(u).T(v) = -T(l(T(u))v + r(T(v))u)", (names[a], names[b]))
                break
        if op_fail:
            break
    strong_fail = None
    prods = {(a, b): m.product(Tu[a], Tu[b]) for a in range(s) for b in range(s)}
    for a in range(s):
        for b in range(s):
            for c in range(s):
                lhs = m.l_of(prods[(a, b)]).apply(units[c])
                rhs = m.r_of(prods[(b, c)]).apply(units[a])
                if lhs != rhs:
                    strong_fail = ("l(T(u).T(v))w = r(T(v).T(w))u", (names[a], names[b], names[c]))
                    break
            if strong_fail:
                break
        if strong_fail:
            break
    return _report(op_fail, strong_fail)


def check_anti_rb(P: LinearMap, alg: AlgebraSpace, op: str) -> OperatorCheckReport:
    """``P(x).P(y) = -P(P(x).y + x.P(y))``; strong: ``(P(x).P(y)).z = x.(P(y).P(z))``."""
    n = alg.dim
    if P.domain_dim != n or P.codomain_dim != n:
        raise BimoduleError(f"P must be {n}x{n}")
    assoc = check_structure(alg, "associative", {"mul": op})
    if not assoc:
        raise NonAssociativeError(f"op {op!r} is not associative (fails at {assoc.witness})")
    c = alg.tensor(op)
    names = alg.basis
    e = [basis_vector(n, i) for i in range(n)]
    Pe = [P.column(i) for i in range(n)]
    op_fail = None
    for i in range(n):
        for j in range(n):
            lhs = bilinear(c, Pe[i], Pe[j])
            inner = [x + y for x, y in zip(bilinear(c, Pe[i], e[j]), bilinear(c, e[i], Pe[j]))]
            rhs = [-x for x in P.apply(inner)]
            if lhs != rhs:
                op_fail = ("P(x).P(y) = -P(P(x).y + x.P(y))", (names[i], names[j]))
                break
        if op_fail:
            break
    strong_fail = None
    pp = {(i, j): bilinear(c, Pe[i], Pe[j]) for i in range(n) for j in range(n)}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if bilinear(c, pp[(i, j)], e[k]) != bilinear(c, e[i], pp[(j, k)]):
                    strong_fail = ("P(x).P(y).z = x.P(y).P(z)", (names[i], names[j], names[k]))
                    break
            if strong_fail:
                break
        if strong_fail:
            break
    return _report(op_fail, strong_fail)


def check_anti_1_cocycle(D: LinearMap, m: Bimodule) -> Verdict:
    """``D(x.y) = -(l(x)D(y) + r(y)D(x))`` on basis pairs."""
    n, s = m.base.dim, m.space_dim
    if D.domain_dim != n or D.codomain_dim != s:
        raise BimoduleError(f"D must map the {n}-dim base to the {s}-dim module")
    for i in range(n):
        for j in range(n):
            lhs = D.apply(m.product(basis_vector(n, i), basis_vector(n, j)))
            rhs = [-(x + y) for x, y in zip(m.l[i].apply(D.column(j)), m.r[j].apply(D.column(i)))]
            if lhs != rhs:
                return Verdict(False, witness=(m.base.basis[i], m.base.basis[j]),
                               identity="D(x.y) = -(l(x)D(y) + r(y)D(x))",
                               value=format_vector(m.module_basis, [a - b for a, b in zip(lhs, rhs)]))
    return Verdict(True)


def induced_ops_on_module(T: LinearMap, m: Bimodule, names=("rop", "lop"), require_operator: bool = True) -> AlgebraSpace:
    """Ops on V: ``u > v = -l(T u) v`` and ``u < v = -r(T v) u``."""
    if require_operator:
        rep = check_anti_O(T, m)
        if not rep.is_operator:
            raise BimoduleError(f"T is not an anti-O-operator: {rep.first_failure}")
    s = m.space_dim
    units = [basis_vector(s, a) for a in range(s)]
    Tu = [T.column(a) for a in range(s)]
    right = [[[-x for x in m.l_of(Tu[a]).apply(units[b])] for b in range(s)] for a in range(s)]
    left = [[[-x for x in m.r_of(Tu[b]).apply(units[a])] for b in range(s)] for a in range(s)]
    return AlgebraSpace.create(m.module_basis, {names[0]: freeze_tensor(right), names[1]: freeze_tensor(left)})


def embed_hat(T: LinearMap, m: Bimodule) -> Tuple[AlgebraSpace, LinearMap]:
    """The semidirect algebra and the map ``(x, u) -> (T(u), 0)``."""
    alg = semidirect(m)
    n, s = m.base.dim, m.space_dim
    if T.domain_dim != s or T.codomain_dim != n:
        raise BimoduleError(f"T must map the {s}-dim module to the {n}-dim base")
    rows = [[Fraction(0)] * (n + s) for _ in range(n + s)]
    for i in range(n):
        for a in range(s):
            rows[i][n + a] = T.matrix[i][a]
    return alg, LinearMap.from_rows(rows, n + s)


def hat_identity(alg: AlgebraSpace, tri_r: str, tri_l: str) -> Tuple[AlgebraSpace, LinearMap]:
    """The double space of ``(A, >, <)`` with the map ``(x, y) -> (y, 0)``."""
    m = Bimodule.negative_pair(alg, tri_r, tri_l)
    return embed_hat(LinearMap.identity(alg.dim), m)


# JSON --------------------------------------------------------------------------

def _matrix_field(raw, s: int, where: str) -> LinearMap:
    if not isinstance(raw, list) or len(raw) != s or any(not isinstance(r, list) or len(r) != s for r in raw):
        raise AlgebraFormatError(f"expected a {s}x{s} row-major matrix", where)
    from .algebra import _rational_field

    return LinearMap.from_rows([[_rational_field(x, f"{where}[{a}][{b}]") for b, x in enumerate(row)]
                                for a, row in enumerate(raw)], s)


def bimodule_from_json(data, base_dir: Optional[Path] = None) -> Bimodule:
    if not isinstance(data, Mapping):
        raise AlgebraFormatError("bimodule file must be a JSON object")
    for key in ("base", "op", "space_dim"):
        if key not in data:
            raise AlgebraFormatError("missing field", key)
    base = data["base"]
    if isinstance(base, str):
        path = Path(base)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        base_alg = load_algebra(path)
    else:
        base_alg = algebra_from_json(base)
    s = data["space_dim"]
    if not isinstance(s, int) or isinstance(s, bool) or s < 0:
        raise AlgebraFormatError("must be a nonnegative integer", "space_dim")
    op = data["op"]
    if not base_alg.has_op(op):
        raise AlgebraFormatError(f"base algebra has no op {op!r}", "op")
    maps = {}
    for side in ("l", "r"):
        raw = data.get(side, {})
        if not isinstance(raw, Mapping):
            raise AlgebraFormatError("must map basis names to matrices", side)
        for key in raw:
            if key not in base_alg.basis:
                raise AlgebraFormatError(f"unknown basis element {key!r}", f"{side}.{key}")
        maps[side] = tuple(
            _matrix_field(raw[name], s, f"{side}.{name}") if name in raw else LinearMap.zero(s, s)
            for name in base_alg.basis
        )
    names = tuple(data.get("module_basis", ()))
    return Bimodule(base_alg, op, s, maps["l"], maps["r"], names)


def load_bimodule(path) -> Bimodule:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise AlgebraFormatError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
    return bimodule_from_json(data, path.parent)


def check_negative_pair(alg: AlgebraSpace, tri_r: str, tri_l: str) -> Verdict:
    """The sum is associative and ``(A, -L_>, -R_<)`` is a bimodule over it.

    For a two-op algebra this holds exactly when it is anti-dendriform.
    """
    m = Bimodule.negative_pair(alg, tri_r, tri_l, "mul")
    v = check_structure(m.base, "associative", {"mul": "mul"})
    if not v:
        return v
    return check_bimodule(m)
