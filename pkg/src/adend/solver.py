"""Polynomial systems for unknown structure constants and operator entries.

Unknowns are named after their position, 1-based:

* ``r_ijk`` / ``l_ijk``  coefficient of ``e_k`` in ``e_i > e_j`` / ``e_i < e_j``
* ``a{i}{j}``  entry (row i, column j) of an unknown operator matrix
* ``g{i}{j}``  entry of an unknown change of basis, plus ``t`` for ``1/det``
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .algebra import (
    AlgebraError,
    AlgebraSpace,
    LinearMap,
    annihilator_dims,
    basis_vector,
    bilinear,
    freeze_tensor,
)
from .bimodule import NonAssociativeError, check_anti_rb
from .groebner import (
    GroebnerBasis,
    buchberger,
    common_zero,
    independent_variables,
    radical_by_variables,
    radical_contains,
)
from .identity import basis_values
from .poly import Poly
from .rational import format_rational, parse_rational
from .structures import StructureDef, _resolve_def, bundle_tensors, check_structure, resolve_binding

DEFAULT_FREE_CAP = 3
DEFAULT_ISO_CAP = 3
GRID = tuple(Fraction(v) for v in (-2, -1, 0, 1, 2))


class SolverError(AlgebraError):
    pass


class CapExceeded(SolverError):
    pass


def _cap(default: int) -> int:
    raw = os.environ.get("ADEND_MAX_DIM")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise SolverError(f"ADEND_MAX_DIM must be an integer, got {raw!r}") from None
    return default


def _index_name(prefix: str, *idx: int) -> str:
    return f"{prefix}_{''.join(str(i + 1) for i in idx)}"


@dataclass(frozen=True)
class SymbolicAlgebra:
    """Like :class:`AlgebraSpace` but with :class:`Poly` tensor entries."""

    dim: int
    basis: Tuple[str, ...]
    variables: Tuple[str, ...]
    ops: Mapping[str, tuple]

    def tensor(self, name: str):
        if name == "0":
            z = Poly.zero(self.variables)
            return tuple(tuple(tuple(z for _ in range(self.dim)) for _ in range(self.dim)) for _ in range(self.dim))
        return self.ops[name]

    def evaluate(self, point: Mapping[str, Fraction]) -> AlgebraSpace:
        """Concrete algebra at a rational point."""
        ops = {}
        for name, c in self.ops.items():
            ops[name] = freeze_tensor([[[e.evaluate(point) for e in row] for row in plane] for plane in c])
        return AlgebraSpace(self.dim, self.basis, ops)

    @classmethod
    def from_algebra(cls, alg: AlgebraSpace, variables: Sequence[str] = ()) -> "SymbolicAlgebra":
        variables = tuple(variables)
        ops = {name: _const_tensor(c, variables) for name, c in alg.ops.items()}
        return cls(alg.dim, alg.basis, variables, ops)


def _const_tensor(c, variables):
    return freeze_tensor([[[Poly.constant(variables, x) for x in row] for row in plane] for plane in c])


def unknown_tensor(dim: int, prefix: str, variables: Sequence[str]):
    variables = tuple(variables)
    return freeze_tensor([[[Poly.var(variables, _index_name(prefix, i, j, k)) for k in range(dim)]
                           for j in range(dim)] for i in range(dim)])


def tensor_names(dim: int, prefix: str) -> List[str]:
    return [_index_name(prefix, i, j, k) for i in range(dim) for j in range(dim) for k in range(dim)]


def _as_poly(x, variables) -> Poly:
    return x if isinstance(x, Poly) else Poly.constant(variables, Fraction(x))


def extract_system(salg: SymbolicAlgebra, bundle, binding: Mapping[str, str], q=None) -> List[Poly]:
    """One polynomial per (identity, basis tuple, coordinate); zeros and repeats dropped."""
    defn = _resolve_def(bundle, q)
    sym_to_op = resolve_binding(defn, binding)
    tensors = bundle_tensors(defn, {s: salg.tensor(op) for s, op in sym_to_op.items()}, salg.dim)
    out: List[Poly] = []
    seen = set()
    for ident in defn.identities:
        for _, val in basis_values(ident, tensors, salg.dim):
            for x in val:
                if not x:
                    continue
                p = _as_poly(x, salg.variables)
                key = p.monic()
                if key not in seen:
                    seen.add(key)
                    out.append(p)
    return out


@dataclass(frozen=True)
class SolutionIdeal:
    """Solutions of a polynomial system.

    ``basis`` is the reduced basis after adding every variable that vanishes
    on the whole solution set (same solutions, simpler generators);
    ``raw_basis`` is the reduced basis of the system itself.
    """

    variables: Tuple[str, ...]
    basis: GroebnerBasis
    raw_basis: GroebnerBasis
    free_vars: Tuple[str, ...]
    consistent: bool
    system: Tuple[Poly, ...] = field(default=(), repr=False)
    symbolic: Optional[SymbolicAlgebra] = field(default=None, repr=False, compare=False)
    fixed: Mapping[str, Fraction] = field(default_factory=dict, compare=False)

    def groebner_strings(self) -> List[str]:
        return self.basis.as_strings()

    def contains_point(self, point: Mapping[str, Fraction]) -> bool:
        return common_zero(self.basis, point)

    def forces_zero(self, var: str) -> bool:
        """True iff ``var`` vanishes at every solution."""
        if not self.consistent:
            return True
        return radical_contains(list(self.raw_basis.generators), Poly.var(self.variables, var))

    def to_json(self, samples: Optional[List[Mapping[str, Fraction]]] = None) -> dict:
        out = {
            "consistent": self.consistent,
            "groebner": self.groebner_strings(),
            "free_vars": list(self.free_vars),
        }
        if samples is not None:
            out["sample_points"] = [{k: format_rational(v) for k, v in p.items()} for p in samples]
        return out


def solve_system(polys: Sequence[Poly], variables: Sequence[str], symbolic=None, fixed=None) -> SolutionIdeal:
    variables = tuple(variables)
    raw = buchberger(list(polys), variables=variables)
    consistent = not raw.is_unit()
    rad = radical_by_variables(raw) if consistent else raw
    free = tuple(independent_variables(rad)) if consistent else ()
    return SolutionIdeal(variables, rad, raw, free, consistent, tuple(polys), symbolic, dict(fixed or {}))


def _require_associative(alg: AlgebraSpace, op: str) -> None:
    v = check_structure(alg, "associative", {"mul": op})
    if not v:
        raise NonAssociativeError(f"op {op!r} is not associative (fails at {v.witness})")


def compatible_symbolic(alg: AlgebraSpace, op: str) -> SymbolicAlgebra:
    """Unknown ``>`` with ``<`` eliminated as ``. - >``."""
    n = alg.dim
    names = tensor_names(n, "r")
    r = unknown_tensor(n, "r", names)
    dot = _const_tensor(alg.tensor(op), names)
    l = freeze_tensor([[[dot[i][j][k] - r[i][j][k] for k in range(n)] for j in range(n)] for i in range(n)])
    return SymbolicAlgebra(n, alg.basis, tuple(names), {"rop": r, "lop": l})


def solve_compatible_anti_dendriform(alg: AlgebraSpace, op: str) -> SolutionIdeal:
    """All anti-dendriform pairs whose sum is ``op``."""
    _require_associative(alg, op)
    salg = compatible_symbolic(alg, op)
    system = extract_system(salg, "anti-dendriform", {"tri_r": "rop", "tri_l": "lop"})
    return solve_system(system, salg.variables, salg)


def operator_names(n: int, prefix: str = "a") -> List[str]:
    return [f"{prefix}{i + 1}{j + 1}" for i in range(n) for j in range(n)]


def solve_anti_rb(alg: AlgebraSpace, op: str) -> SolutionIdeal:
    """All anti-Rota-Baxter operators on ``(alg, op)``; unknown ``a{i}{j}`` is row i, column j."""
    _require_associative(alg, op)
    n = alg.dim
    names = tuple(operator_names(n))
    P = [[Poly.var(names, f"a{i + 1}{j + 1}") for j in range(n)] for i in range(n)]
    c = _const_tensor(alg.tensor(op), names)
    zero = Poly.zero(names)

    def apply(v):
        return [sum((P[i][j] * v[j] for j in range(n)), zero) for i in range(n)]

    cols = [[P[i][j] for i in range(n)] for j in range(n)]
    e = [[Poly.constant(names, int(k == i)) for k in range(n)] for i in range(n)]
    system = []
    for i in range(n):
        for j in range(n):
            lhs = bilinear(c, cols[i], cols[j])
            inner = [a + b for a, b in zip(bilinear(c, cols[i], e[j]), bilinear(c, e[i], cols[j]))]
            rhs = apply(inner)
            for a, b in zip(lhs, rhs):
                p = _as_poly(a, names) + _as_poly(b, names)
                if p:
                    system.append(p)
    return solve_system(system, names)


def operator_at(sol: SolutionIdeal, point: Mapping[str, Fraction]) -> LinearMap:
    n = int(round(len(sol.variables) ** 0.5))
    return LinearMap.from_rows([[Fraction(point[f"a{i + 1}{j + 1}"]) for j in range(n)] for i in range(n)], n)


def solve_anti_dendriform_free(dim: int, pins: Optional[Mapping[str, object]] = None,
                               cap: Optional[int] = None) -> SolutionIdeal:
    """All anti-dendriform structures of dimension ``dim``.

    ``pins`` fixes chosen unknowns (``r_ijk``/``l_ijk``) to rationals before solving.
    """
    limit = cap if cap is not None else _cap(DEFAULT_FREE_CAP)
    if dim > limit:
        raise CapExceeded(f"dimension {dim} exceeds the cap {limit} (set ADEND_MAX_DIM to raise it)")
    all_names = tensor_names(dim, "r") + tensor_names(dim, "l")
    fixed = {}
    for k, v in (pins or {}).items():
        if k not in all_names:
            raise SolverError(f"unknown pinned variable {k!r}")
        fixed[k] = parse_rational(v) if not isinstance(v, Fraction) else v
    names = tuple(v for v in all_names if v not in fixed)

    def entry(prefix, i, j, k):
        key = _index_name(prefix, i, j, k)
        if key in fixed:
            return Poly.constant(names, fixed[key])
        return Poly.var(names, key)

    ops = {
        p: freeze_tensor([[[entry(ch, i, j, k) for k in range(dim)] for j in range(dim)] for i in range(dim)])
        for p, ch in (("rop", "r"), ("lop", "l"))
    }
    salg = SymbolicAlgebra(dim, tuple(f"e{i + 1}" for i in range(dim)), names, ops)
    system = extract_system(salg, "anti-dendriform", {"tri_r": "rop", "tri_l": "lop"})
    return solve_system(system, names, salg, fixed)


# sampling -----------------------------------------------------------------------

def _linear_solve(basis: GroebnerBasis) -> Optional[Dict[str, Fraction]]:
    """Unique solution of a zero-dimensional linear reduced basis, else None."""
    if any(g.degree() > 1 for g in basis.generators):
        return None
    variables = basis.variables
    if len(basis.generators) != len(variables):
        return None
    point = {}
    for g in basis.generators:
        lm = g.leading_monomial()
        var = variables[lm.index(1)]
        others = [m for m in g.terms if m != lm]
        if any(any(m) for m in others):
            return None
        const = g.terms.get((0,) * len(variables), Fraction(0))
        point[var] = -const
    return point


def sample_points(sol: SolutionIdeal, grid: Sequence = GRID, limit: int = 5,
                  search_grid: Sequence = (-1, 0, 1), search_limit: int = 20000) -> List[Dict[str, Fraction]]:
    """Rational points of the solution set.

    Free variables run over ``grid``; the remaining finite system is solved
    exactly when linear and otherwise searched over ``search_grid``.
    """
    if not sol.consistent:
        return []
    points: List[Dict[str, Fraction]] = []
    free = list(sol.free_vars)
    rest = [v for v in sol.variables if v not in free]
    grid = [Fraction(g) for g in grid]
    for values in itertools.product(grid, repeat=len(free)):
        if len(points) >= limit:
            break
        assign = dict(zip(free, values))
        subs = [g.substitute(assign, rest) for g in sol.basis.generators]
        sub_basis = buchberger([p for p in subs if p], variables=rest) if rest else None
        if rest:
            if sub_basis.is_unit():
                continue
            found = _linear_solve(sub_basis)
            if found is None:
                found = _grid_search(sub_basis, search_grid, search_limit)
            if found is None:
                continue
            assign.update(found)
        elif any(subs):
            continue
        points.append({v: assign[v] for v in sol.variables})
    return points


def _grid_search(basis: GroebnerBasis, grid, limit: int):
    grid = [Fraction(g) for g in grid]
    for k, values in enumerate(itertools.product(grid, repeat=len(basis.variables))):
        if k >= limit:
            return None
        point = dict(zip(basis.variables, values))
        if common_zero(basis, point):
            return point
    return None


def full_point(sol: SolutionIdeal, point: Mapping[str, Fraction]) -> Dict[str, Fraction]:
    out = dict(sol.fixed)
    out.update(point)
    return out


def grid_points(variables: Sequence[str], grid=(-1, 0, 1)) -> Iterable[Dict[str, Fraction]]:
    grid = [Fraction(g) for g in grid]
    for values in itertools.product(grid, repeat=len(variables)):
        yield dict(zip(variables, values))


# isomorphism --------------------------------------------------------------------

def iso_invariants(alg: AlgebraSpace, ops: Sequence[str]) -> dict:
    """Exact isomorphism invariants of ``(alg, ops)``."""
    n = alg.dim
    tensors = [alg.tensor(op) for op in ops]
    e = [basis_vector(n, i) for i in range(n)]
    products = [list(c[i][j]) for c in tensors for i in range(n) for j in range(n)]
    triples = []
    for c1 in tensors:
        for c2 in tensors:
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        triples.append(bilinear(c2, c1[i][j], e[k]))
                        triples.append(bilinear(c1, e[i], c2[j][k]))
    total = [[[sum((c[i][j][k] for c in tensors), Fraction(0)) for k in range(n)] for j in range(n)] for i in range(n)]
    commutative = all(total[i][j] == total[j][i] for i in range(n) for j in range(n))
    return {
        "dim": n,
        "annihilators": {op: annihilator_dims(alg, op) for op in ops},
        "product_span": linalg.span_dim(products) if products else 0,
        "triple_span": linalg.span_dim(triples) if triples else 0,
        "sum_commutative": commutative,
    }


@dataclass(frozen=True)
class IsoResult:
    ideal: SolutionIdeal
    witness: Optional[LinearMap]

    @property
    def consistent(self) -> bool:
        return self.ideal.consistent

    def to_json(self) -> dict:
        out = {"consistent": self.consistent, "groebner": self.ideal.groebner_strings(),
               "rational_witness": self.witness.to_json() if self.witness is not None else None}
        return out


def is_homomorphism(g: LinearMap, a: AlgebraSpace, b: AlgebraSpace, ops: Sequence[str]) -> bool:
    n = a.dim
    for op in ops:
        ca, cb = a.tensor(op), b.tensor(op)
        for i in range(n):
            for j in range(n):
                if g.apply(ca[i][j]) != bilinear(cb, g.column(i), g.column(j)):
                    return False
    return True


def iso_search(a: AlgebraSpace, b: AlgebraSpace, ops: Sequence[str], cap: Optional[int] = None,
               witness_grid=(-1, 0, 1)) -> IsoResult:
    """Is there an invertible ``g`` with ``g(x op y) = g(x) op g(y)`` for every op?

    The ideal decides this over the algebraic closure; a rational witness is
    looked for by scanning ``g`` over ``witness_grid``.
    """
    if a.dim != b.dim:
        raise SolverError(f"dimensions differ: {a.dim} vs {b.dim}")
    limit = cap if cap is not None else _cap(DEFAULT_ISO_CAP)
    n = a.dim
    if n > limit:
        raise CapExceeded(f"dimension {n} exceeds the cap {limit} (set ADEND_MAX_DIM to raise it)")
    gnames = [f"g{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    t = "t"
    while t in gnames:
        t += "_"
    names = tuple(gnames + [t])
    G = [[Poly.var(names, f"g{i + 1}{j + 1}") for j in range(n)] for i in range(n)]
    cols = [[G[i][j] for i in range(n)] for j in range(n)]
    zero = Poly.zero(names)
    system = []
    for op in ops:
        ca = a.tensor(op)
        cb = _const_tensor(b.tensor(op), names)
        for i in range(n):
            for j in range(n):
                image = [sum((G[r][k] * ca[i][j][k] for k in range(n)), zero) for r in range(n)]
                prod = bilinear(cb, cols[i], cols[j])
                for x, y in zip(image, prod):
                    p = x - _as_poly(y, names)
                    if p:
                        system.append(p)
    system.append(_det(G, zero) * Poly.var(names, t) - 1)
    raw = buchberger(system, variables=names)
    consistent = not raw.is_unit()
    ideal = SolutionIdeal(names, raw, raw, tuple(independent_variables(raw)) if consistent else (), consistent,
                          tuple(system))
    witness = None
    if consistent:
        ident = LinearMap.identity(n)
        if is_homomorphism(ident, a, b, ops):
            witness = ident
        for point in ([] if witness else grid_points(gnames, witness_grid)):
            g = LinearMap.from_rows([[point[f"g{i + 1}{j + 1}"] for j in range(n)] for i in range(n)], n)
            if g.is_invertible() and is_homomorphism(g, a, b, ops):
                witness = g
                break
    return IsoResult(ideal, witness)


def _det(G, zero):
    n = len(G)
    if n == 0:
        return zero + 1
    total = zero
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = zero + sign
        for i in range(n):
            term = term * G[i][perm[i]]
        total = total + term
    return total


# soundness helpers ---------------------------------------------------------------

def check_point_compatible(sol: SolutionIdeal, point: Mapping[str, Fraction]) -> bool:
    alg = sol.symbolic.evaluate(full_point(sol, point))
    return check_structure(alg, "anti-dendriform", {"tri_r": "rop", "tri_l": "lop"}).holds


def check_point_anti_rb(alg: AlgebraSpace, op: str, point: Mapping[str, Fraction]):
    n = alg.dim
    P = LinearMap.from_rows([[Fraction(point[f"a{i + 1}{j + 1}"]) for j in range(n)] for i in range(n)], n)
    return check_anti_rb(P, alg, op)
