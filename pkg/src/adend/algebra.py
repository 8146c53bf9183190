"""Finite-dimensional algebras given by structure constants.

``ops[name][i][j][k]`` is the coefficient of ``e_k`` in ``e_i op e_j``.
Tensor entries are Fractions for concrete algebras; the evaluation helpers
only use ``+``, ``*`` and truthiness, so they also run on polynomial entries
(see :mod:`adend.solver`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Mapping, Sequence, Tuple

from . import linalg
from .rational import format_rational, parse_rational

Tensor = Tuple[Tuple[Tuple[Any, ...], ...], ...]
Vector = Tuple[Any, ...]

ZERO_OP = "0"


class AlgebraError(ValueError):
    """Structural problem with an algebra, op name or vector."""


class AlgebraFormatError(AlgebraError):
    """Malformed algebra file; ``where`` names the offending field."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def zero_tensor(dim: int) -> Tensor:
    z = Fraction(0)
    return tuple(tuple(tuple(z for _ in range(dim)) for _ in range(dim)) for _ in range(dim))


def tensor_from_products(dim: int, products: Mapping[Tuple[int, int], Mapping[int, Any]]) -> Tensor:
    """Build a tensor from sparse ``{(i, j): {k: coef}}`` data (0-based)."""
    c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for (i, j), out in products.items():
        for k, coef in out.items():
            c[i][j][k] = parse_rational(coef) if not isinstance(coef, Fraction) else coef
    return freeze_tensor(c)


def freeze_tensor(c) -> Tensor:
    return tuple(tuple(tuple(row) for row in plane) for plane in c)


def tensor_shape_ok(c, dim: int) -> bool:
    return len(c) == dim and all(len(p) == dim and all(len(r) == dim for r in p) for p in c)


def tensor_combine(dim: int, *pairs) -> Tensor:
    """Linear combination ``sum(coef * tensor)`` of tensors."""
    out = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for coef, t in pairs:
        if not coef:
            continue
        for i in range(dim):
            for j in range(dim):
                for k in range(dim):
                    if t[i][j][k]:
                        out[i][j][k] = out[i][j][k] + coef * t[i][j][k]
    return freeze_tensor(out)


def tensor_opposite(c: Tensor) -> Tensor:
    dim = len(c)
    return freeze_tensor([[[c[j][i][k] for k in range(dim)] for j in range(dim)] for i in range(dim)])


def bilinear(c, u: Sequence, v: Sequence) -> list:
    dim = len(c)
    out = [Fraction(0)] * dim
    for i in range(dim):
        ui = u[i]
        if not ui:
            continue
        ci = c[i]
        for j in range(dim):
            vj = v[j]
            if not vj:
                continue
            w = ui * vj
            cij = ci[j]
            for k in range(dim):
                if cij[k]:
                    out[k] = out[k] + w * cij[k]
    return out


def basis_vector(dim: int, i: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(dim))


@dataclass(frozen=True)
class LinearMap:
    """Matrix with columns equal to the images of the domain basis."""

    matrix: Tuple[Tuple[Fraction, ...], ...]
    domain_dim: int
    codomain_dim: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], domain_dim: int | None = None) -> "LinearMap":
        mat = tuple(tuple(parse_rational(x) if not isinstance(x, Fraction) else x for x in row) for row in rows)
        cod = len(mat)
        dom = len(mat[0]) if mat else (domain_dim or 0)
        if any(len(r) != dom for r in mat):
            raise AlgebraError("ragged matrix")
        if domain_dim is not None and dom != domain_dim:
            raise AlgebraError(f"matrix has {dom} columns, expected {domain_dim}")
        return cls(mat, dom, cod)

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls.from_rows(linalg.identity(n), n)

    @classmethod
    def zero(cls, codomain_dim: int, domain_dim: int) -> "LinearMap":
        return cls(tuple(tuple(Fraction(0) for _ in range(domain_dim)) for _ in range(codomain_dim)), domain_dim, codomain_dim)

    def apply(self, v: Sequence) -> list:
        if len(v) != self.domain_dim:
            raise AlgebraError(f"vector of length {len(v)} for a map with domain dim {self.domain_dim}")
        out = []
        for row in self.matrix:
            s = Fraction(0)
            for a, x in zip(row, v):
                if a and x:
                    s = s + a * x
            out.append(s)
        return out

    def column(self, j: int) -> list:
        return [row[j] for row in self.matrix]

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self ∘ other``."""
        if other.codomain_dim != self.domain_dim:
            raise AlgebraError(f"cannot compose {self.codomain_dim}x{self.domain_dim} after {other.codomain_dim}x{other.domain_dim}")
        return LinearMap.from_rows(linalg.matmul(self.matrix, other.matrix), other.domain_dim)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if (self.domain_dim, self.codomain_dim) != (other.domain_dim, other.codomain_dim):
            raise AlgebraError("shape mismatch in map sum")
        return LinearMap.from_rows(linalg.add(self.matrix, other.matrix), self.domain_dim)

    def __neg__(self) -> "LinearMap":
        return self.scaled(-1)

    def scaled(self, c) -> "LinearMap":
        return LinearMap.from_rows(linalg.scale(Fraction(c), self.matrix), self.domain_dim)

    def transpose(self) -> "LinearMap":
        return LinearMap.from_rows(linalg.transpose(self.matrix), self.codomain_dim)

    def is_square(self) -> bool:
        return self.domain_dim == self.codomain_dim

    def is_invertible(self) -> bool:
        return self.is_square() and linalg.rank(self.matrix) == self.domain_dim

    def inverse(self) -> "LinearMap":
        if not self.is_square():
            raise AlgebraError("only square maps can be inverted")
        return LinearMap.from_rows(linalg.inverse(self.matrix), self.domain_dim)

    def rank(self) -> int:
        return linalg.rank(self.matrix)

    def is_zero(self) -> bool:
        return linalg.is_zero(self.matrix)

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.matrix]


@dataclass(frozen=True)
class BilinForm:
    gram: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "BilinForm":
        g = tuple(tuple(parse_rational(x) if not isinstance(x, Fraction) else x for x in row) for row in rows)
        if any(len(r) != len(g) for r in g):
            raise AlgebraError("Gram matrix must be square")
        return cls(g)

    @classmethod
    def zero(cls, n: int) -> "BilinForm":
        return cls.from_rows(linalg.zeros(n, n))

    @property
    def dim(self) -> int:
        return len(self.gram)

    def __call__(self, u: Sequence, v: Sequence) -> Fraction:
        s = Fraction(0)
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self.gram[i]
            for j, vj in enumerate(v):
                if vj and row[j]:
                    s += ui * row[j] * vj
        return s

    def is_symmetric(self) -> bool:
        n = self.dim
        return all(self.gram[i][j] == self.gram[j][i] for i in range(n) for j in range(i + 1, n))

    def is_antisymmetric(self) -> bool:
        n = self.dim
        return all(self.gram[i][j] == -self.gram[j][i] for i in range(n) for j in range(i, n))

    def determinant(self) -> Fraction:
        return linalg.det(self.gram) if self.dim else Fraction(1)

    def is_nondegenerate(self) -> bool:
        return self.determinant() != 0


@dataclass(frozen=True)
class AlgebraSpace:
    dim: int
    basis: Tuple[str, ...]
    ops: Mapping[str, Tensor] = field(default_factory=dict)
    forms: Mapping[str, BilinForm] = field(default_factory=dict)

    def __post_init__(self):
        basis = tuple(self.basis)
        object.__setattr__(self, "basis", basis)
        if self.dim < 0:
            raise AlgebraError("dimension must be nonnegative")
        if len(basis) != self.dim:
            raise AlgebraError(f"{len(basis)} basis names for dimension {self.dim}")
        if len(set(basis)) != len(basis):
            raise AlgebraError("basis names must be distinct")
        ops = {}
        for name, c in self.ops.items():
            if name == ZERO_OP:
                raise AlgebraError(f"op name {ZERO_OP!r} is reserved for the zero operation")
            if not tensor_shape_ok(c, self.dim):
                raise AlgebraError(f"tensor for op {name!r} does not have shape {self.dim}^3")
            ops[name] = freeze_tensor(c)
        object.__setattr__(self, "ops", ops)
        forms = {}
        for name, b in self.forms.items():
            if not isinstance(b, BilinForm):
                b = BilinForm.from_rows(b)
            if b.dim != self.dim:
                raise AlgebraError(f"form {name!r} has size {b.dim}, expected {self.dim}")
            forms[name] = b
        object.__setattr__(self, "forms", forms)

    @classmethod
    def create(cls, basis: Sequence[str] | int, ops: Mapping[str, Tensor] | None = None, forms=None) -> "AlgebraSpace":
        if isinstance(basis, int):
            basis = [f"e{i + 1}" for i in range(basis)]
        basis = tuple(basis)
        return cls(len(basis), basis, dict(ops or {}), dict(forms or {}))

    def tensor(self, name: str) -> Tensor:
        if name == ZERO_OP:
            return zero_tensor(self.dim)
        try:
            return self.ops[name]
        except KeyError:
            raise AlgebraError(f"unknown op {name!r}; available: {sorted(self.ops)}") from None

    def form(self, name: str) -> BilinForm:
        try:
            return self.forms[name]
        except KeyError:
            raise AlgebraError(f"unknown form {name!r}; available: {sorted(self.forms)}") from None

    def has_op(self, name: str) -> bool:
        return name == ZERO_OP or name in self.ops

    def with_ops(self, **new_ops: Tensor) -> "AlgebraSpace":
        ops = dict(self.ops)
        ops.update(new_ops)
        return AlgebraSpace(self.dim, self.basis, ops, self.forms)

    def with_op(self, name: str, tensor: Tensor, replace: bool = False) -> "AlgebraSpace":
        if name in self.ops and not replace:
            raise AlgebraError(f"op {name!r} already exists")
        ops = dict(self.ops)
        ops[name] = tensor
        return AlgebraSpace(self.dim, self.basis, ops, self.forms)

    def with_form(self, name: str, form: BilinForm) -> "AlgebraSpace":
        forms = dict(self.forms)
        forms[name] = form
        return AlgebraSpace(self.dim, self.basis, self.ops, forms)

    def only_ops(self, *names: str) -> "AlgebraSpace":
        return AlgebraSpace(self.dim, self.basis, {n: self.tensor(n) for n in names}, self.forms)

    def basis_vector(self, i: int) -> Vector:
        return basis_vector(self.dim, i)

    def vector(self, coords: Mapping[str, Any] | Sequence) -> Vector:
        if isinstance(coords, Mapping):
            out = [Fraction(0)] * self.dim
            for name, c in coords.items():
                out[self.basis.index(name)] = parse_rational(c) if not isinstance(c, Fraction) else c
            return tuple(out)
        if len(coords) != self.dim:
            raise AlgebraError(f"vector of length {len(coords)} in dimension {self.dim}")
        return tuple(parse_rational(c) if not isinstance(c, Fraction) else c for c in coords)

    def product(self, op: str, i: int, j: int) -> Vector:
        return tuple(self.tensor(op)[i][j])

    def format_vector(self, v: Sequence) -> str:
        return format_vector(self.basis, v)

    def nonzero_products(self, op: str) -> list[tuple[str, str, str]]:
        c = self.tensor(op)
        out = []
        for i in range(self.dim):
            for j in range(self.dim):
                v = c[i][j]
                if any(v):
                    out.append((self.basis[i], self.basis[j], self.format_vector(v)))
        return out

    def describe(self) -> str:
        lines = [f"dim {self.dim}, basis {', '.join(self.basis) or '(empty)'}"]
        for name in self.ops:
            prods = self.nonzero_products(name)
            if not prods:
                lines.append(f"  {name}: zero")
            for a, b, v in prods:
                lines.append(f"  {a} {name} {b} = {v}")
        for name, b in self.forms.items():
            lines.append(f"  form {name}: " + "; ".join(" ".join(format_rational(x) for x in row) for row in b.gram))
        return "\n".join(lines)


def format_vector(basis: Sequence[str], v: Sequence) -> str:
    parts = []
    for name, c in zip(basis, v):
        if not c:
            continue
        c = Fraction(c)
        mag = abs(c)
        body = name if mag == 1 else f"{format_rational(mag)}{name}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


# operations on concrete algebras --------------------------------------------

def eval_op(alg: AlgebraSpace, op: str, u: Sequence, v: Sequence) -> Vector:
    if len(u) != alg.dim or len(v) != alg.dim:
        raise AlgebraError(f"vectors must have length {alg.dim}")
    return tuple(bilinear(alg.tensor(op), u, v))


def mult_operator(alg: AlgebraSpace, op: str, side: str, x: Sequence) -> LinearMap:
    """Matrix of ``L_op(x): y -> x op y`` (side "left") or ``R_op(x): y -> y op x``."""
    if side not in ("left", "right"):
        raise AlgebraError(f"side must be 'left' or 'right', got {side!r}")
    if len(x) != alg.dim:
        raise AlgebraError(f"vector must have length {alg.dim}")
    c = alg.tensor(op)
    n = alg.dim
    cols = []
    for j in range(n):
        ej = basis_vector(n, j)
        cols.append(bilinear(c, x, ej) if side == "left" else bilinear(c, ej, x))
    return LinearMap.from_rows(linalg.transpose(cols) if n else [], n)


def left_mult(alg: AlgebraSpace, op: str, i: int) -> LinearMap:
    return mult_operator(alg, op, "left", alg.basis_vector(i))


def right_mult(alg: AlgebraSpace, op: str, i: int) -> LinearMap:
    return mult_operator(alg, op, "right", alg.basis_vector(i))


def annihilator_dims(alg: AlgebraSpace, op: str) -> tuple[int, int, int]:
    """``(dim Ann^L, dim Ann^R, dim A.A)``.

    ``Ann^L = {x : x op A = 0}``; ``Ann^R = {x : A op x = 0}``.
    """
    n = alg.dim
    if n == 0:
        return (0, 0, 0)
    c = alg.tensor(op)
    # x in Ann^L  <=>  sum_i x_i c[i][j][k] = 0 for all j, k
    left_rows = [[c[i][j][k] for i in range(n)] for j in range(n) for k in range(n)]
    right_rows = [[c[j][i][k] for i in range(n)] for j in range(n) for k in range(n)]
    products = [list(c[i][j]) for i in range(n) for j in range(n)]
    return (n - linalg.rank(left_rows), n - linalg.rank(right_rows), linalg.span_dim(products))


# JSON -------------------------------------------------------------------------

def _tensor_to_json(alg: AlgebraSpace, c: Tensor) -> dict:
    out = {}
    for i in range(alg.dim):
        for j in range(alg.dim):
            entry = {alg.basis[k]: format_rational(c[i][j][k]) for k in range(alg.dim) if c[i][j][k]}
            if entry:
                out[f"{alg.basis[i]},{alg.basis[j]}"] = entry
    return out


def algebra_to_json(alg: AlgebraSpace) -> dict:
    data: Dict[str, Any] = {
        "dim": alg.dim,
        "basis": list(alg.basis),
        "ops": {name: _tensor_to_json(alg, c) for name, c in alg.ops.items()},
    }
    if alg.forms:
        forms = {}
        for name, b in alg.forms.items():
            forms[name] = {
                f"{alg.basis[i]},{alg.basis[j]}": format_rational(b.gram[i][j])
                for i in range(alg.dim)
                for j in range(alg.dim)
                if b.gram[i][j]
            }
        data["forms"] = forms
    return data


def _pair_key(basis_index: Mapping[str, int], key: str, where: str) -> tuple[int, int]:
    parts = [p.strip() for p in key.split(",")]
    if len(parts) != 2:
        raise AlgebraFormatError(f"expected key 'ei,ej', got {key!r}", where)
    try:
        return basis_index[parts[0]], basis_index[parts[1]]
    except KeyError as exc:
        raise AlgebraFormatError(f"unknown basis name {exc.args[0]!r}", where) from None


def _rational_field(value, where: str) -> Fraction:
    if isinstance(value, float):
        raise AlgebraFormatError("floats are not allowed; write rationals as strings like \"1/2\"", where)
    try:
        return parse_rational(value)
    except (TypeError, ValueError) as exc:
        raise AlgebraFormatError(str(exc), where) from None


def algebra_from_json(data: Any) -> AlgebraSpace:
    if not isinstance(data, Mapping):
        raise AlgebraFormatError("top level must be a JSON object")
    unknown = set(data) - {"dim", "basis", "ops", "forms", "description", "id", "params"}
    if unknown:
        raise AlgebraFormatError(f"unknown keys {sorted(unknown)}")
    if "basis" not in data and "dim" not in data:
        raise AlgebraFormatError("missing 'dim' and 'basis'")
    dim = data.get("dim")
    basis = data.get("basis")
    if basis is None:
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
            raise AlgebraFormatError("must be a nonnegative integer", "dim")
        basis = [f"e{i + 1}" for i in range(dim)]
    if not isinstance(basis, list) or not all(isinstance(b, str) and b for b in basis):
        raise AlgebraFormatError("must be a list of nonempty strings", "basis")
    if dim is None:
        dim = len(basis)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim != len(basis):
        raise AlgebraFormatError(f"dim {dim!r} does not match {len(basis)} basis names", "dim")
    if len(set(basis)) != len(basis):
        raise AlgebraFormatError("basis names must be distinct", "basis")
    index = {b: i for i, b in enumerate(basis)}
    ops_data = data.get("ops", {})
    if not isinstance(ops_data, Mapping):
        raise AlgebraFormatError("must be an object", "ops")
    ops = {}
    for name, table in ops_data.items():
        where = f"ops.{name}"
        if name == ZERO_OP:
            raise AlgebraFormatError(f"op name {ZERO_OP!r} is reserved", where)
        if not isinstance(table, Mapping):
            raise AlgebraFormatError("must be an object of 'ei,ej' keys", where)
        c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for key, out in table.items():
            i, j = _pair_key(index, key, f"{where}.{key}")
            if not isinstance(out, Mapping):
                raise AlgebraFormatError("must be an object {basis name: rational}", f"{where}.{key}")
            for kname, coef in out.items():
                if kname not in index:
                    raise AlgebraFormatError(f"unknown basis name {kname!r}", f"{where}.{key}")
                c[i][j][index[kname]] = _rational_field(coef, f"{where}.{key}.{kname}")
        ops[name] = freeze_tensor(c)
    forms_data = data.get("forms", {})
    if not isinstance(forms_data, Mapping):
        raise AlgebraFormatError("must be an object", "forms")
    forms = {}
    for name, table in forms_data.items():
        where = f"forms.{name}"
        if not isinstance(table, Mapping):
            raise AlgebraFormatError("must be an object of 'ei,ej' keys", where)
        g = linalg.zeros(dim, dim)
        for key, coef in table.items():
            i, j = _pair_key(index, key, f"{where}.{key}")
            g[i][j] = _rational_field(coef, f"{where}.{key}")
        forms[name] = BilinForm.from_rows(g)
    return AlgebraSpace(dim, tuple(basis), ops, forms)


def load_algebra(path: str | Path) -> AlgebraSpace:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", str(path)) from None
    return algebra_from_json(data)


def save_algebra(alg: AlgebraSpace, path: str | Path) -> None:
    Path(path).write_text(json.dumps(algebra_to_json(alg), indent=2) + "\n")
