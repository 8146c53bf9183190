"""Built-in small algebras.

Op names used throughout the catalog:

* ``mul``  an associative product
* ``rop``  the right-triangle op of an anti-dendriform pair (slot ``tri_r``)
* ``lop``  the left-triangle op (slot ``tri_l``)
* ``succ``/``prec``  a dendriform pair
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from .algebra import AlgebraSpace, tensor_from_products
from .rational import format_rational, parse_rational
from .structures import check_structure

TRI = {"tri_r": "rop", "tri_l": "lop"}
DEND = {"succ": "succ", "prec": "prec"}
MUL = {"mul": "mul"}


class CatalogError(KeyError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    description: str
    algebra: AlgebraSpace
    params: Mapping[str, Fraction] = field(default_factory=dict)
    # (bundle, binding, expected verdict)
    expected: Tuple[Tuple[str, Mapping[str, str], bool], ...] = ()


@dataclass(frozen=True)
class _Recipe:
    description: str
    build: Callable[..., AlgebraSpace]
    defaults: Mapping[str, Fraction]
    expected: Tuple[Tuple[str, Mapping[str, str], bool], ...]
    two_op: bool = False


def _alg(dim: int, **ops: Mapping) -> AlgebraSpace:
    # ops given as {(i, j): {k: coef}} with 1-based indices
    tensors = {}
    for name, prods in ops.items():
        zero_based = {(i - 1, j - 1): {k - 1: c for k, c in out.items()} for (i, j), out in prods.items()}
        tensors[name] = tensor_from_products(dim, zero_based)
    return AlgebraSpace.create(dim, tensors)


def _a1():
    return _alg(2, mul={})


def _a2():
    return _alg(2, mul={(1, 1): {2: 1}})


def _b1():
    return _alg(2, rop={}, lop={})


def _b2():
    return _alg(2, rop={}, lop={(1, 1): {2: 1}})


def _b3(lam):
    return _alg(2, rop={(1, 1): {2: 1}}, lop={(1, 1): {2: lam}})


def _a1_2():
    return _alg(2, rop={(1, 1): {2: 1}}, lop={(1, 1): {2: -1}})


def _ex3d(gamma):
    half = Fraction(1, 2)
    return _alg(
        3,
        rop={(1, 1): {2: half, 3: gamma}, (1, 2): {3: 2}, (2, 1): {3: -1}},
        lop={(1, 1): {2: half, 3: -gamma}, (2, 1): {3: 2}, (1, 2): {3: -1}},
        mul={(1, 1): {2: 1}, (1, 2): {3: 1}, (2, 1): {3: 1}},
    )


def _ex224():
    return _alg(2, mul={(1, 1): {1: 1}, (1, 2): {2: 1}})


def _idem1():
    return AlgebraSpace.create(["e"], {"mul": tensor_from_products(1, {(0, 0): {0: 1}})})


def _a2_ntd():
    return _alg(2, succ={(1, 1): {2: 1}}, prec={})


ANTI = ("anti-dendriform", TRI, True)
ANTI_NTD = ("admissible-ntd", TRI, True)

_RECIPES: Dict[str, _Recipe] = {
    "A1": _Recipe("trivial 2-dim associative algebra", _a1, {},
                (("associative", MUL, True), ("two-nilpotent", MUL, True))),
    "A2": _Recipe("2-dim associative algebra e1.e1 = e2", _a2, {},
                (("associative", MUL, True), ("two-nilpotent", MUL, True), ("novikov", {"star": "mul"}, True))),
    "B1": _Recipe("trivial 2-dim anti-dendriform algebra", _b1, {}, (ANTI, ANTI_NTD), two_op=True),
    "B2": _Recipe("2-dim anti-dendriform algebra e1 lop e1 = e2", _b2, {}, (ANTI, ANTI_NTD), two_op=True),
    "B3": _Recipe("2-dim anti-dendriform family e1 rop e1 = e2, e1 lop e1 = lam e2", _b3,
                {"lam": Fraction(0)}, (ANTI, ANTI_NTD), two_op=True),
    "A1_2": _Recipe("anti-dendriform structure on the trivial algebra: e1 rop e1 = e2, e1 lop e1 = -e2",
                  _a1_2, {}, (ANTI, ANTI_NTD), two_op=True),
    "EX3D": _Recipe("3-dim anti-dendriform family on e1.e1 = e2, e1.e2 = e2.e1 = e3", _ex3d,
                  {"gamma": Fraction(1)},
                  (ANTI, ("associative", MUL, True), ("admissible-ntd", TRI, False)), two_op=True),
    "EX224": _Recipe("2-dim associative algebra e1.e1 = e1, e1.e2 = e2", _ex224, {},
                   (("associative", MUL, True),)),
    "IDEM1": _Recipe("1-dim associative algebra e.e = e", _idem1, {}, (("associative", MUL, True),)),
    "A2_NTD": _Recipe("(A2) as a dendriform pair with succ = mul, prec = 0", _a2_ntd, {},
                    (("dendriform", DEND, True), ("novikov-type-dendriform", DEND, True),
                     ("novikov-type-dendriform-equiv", DEND, True))),
}

PARAM_ALIASES = {"λ": "lam", "lambda": "lam", "γ": "gamma"}


def ids() -> List[str]:
    return list(_RECIPES)


def two_op_ids() -> List[str]:
    """Catalog entries carrying an anti-dendriform pair ``rop``/``lop``."""
    return [k for k, s in _RECIPES.items() if s.two_op]


def load(entry_id: str, params: Optional[Mapping[str, object]] = None) -> CatalogEntry:
    """Instantiate a catalog entry.

    >>> load("B3", {"lam": 5}).algebra.nonzero_products("lop")
    [('e1', 'e1', '5e2')]
    """
    try:
        recipe = _RECIPES[entry_id]
    except KeyError:
        raise CatalogError(f"unknown catalog id {entry_id!r}; known: {', '.join(_RECIPES)}") from None
    values = dict(recipe.defaults)
    for key, val in (params or {}).items():
        key = PARAM_ALIASES.get(key, key)
        if key not in recipe.defaults:
            raise CatalogError(f"{entry_id} takes no parameter {key!r}")
        values[key] = parse_rational(val) if not isinstance(val, Fraction) else val
    alg = recipe.build(**values)
    return CatalogEntry(entry_id, recipe.description, alg, values, recipe.expected)


def algebra(entry_id: str, **params) -> AlgebraSpace:
    return load(entry_id, params).algebra


@dataclass
class SelfTestReport:
    lines: List[str] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def self_test(extra_params: Optional[Mapping[str, List[Mapping]]] = None) -> SelfTestReport:
    """Run every entry's expected assertions at its default parameters.

    ``extra_params`` maps an id to further parameter sets to test.
    """
    report = SelfTestReport()
    runs = [(k, {}) for k in _RECIPES]
    for k, plist in (extra_params or {}).items():
        runs.extend((k, p) for p in plist)
    for entry_id, params in runs:
        entry = load(entry_id, params)
        shown = ",".join(f"{k}={format_rational(v)}" for k, v in entry.params.items())
        label = f"{entry_id}({shown})" if shown else entry_id
        for bundle, binding, want in entry.expected:
            v = check_structure(entry.algebra, bundle, binding)
            line = f"{label}: {bundle} -> {v.holds} (expected {want})"
            report.lines.append(line)
            if v.holds != want:
                msg = line
                if v.witness:
                    msg += f"; failing identity {v.identity} at {v.witness}"
                report.failures.append(msg)
    return report
