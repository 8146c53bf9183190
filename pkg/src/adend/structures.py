"""Named axiom bundles and the checker that binds algebra ops to them.

A bundle declares op slots, each with a long name (``tri_r``) and the
symbol used in its identities (``>``).  Derived ops such as the sum
``.`` or the commutator ``[,]`` are defined by two-variable expressions
in the same identity language and are computed before checking.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import ZERO_OP, AlgebraSpace
from .identity import (
    IdentityExpr,
    Verdict,
    derive_tensor,
    first_violation,
    parse_identities,
    parse_identity,
)
from .rational import format_rational, parse_rational


class StructureError(ValueError):
    pass


class ForbiddenParameter(StructureError):
    pass


@dataclass(frozen=True)
class Slot:
    name: str
    symbol: str


@dataclass(frozen=True)
class StructureDef:
    name: str
    slots: Tuple[Slot, ...]
    identities: Tuple[IdentityExpr, ...] = ()
    derived: Tuple[Tuple[str, IdentityExpr], ...] = ()
    description: str = ""
    # q-parameterized bundles build their identities from q at check time
    q_builder: Optional[Callable[[Fraction], Tuple[IdentityExpr, ...]]] = field(default=None, compare=False)

    @property
    def parametric(self) -> bool:
        return self.q_builder is not None

    @property
    def slot_names(self) -> Tuple[str, ...]:
        return tuple(s.name for s in self.slots)

    def instantiate(self, q) -> "StructureDef":
        if self.q_builder is None:
            raise StructureError(f"bundle {self.name!r} takes no parameter q")
        q = parse_rational(q)
        if q in (0, 1, -1):
            raise ForbiddenParameter(f"bundle {self.name!r} requires q not in {{0, 1, -1}}, got {q}")
        return StructureDef(
            f"{self.name}[q={format_rational(q)}]", self.slots, self.q_builder(q), self.derived, self.description
        )

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "slots": {s.name: s.symbol for s in self.slots},
            "identities": [i.to_source() for i in self.identities],
        }
        if self.derived:
            out["derived"] = {sym: e.to_source() for sym, e in self.derived}
        if self.parametric:
            out["parametric"] = True
        return out


# identity text helpers ------------------------------------------------------

def _ids(*sources: str) -> Tuple[IdentityExpr, ...]:
    out: List[IdentityExpr] = []
    for src in sources:
        out.extend(parse_identities(src))
    return tuple(out)


def _combo(header: str, terms: Sequence[Tuple[Fraction, str]]) -> IdentityExpr:
    """``sum(c * (expr)) = 0`` with zero coefficients dropped."""
    pieces = []
    for c, body in terms:
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        pieces.append(f"{sign} {format_rational(abs(c))}*({body})")
    text = " ".join(pieces) if pieces else "0"
    if text.startswith("+ "):
        text = text[2:]
    return parse_identity(f"{header}: {text} = 0")


def _derived(**defs: str) -> Tuple[Tuple[str, IdentityExpr], ...]:
    return tuple((sym, parse_identity(src)) for sym, src in defs.items())


SUM = _derived(**{".": "x,y: x>y + x<y"})
BRACKET_OF_MUL = (("[,]", parse_identity("x,y: x.y - y.x")),)
BRACKET_OF_CIRC = (("[,]", parse_identity("x,y: x o y - y o x")),)

DENDRIFORM_IDS = (
    "x,y,z: x>(y>z) = (x.y)>z",
    "x,y,z: (x<y)<z = x<(y.z)",
    "x,y,z: (x>y)<z = x>(y<z)",
)
ANTI_DENDRIFORM_IDS = (
    "x,y,z: x>(y>z) = -((x.y)>z) = -(x<(y.z)) = (x<y)<z",
    "x,y,z: (x>y)<z = x>(y<z)",
)
S1 = "x,y,z: x>(y>z) = (x<y)<z"
S2 = "x,y,z: (x<y)>z = x<(y>z)"
ANTI_S1 = "x,y,z: (x<y)>z = x<(y>z)"
PRE_LIE = "x,y,z: (x*y)*z - x*(y*z) = (y*x)*z - y*(x*z)"
ANTI_PRE_LIE_21 = "x,y,z: x o (y o z) - y o (x o z) = (y'[,]'x) o z"
ANTI_PRE_LIE_22 = "x,y,z: (x'[,]'y) o z + (y'[,]'z) o x + (z'[,]'x) o y = 0"
JACOBI = "x,y,z: x'[,]'(y'[,]'z) + y'[,]'(z'[,]'x) + z'[,]'(x'[,]'y) = 0"

SUCC_PREC = (Slot("succ", ">"), Slot("prec", "<"))
TRI = (Slot("tri_r", ">"), Slot("tri_l", "<"))


def _dendri_q(q: Fraction) -> Tuple[IdentityExpr, ...]:
    return _ids(S1, S2) + (
        _combo("x,y,z", [
            (q * q + 3 * q + 2, "(x<y)<z"),
            (q * q + 2 * q, "x>(y<z)"),
            (q * q - q, "x<(y<z)"),
        ]),
    )


def _anti_dendri_q(q: Fraction) -> Tuple[IdentityExpr, ...]:
    return _ids(ANTI_S1) + (
        _combo("x,y,z", [
            (-q * q + q + 2, "(x<y)<z"),
            (-q * q, "(x>y)<z"),
            (q * q + q, "x<(y<z)"),
        ]),
    )


def _pre_lie_q(q: Fraction) -> Tuple[IdentityExpr, ...]:
    return (
        _combo("x,y,z", [
            (2 + q, "(x'[,]'y)*z"),
            (-q * q - 2 * q, "z*(x'[,]'y)"),
            (q * q - q, "(z*y)*x - (z*x)*y"),
        ]),
    )


def _anti_pre_lie_q(q: Fraction) -> Tuple[IdentityExpr, ...]:
    return (
        _combo("x,y,z", [
            (2 + q, "(x'[,]'y) o z"),
            (-q * q, "z o (x'[,]'y)"),
            (q * q + q, "(z o x) o y - (z o y) o x"),
        ]),
    )


def _build_registry() -> Dict[str, StructureDef]:
    mul = (Slot("mul", "."),)
    star = (Slot("star", "*"),)
    circ = (Slot("circ", "o"),)
    defs = [
        StructureDef("associative", mul, _ids("x,y,z: (x.y).z = x.(y.z)"),
                     description="associative algebra"),
        StructureDef("lie", (Slot("bracket", "[,]"),),
                     _ids("x,y: x'[,]'y + y'[,]'x = 0", JACOBI),
                     description="Lie algebra: antisymmetry and Jacobi"),
        StructureDef("lie-admissible", mul, _ids(JACOBI), BRACKET_OF_MUL,
                     description="commutator of the product is a Lie bracket"),
        StructureDef("dendriform", SUCC_PREC, _ids(*DENDRIFORM_IDS), SUM,
                     description="dendriform algebra (succ, prec)"),
        StructureDef("anti-dendriform", TRI, _ids(*ANTI_DENDRIFORM_IDS), SUM,
                     description="anti-dendriform algebra (tri_r, tri_l)"),
        StructureDef("anti-dendriform-equiv", TRI,
                     _ids("x,y,z: (x.y).z = x.(y.z)",
                          "x,y,z: x>(y>z) = -((x.y)>z)",
                          "x,y,z: (x<y)<z = -(x<(y.z))",
                          "x,y,z: (x>y)<z = x>(y<z)"), SUM,
                     description="associative admissible plus the three bimodule-type identities"),
        StructureDef("associative-admissible", TRI, _ids("x,y,z: (x.y).z = x.(y.z)"), SUM,
                     description="the sum of the two ops is associative"),
        StructureDef("pre-lie", star, _ids(PRE_LIE), description="(left) pre-Lie algebra"),
        StructureDef("anti-pre-lie", circ, _ids(ANTI_PRE_LIE_21, ANTI_PRE_LIE_22), BRACKET_OF_CIRC,
                     description="anti-pre-Lie algebra"),
        StructureDef("novikov", star, _ids(PRE_LIE, "x,y,z: (x*y)*z = (x*z)*y"),
                     description="Novikov algebra"),
        StructureDef("admissible-novikov", circ,
                     _ids(ANTI_PRE_LIE_21, "x,y,z: 2*(x o (y'[,]'z)) = (x o y) o z - (x o z) o y"),
                     BRACKET_OF_CIRC, description="admissible Novikov algebra"),
        StructureDef("novikov-type-dendriform", SUCC_PREC,
                     _ids(*DENDRIFORM_IDS, S1, S2, "x,y,z: x<(y<z) = 0"), SUM,
                     description="dendriform plus the two Novikov-type identities and x<(y<z)=0"),
        StructureDef("novikov-type-dendriform-equiv", SUCC_PREC,
                     _ids("x,y,z: x>(y>z) = (x<y)<z = x<(y>z) = (x<y)>z",
                          "x,y,z: x>(y<z) = (x>y)<z",
                          "x,y,z: (x>y)>z = 0",
                          "x,y,z: x<(y<z) = 0"), SUM,
                     description="equivalent form of the Novikov-type dendriform axioms"),
        StructureDef("admissible-ntd", TRI,
                     _ids(*ANTI_DENDRIFORM_IDS, ANTI_S1, "x,y,z: x<(y<z) = 2*((x.y)<z)"), SUM,
                     description="admissible Novikov-type dendriform algebra"),
        StructureDef("admissible-ntd-equiv", TRI,
                     _ids("x,y,z: (x>y)>z = x<(y<z) = 2/3*((x>y)<z) - 2/3*((x<y)>z)",
                          "x,y,z: x>(y>z) = (x<y)<z = -2/3*((x>y)<z) - 1/3*((x<y)>z)",
                          "x,y,z: x>(y<z) = (x>y)<z",
                          "x,y,z: x<(y>z) = (x<y)>z"), SUM,
                     description="equivalent form of the admissible Novikov-type dendriform axioms"),
        StructureDef("dendri-q-cond", SUCC_PREC, (), SUM, q_builder=_dendri_q,
                     description="extra conditions making the q-algebra of a dendriform algebra anti-dendriform"),
        StructureDef("anti-dendri-q-cond", TRI, (), SUM, q_builder=_anti_dendri_q,
                     description="extra conditions making the (-q)-algebra of an anti-dendriform algebra dendriform"),
        StructureDef("pre-lie-q-cond", star, (), (("[,]", parse_identity("x,y: x*y - y*x")),),
                     q_builder=_pre_lie_q,
                     description="condition making the (-q)-algebra of a pre-Lie algebra anti-pre-Lie"),
        StructureDef("anti-pre-lie-q-cond", circ, (), BRACKET_OF_CIRC, q_builder=_anti_pre_lie_q,
                     description="condition making the (-q)-algebra of an anti-pre-Lie algebra pre-Lie"),
        StructureDef("two-nilpotent", mul, _ids("x,y,z: (x.y).z = 0", "x,y,z: x.(y.z) = 0"),
                     description="all triple products vanish"),
        StructureDef("two-step-nilpotent-lie", mul, _ids("x,y,z: (x'[,]'y)'[,]'z = 0"), BRACKET_OF_MUL,
                     description="commutator bracket satisfies [[x,y],z]=0"),
    ]
    return {d.name: d for d in defs}


_REGISTRY = _build_registry()


def registry() -> Dict[str, StructureDef]:
    return dict(_REGISTRY)


def get_structure(name: str) -> StructureDef:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise StructureError(f"unknown structure {name!r}; known: {', '.join(sorted(_REGISTRY))}") from None


def resolve_binding(defn: StructureDef, binding: Mapping[str, str]) -> Dict[str, str]:
    """Map each slot symbol to an algebra op name.

    Binding keys may be slot names or slot symbols.  ``"0"`` binds the zero op.
    """
    by_key = {}
    for s in defn.slots:
        by_key[s.name] = s.symbol
        by_key[s.symbol] = s.symbol
    out: Dict[str, str] = {}
    for key, op in binding.items():
        if key not in by_key:
            raise StructureError(f"bundle {defn.name!r} has no slot {key!r}; slots: {', '.join(defn.slot_names)}")
        out[by_key[key]] = op
    missing = [s.name for s in defn.slots if s.symbol not in out]
    if missing:
        raise StructureError(f"binding for {defn.name!r} misses slot(s) {', '.join(missing)}")
    return out


# op names the catalog uses for the two triangle slots
CONVENTIONAL_OPS = {"tri_r": "rop", "tri_l": "lop"}


def default_binding(defn: StructureDef, alg: AlgebraSpace) -> Dict[str, str]:
    """Bind slots to ops of the same name (slot name, symbol or the
    ``rop``/``lop`` convention), if unambiguous."""
    out = {}
    for s in defn.slots:
        if s.name in alg.ops:
            out[s.name] = s.name
        elif s.symbol in alg.ops:
            out[s.name] = s.symbol
        elif CONVENTIONAL_OPS.get(s.name) in alg.ops:
            out[s.name] = CONVENTIONAL_OPS[s.name]
        elif len(defn.slots) == 1 and len(alg.ops) == 1:
            out[s.name] = next(iter(alg.ops))
        else:
            raise StructureError(f"no binding given for slot {s.name!r} of {defn.name!r}")
    return out


def bundle_tensors(defn: StructureDef, tensors_by_symbol: Mapping[str, object], dim: int) -> Dict[str, object]:
    """Add derived-op tensors to the slot tensors."""
    tensors = dict(tensors_by_symbol)
    for sym, expr in defn.derived:
        tensors[sym] = derive_tensor(expr, tensors, dim)
    return tensors


def check_bundle(defn: StructureDef, tensors_by_symbol: Mapping[str, object], basis: Sequence[str]) -> Verdict:
    from .algebra import format_vector

    tensors = bundle_tensors(defn, tensors_by_symbol, len(basis))
    for ident in defn.identities:
        hit = first_violation(ident, tensors, len(basis))
        if hit is not None:
            idx, val = hit
            return Verdict(
                False,
                witness=tuple(basis[i] for i in idx),
                identity=ident.to_source(),
                value=format_vector(basis, val),
                detail=defn.name,
            )
    return Verdict(True, detail=defn.name)


def _resolve_def(name_or_def, q) -> StructureDef:
    defn = name_or_def if isinstance(name_or_def, StructureDef) else get_structure(name_or_def)
    if defn.parametric:
        if q is None:
            raise StructureError(f"bundle {defn.name!r} needs a value for q")
        return defn.instantiate(q)
    if q is not None:
        raise StructureError(f"bundle {defn.name!r} takes no parameter q")
    return defn


def check_structure(alg: AlgebraSpace, def_name, binding: Optional[Mapping[str, str]] = None, q=None) -> Verdict:
    """Check every identity of a bundle on ``alg`` under ``binding``.

    >>> from adend.catalog import load
    >>> check_structure(load("B2"), "anti-dendriform", {"tri_r": "rop", "tri_l": "lop"}).holds
    True
    """
    defn = _resolve_def(def_name, q)
    if binding is None:
        binding = default_binding(defn, alg)
    sym_to_op = resolve_binding(defn, binding)
    tensors = {sym: alg.tensor(op) for sym, op in sym_to_op.items()}
    return check_bundle(defn, tensors, alg.basis)


def check_equiv_characterizations(alg: AlgebraSpace, pair: Tuple[str, str], binding=None, q=None) -> bool:
    """True iff both bundles give the same verdict on ``alg``."""
    a, b = (_resolve_def(n, q) for n in pair)
    if a.slot_names != b.slot_names:
        raise StructureError(f"bundles {a.name!r} and {b.name!r} do not share slots")
    return check_structure(alg, a, binding).holds == check_structure(alg, b, binding).holds


# user-defined bundles -------------------------------------------------------

def structure_from_json(data: Mapping) -> StructureDef:
    """Bundle from ``{name, slots, identities, derived}``.

    ``slots`` is either a list of symbols or a map from slot name to symbol.
    """
    try:
        name = data["name"]
        raw_slots = data["slots"]
        sources = data["identities"]
    except KeyError as exc:
        raise StructureError(f"bundle file misses field {exc.args[0]!r}") from None
    if isinstance(raw_slots, Mapping):
        slots = tuple(Slot(k, v) for k, v in raw_slots.items())
    else:
        slots = tuple(Slot(s, s) for s in raw_slots)
    if any(s.symbol == ZERO_OP for s in slots):
        raise StructureError(f"{ZERO_OP!r} cannot be used as a slot symbol")
    derived = _derived(**dict(data.get("derived", {})))
    identities = _ids(*sources)
    known = {s.symbol for s in slots} | {sym for sym, _ in derived}
    for sym, expr in derived:
        unknown = expr.ops() - known
        if unknown:
            raise StructureError(f"derived op {sym!r} uses unknown op(s) {sorted(unknown)}")
    for ident in identities:
        unknown = ident.ops() - known
        if unknown:
            raise StructureError(f"identity {ident} uses unknown op(s) {sorted(unknown)}")
    return StructureDef(name, slots, identities, derived, data.get("description", ""))


def load_structure(path) -> StructureDef:
    return structure_from_json(json.loads(Path(path).read_text()))


def warn_degenerate_q(q: Fraction) -> None:
    if q in (1, -1):
        warnings.warn(f"q = {q}: the q-transform is not invertible", stacklevel=3)
