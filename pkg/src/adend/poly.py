"""Sparse multivariate polynomials over the rationals.

A :class:`Poly` is a map from exponent tuples to nonzero :class:`Fraction`
coefficients, tied to an ordered tuple of variable names.  Monomials are
compared in graded reverse lexicographic order with the variables ranked
by declaration order (first variable is largest).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .rational import format_rational, parse_rational

Monomial = Tuple[int, ...]


def grevlex_key(mono: Monomial) -> tuple:
    """Sort key: a larger key is a larger monomial in grevlex."""
    return (sum(mono), tuple(-e for e in reversed(mono)))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class VariableMismatch(ValueError):
    pass


class Poly:
    """Immutable sparse polynomial.  Do not mutate ``terms`` after construction."""

    __slots__ = ("vars", "terms", "_lm")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, Fraction] | None = None):
        self.vars: Tuple[str, ...] = tuple(variables)
        n = len(self.vars)
        clean: Dict[Monomial, Fraction] = {}
        for mono, coef in (terms or {}).items():
            if len(mono) != n:
                raise ValueError(f"exponent vector {mono} does not match {n} variables")
            if coef:
                clean[tuple(mono)] = Fraction(coef)
        self.terms = clean
        self._lm: Monomial | None = None

    @classmethod
    def _raw(cls, variables: Tuple[str, ...], terms: Dict[Monomial, Fraction]) -> "Poly":
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.vars = variables
        p.terms = terms
        p._lm = None
        return p

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Poly":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Poly":
        n = len(tuple(variables))
        return cls(variables, {(0,) * n: parse_rational(value) if not isinstance(value, Fraction) else value})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "Poly":
        variables = tuple(variables)
        try:
            idx = variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None
        mono = tuple(1 if i == idx else 0 for i in range(len(variables)))
        return cls._raw(variables, {mono: Fraction(1)})

    @classmethod
    def gens(cls, variables: Sequence[str]) -> list["Poly"]:
        variables = tuple(variables)
        return [cls.var(variables, v) for v in variables]

    # basic queries ----------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def leading_monomial(self) -> Monomial:
        if self._lm is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            self._lm = max(self.terms, key=grevlex_key)
        return self._lm

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def used_variables(self) -> set[str]:
        out = set()
        for mono in self.terms:
            for name, e in zip(self.vars, mono):
                if e:
                    out.add(name)
        return out

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return Poly._raw(self.vars, {m: c / lc for m, c in self.terms.items()})

    # arithmetic ---------------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise VariableMismatch(f"variable lists differ: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.vars, Fraction(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw(self.vars, {})
            return Poly._raw(self.vars, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = Poly.constant(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, mono: Monomial, coef: Fraction) -> "Poly":
        return Poly._raw(self.vars, {mono_mul(m, mono): c * coef for m, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.vars, Fraction(other))
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # evaluation / substitution ------------------------------------------------
    def evaluate(self, point: Mapping[str, Fraction] | Sequence[Fraction]) -> Fraction:
        if isinstance(point, Mapping):
            values = [Fraction(point[v]) for v in self.vars]
        else:
            values = [Fraction(v) for v in point]
        total = Fraction(0)
        for mono, coef in self.terms.items():
            term = coef
            for v, e in zip(values, mono):
                if e:
                    term *= v ** e
            total += term
        return total

    def substitute(self, values: Mapping[str, Fraction], keep: Sequence[str] | None = None) -> "Poly":
        """Substitute rationals for some variables.

        The result lives over ``keep`` (default: the variables not substituted).
        """
        if keep is None:
            keep = [v for v in self.vars if v not in values]
        keep = tuple(keep)
        pos = {v: i for i, v in enumerate(keep)}
        out: Dict[Monomial, Fraction] = {}
        for mono, coef in self.terms.items():
            new = [0] * len(keep)
            c = coef
            for name, e in zip(self.vars, mono):
                if not e:
                    continue
                if name in values:
                    c *= Fraction(values[name]) ** e
                else:
                    if name not in pos:
                        raise VariableMismatch(f"variable {name!r} has no place in {keep}")
                    new[pos[name]] += e
            if c:
                key = tuple(new)
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return Poly._raw(keep, out)

    def extend(self, variables: Sequence[str]) -> "Poly":
        """Re-express over a superset of variables."""
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.vars]
        out = {}
        for mono, coef in self.terms.items():
            new = [0] * len(variables)
            for i, e in zip(pos, mono):
                new[i] = e
            out[tuple(new)] = coef
        return Poly._raw(variables, out)

    # printing / serialization ---------------------------------------------------
    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda mc: grevlex_key(mc[0]), reverse=True)

    def monomial_str(self, mono: Monomial) -> str:
        parts = []
        for name, e in zip(self.vars, mono):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for mono, coef in self.sorted_terms():
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            body = self.monomial_str(mono)
            if body == "1":
                piece = format_rational(mag)
            elif mag == 1:
                piece = body
            else:
                piece = f"{format_rational(mag)}*{body}"
            if not out:
                out = piece if sign == "+" else f"-{piece}"
            else:
                out += f" {sign} {piece}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self})"

    def to_json(self) -> dict[str, str]:
        return {self.monomial_str(m): format_rational(c) for m, c in self.sorted_terms()}

    @classmethod
    def from_json(cls, variables: Sequence[str], data: Mapping[str, str]) -> "Poly":
        variables = tuple(variables)
        out: Dict[Monomial, Fraction] = {}
        for mono_str, coef in data.items():
            mono = parse_monomial(variables, mono_str)
            out[mono] = out.get(mono, 0) + parse_rational(coef)
        return cls(variables, out)


_FACTOR = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*(\d+))?\s*$")


def parse_monomial(variables: Sequence[str], text: str) -> Monomial:
    variables = tuple(variables)
    exps = [0] * len(variables)
    text = text.strip()
    if text == "1":
        return tuple(exps)
    for factor in text.split("*"):
        m = _FACTOR.match(factor)
        if not m:
            raise ValueError(f"malformed monomial {text!r}")
        name, exp = m.group(1), int(m.group(2) or 1)
        try:
            exps[variables.index(name)] += exp
        except ValueError:
            raise KeyError(f"unknown variable {name!r} in monomial {text!r}") from None
    return tuple(exps)


def parse_poly(variables: Sequence[str], text: str) -> Poly:
    """Parse a small infix polynomial like ``"x^2 - 3/2*x*y + 1"``.

    Only sums of signed terms ``c*m`` are accepted; there are no parentheses.
    """
    variables = tuple(variables)
    src = text.replace(" ", "")
    if not src:
        raise ValueError("empty polynomial")
    terms: Dict[Monomial, Fraction] = {}
    for sign, body in re.findall(r"([+-]?)([^+-]+)", src):
        factors = body.split("*")
        coef = Fraction(1)
        mono_parts = []
        for f in factors:
            if re.fullmatch(r"\d+(?:/\d+)?", f):
                coef *= Fraction(f)
            else:
                mono_parts.append(f)
        mono = parse_monomial(variables, "*".join(mono_parts) if mono_parts else "1")
        if sign == "-":
            coef = -coef
        terms[mono] = terms.get(mono, 0) + coef
    return Poly(variables, terms)


def polys_share_vars(polys: Iterable[Poly]) -> Tuple[str, ...] | None:
    vars_ = None
    for p in polys:
        if vars_ is None:
            vars_ = p.vars
        elif p.vars != vars_:
            raise VariableMismatch(f"variable lists differ: {vars_} vs {p.vars}")
    return vars_
