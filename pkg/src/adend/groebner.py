"""Buchberger's algorithm over the rationals, grevlex order only."""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from .poly import (
    Poly,
    VariableMismatch,
    divides,
    grevlex_key,
    mono_div,
    mono_lcm,
    polys_share_vars,
)

GREVLEX = "grevlex"


class OrderMismatch(ValueError):
    pass


def _check_order(order: str) -> None:
    if order != GREVLEX:
        raise ValueError(f"unsupported monomial order {order!r}; only grevlex is implemented")


def poly_reduce(p: Poly, basis: Sequence[Poly], order: str = GREVLEX) -> Poly:
    """Full normal form of ``p`` modulo ``basis``.

    No term of the result is divisible by a leading monomial of the basis.
    """
    _check_order(order)
    basis = [g for g in basis if g]
    for g in basis:
        if g.vars != p.vars:
            raise VariableMismatch(f"variable lists differ: {p.vars} vs {g.vars}")
    if not basis:
        return p
    # support bitmask and degree let most non-divisors be rejected cheaply
    leads = [(_mask(g.leading_monomial()), sum(g.leading_monomial()), g.leading_monomial(),
              g.leading_coefficient(), g) for g in basis]
    work = dict(p.terms)
    remainder: dict = {}
    # max-heap of candidate leading monomials; stale entries are skipped
    heap = [(_neg_key(m), m) for m in work]
    heapq.heapify(heap)
    queued = set(work)
    while heap:
        _, lm = heapq.heappop(heap)
        queued.discard(lm)
        lc = work.pop(lm, None)
        if lc is None:
            continue
        mask, deg = _mask(lm), sum(lm)
        for gmask, gdeg, glm, glc, g in leads:
            if gmask & ~mask or gdeg > deg:
                continue
            if divides(glm, lm):
                shift = mono_div(lm, glm)
                factor = lc / glc
                for m, c in g.terms.items():
                    if m == glm:
                        continue
                    key = tuple(a + b for a, b in zip(m, shift))
                    s = work.get(key, 0) - c * factor
                    if s:
                        work[key] = s
                        if key not in queued:
                            queued.add(key)
                            heapq.heappush(heap, (_neg_key(key), key))
                    else:
                        work.pop(key, None)
                break
        else:
            remainder[lm] = lc
    return Poly._raw(p.vars, remainder)


def _mask(mono) -> int:
    out = 0
    for i, e in enumerate(mono):
        if e:
            out |= 1 << i
    return out


def _neg_key(mono):
    return (-sum(mono), tuple(reversed(mono)))


def s_polynomial(f: Poly, g: Poly) -> Poly:
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = mono_lcm(lf, lg)
    return f.mul_term(mono_div(lcm, lf), 1 / f.leading_coefficient()) - g.mul_term(
        mono_div(lcm, lg), 1 / g.leading_coefficient()
    )


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Gröbner basis, generators monic and sorted by decreasing leading monomial."""

    variables: Tuple[str, ...]
    generators: Tuple[Poly, ...]
    order: str = GREVLEX

    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant()

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def reduce(self, p: Poly) -> Poly:
        return poly_reduce(p, self.generators, self.order)

    def contains(self, p: Poly) -> bool:
        return not self.reduce(p)

    def leading_monomials(self) -> list:
        return [g.leading_monomial() for g in self.generators]

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def as_strings(self) -> list[str]:
        return [str(g) for g in self.generators]


def _reduced(basis: list[Poly], variables: Tuple[str, ...], order: str) -> GroebnerBasis:
    # drop generators whose leading monomial is divisible by another's
    basis = sorted({g.monic() for g in basis if g}, key=lambda g: grevlex_key(g.leading_monomial()))
    minimal: list[Poly] = []
    for g in basis:
        lm = g.leading_monomial()
        if any(divides(h.leading_monomial(), lm) for h in minimal):
            continue
        minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r = poly_reduce(g, others, order).monic()
        reduced.append(r)
    reduced.sort(key=lambda g: grevlex_key(g.leading_monomial()), reverse=True)
    return GroebnerBasis(variables, tuple(reduced), order)


def buchberger(gens: Iterable[Poly], order: str = GREVLEX, variables: Sequence[str] | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    Pairs are processed with the normal strategy (smallest lcm degree first);
    Buchberger's coprime and chain criteria prune pairs.  An inconsistent
    system returns the basis ``{1}``; an empty generator list returns the
    zero ideal.
    """
    _check_order(order)
    gens = list(gens)
    shared = polys_share_vars(gens)
    if shared is None:
        if variables is None:
            raise ValueError("cannot infer variables from an empty generator list")
        shared = tuple(variables)
    elif variables is not None and tuple(variables) != shared:
        raise VariableMismatch(f"variable lists differ: {tuple(variables)} vs {shared}")
    if not shared:
        # polynomials over no variables are constants
        if any(g for g in gens):
            return GroebnerBasis(shared, (Poly.constant(shared, 1),), order)
        return GroebnerBasis(shared, (), order)

    basis: list[Poly] = []
    pairs: list = []
    counter = itertools.count()
    live: set = set()

    def push(i: int, j: int) -> None:
        lcm = mono_lcm(basis[i].leading_monomial(), basis[j].leading_monomial())
        heapq.heappush(pairs, (sum(lcm), grevlex_key(lcm), next(counter), i, j))
        live.add((i, j))

    reducers: list[Poly] = []

    def add(g: Poly) -> bool:
        g = g.monic()
        basis.append(g)
        k = len(basis) - 1
        if g.is_constant():
            return True
        # a generator whose leading monomial the new one divides is no longer needed for reduction
        lm = g.leading_monomial()
        reducers[:] = [h for h in reducers if not divides(lm, h.leading_monomial())]
        reducers.append(g)
        for i in range(k):
            push(i, k)
        return False

    for g in gens:
        r = poly_reduce(g, reducers, order) if reducers else g
        if r and add(r):
            return GroebnerBasis(shared, (Poly.constant(shared, 1),), order)

    while pairs:
        _, _, _, i, j = heapq.heappop(pairs)
        live.discard((i, j))
        fi, fj = basis[i], basis[j]
        li, lj = fi.leading_monomial(), fj.leading_monomial()
        # criterion 1: coprime leading monomials
        if all(not (a and b) for a, b in zip(li, lj)):
            continue
        lcm = mono_lcm(li, lj)
        # criterion 2: some g_k with LM(g_k) | lcm whose pairs with i and j are done
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if divides(basis[k].leading_monomial(), lcm):
                if (min(i, k), max(i, k)) not in live and (min(j, k), max(j, k)) not in live:
                    skip = True
                    break
        if skip:
            continue
        r = poly_reduce(s_polynomial(fi, fj), reducers, order)
        if r:
            if add(r):
                return GroebnerBasis(shared, (Poly.constant(shared, 1),), order)
    return _reduced(basis, shared, order)


def ideal_equal(a: GroebnerBasis, b: GroebnerBasis) -> bool:
    if a.order != b.order:
        raise OrderMismatch(f"orders differ: {a.order} vs {b.order}")
    if a.variables != b.variables:
        raise VariableMismatch(f"variable lists differ: {a.variables} vs {b.variables}")
    if len(a.generators) != len(b.generators):
        return False
    return all(f == g for f, g in zip(a.generators, b.generators))


def _fresh_name(variables: Sequence[str], stem: str = "_t") -> str:
    name = stem
    i = 0
    while name in variables:
        i += 1
        name = f"{stem}{i}"
    return name


def _is_homogeneous(p: Poly) -> bool:
    return len({sum(m) for m in p.terms}) <= 1


def radical_contains(gens: Sequence[Poly], f: Poly) -> bool:
    """True iff ``f`` vanishes on the whole variety of ``gens``.

    Homogeneous data define a cone, so it suffices that ``f = 1`` has no
    solution; otherwise the Rabinowitsch trick with a fresh variable is used.
    """
    gens = [g for g in gens if g]
    if not f:
        return True
    variables = f.vars
    if f.degree() > 0 and _is_homogeneous(f) and all(_is_homogeneous(g) for g in gens):
        return buchberger(gens + [f - 1], variables=variables).is_unit()
    t = _fresh_name(variables)
    ext = variables + (t,)
    lifted = [g.extend(ext) for g in gens]
    tvar = Poly.var(ext, t)
    lifted.append(Poly.constant(ext, 1) - tvar * f.extend(ext))
    return buchberger(lifted, variables=ext).is_unit()


def radical_by_variables(basis: GroebnerBasis) -> GroebnerBasis:
    """Enlarge an ideal by every variable that lies in its radical.

    The variety is unchanged.  The result is the true radical whenever the
    radical is generated by the original ideal plus coordinate variables,
    which covers every system in the built-in catalog; in general it is
    only an intermediate ideal between the input and its radical.
    """
    if basis.is_unit():
        return basis
    gens = list(basis.generators)
    found = []
    for name in basis.variables:
        x = Poly.var(basis.variables, name)
        if basis.contains(x):
            continue
        # vanishing on the variety does not depend on which generators are used
        if radical_contains(gens, x):
            found.append(x)
    if not found:
        return basis
    return buchberger(gens + found, basis.order, basis.variables)


def independent_variables(basis: GroebnerBasis) -> list[str]:
    """Greedy maximal set of variables with no leading monomial supported inside it.

    Variables are tried in declaration order.  Its size is the Krull
    dimension of the ideal; these are the parameters of the solution family.
    """
    if basis.is_unit():
        return []
    leads = basis.leading_monomials()
    chosen: list[int] = []
    for idx in range(len(basis.variables)):
        trial = set(chosen) | {idx}
        if not any(all((e == 0) or (k in trial) for k, e in enumerate(lm)) for lm in leads):
            chosen.append(idx)
    return [basis.variables[i] for i in chosen]


def variables_in_leads(basis: GroebnerBasis) -> set[str]:
    used = set()
    for lm in basis.leading_monomials():
        for name, e in zip(basis.variables, lm):
            if e:
                used.add(name)
    return used


def common_zero(basis: GroebnerBasis, point) -> bool:
    return all(g.evaluate(point) == 0 for g in basis.generators)
