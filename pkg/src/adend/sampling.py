"""Seeded random instances for property checks.

Every function takes a :class:`random.Random` so runs are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .algebra import AlgebraSpace, LinearMap, bilinear, freeze_tensor
from .bimodule import Bimodule

SMALL = tuple(Fraction(v) for v in (-2, -1, 1, 2)) + (Fraction(1, 2), Fraction(-1, 3))


def random_rational(rng: random.Random, values: Sequence[Fraction] = SMALL) -> Fraction:
    return rng.choice(values)


def random_tensor(dim: int, rng: random.Random, density: float = 0.3, values=SMALL):
    """Each entry is nonzero with probability ``density``."""
    return freeze_tensor([[[random_rational(rng, values) if rng.random() < density else Fraction(0)
                            for _ in range(dim)] for _ in range(dim)] for _ in range(dim)])


def random_two_op(dim: int, rng: random.Random, names=("rop", "lop"), density: float = 0.3) -> AlgebraSpace:
    return AlgebraSpace.create(dim, {n: random_tensor(dim, rng, density) for n in names})


def random_two_nilpotent(dim: int, rng: random.Random, commutative: bool = False, name: str = "mul") -> AlgebraSpace:
    """An associative algebra with all triple products zero.

    The first ``k`` basis vectors multiply into the span of the rest, and
    anything involving the rest is zero.
    """
    if dim < 2:
        return AlgebraSpace.create(dim, {name: freeze_tensor([[[Fraction(0)] * dim] * dim] * dim)})
    k = rng.randint(1, dim - 1)
    c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(k):
        for j in range(k):
            if commutative and j < i:
                c[i][j] = list(c[j][i])
                continue
            for t in range(k, dim):
                if rng.random() < 0.6:
                    c[i][j][t] = random_rational(rng)
    return AlgebraSpace.create(dim, {name: freeze_tensor(c)})


def random_invertible(n: int, rng: random.Random, values=(-1, 0, 1, 2)) -> LinearMap:
    while True:
        g = LinearMap.from_rows([[Fraction(rng.choice(values)) for _ in range(n)] for _ in range(n)], n)
        if g.is_invertible():
            return g


def transport_algebra(alg: AlgebraSpace, g: LinearMap) -> AlgebraSpace:
    """The structure making ``g`` an isomorphism: ``x * y = g(g^-1 x . g^-1 y)`` for every op."""
    n = alg.dim
    gi = g.inverse()
    cols = [gi.column(i) for i in range(n)]
    ops = {}
    for name, c in alg.ops.items():
        ops[name] = freeze_tensor([[g.apply(bilinear(c, cols[i], cols[j])) for j in range(n)] for i in range(n)])
    return AlgebraSpace(n, alg.basis, ops)


def transport_bimodule(m: Bimodule, phi: LinearMap) -> Bimodule:
    """Move the module structure along an invertible ``phi: V -> V``."""
    pi = phi.inverse()
    return Bimodule(m.base, m.op, m.space_dim,
                    tuple(phi.compose(a).compose(pi) for a in m.l),
                    tuple(phi.compose(a).compose(pi) for a in m.r),
                    m.module_basis)


def random_anti_dendriform_2d(rng: random.Random) -> AlgebraSpace:
    """A 2-dim catalog anti-dendriform algebra moved by a random change of basis."""
    from . import catalog

    entry = rng.choice(["B1", "B2", "B3", "A1_2"])
    params = {"lam": random_rational(rng, SMALL + (Fraction(0),))} if entry == "B3" else {}
    alg = catalog.load(entry, params).algebra
    return transport_algebra(alg, random_invertible(2, rng))


def random_two_op_mixed(rng: random.Random) -> AlgebraSpace:
    """Half transported anti-dendriform algebras, half sparse random 2-dim tensors."""
    if rng.random() < 0.5:
        return random_anti_dendriform_2d(rng)
    return random_two_op(2, rng)
