"""sl3 weight combinatorics: irrep characters, symmetric powers, sl2 branching.

Weights are written in the fundamental-weight basis (Dynkin labels).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

from .errors import ResourceLimitError

Weight = tuple[int, int]

# simple roots and positive roots in the fundamental-weight basis
ALPHA1: Weight = (2, -1)
ALPHA2: Weight = (-1, 2)
POSITIVE_ROOTS: tuple[Weight, ...] = (ALPHA1, ALPHA2, (1, 1))
RHO: Weight = (1, 1)

# weight-basis Gram matrix (inverse Cartan matrix of A2)
_GRAM = ((Fraction(2, 3), Fraction(1, 3)), (Fraction(1, 3), Fraction(2, 3)))

MAX_SYM_TERMS = 2_000_000


def inner(u: Weight, v: Weight) -> Fraction:
    return (u[0] * (_GRAM[0][0] * v[0] + _GRAM[0][1] * v[1])
            + u[1] * (_GRAM[1][0] * v[0] + _GRAM[1][1] * v[1]))


def dim_sl3(a: int, b: int) -> int:
    return (a + 1) * (b + 1) * (a + b + 2) // 2


def _add(u: Weight, v: Weight, k: int = 1) -> Weight:
    return (u[0] + k * v[0], u[1] + k * v[1])


@lru_cache(maxsize=None)
def irrep_weights(a: int, b: int) -> dict[Weight, int]:
    """Weight multiplicities of the irrep with highest weight (a, b) (Freudenthal)."""
    if a < 0 or b < 0:
        raise ValueError("highest weight must be dominant")
    lam = (a, b)
    lr = _add(lam, RHO)
    norm_lr = inner(lr, lr)
    top = a + b
    mult: dict[Weight, int] = {lam: 1}
    # process by depth n1 + n2 so that every mu + k alpha is already known
    for depth in range(1, 2 * top + 1):
        for n1 in range(max(0, depth - top), min(top, depth) + 1):
            n2 = depth - n1
            mu = (lam[0] - 2 * n1 + n2, lam[1] + n1 - 2 * n2)
            mr = _add(mu, RHO)
            denom = norm_lr - inner(mr, mr)
            if denom == 0:
                continue
            total = Fraction(0)
            for alpha in POSITIVE_ROOTS:
                k = 1
                while True:
                    nu = _add(mu, alpha, k)
                    m = mult.get(nu)
                    if m is None:
                        # beyond the top of the diagram along this string
                        if _depth_above(lam, nu) is None:
                            break
                        m = 0
                    if m:
                        total += m * inner(nu, alpha)
                    k += 1
            value = 2 * total / denom
            if value.denominator != 1:
                raise ArithmeticError(f"non-integral multiplicity at {mu}")
            if value:
                mult[mu] = int(value)
    if sum(mult.values()) != dim_sl3(a, b):
        raise ArithmeticError(f"Freudenthal dimension mismatch for {(a, b)}")
    return dict(mult)


def _depth_above(lam: Weight, nu: Weight) -> int | None:
    """Root-lattice depth of nu below lam, or None if nu is not below lam."""
    d0, d1 = lam[0] - nu[0], lam[1] - nu[1]
    # d = n1*alpha1 + n2*alpha2  ->  n1 = (2 d0 + d1)/3, n2 = (d0 + 2 d1)/3
    if (2 * d0 + d1) % 3 or (d0 + 2 * d1) % 3:
        return None
    n1, n2 = (2 * d0 + d1) // 3, (d0 + 2 * d1) // 3
    if n1 < 0 or n2 < 0:
        return None
    return n1 + n2


def character_product_oracle(a: int, b: int) -> Counter:
    """Independent character: Sym^a(C^3) x Sym^b(C^3*) minus the (a-1, b-1) piece."""
    def sym_std(k: int, dual: bool) -> Counter:
        e = [(1, 0), (-1, 1), (0, -1)]
        if dual:
            e = [(-x, -y) for x, y in e]
        out = Counter()
        for combo in combinations_with_replacement(range(3), k):
            w = (sum(e[i][0] for i in combo), sum(e[i][1] for i in combo))
            out[w] += 1
        return out

    def prod(p: Counter, q: Counter) -> Counter:
        out = Counter()
        for u, m in p.items():
            for v, n in q.items():
                out[_add(u, v)] += m * n
        return out

    full = prod(sym_std(a, False), sym_std(b, True))
    if a and b:
        full.subtract(prod(sym_std(a - 1, False), sym_std(b - 1, True)))
    return Counter({w: m for w, m in full.items() if m})


@dataclass(frozen=True)
class Sl3Decomposition:
    multiplicities: dict[Weight, int]

    def dimension(self) -> int:
        return sum(m * dim_sl3(*w) for w, m in self.multiplicities.items())

    def __getitem__(self, w: Weight) -> int:
        return self.multiplicities.get(tuple(w), 0)

    def format(self) -> str:
        """LiE-style listing, e.g. ``1X[0,2] +1X[1,3]``."""
        parts = [f"{m}X[{a},{b}]" for (a, b), m in sorted(self.multiplicities.items())]
        return " +".join(parts)


def decompose_character(char: Counter | dict) -> Sl3Decomposition:
    char = Counter({w: m for w, m in char.items() if m})
    out: dict[Weight, int] = {}
    while char:
        hw = max(char, key=lambda w: (w[0] + w[1], w))
        m = char[hw]
        if m < 0 or hw[0] < 0 or hw[1] < 0:
            raise ArithmeticError(f"character is not a genuine representation at {hw}")
        out[hw] = out.get(hw, 0) + m
        for w, k in irrep_weights(*hw).items():
            char[w] -= m * k
            if not char[w]:
                del char[w]
    return Sl3Decomposition(dict(sorted(out.items())))


def sl3_sym_decompose(k: int, hw: Weight) -> Sl3Decomposition:
    """Decompose the k-th symmetric power of the irrep ``hw``."""
    a, b = hw
    n = dim_sl3(a, b)
    if k < 0:
        raise ValueError("power must be non-negative")
    if k > 6 or comb(n + k - 1, k) > MAX_SYM_TERMS:
        raise ResourceLimitError(
            f"Sym^{k} of a {n}-dimensional irrep is beyond the supported size")
    basis = [w for w, m in irrep_weights(a, b).items() for _ in range(m)]
    char: Counter = Counter()
    for combo in combinations_with_replacement(range(len(basis)), k):
        char[(sum(basis[i][0] for i in combo), sum(basis[i][1] for i in combo))] += 1
    dec = decompose_character(char)
    if dec.dimension() != comb(n + k - 1, k):
        raise ArithmeticError("dimension check failed")
    return dec


def sl2_branch(hw: Weight) -> dict[int, int]:
    """Restrict to the principal sl2 ((m1, m2) -> 2 m1 + 2 m2) and split into strings."""
    char: Counter = Counter()
    for (m1, m2), m in irrep_weights(*hw).items():
        char[2 * m1 + 2 * m2] += m
    out: dict[int, int] = {}
    while char:
        top = max(char)
        m = char[top]
        if m < 0:
            raise ArithmeticError("branching produced a negative multiplicity")
        out[top] = m
        for w in range(-top, top + 1, 2):
            char[w] -= m
            if not char[w]:
                del char[w]
    return dict(sorted(out.items()))


def bundle_weight(k: int, l: int, m: int) -> int:
    return k + 2 * l - m


def bundle_degree(k: int, l: int, m: int) -> Fraction:
    return Fraction(-(3 * k + 2 * l + m), 4)
