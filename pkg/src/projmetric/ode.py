"""Pairs of second-order ODEs y'' = F2, z'' = F3 and their projective structures.

Polynomials live over ``(x, y, z, p2, p3)`` with ``p2 = y'``, ``p3 = z'``.
Connection coordinates ``(x1, x2, x3)`` correspond to ``(x, y, z)``; the
index ``i`` of ``F^i`` runs over 2, 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Sequence

from .algebra import Poly, parse_poly, poly_sum
from .errors import FelsError, InconsistentCubicError, ShapeError
from .geometry import COORDINATES, ProjectiveStructure

ODE_VARIABLES = ("x", "y", "z", "p2", "p3")
BASE = ("x", "y", "z")
VELOCITIES = ("p2", "p3")
FIBRE = (2, 3)


def rename(p, mapping: dict[str, str]):
    if not isinstance(p, Poly):
        return p
    return Poly._raw(dict(p.terms), tuple(mapping.get(v, v) for v in p.variables))


@dataclass(frozen=True)
class ODESystem:
    F2: Poly
    F3: Poly

    @classmethod
    def parse(cls, f2: str, f3: str) -> "ODESystem":
        return cls(parse_poly(f2, ODE_VARIABLES), parse_poly(f3, ODE_VARIABLES))

    def rhs(self, i: int) -> Poly:
        return Poly.coerce({2: self.F2, 3: self.F3}[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ODESystem):
            return NotImplemented
        return Poly.coerce(self.F2) == Poly.coerce(other.F2) and \
            Poly.coerce(self.F3) == Poly.coerce(other.F3)

    def __hash__(self):
        return hash((Poly.coerce(self.F2), Poly.coerce(self.F3)))

    def format(self) -> str:
        return f"y'' = {self.F2}\nz'' = {self.F3}"


def _p(i: int) -> str:
    return f"p{i}"


def fels_residual(sys: ODESystem) -> dict[tuple[int, int, int, int], Poly]:
    """S^i_(jkl) for i, j, k, l in {2, 3}."""
    third = {}
    for i in FIBRE:
        F = sys.rhs(i)
        for j, k, l in product(FIBRE, repeat=3):
            third[(i, j, k, l)] = F.diff(_p(j)).diff(_p(k)).diff(_p(l))
    raw = {}
    for i, j, k, l in product(FIBRE, repeat=4):
        trace = poly_sum([third[(m, m, j, k)] for m in FIBRE])
        val = third[(i, j, k, l)]
        if i == l:
            val = val - trace * Fraction(3, 4)
        raw[(i, j, k, l)] = val
    out = {}
    for i, j, k, l in product(FIBRE, repeat=4):
        perms = list(permutations((j, k, l)))
        out[(i, j, k, l)] = poly_sum([raw[(i,) + q] for q in perms]) * Fraction(1, len(perms))
    return out


def fels_holds(sys: ODESystem) -> bool:
    return all(not v for v in fels_residual(sys).values())


def system_from_connection(gamma: ProjectiveStructure) -> ODESystem:
    """Eliminate the affine parameter from the geodesic equations."""
    names = dict(zip(gamma.coordinates, BASE))
    G = {}
    for a, b, c in product((1, 2, 3), repeat=3):
        G[(a, b, c)] = rename(Poly.coerce(gamma.christoffel(a, b, c)), names)

    def Gam(a, b, c):  # Gamma_{bc}^a
        return G[(a, b, c)]

    p = {i: Poly.var(_p(i), ODE_VARIABLES) for i in FIBRE}
    rhs = {}
    for i in FIBRE:
        terms = []
        for j, k in product(FIBRE, repeat=2):
            terms.append(Gam(1, j, k) * p[i] * p[j] * p[k])
            b = -Gam(i, j, k)
            if k == i:
                b = b + Gam(1, 1, j)
            if j == i:
                b = b + Gam(1, 1, k)
            terms.append(b * p[j] * p[k])
        for j in FIBRE:
            c = Gam(i, 1, j) * (-2)
            if i == j:
                c = c + Gam(1, 1, 1)
            terms.append(c * p[j])
        terms.append(-Gam(i, 1, 1))
        rhs[i] = poly_sum(terms, ODE_VARIABLES)
    return ODESystem(rhs[2], rhs[3])


def _split(F: Poly) -> dict[tuple[int, int], Poly]:
    return Poly.coerce(F).over(ODE_VARIABLES).coefficients(VELOCITIES)


def connection_from_system(sys: ODESystem, coordinates: Sequence[str] = COORDINATES
                           ) -> ProjectiveStructure:
    """Gauge-fixed representative with Gamma_11^1 = Gamma_1j^1 = 0."""
    if not fels_holds(sys):
        bad = [k for k, v in fels_residual(sys).items() if v]
        i, j, k, l = bad[0]
        raise FelsError(f"Fels condition fails: S^{i}_({j}{k}{l}) != 0; "
                        "the system is not a projective path geometry")
    parts = {i: _split(sys.rhs(i)) for i in FIBRE}
    for i in FIBRE:
        for e in parts[i]:
            if sum(e) > 3:
                raise ShapeError(f"F{i} has a term of degree {sum(e)} in the velocities")
    # cubic part of F^i must be p^i A_jk p^j p^k with one common A
    A = {}
    for i in FIBRE:
        cubic = {e: c for e, c in parts[i].items() if sum(e) == 3}
        quot = {}
        for e, c in cubic.items():
            pos = FIBRE.index(i)
            if e[pos] == 0:
                raise InconsistentCubicError(f"cubic part of F{i} is not divisible by p{i}")
            q = list(e)
            q[pos] -= 1
            quot[tuple(q)] = c
        A[i] = quot
    zero = Poly.zero(BASE)
    keys = set(A[2]) | set(A[3])
    for e in keys:
        if Poly.coerce(A[2].get(e, zero)) != Poly.coerce(A[3].get(e, zero)):
            raise InconsistentCubicError("the cubic parts of F2 and F3 do not share one A_jk")

    def coeff(i, e):
        return Poly.coerce(parts[i].get(e, zero))

    def mono(j, k):
        e = [0, 0]
        e[FIBRE.index(j)] += 1
        e[FIBRE.index(k)] += 1
        return tuple(e)

    entries = {}
    for j, k in product(FIBRE, repeat=2):
        if j > k:
            continue
        sym = 1 if j == k else Fraction(1, 2)
        entries[(1, j, k)] = Poly.coerce(A[2].get(mono(j, k), zero)) * sym
        for i in FIBRE:
            # B^i_jk p^j p^k summed over ordered pairs
            entries[(i, j, k)] = -coeff(i, mono(j, k)) * sym
    for i in FIBRE:
        for j in FIBRE:
            e = [0, 0]
            e[FIBRE.index(j)] = 1
            entries[(i, 1, j)] = coeff(i, tuple(e)) * Fraction(-1, 2)
        entries[(i, 1, 1)] = -coeff(i, (0, 0))
    back = dict(zip(BASE, coordinates))
    entries = {k: rename(Poly.coerce(v), back) for k, v in entries.items()}
    gamma = ProjectiveStructure.from_entries(entries, coordinates)
    if not (system_from_connection(gamma) == sys):
        raise InconsistentCubicError("reconstructed connection does not reproduce the system")
    return gamma
