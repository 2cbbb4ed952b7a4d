"""Connections, curvature decomposition and the reduced Weyl tensor V.

Conventions (dimension 3, coordinate scale):

* ``gamma[b, c, a]`` is Gamma_{bc}^a, so ``nabla_b X^a = d_b X^a + Gamma_{bc}^a X^c``.
* ``R_{ab}^c_d = d_a Gamma_{bd}^c - d_b Gamma_{ad}^c + Gamma_{ae}^c Gamma_{bd}^e
  - Gamma_{be}^c Gamma_{ad}^e``, stored with valence ``ddud``.
* ``Ric_{bd} = R_{ab}^a_d``, ``beta_{ab} = R_{ab}^c_c / 4``,
  ``P = Ric_(bd) / 2 - beta / 2``, and
  ``W = R - (delta_a^c P_bd - delta_b^c P_ad + beta_ab delta_d^c)``.
* ``V^{ab}_c = eps^{dea} W_{de}^b_c`` at weight -4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import Poly, divide_exact, poly_sum
from .errors import DegenerateMetricError, InexactDivisionError, InvariantViolation, SymmetryError
from .linalg import det as matrix_det
from .tensor import (
    DIM,
    Tensor,
    antisymmetrize,
    contract,
    covariant_derivative,
    delta,
    einsum,
    eps_down,
    eps_up,
    partial_derivative,
    simplify_entry,
    symmetrize,
)

COORDINATES = ("x1", "x2", "x3")


# ---------------------------------------------------------------------------
# structures

class ProjectiveStructure:
    """A torsion-free connection representing its projective class."""

    def __init__(self, gamma: Tensor, coordinates: Sequence[str] = COORDINATES):
        if gamma.valence != "ddu":
            raise SymmetryError(f"Christoffel symbols need valence 'ddu', got {gamma.valence!r}")
        for b in range(DIM):
            for c in range(b + 1, DIM):
                for a in range(DIM):
                    if gamma[b, c, a] != gamma[c, b, a]:
                        raise SymmetryError(
                            f"Gamma_{{{b + 1}{c + 1}}}^{a + 1} != Gamma_{{{c + 1}{b + 1}}}^{a + 1}: "
                            "connection has torsion")
        self.gamma = gamma.with_weight(0)
        self.coordinates = tuple(coordinates)

    @classmethod
    def from_entries(cls, entries: dict, coordinates: Sequence[str] = COORDINATES,
                     mirror: bool = True) -> "ProjectiveStructure":
        """Build from ``{(a, b, c): value}`` meaning Gamma_{bc}^a, 1-based.

        With ``mirror`` each entry is also written to the swapped lower pair.
        """
        arr = np.zeros((DIM,) * 3, dtype=object)
        for (a, b, c), v in entries.items():
            arr[b - 1, c - 1, a - 1] = v
            if mirror:
                arr[c - 1, b - 1, a - 1] = v
        return cls(Tensor(arr, "ddu", 0), coordinates)

    @classmethod
    def flat(cls, coordinates: Sequence[str] = COORDINATES) -> "ProjectiveStructure":
        return cls(Tensor.zeros("ddu"), coordinates)

    def christoffel(self, a: int, b: int, c: int):
        """Gamma_{bc}^a with 1-based indices."""
        return self.gamma[b - 1, c - 1, a - 1]

    def trace(self) -> Tensor:
        """Gamma_{ab}^b."""
        return contract(self.gamma, 2, 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectiveStructure):
            return NotImplemented
        return self.gamma == other.gamma

    __hash__ = None

    def __repr__(self) -> str:
        return f"ProjectiveStructure(nonzero={len(self.gamma.nonzero_components())})"


@dataclass(frozen=True)
class ProjectiveChange:
    upsilon: Tensor

    def __post_init__(self):
        if self.upsilon.valence != "d":
            raise SymmetryError("a projective change is a 1-form")


@dataclass(frozen=True)
class CurvatureDecomposition:
    riemann: Tensor
    weyl: Tensor
    schouten: Tensor
    beta: Tensor
    ricci: Tensor


@dataclass
class WeylStructure:
    metric: Tensor
    one_form: Tensor
    coordinates: tuple = COORDINATES

    def __post_init__(self):
        if self.metric.valence != "dd":
            raise SymmetryError("metric needs valence 'dd'")
        if self.one_form.valence != "d":
            raise SymmetryError("one-form needs valence 'd'")
        if not (self.metric == self.metric.permute((1, 0))):
            raise SymmetryError("metric is not symmetric")
        self.coordinates = tuple(self.coordinates)

    def rescale(self, theta: Poly | int | Fraction) -> "WeylStructure":
        """g -> theta^2 g, omega -> omega + 2 d(ln theta); constant theta only
        keeps everything polynomial, otherwise d(ln theta) must divide."""
        g = self.metric * 1
        g = g.map(lambda x: x * theta * theta)
        dtheta = partial_derivative(Tensor.scalar(theta), self.coordinates)
        if dtheta.is_zero():
            return WeylStructure(g, self.one_form, self.coordinates)
        t = Poly.coerce(theta)
        parts = []
        for x in dtheta.data:
            q = divide_exact(Poly.coerce(x) * 2, t)
            if q is None:
                raise InexactDivisionError("d(ln theta) is not polynomial")
            parts.append(q)
        return WeylStructure(g, self.one_form + Tensor(np.array(parts, dtype=object), "d"),
                             self.coordinates)


# ---------------------------------------------------------------------------
# projective change and curvature

def apply_projective_change(gamma: ProjectiveStructure, change: ProjectiveChange | Tensor
                            ) -> ProjectiveStructure:
    ups = change.upsilon if isinstance(change, ProjectiveChange) else change
    G = gamma.gamma.data.copy()
    for b in range(DIM):
        for c in range(DIM):
            for a in range(DIM):
                extra = 0
                if a == b:
                    extra = extra + ups[c]
                if a == c:
                    extra = extra + ups[b]
                if extra:
                    G[b, c, a] = G[b, c, a] + extra
    return ProjectiveStructure(Tensor(G, "ddu"), gamma.coordinates)


def riemann(gamma: ProjectiveStructure) -> Tensor:
    G = gamma.gamma.data
    dG = partial_derivative(gamma.gamma, gamma.coordinates).data  # [a, b, d, c]
    lin = np.transpose(dG, (0, 1, 3, 2))  # d_a Gamma_{bd}^c at [a, b, c, d]
    quad = np.einsum("aec,bde->abcd", G, G)
    R = lin - np.transpose(lin, (1, 0, 2, 3)) + quad - np.transpose(quad, (1, 0, 2, 3))
    return Tensor(R, "ddud", 0)


def _check_weyl_symmetries(W: Tensor, what: str = "W", error=InvariantViolation):
    if W.valence != "ddud":
        raise error(f"{what} needs valence 'ddud', got {W.valence!r}")
    if not (W == -W.permute((1, 0, 2, 3))):
        raise error(f"{what} is not skew in its first two slots")
    for i, j, name in ((2, 0, "c=a"), (2, 1, "c=b"), (2, 3, "c=d")):
        if not contract(W, i, j).is_zero():
            raise error(f"{what} has a nonzero trace ({name})")
    if not antisymmetrize(W, (0, 1, 3)).is_zero():
        raise error(f"{what}_[ab^c_d] != 0")


def curvature(gamma: ProjectiveStructure) -> CurvatureDecomposition:
    R = riemann(gamma)
    ric = contract(R, 2, 0)  # R_{ab}^a_d -> (b, d)
    beta = contract(R, 2, 3) * Fraction(1, 4)
    sym = symmetrize(ric) * Fraction(1, 2)
    P = sym - beta * Fraction(1, 2)
    W = R - _trace_part(P, beta)
    _check_weyl_symmetries(W)
    if not (ric - ric.permute((1, 0)) == beta * (-4)):
        raise InvariantViolation("skew Ricci does not match -2 beta")
    if not (P - P.permute((1, 0)) == beta * (-1)):
        raise InvariantViolation("beta != -2 P_[ab]")
    return CurvatureDecomposition(R, W, P, beta, ric)


def _trace_part(P: Tensor, beta: Tensor) -> Tensor:
    d = delta()
    t1 = einsum("ca,bd->abcd", d, P)
    t2 = einsum("cb,ad->abcd", d, P)
    t3 = einsum("ab,cd->abcd", beta, d)
    return t1 - t2 + t3


def reassemble(dec: CurvatureDecomposition) -> Tensor:
    return dec.weyl + _trace_part(dec.schouten, dec.beta)


# ---------------------------------------------------------------------------
# V <-> W

def check_v(V: Tensor, error=InvariantViolation) -> Tensor:
    if V.valence != "uud":
        raise error(f"V needs valence 'uud', got {V.valence!r}")
    if not (V == V.permute((1, 0, 2))):
        raise error("V^{ab}_c is not symmetric in ab")
    if not contract(V, 0, 2).is_zero():
        raise error("V^{ab}_a != 0")
    return V


def v_from_weyl(W: Tensor) -> Tensor:
    _check_weyl_symmetries(W, "W", SymmetryError)
    V = einsum("dea,debc->abc", eps_up(), W)
    if V.weight != -4:
        raise InvariantViolation(f"V has weight {V.weight}, expected -4")
    return check_v(V)


def weyl_from_v(V: Tensor) -> Tensor:
    check_v(V, SymmetryError)
    W = einsum("eab,ecd->abcd", eps_down(), V) * Fraction(1, 2)
    _check_weyl_symmetries(W)
    return W


def weyl_v(gamma: ProjectiveStructure) -> Tensor:
    return v_from_weyl(curvature(gamma).weyl)


# ---------------------------------------------------------------------------
# metrics

def inverse_metric(g: Tensor) -> tuple[Tensor, object]:
    """``(adjugate, det)`` of a 2-slot tensor; the inverse is adj/det."""
    m = [[g[i, j] for j in range(DIM)] for i in range(DIM)]
    d = simplify_entry(matrix_det(m))
    if not d:
        raise DegenerateMetricError("metric determinant vanishes identically")
    adj = np.empty((DIM, DIM), dtype=object)
    for i in range(DIM):
        for j in range(DIM):
            rows = [r for r in range(DIM) if r != j]
            cols = [c for c in range(DIM) if c != i]
            minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]
            adj[i, j] = minor if (i + j) % 2 == 0 else -minor
    valence = "uu" if g.valence == "dd" else "dd"
    return Tensor(adj, valence, -g.weight), d


def divide_tensor(t: Tensor, d, what: str = "expression") -> Tensor:
    """Exact division of every component by a polynomial or rational."""
    d = simplify_entry(d)
    if not isinstance(d, Poly):
        return t * Fraction(1) / d
    def div(x):
        if not x:
            return 0
        q = divide_exact(Poly.coerce(x), d)
        if q is None:
            raise InexactDivisionError(f"{what} is not divisible by {d}; metric outside the supported class")
        return q
    return t.map(div)


def metric_inverse(g: Tensor) -> Tensor:
    adj, d = inverse_metric(g)
    return divide_tensor(adj, d, "inverse metric")


def levi_civita(g: Tensor, coordinates: Sequence[str] = COORDINATES) -> ProjectiveStructure:
    if g.valence != "dd":
        raise SymmetryError("levi_civita needs a metric with two lower slots")
    if not (g == g.permute((1, 0))):
        raise SymmetryError("metric is not symmetric")
    adj, d = inverse_metric(g)
    dg = partial_derivative(g, coordinates)  # [b, d, c] = d_b g_dc
    # Gamma_{bc d} = 1/2 (d_b g_dc + d_c g_bd - d_d g_bc), stored [b, c, d]
    first = dg.permute((0, 2, 1)).data
    low = (first + np.transpose(first, (1, 0, 2)) - np.transpose(dg.data, (1, 2, 0))) * Fraction(1, 2)
    num = np.einsum("ad,bcd->bca", adj.data, low)
    gamma = divide_tensor(Tensor(num, "ddu"), d, "Christoffel numerator")
    conn = ProjectiveStructure(gamma, coordinates)
    if not covariant_derivative(g, conn).is_zero():
        raise InvariantViolation("Levi-Civita connection does not preserve g")
    return conn


def weyl_connection(ws: WeylStructure) -> ProjectiveStructure:
    lc = levi_civita(ws.metric, ws.coordinates)
    ginv = metric_inverse(ws.metric)
    g, w = ws.metric, ws.one_form
    d = delta()
    omega_up = einsum("ad,d->a", ginv, w)
    k = (einsum("ab,c->bca", d, w) + einsum("ac,b->bca", d, w)
         - einsum("bc,a->bca", g, omega_up))
    G = lc.gamma - k * Fraction(1, 2)
    conn = ProjectiveStructure(G, ws.coordinates)
    Dg = covariant_derivative(g, conn)
    if not (Dg == einsum("a,bc->abc", w, g)):
        raise InvariantViolation("Weyl connection does not satisfy Dg = omega (x) g")
    return conn


def connection_with_given_weyl(W0: Tensor, coordinates: Sequence[str] = COORDINATES
                               ) -> ProjectiveStructure:
    """Gamma_{bd}^c = (2/3) x^a W_{a(b}^c_{d)}; its Weyl tensor at 0 is W0."""
    if not W0.is_constant():
        raise SymmetryError("prescribed Weyl tensor must be constant")
    _check_weyl_symmetries(W0, "W0", SymmetryError)
    xs = [Poly.var(x, coordinates) for x in coordinates]
    G = np.empty((DIM,) * 3, dtype=object)
    for b in range(DIM):
        for d in range(DIM):
            for c in range(DIM):
                terms = []
                for a in range(DIM):
                    coeff = Fraction(W0[a, b, c, d] + W0[a, d, c, b]) / 3
                    if coeff:
                        terms.append(xs[a] * coeff)
                G[b, d, c] = poly_sum(terms, coordinates)
    return ProjectiveStructure(Tensor(G, "ddu"), coordinates)


def at_origin(t: Tensor, coordinates: Sequence[str] = COORDINATES) -> Tensor:
    return t.evaluate({x: 0 for x in coordinates}) if not t.is_constant() else t


# ---------------------------------------------------------------------------
# Einstein-Weyl data

@dataclass(frozen=True)
class EinsteinWeylData:
    connection: ProjectiveStructure
    ricci: Tensor
    phi: Tensor
    faraday: Tensor
    f: Tensor
    inverse_metric: Tensor


def einstein_weyl_data(ws: WeylStructure) -> EinsteinWeylData:
    conn = weyl_connection(ws)
    R = riemann(conn)
    ric = contract(R, 2, 0)
    ginv = metric_inverse(ws.metric)
    sym = symmetrize(ric)
    tr = einsum("ab,ab->", ginv, sym)
    phi = sym - ws.metric.map(lambda x: x * tr.value()) * Fraction(1, 3) if tr.value() else sym
    dw = partial_derivative(ws.one_form, ws.coordinates)
    F = (dw - dw.permute((1, 0))) * Fraction(1, 2)
    # F_ab = eps_abc f^c with the unit symbol
    f = einsum("abc,ab->c", eps_up(), F).with_weight(0) * Fraction(1, 2)
    return EinsteinWeylData(conn, ric, phi, F, f, ginv)
