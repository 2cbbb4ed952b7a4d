"""The worked examples: Egorov, Newtonian, Heisenberg and the flat structure."""

from __future__ import annotations

import numpy as np

from .algebra import Poly, parse_poly
from .geometry import COORDINATES, ProjectiveStructure, WeylStructure
from .obstructions import v_from_components
from .tensor import Tensor

SIGMA_PARAMETERS = ("A", "B", "C")


def _p(text: str, extra: tuple = ()) -> Poly:
    return parse_poly(text, COORDINATES + extra)


def egorov() -> ProjectiveStructure:
    """nabla_2 X^1 = d_2 X^1 + x2 X^3, nabla_3 X^1 = d_3 X^1 + x2 X^2."""
    return ProjectiveStructure.from_entries({(1, 2, 3): _p("x2")})


def egorov_sigma_family() -> Tensor:
    v = SIGMA_PARAMETERS
    s11 = _p("A - B*x2^2 + C*x2^4", v)
    s13 = _p("B - 2*C*x2^2", v)
    s33 = _p("4*C", v)
    return Tensor(np.array([[s11, 0, s13], [0, 0, 0], [s13, 0, s33]], dtype=object), "uu", -2)


def egorov_v_literal() -> Tensor:
    """V with V^{11}_2 = -2 and all else zero, as printed for the Egorov structure."""
    return v_from_components({(1, 1, 2): -2})


def egorov_metric_form_data() -> tuple[Tensor, Tensor]:
    """(R^{ab}, degenerate g^{ab}) writing the Egorov V in metric form."""
    R = Tensor(np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=object), "uu")
    g = Tensor(np.array([[1, 0, 0], [0, 0, 0], [0, 0, 0]], dtype=object), "uu")
    return R, g


def newtonian(f: Poly | str) -> ProjectiveStructure:
    """Gamma_33^1 = -f_1/2, Gamma_33^2 = -f_2/2 for a potential f(x1, x2)."""
    f = _p(f) if isinstance(f, str) else f
    return ProjectiveStructure.from_entries({
        (1, 3, 3): f.diff("x1") * (-1) / 2,
        (2, 3, 3): f.diff("x2") * (-1) / 2,
    })


def newtonian_v_expected(f: Poly | str) -> Tensor:
    """The closed form of V for a Newtonian structure: only V^{ab}_3 nonzero."""
    f = _p(f) if isinstance(f, str) else f
    f11 = f.diff("x1").diff("x1")
    f12 = f.diff("x1").diff("x2")
    f22 = f.diff("x2").diff("x2")
    return v_from_components({
        (1, 1, 3): -f12,
        (1, 2, 3): (f11 - f22) / 2,
        (2, 2, 3): f12,
    })


def newtonian_metric_form_data(f: Poly | str) -> tuple[Tensor, Tensor]:
    f = _p(f) if isinstance(f, str) else f
    d = {1: "x1", 2: "x2"}
    arr = np.zeros((3, 3), dtype=object)
    for i in (1, 2):
        for j in (1, 2):
            arr[i - 1, j - 1] = f.diff(d[i]).diff(d[j]) * (-1) / 2
    g = Tensor(np.array([[1, 0, 0], [0, 1, 0], [0, 0, 0]], dtype=object), "uu")
    return Tensor(arr, "uu"), g


def newtonian_sigma_family() -> Tensor:
    v = SIGMA_PARAMETERS
    A, B, C = (_p(x, v) for x in v)
    return Tensor(np.array([[A, B, 0], [B, C, 0], [0, 0, 0]], dtype=object), "uu", -2)


def heisenberg_metric() -> Tensor:
    """(dx1)^2 - (dx2)^2 + (dx3 - x1 dx2)^2."""
    return Tensor(np.array([
        [1, 0, 0],
        [0, _p("x1^2 - 1"), _p("-x1")],
        [0, _p("-x1"), 1],
    ], dtype=object), "dd")


def heisenberg() -> WeylStructure:
    omega = Tensor(np.array([0, _p("-2*x1"), 2], dtype=object), "d")
    return WeylStructure(heisenberg_metric(), omega)


def flat() -> ProjectiveStructure:
    return ProjectiveStructure.flat()
