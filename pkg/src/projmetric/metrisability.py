"""The metrisability operator and what hangs off it.

sigma^{bc} is a symmetric weight -2 tensor given in the coordinate scale.
Nothing here solves PDE; candidates (possibly with free constant
parameters) are verified symbolically.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import Poly
from .errors import (
    DegenerateSigmaError,
    InvariantViolation,
    SymmetryError,
    UnsupportedDeterminantError,
)
from .geometry import ProjectiveStructure, check_v, inverse_metric, metric_inverse
from .tensor import (
    Tensor,
    contract,
    covariant_derivative,
    delta,
    einsum,
    eps_down,
    symmetrize,
)

SIGMA_WEIGHT = -2


def as_sigma(sigma: Tensor) -> Tensor:
    """Validate a metrisability candidate and pin its weight to -2."""
    if sigma.valence != "uu":
        raise SymmetryError(f"sigma needs two upper slots, got {sigma.valence!r}")
    if not (sigma == sigma.permute((1, 0))):
        raise SymmetryError("sigma is not symmetric")
    return sigma.with_weight(SIGMA_WEIGHT)


def metrisability_residual(gamma: ProjectiveStructure, sigma: Tensor) -> Tensor:
    """nabla_a sigma^{bc} - 1/2 delta_a^{(b} nabla_d sigma^{c)d}."""
    sigma = as_sigma(sigma)
    nab = covariant_derivative(sigma, gamma)  # [a, b, c]
    div = contract(nab, 2, 0)  # nabla_d sigma^{bd}
    trace_part = symmetrize(einsum("ba,c->abc", delta(), div), (1, 2))
    res = nab - trace_part * Fraction(1, 2)
    for up in (1, 2):
        if not contract(res, up, 0).is_zero():
            raise InvariantViolation("metrisability residual is not trace-free")
    return res


def det_sigma(sigma: Tensor) -> Tensor:
    """(1/6) sigma^{ad} sigma^{be} sigma^{cf} eps_abc eps_def, weight 2."""
    sigma = as_sigma(sigma)
    e = eps_down()
    d = einsum("ad,be,cf,abc,def->", sigma, sigma, sigma, e, e) * Fraction(1, 6)
    if d.weight != 2:
        raise InvariantViolation(f"det sigma has weight {d.weight}, expected 2")
    return d


def pairing(gamma: ProjectiveStructure, sigma: Tensor, tau: Tensor) -> Tensor:
    """sigma^{ab} nabla_b tau - 1/2 tau nabla_b sigma^{ab}.

    tau is a weight 2 density; the result has one upper slot and weight 0.
    """
    sigma = as_sigma(sigma)
    if tau.rank:
        raise SymmetryError("tau must be a scalar density")
    tau = tau.with_weight(2)
    dtau = covariant_derivative(tau, gamma)
    dsig = covariant_derivative(sigma, gamma)
    first = einsum("ab,b->a", sigma, dtau)
    second = einsum("bab->a", dsig)
    second = second.map(lambda x: x * tau.value()).with_weight(second.weight + tau.weight)
    return first - second * Fraction(1, 2)


def constraint_residual(V: Tensor, sigma: Tensor) -> Tensor:
    """V^{(ab}_d sigma^{c)d}."""
    check_v(V)
    sigma = as_sigma(sigma)
    return symmetrize(einsum("abd,cd->abc", V, sigma))


def metric_from_sigma(sigma: Tensor) -> Tensor:
    """g^{ab} = (det sigma) sigma^{ab}, weight 0, two upper slots."""
    d = det_sigma(sigma).value()
    if not d:
        raise DegenerateSigmaError("det sigma vanishes identically; sigma gives no metric")
    g = sigma.map(lambda x: x * d)
    return g.with_weight(0)


def sigma_from_metric(g: Tensor) -> Tensor:
    """sigma^{ab} = |det g^{..}|^{-1/4} g^{ab}.

    ``g`` may be the inverse metric (two upper slots) or the metric itself
    (two lower slots, inverted first).  The determinant must be a constant
    whose absolute value is a rational fourth power.
    """
    if g.valence == "dd":
        g_up = metric_inverse(g)
    elif g.valence == "uu":
        g_up = g
    else:
        raise SymmetryError("metric needs two lower or two upper slots")
    _, d = inverse_metric(g_up.with_weight(0))
    if isinstance(d, Poly):
        raise UnsupportedDeterminantError(f"det g = {d} is not constant; fourth roots are not taken")
    root = _rational_fourth_root(abs(Fraction(d)))
    if root is None:
        raise UnsupportedDeterminantError(f"|det g| = {abs(Fraction(d))} is not a rational fourth power")
    return (g_up * (1 / root)).with_weight(SIGMA_WEIGHT)


def _rational_fourth_root(x: Fraction) -> Fraction | None:
    def iroot(n: int) -> int | None:
        r = round(n ** 0.25)
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** 4 == n:
                return c
        return None
    a, b = iroot(x.numerator), iroot(x.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)
