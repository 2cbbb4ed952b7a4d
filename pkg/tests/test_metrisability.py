import random

import numpy as np
import pytest

from projmetric.algebra import parse_poly
from projmetric.errors import DegenerateSigmaError, SymmetryError, UnsupportedDeterminantError
from projmetric.fixtures import (
    egorov,
    egorov_sigma_family,
    egorov_v_literal,
    flat,
    heisenberg_metric,
    newtonian,
    newtonian_sigma_family,
    newtonian_v_expected,
)
from projmetric.geometry import COORDINATES, apply_projective_change, levi_civita, metric_inverse, weyl_v
from projmetric.metrisability import (
    constraint_residual,
    det_sigma,
    metric_from_sigma,
    metrisability_residual,
    pairing,
    sigma_from_metric,
)
from projmetric.obstructions import SYM2_BASIS
from projmetric.tensor import Tensor

from conftest import random_one_form

IDENT = Tensor(np.eye(3, dtype=int).astype(object), "uu", -2)


def sym_sigma(values):
    arr = np.zeros((3, 3), dtype=object)
    for (d, e), x in zip(SYM2_BASIS, values):
        arr[d, e] = arr[e, d] = x
    return Tensor(arr, "uu", -2)


def test_egorov_family_solves():
    s = egorov_sigma_family()
    assert metrisability_residual(egorov(), s).is_zero()
    assert det_sigma(s).is_zero()
    with pytest.raises(DegenerateSigmaError):
        metric_from_sigma(s)


def test_flat_constant_sigma():
    rng = random.Random(8)
    for _ in range(5):
        s = sym_sigma([rng.randint(-5, 5) for _ in range(6)])
        assert metrisability_residual(flat(), s).is_zero()


@pytest.mark.parametrize("f", ["x1*x2", "x1^2"])
def test_newtonian_family_solves(f):
    s = newtonian_sigma_family()
    assert metrisability_residual(newtonian(f), s).is_zero()
    assert constraint_residual(newtonian_v_expected(f), s).is_zero()


def test_heisenberg_sigma():
    lc = levi_civita(heisenberg_metric())
    s = sigma_from_metric(heisenberg_metric())
    assert s == metric_inverse(heisenberg_metric()).with_weight(-2)
    assert metrisability_residual(lc, s).is_zero()
    d = det_sigma(s)
    assert d.value() == -1
    assert pairing(lc, s, d).is_zero()


def test_det_and_metric_examples():
    assert det_sigma(IDENT).value() == 1
    g = metric_from_sigma(IDENT)
    assert g.same_components(IDENT)
    assert sigma_from_metric(g).same_components(IDENT)


def test_sign_pair_gives_same_metric():
    rng = random.Random(9)
    for _ in range(5):
        s = sym_sigma([rng.randint(-5, 5) for _ in range(6)])
        if det_sigma(s).is_zero():
            continue
        assert metric_from_sigma(s * -1) == metric_from_sigma(s)


def test_round_trip_up_to_sign():
    s = sigma_from_metric(heisenberg_metric())
    back = sigma_from_metric(metric_from_sigma(s))
    assert back == s or back == s * -1


def test_sigma_from_metric_unsupported():
    g = Tensor(np.diag([2, 1, 1]).astype(object), "uu")
    with pytest.raises(UnsupportedDeterminantError):
        sigma_from_metric(g)
    x = parse_poly("x1", COORDINATES)
    g = Tensor(np.array([[1 + x * x, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=object), "uu")
    with pytest.raises(UnsupportedDeterminantError):
        sigma_from_metric(g)


def test_asymmetric_sigma_rejected():
    t = Tensor.from_components({(1, 2): 1}, "uu", -2)
    with pytest.raises(SymmetryError):
        metrisability_residual(flat(), t)


def test_residual_projectively_invariant():
    rng = random.Random(10)
    cases = [(egorov(), egorov_sigma_family()), (newtonian("x1*x2"), newtonian_sigma_family()),
             (levi_civita(heisenberg_metric()), sigma_from_metric(heisenberg_metric()))]
    for g, s in cases:
        for _ in range(3):
            u = random_one_form(rng, degree=2)
            assert metrisability_residual(apply_projective_change(g, u), s).is_zero()
    # a non-solution stays a non-solution
    bad = sym_sigma([0, 1, 0, 0, 0, 0])
    for _ in range(3):
        u = random_one_form(rng, degree=2)
        assert not metrisability_residual(apply_projective_change(egorov(), u), bad).is_zero()


def test_necessity_chain_on_fixtures():
    lc = levi_civita(heisenberg_metric())
    cases = [(egorov(), egorov_sigma_family()), (newtonian("x1^2"), newtonian_sigma_family()),
             (lc, sigma_from_metric(heisenberg_metric()))]
    for g, s in cases:
        assert metrisability_residual(g, s).is_zero()
        assert constraint_residual(weyl_v(g), s).is_zero()


def test_constraint_residual_examples():
    rng = random.Random(12)
    s = sym_sigma([rng.randint(-5, 5) for _ in range(6)])
    assert constraint_residual(Tensor.zeros("uud", -4), s).is_zero()
    # generic symbolic sigma against Egorov V forces s12 = s22 = s23 = 0
    names = tuple(f"s{d + 1}{e + 1}" for d, e in SYM2_BASIS)
    gen = sym_sigma([parse_poly(n, names) for n in names])
    res = constraint_residual(egorov_v_literal(), gen)
    forced = set()
    for _, v in res.nonzero_components():
        forced |= set(v.free_variables())
    assert forced == {"s12", "s22", "s23"}
    # and each nonzero component is a multiple of one forced variable
    for _, v in res.nonzero_components():
        assert len(v.terms) == 1
