from itertools import permutations, product

import pytest

from projmetric.errors import ResourceLimitError
from projmetric.fixtures import egorov, egorov_v_literal, newtonian_v_expected
from projmetric.geometry import weyl_v
from projmetric.invariants import (
    ContractionScheme,
    combination_value,
    enumerate_schemes,
    evaluate_scheme,
    scheme_for_named,
    span_analysis,
)
from projmetric.obstructions import Covariants, generic_v
from projmetric.tensor import Tensor


def burnside_count(d):
    """Orbit count of admissible maps under relabelling, by Burnside's lemma."""
    def ok(f):
        return all(f[v] != v for v in range(d)) and all(f.count(w) <= 2 for w in range(d))

    maps = [f for f in product(range(d), repeat=d) if ok(f)]
    total = 0
    for p in permutations(range(d)):
        inv = [0] * d
        for i, x in enumerate(p):
            inv[x] = i
        for f in maps:
            if all(p[f[inv[v]]] == f[v] for v in range(d)):
                total += 1
    n = 1
    for k in range(2, d + 1):
        n *= k
    assert total % n == 0
    return total // n


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_scheme_counts_match_burnside(d):
    assert len(enumerate_schemes(d)) == burnside_count(d)


def test_scheme_counts_recorded():
    assert [len(enumerate_schemes(d)) for d in range(2, 7)] == [1, 2, 5, 9, 24]


def test_enumeration_is_deterministic_and_canonical():
    a = enumerate_schemes(4)
    assert a == enumerate_schemes(4) == sorted(a)
    assert len(set(a)) == len(a)


def test_degree_limits():
    for d in (1, 7):
        with pytest.raises(ResourceLimitError):
            enumerate_schemes(d)


def test_named_schemes_are_enumerated():
    assert scheme_for_named("A") in enumerate_schemes(2)
    assert {scheme_for_named("B"), scheme_for_named("C")} <= set(enumerate_schemes(3))


def test_named_schemes_match_covariants():
    cv = Covariants(generic_v())
    for name in "ABC":
        assert evaluate_scheme(scheme_for_named(name), generic_v()) == cv[name]


def test_scheme_values_at_simple_points():
    assert evaluate_scheme(scheme_for_named("A"), egorov_v_literal()).is_zero()
    zero = Tensor.zeros("uud", -4)
    for s in enumerate_schemes(4):
        assert evaluate_scheme(s, zero).is_zero()


@pytest.mark.parametrize("d,span,vanishing", [(2, 1, 0), (3, 2, 1), (4, 4, 2), (5, 5, 4)])
def test_span_small_degrees(d, span, vanishing):
    sa = span_analysis(d)
    assert (sa.span_dim, sa.vanishing_dim) == (span, vanishing)
    assert sa.all_certified
    assert sa.sl3_multiplicity == span


def test_cubic_vanishing_is_c_minus_2b():
    sa = span_analysis(3)
    (combo,) = sa.vanishing_basis
    V = generic_v()
    cv = Covariants(V)
    value = combination_value(combo, V)
    target = cv["C"] - cv["B"] * 2
    from projmetric.tensor import proportionality_constant
    assert proportionality_constant(value, target) is not None


@pytest.fixture(scope="module")
def sextic():
    return span_analysis(6)


def test_sextic_span(sextic):
    assert (sextic.span_dim, sextic.vanishing_dim) == (11, 8)
    assert sextic.sl3_multiplicity == 11
    assert sextic.all_certified


def test_sextic_vanishing_also_vanishes_at_fixtures(sextic):
    points = [egorov_v_literal(), weyl_v(egorov()),
              newtonian_v_expected("x1*x2"), newtonian_v_expected("x1^2")]
    for combo in sextic.vanishing_basis:
        for V in points:
            assert combination_value(combo, V).is_zero()


def test_describe_and_spec():
    s = ContractionScheme((1, 0))
    assert s.describe() == "1->2 2->1"
    assert s.einsum_spec().count(",") == 1
