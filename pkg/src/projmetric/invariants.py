"""Brute-force enumeration of Sym^d-valued covariants of degree d in V.

A contraction scheme on d copies of V sends the lower index of each copy to an
upper slot of a different copy, injectively.  Because V is symmetric in its
upper pair, a scheme is just a fixed-point-free map ``f`` on the vertices with
every fibre of size at most 2.  Two schemes are the same covariant when they
differ by relabelling vertices, so the canonical form is the lexicographically
least relabelling.

No epsilons appear: a balanced pair of epsilons reduces to deltas, so for
fully upper targets epsilon-free schemes span everything.  The d = 2, 3 counts
are cross-checked against sl3 multiplicities.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product

from .errors import InvariantViolation, ResourceLimitError
from .linalg import independent_rows, nullspace, rank
from .obstructions import (
    metric_family_v,
    random_metric_form_v,
    random_v,
)
from .reptheory import sl3_sym_decompose
from .tensor import Tensor, einsum, symmetrize

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True, order=True)
class ContractionScheme:
    """``targets[v]`` is the vertex whose upper slot receives v's lower index."""

    targets: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.targets)

    def einsum_spec(self) -> str:
        d = self.degree
        upper = [[None, None] for _ in range(d)]
        lower = [None] * d
        letters = iter(_LETTERS)
        used = [0] * d
        for v, w in enumerate(self.targets):
            ch = next(letters)
            lower[v] = ch
            upper[w][used[w]] = ch
            used[w] += 1
        out = []
        for w in range(d):
            for s in range(2):
                if upper[w][s] is None:
                    ch = next(letters)
                    upper[w][s] = ch
                    out.append(ch)
        ops = ",".join(upper[v][0] + upper[v][1] + lower[v] for v in range(d))
        return f"{ops}->{''.join(out)}"

    def describe(self) -> str:
        return " ".join(f"{v + 1}->{w + 1}" for v, w in enumerate(self.targets))


def _valid(f: tuple[int, ...]) -> bool:
    counts = [0] * len(f)
    for v, w in enumerate(f):
        if v == w:
            return False
        counts[w] += 1
        if counts[w] > 2:
            return False
    return True


def _relabel(f: tuple[int, ...], p: tuple[int, ...]) -> tuple[int, ...]:
    # vertex v becomes p[v]
    out = [0] * len(f)
    for v, w in enumerate(f):
        out[p[v]] = p[w]
    return tuple(out)


def enumerate_schemes(d: int) -> list[ContractionScheme]:
    """Canonical contraction schemes of degree d, sorted."""
    if not 2 <= d <= 6:
        raise ResourceLimitError(f"degree must be between 2 and 6, got {d}")
    perms = list(permutations(range(d)))
    seen: set[tuple[int, ...]] = set()
    reps = []
    for f in product(range(d), repeat=d):
        if f in seen or not _valid(f):
            continue
        orbit = {_relabel(f, p) for p in perms}
        seen |= orbit
        reps.append(ContractionScheme(min(orbit)))
    return sorted(reps)


def evaluate_scheme(s: ContractionScheme, V: Tensor) -> Tensor:
    t = einsum(s.einsum_spec(), *([V] * s.degree))
    return symmetrize(t)


def sym_components(t: Tensor) -> list:
    """Independent components of a symmetric tensor (sorted index tuples)."""
    return [t[idx] for idx in combinations_with_replacement(range(3), t.rank)]


def scheme_for_named(name: str) -> ContractionScheme:
    """The scheme realising A, B or C (used as cross-checks)."""
    if name == "A":
        return ContractionScheme(min(_relabel((1, 0), p) for p in permutations(range(2))))
    if name == "B":
        # a 3-cycle: each lower into the next vertex
        return ContractionScheme(min(_relabel((1, 2, 0), p) for p in permutations(range(3))))
    if name == "C":
        # V^{ab}_p V^{pq}_r V^{cr}_q: vertex 0 -> 1, 1 -> 2, 2 -> 1
        return ContractionScheme(min(_relabel((1, 2, 1), p) for p in permutations(range(3))))
    raise KeyError(name)


@dataclass
class SpanAnalysis:
    degree: int
    schemes: list[ContractionScheme]
    basis: list[int]
    span_dim: int
    vanishing_dim: int
    vanishing_basis: list[dict[ContractionScheme, Fraction]]
    certified: list[bool]
    witnesses: list[Tensor] = field(default_factory=list)
    sl3_multiplicity: int | None = None

    @property
    def all_certified(self) -> bool:
        return all(self.certified)


def _rows(schemes, points):
    rows = [[] for _ in schemes]
    for V in points:
        for i, s in enumerate(schemes):
            rows[i].extend(sym_components(evaluate_scheme(s, V)))
    return rows


def _stable_rank(schemes, sample, rng, start=2, patience=2):
    points = [sample(rng) for _ in range(start)]
    r = rank(_rows(schemes, points))
    calm = 0
    while calm < patience and r < len(schemes):
        points.append(sample(rng))
        r2 = rank(_rows(schemes, points))
        calm = calm + 1 if r2 == r else 0
        r = r2
    return r, points


def span_analysis(d: int, seed: int = 1729, certify: bool = True) -> SpanAnalysis:
    schemes = enumerate_schemes(d)
    rng = random.Random(seed)
    span, gpoints = _stable_rank(schemes, random_v, rng)
    basis = independent_rows(_rows(schemes, gpoints))
    if len(basis) != span:
        raise InvariantViolation("basis size disagrees with rank")
    bschemes = [schemes[i] for i in basis]
    # metric-form evaluation restricted to the basis
    mrank, mpoints = _stable_rank(bschemes, random_metric_form_v, rng)
    mrows = _rows(bschemes, mpoints)
    # combinations c with sum c_i row_i = 0: kernel of the transpose
    cols = list(map(list, zip(*mrows))) if mrows and mrows[0] else []
    kernel = nullspace(cols, len(bschemes)) if cols else [
        [Fraction(int(i == j)) for j in range(len(bschemes))] for i in range(len(bschemes))]
    if len(kernel) != span - mrank:
        raise InvariantViolation("vanishing dimension disagrees with metric-point rank")
    vanishing = [{bschemes[i]: c for i, c in enumerate(vec) if c} for vec in kernel]
    certified = []
    if certify:
        fam = metric_family_v()
        cache: dict[ContractionScheme, Tensor] = {}
        for combo in vanishing:
            total = None
            for s, c in combo.items():
                if s not in cache:
                    cache[s] = evaluate_scheme(s, fam)
                t = cache[s] * c
                total = t if total is None else total + t
            certified.append(total is None or total.is_zero())
    # nonvanishing witnesses: one generic point per independent basis element
    mult = None
    try:
        mult = sl3_sym_decompose(d, (1, 2))[(0, d)]
    except ResourceLimitError:
        pass
    return SpanAnalysis(d, schemes, basis, span, len(kernel), vanishing, certified,
                        gpoints, mult)


def combination_value(combo: dict[ContractionScheme, Fraction], V: Tensor) -> Tensor:
    total = None
    for s, c in combo.items():
        t = evaluate_scheme(s, V) * c
        total = t if total is None else total + t
    return total
