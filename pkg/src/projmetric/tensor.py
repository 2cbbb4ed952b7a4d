"""Weighted tensors over dimension 3.

Components live in a numpy object array of shape ``(3,)*k``.  Entries are
either :class:`Poly` or plain exact rationals (``int``/``Fraction``); constant
polynomials are collapsed to rationals on construction so that numeric
evaluations (random integer points) run at integer speed.

Valence is a string over ``"u"``/``"d"`` (one letter per slot).  Weight is the
projective weight as a :class:`Fraction`.  Slots are addressed 0-based in the
API; printed component labels are 1-based.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from math import factorial
from numbers import Rational
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .algebra import Poly, as_rat, evaluate as poly_evaluate
from .errors import SlotError, VarianceError

UP = "u"
DOWN = "d"
DIM = 3


def simplify_entry(x):
    """Collapse constant polynomials to rationals (ints when integral)."""
    if isinstance(x, Poly):
        if not x.terms:
            return 0
        if len(x.terms) == 1 and not any(next(iter(x.terms))):
            return next(iter(x.terms.values()))
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


_simplify_array = np.frompyfunc(simplify_entry, 1, 1)


def _entry_is_zero(x) -> bool:
    return not x


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


class Tensor:
    __slots__ = ("data", "valence", "weight")

    def __init__(self, data, valence: str | Sequence[str] = "", weight=0, *, raw: bool = False):
        valence = "".join(valence)
        if any(c not in (UP, DOWN) for c in valence):
            raise VarianceError(f"valence must use 'u'/'d', got {valence!r}")
        arr = np.asarray(data, dtype=object) if not isinstance(data, np.ndarray) else data
        if arr.dtype != object:
            arr = arr.astype(object)
        if arr.shape != (DIM,) * len(valence):
            raise SlotError(f"component array shape {arr.shape} does not match valence {valence!r}")
        if not raw:
            arr = _simplify_array(arr) if arr.ndim else np.array(simplify_entry(arr[()]), dtype=object)
            if arr.ndim:
                arr = arr.astype(object)
        self.data = arr
        self.valence = valence
        self.weight = as_rat(weight)

    # -- construction ---------------------------------------------------
    @classmethod
    def zeros(cls, valence: str, weight=0) -> "Tensor":
        arr = np.empty((DIM,) * len(valence), dtype=object)
        arr.fill(0)
        return cls(arr, valence, weight, raw=True)

    @classmethod
    def from_function(cls, f: Callable[..., object], valence: str, weight=0) -> "Tensor":
        arr = np.empty((DIM,) * len(valence), dtype=object)
        for idx in product(range(DIM), repeat=len(valence)):
            arr[idx] = f(*idx)
        return cls(arr, valence, weight)

    @classmethod
    def scalar(cls, value, weight=0) -> "Tensor":
        arr = np.empty((), dtype=object)
        arr[()] = value
        return cls(arr, "", weight)

    @classmethod
    def from_components(cls, entries: Mapping[tuple, object], valence: str, weight=0,
                        one_based: bool = True) -> "Tensor":
        t = cls.zeros(valence, weight)
        off = 1 if one_based else 0
        for idx, v in entries.items():
            t.data[tuple(i - off for i in idx)] = v
        return cls(t.data, valence, weight)

    # -- queries --------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.valence)

    def __getitem__(self, idx):
        """0-based component access."""
        if not isinstance(idx, tuple):
            idx = (idx,)
        return self.data[idx]

    def get(self, *idx1):
        """1-based component access, e.g. ``V.get(1, 1, 2)`` for V^{11}_2."""
        return self.data[tuple(i - 1 for i in idx1)]

    def value(self):
        if self.rank:
            raise SlotError("not a scalar")
        return self.data[()]

    def is_zero(self) -> bool:
        if not self.rank:
            return not self.data[()]
        return not any(self.data.flat)

    def nonzero_components(self) -> list[tuple[tuple[int, ...], object]]:
        """Sorted ``[(1-based index, value)]`` of nonzero entries."""
        out = []
        for idx in product(range(DIM), repeat=self.rank):
            v = self.data[idx]
            if v:
                out.append((tuple(i + 1 for i in idx), v))
        return out

    def variables(self) -> tuple[str, ...]:
        seen: list[str] = []
        for x in self.data.flat:
            if isinstance(x, Poly):
                for v in x.free_variables():
                    if v not in seen:
                        seen.append(v)
        return tuple(seen)

    def is_constant(self) -> bool:
        return not any(isinstance(x, Poly) for x in self.data.flat)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        if self.valence != other.valence or self.weight != other.weight:
            return False
        return all(a == b for a, b in zip(self.data.flat, other.data.flat))

    __hash__ = None

    def same_components(self, other: "Tensor") -> bool:
        """Componentwise equality ignoring weight (valence must match)."""
        if self.valence != other.valence:
            return False
        return all(a == b for a, b in zip(self.data.flat, other.data.flat))

    # -- arithmetic -----------------------------------------------------
    def _check_compatible(self, other: "Tensor"):
        if self.valence != other.valence:
            raise VarianceError(f"valence mismatch {self.valence!r} vs {other.valence!r}")
        if self.weight != other.weight:
            raise VarianceError(f"weight mismatch {self.weight} vs {other.weight}")

    def __add__(self, other: "Tensor") -> "Tensor":
        if not isinstance(other, Tensor):
            return NotImplemented
        self._check_compatible(other)
        return Tensor(self.data + other.data, self.valence, self.weight)

    def __sub__(self, other: "Tensor") -> "Tensor":
        if not isinstance(other, Tensor):
            return NotImplemented
        self._check_compatible(other)
        return Tensor(self.data - other.data, self.valence, self.weight)

    def __neg__(self) -> "Tensor":
        return Tensor(-self.data, self.valence, self.weight, raw=True)

    def __mul__(self, c) -> "Tensor":
        if isinstance(c, Tensor):
            if not c.rank:
                return self * c.value() if not c.weight else outer(self, c)
            return NotImplemented
        if isinstance(c, Rational):
            c = Fraction(c)
            if c.denominator == 1:
                c = c.numerator
        return Tensor(self.data * c, self.valence, self.weight)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "Tensor":
        return self * (1 / Fraction(c))

    def with_weight(self, weight) -> "Tensor":
        return Tensor(self.data, self.valence, weight, raw=True)

    def map(self, f: Callable[[object], object]) -> "Tensor":
        g = np.frompyfunc(f, 1, 1)
        arr = g(self.data) if self.rank else np.array(f(self.data[()]), dtype=object)
        return Tensor(np.asarray(arr, dtype=object), self.valence, self.weight)

    def subs(self, mapping: Mapping[str, object]) -> "Tensor":
        return self.map(lambda x: x.subs(mapping) if isinstance(x, Poly) else x)

    def evaluate(self, point: Mapping[str, object]) -> "Tensor":
        return self.map(lambda x: poly_evaluate(x, point) if isinstance(x, Poly) else x)

    def diff(self, variable: str) -> "Tensor":
        return self.map(lambda x: x.diff(variable) if isinstance(x, Poly) else 0)

    # -- index gymnastics ----------------------------------------------
    def permute(self, perm: Sequence[int]) -> "Tensor":
        """Reorder slots: slot ``i`` of the result is slot ``perm[i]`` of self."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.rank)):
            raise SlotError(f"{perm} is not a permutation of {self.rank} slots")
        return Tensor(np.transpose(self.data, perm), "".join(self.valence[p] for p in perm),
                      self.weight, raw=True)

    def contract(self, i: int, j: int) -> "Tensor":
        return contract(self, i, j)

    def symmetrize(self, slots: Iterable[int] | None = None) -> "Tensor":
        return symmetrize(self, slots)

    def antisymmetrize(self, slots: Iterable[int] | None = None) -> "Tensor":
        return antisymmetrize(self, slots)

    # -- printing -------------------------------------------------------
    def format(self, name: str = "T") -> str:
        comps = self.nonzero_components()
        if not comps:
            return "0"
        lines = []
        for idx, v in comps:
            label = f"[{','.join(map(str, idx))}]" if idx else ""
            lines.append(f"{name}{label} = {_fmt_entry(v)}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Tensor(valence={self.valence!r}, weight={self.weight}, nonzero={len(self.nonzero_components())})"


def _fmt_entry(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    return str(v)


# ---------------------------------------------------------------------------
# products and contractions

def einsum(spec: str, *tensors: Tensor, optimize=True) -> Tensor:
    """Einstein summation with variance and weight bookkeeping.

    Every repeated letter must occur exactly twice, once on an up slot and
    once on a down slot.  The result's weight is the sum of the weights.
    """
    if "->" not in spec:
        raise ValueError("einsum spec needs an explicit '->' output")
    lhs, out = spec.replace(" ", "").split("->")
    terms = lhs.split(",")
    if len(terms) != len(tensors):
        raise ValueError(f"spec {spec!r} names {len(terms)} operands, got {len(tensors)}")
    seen: dict[str, list[str]] = {}
    for letters, t in zip(terms, tensors):
        if len(letters) != t.rank:
            raise SlotError(f"operand {letters!r} has {len(letters)} letters but tensor has rank {t.rank}")
        for ch, var in zip(letters, t.valence):
            seen.setdefault(ch, []).append(var)
    valence = []
    for ch in out:
        occ = seen.get(ch)
        if not occ or len(occ) != 1:
            raise VarianceError(f"output letter {ch!r} must occur exactly once among the operands")
        valence.append(occ[0])
    for ch, occ in seen.items():
        if ch in out:
            continue
        if len(occ) != 2 or sorted(occ) != [DOWN, UP]:
            raise VarianceError(f"index {ch!r} must pair one up with one down slot, got {occ}")
    weight = sum((t.weight for t in tensors), Fraction(0))
    arrays = [t.data for t in tensors]
    res = np.einsum(lhs + "->" + out, *arrays, optimize=optimize)
    if not out:
        arr = np.empty((), dtype=object)
        arr[()] = res if not isinstance(res, np.ndarray) else res[()]
        res = arr
    return Tensor(np.asarray(res, dtype=object), "".join(valence), weight)


def outer(*tensors: Tensor) -> Tensor:
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    specs, pos = [], 0
    for t in tensors:
        specs.append(letters[pos:pos + t.rank])
        pos += t.rank
    return einsum(",".join(specs) + "->" + "".join(specs), *tensors, optimize=False)


def contract(t: Tensor, i: int, j: int) -> Tensor:
    """Trace slot ``i`` (up) against slot ``j`` (down), 0-based."""
    k = t.rank
    for s in (i, j):
        if not 0 <= s < k:
            raise SlotError(f"slot {s} out of range for rank {k}")
    if i == j:
        raise SlotError("cannot contract a slot with itself")
    if t.valence[i] != UP or t.valence[j] != DOWN:
        raise VarianceError(f"contract needs slot {i} up and slot {j} down, valence is {t.valence!r}")
    arr = np.trace(t.data, axis1=i, axis2=j) if k > 2 else None
    if k == 2:
        arr = np.empty((), dtype=object)
        arr[()] = sum((t.data[(a, a)] for a in range(DIM)), 0)
    valence = "".join(v for s, v in enumerate(t.valence) if s not in (i, j))
    return Tensor(np.asarray(arr, dtype=object), valence, t.weight)


def _check_same_variance(t: Tensor, slots: Sequence[int]):
    for s in slots:
        if not 0 <= s < t.rank:
            raise SlotError(f"slot {s} out of range for rank {t.rank}")
    if len(set(slots)) != len(slots):
        raise SlotError(f"repeated slot in {slots}")
    if len({t.valence[s] for s in slots}) > 1:
        raise VarianceError(f"slots {list(slots)} mix up and down variance in {t.valence!r}")


def symmetrize(t: Tensor, slots: Iterable[int] | None = None) -> Tensor:
    """Average over all permutations of the given slots (idempotent)."""
    slots = tuple(range(t.rank)) if slots is None else tuple(slots)
    _check_same_variance(t, slots)
    if len(slots) < 2:
        return t
    others = [s for s in range(t.rank) if s not in slots]
    groups: dict[tuple, list[tuple]] = {}
    for idx in product(range(DIM), repeat=t.rank):
        key = (tuple(idx[s] for s in others), tuple(sorted(idx[s] for s in slots)))
        groups.setdefault(key, []).append(idx)
    out = np.empty(t.data.shape, dtype=object)
    for members in groups.values():
        vals = [t.data[m] for m in members]
        total = 0
        for v in vals:
            if v:
                total = total + v
        if total:
            n = len(members)
            avg = total * Fraction(1, n) if n > 1 else total
        else:
            avg = 0
        for m in members:
            out[m] = avg
    return Tensor(out, t.valence, t.weight)


def antisymmetrize(t: Tensor, slots: Iterable[int] | None = None) -> Tensor:
    """Signed average over permutations of the given slots."""
    slots = tuple(range(t.rank)) if slots is None else tuple(slots)
    _check_same_variance(t, slots)
    if len(slots) < 2:
        return t
    total = None
    for p in permutations(range(len(slots))):
        axes = list(range(t.rank))
        for a, b in zip(slots, p):
            axes[a] = slots[b]
        term = np.transpose(t.data, axes)
        term = term if _perm_sign(p) > 0 else -term
        total = term if total is None else total + term
    return Tensor(total * Fraction(1, factorial(len(slots))), t.valence, t.weight)


# ---------------------------------------------------------------------------
# standard tensors

def delta() -> Tensor:
    """Kronecker delta with valence up, down (delta^a_b)."""
    return Tensor(np.array([[1 if i == j else 0 for j in range(DIM)] for i in range(DIM)],
                           dtype=object), "ud", 0)


def _alternating() -> np.ndarray:
    arr = np.zeros((DIM,) * 3, dtype=object)
    for p in permutations(range(3)):
        arr[p] = _perm_sign(p)
    return arr


def eps_down() -> Tensor:
    """epsilon_{abc}, weight 4, with epsilon_{123} = 1."""
    return Tensor(_alternating(), "ddd", 4)


def eps_up() -> Tensor:
    """epsilon^{abc}, weight -4, with epsilon^{123} = 1."""
    return Tensor(_alternating(), "uuu", -4)


class EpsilonPair:
    """The two weighted alternating tensors with full contraction 6."""

    def __init__(self):
        self.eps_down = eps_down()
        self.eps_up = eps_up()

    def full_contraction(self) -> Tensor:
        return einsum("abc,abc->", self.eps_up, self.eps_down)


def metric_tensor(entries, valence: str = "dd") -> Tensor:
    """Symmetric 2-slot tensor from a 3x3 nested list."""
    return Tensor(np.array(entries, dtype=object), valence, 0)


# ---------------------------------------------------------------------------
# derivatives

def partial_derivative(t: Tensor, coordinates: Sequence[str]) -> Tensor:
    """Coordinate gradient; the new down slot is first."""
    parts = [t.diff(x).data for x in coordinates]
    return Tensor(np.stack(parts, axis=0) if t.rank else np.array(parts, dtype=object),
                  DOWN + t.valence, t.weight)


def covariant_derivative(t: Tensor, connection) -> Tensor:
    """``nabla_a t`` for a connection exposing ``gamma`` (G[b,c,a] = Gamma_bc^a)
    and ``coordinates``.

    Weighted objects pick up ``(w/4) Gamma_ae^e t`` so that the weight-4 volume
    form is parallel.
    """
    G = connection.gamma.data
    out = partial_derivative(t, connection.coordinates).data
    k = t.rank
    for s, var in enumerate(t.valence):
        if var == UP:
            # Gamma_{a e}^{i_s} t^{..e..}
            term = np.tensordot(G, t.data, axes=([1], [s]))
            term = np.moveaxis(term, 1, 1 + s)
            out = out + term
        else:
            # - Gamma_{a i_s}^{e} t_{..e..}
            term = np.tensordot(G, t.data, axes=([2], [s]))
            term = np.moveaxis(term, 1, 1 + s)
            out = out - term
    if t.weight:
        tr = np.array([sum((G[a, e, e] for e in range(DIM)), 0) for a in range(DIM)],
                      dtype=object)
        w4 = t.weight / 4
        shaped = tr.reshape((DIM,) + (1,) * k) if k else tr
        out = out + (shaped * t.data) * w4
    return Tensor(np.asarray(out, dtype=object), DOWN + t.valence, t.weight)


# ---------------------------------------------------------------------------
# comparisons

def proportionality_constant(a: Tensor, b: Tensor) -> Fraction | None:
    """Return ``c`` with ``a == c*b`` componentwise, or None.

    Both zero gives 1.  ``b`` zero with ``a`` nonzero gives None.
    """
    if a.valence != b.valence:
        raise VarianceError(f"valence mismatch {a.valence!r} vs {b.valence!r}")
    c = None
    for x, y in zip(a.data.flat, b.data.flat):
        if y:
            c = _entry_ratio(x, y)
            break
    if c is None:
        return Fraction(1) if a.is_zero() else None
    if c is False:
        return None
    for x, y in zip(a.data.flat, b.data.flat):
        if not (x == y * c if y else not x):
            return None
    return c


def _entry_ratio(x, y):
    if not x:
        return Fraction(0)
    if isinstance(y, Poly):
        if not isinstance(x, Poly):
            return False
        x2 = x.over(tuple(dict.fromkeys(x.variables + y.variables)))
        lead = max(y.terms, key=lambda e: (sum(e), e))
        yl = y.over(x2.variables)
        lead = max(yl.terms, key=lambda e: (sum(e), e))
        if lead not in x2.terms:
            return False
        return Fraction(x2.terms[lead]) / Fraction(yl.terms[lead])
    if isinstance(x, Poly):
        return False
    return Fraction(x) / Fraction(y)
