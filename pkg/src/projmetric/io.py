"""Structure files: JSON objects with a ``kind``, ``coordinates`` and entries.

Example::

    {"kind": "projective_structure",
     "coordinates": ["x1", "x2", "x3"],
     "christoffel": [{"up": 1, "low": [2, 3], "value": "x2"}]}

Symmetric entries may be given once; the mirrored slot is filled in.  Giving
both orders with different values is an error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import Poly, parse_poly
from .errors import InputError, ParseError
from .geometry import COORDINATES, ProjectiveStructure, WeylStructure, levi_civita, weyl_connection
from .ode import ODE_VARIABLES, ODESystem, connection_from_system
from .obstructions import v_from_components
from .tensor import DIM, Tensor

KINDS = ("projective_structure", "metric", "weyl_structure", "ode_system",
         "weyl_tensor_v", "sigma_candidate")


@dataclass
class StructureFile:
    kind: str
    coordinates: tuple[str, ...]
    parameters: tuple[str, ...]
    obj: Any
    source: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.coordinates + self.parameters


def _index(value, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= DIM:
        raise InputError(f"{what}: index {value!r} is not in 1..{DIM}")
    return value


def _indices(entry: dict, up_count: int, low_count: int, what: str) -> tuple[list, list]:
    if "indices" in entry:
        idx = entry["indices"]
        if not isinstance(idx, list) or len(idx) != up_count + low_count:
            raise InputError(f"{what}: 'indices' must list {up_count + low_count} values")
        ups, lows = idx[:up_count], idx[up_count:]
    else:
        ups = entry.get("up", [])
        lows = entry.get("low", [])
        ups = ups if isinstance(ups, list) else [ups]
        lows = lows if isinstance(lows, list) else [lows]
    if len(ups) != up_count or len(lows) != low_count:
        raise InputError(f"{what}: expected {up_count} upper and {low_count} lower indices, "
                         f"got {entry}")
    return [_index(i, what) for i in ups], [_index(i, what) for i in lows]


def _value(entry: dict, variables, what: str) -> Poly:
    if "value" not in entry:
        raise InputError(f"{what}: entry {entry} has no 'value'")
    text = entry["value"]
    if isinstance(text, (int,)) and not isinstance(text, bool):
        text = str(text)
    if not isinstance(text, str):
        raise InputError(f"{what}: value must be polynomial text, got {text!r}")
    try:
        return parse_poly(text, variables)
    except ParseError as exc:
        raise type(exc)(f"{what} {entry.get('up', entry.get('indices'))}: {exc}") from None


def _fill_symmetric(entries: list, up: int, low: int, variables, what: str,
                    sym_slots: tuple[int, int]) -> np.ndarray:
    rank = up + low
    arr = np.zeros((DIM,) * rank, dtype=object)
    given: dict[tuple, Poly] = {}
    if not isinstance(entries, list):
        raise InputError(f"{what}: expected a list of entries")
    for e in entries:
        if not isinstance(e, dict):
            raise InputError(f"{what}: entries must be objects")
        ups, lows = _indices(e, up, low, what)
        idx = tuple(i - 1 for i in ups + lows)
        val = _value(e, variables, what)
        i, j = sym_slots
        mirror = list(idx)
        mirror[i], mirror[j] = mirror[j], mirror[i]
        for key in {idx, tuple(mirror)}:
            if key in given and given[key] != val:
                raise InputError(f"{what}: conflicting values for component "
                                 f"{tuple(k + 1 for k in key)}")
            given[key] = val
    for key, val in given.items():
        arr[key] = val
    return arr


def parse_structure(doc: dict, source: str = "") -> StructureFile:
    if not isinstance(doc, dict):
        raise InputError("structure file must contain a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise InputError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    params = tuple(doc.get("parameters", []))
    # an ode_system is written in (x, y, z, p2, p3); its connection lives in these
    coords = tuple(doc.get("coordinates", COORDINATES))
    if len(coords) != DIM:
        raise InputError(f"need exactly {DIM} coordinates, got {list(coords)}")
    if len(set(coords + params)) != len(coords + params):
        raise InputError("coordinate and parameter names must be distinct")
    variables = coords + params
    if kind == "projective_structure":
        arr = _fill_symmetric(doc.get("christoffel", []), 1, 2, variables, "christoffel", (1, 2))
        # file order is (up, low, low); storage is Gamma[b, c, a]
        obj = ProjectiveStructure(Tensor(np.transpose(arr, (1, 2, 0)), "ddu"), coords)
    elif kind == "metric":
        arr = _fill_symmetric(doc.get("metric", []), 0, 2, variables, "metric", (0, 1))
        obj = Tensor(arr, "dd")
    elif kind == "weyl_structure":
        g = Tensor(_fill_symmetric(doc.get("metric", []), 0, 2, variables, "metric", (0, 1)), "dd")
        w = np.zeros(DIM, dtype=object)
        for e in doc.get("one_form", []):
            _, lows = _indices(e, 0, 1, "one_form")
            w[lows[0] - 1] = _value(e, variables, "one_form")
        obj = WeylStructure(g, Tensor(w, "d"), coords)
    elif kind == "ode_system":
        ode_vars = ODE_VARIABLES + params
        for key in ("F2", "F3"):
            if not isinstance(doc.get(key), str):
                raise InputError(f"ode_system needs string field {key!r}")
        obj = ODESystem(parse_poly(doc["F2"], ode_vars), parse_poly(doc["F3"], ode_vars))
    elif kind == "weyl_tensor_v":
        arr = _fill_symmetric(doc.get("v", []), 2, 1, variables, "v", (0, 1))
        entries = {(a + 1, b + 1, c + 1): arr[a, b, c]
                   for a in range(DIM) for b in range(DIM) for c in range(DIM) if arr[a, b, c]}
        obj = v_from_components(entries)
    else:  # sigma_candidate
        arr = _fill_symmetric(doc.get("sigma", []), 2, 0, variables, "sigma", (0, 1))
        obj = Tensor(arr, "uu", -2)
    meta = {k: v for k, v in doc.items() if k in ("name", "description")}
    return StructureFile(kind, coords, params, obj, source, meta)


def load_structure(path: str | Path) -> StructureFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_structure(doc, str(path))


def connection_of(sf: StructureFile) -> ProjectiveStructure:
    """A representative connection for any kind that determines one."""
    if sf.kind == "projective_structure":
        return sf.obj
    if sf.kind == "metric":
        return levi_civita(sf.obj, sf.coordinates)
    if sf.kind == "weyl_structure":
        return weyl_connection(sf.obj)
    if sf.kind == "ode_system":
        return connection_from_system(sf.obj, sf.coordinates)
    raise InputError(f"a {sf.kind} file does not determine a connection")


def data_path(name: str) -> Path:
    """Path of a bundled example file."""
    return Path(__file__).parent / "data" / name
