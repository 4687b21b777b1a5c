"""JSON readers and writers for posets, projector families, measures and split functors.

Rationals are written as ``"p/q"`` strings (``"p"`` for integers); matrices
are row-major lists of rows. Readers raise :class:`SchemaError` carrying the
JSON location of the problem.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .factor_spaces import ConfigurationSpace, Measure, MeasureError
from .linalg import RatMatrix, Subspace, format_fraction, to_fraction
from .poset import FinitePoset, PosetError
from .projectors import FamilyError, ProjectorFamily
from .split_functors import SplitError, SplitFunctor, validate_split

__all__ = [
    "SchemaError",
    "dumps",
    "matrix_to_json",
    "matrix_from_json",
    "subspace_to_json",
    "poset_from_json",
    "poset_to_json",
    "family_from_json",
    "family_to_json",
    "measure_from_json",
    "measure_to_json",
    "split_from_json",
    "split_to_json",
]


class SchemaError(ValueError):
    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


def dumps(obj: Any) -> str:
    """Canonical serialization: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def matrix_to_json(m: RatMatrix) -> list[list[str]]:
    return m.to_strings()


def matrix_from_json(data: Any, shape: tuple[int, int], where: str) -> RatMatrix:
    rows, cols = shape
    if not isinstance(data, list) or len(data) != rows:
        raise SchemaError(f"expected {rows} rows", where)
    out = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise SchemaError(f"expected {cols} entries", f"{where}[{i}]")
        try:
            out.append([to_fraction(x) for x in row])
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational ({exc})", f"{where}[{i}]") from None
    return RatMatrix(out, cols=cols)


def subspace_to_json(s: Subspace) -> dict:
    return {"dim": s.dim, "basis": s.basis.to_strings()}


def _obj(data: Any, where: str) -> Mapping:
    if not isinstance(data, dict):
        raise SchemaError("expected an object", where)
    return data


def _field(data: Mapping, key: str, where: str) -> Any:
    if key not in data:
        raise SchemaError(f"missing field {key!r}", where)
    return data[key]


def _count(x: Any, where: str, positive: bool = False) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < (1 if positive else 0):
        raise SchemaError("expected a " + ("positive" if positive else "nonnegative") + " integer", where)
    return x


def poset_from_json(data: Any, where: str = "$") -> FinitePoset:
    _obj(data, where)
    try:
        return FinitePoset.from_dict(data)
    except PosetError as exc:
        raise SchemaError(str(exc), where) from None


def poset_to_json(p: FinitePoset) -> dict:
    return p.to_dict()


def family_from_json(data: Any) -> ProjectorFamily:
    _obj(data, "$")
    p = poset_from_json(_field(data, "poset", "$"), "$.poset")
    n = _count(_field(data, "dim", "$"), "$.dim")
    proj = _obj(_field(data, "projectors", "$"), "$.projectors")
    extra = set(proj) - set(p.elements)
    if extra:
        raise SchemaError(f"projector for unknown element {sorted(extra)[0]!r}", "$.projectors")
    pi = {}
    for a in p.elements:
        if a not in proj:
            raise SchemaError(f"missing projector for {a!r}", "$.projectors")
        pi[a] = matrix_from_json(proj[a], (n, n), f"$.projectors.{a}")
    try:
        return ProjectorFamily(p, n, pi)
    except FamilyError as exc:
        raise SchemaError(str(exc), "$.projectors") from None


def family_to_json(f: ProjectorFamily) -> dict:
    return {
        "poset": poset_to_json(f.poset),
        "dim": f.dim,
        "projectors": {a: matrix_to_json(f[a]) for a in f.poset.elements},
    }


def measure_from_json(data: Any) -> Measure:
    _obj(data, "$")
    factors = _obj(_field(data, "factors", "$"), "$.factors")
    sizes = [_count(k, f"$.factors.{name}", positive=True) for name, k in factors.items()]
    weights = _obj(_field(data, "weights", "$"), "$.weights")
    try:
        space = ConfigurationSpace(tuple(factors), tuple(sizes))
        table = {}
        for key, w in weights.items():
            where = f"$.weights.{key}"
            try:
                config = tuple(int(x) for x in key.split(",")) if key else ()
            except ValueError:
                raise SchemaError("keys are comma-separated integers", where) from None
            try:
                table[config] = to_fraction(w)
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise SchemaError(f"bad rational ({exc})", where) from None
        return Measure.from_mapping(space, table)
    except MeasureError as exc:
        raise SchemaError(str(exc), "$.weights") from None


def measure_to_json(m: Measure) -> dict:
    return {
        "factors": dict(zip(m.space.names, m.space.sizes)),
        "weights": {
            ",".join(str(x) for x in c): format_fraction(w)
            for c, w in zip(m.space.configurations, m.weights)
            if w
        },
    }


def _split_key(key: str, sep: str, where: str) -> tuple[str, str]:
    parts = key.split(sep)
    if len(parts) != 2:
        raise SchemaError(f"key must look like 'x{sep}y'", where)
    return parts[0], parts[1]


def split_from_json(data: Any) -> SplitFunctor:
    _obj(data, "$")
    p = poset_from_json(_field(data, "poset", "$"), "$.poset")
    raw_dims = _obj(_field(data, "dims", "$"), "$.dims")
    dims = {}
    for a in p.elements:
        if a not in raw_dims:
            raise SchemaError(f"missing dimension for {a!r}", "$.dims")
        dims[a] = _count(raw_dims[a], f"$.dims.{a}")
    G, F = {}, {}
    for key, m in _obj(_field(data, "G", "$"), "$.G").items():
        where = f"$.G.{key}"
        b, a = _split_key(key, "<=", where)
        if b not in dims or a not in dims:
            raise SchemaError("unknown element", where)
        G[(b, a)] = matrix_from_json(m, (dims[a], dims[b]), where)
    for key, m in _obj(_field(data, "F", "$"), "$.F").items():
        where = f"$.F.{key}"
        a, b = _split_key(key, "=>", where)
        if b not in dims or a not in dims:
            raise SchemaError("unknown element", where)
        F[(a, b)] = matrix_from_json(m, (dims[b], dims[a]), where)
    try:
        return validate_split(p, dims, G, F)
    except SplitError as exc:
        raise SchemaError(f"{exc} (witness {list(exc.witness)})", "$") from None


def split_to_json(sf: SplitFunctor) -> dict:
    """Cover generators only; composites are rebuilt on load."""
    covers = sf.poset.covers()
    return {
        "poset": poset_to_json(sf.poset),
        "dims": dict(sf.dims),
        "G": {f"{b}<={a}": matrix_to_json(sf.g(b, a)) for b, a in covers},
        "F": {f"{a}=>{b}": matrix_to_json(sf.f(a, b)) for b, a in covers},
    }
