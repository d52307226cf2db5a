"""Built-in divisors and the divisor JSON format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .logfields import LinearField, PRIMAL
from .parsing import parse_polynomial
from .polyring import Polynomial, VarContext, as_rational

DIVISOR_SCHEMA = "fdk-divisor/1"
STORED_ONLY = "stored: not reproduced by this tool"


class DivisorFileError(ValueError):
    pass


@dataclass(frozen=True)
class DivisorFile:
    n: int
    variables: Tuple[str, ...]
    h_text: str
    fields: Optional[Tuple[Tuple[Tuple[Fraction, ...], ...], ...]] = None
    reductive_declared: bool = False
    hp: Optional[Fraction] = None

    @property
    def ring(self) -> VarContext:
        return VarContext(self.variables)

    def polynomial(self) -> Polynomial:
        return parse_polynomial(self.h_text, self.ring)

    def linear_fields(self) -> Optional[List[LinearField]]:
        if self.fields is None:
            return None
        return [LinearField(m, PRIMAL) for m in self.fields]

    def as_json(self) -> dict:
        out = {
            "schema": DIVISOR_SCHEMA,
            "n": self.n,
            "variables": list(self.variables),
            "h": self.h_text,
            "reductive_declared": self.reductive_declared,
        }
        if self.fields is not None:
            out["fields"] = [[[str(x) for x in row] for row in m] for m in self.fields]
        if self.hp is not None:
            out["hp"] = str(self.hp)
        return out


def divisor_from_json(data: dict) -> DivisorFile:
    """Validate and parse a divisor description (see DIVISOR_SCHEMA)."""
    if not isinstance(data, dict):
        raise DivisorFileError("a divisor file must contain a JSON object")
    schema = data.get("schema", DIVISOR_SCHEMA)
    if schema != DIVISOR_SCHEMA:
        raise DivisorFileError(f"unsupported schema {schema!r}")
    try:
        variables = tuple(str(v) for v in data["variables"])
        h_text = str(data["h"])
    except KeyError as exc:
        raise DivisorFileError(f"missing field {exc.args[0]!r}") from None
    n = int(data.get("n", len(variables)))
    if n != len(variables):
        raise DivisorFileError(f"n = {n} but {len(variables)} variables are listed")
    fields = None
    if data.get("fields") is not None:
        try:
            fields = tuple(tuple(tuple(as_rational(x) for x in row) for row in m) for m in data["fields"])
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise DivisorFileError(f"bad field matrix: {exc}") from None
        if len(fields) != n or any(len(m) != n or any(len(r) != n for r in m) for m in fields):
            raise DivisorFileError(f"fields must be {n} matrices of size {n}x{n}")
    hp = as_rational(data["hp"]) if data.get("hp") is not None else None
    div = DivisorFile(n, variables, h_text, fields, bool(data.get("reductive_declared", False)), hp)
    h = div.polynomial()
    if h.weighted_degree([1] * n) != n:
        raise DivisorFileError(f"h must be homogeneous of degree {n} in the {n} variables")
    return div


def load_divisor_file(path: str) -> DivisorFile:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DivisorFileError(f"{path}: invalid JSON ({exc})") from None
    return divisor_from_json(data)


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    divisor: DivisorFile
    description: str
    constants: Dict[str, object] = field(default_factory=dict)
    stored: Dict[str, object] = field(default_factory=dict)

    def as_json(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "divisor": self.divisor.as_json(),
            "constants": self.constants,
            "stored": {k: {"value": v, "provenance": STORED_ONLY} for k, v in self.stored.items()},
        }


def _normal_crossing(n: int) -> CatalogEntry:
    names = tuple(f"w{i}" for i in range(1, n + 1))
    div = DivisorFile(n, names, "*".join(names), reductive_declared=True, hp=Fraction(1))
    consts = {
        "b_reduction": "s" if n == 1 else f"s^{n}",
        "classical_roots": ["-1"] * n,
        "c": -n,
        "largest_admissible_beta0": -n - 1,
        "quantum_de": "(t*dt)^" + str(n) + " - t",
    }
    stored = {
        "inverse_image_reduction": [f"t*dl0^{n} - (t*dt)^{n}", f"l0*dl0 + {n}*t*dt + {n + 1} + beta0"],
    }
    return CatalogEntry(f"nc:{n}", div, f"normal crossing divisor h = {div.h_text}", consts, stored)


def _star3() -> CatalogEntry:
    names = ("a1", "a2", "b1", "b2", "c1", "c2")
    h = "(a1*b2 - a2*b1)*(b1*c2 - b2*c1)*(c1*a2 - c2*a1)"
    div = DivisorFile(6, names, h, reductive_declared=True, hp=Fraction(1))
    consts = {
        "b_reduction": "s^4*(s - 1/3)*(s + 1/3)",
        "classical_roots": ["-4/3", "-1", "-1", "-1", "-1", "-2/3"],
        "c": -8,
        "largest_admissible_beta0": -9,
        "dim_aD": 5,
    }
    stored = {"v_filtration_roots_along_w0": ["-1", "-3", "-3", "-3", "-3", "-5"]}
    return CatalogEntry("star3", div, "discriminant of the star quiver with three arms of dimension 2", consts, stored)


def _point() -> CatalogEntry:
    div = DivisorFile(1, ("w",), "w", reductive_declared=True, hp=Fraction(1))
    consts = {"b_reduction": "s", "classical_roots": ["-1"], "c": -1, "largest_admissible_beta0": -2,
              "quantum_de": "t*dt - t"}
    return CatalogEntry("point", div, "the origin of the line, h = w", consts)


def catalog() -> Dict[str, CatalogEntry]:
    entries = [_normal_crossing(n) for n in range(1, 7)] + [_star3(), _point()]
    return {e.id: e for e in entries}


def lookup(ident: str) -> CatalogEntry:
    key = ident[len("catalog:"):] if ident.startswith("catalog:") else ident
    entries = catalog()
    if key not in entries:
        raise KeyError(f"unknown catalog id {key!r}; known: {', '.join(entries)}")
    return entries[key]
