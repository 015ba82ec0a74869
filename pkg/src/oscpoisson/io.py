"""JSON files and plain-text flag syntax.

Algebra file::

    {"schema_version": 1, "role": "product" | "coproduct", "dim": D,
     "basis": [names], "product": [{"i": int, "j": int, "k": int, "coeff": Coeff}]}

For a coproduct an entry (i, j, k, c) means Δ(b_i) contains c·b_j⊗b_k.
Coeffs are "p/q" strings or {"vars": [...], "terms": [{"exps": [...], "coeff": "p/q"}]}.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .algebra import Basis, BilinearMap
from .bialgebra import Coproduct, RTensor
from .exactmath import coeff_from_json, parse_coeff

SCHEMA_VERSION = 1

_BASIS_TOKEN = r"(?:ê|ě|\^e)\d+|e-?\d+"
_WEDGE_RE = re.compile(rf"^({_BASIS_TOKEN})\^({_BASIS_TOKEN})$")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def algebra_to_json(obj) -> dict:
    return {"schema_version": SCHEMA_VERSION, **obj.to_json()}


def algebra_from_json(data: dict):
    basis = Basis(tuple(data["basis"]))
    if data.get("dim", basis.dim) != basis.dim:
        raise ValueError("dim does not match the basis length")
    entries = [(e["i"], e["j"], e["k"], coeff_from_json(e["coeff"])) for e in data.get("product", [])]
    if data.get("role", "product") == "coproduct":
        return Coproduct.from_entries(basis, entries)
    return BilinearMap(basis, entries)


def save(obj, path: str | Path) -> None:
    Path(path).write_text(dumps(algebra_to_json(obj)), encoding="utf-8")


def load(path: str | Path):
    return algebra_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def normalize_label(token: str) -> str:
    """Accept e-1, e0, e3, ê3, ě3 and the ASCII alias ^e3."""
    token = token.strip()
    m = re.fullmatch(r"(?:ê|ě|\^e)(\d+)", token)
    if m:
        return f"ê{m.group(1)}"
    if re.fullmatch(r"e-?\d+", token):
        return token
    raise ValueError(f"bad basis element {token!r}")


def _split_terms(text: str) -> list[tuple[object, str]]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            coeff, item = part.split(":", 1)
            out.append((parse_coeff(coeff), item.strip()))
        else:
            out.append((1, part))
    return out


def parse_vector(text: str, basis: Basis) -> tuple:
    """"e1" or "2:e1,1/2:ê1" as a vector over ``basis``."""
    v = [0] * basis.dim
    for coeff, item in _split_terms(text or ""):
        i = basis.index(normalize_label(item))
        v[i] = v[i] + coeff
    return basis.vector({basis.labels[i]: x for i, x in enumerate(v)})


def parse_r(text: str, basis: Basis) -> RTensor:
    """"a:e1^ê1,2:e1^e2" as Σ coeff · b_j ∧ b_k."""
    pairs = []
    for coeff, item in _split_terms(text or ""):
        m = _WEDGE_RE.match(item)
        if not m:
            raise ValueError(f"bad wedge term {item!r}; expected like e1^ê1")
        pairs.append((basis.index(normalize_label(m.group(1))), basis.index(normalize_label(m.group(2))), coeff))
    return RTensor.from_pairs(basis, pairs)


def parse_coeff_list(text: str) -> list:
    return [parse_coeff(x) for x in text.split(",") if x.strip()]
