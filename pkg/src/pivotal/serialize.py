"""Canonical JSON formats for distributions, functions, and rationals.

Rationals travel as exact "num/den" strings; decimals are rejected so a
file can never silently lose exactness. Serialization is canonical
(sorted supports, fixed key order), so parse followed by serialize is
byte-identical.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .boolfn import (
    ConstantFn,
    DenseTable,
    DictatorFn,
    MajorityFn,
    MajPFn,
    ParityFn,
    PlayerFunction,
    UpwardClosure,
)
from .dist import (
    Alphabet,
    Distribution,
    DistributionError,
    ExplicitDist,
    PivotalError,
    ProductDist,
)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse an exact "num/den" (or integer) string; decimals are rejected."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise PivotalError(
            f"expected an exact rational like \"3/4\", got {text!r}"
            " (decimal notation is rejected)")
    return Fraction(text.strip())


def rational_str(x: Fraction) -> str:
    return str(Fraction(x))


def canonical_dumps(obj: object) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2)


def jsonable(value: object) -> object:
    """Recursively convert report values to JSON-safe types."""
    if isinstance(value, Fraction):
        return rational_str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


# ----------------------------------------------------------------------
# Distributions


def dist_to_obj(d: Distribution) -> dict:
    if isinstance(d, ExplicitDist):
        return {
            "kind": "explicit",
            "alphabet": list(d.alphabet.symbols),
            "n": d.n,
            "support": [{"x": list(x), "w": rational_str(w)} for x, w in d.support],
        }
    if isinstance(d, ProductDist):
        return {
            "kind": "product",
            "alphabet": list(d.alphabet.symbols),
            "n": d.n,
            "marginals": [[rational_str(p) for p in row] for row in d.marginals],
        }
    raise PivotalError(f"cannot serialize {type(d).__name__}")


def dist_from_obj(obj: dict) -> Distribution:
    try:
        kind = obj["kind"]
        alphabet = Alphabet(tuple(obj["alphabet"]))
        n = int(obj["n"])
        if kind == "explicit":
            support = [(tuple(int(s) for s in entry["x"]), parse_rational(entry["w"]))
                       for entry in obj["support"]]
            return ExplicitDist(alphabet, n, support)
        if kind == "product":
            marginals = [[parse_rational(p) for p in row] for row in obj["marginals"]]
            return ProductDist(alphabet, n, marginals)
    except KeyError as exc:
        raise DistributionError(f"distribution object missing field {exc}") from None
    raise DistributionError(f"unknown distribution kind {obj.get('kind')!r}")


# ----------------------------------------------------------------------
# Player functions


_BUILTIN_NAMES = {
    "majp": MajPFn,
    "parity": ParityFn,
    "majority": MajorityFn,
}


def fn_to_obj(f: PlayerFunction) -> dict:
    if isinstance(f, DenseTable):
        if any(len(s) != 1 for s in f.alphabet.symbols):
            raise PivotalError("table serialization needs single-character symbols")
        values = {"".join(f.alphabet.symbols[s] for s in x): rational_str(v)
                  for x, v in f.entries}
        return {"kind": "table", "alphabet": list(f.alphabet.symbols),
                "n": f.n, "values": values}
    if isinstance(f, UpwardClosure):
        return {"kind": "upward", "n": f.n,
                "generators": [list(g) for g in f.generator_outcomes()]}
    if isinstance(f, MajPFn):
        return {"kind": "builtin", "name": "majp", "params": {"n": f.n}}
    if isinstance(f, ParityFn):
        return {"kind": "builtin", "name": "parity", "params": {"n": f.n}}
    if isinstance(f, MajorityFn):
        return {"kind": "builtin", "name": "majority", "params": {"n": f.n}}
    if isinstance(f, DictatorFn):
        return {"kind": "builtin", "name": "dictator",
                "params": {"n": f.n, "i": f.player}}
    if isinstance(f, ConstantFn):
        obj = {"kind": "builtin", "name": "constant",
               "params": {"n": f.n, "c": rational_str(f.value)}}
        if f.alphabet.symbols != ("0", "1"):
            obj["params"]["alphabet"] = list(f.alphabet.symbols)
        return obj
    raise PivotalError(f"cannot serialize {type(f).__name__}")


def fn_from_obj(obj: dict) -> PlayerFunction:
    kind = obj.get("kind")
    if kind == "table":
        alphabet = Alphabet(tuple(obj["alphabet"]))
        if any(len(s) != 1 for s in alphabet.symbols):
            raise PivotalError("table parsing needs single-character symbols")
        index = {s: i for i, s in enumerate(alphabet.symbols)}
        values = {}
        for key, v in obj["values"].items():
            try:
                outcome = tuple(index[ch] for ch in key)
            except KeyError as exc:
                raise PivotalError(f"unknown symbol {exc} in table key {key!r}") from None
            values[outcome] = parse_rational(v)
        return DenseTable(alphabet, int(obj["n"]), values)
    if kind == "upward":
        return UpwardClosure(int(obj["n"]), [tuple(g) for g in obj["generators"]])
    if kind == "builtin":
        name = obj.get("name")
        params = obj.get("params", {})
        n = int(params["n"])
        if name in _BUILTIN_NAMES:
            return _BUILTIN_NAMES[name](n)
        if name == "dictator":
            return DictatorFn(n, int(params["i"]))
        if name == "constant":
            alphabet = Alphabet(tuple(params.get("alphabet", ("0", "1"))))
            return ConstantFn(n, parse_rational(params["c"]), alphabet)
        raise PivotalError(f"unknown builtin {name!r}")
    raise PivotalError(f"unknown function kind {kind!r}")


# ----------------------------------------------------------------------
# File helpers


def save_dist(path: str | Path, d: Distribution) -> None:
    Path(path).write_text(canonical_dumps(dist_to_obj(d)) + "\n", encoding="utf-8")


def load_dist(path: str | Path) -> Distribution:
    return dist_from_obj(json.loads(Path(path).read_text(encoding="utf-8")))


def save_fn(path: str | Path, f: PlayerFunction) -> None:
    Path(path).write_text(canonical_dumps(fn_to_obj(f)) + "\n", encoding="utf-8")


def load_fn(path: str | Path) -> PlayerFunction:
    return fn_from_obj(json.loads(Path(path).read_text(encoding="utf-8")))
