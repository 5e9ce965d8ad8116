"""Scenario documents: JSON schema, parsing and up-front validation."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from ..numkernel import parse_exact
from ..numkernel.precision import DEFAULT_DIGITS, ENV_DIGITS

PIPELINES = ("solve", "verify", "roundtrip", "family", "lift", "classical")

_scalar = {"oneOf": [
    {"type": "string"},
    {"type": "integer"},
    {"type": "array", "items": {"type": ["string", "integer"]}, "minItems": 2, "maxItems": 2},
]}
_coeffs = {"type": "array", "items": _scalar, "minItems": 1}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "pattern": "^[A-Za-z0-9_.-]+$"},
        "pipeline": {"enum": list(PIPELINES)},
        "A": _coeffs,
        "B": _coeffs,
        "n": {"type": "integer", "minimum": 1},
        "digits": {"type": "integer", "minimum": 15},
        "allow_nonprime": {"type": "boolean"},
        "points": {"type": "array", "items": _scalar},
        "seed": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "strategy": {"enum": ["classical-zeros", "scaled-roots-of-unity", "user-list",
                                      "random-disk"]},
                "scale": {"type": "number", "exclusiveMinimum": 0},
                "jitter": {"type": "number", "minimum": 0},
                "rng_seed": {"type": "integer", "minimum": 0},
                "real_jitter": {"type": "boolean"},
                "points": {"type": "array", "items": _scalar},
            },
        },
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "solver": {"type": "string"},
                "quadrature": {"type": "string"},
                "degeneracy": {"type": "string"},
                "gap_log10": {"type": "number"},
                "q_remainder": {"type": "string"},
                "wronskian": {"type": "string"},
            },
        },
        "family": {
            "type": "object",
            "additionalProperties": False,
            "required": ["B", "k"],
            "properties": {
                "B": _coeffs,
                "k": {"type": "integer", "minimum": 1},
                "C": {"type": "array", "items": _scalar, "minItems": 1},
                "C_grid": {"type": "array", "items": _scalar},
            },
        },
        "lift": {
            "type": "object",
            "additionalProperties": False,
            "required": ["c", "K"],
            "properties": {
                "c": _scalar,
                "K": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
            },
        },
        "svg": {"type": "boolean"},
        "output": {"type": "string"},
    },
}


class ScenarioError(ValueError):
    """The scenario document is malformed or violates a precondition."""


@dataclass(frozen=True)
class Scenario:
    """One validated scenario.

    Numbers stay as the decimal strings of the document until a stage
    parses them at its working precision.
    """

    name: str
    pipeline: str
    digits: int
    A: tuple = ()
    B: tuple = ()
    n: int | None = None
    allow_nonprime: bool = False
    points: tuple = ()
    seed: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    family: dict | None = None
    lift: dict | None = None
    svg: bool = True
    source: dict = field(default_factory=dict, compare=False)

    def echo(self) -> dict:
        """The document as given, plus resolved pipeline and digits."""
        out = dict(self.source)
        out["pipeline"] = self.pipeline
        out["digits"] = self.digits
        out["name"] = self.name
        if self.seed:
            out["seed"] = dict(self.seed)
        if self.tolerances:
            out["tolerances"] = dict(self.tolerances)
        return out


def default_digits() -> int:
    raw = os.environ.get(ENV_DIGITS, "").strip()
    if not raw:
        return DEFAULT_DIGITS
    try:
        val = int(raw)
    except ValueError as exc:
        raise ScenarioError(f"{ENV_DIGITS}={raw!r} is not an integer") from exc
    if val < 15:
        raise ScenarioError(f"{ENV_DIGITS} must be at least 15")
    return val


def _check_scalars(values, where):
    for v in values:
        try:
            parse_exact(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise ScenarioError(f"{where}: cannot parse {v!r}") from exc


def parse_scenario(doc: dict, pipeline: str | None = None, digits: int | None = None,
                   tol: str | None = None, seed: int | None = None,
                   name: str | None = None) -> Scenario:
    """Validate a scenario document and apply command-line overrides.

    Raises
    ------
    ScenarioError
        On schema violations, unparsable numbers, a pipeline conflict or a
        missing field the pipeline needs.
    """
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ScenarioError(f"{path}: {exc.message}") from None
    pipe = doc.get("pipeline")
    if pipeline is not None and pipe is not None and pipe != pipeline:
        raise ScenarioError(f"scenario is for {pipe!r}, not {pipeline!r}")
    pipe = pipeline or pipe
    if pipe is None:
        raise ScenarioError("no pipeline given")
    for key in ("A", "B", "points"):
        _check_scalars(doc.get(key, []), key)
    sd = dict(doc.get("seed", {}))
    _check_scalars(sd.get("points", []), "seed/points")
    if seed is not None:
        sd["rng_seed"] = int(seed)
    tols = dict(doc.get("tolerances", {}))
    for k, v in tols.items():
        if isinstance(v, str):
            _check_scalars([v], f"tolerances/{k}")
    if tol is not None:
        _check_scalars([tol], "--tol")
        tols["solver"] = tol
    needs = {"solve": ("A", "B", "n"), "roundtrip": ("A", "B", "n"), "lift": ("A", "B", "n", "lift"),
             "verify": ("A", "B", "points"), "family": ("family",), "classical": ()}[pipe]
    missing = [k for k in needs if k not in doc]
    if missing:
        raise ScenarioError(f"pipeline {pipe!r} needs {', '.join(missing)}")
    if "family" in doc:
        _check_scalars(doc["family"]["B"], "family/B")
        _check_scalars(doc["family"].get("C", []), "family/C")
        _check_scalars(doc["family"].get("C_grid", []), "family/C_grid")
    if "lift" in doc:
        _check_scalars([doc["lift"]["c"]], "lift/c")
    dg = digits or doc.get("digits") or default_digits()
    if dg < 15:
        raise ScenarioError("digits must be at least 15")
    return Scenario(
        name=name or doc.get("name") or pipe,
        pipeline=pipe,
        digits=int(dg),
        A=tuple(doc.get("A", ())),
        B=tuple(doc.get("B", ())),
        n=doc.get("n"),
        allow_nonprime=doc.get("allow_nonprime", False),
        points=tuple(doc.get("points", ())),
        seed=sd,
        tolerances=tols,
        family=doc.get("family"),
        lift=doc.get("lift"),
        svg=doc.get("svg", True),
        source=doc,
    )


def load_scenarios(path, **overrides) -> list:
    """One scenario from a file, or every ``*.json`` of a directory (sorted)."""
    p = Path(path)
    files = sorted(p.glob("*.json")) if p.is_dir() else [p]
    if not files:
        raise ScenarioError(f"no scenario files in {p}")
    out = []
    for f in files:
        try:
            doc = json.loads(f.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ScenarioError(f"{f}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ScenarioError(f"{f}: top level must be an object")
        sc = parse_scenario(doc, name=doc.get("name") or f.stem, **overrides)
        out.append(sc)
    names = [s.name for s in out]
    if len(set(names)) != len(names):
        raise ScenarioError("scenario names must be unique within a batch")
    return out
