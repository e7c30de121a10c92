"""Structured-text (JSON) files for potentials and loops.

Complex numbers are stored as two-element real arrays.  Floats go through
json's shortest round-trip repr, so parse(print(x)) is bit-exact.
"""
from __future__ import annotations

import json

import numpy as np

from .loops import LaurentLoop
from .potentials import PotentialSpec, RationalFunction

__all__ = [
    "potential_to_text",
    "potential_from_text",
    "loop_to_text",
    "loop_from_text",
]


def _c2pair(c: complex) -> list[float]:
    c = complex(c)
    return [c.real, c.imag]


def _pair2c(p) -> complex:
    return complex(p[0], p[1])


def _poly_out(c: np.ndarray) -> list:
    return [_c2pair(x) for x in np.asarray(c, dtype=complex)]


def _poly_in(data) -> np.ndarray:
    return np.array([_pair2c(p) for p in data], dtype=complex)


def potential_to_text(P: PotentialSpec) -> str:
    doc = {
        "n": P.n,
        "base_point": _c2pair(P.base_point),
        "label": P.label,
        "b1": [[{"num": _poly_out(e.num), "den": _poly_out(e.den)}
                for e in row] for row in P.b1],
    }
    return json.dumps(doc, indent=2)


def potential_from_text(text: str) -> PotentialSpec:
    doc = json.loads(text)
    b1 = [[RationalFunction(_poly_in(e["num"]), _poly_in(e["den"]))
           for e in row] for row in doc["b1"]]
    return PotentialSpec(n=int(doc["n"]), b1=b1,
                         base_point=_pair2c(doc["base_point"]),
                         label=doc.get("label", ""))


def loop_to_text(a: LaurentLoop) -> str:
    doc = {
        "dim": a.dim,
        "truncation_order": a.truncation_order,
        "coeffs": {str(k): [[_c2pair(x) for x in row] for row in A]
                   for k, A in sorted(a.coeffs.items())},
    }
    return json.dumps(doc, indent=2)


def loop_from_text(text: str) -> LaurentLoop:
    doc = json.loads(text)
    dim = int(doc["dim"])
    coeffs = {}
    for k, rows in doc["coeffs"].items():
        coeffs[int(k)] = np.array([[_pair2c(x) for x in row] for row in rows],
                                  dtype=complex)
    return LaurentLoop(dim, coeffs, truncation_order=int(doc.get("truncation_order", 24)))
