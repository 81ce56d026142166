"""JSON encodings for signals, coefficient arrays, systems, specs, bases and kernels.

Complex numbers are ``[re, im]`` pairs; multi-axis values are flattened in
row-major order of the stored axis list. Infinite exponents are the string
``"inf"``.
"""

from __future__ import annotations

import math

import numpy as np

from .frames import GaborLattice, GaborSystem
from .mixednorms import MixedNormSpec, Permutation, Weight
from .tfcore import Axis, CoeffArray, as_signal
from .wilson import WilsonBasis, build_wilson_basis


def _pairs(values: np.ndarray) -> list:
    flat = np.asarray(values, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def _unpairs(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float).reshape(-1, 2)
    return arr[:, 0] + 1j * arr[:, 1]


def signal_to_json(f) -> dict:
    f = as_signal(f)
    return {"n": int(f.size), "values": _pairs(f)}


def signal_from_json(obj: dict) -> np.ndarray:
    return as_signal(_unpairs(obj["values"]), int(obj["n"]))


def coeffs_to_json(A: CoeffArray) -> dict:
    out = {
        "n": int(A.values.size),
        "values": _pairs(A.values),
        "axes": [{"role": ax.role, "var": ax.var, "extent": ax.extent} for ax in A.axes],
    }
    if A.mask is not None:
        out["mask"] = [bool(m) for m in A.mask.ravel()]
    return out


def coeffs_from_json(obj: dict) -> CoeffArray:
    axes = tuple(Axis(a["role"], int(a["var"]), int(a["extent"])) for a in obj["axes"])
    shape = tuple(ax.extent for ax in axes)
    values = _unpairs(obj["values"])
    if values.size != int(obj["n"]):
        raise ValueError("value count does not match 'n'")
    mask = None
    if "mask" in obj:
        mask = np.asarray(obj["mask"], dtype=bool).reshape(shape)
    return CoeffArray(axes, values.reshape(shape), mask)


def system_to_json(sys: GaborSystem) -> dict:
    lat = sys.lattice
    return {"N": lat.N, "a": lat.a, "b": lat.b, "window": signal_to_json(sys.window), "kind": sys.kind}


def system_from_json(obj: dict) -> GaborSystem:
    lat = GaborLattice(int(obj["N"]), int(obj["a"]), int(obj["b"]))
    return GaborSystem(lat, signal_from_json(obj["window"]), obj.get("kind", "raw"))


def _exp_out(p: float):
    return "inf" if p == math.inf else p


def _exp_in(p) -> float:
    return math.inf if p in ("inf", "Infinity") else float(p)


def spec_to_json(spec: MixedNormSpec) -> dict:
    w = spec.weight
    if w.kind == "custom":
        raise ValueError("custom weights are not serializable")
    weight = {"kind": w.kind}
    if w.kind == "poly":
        weight["s"] = w.s
    if w.axes is not None:
        weight["axes"] = list(w.axes)
    return {
        "p": [_exp_out(p) for p in spec.exponents],
        "perm": list(spec.permutation.image),
        "weight": weight,
    }


def spec_from_json(obj: dict) -> MixedNormSpec:
    w = obj.get("weight", {"kind": "one"})
    if w["kind"] == "poly":
        weight = Weight.poly(float(w["s"]), w.get("axes"))
    elif w["kind"] == "one":
        weight = Weight.one()
    else:
        raise ValueError(f"unsupported weight kind {w['kind']!r}")
    perm = Permutation(tuple(obj["perm"])) if "perm" in obj else None
    return MixedNormSpec(tuple(_exp_in(p) for p in obj["p"]), perm, weight)


def basis_to_json(B: WilsonBasis) -> dict:
    return {"N": B.N, "M": B.M, "window": signal_to_json(B.window)}


def basis_from_json(obj: dict) -> WilsonBasis:
    """Rebuild the basis from its window; the orthonormality gate is re-run."""
    window = signal_from_json(obj["window"])
    return build_wilson_basis(int(obj["N"]), int(obj["M"]), window)


def matrix_to_json(k) -> dict:
    k = np.asarray(k, dtype=complex)
    return {"N": int(k.shape[0]), "matrix": [_pairs(row) for row in k]}


def matrix_from_json(obj: dict) -> np.ndarray:
    n = int(obj["N"])
    k = np.array([_unpairs(row) for row in obj["matrix"]])
    if k.shape != (n, n):
        raise ValueError(f"matrix shape {k.shape} does not match N={n}")
    return k
