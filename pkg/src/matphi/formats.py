"""Shared JSON file formats.

Matrix: {"d": int, "re": [d*d floats row-major], "im": [d*d floats]}.
Ensemble: {"d": int, "items": [{"p": float, "rho": matrix}]}.
Kernel: {"rows": [[floats]]}.
Boolean function: {"n": int, "d": int, "points": [{"x": bitstring, "matrix": matrix}]}
with the i-th character of the bitstring holding coordinate i; every
point must be present.
Product model: {"n": int, "d": int, "input_probs": [[floats]],
"values": [matrix]} with the joint index in mixed radix, first input
varying slowest.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .fourier import MatrixBooleanFunction
from .holevo import CQEnsemble, MarkovKernel
from .models import FiniteLaw, ProductModel


def matrix_to_obj(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "d": int(m.shape[0]),
        "re": [float(x) for x in m.real.reshape(-1)],
        "im": [float(x) for x in m.imag.reshape(-1)],
    }


def matrix_from_obj(obj: dict) -> np.ndarray:
    d = int(obj["d"])
    re = np.asarray(obj["re"], dtype=float).reshape(d, d)
    im = np.asarray(obj["im"], dtype=float).reshape(d, d)
    return re + 1j * im


def ensemble_to_obj(ens: CQEnsemble) -> dict:
    return {
        "d": ens.d,
        "items": [
            {"p": float(p), "rho": matrix_to_obj(rho)}
            for p, rho in zip(ens.probs, ens.states)
        ],
    }


def ensemble_from_obj(obj: dict) -> CQEnsemble:
    probs = np.array([item["p"] for item in obj["items"]], dtype=float)
    states = np.stack([matrix_from_obj(item["rho"]) for item in obj["items"]])
    return CQEnsemble(probs, states)


def kernel_to_obj(kernel: MarkovKernel, mu: np.ndarray | None = None) -> dict:
    out = {"rows": [[float(x) for x in row] for row in kernel.rows]}
    if mu is not None:
        out["mu"] = [float(x) for x in mu]
    return out


def kernel_from_obj(obj: dict) -> tuple[MarkovKernel, np.ndarray | None]:
    kernel = MarkovKernel(np.asarray(obj["rows"], dtype=float))
    mu = np.asarray(obj["mu"], dtype=float) if "mu" in obj else None
    return kernel, mu


def boolean_function_to_obj(f: MatrixBooleanFunction) -> dict:
    return {
        "n": f.n,
        "d": f.d,
        "points": [
            {
                "x": format(x, f"0{f.n}b")[::-1] if f.n else "",
                "matrix": matrix_to_obj(m),
            }
            for x, m in enumerate(f.table)
        ],
    }


def boolean_function_from_obj(obj: dict) -> MatrixBooleanFunction:
    n = int(obj["n"])
    d = int(obj["d"])
    table = np.zeros((2**n, d, d), dtype=complex)
    seen = set()
    for point in obj["points"]:
        bits = point["x"]
        if len(bits) != n or any(c not in "01" for c in bits):
            raise ConfigError(f"bad bitstring {bits!r} for n={n}")
        idx = sum(1 << i for i, c in enumerate(bits) if c == "1")
        table[idx] = matrix_from_obj(point["matrix"])
        seen.add(idx)
    if len(seen) != 2**n:
        raise ConfigError(f"function table is missing {2**n - len(seen)} points")
    return MatrixBooleanFunction(n, table)


def product_model_to_obj(model: ProductModel, d: int) -> dict:
    values = [matrix_to_obj(np.asarray(model.evaluator(outcome), dtype=complex))
              for _, outcome in model.iter_joint()]
    return {
        "n": model.n,
        "d": d,
        "input_probs": [[float(p) for p in law.probs] for law in model.laws],
        "values": values,
    }


def product_model_from_obj(obj: dict) -> ProductModel:
    laws = [
        FiniteLaw(np.asarray(probs, dtype=float), tuple(range(len(probs))))
        for probs in obj["input_probs"]
    ]
    table = np.stack([matrix_from_obj(v) for v in obj["values"]])
    return ProductModel.from_table(laws, table)


def dump_json(path: str | Path, obj: dict) -> None:
    text = json.dumps(obj, sort_keys=True, indent=1)
    Path(path).write_text(text + "\n")


def load_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
