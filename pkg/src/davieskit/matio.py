"""JSON interchange formats used by the CLI.

Matrix format: ``{"dim": N, "re": [[...]], "im": [[...]]}`` where the
nested lists are either ``N x N`` (states, stochastic blocks) or
``N^2 x N^2`` (superoperators); ``im`` may be omitted for real matrices.

Qutrit parameter format: ``{"F": [[...3x3...]], "lambda": [l1, l2, l3],
"p": [p1, p2, p3]}``; ``p`` is optional and computed from ``F`` when
absent.
"""
from __future__ import annotations

import json
from typing import IO, Any

import numpy as np

from .errors import DimensionMismatch, InvalidParams
from .qutrit import QutritDaviesParams, stationary_vector

__all__ = [
    "matrix_to_dict",
    "matrix_from_dict",
    "load_matrix",
    "dump_matrix",
    "qutrit_params_from_dict",
    "load_qutrit_params",
]


def matrix_to_dict(m, dim: int | None = None) -> dict[str, Any]:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {m.shape}")
    if dim is None:
        n = m.shape[0]
        dim = int(round(np.sqrt(n))) if int(round(np.sqrt(n))) ** 2 == n and n > 3 else n
    return {
        "dim": int(dim),
        "re": [[float(x) for x in row] for row in m.real],
        "im": [[float(x) for x in row] for row in m.imag],
    }


def matrix_from_dict(d: dict[str, Any]) -> tuple[np.ndarray, int]:
    """Parse the interchange dict; returns ``(matrix, dim)`` where ``dim``
    is the system dimension and the matrix is ``dim x dim`` or
    ``dim^2 x dim^2``."""
    if not isinstance(d, dict) or "dim" not in d or "re" not in d:
        raise InvalidParams("matrix object must carry 'dim' and 're'")
    dim = int(d["dim"])
    re = np.asarray(d["re"], dtype=float)
    im = np.asarray(d.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape:
        raise InvalidParams(f"re/im shapes differ: {re.shape} vs {im.shape}")
    if re.ndim != 2 or re.shape[0] != re.shape[1]:
        raise InvalidParams(f"matrix must be square, got {re.shape}")
    if re.shape[0] not in (dim, dim * dim):
        raise InvalidParams(
            f"matrix side {re.shape[0]} matches neither dim={dim} nor dim^2"
        )
    m = re + 1j * im
    if np.max(np.abs(m.imag)) == 0.0:
        return re.copy(), dim
    return m, dim


def load_matrix(fp: IO[str] | str) -> tuple[np.ndarray, int]:
    if isinstance(fp, str):
        with open(fp, encoding="utf-8") as fh:
            return matrix_from_dict(json.load(fh))
    return matrix_from_dict(json.load(fp))


def dump_matrix(m, fp: IO[str] | str, dim: int | None = None) -> None:
    d = matrix_to_dict(m, dim=dim)
    if isinstance(fp, str):
        with open(fp, "w", encoding="utf-8") as fh:
            json.dump(d, fh)
            fh.write("\n")
    else:
        json.dump(d, fp)
        fp.write("\n")


def qutrit_params_from_dict(d: dict[str, Any], strict: bool = False) -> QutritDaviesParams:
    if not isinstance(d, dict) or "F" not in d or "lambda" not in d:
        raise InvalidParams("qutrit object must carry 'F' and 'lambda'")
    F = np.asarray(d["F"], dtype=float)
    lam = np.asarray(d["lambda"], dtype=float)
    if F.shape != (3, 3):
        raise InvalidParams(f"'F' must be 3x3, got {F.shape}")
    if lam.shape != (3,):
        raise InvalidParams(f"'lambda' must have 3 entries, got {lam.shape}")
    if "p" in d:
        p = np.asarray(d["p"], dtype=float)
        if p.shape != (3,):
            raise InvalidParams(f"'p' must have 3 entries, got {p.shape}")
    else:
        p = stationary_vector(F)
    return QutritDaviesParams(transfer=F, lambdas=lam, stationary=p, strict=strict)


def load_qutrit_params(fp: IO[str] | str, strict: bool = False) -> QutritDaviesParams:
    if isinstance(fp, str):
        with open(fp, encoding="utf-8") as fh:
            return qutrit_params_from_dict(json.load(fh), strict=strict)
    return qutrit_params_from_dict(json.load(fp), strict=strict)
