"""Small helpers for dense arrays of Scalars (numpy object arrays)."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .scalars import Scalar


def zeros(dim: int, rank: int, params) -> np.ndarray:
    out = np.empty((dim,) * rank, dtype=object)
    z = Scalar.zero(params)
    for idx in itertools.product(range(dim), repeat=rank):
        out[idx] = z
    return out


def indices(dim: int, rank: int):
    return itertools.product(range(dim), repeat=rank)


def first_nonzero(tensor: np.ndarray):
    """(index, value) of the first nonzero entry in row-major order, or None."""
    for idx in np.ndindex(tensor.shape):
        if not tensor[idx].is_zero():
            return idx, tensor[idx]
    return None


def is_zero(tensor: np.ndarray) -> bool:
    return first_nonzero(tensor) is None


def nonzero_items(tensor: np.ndarray):
    for idx in np.ndindex(tensor.shape):
        v = tensor[idx]
        if not v.is_zero():
            yield idx, v


def substitute(tensor: np.ndarray, assignment) -> np.ndarray:
    out = np.empty(tensor.shape, dtype=object)
    for idx in np.ndindex(tensor.shape):
        out[idx] = tensor[idx].subs(assignment)
    return out


def key(idx) -> str:
    """1-based comma-joined index label, e.g. ``(0, 1, 1, 0) -> "1,2,2,1"``."""
    return ",".join(str(i + 1) for i in idx)


def parse_key(text: str) -> tuple[int, ...]:
    return tuple(int(p) - 1 for p in text.split(","))


def apply_frame_map(tensor: np.ndarray, matrix, slot: int) -> np.ndarray:
    """Precompose one slot with a frame endomorphism.

    ``matrix[i][k]`` is the k-th component of the image of ``X_i``, so the
    result is ``T(..., A X_i, ...)`` in the given slot.
    """
    dim = tensor.shape[0]
    out = np.empty(tensor.shape, dtype=object)
    cols = [[(k, Fraction(matrix[i][k])) for k in range(dim) if matrix[i][k]] for i in range(dim)]
    params = next(iter(tensor.flat)).params
    for idx in np.ndindex(tensor.shape):
        acc = Scalar.zero(params)
        for k, c in cols[idx[slot]]:
            src = idx[:slot] + (k,) + idx[slot + 1:]
            v = tensor[src]
            if v.terms:
                acc = acc + v * c
        out[idx] = acc
    return out
