"""Kernel dispatch.

Two lanes implement the same bitmask operations: a compiled extension
(when built) that handles masks fitting one machine word, and the pure
Python lane that handles any size.  Each wrapper routes per call site;
setting the environment variable DIALECTICA_PURE forces the pure lane.
"""
from __future__ import annotations

import importlib
import os

from . import pure as _pure

_fast = None
if not os.environ.get("DIALECTICA_PURE"):
    try:
        _fast = importlib.import_module("._fast", __name__)
    except ImportError:
        _fast = None

BACKEND = "compiled" if _fast is not None else "pure"

_WORD = 64


def reindex_mask(alpha, fmap, nw):
    if _fast is not None and len(fmap) * nw <= _WORD and alpha.bit_length() <= _WORD:
        return _fast.reindex_mask(alpha, list(fmap), nw)
    return _pure.reindex_mask(alpha, fmap, nw)


def exists_image(alpha, fibs, nw):
    if _fast is not None and len(fibs) * nw <= _WORD and alpha.bit_length() <= _WORD:
        return _fast.exists_image(alpha, [list(d) for d in fibs], nw)
    return _pure.exists_image(alpha, fibs, nw)


def forall_preimage(alpha, fibs, nw):
    if _fast is not None and len(fibs) * nw <= _WORD and alpha.bit_length() <= _WORD:
        return _fast.forall_preimage(alpha, [list(d) for d in fibs], nw)
    return _pure.forall_preimage(alpha, fibs, nw)


def imp_mask(a, b, ne, nw, upmasks):
    if _fast is not None and ne * nw <= _WORD:
        return _fast.imp_mask(a, b, ne, nw, list(upmasks))
    return _pure.imp_mask(a, b, ne, nw, upmasks)


def exists_gap_g(alpha, beta, na, nb, nw):
    if _fast is not None and na * nb * nw <= _WORD:
        return _fast.exists_gap_g(alpha, beta, na, nb, nw)
    return _pure.exists_gap_g(alpha, beta, na, nb, nw)


def forall_gap_g(alpha, beta, na, nb, nw):
    if _fast is not None and na * nb * nw <= _WORD:
        return _fast.forall_gap_g(alpha, beta, na, nb, nw)
    return _pure.forall_gap_g(alpha, beta, na, nb, nw)


def witness_pair(alpha, beta, ni, nu, nx, nv, ny, nw):
    if (
        _fast is not None
        and ni * nu * nx * nw <= _WORD
        and ni * nv * ny * nw <= _WORD
    ):
        return _fast.witness_pair(alpha, beta, ni, nu, nx, nv, ny, nw)
    return _pure.witness_pair(alpha, beta, ni, nu, nx, nv, ny, nw)


def witness_pair_naive(alpha, beta, ni, nu, nx, nv, ny, nw):
    if (
        _fast is not None
        and ni * nu * nx * nw <= _WORD
        and ni * nv * ny * nw <= _WORD
    ):
        return _fast.witness_pair_naive(alpha, beta, ni, nu, nx, nv, ny, nw)
    return _pure.witness_pair_naive(alpha, beta, ni, nu, nx, nv, ny, nw)
