"""Matrix files: ``GRMX`` then p, e, d, rows, cols (u64 LE), then row-major elements."""

from __future__ import annotations

import struct

from . import wire
from .errors import ParamsMismatch
from .ring import make_ring

MAGIC = b"GRMX"
HEADER_BYTES = len(MAGIC) + 5 * wire.WORD_BYTES


def matrix_to_bytes(ring, M):
    M = ring.asarray(M)
    if M.ndim != 2 + ring.elem_ndim or M.shape[2:] != ring.elem_shape:
        raise ParamsMismatch(f"array of shape {M.shape} is not a matrix over {ring!r}")
    rows, cols = M.shape[:2]
    return MAGIC + struct.pack("<5Q", ring.p, ring.e, ring.d, rows, cols) + wire.element_bytes(ring, M)


def matrix_from_bytes(data):
    if data[:4] != MAGIC or len(data) < HEADER_BYTES:
        raise ParamsMismatch("not a matrix file")
    p, e, d, rows, cols = struct.unpack_from("<5Q", data, 4)
    ring = make_ring(p, e, d)
    body = data[HEADER_BYTES:]
    if len(body) != rows * cols * d * wire.WORD_BYTES:
        raise ParamsMismatch(f"matrix file body has {len(body)} bytes, expected {rows * cols * d * 8}")
    return ring, wire.elements_from_bytes(ring, body, (rows, cols))


def write_matrix(path, ring, M):
    with open(path, "wb") as fh:
        fh.write(matrix_to_bytes(ring, M))


def read_matrix(path):
    with open(path, "rb") as fh:
        return matrix_from_bytes(fh.read())
