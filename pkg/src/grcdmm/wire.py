"""Byte formats for ring descriptors, elements, worker tasks and responses.

Every residue is one little-endian unsigned 64-bit word.  An element of
GR(p^e, d) is its d coefficients in ascending degree; an element of a tower
is its m coefficients in ascending degree, each written as a full element of
the ring below.  That is exactly the C-order flattening of the array layout.

A matrix record is ``worker_id, rows, cols`` (u64 each) followed by the
row-major elements.  A task is two records (the A share, then the B share);
a response is one.
"""

from __future__ import annotations

import struct

import numpy as np

from .ep import WorkerResponse, WorkerTask
from .errors import ParamsMismatch
from .ring import GaloisRing, make_extension, make_ring

RING_MAGIC = b"GRNG"
WORD_BYTES = 8
_U64 = np.dtype("<u8")


def element_bytes(ring, arr):
    arr = np.asarray(arr)
    if arr.dtype == object:
        arr = np.array([int(v) for v in arr.reshape(-1)], dtype=np.uint64).reshape(arr.shape)
    return np.ascontiguousarray(arr, dtype=_U64).tobytes()


def elements_from_bytes(ring, data, shape):
    count = int(np.prod(shape, dtype=np.int64)) * int(np.prod(ring.elem_shape, dtype=np.int64))
    words = np.frombuffer(data, dtype=_U64, count=count)
    return ring.asarray(words.reshape(tuple(shape) + ring.elem_shape).astype(np.uint64))


def ring_descriptor(ring):
    levels = []
    while not isinstance(ring, GaloisRing):
        levels.append(ring.degree)
        ring = ring.base
    fields = [ring.p, ring.e, ring.d] + levels[::-1]
    return RING_MAGIC + struct.pack(f"<{len(fields)}Q", *fields)


def ring_from_descriptor(data):
    """Rebuild a ring from its descriptor; every word after p, e, d is one tower level."""
    if data[:4] != RING_MAGIC or (len(data) - 4) % WORD_BYTES or len(data) < 4 + 3 * WORD_BYTES:
        raise ParamsMismatch("not a ring descriptor")
    fields = struct.unpack(f"<{(len(data) - 4) // WORD_BYTES}Q", data[4:])
    ring = make_ring(*fields[:3])
    for m in fields[3:]:
        ring = make_extension(ring, m)
    return ring


def _record(ring, worker_id, M):
    M = ring.asarray(M)
    rows, cols = M.shape[:2]
    return struct.pack("<3Q", worker_id, rows, cols) + element_bytes(ring, M)


def _read_record(ring, data, offset):
    worker_id, rows, cols = struct.unpack_from("<3Q", data, offset)
    offset += 3 * WORD_BYTES
    size = rows * cols * int(np.prod(ring.elem_shape)) * WORD_BYTES
    M = elements_from_bytes(ring, data[offset:offset + size], (rows, cols))
    return worker_id, M, offset + size


def task_to_bytes(task):
    return _record(task.ring, task.worker_id, task.a_share) + _record(task.ring, task.worker_id, task.b_share)


def task_from_bytes(ring, data):
    wid, a, offset = _read_record(ring, data, 0)
    _, b, _ = _read_record(ring, data, offset)
    return WorkerTask(int(wid), a, b, ring)


def response_to_bytes(ring, response):
    return _record(ring, response.worker_id, response.product)


def response_from_bytes(ring, data, latency=0.0):
    wid, product, _ = _read_record(ring, data, 0)
    return WorkerResponse(int(wid), product, latency)


def payload_words(data, records):
    """Element words in a message made of ``records`` matrix records."""
    return len(data) // WORD_BYTES - 3 * records
