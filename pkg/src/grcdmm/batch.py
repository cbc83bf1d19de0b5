"""Batch multiplication: n products for the price of one EP session.

The n pairs (A_k, B_k) are packed entrywise with an RMFE's phi into single
matrices over GR_m.  For every output entry,

    (AB)[i, l] = sum_j phi(A_1[i,j], ..., A_n[i,j]) * phi(B_1[j,l], ..., B_n[j,l])

and psi of that sum is (C_1[i,l], ..., C_n[i,l]) by linearity of psi and the
RMFE identity.  So one EP session over GR_m followed by psi recovers all n
products.  psi is applied only to the decoded product: individual worker
answers are not phi-images and cannot be unpacked.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .cluster import Cluster, gather, simulate
from .ep import decode, encode
from .errors import BatchLengthMismatch, SchemeMismatch, ShapeMismatch
from .metrics import Metrics


def run_session(pack, unpack, ep, dims, cluster, metrics, mode="fast"):
    """One EP session: pack, encode, run workers, decode the first R answers, unpack.

    Packing is timed as part of encoding and unpacking as part of decoding.
    """
    start = time.perf_counter()
    A, B = pack()
    tasks = encode(A, B, ep, mode=mode)
    metrics.encode_duration += time.perf_counter() - start
    responses = gather(simulate(tasks, cluster, metrics), ep.R)
    start = time.perf_counter()
    C = decode(responses, ep, dims)
    out = unpack(C)
    metrics.decode_duration += time.perf_counter() - start
    metrics.recovery_threshold = ep.R
    metrics.worker_product_dims = ep.share_dims(*dims)
    return out


@dataclass
class BatchSession:
    rmfe: object
    ep: object
    dims: tuple
    metrics: Metrics = field(default_factory=Metrics)

    def __post_init__(self):
        if self.ep.ring != self.rmfe.ext:
            raise SchemeMismatch(f"EP ring {self.ep.ring!r} is not the RMFE extension {self.rmfe.ext!r}")
        self.dims = tuple(self.dims)
        self.ep.check_dims(*self.dims)

    @property
    def n(self):
        return self.rmfe.n


def _stack(ring, mats, shape, what):
    arr = [ring.asarray(M) for M in mats]
    for M in arr:
        if M.shape[:2] != shape:
            raise ShapeMismatch(f"{what} matrix of shape {M.shape[:2]}, expected {shape}")
    return np.stack(arr)


def batch_multiply(As, Bs, session, cluster=None, mode="fast"):
    """All n products A_k B_k, stacked on the first axis."""
    rmfe, ep = session.rmfe, session.ep
    t, r, s = session.dims
    if len(As) != rmfe.n or len(Bs) != rmfe.n:
        raise BatchLengthMismatch(f"batch of {len(As)} x {len(Bs)} pairs for an RMFE of width {rmfe.n}")
    base = rmfe.base
    As = _stack(base, As, (t, r), "left")
    Bs = _stack(base, Bs, (r, s), "right")
    if cluster is None:
        cluster = Cluster(ep.N)
    session.metrics.scheme = session.metrics.scheme or "batch"
    return run_session(
        lambda: (rmfe.phi_matrix(As), rmfe.phi_matrix(Bs)),
        rmfe.psi_matrix,
        ep, session.dims, cluster, session.metrics, mode)
