"""Entangled polynomial (EP) codes for distributed matrix multiplication.

A is cut into u x w blocks and B into w x v blocks.  With

    f(x) = sum_{i,j} A_ij x^(i w + j)
    g(x) = sum_{k,l} B_kl x^(w - 1 - k + l u w)

(indices from 0) the block C_il = sum_j A_ij B_jl is the coefficient of
h = f g at degree i w + (w - 1) + l u w, and deg h = uvw + w - 2.  Worker a
receives f(alpha_a), g(alpha_a) and returns their product h(alpha_a); any
R = uvw + w - 1 answers determine h by interpolation.

Polynomial codes are the w = 1 case and MatDot codes the u = v = 1 case.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    CountTooLarge,
    DuplicateWorker,
    IndivisibleDimensions,
    InsufficientResponses,
    PresetConflict,
    ShapeMismatch,
    ThresholdExceedsWorkers,
)
from .poly import Poly, eval_many, interpolate
from .ring import exceptional_set


def recovery_threshold(u, v, w):
    return u * v * w + w - 1


@dataclass(frozen=True)
class EpParams:
    u: int
    v: int
    w: int
    N: int
    ring: object

    def __post_init__(self):
        if min(self.u, self.v, self.w, self.N) < 1:
            raise ValueError("u, v, w and N must be positive")
        if self.R > self.N:
            raise ThresholdExceedsWorkers(f"recovery threshold {self.R} exceeds {self.N} workers")
        if self.N > self.ring.residue_size:
            raise CountTooLarge(
                f"{self.N} workers need {self.N} exceptional points but {self.ring!r} has {self.ring.residue_size}")

    @property
    def R(self):
        return recovery_threshold(self.u, self.v, self.w)

    @cached_property
    def eval_points(self):
        return exceptional_set(self.ring, self.N).elements

    def check_dims(self, t, r, s):
        for name, size, parts in (("t", t, self.u), ("r", r, self.w), ("s", s, self.v)):
            if size % parts:
                raise IndivisibleDimensions(f"{name}={size} is not divisible by {parts}")

    def share_dims(self, t, r, s):
        """Shapes (rows, inner, cols) of the product each worker computes."""
        return t // self.u, r // self.w, s // self.v

    def extraction_degree(self, i, l):
        return i * self.w + self.w - 1 + l * self.u * self.w


@dataclass(frozen=True, eq=False)
class WorkerTask:
    worker_id: int
    a_share: np.ndarray
    b_share: np.ndarray
    ring: object


@dataclass(frozen=True, eq=False)
class WorkerResponse:
    worker_id: int
    product: np.ndarray
    latency: float = 0.0


def preset(kind, u=None, v=None, w=None):
    """Partition counts (u, v, w) for the named code family."""
    if kind == "polynomial":
        if w not in (None, 1):
            raise PresetConflict(f"polynomial codes have w = 1, got w = {w}")
        return (u or 1, v or 1, 1)
    if kind == "matdot":
        if u not in (None, 1) or v not in (None, 1):
            raise PresetConflict(f"MatDot codes have u = v = 1, got u = {u}, v = {v}")
        return (1, 1, w or 1)
    if kind == "entangled":
        return (u or 1, v or 1, w or 1)
    raise ValueError(f"unknown code family {kind!r}")


def partition(M, row_blocks, col_blocks):
    """Grid of contiguous blocks, shape (row_blocks, col_blocks, rows/rb, cols/cb, ...)."""
    M = np.asarray(M)
    rows, cols = M.shape[:2]
    if rows % row_blocks or cols % col_blocks:
        raise IndivisibleDimensions(f"{rows}x{cols} does not split into {row_blocks}x{col_blocks} blocks")
    grid = M.reshape((row_blocks, rows // row_blocks, col_blocks, cols // col_blocks) + M.shape[2:])
    return np.swapaxes(grid, 1, 2)


def assemble(grid):
    """Inverse of :func:`partition`."""
    rb, cb, br, bc = grid.shape[:4]
    return np.swapaxes(grid, 1, 2).reshape((rb * br, cb * bc) + grid.shape[4:])


def encoding_polys(A, B, params):
    """The coefficient arrays of f and g (matrix-valued polynomials)."""
    ring, u, v, w = params.ring, params.u, params.v, params.w
    A, B = ring.asarray(A), ring.asarray(B)
    t, r = A.shape[:2]
    r2, s = B.shape[:2]
    if r != r2:
        raise ShapeMismatch(f"inner dimensions differ: {r} vs {r2}")
    params.check_dims(t, r, s)
    a_grid = partition(A, u, w)
    f = a_grid.reshape((u * w,) + a_grid.shape[2:])
    b_grid = partition(B, w, v)
    g = ring.zeros(((w - 1) + (v - 1) * u * w + 1,) + b_grid.shape[2:4])
    for k in range(w):
        for l in range(v):
            g[w - 1 - k + l * u * w] = b_grid[k, l]
    return Poly(ring, f), Poly(ring, g), (t, r, s)


def encode(A, B, params, mode="fast"):
    """One task per worker, carrying f and g evaluated at that worker's point."""
    f, g, (t, r, s) = encoding_polys(A, B, params)
    fa = eval_many(f, params.eval_points, mode=mode)
    gb = eval_many(g, params.eval_points, mode=mode)
    return [WorkerTask(k, fa[k], gb[k], params.ring) for k in range(params.N)]


def worker_multiply(task, latency=0.0):
    a, b = task.a_share, task.b_share
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatch(f"shares of shape {a.shape[:2]} and {b.shape[:2]} do not multiply")
    return WorkerResponse(task.worker_id, task.ring.matmul(a, b), latency)


def select_responses(responses, params):
    """The R responses decoding uses: the R smallest distinct worker ids."""
    seen = {}
    for resp in responses:
        if resp.worker_id in seen:
            raise DuplicateWorker(f"worker {resp.worker_id} answered twice")
        if not 0 <= resp.worker_id < params.N:
            raise ValueError(f"worker id {resp.worker_id} outside 0..{params.N - 1}")
        seen[resp.worker_id] = resp
    if len(seen) < params.R:
        raise InsufficientResponses(f"{len(seen)} responses, recovery needs {params.R}")
    return [seen[k] for k in sorted(seen)[:params.R]]


def decode(responses, params, dims, mode="auto"):
    """Reassemble the t x s product from any R or more worker responses."""
    t, r, s = dims
    params.check_dims(t, r, s)
    ring, u, v = params.ring, params.u, params.v
    chosen = select_responses(responses, params)
    ids = [resp.worker_id for resp in chosen]
    values = np.stack([ring.asarray(resp.product) for resp in chosen])
    block = (t // u, s // v)
    if values.shape[1:3] != block:
        raise ShapeMismatch(f"worker products have shape {values.shape[1:3]}, expected {block}")
    h = interpolate(params.eval_points[ids], values, mode=mode, ring=ring).padded(params.R)
    grid = ring.zeros((u, v) + block)
    for i in range(u):
        for l in range(v):
            grid[i, l] = h[params.extraction_degree(i, l)]
    return assemble(grid)
