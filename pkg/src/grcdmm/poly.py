"""Univariate polynomials over a Galois ring, multipoint evaluation and interpolation.

A :class:`Poly` keeps its coefficients as one array of shape
``(k, *batch, *elem_shape)``: coefficient ``i`` is ``coeffs[i]``.  With an
empty batch it is an ordinary ring polynomial; with ``batch == (rows, cols)``
it is a polynomial whose coefficients are matrices, evaluated and
interpolated entrywise.

Two algorithm families are provided and must agree exactly:

* ``naive``: Horner per point, and the Lagrange formula with explicit
  weights prod_{j != i} (x_i - x_j)^{-1};
* ``fast``: a subproduct tree of the linear factors, a remainder tree for
  evaluation, and the linear-combination tree for interpolation.

``auto`` picks ``fast`` once there are at least :data:`FAST_THRESHOLD` points.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, NonExceptionalPoints, NonUnit, ParamsMismatch
from .ring import ExceptionalSet, RingElement

FAST_THRESHOLD = 32
MODES = ("naive", "fast", "auto")


@dataclass(frozen=True, eq=False)
class Poly:
    ring: object
    coeffs: np.ndarray

    def __post_init__(self):
        c = self.ring.asarray(self.coeffs)
        if c.ndim < 1 + self.ring.elem_ndim or c.shape[c.ndim - self.ring.elem_ndim:] != self.ring.elem_shape:
            raise ParamsMismatch(f"coefficients of shape {c.shape} do not belong to {self.ring!r}")
        k = len(c)
        while k and not c[k - 1].any():
            k -= 1
        object.__setattr__(self, "coeffs", c[:k])

    @classmethod
    def from_elements(cls, elems):
        elems = list(elems)
        ring = elems[0].ring
        return cls(ring, np.stack([e.coeffs for e in elems]))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def batch_shape(self):
        nd = self.ring.elem_ndim
        return self.coeffs.shape[1:self.coeffs.ndim - nd]

    def is_zero(self):
        return len(self.coeffs) == 0

    def padded(self, length):
        """Coefficient array padded with zeros (or truncated) to ``length`` entries."""
        c = self.coeffs[:length]
        if len(c) < length:
            pad = self.ring.zeros((length - len(c),) + self.batch_shape)
            c = np.concatenate([c, pad]) if len(c) else pad
        return c

    def __call__(self, x):
        if isinstance(x, RingElement):
            x = x.coeffs
        return _horner(self.ring, self.coeffs, self.batch_shape, np.asarray(x)[None])[0]

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.ring == other.ring and self.coeffs.shape == other.coeffs.shape
                and np.array_equal(self.coeffs, other.coeffs))

    def __add__(self, other):
        _same_ring(self, other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.ring, self.ring.add(self.padded(n), other.padded(n)))

    def __mul__(self, other):
        return poly_mul(self, other)

    def __repr__(self):
        return f"Poly(degree={self.degree}, batch={self.batch_shape}, ring={self.ring!r})"


def _same_ring(a, b):
    if a.ring != b.ring:
        raise ParamsMismatch(f"{a.ring!r} vs {b.ring!r}")


def as_points(ring, points):
    """Normalise points (ExceptionalSet, RingElements or an array) to shape (k, *elem)."""
    if isinstance(points, ExceptionalSet):
        if points.params != ring:
            raise ParamsMismatch("exceptional set belongs to another ring")
        return points.elements
    if isinstance(points, (list, tuple)) and points and isinstance(points[0], RingElement):
        if any(pt.ring != ring for pt in points):
            raise ParamsMismatch("point from another ring")
        return np.stack([pt.coeffs for pt in points])
    arr = ring.asarray(points)
    if arr.shape[1:] != ring.elem_shape:
        raise ParamsMismatch(f"points of shape {arr.shape} do not belong to {ring!r}")
    return arr


def _batch_of(ring, arr, lead=1):
    return arr.shape[lead:arr.ndim - ring.elem_ndim]


def _points_key(pts):
    return tuple(int(v) for v in pts.reshape(-1))


def _points_from_key(ring, key):
    return ring.asarray(np.array(key, dtype=object).reshape((-1,) + ring.elem_shape))


# -- array kernels -------------------------------------------------------------


def _horner(ring, coeffs, batch, pts):
    k = len(pts)
    x = pts.reshape((k,) + (1,) * len(batch) + ring.elem_shape)
    acc = ring.zeros((k,) + tuple(batch))
    for c in coeffs[::-1]:
        acc = ring.add(ring.mul(acc, x), c)
    return acc


def _mul_arrays(ring, a, b):
    ba, bb = _batch_of(ring, a), _batch_of(ring, b)
    batch = np.broadcast_shapes(ba, bb)
    if len(a) == 0 or len(b) == 0:
        return ring.zeros((0,) + batch)
    # equal batch rank so a[i] broadcasts against all of b
    a = a.reshape((len(a),) + (1,) * (len(batch) - len(ba)) + a.shape[1:])
    b = b.reshape((len(b),) + (1,) * (len(batch) - len(bb)) + b.shape[1:])
    if len(a) > len(b):
        a, b = b, a
    out = ring.zeros((len(a) + len(b) - 1,) + batch)
    kb = len(b)
    for i in range(len(a)):
        out[i:i + kb] = ring.add(out[i:i + kb], ring.mul(a[i], b))
    return out


def _rem_monic(ring, f, g):
    """Remainder of f (batched coefficients) modulo the monic scalar polynomial g."""
    kg = len(g)
    if len(f) < kg:
        return f
    batch = _batch_of(ring, f)
    low = g[:-1].reshape((kg - 1,) + (1,) * len(batch) + ring.elem_shape)
    r = np.array(f, copy=True)
    for i in range(len(f) - 1, kg - 2, -1):
        c = r[i]
        r[i - kg + 1:i] = ring.sub(r[i - kg + 1:i], ring.mul(low, c))
    return r[:kg - 1]


def _derivative(ring, f):
    if len(f) <= 1:
        return ring.zeros((0,) + _batch_of(ring, f))
    return np.stack([ring.mul_int(f[k], k) for k in range(1, len(f))])


def _build_tree(ring, pts):
    level = [np.stack([ring.neg(x), ring.one()]) for x in pts]
    levels = [level]
    while len(level) > 1:
        nxt = [_mul_arrays(ring, level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        levels.append(nxt)
        level = nxt
    return levels


@functools.lru_cache(maxsize=256)
def _tree(ring, key):
    return _build_tree(ring, _points_from_key(ring, key))


def _remainder_tree(ring, levels, f):
    rems = [_rem_monic(ring, f, levels[-1][0])]
    for lvl in range(len(levels) - 2, -1, -1):
        nodes = levels[lvl]
        rems = [_rem_monic(ring, rems[j // 2], nodes[j]) for j in range(len(nodes))]
    batch = _batch_of(ring, f)
    return np.stack([r[0] if len(r) else ring.zeros(batch) for r in rems])


def _eval_fast(ring, coeffs, pts):
    if len(pts) == 0:
        return ring.zeros((0,) + _batch_of(ring, coeffs))
    return _remainder_tree(ring, _tree(ring, _points_key(pts)), coeffs)


@functools.lru_cache(maxsize=256)
def _fast_weights(ring, key):
    levels = _tree(ring, key)
    dM = _derivative(ring, levels[-1][0])
    s = _remainder_tree(ring, levels, dM)
    try:
        return np.stack([ring.inverse(v) for v in s])
    except NonUnit as exc:
        raise NonExceptionalPoints("points are not pairwise exceptional") from exc


def _interp_fast(ring, pts, values):
    n = len(pts)
    batch = _batch_of(ring, values)
    key = _points_key(pts)
    levels = _tree(ring, key)
    weights = _fast_weights(ring, key)
    wb = weights.reshape((n,) + (1,) * len(batch) + ring.elem_shape)
    combos = list(ring.mul(wb, values)[:, None])
    for nodes in levels[:-1]:
        nxt = []
        for j in range(0, len(nodes) - 1, 2):
            left = _mul_arrays(ring, nodes[j + 1], combos[j])
            right = _mul_arrays(ring, nodes[j], combos[j + 1])
            size = max(len(left), len(right))
            nxt.append(ring.add(_pad(ring, left, size), _pad(ring, right, size)))
        if len(nodes) % 2:
            nxt.append(combos[-1])
        combos = nxt
    return _pad(ring, combos[0], n)


def _pad(ring, c, length):
    if len(c) >= length:
        return c[:length]
    return np.concatenate([c, ring.zeros((length - len(c),) + _batch_of(ring, c))])


def _check_exceptional(ring, pts):
    n = len(pts)
    if n < 2:
        return
    diffs = ring.sub(pts[:, None], pts[None, :])
    ok = ring.is_unit(diffs) | np.eye(n, dtype=bool)
    if not ok.all():
        i, j = np.argwhere(~ok)[0]
        raise NonExceptionalPoints(f"difference of points {i} and {j} is not a unit")


@functools.lru_cache(maxsize=256)
def _lagrange_basis(ring, key):
    """Row i holds the coefficients of lambda_i * prod_{j != i} (x - x_j)."""
    pts = _points_from_key(ring, key)
    _check_exceptional(ring, pts)
    n = len(pts)
    rows = []
    for i in range(n):
        num = ring.one()[None]
        denom = ring.one()
        for j in range(n):
            if j != i:
                num = _mul_arrays(ring, num, np.stack([ring.neg(pts[j]), ring.one()]))
                denom = ring.mul(denom, ring.sub(pts[i], pts[j]))
        lam = ring.inverse(denom)
        rows.append(ring.mul(num, lam))
    return np.stack(rows)


def _interp_naive(ring, pts, values):
    n = len(pts)
    batch = _batch_of(ring, values)
    basis = _lagrange_basis(ring, _points_key(pts))
    out = ring.zeros((n,) + batch)
    shape = (n,) + (1,) * len(batch) + ring.elem_shape
    for i in range(n):
        out = ring.add(out, ring.mul(basis[i].reshape(shape), values[i]))
    return out


def _resolve(mode, k):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == "auto":
        return "fast" if k >= FAST_THRESHOLD else "naive"
    return mode


# -- public API ----------------------------------------------------------------


def eval_many(f, points, mode="auto"):
    """Values ``[f(x_1), ..., f(x_k)]`` as an array of shape (k, *batch, *elem)."""
    ring = f.ring
    pts = as_points(ring, points)
    if _resolve(mode, len(pts)) == "naive":
        return _horner(ring, f.coeffs, f.batch_shape, pts)
    if f.is_zero():
        return ring.zeros((len(pts),) + f.batch_shape)
    return _eval_fast(ring, f.coeffs, pts)


def interpolate(points, values, mode="auto", ring=None):
    """The unique polynomial of degree < n through ``(points[i], values[i])``."""
    if ring is None:
        if isinstance(points, ExceptionalSet):
            ring = points.params
        elif points and isinstance(points[0], RingElement):
            ring = points[0].ring
        else:
            raise ValueError("ring must be given for raw point arrays")
    pts = as_points(ring, points)
    if isinstance(values, (list, tuple)):
        values = np.stack([v.coeffs if isinstance(v, RingElement) else ring.asarray(v) for v in values])
    values = ring.asarray(values)
    if len(values) != len(pts):
        raise LengthMismatch(f"{len(pts)} points but {len(values)} values")
    if len(pts) == 0:
        return Poly(ring, values)
    if _resolve(mode, len(pts)) == "naive":
        return Poly(ring, _interp_naive(ring, pts, values))
    return Poly(ring, _interp_fast(ring, pts, values))


def poly_mul(a, b):
    _same_ring(a, b)
    return Poly(a.ring, _mul_arrays(a.ring, a.coeffs, b.coeffs))


def product_tree(ring, points):
    """Levels of the subproduct tree, leaves first; ``tree[-1][0]`` is prod (x - x_i)."""
    pts = as_points(ring, points)
    if len(pts) == 0:
        return [[Poly(ring, ring.one()[None])]]
    return [[Poly(ring, node) for node in level] for level in _tree(ring, _points_key(pts))]
