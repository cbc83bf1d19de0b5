"""Reverse multiplication friendly embeddings (RMFEs) over Galois rings.

An (n, m)-RMFE over a ring B is a pair of B-linear maps

    phi: B^n -> GR_m,    psi: GR_m -> B^n,   psi(phi(x) * phi(y)) = x * y

(the right-hand side coordinatewise).  The construction here is the
interpolation one: phi(x) is the coefficient vector of the degree < n
polynomial f_x with f_x(a_i) = x_i on exceptional points a_i of B, read as an
element of GR_m = B[y]/(F).  Because deg(f_x f_y) <= 2n - 2 < m the product
in GR_m is never reduced, so psi just evaluates the coefficient vector at the
same points.  One slot may sit at infinity, where phi reads/writes the
degree n - 1 coefficient and psi reads the degree 2n - 2 coefficient.

Arrays follow the ring layout: phi takes ``(n, *batch, *base_elem)`` and
returns ``(*batch, *ext_elem)``; psi goes the other way.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegreeTooSmall, LengthMismatch, ParamsMismatch, ShapeMismatch, TowerMismatch, WidthTooLarge
from .poly import Poly, eval_many, interpolate
from .ring import RingElement, exceptional_set, make_extension


class _Infinity:
    def __repr__(self):
        return "∞"


INFINITY = _Infinity()


class _Scheme:
    """Scalar and matrix conveniences shared by simple and concatenated schemes."""

    def phi_elements(self, x):
        """phi of a length-n sequence of RingElements (or ints) as one RingElement."""
        x = list(x)
        if len(x) != self.n:
            raise LengthMismatch(f"expected {self.n} inputs, got {len(x)}")
        arr = []
        for v in x:
            if isinstance(v, RingElement):
                if v.ring != self.base:
                    raise ParamsMismatch(f"{v.ring!r} is not the base ring {self.base!r}")
                arr.append(v.coeffs)
            else:
                arr.append(self.base.from_int(int(v)))
        return RingElement(self.ext, self.phi(np.stack(arr)))

    def psi_elements(self, u):
        if not isinstance(u, RingElement) or u.ring != self.ext:
            raise ParamsMismatch(f"expected an element of {self.ext!r}")
        return [RingElement(self.base, c) for c in self.psi(u.coeffs)]

    def phi_matrix(self, mats):
        """Pack n equally shaped base matrices entrywise into one matrix over GR_m."""
        if isinstance(mats, np.ndarray):
            stack = self.base.asarray(mats)
        else:
            mats = [self.base.asarray(M) for M in mats]
            if len({M.shape for M in mats}) > 1:
                raise ShapeMismatch("matrices in one batch must share a shape")
            stack = np.stack(mats) if mats else self.base.zeros((0,))
        if len(stack) != self.n:
            raise LengthMismatch(f"expected {self.n} matrices, got {len(stack)}")
        return self.phi(stack)

    def psi_matrix(self, M):
        """Unpack a matrix over GR_m into n base matrices, stacked on a new first axis."""
        return self.psi(self.ext.asarray(M))

    def star(self, x, y):
        """Coordinatewise product in B^n (the right-hand side of the RMFE identity)."""
        return self.base.mul(x, y)


@dataclass(frozen=True, eq=False)
class RmfeScheme(_Scheme):
    """Interpolation RMFE of width ``n`` into the degree-``m`` extension of ``base``."""

    base: object
    n: int
    m: int
    use_infinity: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("width must be positive")
        if self.m < 2 * self.n - 1:
            raise DegreeTooSmall(f"an ({self.n}, m)-RMFE needs m >= {2 * self.n - 1}, got {self.m}")
        q = self.base.residue_size
        if self.finite_count > q:
            budget = q + 1 if self.use_infinity else q
            raise WidthTooLarge(f"at most {budget} points available over {self.base!r}, asked for {self.n}")

    @property
    def finite_count(self):
        return self.n - 1 if self.use_infinity else self.n

    @cached_property
    def ext(self):
        return make_extension(self.base, self.m)

    @cached_property
    def finite_points(self):
        return exceptional_set(self.base, self.finite_count).elements

    @property
    def points(self):
        pts = [RingElement(self.base, a) for a in self.finite_points]
        return pts + [INFINITY] if self.use_infinity else pts

    @cached_property
    def _power_sums(self):
        """Linear functional u -> sum_i psi(u)_i as one weight per coefficient."""
        base = self.base
        weights = base.zeros((self.m,))
        for a in self.finite_points:
            power = base.one()
            for j in range(self.m):
                weights[j] = base.add(weights[j], power)
                power = base.mul(power, a)
        if self.use_infinity:
            k = 2 * self.n - 2
            weights[k] = base.add(weights[k], base.one())
        return weights

    def phi(self, x):
        base, n = self.base, self.n
        x = base.asarray(x)
        if len(x) != n:
            raise LengthMismatch(f"expected {n} slots on the first axis, got {len(x)}")
        batch = x.shape[1:x.ndim - base.elem_ndim]
        k = self.finite_count
        if self.use_infinity:
            top = x[-1]
            lead = base.pow(self.finite_points, n - 1).reshape((k,) + (1,) * len(batch) + base.elem_shape)
            rhs = base.sub(x[:k], base.mul(lead, top))
            low = interpolate(self.finite_points, rhs, mode="naive", ring=base).padded(n - 1)
            coeffs = np.concatenate([low, top[None]])
        else:
            coeffs = interpolate(self.finite_points, x, mode="naive", ring=base).padded(n)
        pad = base.zeros((self.m - n,) + batch)
        return self.ext.coeffs_last(np.concatenate([coeffs, pad]))

    def psi(self, u):
        base = self.base
        u = self.ext.asarray(u)
        coeffs = self.ext.coeffs_first(u)
        out = eval_many(Poly(base, coeffs), self.finite_points, mode="naive")
        if self.use_infinity:
            out = np.concatenate([out, coeffs[2 * self.n - 2][None]])
        return out

    def psi_sum(self, u):
        """sum_i psi(u)_i, computed as a single linear functional of u's coefficients."""
        base = self.base
        coeffs = self.ext.coeffs_first(self.ext.asarray(u))
        acc = base.zeros(coeffs.shape[1:coeffs.ndim - base.elem_ndim])
        for j, wj in enumerate(self._power_sums):
            if np.any(wj):
                acc = base.add(acc, base.mul(coeffs[j], wj))
        return acc

    def __repr__(self):
        pts = ", ".join(str(p) for p in self.points)
        return f"RmfeScheme(({self.n}, {self.m}) over {self.base!r}, points [{pts}])"


@dataclass(frozen=True, eq=False)
class ConcatenatedRmfe(_Scheme):
    """(n1 n2, m1 m2)-RMFE from an outer scheme over the inner scheme's extension."""

    outer: object
    inner: object

    def __post_init__(self):
        if self.outer.base != self.inner.ext:
            raise TowerMismatch(f"outer base {self.outer.base!r} is not inner extension {self.inner.ext!r}")

    @property
    def base(self):
        return self.inner.base

    @property
    def ext(self):
        return self.outer.ext

    @property
    def n(self):
        return self.outer.n * self.inner.n

    @property
    def m(self):
        return self.outer.m * self.inner.m

    def phi(self, x):
        n1, n2 = self.outer.n, self.inner.n
        x = self.base.asarray(x)
        if len(x) != n1 * n2:
            raise LengthMismatch(f"expected {n1 * n2} slots on the first axis, got {len(x)}")
        blocks = np.swapaxes(x.reshape((n1, n2) + x.shape[1:]), 0, 1)
        return self.outer.phi(self.inner.phi(blocks))

    def psi(self, u):
        n1, n2 = self.outer.n, self.inner.n
        mid = self.outer.psi(u)
        out = np.swapaxes(self.inner.psi(mid), 0, 1)
        return out.reshape((n1 * n2,) + out.shape[2:])

    def psi_sum(self, u):
        return self.inner.psi_sum(self.outer.psi_sum(u))

    def __repr__(self):
        return f"ConcatenatedRmfe(({self.n}, {self.m}), outer={self.outer!r}, inner={self.inner!r})"


def build_rmfe(base, n, m, use_infinity=False):
    return RmfeScheme(base, n, m, use_infinity)


def concatenate(outer, inner):
    return ConcatenatedRmfe(outer, inner)


def phi(scheme, x):
    return scheme.phi_elements(x)


def psi(scheme, u):
    return scheme.psi_elements(u)


def phi_matrix(scheme, mats):
    return scheme.phi_matrix(mats)


def psi_matrix(scheme, M):
    return scheme.psi_matrix(M)
