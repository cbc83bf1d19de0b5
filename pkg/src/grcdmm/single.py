"""Single matrix products over GR(p^e, d) run through extension-ring EP codes.

plain
    Embed A and B into GR_m (EP codes need N exceptional points, so the ring
    must be extended until p^(dm) >= N) and run one EP session.  Every
    coefficient shipped carries m base elements of which only one is data.
rmfe_i
    Split the inner dimension into n slices, A = [A_1 ... A_n],
    B = [B_1; ...; B_n], batch the n slice products with an RMFE and add
    them up.  Uploads shrink by a factor n, downloads stay put.
rmfe_ii
    Split the outer dimensions.  With one level (``levels=1``) A is only
    embedded and B's n column blocks are packed, so the workers return
    packed [A B_1 ... A B_n] and downloads shrink by n.  With two levels
    A's row blocks are also packed, through a second RMFE over the first
    one's extension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .batch import run_session
from .cluster import Cluster
from .ep import EpParams, assemble, partition
from .errors import IndivisibleDimensions, NonBaseResult, SchemeMismatch, ShapeMismatch
from .metrics import Metrics
from .rmfe import build_rmfe
from .ring import make_extension

SCHEMES = ("plain", "rmfe_i", "rmfe_ii", "batch")


def default_degree(p, d, N):
    """Smallest m with p^(d m) >= N: the least extension holding N exceptional points."""
    m = 1
    while p ** (d * m) < N:
        m += 1
    return m


def default_width(base, m):
    """Widest interpolation RMFE into degree m (a point at infinity allowed)."""
    return max(1, min((m + 1) // 2, base.residue_size + 1))


@dataclass(frozen=True)
class SingleConfig:
    scheme: str
    base: object
    N: int
    u: int = 1
    v: int = 1
    w: int = 1
    n: int = 1
    m: int | None = None
    levels: int = 1
    m_inner: int | None = None
    use_infinity: bool | None = None
    packed_sum: bool = False
    mode: str = "fast"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.levels not in (1, 2):
            raise ValueError("levels must be 1 or 2")
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def _min_degree(self):
        return default_degree(self.base.p, self.base.d, self.N)

    def _infinity(self, ring):
        if self.use_infinity is None:
            return self.n > ring.residue_size
        return self.use_infinity

    @cached_property
    def degrees(self):
        """Extension degrees per tower level, innermost first."""
        if self.scheme == "plain":
            return (self.m or self._min_degree,)
        if self.scheme != "rmfe_ii" or self.levels == 1:
            return (self.m or max(self._min_degree, 2 * self.n - 1),)
        if self.m is not None:
            m1 = self.m_inner or math.isqrt(self.m)
            if self.m % m1 or (self.m_inner is None and m1 * m1 != self.m):
                raise ValueError(f"m = {self.m} has no level split; give m_inner")
            return (m1, self.m // m1)
        m1 = self.m_inner or 2 * self.n - 1
        return (m1, max(2 * self.n - 1, -(-self._min_degree // m1)))

    @property
    def m_total(self):
        return math.prod(self.degrees)

    @cached_property
    def rmfe(self):
        """The (inner) RMFE over the base ring; None for plain."""
        if self.scheme == "plain":
            return None
        return build_rmfe(self.base, self.n, self.degrees[0], self._infinity(self.base))

    @cached_property
    def outer_rmfe(self):
        if self.scheme != "rmfe_ii" or self.levels == 1:
            return None
        mid = self.rmfe.ext
        return build_rmfe(mid, self.n, self.degrees[1], self._infinity(mid))

    @cached_property
    def ring(self):
        """The ring the EP code runs over."""
        if self.outer_rmfe is not None:
            return self.outer_rmfe.ext
        if self.rmfe is not None:
            return self.rmfe.ext
        return make_extension(self.base, self.degrees[0])

    @cached_property
    def ep(self):
        return EpParams(self.u, self.v, self.w, self.N, self.ring)

    def ep_dims(self, t, r, s):
        """Matrix dimensions inside the EP session."""
        n = self.n
        if self.scheme in ("plain", "batch"):
            return t, r, s
        if self.scheme == "rmfe_i":
            return t, r // n, s
        if self.levels == 1:
            return t, r, s // n
        return t // n, r, s // n

    def check_dims(self, t, r, s):
        n = self.n
        need = {"plain": (1, 1, 1), "batch": (1, 1, 1), "rmfe_i": (1, n, 1)}.get(self.scheme)
        if need is None:
            need = (1, 1, n) if self.levels == 1 else (n, 1, n)
        for name, size, k in zip("trs", (t, r, s), need):
            if size % k:
                raise IndivisibleDimensions(f"{name}={size} is not divisible by n={k}")
        self.ep.check_dims(*self.ep_dims(t, r, s))

    def block_multiples(self):
        """(t, r, s) must be multiples of these for the scheme to apply without padding."""
        n, u, v, w = self.n, self.u, self.v, self.w
        if self.scheme in ("plain", "batch"):
            return u, w, v
        if self.scheme == "rmfe_i":
            return u, n * w, v
        if self.levels == 1:
            return u, w, n * v
        return n * u, w, n * v


def _dims(A, B):
    t, r = A.shape[:2]
    r2, s = B.shape[:2]
    if r != r2:
        raise ShapeMismatch(f"inner dimensions differ: {r} vs {r2}")
    return t, r, s


def _prepare(A, B, config, scheme, cluster, metrics):
    if config.scheme != scheme:
        raise SchemeMismatch(f"config is for {config.scheme!r}, not {scheme!r}")
    base = config.base
    A, B = base.asarray(A), base.asarray(B)
    dims = _dims(A, B)
    config.check_dims(*dims)
    if cluster is None:
        cluster = Cluster(config.N)
    if metrics is None:
        metrics = Metrics()
    metrics.scheme = metrics.scheme or scheme
    return A, B, dims, cluster, metrics


def plain_ep(A, B, config, cluster=None, metrics=None):
    A, B, dims, cluster, metrics = _prepare(A, B, config, "plain", cluster, metrics)
    ring = config.ring

    def project(C):
        top = ring.coeffs_first(C)
        if np.any(top[1:]):
            raise NonBaseResult("decoded product has nonzero higher tower coefficients")
        return top[0]

    return run_session(lambda: (ring.embed_array(A), ring.embed_array(B)), project,
                       config.ep, dims, cluster, metrics, config.mode)


def single_multiply_I(A, B, config, cluster=None, metrics=None):
    A, B, dims, cluster, metrics = _prepare(A, B, config, "rmfe_i", cluster, metrics)
    rmfe, base = config.rmfe, config.base
    As = partition(A, 1, config.n)[0]
    Bs = partition(B, config.n, 1)[:, 0]

    def unpack(C):
        if config.packed_sum:
            return rmfe.psi_sum(C)
        parts = rmfe.psi_matrix(C)
        out = parts[0]
        for part in parts[1:]:
            out = base.add(out, part)
        return out

    return run_session(lambda: (rmfe.phi_matrix(As), rmfe.phi_matrix(Bs)), unpack,
                       config.ep, config.ep_dims(*dims), cluster, metrics, config.mode)


def single_multiply_II(A, B, config, cluster=None, metrics=None):
    A, B, dims, cluster, metrics = _prepare(A, B, config, "rmfe_ii", cluster, metrics)
    n, inner, outer = config.n, config.rmfe, config.outer_rmfe
    Bs = partition(B, 1, n)[0]

    if outer is None:
        def pack():
            return inner.phi_matrix(np.stack([A] * n)), inner.phi_matrix(Bs)

        def unpack(C):
            return assemble(inner.psi_matrix(C)[None])
    else:
        if outer.base != inner.ext:
            raise SchemeMismatch("the outer RMFE must be built over the inner extension")
        As = partition(A, n, 1)[:, 0]

        def pack():
            packed_a = np.stack([inner.phi_matrix(np.stack([Ai] * n)) for Ai in As])
            packed_b = inner.phi_matrix(Bs)
            return outer.phi_matrix(packed_a), outer.phi_matrix(np.stack([packed_b] * n))

        def unpack(C):
            rows = outer.psi_matrix(C)  # row i: A_i [B_1 ... B_n], packed by phi_1
            grid = inner.psi_matrix(rows)  # grid[j, i] = A_i B_j
            return assemble(np.swapaxes(grid, 0, 1))

    return run_session(pack, unpack, config.ep, config.ep_dims(*dims), cluster, metrics, config.mode)


def multiply(A, B, config, cluster=None, metrics=None):
    run = {"plain": plain_ep, "rmfe_i": single_multiply_I, "rmfe_ii": single_multiply_II}
    if config.scheme not in run:
        raise SchemeMismatch(f"{config.scheme!r} is not a single-product scheme")
    return run[config.scheme](A, B, config, cluster, metrics)


def ep_cost(dims, u, v, w, N, m):
    """Base elements on the wire for one EP session over a degree-m extension."""
    t, r, s = dims
    R = u * v * w + w - 1
    return {
        "upload": N * (t * r // (u * w) + r * s // (w * v)) * m,
        "download": R * (t * s // (u * v)) * m,
    }


def cost_profile(scheme, dims, config):
    """Closed-form wire counts of one run, in GR(p^e, d) elements.

    For ``batch`` the totals belong to one session of n products and the
    per-multiplication shares are added as exact fractions.
    """
    if scheme != config.scheme:
        raise SchemeMismatch(f"config is for {config.scheme!r}, not {scheme!r}")
    cost = ep_cost(config.ep_dims(*dims), config.u, config.v, config.w, config.N, config.m_total)
    if scheme == "batch":
        cost["upload_per_multiplication"] = Fraction(cost["upload"], config.n)
        cost["download_per_multiplication"] = Fraction(cost["download"], config.n)
    return cost
