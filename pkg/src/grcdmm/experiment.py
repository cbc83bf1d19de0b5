"""End-to-end experiment runs: inputs, padding, repeats, verification, metrics."""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .batch import BatchSession, batch_multiply
from .cluster import Cluster
from .ep import preset
from .errors import BatchLengthMismatch, VerificationFailed
from .matfile import matrix_to_bytes
from .metrics import Metrics, amortized_report, average
from .ring import make_ring
from .single import SingleConfig, default_degree, default_width, multiply

# harness scheme name -> (engine scheme, code family preset)
SCHEME_ALIASES = {
    "plain": ("plain", "entangled"),
    "matdot": ("plain", "matdot"),
    "poly": ("plain", "polynomial"),
    "rmfe_i": ("rmfe_i", "entangled"),
    "rmfe_ii": ("rmfe_ii", "entangled"),
    "batch": ("batch", "entangled"),
}


def resolve_seed(seed):
    """Explicit seed, else $CDMM_SEED, else 0."""
    if seed is not None:
        return int(seed)
    return int(os.environ.get("CDMM_SEED", 0))


@dataclass
class ExperimentConfig:
    scheme: str
    t: int
    r: int
    s: int
    N: int
    p: int = 2
    e: int = 64
    d: int = 1
    u: int | None = None
    v: int | None = None
    w: int | None = None
    m: int | None = None
    n: int | None = None
    levels: int = 1
    m_inner: int | None = None
    batch_size: int | None = None
    straggler_prob: float = 0.0
    jitter: float = 0.0
    base_latency: float = 1.0
    seed: int | None = None
    repeat: int = 1
    verify: bool = False
    packed_sum: bool = False

    def __post_init__(self):
        self.scheme = self.scheme.replace("-", "_")
        if self.scheme not in SCHEME_ALIASES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.repeat < 1:
            raise ValueError("repeat must be at least 1")

    @property
    def base(self):
        return make_ring(self.p, self.e, self.d)

    def single_config(self):
        engine, family = SCHEME_ALIASES[self.scheme]
        u, v, w = preset(family, self.u, self.v, self.w)
        n = self.n
        if n is None:
            if engine == "plain":
                n = 1
            else:
                m = self.m_inner if engine == "rmfe_ii" and self.levels == 2 else self.m
                n = default_width(self.base, m or default_degree(self.p, self.d, self.N))
        return SingleConfig(engine, self.base, self.N, u, v, w, n=n, m=self.m, levels=self.levels,
                            m_inner=self.m_inner, packed_sum=self.packed_sum)

    def cluster(self, k):
        return Cluster(self.N, self.base_latency, self.jitter, self.straggler_prob, seed=(resolve_seed(self.seed), k))

    def echo(self, single):
        out = {
            "scheme": self.scheme, "p": self.p, "e": self.e, "d": self.d,
            "t": self.t, "r": self.r, "s": self.s,
            "u": single.u, "v": single.v, "w": single.w, "N": self.N,
            "m": single.m_total, "degrees": list(single.degrees),
            "n": single.n, "repeat": self.repeat, "seed": resolve_seed(self.seed),
            "straggler_prob": self.straggler_prob, "jitter": self.jitter,
        }
        if single.scheme == "rmfe_ii":
            out["levels"] = self.levels
        if single.scheme == "batch":
            out["batch_size"] = self.batch_size or single.n
        return out


@dataclass
class ExperimentResult:
    metrics: Metrics
    checksum: str
    verified: bool | None
    product: object
    amortized: dict | None = None

    def to_dict(self):
        out = self.metrics.to_dict()
        out["checksum"] = self.checksum
        out["verified"] = self.verified
        if self.amortized is not None:
            out["amortized"] = {k: str(v) if isinstance(v, Fraction) else v for k, v in self.amortized.items()}
        return out


def _pad(ring, M, rows, cols):
    out = ring.zeros((rows, cols))
    out[:M.shape[0], :M.shape[1]] = M
    return out


def _round_up(x, k):
    return -(-x // k) * k


def padded_dims(t, r, s, config):
    mt, mr, ms = config.block_multiples()
    return _round_up(t, mt), _round_up(r, mr), _round_up(s, ms)


def pad_and_multiply(A, B, config, cluster=None, metrics=None):
    """A B for any dimensions: zero-pad to the scheme's block multiples, then truncate."""
    ring = config.base
    A, B = ring.asarray(A), ring.asarray(B)
    t, r = A.shape[:2]
    s = B.shape[1]
    tp, rp, sp = padded_dims(t, r, s, config)
    if (tp, rp, sp) != (t, r, s):
        A, B = _pad(ring, A, tp, rp), _pad(ring, B, rp, sp)
    return multiply(A, B, config, cluster, metrics)[:t, :s]


def batch_pad_and_multiply(As, Bs, config, cluster=None, metrics=None):
    """Any number of products through width-n batch sessions (zero pairs fill the last one)."""
    if len(As) != len(Bs):
        raise BatchLengthMismatch(f"{len(As)} left and {len(Bs)} right matrices")
    ring, n = config.base, config.n
    t, r = As[0].shape[:2]
    s = Bs[0].shape[1]
    tp, rp, sp = padded_dims(t, r, s, config)
    As = [_pad(ring, ring.asarray(A), tp, rp) for A in As]
    Bs = [_pad(ring, ring.asarray(B), rp, sp) for B in Bs]
    total = Metrics(scheme="batch") if metrics is None else metrics
    outputs = []
    for lo in range(0, len(As), n):
        chunk_a, chunk_b = As[lo:lo + n], Bs[lo:lo + n]
        while len(chunk_a) < n:
            chunk_a.append(ring.zeros((tp, rp)))
            chunk_b.append(ring.zeros((rp, sp)))
        session = BatchSession(config.rmfe, config.ep, (tp, rp, sp), Metrics(scheme="batch"))
        outputs.extend(batch_multiply(chunk_a, chunk_b, session, cluster, config.mode))
        total.merge(session.metrics)
    count = len(As)
    return np.stack(outputs[:count])[:, :t, :s], total


def _inputs(config, ring, rng):
    count = (config.batch_size or 1) if config.scheme == "batch" else 1
    As = [ring.random((config.t, config.r), rng) for _ in range(count)]
    Bs = [ring.random((config.r, config.s), rng) for _ in range(count)]
    return As, Bs


def checksum(ring, mats):
    h = hashlib.sha256()
    for M in mats:
        h.update(matrix_to_bytes(ring, M))
    return h.hexdigest()


def run_experiment(config, A=None, B=None):
    """Run ``config.repeat`` times; inputs are seeded-random unless given.

    For the batch scheme ``A`` and ``B`` are sequences of matrices.
    """
    single = config.single_config()
    ring = single.base
    if config.scheme == "batch" and config.batch_size is None:
        config.batch_size = single.n
    if A is None:
        As, Bs = _inputs(config, ring, np.random.default_rng(resolve_seed(config.seed)))
    elif config.scheme == "batch":
        As, Bs = list(A), list(B)
    else:
        As, Bs = [A], [B]
    runs = []
    products = None
    for k in range(config.repeat):
        metrics = Metrics(scheme=config.scheme)
        if config.scheme == "batch":
            products, metrics = batch_pad_and_multiply(As, Bs, single, config.cluster(k), metrics)
            metrics.scheme = config.scheme
        else:
            products = [pad_and_multiply(As[0], Bs[0], single, config.cluster(k), metrics)]
        runs.append(metrics)
    verified = None
    if config.verify:
        for A_k, B_k, C_k in zip(As, Bs, products):
            if not np.array_equal(C_k, ring.matmul(ring.asarray(A_k), ring.asarray(B_k))):
                raise VerificationFailed("distributed product differs from the schoolbook product")
        verified = True
    metrics = average(runs)
    metrics.config = config.echo(single)
    amortized = None
    if config.scheme == "batch":
        amortized = amortized_report(metrics, len(As))
    return ExperimentResult(metrics, checksum(ring, products), verified, products, amortized)
