"""One EP session over GR(2^64, 3) with eight workers, some of them slow or dead."""

import numpy as np

from grcdmm import Cluster, EpParams, decode, encode, gather, make_extension, make_ring, simulate
from grcdmm.errors import InsufficientResponses

base = make_ring(2, 64, 1)
ring = make_extension(base, 3)
params = EpParams(u=2, v=2, w=1, N=8, ring=ring)
print(f"N = {params.N} workers, recovery threshold R = {params.R}")

rng = np.random.default_rng(1)
A = ring.embed_array(base.random((16, 16), rng))
B = ring.embed_array(base.random((16, 16), rng))
tasks = encode(A, B, params)

for failure_prob in (0.0, 0.3, 0.85):
    cluster = Cluster(8, jitter=1.0, failure_prob=failure_prob, seed=5)
    responses = gather(simulate(tasks, cluster), params.R)
    ids = [r.worker_id for r in responses]
    try:
        ok = np.array_equal(decode(responses, params, (16, 16, 16)), ring.matmul(A, B))
        print(f"failure_prob {failure_prob}: first answers from {ids}, product correct: {ok}")
    except InsufficientResponses as exc:
        print(f"failure_prob {failure_prob}: only {ids} answered, {exc}")
