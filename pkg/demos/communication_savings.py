"""Master upload and download for plain EP and the two RMFE schemes at n = 2."""

import numpy as np

from grcdmm import Metrics, SingleConfig, make_ring, multiply

base = make_ring(2, 64, 1)
rng = np.random.default_rng(2)
size = 64
A, B = base.random((size, size), rng), base.random((size, size), rng)

for N, m, (u, v, w) in [(8, 3, (2, 2, 1)), (16, 4, (2, 2, 2))]:
    print(f"N = {N}, GR(2^64, {m}), (u, v, w) = {(u, v, w)}, t = r = s = {size}")
    configs = {
        "plain": SingleConfig("plain", base, N, u, v, w, m=m),
        "rmfe_i": SingleConfig("rmfe_i", base, N, u, v, w, n=2, m=m),
        "rmfe_ii": SingleConfig("rmfe_ii", base, N, u, v, w, n=2, m=m),
    }
    baseline = None
    for name, config in configs.items():
        metrics = Metrics()
        C = multiply(A, B, config, metrics=metrics)
        assert np.array_equal(C, base.matmul(A, B))
        up, down = metrics.upload_base_elements, metrics.download_base_elements
        baseline = baseline or (up, down)
        print(f"  {name:8s} upload {up:7d} ({up / baseline[0]:.2f})  download {down:6d} ({down / baseline[1]:.2f})"
              f"  worker block {metrics.worker_product_dims}")
