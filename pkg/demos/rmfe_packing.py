"""Pack two products of Z_4 elements into one product in GR(4, 3) and back."""

import numpy as np

from grcdmm import build_rmfe, make_ring

Z4 = make_ring(2, 2, 1)
scheme = build_rmfe(Z4, 2, 3)
print("extension:", scheme.ext)
print("interpolation points:", [str(x) for x in scheme.points])

x = Z4.asarray([[3], [2]])
y = Z4.asarray([[3], [3]])
packed = scheme.ext.mul(scheme.phi(x), scheme.phi(y))
print("phi(x) =", scheme.ext.format(scheme.phi(x)))
print("phi(y) =", scheme.ext.format(scheme.phi(y)))
print("psi(phi(x) phi(y)) =", scheme.psi(packed)[:, 0].tolist())
print("x * y coordinatewise =", Z4.mul(x, y)[:, 0].tolist())

# a whole matrix batch goes through the same maps entry by entry
rng = np.random.default_rng(0)
As, Bs = Z4.random((2, 3, 3), rng), Z4.random((2, 3, 3), rng)
C = scheme.psi_matrix(scheme.ext.matmul(scheme.phi_matrix(As), scheme.phi_matrix(Bs)))
print("batch products recovered:", all(np.array_equal(C[k], Z4.matmul(As[k], Bs[k])) for k in range(2)))
