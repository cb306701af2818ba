"""Independent reference values frozen into the C++ tests.

Run with: python3 tests/oracles/frozen_values.py
Uses scipy.linalg (expm, sqrtm) on explicitly built block-circulant
matrices; nothing here shares code with the library.
"""

import numpy as np
from scipy.linalg import expm, sqrtm


def bcirc(slices):
    p = len(slices)
    n1, n2 = slices[0].shape
    out = np.zeros((n1 * p, n2 * p), dtype=complex)
    for bi in range(p):
        for bj in range(p):
            out[bi * n1:(bi + 1) * n1, bj * n2:(bj + 1) * n2] = slices[(bi - bj) % p]
    return out


def t_exp_identity(slices):
    p = len(slices)
    n = slices[0].shape[0]
    col = expm(bcirc(slices))[:, :n]
    return [col[k * n:(k + 1) * n, :] for k in range(p)]


def show(name, values):
    print(name)
    for v in np.ravel(np.real(values)):
        print(f"    {float(v)!r},")


# Nonnormal 3x3 matrix for expm.
m = np.array([[1.0, 2.0, 0.0], [0.0, -1.0, 3.0], [0.5, 0.0, 0.2]])
show("expm(m), row-major", expm(m))

# Symmetric positive definite matrix for sqrtm.
s = np.array([[4.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]])
show("sqrtm(s), row-major", sqrtm(s).real)

# 2x2x3 real tensor, exp(A) * I.
a = [np.array([[0.5, -1.0], [0.25, 0.0]]),
     np.array([[0.0, 0.3], [-0.2, 0.1]]),
     np.array([[0.1, 0.0], [0.4, -0.3]])]
f = t_exp_identity(a)
show("t_exp(a) slices, each row-major", np.array([x.real for x in f]))

# 3-node, 2-layer network: layer 1 has edge 1-2, layer 2 has edge 2-3.
l1 = np.zeros((3, 3)); l1[0, 1] = l1[1, 0] = 1
l2 = np.zeros((3, 3)); l2[1, 2] = l2[2, 1] = 1
g = t_exp_identity([l1, l2])
show("toy network exp(A) slices, each row-major", np.array([x.real for x in g]))
