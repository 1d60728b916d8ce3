"""Independent reference computations used by the tests.

None of these call into the package: they are brute-force enumerations,
grids and plain loops, kept deliberately naive.
"""

import itertools

import numpy as np


def l2_norm_angular_grid(A, points=200_000):
    """``max ||A u||_2`` over a dense grid of unit vectors in the plane."""
    theta = np.linspace(0.0, 2.0 * np.pi, points, endpoint=False)
    U = np.stack([np.cos(theta), np.sin(theta)])
    return float(np.sqrt(((A @ U) ** 2).sum(axis=0)).max())


def l1_norm_vertices(A):
    """``max ||A e||_1`` over the vertices ``+-e_i`` of the L1 unit ball."""
    n = A.shape[1]
    return max(float(np.abs(A @ np.eye(n)[:, i]).sum()) for i in range(n))


def linf_norm_vertices(A):
    """``max ||A s||_inf`` over all sign vectors (vertices of the cube)."""
    n = A.shape[1]
    best = 0.0
    for signs in itertools.product((-1.0, 1.0), repeat=n):
        best = max(best, float(np.abs(A @ np.array(signs)).max()))
    return best


def iterate_plain(ops, x0, steps):
    """Run ``x <- A_k x + b_k`` cycling through ``ops`` given as ``(A, b)`` pairs."""
    x = np.array(x0, dtype=float)
    out = [x.copy()]
    for k in range(steps):
        A, b = ops[k % len(ops)]
        x = A @ x + b
        out.append(x.copy())
    return np.array(out)


def brute_force_fixed_point(A, b, steps=10_000, x0=None):
    """Fixed point of a contraction by plain repeated application."""
    x = np.zeros(len(b)) if x0 is None else np.array(x0, dtype=float)
    for _ in range(steps):
        x = A @ x + b
    return x


def projector_from_definition(M, N):
    """``P`` with ``P M = M`` and ``P N = 0``, solved column by column.

    Writes every standard basis vector as ``e_i = M a + N c`` and keeps ``M a``.
    """
    n = M.shape[0]
    basis = np.hstack([M, N])
    P = np.zeros((n, n))
    for i in range(n):
        coeffs = np.linalg.lstsq(basis, np.eye(n)[:, i], rcond=None)[0]
        P[:, i] = M @ coeffs[: M.shape[1]]
    return P
