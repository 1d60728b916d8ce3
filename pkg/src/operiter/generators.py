"""Seeded random operators, projectors and sequences for randomized scenarios."""

import numpy as np

from .operators import AffineOperator, Convergent, Periodic, operator_norm
from .projectors import ConvergentProjectors, random_oblique_projector
from .space import NormKind


def random_matrix_with_norm(rng, dim, norm, kind=NormKind.L2):
    """Random ``dim x dim`` matrix whose induced norm equals ``norm``."""
    kind = NormKind.parse(kind)
    if kind is NormKind.L2:
        u, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        v, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        s = rng.uniform(0.0, 1.0, dim)
        s *= norm / s.max()
        return (u * s) @ v.T
    g = rng.standard_normal((dim, dim))
    return g * (norm / operator_norm(g, kind))


def random_affine(rng, dim, norm, kind=NormKind.L2, offset_scale=1.0):
    matrix = random_matrix_with_norm(rng, dim, norm, kind)
    return AffineOperator(matrix, offset_scale * rng.standard_normal(dim))


def random_convergent(rng, dim, limit_norm, rate, kind=NormKind.L2, perturbation_norm=0.5, offset_scale=1.0):
    """``Convergent`` sequence with a limit of the given norm."""
    limit = random_affine(rng, dim, limit_norm, kind, offset_scale)
    perturbation = random_affine(rng, dim, perturbation_norm, kind, offset_scale)
    return Convergent(limit, perturbation, rate)


def random_periodic_contractive(rng, dim, period, kind=NormKind.L2, composite_bound=0.8, offset_scale=1.0):
    """Periodic operators whose individual norms may exceed one but whose
    norm product over a period is ``composite_bound``."""
    norms = rng.uniform(0.5, 1.4, period)
    norms *= (composite_bound / np.prod(norms)) ** (1.0 / period)
    ops = [random_affine(rng, dim, nrm, kind, offset_scale) for nrm in norms]
    return Periodic(tuple(ops))


def random_convergent_projectors(rng, dim, rank, rate, mu_max=2.0, kind=NormKind.L2, scale=0.3):
    """Projectors whose bases converge to those of a random oblique projector."""
    base = random_oblique_projector(rng, dim, rank, mu_max, kind)
    dM = scale * rng.standard_normal(base.range_basis.shape)
    dN = scale * rng.standard_normal(base.kernel_basis.shape)
    return ConvergentProjectors(base.range_basis, base.kernel_basis, dM, dN, rate)


def random_projector_cycle(rng, dim, length, mu_max=2.0, kind=NormKind.L2):
    """Periodic sequence of random projectors of random rank, all of norm ``<= mu_max``."""
    projectors = []
    for _ in range(length):
        rank = int(rng.integers(1, dim + 1))
        projectors.append(random_oblique_projector(rng, dim, rank, mu_max, kind))
    return Periodic(tuple(projectors))
