"""Random instances for property runs and experiments.

``random_conforming`` draws (Omega_1, Omega_2, psi, phi) with psi zero-free
on Omega_2 and phi(Omega_2) inside Omega_1 by construction: phi is an affine
image of a polynomial whose coefficient l1 norm bounds it by 1 on the disk
enclosing Omega_2.

``random_pcd_conforming`` draws Omega = C minus a convex set K with psi zero-free
on Omega and phi an expansion about a point of K, so phi(Omega) stays in Omega.
``mutant`` breaks a valid operator in one column.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import OperatorTruncation, make_product_composition
from .polycore import ComplexPoly, compose
from .regions import (
    Annulus,
    ConvexComplement,
    ConvexDisk,
    Disk,
    PolygonHull,
    PuncturedDisk,
    random_stable_poly,
)


@dataclass(frozen=True)
class ConformingInstance:
    omega1: object
    omega2: object
    psi: ComplexPoly
    phi: ComplexPoly


def _cplx(rng, scale=1.0):
    return complex(*rng.normal(scale=scale, size=2))


def random_region_bounded(rng, closed=None):
    kind = int(rng.integers(0, 3))
    c = _cplx(rng, 0.7)
    r = float(rng.uniform(0.6, 2.5))
    cl = bool(rng.integers(0, 2)) if closed is None else closed
    if kind == 0:
        return Disk(c, r, cl)
    if kind == 1:
        return Annulus(c, float(rng.uniform(0.2, 0.6)) * r, r, cl, cl)
    return PuncturedDisk(c, r, cl)


def unit_sup_poly(rng, degree: int, center: complex, radius: float, min_degree: int = 1) -> ComplexPoly:
    """g with sum |coefficients of g(center + radius u)| = 1, so |g| <= 1 on the disk."""
    h = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    h[:min_degree] *= rng.uniform(0, 1)
    h /= np.sum(np.abs(h))
    # g(z) = h((z - center) / radius)
    return compose(ComplexPoly(h), ComplexPoly([-center / radius, 1.0 / radius]))


def conforming_phi(rng, omega1, omega2, degree: int) -> ComplexPoly:
    c2, r2 = omega2.extent()
    g = unit_sup_poly(rng, degree, c2, r2)
    s = float(rng.uniform(0.3, 0.9))
    if isinstance(omega1, Disk):
        return g * (s * omega1.radius) + omega1.center
    if isinstance(omega1, Annulus):
        lo, hi = omega1.r_inner, omega1.r_outer
    else:
        lo, hi = 0.0, omega1.radius
    m = 0.5 * (lo + hi)
    t = s * (hi - lo) / (2 * m)
    return (g * t + 1.0) * m + omega1.center


def random_conforming(rng, max_degree_phi: int = 3, max_degree_psi: int = 3) -> ConformingInstance:
    omega1 = random_region_bounded(rng)
    omega2 = random_region_bounded(rng)
    psi = random_stable_poly(omega2, int(rng.integers(0, max_degree_psi + 1)), rng=rng)
    phi = conforming_phi(rng, omega1, omega2, int(rng.integers(1, max_degree_phi + 1)))
    return ConformingInstance(omega1, omega2, psi, phi)


def random_disk_operator(rng, N: int, closed: bool = True, max_degree_phi: int = 2):
    """(psi, phi, M_psi C_phi) preserving stability for the unit disk."""
    a = rng.uniform(1.2, 3.0) * np.exp(2j * np.pi * rng.uniform())
    psi = ComplexPoly.from_roots([a] * int(rng.integers(0, 3)), complex(*rng.normal(size=2)))
    phi = unit_sup_poly(rng, int(rng.integers(1, max_degree_phi + 1)), 0, 1) * float(rng.uniform(0.3, 0.95))
    return psi, phi, make_product_composition(psi, phi, N)


def mutant(rng, A: OperatorTruncation) -> tuple[OperatorTruncation, str]:
    """Replace column n >= 2 by 3 psi_0, or rescale it by a factor of modulus 3."""
    M = A.matrix.copy()
    n = int(rng.integers(2, A.N + 1))
    if rng.uniform() < 0.5:
        M[:, n] = 3.0 * M[:, 0]
        return OperatorTruncation(M), f"column {n} -> 3 psi_0"
    lam = 3.0 * np.exp(2j * np.pi * rng.uniform())
    M[:, n] *= lam
    return OperatorTruncation(M), f"column {n} scaled by {lam:.3f}"


def random_pcd_conforming(rng):
    """(Omega, psi, phi) with psi zero-free on Omega = C minus K and phi = c + a(z - c), a >= 1, c in K."""
    if rng.uniform() < 0.5:
        K = ConvexDisk(complex(*rng.normal(size=2)), float(rng.uniform(0.5, 2)))
        c = K.center
    else:
        K = PolygonHull(tuple(complex(*v) for v in rng.normal(size=(4, 2))))
        c = complex(np.mean(K.vertices))
    omega = ConvexComplement(K)
    psi = ComplexPoly.from_roots([c] * int(rng.integers(0, 3)), complex(*rng.normal(size=2)))
    a = float(rng.uniform(1.0, 2.5))
    phi = ComplexPoly([c - a * c, a])
    return omega, psi, phi
