"""Decide the structure of a stability-transforming operator at finite truncation.

For bounded Omega_1 and Omega_2 with interior, an operator maps
Omega_1-stable polynomials to Omega_2-stable ones (or 0) exactly when it is
rank one with an Omega_2-stable image direction, or psi * (p o phi) with
psi Omega_2-stable and phi a non-constant polynomial taking Omega_2 into
Omega_1. ``classify`` checks that description directly and falls back to a
randomized search for a counterexample when any step fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..operators import (
    OperatorTruncation,
    apply,
    compose_operators,
    make_dilation,
    rank_estimate,
)
from ..polycore import ComplexPoly, compose, divide_exact, evaluate, multiply
from ..regions import (
    Disk,
    MapStatus,
    Membership,
    Region,
    SamplerExhausted,
    StabilityStatus,
    is_stable,
    maps_into,
    random_stable_poly,
    sample_complement,
    sample_region,
    unit_disk,
)

DEFAULT_TOL = 1e-8
DEFAULT_BUDGET = 10_000


class PreconditionViolated(ValueError):
    pass


class Psi0VanishesOnGrid(ValueError):
    pass


def _pj(p: Optional[ComplexPoly]):
    return None if p is None else p.to_json()


def _cj(z):
    return None if z is None else [float(complex(z).real), float(complex(z).imag)]


@dataclass(frozen=True)
class Rank1:
    nu_coeffs: np.ndarray
    psi: ComplexPoly
    verdict: str = field(default="Rank1", init=False)

    def to_json(self):
        return {"verdict": self.verdict, "psi": _pj(self.psi),
                "nu": [_cj(v) for v in self.nu_coeffs]}


@dataclass(frozen=True)
class ProductComposition:
    psi: ComplexPoly
    phi: ComplexPoly
    residuals: tuple
    mapping: str = "certified"
    verdict: str = field(default="ProductComposition", init=False)

    def to_json(self):
        return {"verdict": self.verdict, "psi": _pj(self.psi), "phi": _pj(self.phi),
                "residuals": [float(r) for r in self.residuals], "maps_into": self.mapping}


@dataclass(frozen=True)
class NotPreserving:
    witness: ComplexPoly
    image_root: Optional[complex]
    failed_step: str = ""
    verdict: str = field(default="NotPreserving", init=False)

    def to_json(self):
        return {"verdict": self.verdict, "witness": _pj(self.witness),
                "image_root": _cj(self.image_root), "failed_step": self.failed_step}


@dataclass(frozen=True)
class Inconclusive:
    failed_step: str
    report: str
    verdict: str = field(default="Inconclusive", init=False)

    def to_json(self):
        return {"verdict": self.verdict, "failed_step": self.failed_step, "report": self.report}


Classification = Rank1 | ProductComposition | NotPreserving | Inconclusive


# ---------------------------------------------------------------------------


def _is_negligible(img: ComplexPoly, A: OperatorTruncation, p: ComplexPoly, tol: float) -> bool:
    scale = float(np.max(np.abs(A.matrix))) * float(np.sum(np.abs(p.coeffs)))
    return img.scale <= tol * max(scale, 1e-300)


def _image_violation(A, p, omega2, tol):
    img = apply(A, p)
    if _is_negligible(img, A, p, tol):
        return None
    st = is_stable(img, omega2)
    if st.unstable:
        return st.witness
    return None


def falsify(A: OperatorTruncation, omega1: Region, omega2: Region, budget: int = DEFAULT_BUDGET,
            rng_seed: int = 0, tol: float = 1e-12):
    """Search Omega_1-stable polynomials whose image has a root inside Omega_2.

    Draws alternate between independent roots and a repeated root
    ``(z - a)^k`` times an independent remainder; extremal polynomials of the
    second kind expose violations that independent roots rarely reach.
    Degrees cycle through 1..N for each kind. The first witness in draw order
    is returned as ``(p, image_root)``; ``None`` after the budget is exhausted.
    """
    rng = np.random.default_rng(rng_seed)
    N = max(A.N, 1)
    for i in range(budget):
        deg = 1 + (i // 2) % N
        try:
            if i % 2:
                k = int(rng.integers(1, deg + 1))
                a = sample_complement(omega1, 1, rng)[0]
                rest = random_stable_poly(omega1, deg - k, rng=rng)
                p = multiply(ComplexPoly.from_roots([a] * k), rest)
            else:
                p = random_stable_poly(omega1, deg, rng=rng)
        except SamplerExhausted:
            return None
        root = _image_violation(A, p, omega2, tol)
        if root is not None:
            return p, root
    return None


def rank1_parts(A: OperatorTruncation, tol: float):
    norms = np.linalg.norm(A.matrix, axis=0)
    ref = 0 if norms[0] > tol * norms.max() else int(np.argmax(norms))
    psi = A.column(ref).trimmed()
    denom = np.vdot(psi.coeffs, psi.coeffs)
    k = psi.coeffs.size
    nu = np.array([np.vdot(psi.coeffs, A.matrix[:k, n]) / denom for n in range(A.N + 1)])
    return psi, nu


def cross_relation_residuals(A: OperatorTruncation) -> list:
    """Relative residuals of psi_0^{n-1} psi_n = psi_1^n for n = 2..N."""
    p0, p1 = A.column(0), A.column(1)
    out = []
    pow0 = ComplexPoly([1.0])  # psi_0^{n-1}
    pow1 = p1  # psi_1^n
    for n in range(2, A.N + 1):
        pow0 = multiply(pow0, p0)
        pow1 = multiply(pow1, p1)
        lhs = multiply(pow0, A.column(n))
        L = max(lhs.coeffs.size, pow1.coeffs.size)
        diff = np.linalg.norm(lhs.padded(L) - pow1.padded(L))
        scale = max(lhs.norm(), pow1.norm(), 1e-300)
        out.append(float(diff / scale))
    return out


def _check_preconditions(omega1: Region, omega2: Region):
    if not omega1.bounded():
        raise PreconditionViolated("Omega_1 must be bounded")
    if not omega2.interior_nonempty():
        raise PreconditionViolated("Omega_2 must have nonempty interior")


def classify(A: OperatorTruncation, omega1: Region, omega2: Region, tol: float = DEFAULT_TOL,
             budget: int = DEFAULT_BUDGET, rng_seed: int = 0, grid_density: int = 48) -> Classification:
    _check_preconditions(omega1, omega2)
    rank = rank_estimate(A, tol)
    failed, detail = "", ""
    targeted: list = []

    if rank == 0:
        return Rank1(np.zeros(A.N + 1, dtype=complex), ComplexPoly([1.0]))

    if rank == 1:
        psi, nu = rank1_parts(A, tol)
        st = is_stable(psi, omega2)
        if st.stable:
            return Rank1(nu, psi)
        failed = "rank1_direction_stable"
        detail = f"image direction is {st.status.value} in Omega_2"
        if abs(nu[0]) > tol:
            targeted.append(ComplexPoly([1.0]))
    else:
        psi0, psi1 = A.column(0).trimmed(), A.column(1)
        st = is_stable(psi0, omega2) if psi0.degree >= 0 else None
        if st is None or not st.stable:
            failed = "psi0_stable"
            detail = "psi_0 vanishes identically" if st is None else f"psi_0 is {st.status.value} in Omega_2"
            targeted.append(ComplexPoly([1.0]))
        else:
            phi = divide_exact(psi1, psi0, tol)
            if phi is None:
                failed, detail = "phi_polynomial", "psi_1 / psi_0 is not a polynomial"
            elif phi.trimmed().degree < 1:
                failed, detail = "phi_nonconstant", "psi_1 / psi_0 is constant"
                phi = None
            if phi is not None:
                phi = phi.trimmed()
                res = cross_relation_residuals(A)
                worst = max(res, default=0.0)
                if worst > tol:
                    failed = "cross_relation"
                    detail = f"max relative residual {worst:.3e} > tol {tol:.1e}"
                else:
                    mi = maps_into(phi, omega2, omega1, grid_density)
                    if mi.status in (MapStatus.CERTIFIED, MapStatus.SAMPLED_ONLY):
                        return ProductComposition(psi0, phi, tuple(res), mi.status.value)
                    failed = "maps_into"
                    detail = f"phi maps {mi.witness} outside Omega_1"
                    w = evaluate(phi, mi.witness)
                    if omega1.member(w) is Membership.OUTSIDE:
                        targeted.append(ComplexPoly([-w, 1.0]))

    for p in targeted:
        root = _image_violation(A, p, omega2, 1e-12)
        if root is not None:
            return NotPreserving(p, root, failed)
    found = falsify(A, omega1, omega2, budget, rng_seed)
    if found is not None:
        return NotPreserving(found[0], found[1], failed)
    return Inconclusive(failed, f"{detail}; no counterexample in {budget} draws (seed {rng_seed})")


# ---------------------------------------------------------------------------


def bb_certificate(A: OperatorTruncation, samples: int = 200, rng_seed: int = 0,
                   w_radius: float = 0.95) -> bool:
    """Check A((1 + wz)^n) is disk-stable or zero for sampled w and n <= N.

    w is drawn uniformly from the disk of radius ``w_radius``; images of
    (1 + wz)^n carry n-fold roots, whose floating-point spread grows like
    eps^{1/n}, so |w| is kept away from 1.
    """
    rng = np.random.default_rng(rng_seed)
    disk = unit_disk()
    for _ in range(samples):
        w = w_radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        base = ComplexPoly([1.0, w])
        f = ComplexPoly([1.0])
        for n in range(A.N + 1):
            if n:
                f = multiply(f, base)
            img = apply(A, f)
            if _is_negligible(img, A, f, 1e-12):
                continue
            # a dominant constant term rules out zeros in the closed disk
            a = np.abs(img.coeffs)
            if a[0] > (1 + 1e-12) * np.sum(a[1:]):
                continue
            if is_stable(img, disk).unstable:
                return False
    return True


@dataclass(frozen=True)
class MomentVerdict:
    n: int
    proportional: bool
    max_ratio: float
    bound: float
    where: Optional[complex]

    @property
    def ok(self) -> bool:
        return self.max_ratio < self.bound


@dataclass(frozen=True)
class MomentReport:
    verdicts: tuple

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    @property
    def flagged(self) -> list:
        return [v for v in self.verdicts if not v.ok]


def moment_bound_check(A: OperatorTruncation, omega: Region, omega_grid=None, disk_grid=None,
                       tol: float = 1e-10) -> MomentReport:
    """|psi_n/psi_0| < 1 on Omega for moments off the line C psi_0, < 3 on the
    unit disk for moments on it."""
    psi0 = A.column(0)
    if omega_grid is None:
        omega_grid = sample_region(omega, 24)
    if disk_grid is None:
        disk_grid = sample_region(unit_disk(), 24)
    omega_grid = np.asarray(omega_grid, dtype=complex).ravel()
    disk_grid = np.asarray(disk_grid, dtype=complex).ravel()
    p0_om = evaluate(psi0, omega_grid)
    if psi0.is_zero() or np.min(np.abs(p0_om)) <= 1e-12 * max(psi0.scale, 1e-300):
        raise Psi0VanishesOnGrid("psi_0 has a zero on the Omega grid")
    # a root inside Omega makes the ratio unbounded between grid points
    if is_stable(psi0, omega).status is not StabilityStatus.STABLE:
        raise Psi0VanishesOnGrid("psi_0 has a zero in Omega")
    p0_d = evaluate(psi0, disk_grid)
    keep = np.abs(p0_d) > 1e-12 * psi0.scale
    out = []
    for n in range(1, A.N + 1):
        pn = A.column(n)
        sv = np.linalg.svd(np.stack([A.matrix[:, 0], A.matrix[:, n]], axis=1), compute_uv=False)
        prop = bool(sv.size < 2 or sv[1] <= tol * sv[0])
        if prop:
            grid, ratio = disk_grid[keep], np.abs(evaluate(pn, disk_grid[keep]) / p0_d[keep])
            bound = 3.0
        else:
            grid, ratio = omega_grid, np.abs(evaluate(pn, omega_grid) / p0_om)
            bound = 1.0
        i = int(np.argmax(ratio)) if ratio.size else None
        out.append(MomentVerdict(n, prop, float(ratio[i]) if i is not None else 0.0, bound,
                                 complex(grid[i]) if i is not None else None))
    return MomentReport(tuple(out))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Reduction:
    A_tilde: OperatorTruncation
    omega: Disk
    delta: float
    epsilon: float


def reduce_general(A: OperatorTruncation, omega1: Region, omega2: Region) -> Reduction:
    """Conjugate by dilations so the source becomes the unit disk and the target
    a disk inside it: A~ = D_{1/eps} A D_delta."""
    _check_preconditions(omega1, omega2)
    sup = omega1.sup_modulus()
    if not sup > 0:
        raise PreconditionViolated("Omega_1 must contain a nonzero point")
    delta = 0.5 / sup
    zc, _ = omega2.interior_point()
    if omega2.member(zc) is not Membership.INSIDE:
        raise PreconditionViolated("could not certify an interior point of Omega_2")
    rho = 0.5 * float(omega2.boundary_distance(zc))
    eps = 0.5 / (abs(zc) + rho)
    omega = Disk(eps * zc, eps * rho, False, omega2.band * eps)
    inner = compose_operators(A, make_dilation(delta, A.N))
    A_tilde = compose_operators(make_dilation(1.0 / eps, inner.M), inner)
    return Reduction(A_tilde, omega, delta, eps)


def classify_via_reduce(A: OperatorTruncation, omega1: Region, omega2: Region,
                        tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET,
                        rng_seed: int = 0, grid_density: int = 48) -> Classification:
    """Classify the reduced operator, then map the result back to A's frame.

    The reduced problem only sees violations whose image roots land in the
    small disk, so positive results are re-verified in the original frame
    and negative searches are rerun there.
    """
    red = reduce_general(A, omega1, omega2)
    res = classify(red.A_tilde, unit_disk(), red.omega, tol, budget, rng_seed, grid_density)
    eps, delta = red.epsilon, red.delta
    undilate = ComplexPoly([0.0, eps])  # z -> eps z
    failed = res.failed_step if isinstance(res, (NotPreserving, Inconclusive)) else ""
    if isinstance(res, ProductComposition):
        psi = compose(res.psi, undilate)
        phi = compose(res.phi, undilate) * (1.0 / delta)
        mi = maps_into(phi, omega2, omega1, grid_density)
        if is_stable(psi, omega2).stable and mi.status is not MapStatus.REFUTED:
            return ProductComposition(psi, phi, res.residuals, mi.status.value)
        failed = "original_frame"
    elif isinstance(res, Rank1):
        psi = compose(res.psi, undilate)
        if is_stable(psi, omega2).stable:
            return Rank1(res.nu_coeffs / delta ** np.arange(res.nu_coeffs.size), psi)
        failed = "original_frame"
    elif isinstance(res, NotPreserving):
        return NotPreserving(compose(res.witness, ComplexPoly([0.0, delta])), res.image_root / eps,
                             res.failed_step)
    found = falsify(A, omega1, omega2, budget, rng_seed)
    if found is not None:
        return NotPreserving(found[0], found[1], failed)
    return Inconclusive(failed, f"reduced frame: {res.verdict}; no counterexample in {budget} draws "
                                f"(seed {rng_seed})")
