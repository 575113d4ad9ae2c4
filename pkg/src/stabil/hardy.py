"""Truncated Hardy-space functions, outer / minimum-phase tests, and the
classification of operators that preserve (shifted) outer functions.

Signals follow the geophysicists' convention: the samples a_0, a_1, ... are
the Taylor coefficients of f(z) = sum a_n z^n, so a finite signal is minimum
phase exactly when f has no zeros in the open unit disk.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .analysis.structure import (
    Classification,
    Inconclusive,
    NotPreserving,
    ProductComposition,
    Rank1,
    rank1_parts,
)
from .operators import OperatorTruncation, apply, rank_estimate
from .polycore import (
    ComplexPoly,
    ZeroPolynomial,
    divide_exact,
    evaluate,
    json_complex,
    multiply,
    roots,
    series_divide,
)
from .regions import SamplerExhausted, random_stable_poly, unit_disk

DEFAULT_TOL = 1e-6
DEFAULT_K = 4096
ROOT_BAND = 1e-9


class ZeroSignal(ValueError):
    pass


class TruncationTooShallow(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class H2Trunc:
    """Taylor coefficients a_0..a_L of a function in H^2."""

    coeffs: np.ndarray

    def __post_init__(self):
        a = np.array(self.coeffs, dtype=complex).ravel()
        if a.size == 0:
            a = np.zeros(1, dtype=complex)
        a.flags.writeable = False
        object.__setattr__(self, "coeffs", a)

    @property
    def L(self) -> int:
        return self.coeffs.size - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs != 0)

    def as_poly(self) -> ComplexPoly:
        return ComplexPoly(self.coeffs)

    def __call__(self, z):
        return evaluate(self.as_poly(), z)

    def tail_bound(self, r: float) -> float:
        """Bound on the omitted tail on |z| <= r, taking ||a|| as the norm of f."""
        if not 0 <= r < 1:
            raise ValueError("need 0 <= r < 1")
        return self.norm() * r ** (self.L + 1) / np.sqrt(1 - r * r)

    def to_json(self):
        return self.as_poly().to_json()

    @classmethod
    def from_json(cls, doc) -> "H2Trunc":
        return cls(ComplexPoly.from_json(doc).coeffs)


@dataclass(frozen=True, eq=False)
class Signal:
    """Causal signal; sample n sits at time n."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex).ravel()
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    def z_transform(self) -> H2Trunc:
        return H2Trunc(self.samples)

    @classmethod
    def from_text(cls, text: str) -> "Signal":
        vals = [float(line) for line in text.split("\n") if line.strip() and not line.lstrip().startswith("#")]
        return cls(vals)

    @classmethod
    def from_json(cls, doc) -> "Signal":
        try:
            return cls([json_complex(v) for v in doc["samples"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed signal JSON: {exc}") from exc

    def to_json(self):
        return {"samples": [[float(v.real), float(v.imag)] for v in self.samples]}


@dataclass(frozen=True)
class PointEvaluation:
    """The functional f -> sigma * f(z0)."""

    sigma: complex
    z0: complex

    def __call__(self, f) -> complex:
        return self.sigma * evaluate(_as_poly(f), self.z0)

    def to_json(self):
        return {"sigma": [self.sigma.real, self.sigma.imag], "z0": [self.z0.real, self.z0.imag]}


class OuterStatus(enum.Enum):
    OUTER = "outer"
    NOT_OUTER = "not_outer"
    BORDERLINE = "borderline"


@dataclass(frozen=True)
class OuterVerdict:
    status: OuterStatus
    method: str
    truncation: int
    deficit: Optional[float] = None
    deficit_inner: Optional[float] = None
    radius: Optional[float] = None
    boundary_root: bool = False
    witness: Optional[complex] = None
    detail: str = ""

    @property
    def outer(self) -> bool:
        return self.status is OuterStatus.OUTER

    def to_json(self):
        doc = {"verdict": self.status.value, "method": self.method, "truncation": self.truncation,
               "boundary_root": self.boundary_root, "detail": self.detail}
        for key in ("deficit", "deficit_inner", "radius"):
            v = getattr(self, key)
            if v is not None:
                doc[key] = float(v)
        if self.witness is not None:
            doc["witness"] = [self.witness.real, self.witness.imag]
        return doc


def _as_poly(f) -> ComplexPoly:
    if isinstance(f, ComplexPoly):
        return f
    if isinstance(f, H2Trunc):
        return f.as_poly()
    if isinstance(f, Signal):
        return ComplexPoly(f.samples)
    return ComplexPoly(f)


def _circle_mean_log(p: ComplexPoly, r: float, K: int) -> float:
    z = r * np.exp(2j * np.pi * np.arange(K) / K)
    with np.errstate(divide="ignore"):
        return float(np.mean(np.log(np.abs(evaluate(p, z)))))


def jensen_outer_test(f, K: int = DEFAULT_K, tol: float = DEFAULT_TOL) -> OuterVerdict:
    """Compare log|f(0)| with the mean of log|f| on the circle of radius 1 - 1/K.

    The deficit is nonnegative up to quadrature error and vanishes exactly
    when f has no zeros inside that circle. The deficit at radius 1 - 2/K is
    reported too, since it can only shrink as the radius does.
    """
    if K < 64:
        raise ValueError("need K >= 64 circle samples")
    p = _as_poly(f)
    L = p.coeffs.size - 1
    if p.is_zero():
        raise ZeroPolynomial("the zero function is not outer")
    a0 = abs(p.coeffs[0])
    if a0 <= 1e-14 * p.scale:
        return OuterVerdict(OuterStatus.NOT_OUTER, "jensen", L, detail="f(0) = 0")
    r, r2 = 1.0 - 1.0 / K, 1.0 - 2.0 / K
    deficit = _circle_mean_log(p, r, K) - np.log(a0)
    inner = _circle_mean_log(p, r2, K) - np.log(a0)
    if deficit <= tol:
        st = OuterStatus.OUTER
    elif deficit > 10 * tol:
        st = OuterStatus.NOT_OUTER
    else:
        st = OuterStatus.BORDERLINE
    return OuterVerdict(st, "jensen", L, float(deficit), float(inner), r,
                        detail=f"tol={tol:g}, K={K}")


def root_outer_test(p, band: float = ROOT_BAND) -> OuterVerdict:
    """Polynomial outer test: no roots in the open unit disk.

    Roots within ``band`` inside the circle give Borderline; roots on or just
    outside it give Outer with ``boundary_root`` set.
    """
    p = _as_poly(p).trimmed()
    L = p.coeffs.size - 1
    if p.degree < 0:
        raise ZeroPolynomial("the zero polynomial is not outer")
    if p.degree == 0:
        return OuterVerdict(OuterStatus.OUTER, "roots", L)
    rs = roots(p).all_roots()
    mods = np.abs(rs)
    i = int(np.argmin(mods))
    if mods[i] < 1 - band:
        return OuterVerdict(OuterStatus.NOT_OUTER, "roots", L, witness=complex(rs[i]))
    if mods[i] < 1:
        return OuterVerdict(OuterStatus.BORDERLINE, "roots", L, witness=complex(rs[i]),
                            boundary_root=True)
    return OuterVerdict(OuterStatus.OUTER, "roots", L, boundary_root=bool(mods[i] <= 1 + band),
                        witness=complex(rs[i]) if mods[i] <= 1 + band else None)


def _outer(f, method: str, tol: float, K: int = DEFAULT_K) -> OuterVerdict:
    if method == "roots":
        return root_outer_test(f)
    if method == "jensen":
        return jensen_outer_test(f, K, tol)
    raise ValueError(f"unknown outer test {method!r}")


def _strip_shift(f, tol: float):
    a = _as_poly(f).coeffs
    thr = tol * float(np.linalg.norm(a))
    big = np.nonzero(np.abs(a) > thr)[0]
    if big.size == 0:
        return None
    n = int(big[0])
    return n, H2Trunc(a[n:])


def shifted_outer_status(f, tol: float = 1e-10, method: str = "roots") -> tuple:
    """(n, verdict on f / z^n), or (None, None) for a numerically zero f."""
    split = _strip_shift(f, tol)
    if split is None:
        return None, None
    n, g = split
    return n, _outer(g, method, DEFAULT_TOL)


def shifted_outer_decompose(f, tol: float = 1e-10, method: str = "roots"):
    """Write f = z^n g and return (n, g) when g is outer, else None.

    Leading coefficients below ``tol * ||f||`` count as zero.
    """
    n, v = shifted_outer_status(f, tol, method)
    if v is None or not v.outer:
        return None
    return n, _strip_shift(f, tol)[1]


def minimum_phase_test(s) -> OuterVerdict:
    sig = s if isinstance(s, Signal) else Signal(s)
    if sig.samples.size == 0 or not np.any(sig.samples != 0):
        raise ZeroSignal("the zero signal has no phase")
    return root_outer_test(ComplexPoly(sig.samples))


def classify_functional(rho: Sequence[complex], mode: str = "outer", tol: float = 1e-9):
    """Recognise rho_n = sigma z0^n with |z0| < 1 (and z0 != 0 in shifted mode)."""
    rho = np.asarray(rho, dtype=complex).ravel()
    if rho.size == 0:
        raise ValueError("rho must be nonempty")
    if mode not in ("outer", "shifted"):
        raise ValueError(f"unknown mode {mode!r}")
    sigma = complex(rho[0])
    if sigma == 0:
        return None
    z0 = complex(rho[1] / rho[0]) if rho.size > 1 else 0j
    fit = sigma * z0 ** np.arange(rho.size)
    if np.any(np.abs(rho - fit) > tol * abs(sigma)):
        return None
    if not abs(z0) < 1:
        return None
    if mode == "shifted" and abs(z0) <= tol:
        return None
    return PointEvaluation(sigma, z0)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class H2Classification:
    result: Classification
    mode: str
    truncation: int
    point_evaluation: Optional[PointEvaluation] = None
    checks: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return self.result.verdict

    def to_json(self):
        doc = self.result.to_json()
        doc.update({"mode": self.mode, "truncation": self.truncation, "checks": self.checks})
        if self.point_evaluation is not None:
            doc["point_evaluation"] = self.point_evaluation.to_json()
        return doc


def _in_class(f, mode: str) -> OuterVerdict:
    if mode == "outer":
        return root_outer_test(f)
    n, v = shifted_outer_status(f)
    if v is None:
        return OuterVerdict(OuterStatus.NOT_OUTER, "roots", _as_poly(f).coeffs.size - 1,
                            detail="zero function")
    return v


def _first_root_in_disk(p: ComplexPoly, mode: str) -> Optional[complex]:
    p = p.trimmed()
    if p.degree < 1:
        return None
    rs = roots(p).all_roots()
    lo = 1e-9 if mode == "shifted" else -1.0
    inside = [r for r in rs if lo < abs(r) < 1 - ROOT_BAND]
    return complex(min(inside, key=abs)) if inside else None


def _violates(A: OperatorTruncation, f: ComplexPoly, mode: str):
    """(True, root) when A f leaves the class; zero images count as violations."""
    img = apply(A, f)
    scale = float(np.max(np.abs(A.matrix))) * float(np.sum(np.abs(f.coeffs)))
    if img.scale <= 1e-12 * max(scale, 1e-300):
        return True, None
    v = _in_class(img, mode)
    if v.status is OuterStatus.NOT_OUTER:
        return True, _first_root_in_disk(img, mode)
    return False, None


def _falsify_h2(A, mode, budget, rng_seed):
    rng = np.random.default_rng(rng_seed)
    closed = unit_disk(closed=True)
    N = max(A.N, 1)
    for i in range(budget):
        try:
            f = random_stable_poly(closed, 1 + i % N, rng=rng)
        except SamplerExhausted:
            return None
        bad, root = _violates(A, f, mode)
        if bad:
            return f, root
    return None


def _truncate(p: ComplexPoly, L: int) -> np.ndarray:
    return p.padded(max(L + 1, p.coeffs.size))[: L + 1]


def _phi_candidate(psi0: ComplexPoly, psi1: ComplexPoly, L: int):
    """phi = psi1 / psi0, exactly when possible, else as a series mod z^{L+1}."""
    q = divide_exact(psi1, psi0, 1e-12)
    if q is not None:
        return q.trimmed(), True
    a, b = _as_poly(psi0).coeffs, _as_poly(psi1).coeffs
    nz0 = np.nonzero(np.abs(a) > 1e-14 * np.abs(a).max())[0]
    k = int(nz0[0]) if nz0.size else 0
    if np.any(np.abs(b[:k]) > 1e-14 * max(np.abs(b).max(), 1e-300)):
        return None, False
    length = L + 1 - k
    return ComplexPoly(series_divide(b[k:], a[k:], length)), False


def _cross_residuals_mod(A: OperatorTruncation, L: int) -> list:
    p0, p1 = A.column(0), A.column(1)
    out, pow0, pow1 = [], ComplexPoly([1.0]), p1
    for n in range(2, A.N + 1):
        pow0 = multiply(pow0, p0)
        pow1 = multiply(pow1, p1)
        lhs = _truncate(multiply(pow0, A.column(n)), L)
        rhs = _truncate(pow1, L)
        scale = max(np.linalg.norm(lhs), np.linalg.norm(rhs), 1e-300)
        out.append(float(np.linalg.norm(lhs - rhs) / scale))
    return out


def _disk_sup(phi: ComplexPoly, K: int):
    """Bound sup|phi| on |z| = 1 - 1/K by a circle grid plus a derivative pad.

    The grid is refined until the pad fits under 1 or the grid itself
    exceeds 1. The coefficient l1 norm bounds sup|phi| on the whole disk.
    Returns (ok, grid_max, pad, argmax, l1).
    """
    r = 1.0 - 1.0 / K
    a = phi.coeffs * r ** np.arange(phi.coeffs.size)
    lip = float(np.sum(np.arange(a.size) * np.abs(a)))
    l1 = float(np.sum(np.abs(phi.coeffs)))
    slack = 64 * np.finfo(float).eps * max(1, phi.coeffs.size)
    Kg = K
    while True:
        z = r * np.exp(2j * np.pi * np.arange(Kg) / Kg)
        vals = np.abs(evaluate(phi, z))
        i = int(np.argmax(vals))
        pad = np.pi / Kg * lip
        ok = l1 <= 1.0 + slack or vals[i] + pad <= 1.0
        if ok or vals[i] > 1.0 or Kg >= 64 * K:
            return ok, float(vals[i]), pad, complex(z[i]), l1
        Kg *= 4


def classify_h2_operator(A: OperatorTruncation, mode: str = "outer", tol: float = 1e-8,
                         budget: int = 2000, rng_seed: int = 0, K: int = DEFAULT_K) -> H2Classification:
    """Decide whether A has the form M_psi C_phi with psi in the class and phi
    taking the disk into itself (phi also shifted outer in shifted mode)."""
    if mode not in ("outer", "shifted"):
        raise ValueError(f"unknown mode {mode!r}")
    if A.N < 1:
        raise TruncationTooShallow("need images of 1 and z at least (N >= 1)")
    L = A.M
    checks: dict = {}
    targeted: list = []
    failed, detail = "", ""
    one = ComplexPoly([1.0])

    def wrap(res, pe=None):
        return H2Classification(res, mode, L, pe, checks)

    rank = rank_estimate(A, tol)
    checks["rank"] = rank
    if rank == 0:
        return wrap(NotPreserving(one, None, "nonzero_image"))

    if rank == 1:
        psi, nu = rank1_parts(A, tol)
        v = _in_class(psi, mode)
        checks["psi"] = v.status.value
        pe = classify_functional(nu, mode, max(tol, 1e-9))
        checks["point_evaluation"] = pe is not None
        if v.outer and pe is not None:
            return wrap(Rank1(nu, psi), pe)
        failed = "rank1_direction" if not v.outer else "rank1_point_evaluation"
        detail = "image direction not in class" if not v.outer else "functional is not a point evaluation"
        if abs(nu[0]) > tol:
            targeted.append(one)
        targeted.append(ComplexPoly.monomial(1) if mode == "shifted" else one)
    else:
        psi0, psi1 = A.column(0).trimmed(), A.column(1)
        v = _in_class(psi0, mode)
        checks["psi"] = v.status.value
        if not v.outer:
            failed, detail = "psi_in_class", f"A1 is {v.status.value}"
            targeted.append(one)
        else:
            phi, exact = _phi_candidate(psi0, psi1, L)
            checks["phi_polynomial"] = bool(exact)
            if phi is None or phi.trimmed().degree < 1:
                failed, detail = "phi_nonconstant", "A z / A 1 is not a nonconstant series"
            else:
                res = _cross_residuals_mod(A, L)
                worst = max(res, default=0.0)
                checks["cross_relation_max"] = worst
                if worst > tol:
                    failed, detail = "cross_relation", f"max relative residual {worst:.3e}"
                else:
                    ok, gmax, pad, zmax, l1 = _disk_sup(phi, K)
                    checks.update(phi_grid_max=gmax, phi_pad=pad, phi_l1=l1)
                    if not ok:
                        failed, detail = "phi_fixes_disk", f"|phi| reaches {gmax:.6g} on |z|=1-1/K"
                        if gmax > 1.0:
                            a = complex(evaluate(phi, zmax))
                            targeted.append(ComplexPoly([1.0, -1.0 / a]))
                    elif mode == "shifted":
                        pv = _in_class(phi, "shifted")
                        checks["phi_shifted_outer"] = pv.status.value
                        if not pv.outer:
                            failed, detail = "phi_shifted_outer", "phi is not shifted outer"
                            targeted.append(ComplexPoly.monomial(1))
                    if not failed:
                        return wrap(ProductComposition(psi0, phi, tuple(res), "certified"))

    for f in targeted:
        bad, root = _violates(A, f, mode)
        if bad:
            return wrap(NotPreserving(f, root, failed))
    found = _falsify_h2(A, mode, budget, rng_seed)
    if found is not None:
        return wrap(NotPreserving(found[0], found[1], failed))
    return wrap(Inconclusive(failed, f"{detail}; no counterexample in {budget} draws (seed {rng_seed})"))


@dataclass(frozen=True)
class ShiftedProductReport:
    f: str
    fg: str
    g: str

    @property
    def violation(self) -> bool:
        return self.f == "outer" and self.fg == "outer" and self.g == "not_outer"

    def to_json(self):
        return {"f": self.f, "fg": self.fg, "g": self.g, "violation": self.violation}


def shifted_product_check(f, g, tol: float = 1e-10) -> ShiftedProductReport:
    """Shifted-outer verdicts for f, f*g and g; a violation would be f and f*g
    shifted outer while g is definitely not."""
    pf, pg = _as_poly(f), _as_poly(g)

    def status(h):
        _, v = shifted_outer_status(h, tol)
        return "not_outer" if v is None else v.status.value

    return ShiftedProductReport(status(pf), status(multiply(pf, pg)), status(pg))
