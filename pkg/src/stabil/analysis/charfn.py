"""Characteristic functions F_k and the second companion function G.

All series are truncated at w-order T. Error estimates use the moment bound
|psi_kn(z)| <= 3|psi_0(z)| valid for stability-transforming operators of
rank >= 2, giving the tail 3|psi_0(z)| |w|^{T+1} e^{|w|} / (T+1)!. A
floating-point allowance proportional to the summed term magnitudes is added
so that comparisons against the bound are honest at small |w| too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from ..operators import OperatorTruncation, rank_estimate
from ..polycore import ComplexPoly, evaluate

ROUNDING = 64 * np.finfo(float).eps
MOMENT_BOUND = 3.0


class TruncationTooDeep(ValueError):
    pass


class RankTooLow(ValueError):
    pass


class Psi0Zero(ValueError):
    pass


def tail_bound(psi0_abs, w, T: int):
    w = np.abs(np.asarray(w))
    return MOMENT_BOUND * np.asarray(psi0_abs) * w ** (T + 1) * np.exp(w) / factorial(T + 1)


@dataclass(frozen=True)
class CharFnTruncation:
    k: int
    T: int
    coeff_polys: tuple  # psi_{kn}, n = 0..T

    @property
    def psi0(self) -> ComplexPoly:
        return self.coeff_polys[0]

    def _terms(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        return [evaluate(p, z) * w**n / factorial(n) for n, p in enumerate(self.coeff_polys)]

    def __call__(self, z, w):
        return sum(self._terms(z, w))

    def error_bound(self, z, w):
        """Truncation tail plus a rounding allowance."""
        terms = self._terms(z, w)
        rounding = ROUNDING * sum(np.abs(t) for t in terms)
        return tail_bound(np.abs(evaluate(self.psi0, z)), w, self.T) + rounding


def char_fn(A: OperatorTruncation, k: int, T: int) -> CharFnTruncation:
    if k < 1 or T < 0:
        raise ValueError("need k >= 1 and T >= 0")
    if A.N < k * T:
        raise TruncationTooDeep(f"F_{k} to order {T} needs N >= {k * T}, operator has N={A.N}")
    return CharFnTruncation(k, T, tuple(A.column(k * n) for n in range(T + 1)))


@dataclass(frozen=True)
class ProbeReport:
    w0: complex
    min_abs: float
    max_abs: float
    error_bound: float
    points: int

    @property
    def uniformly_zero(self) -> bool:
        return self.max_abs <= self.error_bound

    @property
    def bounded_away(self) -> bool:
        return self.min_abs > self.error_bound


def zero_independence_probe(F: CharFnTruncation, w0: complex, zgrid) -> ProbeReport:
    """Range of |F(z, w0)| over a grid; a zero set independent of z shows up as
    either ``uniformly_zero`` or ``bounded_away``."""
    zgrid = np.asarray(zgrid, dtype=complex).ravel()
    if zgrid.size == 0:
        raise ValueError("zgrid must be nonempty")
    vals = np.abs(F(zgrid, w0))
    err = float(np.max(F.error_bound(zgrid, w0)))
    return ProbeReport(complex(w0), float(vals.min()), float(vals.max()), err, int(zgrid.size))


@dataclass(frozen=True)
class F2Report:
    min_abs: float
    argmin: tuple
    tail_bound: float
    error_bound: float

    @property
    def zero_free(self) -> bool:
        return self.min_abs > self.error_bound


def f2_zero_scan(A: OperatorTruncation, T: int, zgrid, wgrid) -> F2Report:
    F2 = char_fn(A, 2, T)
    z = np.asarray(zgrid, dtype=complex).ravel()[:, None]
    w = np.asarray(wgrid, dtype=complex).ravel()[None, :]
    vals = np.abs(F2(z, w))
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    tail = tail_bound(np.abs(evaluate(F2.psi0, z)), w, T)
    err = F2.error_bound(z, w)
    return F2Report(float(vals[i, j]), (complex(z[i, 0]), complex(w[0, j])),
                    float(np.max(tail)), float(np.max(err)))


@dataclass(frozen=True)
class CompanionData:
    """Second companion function G(z, w) = e^{-w beta^2} F_2(z, w) / psi_0(z).

    ``G_coeffs[n]`` is the polynomial in beta multiplying w^n/n! in the
    w-expansion, built from the first-companion coefficients at ``z_ref``.
    """

    psi0: ComplexPoly
    psi1: ComplexPoly
    T: int
    z_ref: complex
    c_ref: np.ndarray
    G_coeffs: tuple
    columns: tuple = field(repr=False)

    def beta(self, z):
        return evaluate(self.psi1, z) / evaluate(self.psi0, z)

    def c_at(self, z) -> np.ndarray:
        """c_0..c_{2T} of the first companion function, computed at each z.

        q(w) = e^{-beta w} F_1(z, w) / psi_0(z), so c_n is the Cauchy product of
        psi_n/(psi_0 n!) with (-beta)^j/j!.
        """
        z = np.asarray(z, dtype=complex)
        p0 = evaluate(self.psi0, z)
        b = self.beta(z)
        L = 2 * self.T + 1
        r = [evaluate(self.columns[n], z) / p0 / factorial(n) for n in range(L)]
        e = [(-b) ** j / factorial(j) for j in range(L)]
        return np.array([sum(r[n - j] * e[j] for j in range(n + 1)) for n in range(L)])

    def G_w(self, z, w):
        c = self.c_at(z)
        b = self.beta(z)
        w = np.asarray(w, dtype=complex)
        total = 0
        for n in range(self.T + 1):
            g = sum(c[2 * n - j] * factorial(2 * n - j) * comb(n, j) * (2 * b) ** j for j in range(n + 1))
            total = total + g * w**n / factorial(n)
        return total

    def G_general(self, z, w):
        c = self.c_at(z)
        b = self.beta(z)
        w = np.asarray(w, dtype=complex)
        total = 0
        for n in range(self.T + 1):
            for m in range(2 * self.T - 2 * n + 1):
                coef = c[m + 2 * n] * factorial(m + 2 * n) / (factorial(m) * factorial(n))
                total = total + coef * (2 * b) ** m * w ** (m + n)
        return total

    def G_beta(self, z, w):
        c = self.c_at(z)
        b = self.beta(z)
        w = np.asarray(w, dtype=complex)
        total = 0
        for m in range(2 * self.T + 1):
            inner = sum(c[m + 2 * n] * factorial(m + 2 * n) * w**n / factorial(n)
                        for n in range((2 * self.T - m) // 2 + 1))
            total = total + (2 * w) ** m * inner * b**m / factorial(m)
        return total

    def G_definition(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        b = self.beta(z)
        f2 = sum(evaluate(self.columns[2 * n], z) * w**n / factorial(n) for n in range(self.T + 1))
        return np.exp(-w * b**2) * f2 / evaluate(self.psi0, z)

    def truncation_bound(self, z, w):
        """Bound on |G - G_definition| from the F_2 tail, plus rounding."""
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        b = self.beta(z)
        terms = [np.abs(evaluate(self.columns[2 * n], z)) * np.abs(w) ** n / factorial(n)
                 for n in range(self.T + 1)]
        scale = np.abs(np.exp(-w * b**2)) / np.abs(evaluate(self.psi0, z))
        rounding = ROUNDING * (1.0 + scale * sum(terms))
        return scale * tail_bound(np.abs(evaluate(self.psi0, z)), w, self.T) + rounding

    def routes(self, z, w) -> dict:
        return {"definition": self.G_definition(z, w), "Gw": self.G_w(z, w),
                "Ggeneral": self.G_general(z, w), "Gbeta": self.G_beta(z, w)}


def _reference_point(psi0: ComplexPoly) -> complex:
    if abs(evaluate(psi0, 0.0)) > 1e-8 * max(psi0.scale, 1e-300):
        return 0j
    th = np.exp(2j * np.pi * np.arange(64) / 64)
    pts = 0.5 * th
    return complex(pts[int(np.argmax(np.abs(evaluate(psi0, pts))))])


def second_companion(A: OperatorTruncation, T: int, z_ref: complex | None = None,
                     rank_tol: float = 1e-10) -> CompanionData:
    if A.N < 2 * T:
        raise TruncationTooDeep(f"G to order {T} needs N >= {2 * T}, operator has N={A.N}")
    if rank_estimate(A, rank_tol) < 2:
        raise RankTooLow("the second companion function needs rank >= 2")
    psi0, psi1 = A.column(0), A.column(1)
    if psi0.is_zero():
        raise Psi0Zero("psi_0 vanishes identically")
    if z_ref is None:
        z_ref = _reference_point(psi0)
    cols = tuple(A.column(n) for n in range(2 * T + 1))
    proto = CompanionData(psi0, psi1, T, complex(z_ref), np.zeros(2 * T + 1), (), cols)
    c = proto.c_at(np.asarray(z_ref, dtype=complex))
    G_coeffs = tuple(
        ComplexPoly([c[2 * n - j] * factorial(2 * n - j) * comb(n, j) * 2**j for j in range(n + 1)])
        for n in range(T + 1)
    )
    return CompanionData(psi0, psi1, T, complex(z_ref), c, G_coeffs, cols)
