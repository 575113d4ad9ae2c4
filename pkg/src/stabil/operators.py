"""Finite truncations of linear operators on polynomials.

An operator is stored by the images of the monomials: column ``n`` of
``matrix`` holds the coefficients of A(z**n), for 0 <= n <= N.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Sequence

import numpy as np

from .polycore import ComplexPoly, compose, multiply


class DegreeOverflow(ValueError):
    pass


class TauZero(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class OperatorTruncation:
    matrix: np.ndarray  # shape (M+1, N+1)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex, ndmin=2)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_columns(cls, columns: Sequence, M: int | None = None) -> "OperatorTruncation":
        cols = [c if isinstance(c, ComplexPoly) else ComplexPoly(c) for c in columns]
        need = max(c.coeffs.size for c in cols) - 1
        if M is None:
            M = need
        elif need > M:
            # only genuinely nonzero tails count as overflow
            for c in cols:
                if c.coeffs.size > M + 1 and np.any(c.coeffs[M + 1 :] != 0):
                    raise DegreeOverflow(f"column degree exceeds max target degree {M}")
        mat = np.zeros((M + 1, len(cols)), dtype=complex)
        for j, c in enumerate(cols):
            k = min(c.coeffs.size, M + 1)
            mat[:k, j] = c.coeffs[:k]
        return cls(mat)

    @property
    def N(self) -> int:
        return self.matrix.shape[1] - 1

    @property
    def M(self) -> int:
        return self.matrix.shape[0] - 1

    def column(self, n: int) -> ComplexPoly:
        return ComplexPoly(self.matrix[:, n])

    @property
    def columns(self) -> list:
        return [self.column(n) for n in range(self.N + 1)]

    def effective_target_degree(self) -> int:
        nz = np.nonzero(np.any(self.matrix != 0, axis=1))[0]
        return int(nz[-1]) if nz.size else -1

    def __call__(self, p: ComplexPoly) -> ComplexPoly:
        return apply(self, p)

    def to_json(self) -> dict:
        return {"N": self.N, "columns": [self.column(n).to_json() for n in range(self.N + 1)]}

    @classmethod
    def from_json(cls, doc: dict) -> "OperatorTruncation":
        try:
            cols = [ComplexPoly.from_json(c) for c in doc["columns"]]
            N = int(doc["N"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed operator JSON: {exc}") from exc
        if len(cols) != N + 1:
            raise ValueError(f"operator JSON has {len(cols)} columns but N={N}")
        return cls.from_columns(cols)


@dataclass(frozen=True)
class MomentSequence:
    psi: tuple

    def __getitem__(self, n):
        return self.psi[n]

    def __len__(self):
        return len(self.psi)


def apply(A: OperatorTruncation, p: ComplexPoly) -> ComplexPoly:
    t = p.trimmed()
    if t.degree > A.N:
        raise DegreeOverflow(f"degree {t.degree} exceeds the operator's source bound N={A.N}")
    x = np.zeros(A.N + 1, dtype=complex)
    x[: t.coeffs.size] = t.coeffs
    return ComplexPoly(A.matrix @ x)


def moments(A: OperatorTruncation) -> MomentSequence:
    return MomentSequence(tuple(A.columns))


def identity(N: int) -> OperatorTruncation:
    return OperatorTruncation(np.eye(N + 1, dtype=complex))


def zero_operator(N: int, M: int = 0) -> OperatorTruncation:
    return OperatorTruncation(np.zeros((M + 1, N + 1), dtype=complex))


def make_product_composition(psi: ComplexPoly, phi: ComplexPoly, N: int) -> OperatorTruncation:
    """Truncation of p -> psi * (p o phi); column n is psi*phi**n."""
    psi, phi = psi.trimmed(), phi.trimmed()
    if psi.degree < 0:
        raise ValueError("psi must be nonzero")
    M = psi.degree + N * max(phi.degree, 0)
    cols, cur = [], psi
    for _ in range(N + 1):
        cols.append(cur)
        cur = multiply(cur, phi)
    return OperatorTruncation.from_columns(cols, M)


def make_multiplication(psi: ComplexPoly, N: int) -> OperatorTruncation:
    return make_product_composition(psi, ComplexPoly([0.0, 1.0]), N)


def make_composition(phi: ComplexPoly, N: int) -> OperatorTruncation:
    return make_product_composition(ComplexPoly([1.0]), phi, N)


def make_rank1(nu_coeffs: Sequence[complex], psi: ComplexPoly, N: int) -> OperatorTruncation:
    """p -> nu(p) psi, with nu given by its values on monomials."""
    nu = np.asarray(nu_coeffs, dtype=complex)
    if nu.size != N + 1:
        raise ValueError(f"need N+1={N + 1} functional values, got {nu.size}")
    psi = psi.trimmed()
    return OperatorTruncation(np.outer(psi.coeffs, nu))


def make_dilation(tau: complex, N: int) -> OperatorTruncation:
    """(D_tau p)(z) = p(tau z)."""
    if tau == 0:
        raise TauZero("dilation factor must be nonzero")
    return OperatorTruncation(np.diag(complex(tau) ** np.arange(N + 1)))


def make_pcd(psi: ComplexPoly, phi: ComplexPoly, n_deriv: int, N: int) -> OperatorTruncation:
    """p -> psi * (D^n p) o phi."""
    if n_deriv < 0:
        raise ValueError("n_deriv must be nonnegative")
    psi, phi = psi.trimmed(), phi.trimmed()
    cols = []
    for k in range(N + 1):
        if k < n_deriv:
            cols.append(ComplexPoly([0.0]))
            continue
        dk = ComplexPoly.monomial(k - n_deriv, factorial(k) / factorial(k - n_deriv))
        cols.append(multiply(psi, compose(dk, phi)))
    M = psi.degree + max(N - n_deriv, 0) * max(phi.degree, 0)
    return OperatorTruncation.from_columns(cols, max(M, 0))


def compose_operators(A: OperatorTruncation, B: OperatorTruncation) -> OperatorTruncation:
    """The truncation of A o B."""
    d = B.effective_target_degree()
    if d > A.N:
        raise DegreeOverflow(f"B reaches degree {d} but A only accepts degree <= {A.N}")
    k = d + 1
    if k <= 0:
        return zero_operator(B.N, A.M)
    return OperatorTruncation(A.matrix[:, :k] @ B.matrix[:k, :])


def is_algebra_homomorphism(A: OperatorTruncation, tol: float = 1e-10) -> bool:
    """Column 0 is 1 and A(z^{m+n}) = A(z^m) A(z^n) for m+n <= N."""
    cols = A.columns
    if not cols[0].allclose(ComplexPoly([1.0]), atol=tol):
        return False
    for s in range(2, A.N + 1):
        target = cols[s]
        scale = max(1.0, target.norm())
        for m in range(1, s // 2 + 1):
            prod = multiply(cols[m], cols[s - m])
            if not prod.allclose(target, atol=tol * scale):
                return False
    return True


def rank_estimate(A: OperatorTruncation, tol: float = 1e-10) -> int:
    sv = np.linalg.svd(A.matrix, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > tol * sv[0]))
