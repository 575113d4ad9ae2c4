"""Dense complex polynomials in the monomial basis.

Coefficients are stored ascending: ``coeffs[n]`` multiplies ``z**n``.
Everything here is a pure function on immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEG_TOL = 1e-12
CLUSTER_TOL = 1e-7


class PolynomialError(ValueError):
    pass


class ZeroPolynomial(PolynomialError):
    pass


class DegreeZero(PolynomialError):
    pass


class NonConvergence(PolynomialError):
    pass


class DivisorZero(PolynomialError):
    pass


def _as_coeffs(values) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=complex)).ravel()
    if arr.size == 0:
        arr = np.zeros(1, dtype=complex)
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ComplexPoly:
    """Polynomial with complex coefficients, ascending order.

    ``deg_tol`` is relative: a coefficient counts towards the degree only if
    its modulus exceeds ``deg_tol * max|coeff|``.
    """

    coeffs: np.ndarray
    deg_tol: float = field(default=DEG_TOL)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable[complex], lead: complex = 1.0) -> "ComplexPoly":
        c = np.array([1.0 + 0j])
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        return cls(lead * c)

    @classmethod
    def monomial(cls, n: int, scale: complex = 1.0) -> "ComplexPoly":
        c = np.zeros(n + 1, dtype=complex)
        c[n] = scale
        return cls(c)

    @classmethod
    def constant(cls, value: complex) -> "ComplexPoly":
        return cls([value])

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    @property
    def degree(self) -> int:
        """Degree under the relative tolerance; -1 for the zero polynomial."""
        mags = np.abs(self.coeffs)
        top = mags.max()
        if top == 0.0:
            return -1
        idx = np.nonzero(mags > self.deg_tol * top)[0]
        return int(idx[-1])

    def is_zero(self, atol: float = 0.0) -> bool:
        return self.scale <= atol

    def trimmed(self) -> "ComplexPoly":
        d = self.degree
        if d < 0:
            return ComplexPoly([0.0], self.deg_tol)
        return ComplexPoly(self.coeffs[: d + 1], self.deg_tol)

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(max(length, self.coeffs.size), dtype=complex)
        out[: self.coeffs.size] = self.coeffs
        return out

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other):
        other = _coerce(other)
        n = max(self.coeffs.size, other.coeffs.size)
        return ComplexPoly(self.padded(n) + other.padded(n))

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, ComplexPoly):
            return multiply(self, other)
        return ComplexPoly(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ComplexPoly([1.0])
        for _ in range(n):
            out = multiply(out, self)
        return out

    def allclose(self, other, atol: float = 1e-12) -> bool:
        other = _coerce(other)
        n = max(self.coeffs.size, other.coeffs.size)
        return bool(np.all(np.abs(self.padded(n) - other.padded(n)) <= atol))

    def __repr__(self):
        return f"ComplexPoly({np.round(self.trimmed().coeffs, 12).tolist()})"

    def to_json(self) -> dict:
        return {"coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc: dict) -> "ComplexPoly":
        try:
            vals = [json_complex(v) for v in doc["coeffs"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise PolynomialError(f"malformed polynomial JSON: {exc}") from exc
        return cls(vals)


def json_complex(v) -> complex:
    """A JSON number or an ``[re, im]`` pair."""
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(float(v))
    re, im = v
    return complex(float(re), float(im))


def _coerce(p) -> ComplexPoly:
    if isinstance(p, ComplexPoly):
        return p
    return ComplexPoly([p])


def evaluate(p: ComplexPoly, z):
    """Horner evaluation, highest coefficient first; works on arrays of z."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in p.coeffs[::-1]:
        acc = acc * z + c
    if acc.ndim == 0:
        return complex(acc)
    return acc


def multiply(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    return ComplexPoly(np.convolve(p.coeffs, q.coeffs))


def compose(p: ComplexPoly, phi: ComplexPoly) -> ComplexPoly:
    """Return p(phi(z)), by Horner's rule over polynomials."""
    p = p.trimmed()
    acc = ComplexPoly([p.coeffs[-1]])
    for c in p.coeffs[-2::-1]:
        acc = multiply(acc, phi) + c
    return acc


def derivative(p: ComplexPoly, order: int = 1) -> ComplexPoly:
    c = p.coeffs
    for _ in range(order):
        if c.size <= 1:
            return ComplexPoly([0.0])
        c = c[1:] * np.arange(1, c.size)
    return ComplexPoly(c)


def shift_argument(p: ComplexPoly, center: complex, scale: complex = 1.0) -> ComplexPoly:
    """Coefficients of u -> p(center + scale*u)."""
    return compose(p, ComplexPoly([center, scale]))


@dataclass(frozen=True)
class RootSet:
    roots: tuple  # distinct root values
    multiplicities: tuple
    residual: float
    residual_bound: float

    def all_roots(self) -> np.ndarray:
        out = []
        for r, m in zip(self.roots, self.multiplicities):
            out.extend([r] * m)
        return np.array(out, dtype=complex)

    @property
    def degree(self) -> int:
        return int(sum(self.multiplicities))


def _cluster(vals: np.ndarray, tol: float):
    remaining = list(vals)
    roots, mults = [], []
    while remaining:
        seed = remaining.pop(0)
        group = [seed]
        changed = True
        while changed:
            changed = False
            for v in list(remaining):
                if min(abs(v - g) for g in group) <= tol:
                    group.append(v)
                    remaining.remove(v)
                    changed = True
        roots.append(complex(np.mean(group)))
        mults.append(len(group))
    order = sorted(range(len(roots)), key=lambda i: (roots[i].real, roots[i].imag))
    return tuple(roots[i] for i in order), tuple(mults[i] for i in order)


def roots(p: ComplexPoly, cluster_tol: float = CLUSTER_TOL) -> RootSet:
    """All complex roots with multiplicity.

    Only exactly zero leading coefficients are dropped: a tiny leading
    coefficient can be genuine (compositions spread coefficient magnitudes
    over many decades), and dropping it misplaces roots. Eigenvalues of the
    companion matrix are computed for p(s u) with s balancing the end
    coefficients, then polished by one Newton step per root (kept only if it
    lowers |p|), then clustered when closer than ``cluster_tol``.
    """
    c = np.trim_zeros(np.asarray(p.coeffs, dtype=complex), "b")
    if c.size == 0:
        raise ZeroPolynomial("the zero polynomial has no finite root set")
    if c.size == 1:
        raise DegreeZero("a nonzero constant has no roots")
    t = ComplexPoly(c, p.deg_tol)
    d = c.size - 1
    lead = c[-1]
    # exact zero roots first: they are common (shifted outer functions, z**n factors)
    nzero = int(np.argmax(np.abs(c) > 0))
    core = c[nzero:]
    found = [0j] * nzero
    m = core.size - 1
    if m == 1:
        found.append(-core[0] / core[1])
    elif m > 1:
        s = (abs(core[0]) / abs(core[-1])) ** (1.0 / m)
        with np.errstate(all="ignore"):
            scaled = core * s ** np.arange(m + 1)
            last = -scaled[:-1] / scaled[-1]
        if not (np.isfinite(s) and s > 0 and np.all(np.isfinite(last))):
            # balancing under- or overflowed; solve unscaled
            s, last = 1.0, -core[:-1] / core[-1]
        comp = np.zeros((m, m), dtype=complex)
        comp[1:, :-1] = np.eye(m - 1)
        comp[:, -1] = last
        try:
            eig = np.linalg.eigvals(comp) * s
        except np.linalg.LinAlgError as exc:
            raise NonConvergence(f"eigenvalue solver failed for degree {m}: {exc}") from exc
        if not np.all(np.isfinite(eig)):
            raise NonConvergence(f"non-finite eigenvalues for degree {m}: {eig}")
        dp = derivative(t)
        for r in eig:
            pr = evaluate(t, r)
            dr = evaluate(dp, r)
            if dr != 0:
                cand = r - pr / dr
                if np.isfinite(cand) and abs(evaluate(t, cand)) < abs(pr):
                    r = cand
            found.append(complex(r))
    vals = np.array(found, dtype=complex)
    rts, mults = _cluster(vals, cluster_tol)
    absr = np.abs(vals)
    residual = float(np.max(np.abs(evaluate(t, vals)))) / abs(lead)
    # backward-error scale: eps * sum |c_k| |r|^k, with slack for the eigen solver
    scale = max(float(np.sum(np.abs(c) * np.max(np.maximum(absr, 1.0)) ** np.arange(c.size))), 1.0)
    bound = 1e3 * np.finfo(float).eps * d * scale / abs(lead)
    return RootSet(rts, mults, residual, float(bound))


def divide_exact(p: ComplexPoly, q: ComplexPoly, tol: float = 1e-10):
    """Return r with p = q*r, or None when no such r fits within ``tol*||p||``.

    The quotient is the least-squares solution of the convolution system,
    so near-exact divisions in floating point are still recognised.
    """
    q = q.trimmed()
    if q.degree < 0:
        raise DivisorZero("division by the zero polynomial")
    # small trailing coefficients of p are data, not noise: only exact zeros go
    pc = np.trim_zeros(p.coeffs, "b")
    if pc.size == 0:
        return ComplexPoly([0.0])
    dq, dp = q.degree, pc.size - 1
    if dp < dq:
        return None
    nr = dp - dq + 1
    conv = np.zeros((dp + 1, nr), dtype=complex)
    for j in range(nr):
        conv[j : j + dq + 1, j] = q.coeffs
    r, *_ = np.linalg.lstsq(conv, pc, rcond=None)
    rem = pc - conv @ r
    if np.linalg.norm(rem) <= tol * np.linalg.norm(pc):
        return ComplexPoly(r)
    return None


def series_divide(num: np.ndarray, den: np.ndarray, length: int) -> np.ndarray:
    """First ``length`` Taylor coefficients of num/den, requires den[0] != 0."""
    num = np.asarray(num, dtype=complex)
    den = np.asarray(den, dtype=complex)
    if den[0] == 0:
        raise DivisorZero("series division needs a nonzero constant term")
    out = np.zeros(length, dtype=complex)
    for k in range(length):
        acc = num[k] if k < num.size else 0.0
        hi = min(k, den.size - 1)
        if hi >= 1:
            acc = acc - np.dot(den[1 : hi + 1], out[k - hi : k][::-1])
        out[k] = acc / den[0]
    return out


def as_poly(values: Sequence[complex] | ComplexPoly) -> ComplexPoly:
    return values if isinstance(values, ComplexPoly) else ComplexPoly(values)
