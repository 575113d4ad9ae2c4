"""Genus-one canonical products, their Taylor coefficients, and the moment formula."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

BOUND_SLACK = 1e-12


class ZeroAtOrigin(ValueError):
    pass


@dataclass(frozen=True)
class CanonicalProduct:
    zeros: tuple
    T: int
    c: np.ndarray  # c[0..T]
    gamma: float  # sum 1/|w_n|
    sigma_sum: complex  # sum 1/w_n

    def bound(self) -> np.ndarray:
        y = self.gamma + abs(self.sigma_sum)
        return np.array([y**n / factorial(n) for n in range(self.T + 1)])

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        acc = np.zeros_like(w)
        for cn in self.c[::-1]:
            acc = acc * w + cn
        return acc


def _factor_series(w_n: complex, T: int) -> np.ndarray:
    # e^{w/a}(1 - w/a) = sum_k (1 - k)/k! (w/a)^k
    k = np.arange(T + 1)
    inv_fact = np.array([1.0 / factorial(int(j)) for j in k])
    return (1 - k) * inv_fact * (1.0 / complex(w_n)) ** k


def canonical_product(zeros: Sequence[complex], T: int) -> CanonicalProduct:
    """Taylor coefficients c_0..c_T of prod e^{w/w_n}(1 - w/w_n)."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    zeros = tuple(complex(w) for w in zeros)
    if any(w == 0 for w in zeros):
        raise ZeroAtOrigin("canonical product zeros must be nonzero")
    c = np.zeros(T + 1, dtype=complex)
    c[0] = 1.0
    for w in zeros:
        c = np.convolve(c, _factor_series(w, T))[: T + 1]
    gamma = float(sum(1.0 / abs(w) for w in zeros))
    sigma = complex(sum(1.0 / w for w in zeros)) if zeros else 0j
    return CanonicalProduct(zeros, T, c, gamma, sigma)


def coeff_bound_check(cp: CanonicalProduct, slack: float = BOUND_SLACK) -> bool:
    """|c_n| <= (gamma + |sigma|)^n / n! + slack for every n <= T."""
    return bool(np.all(np.abs(cp.c) <= cp.bound() + slack))


def moment_formula(c: Sequence[complex], beta_val: complex, n: int) -> complex:
    """n! * sum_{j<=n} c_{n-j} beta^j / j!  (the psi_0 factor is left to the caller)."""
    if len(c) <= n:
        raise ValueError(f"need at least {n + 1} coefficients, got {len(c)}")
    acc = 0j
    for j in range(n + 1):
        acc += c[n - j] * beta_val**j / factorial(j)
    return factorial(n) * acc


def identity_sides(n: int, c: Sequence[Fraction], beta: Fraction) -> tuple[Fraction, Fraction]:
    """Both sides of the double-sum / single-sum identity behind the G expansion."""
    if len(c) < 2 * n + 1:
        raise ValueError(f"need {2 * n + 1} coefficients, got {len(c)}")
    f = factorial
    lhs = Fraction(0)
    for m in range(n + 1):
        for j in range(m + 1):
            lhs += (c[2 * m - j] * Fraction(f(2 * m - j), f(j) * f(m - j) * f(n - m))
                    * 2**j * beta ** (j + 2 * n - 2 * m))
    rhs = Fraction(0)
    for j in range(2 * n + 1):
        rhs += c[2 * n - j] * Fraction(f(2 * n), f(j) * f(n)) * beta**j
    return lhs, rhs


def combinatorial_identity_check(n: int, c: Sequence, beta) -> bool:
    """Exact rational comparison; inputs are converted with ``Fraction``."""
    c = [Fraction(x) for x in c]
    lhs, rhs = identity_sides(n, c, Fraction(beta))
    return lhs == rhs
