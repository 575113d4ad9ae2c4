"""Seeded experiment runners behind the scripts in ``scripts/``.

Each runner takes a dataclass config and returns a JSON-ready summary dict.
``config_parser`` turns a config class into an argparse parser so scripts
stay one-liners.
"""

from __future__ import annotations

import argparse
import dataclasses
import time
from dataclasses import dataclass

import numpy as np

from .analysis import canonical_product, classify, coeff_bound_check, falsify
from .hardy import OuterStatus, classify_functional, jensen_outer_test, root_outer_test
from .operators import apply, make_product_composition
from .polycore import ComplexPoly
from .regions import is_stable, random_stable_poly, unit_disk
from .samplers import mutant, random_conforming, random_disk_operator


def config_parser(cls, description: str) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        ap.add_argument(f"--{f.name.replace('_', '-')}", type=type(f.default), default=f.default)
    return ap


def config_from_args(cls, args: argparse.Namespace):
    return cls(**{f.name: getattr(args, f.name) for f in dataclasses.fields(cls)})


@dataclass(frozen=True)
class SufficiencyConfig:
    instances: int = 200
    polys: int = 100
    max_degree: int = 8
    N: int = 8
    seed: int = 0


def run_sufficiency(cfg: SufficiencyConfig) -> dict:
    """Images of Omega_1-stable polynomials under conforming M_psi C_phi."""
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    counts = {"stable": 0, "unstable": 0, "borderline": 0, "zero_poly": 0}
    for _ in range(cfg.instances):
        inst = random_conforming(rng)
        A = make_product_composition(inst.psi, inst.phi, cfg.N)
        for _ in range(cfg.polys):
            p = random_stable_poly(inst.omega1, int(rng.integers(1, cfg.max_degree + 1)), rng=rng)
            counts[is_stable(apply(A, p), inst.omega2).status.value] += 1
    return {"config": dataclasses.asdict(cfg), "images": counts, "seconds": time.perf_counter() - t0}


@dataclass(frozen=True)
class RoundTripConfig:
    operators: int = 200
    N: int = 6
    seed: int = 0


def run_round_trip(cfg: RoundTripConfig) -> dict:
    """Classify constructed M_psi C_phi and report recovery errors."""
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    verdicts, err_psi, err_phi = {}, [], []
    for _ in range(cfg.operators):
        inst = random_conforming(rng)
        res = classify(make_product_composition(inst.psi, inst.phi, cfg.N), inst.omega1, inst.omega2)
        verdicts[res.verdict] = verdicts.get(res.verdict, 0) + 1
        if res.verdict == "ProductComposition":
            err_psi.append(_rel_err(res.psi, inst.psi))
            err_phi.append(_rel_err(res.phi, inst.phi))
    return {"config": dataclasses.asdict(cfg), "verdicts": verdicts,
            "max_rel_err_psi": max(err_psi, default=None), "max_rel_err_phi": max(err_phi, default=None),
            "seconds": time.perf_counter() - t0}


def _rel_err(got: ComplexPoly, want: ComplexPoly) -> float:
    n = max(got.coeffs.size, want.coeffs.size)
    return float(np.linalg.norm(got.padded(n) - want.padded(n)) / want.norm())


@dataclass(frozen=True)
class FalsifyConfig:
    mutants: int = 20
    budget: int = 10_000
    N: int = 6
    seed: int = 0


def run_falsify(cfg: FalsifyConfig) -> dict:
    """Draws needed to refute mutated disk operators (budget + 1 means not found)."""
    rng = np.random.default_rng(cfg.seed)
    disk = unit_disk(closed=True)
    t0 = time.perf_counter()
    rows = []
    for i in range(cfg.mutants):
        _, _, A = random_disk_operator(rng, cfg.N)
        B, label = mutant(rng, A)
        draws = _draws_to_witness(B, disk, cfg.budget, i)
        rows.append({"mutation": label, "draws": draws})
    found = [r["draws"] for r in rows if r["draws"] <= cfg.budget]
    median = float(np.median(found)) if found else None
    return {"config": dataclasses.asdict(cfg), "found": len(found), "median_draws": median,
            "mutants": rows, "seconds": time.perf_counter() - t0}


def _draws_to_witness(B, omega, budget: int, seed: int) -> int:
    # doubling search on the budget; falsify is deterministic per seed, so a
    # witness found at budget b is found at every larger budget too
    b = 1
    while b <= budget:
        if falsify(B, omega, omega, b, seed) is not None:
            lo, hi = b // 2, b
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if falsify(B, omega, omega, mid, seed) is not None:
                    hi = mid
                else:
                    lo = mid
            return hi
        b *= 2
    return budget + 1 if falsify(B, omega, omega, budget, seed) is None else budget


@dataclass(frozen=True)
class HardyConfig:
    polys: int = 1000
    sequences: int = 500
    max_degree: int = 12
    seed: int = 0


def run_hardy(cfg: HardyConfig) -> dict:
    """Jensen-deficit vs root-location outer tests, and functional recovery."""
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    table = {}
    for i in range(cfg.polys):
        d = int(rng.integers(1, cfg.max_degree + 1))
        if i % 2:
            p = ComplexPoly(rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1))
        else:
            rs = rng.uniform(0, 2, size=d) * np.exp(2j * np.pi * rng.uniform(size=d))
            p = ComplexPoly.from_roots(rs)
        key = f"{jensen_outer_test(p).status.value}/{root_outer_test(p).status.value}"
        table[key] = table.get(key, 0) + 1
    recovered = rejected = 0
    for _ in range(cfg.sequences):
        sigma = complex(*rng.normal(size=2))
        z0 = 0.95 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        rho = sigma * z0 ** np.arange(int(rng.integers(3, 16)))
        pe = classify_functional(rho)
        recovered += int(pe is not None and abs(pe.z0 - z0) <= 1e-12)
        bumped = rho.copy()
        bumped[int(rng.integers(2, rho.size))] += 1e-6 * abs(sigma)
        rejected += int(classify_functional(bumped) is None)
    agree = sum(v for k, v in table.items() if k.split("/")[0] == k.split("/")[1])
    return {"config": dataclasses.asdict(cfg), "jensen/roots": table, "agree": agree,
            "borderline": sum(v for k, v in table.items() if OuterStatus.BORDERLINE.value in k),
            "functional_recovered": recovered, "perturbed_rejected": rejected,
            "seconds": time.perf_counter() - t0}


@dataclass(frozen=True)
class CanonicalConfig:
    zero_sets: int = 100
    T: int = 30
    max_zeros: int = 12
    seed: int = 0


def run_canonical(cfg: CanonicalConfig) -> dict:
    """Worst ratio |c_n| / ((gamma + |sigma|)^n / n!) per n over random zero sets."""
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    worst = np.zeros(cfg.T + 1)
    failures = 0
    for _ in range(cfg.zero_sets):
        k = int(rng.integers(1, cfg.max_zeros + 1))
        zs = (0.2 + 5 * rng.uniform(size=k)) * np.exp(2j * np.pi * rng.uniform(size=k))
        cp = canonical_product(zs, cfg.T)
        bound = cp.bound()
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(bound > 0, np.abs(cp.c) / bound, 0.0)
        worst = np.maximum(worst, ratio)
        failures += int(not coeff_bound_check(cp))
    return {"config": dataclasses.asdict(cfg), "failures": failures,
            "worst_ratio_by_n": [float(v) for v in worst], "seconds": time.perf_counter() - t0}
