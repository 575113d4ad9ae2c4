"""Command-line frontend.

Every command prints one JSON document on stdout and exits with
0 (positive verdict), 1 (negative verdict, witness attached where there is
one), 2 (inconclusive or borderline) or 3 (usage or input error).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from . import hardy
from .analysis import canonical, charfn
from .analysis import structure as cls
from .operators import (
    OperatorTruncation,
    apply,
    identity,
    make_dilation,
    make_pcd,
    make_product_composition,
    make_rank1,
)
from .polycore import ComplexPoly, PolynomialError, evaluate, json_complex
from .regions import (
    StabilityStatus,
    is_stable,
    region_from_json,
    unit_disk,
)

EXIT_OK, EXIT_NEG, EXIT_UNSURE, EXIT_INPUT = 0, 1, 2, 3

# payload schema per subcommand; errors always use "error"
SCHEMAS = {"stable": "stable", "classify": "classify", "falsify": "falsify", "bb": "bb",
           "apply": "poly", "construct": "operator", "outer": "outer", "minphase": "minphase",
           "classify-h2": "classify-h2", "selfcheck": "selfcheck"}


def load_schema(name: str) -> dict:
    """A shipped JSON schema, by subcommand or schema name."""
    name = SCHEMAS.get(name, name)
    return json.loads(resources.files("stabil").joinpath("schemas", f"{name}.json").read_text())


class InputError(Exception):
    pass


def default_tol() -> float:
    raw = os.environ.get("STABIL_DEFAULT_TOL")
    if raw is None:
        return cls.DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"STABIL_DEFAULT_TOL is not a number: {raw!r}")


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}")


def _parse_poly(spec: str) -> ComplexPoly:
    """A file path, a JSON polynomial, or a comma-separated list of coefficients."""
    if Path(spec).is_file():
        doc = _load_json(spec)
    else:
        try:
            doc = json.loads(spec)
        except json.JSONDecodeError:
            try:
                return ComplexPoly([complex(s.strip().replace(" ", "")) for s in spec.split(",")])
            except ValueError:
                raise InputError(f"cannot parse polynomial {spec!r}")
    try:
        if isinstance(doc, (int, float)):
            return ComplexPoly([json_complex(doc)])
        if isinstance(doc, list):
            return ComplexPoly([json_complex(v) for v in doc])
        return ComplexPoly.from_json(doc)
    except (PolynomialError, TypeError, ValueError) as exc:
        raise InputError(f"malformed polynomial: {exc}")


def _load_operator(path: str) -> OperatorTruncation:
    try:
        return OperatorTruncation.from_json(_load_json(path))
    except (ValueError, PolynomialError) as exc:
        raise InputError(str(exc))


def _load_region(path: str):
    try:
        return region_from_json(_load_json(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed region: {exc}")


def _cj(z):
    return None if z is None else [float(z.real), float(z.imag)]


# ---------------------------------------------------------------------------
# commands; each returns (exit code, payload)


def cmd_stable(args):
    p = _parse_poly(args.poly)
    st = is_stable(p, _load_region(args.region))
    code = {StabilityStatus.STABLE: EXIT_OK, StabilityStatus.UNSTABLE: EXIT_NEG,
            StabilityStatus.BORDERLINE: EXIT_UNSURE, StabilityStatus.ZERO_POLY: EXIT_UNSURE}[st.status]
    return code, st.to_json()


_VERDICT_CODE = {"Rank1": EXIT_OK, "ProductComposition": EXIT_OK,
                 "NotPreserving": EXIT_NEG, "Inconclusive": EXIT_UNSURE}


def cmd_classify(args):
    A = _load_operator(args.operator)
    o1, o2 = _load_region(args.region1), _load_region(args.region2)
    res = cls.classify(A, o1, o2, tol=args.tol, budget=args.budget, rng_seed=args.seed,
                       grid_density=args.grid)
    doc = res.to_json()
    doc.update({"tol": args.tol, "budget": args.budget, "seed": args.seed})
    return _VERDICT_CODE[res.verdict], doc


def cmd_falsify(args):
    A = _load_operator(args.operator)
    o1, o2 = _load_region(args.region1), _load_region(args.region2)
    cls._check_preconditions(o1, o2)
    found = cls.falsify(A, o1, o2, args.budget, args.seed)
    if found is None:
        return EXIT_UNSURE, {"found": False, "budget": args.budget, "seed": args.seed}
    return EXIT_NEG, {"found": True, "witness": found[0].to_json(), "image_root": _cj(found[1]),
                      "budget": args.budget, "seed": args.seed}


def cmd_bb(args):
    A = _load_operator(args.operator)
    ok = cls.bb_certificate(A, args.samples, args.seed)
    return (EXIT_OK if ok else EXIT_NEG), {"passes": ok, "samples": args.samples, "seed": args.seed}


def cmd_apply(args):
    A = _load_operator(args.operator)
    try:
        img = apply(A, _parse_poly(args.poly))
    except ValueError as exc:
        raise InputError(str(exc))
    return EXIT_OK, img.to_json()


def _truncated(coeffs, L):
    return coeffs if L is None else coeffs[: L + 1]


def _outer_code(v):
    return {hardy.OuterStatus.OUTER: EXIT_OK, hardy.OuterStatus.NOT_OUTER: EXIT_NEG,
            hardy.OuterStatus.BORDERLINE: EXIT_UNSURE}[v.status]


def cmd_outer(args):
    doc = _load_json(args.h2)
    try:
        f = hardy.H2Trunc(_truncated(hardy.H2Trunc.from_json(doc).coeffs, args.truncation))
    except (PolynomialError, ValueError) as exc:
        raise InputError(str(exc))
    if f.is_zero():
        raise InputError("the zero function has no outer verdict")
    tol = args.tol
    if tol is None:
        tol = default_tol() if "STABIL_DEFAULT_TOL" in os.environ else hardy.DEFAULT_TOL
    v = hardy.jensen_outer_test(f, args.K, tol)
    return _outer_code(v), v.to_json()


def _load_signal(path: str) -> hardy.Signal:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    try:
        return hardy.Signal.from_json(json.loads(text))
    except json.JSONDecodeError:
        try:
            return hardy.Signal.from_text(text)
        except ValueError as exc:
            raise InputError(f"malformed signal: {exc}")
    except ValueError as exc:
        raise InputError(str(exc))


def cmd_minphase(args):
    s = _load_signal(args.signal)
    try:
        v = hardy.minimum_phase_test(s)
    except hardy.ZeroSignal as exc:
        raise InputError(str(exc))
    doc = v.to_json()
    doc["minimum_phase"] = v.outer
    n, g = hardy.shifted_outer_status(s.samples)
    doc["shift"] = n
    doc["shifted_minimum_phase"] = bool(g is not None and g.outer)
    return _outer_code(v), doc


def cmd_classify_h2(args):
    A = _load_operator(args.operator)
    if args.truncation is not None:
        A = OperatorTruncation(A.matrix[: args.truncation + 1])
    try:
        res = hardy.classify_h2_operator(A, args.mode, args.tol, args.budget, args.seed)
    except hardy.TruncationTooShallow as exc:
        raise InputError(str(exc))
    return _VERDICT_CODE[res.verdict], res.to_json()


def cmd_construct(args):
    try:
        A = _construct(args)
    except ValueError as exc:
        raise InputError(str(exc))
    return EXIT_OK, A.to_json()


def _construct(args):
    N = args.N
    kind = args.kind
    if kind == "identity":
        A = identity(N)
    elif kind == "dilation":
        A = make_dilation(complex(args.tau), N)
    elif kind == "rank1":
        nu = [complex(v) for v in args.nu.split(",")]
        A = make_rank1(nu, _parse_poly(args.psi), N)
    elif kind == "product-composition":
        A = make_product_composition(_parse_poly(args.psi), _parse_poly(args.phi), N)
    elif kind == "pcd":
        A = make_pcd(_parse_poly(args.psi), _parse_poly(args.phi), args.n_deriv, N)
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(kind)
    return A


# ---------------------------------------------------------------------------
# self-check suites; each returns (passed, detail)


def _suite_identity(n_max, trials, rng):
    for _ in range(trials):
        c = [Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 20))) for _ in range(2 * n_max + 1)]
        beta = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 10)))
        for n in range(n_max + 1):
            if not canonical.combinatorial_identity_check(n, c, beta):
                return False, f"identity fails at n={n}"
    return True, f"n <= {n_max}, {trials} rational inputs"


def _suite_bounds(trials, rng):
    for _ in range(trials):
        k = int(rng.integers(1, 8))
        zs = (0.5 + 3 * rng.uniform(size=k)) * np.exp(2j * np.pi * rng.uniform(size=k))
        cp = canonical.canonical_product(zs, 30)
        if abs(cp.c[0] - 1) > 1e-14 or abs(cp.c[1]) > 1e-14 or not canonical.coeff_bound_check(cp):
            return False, f"bound fails for zeros {zs}"
    return True, f"{trials} zero sets, T=30"


def _suite_moment_formula(rng):
    psi = ComplexPoly([1.0, 0.3 - 0.2j])
    phi = ComplexPoly([0.1, 0.5, 0.2j])
    A = make_product_composition(psi, phi, 6)
    c = np.zeros(7)
    c[0] = 1.0
    z = 0.6 * np.sqrt(rng.uniform(size=20)) * np.exp(2j * np.pi * rng.uniform(size=20))
    for zk in z:
        b = complex(evaluate(phi, zk))
        for n in range(7):
            got = complex(evaluate(psi, zk)) * canonical.moment_formula(c, b, n)
            want = complex(evaluate(A.column(n), zk))
            if abs(got - want) > 1e-10 * max(1.0, abs(want)):
                return False, f"moment {n} at z={zk:.3f}: {got} vs {want}"
    # hand value with a nontrivial coefficient sequence
    if abs(canonical.moment_formula([1, 0, -1 / 8], 1.0, 2) - 0.75) > 1e-14:
        return False, "reference value 3/4 not reproduced"
    return True, "psi_0 beta^n reproduces the moments"


def _valid_operator(rng, N=6):
    a = rng.uniform(1.5, 3.0) * np.exp(2j * np.pi * rng.uniform())
    psi = ComplexPoly.from_roots([a])
    k = int(rng.integers(1, 3))
    coeffs = rng.normal(size=k + 1) + 1j * rng.normal(size=k + 1)
    coeffs *= rng.uniform(0.3, 0.9) / np.sum(np.abs(coeffs))
    return psi, ComplexPoly(coeffs), make_product_composition(psi, ComplexPoly(coeffs), N)


def _suite_g_trivial(trials, rng):
    for _ in range(trials):
        _, phi, A = _valid_operator(rng, 12)
        if phi.trimmed().degree < 1:
            continue
        cd = charfn.second_companion(A, 6)
        z = 0.4 * np.exp(2j * np.pi * rng.uniform(size=8))
        w = np.exp(2j * np.pi * rng.uniform(size=8))
        for zk in z:
            for wk in w:
                g = cd.G_definition(zk, wk)
                if abs(g - 1) > cd.truncation_bound(zk, wk):
                    return False, f"|G-1| = {abs(g - 1):.2e} at z={zk:.3f}, w={wk:.3f}"
        rep = charfn.f2_zero_scan(A, 6, z, w)
        if not rep.zero_free:
            return False, "F_2 scan reached the error bound"
    return True, f"{trials} operators"


def _suite_oracle(trials, rng):
    disagree = 0
    for _ in range(trials):
        d = int(rng.integers(1, 13))
        inside = rng.uniform(size=d) < 0.5
        mod = np.where(inside, 0.9 * np.sqrt(rng.uniform(size=d)), 1.1 + 3 * rng.uniform(size=d))
        p = ComplexPoly.from_roots(mod * np.exp(2j * np.pi * rng.uniform(size=d)))
        a = hardy.jensen_outer_test(p)
        b = hardy.root_outer_test(p)
        if hardy.OuterStatus.BORDERLINE in (a.status, b.status):
            continue
        disagree += a.status is not b.status
    return disagree == 0, f"{disagree} disagreements over {trials} polynomials"


def _suite_classifier(trials, rng):
    d = unit_disk(closed=True)
    for _ in range(trials):
        psi, phi, A = _valid_operator(rng)
        res = cls.classify(A, d, d, budget=50)
        if phi.trimmed().degree < 1:
            continue
        if not isinstance(res, cls.ProductComposition) or not res.phi.allclose(phi, 1e-8):
            return False, f"misclassified as {res.verdict}"
    bad = OperatorTruncation.from_columns([[1.0], [0.0, 1.0], [3.0]])
    if cls.classify(bad, d, d).verdict != "NotPreserving":
        return False, "columns [1, z, 3] not refuted"
    return True, f"{trials} constructed operators plus one violation"


def _suite_moment_bounds(trials, rng):
    d = unit_disk()
    for _ in range(trials):
        _, phi, A = _valid_operator(rng)
        if phi.trimmed().degree < 1:
            continue
        if not cls.moment_bound_check(A, d).ok:
            return False, "ratio bound exceeded"
    return True, f"{trials} operators"


def run_selfcheck(level: str, seed: int = 0):
    rng = np.random.default_rng(seed)
    suites = [
        ("exact-identity", lambda: _suite_identity(8 if level == "fast" else 12, 5 if level == "fast" else 20, rng)),
        ("coefficient-bound", lambda: _suite_bounds(20, rng)),
        ("moment-formula", lambda: _suite_moment_formula(rng)),
    ]
    if level == "full":
        suites += [
            ("g-triviality", lambda: _suite_g_trivial(10, rng)),
            ("oracle-agreement", lambda: _suite_oracle(200, rng)),
            ("classifier", lambda: _suite_classifier(10, rng)),
            ("moment-bounds", lambda: _suite_moment_bounds(10, rng)),
        ]
    results, first_fail = [], None
    for name, fn in suites:
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing suite is a failing suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append({"suite": name, "passed": bool(ok), "detail": detail,
                        "seconds": round(time.perf_counter() - t0, 3)})
        if not ok and first_fail is None:
            first_fail = name
    return first_fail, results


def cmd_selfcheck(args):
    first_fail, results = run_selfcheck(args.level, args.seed)
    doc = {"level": args.level, "passed": first_fail is None, "first_failure": first_fail,
           "suites": results}
    if not args.timings:
        for r in doc["suites"]:
            r.pop("seconds")
    return (EXIT_OK if first_fail is None else EXIT_NEG), doc


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stabil", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, budget=cls.DEFAULT_BUDGET):
        p.add_argument("--tol", type=float, default=None, help="numerical tolerance")
        p.add_argument("--budget", type=int, default=budget, help="random draws for falsification")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--grid", type=int, default=48, help="grid density for region sampling")
        p.add_argument("--truncation", type=int, default=None, help="keep coefficients up to this degree")

    p = sub.add_parser("stable", help="is a polynomial zero-free on a region")
    p.add_argument("poly")
    p.add_argument("region")
    p.set_defaults(func=cmd_stable)

    p = sub.add_parser("classify", help="decide the structure of a stability-transforming operator")
    p.add_argument("operator")
    p.add_argument("region1")
    p.add_argument("region2")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("falsify", help="search for a stability violation")
    p.add_argument("operator")
    p.add_argument("region1")
    p.add_argument("region2")
    common(p)
    p.set_defaults(func=cmd_falsify)

    p = sub.add_parser("bb", help="test images of (1 + wz)^n for unit-disk stability")
    p.add_argument("operator")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bb)

    p = sub.add_parser("apply", help="apply an operator to a polynomial")
    p.add_argument("operator")
    p.add_argument("poly")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("construct", help="write an operator truncation as JSON")
    p.add_argument("kind", choices=["identity", "dilation", "rank1", "product-composition", "pcd"])
    p.add_argument("-N", type=int, required=True, help="source degree bound")
    p.add_argument("--psi", default="1")
    p.add_argument("--phi", default="0,1")
    p.add_argument("--nu", default="1", help="comma-separated values nu(z^n)")
    p.add_argument("--tau", default="1")
    p.add_argument("--n-deriv", type=int, default=1)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("outer", help="Jensen outer test of a truncated H^2 function")
    p.add_argument("h2")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("-K", type=int, default=hardy.DEFAULT_K, help="circle samples")
    p.add_argument("--truncation", type=int, default=None)
    p.set_defaults(func=cmd_outer)

    p = sub.add_parser("minphase", help="minimum-phase test of a causal signal")
    p.add_argument("signal", help="JSON {'samples': ...} or one real value per line")
    p.set_defaults(func=cmd_minphase)

    p = sub.add_parser("classify-h2", help="classify an outer-preserving operator")
    p.add_argument("operator")
    p.add_argument("--mode", choices=["outer", "shifted"], default="outer")
    common(p, budget=2000)
    p.set_defaults(func=cmd_classify_h2)

    p = sub.add_parser("selfcheck", help="run the invariant suites")
    p.add_argument("--level", choices=["fast", "full"], default="fast")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timings", action="store_true", help="include wall-clock seconds per suite")
    p.set_defaults(func=cmd_selfcheck)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        if getattr(args, "tol", "absent") is None and args.command != "outer":
            args.tol = default_tol()
        code, payload = args.func(args)
    except (InputError, cls.PreconditionViolated, PolynomialError, ValueError) as exc:
        print(f"stabil: {exc}", file=sys.stderr)
        code, payload = EXIT_INPUT, {"error": str(exc)}
    except Exception as exc:  # keep the exit-code contract even on internal faults
        print(f"stabil: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        code, payload = EXIT_INPUT, {"error": f"internal error: {type(exc).__name__}: {exc}"}
    print(json.dumps(payload, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
