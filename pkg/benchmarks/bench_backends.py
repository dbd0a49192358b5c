"""Compare the compiled term kernel against the pure-Python fallback.

Each workload runs in a fresh subprocess so the backend is fixed at import
time (``SUPERQUANT_PURE_PYTHON=1`` forces the fallback).  Timings are the
best of ``--repeats`` runs of the workload body.

Usage:
    python3 benchmarks/bench_backends.py              # full comparison table
    python3 benchmarks/bench_backends.py --workloads poly-products casimir
    python3 benchmarks/bench_backends.py --worker poly-products   # internal
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction


def _rand_poly(sig, rng, nterms=12, max_exp=4):
    from superquant import SuperPolynomial

    f = SuperPolynomial.zero(sig)
    for _ in range(nterms):
        evens = tuple(rng.randint(0, max_exp) for _ in range(sig.p))
        odds = [i + 1 for i in range(sig.q) if rng.random() < 0.5]
        coeff = Fraction(rng.randint(-9, 9) or 1, rng.choice([1, 2, 3]))
        f = f + SuperPolynomial.monomial(sig, evens, odds, coeff)
    return f


def workload_poly_products():
    """Products and derivatives of dense-ish Grassmann polynomials."""
    from superquant import Signature

    sig = Signature(3, 3)
    rng = random.Random(1)
    polys = [_rand_poly(sig, rng, nterms=20) for _ in range(12)]

    def body():
        total = polys[0]
        for f in polys:
            for g in polys:
                h = f * g
                for i in range(1, sig.n + 1):
                    h = h + f.partial(i) * g.partial(i)
                total = total + h
        return total

    return body


def workload_casimir():
    """Brute-force Casimir application on a degree-2 symbol at (2,2)."""
    from superquant import Signature, casimir_apply
    from superquant.verifier import random_symbol

    sig = Signature(2, 2)
    rng = random.Random(2)
    samples = [random_symbol(sig, Fraction(1, 5), k, rng) for k in (2, 3)]

    def body():
        return [casimir_apply(s, Fraction(1, 3), rep="affine") for s in samples]

    return body


def workload_equivariance():
    """A full generator-equivariance cell at (2,1)."""
    from superquant import QuantizationConfig, Signature
    from superquant.verifier import check_equivariance

    cfg = QuantizationConfig(
        Signature(2, 1), lam=Fraction(1, 3), delta=Fraction(1, 5)
    )

    def body():
        report = check_equivariance(cfg, degree_max=3, sample_count=2)
        assert report.passed
        return report

    return body


WORKLOADS = {
    "poly-products": workload_poly_products,
    "casimir": workload_casimir,
    "equivariance": workload_equivariance,
}


def run_worker(name, repeats):
    from superquant import kernel_backend

    body = WORKLOADS[name]()
    body()  # warm up (imports, caches)
    best = None
    for _ in range(repeats):
        start = time.perf_counter()
        body()
        elapsed = time.perf_counter() - start
        if best is None or elapsed < best:
            best = elapsed
    print(json.dumps({"workload": name, "backend": kernel_backend(), "seconds": best}))


def run_comparison(names, repeats):
    rows = []
    for name in names:
        results = {}
        for backend, env_extra in (("cython", {}), ("python", {"SUPERQUANT_PURE_PYTHON": "1"})):
            env = dict(os.environ)
            env.pop("SUPERQUANT_PURE_PYTHON", None)
            env.update(env_extra)
            proc = subprocess.run(
                [sys.executable, __file__, "--worker", name, "--repeats", str(repeats)],
                capture_output=True,
                text=True,
                env=env,
                check=True,
            )
            data = json.loads(proc.stdout.strip().splitlines()[-1])
            results[backend] = data
        got = {data["backend"] for data in results.values()}
        if got != {"cython", "python"}:
            print(
                f"note: compiled kernel unavailable, measured backends {sorted(got)}",
                file=sys.stderr,
            )
        rows.append(
            (
                name,
                results["python"]["seconds"],
                results["cython"]["seconds"],
                results["cython"]["backend"],
            )
        )
    width = max(len(name) for name, *_ in rows)
    print(f"{'workload':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}")
    for name, py_s, cy_s, cy_backend in rows:
        speedup = py_s / cy_s if cy_s else float("inf")
        note = "" if cy_backend == "cython" else "  (fallback on both sides)"
        print(
            f"{name:<{width}}  {py_s:>9.4f}s  {cy_s:>9.4f}s  {speedup:>7.2f}x{note}"
        )


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--worker", choices=sorted(WORKLOADS), help=argparse.SUPPRESS)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument(
        "--workloads",
        nargs="+",
        choices=sorted(WORKLOADS),
        default=sorted(WORKLOADS),
    )
    args = parser.parse_args(argv)
    if args.worker:
        run_worker(args.worker, args.repeats)
    else:
        run_comparison(args.workloads, args.repeats)
    return 0


if __name__ == "__main__":
    sys.exit(main())
