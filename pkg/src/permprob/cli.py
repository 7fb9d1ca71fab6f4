"""Command-line interface: ``permprob {compute,estimate,verify,bench}``.

Exit codes: 0 success, 1 a verify identity failed, 2 bad input,
3 numeric/domain error, 4 size guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import exact, multilinear, spin
from .errors import DimensionTooLarge, DomainError, InputError, check_size
from .estimators import Distribution, estimator_kernel, sample_estimate
from .matrix import MatrixSpec, SquareMatrix, generate, parse_matrix

METHODS = {
    "naive": exact.perm_naive,
    "glynn": exact.perm_glynn,
    "macmahon": multilinear.perm_macmahon,
    "spin-fd": spin.perm_spin_fd,
    "delta-oracle": exact.perm_delta_oracle,
    "rademacher-enum": exact.rademacher_full_enumeration,
}


@dataclass
class RunConfig:
    subcommand: str
    method: str = "glynn"
    dist: str = "gaussian"
    samples: int = 100_000
    seed: int = 0
    input: str | None = None
    gen: str | None = None
    output_format: str = "table"
    h: float = 1e-3
    n_range: str | None = None
    workers: int = 1
    repeats: int = 5

    def load_matrix(self) -> SquareMatrix:
        if (self.input is None) == (self.gen is None):
            raise InputError("give exactly one of --input PATH or --gen KIND:N")
        if self.gen is not None:
            return generate(MatrixSpec.parse(self.gen, self.seed))
        if self.input == "-":
            text, fmt = sys.stdin.read(), "csv"
        else:
            path = Path(self.input)
            try:
                text = path.read_text()
            except OSError as exc:
                raise InputError(f"cannot read {self.input}: {exc.strerror}") from None
            fmt = "json" if path.suffix.lower() == ".json" else "csv"
        stripped = text.lstrip()
        if stripped.startswith("["):
            fmt = "json"
        return parse_matrix(text, fmt)


def compute_permanent(method, a, cfg):
    fn = METHODS[method]
    if method == "spin-fd":
        return fn(a, cfg.h)
    if method in ("glynn", "rademacher-enum"):
        return fn(a, workers=cfg.workers)
    return fn(a)


# -- output --------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def format_table(rows, columns):
    cells = [[str(c) for c in columns]] + [[_fmt(r.get(c, "")) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in cells)


def emit(cfg, rows, columns):
    if cfg.output_format == "json":
        payload = rows[0] if len(rows) == 1 and cfg.subcommand != "bench" else rows
        print(json.dumps(payload))
    else:
        print(format_table(rows, columns))


# -- subcommands ---------------------------------------------------------------

def run_compute(cfg: RunConfig) -> int:
    a = cfg.load_matrix()
    t0 = time.perf_counter()
    value = compute_permanent(cfg.method, a, cfg)
    elapsed = (time.perf_counter() - t0) * 1e3
    row = {"method": cfg.method, "value": value, "elapsed_ms": elapsed, "n": a.n}
    emit(cfg, [row], ["method", "n", "value", "elapsed_ms"])
    return 0


def run_estimate(cfg: RunConfig) -> int:
    a = cfg.load_matrix()
    dist = Distribution.coerce(cfg.dist)
    t0 = time.perf_counter()
    rep = sample_estimate(a, dist, cfg.samples, cfg.seed, workers=cfg.workers)
    elapsed = (time.perf_counter() - t0) * 1e3
    row = {
        "method": "monte-carlo",
        "dist": dist.value,
        "estimate": rep.estimate,
        "stderr": rep.stderr,
        "ci95_low": rep.ci95_low,
        "ci95_high": rep.ci95_high,
        "samples": rep.samples,
        "seed": rep.seed,
        "elapsed_ms": elapsed,
        "n": a.n,
    }
    emit(cfg, [row], ["dist", "n", "estimate", "stderr", "ci95_low", "ci95_high", "samples", "seed"])
    return 0


def _rel(a, b):
    """Relative error, switching to absolute error when |b| < 1."""
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(b), 1.0)


def verify_identities(a, cfg):
    """Yield (name, discrepancy, tolerance, note) for each applicable identity.

    Identities whose size guard is exceeded yield discrepancy None (SKIP).
    """
    n = a.n
    rng = np.random.default_rng(cfg.seed)

    def guarded(name, fn, tol):
        try:
            disc, note = fn()
        except DimensionTooLarge as exc:
            return name, None, tol, f"skipped ({exc})"
        return name, disc, tol, note

    cache = {}

    def value(method):
        if method not in cache:
            cache[method] = compute_permanent(method, a, cfg)
        return cache[method]

    def pair(m1, m2):
        return lambda: (_rel(value(m1), value(m2)), f"{m1}={value(m1):.12g} {m2}={value(m2):.12g}")

    yield guarded("naive = glynn", pair("glynn", "naive"), 1e-9)
    yield guarded("glynn = rademacher enumeration", pair("rademacher-enum", "glynn"), 1e-10)
    yield guarded("naive = macmahon", pair("macmahon", "naive"), 1e-8)
    yield guarded("naive = delta-tensor sum", pair("delta-oracle", "naive"), 1e-12)

    def tensor():
        k = min(n, 4)
        worst = 0.0
        for idx in np.ndindex(*(k,) * k):
            m = [i + 1 for i in idx]
            worst = max(worst, abs(exact.delta_via_enumeration(m) - exact.permutation_tensor(m)))
        return worst, f"all {k ** k} index tuples at n={k}"

    yield guarded("permutation tensor = Rademacher average", tensor, 0.0)

    def symmetry():
        check_size("sign symmetry", n, 12)
        worst = 0.0
        for s in exact.sign_vectors(n):
            k1 = estimator_kernel(a, s)
            k2 = estimator_kernel(a, -s)
            worst = max(worst, _rel(k2, k1))
        return worst, f"all {2 ** n} sign vectors"

    yield guarded("kernel invariant under s -> -s", symmetry, 1e-12)

    def rows():
        p = rng.permutation(n)
        return _rel(exact.perm_glynn(a.entries[p]), value("glynn")), f"row order {(p + 1).tolist()}"

    yield guarded("perm(PA) = perm(A)", rows, 1e-9)

    def det_consistency():
        f = multilinear.det_minor_expansion(a)
        ref = float(np.linalg.det(np.eye(n) - a.entries))
        return _rel(float(f.coeffs.sum()), ref), f"det(I - A)={ref:.12g}"

    yield guarded("minor expansion at x=1 = det(I - A)", det_consistency, 1e-10)

    def spin_exact():
        c = spin.spin_coefficient_exact(a)
        return _rel(c, value("glynn")), f"coefficient={c:.12g}"

    yield guarded("spin coefficient = perm", spin_exact, 1e-10)

    def fd():
        v = spin.perm_spin_fd(a, cfg.h)
        return _rel(v, value("glynn")), f"h={cfg.h:g} value={v:.12g}"

    yield guarded("spin finite difference ~ perm", fd, 1e-2)

    def fd_rate():
        ref = value("glynn")
        e2 = abs(spin.perm_spin_fd(a, 1e-2) - ref)
        e3 = abs(spin.perm_spin_fd(a, 1e-3) - ref)
        ratio = e2 / e3 if e3 else math.inf
        # report distance from the accepted band [5, 20]
        return max(0.0, 5.0 - ratio, ratio - 20.0), f"error ratio h=1e-2 / h=1e-3 = {ratio:.4g}"

    yield guarded("finite difference first-order in h", fd_rate, 0.0)

    def gauss_spin():
        k = min(n, 3)
        w = generate("spd", k, cfg.seed)
        z = spin.partition_function(w)
        rep = spin.cosh_moment_mc(w, cfg.samples, cfg.seed, workers=cfg.workers)
        sig = abs(rep.estimate - z) / rep.stderr if rep.stderr else (0.0 if rep.estimate == z else math.inf)
        return max(0.0, sig - 4.0), f"spd:{k} Z={z:.8g} mc={rep.estimate:.8g} ({sig:.2f} stderr)"

    yield guarded("cosh moment = partition function (4 stderr)", gauss_spin, 0.0)


def run_verify(cfg: RunConfig) -> int:
    a = cfg.load_matrix()
    t0 = time.perf_counter()
    results = []
    for name, disc, tol, note in verify_identities(a, cfg):
        status = "SKIP" if disc is None else ("PASS" if disc <= tol else "FAIL")
        results.append({"identity": name, "status": status, "discrepancy": disc, "tolerance": tol, "note": note})
    elapsed = (time.perf_counter() - t0) * 1e3
    failed = [r for r in results if r["status"] == "FAIL"]
    if cfg.output_format == "json":
        print(json.dumps({"n": a.n, "results": results, "passed": not failed, "elapsed_ms": elapsed}))
    else:
        for r in results:
            disc = "-" if r["discrepancy"] is None else f"{r['discrepancy']:.3e}"
            print(f"{r['status']}  {r['identity']:<45} discrepancy={disc:<10} tol={r['tolerance']:.0e}  {r['note']}")
        print(f"{len(results) - len(failed)}/{len(results)} not failed, elapsed {elapsed:.1f} ms")
    return 1 if failed else 0


def _parse_range(text):
    try:
        lo, _, hi = text.partition(":")
        lo, hi = int(lo), int(hi or lo)
    except ValueError:
        raise InputError(f"--n-range must look like A:B, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise InputError(f"bad --n-range {text!r}")
    return lo, hi


def run_bench(cfg: RunConfig) -> int:
    lo, hi = _parse_range(cfg.n_range or "10:16")
    kind = MatrixSpec.parse(cfg.gen, cfg.seed).kind if cfg.gen else "uniform"
    rows = []
    prev = None
    for n in range(lo, hi + 1):
        a = generate(kind, n, cfg.seed)
        compute_permanent(cfg.method, a, cfg)  # warm-up, discarded
        best = math.inf
        for _ in range(max(1, cfg.repeats)):
            t0 = time.perf_counter()
            value = compute_permanent(cfg.method, a, cfg)
            best = min(best, time.perf_counter() - t0)
        ms = best * 1e3
        rows.append({"n": n, "method": cfg.method, "elapsed_ms": ms, "value": value,
                     "ratio": ms / prev if prev else None})
        prev = ms
    if cfg.output_format == "json":
        print(json.dumps(rows))
    else:
        for r in rows:
            if r["ratio"] is None:
                r["ratio"] = "-"
        print(format_table(rows, ["n", "method", "elapsed_ms", "ratio", "value"]))
    return 0


COMMANDS = {"compute": run_compute, "estimate": run_estimate, "verify": run_verify, "bench": run_bench}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="PATH", help="matrix file (CSV, or JSON if *.json); '-' for stdin")
    src.add_argument("--gen", metavar="KIND:N", help="generated matrix: ones, identity, rademacher, uniform, spd")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", dest="output_format", choices=["json", "table"], default="table")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--method", choices=sorted(METHODS), default="glynn")
    common.add_argument("--h", type=float, default=1e-3, help="finite-difference step for spin-fd")

    parser = argparse.ArgumentParser(prog="permprob", description="Exact and Monte Carlo matrix permanents.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("compute", parents=[common], help="exact permanent")
    est = sub.add_parser("estimate", parents=[common], help="Monte Carlo estimate")
    est.add_argument("--dist", default="gaussian", choices=[d.value for d in Distribution])
    est.add_argument("--samples", type=int, default=100_000)
    ver = sub.add_parser("verify", parents=[common], help="cross-check every identity")
    ver.add_argument("--samples", type=int, default=100_000)
    bench = sub.add_parser("bench", parents=[common], help="timing over a range of n")
    bench.add_argument("--n-range", default="10:16", metavar="A:B")
    bench.add_argument("--repeats", type=int, default=5, help="timed runs per n; the fastest is reported")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except InputError as exc:
        print(f"permprob: input error: {exc}", file=sys.stderr)
        return 2
    except DimensionTooLarge as exc:
        print(f"permprob: {exc}", file=sys.stderr)
        return 4
    except (DomainError, ValueError, OverflowError, ZeroDivisionError) as exc:
        print(f"permprob: numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
