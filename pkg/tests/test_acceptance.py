"""Acceptance criteria, one test each.

Every test appends a PASS/FAIL line that pytest prints in its terminal
summary. Timed sections exclude one-off JIT compilation: kernels are warmed
on a 1 x 1 input first.
"""

import itertools
import json
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from permprob import (
    Distribution,
    cosh_moment_mc,
    delta_via_enumeration,
    generate,
    moment_check,
    partition_function,
    perm_glynn,
    perm_macmahon,
    perm_naive,
    perm_spin_fd,
    permutation_tensor,
    rademacher_full_enumeration,
    sample_estimate,
)
from permprob.cli import main


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}")
    assert ok, detail


def warm():
    one = np.ones((1, 1))
    for fn in (perm_naive, perm_glynn, perm_macmahon, rademacher_full_enumeration):
        fn(one)


def test_01_ones_factorial():
    warm()
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(1, 11):
        f = math.factorial(n)
        for fn in (perm_glynn, perm_macmahon):
            worst = max(worst, abs(fn(np.ones((n, n))) - f) / f)
    elapsed = time.perf_counter() - t0
    record(1, "perm(ones_n) = n!, n = 1..10", worst <= 1e-9 and elapsed < 1.0,
           f"max rel err {worst:.2e} (tol 1e-9), {elapsed:.3f} s (limit 1 s)")


def test_02_four_way_agreement():
    warm()
    t0 = time.perf_counter()
    worst = 0.0
    bad = []
    for seed in range(100):
        a = generate("uniform", 6, seed)
        vals = [perm_naive(a), perm_glynn(a), perm_macmahon(a), rademacher_full_enumeration(a)]
        for x, y in itertools.combinations(vals, 2):
            scale = max(abs(x), abs(y))
            if scale < 1:
                disc, tol = abs(x - y), 1e-10
            else:
                disc, tol = abs(x - y) / scale, 1e-8
            worst = max(worst, disc / tol)
            if disc > tol:
                bad.append(seed)
    elapsed = time.perf_counter() - t0
    record(2, "naive = glynn = macmahon = rademacher enumeration on 100 uniform 6x6",
           not bad and elapsed < 10.0,
           f"worst discrepancy {worst:.2e} of tolerance, failing seeds {sorted(set(bad))}, {elapsed:.2f} s (limit 10 s)")


def test_03_permutation_tensor():
    mismatches = 0
    count = 0
    for n in (3, 4):
        for m in itertools.product(range(1, n + 1), repeat=n):
            count += 1
            mismatches += delta_via_enumeration(m) != permutation_tensor(m)
    record(3, "Rademacher average = permutation tensor (all tuples, n = 3, 4)", mismatches == 0 and count == 283,
           f"{count} tuples, {mismatches} mismatches")


def test_04_singular_macmahon():
    a = generate("uniform", 5, 2024).entries.copy()
    a[3] = a[1]
    rank = np.linalg.matrix_rank(a)
    m, p = perm_macmahon(a), perm_naive(a)
    err = abs(m - p) / abs(p)
    record(4, "MacMahon route on a singular 5x5 (duplicated row)", err <= 1e-8 and rank < 5,
           f"rank {rank}, perm {p:.12g}, rel err {err:.2e} (tol 1e-8)")


def test_05_unbiasedness():
    t0 = time.perf_counter()
    mats = {"ones4": generate("ones", 4), "identity4": generate("identity", 4), "uniform4": generate("uniform", 4, 5)}
    notes, ok = [], True
    for dist in Distribution:
        for name, a in mats.items():
            target = perm_naive(a)
            rep = sample_estimate(a, dist, 10**6, 42)
            degenerate = dist is Distribution.RADEMACHER and name == "identity4"
            z = abs(rep.estimate - target) / rep.stderr if rep.stderr else 0.0
            good = rep.covers(target) and (rep.stderr > 0 or degenerate)
            ok &= good
            notes.append(f"{dist.value}/{name} {z:.2f}sd")
    elapsed = time.perf_counter() - t0
    record(5, "unbiased estimate within 4 stderr, 3 laws x 3 matrices, N = 1e6", ok and elapsed < 60.0,
           f"{', '.join(notes)}; {elapsed:.1f} s (limit 60 s)")


def test_06_sine_representation():
    rep = sample_estimate([[3.0]], "sine", 10**6, 7)
    _, second = moment_check("sine", 10**6, 7)
    ok = rep.covers(3.0) and abs(second - 1.0) <= 0.01
    record(6, "sine-weighted 1x1 (a = 3)", ok,
           f"estimate {rep.estimate:.5f} +- {rep.stderr:.5f}, 2 E[sin^2] = {second:.5f}")


def test_07_gauss_spin_identity():
    w = [[0.5, 0.2], [0.2, 0.5]]
    z = partition_function(w)
    z_enum = sum(math.exp(0.5 * np.array(s) @ np.array(w) @ np.array(s))
                 for s in itertools.product([1, -1], repeat=2))
    rep = cosh_moment_mc(w, 10**6, 11)
    rep1 = cosh_moment_mc([[1.0]], 10**6, 12)
    closed = 2 * math.exp(0.5)
    ok = rep.covers(z) and rep1.covers(closed) and abs(z - z_enum) <= 1e-12 * z
    record(7, "E[prod 2 cosh phi] = Z(W) and 1x1 closed form", ok,
           f"Z={z:.6f} mc={rep.estimate:.6f}+-{rep.stderr:.6f}; "
           f"2e^0.5={closed:.6f} mc={rep1.estimate:.6f}+-{rep1.stderr:.6f}")


def test_08_spin_finite_difference():
    rels, improving = [], 0
    for seed in range(10):
        a = generate("uniform", 4, seed)
        p = perm_naive(a)
        e3 = abs(perm_spin_fd(a, 1e-3) - p)
        e2 = abs(perm_spin_fd(a, 1e-2) - p)
        rels.append(e3 / abs(p))
        improving += e2 > e3
    ok = max(rels) <= 1e-2 and improving >= 8
    record(8, "spin finite-difference extraction on 10 uniform 4x4", ok,
           f"max rel err at h=1e-3 {max(rels):.2e} (tol 1e-2), error shrinks 1e-2 -> 1e-3 in {improving}/10")


def test_09_glynn_scaling(capsys):
    t0 = time.perf_counter()
    code = main(["bench", "--method", "glynn", "--n-range", "18:24", "--format", "json"])
    rows = json.loads(capsys.readouterr().out)
    elapsed = time.perf_counter() - t0
    ratios = [r["ratio"] for r in rows if r["ratio"] is not None]
    inside = sum(1.6 <= r <= 2.9 for r in ratios)
    ok = code == 0 and len(ratios) == 6 and inside >= 5 and elapsed < 300
    record(9, "glynn time ratios n = 18..24", ok,
           f"ratios {[round(r, 2) for r in ratios]}, {inside}/6 in [1.6, 2.9], {elapsed:.1f} s (limit 300 s)")


def test_10_estimate_determinism(capsys):
    argv = ["estimate", "--dist", "gaussian", "--samples", "200000", "--seed", "42", "--gen", "uniform:4",
            "--workers", "2", "--format", "json"]
    outputs = []
    for _ in range(3):
        assert main(argv) == 0
        data = json.loads(capsys.readouterr().out)
        data.pop("elapsed_ms")
        outputs.append(json.dumps(data, sort_keys=True))
    ok = len(set(outputs)) == 1
    record(10, "estimate reruns are bit-identical", ok, outputs[0] if ok else "outputs differ")
