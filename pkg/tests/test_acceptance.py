"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are collected in ``RESULTS`` and echoed in the pytest terminal
summary; running this file directly prints them as well.
"""

import json
import time

import jsonschema
import numpy as np
import pytest

from mixmod import (
    GaborSystem,
    build_wilson_basis,
    canonical_system,
    frame_bounds,
    gaussian_window,
    istft_full,
    stft_full,
    wilson_coefficients,
)
from mixmod.verify import EXPERIMENTS, REPORT_SCHEMA, ExperimentConfig, run_experiment
from mixmod.verify.cli import main

RESULTS: list[str] = []


def record(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def run(name, **kw):
    return run_experiment(ExperimentConfig.defaults(name, **kw))


def test_01_stft_inversion():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for n in (8, 16, 32):
        g = gaussian_window(n)
        for _ in range(100):
            f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            rec = istft_full(stft_full(f, g), g, g)
            worst = max(worst, np.linalg.norm(rec - f) / np.linalg.norm(f))
    elapsed = time.perf_counter() - start
    record(1, "STFT inversion", worst <= 1e-10 and elapsed < 5, f"max rel err {worst:.2e}, {elapsed:.2f}s")


def test_02_canonical_tight_window():
    sys = canonical_system(GaborSystem.create(gaussian_window(16), 2, 2), "tight")
    A, B = frame_bounds(sys)
    dev = max(abs(A - 1), abs(B - 1))
    record(2, "canonical tight window", dev <= 1e-10, f"bounds ({A:.15f}, {B:.15f})")


def test_03_wilson_gate():
    B = build_wilson_basis(32, 4)
    gram = B.gram_deviation()
    rng = np.random.default_rng(3)
    energy = 0.0
    for _ in range(100):
        f = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        e = wilson_coefficients(B, f).energy()
        energy = max(energy, abs(e - np.linalg.norm(f) ** 2) / np.linalg.norm(f) ** 2)
    record(3, "Wilson gate", gram <= 1e-10 and energy <= 1e-10, f"gram {gram:.2e}, energy {energy:.2e}")


def test_04_schatten_frame_bound():
    start = time.perf_counter()
    excess, gap = 0.0, 0.0
    for n in (8, 16):
        r = run("schatten-bound", N=n, trials=200, p_grid=(1, 1.25, 1.5, 1.75, 2))
        excess = max(excess, r.checks["bound_excess"][0])
        gap = max(gap, r.checks["p2_gap"][0])
    elapsed = time.perf_counter() - start
    ok = excess <= 1e-9 and gap <= 1e-8 and elapsed < 30
    record(4, "Schatten frame bound", ok, f"max excess {excess:.2e}, p=2 gap {gap:.2e}, {elapsed:.2f}s")


def test_05_family_operator():
    r = run("lemma31", trials=200, p_grid=(1, 1.5, 2))
    record(5, "orthonormal-family operator bound", r.passed, f"max excess {r.max_violation:.2e}")


def test_06_kn_quantization():
    r = run("kn-roundtrip", trials=20)
    rt, closed = r.checks["roundtrip"][0], r.checks["closed_forms"][0]
    record(6, "KN quantization", r.passed, f"round trip {rt:.2e}, closed forms {closed:.2e}")


def test_07_magnitude_identity():
    small = run("kn-magnitude", N=4, trials=3)
    large = run("kn-magnitude", N=8, trials=3)
    tuples = (small.trials[0].values["tuples"], large.trials[0].values["tuples"])
    ok = small.passed and large.passed and tuples == (256, 4096)
    dev = max(small.max_violation, large.max_violation)
    record(7, "magnitude identity", ok, f"max deviation {dev:.2e} over {tuples} tuples")


def test_08_norm_equivalence():
    r = run("norm-equivalence", N=8, trials=50, p_grid=(1, 2))
    C = r.observed["C"]
    lo, hi = r.observed["interval"]
    ratios = [v for t in r.trials for k, v in t.values.items() if k.startswith("ratio")]
    ok = r.passed and np.isfinite(C) and all(lo <= x <= hi for x in ratios)
    record(8, "symbol norm equivalence", ok, f"C = {C:.4f}, ratios in [{min(ratios):.4f}, {max(ratios):.4f}]")


def test_09_embedding():
    r = run("embedding", trials=500, p_grid=(1.5,), s=1.0)
    wit = r.observed["witness"]
    detail = (
        f"Hoelder excess {r.max_violation:.2e}, boundary flagged {r.observed['boundary_flagged']}, "
        f"min growth {min(wit['weighted_growth']):.3f}, max increment ratio {max(wit['increment_ratios']):.3f}"
    )
    record(9, "weighted embedding", r.passed, detail)


def test_10_counterexample():
    parts, ok = [], True
    for n in (16, 32):
        r = run("counterexample", N=n, M=4)
        ok &= r.passed
        traces = [row["trace_norm"] for row in r.observed["sharpness"]]
        relaxed = [row["relaxed_norm"] for row in r.observed["sharpness"]]
        parts.append(f"N={n}: S1 {' < '.join(f'{x:.2f}' for x in traces)}, relaxed {relaxed[0]:.3f}..{relaxed[-1]:.3f}")
    record(10, "counterexample sharpness", ok, "; ".join(parts))


def test_11_monotonicity():
    r = run("monotonicity", trials=500)
    worst = max(mx for mx, _ in r.checks.values())
    record(11, "monotonicity suites", r.passed, f"worst violation {worst:.2e} over {len(r.trials)} instances")


def test_12_cli_end_to_end(tmp_path, capsys):
    start = time.perf_counter()
    codes, texts = {}, {}
    for name in EXPERIMENTS:
        path = tmp_path / f"{name}.json"
        codes[name] = main([name, "--out", str(path)])
        texts[name] = path.read_text()
        jsonschema.validate(json.loads(texts[name]), REPORT_SCHEMA)
    elapsed = time.perf_counter() - start
    identical = True
    for name in EXPERIMENTS:
        path = tmp_path / f"{name}.again.json"
        main([name, "--out", str(path)])
        identical &= path.read_text() == texts[name]
    capsys.readouterr()
    ok = all(c == 0 for c in codes.values()) and elapsed < 60 and identical
    record(12, "CLI end to end", ok, f"10 defaults in {elapsed:.2f}s, exit codes {set(codes.values())}, reruns identical {identical}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
