"""Acceptance gate: one test per criterion, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines;
the plain suite asserts the same facts.
"""

import cmath
import math

import numpy as np
import pytest

from blaschke_lab.blaschke import TruncatedBlaschke, product_deriv, product_eval
from blaschke_lab.cli import main as cli_main
from blaschke_lab.geometry import StolzDomain, pseudo_disk, rho
from blaschke_lab.modelspace import (
    ModelFunction,
    gram_matrix,
    h2_inner,
    kernel_bound,
    kernel_eval,
    synth,
    synth_deriv,
)
from blaschke_lab.quadrature import (
    area_norm,
    circle_mean,
    fit_linear,
    lemma_integral,
    richardson,
)
from blaschke_lab.sequences import (
    gen_geometric,
    gen_power,
    gen_stolz,
    separation_constant,
)
from blaschke_lab.theorems import CONSISTENT, VerifyConfig, region_classify, verify


def _report(number: int, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")


def test_criterion_1_metric_geometry_suite():
    rng = np.random.default_rng(101)
    worst_sym = worst_rot = worst_id = 0.0
    for _ in range(10_000):
        z = rng.uniform(0, 0.98) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        w = rng.uniform(0, 0.98) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        t = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        worst_sym = max(worst_sym, abs(rho(z, w) - rho(w, z)))
        worst_rot = max(worst_rot, abs(rho(t * z, t * w) - rho(z, w)))
        worst_id = max(worst_id, rho(z, z))
    metric_ok = worst_sym <= 1e-12 and worst_rot <= 1e-12 and worst_id <= 1e-12

    membership_ok = True
    checked = 0
    for a, R in [(0.5, 0.5), (0.3 - 0.6j, 0.25), (0.85j, 0.4), (0.0, 0.7)]:
        disk = pseudo_disk(a, R)
        while_count = 0
        while while_count < 250:
            z = rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
            if abs(z) >= 0.9995:
                continue
            while_count += 1
            d = rho(z, a)
            if abs(d - R) <= 1e-10:
                continue
            checked += 1
            if disk.contains(z) != (d < R):
                membership_ok = False
    membership_ok = membership_ok and checked >= 900

    seq = gen_geometric(1.0, 0.5, 12)
    R = separation_constant(seq) / 2.0
    constant_ok = True
    for a in seq.points:
        disk = pseudo_disk(a, R)
        C = (1.0 + R) / (1.0 - R)
        for t in np.linspace(0, 2 * math.pi, 24, endpoint=False):
            z = disk.boundary_point(t)
            if 1.0 - abs(z) > C * (1.0 - abs(a)) * (1.0 + 1e-12):
                constant_ok = False

    ok = metric_ok and membership_ok and constant_ok
    _report(1, ok, f"metric worst dev {max(worst_sym, worst_rot, worst_id):.2e}, "
                   f"{checked} membership samples, boundary-gap constant holds")
    assert metric_ok and membership_ok and constant_ok


def _fd(fn, z, h=1e-6):
    return (fn(z + h) - fn(z - h)) / (2.0 * h)


def test_criterion_2_derivative_oracles():
    angles = (np.arange(8) + 0.37) * (2 * math.pi / 8)
    radii = (0.15, 0.45, 0.75, 0.9)
    grid = [r * cmath.exp(1j * t) for r in radii for t in angles] + [0.0]

    worst = 0.0
    for seq in (gen_power(2.0, 100, phases="spread"),
                gen_geometric(1.0, 0.9, 100, phases="spread")):
        B = TruncatedBlaschke(seq)
        for z in grid:
            exact = product_deriv(B, z)
            fd = _fd(lambda u: product_eval(B, u)[0], z)
            worst = max(worst, abs(fd - exact) / abs(exact))

    rng = np.random.default_rng(202)
    coeffs = tuple((rng.standard_normal(16) + 1j * rng.standard_normal(16)) / math.sqrt(2))
    for kind, seq in (("g", gen_geometric(1.0, 0.9, 20, phases="spread")),
                      ("h", gen_geometric(1.0, 0.3, 16))):
        f = ModelFunction(coeffs, kind, seq)
        for z in grid:
            exact = synth_deriv(f, z)
            fd = _fd(lambda u: synth(f, u), z)
            worst = max(worst, abs(fd - exact) / abs(exact))

    _report(2, worst < 1e-6, f"worst relative FD deviation {worst:.2e} (tol 1e-6)")
    assert worst < 1e-6


def test_criterion_3_closed_form_quadrature():
    devs = []
    for alpha in (-0.5, 0.0, 1.0, 2.0):
        vals = [area_norm(lambda z: np.ones_like(z), 2.0, alpha, 1.0 - 0.5**k).value
                for k in range(4, 10)]
        limit = richardson(vals, [alpha + 1.0, alpha + 2.0])
        devs.append(abs(limit - 2.0 / ((alpha + 1.0) * (alpha + 2.0))))

    vals = [lemma_integral(0.0, 0.0, 1.0, 1.0 - 0.5**k).value for k in range(4, 10)]
    devs.append(abs(richardson(vals, [1.0, 2.0]) - math.pi))

    got = circle_mean(lambda z: 1.0 / (1.0 - z), 2.0, 0.5, 512)
    devs.append(abs(got - math.sqrt(4.0 / 3.0)))

    worst = max(devs)
    _report(3, worst < 1e-8, f"worst closed-form deviation {worst:.2e} (tol 1e-8)")
    assert worst < 1e-8


def test_criterion_4_lemma_regime_reproduction():
    ks = range(3, 10)
    gaps = [2.0**-k for k in ks]
    values = {}
    for p in (0.8, 1.0, 1.3):
        values[p] = [
            lemma_integral(1.0 - g, 0.0, p, 1.0 - g / 16.0).value for g in gaps
        ]

    ratio = max(values[0.8]) / min(values[0.8])
    bounded_ok = ratio <= 1.5

    x = [k * math.log(2.0) for k in ks]
    _, _, r2 = fit_linear(x, values[1.0])
    log_ok = r2 > 0.99

    slope, _, _ = fit_linear([math.log(1.0 / g) for g in gaps],
                             [math.log(v) for v in values[1.3]])
    power_ok = abs(slope - 0.6) <= 0.1

    ok = bounded_ok and log_ok and power_ok
    _report(4, ok, f"bounded ratio {ratio:.3f} (<=1.5), log R^2 {r2:.5f} (>0.99), "
                   f"power exponent {slope:.3f} (0.6 +/- 0.1)")
    assert bounded_ok and log_ok and power_ok


def test_criterion_5_model_space_structure():
    seq = gen_geometric(1.0, 0.5, 5)
    G = gram_matrix(seq, 5)
    gram_dev = float(np.max(np.abs(G - np.eye(5))))

    B = TruncatedBlaschke(seq)
    rng = np.random.default_rng(303)
    c = (rng.standard_normal(5) + 1j * rng.standard_normal(5)) / math.sqrt(2)
    f = ModelFunction(tuple(c), "g", seq)
    pole = float(max(seq.moduli))

    repro_dev = 0.0
    bound_ok = True
    for _ in range(20):
        z = rng.uniform(0, 0.8) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        ip = h2_inner(lambda u: synth(f, u), lambda u: kernel_eval(B, z, u),
                      pole_modulus=max(pole, abs(z)))
        repro_dev = max(repro_dev, abs(ip - synth(f, z)))
        if abs(synth(f, z)) > f.coeff_norm * kernel_bound(B, z) * (1.0 + 1e-6):
            bound_ok = False

    ok = gram_dev < 1e-6 and repro_dev < 1e-5 and bound_ok
    _report(5, ok, f"gram deviation {gram_dev:.2e} (tol 1e-6), "
                   f"reproducing deviation {repro_dev:.2e} (tol 1e-5), kernel bound holds")
    assert gram_dev < 1e-6
    assert repro_dev < 1e-5
    assert bound_ok


def test_criterion_6_theorem_consistency_regression():
    outcomes = {}

    cfg = VerifyConfig()  # k = 4..10
    outcomes["T1"] = verify("T1", gen_geometric(1.0, 0.5, 30), 0.0, 1.5, cfg)
    outcomes["T2"] = verify("T2", gen_power(1.2, 400), 0.0, 1.75, cfg)

    deep = VerifyConfig(k_max=16)
    outcomes["T5"] = verify("T5", gen_geometric(1.0, 0.9, 8), 0.5, 1.2, deep)

    dom = StolzDomain(1.0, 2.0)
    stolz_seq = gen_stolz(dom, gen_geometric(1.0, 0.9, 8))
    outcomes["T10"] = verify("T10", stolz_seq, 0.5, 1.2, deep)

    all_consistent = all(r.consistency == CONSISTENT for r in outcomes.values())

    # Stolz circle-mean growth: M_p(r; f') may grow no faster than the
    # nontangential bound exponent 3/2 - 1/(2p), plus slack 0.1
    p = 1.2
    rng = np.random.default_rng(deep.seed)
    c = (rng.standard_normal(8) + 1j * rng.standard_normal(8)) / math.sqrt(2)
    f = ModelFunction(tuple(c), "g", stolz_seq)
    ks = range(4, 11)
    x = [k * math.log(2.0) for k in ks]
    y = [math.log(circle_mean(lambda z: synth_deriv(f, z), p, 1.0 - 0.5**k, 4096))
         for k in ks]
    slope, _, _ = fit_linear(x, y)
    bound = 1.5 - 1.0 / (2.0 * p) + 0.1
    stolz_ok = slope <= bound

    ok = all_consistent and stolz_ok
    verdicts = ", ".join(f"{k}:{v.consistency}" for k, v in outcomes.items())
    _report(6, ok, f"{verdicts}; stolz circle-mean exponent {slope:.3f} <= {bound:.3f}")
    assert all_consistent
    assert stolz_ok


REGION_TRUTH_TABLE = [
    ((0.0, 0.5), ("A",)),
    ((2.0, 2.0), ("A",)),
    ((-0.5, 0.4), ("B",)),
    ((0.5, 1.3), ("C",)),
    ((0.0, 1.1), ("D",)),
    ((-0.5, 0.6), ("E",)),
    ((-0.5, 0.8), ("F",)),
    ((0.0, 1.5), ("Open",)),
    ((0.0, 2.5), ("None",)),
    ((-0.5, 0.5), ("E",)),          # p = 1+alpha: T8 via "<=", not T6 via "<"
    ((-0.5, 1.0 / 3.0), ("B",)),    # p = 2/3+2a/3: T6 via "<=", not T4 via "<"
    ((0.0, 4.0 / 3.0), ("Open",)),  # lower edge of the open strip included
    ((-0.5, 0.75), ("None",)),      # uncovered seam between T8 and T9
]


def test_criterion_7_region_classifier_truth_table():
    failures = [
        (pt, want, region_classify(*pt).regions)
        for pt, want in REGION_TRUTH_TABLE
        if region_classify(*pt).regions != want
    ]
    _report(7, not failures,
            f"{len(REGION_TRUTH_TABLE)} hand-computed points across A-F/Open/None"
            + (f"; mismatches: {failures}" if failures else ""))
    assert not failures


def test_criterion_8_truncation_honesty():
    seq = gen_geometric(1.0, 0.8, 80)
    angles = (np.arange(12) + 0.29) * (2 * math.pi / 12)
    grid = [r * cmath.exp(1j * t) for r in (0.0, 0.3, 0.6, 0.9) for t in angles]
    ok = True
    margin = math.inf
    for n in (10, 20, 40):
        BN = TruncatedBlaschke(seq, n)
        B2N = TruncatedBlaschke(seq, 2 * n)
        for z in grid:
            v1, bound = product_eval(BN, z)
            v2, _ = product_eval(B2N, z)
            if abs(v1 - v2) > bound:
                ok = False
            if abs(v1 - v2) > 0:
                margin = min(margin, bound / abs(v1 - v2))
    _report(8, ok, f"|B_N - B_2N| <= tail bound on all grid points "
                   f"(smallest bound/actual ratio {margin:.3g})")
    assert ok


def test_criterion_9_reproducible_runs(tmp_path, capsys):
    args = [
        "norm",
        "--seq", "geometric:c=1,r=0.5,N=8",
        "--p", "1.5",
        "--alpha", "0",
        "--rmax-levels", "4..8",
    ]
    assert cli_main(args + ["--out", str(tmp_path / "run1")]) == 0
    assert cli_main(args + ["--out", str(tmp_path / "run2")]) == 0
    capsys.readouterr()
    first = (tmp_path / "run1.csv").read_bytes()
    second = (tmp_path / "run2.csv").read_bytes()
    ok = first == second and len(first) > 0
    _report(9, ok, f"two identical runs produced byte-identical CSV ({len(first)} bytes)")
    assert ok
