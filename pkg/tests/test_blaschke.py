"""Blaschke factors, truncated products, and exact derivatives."""

import cmath
import math

import numpy as np
import pytest

from blaschke_lab.blaschke import (
    TruncatedBlaschke,
    factor_deriv,
    factor_eval,
    product_deriv,
    product_eval,
    subproduct_eval,
)
from blaschke_lab.geometry import pseudo_disk, rho
from blaschke_lab.sequences import (
    ExplicitLaw,
    ZeroSequence,
    gen_geometric,
    gen_power,
    separation_constant,
)


def central_diff(fn, z, h=1e-6):
    return (fn(z + h) - fn(z - h)) / (2.0 * h)


def test_factor_examples():
    assert factor_eval(0.5, 0.0) == pytest.approx(0.5)
    assert factor_eval(0.5, 0.5) == 0.0
    assert factor_eval(0.5, 0.75) == pytest.approx(-0.4)


def test_factor_modulus_level_sets():
    # |b_a| equals R exactly on rho(z, a) = R
    rng = np.random.default_rng(8)
    for _ in range(40):
        a = rng.uniform(0.1, 0.9) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        R = rng.uniform(0.05, 0.9)
        z = pseudo_disk(a, R).boundary_point(rng.uniform(0, 2 * math.pi))
        assert abs(factor_eval(a, z)) == pytest.approx(R, abs=1e-12)
        assert abs(factor_eval(a, z)) == pytest.approx(rho(z, a), abs=1e-12)


def test_factor_rejects_origin_zero():
    with pytest.raises(ValueError):
        factor_eval(0.0, 0.3)
    with pytest.raises(ValueError):
        factor_deriv(0.0, 0.3)


def test_factor_deriv_examples():
    assert factor_deriv(0.5, 0.0) == pytest.approx(-0.75)
    assert factor_deriv(0.5, 0.5) == pytest.approx(-4.0 / 3.0)
    assert abs(factor_deriv(0.3j, 0.0)) == pytest.approx(0.91)


def test_factor_deriv_matches_finite_difference():
    for a in (0.5, 0.3j, -0.2 + 0.6j):
        for z in (0.0, 0.1 - 0.4j, 0.5):
            fd = central_diff(lambda u: factor_eval(a, u), z)
            assert fd == pytest.approx(factor_deriv(a, z), abs=1e-8)


def test_product_single_zero():
    B = TruncatedBlaschke(ZeroSequence((0.5,)))
    value, tail = product_eval(B, 0.0)
    assert value == pytest.approx(0.5)
    assert tail == 0.0  # finite explicit sequence: nothing beyond the stored zero


def test_product_pair_at_origin():
    B = TruncatedBlaschke(ZeroSequence((0.5, 0.75)))
    value, _ = product_eval(B, 0.0)
    assert value == pytest.approx(0.375)


def test_product_tail_unknown_without_law():
    seq = ZeroSequence((0.5, 0.75), ExplicitLaw(finite=False))
    _, tail = product_eval(TruncatedBlaschke(seq), 0.3)
    assert tail is None


def test_product_modulus_below_one():
    B = TruncatedBlaschke(gen_power(2.0, 40, phases="spread"))
    rng = np.random.default_rng(4)
    z = rng.uniform(0, 0.95, 300) * np.exp(1j * rng.uniform(0, 2 * np.pi, 300))
    value, _ = product_eval(B, z)
    assert np.all(np.abs(value) < 1.0)


def test_truncation_bound_dominates_refinement():
    # |B_N - B_2N| <= reported tail bound at N, pointwise
    seq = gen_geometric(1.0, 0.5, 40)
    B20 = TruncatedBlaschke(seq, 20)
    B40 = TruncatedBlaschke(seq, 40)
    v20, bound = product_eval(B20, 0.3)
    v40, _ = product_eval(B40, 0.3)
    assert abs(v20 - v40) <= bound
    assert bound < 1e-4  # the bound is tight enough to be informative here


def test_truncated_blaschke_validation():
    seq = gen_geometric(1.0, 0.5, 5)
    with pytest.raises(ValueError):
        TruncatedBlaschke(seq, 6)
    with pytest.raises(ValueError):
        TruncatedBlaschke(seq, 0)


def test_subproduct_examples():
    B = TruncatedBlaschke(ZeroSequence((0.5, 0.75)))
    assert subproduct_eval(B, 1, 0.9j) == 1.0
    assert subproduct_eval(B, 2, 0.0) == pytest.approx(0.5)
    assert subproduct_eval(B, 3, 0.0) == pytest.approx(0.375)
    with pytest.raises(ValueError):
        subproduct_eval(B, 4, 0.0)


def test_product_deriv_single_matches_factor():
    B = TruncatedBlaschke(ZeroSequence((0.5,)))
    for z in (0.0, 0.2 + 0.3j, -0.7):
        assert product_deriv(B, z) == pytest.approx(factor_deriv(0.5, z))


def test_product_deriv_pair_at_origin():
    B = TruncatedBlaschke(ZeroSequence((0.5, 0.75)))
    assert product_deriv(B, 0.0) == pytest.approx(-0.78125)


def test_product_deriv_matches_finite_difference():
    rng = np.random.default_rng(17)
    pts = tuple(
        rng.uniform(0.2, 0.9) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        for _ in range(10)
    )
    B = TruncatedBlaschke(ZeroSequence(pts))
    z0 = 0.2 + 0.1j
    fd = central_diff(lambda u: product_eval(B, u)[0], z0)
    exact = product_deriv(B, z0)
    assert abs(fd - exact) / abs(exact) < 1e-7


def test_product_bounded_by_metric_on_pseudo_disks():
    # on the disk about a_n: |B(z)| <= rho(z, a_n) < R
    seq = gen_geometric(1.0, 0.5, 12)
    B = TruncatedBlaschke(seq)
    delta = separation_constant(seq)
    R = delta / 2.0
    rng = np.random.default_rng(23)
    for n in range(6):
        a = seq.points[n]
        disk = pseudo_disk(a, R)
        for _ in range(30):
            z = disk.center + disk.radius * rng.uniform(0, 0.999) * cmath.exp(
                1j * rng.uniform(0, 2 * math.pi)
            )
            value, tail = product_eval(B, z)
            d = rho(z, a)
            assert abs(value) - tail <= d + 1e-12
            assert d < R


def test_normalized_derivative_schwarz_pick_style_bound():
    # each factor obeys (1-|z|^2)|b'| <= 1, so the product samples stay
    # within (1-|z|)|B'| <= 1 up to a 5% numerical allowance
    B = TruncatedBlaschke(gen_geometric(1.0, 0.5, 25))
    rng = np.random.default_rng(31)
    z = rng.uniform(0, 0.98, 500) * np.exp(1j * rng.uniform(0, 2 * np.pi, 500))
    deriv = product_deriv(B, z)
    assert np.all((1.0 - np.abs(z)) * np.abs(deriv) <= 1.05)


def test_derivative_magnitude_bounded_by_factor_count():
    B = TruncatedBlaschke(gen_power(2.0, 30, phases="spread"))
    rng = np.random.default_rng(37)
    for _ in range(50):
        z = rng.uniform(0, 0.9) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        bound = 30 * max(abs(factor_deriv(a, z)) for a in B.active_zeros)
        assert abs(product_deriv(B, z)) <= bound * (1.0 + 1e-12)
