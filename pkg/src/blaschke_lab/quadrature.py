"""Circle means, weighted area integrals, and divergence classification.

The area integrals share one annular scheme: radii r_k = 1 - 2^{-k}
approach the boundary geometrically, matching (1 - r)-power integrands.
Each annulus gets Gauss-Legendre quadrature in r and a trapezoid rule in
the angle with count growing like ceil(angular_factor / (1 - r)), because
both |1 - conj(a) z|^{-2p} and Blaschke oscillation live at angular scale
about (1 - r) near the boundary.  A coarse companion pass (half the radial
order, half the angles) supplies the per-annulus error estimate.

Annuli are independent and may be evaluated concurrently; the reduction
order is fixed (ascending k), so results are deterministic.  The env var
``BLASCHKE_LAB_THREADS`` caps the worker count.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import roots_legendre

from .blaschke import TruncatedBlaschke, product_eval

FINITE = "Finite"
INFINITE = "Infinite"
INCONCLUSIVE = "Inconclusive"

BOUNDED = "Bounded"
LOG = "Log"
POWER = "Power"

# Divergence-detection thresholds, calibrated on synthetic samples and frozen.
GROWTH_SLOPE_THRESHOLD = 0.05
CAUCHY_RELATIVE_TOL = 1e-4
LOG_TYPE_R2_MIN = 0.995
LOG_TYPE_EXPONENT_MAX = 0.2

__all__ = [
    "BOUNDED",
    "FINITE",
    "INCONCLUSIVE",
    "INFINITE",
    "LOG",
    "POWER",
    "GrowthVerdict",
    "QuadratureResult",
    "RegimeVerdict",
    "ahern_integral",
    "area_norm",
    "circle_mean",
    "classify_growth",
    "fit_linear",
    "lemma_integral",
    "lemma_regime",
    "richardson",
]


def thread_cap() -> int:
    raw = os.environ.get("BLASCHKE_LAB_THREADS")
    if raw:
        return max(1, int(raw))
    return min(4, os.cpu_count() or 1)


@dataclass(frozen=True)
class QuadratureResult:
    """Annular decomposition of a truncated area integral."""

    value: float
    abs_error_estimate: float
    annuli: Tuple[Tuple[float, float, float], ...]

    def __post_init__(self) -> None:
        if self.abs_error_estimate < 0.0:
            raise ValueError("error estimate must be nonnegative")

    def growth_samples(self, k_min: int = 1) -> List[Tuple[float, float]]:
        """(outer radius, cumulative value) pairs from annulus k_min on."""
        cum = 0.0
        out = []
        for i, (_, hi, partial) in enumerate(self.annuli, start=1):
            cum += partial
            if i >= k_min:
                out.append((hi, cum))
        return out

    def csv_rows(self) -> List[Tuple[float, float, float]]:
        """(r_k, partial, cumulative) rows for plotting."""
        cum = 0.0
        rows = []
        for _, hi, partial in self.annuli:
            cum += partial
            rows.append((hi, partial, cum))
        return rows


@dataclass(frozen=True)
class GrowthVerdict:
    classification: str
    fitted_exponent: float
    window: Tuple[Tuple[float, float], ...]
    log_type: bool = False


@dataclass(frozen=True)
class RegimeVerdict:
    regime: str
    comparison_value: float


def circle_mean(f: Callable, p: float, r: float, angular_count: int) -> float:
    """M_p(r; f) by the trapezoid rule over equally spaced angles."""
    if not p > 0.0:
        raise ValueError(f"p must be positive, got {p}")
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must be in (0, 1), got {r}")
    if angular_count < 1:
        raise ValueError("angular_count must be at least 1")
    theta = 2.0 * math.pi * np.arange(angular_count) / angular_count
    vals = np.abs(np.asarray(f(r * np.exp(1j * theta)), dtype=complex)) ** p
    return float(np.mean(vals) ** (1.0 / p))


@lru_cache(maxsize=None)
def _gauss_nodes(order: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(order)
    return x, w


def _annulus_edges(r_max: float) -> List[Tuple[float, float]]:
    if not 0.0 < r_max < 1.0:
        raise ValueError(f"r_max must be in (0, 1), got {r_max}")
    edges = [0.0]
    k = 1
    while True:
        rk = 1.0 - 0.5**k
        if rk >= r_max - 1e-15:
            break
        edges.append(rk)
        k += 1
    edges.append(r_max)
    return list(zip(edges[:-1], edges[1:]))


def _one_pass(
    integrand: Callable,
    lo: float,
    hi: float,
    order: int,
    angular_factor: float,
    scale_floor: float,
) -> Tuple[float, float]:
    """One quadrature pass over an annulus; returns (nominal, perturbed).

    The boundary gap 1 - r is carried exactly (the edges are dyadic), so
    integrands receive it as a separate argument instead of recovering it
    from |z| with cancellation.
    """
    x, w = _gauss_nodes(order)
    gap_lo, gap_hi = 1.0 - lo, 1.0 - hi
    gap_mid, half = 0.5 * (gap_lo + gap_hi), 0.5 * (gap_lo - gap_hi)
    nominal = 0.0
    perturbed = 0.0
    for xi, wi in zip(x, w):
        gap = gap_mid - half * xi
        r = 1.0 - gap
        m = int(math.ceil(angular_factor / max(gap, scale_floor)))
        theta = 2.0 * math.pi * np.arange(m) / m
        vals = integrand(r * np.exp(1j * theta), gap)
        if isinstance(vals, tuple):
            g, g_pert = vals
        else:
            g, g_pert = vals, vals
        ring = 2.0 * math.pi * r * wi * half
        nominal += ring * float(np.mean(g))
        perturbed += ring * float(np.mean(g_pert))
    return nominal, perturbed


def _integrate_annuli(
    integrand: Callable,
    r_max: float,
    radial_order: int,
    angular_factor: float,
    scale: float,
    scale_floor: float = 0.0,
) -> QuadratureResult:
    spans = _annulus_edges(r_max)

    def work(span: Tuple[float, float]) -> Tuple[float, float]:
        lo, hi = span
        fine, fine_pert = _one_pass(
            integrand, lo, hi, radial_order, angular_factor, scale_floor
        )
        coarse, _ = _one_pass(
            integrand, lo, hi, max(2, radial_order // 2), angular_factor / 2.0, scale_floor
        )
        err = abs(fine - coarse) + abs(fine_pert - fine)
        return fine * scale, err * scale

    workers = min(thread_cap(), len(spans))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, spans))
    else:
        results = [work(span) for span in spans]

    annuli = tuple(
        (lo, hi, partial) for (lo, hi), (partial, _) in zip(spans, results)
    )
    value = math.fsum(partial for _, _, partial in annuli)
    err = math.fsum(e for _, e in results)
    return QuadratureResult(value=value, abs_error_estimate=err, annuli=annuli)


def area_norm(
    f: Callable,
    p: float,
    alpha: float,
    r_max: float,
    *,
    angular_factor: float = 64.0,
    radial_order: int = 16,
    angular_scale_floor: float = 0.0,
) -> QuadratureResult:
    """(1/pi) iint_{|z| <= r_max} |f|^p (1 - |z|)^alpha dA.

    This is the p-th power of the partial weighted Bergman norm.  When f is
    a truncated rational object, its angular features stop shrinking at the
    smallest pole gap; pass that gap as ``angular_scale_floor`` to let the
    angular counts saturate there instead of growing like 1/(1 - r).
    """
    if not p > 0.0:
        raise ValueError(f"p must be positive, got {p}")
    if not alpha > -1.0:
        raise ValueError(f"alpha must exceed -1, got {alpha}")

    def integrand(z: np.ndarray, gap: float) -> np.ndarray:
        return np.abs(np.asarray(f(z), dtype=complex)) ** p * gap**alpha

    return _integrate_annuli(
        integrand, r_max, radial_order, angular_factor, 1.0 / math.pi,
        angular_scale_floor,
    )


def lemma_integral(
    a: complex,
    alpha: float,
    p: float,
    r_max: float,
    *,
    angular_factor: float = 64.0,
    radial_order: int = 16,
) -> QuadratureResult:
    """iint_{|z| <= r_max} (1 - |z|)^alpha / |1 - conj(a) z|^{2p} dA (no 1/pi)."""
    if not p > 0.0:
        raise ValueError(f"p must be positive, got {p}")
    if not alpha > -1.0:
        raise ValueError(f"alpha must exceed -1, got {alpha}")
    a = complex(a)
    if abs(a) >= 1.0:
        raise ValueError(f"a must lie inside the unit disk, got |a| = {abs(a)}")
    ac = a.conjugate()

    def integrand(z: np.ndarray, gap: float) -> np.ndarray:
        return gap**alpha / np.abs(1.0 - ac * z) ** (2.0 * p)

    # the kernel's angular peak width never shrinks below the pole gap
    floor = (1.0 - abs(a)) / 4.0
    return _integrate_annuli(
        integrand, r_max, radial_order, angular_factor, 1.0, floor
    )


def lemma_regime(a: complex, alpha: float, p: float) -> RegimeVerdict:
    """Three-regime comparison value for the |1 - conj(a) z|^{-2p} integral.

    Bounded, Log, or Power according to 2p < alpha + 2, = or >; the
    comparison value is the corresponding right-hand side at this ``a``.
    """
    if not p > 0.0:
        raise ValueError(f"p must be positive, got {p}")
    if not alpha > -1.0:
        raise ValueError(f"alpha must exceed -1, got {alpha}")
    d = 1.0 - abs(complex(a))
    if 2.0 * p < alpha + 2.0:
        return RegimeVerdict(BOUNDED, 1.0)
    if 2.0 * p == alpha + 2.0:
        return RegimeVerdict(LOG, math.log(1.0 / d))
    return RegimeVerdict(POWER, d ** -(2.0 * p - alpha - 2.0))


def ahern_integral(
    B: TruncatedBlaschke,
    p: float,
    alpha: float,
    r_max: float,
    *,
    angular_factor: float = 64.0,
    radial_order: int = 16,
) -> QuadratureResult:
    """iint ((1 - |B|) / (1 - |z|))^p (1 - |z|)^alpha dA over |z| <= r_max.

    Finiteness of the full-disk integral characterizes B' being in the
    weighted Bergman space when p > alpha + 1 (enforced as a warning only).
    The truncation tail bound of B is folded into the error estimate by
    re-evaluating the integrand at the worst-case |B| deficit.
    """
    if not p > 0.0:
        raise ValueError(f"p must be positive, got {p}")
    if not alpha > -1.0:
        raise ValueError(f"alpha must exceed -1, got {alpha}")
    if p <= alpha + 1.0:
        warnings.warn(
            f"criterion requires p > alpha + 1 (got p = {p}, alpha = {alpha}); "
            "the integral no longer characterizes membership",
            stacklevel=2,
        )

    def integrand(z: np.ndarray, gap: float):
        value, tail = product_eval(B, z)
        absB = np.clip(np.abs(value), 0.0, 1.0)
        nominal = ((1.0 - absB) / gap) ** p * gap**alpha
        if tail is None:
            return nominal
        worst = np.clip(absB - tail, 0.0, 1.0)
        perturbed = ((1.0 - worst) / gap) ** p * gap**alpha
        return nominal, perturbed

    floor = float(np.min(1.0 - np.abs(B.active_zeros))) / 4.0
    return _integrate_annuli(
        integrand, r_max, radial_order, angular_factor, 1.0, floor
    )


def fit_linear(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float, float]:
    """Least-squares line fit; returns (slope, intercept, r_squared)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        raise ValueError("need at least two samples to fit a line")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(slope), float(intercept), r2


def classify_growth(samples: Iterable[Tuple[float, float]]) -> GrowthVerdict:
    """Finite / Infinite / Inconclusive from partial-norm samples.

    Expects (r_k, partial) pairs with r_k = 1 - 2^{-k} increasing.  The
    exponent is the slope of log(partial) against log(1/(1 - r)) over the
    last four samples; Infinite needs slope > 0.05 with strictly increasing
    partials, Finite needs the final relative Cauchy increments below 1e-4.
    Pure logarithmic growth is reported as Infinite with the log_type flag.
    """
    pts = [(float(r), float(v)) for r, v in samples]
    if len(pts) < 4:
        return GrowthVerdict(INCONCLUSIVE, math.nan, tuple(pts))
    radii = [r for r, _ in pts]
    if any(not 0.0 < r < 1.0 for r in radii) or any(
        b <= a for a, b in zip(radii, radii[1:])
    ):
        raise ValueError("sample radii must be strictly increasing within (0, 1)")

    window = pts[-4:]
    x = [math.log(1.0 / (1.0 - r)) for r, _ in window]
    y = [v for _, v in window]

    exponent = math.nan
    if all(v > 0.0 for v in y):
        exponent, _, _ = fit_linear(x, [math.log(v) for v in y])

    scale = max(abs(y[-1]), 1e-300)
    rel_steps = [abs(y[-1] - y[-2]) / scale, abs(y[-2] - y[-3]) / scale]
    if all(step < CAUCHY_RELATIVE_TOL for step in rel_steps):
        return GrowthVerdict(FINITE, exponent, tuple(window))

    increasing = all(b > a for a, b in zip(y, y[1:]))
    if not math.isnan(exponent) and exponent > GROWTH_SLOPE_THRESHOLD and increasing:
        raw_slope, _, raw_r2 = fit_linear(x, y)
        log_type = (
            raw_r2 > LOG_TYPE_R2_MIN
            and raw_slope > 0.0
            and exponent < LOG_TYPE_EXPONENT_MAX
        )
        return GrowthVerdict(INFINITE, exponent, tuple(window), log_type=log_type)

    return GrowthVerdict(INCONCLUSIVE, exponent, tuple(window))


def richardson(values: Sequence[float], exponents: Sequence[float], ratio: float = 2.0) -> float:
    """Eliminate error terms c h^e from values at h, h/ratio, h/ratio^2, ...

    ``values[i]`` is the approximation at step h_i = h / ratio^i; the error
    expansion sum_j c_j h^{e_j} is eliminated one exponent at a time.
    """
    vals = [float(v) for v in values]
    if len(vals) < len(exponents) + 1:
        raise ValueError("need at least one more value than exponents to eliminate")
    for e in exponents:
        f = ratio**e
        vals = [(f * vals[i + 1] - vals[i]) / (f - 1.0) for i in range(len(vals) - 1)]
    return vals[-1]
