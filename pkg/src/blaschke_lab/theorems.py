"""Scope catalog, parameter-plane regions, and the verification harness.

Eleven inclusion results are cataloged (ids T1..T10 and AV).  Each entry
records the (alpha, p) scope with the printed strictness, the summability
exponent where one is stated, the hypothesis class on the zero sequence,
and the implication direction.  Region labels on the (alpha, p) plane:

  A     union of the T3 / T4 / T5 scopes (every Blaschke product)
  B, C  scopes of T6 / T7 (summability-conditioned products)
  D     the AV scope (interpolating products, iff)
  E, F  scopes of T8 / T9 (interpolating products)
  Open  the strip 4/3 + 2 alpha/3 <= p < 2 + alpha

All labels that hold at a point are reported; no disjointness is imposed
beyond what the printed inequalities give.  Membership verdicts produced
by ``verify`` are classify_growth outputs over truncated integrals, never
claims about the true infinite objects; the caveat travels with every
report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .blaschke import TruncatedBlaschke
from .geometry import StolzDomain, stolz_contains
from .modelspace import ModelFunction, RIESZ_SEPARATION_FLOOR, synth_deriv
from .quadrature import (
    FINITE,
    INCONCLUSIVE,
    INFINITE,
    GrowthVerdict,
    ahern_integral,
    area_norm,
    classify_growth,
)
from .sequences import (
    CONVERGES,
    DIVERGES,
    ConvergenceVerdict,
    ZeroSequence,
    beta_sum,
    blaschke_sum,
    separation_constant,
    uniform_separation_constant,
)

CONSISTENT = "Consistent"
VIOLATION_CANDIDATE = "Violation-candidate"

ANY_B = "any-B"
SUMMABILITY = "summability"
UNIFORMLY_DISCRETE = "uniformly-discrete"
UNIFORMLY_SEPARATED = "uniformly-separated"
STOLZ = "stolz"

ZEROS_TO_MEMBERSHIP = "zeros=>membership"
MEMBERSHIP_TO_ZEROS = "membership=>zeros"
IFF = "iff"

TRUNCATION_CAVEAT = (
    "numerical verdicts describe truncated products and partial integrals "
    "over the sampled radii, not the true infinite-sequence objects"
)

__all__ = [
    "CATALOG",
    "CONSISTENT",
    "TRUNCATION_CAVEAT",
    "VIOLATION_CANDIDATE",
    "HypothesisCheck",
    "ScopeVerdict",
    "TheoremSpec",
    "VerificationReport",
    "VerifyConfig",
    "boundary_curves",
    "region_classify",
    "required_beta",
    "theorem_ids",
    "theorem_scope",
    "verify",
]


@dataclass(frozen=True)
class TheoremSpec:
    id: str
    hypothesis_class: str
    direction: str
    scope: Callable[[float, float], bool]
    scope_text: str
    beta: Optional[Callable[[float, float], float]] = None
    beta_text: Optional[str] = None


def _catalog() -> dict:
    entries = [
        TheoremSpec(
            "T1",
            UNIFORMLY_DISCRETE,
            MEMBERSHIP_TO_ZEROS,
            lambda a, p: a + 1.0 < p < a + 2.0,
            "alpha + 1 < p < alpha + 2",
            lambda a, p: 2.0 - p + a,
            "2 - p + alpha",
        ),
        TheoremSpec(
            "T2",
            ANY_B,
            MEMBERSHIP_TO_ZEROS,
            lambda a, p: 1.5 + a < p < 2.0 + a,
            "3/2 + alpha < p < 2 + alpha",
            lambda a, p: (2.0 - p + a) / (p - 1.0 - a),
            "(2 - p + alpha) / (p - 1 - alpha)",
        ),
        TheoremSpec(
            "T3",
            ANY_B,
            ZEROS_TO_MEMBERSHIP,
            lambda a, p: a > 1.0 and p < 4.0 / 3.0 + 2.0 * a / 3.0,
            "alpha > 1 and 0 < p < 4/3 + 2 alpha/3",
        ),
        TheoremSpec(
            "T4",
            ANY_B,
            ZEROS_TO_MEMBERSHIP,
            lambda a, p: p < 2.0 / 3.0 + 2.0 * a / 3.0,
            "alpha > -1 and 0 < p < 2/3 + 2 alpha/3",
        ),
        TheoremSpec(
            "T5",
            ANY_B,
            ZEROS_TO_MEMBERSHIP,
            lambda a, p: a > 0.0 and p < 1.0 + 0.5 * a,
            "alpha > 0 and 0 < p < 1 + alpha/2",
        ),
        TheoremSpec(
            "T6",
            SUMMABILITY,
            ZEROS_TO_MEMBERSHIP,
            lambda a, p: a <= 0.0 and 2.0 / 3.0 + 2.0 * a / 3.0 <= p < 1.0 + a,
            "-1 < alpha <= 0 and 2/3 + 2 alpha/3 <= p < 1 + alpha",
            lambda a, p: p / (2.0 - p),
            "p / (2 - p)",
        ),
        TheoremSpec(
            "T7",
            SUMMABILITY,
            ZEROS_TO_MEMBERSHIP,
            lambda a, p: 0.0 < a <= 1.0 and 1.0 + 0.5 * a < p < 1.0 + a,
            "0 < alpha <= 1 and 1 + alpha/2 < p < 1 + alpha",
            lambda a, p: (4.0 - 3.0 * p + 2.0 * a) / p,
            "(4 - 3p + 2 alpha) / p",
        ),
        TheoremSpec(
            "T8",
            UNIFORMLY_SEPARATED,
            ZEROS_TO_MEMBERSHIP,
            lambda a, p: a <= 0.0 and 1.0 + a <= p < 1.0 + 0.5 * a,
            "-1 < alpha <= 0 and 1 + alpha <= p < 1 + alpha/2",
            lambda a, p: p / (2.0 - p),
            "p / (2 - p)",
        ),
        TheoremSpec(
            "T9",
            UNIFORMLY_SEPARATED,
            ZEROS_TO_MEMBERSHIP,
            lambda a, p: (
                a <= 0.0
                and 1.0 + 0.5 * a < p < min(1.0, 4.0 / 3.0 + 2.0 * a / 3.0)
            ),
            "-1 < alpha <= 0 and 1 + alpha/2 < p < min(1, 4/3 + 2 alpha/3)",
            lambda a, p: (4.0 - 3.0 * p + 2.0 * a) / (2.0 - p),
            "(4 - 3p + 2 alpha) / (2 - p)",
        ),
        TheoremSpec(
            "T10",
            STOLZ,
            ZEROS_TO_MEMBERSHIP,
            lambda a, p: p < 1.0 + 2.0 * a / 3.0,
            "alpha > -1 and 0 < p < 1 + 2 alpha/3",
        ),
        TheoremSpec(
            "AV",
            UNIFORMLY_SEPARATED,
            IFF,
            lambda a, p: p > 1.0 and 1.0 + a < p < 4.0 / 3.0 + 2.0 * a / 3.0,
            "alpha > -1, p > 1 and 1 + alpha < p < 4/3 + 2 alpha/3",
            lambda a, p: (4.0 - 3.0 * p + 2.0 * a) / p,
            "(4 - 3p + 2 alpha) / p",
        ),
    ]
    return {t.id: t for t in entries}


CATALOG = _catalog()


def theorem_ids() -> List[str]:
    return list(CATALOG)


def _validate_point(alpha: float, p: float) -> None:
    if not alpha > -1.0:
        raise ValueError(f"alpha must exceed -1, got {alpha}")
    if not p > 0.0:
        raise ValueError(f"p must be positive, got {p}")


def theorem_scope(tid: str, alpha: float, p: float) -> bool:
    """True iff (alpha, p) satisfies the cataloged scope inequalities."""
    _validate_point(alpha, p)
    return bool(CATALOG[tid].scope(alpha, p))


def required_beta(tid: str, alpha: float, p: float) -> Optional[float]:
    """Summability exponent the theorem requires at (alpha, p), if any."""
    if not theorem_scope(tid, alpha, p):
        raise ValueError(f"({alpha}, {p}) is outside the scope of {tid}")
    spec = CATALOG[tid]
    return None if spec.beta is None else float(spec.beta(alpha, p))


def boundary_curves(alpha: float) -> dict:
    """The five scope-boundary lines of the region diagram at this alpha."""
    return {
        "p=2/3+2a/3": 2.0 / 3.0 + 2.0 * alpha / 3.0,
        "p=1+a/2": 1.0 + 0.5 * alpha,
        "p=1+a": 1.0 + alpha,
        "p=4/3+2a/3": 4.0 / 3.0 + 2.0 * alpha / 3.0,
        "p=2+a": 2.0 + alpha,
    }


@dataclass(frozen=True)
class ScopeVerdict:
    alpha: float
    p: float
    regions: Tuple[str, ...]
    applicable: Tuple[Tuple[str, Optional[float]], ...]

    @property
    def label(self) -> str:
        return "+".join(self.regions)


def region_classify(alpha: float, p: float) -> ScopeVerdict:
    """All region labels holding at (alpha, p), plus applicable theorems."""
    _validate_point(alpha, p)
    regions = []
    if any(theorem_scope(t, alpha, p) for t in ("T3", "T4", "T5")):
        regions.append("A")
    if theorem_scope("T6", alpha, p):
        regions.append("B")
    if theorem_scope("T7", alpha, p):
        regions.append("C")
    if theorem_scope("AV", alpha, p):
        regions.append("D")
    if theorem_scope("T8", alpha, p):
        regions.append("E")
    if theorem_scope("T9", alpha, p):
        regions.append("F")
    if 4.0 / 3.0 + 2.0 * alpha / 3.0 <= p < 2.0 + alpha:
        regions.append("Open")
    if not regions:
        regions = ["None"]
    applicable = tuple(
        (tid, required_beta(tid, alpha, p))
        for tid in CATALOG
        if theorem_scope(tid, alpha, p)
    )
    return ScopeVerdict(alpha, p, tuple(regions), applicable)


# 64-bit default seed for synthesized coefficient vectors.
DEFAULT_SEED = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class VerifyConfig:
    """Knobs for the numerical verification harness."""

    seed: int = DEFAULT_SEED
    n_samples: int = 3
    n_coefficients: int = 8
    k_min: int = 4
    k_max: int = 10
    angular_factor: float = 64.0
    radial_order: int = 16
    separation_floor: float = RIESZ_SEPARATION_FLOOR
    stolz_vertex: complex = 1.0 + 0.0j
    stolz_aperture: float = 2.0

    @property
    def r_max(self) -> float:
        return 1.0 - 0.5**self.k_max


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    passed: bool
    evidence: str


@dataclass(frozen=True)
class VerificationReport:
    theorem_id: str
    alpha: float
    p: float
    hypothesis_checks: Tuple[HypothesisCheck, ...]
    conclusion: Union[GrowthVerdict, ConvergenceVerdict, None]
    consistency: str
    caveat: str
    seed: int

    @property
    def hypotheses_passed(self) -> bool:
        return all(c.passed for c in self.hypothesis_checks)


def _hypothesis_checks(
    spec: TheoremSpec, seq: ZeroSequence, alpha: float, p: float, cfg: VerifyConfig
) -> List[HypothesisCheck]:
    checks = []
    bs = blaschke_sum(seq)
    checks.append(
        HypothesisCheck(
            "blaschke-condition",
            bs.classification != DIVERGES,
            f"sum(1-|a_n|) partial {bs.partial_sum:.6g} [{bs.classification}]",
        )
    )
    if spec.hypothesis_class == UNIFORMLY_DISCRETE:
        delta = separation_constant(seq) if seq.count >= 2 else 1.0
        checks.append(
            HypothesisCheck(
                "uniformly-discrete", delta > 0.0, f"separation constant {delta:.6g}"
            )
        )
    elif spec.hypothesis_class == UNIFORMLY_SEPARATED:
        delta = uniform_separation_constant(seq)
        checks.append(
            HypothesisCheck(
                "uniformly-separated",
                delta >= cfg.separation_floor,
                f"truncated uniform separation {delta:.6g} "
                f"(floor {cfg.separation_floor:g})",
            )
        )
    elif spec.hypothesis_class == STOLZ:
        dom = StolzDomain(cfg.stolz_vertex, cfg.stolz_aperture)
        inside = all(stolz_contains(dom, z) for z in seq.points)
        checks.append(
            HypothesisCheck(
                "stolz-domain",
                inside,
                f"all {seq.count} zeros in Stolz domain "
                f"(eta {cfg.stolz_aperture:g})" if inside else "zeros escape the domain",
            )
        )
    if spec.direction != MEMBERSHIP_TO_ZEROS and spec.beta is not None:
        b = spec.beta(alpha, p)
        sv = beta_sum(seq, b)
        checks.append(
            HypothesisCheck(
                f"summability(beta={b:.6g})",
                sv.classification == CONVERGES,
                f"partial {sv.partial_sum:.6g} [{sv.classification}]"
                + (f"; {sv.analytic_rule}" if sv.analytic_rule else ""),
            )
        )
    return checks


_GROWTH_RANK = {FINITE: 0, INCONCLUSIVE: 1, INFINITE: 2}


def _membership_of_model_derivatives(
    spec: TheoremSpec, seq: ZeroSequence, alpha: float, p: float, cfg: VerifyConfig
) -> GrowthVerdict:
    """Worst growth verdict of ||f'||-partials over sampled model functions."""
    rng = np.random.default_rng(cfg.seed)
    m = min(cfg.n_coefficients, seq.count)
    basis = "h" if spec.hypothesis_class == UNIFORMLY_SEPARATED else "g"
    # Angular features of the truncated f' saturate at the smallest pole gap.
    scale_floor = float(np.min(1.0 - seq.moduli[:m])) / 4.0
    worst: Optional[GrowthVerdict] = None
    for _ in range(cfg.n_samples):
        coeffs = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / math.sqrt(2)
        f = ModelFunction(
            tuple(coeffs), basis, seq, separation_floor=cfg.separation_floor
        )
        result = area_norm(
            lambda z: synth_deriv(f, z),
            p,
            alpha,
            cfg.r_max,
            angular_factor=cfg.angular_factor,
            radial_order=cfg.radial_order,
            angular_scale_floor=scale_floor,
        )
        verdict = classify_growth(result.growth_samples(cfg.k_min))
        if worst is None or _GROWTH_RANK[verdict.classification] > _GROWTH_RANK[
            worst.classification
        ]:
            worst = verdict
    assert worst is not None
    return worst


def verify(
    tid: str,
    seq: ZeroSequence,
    alpha: float,
    p: float,
    cfg: Optional[VerifyConfig] = None,
) -> VerificationReport:
    """Check a theorem's hypotheses on ``seq`` and probe its conclusion.

    zeros=>membership results synthesize seeded random model functions and
    classify the growth of the truncated weighted norm of f'.
    membership=>zeros results are tested through the contrapositive: a
    divergent summability sum demands an Infinite membership integral.
    """
    cfg = cfg or VerifyConfig()
    spec = CATALOG[tid]
    if not theorem_scope(tid, alpha, p):
        raise ValueError(f"({alpha}, {p}) is outside the scope of {tid}")

    checks = _hypothesis_checks(spec, seq, alpha, p, cfg)
    if not all(c.passed for c in checks):
        return VerificationReport(
            tid, alpha, p, tuple(checks), None, INCONCLUSIVE, TRUNCATION_CAVEAT, cfg.seed
        )

    if spec.direction == MEMBERSHIP_TO_ZEROS:
        beta = spec.beta(alpha, p)  # type: ignore[misc]
        sv = beta_sum(seq, beta)
        B = TruncatedBlaschke(seq)
        result = ahern_integral(
            B,
            p,
            alpha,
            cfg.r_max,
            angular_factor=cfg.angular_factor,
            radial_order=cfg.radial_order,
        )
        growth = classify_growth(result.growth_samples(cfg.k_min))
        checks.append(
            HypothesisCheck(
                "membership-proxy",
                True,
                f"criterion integral growth {growth.classification} "
                f"(fitted exponent {growth.fitted_exponent:.3g})",
            )
        )
        if sv.classification == DIVERGES:
            if growth.classification == INFINITE:
                consistency = CONSISTENT
            elif growth.classification == FINITE:
                consistency = VIOLATION_CANDIDATE
            else:
                consistency = INCONCLUSIVE
        elif sv.classification == CONVERGES:
            # The implication only constrains divergent sums; nothing to
            # falsify here.
            consistency = CONSISTENT
        else:
            consistency = INCONCLUSIVE
        return VerificationReport(
            tid, alpha, p, tuple(checks), sv, consistency, TRUNCATION_CAVEAT, cfg.seed
        )

    growth = _membership_of_model_derivatives(spec, seq, alpha, p, cfg)
    if growth.classification == FINITE:
        consistency = CONSISTENT
    elif growth.classification == INFINITE:
        consistency = VIOLATION_CANDIDATE
    else:
        consistency = INCONCLUSIVE
    return VerificationReport(
        tid, alpha, p, tuple(checks), growth, consistency, TRUNCATION_CAVEAT, cfg.seed
    )
