"""Blaschke zero sequences: generation, summability, and separation.

A sequence carries its generator law so that tail sums and convergence
verdicts come from closed forms, never from eyeballing partial sums.
Explicit point lists have no closed form: their convergence verdicts are
``Unknown`` because no finite prefix determines convergence.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .geometry import BOUNDARY_MARGIN, StolzDomain

CONVERGES = "Converges"
DIVERGES = "Diverges"
UNKNOWN = "Unknown"

# Golden-ratio phase increment for the "spread" rule: 2 pi phi n is
# equidistributed mod 2 pi, giving non-radial separated configurations.
GOLDEN_RATIO = (math.sqrt(5.0) - 1.0) / 2.0

__all__ = [
    "CONVERGES",
    "DIVERGES",
    "UNKNOWN",
    "ConvergenceVerdict",
    "ExplicitLaw",
    "GeometricLaw",
    "PowerLaw",
    "StolzLaw",
    "ZeroSequence",
    "beta_sum",
    "blaschke_sum",
    "gen_geometric",
    "gen_power",
    "gen_stolz",
    "load_sequence",
    "save_sequence",
    "separation_constant",
    "uniform_separation_constant",
]


@dataclass(frozen=True)
class ConvergenceVerdict:
    classification: str
    partial_sum: float
    analytic_rule: Optional[str] = None


@dataclass(frozen=True)
class PowerLaw:
    """Moduli 1 - n^{-gamma} for n = 2, 3, ...; Blaschke iff gamma > 1."""

    gamma: float

    kind = "power"

    def moduli(self, count: int) -> np.ndarray:
        n = np.arange(2, count + 2, dtype=float)
        return 1.0 - n ** (-self.gamma)

    def tail_one_sum(self, n_used: int) -> float:
        # sum_{i > n_used} (i + 1)^{-gamma}, a Hurwitz zeta value
        return float(hurwitz_zeta(self.gamma, n_used + 2))

    def classify_beta(self, beta: float) -> ConvergenceVerdict:
        gb = self.gamma * beta
        cls = CONVERGES if gb > 1.0 else DIVERGES
        return ConvergenceVerdict(cls, math.nan, f"p-series, gamma*beta = {gb:.6g}")

    def describe(self) -> str:
        return f"power:gamma={self.gamma!r}"


@dataclass(frozen=True)
class GeometricLaw:
    """Moduli 1 - c r^n for n = 1, 2, ...; always a Blaschke sequence."""

    c: float
    r: float

    kind = "geometric"

    def moduli(self, count: int) -> np.ndarray:
        n = np.arange(1, count + 1, dtype=float)
        return 1.0 - self.c * self.r**n

    def tail_one_sum(self, n_used: int) -> float:
        return self.c * self.r ** (n_used + 1) / (1.0 - self.r)

    def classify_beta(self, beta: float) -> ConvergenceVerdict:
        total = self.c**beta * self.r**beta / (1.0 - self.r**beta)
        return ConvergenceVerdict(
            CONVERGES, math.nan, f"geometric series, sum = {total:.6g}"
        )

    def describe(self) -> str:
        return f"geometric:c={self.c!r},r={self.r!r}"


@dataclass(frozen=True)
class ExplicitLaw:
    """Marker for sequences given as bare point lists.

    ``finite=True`` means the stored points are all the zeros there are, so
    truncation tails are exact partial sums.  ``finite=False`` means the list
    is a prefix of an unspecified infinite sequence: tails are unknown.
    """

    finite: bool = True

    kind = "explicit"

    def classify_beta(self, beta: float) -> ConvergenceVerdict:
        return ConvergenceVerdict(UNKNOWN, math.nan, None)

    def describe(self) -> str:
        return f"explicit:finite={self.finite}"


@dataclass(frozen=True)
class StolzLaw:
    """Stolz-constrained rearrangement of a base law (same moduli)."""

    base: Union[PowerLaw, GeometricLaw, ExplicitLaw]
    vertex: complex
    aperture: float

    kind = "stolz"

    def tail_one_sum(self, n_used: int) -> float:
        return self.base.tail_one_sum(n_used)  # type: ignore[union-attr]

    def classify_beta(self, beta: float) -> ConvergenceVerdict:
        return self.base.classify_beta(beta)

    def describe(self) -> str:
        return f"stolz(eta={self.aperture!r}):{self.base.describe()}"


Law = Union[PowerLaw, GeometricLaw, ExplicitLaw, StolzLaw]


@dataclass(frozen=True)
class ZeroSequence:
    """Finite prefix of a Blaschke zero sequence, with its generator law."""

    points: tuple
    law: Law = field(default_factory=ExplicitLaw)

    def __post_init__(self) -> None:
        if len(self.points) < 1:
            raise ValueError("a zero sequence needs at least one point")
        pts = tuple(complex(z) for z in self.points)
        for z in pts:
            m = abs(z)
            if m == 0.0:
                raise ValueError("zeros at the origin are not allowed")
            if m >= 1.0 - BOUNDARY_MARGIN:
                raise ValueError(f"zero {z} is not strictly inside the unit disk")
        object.__setattr__(self, "points", pts)

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def points_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=complex)

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.points_array)

    def tail_one_sum(self, n_used: int) -> Optional[float]:
        """sum_{n > n_used} (1 - |a_n|) over the whole (conceptual) sequence.

        Closed form from the law where available; exact stored remainder for
        finite explicit lists; None when the tail is unknown.
        """
        law = self.law
        base = law.base if isinstance(law, StolzLaw) else law
        if isinstance(base, ExplicitLaw):
            if not base.finite:
                return None
            rest = 1.0 - self.moduli[n_used:]
            return float(math.fsum(rest.tolist())) if rest.size else 0.0
        return law.tail_one_sum(n_used)  # type: ignore[union-attr]

    def rotated(self, angle: float) -> "ZeroSequence":
        w = cmath.exp(1j * angle)
        return ZeroSequence(tuple(w * z for z in self.points), self.law)


def _phases(rule, indices: np.ndarray) -> np.ndarray:
    if rule is None or rule == "radial":
        return np.zeros(len(indices))
    if rule == "spread":
        return 2.0 * math.pi * GOLDEN_RATIO * indices
    arr = np.asarray(rule, dtype=float)
    if arr.shape != indices.shape:
        raise ValueError("explicit phase list must match the point count")
    return arr


def _assemble(moduli: np.ndarray, indices: np.ndarray, phases, law: Law) -> ZeroSequence:
    if np.any(moduli <= 0.0) or np.any(moduli >= 1.0 - BOUNDARY_MARGIN):
        raise ValueError(
            "law parameters push moduli outside (0, 1); reduce N or slow the decay"
        )
    angles = _phases(phases, indices)
    pts = moduli * np.exp(1j * angles)
    return ZeroSequence(tuple(pts.tolist()), law)


def gen_power(gamma: float, N: int, phases=None) -> ZeroSequence:
    """Moduli 1 - n^{-gamma}, n = 2..N+1.  Requires gamma > 1."""
    if not gamma > 1.0:
        raise ValueError(
            f"gamma = {gamma} is not a Blaschke sequence (needs gamma > 1)"
        )
    if N < 1:
        raise ValueError("N must be at least 1")
    law = PowerLaw(gamma)
    return _assemble(law.moduli(N), np.arange(2, N + 2, dtype=float), phases, law)


def gen_geometric(c: float, r: float, N: int, phases=None) -> ZeroSequence:
    """Moduli 1 - c r^n, n = 1..N, for c in (0, 1] and r in (0, 1)."""
    if not 0.0 < c <= 1.0:
        raise ValueError(f"c must be in (0, 1], got {c}")
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must be in (0, 1), got {r}")
    if N < 1:
        raise ValueError("N must be at least 1")
    law = GeometricLaw(c, r)
    return _assemble(law.moduli(N), np.arange(1, N + 1, dtype=float), phases, law)


def gen_stolz(dom: StolzDomain, base: ZeroSequence) -> ZeroSequence:
    """Rearrange ``base`` moduli inside the Stolz domain ``dom``.

    Each point goes on the ray toward the vertex, pushed out by the maximal
    admissible angle with alternating sign (a hair under, so the defining
    inequality survives rounding).
    """
    mods = base.moduli
    if np.any(np.diff(mods) <= 0.0):
        raise ValueError("base moduli must be strictly increasing")
    axis = cmath.phase(dom.vertex)
    pts = []
    for i, m in enumerate(mods):
        t = dom.max_angle(float(m)) * (1.0 - 1e-9)
        sign = 1.0 if i % 2 == 0 else -1.0
        pts.append(float(m) * cmath.exp(1j * (axis + sign * t)))
    base_law = base.law.base if isinstance(base.law, StolzLaw) else base.law
    return ZeroSequence(tuple(pts), StolzLaw(base_law, dom.vertex, dom.aperture))


def beta_sum(seq: ZeroSequence, beta: float) -> ConvergenceVerdict:
    """Partial sum and convergence verdict for sum (1 - |a_n|)^beta."""
    if not beta > 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    terms = (1.0 - seq.moduli) ** beta
    partial = math.fsum(terms.tolist())
    verdict = seq.law.classify_beta(beta)
    return ConvergenceVerdict(verdict.classification, partial, verdict.analytic_rule)


def blaschke_sum(seq: ZeroSequence) -> ConvergenceVerdict:
    return beta_sum(seq, 1.0)


def _rho_matrix(points: np.ndarray) -> np.ndarray:
    z = points[:, None]
    w = points[None, :]
    return np.abs((z - w) / (1.0 - np.conj(w) * z))


def separation_constant(seq: ZeroSequence) -> float:
    """min_{m != n} rho(a_m, a_n), by exhaustive pair scan."""
    if seq.count < 2:
        raise ValueError("separation constant needs at least two points")
    mat = _rho_matrix(seq.points_array)
    np.fill_diagonal(mat, np.inf)
    return float(mat.min())


def uniform_separation_constant(seq: ZeroSequence) -> float:
    """Truncated interpolation constant inf_n prod_{m != n} rho(a_m, a_n).

    Products run over the stored points only, so this is an upper bound for
    the infinite-sequence constant.  Accumulation happens in log space to
    avoid underflow for long sequences.
    """
    if seq.count == 1:
        return 1.0
    mat = _rho_matrix(seq.points_array)
    np.fill_diagonal(mat, 1.0)
    if np.any(mat == 0.0):
        return 0.0
    with np.errstate(divide="ignore"):
        log_products = np.sum(np.log(mat), axis=1)
    return float(np.exp(log_products.min()))


def save_sequence(seq: ZeroSequence, path) -> None:
    """Write one point per line as "re im" decimal text."""
    lines = [f"{z.real!r} {z.imag!r}" for z in seq.points]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_sequence(path, finite: bool = True) -> ZeroSequence:
    """Read a "re im" per line point file; the law is explicit."""
    pts = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 're im', got {line!r}")
        pts.append(complex(float(parts[0]), float(parts[1])))
    return ZeroSequence(tuple(pts), ExplicitLaw(finite=finite))
