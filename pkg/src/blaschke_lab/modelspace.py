"""Model-space machinery: reproducing kernel, bases, synthesis, derivatives.

For a Blaschke product B with zeros {a_n}, the model space is the
orthogonal complement of B H^2 in the Hardy space H^2.  Two bases are
evaluated here:

  g_n(z) = B_n(z) (1 - |a_n|^2)^{1/2} / (1 - conj(a_n) z)   (orthonormal)
  h_n(z) = (1 - |a_n|)^{1/2} / (1 - conj(a_n) z)            (Riesz basis,
                                        uniformly separated zeros only)

with B_n the subproduct over a_1 .. a_{n-1}.  The conjugated denominator
is used throughout; it is the only choice consistent with orthonormality
and with the two-sum derivative expansion implemented in synth_deriv.

Hardy-space inner products are circle integrals at radii 1 - 2^{-k}
extrapolated in (1 - r); the integrands here are rational with poles
outside the closed disk, so the extrapolation converges fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .blaschke import TruncatedBlaschke, _as_disk_array, product_eval
from .quadrature import richardson
from .sequences import ZeroSequence, uniform_separation_constant

ORTHONORMAL_G = "g"
RIESZ_H = "h"

# Below this truncated uniform-separation constant the Riesz basis is too
# ill-conditioned to synthesize against; synthesis is refused instead of
# returning silently inaccurate values.
RIESZ_SEPARATION_FLOOR = 0.05

INNER_LEVEL_COUNT = 7
INNER_EXPONENTS = (1.0, 2.0, 3.0, 4.0)

__all__ = [
    "ORTHONORMAL_G",
    "RIESZ_H",
    "RIESZ_SEPARATION_FLOOR",
    "ModelFunction",
    "g_basis",
    "gram_matrix",
    "h2_inner",
    "h_basis",
    "kernel_bound",
    "kernel_eval",
    "synth",
    "synth_deriv",
]


def kernel_eval(B: TruncatedBlaschke, z: complex, u, with_error: bool = False):
    """Reproducing kernel K_z(u) = (1 - conj(B(z)) B(u)) / (1 - conj(z) u).

    With ``with_error=True`` also returns an upper bound for the deviation
    caused by truncating B, propagated from both tail bounds.
    """
    z = complex(z)
    bz, tz = product_eval(B, z)
    u_arr, scalar = _as_disk_array(u)
    bu, tu = product_eval(B, u_arr)
    denom = 1.0 - z.conjugate() * u_arr
    value = (1.0 - np.conj(bz) * bu) / denom
    value = value[()] if scalar else value
    if not with_error:
        return value
    if tz is None or tu is None:
        return value, None
    err = (tz + tu + tz * tu) / np.abs(denom)
    return value, (err[()] if scalar else err)


def kernel_bound(B: TruncatedBlaschke, z: complex) -> float:
    """Kernel norm ((1 - |B(z)|^2) / (1 - |z|^2))^{1/2}.

    Bounds |f(z)| by this times the coefficient norm for model functions.
    """
    z = complex(z)
    bz, _ = product_eval(B, z)
    b2 = min(abs(bz) ** 2, 1.0)
    return math.sqrt((1.0 - b2) / (1.0 - abs(z) ** 2))


def _weights(seq: ZeroSequence, m: int, kind: str) -> np.ndarray:
    mods = seq.moduli[:m]
    if kind == ORTHONORMAL_G:
        return np.sqrt(1.0 - mods**2)
    if kind == RIESZ_H:
        return np.sqrt(1.0 - mods)
    raise ValueError(f"unknown basis kind {kind!r}")


def _basis_matrix(seq: ZeroSequence, m: int, z: np.ndarray, kind: str) -> np.ndarray:
    """Stack of basis values, shape (m,) + z.shape."""
    zeros = seq.points_array[:m]
    w = _weights(seq, m, kind)
    out = np.empty((m,) + z.shape, dtype=complex)
    prefix = np.ones_like(z)
    for n in range(m):
        a = zeros[n]
        kernel = 1.0 / (1.0 - a.conjugate() * z)
        if kind == ORTHONORMAL_G:
            out[n] = prefix * w[n] * kernel
            prefix = prefix * (a.conjugate() / abs(a)) * (a - z) * kernel
        else:
            out[n] = w[n] * kernel
    return out


def g_basis(seq: ZeroSequence, n: int, z):
    """Orthonormal basis element g_n; n is 1-based."""
    if not 1 <= n <= seq.count:
        raise ValueError(f"basis index {n} out of range 1..{seq.count}")
    arr, scalar = _as_disk_array(z)
    vals = _basis_matrix(seq, n, arr, ORTHONORMAL_G)[n - 1]
    return vals[()] if scalar else vals


def h_basis(seq: ZeroSequence, n: int, z):
    """Riesz basis element h_n; n is 1-based."""
    if not 1 <= n <= seq.count:
        raise ValueError(f"basis index {n} out of range 1..{seq.count}")
    arr, scalar = _as_disk_array(z)
    a = seq.points_array[n - 1]
    vals = math.sqrt(1.0 - abs(a)) / (1.0 - a.conjugate() * arr)
    return vals[()] if scalar else vals


@dataclass(frozen=True)
class ModelFunction:
    """Coefficient vector against a model-space basis."""

    coefficients: tuple
    basis_kind: str
    zeros: ZeroSequence
    separation_floor: float = RIESZ_SEPARATION_FLOOR

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) for c in self.coefficients)
        if not 1 <= len(coeffs) <= self.zeros.count:
            raise ValueError(
                f"{len(coeffs)} coefficients for {self.zeros.count} zeros"
            )
        if self.basis_kind not in (ORTHONORMAL_G, RIESZ_H):
            raise ValueError(f"unknown basis kind {self.basis_kind!r}")
        if self.basis_kind == RIESZ_H:
            delta = uniform_separation_constant(self.zeros)
            if delta < self.separation_floor:
                raise ValueError(
                    f"Riesz-h synthesis refused: uniform separation {delta:.3g} "
                    f"below floor {self.separation_floor:.3g}"
                )
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def coeff_array(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=complex)

    @property
    def coeff_norm(self) -> float:
        return float(np.linalg.norm(self.coeff_array))


def synth(f: ModelFunction, z):
    """sum_n c_n basis_n(z) for the declared basis kind."""
    arr, scalar = _as_disk_array(z)
    basis = _basis_matrix(f.zeros, len(f.coefficients), arr, f.basis_kind)
    total = np.sum(f.coeff_array.reshape((-1,) + (1,) * arr.ndim) * basis, axis=0)
    return total[()] if scalar else total


def synth_deriv(f: ModelFunction, z):
    """Termwise derivative of synth.

    g-basis: each term c_n g_n differentiates into a kernel-squared part and
    a subproduct-derivative part,

        c_n B_n conj(a_n) w_n / (1 - conj(a_n) z)^2
            + c_n B_n' w_n / (1 - conj(a_n) z),

    with the prefix products B_n and their derivatives updated by one factor
    per step.  h-basis: the single kernel-squared sum.
    """
    arr, scalar = _as_disk_array(z)
    zeros = f.zeros.points_array[: len(f.coefficients)]
    w = _weights(f.zeros, len(f.coefficients), f.basis_kind)
    c = f.coeff_array
    total = np.zeros(arr.shape, dtype=complex)
    if f.basis_kind == RIESZ_H:
        terms = np.empty((len(c),) + arr.shape, dtype=complex)
        for n, a in enumerate(zeros):
            terms[n] = c[n] * a.conjugate() * w[n] / (1.0 - a.conjugate() * arr) ** 2
        total = np.sum(terms, axis=0)
        return total[()] if scalar else total

    prefix = np.ones_like(arr)
    prefix_deriv = np.zeros_like(arr)
    terms = np.empty((len(c),) + arr.shape, dtype=complex)
    for n, a in enumerate(zeros):
        ac = a.conjugate()
        kernel = 1.0 / (1.0 - ac * arr)
        terms[n] = c[n] * w[n] * (prefix * ac * kernel**2 + prefix_deriv * kernel)
        factor = (ac / abs(a)) * (a - arr) * kernel
        factor_deriv = (ac / abs(a)) * (abs(a) ** 2 - 1.0) * kernel**2
        prefix, prefix_deriv = (
            prefix * factor,
            prefix_deriv * factor + prefix * factor_deriv,
        )
    total = np.sum(terms, axis=0)
    return total[()] if scalar else total


def _pow2_clamp(n: float, lo: int = 256, hi: int = 1 << 18) -> int:
    m = lo
    while m < n and m < hi:
        m *= 2
    return m


def _auto_levels(pole_modulus: float) -> Tuple[int, ...]:
    """Radius levels k (r = 1 - 2^{-k}) adapted to the nearest pole.

    The circle integral is analytic in (1 - r) up to 1/pole - 1, so the
    extrapolation ladder starts deep enough that 2^{-k} sits well inside
    that radius.  Deep levels stay cheap: the angular count saturates at
    the pole scale.
    """
    radius = max(1e-12, 1.0 / min(pole_modulus, 1.0 - 1e-12) - 1.0)
    k_min = max(8, math.ceil(math.log2(8.0 / radius)))
    return tuple(range(k_min, k_min + INNER_LEVEL_COUNT))


def h2_inner(
    f: Callable,
    g: Callable,
    *,
    pole_modulus: float = 0.999,
    k_levels: Optional[Sequence[int]] = None,
    exponents: Sequence[float] = INNER_EXPONENTS,
) -> complex:
    """Hardy-space inner product <f, g> by extrapolated circle integrals.

    Evaluates (1/2 pi) int f(r e^{it}) conj(g(r e^{it})) dt at radii
    r = 1 - 2^{-k} and removes the leading (1 - r)-powers by Richardson
    extrapolation.  ``pole_modulus`` is the largest pole-defining modulus of
    the integrand (max |a_n|, |z| for kernels); it sets the angular count
    and the default ladder depth.
    """
    if k_levels is None:
        k_levels = _auto_levels(pole_modulus)
    vals = []
    for k in k_levels:
        r = 1.0 - 0.5**k
        m = _pow2_clamp(40.0 / max(1e-12, 1.0 - r * pole_modulus))
        zc = r * np.exp(2j * math.pi * np.arange(m) / m)
        fv = np.asarray(f(zc), dtype=complex)
        gv = np.asarray(g(zc), dtype=complex)
        vals.append(complex(np.mean(fv * np.conj(gv))))
    re = richardson([v.real for v in vals], exponents)
    im = richardson([v.imag for v in vals], exponents)
    return complex(re, im)


def gram_matrix(
    seq: ZeroSequence,
    m: int,
    *,
    basis: str = ORTHONORMAL_G,
    k_levels: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """Gram matrix of the first m basis elements under the H^2 inner product."""
    if not 1 <= m <= seq.count:
        raise ValueError(f"m = {m} out of range 1..{seq.count}")
    pole = float(np.max(seq.moduli[:m]))
    if k_levels is None:
        k_levels = _auto_levels(pole)
    grams = []
    for k in k_levels:
        r = 1.0 - 0.5**k
        count = _pow2_clamp(40.0 / max(1e-12, 1.0 - r * pole))
        zc = r * np.exp(2j * math.pi * np.arange(count) / count)
        vals = _basis_matrix(seq, m, zc, basis)
        grams.append(vals @ np.conj(vals.T) / count)
    out = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            re = richardson([g[i, j].real for g in grams], INNER_EXPONENTS)
            im = richardson([g[i, j].imag for g in grams], INNER_EXPONENTS)
            out[i, j] = complex(re, im)
    return out
