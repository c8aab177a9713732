"""Truncated Blaschke products, subproducts, and exact derivatives.

Evaluators accept a scalar or an ndarray of disk points and broadcast.
The truncation tail bound uses |B - B_N| <= exp(K(z) S_N) - 1, where
S_N = sum_{n > N} (1 - |a_n|) comes from the sequence law and
K(z) = (1 + |z|) / (min_n |a_n| (1 - |z|)) dominates every per-factor
deviation |1 - b_n(z)| on the disk of radius |z|.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .geometry import BOUNDARY_MARGIN
from .sequences import ZeroSequence

# Above this many factors, magnitudes accumulate in log space.
DIRECT_PRODUCT_LIMIT = 10_000

__all__ = [
    "TruncatedBlaschke",
    "factor_deriv",
    "factor_eval",
    "product_deriv",
    "product_eval",
    "subproduct_eval",
]


def _as_disk_array(z) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    if np.any(np.abs(arr) >= 1.0 - BOUNDARY_MARGIN):
        raise ValueError("evaluation point is not strictly inside the unit disk")
    return arr, scalar


def _check_zero(a: complex) -> complex:
    a = complex(a)
    if a == 0.0:
        raise ValueError("Blaschke factor normalization requires a != 0")
    if abs(a) >= 1.0 - BOUNDARY_MARGIN:
        raise ValueError(f"zero {a} is not strictly inside the unit disk")
    return a


def factor_eval(a: complex, z):
    """Normalized factor (conj(a)/|a|) (a - z) / (1 - conj(a) z)."""
    a = _check_zero(a)
    arr, scalar = _as_disk_array(z)
    ac = a.conjugate()
    vals = (ac / abs(a)) * (a - arr) / (1.0 - ac * arr)
    return vals[()] if scalar else vals.reshape(np.shape(z))


def factor_deriv(a: complex, z):
    """Derivative (conj(a)/|a|) (|a|^2 - 1) / (1 - conj(a) z)^2."""
    a = _check_zero(a)
    arr, scalar = _as_disk_array(z)
    ac = a.conjugate()
    vals = (ac / abs(a)) * (abs(a) ** 2 - 1.0) / (1.0 - ac * arr) ** 2
    return vals[()] if scalar else vals.reshape(np.shape(z))


@dataclass(frozen=True)
class TruncatedBlaschke:
    """First-``n_used`` product of a zero sequence."""

    zeros: ZeroSequence
    n_used: Optional[int] = None

    def __post_init__(self) -> None:
        n = self.zeros.count if self.n_used is None else int(self.n_used)
        if not 1 <= n <= self.zeros.count:
            raise ValueError(
                f"n_used = {self.n_used} out of range for {self.zeros.count} zeros"
            )
        object.__setattr__(self, "n_used", n)

    @property
    def active_zeros(self) -> np.ndarray:
        return self.zeros.points_array[: self.n_used]

    def tail_sum(self) -> Optional[float]:
        return self.zeros.tail_one_sum(self.n_used)


def _raw_product(zeros: np.ndarray, arr: np.ndarray) -> np.ndarray:
    if len(zeros) <= DIRECT_PRODUCT_LIMIT:
        value = np.ones_like(arr)
        for a in zeros:
            ac = a.conjugate()
            value *= (ac / abs(a)) * (a - arr) / (1.0 - ac * arr)
        return value
    log_mag = np.zeros(arr.shape)
    phase = np.zeros(arr.shape)
    degenerate = np.zeros(arr.shape, dtype=bool)
    for a in zeros:
        ac = a.conjugate()
        f = (ac / abs(a)) * (a - arr) / (1.0 - ac * arr)
        degenerate |= f == 0.0
        with np.errstate(divide="ignore"):
            log_mag += np.log(np.abs(f))
        phase += np.angle(f)
    value = np.exp(log_mag) * np.exp(1j * phase)
    value[degenerate] = 0.0
    return value


def product_eval(
    B: TruncatedBlaschke, z
) -> Tuple[Union[complex, np.ndarray], Union[None, float, np.ndarray]]:
    """Evaluate the truncated product; returns (value, tail_bound).

    The tail bound dominates |B(z) - B_N(z)| for the full product of the
    sequence law; it is None when the sequence has no usable tail law.
    """
    arr, scalar = _as_disk_array(z)
    zeros = B.active_zeros
    value = _raw_product(zeros, arr)

    tail = B.tail_sum()
    if tail is None:
        bound = None
    else:
        min_mod = float(np.min(np.abs(B.zeros.points_array)))
        absz = np.abs(arr)
        K = (1.0 + absz) / (min_mod * (1.0 - absz))
        with np.errstate(over="ignore"):
            bound = np.expm1(K * tail)  # saturates to inf when the bound is vacuous
        bound = bound[()] if scalar else bound.reshape(np.shape(z))
    return (value[()] if scalar else value.reshape(np.shape(z))), bound


def subproduct_eval(B: TruncatedBlaschke, n: int, z):
    """Product of the factors with zeros a_1 .. a_{n-1}; n = 1 gives 1."""
    if not 1 <= n <= B.n_used + 1:
        raise ValueError(f"subproduct index {n} out of range 1..{B.n_used + 1}")
    arr, scalar = _as_disk_array(z)
    value = _raw_product(B.active_zeros[: n - 1], arr)
    return value[()] if scalar else value.reshape(np.shape(z))


def product_deriv(B: TruncatedBlaschke, z):
    """Exact derivative of the truncated product.

    Runs the product rule incrementally: with P_k the k-factor prefix,
    P_{k+1}' = P_k' b_k + P_k b_k'.  No division by any factor happens, so
    zeros of B are safe points.
    """
    arr, scalar = _as_disk_array(z)
    value = np.ones_like(arr)
    deriv = np.zeros_like(arr)
    for a in B.active_zeros:
        ac = a.conjugate()
        denom = 1.0 - ac * arr
        factor = (ac / abs(a)) * (a - arr) / denom
        factor_d = (ac / abs(a)) * (abs(a) ** 2 - 1.0) / denom**2
        deriv = deriv * factor + value * factor_d
        value = value * factor
    return deriv[()] if scalar else deriv.reshape(np.shape(z))
