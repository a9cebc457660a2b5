"""Moments, phase-diffusion linewidth, and distribution distances.

The linewidth is read off the initial decay of the field correlation:
with f(t) = tr[a* e^{St}(a rho_ss)] the generator fixes
f'(0)/f(0) = i * pull - D/2, so D = -2 Re tr[a* S(a rho_ss)] / <n>.
Loss alone gives D = kappa exactly, truncation notwithstanding, which the
tests lean on.  A first-difference evaluation of the same quotient through
the phi1 series of (e^{S delta} - 1)/delta serves as the independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import TruncatedSpace, annihilation
from .superop import Superoperator


@dataclass(frozen=True)
class PhotonMoments:
    mean_n: float
    variance: float
    mandel_q: float


def moments(p: np.ndarray) -> PhotonMoments:
    """Mean, variance and Mandel Q of a photon-number distribution.

    Q = variance / mean - 1 (0 for a Poissonian, negative sub-Poissonian);
    nan when the mean vanishes.
    """
    p = np.asarray(p, dtype=float)
    n = np.arange(p.size, dtype=float)
    mean = float(n @ p)
    var = float((n * n) @ p) - mean**2
    q = var / mean - 1.0 if mean > 0 else math.nan
    return PhotonMoments(mean_n=mean, variance=var, mandel_q=q)


def semiclassical_intensity(gain: float, kappa: float, beta: float) -> float:
    """Rate-equation photon number: gain clamps the saturated pump against
    the loss, (gain/kappa - 1)/beta above threshold and 0 below."""
    if kappa <= 0 or beta <= 0:
        raise ValueError("kappa and beta must be positive")
    if gain <= kappa:
        return 0.0
    return (gain / kappa - 1.0) / beta


def distribution_distance(p: np.ndarray, q: np.ndarray) -> float:
    """Total-variation distance; the shorter array is zero padded."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    size = max(p.size, q.size)
    pp = np.zeros(size)
    qq = np.zeros(size)
    pp[: p.size] = p
    qq[: q.size] = q
    return 0.5 * float(np.abs(pp - qq).sum())


@dataclass(frozen=True)
class LinewidthResult:
    D: float
    normalized_D: float
    frequency_pull: float
    mean_n: float


MEAN_N_FLOOR = 1e-6


def _correlation_derivative(apply_fn, rho_ss: np.ndarray) -> complex:
    """tr[a* S(a rho_ss)] without building a dense superoperator."""
    space = TruncatedSpace(rho_ss.shape[0] - 1)
    a = annihilation(space)
    image = apply_fn(a @ rho_ss)
    root = np.sqrt(np.arange(1, space.dim, dtype=float))
    return complex(root @ np.diagonal(image, offset=1))


def _resolve_apply(generator):
    if isinstance(generator, Superoperator):
        return generator.apply
    if callable(generator):
        return generator
    raise TypeError("generator must be a Superoperator or a callable rho -> drho")


def linewidth(generator, rho_ss: np.ndarray, kappa: float) -> LinewidthResult:
    """Phase-diffusion rate D of the steady field, from the full generator
    (pump and loss together).  normalized_D = D <n> / kappa is 1 for pure
    loss and tends to the interaction-free value far above threshold."""
    mean_n = float(np.real(np.diagonal(rho_ss)) @ np.arange(rho_ss.shape[0]))
    if mean_n < MEAN_N_FLOOR:
        raise ValueError(
            f"mean photon number {mean_n:.3e} is below {MEAN_N_FLOOR:g}; "
            "the linewidth is undefined"
        )
    deriv = _correlation_derivative(_resolve_apply(generator), rho_ss)
    d_rate = -2.0 * deriv.real / mean_n
    return LinewidthResult(
        D=d_rate,
        normalized_D=d_rate * mean_n / kappa,
        frequency_pull=deriv.imag / mean_n,
        mean_n=mean_n,
    )


def linewidth_fd(
    generator,
    rho_ss: np.ndarray,
    kappa: float,
    norm_scale: float | None = None,
) -> LinewidthResult:
    """First-difference variant: replaces S by (e^{S delta} - 1)/delta with
    delta = 1e-6 / ||S||, evaluated through the series
    S + delta S^2/2 + delta^2 S^3/6 + delta^3 S^4/24 to dodge cancellation."""
    apply_fn = _resolve_apply(generator)
    if norm_scale is None:
        if isinstance(generator, Superoperator):
            norm_scale = generator.norm
        else:
            raise ValueError("norm_scale is required for a matrix-free generator")
    if norm_scale <= 0:
        raise ValueError("norm_scale must be positive")
    delta = 1e-6 / norm_scale
    space = TruncatedSpace(rho_ss.shape[0] - 1)
    a = annihilation(space)
    w = apply_fn(a @ rho_ss)
    quotient = np.zeros_like(w)
    factor = 1.0
    for order in range(1, 5):
        factor /= order  # delta^{k-1} / k!
        quotient = quotient + factor * w
        if order < 4:
            w = delta * apply_fn(w)
    root = np.sqrt(np.arange(1, space.dim, dtype=float))
    deriv = complex(root @ np.diagonal(quotient, offset=1))
    mean_n = float(np.real(np.diagonal(rho_ss)) @ np.arange(rho_ss.shape[0]))
    if mean_n < MEAN_N_FLOOR:
        raise ValueError(
            f"mean photon number {mean_n:.3e} is below {MEAN_N_FLOOR:g}; "
            "the linewidth is undefined"
        )
    d_rate = -2.0 * deriv.real / mean_n
    return LinewidthResult(
        D=d_rate,
        normalized_D=d_rate * mean_n / kappa,
        frequency_pull=deriv.imag / mean_n,
        mean_n=mean_n,
    )


def operator_norm_estimate(apply_fn, space: TruncatedSpace, iters: int = 10, seed: int = 0) -> float:
    """Power-iteration estimate of the generator's spectral norm, for
    choosing the first-difference step when no dense matrix exists."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((space.dim, space.dim))
    v /= np.linalg.norm(v)
    est = 1.0
    for _ in range(iters):
        w = apply_fn(v)
        est = np.linalg.norm(w)
        if est == 0.0:
            return 0.0
        v = w / est
    return float(est)
