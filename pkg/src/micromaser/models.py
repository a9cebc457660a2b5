"""Master-equation models for the pumped cavity on a truncated Fock space.

Five generators share the same loss term kappa D[a] and differ in how the
atom-induced gain is treated:

  exact            measure-averaged pump, all orders in g tau
  post4            fourth-order expansion of the average (not Lindblad)
  weak_lindblad    fourth-order-accurate Lindblad set from orthonormal
                   time polynomials (exponential measure, closed forms)
  uniform_lindblad all-orders Lindblad set from degree-0/1 projections
  heuristic        single saturated-gain Lindblad operator

Polynomial occurrences of a a* in the series models use the plain truncated
product (zero at the top entry) so that expansion identities and trace
preservation hold exactly on the whole space; diagonal operator functions
(cos, sinc, rational kernels) act with the exact eigenvalues n+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fock import TruncatedSpace, annihilation, creation
from .measures import OrthoBasis, TimeMeasure, expansion_coeffs
from .pump import PumpParameters, pump_average_tables, sin_sin_average
from .superop import (
    Superoperator,
    apply_dissipator,
    dissipator_matrix,
    left_mult,
    loss_dissipator,
    right_mult,
    sandwich,
)

EXACT = "exact"
POST4 = "post4"
WEAK = "weak_lindblad"
UNIFORM = "uniform_lindblad"
HEURISTIC = "heuristic"

MODEL_NAMES = (EXACT, POST4, WEAK, UNIFORM, HEURISTIC)


def _loss_apply(rho: np.ndarray, kappa: float) -> np.ndarray:
    """kappa (a rho a* - {a* a, rho} / 2) without building the dense matrix."""
    d = rho.shape[0]
    n = np.arange(d, dtype=float)
    out = (-0.5 * kappa) * (n[:, None] + n[None, :]) * rho
    root = np.sqrt(n[: d - 1] + 1.0)
    out[: d - 1, : d - 1] += kappa * (root[:, None] * root[None, :]) * rho[1:, 1:]
    return out


@dataclass(frozen=True)
class ExactPump:
    """Measure-averaged pump generator, stored through its cos/sin tables.

    The average of the instantaneous dissipators of the cosine/gain split is
    used, which agrees with r <M_tau - 1> everywhere except the top-level
    column, where it reflects instead of leaking: the result is trace
    preserving on the whole truncated space.  include_cos=False keeps only
    the gain family (same photon statistics, different coherence decay).
    """

    r: float
    cc: np.ndarray = field(repr=False)
    ss: np.ndarray = field(repr=False)
    include_cos: bool = True

    def _diag_rates(self) -> tuple[np.ndarray, np.ndarray]:
        cbar = np.diagonal(self.cc).copy()
        sbar = np.diagonal(self.ss).copy()
        sbar[-1] = 0.0  # gain out of the top level is truncated
        return cbar, sbar

    def matrix(self, space: TruncatedSpace) -> np.ndarray:
        d = space.dim
        cbar, sbar = self._diag_rates()
        coeff = -0.5 * (sbar[:, None] + sbar[None, :])
        if self.include_cos:
            coeff = coeff + self.cc - 0.5 * (cbar[:, None] + cbar[None, :])
        mat = np.zeros((d * d, d * d))
        idx = np.arange(d)
        pos = idx[:, None] + d * idx[None, :]
        mat[pos.reshape(-1), pos.reshape(-1)] = self.r * coeff.reshape(-1)
        up = pos[1:, 1:].reshape(-1)
        src = pos[:-1, :-1].reshape(-1)
        mat[up, src] += self.r * self.ss[:-1, :-1].reshape(-1)
        return mat

    def apply(self, rho: np.ndarray) -> np.ndarray:
        cbar, sbar = self._diag_rates()
        coeff = -0.5 * (sbar[:, None] + sbar[None, :])
        if self.include_cos:
            coeff = coeff + self.cc - 0.5 * (cbar[:, None] + cbar[None, :])
        out = self.r * coeff * rho
        out[1:, 1:] += self.r * self.ss[:-1, :-1] * rho[:-1, :-1]
        return out


@dataclass(frozen=True)
class FourthOrderPump:
    """Pump expanded to fourth order in g tau: linear gain A with quartic
    correction B; not of Lindblad form (!), kept for comparison."""

    gain: float
    quartic: float

    def _ops(self, space: TruncatedSpace):
        a = annihilation(space)
        ad = a.T
        p = a @ ad  # truncated product: top diagonal entry is zero
        return a, ad, p

    def matrix(self, space: TruncatedSpace) -> np.ndarray:
        a, ad, p = self._ops(space)
        p2 = p @ p
        lin = sandwich(ad) - 0.5 * (left_mult(p) + right_mult(p))
        quart = (
            3.0 * sandwich(p)
            + 0.5 * (left_mult(p2) + right_mult(p2))
            - 2.0 * (np.kron(a.T, ad @ p) + np.kron((p @ a).T, ad))
        )
        return self.gain * lin + self.quartic * quart

    def apply(self, rho: np.ndarray) -> np.ndarray:
        space = TruncatedSpace(rho.shape[0] - 1)
        a, ad, p = self._ops(space)
        p2 = p @ p
        lin = ad @ rho @ a - 0.5 * (p @ rho + rho @ p)
        anti = p @ rho + rho @ p
        quart = (
            3.0 * (p @ rho @ p)
            + 0.5 * (p2 @ rho + rho @ p2)
            - 2.0 * (ad @ anti @ a)
        )
        return self.gain * lin + self.quartic * quart


@dataclass
class GeneratorModel:
    """One gain treatment bound to a space, plus the closures derived from it.

    lindblad_ops lists the pump-side Lindblad operators (loss excluded); a
    non-empty list with no `pump_extra` marks a manifestly Lindblad model.
    gain_fn(n) is the analytic one-quantum gain rate out of level n, valid
    for any n (it is what truncation searches extrapolate with).
    """

    name: str
    space: TruncatedSpace
    params: PumpParameters | None
    lindblad_ops: list = field(default_factory=list)
    pump_extra: ExactPump | FourthOrderPump | None = None
    gain_fn: object = None
    options: dict = field(default_factory=dict)

    @property
    def manifest_lindblad(self) -> bool:
        return bool(self.lindblad_ops) and self.pump_extra is None

    def gain_ratio(self, kappa: float):
        """Detailed-balance ratio p_{n+1}/p_n = G(n) / (kappa (n+1))."""
        if kappa <= 0:
            raise ValueError("kappa must be positive")
        gain = self.gain_fn

        def ratio(n):
            n = np.asarray(n, dtype=float)
            return gain(n) / (kappa * (n + 1.0))

        return ratio

    def apply(self, rho: np.ndarray, kappa: float) -> np.ndarray:
        """Generator action on a density matrix without dense vectorization."""
        out = _loss_apply(rho, kappa)
        if self.pump_extra is not None:
            out = out + self.pump_extra.apply(rho)
        if self.lindblad_ops:
            opd_op = sum(op.conj().T @ op for op in self.lindblad_ops)
            for op in self.lindblad_ops:
                out = out + op @ rho @ op.conj().T
            out = out - 0.5 * (opd_op @ rho + rho @ opd_op)
        return out


def assemble(model: GeneratorModel, kappa: float) -> Superoperator:
    """Dense generator: pump dissipators plus cavity loss at rate kappa."""
    mat = loss_dissipator(kappa, model.space).matrix.copy()
    if model.pump_extra is not None:
        mat += model.pump_extra.matrix(model.space)
    for op in model.lindblad_ops:
        mat += dissipator_matrix(op)
    return Superoperator(model.space, mat)


def merge_proportional(ops: list, tol: float = 1e-12) -> list:
    """Quadrature-sum Lindblad operators that are proportional to each other;
    the assembled generator is unchanged, the list just gets shorter."""
    merged: list[tuple[np.ndarray, float]] = []  # (unit direction, sum of c^2)
    for op in ops:
        v = op.reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            continue
        for i, (unit, weight) in enumerate(merged):
            coeff = np.vdot(unit.reshape(-1), v)
            if np.linalg.norm(v - coeff * unit.reshape(-1)) <= tol * norm:
                merged[i] = (unit, weight + abs(coeff) ** 2)
                break
        else:
            merged.append((op / norm, norm**2))
    return [unit * math.sqrt(weight) for unit, weight in merged]


def exact_model(
    params: PumpParameters,
    space: TruncatedSpace,
    measure: TimeMeasure | None = None,
    include_cos: bool = True,
) -> GeneratorModel:
    """All-orders model from the measure-averaged pump tables."""
    if measure is None:
        measure = TimeMeasure.exponential(params.tau_bar)
    cc, ss = pump_average_tables(params, space, measure)
    g_tau_bar, r = params.g_tau_bar, params.r

    def gain_fn(n):
        n = np.asarray(n, dtype=float)
        alpha = g_tau_bar * np.sqrt(n + 1.0)
        return r * sin_sin_average(measure, alpha, alpha)

    return GeneratorModel(
        name=EXACT,
        space=space,
        params=params,
        pump_extra=ExactPump(r, cc, ss, include_cos),
        gain_fn=gain_fn,
        options={"measure": measure.kind, "include_cos": include_cos},
    )


def fourth_order_generator(params: PumpParameters, space: TruncatedSpace) -> Superoperator:
    """Dense pump generator truncated at fourth order in g tau (no loss)."""
    pump = FourthOrderPump(params.gain_rate, params.saturation_rate)
    return Superoperator(space, pump.matrix(space))


def fourth_order_model(params: PumpParameters, space: TruncatedSpace) -> GeneratorModel:
    gain, quartic = params.gain_rate, params.saturation_rate

    def gain_fn(n):
        n = np.asarray(n, dtype=float)
        return gain * (n + 1.0) - 4.0 * quartic * (n + 1.0) ** 2

    return GeneratorModel(
        name=POST4,
        space=space,
        params=params,
        pump_extra=FourthOrderPump(gain, quartic),
        gain_fn=gain_fn,
    )


def sixth_order_superoperator(params: PumpParameters, space: TruncatedSpace) -> Superoperator:
    """The sixth-order remainder carried by the fourth-order-accurate
    Lindblad set: 20 r (g tau_bar)^6 (a*aa* rho aa*a - {(aa*)^3, rho}/2)."""
    a = annihilation(space)
    ad = a.T
    p = a @ ad
    coeff = 20.0 * params.r * params.u**3
    mat = coeff * (
        np.kron((p @ a).T, ad @ p)
        - 0.5 * (left_mult(p @ p @ p) + right_mult(p @ p @ p))
    )
    return Superoperator(space, mat)


def weak_coupling_model(
    params: PumpParameters, space: TruncatedSpace, drop_cos: bool = False
) -> GeneratorModel:
    """Fourth-order-accurate Lindblad set for the exponential measure.

    Gain family (u = (g tau_bar)^2, P = a a*):
        S0 = sqrt(r) g tau_bar a* (1 - u P)
        S1 = -sqrt(r) g tau_bar a* (1 - 3 u P)
        S2 = sqrt(10 r) (g tau_bar)^3 a* P
    plus one diagonal operator sqrt(6 r) u P (identity part dropped), which
    leaves photon statistics alone and only widens the line.
    """
    a = annihilation(space)
    ad = a.T
    p = a @ ad
    eye = np.eye(space.dim)
    sq_r, gt, u = math.sqrt(params.r), params.g_tau_bar, params.u
    s0 = sq_r * gt * ad @ (eye - u * p)
    s1 = -sq_r * gt * ad @ (eye - 3.0 * u * p)
    s2 = math.sqrt(10.0 * params.r) * gt**3 * ad @ p
    ops = [s0, s1, s2]
    if not drop_cos:
        ops.append(-math.sqrt(6.0 * params.r) * u * p)
    gain, kappa_free_u = params.gain_rate, u

    def gain_fn(n):
        n = np.asarray(n, dtype=float)
        x = kappa_free_u * (n + 1.0)
        return gain * (n + 1.0) * (1.0 - 4.0 * x + 10.0 * x**2)

    return GeneratorModel(
        name=WEAK,
        space=space,
        params=params,
        lindblad_ops=ops,
        gain_fn=gain_fn,
        options={"drop_cos": drop_cos},
    )


def general_weak_model(
    params: PumpParameters,
    basis: OrthoBasis,
    order: int,
    space: TruncatedSpace,
    merge: bool = True,
) -> GeneratorModel:
    """Series-truncated Lindblad set for an arbitrary interaction-time measure.

    The cosine and gain parts of the pump split are expanded to `order` in
    g tau and projected onto the orthonormal polynomials of the measure:
    x^j = sum_k a_jk f_k turns each series coefficient into Lindblad
    operators C_k (diagonal, identity parts dropped) and S_k (one-quantum
    gain).  With the exponential measure and order 3 this reproduces the
    closed-form set of weak_coupling_model.
    """
    if order < 1:
        raise ValueError("series order must be at least 1")
    k_top = min(order, basis.degree)
    if basis.degree < order:
        support = basis.measure.support_size
        if support is None or support > basis.degree + 1:
            raise ValueError(
                f"series order {order} exceeds basis degree {basis.degree}"
            )
    a = annihilation(space)
    ad = a.T
    p = a @ ad
    coeff_table = [expansion_coeffs(basis, j) for j in range(order + 1)]
    p_powers = [np.eye(space.dim)]
    while len(p_powers) <= order // 2:
        p_powers.append(p_powers[-1] @ p)
    sq_r, gt = math.sqrt(params.r), params.g_tau_bar

    ops = []
    s_polys = []  # per channel: coefficients of (n+1)^m in the gain element
    for k in range(k_top + 1):
        c_op = np.zeros((space.dim, space.dim))
        s_diag = np.zeros((space.dim, space.dim))
        s_poly = np.zeros(order // 2 + 1)
        for j in range(k, order + 1):
            a_jk = float(coeff_table[j][k])
            if j % 2 == 0:
                if j == 0:
                    continue  # pure identity, dropped
                m = j // 2
                c_op += a_jk * gt**j * (-1.0) ** m / math.factorial(j) * p_powers[m]
            else:
                m = (j - 1) // 2
                term = a_jk * gt**j * (-1.0) ** m / math.factorial(j)
                s_diag += term * p_powers[m]
                s_poly[m] += term
        if np.any(c_op):
            ops.append(sq_r * c_op)
        if np.any(s_diag):
            ops.append(sq_r * (ad @ s_diag))
            s_polys.append(s_poly)
    if merge:
        ops = merge_proportional(ops)
    r = params.r

    def gain_fn(n):
        n = np.asarray(n, dtype=float)
        y = n + 1.0
        total = np.zeros_like(y)
        for s_poly in s_polys:
            elem = np.zeros_like(y)
            for m, c in enumerate(s_poly):
                elem += c * y**m
            total += elem**2
        return r * y * total

    return GeneratorModel(
        name=WEAK,
        space=space,
        params=params,
        lindblad_ops=ops,
        gain_fn=gain_fn,
        options={"order": order, "measure": basis.measure.kind},
    )


def _uniform_sin_kernels(alpha: np.ndarray) -> list[np.ndarray]:
    """<f_k(x) sin(alpha x)> over e^{-x} dx for k = 0, 1, 2 (closed forms)."""
    den = 1.0 + alpha**2
    return [
        alpha / den,
        -alpha * (1.0 - alpha**2) / den**2,
        alpha**3 * (alpha**2 - 3.0) / den**3,
    ]


def _uniform_cos_kernels(alpha: np.ndarray) -> list[np.ndarray]:
    """<f_k(x) cos(alpha x)> for k = 0, 1 (identity parts handled upstream)."""
    den = 1.0 + alpha**2
    return [1.0 / den, 2.0 * alpha**2 / den**2]


def uniform_model(
    params: PumpParameters,
    space: TruncatedSpace,
    order: int = 1,
    drop_cos: bool = False,
) -> GeneratorModel:
    """All-orders Lindblad set from polynomial projections of the pump split.

    Exponential measure only.  order=0 keeps the degree-0 projections of
    both families, order=1 (default) adds the degree-1 gain projection,
    order=2 adds the next projections of both families.  The identity
    component of each diagonal operator is dropped.
    """
    if params.tau_bar <= 0:
        raise ValueError("tau_bar must be positive")
    if order not in (0, 1, 2):
        raise ValueError(f"uniform expansion order must be 0, 1 or 2, got {order}")
    ad = creation(space)
    levels = np.arange(1, space.dim + 1, dtype=float)  # n+1 with exact top
    alpha = params.g_tau_bar * np.sqrt(levels)
    sq_r = math.sqrt(params.r)
    sin_k = _uniform_sin_kernels(alpha)
    cos_k = _uniform_cos_kernels(alpha)

    ops = []
    n_sin = 1 + (order >= 1) + (order >= 2)
    for k in range(n_sin):
        ops.append(sq_r * ad @ np.diag(sin_k[k] / np.sqrt(levels)))
    if not drop_cos:
        ops.append(sq_r * np.diag(cos_k[0]))
        if order >= 2:
            ops.append(sq_r * np.diag(cos_k[1]))
    r, g_tau_bar = params.r, params.g_tau_bar

    def gain_fn(n):
        n = np.asarray(n, dtype=float)
        al = g_tau_bar * np.sqrt(n + 1.0)
        kern = _uniform_sin_kernels(al)
        total = sum(kern[k] ** 2 for k in range(n_sin))
        return r * total

    return GeneratorModel(
        name=UNIFORM,
        space=space,
        params=params,
        lindblad_ops=ops,
        gain_fn=gain_fn,
        options={"order": order, "drop_cos": drop_cos},
    )


def heuristic_model(
    gain: float,
    beta: float,
    space: TruncatedSpace,
    ordering: str = "aa_dag",
) -> GeneratorModel:
    """Single saturated-gain operator sqrt(A) a* (1 + beta X)^(-1/2).

    X = a a* (default) places the saturation after the photon is added and
    reproduces the all-orders photon statistics when beta = 4 (g tau_bar)^2;
    X = a* a evaluates it before.
    """
    if gain < 0 or beta < 0:
        raise ValueError("gain and beta must be nonnegative")
    if ordering not in ("aa_dag", "a_dag_a"):
        raise ValueError(f"ordering must be 'aa_dag' or 'a_dag_a', got {ordering!r}")
    ad = creation(space)
    n = np.arange(space.n_max + 1, dtype=float)
    x = n + 1.0 if ordering == "aa_dag" else n
    op = math.sqrt(gain) * ad @ np.diag(1.0 / np.sqrt(1.0 + beta * x))

    def gain_fn(nn):
        nn = np.asarray(nn, dtype=float)
        xx = nn + 1.0 if ordering == "aa_dag" else nn
        return gain * (nn + 1.0) / (1.0 + beta * xx)

    return GeneratorModel(
        name=HEURISTIC,
        space=space,
        params=None,
        lindblad_ops=[op],
        gain_fn=gain_fn,
        options={"gain": gain, "beta": beta, "ordering": ordering},
    )
