"""Column-stacked vectorization of superoperators on the truncated space.

Convention: vec(rho) stacks columns (Fortran order), so A rho B maps to
(B^T kron A) vec(rho) and a sandwich L rho L* maps to (conj(L) kron L).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import TruncatedSpace, annihilation


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, space: TruncatedSpace) -> np.ndarray:
    return np.asarray(v).reshape((space.dim, space.dim), order="F")


def left_mult(op: np.ndarray) -> np.ndarray:
    """Matrix of rho -> op rho."""
    return np.kron(np.eye(op.shape[0]), op)

def right_mult(op: np.ndarray) -> np.ndarray:
    """Matrix of rho -> rho op."""
    return np.kron(op.T, np.eye(op.shape[0]))


def sandwich(op: np.ndarray) -> np.ndarray:
    """Matrix of rho -> op rho op*."""
    return np.kron(op.conj(), op)


def dissipator_matrix(op: np.ndarray) -> np.ndarray:
    """Matrix of rho -> op rho op* - (op* op rho + rho op* op)/2."""
    opd_op = op.conj().T @ op
    return sandwich(op) - 0.5 * (left_mult(opd_op) + right_mult(opd_op))


def apply_dissipator(op: np.ndarray, opd_op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Action of the dissipator of `op` on a density matrix (no kron needed)."""
    return op @ rho @ op.conj().T - 0.5 * (opd_op @ rho + rho @ opd_op)


@dataclass(frozen=True)
class Superoperator:
    """Dense generator matrix acting on column-stacked density matrices."""

    space: TruncatedSpace
    matrix: np.ndarray

    def __post_init__(self):
        d2 = self.space.dim**2
        if self.matrix.shape != (d2, d2):
            raise ValueError(
                f"superoperator for n_max={self.space.n_max} must be {d2}x{d2}"
            )

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho), self.space)

    def __add__(self, other: "Superoperator") -> "Superoperator":
        if other.space != self.space:
            raise ValueError("superoperators live on different spaces")
        return Superoperator(self.space, self.matrix + other.matrix)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def trace_defect(self) -> tuple[float, float]:
        """Column sums of the trace functional: (interior max, boundary max).

        The boundary figure collects columns whose source entry touches the
        top level n_max, where truncation leaks are reported rather than
        hidden; a trace-preserving generator has both equal to zero.
        """
        d = self.space.dim
        trace_row = np.zeros(d * d)
        trace_row[:: d + 1] = 1.0
        col_sums = np.abs(trace_row @ self.matrix)
        grid = col_sums.reshape((d, d), order="F")  # [row index m, col index n]
        interior = float(grid[: d - 1, : d - 1].max()) if d > 1 else 0.0
        boundary = float(max(grid[d - 1, :].max(), grid[:, d - 1].max()))
        return interior, boundary


def loss_dissipator(kappa: float, space: TruncatedSpace) -> Superoperator:
    """Cavity damping at rate kappa: kappa (a rho a* - {a* a, rho}/2)."""
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    a = annihilation(space)
    return Superoperator(space, kappa * dissipator_matrix(a))
