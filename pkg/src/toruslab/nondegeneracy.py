"""Nondegeneracy checks for the frequency data at an invariant torus.

Two open conditions are decided with scale-relative thresholds: whether the
frequency map is isoenergetically nondegenerate (the bordered matrix of the
action Hessian and the frequency vector is nonsingular), and whether the
Hessian is quasiconvex (strictly positive definite on the orthocomplement
of the frequency vector).  Both are pointwise checks at the torus; nothing
here inspects a neighborhood.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HessianForm",
    "BorderedMatrix",
    "bordered_determinant",
    "frequency_orthocomplement",
    "is_quasiconvex",
    "TOL_DET_SCALE",
    "TOL_PD",
]

#: |det| of the bordered matrix must exceed TOL_DET_SCALE * maxabs^(n+1).
TOL_DET_SCALE = 1e-9
#: Minimum restricted eigenvalue must exceed TOL_PD * maxabs(H).
TOL_PD = 1e-9

_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class HessianForm:
    """Symmetric matrix of second derivatives of the symbol in the action
    variables, evaluated at the torus."""

    entries: np.ndarray

    def __post_init__(self):
        H = np.array(self.entries, dtype=float)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise ValueError("Hessian must be a square matrix")
        scale = np.max(np.abs(H)) if H.size else 0.0
        if scale > 0 and np.max(np.abs(H - H.T)) > _SYMMETRY_TOL * scale:
            raise ValueError("Hessian must be symmetric to machine precision")
        H = 0.5 * (H + H.T)
        H.setflags(write=False)
        object.__setattr__(self, "entries", H)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class BorderedMatrix:
    """The Hessian bordered by the frequency vector, zero in the corner."""

    entries: np.ndarray

    @staticmethod
    def assemble(hessian: HessianForm, omega) -> "BorderedMatrix":
        w = np.asarray(omega, dtype=float)
        n = hessian.dimension
        if w.shape != (n,):
            raise ValueError("frequency vector length does not match the Hessian")
        big = np.zeros((n + 1, n + 1))
        big[:n, :n] = hessian.entries
        big[:n, n] = w
        big[n, :n] = w
        big.setflags(write=False)
        return BorderedMatrix(big)


def bordered_determinant(hessian: HessianForm, omega) -> tuple[float, bool]:
    """Determinant of the bordered matrix and the nondegeneracy verdict.

    Nondegenerate means |det| exceeds a threshold relative to the matrix
    max-norm raised to the matrix size, which makes the open condition
    decidable in floating point.
    """
    bordered = BorderedMatrix.assemble(hessian, omega).entries
    det = float(np.linalg.det(bordered))
    scale = float(np.max(np.abs(bordered)))
    tol = TOL_DET_SCALE * scale ** (bordered.shape[0]) if scale > 0 else 0.0
    return det, bool(abs(det) > tol)


def frequency_orthocomplement(omega) -> np.ndarray:
    """Deterministic orthonormal basis of the orthocomplement of omega.

    Columns 2..n of the Householder reflection sending omega/|omega| to a
    multiple of the first coordinate vector.  Shape (n, n-1).
    """
    w = np.asarray(omega, dtype=float)
    n = w.shape[0]
    norm = float(np.linalg.norm(w))
    if norm == 0.0:
        raise ValueError("frequency vector must not vanish")
    unit = w / norm
    v = unit.copy()
    v[0] += 1.0 if unit[0] >= 0 else -1.0
    Q = np.eye(n) - 2.0 * np.outer(v, v) / float(v @ v)
    return Q[:, 1:]


def is_quasiconvex(hessian: HessianForm, omega) -> bool:
    """Whether the Hessian is positive definite transverse to omega.

    Decided by the smallest eigenvalue of the Hessian restricted to an
    orthonormal basis of the orthocomplement of omega; in one dimension
    the orthocomplement is trivial and the condition holds vacuously.
    """
    w = np.asarray(omega, dtype=float)
    if w.shape != (hessian.dimension,):
        raise ValueError("frequency vector length does not match the Hessian")
    if float(np.linalg.norm(w)) == 0.0:
        raise ValueError("frequency vector must not vanish")
    n = hessian.dimension
    if n == 1:
        return True
    B = frequency_orthocomplement(w)
    restricted = B.T @ hessian.entries @ B
    restricted = 0.5 * (restricted + restricted.T)
    smallest = float(np.linalg.eigvalsh(restricted)[0])
    scale = float(np.max(np.abs(hessian.entries)))
    return bool(smallest > TOL_PD * scale)
