"""Lattices in the time-frequency plane and the symplectic structure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "Lattice",
    "standard_symplectic",
    "symplectic_form",
    "is_symplectic",
    "lattice_dual",
    "lattice_adjoint",
    "shear_matrix",
    "dilation_matrix",
]


def standard_symplectic(d: int = 1) -> np.ndarray:
    """``J = [[0, I], [-I, 0]]``."""
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_form(z1, z2) -> np.ndarray:
    """``sigma(z1, z2) = z1 . J z2``; broadcasts over leading axes."""
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    d = z1.shape[-1] // 2
    return np.einsum("...i,...i->...", z1[..., :d], z2[..., d:]) - np.einsum(
        "...i,...i->...", z1[..., d:], z2[..., :d])


def shear_matrix(Q) -> np.ndarray:
    """``V_Q = [[I, 0], [Q, I]]`` for symmetric ``Q``."""
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    d = Q.shape[0]
    return np.block([[np.eye(d), np.zeros((d, d))], [Q, np.eye(d)]])


def dilation_matrix(Lmat) -> np.ndarray:
    """``D_L = [[L^{-1}, 0], [0, L^T]]``."""
    Lmat = np.atleast_2d(np.asarray(Lmat, dtype=float))
    d = Lmat.shape[0]
    return np.block([[np.linalg.inv(Lmat), np.zeros((d, d))], [np.zeros((d, d)), Lmat.T]])


def _check_phase_space(S):
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValidationError("matrix must be square", code="core.not_square")
    if S.shape[0] % 2:
        raise ValidationError("adjoint defined only in phase space (even dimension)",
                              code="core.odd_dimension")
    return S


def is_symplectic(S, tol: float = 1e-12) -> bool:
    """True iff ``max|S^T J S - J| <= tol``."""
    if not tol > 0:
        raise ValidationError("tolerance must be positive", code="core.bad_tolerance")
    S = _check_phase_space(S)
    J = standard_symplectic(S.shape[0] // 2)
    return bool(np.max(np.abs(S.T @ J @ S - J)) <= tol)


@dataclass(frozen=True)
class Lattice:
    """``Lambda = M Z^n`` for an invertible generator ``M``."""

    generator: np.ndarray

    def __post_init__(self):
        M = np.array(self.generator, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValidationError("lattice generator must be square", code="core.bad_lattice")
        if abs(np.linalg.det(M)) <= 1e-300:
            raise ValidationError("lattice generator is singular", code="core.bad_lattice")
        M.setflags(write=False)
        object.__setattr__(self, "generator", M)

    @classmethod
    def separable(cls, alpha: float, beta: float) -> "Lattice":
        """``alpha Z x beta Z``."""
        return cls(np.diag([alpha, beta]))

    @classmethod
    def integer(cls, n: int = 2) -> "Lattice":
        return cls(np.eye(n))

    @property
    def ambient_dim(self) -> int:
        return self.generator.shape[0]

    @property
    def dim(self) -> int:
        """``d`` for a lattice in ``R^{2d}``."""
        return self.ambient_dim // 2

    @property
    def volume(self) -> float:
        return float(abs(np.linalg.det(self.generator)))

    @property
    def density(self) -> float:
        return 1.0 / self.volume

    def points(self, radius: int) -> np.ndarray:
        """Lattice points ``M k`` for integer ``k`` with ``|k_i| <= radius``."""
        n = self.ambient_dim
        axes = [np.arange(-radius, radius + 1)] * n
        ks = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
        return ks @ self.generator.T

    def contains(self, z, tol: float = 1e-9) -> bool:
        k = np.linalg.solve(self.generator, np.asarray(z, dtype=float))
        return bool(np.all(np.abs(k - np.round(k)) <= tol))

    def same_as(self, other: "Lattice", tol: float = 1e-9) -> bool:
        """Equality as point sets: each generator is an integer unimodular combination of the other."""
        T = np.linalg.solve(self.generator, other.generator)
        return bool(np.all(np.abs(T - np.round(T)) <= tol)
                    and abs(abs(np.linalg.det(np.round(T))) - 1) <= tol)


def lattice_dual(L: Lattice) -> Lattice:
    """``Lambda^perp = M^{-T} Z^n``."""
    return Lattice(np.linalg.inv(L.generator).T)


def lattice_adjoint(L: Lattice) -> Lattice:
    """``Lambda^o = J M^{-T} Z^{2d}``; only defined in even dimension."""
    _check_phase_space(L.generator)
    J = standard_symplectic(L.dim)
    return Lattice(J @ np.linalg.inv(L.generator).T)
