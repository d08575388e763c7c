"""Sturm-Liouville operator A = -(a u')' + c u on (0,L) with Dirichlet ends.

Second-order finite differences with face-averaged coefficients and lumped
mass; the resulting interior operator is symmetric tridiagonal, so the
eigenpairs come from the LAPACK tridiagonal solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import BasisSizeError, EllipticityError
from .grids import SpatialGrid

__all__ = [
    "Coefficients",
    "OperatorMatrices",
    "EigenBasis",
    "assemble_operator",
    "eigendecompose",
    "conormal_derivative",
    "apply_operator",
    "project_modes",
    "synthesize_modes",
]

PROFILES = {
    "constant": (lambda x, L: np.ones_like(x), lambda x, L: np.zeros_like(x)),
    "variable1": (lambda x, L: 1.0 + x / (2.0 * L), lambda x, L: x * (L - x) / L**2),
}


@dataclass
class Coefficients:
    """Node samples of the diffusion coefficient a and reaction c."""

    a: np.ndarray
    c: np.ndarray
    mu: float = 0.0

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        if self.mu <= 0.0:
            self.mu = float(np.min(self.a))
        self.validate()

    def validate(self) -> None:
        if self.a.shape != self.c.shape:
            raise ValueError("a and c must be sampled on the same nodes")
        if self.mu <= 0.0 or np.any(self.a < self.mu - 1e-14):
            raise EllipticityError(
                f"diffusion coefficient drops below the floor mu={self.mu}"
            )
        if np.any(self.c < 0.0):
            raise EllipticityError("reaction coefficient must be nonnegative")

    @classmethod
    def from_profile(cls, name: str, grid: SpatialGrid) -> "Coefficients":
        x = grid.nodes
        if name in PROFILES:
            fa, fc = PROFILES[name]
            return cls(fa(x, grid.L), fc(x, grid.L))
        # otherwise a path to a two-column CSV of node samples (a, c)
        data = np.loadtxt(name, delimiter=",", ndmin=2)
        if data.shape != (grid.M + 1, 2):
            raise ValueError(
                f"coefficient CSV must have {grid.M + 1} rows and 2 columns (a, c)"
            )
        return cls(data[:, 0], data[:, 1])


@dataclass
class OperatorMatrices:
    """Interior tridiagonal operator (already mass-scaled) plus lumped mass."""

    grid: SpatialGrid
    diag: np.ndarray  # (M-1,) main diagonal of A_h
    off: np.ndarray  # (M-2,) symmetric off-diagonal
    mass: float  # lumped interior mass weight (= h)

    def dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        m += np.diag(self.off, 1) + np.diag(self.off, -1)
        return m


def assemble_operator(coeffs: Coefficients, grid: SpatialGrid) -> OperatorMatrices:
    """Interior stiffness-plus-reaction and lumped mass for the Dirichlet problem."""
    coeffs.validate()
    if coeffs.a.shape != (grid.M + 1,):
        raise ValueError("coefficients are not sampled on this grid")
    h = grid.h
    a_face = 0.5 * (coeffs.a[:-1] + coeffs.a[1:])  # a_{j+1/2}, j = 0..M-1
    diag = (a_face[:-1] + a_face[1:]) / h**2 + coeffs.c[1:-1]
    off = -a_face[1:-1] / h**2
    return OperatorMatrices(grid, diag, off, h)


def apply_operator(coeffs: Coefficients, grid: SpatialGrid, values: np.ndarray) -> np.ndarray:
    """A_h applied to full-grid nodal values (boundary columns included).

    Returns the interior rows; `values` may be a vector or an (M+1, n) array.
    """
    v = np.asarray(values, dtype=float)
    h = grid.h
    a_face = 0.5 * (coeffs.a[:-1] + coeffs.a[1:])
    shape = (-1,) + (1,) * (v.ndim - 1)
    flux_faces = a_face.reshape(shape) * np.diff(v, axis=0) / h  # a u' at faces
    out = -np.diff(flux_faces, axis=0) / h
    out += coeffs.c[1:-1].reshape(shape) * v[1:-1]
    return out


def conormal_derivative(u: np.ndarray, coeffs: Coefficients, grid: SpatialGrid):
    """Boundary flux a u' nu at x=0 (nu=-1) and x=L (nu=+1), 3-point stencils."""
    u = np.asarray(u, dtype=float)
    if u.shape[0] != grid.M + 1:
        raise ValueError("node vector does not match the grid")
    h = grid.h
    du0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
    duL = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * h)
    return (-coeffs.a[0] * du0, coeffs.a[-1] * duL)


@dataclass
class EigenBasis:
    """First K Dirichlet eigenpairs, mass-orthonormal, with boundary fluxes."""

    sgrid: SpatialGrid
    lam: np.ndarray  # (K,) ascending
    phi: np.ndarray  # (K, M+1) node values, zero boundary rows
    flux: np.ndarray  # (K, 2) conormal flux at x=0 and x=L

    @property
    def K(self) -> int:
        return self.lam.size

    def gram_defect(self) -> float:
        g = self.sgrid.h * (self.phi[:, 1:-1] @ self.phi[:, 1:-1].T)
        return float(np.max(np.abs(g - np.eye(self.K))))


def eigendecompose(
    matrices: OperatorMatrices, K: int, coeffs: Coefficients
) -> EigenBasis:
    """Lowest K eigenpairs of the interior tridiagonal operator."""
    grid = matrices.grid
    if K > grid.M // 4:
        raise BasisSizeError(
            f"K={K} exceeds the resolvable quarter of M={grid.M} interior modes"
        )
    lam, vec = scipy.linalg.eigh_tridiagonal(
        matrices.diag, matrices.off, select="i", select_range=(0, K - 1)
    )
    if np.any(lam <= 0.0):
        raise EllipticityError("operator lost positivity; check coefficients")
    phi = np.zeros((K, grid.M + 1))
    phi[:, 1:-1] = vec.T / np.sqrt(matrices.mass)
    # deterministic sign: positive slope at the left end
    signs = np.where(phi[:, 1] >= 0.0, 1.0, -1.0)
    phi *= signs[:, None]
    flux = np.array([conormal_derivative(p, coeffs, grid) for p in phi])
    return EigenBasis(grid, lam, phi, flux)


def project_modes(values: np.ndarray, basis: EigenBasis) -> np.ndarray:
    """Mass inner products (values, phi_k); time slices stay as columns."""
    return basis.sgrid.h * (basis.phi[:, 1:-1] @ np.asarray(values)[1:-1])


def synthesize_modes(coefs: np.ndarray, basis: EigenBasis) -> np.ndarray:
    """Sum_k coefs[k] phi_k on the full grid (boundary rows zero)."""
    return basis.phi.T @ np.asarray(coefs)
