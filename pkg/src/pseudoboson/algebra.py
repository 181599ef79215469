"""Pseudo-bosonic operator pairs and their verification checks.

A pair ``(a, b)`` with ``a = S c S^{-1}`` and ``b = S c^dag S^{-1}``
satisfies the commutation relation ``[a, b] = 1`` below the truncation
corner, with ``b != a^dag`` whenever ``S`` is not unitary.  The checks in
this module quantify, in floating point, the identities the pair is
supposed to satisfy: annihilated vacua, ladder action on the excited
families, integer spectrum of the number operator ``N = b a``, and the
metric conjugation ``a = Theta^{-1} b^dag Theta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateKernelError,
    InvalidDimensionError,
    OrthogonalVacuaError,
    ProvenanceError,
)
from .fock import FockSpace, Operator, SafeSubspace, ladder_c, restrict
from .reports import ResidualRecord
from .riesz import BiorthogonalFamily, MetricOperator, RieszMap

__all__ = [
    "PseudoBosonPair",
    "VacuumPair",
    "make_pair",
    "vacua",
    "vacua_from_map",
    "excited_states",
    "ladder_check",
    "number_operator_check",
    "theta_conjugacy_check",
]


@dataclass(frozen=True, eq=False)
class PseudoBosonPair:
    """Operators ``(a, b)`` together with the map they were built from."""

    a: Operator
    b: Operator
    source: RieszMap
    space: FockSpace


@dataclass(frozen=True, eq=False)
class VacuumPair:
    """Vacua ``phi0`` (annihilated by ``a``) and ``psi0`` (annihilated by
    ``b^dag``), scaled so ``<phi0, psi0> = 1``.

    ``normalization`` records the pairing ``<phi0, psi0_raw>`` that the
    raw ``psi0`` was divided by.
    """

    phi0: np.ndarray
    psi0: np.ndarray
    normalization: complex

    def __post_init__(self):
        for name in ("phi0", "psi0"):
            arr = np.asarray(getattr(self, name), dtype=complex).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def make_pair(riesz: RieszMap) -> PseudoBosonPair:
    """Transport the canonical ladder pair through ``S``:
    ``a = S c S^{-1}``, ``b = S c^dag S^{-1}``."""
    space = riesz.space
    c = ladder_c(space).mat
    Sm, Sim = riesz.S.mat, riesz.S_inv.mat
    a = Operator(space, Sm @ c @ Sim)
    b = Operator(space, Sm @ c.conj().T @ Sim)
    return PseudoBosonPair(a=a, b=b, source=riesz, space=space)


def _smallest_singular_vector(M: np.ndarray, what: str) -> tuple[np.ndarray, float]:
    """Right-singular vector for the smallest singular value; fails if the
    two smallest singular values cannot be separated."""
    _, sigma, Vh = np.linalg.svd(M)
    if sigma[-2] - sigma[-1] < 1e-8:
        raise DegenerateKernelError(
            f"two smallest singular values of {what} are within 1e-8 "
            f"({sigma[-1]:.3e}, {sigma[-2]:.3e}): vacuum is ambiguous"
        )
    return np.conj(Vh[-1]), float(sigma[-1])


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate so the largest-magnitude component is real and positive."""
    k = int(np.argmax(np.abs(v)))
    phase = v[k] / abs(v[k])
    return v * np.conj(phase)


def vacua(pair: PseudoBosonPair) -> VacuumPair:
    """Extract the vacua by singular-vector computation.

    ``phi0`` is the right-singular vector of ``a`` for its smallest
    singular value (the numerical kernel direction) and ``psi0`` the
    analogue for ``b^dag``; this verifies the vacuum assumptions instead
    of assuming the closed forms.  The phase of ``phi0`` is fixed by
    making its largest-magnitude component real positive, and ``psi0`` is
    rescaled to unit pairing.

    Raises
    ------
    DegenerateKernelError
        If either kernel direction is ambiguous.
    OrthogonalVacuaError
        If ``|<phi0, psi0>| < 1e-10`` before rescaling.
    """
    phi0, _ = _smallest_singular_vector(pair.a.mat, "a")
    phi0 = _fix_phase(phi0)
    psi0_raw, _ = _smallest_singular_vector(pair.b.mat.conj().T, "b^dag")
    overlap = complex(np.vdot(phi0, psi0_raw))
    if abs(overlap) < 1e-10:
        raise OrthogonalVacuaError(
            f"vacua are numerically orthogonal: |<phi0, psi0>| = {abs(overlap):.3e}"
        )
    return VacuumPair(phi0=phi0, psi0=psi0_raw / overlap, normalization=overlap)


def vacua_from_map(riesz: RieszMap) -> VacuumPair:
    """Closed-form vacua ``phi0 = S e_0`` and ``psi0 = (S^{-1})^dag e_0``.

    These satisfy ``<phi0, psi0> = 1`` exactly and serve as the oracle
    the extracted vacua are compared against; they also normalize the
    excited families so that ``phi_n = S e_n`` without extra scaling.
    """
    phi0 = riesz.S.mat[:, 0].copy()
    psi0 = np.conj(riesz.S_inv.mat[0, :])
    return VacuumPair(phi0=phi0, psi0=psi0, normalization=complex(np.vdot(phi0, psi0)))


def excited_states(pair: PseudoBosonPair, vac: VacuumPair, n_max: int) -> BiorthogonalFamily:
    """Families ``phi_n = b^n phi0 / sqrt(n!)`` and
    ``psi_n = (a^dag)^n psi0 / sqrt(n!)`` for ``n <= n_max``.

    Built iteratively as ``phi_{n+1} = b phi_n / sqrt(n+1)`` so no
    factorial-sized intermediate ever appears.
    """
    d = pair.space.dim
    if not 0 <= n_max <= d - 1:
        raise InvalidDimensionError(f"n_max must be in [0, {d - 1}], got {n_max}")
    # Extended-precision pipeline: each ladder application amplifies the
    # off-kernel error of the starting vector by roughly ||b|| / sqrt(n+1),
    # which costs several digits by n ~ dim/2 in double precision.  The
    # operators are rebuilt in long-double precision (one Newton correction
    # of the cached inverse) and the vacua are projected onto the exact
    # kernel directions, which preserves the caller's normalization while
    # discarding the off-kernel rounding that the recursion would amplify.
    work = np.clongdouble
    S = pair.source.S.mat.astype(work)
    S_inv = pair.source.S_inv.mat.astype(work)
    S_inv = S_inv @ (2.0 * np.eye(d, dtype=work) - S @ S_inv)
    lower = np.diag(np.sqrt(np.arange(1, d, dtype=np.longdouble)), 1).astype(work)
    b = S @ lower.conj().T @ S_inv
    a_dag = (S @ lower @ S_inv).conj().T
    kernel_a = S[:, 0]  # ker(a) = span{S e_0}
    kernel_bdag = S_inv.conj().T[:, 0]  # ker(b^dag) = span{(S^-1)^dag e_0}
    phi = np.empty((d, n_max + 1), dtype=work)
    psi = np.empty((d, n_max + 1), dtype=work)
    phi0 = np.asarray(vac.phi0, dtype=work)
    psi0 = np.asarray(vac.psi0, dtype=work)
    phi[:, 0] = kernel_a * (kernel_a.conj() @ phi0) / (kernel_a.conj() @ kernel_a)
    psi[:, 0] = kernel_bdag * (kernel_bdag.conj() @ psi0) / (kernel_bdag.conj() @ kernel_bdag)
    for n in range(n_max):
        scale = 1.0 / np.sqrt(np.longdouble(n + 1))
        phi[:, n + 1] = scale * (b @ phi[:, n])
        psi[:, n + 1] = scale * (a_dag @ psi[:, n])
    return BiorthogonalFamily(
        space=pair.space, phi=phi.astype(complex), psi=psi.astype(complex)
    )


def ladder_check(
    pair: PseudoBosonPair, fam: BiorthogonalFamily, tolerance: float = 1e-9
) -> list[ResidualRecord]:
    """Residuals of the four ladder relations on the family.

    Checks ``b phi_n = sqrt(n+1) phi_{n+1}``, ``a phi_n = sqrt(n) phi_{n-1}``
    (with ``a phi_0 = 0``), and the adjoint relations on the dual family,
    excluding the top level where raising leaves the family.
    """
    if fam.size < 2:
        raise InvalidDimensionError("ladder check needs a family of length >= 2")
    a, b = pair.a.mat, pair.b.mat
    a_dag, b_dag = a.conj().T, b.conj().T
    phi, psi = fam.phi, fam.psi
    m = fam.size
    records = []

    def rec(check: str, n: int, residual: float):
        records.append(ResidualRecord(check=check, n=n, residual=residual, tolerance=tolerance))

    for n in range(m - 1):
        rec("ladder_b_raise", n, float(np.linalg.norm(b @ phi[:, n] - np.sqrt(n + 1.0) * phi[:, n + 1])))
        rec("ladder_adag_raise", n, float(np.linalg.norm(a_dag @ psi[:, n] - np.sqrt(n + 1.0) * psi[:, n + 1])))
    rec("ladder_a_lower", 0, float(np.linalg.norm(a @ phi[:, 0])))
    rec("ladder_bdag_lower", 0, float(np.linalg.norm(b_dag @ psi[:, 0])))
    for n in range(1, m):
        rec("ladder_a_lower", n, float(np.linalg.norm(a @ phi[:, n] - np.sqrt(float(n)) * phi[:, n - 1])))
        rec("ladder_bdag_lower", n, float(np.linalg.norm(b_dag @ psi[:, n] - np.sqrt(float(n)) * psi[:, n - 1])))
    return records


def number_operator_check(
    pair: PseudoBosonPair, fam: BiorthogonalFamily, tolerance: float = 1e-9
) -> list[ResidualRecord]:
    """Eigenvector residuals of the number operator ``N = b a``:
    ``N phi_n = n phi_n`` and ``N^dag psi_n = n psi_n`` for all levels
    below the truncation edge (``n <= dim - 2``)."""
    N = pair.b.mat @ pair.a.mat
    N_dag = N.conj().T
    n_top = min(fam.size - 1, pair.space.dim - 2)
    records = []
    for n in range(n_top + 1):
        r_phi = float(np.linalg.norm(N @ fam.phi[:, n] - n * fam.phi[:, n]))
        r_psi = float(np.linalg.norm(N_dag @ fam.psi[:, n] - n * fam.psi[:, n]))
        records.append(ResidualRecord(check="number_phi", n=n, residual=r_phi, tolerance=tolerance))
        records.append(ResidualRecord(check="number_psi", n=n, residual=r_psi, tolerance=tolerance))
    return records


def theta_conjugacy_check(
    pair: PseudoBosonPair,
    metric: MetricOperator,
    sub: SafeSubspace,
    tolerance: float | None = None,
) -> ResidualRecord:
    """Residual of ``a = Theta^{-1} b^dag Theta`` on the safe subspace.

    The default tolerance is ``1e-10 * cond^3``: each factor of ``S`` or
    its inverse can amplify roundoff by the condition number.
    """
    if not np.array_equal(pair.source.S.mat, metric.source.S.mat):
        raise ProvenanceError("pair and metric operator come from different maps")
    if tolerance is None:
        tolerance = 1e-10 * pair.source.cond**3
    conjugated = Operator(
        pair.space, metric.theta_inv.mat @ pair.b.mat.conj().T @ metric.theta.mat
    )
    residual = float(np.linalg.norm(restrict(pair.a - conjugated, sub), 2))
    return ResidualRecord(check="theta_conjugacy", n=None, residual=residual, tolerance=tolerance)
