"""Bounded invertible maps, biorthogonal families, and the metric operator.

A Riesz map ``S`` sends the canonical basis onto a well-conditioned
non-orthogonal family: ``phi_n = S e_n``.  Its dual family is
``psi_n = (S^{-1})^dag e_n`` and the two are exactly biorthogonal in
finite dimension.  The metric operator ``Theta = (S^{-1})^dag S^{-1}``
is positive, maps ``phi_n`` to ``psi_n``, and equals the rank-one sum
``sum_n |psi_n><psi_n|`` while its inverse ``S S^dag`` equals
``sum_n |phi_n><phi_n|``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    ConditioningError,
    DimensionMismatchError,
    NotInvertibleError,
    ValidationError,
)
from .fock import FockSpace, Operator, inner

__all__ = [
    "RieszMap",
    "BiorthogonalFamily",
    "MetricOperator",
    "make_riesz_map",
    "random_riesz_map",
    "biorthogonal_family",
    "metric_operator",
    "theta_rank_one_sums",
    "quasi_basis_check",
    "save_riesz_map",
    "load_riesz_map",
]

#: Relative singular-value floor below which a map is declared singular.
SINGULARITY_FLOOR = 1e-13


@dataclass(frozen=True)
class RieszMap:
    """Invertible map with cached inverse and singular-value bounds.

    ``frame_bounds = (A, B)`` are the squared extreme singular values of
    ``S``: every unit vector ``f`` satisfies ``A <= ||S f||^2 <= B``.
    """

    S: Operator
    S_inv: Operator
    cond: float
    frame_bounds: tuple[float, float]

    @property
    def space(self) -> FockSpace:
        return self.S.space

    @property
    def dim(self) -> int:
        return self.S.space.dim


@dataclass(frozen=True, eq=False)
class BiorthogonalFamily:
    """Column-stacked families ``phi[:, n] = phi_n`` and ``psi[:, n] = psi_n``.

    The two stacks always hold the same number of vectors; a *full*
    family has one vector per level of the space.
    """

    space: FockSpace
    phi: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=complex)
        psi = np.asarray(self.psi, dtype=complex)
        if phi.shape != psi.shape or phi.ndim != 2 or phi.shape[0] != self.space.dim:
            raise DimensionMismatchError(
                f"family shapes {phi.shape} / {psi.shape} invalid for dim {self.space.dim}"
            )
        for arr, name in ((phi, "phi"), (psi, "psi")):
            if not np.all(np.isfinite(arr)):
                raise ValidationError(f"{name} entries must be finite")
        phi = phi.copy()
        psi = psi.copy()
        phi.setflags(write=False)
        psi.setflags(write=False)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "psi", psi)

    @property
    def size(self) -> int:
        """Number of vectors in each family."""
        return self.phi.shape[1]

    def gram(self) -> np.ndarray:
        """Cross-Gram matrix ``G[n, m] = <phi_n, psi_m>`` (identity for a
        genuine biorthogonal pair)."""
        return self.phi.conj().T @ self.psi


@dataclass(frozen=True, eq=False)
class MetricOperator:
    """Positive operator carrying one family onto its dual,
    together with its inverse and the map both derive from."""

    theta: Operator
    theta_inv: Operator
    source: RieszMap


def make_riesz_map(S: Operator, max_cond: float = 1e12) -> RieszMap:
    """Validate and package an invertible map.

    The inverse is computed once from the singular value decomposition
    (rank-revealing, so near-singularity is detected rather than silently
    amplified).

    Parameters
    ----------
    S : Operator
        Square map on a truncated Fock space.
    max_cond : float
        Conditioning budget; ``cond(S)`` above this raises
        :class:`ConditioningError`.

    Raises
    ------
    NotInvertibleError
        If the smallest singular value is below ``1e-13`` times the
        largest, or the cached inverse fails its residual check.
    ConditioningError
        If ``cond(S) > max_cond``.
    """
    U, sigma, Vh = np.linalg.svd(S.mat)
    s_max, s_min = float(sigma[0]), float(sigma[-1])
    if s_max == 0.0 or s_min <= SINGULARITY_FLOOR * s_max:
        raise NotInvertibleError(
            f"map is numerically singular: sigma_min/sigma_max = {s_min / max(s_max, 1e-300):.3e}"
        )
    cond = s_max / s_min
    if cond > max_cond:
        raise ConditioningError(f"cond(S) = {cond:.3e} exceeds budget {max_cond:.3e}")
    S_inv = Operator(S.space, Vh.conj().T @ ((1.0 / sigma)[:, None] * U.conj().T))
    residual = np.linalg.norm(S.mat @ S_inv.mat - np.eye(S.space.dim), 2)
    if residual > 1e-12 * cond:
        raise NotInvertibleError(
            f"inverse residual {residual:.3e} exceeds 1e-12 * cond = {1e-12 * cond:.3e}"
        )
    return RieszMap(S=S, S_inv=S_inv, cond=cond, frame_bounds=(s_min**2, s_max**2))


def random_riesz_map(
    space: FockSpace, target_cond: float, seed: int, top_margin: int | None = None
) -> RieszMap:
    """Deterministic random map with condition number ``target_cond``.

    The deformed block is ``U diag(sigma) V^dag`` with Haar-like unitary
    factors from QR of seeded complex Gaussian matrices and singular
    values spaced geometrically so that ``sigma_max / sigma_min``
    equals ``target_cond`` exactly (up to roundoff).  ``target_cond = 1``
    yields a random unitary.

    ``top_margin`` levels at the top of the space are left untouched
    (default ``dim // 2``).  This is the truncation-faithful counterpart
    of requiring the map and its inverse to preserve the dense domain:
    a map that mixes the highest retained levels drags the hard-cutoff
    defect of the ladder algebra into the safe subspace, and the
    commutator and factorization checks then measure that leakage
    instead of the identities they target.  Pass ``top_margin=0`` for a
    fully dense deformation when that leakage is itself the object of
    study.
    """
    if target_cond < 1:
        raise ValidationError(f"target_cond must be >= 1, got {target_cond}")
    d = space.dim
    if top_margin is None:
        top_margin = d // 2
    if not 0 <= top_margin <= d - 1:
        raise ValidationError(f"top_margin must be in [0, {d - 1}], got {top_margin}")
    p = d - top_margin
    rng = np.random.default_rng(seed)

    def haar_unitary() -> np.ndarray:
        A = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
        Q, R = np.linalg.qr(A)
        diag = np.diag(R)
        return Q * (diag / np.abs(diag))

    sigma = target_cond ** (np.linspace(1.0, 0.0, p))
    M = np.eye(d, dtype=complex)
    M[:p, :p] = haar_unitary() @ (sigma[:, None] * haar_unitary().conj().T)
    return make_riesz_map(Operator(space, M), max_cond=10.0 * target_cond + 10.0)


def biorthogonal_family(riesz: RieszMap) -> BiorthogonalFamily:
    """Full family ``phi_n = S e_n``, ``psi_n = (S^{-1})^dag e_n``
    (the columns of ``S`` and of the conjugate-transposed inverse)."""
    return BiorthogonalFamily(
        space=riesz.space, phi=riesz.S.mat, psi=riesz.S_inv.mat.conj().T
    )


def metric_operator(riesz: RieszMap) -> MetricOperator:
    """Metric operator ``Theta = (S^{-1})^dag S^{-1}`` and its inverse
    ``S S^dag``; both are self-adjoint and positive, and ``Theta`` maps
    each ``phi_n`` onto ``psi_n``."""
    Sm = riesz.S.mat
    Sim = riesz.S_inv.mat
    theta = Operator(riesz.space, Sim.conj().T @ Sim)
    theta_inv = Operator(riesz.space, Sm @ Sm.conj().T)
    return MetricOperator(theta=theta, theta_inv=theta_inv, source=riesz)


def theta_rank_one_sums(fam: BiorthogonalFamily) -> tuple[Operator, Operator]:
    """Rank-one sums ``sum_n |psi_n><psi_n|`` and ``sum_n |phi_n><phi_n|``.

    For a full family these telescope exactly to the metric operator and
    its inverse.  Requires all ``dim`` vectors.
    """
    if fam.size != fam.space.dim:
        raise DimensionMismatchError(
            f"rank-one sums need the full family: got {fam.size} of {fam.space.dim} vectors"
        )
    theta_sum = Operator(fam.space, fam.psi @ fam.psi.conj().T)
    theta_inv_sum = Operator(fam.space, fam.phi @ fam.phi.conj().T)
    return theta_sum, theta_inv_sum


def quasi_basis_check(
    fam: BiorthogonalFamily, f: np.ndarray, g: np.ndarray
) -> tuple[complex, complex, complex]:
    """Weak resolution of the identity through the family.

    Returns ``(<f, g>, sum_n <f, phi_n><psi_n, g>, sum_n <f, psi_n><phi_n, g>)``;
    all three agree to roundoff for a full biorthogonal family.
    """
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    d = fam.space.dim
    if f.shape != (d,) or g.shape != (d,):
        raise DimensionMismatchError(
            f"vectors must have shape ({d},), got {f.shape} and {g.shape}"
        )
    direct = inner(f, g)
    via_phi_psi = complex((f.conj() @ fam.phi) @ (fam.psi.conj().T @ g))
    via_psi_phi = complex((f.conj() @ fam.psi) @ (fam.phi.conj().T @ g))
    return direct, via_phi_psi, via_psi_phi


def save_riesz_map(riesz: RieszMap, path: str | Path) -> None:
    """Serialize the map as a flat JSON record
    ``{"dim": d, "entries": [[re, im], ...]}`` (row-major)."""
    entries = [
        [float(v.real), float(v.imag)] for v in riesz.S.mat.reshape(-1)
    ]
    record = {"dim": riesz.dim, "entries": entries}
    Path(path).write_text(json.dumps(record))


def load_riesz_map(path: str | Path, max_cond: float = 1e12) -> RieszMap:
    """Load a serialized map and revalidate invertibility."""
    record = json.loads(Path(path).read_text())
    try:
        d = int(record["dim"])
        entries = record["entries"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed map record in {path}") from exc
    if len(entries) != d * d:
        raise ValidationError(
            f"expected {d * d} entries for dim {d}, got {len(entries)}"
        )
    flat = np.array([complex(re, im) for re, im in entries])
    return make_riesz_map(Operator(FockSpace(d), flat.reshape(d, d)), max_cond=max_cond)
