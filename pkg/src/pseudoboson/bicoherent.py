"""Coherent states, bicoherent pairs, and the quadrature realization of
the resolution of the identity.

A truncated coherent state keeps the first ``dim`` terms of
``exp(-|z|^2/2) sum_k z^k / sqrt(k!) e_k`` and carries a rigorous bound
on the omitted tail.  A bicoherent pair transports one coherent state
through an invertible map and its inverse-adjoint,
``eta(z) = S Phi(z)`` and ``xi(z) = (S^{-1})^dag Phi(z)``, giving
eigenstates of ``a`` and ``b^dag`` at the same eigenvalue from the
opposite sides.

The planar integral ``(1/pi) int d^2z |eta(z)><xi(z)|`` is realized in
polar form ``z = sqrt(t) e^{i theta}``: Gauss-Laguerre in ``t = r^2``
makes every matrix element a polynomial against ``e^{-t}``, which the
rule integrates exactly, and a uniform angular grid kills every
off-diagonal phase.  The Gaussian normalization lives inside the state
vectors; the node weights therefore carry the compensating ``e^{t}``
factor along with the Jacobian.  Folding the Gaussian into the weights a
second time is the canonical bug the negative-control test guards.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.laguerre import laggauss
from scipy.special import gammaln, logsumexp

from .algebra import PseudoBosonPair, VacuumPair, make_pair
from .errors import (
    DimensionMismatchError,
    ProvenanceError,
    UnderResolvedError,
    UnderResolvedWarning,
)
from .fock import FockSpace, Operator
from .riesz import RieszMap

__all__ = [
    "CoherentState",
    "BicoherentPair",
    "QuadratureScheme",
    "coherent",
    "coherent_tail_bound",
    "rbcs",
    "series_route",
    "eigen_check",
    "make_quadrature",
    "resolution_operator",
    "resolution_of_identity",
    "weak_pairing_check",
]


def _freeze(obj, *fields):
    for name in fields:
        arr = np.asarray(getattr(obj, name))
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(obj, name, arr)


@dataclass(frozen=True, eq=False)
class CoherentState:
    """Truncated coherent state with its omitted-tail norm bound."""

    z: complex
    vec: np.ndarray
    tail_bound: float

    def __post_init__(self):
        _freeze(self, "vec")


@dataclass(frozen=True, eq=False)
class BicoherentPair:
    """States ``eta(z) = S Phi(z)`` and ``xi(z) = (S^{-1})^dag Phi(z)``.

    ``tail_bound`` is inherited from the underlying coherent state; the
    pairing ``<eta, xi>`` equals one up to that tail.
    """

    z: complex
    eta: np.ndarray
    xi: np.ndarray
    source: RieszMap
    tail_bound: float

    def __post_init__(self):
        _freeze(self, "eta", "xi")


@dataclass(frozen=True, eq=False)
class QuadratureScheme:
    """Radial Gauss-Laguerre nodes/weights in ``t = r^2`` plus a uniform
    angular grid, resolving spaces up to dimension ``dim``."""

    dim: int
    radial_t: np.ndarray
    radial_w: np.ndarray
    angular_count: int

    def __post_init__(self):
        _freeze(self, "radial_t", "radial_w")

    @property
    def radial_count(self) -> int:
        return len(self.radial_t)


def coherent_tail_bound(dim: int, z: complex) -> float:
    """Norm bound on the omitted tail of a coherent state truncated at
    ``dim`` levels.

    Uses the geometric majorant of ``sum_{k>=dim} |z|^{2k} / k!`` (ratio
    ``|z|^2 / (dim+1) < 1``); outside that ratio regime the trivial bound
    ``1`` is returned.
    """
    x = abs(z) ** 2
    if x == 0.0:
        return 0.0
    if x >= dim + 1:
        return 1.0
    log_major = dim * np.log(x) - gammaln(dim + 1) + np.log((dim + 1) / (dim + 1 - x))
    return float(min(1.0, np.exp(-x / 2 + 0.5 * log_major)))


def coherent(space: FockSpace, z: complex) -> CoherentState:
    """Truncated coherent state ``exp(-|z|^2/2) sum_k z^k/sqrt(k!) e_k``.

    Coefficients are accumulated by the ratio recurrence
    ``c_{k+1} = c_k z / sqrt(k+1)``, which never forms a factorial.
    """
    d = space.dim
    z = complex(z)
    vec = np.zeros(d, dtype=complex)
    term = complex(np.exp(-abs(z) ** 2 / 2))
    for k in range(d):
        vec[k] = term
        term = term * z / np.sqrt(k + 1.0)
    return CoherentState(z=z, vec=vec, tail_bound=coherent_tail_bound(d, z))


def rbcs(riesz: RieszMap, z: complex) -> BicoherentPair:
    """Bicoherent pair obtained by mapping one coherent state through
    ``S`` and through ``(S^{-1})^dag``."""
    state = coherent(riesz.space, z)
    eta = riesz.S.mat @ state.vec
    xi = riesz.S_inv.mat.conj().T @ state.vec
    return BicoherentPair(
        z=complex(z), eta=eta, xi=xi, source=riesz, tail_bound=state.tail_bound
    )


def series_route(
    riesz: RieszMap, z: complex, vac: VacuumPair
) -> tuple[np.ndarray, np.ndarray]:
    """Bicoherent pair built the other way round: as the coherent series
    ``exp(-|z|^2/2) sum_n z^n/sqrt(n!) phi_n`` over the excited families
    grown from ``vac`` by repeated ladder action.

    With the closed-form vacua this agrees with :func:`rbcs` to roundoff;
    it is the independent route the two-route check compares.
    """
    pair = make_pair(riesz)
    d = riesz.dim
    z = complex(z)
    b = pair.b.mat
    a_dag = pair.a.mat.conj().T
    phi_n = np.asarray(vac.phi0, dtype=complex).copy()
    psi_n = np.asarray(vac.psi0, dtype=complex).copy()
    coeff = complex(np.exp(-abs(z) ** 2 / 2))
    phi_sum = coeff * phi_n
    psi_sum = coeff * psi_n
    for n in range(d - 1):
        scale = 1.0 / np.sqrt(n + 1.0)
        phi_n = scale * (b @ phi_n)
        psi_n = scale * (a_dag @ psi_n)
        coeff = coeff * z / np.sqrt(n + 1.0)
        phi_sum += coeff * phi_n
        psi_sum += coeff * psi_n
    return phi_sum, psi_sum


def eigen_check(pair: PseudoBosonPair, bc: BicoherentPair) -> tuple[float, float]:
    """Relative residuals of ``a eta(z) = z eta(z)`` and
    ``b^dag xi(z) = z xi(z)``."""
    if not np.array_equal(pair.source.S.mat, bc.source.S.mat):
        raise ProvenanceError("pair and bicoherent states come from different maps")
    z = bc.z
    r_eta = np.linalg.norm(pair.a.mat @ bc.eta - z * bc.eta) / np.linalg.norm(bc.eta)
    r_xi = np.linalg.norm(pair.b.mat.conj().T @ bc.xi - z * bc.xi) / np.linalg.norm(bc.xi)
    return float(r_eta), float(r_xi)


def make_quadrature(dim: int, radial_count: int, angular_count: int) -> QuadratureScheme:
    """Quadrature over the complex plane resolving ``dim`` levels.

    Requires ``radial_count >= dim`` and ``angular_count >= 2 dim`` and
    validates the radial rule against the factorial moments
    ``int e^{-t} t^k dt = k!`` for ``k <= dim``.

    Raises
    ------
    UnderResolvedError
        On insufficient node counts, failed moment test, or underflowed
        weights.
    """
    if radial_count < dim:
        raise UnderResolvedError(
            f"radial_count {radial_count} < dim {dim}: scheme cannot resolve the space"
        )
    if angular_count < 2 * dim:
        raise UnderResolvedError(
            f"angular_count {angular_count} < 2*dim = {2 * dim}: angular grid aliases"
        )
    t, w = laggauss(radial_count)
    if np.any(w <= 0.0):
        raise UnderResolvedError(
            f"radial weights underflow at {radial_count} nodes; reduce radial_count"
        )
    # factorial moment test in log space (k! overflows float64 past k = 170)
    ks = np.arange(dim + 1)
    log_moments = logsumexp(np.log(w)[None, :] + ks[:, None] * np.log(t)[None, :], axis=1)
    rel_err = np.abs(np.exp(log_moments - gammaln(ks + 1)) - 1.0)
    if rel_err.max() > 1e-10:
        raise UnderResolvedError(
            f"factorial moment test failed: max relative error {rel_err.max():.3e} for k <= {dim}"
        )
    return QuadratureScheme(dim=dim, radial_t=t, radial_w=w, angular_count=angular_count)


def _coherent_node_matrix(d: int, quad: QuadratureScheme) -> tuple[np.ndarray, np.ndarray]:
    """Columns: normalized coherent vectors at every node
    ``z_ij = sqrt(t_i) e^{i theta_j}``; plus per-node weights
    ``w_i e^{t_i} / M`` (Jacobian of ``(1/pi) d^2z`` in polar ``t``
    folded with the Laguerre weight)."""
    t, w, M = quad.radial_t, quad.radial_w, quad.angular_count
    ks = np.arange(d)
    # radial coefficient e^{-t/2} t^{k/2} / sqrt(k!), stable in log space
    log_r = -t[None, :] / 2 + 0.5 * ks[:, None] * np.log(t[None, :]) - 0.5 * gammaln(ks + 1)[:, None]
    radial = np.exp(log_r)  # (d, n_r)
    theta = 2 * np.pi * np.arange(M) / M
    phases = np.exp(1j * np.outer(ks, theta))  # (d, M)
    states = (radial[:, :, None] * phases[:, None, :]).reshape(d, len(t) * M)
    node_w = np.repeat(np.exp(np.log(w) + t) / M, M)
    return states, node_w


def resolution_operator(riesz: RieszMap, quad: QuadratureScheme) -> Operator:
    """Discrete resolution operator
    ``R = sum_nodes w |eta(z)><xi(z)|``; equals the identity whenever the
    scheme resolves the space.

    Applying a scheme built for a smaller dimension is allowed but warns
    (:class:`UnderResolvedWarning`) so degradation studies can measure
    the deviation instead of failing.
    """
    d = riesz.dim
    if quad.dim < d:
        warnings.warn(
            f"scheme resolves dim {quad.dim} but the space has dim {d}; "
            "top moments are not integrated exactly",
            UnderResolvedWarning,
            stacklevel=2,
        )
    states, node_w = _coherent_node_matrix(d, quad)
    eta = riesz.S.mat @ states
    xi = riesz.S_inv.mat.conj().T @ states
    return Operator(riesz.space, (eta * node_w) @ xi.conj().T)


def resolution_of_identity(riesz: RieszMap, quad: QuadratureScheme) -> float:
    """Deviation ``||R - I||`` of the discrete resolution operator."""
    R = resolution_operator(riesz, quad)
    return float(np.linalg.norm(R.mat - np.eye(riesz.dim), 2))


def weak_pairing_check(
    riesz: RieszMap, quad: QuadratureScheme, f: np.ndarray, g: np.ndarray
) -> tuple[complex, complex]:
    """Weak form of the resolution: returns ``(<f, g>,`` discretized
    ``(1/pi) int <f, eta(z)><xi(z), g> d^2z)``."""
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    d = riesz.dim
    if f.shape != (d,) or g.shape != (d,):
        raise DimensionMismatchError(
            f"vectors must have shape ({d},), got {f.shape} and {g.shape}"
        )
    R = resolution_operator(riesz, quad)
    return complex(np.vdot(f, g)), complex(np.vdot(f, R.mat @ g))
