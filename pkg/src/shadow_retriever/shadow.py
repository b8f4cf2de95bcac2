"""Preservation analysis for observable expectation values.

Whether tr[ρO] can be retrieved after a channel N reduces to the membership
question O ∈ range(N† restricted to Hermitian operators). This module decides
that membership by least squares, measures how much of the observable space a
channel keeps alive (effective shadow dimension and destructivity), and builds
explicit witness retrievers from the constructive cases of the membership
proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channels import ChoiMap, KrausChannel, adjoint, apply_adjoint, superoperator
from .linalg import (
    RANK_TOL,
    as_matrix,
    frobenius_inner,
    hermitian_basis,
    hermitian_eig,
    hermitianize,
    numerical_rank,
)

PRESERVATION_TOL = 1e-7


@dataclass(frozen=True)
class PreservationReport:
    preserved: bool
    witness_q: Optional[np.ndarray]
    residual: float


@dataclass(frozen=True)
class ShadowProfile:
    dim: int
    d_s: int
    zeta: float


def effective_shadow_dimension(channel, tol: float = RANK_TOL) -> int:
    """Rank of the map's transfer matrix: the real dimension of range(N†).

    Accepts anything with a Choi representation, so composed and tensored
    maps can be profiled directly.
    """
    return numerical_rank(superoperator(channel), tol)


def shadow_destructivity(channel, tol: float = RANK_TOL) -> float:
    """Bits of observable space destroyed: log2(d² / d_s)."""
    d_s = effective_shadow_dimension(channel, tol)
    return float(np.log2(channel.dim ** 2 / d_s))


def is_invertible(channel, tol: float = RANK_TOL) -> bool:
    return effective_shadow_dimension(channel, tol) == channel.dim ** 2


def shadow_profile(channel, tol: float = RANK_TOL) -> ShadowProfile:
    d_s = effective_shadow_dimension(channel, tol)
    return ShadowProfile(
        dim=channel.dim, d_s=d_s, zeta=float(np.log2(channel.dim ** 2 / d_s))
    )


def check_preservation(
    channel: KrausChannel, o, tol: float = PRESERVATION_TOL
) -> PreservationReport:
    """Decide whether o lies in the Hermitian range of the channel adjoint.

    Solves min_Q ||N†(Q) - o||_F over Hermitian Q as a real-linear least
    squares problem in the d² coordinates of Q over an orthonormal Hermitian
    basis. Because the basis is orthonormal, the coordinate residual equals
    the Frobenius residual. Preserved iff the residual is at most
    tol·max(1, ||o||_F); the minimum-norm witness is returned when preserved
    (N† may be non-injective, and minimum norm makes the choice
    deterministic).
    """
    o = hermitianize(o, tol=1e-8)
    d = channel.dim
    if o.shape != (d, d):
        raise ValueError(f"observable shape {o.shape} does not match dim {d}")
    basis = hermitian_basis(d)
    # a[m, l] = <B_m, N†(B_l)>; real since N† maps Hermitian to Hermitian.
    images = [apply_adjoint(channel, b) for b in basis]
    a = np.array(
        [[frobenius_inner(bm, img).real for img in images] for bm in basis]
    )
    b = np.array([frobenius_inner(bm, o).real for bm in basis])
    x, _, _, _ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.linalg.norm(a @ x - b))
    norm_o = float(np.linalg.norm(o))
    preserved = residual <= tol * max(1.0, norm_o)
    witness = None
    if preserved:
        witness = sum(c * bm for c, bm in zip(x, basis))
        witness = hermitianize(witness)
    return PreservationReport(preserved=preserved, witness_q=witness, residual=residual)


def _support_projector(o: np.ndarray, rank_tol: float) -> tuple[np.ndarray, int]:
    w, v = hermitian_eig(o)
    cutoff = rank_tol * np.max(np.abs(w)) if np.max(np.abs(w)) > 0 else 0.0
    mask = np.abs(w) > cutoff
    vs = v[:, mask]
    return vs @ vs.conj().T, int(np.count_nonzero(mask))


def _adjoint_of_projector_form(o: np.ndarray, q: np.ndarray, d: int, rank_tol: float) -> ChoiMap:
    # D†(·) = (Q/t) tr[P·P] + (k(I-Q)/(t(d-k))) tr[P⊥·P⊥]
    # with P the support projector of o. Since tr[PXP] = tr[PX], the Choi
    # matrix of D† is P^T (x) Q/t + (P⊥)^T (x) k(I-Q)/(t(d-k)); the retriever
    # D is its adjoint.
    p, k = _support_projector(o, rank_tol)
    t = float(np.trace(o).real)
    eye = np.eye(d)
    p_perp = eye - p
    j_ddag = np.kron(p.T, q / t) + np.kron(p_perp.T, k * (eye - q) / (t * (d - k)))
    return adjoint(ChoiMap(d, j_ddag))


def construct_witness_retriever(o, q, rank_tol: float = RANK_TOL) -> ChoiMap:
    """Build an HPTS map D whose adjoint fixes the observable: D†(o) = q.

    Whenever q witnesses preservation (N†(q) = o), the chain
    N†(D†(o)) = N†(q) = o holds, so D is a valid retriever. D† is assembled
    Hermitian-preserving and unit-scaling, which makes its adjoint D
    trace-scaling.

    Dispatches on the rank k and trace t of o:

    * k < d, t != 0: projector form on the support of o.
    * k < d, t == 0: deflate one nonzero eigenvalue (the smallest, for
      determinism) to reach a traceful rank-(k-1) observable, shifting q by
      (k-1)/d·(I-q).
    * k = d: shift o by its smallest eigenvalue to drop rank, shifting q by
      -k̃λ₀/(t-dλ₀)·I; for o = c·I the identity map with q := o already works
      because channel adjoints are unital.
    """
    o = hermitianize(o, tol=1e-8)
    q = hermitianize(q, tol=1e-8)
    d = o.shape[0]
    if q.shape != o.shape:
        raise ValueError("observable and witness must have the same shape")
    norm_o = np.linalg.norm(o)
    if norm_o == 0:
        raise ValueError("cannot build a retriever for the zero observable")

    w, _ = hermitian_eig(o)
    k = int(np.count_nonzero(np.abs(w) > rank_tol * np.max(np.abs(w))))
    t = float(np.trace(o).real)
    traceless = abs(t) <= 1e-10 * norm_o

    if k < d and not traceless:
        return _adjoint_of_projector_form(o, q, d, rank_tol)

    if k < d:
        # Deflate: o_tilde = o - λ0|ψ0><ψ0| has rank k-1 and trace -λ0 != 0.
        lam0 = w[-1]  # smallest eigenvalue; negative since o is traceless and nonzero
        _, v = hermitian_eig(o)
        psi0 = v[:, -1]
        o_tilde = o - lam0 * np.outer(psi0, psi0.conj())
        q_tilde = q + (k - 1) / d * (np.eye(d) - q)
        return _adjoint_of_projector_form(o_tilde, q_tilde, d, rank_tol)

    # Full rank. Scalar observables need no retrieval at all.
    spread = np.max(w) - np.min(w)
    if spread <= 1e-12 * max(1.0, np.max(np.abs(w))):
        return ChoiMap(d, _identity_choi(d))

    lam0 = float(np.min(w))
    o_tilde = o - lam0 * np.eye(d)
    k_tilde = int(np.count_nonzero(w - lam0 > rank_tol * spread))
    q_tilde = q - (k_tilde * lam0 / (t - d * lam0)) * np.eye(d)
    return _adjoint_of_projector_form(o_tilde, q_tilde, d, rank_tol)


def _identity_choi(d: int) -> np.ndarray:
    v = np.eye(d, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())
