"""Quantum channels and Hermitian-preserving maps.

Channels are held in Kraus form; general maps (retrievers and their adjoints
need not be completely positive) are held by their Choi matrix

    J = sum_ij |i><j| (x) map(|i><j|)

with system order fixed as (input, output). All maps here have equal input and
output dimension.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .linalg import (
    as_matrix,
    hermitianize,
    kron,
    kron_all,
    numerical_rank,
    partial_trace,
    pauli_matrix,
    PAULI_1Q,
)


class NotCompletelyPositive(ValueError):
    """Choi matrix has a negative eigenvalue beyond tolerance."""


class NotTracePreserving(ValueError):
    """Channel marginal tr_out[J] deviates from the identity beyond tolerance."""


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A CPTP map given by Kraus operators E_k with sum_k E_k† E_k = I."""

    dim: int
    kraus: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        ops = tuple(as_matrix(e) for e in self.kraus)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        for e in ops:
            if e.shape != (self.dim, self.dim):
                raise ValueError(
                    f"Kraus operator shape {e.shape} does not match dim {self.dim}"
                )
        total = sum(e.conj().T @ e for e in ops)
        if np.max(np.abs(total - np.eye(self.dim))) > 1e-8:
            raise NotTracePreserving(
                "Kraus operators do not satisfy sum E†E = I within 1e-8"
            )
        object.__setattr__(self, "kraus", ops)

    @cached_property
    def choi(self) -> "ChoiMap":
        return kraus_to_choi(self)

    def __call__(self, x) -> np.ndarray:
        return apply(self, x)


@dataclass(frozen=True, eq=False)
class ChoiMap:
    """A Hermitian-preserving linear map stored by its Choi matrix.

    The matrix is (dim² x dim²) with (input, output) system order and must be
    Hermitian within 1e-8 (equivalent to the map being Hermitian-preserving);
    it is symmetrized on construction to absorb floating-point drift.
    """

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        d2 = self.dim * self.dim
        m = as_matrix(self.matrix)
        if m.shape != (d2, d2):
            raise ValueError(f"Choi matrix shape {m.shape} does not match dim {self.dim}")
        object.__setattr__(self, "matrix", hermitianize(m, tol=1e-8))

    def __call__(self, x) -> np.ndarray:
        return apply(self, x)


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel(dim, (np.eye(dim, dtype=complex),))


def kraus_to_choi(channel: KrausChannel) -> ChoiMap:
    """Choi matrix of a channel: sum_k vec_k vec_k† with vec_k = sum_i |i> (x) E_k|i>."""
    d = channel.dim
    j = np.zeros((d * d, d * d), dtype=complex)
    for e in channel.kraus:
        v = e.T.reshape(-1)  # v[(i, a)] = E[a, i]
        j += np.outer(v, v.conj())
    return ChoiMap(d, j)


def choi_to_kraus(choi: ChoiMap, tol: float = 1e-8) -> KrausChannel:
    """Extract Kraus operators from a CPTP Choi matrix.

    Raises
    ------
    NotCompletelyPositive
        if the Choi matrix has an eigenvalue below -tol.
    NotTracePreserving
        if tr_out[J] deviates from the identity beyond tol.
    """
    d = choi.dim
    marginal = partial_trace(choi.matrix, [d, d], {0})
    if np.max(np.abs(marginal - np.eye(d))) > tol:
        raise NotTracePreserving("Choi marginal tr_out[J] is not the identity")
    w, v = np.linalg.eigh(choi.matrix)
    if w[0] < -tol:
        raise NotCompletelyPositive(f"Choi matrix has negative eigenvalue {w[0]}")
    ops = []
    for lam, vec in zip(w, v.T):
        if lam > tol:
            ops.append(np.sqrt(lam) * vec.reshape(d, d).T)
    return KrausChannel(dim=d, kraus=tuple(ops))


def apply(m, x) -> np.ndarray:
    """Apply a channel or Choi-form map to a matrix.

    Kraus form computes sum_k E_k x E_k†; Choi form computes
    tr_in[(x^T (x) I) J]. The two agree on channels.
    """
    x = as_matrix(x)
    if isinstance(m, KrausChannel):
        if x.shape != (m.dim, m.dim):
            raise ValueError(f"input shape {x.shape} does not match dim {m.dim}")
        return sum(e @ x @ e.conj().T for e in m.kraus)
    if isinstance(m, ChoiMap):
        d = m.dim
        if x.shape != (d, d):
            raise ValueError(f"input shape {x.shape} does not match dim {d}")
        return partial_trace(np.kron(x.T, np.eye(d)) @ m.matrix, [d, d], {1})
    raise TypeError(f"cannot apply object of type {type(m).__name__}")


def as_choi(m) -> ChoiMap:
    if isinstance(m, ChoiMap):
        return m
    if isinstance(m, KrausChannel):
        return m.choi
    raise TypeError(f"cannot interpret {type(m).__name__} as a Choi-form map")


def adjoint(m) -> ChoiMap:
    """Adjoint map under the Frobenius pairing: <adjoint(N)(O), X> = <O, N(X)>.

    Computed entrywise from the Choi matrix by conjugating and swapping the
    (input, output) index roles, so it is defined for every HP map, not only
    for channels.
    """
    c = as_choi(m)
    d = c.dim
    t = c.matrix.reshape(d, d, d, d)  # axes (in, out, in', out')
    adj = t.transpose(1, 0, 3, 2).conj()
    return ChoiMap(d, adj.reshape(d * d, d * d))


def apply_adjoint(m, o) -> np.ndarray:
    """Apply the adjoint of a map: sum_k E_k† o E_k in Kraus form."""
    o = as_matrix(o)
    if isinstance(m, KrausChannel):
        return sum(e.conj().T @ o @ e for e in m.kraus)
    return apply(adjoint(m), o)


def compose(outer, inner) -> ChoiMap:
    """Choi matrix of outer∘inner via the link product.

    With inner: X -> Y and outer: Y -> Z,
    J = tr_Y[(J_inner (x) I_Z)(I_X (x) J_outer^{T_Y})].
    """
    ji = as_choi(inner)
    jo = as_choi(outer)
    if ji.dim != jo.dim:
        raise ValueError(f"dimension mismatch: {ji.dim} vs {jo.dim}")
    d = ji.dim
    t = jo.matrix.reshape(d, d, d, d).transpose(2, 1, 0, 3)  # transpose on Y
    jo_ty = t.reshape(d * d, d * d)
    big = np.kron(ji.matrix, np.eye(d)) @ np.kron(np.eye(d), jo_ty)
    return ChoiMap(d, partial_trace(big, [d, d, d], {0, 2}))


def tensor(a, b) -> ChoiMap:
    """Choi matrix of a (x) b, reordered to the joint (input, output) convention."""
    ja = as_choi(a)
    jb = as_choi(b)
    da, db = ja.dim, jb.dim
    big = np.kron(ja.matrix, jb.matrix)
    t = big.reshape(da, da, db, db, da, da, db, db)
    # rows and columns go (in_a, out_a, in_b, out_b) -> (in_a, in_b, out_a, out_b)
    t = t.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    d = da * db
    return ChoiMap(d, t.reshape(d * d, d * d))


def is_trace_scaling(m, tol: float = 1e-8):
    """Return the scaling p with tr_out[J] = p·I, or None if the marginal is not scalar."""
    c = as_choi(m)
    d = c.dim
    marginal = partial_trace(c.matrix, [d, d], {0})
    p = np.trace(marginal).real / d
    if np.max(np.abs(marginal - p * np.eye(d))) <= tol:
        return float(p)
    return None


def transfer_matrix(channel: KrausChannel) -> np.ndarray:
    """Matrix sum_k E_k (x) conj(E_k) acting on row-major vectorized states.

    vec(E ρ E†) = (E (x) conj(E)) vec(ρ) for row-major vec. The rank equals
    that of the unconjugated form sum_k E_k (x) E_k (conjugation of the second
    factor is a rank-preserving bijection), so shadow-dimension computations
    are unaffected by the convention.
    """
    return sum(np.kron(e, e.conj()) for e in channel.kraus)


def superoperator(m) -> np.ndarray:
    """Matrix of a Choi-form map on row-major vectorized inputs."""
    c = as_choi(m)
    d = c.dim
    t = c.matrix.reshape(d, d, d, d)  # axes (in, out, in', out')
    # out[(a, b), (k, i)] = J[(k, a), (i, b)]
    return t.transpose(1, 3, 0, 2).reshape(d * d, d * d)


def make_unitary(u, tol: float = 1e-8) -> KrausChannel:
    """Channel conjugating by a single unitary."""
    u = as_matrix(u)
    d = u.shape[0]
    if u.shape != (d, d) or np.max(np.abs(u.conj().T @ u - np.eye(d))) > tol:
        raise ValueError("matrix is not unitary within tolerance")
    return KrausChannel(d, (u,))


def make_gad(epsilon: float, p: float) -> KrausChannel:
    """Generalized amplitude damping with damping factor epsilon and temperature
    indicator p; amplitude damping is the special case p = 1."""
    if not 0 <= epsilon <= 1:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    if not 0 <= p <= 1:
        raise ValueError(f"p must be in [0, 1], got {p}")
    se = np.sqrt(1 - epsilon)
    ops = [
        np.sqrt(p) * np.array([[1, 0], [0, se]], dtype=complex),
        np.sqrt(p) * np.array([[0, np.sqrt(epsilon)], [0, 0]], dtype=complex),
        np.sqrt(1 - p) * np.array([[se, 0], [0, 1]], dtype=complex),
        np.sqrt(1 - p) * np.array([[0, 0], [np.sqrt(epsilon), 0]], dtype=complex),
    ]
    return KrausChannel(2, tuple(e for e in ops if np.linalg.norm(e) > 0))


def make_mixed_pauli(probs: Mapping[str, float]) -> KrausChannel:
    """Mixed Pauli channel N(ρ) = sum_σ p_σ σρσ from a Pauli-string probability map.

    Missing Pauli strings mean probability zero. All keys must have the same
    length, which sets the qubit count.
    """
    if not probs:
        raise ValueError("probability map is empty")
    labels = [k.upper() for k in probs]
    n = len(labels[0])
    if any(len(k) != n for k in labels):
        raise ValueError("all Pauli strings must have the same length")
    values = {k.upper(): float(v) for k, v in probs.items()}
    total = sum(values.values())
    if any(v < -1e-12 for v in values.values()):
        raise ValueError("probabilities must be non-negative")
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"probabilities sum to {total}, expected 1")
    ops = tuple(
        np.sqrt(v) * pauli_matrix(k) for k, v in sorted(values.items()) if v > 0
    )
    return KrausChannel(2 ** n, ops)


def depolarizing_probs(epsilon: float, n_qubits: int = 1) -> dict[str, float]:
    """Pauli-mixture form of the n-qubit depolarizing channel
    N(ρ) = (1-ε)ρ + ε I/2ⁿ: every conjugation carries weight ε/4ⁿ on top of
    (1-ε) on the identity."""
    if not 0 <= epsilon <= 1:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    if n_qubits < 1:
        raise ValueError("n_qubits must be at least 1")
    strings = ["".join(s) for s in itertools.product("IXYZ", repeat=n_qubits)]
    m = len(strings)  # 4^n
    probs = {s: epsilon / m for s in strings}
    probs["I" * n_qubits] = 1 - epsilon * (m - 1) / m
    return probs


def make_depolarizing(epsilon: float, n_qubits: int = 1) -> KrausChannel:
    """n-qubit depolarizing channel N(ρ) = (1-ε)ρ + ε I/2ⁿ, in mixed-Pauli form."""
    return make_mixed_pauli(depolarizing_probs(epsilon, n_qubits))


def make_case_study(which: int) -> KrausChannel:
    """The two single-qubit comparison channels:

    1: N(ρ) = ½ρ + ½XρX
    2: N(ρ) = ½ρ + ¼XρX + ¼YρY
    """
    if which == 1:
        return make_mixed_pauli({"I": 0.5, "X": 0.5})
    if which == 2:
        return make_mixed_pauli({"I": 0.5, "X": 0.25, "Y": 0.25})
    raise ValueError("case study channel must be 1 or 2")
