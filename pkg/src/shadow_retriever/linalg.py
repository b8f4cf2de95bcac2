"""Dense complex linear algebra primitives shared by every other module.

Everything here operates on plain numpy arrays (complex128). Operators are
square matrices; multi-system operators use row-major Kronecker ordering with
subsystem 0 as the leftmost tensor factor.
"""

from __future__ import annotations

import string
from typing import Iterable, Sequence

import numpy as np

# Relative singular-value cutoff for rank decisions. Exposed because the
# effective shadow dimension (and hence destructivity) is tolerance-sensitive
# near degenerate channels.
RANK_TOL = 1e-8

HERMITICITY_TOL = 1e-10

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(ops: Iterable[np.ndarray]) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def frobenius_inner(a, b) -> complex:
    """Frobenius inner product tr[a† b]; real when both arguments are Hermitian."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.sum(a.conj() * b))


def is_hermitian(a, tol: float = 1e-8) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.max(np.abs(a - a.conj().T)) <= tol


def hermitianize(a, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Symmetrize (a + a†)/2, rejecting matrices that are not Hermitian within tol.

    Symmetrizing rather than rejecting outright absorbs floating-point drift
    from upstream computations while still catching genuinely non-Hermitian
    input.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError("Hermitian operator must be square")
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise ValueError(f"matrix is not Hermitian within tolerance {tol}")
    return (m + m.conj().T) / 2


def check_density_matrix(rho, tol: float = 1e-10) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, PSD within tol."""
    m = hermitianize(rho, tol=max(tol, HERMITICITY_TOL))
    if abs(np.trace(m).real - 1.0) > max(tol, 1e-10):
        raise ValueError(f"density matrix trace is {np.trace(m).real}, expected 1")
    w = np.linalg.eigvalsh(m)
    if w[0] < -max(tol, 1e-10):
        raise ValueError(f"density matrix has negative eigenvalue {w[0]}")
    return m


def hermitian_eig(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.

    Returns (w, v) with real w in descending order and unitary v whose columns
    are the matching eigenvectors, so that h = (v * w) @ v.conj().T.
    """
    m = hermitianize(h, tol=1e-8)
    w, v = np.linalg.eigh(m)
    return w[::-1], v[:, ::-1]


def numerical_rank(m, tol: float = RANK_TOL) -> int:
    """Count of singular values above tol times the largest singular value."""
    if tol <= 0:
        raise ValueError("rank tolerance must be positive")
    s = np.linalg.svd(as_matrix(m), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in keep.

    Parameters
    ----------
    m : square matrix on the tensor product of the given subsystem dims.
    dims : dimension of each subsystem, subsystem 0 leftmost.
    keep : indices of the subsystems to retain, in ascending output order.

    Returns
    -------
    Matrix on the kept subsystems; a 1x1 matrix holding tr[m] when keep is
    empty.
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    if not keep:
        return np.array([[np.trace(m)]], dtype=complex)

    letters = string.ascii_lowercase
    if 2 * n > len(letters):
        raise ValueError("too many subsystems")
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for i in range(n):
        if i not in keep:
            col[i] = row[i]  # repeated index contracts the traced subsystem
    spec = "".join(row) + "".join(col)
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    kept_dim = int(np.prod([dims[i] for i in keep]))
    t = m.reshape(dims + dims)
    return np.einsum(f"{spec}->{out}", t).reshape(kept_dim, kept_dim)


def hermitian_basis(d: int) -> list[np.ndarray]:
    """Orthonormal basis of the real vector space of d x d Hermitian matrices.

    d² elements: diagonal unit matrices, then symmetric and antisymmetric
    off-diagonal pairs scaled by 1/sqrt(2). Orthonormal under the Frobenius
    inner product.
    """
    basis = []
    for i in range(d):
        m = np.zeros((d, d), dtype=complex)
        m[i, i] = 1.0
        basis.append(m)
    for i in range(d):
        for j in range(i + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = m[j, i] = 1 / np.sqrt(2)
            basis.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = -1j / np.sqrt(2)
            m[j, i] = 1j / np.sqrt(2)
            basis.append(m)
    return basis


def pauli_matrix(label: str) -> np.ndarray:
    """Matrix of an n-qubit Pauli string such as "XZI"."""
    if not label or any(c not in PAULI_1Q for c in label):
        raise ValueError(f"invalid Pauli string {label!r}")
    return kron_all(PAULI_1Q[c] for c in label)


def paulis_commute(a: str, b: str) -> bool:
    """Whether two equal-length Pauli strings commute.

    Strings commute iff they anticommute on an even number of sites.
    """
    if len(a) != len(b):
        raise ValueError("Pauli strings must have equal length")
    anti = sum(1 for x, y in zip(a, b) if x != "I" and y != "I" and x != y)
    return anti % 2 == 0
