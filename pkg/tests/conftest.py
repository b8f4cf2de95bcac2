"""Shared random-instance generators for the test suite."""

import itertools

import numpy as np
import pytest

from shadow_retriever.channels import KrausChannel, compose, make_mixed_pauli, make_unitary


def random_hermitian(rng, d):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (m + m.conj().T) / 2


def random_density(rng, d):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, d):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_channel(rng, d, kraus_rank=None):
    """Haar-style random CPTP map from a random isometry cut into blocks."""
    k = kraus_rank or d * d
    a = rng.normal(size=(d * k, d)) + 1j * rng.normal(size=(d * k, d))
    q, _ = np.linalg.qr(a)
    return KrausChannel(d, tuple(q[i * d:(i + 1) * d, :] for i in range(k)))


def random_pauli_probs(rng, n_qubits=1):
    """Random full-support Pauli mixture, normalized exactly."""
    strings = ["".join(s) for s in itertools.product("IXYZ", repeat=n_qubits)]
    w = rng.uniform(0.05, 1.0, size=len(strings))
    w /= w.sum()
    return dict(zip(strings, w))


# Qubit channels with exactly rank-deficient transfer matrices: equal binary
# weights make the cancelled Pauli coefficients exactly zero in floats.
RANK_DEFICIENT_MIXTURES = [
    ({"I": 0.5, "X": 0.5}, 2),
    ({"I": 0.5, "Y": 0.5}, 2),
    ({"I": 0.5, "Z": 0.5}, 2),
    ({"I": 0.5, "X": 0.25, "Y": 0.25}, 3),
    ({"I": 0.5, "X": 0.25, "Z": 0.25}, 3),
    ({"I": 0.5, "Y": 0.25, "Z": 0.25}, 3),
]


def random_profiled_map(rng):
    """A random map with a known effective shadow dimension.

    Conjugating a base channel by unitaries scrambles it without changing the
    transfer-matrix rank.
    """
    kind = rng.integers(0, 3)
    if kind == 0:
        base = random_channel(rng, 2)
        d_s = 4
    else:
        probs, d_s = RANK_DEFICIENT_MIXTURES[rng.integers(0, len(RANK_DEFICIENT_MIXTURES))]
        base = make_mixed_pauli(probs)
    u = make_unitary(random_unitary(rng, 2))
    v = make_unitary(random_unitary(rng, 2))
    return compose(u, compose(base, v)), d_s


@pytest.fixture
def rng():
    return np.random.default_rng(20260818)
