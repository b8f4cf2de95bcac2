import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shadow_retriever.channels import (
    ChoiMap,
    KrausChannel,
    NotCompletelyPositive,
    NotTracePreserving,
    adjoint,
    apply,
    apply_adjoint,
    as_choi,
    choi_to_kraus,
    compose,
    depolarizing_probs,
    identity_channel,
    is_trace_scaling,
    kraus_to_choi,
    make_case_study,
    make_depolarizing,
    make_gad,
    make_mixed_pauli,
    make_unitary,
    superoperator,
    tensor,
    transfer_matrix,
)
from shadow_retriever.linalg import frobenius_inner, partial_trace, pauli_matrix
from .conftest import random_channel, random_density, random_hermitian, random_unitary


def test_kraus_channel_validates_trace_preservation():
    bad = (np.array([[1.0, 0], [0, 0.5]]),)
    with pytest.raises(NotTracePreserving):
        KrausChannel(2, bad)


def test_choi_map_validates_hermiticity():
    skewed = np.eye(4, dtype=complex)
    skewed[0, 1] = 1e-3  # no conjugate partner: not Hermitian
    with pytest.raises(ValueError):
        ChoiMap(2, skewed)


def test_choi_identity_channel():
    ident = identity_channel(2)
    j = ident.choi.matrix
    v = np.eye(2).reshape(-1)
    assert np.allclose(j, np.outer(v, v))
    assert np.allclose(apply(ident, np.diag([0.3, 0.7])), np.diag([0.3, 0.7]))


def test_choi_and_kraus_actions_agree():
    rng = np.random.default_rng(7)
    for d in (2, 3):
        ch = random_channel(rng, d)
        rho = random_density(rng, d)
        via_kraus = apply(ch, rho)
        via_choi = apply(ch.choi, rho)
        assert np.allclose(via_kraus, via_choi)
        assert np.trace(via_kraus) == pytest.approx(1.0)


def test_choi_to_kraus_round_trip():
    rng = np.random.default_rng(8)
    ch = random_channel(rng, 2, kraus_rank=3)
    rebuilt = choi_to_kraus(ch.choi)
    rho = random_density(rng, 2)
    assert np.allclose(apply(rebuilt, rho), apply(ch, rho))


def test_choi_to_kraus_rejects_non_cp():
    # The transpose map is HP and TP but not CP.
    swap = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            swap[2 * i + j, 2 * j + i] = 1.0
    with pytest.raises(NotCompletelyPositive):
        choi_to_kraus(ChoiMap(2, swap))


def test_choi_to_kraus_rejects_non_tp():
    ident = identity_channel(2)
    with pytest.raises(NotTracePreserving):
        choi_to_kraus(ChoiMap(2, 2.0 * ident.choi.matrix))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3]))
def test_adjoint_pairing(seed, d):
    # <N†(O), X> = <O, N(X)> for all O, X
    rng = np.random.default_rng(seed)
    ch = random_channel(rng, d)
    o = random_hermitian(rng, d)
    x = random_hermitian(rng, d)
    lhs = frobenius_inner(apply_adjoint(ch, o), x)
    rhs = frobenius_inner(o, apply(ch, x))
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_adjoint_kraus_fast_path_matches_choi_path():
    rng = np.random.default_rng(9)
    ch = random_channel(rng, 2)
    o = random_hermitian(rng, 2)
    fast = apply_adjoint(ch, o)
    via_choi = apply(adjoint(ch), o)
    assert np.allclose(fast, via_choi)
    direct = sum(e.conj().T @ o @ e for e in ch.kraus)
    assert np.allclose(fast, direct)


def test_adjoint_of_tp_is_unital():
    rng = np.random.default_rng(10)
    ch = random_channel(rng, 3)
    assert np.allclose(apply_adjoint(ch, np.eye(3)), np.eye(3))


def test_compose_matches_sequential_action():
    rng = np.random.default_rng(11)
    inner = random_channel(rng, 2)
    outer = random_channel(rng, 2)
    rho = random_density(rng, 2)
    m = compose(outer, inner)
    assert np.allclose(apply(m, rho), apply(outer, apply(inner, rho)))


def test_compose_matches_four_system_link_product():
    # One-time agreement check of the composition against the literal
    # three-party contraction J_{D∘N} = tr_Y[(J_N (x) I_Z)(I_X (x) J_D^{T_Y})]
    # on systems X (x) Y (x) Z with the partial transpose on the middle leg.
    rng = np.random.default_rng(12)
    inner = random_channel(rng, 2)  # N: X -> Y
    outer = random_channel(rng, 2)  # D: Y -> Z
    d = 2
    jn = inner.choi.matrix
    jd = outer.choi.matrix
    jd_ty = jd.reshape(d, d, d, d).transpose(2, 1, 0, 3).reshape(d * d, d * d)
    big = np.kron(jn, np.eye(d)) @ np.kron(np.eye(d), jd_ty)
    expected = partial_trace(big, [d, d, d], keep=[0, 2])
    assert np.allclose(compose(outer, inner).matrix, expected)


def test_compose_accepts_choi_maps():
    rng = np.random.default_rng(13)
    a = random_channel(rng, 2)
    b = random_channel(rng, 2)
    rho = random_density(rng, 2)
    m = compose(as_choi(a), as_choi(b))
    assert np.allclose(apply(m, rho), apply(a, apply(b, rho)))


def test_tensor_acts_factorwise():
    rng = np.random.default_rng(14)
    a = random_channel(rng, 2)
    b = random_channel(rng, 2)
    ra = random_density(rng, 2)
    rb = random_density(rng, 2)
    prod = tensor(a, b)
    assert prod.dim == 4
    assert np.allclose(apply(prod, np.kron(ra, rb)), np.kron(apply(a, ra), apply(b, rb)))


def test_is_trace_scaling():
    rng = np.random.default_rng(15)
    ch = random_channel(rng, 2)
    assert is_trace_scaling(ch) == pytest.approx(1.0)
    scaled = ChoiMap(2, 0.25 * ch.choi.matrix - 0.75 * identity_channel(2).choi.matrix)
    assert is_trace_scaling(scaled) == pytest.approx(-0.5)
    not_ts = ChoiMap(2, np.diag([1.0, 0, 0, 0.0]))
    assert is_trace_scaling(not_ts) is None


def test_transfer_matrix_acts_on_vec():
    rng = np.random.default_rng(16)
    ch = random_channel(rng, 2)
    rho = random_density(rng, 2)
    t = transfer_matrix(ch)
    assert np.allclose(t @ rho.reshape(-1), apply(ch, rho).reshape(-1))


def test_superoperator_matches_transfer_matrix():
    rng = np.random.default_rng(17)
    ch = random_channel(rng, 3)
    assert np.allclose(superoperator(ch), transfer_matrix(ch))
    x = random_hermitian(rng, 3)
    assert np.allclose(superoperator(ch) @ x.reshape(-1), apply(ch, x).reshape(-1))


def test_make_unitary():
    rng = np.random.default_rng(18)
    u = random_unitary(rng, 2)
    ch = make_unitary(u)
    rho = random_density(rng, 2)
    assert np.allclose(apply(ch, rho), u @ rho @ u.conj().T)
    with pytest.raises(ValueError):
        make_unitary(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_gad_action_on_populations_and_coherences():
    eps, p = 0.3, 0.25
    ch = make_gad(eps, p)
    rho = np.array([[0.6, 0.2 - 0.1j], [0.2 + 0.1j, 0.4]])
    out = apply(ch, rho)
    # populations relax toward the (p, 1-p) fixed point, coherences shrink
    # by sqrt(1-eps)
    expected_00 = (1 - eps * (1 - p)) * 0.6 + eps * p * 0.4
    assert out[0, 0] == pytest.approx(expected_00)
    assert out[1, 1] == pytest.approx(1 - expected_00)
    assert out[0, 1] == pytest.approx(np.sqrt(1 - eps) * (0.2 - 0.1j))


def test_gad_parameter_validation_and_limits():
    with pytest.raises(ValueError):
        make_gad(-0.1, 0.5)
    with pytest.raises(ValueError):
        make_gad(0.5, 1.5)
    ident_like = make_gad(0.0, 0.7)
    rho = np.diag([0.2, 0.8]).astype(complex)
    assert np.allclose(apply(ident_like, rho), rho)


def test_depolarizing_action():
    rng = np.random.default_rng(19)
    for n in (1, 2):
        d = 2 ** n
        eps = 0.37
        ch = make_depolarizing(eps, n)
        rho = random_density(rng, d)
        expected = (1 - eps) * rho + eps * np.eye(d) / d
        assert np.allclose(apply(ch, rho), expected)


def test_depolarizing_probs_normalized():
    probs = depolarizing_probs(0.4, 2)
    assert len(probs) == 16
    assert sum(probs.values()) == pytest.approx(1.0)


def test_mixed_pauli_validation():
    with pytest.raises(ValueError):
        make_mixed_pauli({})
    with pytest.raises(ValueError):
        make_mixed_pauli({"I": 0.5, "XX": 0.5})
    with pytest.raises(ValueError):
        make_mixed_pauli({"I": 0.7, "X": 0.7})
    with pytest.raises(ValueError):
        make_mixed_pauli({"I": 1.5, "X": -0.5})


def test_mixed_pauli_action():
    ch = make_mixed_pauli({"I": 0.5, "X": 0.5})
    z = pauli_matrix("Z")
    rho = (np.eye(2) + 0.8 * z) / 2
    out = apply(ch, rho)
    # the X component flips Z: 0.5·Z + 0.5·(XZX) = 0
    assert np.allclose(out, np.eye(2) / 2)


def test_case_study_channels_defined():
    n1 = make_case_study(1)
    n2 = make_case_study(2)
    rng = np.random.default_rng(20)
    rho = random_density(rng, 2)
    x = pauli_matrix("X")
    y = pauli_matrix("Y")
    assert np.allclose(apply(n1, rho), 0.5 * rho + 0.5 * x @ rho @ x)
    assert np.allclose(apply(n2, rho), 0.5 * rho + 0.25 * x @ rho @ x + 0.25 * y @ rho @ y)
    with pytest.raises(ValueError):
        make_case_study(3)
