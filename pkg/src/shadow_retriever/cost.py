"""Minimum retrieving cost: SDP formulations and analytic fast paths.

The central quantity is gamma_O(N), the smallest sum |c1| + |c2| over
two-channel decompositions c1·D1 + c2·D2 of an HPTS retriever D whose
composition with the noise channel N fixes the observable: N†(D†(O)) = O.
gamma² governs the sampling overhead of the quasi-probability protocol.

Primal and dual programs are built with cvxpy, which internally performs the
complex-to-real Hermitian embedding and provides the conic-solver adapter
layer; CLARABEL is used first with SCS as a fallback. The env variable
SHADOW_SDP_TOL overrides the solver tolerance.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Mapping, Optional

import cvxpy as cp
import numpy as np

from .channels import (
    ChoiMap,
    KrausChannel,
    apply,
    as_choi,
    choi_to_kraus,
    is_trace_scaling,
)
from .linalg import hermitian_basis, hermitianize, pauli_matrix, paulis_commute, PAULI_1Q

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
NUMERICAL_TROUBLE = "numerical_trouble"

_DEFAULT_TOL = 1e-9


class InformationDestroyed(ValueError):
    """The observable lies outside what the channel lets through."""


class SolverFailure(RuntimeError):
    """No available solver converged on the problem."""


@dataclass(frozen=True, eq=False)
class RetrieverDecomposition:
    """An HPTS retriever presented as c1·D1 + c2·D2 with CPTP D1, D2.

    The Choi matrices d1, d2 carry unit marginals (tr_out = I), so the
    sampling weights |c_j|/gamma are directly usable by the protocol
    simulator. c1 >= 0 and c2 <= 0 by the sign convention of the two-channel
    decomposition.
    """

    c1: float
    c2: float
    d1: ChoiMap
    d2: ChoiMap

    def __post_init__(self):
        if self.c1 < -1e-9 or self.c2 > 1e-9:
            raise ValueError(f"sign convention violated: c1={self.c1}, c2={self.c2}")
        object.__setattr__(self, "c1", max(float(self.c1), 0.0))
        object.__setattr__(self, "c2", min(float(self.c2), 0.0))
        if self.d1.dim != self.d2.dim:
            raise ValueError("component channels must share a dimension")

    @property
    def dim(self) -> int:
        return self.d1.dim

    @property
    def gamma(self) -> float:
        return self.c1 - self.c2

    @property
    def scaling(self) -> float:
        """Trace scaling of the combined map: p = c1 + c2."""
        return self.c1 + self.c2

    def combined(self) -> ChoiMap:
        return ChoiMap(self.dim, self.c1 * self.d1.matrix + self.c2 * self.d2.matrix)

    def components(self) -> tuple[tuple[float, ChoiMap], ...]:
        return ((self.c1, self.d1), (self.c2, self.d2))

    def as_kraus(self, tol: float = 1e-6) -> tuple[tuple[float, KrausChannel], ...]:
        return (
            (self.c1, choi_to_kraus(self.d1, tol=tol)),
            (self.c2, choi_to_kraus(self.d2, tol=tol)),
        )


@dataclass(frozen=True, eq=False)
class SdpSolution:
    gamma: float
    status: str
    decomposition: Optional[RetrieverDecomposition] = None
    dual_value: Optional[float] = None


def solver_tolerance(tol: Optional[float] = None) -> float:
    if tol is not None:
        return float(tol)
    env = os.environ.get("SHADOW_SDP_TOL")
    return float(env) if env else _DEFAULT_TOL


def _solve(problem: cp.Problem, tol: float, solver: Optional[str] = None) -> str:
    """Run a problem through the solver chain and normalize the status."""
    chain = [solver.upper()] if solver else ["CLARABEL", "SCS"]
    status = None
    for name in chain:
        try:
            if name == "CLARABEL":
                problem.solve(
                    solver=cp.CLARABEL,
                    tol_gap_abs=tol,
                    tol_gap_rel=tol,
                    tol_feas=tol,
                )
            elif name == "SCS":
                problem.solve(solver=cp.SCS, eps=max(tol, 1e-9), max_iters=200_000)
            else:
                problem.solve(solver=name)
        except cp.error.SolverError:
            status = "solver_error"
            continue
        status = problem.status
        if status in (cp.OPTIMAL, cp.INFEASIBLE, cp.UNBOUNDED):
            break
    if status == cp.OPTIMAL:
        return OPTIMAL
    if status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return INFEASIBLE
    if status in (cp.UNBOUNDED, cp.UNBOUNDED_INACCURATE):
        return "unbounded"
    return NUMERICAL_TROUBLE


def _adjoint_superop(channel: KrausChannel) -> np.ndarray:
    """Matrix of N† on row-major vectorized operators: sum_k E_k† (.) E_k."""
    return sum(np.kron(e.conj().T, e.T) for e in channel.kraus)


def _identity_choi(d: int) -> ChoiMap:
    v = np.eye(d, dtype=complex).reshape(-1)
    return ChoiMap(d, np.outer(v, v.conj()))


def _extract_decomposition(j1, j2, c1, c2, d) -> RetrieverDecomposition:
    cutoff = 1e-9
    c1v = float(c1)
    c2v = float(c2)
    d1 = ChoiMap(d, j1 / c1v) if c1v > cutoff else _identity_choi(d)
    d2 = ChoiMap(d, j2 / c2v) if c2v > cutoff else _identity_choi(d)
    return RetrieverDecomposition(
        c1=c1v if c1v > cutoff else 0.0,
        c2=-c2v if c2v > cutoff else 0.0,
        d1=d1,
        d2=d2,
    )


def _primal_problem(channel: KrausChannel, o: np.ndarray, tau: Optional[float]):
    d = channel.dim
    d2 = d * d
    j1 = cp.Variable((d2, d2), hermitian=True)
    j2 = cp.Variable((d2, d2), hermitian=True)
    c1 = cp.Variable()
    c2 = cp.Variable()
    # D†(O) read off the retriever Choi: tr_out[(I (x) O) J_D]^T.
    ddag_o = cp.partial_trace(np.kron(np.eye(d), o) @ (j1 - j2), [d, d], axis=1).T
    recovered = _adjoint_superop(channel) @ cp.vec(ddag_o, order="C")
    constraints = [
        j1 >> 0,
        j2 >> 0,
        cp.partial_trace(j1, [d, d], axis=1) == c1 * np.eye(d),
        cp.partial_trace(j2, [d, d], axis=1) == c2 * np.eye(d),
    ]
    if tau is None:
        constraints.append(recovered == o.reshape(-1))
    else:
        # Relaxed recovery: -tau·I <= N†(D†(O)) - O <= tau·I.
        slack = cp.Variable((d, d), hermitian=True)
        constraints += [
            cp.vec(slack, order="C") == recovered - o.reshape(-1),
            slack + tau * np.eye(d) >> 0,
            tau * np.eye(d) - slack >> 0,
        ]
    problem = cp.Problem(cp.Minimize(c1 + c2), constraints)
    return problem, (j1, j2, c1, c2)


def retrieving_cost_sdp(
    channel: KrausChannel,
    o,
    *,
    tol: Optional[float] = None,
    solver: Optional[str] = None,
) -> SdpSolution:
    """Minimum retrieving cost gamma_O(N) and an optimal two-channel retriever.

    Minimizes c1 + c2 over PSD Choi variables with scaled-identity marginals
    (which forces c1, c2 >= 0, so the objective equals |c1| + |c2|) subject to
    the exact recovery constraint N†(D†(O)) = O with J_D = J_D1 - J_D2.

    Returns an infeasible solution (gamma = inf) exactly when the observable
    is not preserved by the channel.
    """
    o = hermitianize(o, tol=1e-8)
    if np.linalg.norm(o) == 0:
        raise ValueError("observable must be nonzero")
    tol = solver_tolerance(tol)
    problem, (j1, j2, c1, c2) = _primal_problem(channel, o, tau=None)
    status = _solve(problem, tol, solver)
    if status == OPTIMAL:
        dec = _extract_decomposition(
            j1.value, j2.value, c1.value, c2.value, channel.dim
        )
        return SdpSolution(gamma=float(problem.value), status=OPTIMAL, decomposition=dec)
    if status in (INFEASIBLE, "unbounded"):
        return SdpSolution(gamma=math.inf, status=INFEASIBLE)
    return SdpSolution(gamma=math.nan, status=NUMERICAL_TROUBLE)


def retrieving_cost_approx(
    channel: KrausChannel,
    o,
    tau: float,
    *,
    tol: Optional[float] = None,
    solver: Optional[str] = None,
) -> SdpSolution:
    """Retrieving cost with the recovery constraint relaxed to a tau-band.

    gamma(tau) is non-increasing in tau; tau = 0 reproduces the exact program.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    o = hermitianize(o, tol=1e-8)
    tol = solver_tolerance(tol)
    problem, (j1, j2, c1, c2) = _primal_problem(channel, o, tau=float(tau))
    status = _solve(problem, tol, solver)
    if status == OPTIMAL:
        dec = _extract_decomposition(
            j1.value, j2.value, c1.value, c2.value, channel.dim
        )
        return SdpSolution(gamma=float(problem.value), status=OPTIMAL, decomposition=dec)
    if status in (INFEASIBLE, "unbounded"):
        return SdpSolution(gamma=math.inf, status=INFEASIBLE)
    return SdpSolution(gamma=math.nan, status=NUMERICAL_TROUBLE)


def dual_kernel(channel: KrausChannel, o: np.ndarray, k: np.ndarray) -> np.ndarray:
    """The composed kernel of the dual PSD constraints: N(K)^T (x) O."""
    return np.kron(apply(channel, k).T, o)


def retrieving_cost_dual(
    channel: KrausChannel,
    o,
    *,
    tol: Optional[float] = None,
    solver: Optional[str] = None,
) -> float:
    """Dual program: max -tr[KO] over Hermitian M, N, K with tr[M] <= 1,
    tr[N] <= 1, M(x)I + N(K)^T(x)O >= 0 and N(x)I - N(K)^T(x)O >= 0.

    Any feasible point certifies a lower bound on gamma; the optimum matches
    the primal by strong duality. An unbounded dual certifies primal
    infeasibility and is reported as +inf.
    """
    o = hermitianize(o, tol=1e-8)
    d = channel.dim
    tol = solver_tolerance(tol)
    basis = hermitian_basis(d)
    x = cp.Variable(len(basis))
    m = cp.Variable((d, d), hermitian=True)
    n = cp.Variable((d, d), hermitian=True)
    kernels = [dual_kernel(channel, o, b) for b in basis]
    tk = sum(x[i] * kern for i, kern in enumerate(kernels))
    objective = -sum(x[i] * np.trace(b @ o).real for i, b in enumerate(basis))
    eye = np.eye(d)
    constraints = [
        cp.real(cp.trace(m)) <= 1,
        cp.real(cp.trace(n)) <= 1,
        cp.kron(m, eye) + tk >> 0,
        cp.kron(n, eye) - tk >> 0,
    ]
    problem = cp.Problem(cp.Maximize(objective), constraints)
    status = _solve(problem, tol, solver)
    if status == OPTIMAL:
        return float(problem.value)
    if status == "unbounded":
        return math.inf
    if status == INFEASIBLE:
        # The dual is always feasible (x = 0, M = N = 0); only numerics get here.
        raise SolverFailure("dual SDP reported infeasible, which indicates solver trouble")
    raise SolverFailure("no solver converged on the dual SDP")


def gamma_min_hpts(
    hpts_map,
    *,
    tol: Optional[float] = None,
    solver: Optional[str] = None,
) -> SdpSolution:
    """Minimum |c1| + |c2| over two-channel decompositions of a given HPTS map.

    Same constraint family as the retrieving-cost primal, with the channel
    composition replaced by the fixed equality J_D1 - J_D2 = J_D.
    """
    choi = as_choi(hpts_map)
    if is_trace_scaling(choi, tol=1e-8) is None:
        raise ValueError("input map is not trace-scaling")
    d = choi.dim
    d2 = d * d
    tol = solver_tolerance(tol)
    j1 = cp.Variable((d2, d2), hermitian=True)
    j2 = cp.Variable((d2, d2), hermitian=True)
    c1 = cp.Variable()
    c2 = cp.Variable()
    constraints = [
        j1 >> 0,
        j2 >> 0,
        cp.partial_trace(j1, [d, d], axis=1) == c1 * np.eye(d),
        cp.partial_trace(j2, [d, d], axis=1) == c2 * np.eye(d),
        j1 - j2 == choi.matrix,
    ]
    problem = cp.Problem(cp.Minimize(c1 + c2), constraints)
    status = _solve(problem, tol, solver)
    if status == OPTIMAL:
        dec = _extract_decomposition(j1.value, j2.value, c1.value, c2.value, d)
        return SdpSolution(gamma=float(problem.value), status=OPTIMAL, decomposition=dec)
    if status in (INFEASIBLE, "unbounded"):
        return SdpSolution(gamma=math.inf, status=INFEASIBLE)
    return SdpSolution(gamma=math.nan, status=NUMERICAL_TROUBLE)


def analytic_gad_cost(
    epsilon: float, p: float, pauli: str
) -> tuple[float, RetrieverDecomposition]:
    """Closed-form cost and optimal retriever for a GAD channel and a Pauli
    observable.

    X and Y cost 1/sqrt(1-eps); Z costs (|1-2p|·eps+1)/(1-eps). The returned
    Choi decompositions satisfy the exact recovery identity.
    """
    if not 0 <= epsilon <= 1:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    if epsilon == 1:
        raise InformationDestroyed(
            "full damping relaxes every input to a fixed state; no Pauli survives"
        )
    if not 0 <= p <= 1:
        raise ValueError(f"p must be in [0, 1], got {p}")
    pauli = pauli.upper()
    if pauli not in ("X", "Y", "Z"):
        raise ValueError(f"observable must be X, Y or Z, got {pauli!r}")
    o = PAULI_1Q[pauli]
    eye4 = np.eye(4)
    if pauli in ("X", "Y"):
        gamma = 1.0 / math.sqrt(1 - epsilon)
        oto = np.kron(o.T, o)
        j1 = ChoiMap(2, 0.5 * (oto + eye4))
        j2 = ChoiMap(2, 0.5 * (-oto + eye4))
    else:
        g = abs(1 - 2 * p) * epsilon + 1
        gamma = g / (1 - epsilon)
        zz = np.kron(o.T, o)
        iz = np.kron(np.eye(2), o)
        a = 1 / (2 * g)
        b = epsilon * (1 - 2 * p) / (2 * g)
        j1 = ChoiMap(2, a * zz + b * iz + 0.5 * eye4)
        j2 = ChoiMap(2, -a * zz - b * iz + 0.5 * eye4)
    half = gamma / 2
    return gamma, RetrieverDecomposition(c1=half, c2=-half, d1=j1, d2=j2)


def _signed_pauli_weight(probs: Mapping[str, float], observable: str) -> float:
    """sum over commuting Paulis minus sum over anticommuting ones.

    Exact fast path for uniform (depolarizing-style) maps: when every
    non-identity probability equals q, the sum telescopes to 1 - q·4ⁿ, which
    reproduces 1 - epsilon without accumulated rounding.
    """
    n = len(observable)
    identity = "I" * n
    non_identity = {k: v for k, v in probs.items() if k != identity}
    values = set(non_identity.values())
    if len(values) == 1 and len(non_identity) == 4 ** n - 1:
        q = values.pop()
        return 1.0 - q * 4 ** n
    signed = [
        v if paulis_commute(k, observable) else -v for k, v in probs.items()
    ]
    return math.fsum(signed)


def analytic_pauli_cost(
    probs: Mapping[str, float], observable_pauli: str
) -> tuple[float, RetrieverDecomposition]:
    """Closed-form cost and optimal retriever for a mixed Pauli channel and a
    Pauli-string observable.

    gamma = 1 / (sum of probabilities commuting with O minus the sum
    anticommuting with O); the retriever components are the uniform mixtures
    of commuting and anticommuting Pauli conjugations. The n-qubit
    depolarizing channel yields gamma = 1/(1-eps) for every non-identity
    Pauli observable.
    """
    observable_pauli = observable_pauli.upper()
    n = len(observable_pauli)
    if not n or any(c not in "IXYZ" for c in observable_pauli):
        raise ValueError(f"invalid Pauli observable {observable_pauli!r}")
    normalized = {k.upper(): float(v) for k, v in probs.items()}
    if any(len(k) != n for k in normalized):
        raise ValueError("channel Pauli strings and observable must share a length")
    total = math.fsum(normalized.values())
    if abs(total - 1.0) > 1e-10 or any(v < -1e-12 for v in normalized.values()):
        raise ValueError("probabilities must be non-negative and sum to 1")

    d = 2 ** n
    if observable_pauli == "I" * n:
        # tr[ρI] survives every channel; nothing to retrieve.
        ident = _identity_choi(d)
        return 1.0, RetrieverDecomposition(c1=1.0, c2=0.0, d1=ident, d2=ident)

    s = _signed_pauli_weight(normalized, observable_pauli)
    if s <= 0:
        raise InformationDestroyed(
            f"commuting-minus-anticommuting weight is {s}; "
            "the observable is not recoverable by the Pauli retriever family"
        )
    gamma = 1.0 / s
    o = pauli_matrix(observable_pauli)
    eye = np.eye(d * d)
    oto = np.kron(o.T, o)
    j1 = ChoiMap(d, (eye + oto) / d)
    j2 = ChoiMap(d, (eye - oto) / d)
    half = gamma / 2
    return gamma, RetrieverDecomposition(c1=half, c2=-half, d1=j1, d2=j2)


def conventional_pec_cost(
    kind: str, epsilon: float, *, p: Optional[float] = None, dim: int = 2
) -> float:
    """Cost of inverting the whole channel (the conventional quasi-probability
    baseline), rather than retrieving a single observable.

    gad: (|1-2p|·eps+1)/(1-eps). depolarizing: (1+(1-2/d²)·eps)/(1-eps).
    """
    if not 0 <= epsilon <= 1:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    if epsilon == 1:
        raise InformationDestroyed(
            "the channel has no inverse at epsilon = 1; the inversion cost diverges"
        )
    if kind == "gad":
        if p is None or not 0 <= p <= 1:
            raise ValueError("gad requires a temperature parameter p in [0, 1]")
        return (abs(1 - 2 * p) * epsilon + 1) / (1 - epsilon)
    if kind == "depolarizing":
        if dim < 2:
            raise ValueError("dimension must be at least 2")
        return (1 + (1 - 2 / dim ** 2) * epsilon) / (1 - epsilon)
    raise ValueError(f"unknown channel kind {kind!r}")
