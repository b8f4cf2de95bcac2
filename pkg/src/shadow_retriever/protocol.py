"""Quasi-probability retrieving protocol: rounds, simulation, coverage.

Each round draws one component channel D_j with probability |c_j|/gamma,
measures the observable's eigenbasis on D_j(N(rho)), and records the sign-
corrected outcome. The mean times gamma is an unbiased estimate of tr[rho O],
and Hoeffding's inequality sets the number of rounds needed for additive
accuracy epsilon_hat at confidence 1 - delta.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channels import apply
from .cost import RetrieverDecomposition
from .linalg import check_density_matrix, hermitian_eig, hermitianize

_NEGATIVE_PROB_TOL = -1e-10


class ObservableNotNormalized(ValueError):
    """Observable spectrum exceeds [-1, 1] and rescaling was disabled."""


@dataclass(frozen=True)
class ProtocolConfig:
    epsilon_hat: float
    delta: float
    seed: int
    rounds_override: Optional[int] = None

    def __post_init__(self):
        if not self.epsilon_hat > 0:
            raise ValueError(f"epsilon_hat must be positive, got {self.epsilon_hat}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.rounds_override is not None and self.rounds_override < 1:
            raise ValueError("rounds_override must be a positive integer")


@dataclass(frozen=True)
class EstimateReport:
    xi: float
    rounds: int
    gamma: float
    true_value: float
    abs_error: float
    seed: int


def hoeffding_rounds(
    gamma: float,
    epsilon_hat: float,
    delta: float,
    *,
    log_base: Optional[float] = None,
) -> float:
    """Real-valued Hoeffding budget 2·gamma²·log(2/delta)/epsilon_hat².

    Natural log by default; pass log_base to compare against conventions that
    quote the bound in other bases.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if not epsilon_hat > 0:
        raise ValueError(f"epsilon_hat must be positive, got {epsilon_hat}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    log = math.log(2 / delta) if log_base is None else math.log(2 / delta, log_base)
    return 2 * gamma ** 2 * log / epsilon_hat ** 2


def sampling_rounds(
    gamma: float,
    epsilon_hat: float,
    delta: float,
    *,
    log_base: Optional[float] = None,
) -> int:
    """Number of protocol rounds: ceil of the Hoeffding budget."""
    return math.ceil(hoeffding_rounds(gamma, epsilon_hat, delta, log_base=log_base))


def _outcome_distribution(rho, channel, retriever, eigvecs):
    """Joint (channel, outcome) probabilities and sign weights per entry."""
    noisy = apply(channel, rho)
    gamma = retriever.gamma
    probs = []
    signs = []
    for c, dmap in retriever.components():
        if c == 0:
            continue
        sigma = apply(dmap, noisy)
        born = np.einsum("im,ij,jm->m", eigvecs.conj(), sigma, eigvecs).real
        if born.min() < _NEGATIVE_PROB_TOL:
            raise RuntimeError(
                f"Born probability {born.min():.3e} below tolerance; "
                "retriever components are not close enough to CPTP"
            )
        born = np.clip(born, 0.0, None)
        born /= born.sum()
        probs.append((abs(c) / gamma) * born)
        signs.append(math.copysign(1.0, c) * np.ones_like(born))
    joint = np.concatenate(probs)
    joint /= joint.sum()
    return joint, np.concatenate(signs)


def simulate_protocol(
    rho,
    channel,
    retriever: RetrieverDecomposition,
    o,
    config: ProtocolConfig,
    *,
    rescale: bool = True,
) -> EstimateReport:
    """Run the retrieving protocol and report the estimate of tr[rho O].

    Sampling is exact: each round draws a component channel and then a Born
    outcome in the observable's eigenbasis via one inverse-CDF lookup, so the
    result is bit-reproducible for a fixed seed. Observables with spectrum
    outside [-1, 1] are rescaled by the largest eigenvalue magnitude and the
    estimate scaled back (set rescale=False to reject them instead).
    """
    rho = check_density_matrix(rho)
    o = hermitianize(o, tol=1e-8)
    if rho.shape != o.shape:
        raise ValueError("state and observable dimensions differ")
    eigvals, eigvecs = hermitian_eig(o)
    scale = float(np.max(np.abs(eigvals)))
    if scale <= 1 + 1e-12:
        scale = 1.0
    elif not rescale:
        raise ObservableNotNormalized(
            f"observable spectrum reaches {scale:.6g}; rescale it into [-1, 1]"
        )
    outcomes = eigvals / scale

    gamma = retriever.gamma
    if gamma <= 0:
        raise ValueError("retriever carries no weight; nothing to sample")
    rounds = config.rounds_override or sampling_rounds(
        gamma, config.epsilon_hat, config.delta
    )
    joint, signs = _outcome_distribution(rho, channel, retriever, eigvecs)
    values = signs * np.tile(outcomes, len(joint) // len(outcomes))

    rng = np.random.Generator(np.random.Philox(key=config.seed))
    u = rng.random(rounds)
    idx = np.searchsorted(np.cumsum(joint), u, side="right")
    idx = np.minimum(idx, len(joint) - 1)
    xi = scale * gamma * float(values[idx].sum()) / rounds

    true_value = float(np.trace(rho @ o).real)
    return EstimateReport(
        xi=xi,
        rounds=rounds,
        gamma=gamma,
        true_value=true_value,
        abs_error=abs(xi - true_value),
        seed=config.seed,
    )


def exact_recovery(rho, channel, retriever: RetrieverDecomposition, o) -> float:
    """Infinite-sample limit of the protocol: sum_j c_j tr[D_j(N(rho)) O]."""
    rho = check_density_matrix(rho)
    o = hermitianize(o, tol=1e-8)
    noisy = apply(channel, rho)
    total = 0.0
    for c, dmap in retriever.components():
        if c == 0:
            continue
        total += c * float(np.trace(apply(dmap, noisy) @ o).real)
    return total


def coverage_trial(
    rho,
    channel,
    retriever: RetrieverDecomposition,
    o,
    config: ProtocolConfig,
    n_trials: int,
) -> float:
    """Fraction of independent protocol runs missing tr[rho O] by more than
    epsilon_hat. Hoeffding guarantees this stays below delta up to the
    usual binomial fluctuation of the trial count itself.

    Trial seeds are spawned from config.seed, so the whole experiment is
    reproducible while trials stay statistically independent.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be a positive integer")
    truth = float(np.trace(check_density_matrix(rho) @ hermitianize(o)).real)
    children = np.random.SeedSequence(config.seed).spawn(n_trials)
    failures = 0
    for child in children:
        seed = int(child.generate_state(1, dtype=np.uint64)[0])
        report = simulate_protocol(
            rho, channel, retriever, o, dataclasses.replace(config, seed=seed)
        )
        if abs(report.xi - truth) > config.epsilon_hat:
            failures += 1
    return failures / n_trials
