"""Sampling-budget planning for Pauli Hamiltonians under local noise.

Retrieving a tensor-product Pauli observable through i.i.d. single-qubit
noise costs the product of single-site costs over the non-identity sites, so
per-term budgets come from closed forms rather than SDP solves. Two budgets
are compared throughout: gamma_pro (retrieve just the observable) and
gamma_con (invert the whole channel, the conventional baseline). Both enter
Hoeffding budgets squared, which is where the advantage compounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .cost import analytic_gad_cost, conventional_pec_cost
from .protocol import hoeffding_rounds

_PAULI_CHARS = frozenset("IXYZ")


@dataclass(frozen=True)
class Hamiltonian:
    """A real combination of Pauli strings: H = sum_j h_j P_j."""

    n_qubits: int
    terms: tuple[tuple[float, str], ...]

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be a positive integer")
        if not self.terms:
            raise ValueError("Hamiltonian needs at least one term")
        for coeff, pauli in self.terms:
            if not math.isfinite(coeff):
                raise ValueError(f"non-finite coefficient {coeff} on {pauli!r}")
            if len(pauli) != self.n_qubits or not set(pauli) <= _PAULI_CHARS:
                raise ValueError(
                    f"term {pauli!r} is not a {self.n_qubits}-qubit Pauli string"
                )

    def non_identity_terms(self) -> tuple[tuple[float, str], ...]:
        return tuple(
            (coeff, pauli)
            for coeff, pauli in self.terms
            if set(pauli) != {"I"}
        )


def parse_hamiltonian(text: str) -> Hamiltonian:
    """Parse the line format '<coeff> <pauli>'; '#' starts a comment."""
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<coeff> <pauli>', got {raw!r}")
        try:
            coeff = float(parts[0])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad coefficient {parts[0]!r}") from exc
        terms.append((coeff, parts[1].upper()))
    if not terms:
        raise ValueError("no Hamiltonian terms found")
    n = len(terms[0][1])
    return Hamiltonian(n_qubits=n, terms=tuple(terms))


def _site_gammas(site: str, noise_kind: str, params: Mapping[str, float]) -> tuple[float, float]:
    """(retrieving, conventional) cost of one non-identity observable site."""
    epsilon = float(params["epsilon"])
    if noise_kind == "depolarizing":
        return 1.0 / (1.0 - epsilon), conventional_pec_cost("depolarizing", epsilon, dim=2)
    if noise_kind == "gad":
        p = float(params["p"])
        pro, _ = analytic_gad_cost(epsilon, p, site)
        return pro, conventional_pec_cost("gad", epsilon, p=p)
    raise ValueError(f"unknown noise kind {noise_kind!r}")


def term_gammas(
    pauli: str, noise_kind: str, params: Mapping[str, float]
) -> tuple[float, float]:
    """Costs of one Pauli-string term under i.i.d. single-qubit noise.

    Both costs multiply across non-identity sites; identity sites are free
    because the partial trace absorbs trace-preserving noise there.
    """
    gamma_pro = 1.0
    gamma_con = 1.0
    for site in pauli:
        if site == "I":
            continue
        pro, con = _site_gammas(site, noise_kind, params)
        gamma_pro *= pro
        gamma_con *= con
    return gamma_pro, gamma_con


@dataclass(frozen=True)
class PlanTerm:
    pauli: str
    abs_coeff: float
    gamma_pro: float
    gamma_con: float
    rounds_pro: float
    rounds_con: float


@dataclass(frozen=True)
class PlanReport:
    terms: tuple[PlanTerm, ...]
    total_pro: int
    total_con: int
    aggregation: str
    epsilon_hat: float
    delta: float


def plan_budget(
    hamiltonian: Hamiltonian,
    noise_kind: str,
    noise_params: Mapping[str, float],
    epsilon_hat: float,
    delta: float,
    aggregation: str = "per-term",
) -> PlanReport:
    """Sampling budget for estimating every Hamiltonian term to (epsilon_hat,
    delta), with retrieving costs priced against whole-channel inversion.

    per-term: each term gets its own Hoeffding budget (reported as the exact
    real value; totals sum the integer ceilings). weighted: terms share one
    budget sized by the worst-case range gamma_max · sum|h_j|, split across
    terms in proportion to |h_j|. Identity-only terms shift the estimate by a
    constant and need no samples, so they are excluded.
    """
    if aggregation not in ("per-term", "weighted"):
        raise ValueError(f"unknown aggregation rule {aggregation!r}")
    terms = hamiltonian.non_identity_terms()
    if not terms:
        raise ValueError("Hamiltonian has no non-identity terms to estimate")

    gammas = [term_gammas(pauli, noise_kind, noise_params) for _, pauli in terms]

    if aggregation == "per-term":
        plan_terms = tuple(
            PlanTerm(
                pauli=pauli,
                abs_coeff=abs(coeff),
                gamma_pro=pro,
                gamma_con=con,
                rounds_pro=hoeffding_rounds(pro, epsilon_hat, delta),
                rounds_con=hoeffding_rounds(con, epsilon_hat, delta),
            )
            for (coeff, pauli), (pro, con) in zip(terms, gammas)
        )
        total_pro = sum(math.ceil(t.rounds_pro) for t in plan_terms)
        total_con = sum(math.ceil(t.rounds_con) for t in plan_terms)
    else:
        weight = math.fsum(abs(coeff) for coeff, _ in terms)
        if weight == 0:
            raise ValueError("weighted aggregation needs a nonzero coefficient")
        budget_pro = hoeffding_rounds(
            max(pro for pro, _ in gammas) * weight, epsilon_hat, delta
        )
        budget_con = hoeffding_rounds(
            max(con for _, con in gammas) * weight, epsilon_hat, delta
        )
        plan_terms = tuple(
            PlanTerm(
                pauli=pauli,
                abs_coeff=abs(coeff),
                gamma_pro=pro,
                gamma_con=con,
                rounds_pro=budget_pro * abs(coeff) / weight,
                rounds_con=budget_con * abs(coeff) / weight,
            )
            for (coeff, pauli), (pro, con) in zip(terms, gammas)
        )
        total_pro = math.ceil(budget_pro)
        total_con = math.ceil(budget_con)

    return PlanReport(
        terms=plan_terms,
        total_pro=total_pro,
        total_con=total_con,
        aggregation=aggregation,
        epsilon_hat=epsilon_hat,
        delta=delta,
    )


def cost_grid(
    pauli: str,
    eps_values: Iterable[float],
    p_values: Iterable[float],
) -> list[tuple[float, float, float, float]]:
    """Sweep (epsilon, p) for a single-qubit Pauli observable under GAD noise.

    Rows are (epsilon, p, gamma_pro, gamma_con); the retrieving cost never
    exceeds the whole-channel inversion cost, strictly so for epsilon > 0.
    """
    rows = []
    for eps in eps_values:
        for p in p_values:
            gamma_pro, _ = analytic_gad_cost(eps, p, pauli)
            gamma_con = conventional_pec_cost("gad", eps, p=p)
            rows.append((float(eps), float(p), gamma_pro, gamma_con))
    return rows


def float_range(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic grid with drift-free rounding of the endpoints."""
    if step <= 0:
        raise ValueError("step must be positive")
    count = int(round((stop - start) / step))
    values = [start + k * step for k in range(count + 1)]
    return [v for v in values if v <= stop + 1e-12]
