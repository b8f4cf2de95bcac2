"""Command-line interface.

Subcommands: analyze (shadow profile of a channel), cost (minimum retrieving
cost and optimal retriever), simulate (run the sampling protocol), plan
(Hamiltonian measurement budget), grid (GAD cost sweep).

Exit codes: 0 success, 2 bad input or usage, 3 information not retrievable
(infeasible program or destroyed observable), 4 solver trouble.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .channels import KrausChannel, depolarizing_probs
from .cost import (
    INFEASIBLE,
    NUMERICAL_TROUBLE,
    OPTIMAL,
    InformationDestroyed,
    RetrieverDecomposition,
    SolverFailure,
    analytic_gad_cost,
    analytic_pauli_cost,
    retrieving_cost_approx,
    retrieving_cost_dual,
    retrieving_cost_sdp,
)
from .io import (
    channel_from_json,
    load_hamiltonian,
    load_json,
    observable_from_json,
    save_report,
    save_retriever,
    state_from_json,
    write_csv,
)
from .mitigation import cost_grid, float_range, plan_budget
from .protocol import ProtocolConfig, simulate_protocol
from .shadow import shadow_profile

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_NOT_RETRIEVABLE = 3
EXIT_SOLVER_TROUBLE = 4


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _confidence(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"must be in (0, 1), got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _nonneg_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _parse_noise(text: str) -> tuple[str, dict]:
    kind, _, rest = text.partition(":")
    if kind == "depolarizing":
        if not rest:
            raise argparse.ArgumentTypeError("expected depolarizing:<epsilon>")
        return kind, {"epsilon": float(rest)}
    if kind == "gad":
        parts = rest.split(",") if rest else []
        if len(parts) != 2:
            raise argparse.ArgumentTypeError("expected gad:<epsilon>,<p>")
        return kind, {"epsilon": float(parts[0]), "p": float(parts[1])}
    raise argparse.ArgumentTypeError(f"unknown noise model {kind!r}")


def _parse_range(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) == 3:
        return float_range(float(parts[0]), float(parts[1]), float(parts[2]))
    raise argparse.ArgumentTypeError("expected <value> or <start>:<stop>:<step>")


def _analytic_retriever(
    raw_channel: dict, raw_obs: dict
) -> Optional[tuple[float, RetrieverDecomposition]]:
    """Closed-form cost when the channel family and observable allow one."""
    kind = raw_channel.get("type")
    pauli = raw_obs.get("pauli")
    if kind is None or pauli is None or not float(raw_obs.get("coeff", 1.0)):
        return None
    pauli = str(pauli).upper()
    if kind == "gad" and pauli in ("X", "Y", "Z"):
        return analytic_gad_cost(
            float(raw_channel["epsilon"]), float(raw_channel["p"]), pauli
        )
    if kind == "depolarizing":
        n = int(raw_channel.get("qubits", 1))
        if len(pauli) == n:
            return analytic_pauli_cost(depolarizing_probs(
                float(raw_channel["epsilon"]), n), pauli)
    if kind == "mixed_pauli":
        probs = raw_channel["probs"]
        if probs and len(pauli) == len(next(iter(probs))):
            return analytic_pauli_cost(probs, pauli)
    return None


def _solve_cost(
    raw_channel: dict,
    channel: KrausChannel,
    raw_obs: dict,
    o,
    method: str,
    tau: Optional[float],
) -> tuple[str, float, Optional[RetrieverDecomposition]]:
    """Returns (status, gamma, decomposition) for the requested method."""
    if tau is not None and method not in ("sdp", "auto"):
        raise ValueError("--tau applies to the SDP method only")
    if method in ("analytic", "auto") and tau is None:
        result = _analytic_retriever(raw_channel, raw_obs)
        if result is not None:
            return OPTIMAL, result[0], result[1]
        if method == "analytic":
            raise ValueError(
                "no closed form for this channel/observable pair; use --method sdp"
            )
    if method == "dual":
        value = retrieving_cost_dual(channel, o)
        if value == float("inf"):
            return INFEASIBLE, value, None
        return OPTIMAL, value, None
    if tau is not None:
        solution = retrieving_cost_approx(channel, o, tau)
    else:
        solution = retrieving_cost_sdp(channel, o)
    return solution.status, solution.gamma, solution.decomposition


def cmd_analyze(args) -> int:
    channel = channel_from_json(load_json(args.channel))
    profile = shadow_profile(channel)
    invertible = str(profile.d_s == profile.dim ** 2).lower()
    print(f"d_s={profile.d_s} zeta={profile.zeta} invertible={invertible}")
    return EXIT_OK


def cmd_cost(args) -> int:
    raw_channel = load_json(args.channel)
    raw_obs = load_json(args.observable)
    channel = channel_from_json(raw_channel)
    o = observable_from_json(raw_obs)

    status, gamma, dec = _solve_cost(
        raw_channel, channel, raw_obs, o, args.method, args.tau
    )
    if status == INFEASIBLE:
        print("infeasible: the observable is not preserved by the channel",
              file=sys.stderr)
        return EXIT_NOT_RETRIEVABLE
    if status == NUMERICAL_TROUBLE:
        print("solver failed to converge", file=sys.stderr)
        return EXIT_SOLVER_TROUBLE

    print(f"gamma={gamma:.10g}")
    if args.verify:
        primal = retrieving_cost_sdp(channel, o)
        if primal.status != OPTIMAL:
            print("verification primal solve failed", file=sys.stderr)
            return EXIT_SOLVER_TROUBLE
        dual = retrieving_cost_dual(channel, o)
        gap = abs(primal.gamma - dual) / max(1.0, abs(primal.gamma))
        print(f"primal={primal.gamma:.10g} dual={dual:.10g} gap={gap:.3g}")
    if args.output:
        if dec is None:
            raise ValueError("the dual method provides no retriever to write")
        save_retriever(args.output, dec)
    return EXIT_OK


def cmd_simulate(args) -> int:
    raw_channel = load_json(args.channel)
    raw_obs = load_json(args.observable)
    channel = channel_from_json(raw_channel)
    o = observable_from_json(raw_obs)
    rho = state_from_json(load_json(args.state))

    if args.retriever:
        from .io import load_retriever

        dec = load_retriever(args.retriever)
    else:
        status, _, dec = _solve_cost(
            raw_channel, channel, raw_obs, o, "auto", None
        )
        if status == INFEASIBLE:
            print("infeasible: the observable is not preserved by the channel",
                  file=sys.stderr)
            return EXIT_NOT_RETRIEVABLE
        if status == NUMERICAL_TROUBLE:
            print("solver failed to converge", file=sys.stderr)
            return EXIT_SOLVER_TROUBLE

    config = ProtocolConfig(
        epsilon_hat=args.eps,
        delta=args.delta,
        seed=args.seed,
        rounds_override=args.rounds,
    )
    report = simulate_protocol(rho, channel, dec, o, config)
    print(
        f"xi={report.xi:.10g} rounds={report.rounds} gamma={report.gamma:.10g} "
        f"true_value={report.true_value:.10g} abs_error={report.abs_error:.10g}"
    )
    if args.report:
        save_report(args.report, report)
    return EXIT_OK


def cmd_plan(args) -> int:
    hamiltonian = load_hamiltonian(args.hamiltonian)
    kind, params = args.noise
    report = plan_budget(
        hamiltonian, kind, params, args.eps, args.delta, args.aggregation
    )
    header = (
        f"{'pauli':<{hamiltonian.n_qubits + 2}} {'abs_coeff':>12} "
        f"{'gamma_pro':>12} {'gamma_con':>12} {'gamma_pro^2':>12} "
        f"{'gamma_con^2':>12} {'rounds_pro':>14} {'rounds_con':>14}"
    )
    print(header)
    for t in report.terms:
        print(
            f"{t.pauli:<{hamiltonian.n_qubits + 2}} {t.abs_coeff:>12.6g} "
            f"{t.gamma_pro:>12.6g} {t.gamma_con:>12.6g} {t.gamma_pro ** 2:>12.6g} "
            f"{t.gamma_con ** 2:>12.6g} {t.rounds_pro:>14.6g} {t.rounds_con:>14.6g}"
        )
    print(
        f"total_pro={report.total_pro} total_con={report.total_con} "
        f"aggregation={report.aggregation}"
    )
    if args.csv:
        from .io import plan_to_rows

        csv_header, rows = plan_to_rows(report)
        write_csv(args.csv, csv_header, rows)
    return EXIT_OK


def cmd_grid(args) -> int:
    rows = cost_grid(args.obs, args.eps_range, args.p_range)
    header = ["epsilon", "p", "gamma_pro", "gamma_con"]
    if args.csv:
        write_csv(args.csv, header, rows)
    else:
        from .io import format_cell

        print(",".join(header))
        for row in rows:
            print(",".join(format_cell(v) for v in row))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shadow-retriever",
        description="Decide, price and simulate observable retrieval from noisy quantum states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="shadow profile of a channel")
    p.add_argument("channel", help="channel JSON file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("cost", help="minimum retrieving cost and optimal retriever")
    p.add_argument("channel", help="channel JSON file")
    p.add_argument("observable", help="observable JSON file")
    p.add_argument(
        "--method",
        choices=["sdp", "dual", "analytic", "auto"],
        default="auto",
        help="auto uses a closed form when one applies, else the SDP",
    )
    p.add_argument("--tau", type=_nonneg_float, default=None,
                   help="relax exact recovery to an operator band of half-width tau")
    p.add_argument("--verify", action="store_true",
                   help="cross-check with the dual program and print the gap")
    p.add_argument("--output", "-o", default=None, help="write retriever JSON here")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("simulate", help="run the quasi-probability protocol")
    p.add_argument("channel", help="channel JSON file")
    p.add_argument("observable", help="observable JSON file")
    p.add_argument("state", help="density-matrix JSON file")
    p.add_argument("--eps", type=_positive_float, required=True,
                   help="additive accuracy epsilon-hat")
    p.add_argument("--delta", type=_confidence, required=True,
                   help="failure probability")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--rounds", type=int, default=None,
                   help="override the Hoeffding round count")
    p.add_argument("--retriever", default=None,
                   help="load a retriever JSON instead of solving for one")
    p.add_argument("--report", default=None, help="write the estimate report JSON here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("plan", help="sampling budget for a Pauli Hamiltonian")
    p.add_argument("hamiltonian", help="text file of '<coeff> <pauli>' lines")
    p.add_argument("--noise", type=_parse_noise, required=True,
                   help="depolarizing:<epsilon> or gad:<epsilon>,<p>, applied per qubit")
    p.add_argument("--eps", type=_positive_float, required=True)
    p.add_argument("--delta", type=_confidence, required=True)
    p.add_argument("--aggregation", choices=["per-term", "weighted"],
                   default="per-term")
    p.add_argument("--csv", default=None, help="also write the table as CSV")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("grid", help="GAD cost sweep over (epsilon, p)")
    p.add_argument("--obs", choices=["X", "Y", "Z"], default="X")
    p.add_argument("--eps-range", type=_parse_range, default=[0.0],
                   help="<start>:<stop>:<step> or a single value")
    p.add_argument("--p-range", type=_parse_range, default=[0.0])
    p.add_argument("--csv", default=None, help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_grid)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InformationDestroyed as exc:
        print(f"not retrievable: {exc}", file=sys.stderr)
        return EXIT_NOT_RETRIEVABLE
    except SolverFailure as exc:
        print(f"solver trouble: {exc}", file=sys.stderr)
        return EXIT_SOLVER_TROUBLE
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
