"""File formats: channel/observable/state/retriever JSON, Hamiltonian text,
estimate reports, and CSV tables.

Complex numbers serialize as two-element arrays [re, im]; matrices as
row-major nested arrays. Loaders accept bare numbers where an entry is real.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .channels import (
    ChoiMap,
    KrausChannel,
    make_depolarizing,
    make_gad,
    make_mixed_pauli,
)
from .cost import RetrieverDecomposition
from .linalg import check_density_matrix, hermitianize, pauli_matrix
from .mitigation import Hamiltonian, PlanReport, parse_hamiltonian
from .protocol import EstimateReport

PathLike = Union[str, Path]


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(e.real), float(e.imag)] for e in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    def entry(e):
        if isinstance(e, (int, float)):
            return complex(e)
        if isinstance(e, (list, tuple)) and len(e) == 2:
            return complex(float(e[0]), float(e[1]))
        raise ValueError(f"matrix entry must be a number or [re, im], got {e!r}")

    rows = []
    for row in data:
        if not isinstance(row, (list, tuple)):
            raise ValueError("matrix JSON must be a nested list of rows")
        rows.append([entry(e) for e in row])
    m = np.array(rows, dtype=complex)
    if m.ndim != 2:
        raise ValueError("matrix JSON must be a nested list of rows")
    return m


def channel_from_json(data: dict) -> KrausChannel:
    if "type" in data:
        kind = data["type"]
        if kind == "gad":
            return make_gad(float(data["epsilon"]), float(data["p"]))
        if kind == "depolarizing":
            return make_depolarizing(float(data["epsilon"]), int(data.get("qubits", 1)))
        if kind == "mixed_pauli":
            return make_mixed_pauli(data["probs"])
        raise ValueError(f"unknown channel type {kind!r}")
    if "kraus" not in data:
        raise ValueError("channel JSON needs either 'type' or 'dim'+'kraus'")
    kraus = [matrix_from_json(k) for k in data["kraus"]]
    dim = int(data.get("dim", kraus[0].shape[0] if kraus else 0))
    return KrausChannel(dim=dim, kraus=tuple(kraus))


def channel_to_json(channel: KrausChannel) -> dict:
    return {
        "dim": channel.dim,
        "kraus": [matrix_to_json(e) for e in channel.kraus],
    }


def observable_from_json(data: dict) -> np.ndarray:
    if "matrix" in data:
        return hermitianize(matrix_from_json(data["matrix"]), tol=1e-8)
    if "pauli" in data:
        coeff = float(data.get("coeff", 1.0))
        return coeff * pauli_matrix(str(data["pauli"]).upper())
    raise ValueError("observable JSON needs either 'matrix' or 'pauli'")


def state_from_json(data: dict) -> np.ndarray:
    if "matrix" not in data:
        raise ValueError("state JSON needs a 'matrix' field")
    return check_density_matrix(matrix_from_json(data["matrix"]), tol=1e-8)


def _choi_from_ops(ops: Sequence[np.ndarray]) -> ChoiMap:
    """Choi matrix of sum_k E_k (.) E_k† without trace-preservation checks,
    so retrievers exported at solver accuracy round-trip."""
    d = ops[0].shape[0]
    j = np.zeros((d * d, d * d), dtype=complex)
    for e in ops:
        v = np.asarray(e, dtype=complex).T.reshape(-1)
        j += np.outer(v, v.conj())
    return ChoiMap(d, j)


def retriever_to_json(dec: RetrieverDecomposition, kraus_tol: float = 1e-6) -> dict:
    (c1, k1), (c2, k2) = dec.as_kraus(tol=kraus_tol)
    return {
        "c1": float(c1),
        "c2": float(c2),
        "d1_kraus": [matrix_to_json(e) for e in k1.kraus],
        "d2_kraus": [matrix_to_json(e) for e in k2.kraus],
        "gamma": dec.gamma,
    }


def retriever_from_json(data: dict) -> RetrieverDecomposition:
    d1_ops = [matrix_from_json(e) for e in data["d1_kraus"]]
    d2_ops = [matrix_from_json(e) for e in data["d2_kraus"]]
    return RetrieverDecomposition(
        c1=float(data["c1"]),
        c2=float(data["c2"]),
        d1=_choi_from_ops(d1_ops),
        d2=_choi_from_ops(d2_ops),
    )


def report_to_json(report: EstimateReport) -> dict:
    return {
        "xi": report.xi,
        "rounds": report.rounds,
        "gamma": report.gamma,
        "true_value": report.true_value,
        "abs_error": report.abs_error,
        "seed": report.seed,
    }


def load_json(path: PathLike) -> dict:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def save_json(path: PathLike, obj: dict) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, indent=2)
        f.write("\n")


def load_channel(path: PathLike) -> KrausChannel:
    return channel_from_json(load_json(path))


def load_observable(path: PathLike) -> np.ndarray:
    return observable_from_json(load_json(path))


def load_state(path: PathLike) -> np.ndarray:
    return state_from_json(load_json(path))


def load_retriever(path: PathLike) -> RetrieverDecomposition:
    return retriever_from_json(load_json(path))


def save_retriever(path: PathLike, dec: RetrieverDecomposition) -> None:
    save_json(path, retriever_to_json(dec))


def save_report(path: PathLike, report: EstimateReport) -> None:
    save_json(path, report_to_json(report))


def load_hamiltonian(path: PathLike) -> Hamiltonian:
    with open(path, encoding="utf-8") as f:
        return parse_hamiltonian(f.read())


def fixture_hamiltonian_path() -> Path:
    """Path of the bundled two-qubit molecular Hamiltonian."""
    return Path(__file__).parent / "data" / "h2_hamiltonian.txt"


def format_cell(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.10g" % value
    return str(value)


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])


def plan_to_rows(report: PlanReport) -> tuple[list[str], list[list]]:
    header = ["pauli", "abs_coeff", "gamma_pro", "gamma_con", "rounds_pro", "rounds_con"]
    rows = [
        [t.pauli, t.abs_coeff, t.gamma_pro, t.gamma_con, t.rounds_pro, t.rounds_con]
        for t in report.terms
    ]
    return header, rows
