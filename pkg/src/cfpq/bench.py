"""Complete-graph benchmark sweeps and polynomial trend fitting."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .engine import run_query
from .grammar import Grammar
from .graph import complete_graph

CSV_HEADER = "n,grammar,time_ms,sppf_nodes,gss_nodes,descriptors"

NODE_FIT_POWERS = (3, 2, 1)
TIME_FIT_POWERS = (4, 3, 2, 1)


@dataclass(frozen=True)
class BenchRecord:
    n: int
    grammar_id: str
    time_ms: float
    sppf_nodes: int
    gss_nodes: int
    descriptors: int


def run_sweep(
    grammar: Grammar,
    grammar_id: str,
    sizes: Iterable[int],
    *,
    with_loops: bool = False,
    repeats: int = 1,
) -> list[BenchRecord]:
    """Query complete graphs of the given sizes, all vertices to all vertices."""
    sizes = sorted(set(sizes))
    if not sizes:
        raise ValueError("size range is empty")
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    records = []
    for n in sizes:
        graph = complete_graph(n, grammar.terminals, with_loops=with_loops)
        times = []
        result = None
        for _ in range(repeats):
            started = time.perf_counter()
            result = run_query(graph, grammar)
            times.append((time.perf_counter() - started) * 1000.0)
        assert result is not None
        records.append(
            BenchRecord(
                n=n,
                grammar_id=grammar_id,
                time_ms=statistics.median(times),
                sppf_nodes=result.sppf.stats().nodes,
                gss_nodes=result.engine.gss_nodes,
                descriptors=result.engine.descriptors,
            )
        )
    return records


def fit_polynomial(
    xs: Sequence[float], ys: Sequence[float], powers: Sequence[int]
) -> tuple[tuple[float, ...], float]:
    """Least-squares fit of y over the basis {x**p}, no constant term.

    Returns the coefficients (matching ``powers``) and the R^2 score.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    basis = np.column_stack([x**p for p in powers])
    coeffs, *_ = np.linalg.lstsq(basis, y, rcond=None)
    residual = y - basis @ coeffs
    total = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((residual**2).sum()) / total if total > 0 else 1.0
    return tuple(float(c) for c in coeffs), r2


def format_fit(coeffs: Sequence[float], powers: Sequence[int], variable: str = "n") -> str:
    terms = []
    for c, p in zip(coeffs, powers):
        term = f"{c:+.6f}*{variable}" + (f"^{p}" if p > 1 else "")
        terms.append(term)
    return " ".join(terms).lstrip("+")


def write_csv(records: Iterable[BenchRecord], stream: TextIO) -> None:
    stream.write(CSV_HEADER + "\n")
    for r in sorted(records, key=lambda r: (r.grammar_id, r.n)):
        stream.write(
            f"{r.n},{r.grammar_id},{r.time_ms:.3f},{r.sppf_nodes},{r.gss_nodes},{r.descriptors}\n"
        )
