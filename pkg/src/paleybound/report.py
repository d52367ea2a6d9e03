"""Per-prime bound pipeline, CSV emission, and power-law fitting.

A BoundsRecord collects every bound for one prime: the analytic theta column
sqrt(p), the solved block-diagonal relaxation value, the exact (or budget-
limited) clique number, and the closed-form comparison bound.  Reals are
printed to 3 decimals in the CSV.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field, fields

import numpy as np

from .clique import DEFAULT_BUDGET, clique_number
from .model import reduce_and_assemble
from .orbits import enumerate_orbits
from .paley import PaleyGraph, build_graph, hp_bound, is_prime, theta_eigenvalue
from .solver import SolverConfig, SolverStatus, solve

__all__ = [
    "BoundsRecord",
    "RunConfig",
    "FitResult",
    "run_prime",
    "run_range",
    "primes_in_range",
    "write_csv",
    "read_csv",
    "fit_power",
]

CSV_COLUMNS = (
    "p",
    "theta",
    "l2",
    "omega",
    "omega_certified",
    "hp",
    "m",
    "iterations",
    "wall_time_s",
)


@dataclass(frozen=True)
class BoundsRecord:
    p: int
    theta: float
    l2: float
    omega: int
    omega_certified: bool
    hp: float
    m: int
    iterations: int
    wall_time_s: float
    solver_status: str = field(default=SolverStatus.OPTIMAL.value, compare=False)

    def csv_row(self) -> list[str]:
        return [
            str(self.p),
            f"{self.theta:.3f}",
            f"{self.l2:.3f}" if math.isfinite(self.l2) else "nan",
            str(self.omega),
            "true" if self.omega_certified else "false",
            f"{self.hp:.3f}",
            str(self.m),
            str(self.iterations),
            f"{self.wall_time_s:.3f}",
        ]


@dataclass(frozen=True)
class RunConfig:
    solver: SolverConfig = field(default_factory=SolverConfig)
    clique_budget: int = DEFAULT_BUDGET


def run_prime(p: int, config: RunConfig | None = None) -> BoundsRecord:
    """Full pipeline for one prime: graph, orbits, assembly, solve, clique."""
    config = config or RunConfig()
    started = time.perf_counter()
    g = build_graph(p)
    orbits = enumerate_orbits(g)
    inst = reduce_and_assemble(g, orbits)
    sol = solve(inst, config.solver)
    l2 = sol.value if sol.status is SolverStatus.OPTIMAL else math.nan
    cl = clique_number(g, budget=config.clique_budget)
    return BoundsRecord(
        p=p,
        theta=theta_eigenvalue(g),
        l2=l2,
        omega=cl.omega,
        omega_certified=cl.certified,
        hp=hp_bound(p),
        m=orbits.m,
        iterations=sol.iterations,
        wall_time_s=time.perf_counter() - started,
        solver_status=sol.status.value,
    )


def primes_in_range(p_min: int, p_max: int) -> list[int]:
    if p_min > p_max:
        raise ValueError(f"empty range: [{p_min}, {p_max}]")
    return [p for p in range(max(p_min, 5), p_max + 1) if p % 4 == 1 and is_prime(p)]


def run_range(p_min: int, p_max: int, config: RunConfig | None = None, csv_path=None) -> list[BoundsRecord]:
    """All primes = 1 (mod 4) in [p_min, p_max], ascending; failures become
    rows with nan values and a non-optimal status, and the run continues."""
    records = []
    for p in primes_in_range(p_min, p_max):
        try:
            records.append(run_prime(p, config))
        except Exception as exc:  # pragma: no cover - defensive per-prime isolation
            records.append(
                BoundsRecord(
                    p=p,
                    theta=theta_eigenvalue(p),
                    l2=math.nan,
                    omega=0,
                    omega_certified=False,
                    hp=hp_bound(p),
                    m=0,
                    iterations=0,
                    wall_time_s=0.0,
                    solver_status=f"error: {exc}",
                )
            )
    if csv_path is not None:
        write_csv(records, csv_path)
    return records


def write_csv(records: list[BoundsRecord], path) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.csv_row())


def read_csv(path) -> list[BoundsRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header: {reader.fieldnames}")
        out = []
        for row in reader:
            out.append(
                BoundsRecord(
                    p=int(row["p"]),
                    theta=float(row["theta"]),
                    l2=float(row["l2"]),
                    omega=int(row["omega"]),
                    omega_certified=row["omega_certified"] == "true",
                    hp=float(row["hp"]),
                    m=int(row["m"]),
                    iterations=int(row["iterations"]),
                    wall_time_s=float(row["wall_time_s"]),
                )
            )
        return out


@dataclass(frozen=True)
class FitResult:
    """Least-squares power law value = a * p^b fitted in log-log space."""

    a: float
    b: float
    r2: float
    n_points: int


def fit_power(records: list[BoundsRecord], column: str) -> FitResult:
    """Ordinary least squares of log(column) on log(p)."""
    if column not in {f.name for f in fields(BoundsRecord)}:
        raise ValueError(f"unknown column {column!r}")
    xs, ys = [], []
    for rec in records:
        v = float(getattr(rec, column))
        if math.isfinite(v) and v > 0:
            xs.append(math.log(rec.p))
            ys.append(math.log(v))
    if len(xs) < 3:
        raise ValueError(f"need at least 3 positive values in {column!r}, have {len(xs)}")
    x = np.array(xs)
    y = np.array(ys)
    b, log_a = np.polyfit(x, y, 1)
    resid = y - (b * x + log_a)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(resid @ resid) / ss_tot if ss_tot > 0 else 1.0
    return FitResult(a=float(np.exp(log_a)), b=float(b), r2=r2, n_points=len(xs))
