"""Tabular data behind each figure, plus single-shot tables for scripting.

Every producer returns a :class:`Table`; serialization lives in :mod:`fockmetric.cli`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import dynamics, gaussian_ref, hilbert, measurement, metrology

DEFAULT_OMEGA = (0.05, 1.0, 200, True)
FIG2_LEVELS = (0, 3, 5, 10)
FIG3_LEVELS = (3, 5, 10)
FIG4_OMEGAS = (0.05, 0.1, 0.5)
FIG4_LEVELS = (1, 3, 5, 7, 10)
FIG6_MAX_N = 5


@dataclass(frozen=True)
class Table:
    command: str
    columns: tuple[str, ...]
    rows: list[tuple]
    params: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        k = self.columns.index(name)
        return np.array([r[k] for r in self.rows], dtype=float)


def omega_grid(start: float = 0.05, stop: float = 1.0, count: int = 200, log: bool = True) -> np.ndarray:
    if not (start > 0 and stop > 0):
        raise ValueError("frequency grid must be strictly positive")
    if count < 2:
        raise ValueError("frequency sweep needs at least 2 points")
    if stop <= start:
        raise ValueError("frequency grid stop must exceed start")
    return np.geomspace(start, stop, count) if log else np.linspace(start, stop, count)


def _sweep(fn: Callable, items: Iterable, workers: int | None = None) -> list:
    # ordered map: rows come back in grid order regardless of completion order
    items = list(items)
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _grid_params(omegas: np.ndarray) -> dict:
    return {"omega_start": float(omegas[0]), "omega_stop": float(omegas[-1]), "omega_count": int(len(omegas))}


def fig1(n_max: int = 10) -> Table:
    rows = [(n, gaussian_ref.ng_degree_fock(n)) for n in range(n_max + 1)]
    return Table("fig1", ("n", "delta_ng"), rows, {"n_max": n_max})


def fig2(omegas: Sequence[float] | None = None, workers: int | None = None) -> Table:
    """QFI of |0>, |3>, |5>, |10> and of the Gaussian reference of |10> (close to 1/omega^2)."""
    omegas = np.asarray(omegas if omegas is not None else omega_grid(*DEFAULT_OMEGA), dtype=float)

    def row(w):
        fock = tuple(metrology.qfi_fock_closed(n, w).qfi for n in FIG2_LEVELS)
        return (float(w),) + fock + (metrology.qfi_gaussian_fock(FIG2_LEVELS[-1], w).qfi,)

    cols = ("omega",) + tuple(f"F_n{n}" for n in FIG2_LEVELS) + ("F_gauss",)
    params = _grid_params(omegas) | {"levels": list(FIG2_LEVELS), "gauss_level": FIG2_LEVELS[-1]}
    return Table("fig2", cols, _sweep(row, omegas, workers), params)


def fig3(omegas: Sequence[float] | None = None, levels: Sequence[int] = FIG3_LEVELS, workers: int | None = None) -> Table:
    omegas = np.asarray(omegas if omegas is not None else omega_grid(*DEFAULT_OMEGA), dtype=float)
    levels = tuple(levels)

    def row(w):
        return (float(w),) + tuple(metrology.qfi_per_energy(n, w) for n in levels)

    cols = ("omega",) + tuple(f"R_n{n}" for n in levels)
    return Table("fig3", cols, _sweep(row, omegas, workers), _grid_params(omegas) | {"levels": list(levels)})


def fig4(omegas: Sequence[float] = FIG4_OMEGAS, levels: Sequence[int] = FIG4_LEVELS) -> Table:
    rows = [
        (float(w), n, gaussian_ref.ng_degree_fock(n), metrology.qfi_fock_closed(n, w).qfi)
        for w in omegas
        for n in levels
    ]
    params = {"omegas": [float(w) for w in omegas], "levels": list(levels)}
    return Table("fig4", ("omega", "n", "delta_ng", "qfi"), rows, params)


def fig5(
    gamma: float = 0.1,
    m: int = 1,
    omega_s: float = 1.0,
    omega_a: float = 1.0,
    t_count: int = 201,
    t_stop: float | None = None,
    workers: int | None = None,
    command: str = "fig5",
) -> Table:
    """Transfer-protocol trace; by default the grid ends at the resonant swap time."""
    stop = t_stop if t_stop is not None else math.pi / (2 * gamma)
    cfg = dynamics.ProtocolConfig(omega_s, omega_a, gamma, m, t_grid=np.linspace(0.0, stop, t_count))
    trace = dynamics.run_protocol(cfg, max_workers=workers)
    swap = dynamics.find_swap_time(cfg, trace)
    params = {
        "gamma": gamma, "m": m, "omega_s": omega_s, "omega_a": omega_a,
        "t_stop": stop, "t_count": t_count,
        "swap_time": swap.t_star, "swap_fidelity": swap.fidelity, "swap_reached": swap.reached,
    }
    return Table(command, tuple(trace.columns), [tuple(r) for r in trace.rows], params)


def fig6(omegas: Sequence[float] | None = None, n_max: int = FIG6_MAX_N, workers: int | None = None) -> Table:
    """Superposition QFI for levels {0..N-1}, N = 1..n_max: cross-term-free and exact columns."""
    omegas = np.asarray(omegas if omegas is not None else omega_grid(*DEFAULT_OMEGA), dtype=float)
    sizes = range(1, n_max + 1)

    def row(w):
        formula = tuple(metrology.qfi_superposition_paper(range(N), w).qfi for N in sizes)
        exact = tuple(metrology.qfi_superposition_exact(range(N), w).qfi for N in sizes)
        return (float(w),) + formula + exact

    cols = ("omega",) + tuple(f"formula_N{N}" for N in sizes) + tuple(f"exact_N{N}" for N in sizes)
    return Table("fig6", cols, _sweep(row, omegas, workers), _grid_params(omegas) | {"n_max": n_max})


def qfi_table(levels: Sequence[int], omega: float, n_meas: int = 1) -> Table:
    rows = []
    for n in levels:
        closed = metrology.qfi_fock_closed(n, omega).with_crb(n_meas)
        numeric = metrology.qfi_pure_numeric(n, omega)
        gauss = metrology.qfi_gaussian_fock(n, omega)
        rows.append((n, float(omega), closed.qfi, numeric.qfi, gauss.qfi, closed.crb[1]))
    cols = ("n", "omega", "qfi_closed", "qfi_numeric", "qfi_gaussian", "crb")
    return Table("qfi", cols, rows, {"levels": list(levels), "omega": omega, "n_meas": n_meas})


def ng_table(levels: Sequence[int], omega: float = 1.0, dim: int = 64) -> Table:
    rows = [
        (n, gaussian_ref.ng_degree_fock(n), gaussian_ref.ng_degree(hilbert.fock_density(n, omega, dim)))
        for n in levels
    ]
    return Table("ng", ("n", "delta_ng_closed", "delta_ng_entropy"), rows,
                 {"levels": list(levels), "omega": omega, "dim": dim})


def measure_table(p: float, omega: float = 1.0, dim: int = measurement.DEFAULT_DIM) -> Table:
    probe = measurement.prepared_probe_qfi(p, omega, dim)
    diag = np.diagonal(probe.state.matrix).real
    mean_n = float(hilbert.expectation(hilbert.number_matrix(dim), probe.state).real)
    row = (p, float(omega), float(diag[0]), float(diag[1]), mean_n, probe.ng_degree,
           probe.qfi, probe.flagged)
    cols = ("p", "omega", "pop0", "pop1", "mean_photon", "delta_ng", "qfi", "flagged")
    return Table("measure", cols, [row], {"p": p, "omega": omega, "dim": dim})
