"""Entanglement decay curves, log-derivatives, and ensemble statistics.

A sweep evolves one initial state across a grid of dimensionless gt
values and certifies E at every point. The logarithmic derivative
eta = d ln E / d(gt) is the relative decay rate: constant for pure
exponential decay, tending to zero when E approaches a nonzero
asymptote. Ensemble helpers aggregate eta pointwise over seeded state
families with mean and mu +/- sqrt(variance) bands.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import asymptotic_map, evolve
from .gmn import SdpSettings, SolverFailure, genuine_negativity
from .states import pure_to_density

# below this E, ln E is solver noise and eta is reported undefined (NaN)
UNDEFINED_FLOOR = 1e-8


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing dimensionless gt values."""

    gt_values: np.ndarray

    def __post_init__(self):
        gt = np.asarray(self.gt_values, dtype=float)
        if gt.ndim != 1 or gt.size < 1:
            raise ValueError("grid must be a nonempty 1-d sequence")
        if gt[0] < 0 or np.any(np.diff(gt) <= 0):
            raise ValueError("grid must be strictly increasing and start at gt >= 0")
        gt.flags.writeable = False
        object.__setattr__(self, "gt_values", gt)

    def __len__(self):
        return self.gt_values.size

    @classmethod
    def uniform(cls, start=0.0, stop=2.0, count=41):
        if count < 2:
            raise ValueError("count must be >= 2")
        return cls(np.linspace(start, stop, count))

    @classmethod
    def default(cls):
        return cls.uniform(0.0, 2.0, 41)

    @classmethod
    def long_horizon(cls, count=41):
        """Extended grid to gt = 5 for convergence studies."""
        return cls.uniform(0.0, 5.0, count)


@dataclass(frozen=True)
class EntanglementSeries:
    """E(t) and eta(t) for one initial state; NaN marks undefined eta."""

    grid: TimeGrid
    e_values: np.ndarray
    eta_values: np.ndarray
    gaps: np.ndarray
    state_label: str = "rho"


@dataclass(frozen=True)
class EnsembleStats:
    """Pointwise eta statistics; bands are mean +/- sqrt(variance)."""

    grid: TimeGrid
    mean: np.ndarray
    variance: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    n: int
    n_effective: np.ndarray


def log_derivative(e_values, gt_values):
    """Finite-difference d ln E / d(gt) with undefined points as NaN.

    Central differences on interior points, second-order one-sided at
    segment ends (exact for log-linear decay). Points with
    E <= UNDEFINED_FLOOR, and valid runs shorter than two points, give
    NaN.
    """
    e = np.asarray(e_values, dtype=float)
    gt = np.asarray(gt_values, dtype=float)
    if e.shape != gt.shape:
        raise ValueError("e_values and gt_values must have matching shapes")
    eta = np.full(e.shape, math.nan)
    valid = e > UNDEFINED_FLOOR
    idx = np.flatnonzero(np.diff(np.concatenate(([False], valid, [False])).astype(int)))
    for start, stop in zip(idx[::2], idx[1::2]):
        ln = np.log(e[start:stop])
        if stop - start >= 3:
            eta[start:stop] = np.gradient(ln, gt[start:stop], edge_order=2)
        elif stop - start == 2:
            eta[start:stop] = (ln[1] - ln[0]) / (gt[stop - 1] - gt[start])
    return eta


def sweep(rho0, grid=None, settings=None, label=None):
    """Certified E and eta across the grid for one initial state."""
    grid = grid or TimeGrid.default()
    settings = settings or SdpSettings()
    label = label or rho0.label
    e_values = np.empty(len(grid))
    gaps = np.empty(len(grid))
    for k, gt in enumerate(grid.gt_values):
        try:
            res = genuine_negativity(evolve(rho0, gt), settings)
        except SolverFailure as exc:
            raise SolverFailure(f"{exc} (state {label}, grid point gt={gt:g})",
                                exc.status, exc.result) from exc
        e_values[k] = res.value
        gaps[k] = res.duality_gap
    eta = log_derivative(e_values, grid.gt_values)
    return EntanglementSeries(grid=grid, e_values=e_values, eta_values=eta,
                              gaps=gaps, state_label=label)


def _sweep_task(args):
    psi, grid, settings = args
    return sweep(pure_to_density(psi), grid, settings)


def _asymptotic_task(args):
    psi, settings = args
    res = genuine_negativity(asymptotic_map(pure_to_density(psi)), settings)
    return psi.label, res.value, res.duality_gap


def _run_tasks(fn, tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def eta_statistics(series_list, grid):
    """Pointwise mean/variance of eta over an ensemble, NaN-excluded.

    Variance is the unbiased sample variance (divisor n-1); points with
    a single defined eta get variance 0, points with none get NaN
    statistics. The per-point count of defined values is n_effective.
    """
    etas = np.vstack([s.eta_values for s in series_list])
    defined = ~np.isnan(etas)
    n_eff = defined.sum(axis=0)
    mean = np.full(len(grid), math.nan)
    var = np.full(len(grid), math.nan)
    for k in range(len(grid)):
        col = etas[defined[:, k], k]
        if col.size >= 1:
            mean[k] = col.mean()
            var[k] = col.var(ddof=1) if col.size >= 2 else 0.0
    band = np.sqrt(var)
    return EnsembleStats(grid=grid, mean=mean, variance=var,
                         ci_low=mean - band, ci_high=mean + band,
                         n=len(series_list), n_effective=n_eff)


def ensemble_sweep(pure_states, grid=None, settings=None, jobs=1):
    """Per-state sweeps plus pointwise eta statistics over the ensemble."""
    if not pure_states:
        raise ValueError("ensemble must be nonempty")
    grid = grid or TimeGrid.default()
    settings = settings or SdpSettings()
    tasks = [(psi, grid, settings) for psi in pure_states]
    series = _run_tasks(_sweep_task, tasks, jobs)
    return series, eta_statistics(series, grid)


def asymptotic_ensemble(pure_states, settings=None, jobs=1):
    """E at t = infinity for each state: (label, E_inf, duality_gap) tuples."""
    if not pure_states:
        raise ValueError("ensemble must be nonempty")
    settings = settings or SdpSettings()
    tasks = [(psi, settings) for psi in pure_states]
    return _run_tasks(_asymptotic_task, tasks, jobs)
