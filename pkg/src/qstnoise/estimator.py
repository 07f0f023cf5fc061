"""Least-squares state reconstruction over the four Cholesky parameters."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import _backend
from .errors import DegenerateParameters, NoValidResult
from .photons import RngStream, SourceParams
from .quantum import (
    DEGENERATE_NORM,
    CholeskyParams,
    DensityMatrix,
    SicPovm,
    born_probabilities,
    density_from_cholesky,
)

PENALTY = 1e30
MIXED_START = (math.sqrt(0.5), math.sqrt(0.5), 0.0, 0.0)


@dataclass(frozen=True)
class EstimatorOptions:
    restarts: int = 9
    max_iterations_per_restart: int = 2000
    objective_tolerance: float = 1e-10
    initial_simplex_scale: float = 0.25
    rng_seed_for_restarts: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations_per_restart < 1:
            raise ValueError("max_iterations_per_restart must be >= 1")
        if not self.objective_tolerance > 0:
            raise ValueError("objective_tolerance must be positive")
        if not self.initial_simplex_scale > 0:
            raise ValueError("initial_simplex_scale must be positive")
        if self.rng_seed_for_restarts < 0:
            raise ValueError("rng_seed_for_restarts must be non-negative")


@dataclass(frozen=True)
class ReconstructionResult:
    rho_hat: DensityMatrix
    t_hat: CholeskyParams
    objective_value: float
    converged: bool
    restarts_used: int
    restart_objectives: Tuple[float, ...] = ()


def _params_tuple(t) -> Tuple[float, float, float, float]:
    if isinstance(t, CholeskyParams):
        return t.as_tuple()
    t1, t2, t3, t4 = (float(v) for v in t)
    return (t1, t2, t3, t4)


def model_counts(t, source: SourceParams, eta: float, povm: SicPovm) -> np.ndarray:
    """Unrounded Born-rule counts ``N * eta * Tr(M_j rho(t))``."""
    if not isinstance(t, CholeskyParams):
        vals = _params_tuple(t)
        if sum(v * v for v in vals) <= DEGENERATE_NORM:
            raise DegenerateParameters("Cholesky parameters at the origin")
        t = CholeskyParams(*vals)
    rho = density_from_cholesky(t)
    return source.mean_photons * eta * born_probabilities(rho, povm)


def ls_objective(t, measured, source: SourceParams, eta: float, povm: SicPovm) -> float:
    """Squared distance between model and measured counts; ``PENALTY`` at the origin."""
    try:
        model = model_counts(t, source, eta, povm)
    except DegenerateParameters:
        return PENALTY
    m = np.asarray(list(measured), dtype=float)
    return float(np.sum((model - m) ** 2))


def restart_points(opts: EstimatorOptions) -> list:
    """Starting points: the maximally mixed state, then uniform draws in [-1, 1]^4."""
    rng = RngStream(opts.rng_seed_for_restarts, 0)
    starts = [list(MIXED_START)]
    for _ in range(opts.restarts - 1):
        starts.append([2.0 * rng.uniform() - 1.0 for _ in range(4)])
    return starts


def reconstruct(
    measured,
    source: SourceParams,
    eta: float,
    povm: SicPovm,
    opts: Optional[EstimatorOptions] = None,
    kernel: Optional[str] = None,
) -> ReconstructionResult:
    """Fit ``rho`` to measured counts by multi-start simplex descent.

    The observer is assumed to know the source mean photon number and the
    fiber transmittance; channel noise is not part of the model. The best of
    all restarts is returned.
    """
    opts = opts or EstimatorOptions()
    m = [float(v) for v in measured]
    if len(m) != 4 or not all(math.isfinite(v) for v in m):
        raise ValueError("measured counts must be four finite numbers")
    scale = source.mean_photons * eta
    if not (math.isfinite(scale) and scale > 0):
        raise ValueError("mean_photons * eta must be positive")

    k = _backend.get_kernel(kernel)
    xs, fs, conv, _ = k.fit_restarts(
        m,
        povm.pauli_coefficients().tolist(),
        scale,
        restart_points(opts),
        opts.max_iterations_per_restart,
        opts.objective_tolerance,
        opts.initial_simplex_scale,
    )
    best = min(range(len(fs)), key=fs.__getitem__)
    if not fs[best] < PENALTY:
        raise NoValidResult("every restart ended at the degeneracy penalty")
    t_hat = CholeskyParams(*xs[best])
    return ReconstructionResult(
        rho_hat=density_from_cholesky(t_hat),
        t_hat=t_hat,
        objective_value=float(fs[best]),
        converged=bool(conv[best]),
        restarts_used=len(fs),
        restart_objectives=tuple(float(f) for f in fs),
    )
