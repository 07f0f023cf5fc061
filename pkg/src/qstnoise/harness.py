"""Monte Carlo sweeps of reconstruction fidelity over fiber length.

Every trial owns its random streams, keyed by ``(scenario, state, length,
operator)`` indices, so results do not depend on how trials are scheduled
across workers.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .channel import ChannelParams, transmittance
from .estimator import EstimatorOptions, reconstruct
from .photons import (
    RngStream,
    SourceParams,
    derive_stream_id,
    simulate_counts_full,
    simulate_counts_shot,
    splitmix64,
)
from .quantum import PureStateAngles, fidelity, pure_state_density, sic_povm

DEFAULT_LENGTHS_KM = tuple(float(L) for L in range(0, 201, 10))
RESTART_SLOT = 4


class NoiseMode(str, enum.Enum):
    SHOT_ONLY = "shot_only"
    FULL_NOISE = "full_noise"


@dataclass(frozen=True)
class StateSample:
    states: Tuple[PureStateAngles, ...]

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)


@dataclass(frozen=True)
class ScenarioConfig:
    """One fidelity-versus-length curve.

    ``channel_template`` carries everything but the length, which is taken
    from ``lengths_km`` point by point. ``n_theta``/``n_phi`` size the input
    state grid.
    """

    label: str
    source: SourceParams
    channel_template: ChannelParams = field(default_factory=ChannelParams)
    lengths_km: Tuple[float, ...] = DEFAULT_LENGTHS_KM
    noise_mode: NoiseMode = NoiseMode.FULL_NOISE
    master_seed: int = 42
    estimator_opts: EstimatorOptions = field(default_factory=EstimatorOptions)
    n_theta: int = 10
    n_phi: int = 20

    def __post_init__(self):
        if not self.label or not self.label.strip():
            raise ValueError("scenario label must be non-empty")
        if any(c in self.label for c in ",\n\r\""):
            raise ValueError("scenario label must not contain commas, quotes or newlines")
        lengths = tuple(float(L) for L in self.lengths_km)
        if not lengths:
            raise ValueError("at least one length is required")
        if any(not math.isfinite(L) or L < 0 for L in lengths):
            raise ValueError("lengths must be finite and non-negative")
        if any(b <= a for a, b in zip(lengths, lengths[1:])):
            raise ValueError("lengths must be strictly increasing")
        object.__setattr__(self, "lengths_km", lengths)
        object.__setattr__(self, "noise_mode", NoiseMode(self.noise_mode))
        if not self.source.mean_photons > 0:
            raise ValueError("mean_photons must be positive for reconstruction")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if self.n_theta < 1 or self.n_phi < 1:
            raise ValueError("n_theta and n_phi must be >= 1")


@dataclass(frozen=True)
class SweepResult:
    config: ScenarioConfig
    lengths_km: Tuple[float, ...]
    mean_fidelity: Tuple[float, ...]
    sd_fidelity: Tuple[float, ...]
    n_states: int
    per_state: Optional[Tuple[Tuple[float, ...], ...]] = None

    def rows(self):
        return zip(self.lengths_km, self.mean_fidelity, self.sd_fidelity)


def generate_state_sample(n_theta: int = 10, n_phi: int = 20) -> StateSample:
    """Midpoint grid in theta times uniform grid in phi, theta-major."""
    if n_theta < 1 or n_phi < 1:
        raise ValueError("n_theta and n_phi must be >= 1")
    states = []
    for i in range(n_theta):
        theta = math.pi * (i + 0.5) / n_theta
        for k in range(n_phi):
            states.append(PureStateAngles(theta, 2 * math.pi * k / n_phi))
    return StateSample(tuple(states))


def trial_streams(master_seed: int, scenario: int, state: int, length: int):
    return [
        RngStream(master_seed, derive_stream_id(scenario, state, length, j)) for j in range(4)
    ]


def restart_seed(master_seed: int, scenario: int, state: int, length: int) -> int:
    return splitmix64(master_seed ^ derive_stream_id(scenario, state, length, RESTART_SLOT))


def run_trial(
    state: PureStateAngles,
    config: ScenarioConfig,
    L: float,
    indices: Tuple[int, int, int],
    kernel: Optional[str] = None,
) -> float:
    """Simulate, reconstruct and score one input state at fiber length ``L``.

    ``indices`` is ``(scenario_index, state_index, length_index)``.
    """
    sc, st, li = indices
    povm = sic_povm()
    rho_in = pure_state_density(state)
    channel = config.channel_template.with_length(L)
    eta = transmittance(channel)
    streams = trial_streams(config.master_seed, sc, st, li)
    if config.noise_mode is NoiseMode.SHOT_ONLY:
        counts = simulate_counts_shot(rho_in, config.source, eta, povm, streams)
    else:
        counts = simulate_counts_full(rho_in, config.source, channel, povm, streams)
    opts = EstimatorOptions(
        restarts=config.estimator_opts.restarts,
        max_iterations_per_restart=config.estimator_opts.max_iterations_per_restart,
        objective_tolerance=config.estimator_opts.objective_tolerance,
        initial_simplex_scale=config.estimator_opts.initial_simplex_scale,
        rng_seed_for_restarts=restart_seed(config.master_seed, sc, st, li),
    )
    result = reconstruct(counts, config.source, eta, povm, opts, kernel=kernel)
    return fidelity(rho_in, result.rho_hat)


def _length_task(args):
    config, states, scenario_index, length_index, kernel = args
    L = config.lengths_km[length_index]
    return tuple(
        run_trial(s, config, L, (scenario_index, i, length_index), kernel=kernel)
        for i, s in enumerate(states)
    )


def mean_and_sd(values: Sequence[float]) -> Tuple[float, float]:
    """Mean and sample SD (n - 1); the SD of a single value is 0.

    ``math.fsum`` keeps both exactly rounded, hence platform independent.
    """
    n = len(values)
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    ss = math.fsum((v - mean) ** 2 for v in values)
    return mean, math.sqrt(ss / (n - 1))


def run_sweep(
    config: ScenarioConfig,
    sample: Optional[StateSample] = None,
    scenario_index: int = 0,
    workers: int = 1,
    keep_per_state: bool = True,
    kernel: Optional[str] = None,
) -> SweepResult:
    """Average fidelity and its sample SD at every length of ``config``."""
    if sample is None:
        sample = generate_state_sample(config.n_theta, config.n_phi)
    states = tuple(sample)
    if not states:
        raise ValueError("state sample is empty")
    tasks = [
        (config, states, scenario_index, li, kernel) for li in range(len(config.lengths_km))
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_length = list(pool.map(_length_task, tasks))
    else:
        per_length = [_length_task(t) for t in tasks]

    means, sds = [], []
    for fids in per_length:
        m, s = mean_and_sd(fids)
        means.append(m)
        sds.append(s)
    return SweepResult(
        config=config,
        lengths_km=config.lengths_km,
        mean_fidelity=tuple(means),
        sd_fidelity=tuple(sds),
        n_states=len(states),
        per_state=tuple(per_length) if keep_per_state else None,
    )


def run_scenarios(
    configs: Sequence[ScenarioConfig], workers: int = 1, kernel: Optional[str] = None
) -> List[SweepResult]:
    """Sweep several scenarios; scenario ``k`` uses stream index ``k``."""
    return [
        run_sweep(c, scenario_index=k, workers=workers, kernel=kernel)
        for k, c in enumerate(configs)
    ]
