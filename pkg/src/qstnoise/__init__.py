"""Quantum state tomography of polarization qubits over noisy fiber links.

Photon counts for a tetrahedral SIC-POVM are simulated under shot noise,
fiber loss, forward Raman scattering and WDM crosstalk, then inverted by
least squares over a Cholesky parameterization. Fidelity against the
input state is averaged over a grid of pure states as a function of fiber
length.
"""
from ._backend import NAME as KERNEL_BACKEND
from .channel import (
    ChannelParams,
    crosstalk_rate_per_s,
    mean_noise_photons_per_window,
    raman_power_watts,
    raman_rate_per_s,
    transmittance,
)
from .errors import DegenerateParameters, InvalidMean, NoValidResult, ParseError, QstError
from .estimator import (
    EstimatorOptions,
    ReconstructionResult,
    ls_objective,
    model_counts,
    reconstruct,
)
from .harness import (
    NoiseMode,
    ScenarioConfig,
    StateSample,
    SweepResult,
    generate_state_sample,
    run_sweep,
    run_trial,
)
from .photons import (
    CountVector,
    RngStream,
    SourceParams,
    expected_counts,
    poisson_sample,
    simulate_counts_full,
    simulate_counts_shot,
)
from .quantum import (
    CholeskyParams,
    DensityMatrix,
    PureStateAngles,
    SicPovm,
    born_probabilities,
    density_from_cholesky,
    fidelity,
    pure_state_density,
    sic_povm,
)

__version__ = "0.1.0"
