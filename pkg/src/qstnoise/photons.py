"""Seeded photon-count generation.

Randomness comes from :class:`RngStream`, a PCG64 stream keyed by a
``(seed, stream_id)`` pair. Poisson variates are produced by two frozen
algorithms so that draws never depend on the numpy version:

* mean < 10: sequential-search inversion, one uniform per draw;
* mean >= 10: Hoermann's transformed rejection with squeeze (PTRS),
  two uniforms per attempt.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .channel import ChannelParams, crosstalk_rate_per_s, raman_rate_per_s, transmittance
from .errors import InvalidMean
from .quantum import DensityMatrix, SicPovm, born_probabilities

MASK64 = (1 << 64) - 1
INVERSION_CUTOFF = 10.0
MAX_MEAN = 1e9
_TWO_POW_M53 = 2.0 ** -53
_BUFFER = 16


def splitmix64(x: int) -> int:
    """SplitMix64 output function applied to ``x``; a 64-bit bijective mixer."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_stream_id(*indices: int) -> int:
    """Fold integer indices into a 64-bit stream id.

    ``h_0 = 0``, ``h_{k+1} = splitmix64(h_k XOR index_k)``. The harness
    calls it as ``derive_stream_id(scenario, state, length, operator)``.
    """
    h = 0
    for v in indices:
        if v < 0:
            raise ValueError("stream indices must be non-negative")
        h = splitmix64(h ^ (int(v) & MASK64))
    return h


class RngStream:
    """Uniform variates for one ``(seed, stream_id)`` key.

    The stream is stateful: each draw advances it. Two instances built from
    the same key yield the same sequence. Do not share one instance between
    threads.
    """

    __slots__ = ("seed", "stream_id", "_bitgen", "_buf", "_pos")

    def __init__(self, seed: int, stream_id: int = 0):
        if not (0 <= seed <= MASK64 and 0 <= stream_id <= MASK64):
            raise ValueError("seed and stream_id must be unsigned 64-bit integers")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        ss = np.random.SeedSequence([self.seed, self.stream_id])
        self._bitgen = np.random.PCG64(ss)
        self._buf = []
        self._pos = 0

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def uniform(self) -> float:
        """A double in [0, 1) built from the top 53 bits of one raw output."""
        if self._pos == len(self._buf):
            self._buf = self._bitgen.random_raw(_BUFFER).tolist()
            self._pos = 0
        raw = self._buf[self._pos]
        self._pos += 1
        return (raw >> 11) * _TWO_POW_M53

    def uniforms(self, n: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(n)])


def _poisson_inversion(mean: float, rng: RngStream) -> int:
    u = rng.uniform()
    p = math.exp(-mean)
    cdf = p
    k = 0
    while u > cdf:
        k += 1
        p *= mean / k
        if p == 0.0:
            # round-off left u above the attainable CDF
            break
        cdf += p
    return k


def _poisson_ptrs(mean: float, rng: RngStream) -> int:
    slam = math.sqrt(mean)
    loglam = math.log(mean)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)
    log_invalpha = math.log(invalpha)
    while True:
        u = rng.uniform() - 0.5
        v = rng.uniform()
        us = 0.5 - abs(u)
        k = math.floor((2.0 * a / us + b) * u + mean + 0.43) if us > 0 else -1
        if us >= 0.07 and v <= vr:
            return k
        if k < 0 or (us < 0.013 and v > us):
            continue
        if v <= 0.0:
            continue
        lhs = math.log(v) + log_invalpha - math.log(a / (us * us) + b)
        rhs = -mean + k * loglam - math.lgamma(k + 1)
        if lhs <= rhs:
            return k


def poisson_sample(mean: float, rng: RngStream) -> int:
    """One Poisson(``mean``) variate; a zero mean returns 0 without consuming ``rng``."""
    try:
        mean = float(mean)
    except (TypeError, ValueError):
        raise InvalidMean(f"Poisson mean {mean!r} is not a number") from None
    if not math.isfinite(mean) or mean < 0:
        raise InvalidMean(f"Poisson mean must be finite and non-negative, got {mean!r}")
    if mean > MAX_MEAN:
        raise InvalidMean(f"Poisson mean {mean!r} exceeds supported maximum {MAX_MEAN:g}")
    if mean == 0.0:
        return 0
    if mean < INVERSION_CUTOFF:
        return _poisson_inversion(mean, rng)
    return _poisson_ptrs(mean, rng)


def round_half_up(x: float) -> int:
    """Nearest integer, ties away from zero (inputs here are non-negative)."""
    if x < 0:
        return -round_half_up(-x)
    r = math.floor(x)
    return r + 1 if x - r >= 0.5 else r


@dataclass(frozen=True)
class SourceParams:
    """Mean photon number per measurement setting at the fiber input."""

    mean_photons: float

    def __post_init__(self):
        if not math.isfinite(self.mean_photons) or self.mean_photons < 0:
            raise ValueError(f"mean_photons must be finite and >= 0, got {self.mean_photons!r}")


@dataclass(frozen=True)
class CountVector:
    counts: Tuple[int, int, int, int]

    def __post_init__(self):
        c = tuple(int(v) for v in self.counts)
        if len(c) != 4:
            raise ValueError("a count vector has exactly four entries")
        if any(v < 0 for v in c):
            raise ValueError("photon counts must be non-negative")
        object.__setattr__(self, "counts", c)

    def __iter__(self):
        return iter(self.counts)

    def __getitem__(self, j):
        return self.counts[j]

    def __len__(self):
        return 4

    def as_array(self) -> np.ndarray:
        return np.array(self.counts, dtype=float)


RngArg = Union[RngStream, Sequence[RngStream]]


def _per_operator(rng: RngArg):
    """Accept one shared stream or four per-operator streams."""
    if isinstance(rng, RngStream):
        return (rng,) * 4
    streams = tuple(rng)
    if len(streams) != 4:
        raise ValueError("need one RngStream or exactly four")
    return streams


def expected_counts(
    rho: DensityMatrix, source: SourceParams, eta: float, povm: SicPovm
) -> CountVector:
    """Noise-free Born-rule counts, rounded to integers."""
    probs = born_probabilities(rho, povm)
    n = source.mean_photons * eta
    return CountVector(tuple(round_half_up(n * max(p, 0.0)) for p in probs))


def simulate_counts_shot(
    rho_in: DensityMatrix, source: SourceParams, eta: float, povm: SicPovm, rng: RngArg
) -> CountVector:
    """Shot-noise counts: an independent Poisson total per operator, times ``Tr(M_j rho)``."""
    probs = born_probabilities(rho_in, povm)
    mean = source.mean_photons * eta
    out = []
    for p, stream in zip(probs, _per_operator(rng)):
        total = poisson_sample(mean, stream)
        out.append(round_half_up(total * max(p, 0.0)))
    return CountVector(tuple(out))


def simulate_counts_full(
    rho_in: DensityMatrix,
    source: SourceParams,
    channel: ChannelParams,
    povm: SicPovm,
    rng: RngArg,
) -> CountVector:
    """Shot noise plus half of the Raman and crosstalk photons landing on each operator.

    Per operator the stream is consumed as: signal total, Raman count,
    crosstalk count. Zero-mean draws consume nothing, so with no classical
    power this reproduces :func:`simulate_counts_shot` exactly.
    """
    probs = born_probabilities(rho_in, povm)
    mean = source.mean_photons * transmittance(channel)
    raman_mean = channel.tau_s * raman_rate_per_s(channel)
    cross_mean = channel.tau_s * crosstalk_rate_per_s(channel)
    out = []
    for p, stream in zip(probs, _per_operator(rng)):
        total = poisson_sample(mean, stream)
        n_raman = poisson_sample(raman_mean, stream)
        n_cross = poisson_sample(cross_mean, stream)
        out.append(round_half_up(total * max(p, 0.0) + 0.5 * (n_raman + n_cross)))
    return CountVector(tuple(out))
