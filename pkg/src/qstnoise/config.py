"""Flat ``key = value`` scenario files and the built-in figure presets.

Example::

    # 1 mW co-propagating carrier, Raman noise only
    scenario.label = raman_1mW
    source.mean_photons = 500
    channel.p_in_mw = 1
    sweep.lengths_km = 0, 10, 20, 30
    sweep.noise_mode = full_noise

Omitted channel keys fall back to the :class:`~qstnoise.channel.ChannelParams`
defaults. Unknown or repeated keys are errors.
"""
from __future__ import annotations

import dataclasses
import math
from typing import Callable, Dict, List, Tuple

from .channel import ChannelParams
from .errors import ParseError
from .estimator import EstimatorOptions
from .harness import DEFAULT_LENGTHS_KM, NoiseMode, ScenarioConfig
from .photons import SourceParams

REQUIRED_KEYS = ("scenario.label", "source.mean_photons")

# key -> (ChannelParams field, conversion factor from file units)
_CHANNEL_KEYS = {
    "channel.gamma_db_per_km": "gamma_db_per_km",
    "channel.lambda_q_nm": "lambda_q_nm",
    "channel.delta_lambda_nm": "delta_lambda_nm",
    "channel.raman_cross_section_per_km_nm": "raman_cross_section_per_km_nm",
    "channel.tau_s": "tau_s",
    "channel.p_in_mw": "p_in_watts",
    "channel.xi_per_km": "xi_per_km",
}

KNOWN_KEYS = (
    "scenario.label",
    "source.mean_photons",
    *_CHANNEL_KEYS,
    "sweep.lengths_km",
    "sweep.noise_mode",
    "sample.n_theta",
    "sample.n_phi",
    "seed.master",
    "estimator.restarts",
)

FIG2_FIG3_MEAN_PHOTONS = 500.0


def _float(value: str) -> float:
    try:
        x = float(value)
    except ValueError:
        raise ValueError(f"not a number: {value!r}") from None
    if not math.isfinite(x):
        raise ValueError("must be finite")
    return x


def _nonneg(value: str) -> float:
    x = _float(value)
    if x < 0:
        raise ValueError(f"must be non-negative, got {x!r}")
    return x


def _positive(value: str) -> float:
    x = _float(value)
    if not x > 0:
        raise ValueError(f"must be positive, got {x!r}")
    return x


def _int(lo: int, hi: int = None) -> Callable[[str], int]:
    def conv(value: str) -> int:
        try:
            n = int(value)
        except ValueError:
            raise ValueError(f"not an integer: {value!r}") from None
        if n < lo or (hi is not None and n > hi):
            raise ValueError(f"must be in [{lo}, {hi if hi is not None else 'inf'}], got {n}")
        return n

    return conv


def _lengths(value: str) -> Tuple[float, ...]:
    parts = [p.strip() for p in value.split(",")]
    if not parts or any(not p for p in parts):
        raise ValueError("expected a comma-separated list of lengths")
    out = tuple(_nonneg(p) for p in parts)
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ValueError("lengths must be strictly increasing")
    return out


def _noise_mode(value: str) -> NoiseMode:
    try:
        return NoiseMode(value)
    except ValueError:
        raise ValueError(f"must be one of {[m.value for m in NoiseMode]}") from None


def _label(value: str) -> str:
    if not value:
        raise ValueError("label must be non-empty")
    if any(c in value for c in ',"'):
        raise ValueError("label must not contain commas or quotes")
    return value


_CONVERTERS: Dict[str, Callable[[str], object]] = {
    "scenario.label": _label,
    "source.mean_photons": _positive,
    "channel.gamma_db_per_km": _nonneg,
    "channel.lambda_q_nm": _positive,
    "channel.delta_lambda_nm": _nonneg,
    "channel.raman_cross_section_per_km_nm": _nonneg,
    "channel.tau_s": _positive,
    "channel.p_in_mw": _nonneg,
    "channel.xi_per_km": _nonneg,
    "sweep.lengths_km": _lengths,
    "sweep.noise_mode": _noise_mode,
    "sample.n_theta": _int(1),
    "sample.n_phi": _int(1),
    "seed.master": _int(0, 2**64 - 1),
    "estimator.restarts": _int(1),
}


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario file; raises :class:`ParseError`."""
    values: Dict[str, object] = {}
    lines: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(lineno, None, f"expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONVERTERS:
            raise ParseError(lineno, key, "unknown key")
        if key in values:
            raise ParseError(lineno, key, f"duplicate key (first set on line {lines[key]})")
        try:
            values[key] = _CONVERTERS[key](value)
        except ValueError as exc:
            raise ParseError(lineno, key, str(exc)) from None
        lines[key] = lineno

    for key in REQUIRED_KEYS:
        if key not in values:
            raise ParseError(None, key, "missing required key")

    chan = {}
    for key, fname in _CHANNEL_KEYS.items():
        if key in values:
            v = values[key]
            chan[fname] = v / 1000.0 if key == "channel.p_in_mw" else v
    try:
        channel = ChannelParams(**chan)
        return ScenarioConfig(
            label=values["scenario.label"],
            source=SourceParams(values["source.mean_photons"]),
            channel_template=channel,
            lengths_km=values.get("sweep.lengths_km", DEFAULT_LENGTHS_KM),
            noise_mode=values.get("sweep.noise_mode", NoiseMode.FULL_NOISE),
            master_seed=values.get("seed.master", 42),
            estimator_opts=EstimatorOptions(restarts=values.get("estimator.restarts", 9)),
            n_theta=values.get("sample.n_theta", 10),
            n_phi=values.get("sample.n_phi", 20),
        )
    except ValueError as exc:
        raise ParseError(None, None, str(exc)) from None


def _mw_text(watts: float) -> str:
    """Shortest mW literal that parses back to exactly ``watts``."""
    mw = watts * 1000.0
    candidates = [mw]
    lo = hi = mw
    for _ in range(4):
        lo = math.nextafter(lo, -math.inf)
        hi = math.nextafter(hi, math.inf)
        candidates += [lo, hi]
    hits = [repr(c) for c in candidates if c >= 0 and c / 1000.0 == watts]
    if hits:
        return min(hits, key=len)
    raise ValueError(f"{watts!r} W has no exact mW representation")


def serialize_config(config: ScenarioConfig) -> str:
    """Inverse of :func:`parse_config`; every key is written out."""
    ch = config.channel_template
    lines = [
        f"scenario.label = {config.label}",
        f"source.mean_photons = {config.source.mean_photons!r}",
        f"channel.gamma_db_per_km = {ch.gamma_db_per_km!r}",
        f"channel.lambda_q_nm = {ch.lambda_q_nm!r}",
        f"channel.delta_lambda_nm = {ch.delta_lambda_nm!r}",
        f"channel.raman_cross_section_per_km_nm = {ch.raman_cross_section_per_km_nm!r}",
        f"channel.tau_s = {ch.tau_s!r}",
        f"channel.p_in_mw = {_mw_text(ch.p_in_watts)}",
        f"channel.xi_per_km = {ch.xi_per_km!r}",
        "sweep.lengths_km = " + ", ".join(repr(L) for L in config.lengths_km),
        f"sweep.noise_mode = {config.noise_mode.value}",
        f"sample.n_theta = {config.n_theta}",
        f"sample.n_phi = {config.n_phi}",
        f"seed.master = {config.master_seed}",
        f"estimator.restarts = {config.estimator_opts.restarts}",
    ]
    return "\n".join(lines) + "\n"


def preset(name: str, seed: int = 42) -> List[ScenarioConfig]:
    """Scenario families behind the three fidelity-versus-length figures.

    ``fig1``: shot noise only, 100/200/500 photons.
    ``fig2``: Raman noise, 0/1/10/50 mW, no crosstalk.
    ``fig3``: 1 mW with crosstalk factors 1e-12 to 5e-9 per km.
    """
    if name == "fig1":
        return [
            ScenarioConfig(
                label=f"fig1_N{int(n)}",
                source=SourceParams(n),
                noise_mode=NoiseMode.SHOT_ONLY,
                master_seed=seed,
            )
            for n in (100.0, 200.0, 500.0)
        ]
    source = SourceParams(FIG2_FIG3_MEAN_PHOTONS)
    if name == "fig2":
        return [
            ScenarioConfig(
                label=f"fig2_P{p:02d}mW",
                source=source,
                channel_template=ChannelParams(p_in_watts=p / 1000.0),
                master_seed=seed,
            )
            for p in (0, 1, 10, 50)
        ]
    if name == "fig3":
        return [
            ScenarioConfig(
                label=f"fig3_xi{xi:g}",
                source=source,
                channel_template=ChannelParams(p_in_watts=1e-3, xi_per_km=xi),
                master_seed=seed,
            )
            for xi in (1e-12, 5e-11, 5e-10, 5e-9)
        ]
    raise ValueError(f"unknown preset {name!r}; choose fig1, fig2 or fig3")


PRESETS = ("fig1", "fig2", "fig3")


def with_seed(config: ScenarioConfig, seed: int) -> ScenarioConfig:
    return dataclasses.replace(config, master_seed=seed)
