"""Command-line entry point.

Exit codes: 0 success, 2 configuration or usage error, 3 runtime or I/O error.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
import time

from . import _backend
from .channel import ChannelParams, transmittance
from .config import PRESETS, parse_config, preset
from .errors import ParseError, QstError
from .estimator import EstimatorOptions, reconstruct
from .harness import run_scenarios
from .output import render_plot, write_csv
from .photons import SourceParams
from .quantum import sic_povm

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

log = logging.getLogger("qstnoise")


class _ConfigError(Exception):
    pass


def _seed(text):
    n = int(text)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return n


def _positive_int(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qstnoise",
        description="Simulate qubit state tomography over a noisy WDM fiber link.",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run the sweep described by a config file")
    s.add_argument("--config", required=True)
    s.add_argument("--out-csv", required=True)
    s.add_argument("--out-svg")
    s.add_argument("--threads", type=_positive_int, default=1)
    s.add_argument("--seed", type=_seed)

    s = sub.add_parser("preset", help="reproduce one of the built-in figure families")
    s.add_argument("--name", required=True, choices=PRESETS)
    s.add_argument("--out-csv", required=True)
    s.add_argument("--out-svg")
    s.add_argument("--threads", type=_positive_int, default=1)
    s.add_argument("--seed", type=_seed, default=42)

    s = sub.add_parser("reconstruct", help="estimate a state from four SIC-POVM counts")
    s.add_argument("--counts", required=True, help="m1,m2,m3,m4")
    s.add_argument("--mean-photons", required=True, type=float)
    s.add_argument("--length-km", required=True, type=float)
    s.add_argument("--gamma", type=float, default=ChannelParams.gamma_db_per_km)
    s.add_argument("--seed", type=_seed, default=0)

    s = sub.add_parser("validate", help="check a config file without running it")
    s.add_argument("--config", required=True)
    return p


def _read_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        return parse_config(text)
    except ParseError as exc:
        raise _ConfigError(f"{path}: {exc}") from None


def _emit(results, args):
    write_csv(results, args.out_csv)
    if args.out_svg:
        render_plot(results, args.out_svg)


def _run(configs, args):
    t0 = time.perf_counter()
    results = run_scenarios(configs, workers=args.threads)
    log.info("swept %d scenario(s) in %.1f s (%s kernel)", len(configs),
             time.perf_counter() - t0, _backend.NAME)
    _emit(results, args)


def cmd_simulate(args):
    config = _read_config(args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, master_seed=args.seed)
    _run([config], args)


def cmd_preset(args):
    _run(preset(args.name, seed=args.seed), args)


def cmd_validate(args):
    config = _read_config(args.config)
    print(f"ok: {config.label} ({len(config.lengths_km)} lengths, {config.noise_mode.value})")


def cmd_reconstruct(args):
    try:
        counts = [float(c) for c in args.counts.split(",")]
        if len(counts) != 4 or any(c < 0 for c in counts):
            raise ValueError
    except ValueError:
        raise _ConfigError("--counts needs four non-negative numbers m1,m2,m3,m4") from None
    try:
        channel = ChannelParams(gamma_db_per_km=args.gamma, length_km=args.length_km)
        source = SourceParams(args.mean_photons)
        if not args.mean_photons > 0:
            raise ValueError("--mean-photons must be positive")
    except ValueError as exc:
        raise _ConfigError(str(exc)) from None
    eta = transmittance(channel)
    res = reconstruct(counts, source, eta, sic_povm(), EstimatorOptions(rng_seed_for_restarts=args.seed))
    rho = res.rho_hat.matrix
    for i in range(2):
        for j in range(2):
            z = rho[i, j]
            print(f"rho[{i}][{j}] = {z.real:+.9f} {z.imag:+.9f}j")
    s = res.rho_hat.bloch_vector()
    print(f"bloch = {s[0]:+.9f} {s[1]:+.9f} {s[2]:+.9f}")
    print(f"purity = {res.rho_hat.purity():.9f}")
    print(f"t_hat = " + " ".join(f"{v:+.9g}" for v in res.t_hat.as_tuple()))
    print(f"transmittance = {eta:.9g}")
    print(f"objective = {res.objective_value:.9g}")
    print(f"converged = {str(res.converged).lower()}")
    print(f"restarts = {res.restarts_used}")


COMMANDS = {
    "simulate": cmd_simulate,
    "preset": cmd_preset,
    "validate": cmd_validate,
    "reconstruct": cmd_reconstruct,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        COMMANDS[args.command](args)
    except _ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, QstError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
