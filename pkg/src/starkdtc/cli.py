"""Command-line entry point.

Thin single-threaded dispatcher around the library: parse a JSON config,
run one command (series, spectrum, overlaps, lifetime, sweep or figure) and
write result tables with metadata sidecars.  Exit codes: 0 success, 2 config
error, 3 numeric error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import RunConfig, parse_config
from .exceptions import ConfigError, NumericError, ResourceLimitError
from .figures import FIGURE_IDS, figure_command
from .floquet import find_pi_pair, floquet_operator, overlaps
from .hilbert import state_from_amplitudes, z_product_state
from .observables import autocorrelator_series, fourier_spectrum, lifetime
from .output import params_metadata, write_csv, write_json, write_sidecar
from .sweep import run_sweep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starkdtc",
        description="Exact-diagonalization simulator for the two-stage Floquet "
        "protocol on a driven Rydberg chain",
    )
    parser.add_argument("--config", type=Path, help="path to a JSON run configuration")
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory (default: .)")
    parser.add_argument("--format", choices=("csv", "json"), help="override output format")
    parser.add_argument("--threads", type=int, help="worker threads for sweeps and figures")
    parser.add_argument("--figure", choices=FIGURE_IDS, help="emit a figure dataset (no config needed)")
    parser.add_argument("--resume", action="store_true", help="resume a sweep from its journal")
    return parser


def _load_config(args) -> RunConfig:
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}")
        cfg = parse_config(text)
    elif args.figure is not None:
        cfg = RunConfig(command="figure", figure=args.figure)
    else:
        raise ConfigError("either --config or --figure is required")
    if args.figure is not None:
        if cfg.command != "figure" and args.config is not None:
            raise ConfigError("--figure conflicts with a non-figure config command")
        cfg.command = "figure"
        cfg.figure = args.figure
    if args.format is not None:
        cfg.out_format = args.format
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError(f"--threads: expected a positive integer, got {args.threads}")
        cfg.threads = args.threads
    return cfg


def _check_writable(out_dir: Path) -> None:
    # fail before compute starts, not after minutes of work
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".starkdtc-write-probe"
        probe.touch()
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output directory {out_dir} is not writable: {exc}")


def _initial_state(cfg: RunConfig):
    basis = cfg.params.basis
    if cfg.initial_state is None:
        return z_product_state("1" * cfg.params.L, basis)
    if isinstance(cfg.initial_state, str):
        return z_product_state(cfg.initial_state, basis)
    return state_from_amplitudes(cfg.initial_state, basis)


def _write_table(out_dir: Path, name: str, fmt: str, header, rows, metadata: dict) -> Path:
    if fmt == "json":
        path = write_json(out_dir / f"{name}.json", {"metadata": metadata, "columns": header, "rows": rows})
        return path
    path = write_csv(out_dir / f"{name}.csv", header, rows)
    write_sidecar(path, metadata)
    return path


def _run_series(cfg: RunConfig, out_dir: Path) -> list:
    prop = floquet_operator(cfg.params)
    psi0 = _initial_state(cfg)
    series = autocorrelator_series(prop, psi0, cfg.n_cycles)
    metadata = {
        "command": "series",
        "params": params_metadata(cfg.params),
        "initial_state": psi0.label,
        "n_cycles": cfg.n_cycles,
    }
    return [_write_table(out_dir, "series", cfg.out_format, ["n", "c"], series.rows(), metadata)]


def _run_spectrum(cfg: RunConfig, out_dir: Path) -> list:
    prop = floquet_operator(cfg.params)
    psi0 = _initial_state(cfg)
    series = autocorrelator_series(prop, psi0, cfg.n_cycles)
    spectral = fourier_spectrum(series)
    metadata = {
        "command": "spectrum",
        "params": params_metadata(cfg.params),
        "initial_state": psi0.label,
        "n_cycles": cfg.n_cycles,
        "a_pi": spectral.a_pi,
    }
    return [
        _write_table(out_dir, "spectrum", cfg.out_format, ["omega", "magnitude"], spectral.rows(), metadata)
    ]


def _run_overlaps(cfg: RunConfig, out_dir: Path) -> list:
    prop = floquet_operator(cfg.params)
    psi0 = _initial_state(cfg)
    table = overlaps(prop.spectrum(), psi0)
    pair = find_pi_pair(table)
    metadata = {
        "command": "overlaps",
        "params": params_metadata(cfg.params),
        "initial_state": psi0.label,
        "pi_pair": None
        if pair is None
        else {"gap": pair.gap, "combined_overlap": pair.combined_overlap},
    }
    return [
        _write_table(
            out_dir, "overlaps", cfg.out_format, ["quasi_energy", "overlap"], table.rows(), metadata
        )
    ]


def _run_lifetime(cfg: RunConfig, out_dir: Path) -> list:
    prop = floquet_operator(cfg.params)
    psi0 = _initial_state(cfg)
    result = lifetime(prop, psi0, cfg.n_max)
    record = {
        "command": "lifetime",
        "params": params_metadata(cfg.params),
        "initial_state": psi0.label,
    }
    record.update(result.record())
    return [write_json(out_dir / "lifetime.json", record)]


def _run_sweep_command(cfg: RunConfig, out_dir: Path, resume: bool) -> list:
    journal_path = out_dir / "sweep_journal.jsonl"
    result = run_sweep(cfg.sweep, workers=cfg.threads, journal_path=journal_path, resume=resume)
    path = result.to_csv(out_dir / "sweep.csv")
    return [path, journal_path]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        out_dir = args.out
        _check_writable(out_dir)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if cfg.command == "figure":
            files = figure_command(cfg.figure, out_dir, workers=cfg.threads)
        elif cfg.command == "series":
            files = _run_series(cfg, out_dir)
        elif cfg.command == "spectrum":
            files = _run_spectrum(cfg, out_dir)
        elif cfg.command == "overlaps":
            files = _run_overlaps(cfg, out_dir)
        elif cfg.command == "lifetime":
            files = _run_lifetime(cfg, out_dir)
        elif cfg.command == "sweep":
            files = _run_sweep_command(cfg, out_dir, args.resume)
        else:  # unreachable after config validation
            raise ConfigError(f"unknown command {cfg.command!r}")
    except (ConfigError, ResourceLimitError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3

    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
