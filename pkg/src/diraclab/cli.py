"""Command-line front end: index, verify, ledger, and sweep runs.

Every run is driven by a single JSON config (archivable, replayable); the
only flags are --config, --out, and --seed-override.  Reports are written
atomically (temp file + rename).  Exit codes: 0 success, 1 input/domain
error, 2 verification or stability failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import verify as verify_mod
from .boundary import SubspaceTag
from .engine import (
    LedgerInput,
    SymbolData,
    build_T,
    numerical_index,
    random_symbol,
    stabilized_index,
    virtual_dimension_ledger,
    winding_number,
)
from .errors import ConfigError, DomainError, NumericError
from .lattice import ModeLattice, ZeroModePolicy

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFICATION = 2


def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {where}; allowed: {sorted(allowed)}")


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def _parse_lattice(obj: dict) -> ModeLattice:
    _check_keys(obj, {"dim_link", "offset_t", "offset_s", "cutoff", "zero_mode_policy"}, "lattice")
    try:
        return ModeLattice(
            dim_link=int(obj["dim_link"]),
            offset_t=float(obj["offset_t"]),
            offset_s=float(obj.get("offset_s", 0.0)),
            cutoff=int(obj.get("cutoff", 8)),
            zero_mode_policy=ZeroModePolicy(obj.get("zero_mode_policy", "separate")),
        )
    except KeyError as exc:
        raise ConfigError(f"lattice config missing key {exc}") from exc


def _parse_poly(entries: list, dim: int, where: str) -> dict:
    poly = {}
    for entry in entries:
        _check_keys(entry, {"mode", "re", "im"}, where)
        mode = tuple(float(x) for x in entry["mode"])
        if len(mode) != dim:
            raise ConfigError(f"{where}: mode {mode} has wrong dimension (expected {dim})")
        poly[mode] = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
    return {k: v for k, v in poly.items() if v != 0}


def _parse_symbol(obj: dict, lattice: ModeLattice, rng: np.random.Generator | None) -> SymbolData:
    _check_keys(obj, {"d_plus", "d_minus", "file", "random"}, "symbol")
    if "file" in obj:
        sub = _load_config(obj["file"])
        return _parse_symbol(sub, lattice, rng)
    if "random" in obj:
        spec = obj["random"]
        _check_keys(spec, {"bandwidth", "offsets"}, "symbol.random")
        if rng is None:
            raise ConfigError("random symbols need a seed in the config")
        offsets = tuple(float(x) for x in spec["offsets"]) if "offsets" in spec else None
        return random_symbol(lattice, rng, float(spec.get("bandwidth", 1.0)), offsets=offsets)
    dim = lattice.dim_link
    return SymbolData(
        dim=dim,
        d_plus=_parse_poly(obj.get("d_plus", []), dim, "symbol.d_plus"),
        d_minus=_parse_poly(obj.get("d_minus", []), dim, "symbol.d_minus"),
    )


def _write_atomic(path: str, data: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(target.parent), prefix=target.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, str(target))
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _plain(obj):
    """Coerce numpy scalars and other non-JSON leaves to plain Python types."""
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"Object of type {obj.__class__.__name__} is not JSON serializable")


def _emit_report(command: str, config: dict, result: dict, out: str | None) -> None:
    report = {
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "command": command,
        "config": config,
        "result": result,
    }
    text = json.dumps(report, indent=2, sort_keys=True, default=_plain) + "\n"
    if out:
        _write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _symbol_windings(symbol: SymbolData) -> dict:
    if symbol.dim != 1:
        return {}
    return {
        "winding_d_plus": winding_number(symbol.d_plus) if symbol.d_plus else None,
        "winding_d_minus": winding_number(symbol.d_minus) if symbol.d_minus else None,
    }


def cmd_index(config: dict, out: str | None, seed: int | None) -> int:
    _check_keys(
        config,
        {"lattice", "symbol", "cutoffs", "domain", "tol_rel", "seed",
         "expect_index_real", "expect_index_complex", "dump_matrices"},
        "index config",
    )
    lattice = _parse_lattice(config["lattice"])
    rng = np.random.default_rng(seed) if seed is not None else None
    symbol = _parse_symbol(config["symbol"], lattice, rng)
    cutoffs = [int(n) for n in config["cutoffs"]]
    tag = SubspaceTag(config.get("domain", "ExpMinus"))
    tol = float(config.get("tol_rel", 1e-8))
    report = stabilized_index(symbol, lattice, cutoffs, tag, tol_rel=tol)

    result = report.to_dict()
    result.update(_symbol_windings(symbol))
    result["symbol"] = {
        "d_plus": [{"mode": list(k), "re": v.real, "im": v.imag} for k, v in sorted(symbol.d_plus.items())],
        "d_minus": [{"mode": list(k), "re": v.real, "im": v.imag} for k, v in sorted(symbol.d_minus.items())],
    }
    if config.get("dump_matrices"):
        dump_dir = Path(config["dump_matrices"])
        dump_dir.mkdir(parents=True, exist_ok=True)
        for n in cutoffs:
            op = build_T(symbol, lattice, n, tag)
            buf = io.StringIO()
            writer = csv.writer(buf)
            for row in op.matrix:
                writer.writerow([f"{x:.17g}" for x in row])
            _write_atomic(str(dump_dir / f"matrix_N{n}.csv"), buf.getvalue())

    code = EXIT_OK
    if not report.stable:
        result["verdict"] = "unstable"
        code = EXIT_VERIFICATION
        sys.stderr.write(
            f"unstable: per-cutoff real indices {[c.index_real for c in report.per_cutoff]}, "
            f"gaps {[f'{g:.3g}' for g in report.spectral_gap]}\n"
        )
    else:
        result["verdict"] = "stable"
        if "expect_index_real" in config and report.index_real != int(config["expect_index_real"]):
            result["verdict"] = "stable-but-mismatched"
            code = EXIT_VERIFICATION
            sys.stderr.write(
                f"index mismatch: got {report.index_real}, expected {config['expect_index_real']}\n"
            )
        if "expect_index_complex" in config and report.index_complex != float(config["expect_index_complex"]):
            result["verdict"] = "stable-but-mismatched"
            code = EXIT_VERIFICATION
            sys.stderr.write(
                f"index mismatch: got complex {report.index_complex}, "
                f"expected {config['expect_index_complex']}\n"
            )
    _emit_report("index", config, result, out)
    return code


def cmd_verify(config: dict, out: str | None, seed: int | None) -> int:
    _check_keys(config, {"suites", "seed", "quad_n", "samples"}, "verify config")
    suites = config.get("suites")
    if not suites:
        raise ConfigError("verify config needs a nonempty 'suites' list")
    needs_seed = any(name in verify_mod.RANDOMIZED_SUITES for name in suites)
    if needs_seed and seed is None:
        raise ConfigError("a seed is mandatory for randomized suites")
    results = {}
    all_ok = True
    for name in suites:
        rng = np.random.default_rng(seed) if seed is not None else None
        ok, payload = verify_mod.run_suite(name, config, rng)
        results[name] = {"pass": ok, **payload}
        all_ok = all_ok and ok
    _emit_report("verify", config, {"suites": results, "all_pass": all_ok}, out)
    return EXIT_OK if all_ok else EXIT_VERIFICATION


def cmd_ledger(config: dict, out: str | None) -> int:
    _check_keys(
        config,
        {"mode", "ahat_integral", "dim_ker_dsigma", "dim_ker_dminus_l21", "index_t_exp_minus"},
        "ledger config",
    )
    mode = config.get("mode")
    if mode not in ("3D", "4D"):
        raise ConfigError("ledger config needs mode '3D' or '4D'")
    inp = LedgerInput(
        ahat_integral=int(config.get("ahat_integral", 0)),
        dim_ker_dsigma=int(config.get("dim_ker_dsigma", 0)),
        dim_ker_dminus_l21=int(config.get("dim_ker_dminus_l21", 0)),
        index_t_exp_minus=int(config.get("index_t_exp_minus", 0)),
    )
    result = virtual_dimension_ledger(inp, mode)
    for line in result["chain"]:
        sys.stdout.write(line + "\n")
    _emit_report("ledger", config, result, out)
    return EXIT_OK


def cmd_sweep(config: dict, out: str | None, seed: int | None) -> int:
    _check_keys(config, {"lattice", "symbol", "cutoffs", "domain", "tol_rel", "seed"}, "sweep config")
    cutoffs = [int(n) for n in config.get("cutoffs", [])]
    if len(cutoffs) < 2:
        raise ConfigError("sweep needs at least 2 cutoffs")
    lattice = _parse_lattice(config["lattice"])
    rng = np.random.default_rng(seed) if seed is not None else None
    symbol = _parse_symbol(config["symbol"], lattice, rng)
    tag = SubspaceTag(config.get("domain", "ExpMinus"))
    tol = float(config.get("tol_rel", 1e-8))
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["cutoff", "dim_ker", "dim_coker", "index_real", "gap"])
    for n in cutoffs:
        rec = numerical_index(build_T(symbol, lattice, n, tag), tol, cutoff=n)
        writer.writerow([rec.cutoff, rec.dim_ker, rec.dim_coker, rec.index_real, f"{rec.spectral_gap:.6g}"])
    if out:
        _write_atomic(out, buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="diraclab",
        description="Index and verification runs for the flat-model boundary operator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("index", "verify", "ledger", "sweep"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the JSON run configuration")
        p.add_argument("--out", default=None, help="report path (stdout if omitted)")
        p.add_argument("--seed-override", type=int, default=None, help="override the config seed")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # keep the documented 0/1/2 exit contract
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT

    try:
        config = _load_config(args.config)
        seed = args.seed_override if args.seed_override is not None else config.get("seed")
        seed = int(seed) if seed is not None else None
        if args.command == "index":
            return cmd_index(config, args.out, seed)
        if args.command == "verify":
            return cmd_verify(config, args.out, seed)
        if args.command == "ledger":
            return cmd_ledger(config, args.out)
        return cmd_sweep(config, args.out, seed)
    except (ConfigError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except NumericError as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
