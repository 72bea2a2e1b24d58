"""Command-line front end.

Subcommands: ``radii``, ``series``, ``oracle``, ``correlate``, ``deviate``,
``accept``.  Configuration is a JSON file passed with ``--config``; every
command writes deterministic CSV (17 significant digits) under ``--out``.
Exit codes: 0 success, 2 configuration error, 3 guard violation,
4 acceptance failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import acceptance, correlations, deviations, radii, series
from .csvfmt import write_csv
from .model import GuardError, LatticeSpec, PotentialSpec
from .oracle import (exact_canonical_table, exact_correlations,
                     grand_canonical_eval, transfer_matrix_table)


class ConfigError(ValueError):
    """A configuration key is missing, malformed, or out of range."""


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file {path} does not exist")
    try:
        cfg = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _need(cfg: dict, key: str, kind, legal: str):
    if key not in cfg:
        raise ConfigError(f"missing key '{key}' ({legal})")
    v = cfg[key]
    if kind is float and isinstance(v, int):
        v = float(v)
    if not isinstance(v, kind):
        raise ConfigError(f"key '{key}' must be {legal}, got {v!r}")
    return v


def _get(cfg: dict, key: str, default):
    return cfg.get(key, default)


def _parse_boundary(cfg: dict) -> tuple[str, tuple]:
    b = _get(cfg, "boundary", "zero")
    if b in ("zero", "periodic"):
        return b, ()
    if isinstance(b, str) and b.startswith("fixed:"):
        try:
            sites = json.loads(b[len("fixed:"):])
            return "fixed", tuple(tuple(int(c) for c in s) for s in sites)
        except (json.JSONDecodeError, TypeError, ValueError) as e:
            raise ConfigError(
                "key 'boundary' fixed form must be 'fixed:<JSON site list>', "
                f"e.g. 'fixed:[[-1],[4]]': {e}") from e
    raise ConfigError("key 'boundary' must be one of zero | periodic | "
                      "fixed:<site list>")


def _parse_potential(cfg: dict) -> PotentialSpec:
    pot_cfg = _get(cfg, "potential", {})
    if not isinstance(pot_cfg, dict):
        raise ConfigError("key 'potential' must be an object with 'kind'/'range'")
    kind = _get(pot_cfg, "kind", "standard")
    if kind not in ("standard", "kac"):
        raise ConfigError("key 'potential.kind' must be standard | kac")
    coupling = float(_get(cfg, "coupling", 1.0))
    if coupling <= 0:
        raise ConfigError("key 'coupling' must be a positive real")
    rng = int(_get(pot_cfg, "range", 1))
    if rng < 1:
        raise ConfigError("key 'potential.range' must be a positive integer")
    if kind == "standard":
        return PotentialSpec("standard", coupling)
    return PotentialSpec("kac", 1.0, rng)


def _parse_model(cfg: dict) -> tuple[LatticeSpec, PotentialSpec, float]:
    d = _need(cfg, "dimension", int, "a positive integer")
    if d < 1:
        raise ConfigError("key 'dimension' must be >= 1")
    side = _need(cfg, "side", int, "an integer >= 2")
    if side < 2:
        raise ConfigError("key 'side' must be >= 2")
    beta = _need(cfg, "beta", float, "a real >= 0")
    if beta < 0:
        raise ConfigError("key 'beta' must be >= 0")
    boundary, gamma = _parse_boundary(cfg)
    pot = _parse_potential(cfg)
    lattice = LatticeSpec(d, side, boundary, gamma)
    return lattice, pot, beta


def _beta_grid(cfg: dict) -> np.ndarray:
    grid = _get(cfg, "beta_grid", {"start": 0.0, "stop": 1.0, "count": 101})
    try:
        start, stop, count = float(grid["start"]), float(grid["stop"]), int(grid["count"])
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError("key 'beta_grid' must be {start, stop, count}") from e
    if count < 1:
        raise ConfigError("key 'beta_grid.count' must be >= 1")
    return np.linspace(start, stop, count)


def cmd_radii(cfg: dict, out: Path, threads: int) -> None:
    betas = _beta_grid(cfg)
    pairs = _get(cfg, "pairs", [[1, 1.0], [2, 1.0], [3, 1.0], [1, 2.0]])
    for pair in pairs:
        if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                or int(pair[0]) < 1 or float(pair[1]) <= 0):
            raise ConfigError("key 'pairs' must be a list of [dimension, coupling]")
    for d, coupling in pairs:
        d = int(d)
        pot = PotentialSpec("standard", float(coupling))
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                reports = list(ex.map(lambda b: radii.radius_report(d, pot, float(b)),
                                      betas))
        else:
            reports = radii.sweep_radii(d, pot, betas)
        rows = [radii.CSV_HEADER] + [r.csv_row() for r in reports]
        write_csv(out / f"radii_d{d}_J{float(coupling):g}.csv", rows)


def cmd_oracle(cfg: dict, out: Path, threads: int) -> None:
    lattice, pot, beta = _parse_model(cfg)
    method = _get(cfg, "method", "auto")
    if method not in ("auto", "enumeration", "transfer-matrix"):
        raise ConfigError("key 'method' must be auto | enumeration | transfer-matrix")
    if method == "transfer-matrix" or (method == "auto" and lattice.dimension == 1
                                       and lattice.n_sites > 24):
        table = transfer_matrix_table(lattice.side, pot, beta, lattice.boundary)
    else:
        table = exact_canonical_table(lattice, pot, beta)
    write_csv(out / "canonical_table.csv", table.csv_rows())
    if "mu" in cfg:
        gc = grand_canonical_eval(table, float(cfg["mu"]))
        write_csv(out / "probabilities.csv", gc.csv_rows())


def cmd_series(cfg: dict, out: Path, threads: int) -> None:
    lattice, pot, beta = _parse_model(cfg)
    order = int(_get(cfg, "order", 4))
    if not 1 <= order <= lattice.n_sites - 1:
        raise ConfigError("key 'order' must satisfy 1 <= order <= |Lambda|-1")
    particles = int(_get(cfg, "particles", order + 1))
    table = exact_canonical_table(lattice, pot, beta)
    coeffs = series.extract_b_lambda(table, order)
    rows = [("n", "b_n", "beta_n", "B_Lambda_n", "F_coeff")]
    for n in range(1, order + 1):
        b_n = (series.connected_coefficient(n, lattice.dimension, pot, beta)
               if n <= series.MAX_B_ORDER else math.nan)
        beta_n = (series.irreducible_coefficient(n, lattice.dimension, pot, beta)
                  if n <= series.MAX_BETA_IRR_ORDER else math.nan)
        f_val = series.f_coefficient(particles, lattice.n_sites, n, coeffs.value(n))
        rows.append((str(n), format(b_n, ".17g"), format(beta_n, ".17g"),
                     format(coeffs.value(n), ".17g"), format(f_val, ".17g")))
    write_csv(out / "series.csv", rows)


def cmd_correlate(cfg: dict, out: Path, threads: int) -> None:
    lattice, pot, beta = _parse_model(cfg)
    particles = _need(cfg, "particles", int, "an integer in [2, |Lambda|]")
    table = exact_correlations(lattice, pot, beta, particles)
    if "c_const" in cfg and "c1_const" in cfg:
        c_val, c1_val = float(cfg["c_const"]), float(cfg["c1_const"])
    else:
        cal = correlations.calibrate_constants([table])
        c_val, c1_val = cal.c_min, cal.c1_min
    report = correlations.pair_rows(table, c_val, c1_val)
    write_csv(out / "correlation_bound.csv", report.csv_rows())


def cmd_deviate(cfg: dict, out: Path, threads: int) -> None:
    lattice, pot, beta = _parse_model(cfg)
    if lattice.dimension == 1 and lattice.n_sites > 24:
        table = transfer_matrix_table(lattice.side, pot, beta, lattice.boundary)
    else:
        table = exact_canonical_table(lattice, pot, beta)
    if "mu0" in cfg:
        mu0 = float(cfg["mu0"])
    else:
        mu0 = radii.lattice_gas_threshold(lattice.dimension, pot, beta) - 1.0
        if not math.isfinite(mu0):
            raise ConfigError("key 'mu0' required when beta = 0 (threshold sentinel)")
    alphas = _get(cfg, "alphas", [0.5, 1.0])
    us = _get(cfg, "us", [0.0, 0.5, 1.0])
    order = int(_get(cfg, "order", 4))
    fe = series.free_energy_from_extraction(series.extract_b_lambda(table, order))
    rows = [deviations.CSV_HEADER]
    for alpha in alphas:
        if not 0.5 <= float(alpha) <= 1.0:
            raise ConfigError("key 'alphas' entries must lie in [1/2, 1]")
        for u in us:
            rep = deviations.formula_probability(table, mu0, alpha, float(u), fe)
            rows.append(rep.csv_row())
    write_csv(out / "deviations.csv", rows)


def cmd_accept(cfg: dict, out: Path, threads: int) -> int:
    results = acceptance.run_all()
    # timings go to stdout only, keeping the CSV byte-identical across runs
    rows = [("index", "criterion", "passed", "detail")]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.index:2d}. {r.name} ({r.seconds:.1f}s)")
        print(f"        {r.detail}")
        rows.append((str(r.index), r.name, status, r.detail))
    write_csv(out / "acceptance.csv", rows)
    n_fail = sum(1 for r in results if not r.passed)
    print(f"{len(results) - n_fail}/{len(results)} criteria passed")
    return 0 if n_fail == 0 else 4


COMMANDS = {
    "radii": cmd_radii,
    "oracle": cmd_oracle,
    "series": cmd_series,
    "correlate": cmd_correlate,
    "deviate": cmd_deviate,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="latgas",
        description="Lattice-gas cluster-expansion toolkit: exact oracles, "
                    "Mayer coefficients, convergence thresholds, correlation "
                    "bounds and deviation probabilities.")
    parser.add_argument("command", choices=sorted(COMMANDS) + ["accept"])
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--out", default=".", help="output directory for CSV files")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for sweeps (radii)")
    args = parser.parse_args(argv)

    try:
        cfg = _load_config(args.config)
        out = Path(args.out)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.command == "accept":
            return cmd_accept(cfg, out, args.threads)
        COMMANDS[args.command](cfg, out, args.threads)
        return 0
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except GuardError as e:
        print(f"guard violation: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
