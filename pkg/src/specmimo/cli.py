"""Command-line entry point ``specmimo``.

Exit codes: 0 success, 1 oracle-check mismatch, 2 invalid configuration
or geometry, 3 numerical guard or convergence failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .channel import (Scenario, build_exact, build_image_oracle,
                      build_los_oracle)
from .config import load_config
from .exceptions import (ConfigError, ConvergenceError, GeometryError,
                         GuardError)
from .geometry import ArraySpec
from .materials import (PERFECT_CONDUCTOR, Wavenumbers, builtin_materials,
                        normal_incidence_loss_db)
from .mimo import rayleigh_spacing
from .presets import run_preset, with_indicator
from .quadrature import ContourConfig
from .spectrum import KernelMode

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3
ORACLE_TOL = 1e-6


def _threads(arg):
    if arg is not None:
        return arg
    env = os.environ.get("SPECMIMO_THREADS")
    if env is None:
        return None
    try:
        n = int(env)
    except ValueError:
        raise ConfigError(f"SPECMIMO_THREADS must be an integer, got {env!r}")
    return n


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def cmd_run(args):
    cfg = load_config(args.config)
    workers = _threads(args.threads)
    if workers is not None and workers < 1:
        raise ConfigError("--threads must be >= 1")
    contour = with_indicator(cfg.contour.to_config(), args.indicator)
    out = Path(args.out or cfg.out_dir or "results")
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    tables, channel = run_preset(cfg, contour, workers)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    for table in tables:
        path = out / f"{table.name}.csv"
        table.write(path)
        files[path.name] = _sha256(path)
    if channel is not None:
        path = out / "custom_channel.csv"
        channel.to_csv(path)
        files[path.name] = _sha256(path)
    manifest = {
        "engine_version": __version__,
        "preset": cfg.preset,
        "config": str(args.config),
        "config_sha256": _sha256(args.config),
        "contour": dataclasses.asdict(contour),
        "materials": [m.as_dict() for m in cfg.material_table()],
        "threads": workers,
        "files": files,
        "started_utc": started.isoformat(timespec="seconds"),
        "wall_clock_s": round(time.perf_counter() - t0, 3),
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")
    for name in files:
        print(out / name)
    return EXIT_OK


def cmd_validate(args):
    cfg = load_config(args.config)
    print(f"{args.config}: ok (preset {cfg.preset})")
    return EXIT_OK


def cmd_materials(args):
    print(f"{'name':<14}{'n2':>22}  {'normal-incidence loss [dB]':>26}")
    for m in builtin_materials():
        n2 = "inf" if m.perfect_conductor else f"{m.n2.real:.4f}{m.n2.imag:+.4f}j"
        print(f"{m.name:<14}{n2:>22}  {abs(normal_incidence_loss_db(m)):>26.2f}")
    return EXIT_OK


def oracle_check(contour=None, workers=None, frequency=57.5e9):
    """LOS and image-theorem equivalence at the reference 8x8 geometry.

    Returns
    -------
    dict
        Maximum entrywise relative error for each check.
    """
    lam = Wavenumbers.from_frequency(frequency).wavelength
    d = rayleigh_spacing(lam, 10.0, 8)
    kw = {} if contour is None else {"contour": contour}
    base = Scenario(frequency, ArraySpec(8, d),
                    ArraySpec(8, d, centroid=(0.0, 0.0, 10.0)), D0=15.0,
                    material=PERFECT_CONDUCTOR, **kw)
    out = {}
    for name, mode, oracle in (("los", KernelMode.LOS, build_los_oracle),
                               ("image", KernelMode.REFLECTED,
                                build_image_oracle),
                               ("total", KernelMode.TOTAL, build_image_oracle)):
        sc = base.with_(mode=mode)
        H = build_exact(sc, workers=workers).entries
        ref = oracle(sc).entries
        out[name] = float(np.max(np.abs(H - ref) / np.abs(ref)))
    return out


def cmd_oracle_check(args):
    contour = with_indicator(ContourConfig(), args.indicator)
    errs = oracle_check(contour, _threads(args.threads))
    ok = True
    for name, err in errs.items():
        status = "PASS" if err <= ORACLE_TOL else "FAIL"
        ok &= status == "PASS"
        print(f"{status} {name:<6} max relative error {err:.3e} "
              f"(tolerance {ORACLE_TOL:.0e})")
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser():
    p = argparse.ArgumentParser(
        prog="specmimo",
        description="Exact LOS and surface-reflection MIMO channels.")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: SPECMIMO_THREADS or 1)")
    common.add_argument("--indicator", choices=("hard", "tail"), default=None,
                        help="drop (hard) or keep (tail) evanescent waves")
    sub = p.add_subparsers(dest="verb", required=True)

    run = sub.add_parser("run", parents=[common], help="run an experiment")
    run.add_argument("config")
    run.add_argument("--out", default=None, help="output directory")
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="check a config file")
    val.add_argument("config")
    val.set_defaults(func=cmd_validate)

    mat = sub.add_parser("materials", help="material table")
    mat.add_argument("action", choices=("list",))
    mat.set_defaults(func=cmd_materials)

    oc = sub.add_parser("oracle-check", parents=[common],
                        help="compare against closed-form references")
    oc.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (GuardError, ConvergenceError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
