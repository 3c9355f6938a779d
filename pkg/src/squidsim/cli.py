"""Command-line front end: scenario dispatch, deterministic artifact
emission, parameter sweeps and a built-in property-check suite.

Exit codes: 0 success, 1 usage or configuration error, 2 scenario
incomplete, 3 numerical failure.
"""

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .config import RunConfig, parse_config
from .errors import (
    ConfigError,
    IntegrationError,
    NormalizationError,
    NumericalValidityError,
    ScenarioIncompleteError,
    StabilityError,
)
from .ladder import compare_effective_vs_full
from .scenarios import (
    run_custom,
    run_entanglement_transfer,
    run_pair_generation,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCOMPLETE = 2
EXIT_NUMERICAL = 3

CSV_HEADER = (
    "t,P1,P2,P3,P4,EF1,EF2,EF3,EF_squid,EF_ab,Cl1_squid,Cl1_ab,norm_drift"
)

DEFAULT_OUT_DIR = "squidsim-out"


def _error_object(exc, code):
    return {
        "error": {
            "type": type(exc).__name__,
            "message": str(exc),
            "exit_code": code,
        }
    }


def _fail(exc, code):
    sys.stderr.write(
        json.dumps(_error_object(exc, code), sort_keys=True) + "\n"
    )
    return code


def _classify(exc):
    if isinstance(exc, ConfigError):
        return EXIT_USAGE
    if isinstance(exc, ScenarioIncompleteError):
        return EXIT_INCOMPLETE
    if isinstance(
        exc,
        (StabilityError, NumericalValidityError, IntegrationError,
         NormalizationError),
    ):
        return EXIT_NUMERICAL
    raise exc


def _prepare_out_dir(path):
    """Create the output directory and verify it is writable."""
    os.makedirs(path, exist_ok=True)
    probe = os.path.join(path, ".write-probe")
    with open(probe, "w") as fh:
        fh.write("")
    os.remove(probe)


def _fmt(x):
    return f"{x:.11e}"


def write_timeseries_csv(path, table):
    """Emit the per-sample measure table, 12 significant digits, LF rows.

    Every row's population sum is re-validated against 1 within 1e-8 at
    write time.
    """
    lines = [CSV_HEADER]
    for i in range(len(table.times)):
        p = table.populations[i]
        total = float(p[0] + p[1] + p[2] + p[3])
        if abs(total - 1.0) > 1e-8:
            raise NumericalValidityError(
                f"row {i}: population sum {total!r} deviates from 1 "
                "beyond 1e-8"
            )
        cells = [
            table.times[i],
            p[0], p[1], p[2], p[3],
            table.ef[i, 0], table.ef[i, 1], table.ef[i, 2],
            table.eof_squid[i], table.eof_ab[i],
            table.cl1_squid[i], table.cl1_ab[i],
            table.norm_drift[i],
        ]
        lines.append(",".join(_fmt(c) for c in cells))
    data = ("\n".join(lines) + "\n").encode()
    with open(path, "wb") as fh:
        fh.write(data)


def write_report_json(path, cfg: RunConfig, report_data):
    doc = {
        "artifact_version": __version__,
        "config": cfg.to_json(),
        "report": report_data,
    }
    data = (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode()
    with open(path, "wb") as fh:
        fh.write(data)


def _run_scenario(cfg: RunConfig):
    if cfg.scenario == "pair-generation":
        return run_pair_generation(cfg.model, cfg.t_end, cfg.integrator)
    if cfg.scenario == "transfer":
        return run_entanglement_transfer(cfg.model, cfg.t_end, cfg.integrator)
    if cfg.scenario == "custom":
        return run_custom(cfg.c0, cfg.model, cfg.t_end, cfg.integrator)
    raise ConfigError(f"scenario {cfg.scenario!r} is not runnable here")


def run(cfg: RunConfig):
    """Execute one resolved configuration and write its artifacts.

    Returns the exit code; partial outputs are written with
    `"complete": false` when the scenario does not finish its stages.
    """
    out_dir = cfg.out_dir or DEFAULT_OUT_DIR
    try:
        _prepare_out_dir(out_dir)
    except OSError as e:
        return _fail(e, EXIT_USAGE)

    if cfg.scenario == "ladder-compare":
        try:
            comparison = compare_effective_vs_full(cfg.ladder)
        except Exception as e:  # noqa: BLE001 - mapped to exit codes
            return _fail(e, _classify(e))
        data = comparison.to_json()
        data["complete"] = True
        if "json" in cfg.formats:
            write_report_json(os.path.join(out_dir, "report.json"), cfg, data)
        return EXIT_OK

    table = None
    try:
        _, report, table = _run_scenario(cfg)
        code = EXIT_OK
    except ScenarioIncompleteError as e:
        report = getattr(e, "report", None)
        table = getattr(e, "table", None)
        code = EXIT_INCOMPLETE
        sys.stderr.write(
            json.dumps(_error_object(e, code), sort_keys=True) + "\n"
        )
        if report is None:
            return code
    except Exception as e:  # noqa: BLE001 - mapped to exit codes
        return _fail(e, _classify(e))

    try:
        if "csv" in cfg.formats and table is not None:
            write_timeseries_csv(os.path.join(out_dir, "timeseries.csv"), table)
        if "json" in cfg.formats:
            write_report_json(
                os.path.join(out_dir, "report.json"), cfg, report.to_json()
            )
    except NumericalValidityError as e:
        return _fail(e, EXIT_NUMERICAL)
    return code


def _load_config(args):
    text = ""
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    overrides = list(args.set or [])
    cfg = parse_config(text, overrides)
    if getattr(args, "out", None):
        cfg = RunConfig(
            scenario=cfg.scenario, model=cfg.model, integrator=cfg.integrator,
            t_end=cfg.t_end, ladder=cfg.ladder, c0=cfg.c0, out_dir=args.out,
            formats=cfg.formats, seed=cfg.seed,
        )
    if getattr(args, "format", None):
        parts = tuple(s.strip() for s in args.format.split(","))
        for s in parts:
            if s not in ("csv", "json"):
                raise ConfigError(f"unknown format {s!r}")
        cfg = RunConfig(
            scenario=cfg.scenario, model=cfg.model, integrator=cfg.integrator,
            t_end=cfg.t_end, ladder=cfg.ladder, c0=cfg.c0, out_dir=cfg.out_dir,
            formats=parts, seed=cfg.seed,
        )
    return cfg


def cmd_simulate(args):
    try:
        cfg = _load_config(args)
    except (ConfigError, OSError) as e:
        return _fail(e, EXIT_USAGE)
    return run(cfg)


def cmd_ladder_compare(args):
    args.set = list(args.set or []) + ["scenario=ladder-compare"]
    try:
        cfg = _load_config(args)
    except (ConfigError, OSError) as e:
        return _fail(e, EXIT_USAGE)
    return run(cfg)


def _sweep_job(payload):
    base_text, overrides, out_dir, fmt = payload
    try:
        cfg = parse_config(base_text, overrides)
        cfg = RunConfig(
            scenario=cfg.scenario, model=cfg.model, integrator=cfg.integrator,
            t_end=cfg.t_end, ladder=cfg.ladder, c0=cfg.c0, out_dir=out_dir,
            formats=fmt or cfg.formats, seed=cfg.seed,
        )
    except ConfigError as e:
        return {"error": str(e), "exit_code": EXIT_USAGE}
    code = run(cfg)
    result = {"exit_code": code}
    report_path = os.path.join(out_dir, "report.json")
    if os.path.exists(report_path):
        with open(report_path, encoding="utf-8") as fh:
            result["report"] = json.load(fh)["report"]
    return result


def cmd_sweep(args):
    if not args.sweep:
        return _fail(
            ConfigError("sweep requires at least one --sweep key=v1,v2,..."),
            EXIT_USAGE,
        )
    text = ""
    try:
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        parse_config(text, list(args.set or []))  # validate the base early
    except (ConfigError, OSError) as e:
        return _fail(e, EXIT_USAGE)

    axes = []
    for axis in args.sweep:
        if "=" not in axis:
            return _fail(
                ConfigError(f"--sweep {axis!r} is not key=v1,v2,..."),
                EXIT_USAGE,
            )
        key, _, values = axis.partition("=")
        key = key.strip()
        vals = [v.strip() for v in values.split(",") if v.strip()]
        if not vals:
            return _fail(
                ConfigError(f"--sweep {key!r} has no values"), EXIT_USAGE
            )
        axes.append((key, vals))

    out_root = args.out or DEFAULT_OUT_DIR
    try:
        _prepare_out_dir(out_root)
    except OSError as e:
        return _fail(e, EXIT_USAGE)

    fmt = None
    if args.format:
        fmt = tuple(s.strip() for s in args.format.split(","))

    jobs = []
    for combo in itertools.product(*(vals for _, vals in axes)):
        pairs = [f"{key}={val}" for (key, _), val in zip(axes, combo)]
        label = "_".join(p.replace("=", "-") for p in pairs)
        job_dir = os.path.join(out_root, label)
        overrides = list(args.set or []) + pairs
        jobs.append((label, (text, overrides, job_dir, fmt)))

    results = {}
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        for (label, _), result in zip(
            jobs, pool.map(_sweep_job, (payload for _, payload in jobs))
        ):
            results[label] = result

    merged = {
        "artifact_version": __version__,
        "jobs": {k: results[k] for k in sorted(results)},
    }
    path = os.path.join(out_root, "sweep.json")
    with open(path, "wb") as fh:
        fh.write((json.dumps(merged, sort_keys=True, indent=2) + "\n").encode())
    worst = max(r.get("exit_code", EXIT_USAGE) for r in results.values())
    return worst


def _check(name, ok, detail=""):
    status = "pass" if ok else "FAIL"
    print(f"{status}  {name}" + (f"  ({detail})" if detail else ""))
    return ok


def cmd_validate(args):
    """Seeded built-in property checks covering the numerical core."""
    from .dynamics import ModelParams, integrate
    from .integrator import IntegratorConfig
    from .measures import concurrence, l1_coherence
    from .states import Factor, partial_trace

    rng = np.random.default_rng(args.seed)
    ok = True

    # zero-coupling identity: with Omega_a = Omega_b = 0 the state
    # (1,0,0,0) sees no coupling at all and must be exactly stationary
    p0 = ModelParams(
        Omega=1.0, Omega_a=0.0, Omega_b=0.0, omega_a=22.0, omega_b=11.5,
        omega01_0=20.0, omega20_0=60.0, v1=3e-4, v2=3e-4,
    )
    c0 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    traj = integrate(c0, p0, 10.0, IntegratorConfig())
    ok &= _check(
        "zero-coupling identity",
        bool(np.allclose(traj.states[-1], c0, atol=1e-10)),
    )

    # Landau-Zener survival for two sweep rates; the +/-320 detuning
    # window keeps the residual post-crossing interference (~Omega/delta)
    # below the 2% tolerance
    for v1, v2, t_end, alpha in (
        (0.05, 1.0 / 180.0, 160.0, 4.0),
        (0.1, 1.0 / 90.0, 80.0, 8.0),
    ):
        p = ModelParams(
            Omega=1.0, Omega_a=0.0, Omega_b=0.0, omega_a=1.0, omega_b=1.0,
            omega01_0=40.0, omega20_0=360.0, v1=v1, v2=v2,
        )
        c0 = np.array([0.0, 1.0, 0.0, 0.0], dtype=complex)
        traj = integrate(c0, p, t_end, IntegratorConfig())
        survival = float(np.abs(traj.states[-1][1]) ** 2)
        expect = float(np.exp(-2.0 * np.pi / alpha))
        ok &= _check(
            f"Landau-Zener survival (alpha={alpha:g})",
            abs(survival - expect) <= 0.02 * expect,
            f"{survival:.5f} vs {expect:.5f}",
        )

    # partial trace against the 16-dimensional embedding
    from .states import BASIS_LABELS

    def brute(amps, keep):
        psi = np.zeros(16, dtype=complex)
        for k in range(4):
            bits = BASIS_LABELS[k]
            psi[bits[0] * 8 + bits[1] * 4 + bits[2] * 2 + bits[3]] += amps[k]
        rho16 = np.outer(psi, psi.conj()).reshape((2,) * 8)
        traced = [f for f in range(4) if f not in keep]
        for f in sorted(traced, reverse=True):
            rho16 = np.trace(rho16, axis1=f, axis2=f + rho16.ndim // 2)
        m = rho16.reshape(4, 4)
        if keep[0] > keep[1]:  # embedding keeps factor order; swap qubits
            m = m.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
        return m

    worst = 0.0
    for _ in range(200):
        amps = rng.normal(size=4) + 1j * rng.normal(size=4)
        amps /= np.linalg.norm(amps)
        keep = tuple(rng.choice(4, size=2, replace=False))
        keep = (Factor(int(keep[0])), Factor(int(keep[1])))
        rho = partial_trace(amps, keep)
        worst = max(worst, float(np.max(np.abs(rho.matrix - brute(amps, keep)))))
    ok &= _check("partial trace vs embedding", worst <= 1e-12, f"max {worst:.2e}")

    # concurrence equals the single-coherence closed form
    worst = 0.0
    for _ in range(200):
        amps = rng.normal(size=4) + 1j * rng.normal(size=4)
        amps /= np.linalg.norm(amps)
        rho = partial_trace(amps, (Factor.T, Factor.P))
        closed = 2.0 * abs(amps[1] * np.conj(amps[2]))
        worst = max(worst, abs(concurrence(rho) - closed))
        worst = max(worst, abs(l1_coherence(rho) - closed))
    ok &= _check(
        "concurrence and l1 closed form", worst <= 1e-10, f"max {worst:.2e}"
    )

    # unitarity on random parameter draws
    worst = 0.0
    for _ in range(args.draws):
        p = ModelParams(
            Omega=1.0,
            Omega_a=float(rng.uniform(0.01, 0.2)),
            Omega_b=float(rng.uniform(0.01, 0.2)),
            omega_a=float(rng.uniform(5, 40)),
            omega_b=float(rng.uniform(5, 20)),
            omega01_0=float(rng.uniform(5, 40)),
            omega20_0=float(rng.uniform(5, 60)),
            v1=float(rng.uniform(0, 1e-3)),
            v2=float(rng.uniform(0, 1e-3)),
        )
        amps = rng.normal(size=4) + 1j * rng.normal(size=4)
        amps /= np.linalg.norm(amps)
        traj = integrate(amps, p, 100.0, IntegratorConfig(sample_interval=10.0))
        worst = max(worst, float(traj.norm_drift.max()))
    ok &= _check(
        f"unitarity over {args.draws} random draws",
        worst <= 1e-8,
        f"max drift {worst:.2e}",
    )

    return EXIT_OK if ok else EXIT_NUMERICAL


def build_parser():
    parser = argparse.ArgumentParser(
        prog="squidsim",
        description=(
            "Simulate a chirped four-level SQUID artificial atom coupled to "
            "single-mode radiation: twin-photon generation, entanglement "
            "transfer and cascade comparisons."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        sp.add_argument("--config", help="path to a key=value config file")
        sp.add_argument(
            "--set", action="append", metavar="KEY=VALUE",
            help="override a config key (repeatable)",
        )
        if out:
            sp.add_argument("--out", help="output directory")
            sp.add_argument(
                "--format", help="comma list of output formats: csv,json"
            )

    sp = sub.add_parser("simulate", help="run one scenario and emit artifacts")
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser(
        "ladder-compare",
        help="compare the three-level cascade against the two-photon model",
    )
    common(sp)
    sp.set_defaults(func=cmd_ladder_compare)

    sp = sub.add_parser("sweep", help="run a grid of scenario jobs")
    common(sp)
    sp.add_argument(
        "--sweep", action="append", metavar="KEY=V1,V2,...",
        help="sweep axis (repeatable; Cartesian product)",
    )
    sp.add_argument("--jobs", type=int, default=None, help="worker processes")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("validate", help="run the built-in property checks")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--draws", type=int, default=20)
    sp.set_defaults(func=cmd_validate)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
