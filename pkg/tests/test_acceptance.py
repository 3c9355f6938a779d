"""Acceptance gate: the nine structural and numerical criteria.

Each test emits a single PASS/FAIL line (printed before its assertions)
so the verdicts read off the log directly.
"""

import json

import numpy as np
import pytest

from squidsim.cli import main
from squidsim.dynamics import ModelParams, integrate
from squidsim.integrator import IntegratorConfig, solve
from squidsim.ladder import LadderParams, compare_effective_vs_full
from squidsim.measures import concurrence, eof_from_concurrence, l1_coherence
from squidsim.states import Factor, partial_trace

from test_states import brute_force_reduction, random_state


def verdict(n, ok, detail):
    line = f"[CRITERION {n}] {'PASS' if ok else 'FAIL'}: {detail}"
    print(line, flush=True)
    return ok


def test_criterion_1_unitarity(rng):
    """100 random parameter draws integrated to t = 1e3 keep the norm
    drift at or below 1e-8."""
    worst = 0.0
    for _ in range(100):
        p = ModelParams(
            Omega=1.0,
            Omega_a=float(rng.uniform(0.01, 0.2)),
            Omega_b=float(rng.uniform(0.01, 0.2)),
            omega_a=float(rng.uniform(5.0, 40.0)),
            omega_b=float(rng.uniform(5.0, 20.0)),
            omega01_0=float(rng.uniform(5.0, 40.0)),
            omega20_0=float(rng.uniform(5.0, 60.0)),
            v1=float(rng.uniform(0.0, 1e-3)),
            v2=float(rng.uniform(0.0, 1e-3)),
        )
        c0 = rng.normal(size=4) + 1j * rng.normal(size=4)
        c0 /= np.linalg.norm(c0)
        traj = integrate(c0, p, 1e3, IntegratorConfig(sample_interval=100.0))
        worst = max(worst, float(traj.norm_drift.max()))
    assert verdict(
        1, worst <= 1e-8, f"max |norm-1| = {worst:.3e} over 100 draws (limit 1e-8)"
    )


def test_criterion_2_measure_oracles(pair_run):
    """Concurrence by the R-matrix route equals the X-state closed form on
    1000 trajectory samples; the EoF reference point matches an
    extended-precision evaluation."""
    mpmath = pytest.importorskip("mpmath")
    traj, _, _ = pair_run
    idx = np.linspace(0, len(traj.times) - 1, 1000).astype(int)
    worst = 0.0
    for i in idx:
        c = traj.states[i]
        c = c / np.linalg.norm(c)
        rho_sq = partial_trace(c, (Factor.T, Factor.P))
        rho_ab = partial_trace(c, (Factor.A, Factor.B))
        worst = max(
            worst,
            abs(concurrence(rho_sq) - 2.0 * abs(c[1] * np.conj(c[2]))),
            abs(concurrence(rho_ab) - 2.0 * abs(c[0] * np.conj(c[3]))),
        )
    mpmath.mp.dps = 50
    C = mpmath.mpf("0.96")
    x = mpmath.sqrt(1 - C * C)
    p = (1 + x) / 2
    ref = -(p * mpmath.log(p, 2) + (1 - p) * mpmath.log(1 - p, 2))
    eof_err = abs(eof_from_concurrence(0.96) - float(ref))
    ok = worst <= 1e-10 and eof_err <= 1e-5 and abs(float(ref) - 0.94268) < 1e-5
    assert verdict(
        2,
        ok,
        f"max concurrence deviation {worst:.3e} (limit 1e-10); "
        f"EoF(0.96) error {eof_err:.3e} vs 0.94268 (limit 1e-5)",
    )


def test_criterion_3_partial_trace_oracle(rng):
    """Closed-form reductions equal the 16-dimensional embedding on 1000
    random states; the photon-pair and intra-SQUID reductions show the
    printed structure (zero pattern and coherence position)."""
    worst = 0.0
    pairs = [(a, b) for a in Factor for b in Factor if a != b]
    for _ in range(1000):
        c = random_state(rng)
        keep = pairs[int(rng.integers(len(pairs)))]
        rho = partial_trace(c, keep).matrix
        worst = max(
            worst, float(np.max(np.abs(rho - brute_force_reduction(c, keep))))
        )
    c = random_state(rng)
    pops = np.abs(c) ** 2
    m_ab = partial_trace(c, (Factor.A, Factor.B)).matrix
    m_sq = partial_trace(c, (Factor.T, Factor.P)).matrix
    structure = (
        np.isclose(m_ab[0, 0], pops[1] + pops[2])
        and np.isclose(m_ab[1, 1], pops[3])
        and np.isclose(m_ab[2, 2], pops[0])
        and m_ab[3, 3] == 0.0
        and np.isclose(m_ab[2, 1], c[0] * np.conj(c[3]))
        and all(
            m_ab[i, j] == 0.0
            for i, j in ((0, 1), (0, 2), (0, 3), (1, 3), (2, 3))
        )
        and np.isclose(m_sq[0, 0], pops[0] + pops[3])
        and np.isclose(m_sq[1, 1], pops[2])
        and np.isclose(m_sq[2, 2], pops[1])
        and m_sq[3, 3] == 0.0
        and np.isclose(m_sq[2, 1], c[1] * np.conj(c[2]))
    )
    ok = worst <= 1e-12 and bool(structure)
    assert verdict(
        3,
        ok,
        f"max embedding deviation {worst:.3e} (limit 1e-12); "
        f"printed reduction structures {'reproduced' if structure else 'BROKEN'}",
    )


def test_criterion_4_integrator_oracles():
    """Resonant Rabi error at the half-transfer time stays below 1e-8 and
    Landau-Zener survival matches exp(-2 pi Omega^2/alpha) within 2% for
    two sweep rates."""

    def rabi(t, y):
        return np.array([-1j * y[1], -1j * y[0]])

    _, states, _, _ = solve(
        rabi,
        np.array([1.0 + 0j, 0.0 + 0j]),
        np.pi / 2.0,
        IntegratorConfig(sample_interval=np.pi / 2.0),
    )
    rabi_err = abs(abs(states[-1][1]) ** 2 - 1.0)

    lz = []
    for v1, v2, t_end, alpha in (
        (0.05, 1.0 / 180.0, 160.0, 4.0),
        (0.1, 1.0 / 90.0, 80.0, 8.0),
    ):
        p = ModelParams(
            Omega=1.0, Omega_a=0.0, Omega_b=0.0, omega_a=1.0, omega_b=1.0,
            omega01_0=40.0, omega20_0=360.0, v1=v1, v2=v2,
        )
        c0 = np.array([0.0, 1.0, 0.0, 0.0], dtype=complex)
        traj = integrate(c0, p, t_end, IntegratorConfig(sample_interval=t_end))
        survival = abs(traj.states[-1][1]) ** 2
        expected = np.exp(-2.0 * np.pi / alpha)
        lz.append(abs(survival - expected) / expected)
    ok = rabi_err <= 1e-8 and all(r <= 0.02 for r in lz)
    assert verdict(
        4,
        ok,
        f"Rabi population error {rabi_err:.3e} (limit 1e-8); "
        f"Landau-Zener relative errors {lz[0]:.4f}, {lz[1]:.4f} (limit 0.02)",
    )


def test_criterion_5_ladder_structure(ladder_comparison):
    """The cascade at g/Delta = 1e-2 keeps the intermediate level below
    10 (g/Delta)^2 and is compared against the printed two-photon model
    over one effective Rabi period.

    The second clause asks the bare two-photon Rabi model to match within
    0.05, but eliminating the intermediate level also produces level
    shifts g^2/Delta and 2 g^2/Delta on the outer states; their
    difference equals the two-photon coupling scale itself, so the bare
    model's outer populations deviate by an O(1) amount (detuned Rabi
    capped at 8/9) at every g/Delta.  The shift-corrected eliminated
    model agrees to O(g/Delta); both numbers are printed.
    """
    cmp = ladder_comparison
    bound = 10.0 * cmp.g_over_delta**2
    clause_a = cmp.max_intermediate_population <= bound
    clause_b = cmp.max_outer_discrepancy <= 0.05
    ok = clause_a and clause_b
    assert verdict(
        5,
        ok,
        f"intermediate population {cmp.max_intermediate_population:.3e} "
        f"(limit {bound:.1e}) -> {'ok' if clause_a else 'EXCEEDED'}; "
        f"bare-model outer discrepancy {cmp.max_outer_discrepancy:.3f} "
        f"(limit 0.05, shift-corrected model reaches "
        f"{cmp.max_outer_discrepancy_shift_corrected:.2e}) -> "
        f"{'ok' if clause_b else 'EXCEEDED'}",
    )


def test_criterion_6_pair_generation_structure(pair_run):
    """Pair generation with committed defaults: three ordered population
    crossings and final P4 of at least 0.95."""
    _, report, _ = pair_run
    t12 = report.crossing_times["P1/P2"]
    t23 = report.crossing_times["P2/P3"]
    t34 = report.crossing_times["P3/P4"]
    p4 = report.final_populations[3]
    ok = t12 < t23 < t34 and p4 >= 0.95
    assert verdict(
        6,
        ok,
        f"crossings t12={t12:.1f} < t23={t23:.1f} < t34={t34:.1f}; "
        f"final P4 = {p4:.4f} (limit 0.95)",
    )


def test_criterion_7_entanglement_peak_alignment(pair_run):
    """Each EF curve peaks within 5 time units of its population crossing,
    in temporal order EF1, EF2, EF3."""
    _, report, _ = pair_run
    offsets = []
    times = []
    for k, stage in enumerate(("P1/P2", "P2/P3", "P3/P4")):
        peak = report.ef_peak_times[f"EF{k + 1}"]
        offsets.append(abs(peak["time"] - report.crossing_times[stage]))
        times.append(peak["time"])
    ok = all(d <= 5.0 for d in offsets) and times[0] <= times[1] <= times[2]
    assert verdict(
        7,
        ok,
        "peak-to-crossing offsets "
        + ", ".join(f"{d:.2f}" for d in offsets)
        + " (limit 5.0); peak times ordered "
        + ("yes" if times[0] <= times[1] <= times[2] else "NO"),
    )


def test_criterion_8_transfer_structure(transfer_run):
    """Entanglement transfer: starts maximally entangled, ends with the
    modes entangled and the SQUID disentangled, coherence co-transfers
    (concurrence equals l1 coherence at every sample) and the final state
    matches the printed target."""
    traj, report, table = transfer_run
    co_sq = float(np.max(np.abs(table.concurrence_squid - table.cl1_squid)))
    co_ab = float(np.max(np.abs(table.concurrence_ab - table.cl1_ab)))
    ok = (
        abs(report.initial_eof_squid - 1.0) <= 1e-9
        and report.final_eof_ab >= 0.95
        and report.final_eof_squid <= 0.05
        and co_sq <= 1e-10
        and co_ab <= 1e-10
        and report.transfer_fidelity >= 0.95
    )
    assert verdict(
        8,
        ok,
        f"EoF(squid): {report.initial_eof_squid:.6f} -> "
        f"{report.final_eof_squid:.2e}; EoF(modes) -> "
        f"{report.final_eof_ab:.4f} (limit 0.95); max |concurrence - l1| = "
        f"{max(co_sq, co_ab):.2e} (limit 1e-10); fidelity = "
        f"{report.transfer_fidelity:.4f} (limit 0.95)",
    )


def test_criterion_9_cli_determinism(tmp_path):
    """Repeated CLI runs with identical configs write byte-identical
    CSV and JSON artifacts."""
    args = [
        "simulate",
        "--set", "scenario=custom",
        "--set", "c0=0.6,0,0,0.8j",
        "--set", "t_end=25",
    ]
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(args + ["--out", str(out)]) == 0
        outs.append(out)
    same_csv = (
        (outs[0] / "timeseries.csv").read_bytes()
        == (outs[1] / "timeseries.csv").read_bytes()
    )
    same_json = (
        (outs[0] / "report.json").read_bytes()
        == (outs[1] / "report.json").read_bytes()
    )
    ok = same_csv and same_json
    assert verdict(
        9,
        ok,
        f"timeseries.csv byte-identical: {same_csv}; "
        f"report.json byte-identical: {same_json}",
    )
