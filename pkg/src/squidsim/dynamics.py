"""Chirped four-level amplitude dynamics in the interaction picture.

The level |0par 1perp> is ramped up and |2par 0perp> ramped down,

    w01(t) = w01(0) (1 + v1 t),       w20(t) = w20(0) (1 - v2 t),

and the free-evolution phases r(t) are their time integrals.  The four
amplitude equations couple c1..c4 in a chain through Omega_a (photon-a
absorption), Omega (intra-SQUID transfer) and sqrt(2) Omega_b (two-photon
emission); the coefficient matrix is Hermitian at every instant, so the
exact flow is unitary and norm drift measures integration error.
"""

import cmath
from dataclasses import dataclass

import numpy as np

from .integrator import IntegratorConfig, check_norm_drift, solve
from .states import Amplitudes

SQRT2 = float(np.sqrt(2.0))

# Norm-drift bounds: hard failure threshold during a run, and the required
# quality at the final time.
DRIFT_LIMIT = 1e-6
DRIFT_FINAL = 1e-8


@dataclass(frozen=True)
class ModelParams:
    """Physical rates and frequencies, in units where Omega = 1.

    Omega      coupling |0par 1perp> <-> |2par 0perp>
    Omega_a    photon-a coupling |0par 0perp> <-> |0par 1perp>
    Omega_b    effective two-photon coupling g^2/Delta
    omega_a    incident-photon frequency
    omega_b    emitted-photon frequency
    omega01_0  w01 at t=0 (level being ramped up at rate v1)
    omega20_0  w20 at t=0 (level being ramped down at rate v2)
    omega00    ground-level frequency, gauge-fixed to 0
    """

    Omega: float = 1.0
    Omega_a: float = 0.1
    Omega_b: float = 0.1
    omega_a: float = 22.0
    omega_b: float = 11.5
    omega01_0: float = 20.0
    omega20_0: float = 60.0
    omega00: float = 0.0
    v1: float = 3e-4
    v2: float = 3e-4

    def __post_init__(self):
        fields = (
            self.Omega, self.Omega_a, self.Omega_b, self.omega_a, self.omega_b,
            self.omega01_0, self.omega20_0, self.omega00, self.v1, self.v2,
        )
        if not all(np.isfinite(x) for x in fields):
            raise ValueError("all parameters must be finite")
        if self.Omega <= 0:
            raise ValueError("Omega must be positive")
        if self.v1 < 0 or self.v2 < 0:
            raise ValueError("chirp rates must be non-negative")

    def replace(self, **kwargs):
        from dataclasses import replace

        return replace(self, **kwargs)


@dataclass(frozen=True)
class Trajectory:
    """Sampled result of one integration (times in units of 1/Omega)."""

    times: np.ndarray
    states: np.ndarray  # (n_samples, 4) complex
    norm_drift: np.ndarray
    steps_accepted: int
    steps_rejected: int

    def amplitudes(self, i) -> Amplitudes:
        return Amplitudes.from_array(self.states[i])

    @property
    def populations(self):
        return np.abs(self.states) ** 2


def chirped_frequency(omega0, v, t, direction):
    """Level frequency under a linear chirp, w0 (1 +/- v t)."""
    if direction == "up":
        return omega0 * (1.0 + v * t)
    if direction == "down":
        return omega0 * (1.0 - v * t)
    raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")


def phase_r(omega0, v, t, direction):
    """Accumulated free-evolution phase, the time integral of the chirp."""
    if direction == "up":
        return omega0 * (t + 0.5 * v * t * t)
    if direction == "down":
        return omega0 * (t - 0.5 * v * t * t)
    raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")


def _phases(t, p: ModelParams):
    r01 = p.omega01_0 * (t + 0.5 * p.v1 * t * t)
    r20 = p.omega20_0 * (t - 0.5 * p.v2 * t * t)
    phi_a = (p.omega00 + p.omega_a) * t - r01
    phi_omega = r01 - r20
    phi_b = (p.omega00 + 2.0 * p.omega_b) * t - r20
    return phi_a, phi_omega, phi_b


def rhs(t, c, p: ModelParams):
    """Time derivative of the four amplitudes at time t."""
    arr = c.as_array() if isinstance(c, Amplitudes) else np.asarray(c, dtype=complex)
    phi_a, phi_omega, phi_b = _phases(t, p)
    ea = cmath.exp(1j * phi_a)
    eo = cmath.exp(1j * phi_omega)
    eb = cmath.exp(1j * phi_b)
    c1, c2, c3, c4 = arr
    return np.array(
        [
            -1j * p.Omega_a * ea * c2,
            -1j * (p.Omega_a * c1 / ea + p.Omega * eo * c3),
            -1j * (p.Omega * c2 / eo + SQRT2 * p.Omega_b * c4 / eb),
            -1j * SQRT2 * p.Omega_b * eb * c3,
        ]
    )


def coefficient_matrix(t, p: ModelParams):
    """Matrix M(t) with dc/dt = -i M c; Hermitian for every t."""
    phi_a, phi_omega, phi_b = _phases(t, p)
    ea = cmath.exp(1j * phi_a)
    eo = cmath.exp(1j * phi_omega)
    eb = cmath.exp(1j * phi_b)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 1] = p.Omega_a * ea
    m[1, 0] = p.Omega_a / ea
    m[1, 2] = p.Omega * eo
    m[2, 1] = p.Omega / eo
    m[2, 3] = SQRT2 * p.Omega_b / eb
    m[3, 2] = SQRT2 * p.Omega_b * eb
    return m


def make_rhs(p: ModelParams):
    """Closure form of `rhs` with parameters bound to locals (hot path)."""
    Oa = p.Omega_a
    Om = p.Omega
    s2Ob = SQRT2 * p.Omega_b
    w01, w20 = p.omega01_0, p.omega20_0
    v1, v2 = p.v1, p.v2
    wa = p.omega00 + p.omega_a
    wb2 = p.omega00 + 2.0 * p.omega_b

    def f(t, c):
        r01 = w01 * (t + 0.5 * v1 * t * t)
        r20 = w20 * (t - 0.5 * v2 * t * t)
        ea = cmath.exp(1j * (wa * t - r01))
        eo = cmath.exp(1j * (r01 - r20))
        eb = cmath.exp(1j * (wb2 * t - r20))
        c1, c2, c3, c4 = c
        return np.array(
            [
                -1j * Oa * ea * c2,
                -1j * (Oa * c1 / ea + Om * eo * c3),
                -1j * (Om * c2 / eo + s2Ob * c4 / eb),
                -1j * s2Ob * eb * c3,
            ]
        )

    return f


def integrate(c0, p: ModelParams, t_end, cfg: IntegratorConfig = None) -> Trajectory:
    """Adaptive integration of the amplitude equations from t=0 to t_end.

    No renormalization is applied; the recorded drift |norm - 1| is the
    integration-quality diagnostic.  Raises StabilityError if the drift
    passes 1e-6 at any sample or 1e-8 at the final time.
    """
    cfg = cfg or IntegratorConfig()
    if isinstance(c0, Amplitudes):
        c0.require_normalized()
        y0 = c0.as_array()
    else:
        y0 = Amplitudes.from_array(c0).as_array()
        Amplitudes.from_array(y0).require_normalized()
    times, states, acc, rej = solve(make_rhs(p), y0, float(t_end), cfg)
    drift = np.abs(np.sum(np.abs(states) ** 2, axis=1) - 1.0)
    check_norm_drift(times, drift, DRIFT_LIMIT, DRIFT_FINAL)
    return Trajectory(times, states, drift, acc, rej)
