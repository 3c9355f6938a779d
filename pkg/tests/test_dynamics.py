import numpy as np
import pytest

from squidsim.dynamics import (
    ModelParams,
    chirped_frequency,
    coefficient_matrix,
    integrate,
    make_rhs,
    phase_r,
    rhs,
)
from squidsim.errors import IntegrationError, StabilityError
from squidsim.integrator import IntegratorConfig, check_norm_drift, solve


class TestChirp:
    def test_frequency_up(self):
        # omega0 (1 + v t) = 5 * (1 + 0.1 * 2)
        assert chirped_frequency(5.0, 0.1, 2.0, "up") == pytest.approx(6.0)

    def test_frequency_down(self):
        # omega0 (1 - v t) = 5 * (1 - 0.1 * 2)
        assert chirped_frequency(5.0, 0.1, 2.0, "down") == pytest.approx(4.0)

    def test_phase_is_frequency_integral(self):
        # numerical quadrature of the chirped frequency matches phase_r
        t = np.linspace(0.0, 7.0, 20001)
        for direction in ("up", "down"):
            f = chirped_frequency(3.0, 2e-3, t, direction)
            quad = np.trapezoid(f, t)
            assert phase_r(3.0, 2e-3, 7.0, direction) == pytest.approx(
                quad, rel=1e-9
            )

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            chirped_frequency(1.0, 0.1, 1.0, "sideways")


class TestModelParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ModelParams(Omega=0.0)
        with pytest.raises(ValueError):
            ModelParams(v1=-1e-3)
        with pytest.raises(ValueError):
            ModelParams(omega_a=float("nan"))

    def test_replace(self):
        p = ModelParams().replace(Omega_a=0.5)
        assert p.Omega_a == 0.5


class TestRhs:
    def test_matches_coefficient_matrix(self, rng):
        p = ModelParams()
        for _ in range(20):
            t = float(rng.uniform(0, 1000))
            c = rng.normal(size=4) + 1j * rng.normal(size=4)
            assert np.allclose(
                rhs(t, c, p), -1j * coefficient_matrix(t, p) @ c, atol=1e-14
            )

    def test_closure_matches(self, rng):
        p = ModelParams()
        f = make_rhs(p)
        for _ in range(20):
            t = float(rng.uniform(0, 1000))
            c = rng.normal(size=4) + 1j * rng.normal(size=4)
            assert np.allclose(f(t, c), rhs(t, c, p), atol=1e-15)

    def test_coefficient_matrix_hermitian(self, rng):
        p = ModelParams()
        for _ in range(50):
            m = coefficient_matrix(float(rng.uniform(0, 2000)), p)
            assert np.max(np.abs(m - m.conj().T)) < 1e-14


class TestIntegratorConfig:
    def test_defaults(self):
        cfg = IntegratorConfig()
        assert cfg.rtol == 1e-10 and cfg.atol == 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            IntegratorConfig(rtol=0.0)
        with pytest.raises(ValueError):
            IntegratorConfig(sample_interval=-1.0)
        with pytest.raises(ValueError):
            IntegratorConfig(initial_step=0.0)


class TestSolve:
    def test_sampling_grid(self):
        f = lambda t, y: -1j * y
        times, states, _, _ = solve(
            f, np.array([1.0 + 0j]), 5.25, IntegratorConfig(sample_interval=0.5)
        )
        expected = [0.5 * k for k in range(11)] + [5.25]
        assert np.allclose(times, expected)

    def test_exponential_accuracy(self):
        f = lambda t, y: -1j * y
        times, states, _, _ = solve(
            f, np.array([1.0 + 0j]), 10.0, IntegratorConfig()
        )
        assert abs(states[-1][0] - np.exp(-10j)) < 1e-10

    def test_resonant_rabi_oracle(self):
        # two-level resonant Rabi at unit rate: exact population swap at
        # t = pi/2
        def f(t, y):
            return np.array([-1j * y[1], -1j * y[0]])

        times, states, _, _ = solve(
            f,
            np.array([1.0 + 0j, 0.0 + 0j]),
            np.pi / 2.0,
            IntegratorConfig(sample_interval=np.pi / 2.0),
        )
        assert abs(abs(states[-1][1]) ** 2 - 1.0) < 1e-8
        assert abs(states[-1][0]) ** 2 < 1e-8

    def test_rejects_nonpositive_t_end(self):
        with pytest.raises(ValueError):
            solve(lambda t, y: y, np.array([1.0 + 0j]), 0.0, IntegratorConfig())

    def test_max_steps_budget(self):
        f = lambda t, y: -1j * 100.0 * y
        with pytest.raises(IntegrationError):
            solve(f, np.array([1.0 + 0j]), 100.0, IntegratorConfig(max_steps=10))


class TestCheckNormDrift:
    def test_accepts_clean_record(self):
        check_norm_drift(np.array([0.0, 1.0]), np.array([0.0, 1e-10]))

    def test_mid_run_limit(self):
        with pytest.raises(StabilityError) as err:
            check_norm_drift(np.array([0.0, 1.0, 2.0]), np.array([0, 1e-5, 0]))
        assert err.value.time == 1.0

    def test_final_limit(self):
        with pytest.raises(StabilityError):
            check_norm_drift(np.array([0.0, 1.0]), np.array([0.0, 1e-7]))


class TestIntegrate:
    def test_zero_coupling_identity(self):
        p = ModelParams(Omega_a=0.0, Omega_b=0.0)
        c0 = np.array([1.0, 0, 0, 0], dtype=complex)
        traj = integrate(c0, p, 10.0, IntegratorConfig())
        assert np.allclose(traj.states[-1], c0, atol=1e-12)

    def test_landau_zener_survival(self):
        # c2/c3 crossing swept linearly at rate alpha; survival follows
        # exp(-2 pi Omega^2 / alpha).  Wide +/-320 detuning window keeps
        # the finite-time interference residue below the tolerance.
        for v1, v2, t_end, alpha in (
            (0.05, 1.0 / 180.0, 160.0, 4.0),
            (0.1, 1.0 / 90.0, 80.0, 8.0),
        ):
            p = ModelParams(
                Omega=1.0, Omega_a=0.0, Omega_b=0.0, omega_a=1.0, omega_b=1.0,
                omega01_0=40.0, omega20_0=360.0, v1=v1, v2=v2,
            )
            assert p.omega01_0 * v1 + p.omega20_0 * v2 == pytest.approx(alpha)
            c0 = np.array([0.0, 1.0, 0.0, 0.0], dtype=complex)
            traj = integrate(c0, p, t_end, IntegratorConfig(sample_interval=t_end))
            survival = abs(traj.states[-1][1]) ** 2
            expected = np.exp(-2.0 * np.pi / alpha)
            assert survival == pytest.approx(expected, rel=0.02)

    def test_unitarity_random_draws(self, rng):
        worst = 0.0
        for _ in range(10):
            p = ModelParams(
                Omega_a=float(rng.uniform(0.01, 0.2)),
                Omega_b=float(rng.uniform(0.01, 0.2)),
                omega_a=float(rng.uniform(5, 40)),
                omega_b=float(rng.uniform(5, 20)),
                omega01_0=float(rng.uniform(5, 40)),
                omega20_0=float(rng.uniform(5, 60)),
                v1=float(rng.uniform(0, 1e-3)),
                v2=float(rng.uniform(0, 1e-3)),
            )
            c0 = rng.normal(size=4) + 1j * rng.normal(size=4)
            c0 /= np.linalg.norm(c0)
            traj = integrate(c0, p, 200.0, IntegratorConfig(sample_interval=20.0))
            worst = max(worst, float(traj.norm_drift.max()))
        assert worst <= 1e-8

    def test_tolerance_convergence(self):
        p = ModelParams()
        c0 = np.array([1.0, 0, 0, 0], dtype=complex)
        loose = integrate(c0, p, 50.0, IntegratorConfig(rtol=1e-8, atol=1e-10))
        tight = integrate(c0, p, 50.0, IntegratorConfig(rtol=5e-9, atol=1e-10))
        diff = np.max(np.abs(loose.populations - tight.populations))
        assert diff <= 10 * 1e-8

    def test_rejects_unnormalized_initial_state(self):
        from squidsim.errors import NormalizationError

        with pytest.raises(NormalizationError):
            integrate(
                np.array([1.0, 1.0, 0, 0], dtype=complex),
                ModelParams(),
                1.0,
                IntegratorConfig(),
            )

    def test_trajectory_accessors(self):
        p = ModelParams(Omega_a=0.0, Omega_b=0.0)
        c0 = np.array([0.0, 0, 0, 1.0], dtype=complex)
        traj = integrate(c0, p, 2.0, IntegratorConfig())
        amps = traj.amplitudes(0)
        assert amps.c4 == 1.0
        assert traj.populations.shape == (len(traj.times), 4)
