import math

import numpy as np
import pytest

from qubitswap.errors import NonPhysicalInput, RangeError, ZeroNorm
from qubitswap.measures import (
    BlochAngles,
    DensityMatrix4,
    InitialStateClass,
    average_linear_entropy,
    classify_initial_state,
    concurrence_closed,
    concurrence_wootters,
    density_matrix,
    linear_entropy,
    post_bsm_projection,
)


def random_amplitude(rng):
    return math.sqrt(rng.uniform(0, 1)) * np.exp(1j * rng.uniform(0, 2 * math.pi))


class TestBlochAngles:
    def test_phi_wraps(self):
        assert BlochAngles(theta=1.0, phi=5 * math.pi).phi == pytest.approx(math.pi)

    def test_theta_range(self):
        with pytest.raises(RangeError):
            BlochAngles(theta=-0.1)
        with pytest.raises(RangeError):
            BlochAngles(theta=math.pi + 0.1)


class TestLinearEntropy:
    def test_maximum(self):
        assert linear_entropy(0.0, math.sqrt(0.5)) == pytest.approx(0.5)

    def test_ground_state_zero(self):
        assert linear_entropy(math.pi, 0.3 + 0.4j) == pytest.approx(0.0, abs=1e-30)

    def test_pure_state_zero(self):
        assert linear_entropy(0.0, 1.0) == 0.0

    def test_bounds(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            s = linear_entropy(rng.uniform(0, math.pi), random_amplitude(rng))
            assert 0 <= s <= 0.5 + 1e-12


class TestAverageLinearEntropy:
    def test_maximum_at_half(self):
        assert average_linear_entropy(math.sqrt(0.5)) == pytest.approx(1 / 6)

    @pytest.mark.parametrize("E", [0.0, 1.0, 1j])
    def test_extremes_zero(self, E):
        assert average_linear_entropy(E) == pytest.approx(0.0, abs=1e-15)

    def test_matches_bloch_sphere_monte_carlo(self):
        # Haar average of the theta-resolved entropy via cos(theta) ~ U(-1,1)
        rng = np.random.default_rng(21)
        p = 0.7
        e = math.sqrt(p)
        theta = np.arccos(rng.uniform(-1, 1, 200_000))
        samples = 2 * (1 - p) * p * np.cos(theta / 2) ** 4
        stderr = samples.std(ddof=1) / math.sqrt(len(samples))
        assert abs(samples.mean() - average_linear_entropy(e)) < 3 * stderr
        assert average_linear_entropy(e) == pytest.approx((2 / 3) * 0.3 * 0.7)


class TestPostBsmProjection:
    def test_symmetric_equator_state(self):
        q = BlochAngles(theta=math.pi / 2, phi=0.0)
        e = 0.6 - 0.3j
        s = post_bsm_projection(q, q, e)
        assert s.X == pytest.approx(e / 2)
        assert abs(s.Y) < 1e-15
        assert s.N == pytest.approx(abs(e) ** 2 / 2)

    def test_excited_cross_plus(self):
        # |e> (x) (|e>+|g>)/sqrt(2)
        s = post_bsm_projection(
            BlochAngles(theta=0.0), BlochAngles(theta=math.pi / 2, phi=0.0), 0.9
        )
        assert s.X == pytest.approx(math.sqrt(2) / 2 * 0.9)
        assert s.Y == pytest.approx(-math.sqrt(2) / 2)
        assert s.N == pytest.approx(0.9**2 + 0.5)

    def test_first_qubit_ground(self):
        s = post_bsm_projection(
            BlochAngles(theta=math.pi), BlochAngles(theta=0.3, phi=1.0), 0.8
        )
        assert s.X == 0  # exactly, despite cos(pi/2) rounding to 6e-17
        assert s.N == pytest.approx(abs(s.Y) ** 2)

    def test_rejects_superunitary_amplitude(self):
        with pytest.raises(RangeError):
            post_bsm_projection(BlochAngles(0.1), BlochAngles(0.2), 1.1)


class TestConcurrenceClosed:
    def test_singlet_branch_is_maximal(self):
        q = BlochAngles(theta=math.pi / 2, phi=0.0)
        for e in (1.0, 0.5, 0.1j, 1e-6):
            s = post_bsm_projection(q, q, e)
            assert concurrence_closed(s) == pytest.approx(1.0)

    def test_excited_cross_plus_formula(self):
        # 2p/(2p+1) with p = |E|^2
        q1, q2 = BlochAngles(0.0), BlochAngles(math.pi / 2, 0.0)
        assert concurrence_closed(post_bsm_projection(q1, q2, 1.0)) == pytest.approx(2 / 3)
        p = 0.37
        s = post_bsm_projection(q1, q2, math.sqrt(p))
        assert concurrence_closed(s) == pytest.approx(2 * p / (2 * p + 1))

    def test_zero_when_x_vanishes(self):
        s = post_bsm_projection(BlochAngles(math.pi), BlochAngles(0.4, 0.7), 0.5)
        assert concurrence_closed(s) == 0.0

    def test_zero_norm_raises(self):
        s = post_bsm_projection(BlochAngles(math.pi), BlochAngles(math.pi), 0.5)
        with pytest.raises(ZeroNorm):
            concurrence_closed(s)

    def test_monotone_in_p_at_fixed_angles(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            q1 = BlochAngles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            q2 = BlochAngles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            vals = []
            for p in np.linspace(0.01, 1.0, 12):
                s = post_bsm_projection(q1, q2, math.sqrt(p))
                if s.N < 1e-12:
                    break
                vals.append(concurrence_closed(s))
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


class TestDensityMatrix:
    def test_populations_excited_cross_plus(self):
        s = post_bsm_projection(
            BlochAngles(0.0), BlochAngles(math.pi / 2, 0.0), 1.0
        )
        pops = np.diag(density_matrix(s).matrix).real
        # |gg> population (1/2)/(p + 1/2) = 1/3 at p=1
        assert pops == pytest.approx([0, 1 / 3, 1 / 3, 1 / 3])

    def test_gg_population_grows_with_dissipation(self):
        q1, q2 = BlochAngles(0.0), BlochAngles(math.pi / 2, 0.0)
        pop_gg = []
        for p in (1.0, 0.6, 0.2):
            s = post_bsm_projection(q1, q2, math.sqrt(p))
            pop_gg.append(density_matrix(s).matrix[3, 3].real)
        assert pop_gg[0] < pop_gg[1] < pop_gg[2]

    def test_singlet_populations(self):
        q = BlochAngles(math.pi / 2, 0.0)
        s = post_bsm_projection(q, q, 0.7)
        pops = np.diag(density_matrix(s).matrix).real
        assert pops == pytest.approx([0, 0.5, 0.5, 0])

    def test_validation(self):
        with pytest.raises(NonPhysicalInput):
            DensityMatrix4(np.eye(4))  # trace 4
        with pytest.raises(NonPhysicalInput):
            DensityMatrix4(np.diag([0.5, 0.5, 0.5, -0.5]))
        m = np.diag([0.25, 0.25, 0.25, 0.25]).astype(complex)
        m[0, 1] = 1.0  # not Hermitian
        with pytest.raises(NonPhysicalInput):
            DensityMatrix4(m)


class TestConcurrenceWootters:
    def test_singlet(self):
        v = np.array([0, 1, -1, 0]) / math.sqrt(2)
        rho = DensityMatrix4(np.outer(v, v.conj()))
        assert concurrence_wootters(rho) == pytest.approx(1.0)

    def test_product_state(self):
        rho = DensityMatrix4(np.diag([0, 0, 0, 1.0]).astype(complex))
        assert concurrence_wootters(rho) == pytest.approx(0.0, abs=1e-10)

    def test_matches_closed_form(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            q1 = BlochAngles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            q2 = BlochAngles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            s = post_bsm_projection(q1, q2, random_amplitude(rng))
            if s.N < 1e-12:
                continue
            assert abs(
                concurrence_wootters(density_matrix(s)) - concurrence_closed(s)
            ) < 1e-8


class TestClassifyInitialState:
    @pytest.mark.parametrize(
        "q1,q2,expected",
        [
            ((0.0, 0.0), (0.0, 0.0), InitialStateClass.MAXIMALLY_ENTANGLED),
            ((0.0, 1.0), (0.0, 2.5), InitialStateClass.MAXIMALLY_ENTANGLED),
            ((math.pi / 2, 0.3), (math.pi / 2, 0.3), InitialStateClass.MAXIMALLY_ENTANGLED),
            ((math.pi, 0.0), (0.4, 1.0), InitialStateClass.ALWAYS_ZERO),
            ((0.4, 1.0), (math.pi, 0.0), InitialStateClass.ALWAYS_ZERO),
            ((math.pi / 2, 0.0), (math.pi / 4, 0.0), InitialStateClass.GENERIC),
            ((math.pi / 2, math.pi), (math.pi / 4, 0.0), InitialStateClass.GENERIC),
        ],
    )
    def test_cases(self, q1, q2, expected):
        assert classify_initial_state(BlochAngles(*q1), BlochAngles(*q2)) is expected

    def test_maximally_entangled_implies_unit_concurrence(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            theta = rng.uniform(0, math.pi - 0.2)
            phi = rng.uniform(0, 2 * math.pi)
            q = BlochAngles(theta, phi)
            assert classify_initial_state(q, q) is InitialStateClass.MAXIMALLY_ENTANGLED
            for tau_amp in (0.9, 0.5, 0.05):
                s = post_bsm_projection(q, q, tau_amp)
                assert concurrence_closed(s) == pytest.approx(1.0, abs=1e-10)
