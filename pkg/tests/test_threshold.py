import math
import random

import numpy as np
import pytest

from mixedcore.threshold import (
    DomainError,
    EdgeMix,
    InvalidSizes,
    aux_f,
    aux_g,
    aux_g_deriv,
    aux_h,
    special_points,
    threshold_T,
    threshold_t_general,
)


class TestEdgeMix:
    def test_avg_size(self):
        assert EdgeMix((3, 4), (0.83596, 0.16404)).avg_size == pytest.approx(3.16404)

    @pytest.mark.parametrize("sizes,fractions", [
        ((2,), (1.0,)),
        ((4, 3), (0.5, 0.5)),
        ((3, 4), (0.5, 0.4)),
        ((3, 4), (0.0, 1.0)),
        ((3,), (1.0, 0.0)),
    ])
    def test_invalid(self, sizes, fractions):
        with pytest.raises(InvalidSizes):
            EdgeMix(sizes, fractions)

    def test_pair_alpha_one_is_uniform(self):
        assert EdgeMix.pair(3, 8, 1.0) == EdgeMix.uniform(3)


class TestAuxF:
    def test_half(self):
        assert aux_f(0.5) == pytest.approx(math.log(2), abs=1e-15)

    def test_limits(self):
        assert aux_f(1e-9) == pytest.approx(1.0, abs=1e-8)
        assert aux_f(1 - 1e-9) == pytest.approx(0.0, abs=1e-7)

    def test_series_branch_is_continuous(self):
        assert aux_f(1e-8 * (1 - 1e-12)) == pytest.approx(aux_f(1e-8 * (1 + 1e-12)), abs=1e-14)

    @pytest.mark.parametrize("z", [0.0, 1.0, -0.1, 1.5])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            aux_f(z)

    def test_strictly_decreasing(self):
        zs = np.linspace(1e-6, 1 - 1e-6, 5000)
        vals = [aux_f(z) for z in zs]
        assert all(u > v for u, v in zip(vals, vals[1:]))

    def test_above_one_minus_z(self):
        for z in np.linspace(1e-3, 1 - 1e-3, 1000):
            assert aux_f(z) > 1 - z


class TestAuxG:
    def test_hand_evaluation(self):
        # f(1/2) = ln 2, so g = 2*19*ln 2 + 2 + 2 - 23
        assert aux_g(0.5, 3, 20) == pytest.approx(38 * math.log(2) - 19, abs=1e-12)
        assert aux_g(0.5, 3, 20) == pytest.approx(7.33959, abs=1e-5)

    def test_positive_at_z_l(self):
        assert aux_g(special_points(3, 20).z_l, 3, 20) > 0

    def test_positive_at_z_g_below_b_prime(self):
        sp = special_points(3, 4)
        assert aux_g(sp.z_g, 3, 4) > 0

    def test_deriv_signs(self):
        assert aux_g_deriv(0.01, 3, 20) < 0
        assert aux_g_deriv(0.99, 3, 20) > 0

    @pytest.mark.parametrize("z", [0.05, 0.5, 0.9])
    def test_deriv_matches_finite_difference(self, z):
        d = 1e-6
        fd = (aux_g(z + d, 3, 20) - aux_g(z - d, 3, 20)) / (2 * d)
        assert aux_g_deriv(z, 3, 20) == pytest.approx(fd, abs=1e-6)

    def test_deriv_small_z_series(self):
        # series branch agrees with the closed form just above the switch
        z = 1e-4
        closed = 2 * 19 * (math.log1p(-z) + z) / z ** 2 + 1 / (1 - z) ** 2
        assert aux_g_deriv(z * (1 - 1e-9), 3, 20) == pytest.approx(closed, rel=1e-6)

    def test_requires_a_less_than_b(self):
        with pytest.raises(DomainError):
            aux_g(0.5, 4, 4)


class TestAuxH:
    @pytest.mark.parametrize("a,b", [(3, 4), (3, 20), (5, 40)])
    def test_one_at_z_l(self, a, b):
        sp = special_points(a, b)
        assert aux_h(sp.z_l, a, b) == pytest.approx(1.0, abs=1e-9)

    def test_above_one_between_z_l_and_z_r(self):
        sp = special_points(3, 20)
        for z in np.linspace(sp.z_l, sp.z_r, 50)[1:-1]:
            assert aux_h(z, 3, 20) > 1

    def test_below_one_outside(self):
        sp = special_points(3, 20)
        for z in np.linspace(0.05, sp.z_l, 50)[:-1]:
            assert aux_h(z, 3, 20) < 1
        for z in np.linspace(sp.z_r, 1, 50)[1:-1]:
            assert aux_h(z, 3, 20) < 1

    def test_at_saddle_of_3_4(self):
        assert aux_h(0.75, 3, 4) == pytest.approx(1 / 0.83596, abs=2e-5)
        assert aux_h(0.75, 3, 4) == pytest.approx(1.19623, abs=1e-5)

    def test_derivative_sign_follows_g(self):
        sp = special_points(3, 20)
        d = 1e-7
        for z in np.linspace(sp.z_l, sp.z_r, 200)[1:-1]:
            g = aux_g(z, 3, 20)
            if abs(g) < 1e-8 or z + d >= sp.z_r:
                continue
            fd = aux_h(z + d, 3, 20) - aux_h(z - d, 3, 20)
            assert (fd > 0) == (g > 0)


class TestThresholdT:
    def test_saddle_of_3_4(self):
        assert threshold_T(0.75, 3, 4, 0.83596) == pytest.approx(0.82151, abs=2e-5)

    def test_table_value_3_21(self):
        assert threshold_T(0.95871, 3, 21, 0.88743) == pytest.approx(0.92004, abs=2e-5)

    def test_alpha_one_collapses(self):
        for z in (0.2, 0.5, 0.9):
            assert threshold_T(z, 3, 8, 1.0) == pytest.approx(-math.log(1 - z) / (3 * z ** 2), rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            threshold_T(0.5, 3, 4, 1.5)
        with pytest.raises(DomainError):
            threshold_T(1.0, 3, 4, 0.5)


class TestThresholdGeneral:
    def test_uniform_3(self):
        assert threshold_t_general(1.25643, EdgeMix.uniform(3)) == pytest.approx(0.81847, abs=2e-5)

    def test_mixed_3_4(self):
        mix = EdgeMix((3, 4), (0.83596, 0.16404))
        assert threshold_t_general(1.38629, mix) == pytest.approx(0.82151, abs=2e-5)

    def test_change_of_variables(self):
        rnd = random.Random(1234)
        for _ in range(100):
            a = rnd.randint(3, 20)
            b = rnd.randint(a + 1, 50)
            alpha = rnd.uniform(0.01, 0.99)
            lam = rnd.uniform(0.05, 8.0)
            t = threshold_t_general(lam, EdgeMix((a, b), (alpha, 1 - alpha)))
            T = threshold_T(1 - math.exp(-lam), a, b, alpha)
            assert t == pytest.approx(T, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            threshold_t_general(0.0, EdgeMix.uniform(3))


class TestSpecialPoints:
    def test_3_4(self):
        sp = special_points(3, 4)
        assert sp.z_prime == 0.75
        assert sp.g_min >= 0
        assert sp.z_1 is None and sp.z_2 is None

    def test_3_20_has_g_roots(self):
        sp = special_points(3, 20)
        assert sp.g_min < 0
        assert sp.z_l < sp.z_1 < sp.z_2 < sp.z_r
        assert aux_g(sp.z_1, 3, 20) == pytest.approx(0, abs=1e-8)
        assert aux_g(sp.z_2, 3, 20) == pytest.approx(0, abs=1e-8)

    @pytest.mark.parametrize("a,b", [(3, 4), (3, 16), (4, 50), (6, 7)])
    def test_ordering(self, a, b):
        sp = special_points(a, b)
        assert 0 < sp.z_l < sp.z_r < 1
        assert 0 < sp.z_prime < sp.z_r
        assert aux_f(sp.z_l) == pytest.approx(1 / (a - 1), abs=1e-11)
        assert aux_f(sp.z_r) == pytest.approx(1 / (b - 1), abs=1e-11)
        assert aux_g_deriv(sp.z_g, a, b) == pytest.approx(0, abs=1e-6)
