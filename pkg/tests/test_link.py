import math
from dataclasses import replace

import numpy as np
import pytest

from starvlc import (
    ChannelSet,
    DetectorScheme,
    channel_set,
    effective_channels,
    rate,
    rate_pair,
    sinr,
    sum_rate,
)
from starvlc.link import RATE_SINR_SCALE, validate_beta
from util import reference_scenario


def one_element_setup():
    sc = reference_scenario()
    sc = replace(sc, panel=replace(sc.panel, rows=1, cols=1))
    return sc, channel_set(sc)


class TestEffectiveChannels:
    def test_all_reflect(self):
        sc, ch = one_element_setup()
        h1, h2 = effective_channels(ch, [1.0])
        assert h1 == pytest.approx(ch.h_los + ch.h_reflect[0], rel=1e-14)
        assert h2 == 0.0

    def test_all_transmit(self):
        sc, ch = one_element_setup()
        h1, h2 = effective_channels(ch, [0.0])
        assert h1 == pytest.approx(ch.h_los, rel=1e-14)
        assert h2 == pytest.approx(ch.h_transmit[0], rel=1e-14)

    def test_linear_interpolation(self):
        sc, ch = one_element_setup()
        h1a, h2a = effective_channels(ch, [0.25])
        assert h1a == pytest.approx(ch.h_los + 0.25 * ch.h_reflect[0], rel=1e-14)
        assert h2a == pytest.approx(0.75 * ch.h_transmit[0], rel=1e-14)

    def test_validation(self):
        sc, ch = one_element_setup()
        with pytest.raises(ValueError):
            effective_channels(ch, [1.5])
        with pytest.raises(ValueError):
            effective_channels(ch, [-0.1])
        with pytest.raises(ValueError):
            effective_channels(ch, [0.5, 0.5])
        assert validate_beta([0.0], 1).shape == (1,)


class TestSinr:
    def test_sic_user1_reference_value(self):
        sc, ch = one_element_setup()
        s1, s2 = sinr(ch, [1.0], sc.p1, sc.p2, 0.7, 1e-10, DetectorScheme.SIC)
        h1 = ch.h_los + ch.h_reflect[0]
        expected = (0.7 * h1 * 0.1) ** 2 / 1e-10
        assert s1 == pytest.approx(expected, rel=1e-14)
        assert s1 == pytest.approx(0.4032608439260951, rel=1e-12)
        assert s2 == 0.0  # no transmit-side power reaches the AP

    def test_sud_symmetric_under_user_swap(self):
        # Symmetric synthetic channels: equal gains, equal powers.
        ch = ChannelSet(h_los=0.0, h_reflect=[2e-5], h_transmit=[2e-5])
        s1, s2 = sinr(ch, [0.5], 0.1, 0.1, 0.7, 1e-10, DetectorScheme.SUD)
        assert s1 == pytest.approx(s2, rel=1e-14)

    def test_sic_removes_user2_interference(self):
        sc, ch = one_element_setup()
        beta = [0.5]
        sud1, sud2 = sinr(ch, beta, sc.p1, sc.p2, 0.7, 1e-10, DetectorScheme.SUD)
        sic1, sic2 = sinr(ch, beta, sc.p1, sc.p2, 0.7, 1e-10, DetectorScheme.SIC)
        assert sic1 > sud1  # interference-free decoding of user 1
        assert sic2 == sud2  # user 2 is decoded first, identically

    def test_manual_sud_formula(self):
        ch = ChannelSet(h_los=1e-5, h_reflect=[3e-5], h_transmit=[4e-5])
        rho, p1, p2, n0 = 0.5, 0.08, 0.12, 2e-10
        beta = [0.3]
        h1 = 1e-5 + 0.3 * 3e-5
        h2 = 0.7 * 4e-5
        s1, s2 = sinr(ch, beta, p1, p2, rho, n0, DetectorScheme.SUD)
        assert s1 == pytest.approx((rho * h1 * p1) ** 2 / (n0 + (rho * h2 * p2) ** 2), rel=1e-13)
        assert s2 == pytest.approx((rho * h2 * p2) ** 2 / (n0 + (rho * h1 * p1) ** 2), rel=1e-13)

    def test_noise_must_be_positive(self):
        sc, ch = one_element_setup()
        with pytest.raises(ValueError):
            sinr(ch, [0.5], sc.p1, sc.p2, 0.7, 0.0, DetectorScheme.SUD)


class TestRate:
    def test_exact_points(self):
        assert rate(0.0) == 0.0
        assert rate(2.0 * math.pi / math.e) == pytest.approx(0.5, rel=1e-14)
        assert rate(6.0 * math.pi / math.e) == pytest.approx(1.0, rel=1e-14)

    def test_scale_constant(self):
        assert RATE_SINR_SCALE == pytest.approx(math.e / (2.0 * math.pi), rel=1e-16)

    def test_monotone(self):
        xs = np.linspace(0.0, 10.0, 200)
        ys = [rate(x) for x in xs]
        assert all(b > a for a, b in zip(ys, ys[1:]))

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            rate(-1e-9)


class TestRatePair:
    def test_sic_all_reflect_reference(self):
        sc, ch = one_element_setup()
        rp = rate_pair(ch, [1.0], sc, DetectorScheme.SIC)
        assert rp.r1 == pytest.approx(0.11599997360521058, rel=1e-12)
        assert rp.r2 == 0.0
        assert rp.sum == rp.r1
        assert rp.energy_efficiency == pytest.approx(rp.sum / 0.2, rel=1e-14)

    def test_sum_rate_shortcut(self):
        sc, ch = one_element_setup()
        rp = rate_pair(ch, [0.4], sc, DetectorScheme.SUD)
        assert sum_rate(ch, [0.4], sc, DetectorScheme.SUD) == rp.r1 + rp.r2

    def test_zero_power_gives_none_efficiency(self):
        sc, ch = one_element_setup()
        sc0 = replace(sc, p1=0.0, p2=0.0)
        rp = rate_pair(ch, [0.5], sc0, DetectorScheme.SUD)
        assert rp.r1 == 0.0 and rp.r2 == 0.0
        assert rp.energy_efficiency is None

    def test_sic_dominates_sud_pointwise(self):
        sc = reference_scenario()
        ch = channel_set(sc)
        rng = np.random.default_rng(3)
        for _ in range(20):
            beta = rng.uniform(0.0, 1.0, size=ch.element_count)
            sud = rate_pair(ch, beta, sc, DetectorScheme.SUD)
            sic = rate_pair(ch, beta, sc, DetectorScheme.SIC)
            assert sic.sum >= sud.sum - 1e-15
            assert sic.r2 == pytest.approx(sud.r2, rel=1e-14)
