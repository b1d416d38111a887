import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from awgnhelp import power
from awgnhelp.core import DomainError
from awgnhelp.ct import (
    CTParams,
    ct_cribbed_capacity_lb,
    ct_cribbed_ee,
    ct_ee_no_help,
    ct_ee_oblivious,
    ct_mpae_oblivious,
    ct_cribbed_mpae,
    ct_two_sided_mpae,
    ct_two_sided_pe,
    dt_reduce,
)

pos = st.floats(0.01, 50)
alphas = st.floats(0.05, 8)


class TestReduction:
    def test_examples(self):
        r = dt_reduce(1.0, 1.0, 2.0, 1.0)
        assert r.n == 2 and r.P == 1.0 and r.sigma2 == 0.5 and r.rate_scale == 2.0

    def test_rounding_recorded(self):
        r = dt_reduce(1.3, 1.0, 1.0, 1.0)
        assert r.n == 2 and r.exact_samples == pytest.approx(2.6)

    @given(st.floats(1, 1e3), st.floats(1, 1e3), pos, pos)
    def test_gamma(self, B, T, Pc, N0):
        r = dt_reduce(B, T, Pc, N0)
        # gamma = n P / sigma2 equals 2 T C0c when 2BT is an integer
        exact = r.exact_samples * r.P / r.sigma2
        assert exact == pytest.approx(2 * T * Pc / N0, rel=1e-12)
        assert r.gamma <= exact

    @pytest.mark.parametrize("args", [(0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 1, 0), (1, 1, -1, 1)])
    def test_invalid(self, args):
        with pytest.raises(DomainError):
            dt_reduce(*args)


class TestReliability:
    def test_oblivious_examples(self):
        p = CTParams(1.0, 0.5)
        assert ct_ee_oblivious(1.6, p).kind == "zero"
        assert float(ct_ee_oblivious(0.75, p)) == pytest.approx(0.25)
        assert float(ct_ee_oblivious(0.75 - 1e-12, p)) == pytest.approx(0.25, abs=1e-9)
        assert ct_ee_oblivious(0.2, p).is_unbounded

    def test_no_help_examples(self):
        assert float(ct_ee_no_help(0.0, 2.0)) == pytest.approx(1.0)
        assert ct_ee_no_help(2.0, 2.0).kind == "zero"
        assert float(ct_ee_no_help(0.5, 2.0)) == pytest.approx(0.5)

    @given(pos, pos, st.floats(0, 1))
    def test_shift(self, C0c, Rhc, frac):
        p = CTParams(C0c, Rhc)
        Rc = Rhc + frac * 1.2 * C0c
        assert float(ct_ee_oblivious(Rc, p)) == float(ct_ee_no_help(Rc - Rhc, C0c))


class TestCribbed:
    def test_capacity_examples(self):
        assert ct_cribbed_capacity_lb(1.0, 1.0) == pytest.approx(3.0)
        assert ct_cribbed_capacity_lb(0.25, 1.0) == pytest.approx(1.25)
        assert ct_cribbed_capacity_lb(2.0, 0.0) == 2.0

    @given(pos, pos)
    def test_regimes(self, C0c, Rhc):
        lb, plain = ct_cribbed_capacity_lb(C0c, Rhc), C0c + Rhc
        if Rhc < 4 * C0c * (1 - 1e-9):
            assert lb > plain
        elif Rhc > 4 * C0c * (1 + 1e-9):
            assert lb < plain

    def test_ee_examples(self):
        assert float(ct_cribbed_ee(1.0, CTParams(1.0, 1.0))) == pytest.approx(2.0)
        assert ct_cribbed_ee(3.0, CTParams(1.0, 1.0)).kind == "zero"
        assert float(ct_cribbed_ee(0.3, CTParams(1.0, 1e-14))) == pytest.approx(0.7, abs=1e-6)

    def test_mpae_examples(self):
        assert ct_cribbed_mpae(CTParams(2.0, 0.0, 1.0)) == pytest.approx(1.0)
        assert ct_cribbed_mpae(CTParams(1.0, 1.0, 1.0)) == pytest.approx(1.5)

    @given(pos, pos, alphas)
    def test_mpae_increasing(self, C0c, Rhc, a):
        assert ct_cribbed_mpae(CTParams(C0c, Rhc * 1.01, a)) > ct_cribbed_mpae(CTParams(C0c, Rhc, a))


class TestOblivious:
    def test_examples(self):
        ach, conv = ct_mpae_oblivious(CTParams(1.0, 1.0, 2.0))
        assert ach == pytest.approx(2 * (1 / 6 + 1))
        assert conv == pytest.approx(4.0)
        a = 1e-8
        ach, conv = ct_mpae_oblivious(CTParams(1.0, 0.5, a))
        assert ach / conv == pytest.approx(1.0, rel=1e-3)

    def test_alpha_one(self):
        ach, _ = ct_mpae_oblivious(CTParams(1.0, 0.0, 1.0))
        assert ach == pytest.approx(0.25)

    @pytest.mark.parametrize("C0c", np.linspace(0.01, 20, 25).tolist())
    @pytest.mark.parametrize("a", [0.1, 1.0, 3.0])
    def test_matches_power_formulas(self, C0c, a):
        Rhc = 0.7
        ach, conv = ct_mpae_oblivious(CTParams(C0c, Rhc, a))
        assert ach == pytest.approx(a * (Rhc + power.very_noisy_r0(a, C0c)), abs=1e-12)
        # the converse is the DPT form alpha*(C0 + Rh)
        assert conv == pytest.approx(a * (C0c + Rhc), abs=1e-12)


class TestTwoSided:
    def test_mpae_examples(self):
        assert ct_two_sided_mpae(CTParams(1.5, 0.0, 2.0)) == pytest.approx(3.0)
        assert ct_two_sided_mpae(CTParams(1.0, 1.0, 0.25)) == pytest.approx(0.25 * (1 + 1 / 2.25))
        assert ct_two_sided_mpae(CTParams(1.0, 5.0, 100.0)) == pytest.approx(100 * (5 + 0.25))

    @given(pos, st.floats(0.05, 1.0), st.floats(0.75, 10))
    def test_dominates_oblivious(self, C0c, a, k):
        p = CTParams(C0c, k * C0c, a)
        assert ct_two_sided_mpae(p) == pytest.approx(ct_mpae_oblivious(p).achievable, rel=1e-12)

    def test_pe_examples(self):
        assert ct_two_sided_pe(1.0, 3.0, CTParams(1.0, 0.0), 0.3) == pytest.approx(0.3)
        assert ct_two_sided_pe(1.0, 1.0, CTParams(1.0, math.log(2)), 0.1) == pytest.approx(0.01)
        assert ct_two_sided_pe(1.0, 1.0, CTParams(1.0, 2.0), 1.0) == 1.0
        assert ct_two_sided_pe(1.0, 1.0, CTParams(1.0, 2.0), lambda r, t: 0.5) == pytest.approx(
            0.5 ** math.exp(2.0))
        with pytest.raises(DomainError):
            ct_two_sided_pe(1.0, 1.0, CTParams(1.0, 2.0), 1.5)
