import numpy as np
import pytest

from lct_numra.canonical import CanonicalMatrix, fourier, fresnel
from lct_numra.filters import (
    FilterConditionError,
    PeriodicFilterPair,
    TranslationSet,
    bank_residuals,
    check_m0_period,
    check_orthonormality,
    check_scaling_conditions,
    complete_filters,
    default_u_count,
    filter_eval,
    filter_pair_from_components,
    m0,
    omega_enumerate,
)
from lct_numra.sampling import Grid
from lct_numra.wavelets import haar_filter_bank, haar_filters

M2111 = CanonicalMatrix(2, 1, 1, 1)


def constant_pair(ts, c1, c2, count=None):
    def eval_fn(u):
        u = np.asarray(u, dtype=float)
        return np.full(u.shape, c1, dtype=complex), np.full(u.shape, c2, dtype=complex)

    return filter_pair_from_components(ts, eval_fn, count)


class TestTranslationSet:
    def test_valid(self):
        ts = TranslationSet(2, 1)
        assert ts.dilation == 4
        assert ts.spectral_intervals == ((0.0, 0.5), (1.0, 1.5))

    @pytest.mark.parametrize("N,r", [(2, 2), (2, 5), (3, 3), (0, 1), (4, 9)])
    def test_invalid(self, N, r):
        with pytest.raises(ValueError):
            TranslationSet(N, r)

    def test_u_count_multiple_of_4n(self):
        assert default_u_count(TranslationSet(1, 1)) == 4096
        assert default_u_count(TranslationSet(2, 1)) == 4096
        assert default_u_count(TranslationSet(3, 1)) == 4104


class TestOmegaEnumerate:
    def test_integers_when_n_is_one(self):
        ts = TranslationSet(1, 1)
        assert omega_enumerate(ts, (0.0, 4.0)) == [0.0, 1.0, 2.0, 3.0]

    def test_n2(self):
        ts = TranslationSet(2, 1)
        assert omega_enumerate(ts, (0.0, 4.0)) == [0.0, 0.5, 2.0, 2.5]

    def test_n3_r5(self):
        ts = TranslationSet(3, 5)
        got = omega_enumerate(ts, (0.0, 2.0))
        assert got == pytest.approx([0.0, 5.0 / 3.0])

    def test_empty_window(self):
        assert omega_enumerate(TranslationSet(1, 1), (1.0, 1.0)) == []

    def test_elements_have_lattice_form(self):
        ts = TranslationSet(3, 5)
        for lam in omega_enumerate(ts, (-7.0, 7.0)):
            # lam = 2n or 2n + r/N exactly for some integer n
            r0 = lam / 2.0
            r1 = (lam - ts.r / ts.N) / 2.0
            assert min(abs(r0 - round(r0)), abs(r1 - round(r1))) < 1e-12


class TestFilterEval:
    def test_haar_n1_at_zero(self):
        ts = TranslationSet(1, 1)
        p = constant_pair(ts, 0.5, 0.5)
        assert filter_eval(p, 0.0) == pytest.approx(1.0)

    def test_haar_n1_at_quarter(self):
        ts = TranslationSet(1, 1)
        p = constant_pair(ts, 0.5, 0.5)
        assert filter_eval(p, 0.25) == pytest.approx(0.5 * (1 - 1j))

    def test_zero_filter(self):
        ts = TranslationSet(2, 1)
        p = constant_pair(ts, 0.0, 0.0)
        u = np.linspace(-3, 3, 101)
        np.testing.assert_array_equal(filter_eval(p, u), np.zeros(101))

    def test_nearest_sample_lookup(self):
        # drop the exact evaluator: lookups snap to the stored lattice
        ts = TranslationSet(1, 1)
        exact = haar_filters(ts, M2111)
        sampled = PeriodicFilterPair(ts, exact.u_grid, exact.comp1, exact.comp2)
        u = np.linspace(0, 0.5, 333, endpoint=False)
        np.testing.assert_allclose(
            filter_eval(sampled, u), filter_eval(exact, u), atol=1e-12
        )

    def test_cross_phase_uses_unreduced_argument(self):
        ts = TranslationSet(2, 1)
        p = constant_pair(ts, 0.5, 0.5)
        # components are half-periodic but the full response is not
        assert filter_eval(p, 0.1 + 0.5) != pytest.approx(filter_eval(p, 0.1))


class TestM0:
    def test_haar_n1_constant(self):
        ts = TranslationSet(1, 1)
        p = haar_filters(ts, M2111)
        u = np.linspace(-1, 1, 201)
        np.testing.assert_allclose(m0(p, u), 0.5, atol=1e-14)

    def test_zero_filter(self):
        p = constant_pair(TranslationSet(1, 1), 0.0, 0.0)
        assert m0(p, 0.3) == 0.0

    @pytest.mark.parametrize(
        "m", [fourier(), fresnel(1.0), M2111], ids=["fourier", "fresnel1", "haar2111"]
    )
    def test_haar_n2_closed_form(self, m):
        # for matrices with 8a/b integral the profile is cos^2 / 2
        ts = TranslationSet(2, 1)
        p = haar_filters(ts, m)
        u = np.linspace(0, 0.5, 257, endpoint=False)
        want = 0.5 * np.cos(8 * np.pi * m.a / m.b + 4 * np.pi * u) ** 2
        np.testing.assert_allclose(m0(p, u), want, atol=1e-12)


class TestQuarterPeriod:
    def test_constant_profile(self):
        p = haar_filters(TranslationSet(1, 1), M2111)
        assert check_m0_period(p) == 0.0

    def test_haar_n2(self):
        p = haar_filters(TranslationSet(2, 1), M2111)
        assert check_m0_period(p) <= 1e-12

    def test_adversarial_ramp_fails(self):
        ts = TranslationSet(1, 1)

        def ramp(u):
            u = np.mod(np.asarray(u, dtype=float), 0.5)
            return u.astype(complex), np.zeros(u.shape, dtype=complex)

        p = filter_pair_from_components(ts, ramp)
        assert check_m0_period(p) > 0.01


class TestOrthonormality:
    def test_haar_n1_self(self):
        p = haar_filters(TranslationSet(1, 1), M2111)
        r21, r22 = check_orthonormality(p, p, same_index=True)
        assert r21 <= 1e-12 and r22 <= 1e-12

    def test_zero_filter_detected(self):
        p = constant_pair(TranslationSet(1, 1), 0.0, 0.0)
        r21, _ = check_orthonormality(p, p, same_index=True)
        assert r21 == pytest.approx(1.0)

    def test_mismatched_sets_rejected(self):
        a = haar_filters(TranslationSet(1, 1), M2111)
        b = haar_filters(TranslationSet(2, 1), M2111)
        with pytest.raises(FilterConditionError):
            check_orthonormality(a, b, same_index=False)

    def test_unimodular_rescaling_invariance(self):
        ts = TranslationSet(2, 1)
        base = haar_filters(ts, M2111)
        r21_base, _ = check_orthonormality(base, base, same_index=True)
        phase = np.exp(0.7j)
        scaled = PeriodicFilterPair(ts, base.u_grid, phase * base.comp1, phase * base.comp2)
        r21_scaled, _ = check_orthonormality(scaled, scaled, same_index=True)
        assert r21_scaled == pytest.approx(r21_base, abs=1e-12)


class TestScalingConditions:
    @pytest.mark.parametrize("N", [1, 2, 3])
    def test_haar_families(self, N):
        ts = TranslationSet(N, 1)
        p = haar_filters(ts, M2111)
        ra, rb = check_scaling_conditions(p)
        assert ra <= 1e-12 and rb <= 1e-12

    def test_doubled_filter_detected(self):
        ts = TranslationSet(1, 1)
        base = haar_filters(ts, M2111)
        doubled = PeriodicFilterPair(ts, base.u_grid, 2 * base.comp1, 2 * base.comp2)
        ra, _ = check_scaling_conditions(doubled)
        assert ra == pytest.approx(3.0)


class TestCompletion:
    @pytest.mark.parametrize("N", [1, 2])
    def test_self_certifying(self, N):
        ts = TranslationSet(N, 1)
        p0 = haar_filters(ts, M2111)
        highs = complete_filters(p0)
        assert len(highs) == 2 * N - 1
        bank = [p0] + highs
        for i, pl in enumerate(bank):
            for j, pk in enumerate(bank):
                r21, r22 = check_orthonormality(pl, pk, same_index=(i == j))
                assert r21 <= 1e-10 and r22 <= 1e-10

    def test_n1_recovers_classical_highpass(self):
        ts = TranslationSet(1, 1)
        p0 = haar_filters(ts, M2111)
        high = complete_filters(p0)[0]
        want = haar_filter_bank(ts, M2111)[1]
        np.testing.assert_allclose(high.comp1, want.comp1, atol=1e-12)
        np.testing.assert_allclose(high.comp2, want.comp2, atol=1e-12)

    def test_inadmissible_input_rejected(self):
        ts = TranslationSet(1, 1)

        def ramp(u):
            u = np.mod(np.asarray(u, dtype=float), 0.5)
            return u.astype(complex), np.zeros(u.shape, dtype=complex)

        p = filter_pair_from_components(ts, ramp)
        with pytest.raises(FilterConditionError, match="admissibility"):
            complete_filters(p)


class TestBankResiduals:
    def test_closed_form_bank(self):
        bank = haar_filter_bank(TranslationSet(2, 1), M2111)
        res = bank_residuals(bank)
        assert set(res) == {"2.21", "2.22", "2.33", "3.4a", "3.4b"}
        assert max(res.values()) <= 1e-12


class TestPairValidation:
    def test_grid_must_cover_half_period(self):
        ts = TranslationSet(1, 1)
        bad = Grid(0.0, 0.25 / 256, 256)  # covers [0, 1/4)
        with pytest.raises(ValueError, match="cover"):
            PeriodicFilterPair(ts, bad, np.zeros(256), np.zeros(256))

    def test_count_multiple_of_4n(self):
        ts = TranslationSet(3, 1)
        bad = Grid(0.0, 0.5 / 4096, 4096)  # 4096 not divisible by 12
        with pytest.raises(ValueError, match="4N"):
            PeriodicFilterPair(ts, bad, np.zeros(4096), np.zeros(4096))
