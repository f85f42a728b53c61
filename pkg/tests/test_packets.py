import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lct_numra.canonical import CanonicalMatrix, fourier
from lct_numra.filters import TranslationSet, filter_eval
from lct_numra.packets import (
    BasisElement,
    PacketBasis,
    PacketIndex,
    UncertifiedBasisError,
    digits,
    fold_residuals,
    generate_packets,
    packet_analyze,
    packet_gram,
    packet_hat,
    packet_synthesize,
    reconstruct,
)
from lct_numra.sampling import SampledSignal, norm, numra_grid
from lct_numra.wavelets import cascade, default_time_grid, haar_filter_bank

M2111 = CanonicalMatrix(2, 1, 1, 1)


class TestDigits:
    def test_zero_has_empty_expansion(self):
        assert digits(0, 2).digits == ()

    def test_base_four_example(self):
        assert digits(5, 2).digits == (1, 1)

    def test_single_digit(self):
        for N in (1, 2, 3):
            assert digits(2 * N - 1, N).digits == (2 * N - 1,)

    @pytest.mark.parametrize("N", [1, 2, 3, 5])
    def test_round_trip_vectorized(self, N):
        # rebuild every n below one million from its digit expansion
        base = 2 * N
        n_arr = np.arange(1_000_000, dtype=np.int64)
        rest = n_arr.copy()
        total = np.zeros_like(n_arr)
        place = np.ones_like(n_arr)
        while np.any(rest > 0):
            total += (rest % base) * place
            rest //= base
            place *= base
        np.testing.assert_array_equal(total, n_arr)

    @given(st.integers(min_value=0, max_value=10**9), st.sampled_from([1, 2, 3, 5]))
    @settings(max_examples=200, deadline=None)
    def test_round_trip_property(self, n, N):
        assert reconstruct(digits(n, N), N) == n

    def test_invalid_expansions_rejected(self):
        with pytest.raises(ValueError):
            PacketIndex(1, ())
        with pytest.raises(ValueError):
            PacketIndex(2, (2, 0))
        with pytest.raises(ValueError):
            PacketIndex(0, (0,))
        with pytest.raises(ValueError):
            digits(-1, 1)


@pytest.fixture(scope="module")
def haar1():
    ts = TranslationSet(1, 1)
    bank = haar_filter_bank(ts, fourier())
    grid = numra_grid(ts, (-6.0, 6.0), refinement=8192)
    scaling = cascade(bank[0], J=20, tol=1e-5, grid=grid, oversample=1)
    return ts, bank, grid, scaling


@pytest.fixture(scope="module")
def haar1_nodes(haar1):
    ts, bank, grid, scaling = haar1
    nodes = {}
    for n in range(8):
        nodes[n] = packet_hat(
            digits(n, ts.N), bank, scaling=scaling, grid=grid, oversample=1
        )
    return nodes


class TestPacketHat:
    def test_index_zero_is_scaling_hat(self, haar1):
        ts, bank, grid, scaling = haar1
        node = packet_hat(digits(0, ts.N), bank, scaling=scaling, grid=grid, oversample=1)
        u = np.linspace(-4, 4, 401)
        np.testing.assert_array_equal(node.hat(u), scaling.hat(u))

    def test_first_indices_are_wavelet_hats(self, haar1):
        ts, bank, grid, scaling = haar1
        node = packet_hat(digits(1, ts.N), bank, scaling=scaling, grid=grid, oversample=1)
        u = np.linspace(-4, 4, 401)
        want = filter_eval(bank[1], u / 2.0) * scaling.hat(u / 2.0)
        np.testing.assert_allclose(node.hat(u), want, atol=1e-14)

    @pytest.mark.parametrize("N", [1, 2])
    def test_recursion_identity(self, N):
        ts = TranslationSet(N, 1)
        bank = haar_filter_bank(ts, M2111)
        grid = default_time_grid(ts)
        scaling = cascade(bank[0], J=44, tol=1e-5, grid=grid)
        two_n = 2 * N
        u = np.linspace(-8.0, 8.0, 1603)
        worst = 0.0
        for n in range((2 * N) ** 2 + 1):
            parent = packet_hat(
                digits(n, N), bank, scaling=scaling, grid=grid, synthesize=False
            )
            parent_vals = parent.hat(u / two_n)
            for k in range(two_n):
                child = packet_hat(
                    digits(two_n * n + k, N), bank, scaling=scaling, grid=grid,
                    synthesize=False,
                )
                rhs = filter_eval(bank[k], u / two_n) * parent_vals
                worst = max(worst, float(np.max(np.abs(child.hat(u) - rhs))))
        assert worst <= 1e-10

    def test_digit_out_of_range(self, haar1):
        ts, bank, grid, scaling = haar1
        with pytest.raises(ValueError, match="digit"):
            packet_hat(PacketIndex(3, (3,)), bank, scaling=scaling, grid=grid)


class TestPacketGram:
    def test_small_system(self, haar1_nodes):
        ts = TranslationSet(1, 1)
        nodes = [haar1_nodes[n] for n in range(4)]
        _, off = packet_gram(nodes, ts, fourier(), (-2.0, 2.0 + 1e-9))
        assert off <= 1e-3

    def test_single_node_single_shift(self, haar1_nodes):
        ts = TranslationSet(1, 1)
        g, off = packet_gram([haar1_nodes[2]], ts, fourier(), (0.0, 1.0))
        assert g.shape == (1, 1)
        assert off <= 1e-3


class TestFoldSums:
    @pytest.mark.parametrize("N,refinement", [(1, 8192), (2, 16384)])
    def test_haar_packets(self, N, refinement):
        # the deepest packet has the widest spectral spread, so the fold
        # lattice must extend far enough for its tail to drop below 1e-3
        ts = TranslationSet(N, 1)
        bank = haar_filter_bank(ts, fourier())
        grid = numra_grid(ts, (-4.0, 4.0), refinement=refinement)
        nodes = generate_packets(2 * N, bank, grid=grid, oversample=1)
        for node in nodes:
            plain, twisted = fold_residuals(node, ts, oversample=1)
            assert plain <= 1e-3
            assert twisted <= 1e-3


def make_basis(nodes, ts, m, specs):
    elements = [
        BasisElement(nodes[n], level, float(lam))
        for (n, level, lams) in specs
        for lam in lams
    ]
    return PacketBasis(ts, m, elements)


class TestBasisGate:
    def test_uncertified_rejected(self, haar1_nodes):
        ts = TranslationSet(1, 1)
        basis = make_basis(haar1_nodes, ts, fourier(), [(0, 0, [0.0, 1.0])])
        f = SampledSignal(basis.elements[0].node.signal.grid,
                          basis.elements[0].node.signal.values)
        with pytest.raises(UncertifiedBasisError, match="certified"):
            packet_analyze(f, basis)

    def test_degenerate_basis_rejected(self, haar1_nodes):
        ts = TranslationSet(1, 1)
        basis = make_basis(haar1_nodes, ts, fourier(), [(0, 0, [0.0, 0.0])])
        assert basis.certify() > 1e-3
        f = SampledSignal(basis.elements[0].node.signal.grid,
                          basis.elements[0].node.signal.values)
        with pytest.raises(UncertifiedBasisError, match="residual"):
            packet_analyze(f, basis)


class TestAnalyzeSynthesize:
    def test_basis_element_coefficients(self, haar1_nodes):
        ts = TranslationSet(1, 1)
        basis = make_basis(
            haar1_nodes, ts, fourier(), [(1, 0, [-1.0, 0.0, 1.0]), (2, 0, [-1.0, 0.0, 1.0])]
        )
        basis.certify()
        f = basis.signals()[1]
        table = packet_analyze(f, basis)
        vals = np.abs(table.values)
        assert vals[1] == pytest.approx(1.0, abs=1e-3)
        others = np.delete(vals, 1)
        assert np.max(others) <= 1e-3

    def test_zero_signal(self, haar1_nodes):
        ts = TranslationSet(1, 1)
        basis = make_basis(haar1_nodes, ts, fourier(), [(0, 0, [0.0, 1.0])])
        basis.certify()
        grid = basis.elements[0].node.signal.grid
        table = packet_analyze(SampledSignal(grid, np.zeros(grid.count)), basis)
        np.testing.assert_array_equal(table.values, 0)
        out = packet_synthesize(table, basis)
        np.testing.assert_array_equal(out.values, 0)

    def test_energy_conservation(self, haar1_nodes):
        ts = TranslationSet(1, 1)
        basis = make_basis(
            haar1_nodes, ts, fourier(),
            [(1, 0, range(-2, 3)), (2, 0, range(-2, 3))],
        )
        basis.certify()
        rng = np.random.default_rng(23)
        sigs = basis.signals()
        coeff = rng.normal(size=len(sigs)) + 1j * rng.normal(size=len(sigs))
        grid = sigs[0].grid
        f = SampledSignal(grid, sum(c * s.values for c, s in zip(coeff, sigs)))
        table = packet_analyze(f, basis)
        energy = float(np.sum(np.abs(table.values) ** 2))
        assert energy == pytest.approx(norm(f) ** 2, rel=1e-3)

    def test_round_trip_on_span(self, haar1_nodes):
        ts = TranslationSet(1, 1)
        basis = make_basis(haar1_nodes, ts, fourier(), [(3, 0, range(-2, 3))])
        basis.certify()
        f = basis.signals()[2]
        out = packet_synthesize(packet_analyze(f, basis), basis)
        err = norm(SampledSignal(f.grid, out.values - f.values))
        assert err <= 1e-3

    def test_coefficient_table_rows(self, haar1_nodes):
        ts = TranslationSet(1, 1)
        basis = make_basis(haar1_nodes, ts, fourier(), [(1, 1, [0.0, 1.0])])
        basis.certify()
        grid = basis.elements[0].node.signal.grid
        table = packet_analyze(SampledSignal(grid, np.zeros(grid.count)), basis)
        assert table.rows == ((1, 1, 0.0), (1, 1, 1.0))


class TestSubspaceSplit:
    def test_parent_equals_children_reconstruction(self, haar1_nodes):
        ts = TranslationSet(1, 1)
        m = fourier()
        parent = make_basis(haar1_nodes, ts, m, [(1, 1, range(-2, 3))])
        children = make_basis(
            haar1_nodes, ts, m, [(2, 0, range(-2, 3)), (3, 0, range(-2, 3))]
        )
        assert parent.certify() <= 1e-3
        assert children.certify() <= 1e-3
        rng = np.random.default_rng(7)
        sigs = parent.signals()
        coeff = rng.normal(size=len(sigs)) + 1j * rng.normal(size=len(sigs))
        grid = sigs[0].grid
        f = SampledSignal(grid, sum(c * s.values for c, s in zip(coeff, sigs)))
        rec_parent = packet_synthesize(packet_analyze(f, parent), parent)
        rec_children = packet_synthesize(packet_analyze(f, children), children)
        nf = norm(f)
        diff = norm(SampledSignal(grid, rec_parent.values - rec_children.values))
        assert diff / nf <= 2e-3

    def test_three_level_telescoping(self, haar1_nodes):
        # one detail space, three equivalent bases at successive depths
        ts = TranslationSet(1, 1)
        m = fourier()
        bases = [
            make_basis(haar1_nodes, ts, m, [(1, 2, range(-1, 2))]),
            make_basis(haar1_nodes, ts, m, [(2, 1, range(-1, 2)), (3, 1, range(-1, 2))]),
            make_basis(haar1_nodes, ts, m, [(n, 0, range(-1, 2)) for n in (4, 5, 6, 7)]),
        ]
        for b in bases:
            assert b.certify() <= 1e-3
        rng = np.random.default_rng(9)
        sigs = bases[0].signals()
        coeff = rng.normal(size=len(sigs)) + 1j * rng.normal(size=len(sigs))
        grid = sigs[0].grid
        f = SampledSignal(grid, sum(c * s.values for c, s in zip(coeff, sigs)))
        nf = norm(f)
        recs = [packet_synthesize(packet_analyze(f, b), b) for b in bases]
        for rec in recs:
            assert norm(SampledSignal(grid, rec.values - f.values)) / nf <= 2e-3
