import numpy as np
import pytest

from tetronsim.errors import DegenerateSubspaceError, InvalidParameterError
from tetronsim.model import (
    ChainParams,
    RampProtocol,
    band_gap,
    build_chain_bdg,
    build_tetron_bdg,
    bulk_energy,
    diagonalize_chain,
    is_topological,
    ph_conjugate,
    resolve_mzms,
    resolved_basis,
)

SWEET = ChainParams(n_sites=4, hopping=0.5, pairing=0.5)


def random_params(rng, resolvable=False):
    """Random chain parameters; with resolvable=True stay in the regime where
    the near-zero pair is cleanly separated from the bulk."""
    n = int(rng.integers(2, 9))
    w = float(rng.uniform(0.2, 1.0))
    if resolvable:
        delta = w * float(rng.uniform(0.7, 1.4))
        mu = float(rng.uniform(-0.5, 0.5)) * w
    else:
        delta = float(rng.uniform(0.2, 1.0))
        mu = float(rng.uniform(-1.0, 1.0)) * 2.0 * w * 0.8
    return ChainParams(n, w, delta), mu


class TestChainParams:
    def test_rejects_single_site(self):
        with pytest.raises(InvalidParameterError):
            ChainParams(1, 0.5, 0.5)

    def test_rejects_degenerate_model(self):
        with pytest.raises(InvalidParameterError):
            ChainParams(4, 0.0, 0.0)

    def test_ramp_duration(self):
        proto = RampProtocol(0.0, 0.03, 2e-2)
        assert proto.duration == pytest.approx(1.5)
        assert proto.mu_at(proto.duration) == pytest.approx(0.03)

    def test_ramp_requires_positive_rate(self):
        with pytest.raises(InvalidParameterError):
            RampProtocol(0.0, 0.03, 0.0)

    def test_ramp_topological_guard(self):
        proto = RampProtocol(0.0, 1.2, 1e-2)
        with pytest.raises(InvalidParameterError):
            proto.validate_topological(ChainParams(4, 0.5, 0.5))


class TestBuildChain:
    def test_sweet_spot_spectrum(self):
        # at mu=0, Delta=w the open chain has one exact zero mode and all
        # bulk energies equal to 2w
        h = build_chain_bdg(SWEET, 0.0)
        evals = np.linalg.eigvalsh(h.matrix)
        positive = evals[4:]
        assert positive == pytest.approx([0.0, 1.0, 1.0, 1.0], abs=1e-12)

    def test_particle_hole_symmetry_randomized(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            params, mu = random_params(rng)
            h = build_chain_bdg(params, mu).matrix
            assert np.max(np.abs(ph_conjugate(h) + h)) < 1e-12

    def test_spectrum_symmetric(self):
        h = build_chain_bdg(ChainParams(2, 0.5, 0.5), 0.1)
        evals = np.sort(np.linalg.eigvalsh(h.matrix))
        assert np.max(np.abs(evals + evals[::-1])) < 1e-10


class TestBuildTetron:
    def test_blocks_match_chain(self):
        ht = build_tetron_bdg(SWEET, 0.2)
        hc = build_chain_bdg(SWEET, 0.2)
        assert np.array_equal(ht.chain_block(0), hc.matrix)
        assert np.array_equal(ht.chain_block(1), hc.matrix)
        off = ht.matrix[:8, 8:]
        assert np.all(off == 0)

    def test_doubled_multiplicity(self):
        ht = build_tetron_bdg(SWEET, 0.2)
        hc = build_chain_bdg(SWEET, 0.2)
        et = np.sort(np.linalg.eigvalsh(ht.matrix))
        ec = np.sort(np.linalg.eigvalsh(hc.matrix))
        assert et == pytest.approx(np.sort(np.concatenate([ec, ec])), abs=1e-12)

    def test_long_chain_near_zero_modes(self):
        h = build_tetron_bdg(ChainParams(40, 0.5, 0.5), 0.03)
        evals = np.linalg.eigvalsh(h.matrix)
        smallest_positive = np.min(np.abs(evals))
        assert smallest_positive < 1e-10


class TestDiagonalize:
    def test_sweet_spot_energies(self):
        basis = diagonalize_chain(build_chain_bdg(SWEET, 0.0))
        eps = basis.chains[0].energies
        assert abs(eps[0]) < 1e-12
        assert eps[1:] == pytest.approx(np.full(3, 1.0), abs=1e-10)

    def test_unitarity(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            params, mu = random_params(rng, resolvable=True)
            basis = diagonalize_chain(build_chain_bdg(params, mu))
            v = basis.chains[0].vectors
            assert np.max(np.abs(v.conj().T @ v - np.eye(v.shape[0]))) < 1e-12

    def test_tetron_chains_identical(self):
        basis = diagonalize_chain(build_tetron_bdg(SWEET, 0.1))
        assert np.array_equal(basis.chains[0].energies, basis.chains[1].energies)

    def test_mode_completeness(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            params, mu = random_params(rng, resolvable=True)
            h = build_chain_bdg(params, mu)
            basis = diagonalize_chain(h)
            chain = basis.chains[0]
            n = params.n_sites
            full = np.concatenate([chain.energies, -chain.energies])
            rebuilt = (chain.vectors * full) @ chain.vectors.conj().T
            assert np.max(np.abs(rebuilt - h.matrix)) < 1e-10

    def test_partner_columns_are_ph_images(self):
        basis = diagonalize_chain(build_chain_bdg(ChainParams(6, 0.5, 0.5), 0.2))
        v = basis.chains[0].vectors
        n = 6
        for k in range(n):
            partner = np.concatenate([v[n:, k], v[:n, k]]).conj()
            assert np.max(np.abs(v[:, n + k] - partner)) < 1e-12

    def test_rejects_gapless_chain(self):
        # at mu = 2w the transition closes the gap and no isolated pair exists
        params = ChainParams(30, 0.5, 0.5)
        with pytest.raises(DegenerateSubspaceError):
            diagonalize_chain(build_chain_bdg(params, 1.0))


class TestResolveMzms:
    def test_sweet_spot_single_site(self):
        basis = resolve_mzms(diagonalize_chain(build_chain_bdg(SWEET, 0.0)))
        left = basis.chains[0].mzm_left
        n = 4
        weight_site_1 = abs(left[0]) ** 2 + abs(left[n]) ** 2
        assert weight_site_1 == pytest.approx(1.0, abs=1e-12)

    def test_orthonormal_pair(self):
        basis = resolve_mzms(diagonalize_chain(build_chain_bdg(SWEET, 0.0)))
        left = basis.chains[0].mzm_left
        right = basis.chains[0].mzm_right
        assert abs(left.conj() @ right) < 1e-12
        assert np.linalg.norm(left) == pytest.approx(1.0, abs=1e-12)

    def test_exponential_localization(self):
        params = ChainParams(40, 0.5, 0.5)
        basis = resolve_mzms(diagonalize_chain(build_chain_bdg(params, 0.03)))
        left = basis.chains[0].mzm_left
        n = 40
        left_half = np.sum(np.abs(left[:20]) ** 2) + np.sum(np.abs(left[n:n + 20]) ** 2)
        assert left_half > 0.999

    def test_majorana_condition(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            params, mu = random_params(rng, resolvable=True)
            basis = resolved_basis(params, mu)
            for gamma in basis.mzm_vectors:
                n = params.n_sites
                image = np.concatenate([gamma[n:], gamma[:n]]).conj()
                assert np.max(np.abs(image - gamma)) < 1e-10

    def test_sweet_spot_exactness_all_lengths(self):
        for n in (2, 3, 5, 12, 41):
            params = ChainParams(n, 0.5, 0.5)
            basis = diagonalize_chain(build_chain_bdg(params, 0.0))
            eps = basis.chains[0].energies
            assert abs(eps[0]) < 1e-12
            assert np.max(np.abs(eps[1:] - 1.0)) < 1e-10


class TestClosedForms:
    def test_bulk_energy_examples(self):
        assert bulk_energy(np.pi / 2, 0.0, 0.5, 0.5) == pytest.approx(1.0)
        assert bulk_energy(0.0, 0.0, 0.5, 0.87) == pytest.approx(1.0)
        ks = np.linspace(-np.pi, np.pi, 2001)
        vals = [bulk_energy(k, 1.0, 0.5, 0.5) for k in ks]
        assert min(vals) < 2e-3

    def test_band_gap_examples(self):
        assert band_gap(0.0, 0.5) == pytest.approx(1.0)
        assert band_gap(1.0, 0.5) == pytest.approx(0.0)
        assert band_gap(0.03, 0.5) == pytest.approx(0.97)

    def test_is_topological(self):
        assert is_topological(0.03, 0.5, 0.5)
        assert not is_topological(1.0, 0.5, 0.5)
        assert not is_topological(0.0, 0.5, 0.0)
