import numpy as np
import pytest

from loccdisc import (
    BasisFamily,
    DomainError,
    bell_basis,
    bell_subset,
    evaluate,
    find_cub,
    fourier_matrix,
    mub_prime,
    overlap_phase_normalize,
    random_orthogonal_me_triple,
    simultaneously_diagonal_ensemble,
    state_from_matrix,
    synthesize_cub_protocol,
    synthesize_three_qutrit_protocol,
    traceless_unitary_eigensystem,
    uniform_ensemble,
)
from loccdisc.ensembles import haar_unitary
from loccdisc.qstate import generalized_pauli
from loccdisc.synth import default_cub_candidates, pairwise_product_eigenbases

OMEGA = np.exp(2j * np.pi / 3)


def _rays_match(basisa, basisb, tol=1e-8):
    ov = np.abs(basisa.conj().T @ basisb)
    return np.allclose(ov @ ov.T, np.eye(basisa.shape[0]), atol=tol)


class TestTracelessEigensystem:
    def test_clock_matrix(self):
        _, z = generalized_pauli(3)
        c, vecs = traceless_unitary_eigensystem(z)
        assert c == pytest.approx(1.0)
        assert _rays_match(vecs, np.eye(3))
        # labels track the eigenvalue order c * w^i
        for i in range(3):
            np.testing.assert_allclose(z @ vecs[:, i], OMEGA**i * vecs[:, i], atol=1e-12)

    def test_global_phase_extraction(self):
        # c * {1, w, w^2} is invariant under c -> c*w, so the returned phase
        # is a gauge choice; the contract is |c| = 1, unchanged eigenrays,
        # and an exact reconstruction of the rescaled input
        _, z = generalized_pauli(3)
        m = OMEGA * z
        c, vecs = traceless_unitary_eigensystem(m)
        assert abs(abs(c) - 1.0) < 1e-12
        assert _rays_match(vecs, np.eye(3))
        recon = c * sum(OMEGA**i * np.outer(vecs[:, i], vecs[:, i].conj()) for i in range(3))
        assert np.max(np.abs(m - recon)) < 1e-9

    def test_shift_matrix_gives_fourier(self):
        x, _ = generalized_pauli(3)
        _, vecs = traceless_unitary_eigensystem(x)
        assert _rays_match(vecs, fourier_matrix(3))

    def test_reconstruction_random(self, rng):
        for seed in range(30):
            ens = random_orthogonal_me_triple(3, seed)
            b = ens.b_matrices()
            m = b[1].conj().T @ b[0]
            c, vecs = traceless_unitary_eigensystem(m)
            recon = c * sum(OMEGA**i * np.outer(vecs[:, i], vecs[:, i].conj()) for i in range(3))
            assert np.max(np.abs(m - recon)) < 1e-9

    def test_rejects_nontraceless(self):
        with pytest.raises(DomainError):
            traceless_unitary_eigensystem(np.eye(3))

    def test_rejects_nonunitary(self):
        with pytest.raises(DomainError):
            traceless_unitary_eigensystem(np.diag([1.0, 1.0, -2.0]))

    def test_rejects_wrong_shape(self):
        with pytest.raises(DomainError):
            traceless_unitary_eigensystem(np.diag([1.0, -1.0]))


class TestOverlapPhaseNormalize:
    def test_identical_bases(self):
        sol = overlap_phase_normalize(np.eye(3), np.eye(3))
        np.testing.assert_allclose(sol.adjusted_overlap_matrix, np.eye(3), atol=1e-12)
        row0 = sol.adjusted_overlap_matrix[0]
        np.testing.assert_allclose(np.abs(row0), [1, 0, 0], atol=1e-12)

    def test_fourier_against_identity(self):
        sol = overlap_phase_normalize(np.eye(3), fourier_matrix(3))
        mods = np.abs(sol.adjusted_overlap_matrix)
        np.testing.assert_allclose(mods, 1 / np.sqrt(3), atol=1e-12)

    def test_idempotent_on_circulant_input(self):
        base = overlap_phase_normalize(np.eye(3), fourier_matrix(3)).adjusted_overlap_matrix
        sol = overlap_phase_normalize(np.eye(3), base)
        for angle in (sol.gamma, sol.alpha, sol.beta, sol.delta):
            assert abs(np.exp(1j * angle) - 1.0) < 1e-9

    def test_pipeline_property(self):
        # moduli-squared of the eigenbasis overlaps are circulant and the
        # phase solve leaves a circulant unitary, across 200 random triples
        for seed in range(200):
            ens = random_orthogonal_me_triple(3, seed)
            b = ens.b_matrices()
            _, e_vecs = traceless_unitary_eigensystem(b[1].conj().T @ b[0])
            _, f_vecs = traceless_unitary_eigensystem(b[2].conj().T @ b[1])
            v2 = np.abs(e_vecs.conj().T @ f_vecs) ** 2
            for s in range(3):
                vals = [v2[i, (i + s) % 3] for i in range(3)]
                assert max(vals) - min(vals) < 1e-8
            sol = overlap_phase_normalize(e_vecs, f_vecs)
            vp = sol.adjusted_overlap_matrix
            for s in range(3):
                vals = [vp[i, (i + s) % 3] for i in range(3)]
                assert max(abs(vals[i] - vals[(i + 1) % 3]) for i in range(3)) < 1e-9

    def test_rejects_nonorthonormal(self):
        with pytest.raises(DomainError):
            overlap_phase_normalize(np.ones((3, 3)), np.eye(3))

    def test_rejects_noncirculant_overlaps(self, rng):
        # a generic unitary has non-circulant overlap magnitudes vs identity
        u = haar_unitary(3, rng)
        with pytest.raises(DomainError):
            overlap_phase_normalize(np.eye(3), u)


class TestThreeQutritSynthesis:
    def test_commuting_clock_triple(self):
        _, z = generalized_pauli(3)
        ens = uniform_ensemble(
            [state_from_matrix(np.linalg.matrix_power(z, p), 3) for p in range(3)]
        )
        spec = synthesize_three_qutrit_protocol(ens)
        assert spec.max_bob_overlap() < 1e-8
        # Alice's basis is unbiased to the computational basis (Fourier-like)
        np.testing.assert_allclose(np.abs(spec.alice_basis), 1 / np.sqrt(3), atol=1e-10)
        res = evaluate(spec.as_protocol(), ens)
        assert res.success_probability > 1 - 1e-9

    @pytest.mark.parametrize("seed", range(40))
    def test_random_triples(self, seed):
        ens = random_orthogonal_me_triple(3, seed)
        spec = synthesize_three_qutrit_protocol(ens)
        assert spec.max_bob_overlap() < 1e-8
        res = evaluate(spec.as_protocol(), ens)
        assert res.success_probability > 1 - 1e-9

    def test_global_phase_invariance(self, rng):
        ens = random_orthogonal_me_triple(3, 17)
        phases = np.exp(2j * np.pi * rng.random(3))
        perturbed = uniform_ensemble(
            [
                state_from_matrix(ph * b, 3)
                for ph, b in zip(phases, ens.b_matrices())
            ]
        )
        spec = synthesize_three_qutrit_protocol(perturbed)
        res = evaluate(spec.as_protocol(), perturbed)
        assert res.success_probability > 1 - 1e-9

    def test_wrong_count_rejected(self):
        with pytest.raises(DomainError):
            synthesize_three_qutrit_protocol(bell_basis(3))

    def test_wrong_dims_rejected(self):
        with pytest.raises(DomainError):
            synthesize_three_qutrit_protocol(bell_subset(2, [(0, 0), (0, 1), (1, 0)]))

    def test_not_entangled_rejected(self):
        ens = simultaneously_diagonal_ensemble(np.eye(3))
        ens3 = uniform_ensemble(ens.states[:3])
        with pytest.raises(DomainError):
            synthesize_three_qutrit_protocol(ens3)

    def test_not_orthogonal_rejected(self):
        _, z = generalized_pauli(3)
        states = [state_from_matrix(np.eye(3), 3), state_from_matrix(z, 3)]
        ens = uniform_ensemble(states + [states[0]])
        with pytest.raises(DomainError):
            synthesize_three_qutrit_protocol(ens)


class TestCubProtocol:
    def test_bell_triple_with_fourth_mub(self):
        ens = bell_subset(3, [(0, 0), (1, 0), (1, 1)])
        pairs, family = pairwise_product_eigenbases(ens)
        assert pairs == [(0, 1), (0, 2), (1, 2)]
        cub = find_cub(family, list(mub_prime(3).bases))
        assert cub is not None
        spec = synthesize_cub_protocol(ens, cub)
        res = evaluate(spec.as_protocol(), ens)
        assert res.success_probability > 1 - 1e-9

    def test_unbiased_vector_annihilates_products(self):
        # soundness: <b|Bi^dag Bj|b> = 0 for every unbiased basis vector
        ens = bell_subset(5, [(0, 0), (1, 0), (0, 1)])
        _, family = pairwise_product_eigenbases(ens)
        cub = find_cub(family, list(mub_prime(5).bases))
        b_mats = ens.b_matrices()
        for x in range(5):
            col = cub[:, x]
            for i in range(3):
                for j in range(i + 1, 3):
                    val = col.conj() @ (b_mats[i].conj().T @ b_mats[j]) @ col
                    assert abs(val) < 1e-8

    def test_simdiag_with_fourier(self, rng):
        ens = simultaneously_diagonal_ensemble(haar_unitary(4, rng))
        spec = synthesize_cub_protocol(ens, fourier_matrix(4))
        res = evaluate(spec.as_protocol(), ens)
        assert res.success_probability > 1 - 1e-9

    def test_failure_names_pair(self):
        ens = simultaneously_diagonal_ensemble(fourier_matrix(3))
        with pytest.raises(DomainError, match=r"pair \(0, 1\)"):
            synthesize_cub_protocol(ens, np.eye(3, dtype=complex))


class TestFindCub:
    def test_clock_powers_family(self):
        _, z = generalized_pauli(3)
        ens = uniform_ensemble(
            [state_from_matrix(np.linalg.matrix_power(z, p), 3) for p in range(3)]
        )
        _, family = pairwise_product_eigenbases(ens)
        cub = find_cub(family)
        assert cub is not None
        # anything unbiased to the computational basis qualifies
        assert np.max(np.abs(np.abs(cub) ** 2 - 1 / 3)) < 1e-8

    def test_full_mub_family_has_no_cub(self):
        fam = mub_prime(3)
        assert find_cub(fam, list(fam.bases)) is None

    def test_empty_family_vacuous(self):
        fam = BasisFamily(())
        cands = [np.eye(3, dtype=complex)]
        np.testing.assert_allclose(find_cub(fam, cands), np.eye(3), atol=1e-15)

    def test_default_candidates(self):
        assert len(default_cub_candidates(5)) == 6
        assert len(default_cub_candidates(4)) == 1
