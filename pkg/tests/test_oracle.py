import numpy as np
import pytest

from tomoqkd import oracle
from tomoqkd.states import (
    Basis,
    basis_marginals,
    from_probabilities,
    is_distillable,
    werner,
)

from helpers import random_states


class TestDensityMatrix:
    def test_pure_state_corners(self):
        rho = oracle.density_matrix(from_probabilities(1, 0, 0, 0))
        expected = np.zeros((4, 4))
        expected[np.ix_((0, 3), (0, 3))] = 0.5
        assert rho == pytest.approx(expected, abs=1e-15)

    def test_maximally_mixed(self):
        rho = oracle.density_matrix(from_probabilities(0.25, 0.25, 0.25, 0.25))
        assert rho == pytest.approx(np.eye(4) / 4, abs=1e-15)

    def test_werner_spectrum(self):
        eigs = np.linalg.eigvalsh(oracle.density_matrix(werner(0.8)))
        assert eigs == pytest.approx(sorted([1 / 15, 1 / 15, 1 / 15, 0.8]), abs=1e-14)

    def test_hermitian_unit_trace_psd(self):
        rng = np.random.default_rng(11)
        for state in random_states(rng, 300):
            rho = oracle.density_matrix(state)
            assert np.allclose(rho, rho.conj().T, atol=1e-14)
            assert np.trace(rho).real == pytest.approx(1.0, abs=1e-13)
            assert np.linalg.eigvalsh(rho).min() >= -1e-10


class TestJointOutcomeProbs:
    def test_werner_matched_z(self):
        table = oracle.joint_outcome_probs(werner(0.8), Basis.Z, Basis.Z)
        expected = np.array([[13 / 30, 1 / 15], [1 / 15, 13 / 30]])
        assert table == pytest.approx(expected, abs=1e-14)

    def test_pure_state_matched_y_anticorrelates(self):
        table = oracle.joint_outcome_probs(from_probabilities(1, 0, 0, 0), Basis.Y, Basis.Y)
        assert table == pytest.approx(np.array([[0.0, 0.5], [0.5, 0.0]]), abs=1e-15)

    def test_mismatched_bases_uniform(self):
        rng = np.random.default_rng(12)
        for state in random_states(rng, 50):
            for a in Basis:
                for b in Basis:
                    if a is b:
                        continue
                    table = oracle.joint_outcome_probs(state, a, b)
                    assert np.max(np.abs(table - 0.25)) <= 1e-12

    def test_matched_bases_reproduce_marginals(self):
        rng = np.random.default_rng(13)
        for state in random_states(rng, 200):
            m = basis_marginals(state)
            expected_same = {Basis.X: m.q0, Basis.Y: m.r0, Basis.Z: m.p0}
            for basis in Basis:
                table = oracle.joint_outcome_probs(state, basis, basis)
                same = table[0, 0] + table[1, 1]
                assert same == pytest.approx(expected_same[basis], abs=1e-12)
                # each party's single-qubit marginal stays maximally mixed
                assert table.sum(axis=0) == pytest.approx([0.5, 0.5], abs=1e-12)
                assert table.sum(axis=1) == pytest.approx([0.5, 0.5], abs=1e-12)


class TestPartialTranspose:
    def test_min_eigenvalue_tracks_largest_weight(self):
        rng = np.random.default_rng(14)
        for state in random_states(rng, 500):
            smallest = oracle.min_partial_transpose_eigenvalue(state)
            assert smallest == pytest.approx(0.5 - max(state.probs), abs=1e-12)

    def test_agreement_with_weight_rule(self):
        rng = np.random.default_rng(15)
        for state in random_states(rng, 2000, exclude_band=1e-12):
            assert oracle.is_nppt(state) == is_distillable(state)

    def test_agreement_near_boundary(self):
        # offsets stay clear of the 1e-12 indifference band
        rng = np.random.default_rng(16)
        count = 0
        while count < 100:
            offset = rng.uniform(1e-9, 1e-6) * rng.choice([-1.0, 1.0])
            rest = rng.dirichlet((1.0, 1.0, 1.0)) * (0.5 - offset)
            if rest.max() >= 0.5 + offset:
                continue
            state = from_probabilities(0.5 + offset, *rest)
            assert oracle.is_nppt(state) == is_distillable(state) == (offset > 0)
            count += 1
