import numpy as np
import pytest

from hoisim import (
    Circuit,
    CoherentSpec,
    CrossKerr,
    LinearCoupler,
    OccupationBasis,
    TruncationBoundaryWarning,
    apply_cross_kerr,
    apply_linear,
    beam_splitter,
    build_kerr_cascade,
    fock_state,
    make_coherent_state,
    make_tritter,
    number_expectation,
    random_linear_coupler,
    superposition_state,
    vacuum_state,
)
from hoisim.circuits import circuit_hash

from conftest import random_pure


def dense_unitary(element, basis):
    """Matrix of a circuit element, column by column (test-side oracle)."""
    import warnings

    from hoisim.fock import QuantumState

    cols = []
    for i in range(basis.dim):
        vec = np.zeros(basis.dim, dtype=complex)
        vec[i] = 1.0
        state = QuantumState(basis, vector=vec)
        with warnings.catch_warnings():
            # cap-level basis states are fed on purpose here
            warnings.simplefilter("ignore", TruncationBoundaryWarning)
            if isinstance(element, LinearCoupler):
                out = apply_linear(state, element)
            else:
                out = apply_cross_kerr(state, element)
        cols.append(out.vector)
    return np.array(cols).T


class TestApplyLinear:
    def test_zero_hamiltonian_is_identity(self, small_basis):
        state = random_pure(small_basis, 0)
        coupler = LinearCoupler(np.zeros((3, 3)))
        out = apply_linear(state, coupler)
        assert np.allclose(out.vector, state.vector)

    def test_beam_splitter_single_photon(self):
        basis = OccupationBasis(2, 2)
        state = fock_state(basis, (1, 0))
        out = apply_linear(state, beam_splitter(0, 1, 2))
        expected = superposition_state(basis, {(1, 0): 1, (0, 1): 1})
        assert np.allclose(out.vector, expected.vector, atol=1e-12)
        probs = out.probabilities()
        assert probs[basis.index_of((1, 0))] == pytest.approx(0.5, abs=1e-12)
        assert probs[basis.index_of((0, 1))] == pytest.approx(0.5, abs=1e-12)

    def test_beam_splitter_convention_matrix(self):
        v = beam_splitter(0, 1, 2).single_particle_unitary
        hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        assert np.allclose(v, hadamard, atol=1e-13)

    def test_coherent_amplitudes_rotate_by_single_particle_unitary(self):
        coupler = random_linear_coupler(3, seed=42)
        v = coupler.single_particle_unitary
        alphas = np.array([0.6, 0.3j, -0.4 + 0.2j])
        rotated = v @ alphas
        cap = 14
        basis = OccupationBasis(3, cap)
        state = make_coherent_state(CoherentSpec(tuple(alphas), tail_tol=1e-8), basis)
        out = apply_linear(state, coupler)
        for mode in range(3):
            assert number_expectation(out, mode) == pytest.approx(
                abs(rotated[mode]) ** 2, abs=1e-8
            )

    def test_unitarity_and_number_conservation(self):
        basis = OccupationBasis(3, 6)
        state = random_pure(OccupationBasis(3, 2), 7)
        # embed a low-occupation state into a roomier basis
        vec = np.zeros(basis.dim, dtype=complex)
        small = OccupationBasis(3, 2)
        for idx in range(small.dim):
            vec[basis.index_of(small.occupation_of(idx))] = state.vector[idx]
        from hoisim.fock import QuantumState

        embedded = QuantumState(basis, vector=vec)
        coupler = random_linear_coupler(3, seed=3)
        out = apply_linear(embedded, coupler)
        assert out.norm() == pytest.approx(1.0, abs=1e-9)
        total_in = sum(number_expectation(embedded, m) for m in range(3))
        total_out = sum(number_expectation(out, m) for m in range(3))
        assert total_out == pytest.approx(total_in, abs=1e-10)

    @pytest.mark.filterwarnings("ignore::hoisim.circuits.TruncationBoundaryWarning")
    def test_mixed_state_conjugation(self):
        basis = OccupationBasis(2, 2)
        pure = random_pure(basis, 9)
        coupler = random_linear_coupler(2, seed=5)
        from hoisim.fock import QuantumState

        mixed = QuantumState(basis, matrix=pure.density())
        out_mixed = apply_linear(mixed, coupler)
        out_pure = apply_linear(pure, coupler)
        assert np.allclose(out_mixed.matrix, out_pure.density(), atol=1e-12)

    def test_boundary_warning_at_cap(self):
        basis = OccupationBasis(2, 1)
        state = fock_state(basis, (1, 1))
        with pytest.warns(TruncationBoundaryWarning):
            apply_linear(state, beam_splitter(0, 1, 2))

    def test_dimension_mismatch_rejected(self, small_basis):
        state = vacuum_state(small_basis)
        with pytest.raises(ValueError):
            apply_linear(state, beam_splitter(0, 1, 2))


class TestCrossKerr:
    def test_zero_angle_is_identity(self, small_basis):
        state = random_pure(small_basis, 1)
        out = apply_cross_kerr(state, CrossKerr(0, 2, 0.0))
        assert np.allclose(out.vector, state.vector)

    def test_fock_pair_gets_global_phase_only(self):
        basis = OccupationBasis(2, 2)
        state = fock_state(basis, (1, 1))
        out = apply_cross_kerr(state, CrossKerr(0, 1, 0.8))
        assert np.allclose(out.probabilities(), state.probabilities(), atol=1e-15)
        idx = basis.index_of((1, 1))
        assert out.vector[idx] == pytest.approx(np.exp(0.8j), abs=1e-14)

    def test_equal_modes_rejected(self):
        with pytest.raises(ValueError):
            CrossKerr(1, 1, 0.3)

    def test_heisenberg_action_matrix_free(self):
        # <psi| U^dag a_j^dag U |phi> must equal <psi| a_j^dag e^{-i theta n_k} |phi>
        basis = OccupationBasis(2, 4)
        theta = 0.37
        gate = CrossKerr(0, 1, theta)
        rng = np.random.default_rng(12)
        for trial in range(4):
            psi = random_pure(basis, 100 + trial)
            phi = random_pure(basis, 200 + trial)
            u_phi = apply_cross_kerr(phi, gate)
            u_psi = apply_cross_kerr(psi, gate)
            # lhs: <U psi| a_0^dag |U phi>
            lhs = np.vdot(u_psi.vector, _raise_mode(u_phi.vector, basis, 0))
            # rhs: <psi| a_0^dag e^{-i theta n_1} |phi>
            rotated = phi.vector * np.exp(-1j * theta * basis.mode_numbers(1))
            rhs = np.vdot(psi.vector, _raise_mode(rotated, basis, 0))
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_heisenberg_action_as_matrix_identity(self):
        basis = OccupationBasis(2, 3)
        theta = 1.1
        gate = CrossKerr(0, 1, theta)
        u = dense_unitary(gate, basis)
        adag = _raising_matrix(basis, 0)
        lhs = u.conj().T @ adag @ u
        rhs = adag @ np.diag(np.exp(-1j * theta * basis.mode_numbers(1)))
        assert np.max(np.abs(lhs - rhs)) < 1e-13


def _raise_mode(vec, basis, mode):
    """a_mode^dag applied to a flat vector (drops amplitude pushed past the cap)."""
    tensor = vec.reshape(basis.shape)
    moved = np.moveaxis(tensor, mode, 0)
    out = np.zeros_like(moved)
    n = np.arange(1, basis.levels)
    out[1:] = np.sqrt(n).reshape(-1, *([1] * (basis.mode_count - 1))) * moved[:-1]
    return np.moveaxis(out, 0, mode).reshape(-1)


def _raising_matrix(basis, mode):
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)
    for i in range(basis.dim):
        vec = np.zeros(basis.dim, dtype=complex)
        vec[i] = 1.0
        mat[:, i] = _raise_mode(vec, basis, mode)
    return mat


class TestTritter:
    def test_matrix_is_unitary(self):
        v = make_tritter().single_particle_unitary
        assert np.max(np.abs(v @ v.conj().T - np.eye(3))) < 1e-14

    def test_matrix_entries(self):
        v = make_tritter().single_particle_unitary
        omega = np.exp(2j * np.pi / 3)
        expected = omega ** np.outer(np.arange(3), np.arange(3)) / np.sqrt(3)
        assert np.allclose(v, expected, atol=1e-13)

    def test_single_photon_splits_evenly(self):
        basis = OccupationBasis(3, 1)
        state = fock_state(basis, (1, 0, 0))
        out = apply_linear(state, make_tritter())
        for mode in range(3):
            assert number_expectation(out, mode) == pytest.approx(1 / 3, abs=1e-12)

    def test_identical_coherent_inputs_combine_in_first_port(self):
        alpha = 0.5
        cap = 12
        basis = OccupationBasis(3, cap)
        state = make_coherent_state(CoherentSpec((alpha,) * 3, tail_tol=1e-6), basis)
        out = apply_linear(state, make_tritter())
        v = make_tritter().single_particle_unitary
        expected = abs(v[0] @ np.full(3, alpha)) ** 2
        assert expected == pytest.approx(3 * alpha**2, abs=1e-12)
        assert number_expectation(out, 0) == pytest.approx(expected, abs=1e-7)
        assert number_expectation(out, 1) == pytest.approx(0.0, abs=1e-7)


class TestKerrCascade:
    def test_three_path_structure(self):
        circ = build_kerr_cascade(3, 0.4)
        assert len(circ) == 2
        kerr, splitter = circ.elements
        assert isinstance(kerr, CrossKerr)
        assert (kerr.mode_j, kerr.mode_k) == (0, 2)
        assert isinstance(splitter, LinearCoupler)

    def test_four_path_structure(self):
        circ = build_kerr_cascade(4, 0.4)
        kinds = [type(el).__name__ for el in circ.elements]
        assert kinds == ["CrossKerr", "CrossKerr", "LinearCoupler"]
        assert (circ.elements[0].mode_j, circ.elements[0].mode_k) == (0, 3)
        assert (circ.elements[1].mode_j, circ.elements[1].mode_k) == (0, 2)

    @pytest.mark.filterwarnings("ignore::hoisim.circuits.TruncationBoundaryWarning")
    def test_zero_theta_reduces_to_bare_splitter(self):
        basis = OccupationBasis(3, 2)
        state = random_pure(basis, 4)
        cascade_out = build_kerr_cascade(3, 0.0).apply(state)
        bare_out = apply_linear(state, beam_splitter(0, 1, 3))
        assert np.allclose(cascade_out.vector, bare_out.vector, atol=1e-14)

    def test_too_few_paths_rejected(self):
        with pytest.raises(ValueError):
            build_kerr_cascade(2, 0.1)


class TestRandomCoupler:
    def test_deterministic(self):
        a = random_linear_coupler(4, seed=11)
        b = random_linear_coupler(4, seed=11)
        assert np.array_equal(a.h, b.h)

    def test_hermitian_with_real_spectrum(self):
        coupler = random_linear_coupler(3, seed=2)
        assert np.max(np.abs(coupler.h - coupler.h.conj().T)) < 1e-14
        eigs = np.linalg.eigvalsh(coupler.h)
        assert np.all(np.isreal(eigs))


class TestCircuit:
    @pytest.mark.filterwarnings("ignore::hoisim.circuits.TruncationBoundaryWarning")
    def test_elementwise_equals_composed_matrix(self):
        basis = OccupationBasis(3, 2)
        circ = build_kerr_cascade(3, 0.9)
        total = np.eye(basis.dim, dtype=complex)
        for el in circ.elements:
            total = dense_unitary(el, basis) @ total
        state = random_pure(basis, 8)
        assert np.allclose(circ.apply(state).vector, total @ state.vector, atol=1e-10)

    def test_hash_stable_and_sensitive(self):
        a = build_kerr_cascade(3, 0.5)
        b = build_kerr_cascade(3, 0.5)
        c = build_kerr_cascade(3, 0.6)
        assert circuit_hash(a) == circuit_hash(b)
        assert circuit_hash(a) != circuit_hash(c)

    def test_mode_count_validated(self):
        with pytest.raises(ValueError):
            Circuit(2, (CrossKerr(0, 2, 0.1),))
