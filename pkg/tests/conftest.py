import numpy as np
import pytest

from hoisim import Circuit, LinearCoupler, OccupationBasis, QuantumState


def random_pure(basis: OccupationBasis, seed: int) -> QuantumState:
    rng = np.random.default_rng(seed)
    vec = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    vec /= np.linalg.norm(vec)
    return QuantumState(basis, vector=vec)


def random_mixed(basis: OccupationBasis, seed: int, rank: int = 3) -> QuantumState:
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(rank))
    mat = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    for r in range(rank):
        vec = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
        vec /= np.linalg.norm(vec)
        mat += weights[r] * np.outer(vec, vec.conj())
    return QuantumState(basis, matrix=mat)


def random_two_mode_chain(modes: int, seed: int, depth: int = 4) -> Circuit:
    """Composition of random two-mode couplers; generically mixes all modes."""
    rng = np.random.default_rng(seed)
    elements = []
    for _ in range(depth):
        a, b = rng.choice(modes, size=2, replace=False)
        block = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        block = (block + block.conj().T) / 2
        h = np.zeros((modes, modes), dtype=np.complex128)
        h[np.ix_([a, b], [a, b])] = block
        elements.append(LinearCoupler(h))
    return Circuit(modes, tuple(elements))


@pytest.fixture
def small_basis() -> OccupationBasis:
    return OccupationBasis(3, 2)
