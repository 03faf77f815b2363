"""Unitary evolutions on the truncated Fock space.

Linear mode couplers exp(i H) with H = sum h_nm a_n^dag a_m are applied
exactly per total-photon-number sector (Hermitian diagonalization of the
sector Hamiltonian restricted to the modes the coupler actually touches), so
each sector evolves unitarily and sectors whose total occupation fits under
the per-mode cap evolve without any truncation error.  Cross-Kerr phase gates
are diagonal in the occupation basis and therefore exact.

Frozen 50-50 beam-splitter convention: the single-particle matrix is the real
Hadamard [[1, 1], [1, -1]]/sqrt(2), i.e. a single photon entering either port
splits evenly and the first output port carries the symmetric (+) combination.
Fringe offsets of downstream interference functionals absorb this choice.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import logm

from .fock import OccupationBasis, QuantumState

HERMITICITY_TOL = 1e-12
# Output probability mass sitting exactly at the occupation cap above which a
# truncation diagnostic is emitted (the dominant silent error source).
BOUNDARY_WARN_THRESHOLD = 1e-10


class TruncationBoundaryWarning(UserWarning):
    """Non-negligible amplitude reached the occupation cap during evolution."""


@dataclass(frozen=True)
class LinearCoupler:
    """Number-conserving coupler exp(i H), H = sum_{n,m} h_nm a_n^dag a_m."""

    h: np.ndarray
    label: str = field(default="", compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        h = np.array(self.h, dtype=np.complex128)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError("h must be a square matrix")
        err = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
        if err > HERMITICITY_TOL:
            raise ValueError(f"h is not Hermitian (max deviation {err:g})")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)

    @property
    def mode_count(self) -> int:
        return self.h.shape[0]

    @property
    def single_particle_unitary(self) -> np.ndarray:
        """exp(i h): the matrix rotating coherent amplitudes, alpha -> U alpha."""
        w, v = np.linalg.eigh(self.h)
        return (v * np.exp(1j * w)) @ v.conj().T

    def active_modes(self) -> tuple[int, ...]:
        mag = np.abs(self.h)
        touched = (mag.sum(axis=0) + mag.sum(axis=1)) > 0
        return tuple(int(m) for m in np.flatnonzero(touched))


@dataclass(frozen=True)
class CrossKerr:
    """Two-mode phase gate diag(exp(i theta n_j n_k)).

    The sign is fixed so that conjugation sends a_j^dag to
    a_j^dag exp(-i theta n_k) (and symmetrically for mode k).
    """

    mode_j: int
    mode_k: int
    theta: float

    def __post_init__(self):
        if self.mode_j == self.mode_k:
            raise ValueError("cross-Kerr gate needs two distinct modes")
        if not np.isfinite(self.theta):
            raise ValueError("theta must be finite")


CircuitElement = LinearCoupler | CrossKerr


@dataclass(frozen=True)
class Circuit:
    """Ordered sequence of circuit elements acting on a fixed number of modes."""

    mode_count: int
    elements: tuple[CircuitElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        for el in self.elements:
            if isinstance(el, LinearCoupler):
                if el.mode_count != self.mode_count:
                    raise ValueError("coupler mode count does not match the circuit")
            elif isinstance(el, CrossKerr):
                if not (0 <= el.mode_j < self.mode_count and 0 <= el.mode_k < self.mode_count):
                    raise ValueError("cross-Kerr modes out of range for the circuit")
            else:
                raise TypeError(f"unsupported circuit element {type(el).__name__}")

    def __len__(self) -> int:
        return len(self.elements)

    def apply(self, state: QuantumState) -> QuantumState:
        if state.basis.mode_count != self.mode_count:
            raise ValueError("state mode count does not match the circuit")
        out = state
        for el in self.elements:
            if isinstance(el, LinearCoupler):
                out = apply_linear(out, el)
            else:
                out = apply_cross_kerr(out, el)
        return out

    def to_dict(self) -> dict:
        elements = []
        for el in self.elements:
            if isinstance(el, CrossKerr):
                elements.append(
                    {"type": "cross_kerr", "modes": [el.mode_j, el.mode_k], "theta": el.theta}
                )
            else:
                entry = {
                    "type": "linear",
                    "h_real": np.real(el.h).tolist(),
                    "h_imag": np.imag(el.h).tolist(),
                }
                if el.label:
                    entry["label"] = el.label
                elements.append(entry)
        return {"modes": self.mode_count, "elements": elements}


def circuit_hash(circuit: Circuit) -> str:
    """Stable short hash of a circuit description, for output metadata."""
    payload = json.dumps(circuit.to_dict(), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _sector_blocks(coupler: LinearCoupler, n_max: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per-total-occupation unitary blocks of exp(i H) on the active-mode sub-basis."""
    active = coupler.active_modes()
    key = (n_max, active)
    cached = coupler._cache.get(key)
    if cached is not None:
        return cached

    h = coupler.h[np.ix_(active, active)]
    k = len(active)
    sub = OccupationBasis(k, n_max)
    occ = sub.occupations
    strides = sub.strides
    totals = occ.sum(axis=1)
    hops = [
        (a, b, h[a, b])
        for a in range(k)
        for b in range(k)
        if a != b and h[a, b] != 0
    ]
    blocks: list[tuple[np.ndarray, np.ndarray]] = []
    diag_coeffs = np.real(np.diag(h))
    for total in range(int(totals.max()) + 1):
        idx = np.flatnonzero(totals == total)
        if idx.size == 0:
            continue
        d = idx.size
        H = np.zeros((d, d), dtype=np.complex128)
        H[np.diag_indices(d)] = occ[idx] @ diag_coeffs
        pos = {int(f): i for i, f in enumerate(idx)}
        for i, flat in enumerate(idx):
            row = occ[flat]
            for a, b, amp in hops:
                if row[b] >= 1 and row[a] + 1 <= n_max:
                    target = int(flat + strides[a] - strides[b])
                    # a_a^dag a_b |row> = sqrt((n_a+1) n_b) |row + e_a - e_b>
                    H[pos[target], i] += amp * np.sqrt((row[a] + 1) * row[b])
        w, v = np.linalg.eigh(H)
        U = (v * np.exp(1j * w)) @ v.conj().T
        blocks.append((idx, U))
    coupler._cache[key] = blocks
    return blocks


def _apply_active(values: np.ndarray, basis: OccupationBasis, coupler: LinearCoupler) -> np.ndarray:
    """Apply the coupler to axis 0 of `values` viewed as (dim, batch)."""
    active = coupler.active_modes()
    batch = values.reshape(basis.dim, -1).shape[1]
    tensor = values.reshape(basis.shape + (batch,))
    tensor = np.moveaxis(tensor, list(active), list(range(len(active))))
    d_active = basis.levels ** len(active)
    rest_shape = tensor.shape[len(active):]
    mat = np.ascontiguousarray(tensor).reshape(d_active, -1)
    out = mat.copy()
    for idx, U in _sector_blocks(coupler, basis.n_max):
        out[idx] = U @ mat[idx]
    out = out.reshape((basis.levels,) * len(active) + rest_shape)
    out = np.moveaxis(out, list(range(len(active))), list(active))
    return out.reshape(values.shape)


def _boundary_mass(probabilities: np.ndarray, basis: OccupationBasis, modes: Sequence[int]) -> float:
    """Probability in sectors whose active-mode total exceeds n_max.

    Within any fixed total occupation <= n_max the per-sector evolution is an
    exact restriction of the untruncated one, so only these sectors can carry
    truncation distortion.
    """
    totals = np.zeros(basis.dim, dtype=np.int64)
    for m in modes:
        totals = totals + basis.mode_numbers(m)
    return float(probabilities[totals > basis.n_max].sum())


def apply_linear(state: QuantumState, coupler: LinearCoupler) -> QuantumState:
    """Evolve a state by exp(i H); exactly unitary within each number sector."""
    basis = state.basis
    if coupler.mode_count != basis.mode_count:
        raise ValueError("coupler dimension does not match the state")
    active = coupler.active_modes()
    if not active:
        return state
    if state.is_pure:
        vec = _apply_active(state.vector, basis, coupler)
        out = QuantumState(basis, vector=vec, unnormalized=state.unnormalized)
    else:
        stage = _apply_active(state.matrix, basis, coupler).conj().T
        mat = _apply_active(stage, basis, coupler).conj().T
        mat = (mat + mat.conj().T) / 2
        out = QuantumState(basis, matrix=mat, unnormalized=state.unnormalized)
    mass = _boundary_mass(out.probabilities(), basis, active)
    scale = max(out.trace(), 1e-300)
    if mass > BOUNDARY_WARN_THRESHOLD * scale:
        warnings.warn(
            f"probability {mass:.3e} occupies total-occupation sectors above "
            f"n_max={basis.n_max}, which evolve with truncation distortion",
            TruncationBoundaryWarning,
            stacklevel=2,
        )
    return out


def apply_cross_kerr(state: QuantumState, gate: CrossKerr) -> QuantumState:
    """Apply the diagonal phase exp(i theta n_j n_k) (exact on the truncated space)."""
    basis = state.basis
    if not (0 <= gate.mode_j < basis.mode_count and 0 <= gate.mode_k < basis.mode_count):
        raise IndexError("gate modes out of range")
    phases = np.exp(
        1j * gate.theta * basis.mode_numbers(gate.mode_j) * basis.mode_numbers(gate.mode_k)
    )
    if state.is_pure:
        return QuantumState(basis, vector=state.vector * phases, unnormalized=state.unnormalized)
    mat = state.matrix * phases[:, None] * phases.conj()[None, :]
    return QuantumState(basis, matrix=mat, unnormalized=state.unnormalized)


def _coupler_from_unitary(v: np.ndarray, mode_count: int, where: Sequence[int], label: str) -> LinearCoupler:
    """Embed a small single-particle unitary as exp(i h) on the given modes."""
    log = logm(v)
    h_small = (log / 1j + (log / 1j).conj().T) / 2
    h = np.zeros((mode_count, mode_count), dtype=np.complex128)
    h[np.ix_(where, where)] = h_small
    coupler = LinearCoupler(h, label=label)
    realized = coupler.single_particle_unitary[np.ix_(where, where)]
    if np.max(np.abs(realized - v)) > 1e-12:
        raise RuntimeError("single-particle matrix log failed to reproduce the target unitary")
    return coupler


def beam_splitter(mode_a: int, mode_b: int, mode_count: int) -> LinearCoupler:
    """50-50 splitter between two modes with the frozen real-Hadamard convention."""
    if mode_a == mode_b or not (0 <= mode_a < mode_count and 0 <= mode_b < mode_count):
        raise ValueError("beam splitter needs two distinct in-range modes")
    hadamard = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    return _coupler_from_unitary(hadamard, mode_count, [mode_a, mode_b], "beam_splitter")


def make_tritter() -> LinearCoupler:
    """Symmetric three-port splitter with single-particle matrix w^{jk}/sqrt(3),
    w = exp(2 pi i / 3), indices 0..2; the first row is real so the first port
    collects the straight sum of the three input operators."""
    omega = np.exp(2j * np.pi / 3)
    j = np.arange(3)
    v = omega ** np.outer(j, j) / np.sqrt(3)
    return _coupler_from_unitary(v, 3, [0, 1, 2], "tritter")


def build_kerr_cascade(mode_count: int, theta: float) -> Circuit:
    """Cross-Kerr cascade: gates coupling path 0 with paths M-1 down to 2, then a
    50-50 splitter between paths 0 and 1 (the detected pair)."""
    if mode_count < 3:
        raise ValueError("the cascade needs at least three paths")
    elements: list[CircuitElement] = [
        CrossKerr(0, partner, theta) for partner in range(mode_count - 1, 1, -1)
    ]
    elements.append(beam_splitter(0, 1, mode_count))
    return Circuit(mode_count, tuple(elements))


def random_linear_coupler(mode_count: int, seed: int) -> LinearCoupler:
    """Gaussian-ensemble-style random Hermitian coupler; deterministic per seed."""
    if mode_count < 2:
        raise ValueError("need at least two modes")
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(mode_count, mode_count)) + 1j * rng.normal(size=(mode_count, mode_count))
    h = (a + a.conj().T) / (2 * np.sqrt(mode_count))
    return LinearCoupler(h, label=f"random(seed={seed})")
