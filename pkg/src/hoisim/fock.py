"""Truncated multi-mode bosonic Fock space.

Occupation bases with a per-mode cap, pure/mixed quantum states, coherent-state
preparation with a quantified truncation tail, partial traces, and the
path-blocker channel that replaces a mode by vacuum while leaving the other
modes' reduced state untouched.

Flat indexing convention: row-major over occupation tuples with mode 0 as the
most significant digit, i.e. ``index = sum_m n_m * (n_max+1)**(M-1-m)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from scipy import stats

# Tolerance for algebraic identities (norms, traces, Hermiticity).
ALGEBRA_TOL = 1e-12
# Tolerance for truncation-limited comparisons.
TRUNCATION_TOL = 1e-8
# Default bound on the coherent-state occupation tail beyond n_max.
DEFAULT_TAIL_TOL = 1e-10

# Positive-semidefiniteness is only verified eagerly below this dimension;
# an eigendecomposition at every construction would dominate large runs.
_PSD_CHECK_MAX_DIM = 1024

# Blocking an entangled mode requires the full density matrix; refuse to
# allocate one beyond this dimension instead of thrashing memory.
_DENSE_PROMOTION_MAX_DIM = 8192


class TailTooLarge(ValueError):
    """Occupation cap too small for the requested coherent-state tail tolerance."""


@dataclass(frozen=True)
class OccupationBasis:
    """Product basis |n_0 ... n_{M-1}> with per-mode occupations 0..n_max."""

    mode_count: int
    n_max: int

    def __post_init__(self):
        if self.mode_count < 1:
            raise ValueError("mode_count must be a positive integer")
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")

    @property
    def levels(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return self.levels**self.mode_count

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.levels,) * self.mode_count

    @cached_property
    def strides(self) -> np.ndarray:
        return self.levels ** np.arange(self.mode_count - 1, -1, -1, dtype=np.int64)

    @cached_property
    def occupations(self) -> np.ndarray:
        """(dim, M) integer array; row i is the occupation tuple of flat index i."""
        idx = np.arange(self.dim, dtype=np.int64)
        occ = (idx[:, None] // self.strides[None, :]) % self.levels
        occ.setflags(write=False)
        return occ

    def index_of(self, occupation: Sequence[int]) -> int:
        occ = np.asarray(occupation, dtype=np.int64)
        if occ.shape != (self.mode_count,):
            raise ValueError(f"occupation must have length {self.mode_count}")
        if np.any(occ < 0) or np.any(occ > self.n_max):
            raise ValueError("occupation out of range for this basis")
        return int(occ @ self.strides)

    def occupation_of(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.dim:
            raise IndexError("flat index out of range")
        return tuple(int(x) for x in self.occupations[index])

    def mode_numbers(self, mode: int) -> np.ndarray:
        """Occupation of `mode` for every basis state (the number operator diagonal)."""
        if not 0 <= mode < self.mode_count:
            raise IndexError("mode index out of range")
        return self.occupations[:, mode]


@dataclass(frozen=True)
class BlockPattern:
    """Open/blocked flags per path; 0 = open, 1 = blocked."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("pattern bits must be 0 or 1")
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    @property
    def blocked_modes(self) -> tuple[int, ...]:
        return tuple(m for m, b in enumerate(self.bits) if b)

    @property
    def weight(self) -> int:
        return sum(self.bits)

    @property
    def sign(self) -> int:
        """Alternating sign (-1)**(number of blocked paths)."""
        return -1 if self.weight % 2 else 1

    def label(self) -> str:
        return "".join(str(b) for b in self.bits)


def all_block_patterns(mode_count: int) -> Iterator[BlockPattern]:
    """All 2**M patterns in binary-counting order, first mode most significant."""
    for i in range(2**mode_count):
        bits = tuple((i >> (mode_count - 1 - m)) & 1 for m in range(mode_count))
        yield BlockPattern(bits)


@dataclass(frozen=True)
class QuantumState:
    """Pure state vector or density matrix over a truncated occupation basis.

    Exactly one of ``vector`` / ``matrix`` is set.  States are immutable after
    construction (the arrays are flagged read-only); every operation returns a
    new state.  Setting ``unnormalized=True`` skips the unit-norm / unit-trace
    checks, which is needed for blocked condensate-style conventions and for
    intensity arithmetic on scaled states.
    """

    basis: OccupationBasis
    vector: np.ndarray | None = None
    matrix: np.ndarray | None = None
    unnormalized: bool = False

    def __post_init__(self):
        if (self.vector is None) == (self.matrix is None):
            raise ValueError("provide exactly one of vector or matrix")
        dim = self.basis.dim
        if self.vector is not None:
            vec = np.array(self.vector, dtype=np.complex128)
            if vec.shape != (dim,):
                raise ValueError(f"vector must have shape ({dim},)")
            if not self.unnormalized:
                nrm = np.linalg.norm(vec)
                if abs(nrm - 1.0) > ALGEBRA_TOL:
                    raise ValueError(
                        f"pure state norm {nrm!r} differs from 1 beyond {ALGEBRA_TOL}; "
                        "pass unnormalized=True to keep a scaled state"
                    )
            vec.setflags(write=False)
            object.__setattr__(self, "vector", vec)
        else:
            mat = np.array(self.matrix, dtype=np.complex128)
            if mat.shape != (dim, dim):
                raise ValueError(f"matrix must have shape ({dim}, {dim})")
            herm_err = np.max(np.abs(mat - mat.conj().T)) if dim else 0.0
            if herm_err > ALGEBRA_TOL:
                raise ValueError(f"density matrix not Hermitian (max deviation {herm_err:g})")
            if not self.unnormalized:
                tr = mat.trace().real
                if abs(tr - 1.0) > ALGEBRA_TOL:
                    raise ValueError(
                        f"density matrix trace {tr!r} differs from 1 beyond {ALGEBRA_TOL}"
                    )
            if dim <= _PSD_CHECK_MAX_DIM:
                scale = max(abs(mat.trace().real), 1.0)
                lowest = np.linalg.eigvalsh(mat)[0]
                if lowest < -1e-10 * scale:
                    raise ValueError(f"density matrix has negative eigenvalue {lowest:g}")
            mat.setflags(write=False)
            object.__setattr__(self, "matrix", mat)

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    def norm(self) -> float:
        if self.is_pure:
            return float(np.linalg.norm(self.vector))
        return float(self.matrix.trace().real)

    def trace(self) -> float:
        """Total weight: squared norm for vectors, trace for density matrices."""
        if self.is_pure:
            return float(np.vdot(self.vector, self.vector).real)
        return float(self.matrix.trace().real)

    def density(self) -> np.ndarray:
        """Dense density matrix (copies; promotes pure states)."""
        if self.is_pure:
            if self.basis.dim > _DENSE_PROMOTION_MAX_DIM:
                raise ValueError(
                    f"refusing to build a {self.basis.dim}x{self.basis.dim} density matrix; "
                    "use a smaller basis for density-matrix work"
                )
            return np.outer(self.vector, self.vector.conj())
        return self.matrix.copy()

    def probabilities(self) -> np.ndarray:
        """Occupation-basis probabilities (diagonal of the density matrix)."""
        if self.is_pure:
            return np.abs(self.vector) ** 2
        return np.maximum(self.matrix.diagonal().real, 0.0)


@dataclass(frozen=True)
class CoherentSpec:
    """Per-mode coherent amplitudes alpha_m = |alpha_m| e^{i phi_m}."""

    amplitudes: tuple[complex, ...]
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", tuple(complex(a) for a in self.amplitudes))
        if self.tail_tol <= 0:
            raise ValueError("tail_tol must be positive")

    @property
    def mean_photons(self) -> tuple[float, ...]:
        return tuple(abs(a) ** 2 for a in self.amplitudes)


def poisson_tail(mean_n: float, n_max: int) -> float:
    """Probability mass of Poisson(mean_n) strictly above n_max."""
    if mean_n == 0.0:
        return 0.0
    return float(stats.poisson.sf(n_max, mean_n))


def n_max_for_tail(mean_n: float, tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest occupation cap whose Poisson tail is below `tol`."""
    if mean_n <= 0.0:
        return 0
    return int(stats.poisson.isf(tol, mean_n))


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    """Truncated single-mode coherent amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!),
    renormalized over 0..n_max."""
    n = np.arange(n_max + 1)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    if alpha == 0:
        c = np.zeros(n_max + 1, dtype=np.complex128)
        c[0] = 1.0
        return c
    # magnitude in log space to stay finite for large n_max
    log_mag = -abs(alpha) ** 2 / 2 + n * math.log(abs(alpha)) - 0.5 * log_fact
    phase = np.exp(1j * n * np.angle(alpha))
    c = np.exp(log_mag) * phase
    c /= np.linalg.norm(c)
    return c


def make_coherent_state(spec: CoherentSpec, basis: OccupationBasis) -> QuantumState:
    """Normalized product coherent state on the truncated basis.

    Raises TailTooLarge if any mode's Poisson occupation tail beyond n_max
    exceeds the requested tolerance.
    """
    if len(spec.amplitudes) != basis.mode_count:
        raise ValueError("one amplitude per mode is required")
    for m, mean in enumerate(spec.mean_photons):
        tail = poisson_tail(mean, basis.n_max)
        if tail > spec.tail_tol:
            raise TailTooLarge(
                f"mode {m}: Poisson tail {tail:.3e} beyond n_max={basis.n_max} exceeds "
                f"tolerance {spec.tail_tol:.1e}; need n_max >= {n_max_for_tail(mean, spec.tail_tol)}"
            )
    vec = np.ones(1, dtype=np.complex128)
    for alpha in spec.amplitudes:
        vec = np.kron(vec, coherent_amplitudes(alpha, basis.n_max))
    return QuantumState(basis, vector=vec)


def vacuum_state(basis: OccupationBasis) -> QuantumState:
    vec = np.zeros(basis.dim, dtype=np.complex128)
    vec[0] = 1.0
    return QuantumState(basis, vector=vec)


def fock_state(basis: OccupationBasis, occupation: Sequence[int]) -> QuantumState:
    vec = np.zeros(basis.dim, dtype=np.complex128)
    vec[basis.index_of(occupation)] = 1.0
    return QuantumState(basis, vector=vec)


def superposition_state(
    basis: OccupationBasis,
    terms: Mapping[tuple[int, ...], complex],
    normalize: bool = True,
) -> QuantumState:
    """Pure state from a {occupation tuple: amplitude} mapping."""
    vec = np.zeros(basis.dim, dtype=np.complex128)
    for occ, amp in terms.items():
        vec[basis.index_of(occ)] += amp
    if normalize:
        nrm = np.linalg.norm(vec)
        if nrm == 0:
            raise ValueError("cannot normalize the zero state")
        vec /= nrm
    return QuantumState(basis, vector=vec, unnormalized=not normalize)


def number_expectation(state: QuantumState, mode: int) -> float:
    """Mean occupation <a_m^dag a_m>."""
    weights = state.basis.mode_numbers(mode)
    return float(state.probabilities() @ weights)


def photon_number_distribution(state: QuantumState, mode: int) -> np.ndarray:
    """Marginal occupation distribution p(n) of one mode, length n_max+1."""
    probs = state.probabilities()
    occ = state.basis.mode_numbers(mode)
    out = np.zeros(state.basis.levels)
    np.add.at(out, occ, probs)
    return out


def _trace_out_matrix(mat: np.ndarray, basis: OccupationBasis, modes: Iterable[int]) -> np.ndarray:
    """Partial trace of a dim x dim matrix over `modes`; returns the matrix on
    the remaining modes (original relative order)."""
    modes = sorted(set(modes))
    m_count = basis.mode_count
    tensor = mat.reshape(basis.shape * 2)
    for mode in reversed(modes):
        ket_axes = tensor.ndim // 2
        tensor = np.trace(tensor, axis1=mode, axis2=ket_axes + mode)
    kept = m_count - len(modes)
    d = basis.levels**kept
    return tensor.reshape(d, d)


def partial_trace(state: QuantumState, modes_to_remove: Iterable[int]) -> QuantumState:
    """Reduced density operator after tracing out `modes_to_remove`."""
    modes = sorted(set(int(m) for m in modes_to_remove))
    M = state.basis.mode_count
    if not modes:
        raise ValueError("modes_to_remove must be non-empty")
    if any(m < 0 or m >= M for m in modes):
        raise IndexError("mode index out of range")
    if len(modes) == M:
        raise ValueError("cannot trace out every mode; at least one must remain")
    reduced_basis = OccupationBasis(M - len(modes), state.basis.n_max)
    if state.is_pure:
        keep = [m for m in range(M) if m not in modes]
        psi = state.vector.reshape(state.basis.shape)
        psi = np.transpose(psi, keep + modes)
        psi = psi.reshape(reduced_basis.dim, -1)
        rho = psi @ psi.conj().T
    else:
        rho = _trace_out_matrix(state.matrix, state.basis, modes)
    return QuantumState(reduced_basis, matrix=rho, unnormalized=state.unnormalized)


def _embed_vacuum_mode(reduced: np.ndarray, basis: OccupationBasis, mode: int) -> np.ndarray:
    """|0><0| at `mode` tensored with `reduced` (a matrix on the other modes)."""
    M = basis.mode_count
    out = np.zeros(basis.shape * 2, dtype=np.complex128)
    kept_shape = tuple(basis.levels for _ in range(M - 1))
    idx = [slice(None)] * (2 * M)
    idx[mode] = 0
    idx[M + mode] = 0
    out[tuple(idx)] = reduced.reshape(kept_shape * 2)
    return out.reshape(basis.dim, basis.dim)


def block_mode(state: QuantumState, mode: int) -> QuantumState:
    """Path-blocker channel: vacuum in `mode`, other modes' reduced state kept.

    The output stays a pure vector whenever the blocked mode is unentangled
    from the rest (detected through the purity of the mode's marginal);
    otherwise the state is promoted to a density matrix.
    """
    basis = state.basis
    M = basis.mode_count
    if not 0 <= mode < M:
        raise IndexError("mode index out of range")
    if M == 1:
        # blocking the only mode always yields vacuum with the input's weight
        w = state.trace()
        vec = np.zeros(basis.dim, dtype=np.complex128)
        vec[0] = math.sqrt(max(w, 0.0))
        return QuantumState(basis, vector=vec, unnormalized=state.unnormalized)

    if state.is_pure:
        d = basis.levels
        psi = state.vector.reshape(basis.shape)
        psi_m = np.moveaxis(psi, mode, 0).reshape(d, -1)
        total = float(np.vdot(psi_m, psi_m).real)
        if total == 0.0:
            return state
        marginal = psi_m @ psi_m.conj().T
        purity = float(np.trace(marginal @ marginal).real) / total**2
        if abs(purity - 1.0) < 1e-12:
            # mode factorizes: keep the rest-of-system vector, put vacuum in `mode`
            row_weights = np.einsum("ij,ij->i", psi_m, psi_m.conj()).real
            row = int(np.argmax(row_weights))
            rest = psi_m[row] * (math.sqrt(total) / np.linalg.norm(psi_m[row]))
            out = np.zeros_like(psi_m)
            out[0] = rest
            out = out.reshape((d,) + tuple(d for _ in range(M - 1)))
            vec = np.moveaxis(out, 0, mode).reshape(-1)
            return QuantumState(basis, vector=vec, unnormalized=state.unnormalized)
        if basis.dim > _DENSE_PROMOTION_MAX_DIM:
            raise ValueError(
                "blocking an entangled mode needs the density matrix; "
                f"dim={basis.dim} is beyond the dense limit"
            )
        mat = np.outer(state.vector, state.vector.conj())
    else:
        mat = state.matrix

    reduced = _trace_out_matrix(mat, basis, [mode])
    blocked = _embed_vacuum_mode(reduced, basis, mode)
    return QuantumState(basis, matrix=blocked, unnormalized=state.unnormalized)


def apply_blocking(state: QuantumState, pattern: BlockPattern) -> QuantumState:
    """Compose the blocker channel over every mode flagged 1 (order irrelevant)."""
    if len(pattern) != state.basis.mode_count:
        raise ValueError("pattern length must equal the mode count")
    out = state
    for mode in pattern.blocked_modes:
        out = block_mode(out, mode)
    return out
