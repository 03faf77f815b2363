"""Sorkin interference machinery.

Intensity tables over all 2^M open/blocked path configurations, the M-path
alternating-sign interference functional and its subset variants, the
interference operator with its trace identities, and detector response models
(ideal mean count, saturating, and count-noise convolution).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

import numpy as np

from .circuits import Circuit
from .fock import (
    ALGEBRA_TOL,
    BlockPattern,
    OccupationBasis,
    QuantumState,
    all_block_patterns,
    apply_blocking,
    photon_number_distribution,
    _trace_out_matrix,
)


@dataclass(frozen=True)
class DetectorModel:
    """Photodetector response acting on the occupation distribution of one mode.

    ideal       mean count <n>
    saturating  <n> - epsilon <n^2>      (operator form of dead-time saturation)
    noisy       counts convolved with an independent noise distribution d(n);
                equals the ideal intensity shifted by the constant sum_n n d(n)
    """

    kind: str
    epsilon: float = 0.0
    noise: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("ideal", "saturating", "noisy"):
            raise ValueError(f"unknown detector kind {self.kind!r}")
        if self.kind == "saturating":
            if self.epsilon < 0:
                raise ValueError("saturation strength must be non-negative")
        if self.kind == "noisy":
            d = np.array(self.noise, dtype=float)
            if d.ndim != 1 or d.size == 0:
                raise ValueError("noise must be a 1-D count distribution")
            if np.any(d < 0):
                raise ValueError("noise probabilities must be non-negative")
            if abs(d.sum() - 1.0) > ALGEBRA_TOL:
                raise ValueError("noise distribution must sum to 1 within 1e-12")
            d.setflags(write=False)
            object.__setattr__(self, "noise", d)

    @classmethod
    def ideal(cls) -> "DetectorModel":
        return cls("ideal")

    @classmethod
    def saturating(cls, epsilon: float) -> "DetectorModel":
        return cls("saturating", epsilon=epsilon)

    @classmethod
    def noisy(cls, distribution: Iterable[float]) -> "DetectorModel":
        return cls("noisy", noise=np.asarray(list(distribution), dtype=float))

    @property
    def noise_mean(self) -> float:
        """Constant intensity offset contributed by the noise distribution."""
        if self.kind != "noisy":
            return 0.0
        return float(np.arange(self.noise.size) @ self.noise)

    def expected_counts(self, state: QuantumState, mode: int) -> float:
        p = photon_number_distribution(state, mode)
        n = np.arange(p.size)
        if self.kind == "ideal":
            return float(n @ p)
        if self.kind == "saturating":
            return float(n @ p - self.epsilon * (n**2 @ p))
        # noisy: observed counts are the convolution of signal and noise counts
        r = np.convolve(p, self.noise)
        return float(np.arange(r.size) @ r)

    def describe(self) -> dict:
        if self.kind == "saturating":
            return {"kind": self.kind, "epsilon": self.epsilon}
        if self.kind == "noisy":
            return {"kind": self.kind, "noise": self.noise.tolist()}
        return {"kind": self.kind}


@dataclass(frozen=True)
class IntensityTable:
    """Intensity for every one of the 2^M blocking patterns."""

    mode_count: int
    values: Mapping[tuple[int, ...], float]

    def __post_init__(self):
        values = {tuple(k): float(v) for k, v in self.values.items()}
        expected = [p.bits for p in all_block_patterns(self.mode_count)]
        if sorted(values.keys()) != sorted(expected):
            raise ValueError("table must contain every blocking pattern exactly once")
        object.__setattr__(self, "values", values)

    def __getitem__(self, bits: tuple[int, ...]) -> float:
        return self.values[tuple(bits)]

    def rows(self) -> Iterator[tuple[BlockPattern, float]]:
        """Entries in canonical binary-counting order (first mode most significant)."""
        for pattern in all_block_patterns(self.mode_count):
            yield pattern, self.values[pattern.bits]


def intensity(
    input_state: QuantumState,
    pattern: BlockPattern,
    circuit: Circuit,
    detector: DetectorModel,
    out_mode: int,
    particle_scale: float = 1.0,
) -> float:
    """Detector response on `out_mode` after blocking and the circuit.

    Intensities are per-run mean counts; `particle_scale` converts them to an
    N-particle ensemble reading (N independent repetitions).
    """
    if len(pattern) != input_state.basis.mode_count:
        raise ValueError("pattern length must match the mode count")
    blocked = apply_blocking(input_state, pattern)
    evolved = circuit.apply(blocked)
    return particle_scale * detector.expected_counts(evolved, out_mode)


def intensity_table(
    input_state: QuantumState,
    circuit: Circuit,
    detector: DetectorModel,
    out_mode: int,
    particle_scale: float = 1.0,
) -> IntensityTable:
    """Evaluate `intensity` for all 2^M patterns.

    The patterns are independent jobs; results are assembled in canonical
    pattern order so any parallel evaluation reduces deterministically.
    """
    M = input_state.basis.mode_count
    values = {
        pattern.bits: intensity(
            input_state, pattern, circuit, detector, out_mode, particle_scale
        )
        for pattern in all_block_patterns(M)
    }
    return IntensityTable(M, values)


def sorkin_term(table: IntensityTable) -> float:
    """Alternating-sign sum over all blocking patterns (M-path interference)."""
    return math.fsum(pattern.sign * value for pattern, value in table.rows())


def sorkin_subsets(table: IntensityTable, order: int, unused: str = "open") -> list[float]:
    """The order-k functional for every k-subset of paths.

    Paths outside the subset are held open by default; pass unused="blocked"
    for the alternative convention (under which the k=1 values reduce to the
    lone-path intensities).
    """
    M = table.mode_count
    if not 1 <= order <= M:
        raise ValueError("order must be between 1 and the mode count")
    if unused not in ("open", "blocked"):
        raise ValueError("unused must be 'open' or 'blocked'")
    fill = 0 if unused == "open" else 1
    results = []
    for subset in combinations(range(M), order):
        terms = []
        for local in all_block_patterns(order):
            bits = [fill] * M
            for mode, bit in zip(subset, local.bits):
                bits[mode] = bit
            terms.append(local.sign * table[tuple(bits)])
        results.append(math.fsum(terms))
    return results


@dataclass(frozen=True)
class InterferenceOperator:
    """Alternating-sign sum of the blocked input states.

    Hermitian and traceless; its partial trace over any non-empty subset of
    modes vanishes, which is what forces linear circuits to show no
    interference beyond second order.
    """

    basis: OccupationBasis
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.shape != (self.basis.dim, self.basis.dim):
            raise ValueError("operator shape must match the basis dimension")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def trace(self) -> complex:
        return complex(self.matrix.trace())


def interference_operator(input_state: QuantumState, mode_count: int) -> InterferenceOperator:
    basis = input_state.basis
    if basis.mode_count != mode_count:
        raise ValueError("mode_count must match the input state's basis")
    acc = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    for pattern in all_block_patterns(mode_count):
        acc += pattern.sign * apply_blocking(input_state, pattern).density()
    acc = (acc + acc.conj().T) / 2
    return InterferenceOperator(basis, acc)


def partial_trace_check(op: InterferenceOperator, mode_subset: Iterable[int]) -> float:
    """Spectral norm of the operator's partial trace over `mode_subset`
    (absolute full trace when every mode is traced out); expected ~ 0."""
    modes = sorted(set(int(m) for m in mode_subset))
    if not modes:
        raise ValueError("mode_subset must be non-empty")
    M = op.basis.mode_count
    if any(m < 0 or m >= M for m in modes):
        raise IndexError("mode index out of range")
    if len(modes) == M:
        return abs(op.trace())
    reduced = _trace_out_matrix(op.matrix, op.basis, modes)
    return float(np.linalg.norm(reduced, 2))


def _falling_factorial(values: np.ndarray, order: int) -> np.ndarray:
    out = np.ones_like(values, dtype=float)
    for i in range(order):
        out = out * np.maximum(values - i, 0)
    return out


def multipartite_sorkin(
    input_state: QuantumState,
    circuit: Circuit,
    mode_count: int,
    order: int,
    out_mode: int = 0,
) -> float:
    """Alternating-sign sum of the normally-ordered n-fold correlator
    <(a^dag)^n a^n> on the detected mode; order=1 reduces to `sorkin_term`
    with an ideal detector."""
    if order < 1:
        raise ValueError("correlation order must be at least 1")
    basis = input_state.basis
    if basis.mode_count != mode_count:
        raise ValueError("mode_count must match the input state's basis")
    weights = _falling_factorial(basis.mode_numbers(out_mode).astype(float), order)
    terms = []
    for pattern in all_block_patterns(mode_count):
        blocked = apply_blocking(input_state, pattern)
        evolved = circuit.apply(blocked)
        terms.append(pattern.sign * float(evolved.probabilities() @ weights))
    return math.fsum(terms)


def scalar_saturation(table: IntensityTable, epsilon: float) -> IntensityTable:
    """Post-processing variant of detector saturation, I -> I - epsilon I^2,
    applied to already-measured scalar intensities (contrast with the
    operator form built into DetectorModel.saturating)."""
    if epsilon < 0:
        raise ValueError("saturation strength must be non-negative")
    values = {bits: v - epsilon * v**2 for bits, v in table.values.items()}
    return IntensityTable(table.mode_count, values)
