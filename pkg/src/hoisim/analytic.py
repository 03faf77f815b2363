"""Closed-form oracles for the nonlinear interference scenarios.

Pure functions used by the tests and the CLI to cross-check the Fock-space
simulation: the coherent-state overlap under a number-phase rotation, the
cross-Kerr cascade fringe (magnitude, offset, value), the saturating-detector
tritter value, and the two-branch Fock-input example.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class KerrCascadeParams:
    """Equal-mean-photon cascade inputs: <n> per mode, nonlinearity theta,
    number of paths, and the phases of the two detected-pair inputs."""

    mean_n: float
    theta: float
    order: int
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self):
        if self.mean_n < 0:
            raise ValueError("mean photon number must be non-negative")
        if self.order < 3:
            raise ValueError("the cascade is defined for at least three paths")


@dataclass(frozen=True)
class FringeResult:
    """Cosine fringe: value = magnitude * cos(phi2 - phi1 - offset)."""

    magnitude: float
    offset: float
    value: float

    def __post_init__(self):
        if self.magnitude < -1e-15:
            raise ValueError("magnitude must be non-negative")
        if abs(self.value) > self.magnitude + 1e-12 * max(self.magnitude, 1.0):
            raise ValueError("fringe value cannot exceed its magnitude")


def coherent_overlap(alpha: complex, theta: float) -> complex:
    """Overlap <alpha | alpha e^{-i theta}> = exp(-|alpha|^2 (1 - e^{-i theta}))."""
    return cmath.exp(-abs(alpha) ** 2 * (1 - cmath.exp(-1j * theta)))


def kerr_cascade_interference(p: KerrCascadeParams) -> FringeResult:
    """Interference of order M for the cross-Kerr cascade with equal-mean
    coherent inputs: magnitude <n> |ov - 1|^{M-2} with ov the rotated-state
    overlap, and a fringe in phi2 - phi1.

    The offset is the phase of the complex prefactor
    A = (1/2) <n> (ov - 1)^{M-2}; a one-off constant from the frozen
    beam-splitter convention separates it from the simulated fringe offset,
    while magnitude and fringe period are convention-free.
    """
    ov = coherent_overlap(math.sqrt(p.mean_n), p.theta)
    a = 0.5 * p.mean_n * (ov - 1) ** (p.order - 2)
    magnitude = 2 * abs(a)
    offset = cmath.phase(a)
    value = magnitude * math.cos(p.phi2 - p.phi1 - offset)
    return FringeResult(magnitude=magnitude, offset=offset, value=value)


def saturating_tritter_i3(epsilon: float, mean_n: float) -> float:
    """Third-order term for three equal coherent beams on a symmetric tritter
    monitored by a saturating detector: -4 epsilon <n>^2."""
    if epsilon < 0:
        raise ValueError("saturation strength must be non-negative")
    return -4.0 * epsilon * mean_n**2


def fock_example_i3(theta: float) -> float:
    """Published third-order value -sin^2(theta/2) for the two-branch Fock
    input (single photon shared across the detected pair, plus (|0>+|1>)/sqrt(2)
    on the cascade path).

    Note: direct Fock-space simulation of the same arrangement yields half
    this value under every 50-50 splitter convention; see
    tests/test_acceptance.py for the side-by-side comparison.
    """
    return -math.sin(theta / 2) ** 2
