"""Exact collective dephasing of three qubits.

All qubits couple to one fluctuating field, so the density matrix
evolves entry-wise: rho_ij(t) = exp(-Gamma*t*(s_i - s_j)^2/8) *
rho_ij(0), where s_i is the total-sigma_z eigenvalue of basis state i.
Coherences inside a degenerate s eigenspace are frozen (the
decoherence-free structure); everything depends on the product
gt = Gamma*t only.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import DIM
from .states import DensityMatrix

# s_i = eigenvalue of sigma_z^A + sigma_z^B + sigma_z^C on basis state i
Z_WEIGHTS = np.array([3 - 2 * bin(i).count("1") for i in range(DIM)])

_RATES = (Z_WEIGHTS[:, None] - Z_WEIGHTS[None, :]) ** 2 / 8.0
_FROZEN = Z_WEIGHTS[:, None] == Z_WEIGHTS[None, :]


@dataclass(frozen=True)
class ChannelParams:
    """Phase damping rate Gamma (1/time) and evolution time t."""

    gamma: float = 1.0
    t: float = 0.0

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma!r}")
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t!r}")

    @property
    def gt(self):
        return self.gamma * self.t

    @classmethod
    def from_gt(cls, gt):
        return cls(gamma=1.0, t=float(gt))


def decay_factor(i, j, gt):
    """Entry-wise decay d_ij(gt) = exp(-gt*(s_i - s_j)^2/8)."""
    if gt < 0:
        raise ValueError(f"gt must be >= 0, got {gt!r}")
    return float(np.exp(-gt * _RATES[i, j]))


def decay_matrix(gt):
    """The full 8x8 kernel of decay factors at gt."""
    if gt < 0:
        raise ValueError(f"gt must be >= 0, got {gt!r}")
    return np.exp(-gt * _RATES)


def evolve(rho0, params):
    """Evolve a density matrix: Schur product with the decay kernel.

    Diagonals (and all frozen-block coherences) are unchanged, so trace
    and Hermiticity are preserved exactly.
    """
    gt = params.gt if isinstance(params, ChannelParams) else float(params)
    return DensityMatrix(rho0.mat * decay_matrix(gt), label=rho0.label)


def asymptotic_map(rho0):
    """The gt -> infinity limit: zero every coherence across s eigenspaces.

    Implemented by exact masking rather than a large-gt evolution, so no
    underflow ambiguity enters.
    """
    return DensityMatrix(np.where(_FROZEN, rho0.mat, 0.0), label=rho0.label)


def choi_matrix(params):
    """Choi operator of the channel: sum_ij d_ij |i><j| (x) |i><j|.

    Positive semidefiniteness of this 64x64 matrix certifies complete
    positivity; its trace is 8. The kernel d is a Gaussian Gram matrix,
    so PSD holds for every gt >= 0.
    """
    gt = params.gt if isinstance(params, ChannelParams) else float(params)
    d = decay_matrix(gt)
    c = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    idx = np.arange(DIM) * DIM + np.arange(DIM)
    c[np.ix_(idx, idx)] = d
    return c
