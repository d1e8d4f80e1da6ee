"""Three-qubit state constructors, seeded samplers, and validation.

Pure states are length-8 amplitude vectors over the computational basis
(qubit A = most significant bit); density matrices are validated 8x8
Hermitian, unit-trace, positive semidefinite operators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matcore import DIM, HERM_TOL, BadDim, hermitize
from .rng import Xoshiro256pp

NORM_TOL = 1e-12
TRACE_TOL = 1e-10
# numerically evolved states carry rounding below the true spectrum
PSD_TOL = 1e-9


class NotNormalized(ValueError):
    """Pure-state amplitudes fail the unit-norm tolerance."""


class BadTrace(ValueError):
    """Matrix trace differs from 1 beyond tolerance."""


class NotPSD(ValueError):
    """Matrix has an eigenvalue below the PSD admission tolerance."""


@dataclass(frozen=True)
class PureState:
    """Normalized three-qubit pure state."""

    amps: np.ndarray
    label: str = "pure"

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (DIM,):
            raise BadDim(f"expected {DIM} amplitudes, got shape {amps.shape}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"norm {norm!r} differs from 1 beyond {NORM_TOL:.1e}")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)


@dataclass(frozen=True)
class DensityMatrix:
    """Validated 8x8 density operator."""

    mat: np.ndarray
    label: str = "rho"

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        if mat.shape != (DIM, DIM):
            raise BadDim(f"expected an {DIM}x{DIM} matrix, got shape {mat.shape}")
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)


def ghz1():
    """(|000> + |111>)/sqrt(2)."""
    a = np.zeros(DIM, dtype=complex)
    a[0] = a[7] = 1.0 / math.sqrt(2.0)
    return PureState(a, label="ghz1")


def ghz2():
    """(|001> + |110>)/sqrt(2)."""
    a = np.zeros(DIM, dtype=complex)
    a[1] = a[6] = 1.0 / math.sqrt(2.0)
    return PureState(a, label="ghz2")


def w_state():
    """(|001> + |010> + |100>)/sqrt(3)."""
    a = np.zeros(DIM, dtype=complex)
    a[1] = a[2] = a[4] = 1.0 / math.sqrt(3.0)
    return PureState(a, label="w")


def plus_product():
    """|+>|+>|+>, the fully product uniform-superposition state."""
    a = np.full(DIM, 1.0 / math.sqrt(8.0), dtype=complex)
    return PureState(a, label="plus-product")


def weighted_graph_state(phases, label="graph"):
    """Triangle weighted graph state.

    Applies controlled-phase gates diag(1,1,1,e^{i phi}) with the given
    phases on edges AB, AC, BC to |+++>. Amplitudes keep modulus
    1/sqrt(8); only phases are imprinted.
    """
    ph_ab, ph_ac, ph_bc = (float(p) for p in phases)
    a = np.empty(DIM, dtype=complex)
    for i in range(DIM):
        qa, qb, qc = (i >> 2) & 1, (i >> 1) & 1, i & 1
        phase = ph_ab * qa * qb + ph_ac * qa * qc + ph_bc * qb * qc
        a[i] = complex(math.cos(phase), math.sin(phase)) / math.sqrt(8.0)
    return PureState(a, label=label)


def random_pure(seed, count):
    """Haar-random pure states: normalized i.i.d. complex Gaussian amplitudes.

    State k is drawn from substream k of the seed, so samples are
    deterministic per (seed, index) and independent of count.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    out = []
    for k in range(count):
        g = Xoshiro256pp(seed, stream=k)
        vals = g.normals(2 * DIM)
        a = np.array([complex(vals[2 * i], vals[2 * i + 1]) for i in range(DIM)])
        a /= np.linalg.norm(a)
        out.append(PureState(a, label=f"random:{seed}:{k}"))
    return out


def random_weighted_graph(seed, count):
    """Triangle graph states with i.i.d. uniform [0, 2pi) edge phases."""
    if count < 1:
        raise ValueError("count must be >= 1")
    out = []
    for k in range(count):
        g = Xoshiro256pp(seed, stream=k)
        phases = [g.uniform(0.0, 2.0 * math.pi) for _ in range(3)]
        out.append(weighted_graph_state(phases, label=f"graph:{seed}:{k}"))
    return out


def pure_to_density(psi):
    """Rank-1 projector |psi><psi| as a validated DensityMatrix."""
    norm = float(np.linalg.norm(psi.amps))
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(f"norm {norm!r} differs from 1 beyond {NORM_TOL:.1e}")
    return DensityMatrix(np.outer(psi.amps, psi.amps.conj()), label=psi.label)


def validate_density(m, label="rho"):
    """Admit an 8x8 matrix as a density operator or reject it.

    Symmetrizes within the Hermiticity tolerance; checks unit trace and
    positive semidefiniteness. Raises NotHermitian, BadTrace, or NotPSD
    naming the violated invariant and its magnitude.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (DIM, DIM):
        raise BadDim(f"expected an {DIM}x{DIM} matrix, got shape {m.shape}")
    m = hermitize(m, HERM_TOL)
    tr = float(m.trace().real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise BadTrace(f"trace {tr!r} differs from 1 beyond {TRACE_TOL:.1e}")
    wmin = float(np.linalg.eigvalsh(m)[0])
    if wmin < -PSD_TOL:
        raise NotPSD(f"minimum eigenvalue {wmin:.3e} below -{PSD_TOL:.1e}")
    return DensityMatrix(m, label=label)
