"""Genuine multipartite negativity via PPT mixtures.

E(rho) = max(0, -min Tr(W rho)) over witnesses W that decompose as
W = P_M + Q_M^{T_M} with 0 <= P_M, Q_M <= I for every bipartition M of
the three qubits. The optimum is certified by the cone program's
duality gap and by explicit certificate matrices; for qubit systems
E(rho) <= 1/2. A state with E > 0 is genuinely multipartite entangled;
E = 0 means the state is (at least) a PPT mixture.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _sdpcore
from .matcore import eig_hermitian, partial_transpose
from .states import DensityMatrix

QUBIT_BOUND = 0.5


class Bipartition(Enum):
    """The three bipartitions of qubits (A, B, C); order is fixed."""

    A_BC = ("A|BC", (0,))
    B_AC = ("B|AC", (1,))
    C_AB = ("C|AB", (2,))

    @property
    def label(self):
        return self.value[0]

    @property
    def transposed(self):
        """Qubits transposed when taking rho^{T_M}."""
        return self.value[1]


BIPARTITIONS = tuple(Bipartition)


class SolverStatus(Enum):
    OPTIMAL = "optimal"
    MAX_ITERATIONS = "max-iterations"
    NUMERICAL_TROUBLE = "numerical-trouble"


@dataclass(frozen=True)
class SdpSettings:
    max_iterations: int = 200
    gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    value_floor: float = 1e-9

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        for name in ("gap_tol", "feas_tol", "value_floor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True)
class GmnResult:
    """Certified outcome of one witness optimization."""

    value: float
    objective: float
    witness: np.ndarray
    certificates: dict
    duality_gap: float
    residuals: dict
    status: SolverStatus
    settings: SdpSettings


class SolverFailure(RuntimeError):
    """Cone program did not reach a certified optimum.

    Carries the terminal status and the best iterate (a GmnResult, or
    None when no iterate was produced at all).
    """

    def __init__(self, message, status, result=None):
        super().__init__(message)
        self.status = status
        self.result = result


class InfeasibleNumerics(RuntimeError):
    """Reported optimum violates the feasibility tolerance."""


def _certificates_from_params(x):
    witness = _sdpcore.herm_from_params(x[:_sdpcore.NPARAM])
    certs = {}
    for m, part in enumerate(BIPARTITIONS):
        q0 = (1 + m) * _sdpcore.NPARAM
        qmat = _sdpcore.herm_from_params(x[q0:q0 + _sdpcore.NPARAM])
        pmat = witness - partial_transpose(qmat, part.transposed)
        certs[part] = (pmat, qmat)
    return witness, certs


def _residuals(witness, certs, rho, objective):
    decomp = 0.0
    eig_lo, eig_hi = np.inf, -np.inf
    for part, (pmat, qmat) in certs.items():
        recon = pmat + partial_transpose(qmat, part.transposed)
        decomp = max(decomp, float(np.max(np.abs(witness - recon))))
        for mat in (pmat, qmat):
            w = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
            eig_lo = min(eig_lo, float(w[0]))
            eig_hi = max(eig_hi, float(w[-1]))
    return {
        "decomposition": decomp,
        "cone_floor": max(0.0, -eig_lo),
        "cone_ceiling": max(0.0, eig_hi - 1.0),
        "witness_trace": abs(float(np.trace(witness @ rho).real) - objective),
    }


def genuine_negativity(rho, settings=None):
    """Solve the witness program for a validated density matrix.

    Returns a GmnResult with status OPTIMAL, or raises SolverFailure
    (carrying the best iterate) when certification fails.
    """
    settings = settings or SdpSettings()
    sol = _sdpcore.solve_ppt_mixture(
        rho.mat,
        gap_tol=settings.gap_tol,
        feas_tol=settings.feas_tol,
        max_iterations=settings.max_iterations,
    )
    if sol.get("x") is None:
        raise SolverFailure(
            f"cone program produced no iterate: {sol.get('error', sol['status'])}",
            SolverStatus.NUMERICAL_TROUBLE,
        )
    x = np.array(sol["x"]).ravel()
    witness, certs = _certificates_from_params(x)
    objective = float(_sdpcore.objective_coeffs(rho.mat) @ x[:_sdpcore.NPARAM])
    value = max(0.0, -objective)
    if value < settings.value_floor:
        value = 0.0
    if sol["status"] == "optimal":
        status = SolverStatus.OPTIMAL
    elif sol["iterations"] >= settings.max_iterations:
        status = SolverStatus.MAX_ITERATIONS
    else:
        status = SolverStatus.NUMERICAL_TROUBLE
    result = GmnResult(
        value=value,
        objective=objective,
        witness=witness,
        certificates=certs,
        duality_gap=float(sol["gap"]),
        residuals=_residuals(witness, certs, rho.mat, objective),
        status=status,
        settings=settings,
    )
    if status is not SolverStatus.OPTIMAL:
        raise SolverFailure(
            f"solver stopped with status {status.value} "
            f"(gap {result.duality_gap:.2e})", status, result)
    worst = max(result.residuals["decomposition"], result.residuals["cone_floor"],
                result.residuals["cone_ceiling"])
    if worst > settings.feas_tol:
        raise InfeasibleNumerics(
            f"certificate residual {worst:.2e} exceeds feas_tol {settings.feas_tol:.1e}")
    return result


def bipartite_negativity(rho, part):
    """Absolute sum of negative eigenvalues of rho^{T_M}."""
    w, _ = eig_hermitian(partial_transpose(rho.mat, part.transposed))
    return float(-w[w < 0].sum())


@dataclass(frozen=True)
class CertificateReport:
    """Recomputed invariant checks; each entry is (measured, bound, ok)."""

    checks: dict
    passed: bool


def verify_certificate(result, rho):
    """Recheck every GmnResult invariant from the raw matrices."""
    s = result.settings
    res = _residuals(result.witness, result.certificates, rho.mat, result.objective)
    floored = max(0.0, -result.objective)
    if floored < s.value_floor:
        floored = 0.0
    checks = {
        "value_consistency": (abs(result.value - floored), 1e-12),
        "witness_trace": (res["witness_trace"], 10 * s.gap_tol),
        "decomposition": (res["decomposition"], s.feas_tol),
        "cone_floor": (res["cone_floor"], s.feas_tol),
        "cone_ceiling": (res["cone_ceiling"], s.feas_tol),
        "qubit_bound": (max(0.0, result.value - QUBIT_BOUND), 1e-6),
        "duality_gap": (result.duality_gap, s.gap_tol),
        "objective_sign": (max(0.0, result.objective), 1e-9),
    }
    graded = {name: (meas, bound, meas <= bound) for name, (meas, bound) in checks.items()}
    return CertificateReport(checks=graded, passed=all(ok for _, _, ok in graded.values()))
