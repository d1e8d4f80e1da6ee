"""Cone-program backend for the PPT-mixture witness optimization.

Problem: minimize Tr(W rho) over Hermitian W, Q_A, Q_B, Q_C subject to,
for each bipartition m, 0 <= W - Q_m^{T_m} <= I and 0 <= Q_m <= I. The
complex 8x8 constraints become real 16x16 PSD constraints through the
[[X, -Y], [Y, X]] embedding, giving a conelp instance with variables
x = [W | Q_A | Q_B | Q_C] (4 x 64 Hermitian parameters) and twelve
16-dimensional semidefinite cones.

A custom KKT solver exploits the structure. In the scaled coordinates
of the current iterate the reduced system is Ghat' Ghat ux = rhs with
Ghat = W_scale^{-T} G applied cone-wise. While the scaling is well
conditioned we assemble the 256x256 Gram matrix directly (the partial
transpose acts as a signed permutation of the Hermitian parameter
basis, so each cone contributes one congruence-transformed block) and
factor it once per iteration. Near convergence the Gram approach loses
too many digits, so we switch to a QR of the packed scaled constraint
matrix and return the dual update as an orthogonal combination
(Q u - what) computed in the packed space; both KKT rows then hold to
roundoff independent of the scaling's condition number.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg as sla
from cvxopt import matrix, solvers

from .matcore import DIM

PAIRS = [(i, j) for i in range(DIM) for j in range(i + 1, DIM)]
NPAIR = len(PAIRS)
NPARAM = 64            # 8 diagonal + 28 real + 28 imaginary parts
NVAR = 4 * NPARAM
RDIM = 2 * DIM         # realified block size
NFULL = RDIM * RDIM
NPACK = RDIM * (RDIM + 1) // 2

# above this condition number of the cone scalings, use the QR path
KAPPA_SWITCH = 1e4
# below this conelp gap tolerance, hand the whole solve to the
# library's own KKT routine (the hybrid's accuracy floor is ~1e-10)
CUSTOM_TOL_FLOOR = 1e-10


def herm_from_params(p):
    """Hermitian 8x8 matrix from its 64 real parameters."""
    h = np.zeros((DIM, DIM), dtype=complex)
    h[np.arange(DIM), np.arange(DIM)] = p[:DIM]
    for k, (i, j) in enumerate(PAIRS):
        h[i, j] = p[DIM + k] + 1j * p[DIM + NPAIR + k]
        h[j, i] = p[DIM + k] - 1j * p[DIM + NPAIR + k]
    return h


def params_from_herm(h):
    p = np.zeros(NPARAM)
    p[:DIM] = np.diag(h).real
    for k, (i, j) in enumerate(PAIRS):
        p[DIM + k] = h[i, j].real
        p[DIM + NPAIR + k] = h[i, j].imag
    return p


def objective_coeffs(sigma):
    """Vector c with c . params(W) = Tr(W sigma) for Hermitian sigma."""
    v = np.zeros(NPARAM)
    v[:DIM] = np.diag(sigma).real
    for k, (i, j) in enumerate(PAIRS):
        v[DIM + k] = 2 * sigma[i, j].real
        v[DIM + NPAIR + k] = 2 * sigma[i, j].imag
    return v


def _realify(h):
    return np.block([[h.real, -h.imag], [h.imag, h.real]])


def _partial_transpose(rho, party):
    t = rho.reshape((2,) * 6)
    axes = list(range(6))
    axes[party], axes[party + 3] = axes[party + 3], axes[party]
    return t.transpose(axes).reshape(DIM, DIM)


def _build_tables():
    rb = np.zeros((NPARAM, RDIM, RDIM))
    eye = np.eye(NPARAM)
    for k in range(NPARAM):
        rb[k] = _realify(herm_from_params(eye[k]))
    # the partial transpose permutes the parameter basis up to sign:
    # PT_m(E_k) = ptsign[m][k] * E_{ptperm[m][k]}
    ptperm = np.zeros((3, NPARAM), dtype=int)
    ptsign = np.zeros((3, NPARAM))
    for m in range(3):
        for k in range(NPARAM):
            q = params_from_herm(_partial_transpose(herm_from_params(eye[k]), m))
            nz = np.nonzero(np.abs(q) > 0.5)[0]
            ptperm[m, k] = nz[0]
            ptsign[m, k] = q[nz[0]]
    return rb, rb.reshape(NPARAM, NFULL), ptperm, ptsign


RB, RBF, PTPERM, PTSIGN = _build_tables()
VEC_EYE = np.eye(RDIM).reshape(-1)

# cone order: for m in A,B,C: P_m >= 0, P_m <= I, Q_m >= 0, Q_m <= I,
# with P_m := W - Q_m^{T_m} eliminated
CONES = [(m, k) for m in range(3) for k in range(4)]
# signs of the W / Q parameter blocks inside G for each cone kind
SGN_W = {0: -1.0, 1: 1.0, 2: 0.0, 3: 0.0}
SGN_Q = {0: 1.0, 1: -1.0, 2: -1.0, 3: 1.0}


def _build_cone_lhs():
    g = np.zeros((12 * NFULL, NVAR))
    h = np.zeros(12 * NFULL)
    row = 0
    for m in range(3):
        qc = (1 + m) * NPARAM
        rbpt = RBF[PTPERM[m]] * PTSIGN[m][:, None]
        for kind in range(4):
            blk = slice(row, row + NFULL)
            if SGN_W[kind]:
                g[blk, :NPARAM] = SGN_W[kind] * RBF.T
            g[blk, qc:qc + NPARAM] = SGN_Q[kind] * (rbpt.T if kind < 2 else RBF.T)
            if kind in (1, 3):
                h[blk] = VEC_EYE
            row += NFULL
    return g, h


G_NP, H_NP = _build_cone_lhs()
G_CVX = matrix(G_NP)
H_CVX = matrix(H_NP)
DIMS = {"l": 0, "q": [], "s": [RDIM] * 12}

# packed symmetric storage: lower triangle with off-diagonals * sqrt(2),
# an isometry for the trace inner product
_PLO = np.tril_indices(RDIM)
_PWT = np.where(_PLO[0] == _PLO[1], 1.0, np.sqrt(2.0))


def _pvec(mats):
    return mats[..., _PLO[0], _PLO[1]] * _PWT


def _punvec(p):
    vals = p / _PWT
    out = np.zeros(p.shape[:-1] + (RDIM, RDIM))
    out[..., _PLO[0], _PLO[1]] = vals
    out[..., _PLO[1], _PLO[0]] = vals
    return out


def _kkt_hybrid(W):
    """KKT factorization callback for conelp (G'-reduced system)."""
    rtis = [np.array(r) for r in W["rti"]]
    sinv = [rti @ rti.T for rti in rtis]
    evs = [np.linalg.eigvalsh(s) for s in sinv]
    kappa = max(e[-1] for e in evs) / min(e[0] for e in evs)
    fast = kappa < KAPPA_SWITCH

    if fast:
        # Gram matrix G' Lam G assembled block-wise; Lam(Z) = sinv Z sinv
        grams = []
        for c in range(12):
            congr = np.matmul(np.matmul(sinv[c], RB), sinv[c])
            grams.append(RBF @ congr.reshape(NPARAM, NFULL).T)
        h_ww = np.zeros((NPARAM, NPARAM))
        h_wq = [np.zeros((NPARAM, NPARAM)) for _ in range(3)]
        h_qq = [np.zeros((NPARAM, NPARAM)) for _ in range(3)]
        for c, (m, kind) in enumerate(CONES):
            gm = grams[c]
            if kind in (0, 1):
                h_ww += gm
                gp = gm[:, PTPERM[m]] * PTSIGN[m][None, :]
                h_wq[m] -= gp
                h_qq[m] += gp[PTPERM[m]] * PTSIGN[m][:, None]
            else:
                h_qq[m] += gm
        hfull = np.zeros((NVAR, NVAR))
        hfull[:NPARAM, :NPARAM] = h_ww
        for m in range(3):
            q0 = (1 + m) * NPARAM
            hfull[:NPARAM, q0:q0 + NPARAM] = h_wq[m]
            hfull[q0:q0 + NPARAM, :NPARAM] = h_wq[m].T
            hfull[q0:q0 + NPARAM, q0:q0 + NPARAM] = h_qq[m]
        try:
            lu = sla.lu_factor(hfull, check_finite=True)
        except (ValueError, sla.LinAlgError) as exc:
            raise ArithmeticError(str(exc)) from exc
    else:
        # scaled constraint matrix in packed form, one QR per iteration
        ts = [rti.T for rti in rtis]
        ghat = np.zeros((12 * NPACK, NVAR))
        for c, (m, kind) in enumerate(CONES):
            tb = _pvec(np.matmul(np.matmul(ts[c], RB), ts[c].T))
            blk = slice(c * NPACK, (c + 1) * NPACK)
            if SGN_W[kind]:
                ghat[blk, :NPARAM] = SGN_W[kind] * tb.T
            qc = (1 + m) * NPARAM
            if kind in (0, 1):
                ghat[blk, qc:qc + NPARAM] = SGN_Q[kind] * (tb[PTPERM[m]] * PTSIGN[m][:, None]).T
            else:
                ghat[blk, qc:qc + NPARAM] = SGN_Q[kind] * tb.T
        if not np.isfinite(ghat).all():
            raise ArithmeticError("non-finite scaled constraint matrix")
        qr_raw, qr_tau = sla.qr(ghat, mode="raw", check_finite=False)[0]
        rtri = np.triu(qr_raw[:NVAR])
        if np.min(np.abs(np.diag(rtri))) == 0.0:
            raise ArithmeticError("singular scaled constraint matrix")
        ormqr, = sla.get_lapack_funcs(("ormqr",), (qr_raw,))
        wquery = ormqr("L", "T", qr_raw, qr_tau,
                       np.zeros((12 * NPACK, 1), order="F"), -1)[1]
        lwork = int(wquery[0])

    def solve_kkt(x, y, z):
        bx = np.array(x).ravel().copy()
        braw = np.array(z).ravel().reshape(12, RDIM, RDIM)
        # conelp fills only the lower triangle (column-major) of each
        # s block; in this row-major view that is the upper triangle
        up = np.triu(braw)
        bz = up + np.triu(braw, 1).transpose(0, 2, 1)

        if fast:
            rhs = bx.copy()
            for c, (m, kind) in enumerate(CONES):
                lam = np.matmul(np.matmul(sinv[c], bz[c]), sinv[c]).reshape(NFULL)
                coeff = RBF @ lam
                if SGN_W[kind]:
                    rhs[:NPARAM] += SGN_W[kind] * coeff
                q0 = (1 + m) * NPARAM
                if kind in (0, 1):
                    rhs[q0:q0 + NPARAM] += SGN_Q[kind] * (coeff[PTPERM[m]] * PTSIGN[m])
                else:
                    rhs[q0:q0 + NPARAM] += SGN_Q[kind] * coeff
            ux = sla.lu_solve(lu, rhs, check_finite=False)
            # dual update back-substituted in the original coordinates
            zout = np.empty(12 * NFULL)
            for c, (m, kind) in enumerate(CONES):
                w = np.zeros(NPARAM)
                if SGN_W[kind]:
                    w += SGN_W[kind] * ux[:NPARAM]
                uq = ux[(1 + m) * NPARAM:(2 + m) * NPARAM]
                if kind in (0, 1):
                    np.add.at(w, PTPERM[m], SGN_Q[kind] * PTSIGN[m] * uq)
                else:
                    w += SGN_Q[kind] * uq
                resid = np.tensordot(w, RB, axes=1) - bz[c]
                zout[c * NFULL:(c + 1) * NFULL] = (rtis[c].T @ resid @ rtis[c]).reshape(-1)
        else:
            # what = packed scaled bz; u = Q' what + R^{-T} bx;
            # ux = R^{-1} u; scaled dual = Q u - what (orthogonal ops
            # only, so accuracy does not degrade with the scaling)
            what = np.empty((12 * NPACK, 1), order="F")
            for c in range(12):
                what[c * NPACK:(c + 1) * NPACK, 0] = _pvec(ts[c] @ bz[c] @ ts[c].T)
            u = ormqr("L", "T", qr_raw, qr_tau, what, lwork)[0][:NVAR, 0]
            u += sla.solve_triangular(rtri, bx, trans="T", check_finite=False)
            ux = sla.solve_triangular(rtri, u, check_finite=False)
            padded = np.zeros((12 * NPACK, 1), order="F")
            padded[:NVAR, 0] = u
            v = ormqr("L", "N", qr_raw, qr_tau, padded, lwork)[0][:, 0] - what[:, 0]
            zout = _punvec(v.reshape(12, NPACK)).reshape(-1)

        if not (np.isfinite(ux).all() and np.isfinite(zout).all()):
            raise ArithmeticError("non-finite KKT solution")
        x[:] = matrix(ux)
        z[:] = matrix(zout)

    return solve_kkt


def solve_ppt_mixture(rho, gap_tol=1e-8, feas_tol=1e-8, max_iterations=200):
    """Run the cone program for a Hermitian rho; returns a conelp solution.

    Tries the structured KKT solver first and falls back to the
    library default on any numerical failure; the default also takes
    over outright when tolerances are tighter than the hybrid's floor.
    """
    q = np.zeros(NVAR)
    q[:NPARAM] = objective_coeffs(rho)
    qm = matrix(q)
    abstol = 0.1 * gap_tol
    options = {
        "show_progress": False,
        "maxiters": int(max_iterations),
        "abstol": abstol,
        "reltol": abstol,
        "feastol": min(feas_tol, gap_tol) * 0.1,
    }
    attempts = [None] if abstol < CUSTOM_TOL_FLOOR else [_kkt_hybrid, None]
    best = None
    for kkt in attempts:
        try:
            sol = solvers.conelp(qm, G_CVX, H_CVX, DIMS, kktsolver=kkt, options=options)
        except (ArithmeticError, ValueError) as exc:
            best = best or {"status": "error", "error": str(exc), "x": None,
                            "gap": np.inf, "iterations": 0}
            continue
        if sol["status"] == "optimal":
            return sol
        if best is None or (sol.get("gap") or np.inf) < (best.get("gap") or np.inf):
            best = sol
    return best
