"""Barrier interior-point solver for dual-form SDPs with few variables.

Solves  maximize c.y  subject to  F0_b + sum_i y_i F_ib >= 0  per block b,
by damped Newton steps on the log-det barrier with a geometrically decreasing
barrier weight.  The duality-gap estimate after centering at weight mu is
mu * (sum of block sizes), which decreases monotonically across stages.

The Newton Hessian H_ij = sum_b tr(W F_i W F_j) (W the block inverse) is
assembled by one of two routes chosen per block: a stacked dense product for
few variables with arbitrary coefficient sparsity, or a closed-form gather
when every coefficient has only a handful of entries (the dense theta program
has thousands of variables with <= 3 entries each).  Both routes are checked
against each other in the tests.

Everything is deterministic: fixed loop orders, no randomness.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .model import AffineBlock, AffineMatrix, VariableMap, build_A_empty
from .paley import PaleyGraph

__all__ = [
    "SdpProblem",
    "SolverConfig",
    "SolverStatus",
    "SdpSolution",
    "solve",
    "check_certificate",
    "CertificateReport",
    "lovasz_theta_sdp",
    "theta_problem_dense",
    "theta_problem_reduced",
    "DENSE_THETA_LIMIT",
]

DENSE_THETA_LIMIT = 101


class SolverStatus(enum.Enum):
    OPTIMAL = "optimal"
    MAX_ITERATIONS = "max_iterations"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass(frozen=True)
class SdpProblem:
    """Dual-form SDP data: objective and affine PSD blocks."""

    objective: np.ndarray
    blocks: tuple[AffineBlock, ...]
    strictly_feasible_point: np.ndarray | None = None

    @property
    def d(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class SolverConfig:
    tol_gap: float = 1e-6  # relative duality gap
    tol_feas: float = 1e-8  # PSD slack accepted in certificates
    max_iterations: int = 200  # total Newton steps
    initial_mu: float = 1.0
    mu_reduction: float = 0.2
    deterministic: bool = True  # loop order is always fixed; kept for the record
    phase1_ridge: float = 1e-9  # fallback interior shift when starting on the boundary

    def __post_init__(self):
        if self.tol_gap <= 0 or self.tol_feas <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 < self.mu_reduction < 1:
            raise ValueError("mu_reduction must lie in (0, 1)")


@dataclass(frozen=True)
class SdpSolution:
    value: float
    y: np.ndarray
    status: SolverStatus
    gap: float  # relative duality-gap estimate at exit
    min_eig: float  # smallest block eigenvalue at y (no ridge)
    iterations: int
    wall_time: float
    # absolute gap bounds recorded after each centering; strictly decreasing
    gap_history: tuple[float, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class CertificateReport:
    valid: bool
    min_eigs: tuple[float, ...]


class _BlockData:
    """Preprocessed per-block arrays shared by all Newton steps."""

    # coefficient nnz at or below this uses the gather route for the Hessian
    ATOM_LIMIT = 4

    def __init__(self, block: AffineBlock, ridge: float):
        self.size = n = block.size
        self.F0 = block.F0.toarray().astype(float)
        if ridge:
            self.F0[np.diag_indices(n)] += ridge
        self.coeffs = [c.tocsr().astype(float) for c in block.coeffs]
        d = len(self.coeffs)
        # vec-stacked coefficients: vec(Z) = vec(F0) + A @ y
        cols = []
        for c in self.coeffs:
            coo = c.tocoo()
            cols.append(
                sp.coo_matrix(
                    (coo.data, (coo.row * n + coo.col, np.zeros(coo.nnz, dtype=int))),
                    shape=(n * n, 1),
                )
            )
        self.A = sp.hstack(cols).tocsr() if cols else sp.csr_matrix((n * n, 0))
        nnz = [c.nnz for c in self.coeffs]
        self.use_atoms = bool(nnz) and max(nnz) <= self.ATOM_LIMIT
        if self.use_atoms:
            width = max(nnz)
            self.R = np.zeros((d, width), dtype=np.intp)
            self.C = np.zeros((d, width), dtype=np.intp)
            self.V = np.zeros((d, width))
            for i, c in enumerate(self.coeffs):
                coo = c.tocoo()
                self.R[i, : coo.nnz] = coo.row
                self.C[i, : coo.nnz] = coo.col
                self.V[i, : coo.nnz] = coo.data

    def z_at(self, y: np.ndarray) -> np.ndarray:
        flat = self.A @ y
        z = self.F0 + flat.reshape(self.size, self.size)
        return z

    def grad_hess(self, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Gradient tr(W F_i) and Hessian tr(W F_i W F_j) from the inverse W."""
        d = len(self.coeffs)
        if self.use_atoms:
            g = np.einsum("ik,ik->i", self.V, w[self.C, self.R])
            h = np.zeros((d, d))
            width = self.R.shape[1]
            for k in range(width):
                rk, ck, vk = self.R[:, k], self.C[:, k], self.V[:, k]
                for l in range(width):
                    rl, cl, vl = self.R[:, l], self.C[:, l], self.V[:, l]
                    h += (
                        (vk[:, None] * vl[None, :])
                        * w[ck[:, None], rl[None, :]]
                        * w[cl[None, :], rk[:, None]]
                    )
            return g, h
        n = self.size
        u = np.empty((d, n, n))
        for i, c in enumerate(self.coeffs):
            u[i] = c @ w
        g = np.trace(u, axis1=1, axis2=2)
        uf = u.reshape(d, n * n)
        ut = np.ascontiguousarray(u.transpose(0, 2, 1)).reshape(d, n * n)
        h = uf @ ut.T
        return g, h


def _try_cholesky(z: np.ndarray):
    try:
        return sla.cholesky(z, lower=True, check_finite=False)
    except sla.LinAlgError:
        return None


def _logdet(chol: np.ndarray) -> float:
    return 2.0 * float(np.sum(np.log(np.diag(chol))))


def solve(prob, cfg: SolverConfig | None = None, y0: np.ndarray | None = None) -> SdpSolution:
    """Run the barrier method on ``prob`` (SdpProblem, L2Instance, or anything
    with .objective and .blocks).

    The start point is ``y0``, else the problem's strictly feasible point,
    else zero; a zero start that sits on the boundary gets the configured
    ridge folded into the constant matrices (removed before certification).
    """
    cfg = cfg or SolverConfig()
    started = time.perf_counter()
    c = np.asarray(prob.objective, dtype=float)
    d = len(c)

    if y0 is None:
        y0 = getattr(prob, "strictly_feasible_point", None)
    y = np.zeros(d) if y0 is None else np.array(y0, dtype=float)
    if y.shape != (d,):
        raise ValueError(f"start point has dimension {y.shape}, expected ({d},)")

    def finish(status, y, gap_rel, iters, history):
        min_eig = _min_eig(prob.blocks, y)
        if status is SolverStatus.OPTIMAL and min_eig < -cfg.tol_feas:
            status = SolverStatus.NUMERICAL_FAILURE
        return SdpSolution(
            value=float(c @ y),
            y=y,
            status=status,
            gap=gap_rel,
            min_eig=min_eig,
            iterations=iters,
            wall_time=time.perf_counter() - started,
            gap_history=tuple(history),
        )

    blocks = [_BlockData(b, 0.0) for b in prob.blocks]
    chols = [_try_cholesky(b.z_at(y)) for b in blocks]
    if any(ch is None for ch in chols) and cfg.phase1_ridge > 0:
        blocks = [_BlockData(b, cfg.phase1_ridge) for b in prob.blocks]
        chols = [_try_cholesky(b.z_at(y)) for b in blocks]
    if any(ch is None for ch in chols):
        return finish(SolverStatus.NUMERICAL_FAILURE, y, np.inf, 0, [])

    nu = sum(b.size for b in blocks)
    iters = 0
    history: list[float] = []

    def barrier_parts():
        """Barrier gradient/Hessian (coefficient one) at the current factors."""
        g = np.zeros(d)
        h = np.zeros((d, d))
        for b, ch in zip(blocks, chols):
            w = sla.cho_solve((ch, True), np.eye(b.size), check_finite=False)
            w = (w + w.T) / 2
            g_b, h_b = b.grad_hess(w)
            g -= g_b
            h += h_b
        return g, h

    # fit the initial path parameter: minimize the Newton decrement
    # lambda^2(t) = |t*c - g_bar|^2 in the H^-1 norm, quadratic in t
    g_bar, h_bar = barrier_parts()
    try:
        hfac0 = sla.cho_factor(h_bar, check_finite=False)
        hinv_c = sla.cho_solve(hfac0, c, check_finite=False)
        a_coef = float(c @ hinv_c)
        b_coef = float(g_bar @ hinv_c)
        t = b_coef / a_coef if a_coef > 0 else 0.0
    except sla.LinAlgError:
        t = 0.0
    if not np.isfinite(t) or t <= 0:
        t = 1.0 / cfg.initial_mu

    while True:
        # center the t-weighted function f = -t*c.y - sum logdet
        while True:
            if iters >= cfg.max_iterations:
                return finish(SolverStatus.MAX_ITERATIONS, y, _rel(nu / t, c @ y), iters, history)
            g_bar, h_bar = barrier_parts()
            grad = -t * c + g_bar
            try:
                hfac = sla.cho_factor(h_bar, check_finite=False)
            except sla.LinAlgError:
                h_bar[np.diag_indices(d)] += 1e-12 * (1 + np.trace(h_bar) / d)
                try:
                    hfac = sla.cho_factor(h_bar, check_finite=False)
                except sla.LinAlgError:
                    return finish(SolverStatus.NUMERICAL_FAILURE, y, _rel(nu / t, c @ y), iters, history)
            step = sla.cho_solve(hfac, -grad, check_finite=False)
            lam2 = float(-grad @ step)
            if lam2 < 0:  # indefiniteness from roundoff
                lam2 = 0.0
            if lam2 <= 0.09:  # lambda <= 0.3: centered enough for the gap bound
                break

            f_cur = -t * float(c @ y) - sum(_logdet(ch) for ch in chols)
            alpha = 1.0
            accepted = False
            for _ in range(120):
                y_try = y + alpha * step
                chols_try = []
                ok = True
                for b in blocks:
                    ch = _try_cholesky(b.z_at(y_try))
                    if ch is None:
                        ok = False
                        break
                    chols_try.append(ch)
                if ok:
                    f_try = -t * float(c @ y_try) - sum(_logdet(ch) for ch in chols_try)
                    if f_try <= f_cur - 0.01 * alpha * lam2:
                        accepted = True
                        break
                alpha *= 0.7
            iters += 1
            if not accepted:
                return finish(SolverStatus.NUMERICAL_FAILURE, y, _rel(nu / t, c @ y), iters, history)
            y = y_try
            chols = chols_try

        # centered: rigorous suboptimality bound at lambda <= 0.3 is
        # opt - c.y <= (nu + sqrt(nu) * 0.3/0.7) / t; the absolute bound is
        # strictly decreasing across outer rounds because t only grows
        gap_abs = (nu + np.sqrt(nu) * (0.3 / 0.7)) / t
        gap_rel = _rel(gap_abs, c @ y)
        history.append(gap_abs)
        if gap_rel <= 0.85 * cfg.tol_gap:
            return finish(SolverStatus.OPTIMAL, y, gap_rel, iters, history)

        # predictor: move along the central-path tangent H^-1 c to a fraction
        # of the feasibility boundary (damped Newton alone would need ~sqrt(nu)
        # steps to cover the same ground)
        tangent = sla.cho_solve(hfac, c, check_finite=False)
        tnorm2 = float(c @ tangent)
        if tnorm2 <= 0:
            return finish(SolverStatus.NUMERICAL_FAILURE, y, gap_rel, iters, history)

        def feasible_at(a):
            trial = [_try_cholesky(b.z_at(y + a * tangent)) for b in blocks]
            return trial if all(ch is not None for ch in trial) else None

        alpha = 1.0 / np.sqrt(tnorm2)  # one local-norm unit
        while alpha > 0 and feasible_at(alpha) is None:
            alpha /= 2.0
        lo, hi = alpha, None
        for _ in range(80):
            if feasible_at(2.0 * lo) is None:
                hi = 2.0 * lo
                break
            lo *= 2.0
        if hi is not None:
            # bisect the boundary, then step to 90% of it
            for _ in range(8):
                mid = (lo + hi) / 2.0
                if feasible_at(mid) is None:
                    hi = mid
                else:
                    lo = mid
        if lo > 0:
            trial = feasible_at(0.9 * lo)
            if trial is not None:
                y = y + 0.9 * lo * tangent
                chols = trial

        # refit the path parameter at the predicted point, keeping it monotone
        g_bar, h_bar = barrier_parts()
        t_new = t
        try:
            hfac = sla.cho_factor(h_bar, check_finite=False)
            hinv_c = sla.cho_solve(hfac, c, check_finite=False)
            a_coef = float(c @ hinv_c)
            if a_coef > 0:
                t_new = float(g_bar @ hinv_c) / a_coef
        except sla.LinAlgError:
            pass
        t = max(t_new, t * (1.0 / cfg.mu_reduction) ** 0.25, t * 1.0001)


def _rel(gap_abs: float, value: float) -> float:
    return float(gap_abs) / (1.0 + abs(float(value)))


def _min_eig(blocks, y: np.ndarray) -> float:
    out = np.inf
    for b in blocks:
        z = b.F0.toarray().astype(float)
        for yi, cm in zip(y, b.coeffs):
            if yi != 0.0:
                z += yi * cm.toarray()
        out = min(out, float(sla.eigvalsh(z)[0]))
    return out


def check_certificate(prob, y: np.ndarray, tol: float = 1e-8) -> CertificateReport:
    """Evaluate every block at y; valid iff each smallest eigenvalue >= -tol."""
    y = np.asarray(y, dtype=float)
    if y.shape != (len(prob.objective),):
        raise ValueError(f"certificate has dimension {y.shape}, expected ({len(prob.objective)},)")
    eigs = []
    for b in prob.blocks:
        z = b.F0.toarray().astype(float)
        for yi, cm in zip(y, b.coeffs):
            if yi != 0.0:
                z += yi * cm.toarray()
        eigs.append(float(sla.eigvalsh(z)[0]))
    return CertificateReport(valid=all(e >= -tol for e in eigs), min_eigs=tuple(eigs))


# --- Lovasz theta as an SDP cross-check -----------------------------------


def theta_problem_dense(g: PaleyGraph) -> SdpProblem:
    """The unreduced degree-one moment SDP whose optimum is the theta number.

    One variable per vertex and per non-edge; matrix indexed by the unit row
    plus all vertices.  Feasible start from a mixture of the empty set,
    singletons and non-edge pairs.
    """
    p = g.p
    size = p + 1
    comp = g.complement_adjacency
    pairs = [(u, v) for u in range(p) for v in range(u + 1, p) if comp[u, v]]
    d = p + len(pairs)

    coeffs = []
    for u in range(p):
        coeffs.append(
            sp.coo_matrix(
                ([1.0, 1.0, 1.0], ([0, 1 + u, 1 + u], [1 + u, 0, 1 + u])),
                shape=(size, size),
            ).tocsr()
        )
    for (u, v) in pairs:
        coeffs.append(
            sp.coo_matrix(
                ([1.0, 1.0], ([1 + u, 1 + v], [1 + v, 1 + u])),
                shape=(size, size),
            ).tocsr()
        )
    f0 = sp.coo_matrix(([1.0], ([0], [0])), shape=(size, size)).tocsr()

    c = np.zeros(d)
    c[:p] = 1.0

    vert, pair = _theta_interior(p)
    y0 = np.zeros(d)
    y0[:p] = vert
    y0[p:] = pair

    block = AffineBlock("moment", size, AffineMatrix(size, f0, coeffs))
    return SdpProblem(objective=c, blocks=(block,), strictly_feasible_point=y0)


def _theta_interior(p: int) -> tuple[float, float]:
    """A deep interior point of the moment block shaped like its optimum.

    The complement adjacency of a Paley graph has eigenvalues (p-1)/2 and
    (-1 +- sqrt(p))/2, so vertex weight a/sqrt(p) with pair weight slightly
    under 2*vertex/(1+sqrt(p)) keeps every eigendirection safely positive
    while the objective is already a constant fraction of the optimum.
    """
    vert = 0.4 / np.sqrt(p)
    pair = 0.8 * 2.0 * vert / (1.0 + np.sqrt(p))
    return vert, pair


def theta_problem_reduced(g: PaleyGraph) -> SdpProblem:
    """Two-variable symmetry reduction of the theta SDP (valid for any p)."""
    varmap = VariableMap(p=g.p, k=g.nonresidues[0], reps=())
    a_empty = build_A_empty(g, varmap)
    block = AffineBlock("moment", g.p + 1, a_empty)
    c = np.array([float(g.p), 0.0])
    y0 = np.array(_theta_interior(g.p))
    return SdpProblem(objective=c, blocks=(block,), strictly_feasible_point=y0)


def lovasz_theta_sdp(g: PaleyGraph, cfg: SolverConfig | None = None, reduced: bool = False) -> SdpSolution:
    """Compute theta(G_p) by SDP; must agree with the analytic value sqrt(p).

    The dense route is limited to p <= 101 (its variable count grows like
    p^2/4); beyond that use reduced=True or the analytic oracle directly.
    """
    if reduced:
        return solve(theta_problem_reduced(g), cfg)
    if g.p > DENSE_THETA_LIMIT:
        raise ValueError(
            f"dense theta SDP is limited to p <= {DENSE_THETA_LIMIT}; "
            f"use reduced=True or the analytic value"
        )
    return solve(theta_problem_dense(g), cfg)
