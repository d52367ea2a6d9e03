"""Assembly of the symmetry-reduced block-diagonal SDP for the stable-set bound.

Variables (d = m + 2 total):
    index 0      y0   -- the common value of all vertex moments
    index 1      y0k  -- the common value of all non-edge pair moments
    index 2+i    one per orbit of edge-free triangles through 0

The two PSD blocks come from principal submatrices of the degree-2 moment
matrix anchored at vertex 0.  Both are affine in the variables with exact
integer coefficients; floating point enters only in the solver.

Index convention for the full (p+1)-dimensional matrices: position 0 is the
anchor-set row, position 1+u is vertex u.  In the difference block the
vertex-0 row duplicates the anchor row of the second matrix and is identically
zero, so it is the row removed by the reduction (removing the anchor row
instead would drop the normalization constant and leave the program
unbounded).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .orbits import TriangleOrbitSet, enumerate_orbits
from .paley import PaleyGraph

__all__ = [
    "VariableMap",
    "AffineMatrix",
    "AffineBlock",
    "L2Instance",
    "build_A_empty",
    "build_A_zero",
    "inclusion_exclusion",
    "reduce_and_assemble",
    "interior_point",
]


@dataclass(frozen=True)
class VariableMap:
    """Bijection between variable indices and moment classes."""

    p: int
    k: int  # representative non-edge endpoint: the smallest non-residue
    reps: tuple[tuple[int, int], ...]

    @property
    def d(self) -> int:
        return len(self.reps) + 2

    @property
    def m(self) -> int:
        return len(self.reps)

    def name(self, i: int) -> str:
        if i == 0:
            return "y{0}"
        if i == 1:
            return "y{0,k}"
        alpha, beta = self.reps[i - 2]
        return f"y{{0,{alpha},{beta}}}"


class AffineMatrix:
    """A symmetric-matrix-valued affine map y -> F0 + sum_i y_i * F[i].

    Coefficients are exact integer sparse matrices.  Supports the arithmetic
    needed by the inclusion-exclusion combinator and row/column restriction.
    """

    def __init__(self, size: int, F0: sp.spmatrix, coeffs: list[sp.spmatrix]):
        self.size = size
        self.shape = (size, size)
        self.F0 = F0.tocsr()
        self.coeffs = [c.tocsr() for c in coeffs]

    @property
    def d(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "AffineMatrix") -> "AffineMatrix":
        if not isinstance(other, AffineMatrix):
            return NotImplemented
        if other.shape != self.shape or other.d != self.d:
            raise ValueError(f"affine matrix mismatch: {self.shape}/{self.d} vs {other.shape}/{other.d}")
        return AffineMatrix(
            self.size,
            self.F0 + other.F0,
            [a + b for a, b in zip(self.coeffs, other.coeffs)],
        )

    def __neg__(self) -> "AffineMatrix":
        return AffineMatrix(self.size, -self.F0, [-c for c in self.coeffs])

    def __sub__(self, other: "AffineMatrix") -> "AffineMatrix":
        neg = -other
        return self + neg

    def restrict(self, keep: list[int]) -> "AffineMatrix":
        idx = np.asarray(keep)
        return AffineMatrix(
            len(keep),
            self.F0[idx][:, idx],
            [c[idx][:, idx] for c in self.coeffs],
        )

    def evaluate(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if y.shape != (self.d,):
            raise ValueError(f"expected y of length {self.d}, got {y.shape}")
        out = self.F0.toarray().astype(float)
        for yi, c in zip(y, self.coeffs):
            if yi != 0.0:
                out += yi * c.toarray()
        return out

    def equal(self, other: "AffineMatrix") -> bool:
        if self.shape != other.shape or self.d != other.d:
            return False
        if (self.F0 != other.F0).nnz:
            return False
        return all((a != b).nnz == 0 for a, b in zip(self.coeffs, other.coeffs))

    def is_symmetric(self) -> bool:
        if (self.F0 != self.F0.T).nnz:
            return False
        return all((c != c.T).nnz == 0 for c in self.coeffs)


@dataclass(frozen=True)
class AffineBlock:
    """One PSD constraint F0 + sum_i y_i F[i] >= 0 of the assembled program."""

    name: str
    size: int
    matrix: AffineMatrix

    @property
    def F0(self) -> sp.csr_matrix:
        return self.matrix.F0

    @property
    def coeffs(self) -> list[sp.csr_matrix]:
        return self.matrix.coeffs


@dataclass(frozen=True)
class L2Instance:
    """The assembled dual-form SDP: maximize c.y subject to both blocks PSD."""

    p: int
    varmap: VariableMap
    objective: np.ndarray
    blocks: tuple[AffineBlock, ...]
    orbits: TriangleOrbitSet = field(repr=False)
    strictly_feasible_point: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.varmap.d

    @property
    def m(self) -> int:
        return self.varmap.m


def _coo(size: int, rows, cols, vals) -> sp.csr_matrix:
    return sp.coo_matrix(
        (np.asarray(vals, dtype=np.int64), (np.asarray(rows), np.asarray(cols))),
        shape=(size, size),
    ).tocsr()


def _empty(size: int) -> sp.csr_matrix:
    return sp.csr_matrix((size, size), dtype=np.int64)


def build_A_empty(g: PaleyGraph, varmap: VariableMap) -> AffineMatrix:
    """The (p+1)-dimensional moment block anchored at the empty set.

    Block form [[1, y0*1^T], [y0*1, y0*I + y0k*Abar]] with Abar the complement
    adjacency; the constant 1 is the normalization of the empty-set moment.
    """
    p = g.p
    size = p + 1
    F0 = _coo(size, [0], [0], [1])

    verts = np.arange(p)
    r0 = np.concatenate([np.zeros(p, dtype=int), verts + 1, verts + 1])
    c0 = np.concatenate([verts + 1, np.zeros(p, dtype=int), verts + 1])
    cy0 = _coo(size, r0, c0, np.ones(3 * p))

    bi, bj = np.nonzero(g.complement_adjacency)
    cy0k = _coo(size, bi + 1, bj + 1, np.ones(len(bi)))

    coeffs = [cy0, cy0k] + [_empty(size) for _ in varmap.reps]
    return AffineMatrix(size, F0, coeffs)


def build_A_zero(g: PaleyGraph, orbits: TriangleOrbitSet, varmap: VariableMap) -> AffineMatrix:
    """The (p+1)-dimensional moment block anchored at {0}.

    Rows 0 and 1 both carry the moments of the anchor set (the multiset
    convention keeps the duplicate).  The lower-right block has the non-edge
    variable on the diagonal at non-neighbors of 0 and one orbit indicator per
    triangle-orbit variable off the diagonal.
    """
    if orbits.p != g.p:
        raise ValueError(f"orbit set is for p={orbits.p}, graph has p={g.p}")
    p = g.p
    size = p + 1

    cy0 = _coo(size, [0, 0, 1, 1], [0, 1, 0, 1], [1, 1, 1, 1])

    nonres = np.asarray(g.nonresidues)
    rows, cols = [], []
    for anchor_row in (0, 1):
        rows.extend([anchor_row] * len(nonres))
        cols.extend((nonres + 1).tolist())
        rows.extend((nonres + 1).tolist())
        cols.extend([anchor_row] * len(nonres))
    rows.extend((nonres + 1).tolist())
    cols.extend((nonres + 1).tolist())
    cy0k = _coo(size, rows, cols, np.ones(len(rows)))

    coeffs = [cy0, cy0k]
    for k in range(orbits.m):
        pr, pc = [], []
        for (i, j) in orbits.pairs_of(k):
            pr.extend((i + 1, j + 1))
            pc.extend((j + 1, i + 1))
        coeffs.append(_coo(size, pr, pc, np.ones(len(pr))))
    return AffineMatrix(size, _empty(size), coeffs)


def inclusion_exclusion(base, terms):
    """Signed sum over nested index sets: sum of (-1)^|S' \\ base| * matrix(S').

    ``terms`` is an iterable of (subset, matrix) with base a subset of each
    subset; matrices may be AffineMatrix or plain arrays, all of one shape.
    """
    base = frozenset(base)
    terms = list(terms)
    if not terms:
        raise ValueError("inclusion_exclusion needs at least one term")
    shape = terms[0][1].shape
    total = None
    for subset, mat in terms:
        s = frozenset(subset)
        if not base <= s:
            raise ValueError(f"term set {sorted(s)} does not contain base {sorted(base)}")
        if mat.shape != shape:
            raise ValueError(f"matrix size mismatch: {mat.shape} vs {shape}")
        signed = mat if len(s - base) % 2 == 0 else -mat
        total = signed if total is None else total + signed
    return total


def interior_point(
    g: PaleyGraph,
    orbits: TriangleOrbitSet,
    weights: tuple[float, float, float, float] = (0.4, 0.3, 0.2, 0.1),
) -> np.ndarray:
    """A strictly feasible variable vector from moments of a stable-set measure.

    Mixing the empty set, uniform singletons, uniform non-edge pairs and
    uniform edge-free triangles (weights w0..w3) yields moments whose blocks
    are Gram matrices of linearly independent functions, hence positive
    definite.  Used to start the interior-point solver away from the boundary.
    """
    p = g.p
    w0, w1, w2, w3 = weights
    if min(weights) < 0 or w1 <= 0 or w2 <= 0:
        raise ValueError("weights w1, w2 must be positive")
    t0 = sum(orbits.orbit_sizes)  # edge-free triples through 0
    if t0 == 0:
        w0 = w0 + w3
        w3 = 0.0
    total = w0 + w1 + w2 + w3
    w0, w1, w2, w3 = w0 / total, w1 / total, w2 / total, w3 / total

    n2 = p * (p - 1) // 4  # non-edges
    y = np.zeros(orbits.m + 2)
    y[0] = (w1 + 2 * w2 + 3 * w3) / p
    y[1] = w2 / n2
    if w3 > 0:
        n3 = p * t0 // 3  # edge-free triangles in total
        k = g.nonresidues[0]
        # triangles through the non-edge {0, k}: common non-neighbors
        c2 = sum(
            1
            for w in g.nonresidues
            if w != k and not g.is_residue(w - k)
        )
        y[1] += w3 * c2 / n3
        y[2:] = w3 / n3
    return y


# start-point shape candidates (scale a, pair factor beta, triangle factor
# gamma): vertex a/sqrt(p), pair beta*a^2/p, triangle gamma*a^3/p^1.5.  The
# eigenvalue analysis gives the window beta in [2, 2/a], gamma in
# [2*beta^2, 2*beta/a]; each candidate is Cholesky-verified before use.
_START_SHAPES = ((0.35, 2.5, 13.0), (0.3, 3.0, 19.0), (0.25, 3.0, 20.0), (0.2, 3.0, 20.0), (0.15, 2.5, 14.0))


def _shaped_start(p: int, d: int, shape: tuple[float, float, float]) -> np.ndarray:
    a, beta, gamma = shape
    y = np.zeros(d)
    y[0] = a / np.sqrt(p)
    y[1] = beta * a * a / p
    y[2:] = gamma * a**3 / p**1.5
    return y


def _strictly_psd(blocks, y: np.ndarray) -> bool:
    for block in blocks:
        try:
            sla.cholesky(block.matrix.evaluate(y), lower=True, check_finite=False)
        except sla.LinAlgError:
            return False
    return True


def reduce_and_assemble(g: PaleyGraph, orbits: TriangleOrbitSet | None = None) -> L2Instance:
    """Build the two reduced PSD blocks and the objective.

    The difference block drops the duplicated vertex-0 row/column (size p); the
    anchored block keeps its anchor row plus the non-neighbors of 0, the only
    rows not structurally zero (size (p+1)/2).
    """
    if orbits is None:
        orbits = enumerate_orbits(g)
    if orbits.p != g.p:
        raise ValueError(f"orbit set is for p={orbits.p}, graph has p={g.p}")
    p = g.p
    varmap = VariableMap(p=p, k=g.nonresidues[0], reps=orbits.representatives)

    a_empty = build_A_empty(g, varmap)
    a_zero = build_A_zero(g, orbits, varmap)
    diff = inclusion_exclusion((), [((), a_empty), ((0,), a_zero)])

    keep_3c = [0] + [1 + u for u in range(1, p)]  # drop the vertex-0 duplicate
    keep_3d = [0] + [1 + u for u in g.nonresidues]
    block_3c = AffineBlock("3c", p, diff.restrict(keep_3c))
    block_3d = AffineBlock("3d", (p + 1) // 2, a_zero.restrict(keep_3d))

    c = np.zeros(varmap.d)
    c[0] = p
    blocks = (block_3c, block_3d)

    # prefer a deep sqrt(p)-scale start (solver converges in far fewer steps
    # than from measure moments, which sit near the zero corner); fall back to
    # the provably interior measure point
    start = interior_point(g, orbits)
    if orbits.m > 0:
        for shape in _START_SHAPES:
            cand = _shaped_start(p, varmap.d, shape)
            if _strictly_psd(blocks, cand):
                start = cand
                break

    return L2Instance(
        p=p,
        varmap=varmap,
        objective=c,
        blocks=blocks,
        orbits=orbits,
        strictly_feasible_point=start,
    )
