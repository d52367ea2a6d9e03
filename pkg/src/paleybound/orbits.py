"""Orbits of edge-free triangles {0, alpha, beta} under the affine automorphisms.

The group u -> a*u + b (a a nonzero residue) acts on edge-free vertex triples;
every orbit meets the triples through 0, so orbits are enumerated by closing
each unassigned pair (alpha, beta) under scaling by residues combined with the
three translations that bring a triple vertex to 0.  This is self-certifying:
the generated classes must partition the edge-free pairs exactly, and the
tests verify that they do.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .paley import PaleyGraph

__all__ = [
    "TriangleOrbitSet",
    "OrbitIndicatorMatrix",
    "enumerate_orbits",
    "indicator_matrix",
    "orbit_of_triangle",
    "HAS_EDGE",
    "write_orbits",
    "read_orbits",
]

# sentinel returned by orbit_of_triangle for triples containing an edge
HAS_EDGE = "has-edge"


@dataclass(frozen=True)
class TriangleOrbitSet:
    """Orbit representatives and the pair -> orbit index map for a fixed p.

    ``representatives[k]`` is the lexicographically smallest pair (alpha, beta),
    alpha < beta, among the orbit's triples normalized to contain 0.
    ``orbit_id`` maps every such normalized pair to its orbit index, and
    ``orbit_sizes[k]`` counts the orbit's triples through 0.
    """

    p: int
    representatives: tuple[tuple[int, int], ...]
    orbit_id: dict[tuple[int, int], int] = field(repr=False)
    orbit_sizes: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.representatives)

    def pairs_of(self, k: int) -> list[tuple[int, int]]:
        """All normalized pairs (i < j) whose triple {0,i,j} lies in orbit k."""
        return [pair for pair, o in self.orbit_id.items() if o == k]


@dataclass(frozen=True)
class OrbitIndicatorMatrix:
    """Symmetric 0/1 indicator of one orbit on the vertex pairs 1..p-1.

    Entry (i, j) is 1 exactly when {0, i, j} is edge-free and belongs to the
    orbit of ``rep``; the diagonal is zero.  Stored as the pair list plus a
    sparse matrix indexed by vertices 1..p-1 (row 0 is vertex 1).
    """

    p: int
    rep: tuple[int, int]
    pairs: tuple[tuple[int, int], ...]
    matrix: sp.csr_matrix = field(repr=False)

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


def enumerate_orbits(g: PaleyGraph) -> TriangleOrbitSet:
    """Group the edge-free triples through 0 into automorphism orbits.

    Pairs are scanned in lexicographic order; the first unassigned pair of an
    orbit is therefore its canonical (lex-min) representative.
    """
    p = g.p
    res_table = g._res_table
    residues = sorted(g.residues)
    nonres = g.nonresidues

    # edge-free triples through 0: both vertices and their difference non-residues
    pairs = [
        (i, j)
        for a_idx, i in enumerate(nonres)
        for j in nonres[a_idx + 1 :]
        if not res_table[j - i]
    ]

    orbit_id: dict[tuple[int, int], int] = {}
    reps: list[tuple[int, int]] = []
    sizes: list[int] = []
    for pair in pairs:
        if pair in orbit_id:
            continue
        k = len(reps)
        alpha, beta = pair
        members = set()
        # translations carrying each vertex of {0, alpha, beta} to 0, then
        # scalings by every residue
        base = (
            (alpha, beta),
            ((beta - alpha) % p, (p - alpha) % p),
            ((alpha - beta) % p, (p - beta) % p),
        )
        for a in residues:
            for (u, v) in base:
                x, y = a * u % p, a * v % p
                members.add((x, y) if x < y else (y, x))
        for q in members:
            orbit_id[q] = k
        reps.append(min(members))
        sizes.append(len(members))

    if reps != sorted(reps):  # pragma: no cover - guaranteed by scan order
        raise AssertionError("orbit representatives not in canonical order")
    return TriangleOrbitSet(
        p=p,
        representatives=tuple(reps),
        orbit_id=orbit_id,
        orbit_sizes=tuple(sizes),
    )


def indicator_matrix(orbits: TriangleOrbitSet, rep: tuple[int, int]) -> OrbitIndicatorMatrix:
    """The 0/1 matrix X for one orbit, indexed by vertices 1..p-1."""
    try:
        k = orbits.representatives.index(tuple(rep))
    except ValueError:
        raise KeyError(f"{rep!r} is not an orbit representative for p={orbits.p}") from None
    pairs = sorted(orbits.pairs_of(k))
    n = orbits.p - 1
    if pairs:
        rows = np.array([i - 1 for i, _ in pairs] + [j - 1 for _, j in pairs])
        cols = np.array([j - 1 for _, j in pairs] + [i - 1 for i, _ in pairs])
        data = np.ones(2 * len(pairs), dtype=np.int64)
        mat = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
    else:  # pragma: no cover - an orbit is never empty
        mat = sp.csr_matrix((n, n), dtype=np.int64)
    return OrbitIndicatorMatrix(p=orbits.p, rep=tuple(rep), pairs=tuple(pairs), matrix=mat)


def orbit_of_triangle(orbits: TriangleOrbitSet, t) -> tuple[int, int] | str:
    """Canonical representative of the triple's orbit, or HAS_EDGE.

    Triples not containing 0 are first translated by the negative of one of
    their vertices (any choice lands in the same orbit, since translations are
    automorphisms).
    """
    p = orbits.p
    t = tuple(int(v) % p for v in t)
    if len(set(t)) != 3:
        raise ValueError(f"triple must have 3 distinct vertices, got {t!r}")
    # group membership is translation-invariant: shift any vertex onto 0
    u = t[0] if 0 not in t else 0
    shifted = sorted((v - u) % p for v in t)
    _, i, j = shifted
    # the residue table is consistent across instances of the same p
    table = _residue_table(p)
    if table[i] or table[j] or table[(j - i) % p]:
        return HAS_EDGE
    k = orbits.orbit_id.get((i, j))
    if k is None:  # pragma: no cover - orbit map is total on edge-free pairs
        raise AssertionError(f"edge-free pair {(i, j)} missing from orbit map")
    return orbits.representatives[k]


_residue_tables: dict[int, np.ndarray] = {}


def _residue_table(p: int) -> np.ndarray:
    table = _residue_tables.get(p)
    if table is None:
        table = np.zeros(p, dtype=bool)
        table[[x * x % p for x in range(1, p)]] = True
        _residue_tables[p] = table
    return table


def write_orbits(orbits: TriangleOrbitSet, path) -> None:
    """Snapshot format: header ``p m``, then one ``alpha beta orbit_size`` line
    per representative."""
    lines = [f"{orbits.p} {orbits.m}"]
    for (alpha, beta), size in zip(orbits.representatives, orbits.orbit_sizes):
        lines.append(f"{alpha} {beta} {size}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_orbits(path) -> tuple[int, list[tuple[int, int, int]]]:
    """Parse a snapshot written by write_orbits: (p, [(alpha, beta, size), ...])."""
    lines = Path(path).read_text().split()
    p, m = int(lines[0]), int(lines[1])
    vals = [int(x) for x in lines[2:]]
    if len(vals) != 3 * m:
        raise ValueError(f"expected {3 * m} fields for {m} orbits, got {len(vals)}")
    triples = [(vals[3 * i], vals[3 * i + 1], vals[3 * i + 2]) for i in range(m)]
    return p, triples
