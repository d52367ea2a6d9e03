"""Paley graphs over prime fields: construction, automorphisms, closed-form bounds.

Vertices are the field elements 0..p-1.  Two vertices are adjacent when their
difference is a nonzero quadratic residue mod p; p = 1 (mod 4) makes -1 a
residue, so the relation is symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "is_prime",
    "quadratic_residues",
    "PaleyGraph",
    "build_graph",
    "Automorphism",
    "random_automorphism",
    "complement_isomorphism",
    "is_complement_isomorphism",
    "hp_bound",
    "theta_eigenvalue",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit integers."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _validate_paley_prime(p: int) -> None:
    if not isinstance(p, (int, np.integer)):
        raise ValueError(f"p must be an integer, got {type(p).__name__}")
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"invalid Paley parameter: {p} is not prime")
    if p % 4 != 1:
        raise ValueError(f"invalid Paley parameter: {p} = {p % 4} (mod 4), need 1 (mod 4)")


def quadratic_residues(p: int) -> frozenset[int]:
    """Nonzero quadratic residues mod p, i.e. {x^2 mod p : x = 1..p-1}.

    Rejects p unless p is prime and p = 1 (mod 4).  The result has exactly
    (p-1)/2 elements and is closed under negation.
    """
    _validate_paley_prime(p)
    return frozenset(x * x % p for x in range(1, p))


class PaleyGraph:
    """The Paley graph G_p.  Immutable after construction; safe to share."""

    def __init__(self, p: int):
        _validate_paley_prime(p)
        self.p = int(p)
        self.n = self.p
        self.residues = quadratic_residues(p)
        # direct-indexed membership table: adjacency is the hot loop everywhere
        table = np.zeros(self.p, dtype=bool)
        table[list(self.residues)] = True
        self._res_table = table

    def is_residue(self, x: int) -> bool:
        return bool(self._res_table[x % self.p])

    def is_edge(self, i: int, j: int) -> bool:
        return bool(self._res_table[(i - j) % self.p])

    def degree(self, v: int) -> int:
        return (self.p - 1) // 2

    @cached_property
    def nonresidues(self) -> tuple[int, ...]:
        """Nonzero non-residues in ascending order; also the non-neighbors of 0."""
        return tuple(x for x in range(1, self.p) if not self._res_table[x])

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense boolean adjacency matrix (p x p)."""
        diff = (np.arange(self.p)[:, None] - np.arange(self.p)[None, :]) % self.p
        a = self._res_table[diff]
        a.setflags(write=False)
        return a

    @cached_property
    def complement_adjacency(self) -> np.ndarray:
        """Adjacency of the complement graph: 1 off-diagonal where not an edge."""
        a = ~self.adjacency
        np.fill_diagonal(a, False)
        a.setflags(write=False)
        return a

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        """Per-vertex neighbor sets as bitmasks (bit v set iff v adjacent)."""
        masks = []
        adj = self.adjacency
        for v in range(self.p):
            m = 0
            for u in np.nonzero(adj[v])[0]:
                m |= 1 << int(u)
            masks.append(m)
        return tuple(masks)

    def __repr__(self) -> str:
        return f"PaleyGraph(p={self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PaleyGraph) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PaleyGraph", self.p))


def build_graph(p: int) -> PaleyGraph:
    """Construct G_p; rejects p not prime or p != 1 (mod 4)."""
    return PaleyGraph(p)


@dataclass(frozen=True)
class Automorphism:
    """Affine map u -> a*u + b (mod p) with a a nonzero quadratic residue.

    These maps form the automorphism group used for symmetry reduction: they
    are bijections on vertices and preserve the edge relation, since the
    difference a*(u - v) is a residue exactly when u - v is.
    """

    a: int
    b: int
    p: int

    def __post_init__(self):
        if self.a % self.p == 0:
            raise ValueError("automorphism scale a must be nonzero mod p")
        if pow(self.a, (self.p - 1) // 2, self.p) != 1:
            raise ValueError(f"a={self.a} is not a quadratic residue mod {self.p}")

    def __call__(self, u: int) -> int:
        return (self.a * u + self.b) % self.p

    def apply(self, u: np.ndarray) -> np.ndarray:
        return (self.a * np.asarray(u) + self.b) % self.p

    def inverse(self) -> "Automorphism":
        a_inv = pow(self.a, -1, self.p)
        return Automorphism(a_inv, (-a_inv * self.b) % self.p, self.p)


def random_automorphism(g: PaleyGraph, rng: np.random.Generator) -> Automorphism:
    residues = sorted(g.residues)
    a = residues[rng.integers(len(residues))]
    b = int(rng.integers(g.p))
    return Automorphism(int(a), b, g.p)


def complement_isomorphism(g: PaleyGraph) -> np.ndarray:
    """A vertex permutation mapping edges of G_p onto non-edges (and vice versa).

    Multiplication by any non-residue s works: s*(i-j) is a non-residue exactly
    when i-j is a residue.  Returns the permutation array for the smallest s,
    verified before returning.
    """
    s = g.nonresidues[0]
    perm = (s * np.arange(g.p)) % g.p
    if not is_complement_isomorphism(g, perm):
        raise AssertionError("complement isomorphism check failed")  # pragma: no cover
    return perm


def is_complement_isomorphism(g: PaleyGraph, perm: np.ndarray) -> bool:
    """Check that perm maps the edge set of G_p exactly onto its complement."""
    perm = np.asarray(perm)
    if sorted(perm.tolist()) != list(range(g.p)):
        return False
    adj = g.adjacency
    permuted = adj[np.ix_(perm, perm)]
    return bool(np.array_equal(permuted, g.complement_adjacency))


def hp_bound(p: int) -> float:
    """Closed-form clique-number upper bound (sqrt(2p-1)+1)/2."""
    _validate_paley_prime(p)
    return (math.sqrt(2 * p - 1) + 1) / 2


def theta_eigenvalue(g: PaleyGraph | int) -> float:
    """sqrt(p): the Lovasz theta number of a self-complementary vertex-transitive
    graph, used as the analytic oracle for the SDP-computed value."""
    p = g.p if isinstance(g, PaleyGraph) else g
    _validate_paley_prime(p)
    return math.sqrt(p)
