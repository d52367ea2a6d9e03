import numpy as np
import pytest

from paleybound.orbits import (
    HAS_EDGE,
    enumerate_orbits,
    indicator_matrix,
    orbit_of_triangle,
    read_orbits,
    write_orbits,
)
from paleybound.paley import build_graph, random_automorphism

ORBIT_PRIMES = [13, 17, 29, 37, 53, 61, 97, 101, 109, 149, 157, 197]


def edge_free_pairs_through_zero(g):
    """Independent enumeration of pairs (i < j) with {0, i, j} edge-free."""
    out = []
    for i in range(1, g.p):
        if g.is_edge(0, i):
            continue
        for j in range(i + 1, g.p):
            if not g.is_edge(0, j) and not g.is_edge(i, j):
                out.append((i, j))
    return out


def test_p5_has_no_orbits():
    orbits = enumerate_orbits(build_graph(5))
    assert orbits.m == 0
    assert orbits.representatives == ()


def test_p13_single_orbit():
    orbits = enumerate_orbits(build_graph(13))
    assert orbits.m == 1
    assert orbits.representatives == ((2, 7),)
    assert orbits.orbit_sizes == (6,)


def test_p29_single_orbit_consistent_with_count_estimate():
    orbits = enumerate_orbits(build_graph(29))
    assert orbits.m == 1  # (29-5)/24 = 1
    g = build_graph(29)
    assert orbits.orbit_sizes[0] == len(edge_free_pairs_through_zero(g))


@pytest.mark.parametrize("p", ORBIT_PRIMES)
def test_partition_covers_all_edge_free_pairs(p):
    g = build_graph(p)
    orbits = enumerate_orbits(g)
    pairs = edge_free_pairs_through_zero(g)
    assert sorted(orbits.orbit_id) == sorted(pairs)
    assert sum(orbits.orbit_sizes) == len(pairs)
    # supports of distinct orbits are disjoint by construction of the map;
    # every pair has exactly one orbit id
    assert len(orbits.orbit_id) == len(pairs)


@pytest.mark.parametrize("p", ORBIT_PRIMES)
def test_orbit_count_near_p_minus_5_over_24(p):
    orbits = enumerate_orbits(build_graph(p))
    assert abs(orbits.m - (p - 5) / 24) <= 2


@pytest.mark.parametrize("p", ORBIT_PRIMES)
def test_representatives_are_canonical(p):
    orbits = enumerate_orbits(build_graph(p))
    for k, rep in enumerate(orbits.representatives):
        members = orbits.pairs_of(k)
        assert rep == min(members)
        assert all(a < b for a, b in members)


def test_orbit_of_triangle_group_invariance():
    rng = np.random.default_rng(3)
    for p in (29, 61, 97):
        g = build_graph(p)
        orbits = enumerate_orbits(g)
        pairs = list(orbits.orbit_id)
        for _ in range(100):
            i, j = pairs[rng.integers(len(pairs))]
            phi = random_automorphism(g, rng)
            image = (phi(0), phi(i), phi(j))
            assert orbit_of_triangle(orbits, image) == orbit_of_triangle(orbits, (0, i, j))


def test_orbit_of_triangle_representative_fixed_point():
    orbits = enumerate_orbits(build_graph(29))
    rep = orbits.representatives[0]
    assert orbit_of_triangle(orbits, (0, rep[0], rep[1])) == rep


def test_orbit_of_triangle_detects_edges():
    g = build_graph(13)
    orbits = enumerate_orbits(g)
    assert orbit_of_triangle(orbits, (0, 1, 2)) == HAS_EDGE  # {0,1} is an edge


def test_orbit_of_triangle_translates_triples_without_zero():
    g = build_graph(29)
    orbits = enumerate_orbits(g)
    pairs = list(orbits.orbit_id)
    i, j = pairs[0]
    shifted = (3, (i + 3) % 29, (j + 3) % 29)
    assert orbit_of_triangle(orbits, shifted) == orbit_of_triangle(orbits, (0, i, j))


def test_orbit_of_triangle_rejects_degenerate():
    orbits = enumerate_orbits(build_graph(13))
    with pytest.raises(ValueError):
        orbit_of_triangle(orbits, (1, 1, 2))


def test_indicator_matrix_structure():
    g = build_graph(29)
    orbits = enumerate_orbits(g)
    x = indicator_matrix(orbits, orbits.representatives[0])
    dense = x.to_dense()
    assert dense.shape == (28, 28)
    assert np.array_equal(dense, dense.T)
    assert not dense.diagonal().any()
    assert dense.sum() == 2 * orbits.orbit_sizes[0]
    # entries only where {0, i, j} is edge-free
    for i, j in zip(*np.nonzero(dense)):
        u, v = i + 1, j + 1
        assert not g.is_edge(0, u) and not g.is_edge(0, v) and not g.is_edge(u, v)


def test_indicator_supports_partition_pair_count():
    g = build_graph(13)
    orbits = enumerate_orbits(g)
    total = sum(
        indicator_matrix(orbits, rep).matrix.nnz for rep in orbits.representatives
    )
    assert total == 2 * len(edge_free_pairs_through_zero(g))


def test_indicator_complement_consistency():
    g = build_graph(61)
    orbits = enumerate_orbits(g)
    comp = g.complement_adjacency
    for rep in orbits.representatives:
        x = indicator_matrix(orbits, rep)
        for i, j in x.pairs:
            assert comp[0, i] and comp[0, j]


def test_indicator_unknown_representative():
    orbits = enumerate_orbits(build_graph(13))
    with pytest.raises(KeyError):
        indicator_matrix(orbits, (1, 2))


def test_orbit_snapshot_round_trip(tmp_path):
    orbits = enumerate_orbits(build_graph(53))
    path = tmp_path / "orbits.txt"
    write_orbits(orbits, path)
    lines = path.read_text().splitlines()
    assert lines[0] == f"53 {orbits.m}"
    p, triples = read_orbits(path)
    assert p == 53
    assert triples == [
        (rep[0], rep[1], size)
        for rep, size in zip(orbits.representatives, orbits.orbit_sizes)
    ]
