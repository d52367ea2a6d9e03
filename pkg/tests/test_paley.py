import math

import numpy as np
import pytest

from paleybound.paley import (
    Automorphism,
    build_graph,
    complement_isomorphism,
    hp_bound,
    is_complement_isomorphism,
    is_prime,
    quadratic_residues,
    random_automorphism,
    theta_eigenvalue,
)

SMALL_PRIMES = [5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97, 101, 109, 113, 137, 149, 157, 173, 181, 193, 197]


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    for n in range(-3, 50):
        assert is_prime(n) == (n in primes)


def test_quadratic_residues_p5():
    assert quadratic_residues(5) == frozenset({1, 4})


def test_quadratic_residues_p13():
    # squaring every nonzero element mod 13
    expected = frozenset(x * x % 13 for x in range(1, 13))
    assert quadratic_residues(13) == expected == frozenset({1, 3, 4, 9, 10, 12})


@pytest.mark.parametrize("bad", [7, 9, 25, 11, 2, 0, -5, 4])
def test_quadratic_residues_rejects_bad_parameters(bad):
    with pytest.raises(ValueError):
        quadratic_residues(bad)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_residue_set_size_and_negation_closure(p):
    res = quadratic_residues(p)
    assert len(res) == (p - 1) // 2
    assert 0 not in res
    assert all((p - r) % p in res for r in res)


def test_graph_p5_is_pentagon():
    g = build_graph(5)
    for i in range(5):
        for j in range(5):
            expected = (i - j) % 5 in (1, 4)
            assert g.is_edge(i, j) == expected


def test_graph_p13_degree():
    g = build_graph(13)
    adj = g.adjacency
    assert adj.sum(axis=1).tolist() == [6] * 13


def test_graph_p17_specific_edges():
    g = build_graph(17)
    assert g.is_edge(0, 1)  # 1 = 1^2
    assert not g.is_edge(0, 3)  # 3 is not a residue mod 17


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_degree_regularity(p):
    g = build_graph(p)
    degs = g.adjacency.sum(axis=1)
    assert set(degs.tolist()) == {(p - 1) // 2}


def test_adjacency_symmetric_irreflexive():
    g = build_graph(29)
    adj = g.adjacency
    assert np.array_equal(adj, adj.T)
    assert not adj.diagonal().any()


@pytest.mark.parametrize("p", [5, 13, 29, 61])
def test_complement_isomorphism_full_matrix(p):
    g = build_graph(p)
    perm = complement_isomorphism(g)
    permuted = g.adjacency[np.ix_(perm, perm)]
    assert np.array_equal(permuted, g.complement_adjacency)


def test_complement_isomorphism_maps_edge_to_nonedge():
    g = build_graph(5)
    perm = complement_isomorphism(g)
    assert g.is_edge(0, 1)
    assert not g.is_edge(perm[0], perm[1])


def test_identity_map_rejected_as_complement_certificate():
    g = build_graph(5)
    assert not is_complement_isomorphism(g, np.arange(5))


def test_non_permutation_rejected():
    g = build_graph(5)
    assert not is_complement_isomorphism(g, np.zeros(5, dtype=int))


def test_automorphism_is_bijection_and_preserves_edges():
    g = build_graph(29)
    rng = np.random.default_rng(7)
    for _ in range(5):
        phi = random_automorphism(g, rng)
        image = sorted(phi(u) for u in range(29))
        assert image == list(range(29))
        for i in range(29):
            for j in range(i + 1, 29):
                assert g.is_edge(i, j) == g.is_edge(phi(i), phi(j))


def test_automorphism_rejects_nonresidue_scale():
    g = build_graph(13)
    s = g.nonresidues[0]
    with pytest.raises(ValueError):
        Automorphism(s, 0, 13)
    with pytest.raises(ValueError):
        Automorphism(0, 1, 13)


def test_automorphism_inverse():
    phi = Automorphism(3, 5, 13)
    inv = phi.inverse()
    for u in range(13):
        assert inv(phi(u)) == u


def test_hp_bound_exact_small():
    assert hp_bound(5) == pytest.approx(2.0, abs=1e-15)
    assert hp_bound(13) == pytest.approx(3.0, abs=1e-15)


def test_hp_bound_p821_extended_precision():
    import mpmath as mp

    mp.mp.dps = 50
    expected = (mp.sqrt(2 * 821 - 1) + 1) / 2
    assert hp_bound(821) == pytest.approx(float(expected), abs=1e-12)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_bound_ordering(p):
    # hp < sqrt(p) for p > 2, and hp <= sqrt(p) + 1 trivially
    assert hp_bound(p) < math.sqrt(p)
    assert hp_bound(p) <= math.sqrt(p) + 1


def test_theta_eigenvalue_matches_table_values():
    assert theta_eigenvalue(build_graph(821)) == pytest.approx(28.653, abs=5e-4)
    assert theta_eigenvalue(build_graph(853)) == pytest.approx(29.206, abs=5e-4)


def test_theta_eigenvalue_rejects_prime_power():
    with pytest.raises(ValueError):
        theta_eigenvalue(25)
