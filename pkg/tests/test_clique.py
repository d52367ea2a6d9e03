import itertools

import numpy as np
import pytest

from paleybound.clique import clique_number, max_clique_masks
from paleybound.paley import build_graph, random_automorphism

# exact clique numbers certified by the exhaustive oracle below
KNOWN_OMEGA = {5: 2, 13: 3, 17: 3, 29: 4}


def exhaustive_clique_number(g, k_max=6):
    """Independent oracle: scan all vertex subsets of increasing size."""
    masks = g.neighbor_masks
    best = 1
    for k in range(2, k_max + 1):
        found = False
        for comb in itertools.combinations(range(g.p), k):
            if all(
                (masks[comb[i]] >> comb[j]) & 1
                for i in range(k)
                for j in range(i + 1, k)
            ):
                found = True
                break
        if not found:
            return best
        best = k
    raise AssertionError(f"clique number exceeds scan limit {k_max}")


def is_clique(g, vertices):
    return all(g.is_edge(a, b) for a, b in itertools.combinations(vertices, 2))


@pytest.mark.parametrize("p", sorted(KNOWN_OMEGA))
def test_matches_exhaustive_enumeration(p):
    g = build_graph(p)
    res = clique_number(g)
    oracle = exhaustive_clique_number(g)
    assert res.certified
    assert res.omega == oracle == KNOWN_OMEGA[p]
    assert len(res.witness) == res.omega
    assert is_clique(g, res.witness)


@pytest.mark.parametrize("p", [37, 41, 53])
def test_symmetric_and_plain_search_agree(p):
    g = build_graph(p)
    assert clique_number(g).omega == clique_number(g, use_symmetry=False).omega


def test_budget_exhaustion_returns_flagged_lower_bound():
    g = build_graph(101)
    res = clique_number(g, budget=1, use_symmetry=False)
    assert not res.certified
    assert res.omega >= 2
    assert is_clique(g, res.witness)
    assert len(res.witness) == res.omega
    full = clique_number(g)
    assert full.certified
    assert res.omega <= full.omega


def test_budget_must_be_positive():
    g = build_graph(13)
    with pytest.raises(ValueError):
        clique_number(g, budget=0)


def test_deterministic_across_runs():
    g = build_graph(61)
    a = clique_number(g)
    b = clique_number(g)
    assert a == b


def test_invariant_under_automorphism_relabeling():
    g = build_graph(53)
    base = clique_number(g)
    rng = np.random.default_rng(11)
    for _ in range(5):
        phi = random_automorphism(g, rng)
        relabeled = sorted(phi(v) for v in base.witness)
        assert is_clique(g, relabeled)
        assert clique_number(g).omega == base.omega


def test_masks_engine_on_explicit_graph():
    # 4-cycle: omega = 2
    masks = [0b0110, 0b1001, 0b1001, 0b0110]
    res = max_clique_masks(masks, [0, 1, 2, 3], budget=1000)
    assert res.certified
    assert res.omega == 2
    # complete graph K4
    masks = [0b1110, 0b1101, 0b1011, 0b0111]
    res = max_clique_masks(masks, [0, 1, 2, 3], budget=1000)
    assert res.omega == 4
    assert res.witness == (0, 1, 2, 3)


def test_empty_vertex_set():
    res = max_clique_masks([], [], budget=10)
    assert res.omega == 0
    assert res.certified


@pytest.mark.slow
def test_large_prime_against_published_value():
    g = build_graph(997)
    res = clique_number(g)
    assert res.certified
    assert res.omega == 13
    assert is_clique(g, res.witness)
