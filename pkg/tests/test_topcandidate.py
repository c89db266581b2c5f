"""Nomination relation, stable expert sets, and the alpha-sweep ranking."""

import numpy as np
import pytest

from adoptrank import (
    build_nominations,
    stable_expert_set,
    top_candidate_ranking,
)
from conftest import (
    complete_graph,
    graph_from_edges,
    path_graph,
    random_gnp_edges,
    star_graph,
)


def nominee_sets(g, alpha):
    nom = build_nominations(g, alpha)
    return [set(nom.nominees(u).tolist()) for u in range(g.n)]


class TestBuildNominations:
    def test_p3_alpha_zero_with_inclusive_ties(self):
        g = path_graph(3)  # a-b-c
        noms = nominee_sets(g, 0.0)
        assert noms[0] == {1}
        assert noms[1] == {0, 2}  # both neighbors tie at degree 1
        assert noms[2] == {1}

    def test_alpha_one_nominates_all_neighbors(self, rng):
        n = 25
        g = graph_from_edges(random_gnp_edges(n, 0.15, rng), n)
        noms = nominee_sets(g, 1.0)
        for u in range(n):
            assert noms[u] == set(g.neighbors(u).tolist())

    def test_p4_alpha_zero_prefers_higher_degree(self):
        g = path_graph(4)
        noms = nominee_sets(g, 0.0)
        assert noms[1] == {2}  # degree 2 beats degree 1
        assert noms[2] == {1}

    def test_alpha_zero_yields_exactly_max_degree_neighbors(self, rng):
        n = 40
        g = graph_from_edges(random_gnp_edges(n, 0.1, rng), n)
        noms = nominee_sets(g, 0.0)
        deg = g.degrees
        for u in range(n):
            nbrs = g.neighbors(u)
            if nbrs.size == 0:
                assert noms[u] == set()
                continue
            top = int(deg[nbrs].max())
            assert noms[u] == {int(v) for v in nbrs if deg[v] == top}

    def test_nonempty_and_top_popularity_invariants(self, rng):
        n = 35
        g = graph_from_edges(random_gnp_edges(n, 0.12, rng), n)
        deg = g.degrees
        for alpha in (0.0, 0.3, 0.5, 0.8, 1.0):
            noms = nominee_sets(g, alpha)
            for u in range(n):
                nbrs = set(g.neighbors(u).tolist())
                assert noms[u] <= nbrs
                if nbrs:
                    assert noms[u]
                    # everyone excluded by the cut is strictly less popular
                    cut = min(deg[v] for v in noms[u])
                    for v in nbrs - noms[u]:
                        assert deg[v] < cut

    def test_alpha_validation(self):
        g = path_graph(3)
        for bad in (-0.1, 1.1):
            with pytest.raises(ValueError):
                build_nominations(g, bad)

    def test_exclusive_tie_rule_breaks_by_id(self):
        g = path_graph(3)
        nom = build_nominations(g, 0.0, tie_rule="exclusive")
        # b keeps exactly one of its degree-tied neighbors, the smaller id
        assert nom.nominees(1).tolist() == [0]
        assert nom.tie_rule == "exclusive"
        with pytest.raises(ValueError):
            build_nominations(g, 0.0, tie_rule="middle")

    def test_exclusive_count_is_exact(self, rng):
        n = 40
        g = graph_from_edges(random_gnp_edges(n, 0.15, rng), n)
        for alpha in (0.0, 0.4, 0.8):
            nom = build_nominations(g, alpha, tie_rule="exclusive")
            deg = g.degrees
            for u in range(n):
                if deg[u]:
                    expect = max(1, int(np.ceil(alpha * deg[u] - 1e-9)))
                    assert nom.nominees(u).shape[0] == expect


class TestStableExpertSet:
    def test_p4_hand_fixed_point(self):
        es = stable_expert_set(path_graph(4), 0.0)
        assert es.members.tolist() == [1, 2]
        assert es.iterations <= 4

    def test_p3_everyone_survives(self):
        es = stable_expert_set(path_graph(3), 0.0)
        assert es.members.tolist() == [0, 1, 2]

    def test_alpha_one_keeps_non_isolated(self, rng):
        n = 30
        g = graph_from_edges(random_gnp_edges(n, 0.1, rng) + [(0, 1)], n + 2)
        es = stable_expert_set(g, 1.0)
        assert es.members.tolist() == np.flatnonzero(g.degrees > 0).tolist()

    def test_stability_clauses_on_random_graphs(self, rng):
        for trial in range(60):
            n = int(rng.integers(2, 80))
            g = graph_from_edges(random_gnp_edges(n, 0.1, rng), n)
            alpha = float(rng.choice([0.0, 0.2, 0.5, 0.7, 1.0]))
            es = stable_expert_set(g, alpha)
            nom = build_nominations(g, alpha)
            members = set(es.members.tolist())
            # (i) every member is nominated by some member
            for v in members:
                assert any(v in set(nom.nominees(u).tolist()) for u in members)
            # (ii) every nominee of a member stays inside
            for u in members:
                assert set(nom.nominees(u).tolist()) <= members
            assert es.iterations <= max(n, 1) + 1

    def test_membership_mask_agrees(self):
        es = stable_expert_set(path_graph(4), 0.0)
        assert 1 in es and 0 not in es
        assert len(es) == 2


class TestRanking:
    def test_p4_scores_and_order(self):
        r = top_candidate_ranking(path_graph(4))
        # endpoints enter once their nominator's cut reaches both
        # neighbors, at the smallest alpha with ceil(2 * alpha) >= 2
        assert r.scores.tolist() == [0.6, 0.0, 0.0, 0.6]
        assert r.order.tolist() == [1, 2, 0, 3]

    def test_star_all_at_zero_center_first(self):
        r = top_candidate_ranking(star_graph(4))
        assert set(r.scores.tolist()) == {0.0}
        assert r.order[0] == 0  # degree tie-break puts the hub first

    def test_clique_all_zero_id_order(self):
        r = top_candidate_ranking(complete_graph(4))
        assert set(r.scores.tolist()) == {0.0}
        assert r.order.tolist() == [0, 1, 2, 3]

    def test_never_members_sort_last(self):
        g = graph_from_edges([(0, 1)], n=3)  # node 2 isolated, never nominated
        r = top_candidate_ranking(g)
        assert np.isinf(r.scores[2])
        assert r.order.tolist()[-1] == 2

    def test_membership_matrix_tracks_sets(self):
        g = path_graph(4)
        r = top_candidate_ranking(g, grid=(0.0, 0.6, 1.0))
        assert r.membership.shape == (3, 4)
        assert r.membership[0].tolist() == [False, True, True, False]
        assert r.membership[1].tolist() == [True, True, True, True]

    def test_grid_validation(self):
        g = path_graph(3)
        for bad in ((), (0.2, 0.1), (0.5, 0.5), (-0.1, 0.5), (0.5, 1.2)):
            with pytest.raises(ValueError):
                top_candidate_ranking(g, grid=bad)

    def test_permutation_equivariance_of_expert_sets(self, rng):
        n = 30
        edges = random_gnp_edges(n, 0.12, rng)
        g = graph_from_edges(edges, n)
        perm = rng.permutation(n)
        gp = graph_from_edges([(perm[u], perm[v]) for u, v in edges], n)
        for alpha in (0.0, 0.4, 1.0):
            mask = stable_expert_set(g, alpha).mask
            maskp = stable_expert_set(gp, alpha).mask
            assert np.array_equal(maskp[perm], mask)

    def test_csv_exports(self, tmp_path):
        g = path_graph(4)
        r = top_candidate_ranking(g, grid=(0.0, 1.0))
        r.write_csv(tmp_path / "r.csv", g.labels)
        lines = (tmp_path / "r.csv").read_text().splitlines()
        assert lines[0] == "label,score_alpha,rank"
        assert lines[1].startswith("1,0.0,1")
        r.write_membership_csv(tmp_path / "m.csv", g.labels)
        head = (tmp_path / "m.csv").read_text().splitlines()[0]
        assert head == "label,alpha_0.0,alpha_1.0"
