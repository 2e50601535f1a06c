import random

import pytest

from pluveto.bench import (
    EuclideanPopulation,
    sample_population,
    ExperimentConfig,
    adaptive_peer_veto,
    adaptive_winner_set,
    convex_hull_vertices,
    generate_euclidean,
    parse_config,
    peer_selection,
    potential_winners,
    report_to_csv,
    run_experiment,
)
from pluveto.core import Election, plurality_scores, top
from pluveto.rules import plurality_veto


class TestGenerateEuclidean:
    def test_single_point(self):
        e, d = generate_euclidean(1, 1, 1, "uniform", 0)
        assert e.n == e.m == 1
        assert d[0][0] >= 0

    def test_determinism(self):
        a = generate_euclidean(6, 4, 3, "gaussian", 99)
        b = generate_euclidean(6, 4, 3, "gaussian", 99)
        assert a[0] == b[0] and a[1].d == b[1].d

    def test_different_seeds_differ(self):
        a = generate_euclidean(6, 4, 2, "gaussian", 1)
        b = generate_euclidean(6, 4, 2, "gaussian", 2)
        assert a[1].d != b[1].d

    def test_validator_and_consistency_property(self):
        for seed in range(200):
            e, d = generate_euclidean(
                1 + seed % 5, 1 + seed % 4, 1 + seed % 3, "uniform", seed
            )
            assert d.is_valid()
            assert d.consistent_with(e)

    def test_unknown_distribution(self):
        with pytest.raises(ValueError):
            generate_euclidean(2, 2, 2, "cauchy", 0)

    def test_rankings_sorted_by_distance(self):
        e, d = generate_euclidean(5, 5, 2, "gaussian", 4)
        for v in range(e.n):
            dists = [d[v][c] for c in e.rankings[v]]
            assert dists == sorted(dists)

    def test_population_exposes_embedding(self):
        population = sample_population(4, 3, 2, "uniform", 12)
        assert len(population.voters) == 4
        assert len(population.candidates) == 3
        assert all(len(p) == 2 for p in population.voters)
        e, d = generate_euclidean(4, 3, 2, "uniform", 12)
        assert population.election() == e
        assert population.metric().d == d.d

    def test_index_breaks_distance_ties(self):
        population = EuclideanPopulation(
            1, voters=((0.0,),), candidates=((1.0,), (-1.0,), (1.0,)), seed=0
        )
        assert population.election().rankings == ((0, 1, 2),)


class TestPeerSelection:
    def test_two_agents(self):
        e, d, _ = peer_selection([(0.0, 0.0), (1.0, 0.0)])
        assert e.rankings == ((0, 1), (1, 0))

    def test_collinear_scalars(self):
        e, d, _ = peer_selection([0, 1, 3])
        assert e.rankings[1] == (1, 0, 2)
        assert d[1] == (1.0, 0.0, 2.0)

    def test_every_agent_tops_herself(self):
        e, _, _ = peer_selection(7, seed=3)
        assert all(top(e, v) == v for v in range(e.n))
        assert plurality_scores(e) == (1,) * e.n

    def test_sampled_defaults_deterministic(self):
        a = peer_selection(5, seed=8)
        b = peer_selection(5, seed=8)
        assert a[0] == b[0]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            peer_selection([])


class TestAdaptiveVariant:
    def test_start_agent_never_wins(self):
        for seed in range(30):
            e, _, _ = peer_selection(2 + seed % 5, seed=seed)
            for start in range(e.n):
                winner, order = adaptive_peer_veto(e, start)
                assert winner != start
                assert order[0] == start
                assert sorted(order) == list(range(e.n))

    def test_single_agent(self):
        e, _, _ = peer_selection([0.0])
        assert adaptive_peer_veto(e, 0) == (0, (0,))

    def test_winner_set_at_least_two(self):
        for seed in range(40):
            e, _, _ = peer_selection(2 + seed % 5, seed=1000 + seed)
            assert len(adaptive_winner_set(e)) >= 2

    def test_requires_peer_election(self, demo):
        with pytest.raises(ValueError):
            adaptive_peer_veto(demo, 0)


class TestPotentialWinners:
    def test_unanimous(self):
        e = Election(tuple(((1, 0, 2),) * 3))
        assert potential_winners(e, "exact") == {1}
        assert potential_winners(e, "superset") >= {1}

    def test_strict_majority_unique_winner(self):
        e = Election(((1, 0, 2), (1, 2, 0), (1, 0, 2), (0, 2, 1), (2, 0, 1)))
        assert potential_winners(e, "exact") == {1}

    def test_exact_subset_of_superset(self):
        rng = random.Random(6)
        for _ in range(40):
            n, m = rng.randint(1, 6), rng.randint(1, 5)
            e = Election(
                tuple(tuple(rng.sample(range(m), m)) for _ in range(n))
            )
            assert potential_winners(e, "exact") <= potential_winners(e, "superset")

    def test_exact_capped(self):
        e = Election(tuple(((0, 1),) * 9))
        with pytest.raises(ValueError, match="capped"):
            potential_winners(e, "exact")
        assert potential_winners(e, "superset") == {0}

    def test_unknown_mode(self, demo):
        with pytest.raises(ValueError):
            potential_winners(demo, "guess")


class TestConvexHull:
    def test_triangle_with_interior_points(self):
        pts = [(0, 0), (2, 0), (1, 1), (1, 0.2), (0.5, 0.3)]
        assert convex_hull_vertices(pts) == {0, 1, 2}

    def test_collinear_middle_not_a_vertex(self):
        pts = [(0, 0), (1, 0), (2, 0), (1, 1)]
        assert convex_hull_vertices(pts) == {0, 2, 3}

    def test_tiny_sets(self):
        assert convex_hull_vertices([(0, 0)]) == {0}
        assert convex_hull_vertices([(0, 0), (1, 1)]) == {0, 1}

    def test_vetoed_agent_is_hull_vertex(self):
        rng = random.Random(77)
        for _ in range(40):
            e, _, pts = peer_selection(rng.randint(1, 8), seed=rng.randint(0, 10**6))
            order = tuple(rng.sample(range(e.n), e.n))
            for r in plurality_veto(e, order).rounds:
                active_pts = [pts[c] for c in sorted(r.active)]
                hull = convex_hull_vertices(active_pts)
                assert sorted(r.active).index(r.vetoed) in hull


class TestExperiments:
    CFG = """
    # smoke config
    rules = plurality_veto, randomized_veto(1), random_dictatorship, committee_select
    instances = 8
    voters = 7
    candidates = 4
    dim = 2
    distribution = uniform
    seed = 5
    committee_size = 2
    committee_rank = 2
    """

    def test_parse_config(self):
        cfg = parse_config(self.CFG)
        assert cfg.rules[0] == "plurality_veto"
        assert cfg.instances == 8 and cfg.voters == 7

    def test_unknown_rule_rejected(self):
        with pytest.raises(ValueError, match="unknown rule"):
            parse_config("rules = borda\ninstances = 1\nvoters = 2\ncandidates = 2\n")

    def test_missing_keys_rejected(self):
        with pytest.raises(ValueError, match="missing"):
            parse_config("rules = plurality_veto\n")

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown config key"):
            parse_config("colour = red\n")

    def test_ratios_at_least_one(self):
        report = run_experiment(parse_config(self.CFG))
        assert all(r.ratio >= 1.0 - 1e-12 for r in report.records)

    def test_reports_bit_identical(self):
        cfg = parse_config(self.CFG)
        a = report_to_csv(run_experiment(cfg))
        b = report_to_csv(run_experiment(cfg))
        assert a == b

    def test_csv_shape(self):
        cfg = parse_config(self.CFG)
        lines = report_to_csv(run_experiment(cfg)).splitlines()
        assert lines[0] == "seed,rule,winner,cost,opt_cost,ratio"
        assert len(lines) == 1 + cfg.instances * len(cfg.rules)

    def test_single_voter_instance_ratio_one(self):
        cfg = ExperimentConfig(
            rules=("plurality_veto",), instances=3, voters=1, candidates=3,
        )
        report = run_experiment(cfg)
        assert all(r.ratio == 1.0 for r in report.records)

    def test_randomized_expectation_vs_manual(self):
        cfg = ExperimentConfig(
            rules=("random_dictatorship",), instances=1, voters=4, candidates=3,
            seed=2,
        )
        report = run_experiment(cfg)
        rec = report.records[0]
        e, d = generate_euclidean(4, 3, 2, "gaussian", 2 * 1_000_003)
        plu = plurality_scores(e)
        expected = sum(
            plu[c] / 4 * sum(d[v][c] for v in range(4)) for c in range(3)
        )
        assert rec.cost == pytest.approx(expected)
