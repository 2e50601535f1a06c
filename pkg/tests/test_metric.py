import pytest

from pluveto.bench import generate_euclidean
from pluveto.core import Election
from pluveto.certify.metric import Metric, metric_from_csv, metric_to_csv, social_cost


class TestMetricValidation:
    def test_euclidean_instances_validate(self):
        for seed in range(20):
            _, d = generate_euclidean(4, 3, 2, "gaussian", seed)
            d.validate()

    def test_negative_entry_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            Metric(((1.0, -0.5),)).validate()

    def test_triangle_violation_caught(self):
        # d(0,0) = 10 but the relay through voter 1 and candidate 1 costs 3
        d = Metric(((10.0, 1.0), (1.0, 1.0)))
        with pytest.raises(ValueError, match="triangle"):
            d.validate()
        assert not d.is_valid()

    def test_zero_distances_are_legal(self):
        Metric(((0.0, 0.0), (0.0, 0.0))).validate()

    def test_tolerance_absorbs_float_noise(self):
        d = Metric(((1.0 + 1e-12, 1.0), (1.0, 1.0)))
        d.validate()

    def test_consistency(self):
        e = Election(((0, 1), (1, 0)))
        good = Metric(((1.0, 2.0), (3.0, 0.5)))
        assert good.consistent_with(e)
        bad = Metric(((2.0, 1.0), (3.0, 0.5)))
        assert not bad.consistent_with(e)

    def test_consistency_checks_shape(self):
        e = Election(((0, 1), (1, 0)))
        assert not Metric(((1.0, 2.0),)).consistent_with(e)

    def test_all_positive(self):
        assert Metric(((1.0, 2.0),)).all_positive()
        assert not Metric(((0.0, 2.0),)).all_positive()


class TestMetricIO:
    def test_social_cost(self):
        d = Metric(((1.0, 2.0), (3.0, 4.0)))
        assert social_cost(0, d) == 4.0
        assert social_cost(1, d) == 6.0

    def test_csv_round_trip(self):
        _, d = generate_euclidean(3, 4, 2, "uniform", 7)
        assert metric_from_csv(metric_to_csv(d)).d == d.d

    def test_ragged_rows_rejected(self):
        with pytest.raises(ValueError):
            Metric(((1.0, 2.0), (1.0,)))
