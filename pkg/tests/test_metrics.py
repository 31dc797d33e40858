import pytest
from hypothesis import given
from hypothesis import strategies as st

from covsent import metrics

# published evaluation-table fixture used across several checks
CM = metrics.ConfusionMatrix2(tp=8298, fp=1941, fn=1946, tn=7924)


class TestConfusion:
    def test_one_of_each(self):
        cm = metrics.confusion([(1.0, 1.0), (1.0, 0.0), (0.0, 1.0), (0.0, 0.0)])
        assert (cm.tp, cm.fp, cm.fn, cm.tn) == (1, 1, 1, 1)

    def test_empty(self):
        cm = metrics.confusion([])
        assert (cm.tp, cm.fp, cm.fn, cm.tn) == (0, 0, 0, 0)

    def test_all_correct_positives(self):
        cm = metrics.confusion([(1.0, 1.0)] * 5)
        assert (cm.tp, cm.fp, cm.fn, cm.tn) == (5, 0, 0, 0)

    def test_neutral_label_rejected(self):
        with pytest.raises(ValueError):
            metrics.confusion([(0.5, 1.0)])
        with pytest.raises(ValueError):
            metrics.confusion([(1.0, 0.5)])

    def test_total_matches_sample_count(self):
        pairs = [(1.0, 0.0)] * 3 + [(0.0, 0.0)] * 4
        assert metrics.confusion(pairs).total == 7


class TestReport:
    def test_regenerates_published_table(self):
        rep = metrics.report(CM)
        r2 = metrics.round2
        assert r2(rep.positive.precision) == 0.81
        assert r2(rep.positive.recall) == 0.81
        assert r2(rep.positive.f1) == 0.81
        assert rep.positive.support == 10239
        assert r2(rep.negative.precision) == 0.80
        assert r2(rep.negative.recall) == 0.80
        assert r2(rep.negative.f1) == 0.80
        assert rep.negative.support == 9870
        assert r2(rep.weighted_precision) == 0.81
        assert r2(rep.weighted_recall) == 0.81
        assert r2(rep.weighted_f1) == 0.81
        assert rep.total == 20109

    def test_perfect_classifier(self):
        rep = metrics.report(metrics.ConfusionMatrix2(tp=7, fp=0, fn=0, tn=5))
        for cls in (rep.positive, rep.negative):
            assert cls.precision == 1.0
            assert cls.recall == 1.0
            assert cls.f1 == 1.0
        assert rep.weighted_f1 == 1.0

    def test_degenerate_zero_denominator(self):
        rep = metrics.report(metrics.ConfusionMatrix2(tp=0, fp=0, fn=0, tn=4))
        assert rep.positive.precision == 0.0
        assert rep.positive.degenerate

    def test_supports_sum_to_total(self):
        rep = metrics.report(CM)
        assert rep.positive.support + rep.negative.support == rep.total

    @given(st.lists(st.tuples(st.sampled_from([0.0, 1.0]), st.sampled_from([0.0, 1.0])),
                    min_size=1, max_size=50),
           st.randoms())
    def test_invariant_under_pair_permutation(self, pairs, rnd):
        shuffled = list(pairs)
        rnd.shuffle(shuffled)
        assert metrics.report(metrics.confusion(pairs)) == metrics.report(
            metrics.confusion(shuffled)
        )

    @given(st.tuples(*[st.integers(min_value=0, max_value=500)] * 4))
    def test_weighted_f1_between_class_f1(self, cells):
        cm = metrics.ConfusionMatrix2(*cells)
        rep = metrics.report(cm)
        lo = min(rep.positive.f1, rep.negative.f1)
        hi = max(rep.positive.f1, rep.negative.f1)
        assert lo - 1e-12 <= rep.weighted_f1 <= hi + 1e-12


class TestAccuracy:
    def test_published_matrix(self):
        assert metrics.accuracy(CM) == pytest.approx(16222 / 20109, abs=1e-12)
        assert metrics.accuracy(CM) == pytest.approx(0.8067, abs=1e-4)

    def test_perfect(self):
        assert metrics.accuracy(metrics.ConfusionMatrix2(3, 0, 0, 2)) == 1.0

    def test_all_wrong(self):
        assert metrics.accuracy(metrics.ConfusionMatrix2(0, 3, 2, 0)) == 0.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            metrics.accuracy(metrics.ConfusionMatrix2(0, 0, 0, 0))


def test_round2_half_up():
    assert metrics.round2(0.805) == 0.81
    assert metrics.round2(0.804999) == 0.80
    assert metrics.round2(0.125) == 0.13
