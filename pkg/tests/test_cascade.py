import itertools
from dataclasses import replace

import pytest

from ladrating import (
    CountryRecord,
    DataFormatError,
    DEFAULT_SCALE,
    Dataset,
    MiningConfig,
    RatingScale,
    classify,
    key_variables,
    suggest_rating,
    train_cascade,
)
from ladrating.data import UNCLASSIFIED_POLICY

UNCLASSIFIED_SCALE = RatingScale(DEFAULT_SCALE.classes, fallback_policy=UNCLASSIFIED_POLICY)


def rec(country, values, rating=None):
    return CountryRecord(country, 2012, values, rating)


def three_class_dataset():
    return Dataset(
        records=(
            rec("a1", {"G": 100.0}, "AAA"),
            rec("a2", {"G": 95.0}, "AAA"),
            rec("b1", {"G": 50.0}, "A"),
            rec("b2", {"G": 55.0}, "A"),
            rec("c1", {"G": 10.0}, "BM"),
            rec("c2", {"G": 12.0}, "BM"),
        )
    )


def nested_16_dataset():
    records = []
    for k, label in enumerate(DEFAULT_SCALE.classes, start=1):
        base = (17 - k) * 10.0
        records.append(rec(f"x{k}", {"G": base}, label))
        records.append(rec(f"y{k}", {"G": base + 2.0}, label))
    return Dataset(records=tuple(records))


class TestTrain:
    def test_sparse_classes_leave_empty_stages(self):
        model = train_cascade(three_class_dataset())
        nontrivial = [s.rating_index for s in model.stages if s.patterns]
        assert nontrivial == [1, 6]
        assert all(not model.stages[k - 1].patterns for k in range(2, 6))

    def test_nested_classes_give_one_literal_stages(self):
        model = train_cascade(nested_16_dataset())
        for stage in model.stages:
            assert len(stage.patterns) == 1
            (pattern,) = stage.patterns
            assert [l.indicator for l in pattern.literals] == ["G"]
            assert pattern.literals[0].direction == ">="

    def test_single_class_errors(self):
        ds = Dataset(records=(rec("a", {"G": 1.0}, "AAA"), rec("b", {"G": 2.0}, "AAA")))
        with pytest.raises(DataFormatError):
            train_cascade(ds)

    def test_cumulative_positive_sets_are_nested(self):
        ds = nested_16_dataset()
        model = train_cascade(ds)
        matched_prev: set = set()
        for stage in model.stages:
            matched = {r.record_id for r in ds.records if stage.matches(r)}
            assert matched_prev <= matched
            matched_prev = matched

    def test_training_labels_reproduced(self):
        ds = nested_16_dataset()
        model = train_cascade(ds)
        for r in ds.records:
            assert classify(model, r) == r.observed_rating

    def test_deterministic(self):
        a = train_cascade(nested_16_dataset())
        b = train_cascade(nested_16_dataset())
        assert a == b


class TestClassify:
    def test_first_match_wins(self):
        model = train_cascade(three_class_dataset())
        # G=100 satisfies the stage-1 DNF and (being cumulative) stage 6 too
        assert model.stages[5].matches(rec("probe", {"G": 100.0}))
        assert classify(model, rec("probe", {"G": 100.0})) == "AAA"

    def test_fallback_to_last(self):
        model = train_cascade(three_class_dataset())
        assert classify(model, rec("probe", {"G": -5.0})) == "BM"

    def test_unclassified_policy(self):
        ds = replace(three_class_dataset(), scale=UNCLASSIFIED_SCALE)
        model = train_cascade(ds)
        assert classify(model, rec("probe", {"G": -5.0})) is None

    def test_pattern_order_within_stage_is_irrelevant(self):
        from ladrating import ClassDnf

        model = train_cascade(nested_16_dataset())
        probes = [rec(f"p{v}", {"G": float(v)}) for v in range(0, 180, 7)]
        baseline = [classify(model, p) for p in probes]
        shuffled = replace(
            model,
            stages=tuple(
                ClassDnf(s.rating_index, tuple(reversed(s.patterns)), s.uncovered, s.relaxations)
                for s in model.stages
            ),
        )
        assert [classify(shuffled, p) for p in probes] == baseline


class TestSuggest:
    def test_suggestion_matches_classify(self):
        model = train_cascade(three_class_dataset())
        unrated = rec("new", {"G": 52.0})
        assert suggest_rating(model, unrated) == classify(model, unrated)

    def test_all_missing_is_unclassified(self):
        ds = replace(three_class_dataset(), scale=UNCLASSIFIED_SCALE)
        model = train_cascade(ds)
        assert suggest_rating(model, rec("new", {})) is None

    def test_dominating_record_is_top_class(self):
        model = train_cascade(nested_16_dataset())
        assert suggest_rating(model, rec("new", {"G": 1000.0})) == "AAA"

    def test_rated_record_rejected(self):
        model = train_cascade(three_class_dataset())
        with pytest.raises(DataFormatError):
            suggest_rating(model, rec("new", {"G": 1.0}, "AAA"))


class TestKeyVariables:
    def test_tree_2012_aaa_group_is_all_g(self, tree_2012_model):
        report = key_variables(tree_2012_model)
        count, share = report.groups["AAA"]["G"]
        assert share == 1.0

    def test_empty_model_gives_empty_report(self):
        from ladrating import CascadeModel, ClassDnf

        model = CascadeModel(
            scale=DEFAULT_SCALE,
            year=0,
            stages=tuple(ClassDnf(k, ()) for k in range(1, 16)),
        )
        report = key_variables(model)
        assert report.per_stage == {}
        assert all(usage == {} for usage in report.groups.values())

    def test_single_pattern_counts(self):
        from ladrating import CascadeModel, ClassDnf, Literal, Pattern

        pattern = Pattern(literals=(Literal("G", ">=", 5.0), Literal("I", "<=", 2.0)))
        stages = [ClassDnf(k, ()) for k in range(1, 16)]
        stages[0] = ClassDnf(1, (pattern,))
        model = CascadeModel(scale=DEFAULT_SCALE, year=0, stages=tuple(stages))
        assert key_variables(model).per_stage["AAA"] == {
            "G": (1, 1.0),
            "I": (1, 1.0),
        }
