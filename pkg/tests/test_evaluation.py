import json

import numpy as np
import pytest

from bdat.evaluation import (
    TABLE_HEADER,
    Histograms,
    ScoreTable,
    TimingReport,
    decision_rates,
    desk_spec,
    enroll_dataset,
    format_table,
    genuine_imposter_histograms,
    stage_score_table,
    timing_report,
)
from bdat.pipeline import StageConfig
from bdat.vectors import FeatureVector, SynthSpec, synth_classes

CFG = StageConfig(d=128, k=32, m=6, t=5, epochs=200)


@pytest.fixture(scope="module")
def small_set():
    return synth_classes(desk_spec(1, num_classes=4, samples_per_class=6, dim=128))


@pytest.fixture(scope="module")
def small_bench(small_set):
    return enroll_dataset(small_set, CFG, seed=1)


def test_format_table_reproduces_published_row():
    text = format_table(TABLE_HEADER, [["Image1", 184, 182, 226, 193]])
    header, row = text.splitlines()
    assert row.split() == ["Image1", "184", "182", "226", "193"]
    assert header.startswith("Images  Feature Vector")
    # numbers are right-aligned under their headers
    for name, value in zip(TABLE_HEADER[1:], ["184", "182", "226", "193"]):
        end = header.index(name) + len(name)
        assert row[end - len(value):end] == value


def test_score_table_contents(small_bench):
    table = stage_score_table(small_bench)
    assert len(table.rows) == 4 * 3
    for r in table.rows:
        assert 0 <= r.feature_score <= 256 and 0 <= r.cancelable_score <= 256
        assert 0 <= r.binary_score <= CFG.n_total
    text = table.render()
    assert text.splitlines()[0].split("  ")[0] == "Images"
    assert "normalized means" in text
    again = ScoreTable.from_dict(json.loads(table.to_json()))
    assert again.to_json() == table.to_json()


def test_decision_rates_counts(small_bench):
    rates = decision_rates(small_bench)
    assert rates.genuine_trials == 4 * 3
    assert rates.imposter_trials == 4 * 3 * 3
    assert rates.genuine_accept_rate >= 0.9
    assert rates.imposter_accept_rate == 0.0


def test_benchmark_is_seeded(small_set):
    a = stage_score_table(small_set, CFG, seed=4)
    b = stage_score_table(small_set, CFG, seed=4)
    assert a.to_json() == b.to_json()


def test_histogram_counting_identity(small_set):
    h = genuine_imposter_histograms(small_set, CFG, seed=2)
    n = len(small_set)
    assert h.genuine_pairs + h.imposter_pairs == n * (n - 1) // 2
    assert h.genuine_pairs == 4 * (6 * 5 // 2)
    assert len(h.genuine) == len(h.imposter) == CFG.n_total + 1
    back = Histograms.from_dict(json.loads(h.to_json()))
    assert np.array_equal(back.genuine, h.genuine) and np.array_equal(back.imposter, h.imposter)
    assert h.to_csv().splitlines()[0] == "score,genuine,imposter"
    # genuine mass sits far above the imposter mass
    scores = np.arange(CFG.n_total + 1)
    assert (scores @ h.genuine) / h.genuine_pairs > (scores @ h.imposter) / h.imposter_pairs + 15


def test_histogram_identical_samples_is_point_mass():
    v = np.random.default_rng(0).normal(size=128)
    h = genuine_imposter_histograms([FeatureVector("a", v), FeatureVector("a", v)], CFG)
    assert h.genuine[CFG.n_total] == 1 and h.genuine_pairs == 1 and h.imposter_pairs == 0


def test_histogram_needs_two_samples():
    with pytest.raises(ValueError):
        genuine_imposter_histograms([FeatureVector("a", np.ones(128))], CFG)


def test_imposter_mode_near_half_length():
    data = synth_classes(desk_spec(3, num_classes=6, samples_per_class=4, dim=128))
    h = genuine_imposter_histograms(data, CFG, seed=3)
    n = CFG.n_total
    assert abs(int(np.argmax(h.imposter)) - n / 2) <= 3 * np.sqrt(n) / 2


def test_timing_report(small_set):
    rep = timing_report(small_set, CFG, repetitions=1)
    assert rep.enroll_total.spread is None and "n/a" in rep.render()
    rep = timing_report(small_set, CFG, repetitions=5)
    assert rep.repetitions == 5
    assert set(rep.verify) >= {"projection_matrix", "project", "binarize", "commitment"}
    assert rep.verify_stage_sum.median <= rep.verify_total.median * 1.05 + 1e-4
    assert all(s.median >= 0 for s in rep.enroll.values())
    again = TimingReport.from_dict(json.loads(rep.to_json()))
    assert again.to_json() == rep.to_json()
    with pytest.raises(ValueError):
        timing_report(small_set, CFG, repetitions=0)


def test_desk_spec_defaults():
    spec = desk_spec(9)
    assert isinstance(spec, SynthSpec)
    assert (spec.num_classes, spec.samples_per_class, spec.dim) == (10, 10, 128)
