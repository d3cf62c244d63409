import math
import warnings

import numpy as np
import pytest

from bdat.vectors import (
    FeatureFormatError,
    FeatureVector,
    SynthSpec,
    class_centers,
    group_by_label,
    load_features,
    real_match_score,
    synth_classes,
    write_features,
)


def _sample():
    rng = np.random.default_rng(3)
    return [FeatureVector(f"user{i % 2}", rng.normal(size=5)) for i in range(4)] + [
        FeatureVector("edge", np.array([0.1, -0.0, 1e-300, 1e300, 1 / 3]))
    ]


@pytest.mark.parametrize("fmt", ["csv", "packed"])
def test_roundtrip_is_exact(tmp_path, fmt):
    vecs = _sample()
    path = tmp_path / f"f.{fmt}"
    write_features(vecs, path, fmt)
    back = load_features(path, fmt)
    assert back == vecs
    assert all(np.array_equal(a.values, b.values) for a, b in zip(vecs, back))


def test_csv_is_canonical(tmp_path):
    path = tmp_path / "a.csv"
    write_features(_sample(), path)
    first = path.read_bytes()
    write_features(load_features(path), path)
    assert path.read_bytes() == first


def test_ragged_csv_names_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,1,2,3\nb,1,2\n")
    with pytest.raises(FeatureFormatError, match="row 2"):
        load_features(path)


@pytest.mark.parametrize("text", ["a,1,nan\n", "a,1,inf\n", "a,1,x\n", ""])
def test_csv_rejects_bad_values(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(FeatureFormatError):
        load_features(path)


def test_packed_detects_corruption(tmp_path):
    path = tmp_path / "f.bin"
    write_features(_sample(), path, "packed")
    data = bytearray(path.read_bytes())
    data[20] ^= 0x01
    path.write_bytes(bytes(data))
    with pytest.raises(FeatureFormatError):
        load_features(path, "packed")
    path.write_bytes(b"XXXX" + bytes(data[4:]))
    with pytest.raises(FeatureFormatError):
        load_features(path, "packed")


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        load_features(tmp_path / "x", "yaml")


def test_feature_vector_is_immutable():
    v = FeatureVector("a", [1.0, 2.0])
    with pytest.raises(ValueError):
        v.values[0] = 5.0
    with pytest.raises(ValueError):
        FeatureVector("a", [1.0, float("nan")])


def test_synth_shape_labels_and_determinism():
    spec = SynthSpec(seed=1, num_classes=4, samples_per_class=3, dim=7)
    a = synth_classes(spec)
    assert len(a) == 12 and all(v.dim == 7 for v in a)
    assert [v.label for v in a[:4]] == ["c000", "c000", "c000", "c001"]
    assert a == synth_classes(spec)
    assert a != synth_classes(SynthSpec(seed=2, num_classes=4, samples_per_class=3, dim=7))


def test_synth_class_means_near_centers():
    spec = SynthSpec(seed=5, num_classes=6, samples_per_class=10, dim=200, within_sigma=0.3)
    centers = class_centers(spec)
    groups = group_by_label(synth_classes(spec))
    bound = 4 * spec.within_sigma / math.sqrt(spec.samples_per_class)
    for c, (label, vecs) in enumerate(sorted(groups.items())):
        mean = np.mean([v.values for v in vecs], axis=0)
        assert np.mean(np.abs(mean - centers[c]) <= bound) >= 0.99


def test_synth_zero_sigma_collapses_and_overlap_warns():
    spec = SynthSpec(seed=0, num_classes=2, samples_per_class=3, dim=4, within_sigma=0.0)
    groups = group_by_label(synth_classes(spec))
    for vecs in groups.values():
        assert all(np.array_equal(v.values, vecs[0].values) for v in vecs)
    with pytest.warns(UserWarning):
        synth_classes(SynthSpec(seed=0, num_classes=2, samples_per_class=2, dim=3, within_sigma=2.0))
    with pytest.raises(ValueError):
        synth_classes(SynthSpec(seed=0, num_classes=0, samples_per_class=2, dim=3))


def test_real_match_score_examples():
    assert real_match_score([1, 0], [1, 1]) == 181
    assert real_match_score([1, 2, 3], [1, 2, 3]) == 256
    assert real_match_score([1, 0], [-1, 0]) == 0
    assert real_match_score([0, 0], [1, 1]) == 0
    assert real_match_score([1, 0], [0, 1]) == 0
    with pytest.raises(ValueError):
        real_match_score([1, 2], [1, 2, 3])


def test_real_match_score_properties():
    rng = np.random.default_rng(0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for _ in range(200):
            a, b = rng.normal(size=(2, 16))
            s = real_match_score(a, b)
            assert 0 <= s <= 256
            assert s == real_match_score(b, a)
            assert s == real_match_score(3.5 * a, 0.2 * b)
