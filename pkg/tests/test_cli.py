import json

import jsonschema
import numpy as np
import pytest

from bdat.cli import main
from bdat.schemas import BY_NAME
from bdat.vectors import FeatureVector, SynthSpec, group_by_label, synth_classes, write_features

SMALL_CONFIG = {"d": 128, "k": 32, "m": 6, "t": 5}


@pytest.fixture
def files(tmp_path, monkeypatch):
    monkeypatch.setenv("BDAT_STORE", str(tmp_path / "store"))
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    spec = SynthSpec(seed=0, num_classes=2, samples_per_class=8, dim=128, within_sigma=0.2)
    groups = group_by_label(synth_classes(spec))
    alice, bob = groups["c000"], groups["c001"]
    paths = {}
    for name, vecs in [("alice_train", alice[:4]), ("alice_probe", alice[4:]),
                       ("bob_train", bob[:4]), ("bob_probe", bob[4:])]:
        paths[name] = tmp_path / f"{name}.csv"
        write_features(vecs, paths[name])
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def validated(text):
    doc = json.loads(text)
    jsonschema.validate(doc, BY_NAME[doc["schema"]])
    return doc


def test_enroll_verify_exit_codes(files, capsys):
    code, out, err = run(capsys, "enroll", "alice", files["alice_train"], "--seed", 1)
    assert code == 0 and "enrolled alice" in out and "seeds used" not in err
    assert run(capsys, "verify", "alice", files["alice_probe"])[0:2] == (0, "ACCEPT\n")
    assert run(capsys, "verify", "alice", files["bob_probe"], "--row", 2)[0:2] == (1, "REJECT\n")
    assert run(capsys, "enroll", "alice", files["alice_train"])[0] == 2
    assert run(capsys, "verify", "nobody", files["alice_probe"])[0] == 2
    assert run(capsys, "revoke", "nobody", files["alice_train"])[0] == 2
    assert run(capsys, "verify", "alice", files["alice_probe"], "--row", 99)[0] == 3
    assert run(capsys, "verify", "alice", files["alice_probe"].with_suffix(".missing"))[0] == 3
    assert run(capsys, "frobnicate")[0] == 3


def test_fresh_seeds_are_reported(files, capsys):
    code, _, err = run(capsys, "enroll", "bob", files["bob_train"])
    assert code == 0 and "seeds used" in err


def test_revoke_changes_record(files, capsys, tmp_path):
    run(capsys, "enroll", "alice", files["alice_train"], "--seed", 1)
    rec = next((tmp_path / "store" / "records").iterdir())
    before = rec.read_bytes()
    code, out, _ = run(capsys, "revoke", "alice", files["alice_train"], "--seed", 2)
    assert code == 0 and out.startswith("revoked alice")
    assert rec.read_bytes() != before
    assert run(capsys, "verify", "alice", files["alice_probe"])[0] == 0


def test_seeded_enroll_is_byte_identical(files, capsys, tmp_path):
    blobs = []
    for store in ("s1", "s2"):
        assert run(capsys, "--store", tmp_path / store, "enroll", "alice",
                   files["alice_train"], "--seed", 7)[0] == 0
        blobs.append(next((tmp_path / store / "records").iterdir()).read_bytes())
    assert blobs[0] == blobs[1]


def test_mixed_labels_and_bad_dimension(files, capsys, tmp_path):
    mixed = tmp_path / "mixed.csv"
    mixed.write_text(files["alice_train"].read_text() + files["bob_train"].read_text())
    assert run(capsys, "enroll", "x", mixed)[0] == 3
    short = tmp_path / "short.csv"
    write_features([FeatureVector("x", np.ones(5))], short)
    assert run(capsys, "enroll", "x", short)[0] == 3


def test_bad_config_file(files, capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"d": 128, "k": 500}')
    assert run(capsys, "--config", cfg, "enroll", "a", files["alice_train"])[0] == 3
    cfg.write_text(json.dumps(SMALL_CONFIG))
    assert run(capsys, "--config", cfg, "enroll", "a", files["alice_train"], "--seed", 3)[0] == 0


def test_json_output_matches_text_and_schema(files, capsys):
    code, out, _ = run(capsys, "--format", "json", "enroll", "alice", files["alice_train"],
                       "--seed", 1)
    doc = validated(out)
    assert code == 0 and doc["user"] == "alice" and doc["n_total"] == 63
    _, text, _ = run(capsys, "verify", "alice", files["alice_probe"], "--row", 1)
    code, out, _ = run(capsys, "--format", "json", "verify", "alice", files["alice_probe"],
                       "--row", 1)
    doc = validated(out)
    assert doc["decision"] == text.strip() == "ACCEPT" and code == 0


def test_security_command(capsys):
    code, out, _ = run(capsys, "security", "--preset", "paper-novel")
    assert code == 0 and "2^3771" in out and "2^11339" in out and "2^6799" in out
    code, out, _ = run(capsys, "--format", "json", "security", "--preset", "paper-novel")
    assert [s["brute_force_bits"] for s in validated(out)["stages"]] == [3771, None, 11339, 6799]
    code, out, _ = run(capsys, "security", "--kc", "100")
    assert code == 0 and "2^99" in out
    assert run(capsys, "security", "--kc", "0")[0] == 3
    assert run(capsys, "security", "--preset", "nope")[0] == 3
    assert run(capsys, "security", "--kc", "abc")[0] == 3


def test_bench_is_reproducible(capsys, tmp_path):
    args = ["bench", "--classes", 3, "--samples", 4, "--seed", 5, "--repetitions", 0]
    outputs = []
    for name in ("a", "b"):
        code, _, _ = run(capsys, *args, "--out", tmp_path / name)
        assert code == 0
        outputs.append({f.name: f.read_bytes() for f in (tmp_path / name).iterdir()
                        if f.name != "summary.json"})
    assert outputs[0] == outputs[1]
    assert set(outputs[0]) == {"score_table.json", "score_table.txt", "histograms.json",
                               "histograms.csv"}
    for f in ("score_table.json", "histograms.json", "summary.json"):
        validated((tmp_path / "a" / f).read_text())


def test_bench_with_timing(capsys, tmp_path):
    code, out, _ = run(capsys, "--format", "json", "bench", "--classes", 2, "--samples", 2,
                       "--repetitions", 2, "--out", tmp_path / "o")
    assert code == 0
    summary = validated(out)
    validated((tmp_path / "o" / "timing.json").read_text())
    assert summary["files"]["timing"].endswith("timing.json")


def test_bench_rejects_bad_spec(capsys, tmp_path):
    assert run(capsys, "bench", "--classes", 0, "--out", tmp_path / "o")[0] == 3
    assert run(capsys, "bench", "--samples", 1, "--out", tmp_path / "o")[0] == 3
