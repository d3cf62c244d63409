import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bdat.evaluation import PRESETS, SecurityReport, brute_force_bits, security_report
from bdat.pipeline import StageConfig


def test_published_counts():
    rep = security_report("paper-novel")
    assert rep["random projection"].brute_force_cost == "2^3771"
    assert rep["fuzzy commitment"].brute_force_cost == "2^11339"
    assert rep["full algorithm"].brute_force_cost == "2^6799"
    assert rep["BDA"].kc is None and rep["BDA"].brute_force_cost == "unstated"


def test_ratings_row_for_row():
    rep = security_report("paper-novel")
    assert [s.stage for s in rep.stages] == ["random projection", "BDA", "fuzzy commitment",
                                             "full algorithm"]
    assert [s.brute_force_rating for s in rep.stages] == ["High"] * 4
    assert [s.smart_attack_rating for s in rep.stages] == ["Low", "High", "High", "High"]


def test_render_and_json():
    rep = security_report("paper-novel")
    text = rep.render()
    for token in ("2^3771", "2^11339", "2^6799", "unstated"):
        assert token in text
    assert SecurityReport.from_dict(json.loads(rep.to_json())) == rep


@given(st.integers(1, 10**6))
def test_bits_are_length_minus_one(kc):
    assert brute_force_bits(kc) == kc - 1
    assert security_report({"x": kc})["x"].brute_force_cost == f"2^{kc - 1}"


def test_invalid_length_and_preset():
    with pytest.raises(ValueError):
        brute_force_bits(0)
    with pytest.raises(ValueError):
        security_report("no-such-preset")
    assert "paper-novel" in PRESETS


def test_config_report_uses_template_lengths():
    rep = security_report(StageConfig(k=32, m=6, t=5, blocks=2))
    assert rep["random projection"].kc == 32
    assert rep["full algorithm"].kc == 126
