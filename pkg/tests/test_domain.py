import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metersim.domain import (
    BAD_DEGREE,
    BAD_PROFILE_LENGTH,
    BAD_WINDOW,
    MIX_NOT_NORMALIZED,
    UNKNOWN_APPLIANCE,
    UNKNOWN_ARCHETYPE,
    Scenario,
    ScenarioValidationError,
    TimeOfDay,
    load_scenario,
    validate_scenario,
)

from conftest import tiny_doc


def codes_of(excinfo):
    return {issue.code for issue in excinfo.value.issues}


def test_time_of_day_parse_and_format():
    t = TimeOfDay.parse("08:45")
    assert t.minutes == 525
    assert str(t) == "08:45"
    assert TimeOfDay.parse("00:00").minutes == 0
    assert TimeOfDay.parse("23:59").minutes == 1439


@pytest.mark.parametrize("bad", ["24:00", "8:5x", "0800", "12:60", "", "later", "-1:00"])
def test_time_of_day_rejects_bad_text(bad):
    with pytest.raises(ValueError):
        TimeOfDay.parse(bad)


def test_time_of_day_range_checked():
    with pytest.raises(ValueError):
        TimeOfDay(1440)
    with pytest.raises(ValueError):
        TimeOfDay(-1)


def test_sample_config_round_trip(sample_path):
    scenario = load_scenario(sample_path)
    assert isinstance(scenario, Scenario)
    assert scenario.config.population == 1000
    assert scenario.config.ticks_per_day == 144
    ids = {a.id for a in scenario.appliances}
    for arch in scenario.archetypes:
        assert all(app_id in ids for app_id, _n in arch.appliances)


def test_valid_tiny_doc_passes():
    scenario = validate_scenario(tiny_doc())
    assert scenario.config.population == 6
    assert scenario.archetype("resident").awareness == 1.0
    assert scenario.appliance("shifter").deferrable


def test_mix_not_normalized():
    doc = tiny_doc()
    doc["scenario"]["archetype_mix"] = {"resident": 0.7}
    with pytest.raises(ScenarioValidationError) as excinfo:
        validate_scenario(doc)
    assert MIX_NOT_NORMALIZED in codes_of(excinfo)


def test_unknown_archetype_in_mix():
    doc = tiny_doc()
    doc["scenario"]["archetype_mix"] = {"resident": 0.5, "ghost": 0.5}
    with pytest.raises(ScenarioValidationError) as excinfo:
        validate_scenario(doc)
    assert UNKNOWN_ARCHETYPE in codes_of(excinfo)


def test_unknown_appliance_in_bundle():
    doc = tiny_doc()
    doc["archetypes"][0]["appliances"]["flux_capacitor"] = 1
    with pytest.raises(ScenarioValidationError) as excinfo:
        validate_scenario(doc)
    assert UNKNOWN_APPLIANCE in codes_of(excinfo)


def test_bad_window_reversed():
    doc = tiny_doc()
    doc["archetypes"][0]["leave_window"] = ["11:00", "10:00"]
    with pytest.raises(ScenarioValidationError) as excinfo:
        validate_scenario(doc)
    assert BAD_WINDOW in codes_of(excinfo)


def test_bad_window_overlapping_leave_and_return():
    doc = tiny_doc()
    doc["archetypes"][0]["leave_window"] = ["10:00", "14:30"]
    doc["archetypes"][0]["return_window"] = ["14:00", "15:00"]
    with pytest.raises(ScenarioValidationError) as excinfo:
        validate_scenario(doc)
    assert BAD_WINDOW in codes_of(excinfo)


def test_bad_profile_length():
    doc = tiny_doc()
    doc["appliances"][0]["usage_profile"] = [0.5] * 24
    with pytest.raises(ScenarioValidationError) as excinfo:
        validate_scenario(doc)
    assert BAD_PROFILE_LENGTH in codes_of(excinfo)


def test_bad_degree_odd_or_too_large():
    doc = tiny_doc()
    doc["scenario"]["network_mean_degree_K"] = 3
    with pytest.raises(ScenarioValidationError) as excinfo:
        validate_scenario(doc)
    assert BAD_DEGREE in codes_of(excinfo)

    doc = tiny_doc(population=4)
    doc["scenario"]["network_mean_degree_K"] = 4
    with pytest.raises(ScenarioValidationError) as excinfo:
        validate_scenario(doc)
    assert BAD_DEGREE in codes_of(excinfo)


def test_all_violations_reported_together():
    doc = tiny_doc()
    doc["scenario"]["archetype_mix"] = {"resident": 0.4, "ghost": 0.4}
    doc["appliances"][0]["usage_profile"] = [0.5] * 3
    doc["archetypes"][0]["leave_window"] = ["11:00", "10:00"]
    with pytest.raises(ScenarioValidationError) as excinfo:
        validate_scenario(doc)
    codes = codes_of(excinfo)
    assert {MIX_NOT_NORMALIZED, BAD_PROFILE_LENGTH, BAD_WINDOW} <= codes


def test_unreachable_threshold_blocks_preseeding():
    doc = tiny_doc(M=0.8, p_threshold=0.85, exp_frac=0.5)
    with pytest.raises(ScenarioValidationError):
        validate_scenario(doc)
    # fine without pre-seeding
    doc = tiny_doc(M=0.8, p_threshold=0.85, exp_frac=0.0)
    validate_scenario(doc)


@pytest.mark.parametrize(
    "field, value",
    [
        ("population", 0),
        ("population", -5),
        ("network_rewire_beta", 1.5),
        ("p_threshold", 0.0),
        ("p_threshold", 1.2),
        ("intervention_start_day", -1),
        ("initial_experienced_fraction", -0.1),
        ("horizon_days", 0),
        ("tick_minutes", 7),  # does not divide 1440
        ("tick_minutes", 0),
        ("base_interaction_rate", 2.0),
        ("seed", -1),
        ("seed", 2**64),
    ],
)
def test_scenario_field_ranges(field, value):
    doc = tiny_doc()
    doc["scenario"][field] = value
    with pytest.raises(ScenarioValidationError):
        validate_scenario(doc)


def test_json_decode_failure_is_a_validation_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ScenarioValidationError):
        load_scenario(str(path))


json_scalars = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(-(2**70), 2**70),
    st.floats(allow_nan=False, allow_infinity=False),
    st.text(max_size=8),
)
json_values = st.recursive(
    json_scalars,
    lambda children: st.one_of(
        st.lists(children, max_size=4),
        st.dictionaries(st.text(max_size=8), children, max_size=4),
    ),
    max_leaves=12,
)


@settings(max_examples=150, deadline=None)
@given(st.dictionaries(
    st.sampled_from(["scenario", "archetypes", "appliances", "junk"]),
    json_values,
    max_size=4,
))
def test_validate_is_total_on_arbitrary_documents(doc):
    # never crashes: either a Scenario comes back or a collected error list
    try:
        scenario = validate_scenario(doc)
    except ScenarioValidationError as exc:
        assert len(exc.issues) >= 1
    else:
        assert isinstance(scenario, Scenario)


@settings(max_examples=40, deadline=None)
@given(json_values)
def test_validate_is_total_on_mangled_sections(value):
    doc = tiny_doc()
    doc["scenario"] = value
    try:
        validate_scenario(doc)
    except ScenarioValidationError as exc:
        assert exc.issues
