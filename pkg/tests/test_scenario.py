import yaml

import pytest

from leo_offload.offload import Scheme
from leo_offload.scenario import (
    ScenarioError,
    dump_scenario,
    load_scenario,
    parse_scenario,
)
from leo_offload.simulator import Scenario


def test_default_dump_round_trips_exactly():
    doc = yaml.safe_load(dump_scenario())
    assert parse_scenario(doc) == Scenario()


def test_empty_document_means_all_defaults():
    assert parse_scenario({}) == Scenario()
    assert parse_scenario({"workload": None}) == Scenario()


def test_partial_document_keeps_other_defaults():
    s = parse_scenario({"simulation": {"seed": 3, "scheme": "ground"}})
    assert s.seed == 3
    assert s.scheme is Scheme.GROUND
    assert s.constellation == Scenario().constellation
    assert s.workload == Scenario().workload


def test_integers_coerce_to_float_keys():
    s = parse_scenario({"constellation": {"altitude_km": 500},
                        "links": {"sgl_rate_gbps": 2}})
    assert s.constellation.altitude_km == 500.0
    assert s.network.sgl_rate_bps == 2e9


def test_booleans_do_not_pass_as_numbers():
    with pytest.raises(ScenarioError, match=r"links\.isl_rate_gbps"):
        parse_scenario({"links": {"isl_rate_gbps": True}})


def test_type_errors_name_the_key():
    with pytest.raises(ScenarioError, match=r"constellation\.num_planes must be an integer"):
        parse_scenario({"constellation": {"num_planes": "eight"}})
    with pytest.raises(ScenarioError, match=r"workload\.data_in_gb must be a number"):
        parse_scenario({"workload": {"data_in_gb": []}})


def test_unknown_keys_are_rejected_by_name():
    with pytest.raises(ScenarioError, match=r"unknown key links\.isl_gbps"):
        parse_scenario({"links": {"isl_gbps": 5.0}})
    with pytest.raises(ScenarioError, match=r"unknown key scenario\.extra"):
        parse_scenario({"extra": {}})


def test_rotation_requires_a_window_horizon():
    with pytest.raises(ScenarioError, match="window_horizon_s"):
        parse_scenario({"toggles": {"earth_rotation": True}})
    s = parse_scenario({"toggles": {"earth_rotation": True,
                                    "window_horizon_s": 1200}})
    assert s.constellation.earth_rotation is True
    assert s.network.window_horizon_s == 1200.0


def test_window_horizon_accepts_null_and_rejects_text():
    s = parse_scenario({"toggles": {"window_horizon_s": None}})
    assert s.network.window_horizon_s is None
    with pytest.raises(ScenarioError, match="window_horizon_s"):
        parse_scenario({"toggles": {"window_horizon_s": "long"}})


def test_scheme_names_are_validated():
    with pytest.raises(ScenarioError, match="simulation.scheme"):
        parse_scenario({"simulation": {"scheme": "warp"}})
    s = parse_scenario({"simulation": {"scheme": "onehop"}})
    assert s.scheme is Scheme.ONE_HOP


def test_region_and_site_lists_are_validated():
    with pytest.raises(ScenarioError, match=r"workload\.regions"):
        parse_scenario({"workload": {"regions": []}})
    with pytest.raises(ScenarioError, match=r"workload\.regions\[0\]"):
        parse_scenario({"workload": {"regions": [{"lat_deg": 1.0}]}})
    with pytest.raises(ScenarioError, match=r"workload\.sites\[1\]"):
        parse_scenario({"workload": {"sites": [
            {"lat_deg": 1.0, "lon_deg": 2.0},
            {"lat_deg": 1.0, "lon_deg": 2.0, "name": "x"},
        ]}})
    s = parse_scenario({"workload": {
        "regions": [{"lat_deg": 10.0, "lon_deg": 20.0, "weight": 1.0}],
        "sites": [{"lat_deg": 64.0, "lon_deg": 0.0}],
    }})
    assert len(s.regions) == 1
    assert s.regions[0].jitter_deg == 5.0
    assert len(s.sites) == 1


def test_non_mapping_documents_are_rejected():
    with pytest.raises(ScenarioError):
        parse_scenario(["not", "a", "mapping"])
    with pytest.raises(ScenarioError, match="links must be a mapping"):
        parse_scenario({"links": [1, 2]})


def test_load_scenario_from_file(tmp_path):
    path = tmp_path / "scenario.yaml"
    path.write_text(dump_scenario())
    assert load_scenario(str(path)) == Scenario()
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    assert load_scenario(str(empty)) == Scenario()


def test_load_scenario_errors_fold_into_scenario_error(tmp_path):
    with pytest.raises(ScenarioError, match="cannot read"):
        load_scenario(str(tmp_path / "missing.yaml"))
    bad = tmp_path / "bad.yaml"
    bad.write_text("links: [unclosed\n")
    with pytest.raises(ScenarioError, match="not valid YAML"):
        load_scenario(str(bad))


def test_dump_lists_every_section():
    doc = yaml.safe_load(dump_scenario())
    assert set(doc) == {"constellation", "links", "compute", "workload",
                        "simulation", "toggles"}
    assert [r["weight"] for r in doc["workload"]["regions"]] == [
        0.27, 0.15, 0.22, 0.20, 0.07, 0.05, 0.04]
