"""Scenario files: strict YAML loading, defaults, and the default emitter.

A scenario file has six sections (constellation, links, compute, workload,
simulation, toggles), every physical key carries its unit in the name, and
unknown keys are rejected by name so typos cannot silently fall back to
defaults. Missing keys do fall back to defaults, which keeps files short.
"""

from __future__ import annotations

import dataclasses
from typing import Optional

import yaml

from .constellation import ConstellationConfig, GroundNode
from .offload import BPS_PER_GBPS, NetworkParams, Scheme
from .simulator import Region, Scenario, Workload


class ScenarioError(ValueError):
    """A scenario document that cannot be accepted, naming the offending key."""


def _type_name(expected) -> str:
    return {float: "a number", int: "an integer", bool: "a boolean",
            str: "a string"}[expected]


def _pull(section: dict, path: str, key: str, expected, default):
    if key not in section:
        return default
    value = section.pop(key)
    if expected is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if expected is not None and not isinstance(value, expected):
        raise ScenarioError(f"{path}.{key} must be {_type_name(expected)}")
    return value


def _reject_unknown(section: dict, path: str) -> None:
    if section:
        key = sorted(section)[0]
        raise ScenarioError(f"unknown key {path}.{key}")


def _section(doc: dict, name: str) -> dict:
    value = doc.pop(name, {})
    if value is None:
        value = {}
    if not isinstance(value, dict):
        raise ScenarioError(f"{name} must be a mapping")
    return dict(value)


def parse_scenario(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a mapping")
    doc = dict(doc)
    defaults = Scenario()

    sec = _section(doc, "toggles")
    propagation = _pull(sec, "toggles", "propagation_delay", bool,
                        defaults.network.propagation_delay)
    rotation = _pull(sec, "toggles", "earth_rotation", bool,
                     defaults.constellation.earth_rotation)
    window_horizon = sec.pop("window_horizon_s", defaults.network.window_horizon_s)
    if window_horizon is not None and not isinstance(window_horizon, (int, float)):
        raise ScenarioError("toggles.window_horizon_s must be a number or null")
    _reject_unknown(sec, "toggles")
    if rotation and window_horizon is None:
        raise ScenarioError("toggles.window_horizon_s is required when "
                            "toggles.earth_rotation is true")

    sec = _section(doc, "constellation")
    constellation = ConstellationConfig(
        num_planes=_pull(sec, "constellation", "num_planes", int,
                         defaults.constellation.num_planes),
        sats_per_plane=_pull(sec, "constellation", "sats_per_plane", int,
                             defaults.constellation.sats_per_plane),
        altitude_km=_pull(sec, "constellation", "altitude_km", float,
                          defaults.constellation.altitude_km),
        polar_cutoff_lat_deg=_pull(sec, "constellation", "polar_cutoff_lat_deg",
                                   float, defaults.constellation.polar_cutoff_lat_deg),
        min_elevation_deg=_pull(sec, "constellation", "min_elevation_deg", float,
                                defaults.constellation.min_elevation_deg),
        epoch_s=_pull(sec, "constellation", "epoch_s", float,
                      defaults.constellation.epoch_s),
        earth_rotation=rotation,
    )
    _reject_unknown(sec, "constellation")

    sec = _section(doc, "links")
    isl_gbps = _pull(sec, "links", "isl_rate_gbps", float,
                     defaults.network.isl_rate_bps / BPS_PER_GBPS)
    sgl_gbps = _pull(sec, "links", "sgl_rate_gbps", float,
                     defaults.network.sgl_rate_bps / BPS_PER_GBPS)
    source_range = _pull(sec, "links", "source_range_km", float,
                         defaults.network.source_range_km)
    _reject_unknown(sec, "links")

    sec = _section(doc, "compute")
    max_gflops = _pull(sec, "compute", "max_gflops", float,
                       defaults.network.compute_gflops)
    _reject_unknown(sec, "compute")

    network = NetworkParams(
        isl_rate_bps=isl_gbps * BPS_PER_GBPS,
        sgl_rate_bps=sgl_gbps * BPS_PER_GBPS,
        compute_gflops=max_gflops,
        source_range_km=source_range,
        propagation_delay=propagation,
        window_horizon_s=None if window_horizon is None else float(window_horizon),
    )

    sec = _section(doc, "workload")
    regions = _parse_regions(sec.pop("regions", None), defaults.regions)
    sites = _parse_sites(sec.pop("sites", None), defaults.sites)
    workload = Workload(
        arrival_rate=_pull(sec, "workload", "arrival_rate", float,
                           defaults.workload.arrival_rate),
        arrival_time_unit_s=_pull(sec, "workload", "arrival_time_unit_s", float,
                                  defaults.workload.arrival_time_unit_s),
        data_in_gb=_pull(sec, "workload", "data_in_gb", float,
                         defaults.workload.data_in_gb),
        compute_gflo=_pull(sec, "workload", "compute_gflo", float,
                           defaults.workload.compute_gflo),
        data_out_bits=_pull(sec, "workload", "data_out_bits", float,
                            defaults.workload.data_out_bits),
        source_altitude_km=_pull(sec, "workload", "source_altitude_km", float,
                                 defaults.workload.source_altitude_km),
    )
    _reject_unknown(sec, "workload")

    sec = _section(doc, "simulation")
    scheme_name = _pull(sec, "simulation", "scheme", str, str(defaults.scheme))
    try:
        scheme = Scheme(scheme_name)
    except ValueError:
        raise ScenarioError(
            f"simulation.scheme must be one of {[str(s) for s in Scheme]}"
        ) from None
    horizon = _pull(sec, "simulation", "horizon_s", float, defaults.horizon_s)
    seed = _pull(sec, "simulation", "seed", int, defaults.seed)
    _reject_unknown(sec, "simulation")
    _reject_unknown(doc, "scenario")

    return Scenario(constellation=constellation, network=network,
                    workload=workload, regions=regions, sites=sites,
                    scheme=scheme, horizon_s=horizon, seed=seed)


def _parse_regions(raw, default) -> tuple:
    if raw is None:
        return default
    if not isinstance(raw, list) or not raw:
        raise ScenarioError("workload.regions must be a non-empty list")
    out = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ScenarioError(f"workload.regions[{i}] must be a mapping")
        item = dict(item)
        path = f"workload.regions[{i}]"
        out.append(Region(
            lat_deg=_pull(item, path, "lat_deg", float, None),
            lon_deg=_pull(item, path, "lon_deg", float, None),
            weight=_pull(item, path, "weight", float, None),
            jitter_deg=_pull(item, path, "jitter_deg", float, 5.0),
        ))
        _reject_unknown(item, path)
        last = out[-1]
        if last.lat_deg is None or last.lon_deg is None or last.weight is None:
            raise ScenarioError(f"{path} needs lat_deg, lon_deg and weight")
    return tuple(out)


def _parse_sites(raw, default) -> tuple:
    if raw is None:
        return default
    if not isinstance(raw, list) or not raw:
        raise ScenarioError("workload.sites must be a non-empty list")
    out = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ScenarioError(f"workload.sites[{i}] must be a mapping")
        item = dict(item)
        path = f"workload.sites[{i}]"
        lat = _pull(item, path, "lat_deg", float, None)
        lon = _pull(item, path, "lon_deg", float, None)
        _reject_unknown(item, path)
        if lat is None or lon is None:
            raise ScenarioError(f"{path} needs lat_deg and lon_deg")
        out.append(GroundNode(lat, lon))
    return tuple(out)


def load_scenario(path: str) -> Scenario:
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ScenarioError(f"not valid YAML: {exc}") from exc
    return parse_scenario(doc if doc is not None else {})


def scenario_document(scenario: Scenario) -> dict:
    """The nested (YAML-shaped) form of a scenario; inverse of parse_scenario."""
    return {
        "constellation": {
            "num_planes": scenario.constellation.num_planes,
            "sats_per_plane": scenario.constellation.sats_per_plane,
            "altitude_km": scenario.constellation.altitude_km,
            "polar_cutoff_lat_deg": scenario.constellation.polar_cutoff_lat_deg,
            "min_elevation_deg": scenario.constellation.min_elevation_deg,
            "epoch_s": scenario.constellation.epoch_s,
        },
        "links": {
            "isl_rate_gbps": scenario.network.isl_rate_bps / BPS_PER_GBPS,
            "sgl_rate_gbps": scenario.network.sgl_rate_bps / BPS_PER_GBPS,
            "source_range_km": scenario.network.source_range_km,
        },
        "compute": {"max_gflops": scenario.network.compute_gflops},
        "workload": {
            "arrival_rate": scenario.workload.arrival_rate,
            "arrival_time_unit_s": scenario.workload.arrival_time_unit_s,
            "data_in_gb": scenario.workload.data_in_gb,
            "compute_gflo": scenario.workload.compute_gflo,
            "data_out_bits": scenario.workload.data_out_bits,
            "source_altitude_km": scenario.workload.source_altitude_km,
            "regions": [dataclasses.asdict(r) for r in scenario.regions],
            "sites": [{"lat_deg": g.lat_deg, "lon_deg": g.lon_deg}
                      for g in scenario.sites],
        },
        "simulation": {
            "scheme": str(scenario.scheme),
            "horizon_s": scenario.horizon_s,
            "seed": scenario.seed,
        },
        "toggles": {
            "propagation_delay": scenario.network.propagation_delay,
            "earth_rotation": scenario.constellation.earth_rotation,
            "window_horizon_s": scenario.network.window_horizon_s,
        },
    }


def dump_scenario(scenario: Optional[Scenario] = None) -> str:
    doc = scenario_document(scenario if scenario is not None else Scenario())
    return yaml.safe_dump(doc, sort_keys=False)
