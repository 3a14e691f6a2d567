"""Walker-star constellation geometry on a spherical, non-rotating Earth.

Planes are polar (90 deg inclination) circular orbits whose ascending nodes
spread over 180 degrees, so adjacent planes are a half-revolution of right
ascension apart and the first and last planes fly counter-rotating next to
each other (the seam). Slots within a plane are evenly phased with no
inter-plane phase offset. Earth rotation is off by default and can be
toggled per scenario; all positions are then periodic with the orbital
period, which the link-window helpers exploit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

R_EARTH_KM = 6371.0
MU_KM3_S2 = 398600.4418
EARTH_ROT_RAD_S = 7.2921150e-5
C_LIGHT_KM_S = 299792.458

TWO_PI = 2.0 * math.pi


class SatelliteId(NamedTuple):
    plane: int
    slot: int


@dataclass(frozen=True)
class GeoPosition:
    lat_deg: float
    lon_deg: float
    radius_km: float

    def xyz_km(self) -> np.ndarray:
        lat = math.radians(self.lat_deg)
        lon = math.radians(self.lon_deg)
        c = math.cos(lat)
        return self.radius_km * np.array(
            [c * math.cos(lon), c * math.sin(lon), math.sin(lat)]
        )


@dataclass(frozen=True)
class GroundNode:
    lat_deg: float
    lon_deg: float

    def position(self) -> GeoPosition:
        return GeoPosition(self.lat_deg, self.lon_deg, R_EARTH_KM)


@dataclass(frozen=True)
class ConstellationConfig:
    num_planes: int = 8
    sats_per_plane: int = 16
    altitude_km: float = 500.0
    polar_cutoff_lat_deg: float = 66.6
    min_elevation_deg: float = 10.0
    epoch_s: float = 0.0
    earth_rotation: bool = False

    def __post_init__(self):
        if self.num_planes < 1 or self.sats_per_plane < 1:
            raise ValueError("constellation needs at least one plane and one slot")
        if self.altitude_km <= 0:
            raise ValueError("altitude must be positive")

    @property
    def num_sats(self) -> int:
        return self.num_planes * self.sats_per_plane

    @property
    def orbit_radius_km(self) -> float:
        return R_EARTH_KM + self.altitude_km

    def sat_index(self, sat: SatelliteId) -> int:
        return sat.plane * self.sats_per_plane + sat.slot

    def sat_id(self, index: int) -> SatelliteId:
        return SatelliteId(index // self.sats_per_plane, index % self.sats_per_plane)

    def plane_raan_deg(self, plane: int) -> float:
        return plane * 180.0 / self.num_planes

    def slot_phase_deg(self, slot: int) -> float:
        return slot * 360.0 / self.sats_per_plane


def orbital_period_s(altitude_km: float) -> float:
    a = R_EARTH_KM + altitude_km
    return TWO_PI * math.sqrt(a**3 / MU_KM3_S2)


@dataclass(frozen=True)
class OrbitElements:
    """A circular polar orbit: altitude plus ascending-node and phase angles."""

    altitude_km: float
    raan_deg: float
    phase0_deg: float


def orbit_through(lat_deg: float, lon_deg: float, altitude_km: float,
                  at_time: float, epoch_s: float = 0.0,
                  earth_rotation: bool = False) -> OrbitElements:
    """The northbound polar orbit that stands over (lat, lon) at the given time."""
    tau = at_time + epoch_s
    lon = lon_deg
    if earth_rotation:
        lon += math.degrees(EARTH_ROT_RAD_S * tau)
    n = TWO_PI / orbital_period_s(altitude_km)
    phase0 = lat_deg - math.degrees(n * tau)
    return OrbitElements(altitude_km, lon, phase0 % 360.0)


def _wrap_lon(lon_deg: float) -> float:
    lon = math.fmod(lon_deg + 180.0, 360.0)
    if lon < 0:
        lon += 360.0
    return lon - 180.0


def orbit_position(orbit: OrbitElements, t: float, epoch_s: float = 0.0,
                   earth_rotation: bool = False) -> GeoPosition:
    tau = t + epoch_s
    n = TWO_PI / orbital_period_s(orbit.altitude_km)
    phi = math.radians(orbit.phase0_deg) + n * tau
    omega = math.radians(orbit.raan_deg)
    cp, sp = math.cos(phi), math.sin(phi)
    x = cp * math.cos(omega)
    y = cp * math.sin(omega)
    z = sp
    lat = math.degrees(math.asin(max(-1.0, min(1.0, z))))
    lon = math.degrees(math.atan2(y, x))
    if earth_rotation:
        lon -= math.degrees(EARTH_ROT_RAD_S * tau)
    return GeoPosition(lat, _wrap_lon(lon), R_EARTH_KM + orbit.altitude_km)


def satellite_position(cfg: ConstellationConfig, sat: SatelliteId, t: float) -> GeoPosition:
    orbit = OrbitElements(cfg.altitude_km, cfg.plane_raan_deg(sat.plane),
                          cfg.slot_phase_deg(sat.slot))
    return orbit_position(orbit, t, cfg.epoch_s, cfg.earth_rotation)


def satellite_latitude_deg(cfg: ConstellationConfig, sat: SatelliteId, t: float) -> float:
    n = TWO_PI / orbital_period_s(cfg.altitude_km)
    phi = math.radians(cfg.slot_phase_deg(sat.slot)) + n * (t + cfg.epoch_s)
    return math.degrees(math.asin(max(-1.0, min(1.0, math.sin(phi)))))


def all_satellite_positions_km(cfg: ConstellationConfig, t: float) -> np.ndarray:
    """Cartesian positions of every satellite at time t, shape (num_sats, 3).

    Row order is plane-major: index = plane * sats_per_plane + slot.
    """
    tau = t + cfg.epoch_s
    n = TWO_PI / orbital_period_s(cfg.altitude_km)
    omega = np.radians(np.arange(cfg.num_planes) * 180.0 / cfg.num_planes)
    phi0 = np.radians(np.arange(cfg.sats_per_plane) * 360.0 / cfg.sats_per_plane)
    phi = phi0[None, :] + n * tau
    cp = np.cos(phi)
    sp = np.sin(phi)
    x = cp * np.cos(omega)[:, None]
    y = cp * np.sin(omega)[:, None]
    z = np.broadcast_to(sp, x.shape).copy()
    xyz = np.stack([x, y, z], axis=-1).reshape(cfg.num_sats, 3)
    if cfg.earth_rotation:
        ang = -EARTH_ROT_RAD_S * tau
        ca, sa = math.cos(ang), math.sin(ang)
        rot = np.array([[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]])
        xyz = xyz @ rot.T
    return xyz * cfg.orbit_radius_km


def distance_km(a: GeoPosition, b: GeoPosition) -> float:
    """Straight-line (chord) distance between two positions."""
    return float(np.linalg.norm(a.xyz_km() - b.xyz_km()))


def line_of_sight(a_xyz: np.ndarray, b_xyz: np.ndarray,
                  blocking_radius_km: float = R_EARTH_KM) -> bool:
    """True when the segment between two points clears the blocking sphere."""
    d = b_xyz - a_xyz
    dd = float(np.dot(d, d))
    if dd == 0.0:
        return float(np.linalg.norm(a_xyz)) >= blocking_radius_km
    f = -float(np.dot(a_xyz, d)) / dd
    f = max(0.0, min(1.0, f))
    closest = a_xyz + f * d
    return float(np.linalg.norm(closest)) >= blocking_radius_km - 1e-9


def elevation_deg(sat_xyz: np.ndarray, ground_xyz: np.ndarray) -> float:
    """Elevation of the satellite above the ground site's local horizon."""
    rho = sat_xyz - ground_xyz
    g_norm = float(np.linalg.norm(ground_xyz))
    rho_norm = float(np.linalg.norm(rho))
    if rho_norm == 0.0:
        return 90.0
    s = float(np.dot(ground_xyz, rho)) / (g_norm * rho_norm)
    return math.degrees(math.asin(max(-1.0, min(1.0, s))))


def sgl_visible(cfg: ConstellationConfig, sat: SatelliteId, ground: GroundNode,
                t: float) -> bool:
    sat_xyz = satellite_position(cfg, sat, t).xyz_km()
    return elevation_deg(sat_xyz, ground.position().xyz_km()) >= cfg.min_elevation_deg


def max_central_angle_rad(orbit_radius_km: float, min_elevation_deg: float) -> float:
    """Largest Earth-central angle at which a shell satellite clears the
    elevation mask, from the horizon triangle of a spherical Earth."""
    eps = math.radians(min_elevation_deg)
    return math.acos(R_EARTH_KM * math.cos(eps) / orbit_radius_km) - eps


def isl_neighbors(cfg: ConstellationConfig, sat: SatelliteId, t: float) -> set:
    """Link partners of a satellite at time t.

    Two in-plane neighbours are always present. The same-slot satellite in
    each adjacent plane is linked when both ends are below the polar cutoff
    latitude; there is no link across the seam between the first and last
    planes.
    """
    p, i = sat
    S = cfg.sats_per_plane
    out = {SatelliteId(p, (i + 1) % S), SatelliteId(p, (i - 1) % S)}
    out.discard(SatelliteId(p, i))
    cutoff = cfg.polar_cutoff_lat_deg
    if abs(satellite_latitude_deg(cfg, sat, t)) <= cutoff:
        for q in (p - 1, p + 1):
            if 0 <= q < cfg.num_planes:
                other = SatelliteId(q, i)
                if abs(satellite_latitude_deg(cfg, other, t)) <= cutoff:
                    out.add(other)
    return out


def _normalize_windows(raw, period: float):
    """Clip to [0, period), split wrap-around spans, merge overlaps."""
    spans = []
    for a, b in raw:
        if b <= a:
            continue
        a_m = a % period
        length = min(b - a, period)
        if a_m + length <= period:
            spans.append((a_m, a_m + length))
        else:
            spans.append((a_m, period))
            spans.append((0.0, a_m + length - period))
    spans.sort()
    merged = []
    for a, b in spans:
        if merged and a <= merged[-1][1] + 1e-12:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    # A span touching both ends wraps; keep it split, the consumers tile.
    return merged


def latitude_band_windows(cfg: ConstellationConfig, sat: SatelliteId,
                          max_abs_lat_deg: float):
    """Times within one period when |latitude| <= the bound.

    Returns (period_s, [(start, end), ...]) in scenario time. Closed form:
    the phase angle must sit within the two arcs around the equator
    crossings, each 2 * bound wide.
    """
    period = orbital_period_s(cfg.altitude_km)
    c = math.radians(max_abs_lat_deg)
    if c >= math.pi / 2 - 1e-12:
        return period, [(0.0, period)]
    if c <= 0.0:
        return period, []
    n = TWO_PI / period
    phi0 = math.radians(cfg.slot_phase_deg(sat.slot)) + n * cfg.epoch_s

    def phase_time(phi):
        return ((phi - phi0) / n) % period

    width = 2.0 * c / n
    raw = [(phase_time(-c), phase_time(-c) + width),
           (phase_time(math.pi - c), phase_time(math.pi - c) + width)]
    return period, _normalize_windows(raw, period)


def inter_plane_windows(cfg: ConstellationConfig, a: SatelliteId, b: SatelliteId):
    """Times within one period when the a-b inter-plane link is up."""
    period, wa = latitude_band_windows(cfg, a, cfg.polar_cutoff_lat_deg)
    _, wb = latitude_band_windows(cfg, b, cfg.polar_cutoff_lat_deg)
    return period, intersect_windows(wa, wb)


def intersect_windows(xs, ys):
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        a = max(xs[i][0], ys[j][0])
        b = min(xs[i][1], ys[j][1])
        if b > a:
            out.append((a, b))
        if xs[i][1] <= ys[j][1]:
            i += 1
        else:
            j += 1
    return out


def ground_visibility_windows(cfg: ConstellationConfig, sat: SatelliteId,
                              ground: GroundNode,
                              horizon_s: Optional[float] = None):
    """Times when the satellite clears the site's elevation mask.

    Without Earth rotation the geometry repeats every orbit, and the pass is
    a single arc per revolution found in closed form; returns
    (period_s, windows). With rotation on, windows are located numerically
    over [0, horizon_s] and (None, windows) is returned.
    """
    if cfg.earth_rotation:
        if horizon_s is None:
            raise ValueError("earth rotation needs an explicit window horizon")
        return None, _sampled_windows(
            lambda t: sgl_visible(cfg, sat, ground, t), 0.0, horizon_s
        )
    period = orbital_period_s(cfg.altitude_km)
    n = TWO_PI / period
    g_hat = ground.position().xyz_km() / R_EARTH_KM
    omega = math.radians(cfg.plane_raan_deg(sat.plane))
    a_hat = np.array([math.cos(omega), math.sin(omega), 0.0])
    ga = float(np.dot(g_hat, a_hat))
    gz = float(g_hat[2])
    amp = math.hypot(ga, gz)
    delta = math.atan2(gz, ga)
    k = math.cos(max_central_angle_rad(cfg.orbit_radius_km, cfg.min_elevation_deg))
    if amp <= 0.0 or k / amp >= 1.0 - 1e-15:
        return period, []
    alpha = math.acos(k / amp)
    phi0 = math.radians(cfg.slot_phase_deg(sat.slot)) + n * cfg.epoch_s
    start = ((delta - alpha - phi0) / n) % period
    return period, _normalize_windows([(start, start + 2.0 * alpha / n)], period)


def _sampled_windows(pred, t0: float, t1: float, step_s: float = 5.0,
                     refine_s: float = 1e-6):
    """Boolean windows of pred over [t0, t1], boundaries refined by bisection."""
    ts = [t0 + i * step_s for i in range(int((t1 - t0) / step_s) + 1)]
    if ts[-1] < t1:
        ts.append(t1)
    vals = [pred(t) for t in ts]

    def cross(lo, hi, want):
        # pred flips between lo and hi; find the first time it equals `want`.
        while hi - lo > refine_s:
            mid = 0.5 * (lo + hi)
            if pred(mid) == want:
                hi = mid
            else:
                lo = mid
        return hi

    windows = []
    open_at = ts[0] if vals[0] else None
    for i in range(1, len(ts)):
        if vals[i] == vals[i - 1]:
            continue
        edge = cross(ts[i - 1], ts[i], vals[i])
        if vals[i]:
            open_at = edge
        else:
            windows.append((open_at, edge))
            open_at = None
    if open_at is not None:
        windows.append((open_at, t1))
    return windows
