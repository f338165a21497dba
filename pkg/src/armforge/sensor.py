"""Infrared distance sensor model.

Models a Sharp-style analog IR ranger with a hyperbolic voltage-distance
curve V = K / (d + d0). The curve is strictly decreasing and exactly
invertible, which the sorting programs rely on. The classifier maps a
downward-looking reading over the sorting area to one of three verdicts:
a taller object puts the reflecting surface closer to the sensor, so
smaller distances mean taller objects.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class ObjectClass(enum.Enum):
    EMPTY = "empty"
    SHORT = "short"
    TALL = "tall"


@dataclass(frozen=True)
class SensorModelParams:
    """Curve constants and classification thresholds, distances in cm.

    K: curve gain in V*cm. d0: curve offset in cm. valid_range is the
    band where readings are trusted; below its floor the real sensor's
    response folds back and readings are flagged invalid rather than
    modeled. empty_area_distance is the reading over an empty sorting
    area; tall_threshold splits short from tall objects.
    """

    K: float = 27.0
    d0: float = 1.0
    valid_range: tuple[float, float] = (10.0, 80.0)
    best_accuracy_band: tuple[float, float] = (10.0, 15.0)
    empty_area_distance: float = 13.8
    tall_threshold: float = 10.0
    noise_sigma: float = 0.0


@dataclass(frozen=True)
class SensorReading:
    distance: float
    voltage: float
    in_valid_range: bool


def distance_to_voltage(p: SensorModelParams, d: float) -> float:
    """Output voltage for a surface at distance d (cm)."""
    if d <= 0:
        raise ValueError(f"distance must be > 0, got {d}")
    return p.K / (d + p.d0)


def voltage_to_distance(p: SensorModelParams, v: float) -> float:
    """Exact inverse of distance_to_voltage."""
    if v <= 0:
        raise ValueError(f"voltage must be > 0, got {v}")
    return p.K / v - p.d0


def classify_object(p: SensorModelParams, d: float) -> ObjectClass:
    """Classify a downward reading: Empty at or beyond the empty-area
    distance, Short in [tall_threshold, empty_area_distance), Tall below.
    """
    if d <= 0:
        raise ValueError(f"distance must be > 0, got {d}")
    if d >= p.empty_area_distance:
        return ObjectClass.EMPTY
    if d >= p.tall_threshold:
        return ObjectClass.SHORT
    return ObjectClass.TALL


def reading_for_distance(p: SensorModelParams, d: float) -> SensorReading:
    """Noise-free reading for a known true distance."""
    d = float(d)
    lo, hi = p.valid_range
    return SensorReading(
        distance=d,
        voltage=float(distance_to_voltage(p, d)),
        in_valid_range=bool(lo <= d <= hi),
    )


def measure(p: SensorModelParams, true_distance: float, rng_seed: int) -> SensorReading:
    """Simulated measurement: true distance plus seeded Gaussian noise.

    Deterministic for a fixed seed. The noisy distance is floored just
    above zero so the voltage stays defined.
    """
    if true_distance <= 0:
        raise ValueError(f"true_distance must be > 0, got {true_distance}")
    noise = 0.0
    if p.noise_sigma > 0:
        noise = float(np.random.default_rng(rng_seed).normal(0.0, p.noise_sigma))
    d = max(true_distance + noise, 1e-9)
    return reading_for_distance(p, d)
