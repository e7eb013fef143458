"""Sensor-to-actuator wireless link driven by empirical loss-rate samples.

A :class:`LossTable` maps distances to measured loss rates; a
:class:`MobilityProfile` says how far apart sensor and actuator are over
time. Each packet's fate is one Bernoulli trial at a rate drawn from the
samples recorded nearest to the current distance.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .rng import SplitMix64


@dataclass(frozen=True)
class LossTable:
    entries: Mapping[float, tuple[float, ...]]
    power_dbm: float | None = None
    source: str = ""
    _distances: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.entries:
            raise ValueError("loss table needs at least one distance")
        cleaned = {}
        for d, samples in self.entries.items():
            d = float(d)
            if not (math.isfinite(d) and d >= 0):
                raise ValueError(f"distance must be finite and non-negative, got {d}")
            samples = tuple(float(s) for s in samples)
            if not samples:
                raise ValueError(f"distance {d} m has no loss-rate samples")
            for s in samples:
                if not 0.0 <= s <= 1.0:
                    raise ValueError(f"loss rate {s} at {d} m is outside [0, 1]")
            cleaned[d] = samples
        object.__setattr__(self, "entries", dict(sorted(cleaned.items())))
        object.__setattr__(self, "_distances", tuple(self.entries))

    @property
    def distances(self) -> tuple[float, ...]:
        return self._distances

    def nearest(self, d: float) -> float:
        """Table distance closest to ``d``; ties go to the smaller one."""
        ds = self._distances
        i = bisect.bisect_left(ds, d)
        if i == 0:
            return ds[0]
        if i == len(ds):
            return ds[-1]
        lo, hi = ds[i - 1], ds[i]
        return lo if d - lo <= hi - d else hi

    def samples_at(self, d: float) -> tuple[float, ...]:
        return self.entries[self.nearest(d)]


@dataclass(frozen=True)
class Segment:
    t_start: float
    t_end: float
    distance: float


@dataclass(frozen=True)
class MobilityProfile:
    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = tuple(s if isinstance(s, Segment) else Segment(*map(float, s)) for s in self.segments)
        if not segs:
            raise ValueError("mobility profile needs at least one segment")
        if segs[0].t_start != 0.0:
            raise ValueError(f"first segment must start at t=0, starts at {segs[0].t_start}")
        for i, s in enumerate(segs):
            if not s.t_end > s.t_start:
                raise ValueError(f"segment {i} has t_end {s.t_end} <= t_start {s.t_start}")
            if not (math.isfinite(s.distance) and s.distance >= 0):
                raise ValueError(f"segment {i} has invalid distance {s.distance}")
            if i and s.t_start != segs[i - 1].t_end:
                kind = "overlap" if s.t_start < segs[i - 1].t_end else "gap"
                raise ValueError(
                    f"segments {i - 1} and {i} {kind}: {segs[i - 1].t_end} vs {s.t_start}"
                )
        object.__setattr__(self, "segments", segs)

    @property
    def t_end(self) -> float:
        return self.segments[-1].t_end

    def segment_index(self, t: float) -> int:
        if not 0.0 <= t < self.t_end:
            raise ValueError(f"t={t} s is outside the mobility profile [0, {self.t_end})")
        starts = [s.t_start for s in self.segments]
        return bisect.bisect_right(starts, t) - 1


def distance_at(profile: MobilityProfile, t: float) -> float:
    return profile.segments[profile.segment_index(t)].distance


def sample_loss_rate(table: LossTable, d: float, rng: SplitMix64) -> float:
    samples = table.samples_at(d)
    return samples[rng.below(len(samples))]


def packet_lost(rate: float, rng: SplitMix64) -> bool:
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"loss rate {rate} is outside [0, 1]")
    return rng.uniform() < rate


@dataclass(frozen=True)
class DistanceStats:
    distance: float
    count: int
    mean: float
    min: float
    max: float


def summarize(table: LossTable) -> list[DistanceStats]:
    out = []
    for d, samples in table.entries.items():
        out.append(
            DistanceStats(
                distance=d,
                count=len(samples),
                mean=math.fsum(samples) / len(samples),
                min=min(samples),
                max=max(samples),
            )
        )
    return out


def uniform_table(rate: float, distances: Sequence[float] = (0.0,)) -> LossTable:
    return LossTable({d: (rate,) for d in distances}, source=f"uniform {rate}")
