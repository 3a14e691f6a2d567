"""Piecewise-constant capacity timelines with FIFO reservations.

A timeline answers two questions exactly, segment by segment, with no
fixed-step discretization: how long does it take to accrue a given amount
(bits or compute work) starting at time t, and how much accrues over a
span. Capacity comes from a base profile (constant, explicit segments, or
on/off availability windows) and drops to zero inside reservations held by
earlier transfers, which is what makes the resource FIFO: a transfer
arriving later can never finish before one that arrived earlier.
"""

from __future__ import annotations

import math
from bisect import bisect_left, insort
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

INF = math.inf

Segment = Tuple[float, float, float]  # start, end, capacity


class ConstantCapacity:
    """Full rate everywhere."""

    def __init__(self, rate: float):
        if rate < 0:
            raise ValueError("capacity must be nonnegative")
        self.rate = rate

    def segments_from(self, t: float) -> Iterator[Segment]:
        if self.rate <= 0.0:
            yield (t, INF, 0.0)
        else:
            yield (t, INF, self.rate)


class SegmentCapacity:
    """Explicit ordered segments covering [0, inf); the tail rate extends the
    last segment forever."""

    def __init__(self, segments: Sequence[Segment], tail_rate: float = 0.0):
        cursor = 0.0
        for a, b, r in segments:
            if a != cursor or b <= a or r < 0:
                raise ValueError("segments must tile [0, inf) in order with r >= 0")
            cursor = b
        if tail_rate < 0:
            raise ValueError("capacity must be nonnegative")
        self.segments = list(segments)
        self.tail_rate = tail_rate
        self.tail_start = cursor

    def segments_from(self, t: float) -> Iterator[Segment]:
        for a, b, r in self.segments:
            if b <= t:
                continue
            yield (max(a, t), b, r)
        yield (max(self.tail_start, t), INF, self.tail_rate)


class WindowedCapacity:
    """Full rate inside windows, zero outside.

    With a period the window pattern tiles forever; without one the windows
    are explicit and capacity is zero for good after the last window.
    """

    def __init__(self, rate: float, windows: Sequence[Tuple[float, float]],
                 period: Optional[float] = None):
        if rate < 0:
            raise ValueError("capacity must be nonnegative")
        ws = [(a, b) for a, b in windows if b > a]
        if period is not None:
            if period <= 0:
                raise ValueError("period must be positive")
            if any(a < 0 or b > period for a, b in ws):
                raise ValueError("periodic windows must lie inside [0, period)")
        self.rate = rate
        self.windows = sorted(ws)
        self.period = period

    def segments_from(self, t: float) -> Iterator[Segment]:
        if not self.windows or self.rate <= 0.0:
            yield (t, INF, 0.0)
            return
        if self.period is None:
            cursor = t
            for a, b in self.windows:
                if b <= cursor:
                    continue
                if a > cursor:
                    yield (cursor, a, 0.0)
                    cursor = a
                yield (cursor, b, self.rate)
                cursor = b
            yield (cursor, INF, 0.0)
            return
        base = math.floor(t / self.period) * self.period
        cursor = t
        while True:
            for a, b in self.windows:
                a += base
                b += base
                if b <= cursor:
                    continue
                if a > cursor:
                    yield (cursor, a, 0.0)
                    cursor = a
                yield (cursor, b, self.rate)
                cursor = b
            base += self.period
            if base > cursor:
                yield (cursor, base, 0.0)
                cursor = base


@dataclass
class ResourceTimeline:
    """A base capacity profile plus the FIFO ledger of committed reservations.

    Reservations are half-open [start, end) spans where the resource is held
    by an earlier transfer and offers zero capacity to later ones. They never
    overlap; committing a transfer inserts exactly the spans in which that
    transfer accrued capacity.
    """

    base: object
    reservations: List[Tuple[float, float]] = field(default_factory=list)

    def available_segments_from(self, t: float) -> Iterator[Segment]:
        """Base segments with reservation spans forced to zero capacity."""
        res = self.reservations
        i = bisect_left(res, (t, -INF))
        if i > 0 and res[i - 1][1] > t:
            i -= 1
        for a, b, r in self.base.segments_from(t):
            if b <= a:
                continue
            cursor = a
            while r > 0.0 and i < len(res) and res[i][0] < b:
                ra, rb = res[i]
                if ra > cursor:
                    yield (cursor, ra, r)
                    cursor = ra
                stop = min(rb, b)
                if stop > cursor:
                    yield (cursor, stop, 0.0)
                    cursor = stop
                if rb <= b:
                    i += 1
                else:
                    break
            if cursor < b:
                yield (cursor, b, r)

    def capacity_at(self, t: float) -> float:
        for a, b, r in self.available_segments_from(t):
            if a <= t < b:
                return r
        return 0.0

    def delay_with_intervals(self, amount: float, t: float):
        """Smallest d with integral of capacity over [t, t+d] equal to amount.

        Returns (d, intervals) where each interval is a (start, duration)
        pair inside one positive-capacity segment. Durations are kept
        separate from the absolute starts on purpose: a nanosecond-scale
        transfer hours into a run would otherwise be quantized away by the
        start time's float granularity. d is math.inf (with no intervals)
        when the amount can never complete.
        """
        if amount < 0:
            raise ValueError("amount must be nonnegative")
        if amount == 0.0:
            return 0.0, []
        acc = 0.0
        spans: List[Tuple[float, float]] = []
        for a, b, r in self.available_segments_from(t):
            a = max(a, t)
            if b <= a:
                continue
            if r <= 0.0:
                if b == INF:
                    return INF, []
                continue
            need = (amount - acc) / r
            if need <= b - a:
                spans.append((a, need))
                return (a - t) + need, spans
            acc += r * (b - a)
            spans.append((a, b - a))
        return INF, []

    def delay(self, amount: float, t: float) -> float:
        return self.delay_with_intervals(amount, t)[0]

    def integrate(self, t0: float, t1: float) -> float:
        """Available capacity integrated over [t0, t1]."""
        if t1 <= t0:
            return 0.0
        total = 0.0
        for a, b, r in self.available_segments_from(t0):
            if a >= t1:
                break
            if r <= 0.0:
                if b >= t1:
                    break
                continue
            total += r * (min(b, t1) - max(a, t0))
            if b >= t1:
                break
        return total

    def integrate_intervals(self, intervals: Sequence[Tuple[float, float]]) -> float:
        """Available capacity integrated over (start, duration) intervals.

        Works in offsets from each interval's start so that short durations
        keep their full precision regardless of how large the start is.
        """
        total = 0.0
        for start, dur in intervals:
            if dur <= 0:
                continue
            for a, b, r in self.available_segments_from(start):
                off0 = max(a - start, 0.0)
                off1 = dur if b == INF else min(b - start, dur)
                if off1 > off0 and r > 0.0:
                    total += (off1 - off0) * r
                if off1 >= dur:
                    break
        return total

    def reserve(self, intervals: Sequence[Tuple[float, float]]) -> None:
        """Commit the (start, duration) accrual spans of a planned transfer.

        Spans whose duration is below the float resolution of their start
        cannot be registered (they would be empty intervals); they are
        skipped, which leaves a sub-nanosecond sliver of capacity in place.
        """
        for start, dur in intervals:
            a, b = start, start + dur
            if b <= a:
                continue
            i = bisect_left(self.reservations, (a, b))
            if i > 0 and self.reservations[i - 1][1] > a:
                raise ValueError(f"reservation [{a}, {b}) overlaps an earlier one")
            if i < len(self.reservations) and self.reservations[i][0] < b:
                raise ValueError(f"reservation [{a}, {b}) overlaps a later one")
            insort(self.reservations, (a, b))
