"""Exact simulation of ray propagation through a delay-line device.

A profile maps arrival time (integer quanta) to the number of rays arriving
at that moment. Propagation through one stage shifts the whole profile by the
skip delay and by the take delay and merges the two copies, adding counts on
collision; after n stages the histogram at the destination is exactly the
multiset of subset sums shifted by the accumulated offset.

Two representations back the same arithmetic. Dense profiles are packed into
one big integer, one byte-aligned fixed-width field per time slot, so a stage
is two shifts and an addition (fields never overflow: counts are bounded by
2^n and field width exceeds n bits). Sparse or very long profiles fall back
to an explicit time -> count map. Both are exact at any count size.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import IO, Sequence

import numpy as np

from .analysis import per_ray_power
from .errors import InvalidPerturbation, InvalidValue, ResourceLimit, StageMismatch
from .model import (
    DeviceLayout,
    EpsilonLayout,
    Instance,
    PhysicalParams,
    Verdict,
    compile_epsilon_layout,
    compile_layout,
)
from .oracles import solve_auto
from .rational import RationalLike, fraction_str, to_fraction

# A dense packed profile may use this many bits before the sparse map takes
# over; the map in turn is capped at this many distinct arrival times.
MAX_PACKED_BITS = 1 << 26
MAX_PROFILE_ENTRIES = 1 << 21

# Perturbed cable lengths live on a grid of quantum_length / PERTURB_GRID so
# trial classification is exact integer arithmetic end to end.
PERTURB_GRID = 10**6

MAX_PERTURB_PATHS = 1 << 22


@dataclass(frozen=True, eq=False)
class ArrivalProfile:
    """Arrival moments at a node: sorted times (quanta) with positive ray counts."""

    stage_index: int
    times: tuple[int, ...] | np.ndarray
    counts: tuple[int, ...] | np.ndarray

    def __len__(self) -> int:
        return len(self.times)

    def count_at(self, time: int) -> int:
        """Rays arriving exactly at `time`; 0 when the moment is silent."""
        if not len(self.times) or time < self.min_time or time > self.max_time:
            return 0
        if isinstance(self.times, np.ndarray):
            i = int(np.searchsorted(self.times, time))
            if i < self.times.size and int(self.times[i]) == time:
                return int(self.counts[i])
            return 0
        i = bisect_left(self.times, time)
        if i < len(self.times) and self.times[i] == time:
            return self.counts[i]
        return 0

    def items(self) -> list[tuple[int, int]]:
        """(time, count) pairs in ascending time, as plain ints."""
        if isinstance(self.times, np.ndarray):
            return list(zip(self.times.tolist(), self.counts.tolist()))
        return list(zip(self.times, self.counts))

    @cached_property
    def entries(self) -> dict[int, int]:
        """The profile as a time -> count map."""
        return dict(self.items())

    def total_rays(self) -> int:
        return sum(c for _, c in self.items())

    @property
    def min_time(self) -> int:
        return int(self.times[0])

    @property
    def max_time(self) -> int:
        return int(self.times[-1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArrivalProfile):
            return NotImplemented
        return self.stage_index == other.stage_index and self.items() == other.items()


def _propagate_packed(pairs: Sequence[tuple[int, int]], t_max: int) -> ArrivalProfile:
    n = len(pairs)
    width = (n + 1 + 7) // 8  # bytes per time slot; counts need at most n+1 bits
    shift = 8 * width
    packed = 1
    for skip, take in pairs:
        packed = (packed << (shift * skip)) + (packed << (shift * take))
    raw = packed.to_bytes((t_max + 1) * width, "little")

    if width <= 8:
        cols = np.frombuffer(raw, dtype=np.uint8).reshape(t_max + 1, width)
        counts = np.zeros(t_max + 1, dtype=np.uint64)
        for i in range(width):
            counts |= cols[:, i].astype(np.uint64) << np.uint64(8 * i)
        nz = np.flatnonzero(counts)
        return ArrivalProfile(stage_index=n, times=nz, counts=counts[nz])

    times = []
    counts_list = []
    for t in range(t_max + 1):
        c = int.from_bytes(raw[t * width : (t + 1) * width], "little")
        if c:
            times.append(t)
            counts_list.append(c)
    return ArrivalProfile(stage_index=n, times=tuple(times), counts=tuple(counts_list))


def _propagate_sparse(
    pairs: Sequence[tuple[int, int]], max_entries: int
) -> ArrivalProfile:
    entries = {0: 1}
    for skip, take in pairs:
        nxt: dict[int, int] = {}
        get = nxt.get
        for t, c in entries.items():
            u = t + skip
            nxt[u] = get(u, 0) + c
            v = t + take
            nxt[v] = get(v, 0) + c
        if len(nxt) > max_entries:
            raise ResourceLimit(
                f"profile grew past {max_entries} distinct arrival times"
            )
        entries = nxt
    times = tuple(sorted(entries))
    return ArrivalProfile(
        stage_index=len(pairs),
        times=times,
        counts=tuple(entries[t] for t in times),
    )


def _propagate_pairs(
    pairs: Sequence[tuple[int, int]],
    max_packed_bits: int,
    max_entries: int,
) -> ArrivalProfile:
    t_max = sum(max(skip, take) for skip, take in pairs)
    n = len(pairs)
    width_bits = 8 * ((n + 1 + 7) // 8)
    if width_bits * (t_max + 1) <= max_packed_bits:
        return _propagate_packed(pairs, t_max)
    return _propagate_sparse(pairs, max_entries)


def propagate(
    layout: DeviceLayout,
    *,
    max_packed_bits: int = MAX_PACKED_BITS,
    max_entries: int = MAX_PROFILE_ENTRIES,
) -> ArrivalProfile:
    """Exact destination profile of the offset device.

    A zero-stage layout yields the single undivided ray at time 0. After n
    stages the total ray count is 2^n, the earliest ray (the empty subset)
    arrives at n*k and the latest (the full set) at sum(a_i) + n*k.
    """
    return _propagate_pairs(
        [(s.skip_delay, s.take_delay) for s in layout.stages],
        max_packed_bits,
        max_entries,
    )


def propagate_epsilon(
    layout: EpsilonLayout,
    *,
    max_packed_bits: int = MAX_PACKED_BITS,
    max_entries: int = MAX_PROFILE_ENTRIES,
) -> ArrivalProfile:
    """Destination profile of the epsilon device (skip arcs of length epsilon)."""
    return _propagate_pairs(
        [(s.skip_delay, s.take_delay) for s in layout.stages],
        max_packed_bits,
        max_entries,
    )


def write_profile(profile: ArrivalProfile, fh: IO[str]) -> None:
    """Dump format: one `<time_quanta> <count>` line per entry, ascending time."""
    for t, c in profile.items():
        fh.write(f"{t} {c}\n")


@dataclass(frozen=True)
class DetectionReport:
    """Outcome of watching the destination at the single moment B + n*k."""

    verdict: Verdict
    checked_moment: int
    ray_count_at_moment: int
    per_ray_power_w: Fraction
    amplified_power_w: Fraction
    detectable: bool

    def to_json_dict(self) -> dict[str, object]:
        return {
            "verdict": self.verdict.value,
            "checked_moment": self.checked_moment,
            "ray_count_at_moment": self.ray_count_at_moment,
            "per_ray_power_w": fraction_str(self.per_ray_power_w),
            "amplified_power_w": fraction_str(self.amplified_power_w),
            "detectable": self.detectable,
        }


def detect(
    profile: ArrivalProfile, instance: Instance, params: PhysicalParams
) -> DetectionReport:
    """Apply the detection rule: YES iff a ray arrives at moment B + n*k.

    The profile must come from a layout built with the same offset k as
    `params`. Every ray crosses n splitters, so per-ray power is the uniform
    source * (transmission/2)^n; coincident rays add their power.
    """
    if profile.stage_index != instance.n:
        raise StageMismatch(
            f"profile went through {profile.stage_index} stages, instance has {instance.n}"
        )
    moment = instance.target + instance.n * params.offset_k_quanta
    count = profile.count_at(moment)
    ray_power = per_ray_power(instance.n, params)
    amplified = params.detector_gain * count * ray_power
    return DetectionReport(
        verdict=Verdict.from_bool(count >= 1),
        checked_moment=moment,
        ray_count_at_moment=count,
        per_ray_power_w=ray_power,
        amplified_power_w=amplified,
        detectable=count >= 1 and amplified >= params.detection_threshold_w,
    )


@dataclass(frozen=True)
class EpsilonDemoReport:
    """Side-by-side verdicts of the epsilon device, the offset device and an oracle."""

    epsilon_verdict: Verdict
    offset_verdict: Verdict
    oracle_verdict: Verdict
    epsilon_checked_moment: int
    offset_checked_moment: int

    @property
    def epsilon_spurious(self) -> bool:
        return self.epsilon_verdict != self.oracle_verdict

    @property
    def offset_correct(self) -> bool:
        return self.offset_verdict == self.oracle_verdict

    def to_json_dict(self) -> dict[str, object]:
        return {
            "epsilon_verdict": self.epsilon_verdict.value,
            "offset_verdict": self.offset_verdict.value,
            "oracle_verdict": self.oracle_verdict.value,
            "epsilon_checked_moment": self.epsilon_checked_moment,
            "offset_checked_moment": self.offset_checked_moment,
            "epsilon_spurious": self.epsilon_spurious,
            "offset_correct": self.offset_correct,
        }


def epsilon_false_positive_demo(
    instance: Instance, epsilon: int, params: PhysicalParams | None = None
) -> EpsilonDemoReport:
    """Show why skip arcs need the uniform offset k instead of a tiny epsilon.

    The epsilon device is read naively at the raw moment B, where a sum of
    the form subset + m*epsilon can masquerade as a hit; the offset device is
    read at B + n*k. Both are compared against a classical oracle.
    """
    if params is None:
        params = PhysicalParams()
    eps_profile = propagate_epsilon(compile_epsilon_layout(instance, epsilon))
    offset_report = detect(propagate(compile_layout(instance, params)), instance, params)
    oracle = solve_auto(instance)
    return EpsilonDemoReport(
        epsilon_verdict=Verdict.from_bool(eps_profile.count_at(instance.target) >= 1),
        offset_verdict=offset_report.verdict,
        oracle_verdict=oracle.verdict,
        epsilon_checked_moment=instance.target,
        offset_checked_moment=offset_report.checked_moment,
    )


@dataclass(frozen=True)
class PerturbationReport:
    """Classification outcome of repeated trials with imprecisely cut cables."""

    trials: int
    misclassified: int
    false_positives: int
    false_negatives: int
    max_arrival_error_s: Fraction

    def to_json_dict(self) -> dict[str, object]:
        return {
            "trials": self.trials,
            "misclassified": self.misclassified,
            "false_positives": self.false_positives,
            "false_negatives": self.false_negatives,
            "max_arrival_error_s": fraction_str(self.max_arrival_error_s),
        }


def perturb_and_classify(
    layout: DeviceLayout,
    instance: Instance,
    params: PhysicalParams,
    max_error_m: RationalLike,
    trials: int,
    rng_seed: int,
    *,
    max_paths: int = MAX_PERTURB_PATHS,
) -> PerturbationReport:
    """Cut every cable with a uniform length error and re-run the detection.

    Errors are drawn on a grid of quantum_length / 1e6 so arrival times stay
    exact rationals; an arrival registers as the target moment when it lies
    within half a delay quantum of it (times are only resolvable to the
    quantum, so closer than half a quantum is indistinguishable from exact).
    Each trial's detection is classified against the oracle verdict.
    Deterministic for a fixed seed.
    """
    max_error = to_fraction(max_error_m)
    if max_error < 0:
        raise InvalidValue("max_error_m must be >= 0")
    if trials < 1:
        raise InvalidValue("trials must be >= 1")
    n = len(layout.stages)
    if 2**n > max_paths:
        raise ResourceLimit(f"perturbation trials enumerate 2^{n} paths, over the cap")

    # Everything below is integer arithmetic in grid units of quantum/1e6.
    err_span = int(max_error * PERTURB_GRID / params.quantum_length_m)
    target_g = (instance.target + n * params.offset_k_quanta) * PERTURB_GRID
    window_g = PERTURB_GRID // 2
    oracle_yes = solve_auto(instance).verdict is Verdict.YES

    rng = random.Random(rng_seed)
    misclassified = 0
    false_pos = 0
    false_neg = 0
    max_err_g = 0
    for _ in range(trials):
        arcs: list[tuple[int, int]] = []
        lo = hi = 0
        for stage in layout.stages:
            skip_e = rng.randint(-err_span, err_span)
            take_e = rng.randint(-err_span, err_span)
            skip_g = stage.skip_delay * PERTURB_GRID + skip_e
            take_g = stage.take_delay * PERTURB_GRID + take_e
            if skip_g <= 0 or take_g <= 0:
                raise InvalidPerturbation(
                    "a sampled length error made a cable non-positive; "
                    "reduce max_error_m"
                )
            arcs.append((skip_g, take_g))
            lo += min(skip_e, take_e)
            hi += max(skip_e, take_e)
        max_err_g = max(max_err_g, abs(lo), abs(hi))

        arrivals = [0]
        for skip_g, take_g in arcs:
            arrivals = [t + skip_g for t in arrivals] + [t + take_g for t in arrivals]
        detected = any(abs(t - target_g) <= window_g for t in arrivals)

        if detected != oracle_yes:
            misclassified += 1
            if detected:
                false_pos += 1
            else:
                false_neg += 1

    return PerturbationReport(
        trials=trials,
        misclassified=misclassified,
        false_positives=false_pos,
        false_negatives=false_neg,
        max_arrival_error_s=max_err_g * params.delay_quantum_s / PERTURB_GRID,
    )
