"""Domain model: instances, physical parameters, and device layouts.

An instance is a set of positive numbers plus a target. Before anything is
simulated the numbers are rescaled by a single power of ten so that every one
of them is an integer count of delay quanta and no power of ten is common to
all of them; the device geometry is then a chain of stages, one per set
element, where each stage offers a short "skip" arc and a longer "take" arc.

This module is shared contract: the simulator, the oracles, the feasibility
analysis and the CLI all build on the types defined here. Everything is
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from decimal import Decimal, InvalidOperation
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .errors import InvalidValue, Overflow, ParseError
from .rational import to_fraction

# Normalized values and targets above this are rejected; raise it explicitly
# if you really need larger instances.
DEFAULT_VALUE_CEILING = 10**18


class Verdict(str, Enum):
    """Answer to "does some subset of the values sum to the target?"."""

    YES = "YES"
    NO = "NO"

    @classmethod
    def from_bool(cls, yes: bool) -> "Verdict":
        return cls.YES if yes else cls.NO


def parse_decimal(text: str | int | Decimal) -> Decimal:
    """Parse a finite decimal number exactly.

    Accepts plain and exponent notation ("4.001", "1e-3"). Floats are refused:
    their binary value rarely equals the decimal the caller meant, which would
    silently mis-normalize the instance.
    """
    if isinstance(text, bool):
        raise ParseError("booleans are not numbers")
    if isinstance(text, float):
        raise ParseError(
            f"floats are not accepted ({text!r}); pass the number as a decimal string"
        )
    if isinstance(text, Decimal):
        d = text
    elif isinstance(text, int):
        d = Decimal(text)
    elif isinstance(text, str):
        try:
            d = Decimal(text.strip())
        except InvalidOperation as exc:
            raise ParseError(f"not a finite decimal number: {text!r}") from exc
    else:
        raise ParseError(f"cannot parse {type(text).__name__} as a decimal number")
    if not d.is_finite():
        raise ParseError(f"not a finite decimal number: {text!r}")
    return d


def _least_digit_exponent(d: Decimal) -> int | None:
    """Exponent of the least significant nonzero digit, or None when d == 0.

    2100 -> 2, 0.001 -> -3, 4 -> 0; independent of the textual form the
    number was written in.
    """
    if d == 0:
        return None
    _, digits, exp = d.as_tuple()
    trailing = 0
    while trailing < len(digits) and digits[-1 - trailing] == 0:
        trailing += 1
    return int(exp) + trailing


@dataclass(frozen=True)
class RawInstance:
    """A set of positive decimal numbers and a non-negative decimal target.

    Values are kept as the exact decimal strings the user supplied;
    :func:`normalize` turns them into integer delay quanta.
    """

    values: tuple[str, ...]
    target: str

    def __post_init__(self) -> None:
        for v in self.values:
            if parse_decimal(v) <= 0:
                raise InvalidValue(f"set elements must be strictly positive, got {v!r}")
        if parse_decimal(self.target) < 0:
            raise InvalidValue(f"target must be non-negative, got {self.target!r}")

    @classmethod
    def from_values(
        cls, values: Iterable[str | int | Decimal], target: str | int | Decimal
    ) -> "RawInstance":
        """Build from heterogeneous inputs, rendering each to a decimal string."""
        return cls(
            values=tuple(str(parse_decimal(v)) for v in values),
            target=str(parse_decimal(target)),
        )


@dataclass(frozen=True)
class Instance:
    """A normalized instance: positive integer values, integer target, and the
    exact power-of-ten factor that maps the raw numbers onto these integers."""

    values: tuple[int, ...]
    target: int
    scale: Fraction

    def __post_init__(self) -> None:
        for v in self.values:
            if not isinstance(v, int) or v < 1:
                raise InvalidValue(f"normalized values must be integers >= 1, got {v!r}")
        if not isinstance(self.target, int) or self.target < 0:
            raise InvalidValue(f"normalized target must be an integer >= 0, got {self.target!r}")

    @classmethod
    def from_values(cls, values: Iterable[int], target: int) -> "Instance":
        """Convenience constructor for instances that are already integral."""
        return cls(values=tuple(values), target=target, scale=Fraction(1))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def total(self) -> int:
        return sum(self.values)


def normalize(raw: RawInstance, *, ceiling: int = DEFAULT_VALUE_CEILING) -> Instance:
    """Rescale all values and the target jointly by one power of ten.

    The exponent is chosen so the least significant nonzero digit across the
    whole instance lands immediately before the decimal point: the smallest
    power of ten that makes everything an integer while leaving at least one
    number not divisible by ten. {0.001, 4} / 4.001 becomes {1, 4000} / 4001
    (scale 1000); {100, 2000} / 2100 becomes {1, 20} / 21 (scale 1/100).

    The same factor is applied to values and target; scaling them differently
    would change the answer.
    """
    decimals = [parse_decimal(v) for v in raw.values]
    target_dec = parse_decimal(raw.target)
    exponents = [e for e in map(_least_digit_exponent, decimals + [target_dec]) if e is not None]
    scale_exp = -min(exponents) if exponents else 0
    scale = Fraction(10) ** scale_exp

    def to_quanta(d: Decimal) -> int:
        q = Fraction(d) * scale
        assert q.denominator == 1
        if q.numerator > ceiling:
            raise Overflow(
                f"normalized value {q.numerator} exceeds the ceiling of {ceiling}"
            )
        return q.numerator

    return Instance(
        values=tuple(to_quanta(d) for d in decimals),
        target=to_quanta(target_dec),
        scale=scale,
    )


@dataclass(frozen=True)
class PhysicalParams:
    """Physical constants of the device, held as exact rationals.

    Numeric arguments may be given as int, str, Fraction, Decimal or float;
    floats are read through their decimal repr, so 1e-12 means exactly 10**-12.
    Defaults: picosecond delay quantum (the oscilloscope rise time), vacuum
    light speed, ideal splitters, a 1 W source, photomultiplier gain 1e8 and a
    1 nW detection threshold.
    """

    delay_quantum_s: Fraction = Fraction(1, 10**12)
    light_speed_m_s: Fraction = Fraction(300_000_000)
    velocity_factor: Fraction = Fraction(1)
    offset_k_quanta: int = 1
    source_power_w: Fraction = Fraction(1)
    splitter_transmission: Fraction = Fraction(1)
    detector_gain: Fraction = Fraction(10**8)
    detection_threshold_w: Fraction = Fraction(1, 10**9)

    def __post_init__(self) -> None:
        for f in fields(self):
            if f.name == "offset_k_quanta":
                continue
            object.__setattr__(self, f.name, to_fraction(getattr(self, f.name)))
        if isinstance(self.offset_k_quanta, bool) or not isinstance(self.offset_k_quanta, int):
            raise InvalidValue("offset_k_quanta must be an integer")
        if self.delay_quantum_s <= 0:
            raise InvalidValue("delay_quantum_s must be > 0")
        if self.light_speed_m_s <= 0:
            raise InvalidValue("light_speed_m_s must be > 0")
        if not 0 < self.velocity_factor <= 1:
            raise InvalidValue("velocity_factor must be in (0, 1]")
        if self.offset_k_quanta < 1:
            raise InvalidValue("offset_k_quanta must be >= 1")
        if self.source_power_w <= 0:
            raise InvalidValue("source_power_w must be > 0")
        if not 0 < self.splitter_transmission <= 1:
            raise InvalidValue("splitter_transmission must be in (0, 1]")
        if self.detector_gain <= 0:
            raise InvalidValue("detector_gain must be > 0")
        if self.detection_threshold_w < 0:
            raise InvalidValue("detection_threshold_w must be >= 0")

    @property
    def quantum_length_m(self) -> Fraction:
        """Fiber length that delays a ray by exactly one quantum:
        speed * velocity_factor * quantum. 0.0003 m at the defaults."""
        return self.light_speed_m_s * self.velocity_factor * self.delay_quantum_s


@dataclass(frozen=True)
class Stage:
    """One chain link: a skip arc and a take arc, in integer delay quanta."""

    value: int
    skip_delay: int
    take_delay: int


@dataclass(frozen=True)
class DeviceLayout:
    """The offset device: stage i has skip delay k and take delay a_i + k.

    Every start-to-destination path crosses exactly one arc per stage, so all
    paths accumulate the constant n*k on top of their subset sum.
    """

    stages: tuple[Stage, ...]
    offset_k: int

    def __post_init__(self) -> None:
        if self.offset_k < 1:
            raise InvalidValue("offset_k must be >= 1")
        for s in self.stages:
            if s.value < 1:
                raise InvalidValue(f"stage value must be >= 1, got {s.value}")
            if s.skip_delay != self.offset_k or s.take_delay != s.value + self.offset_k:
                raise InvalidValue(f"stage {s} does not follow the skip=k / take=a+k rule")

    @property
    def node_count(self) -> int:
        return len(self.stages) + 1


@dataclass(frozen=True)
class EpsilonLayout:
    """The flawed variant: skip arcs of tiny length epsilon, take arcs of a_i.

    Kept for demonstration; a target reachable as subset_sum + m*epsilon
    triggers a spurious detection that the offset device avoids.
    """

    stages: tuple[Stage, ...]
    epsilon: int

    def __post_init__(self) -> None:
        if self.epsilon < 1:
            raise InvalidValue("epsilon must be >= 1")
        for s in self.stages:
            if s.value < 1:
                raise InvalidValue(f"stage value must be >= 1, got {s.value}")
            if s.skip_delay != self.epsilon or s.take_delay != s.value:
                raise InvalidValue(f"stage {s} does not follow the skip=eps / take=a rule")

    @property
    def node_count(self) -> int:
        return len(self.stages) + 1


def compile_layout(instance: Instance, params: PhysicalParams) -> DeviceLayout:
    """Build the offset device for a normalized instance.

    Stage order follows instance order; an empty instance compiles to a
    single-node device with no stages.
    """
    k = params.offset_k_quanta
    return DeviceLayout(
        stages=tuple(Stage(value=a, skip_delay=k, take_delay=a + k) for a in instance.values),
        offset_k=k,
    )


def compile_epsilon_layout(instance: Instance, epsilon: int) -> EpsilonLayout:
    """Build the epsilon device (skip arcs of length epsilon, take arcs of a_i)."""
    if epsilon < 1:
        raise InvalidValue("epsilon must be >= 1")
    return EpsilonLayout(
        stages=tuple(Stage(value=a, skip_delay=epsilon, take_delay=a) for a in instance.values),
        epsilon=epsilon,
    )


def cable_lengths(
    layout: DeviceLayout | EpsilonLayout, params: PhysicalParams
) -> list[Fraction]:
    """Physical arc lengths in meters, stage by stage, skip arc then take arc.

    Each length is an exact positive integer multiple of quantum_length_m;
    nothing of the forbidden p*quantum + q form can ever be emitted.
    """
    q = params.quantum_length_m
    out: list[Fraction] = []
    for s in layout.stages:
        out.append(s.skip_delay * q)
        out.append(s.take_delay * q)
    return out


# --- instance files ---------------------------------------------------------
#
# UTF-8 JSON: {"set": [...], "target": ..., "params": {...}} where numbers may
# be decimal strings or JSON numbers (floats are parsed as exact decimals,
# never as binary doubles) and "params" optionally overrides the fields below.

INSTANCE_PARAM_KEYS = (
    "delay_quantum_s",
    "offset_k_quanta",
    "velocity_factor",
    "source_power_w",
    "splitter_transmission",
    "detector_gain",
    "detection_threshold_w",
)


def parse_instance_document(
    doc: object, base_params: PhysicalParams | None = None
) -> tuple[RawInstance, PhysicalParams]:
    """Validate a decoded instance document and apply its params overrides."""
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    unknown = set(doc) - {"set", "target", "params"}
    if unknown:
        raise ParseError(f"unknown instance fields: {sorted(unknown)}")
    if "set" not in doc or "target" not in doc:
        raise ParseError('instance document needs "set" and "target" fields')
    if not isinstance(doc["set"], list):
        raise ParseError('"set" must be an array')
    raw = RawInstance.from_values(doc["set"], doc["target"])

    params = base_params if base_params is not None else PhysicalParams()
    overrides = doc.get("params", {})
    if not isinstance(overrides, dict):
        raise ParseError('"params" must be an object')
    bad = set(overrides) - set(INSTANCE_PARAM_KEYS)
    if bad:
        raise ParseError(f"unknown params fields: {sorted(bad)}")
    if overrides:
        kwargs: dict[str, object] = {}
        for key, value in overrides.items():
            if key == "offset_k_quanta":
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ParseError("offset_k_quanta must be an integer")
                kwargs[key] = value
            else:
                kwargs[key] = to_fraction(value)  # type: ignore[arg-type]
        params = replace(params, **kwargs)  # type: ignore[arg-type]
    return raw, params


def load_instance_file(
    path: str | Path, base_params: PhysicalParams | None = None
) -> tuple[RawInstance, PhysicalParams]:
    """Read and validate an instance file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return parse_instance_document(doc, base_params)
