"""Core domain types for household load simulations.

Everything configurable lives in a single JSON scenario document with three
top level sections: "scenario" (run parameters), "archetypes" (household
profiles) and "appliances" (the appliance catalog).  Times are written as
"HH:MM" strings and held internally as minutes since midnight.  Validation
is collecting: a bad document yields the full list of violations, not just
the first one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

MINUTES_PER_DAY = 1440
PROFILE_BUCKETS = 48  # half hour switch-on propensity buckets

# violation codes used by validate_scenario
MIX_NOT_NORMALIZED = "MixNotNormalized"
UNKNOWN_ARCHETYPE = "UnknownArchetype"
UNKNOWN_APPLIANCE = "UnknownAppliance"
BAD_WINDOW = "BadWindow"
BAD_PROFILE_LENGTH = "BadProfileLength"
BAD_DEGREE = "BadDegree"
BAD_VALUE = "BadValue"

MIX_TOLERANCE = 1e-9


@dataclass(frozen=True, slots=True)
class TimeOfDay:
    """A clock time, stored as whole minutes since midnight."""

    minutes: int

    def __post_init__(self) -> None:
        if not isinstance(self.minutes, int) or isinstance(self.minutes, bool):
            raise ValueError(f"minutes must be an int, got {self.minutes!r}")
        if not 0 <= self.minutes < MINUTES_PER_DAY:
            raise ValueError(f"minutes out of range [0, 1440): {self.minutes}")

    @classmethod
    def parse(cls, text: str) -> "TimeOfDay":
        """Parse "HH:MM". Raises ValueError on anything else."""
        if not isinstance(text, str):
            raise ValueError(f"expected HH:MM string, got {text!r}")
        parts = text.split(":")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ValueError(f"expected HH:MM string, got {text!r}")
        hours, mins = int(parts[0]), int(parts[1])
        if hours > 23 or mins > 59:
            raise ValueError(f"clock time out of range: {text!r}")
        return cls(hours * 60 + mins)

    def __str__(self) -> str:
        return f"{self.minutes // 60:02d}:{self.minutes % 60:02d}"


@dataclass(frozen=True, slots=True)
class ApplianceSpec:
    """One appliance type from the catalog.

    usage_profile holds 48 half hour switch-on propensities in [0, 1],
    applied per tick while the household is at home.  mean_on_minutes is
    the average on stretch used to derive the per tick switch-off
    probability; None means the appliance never switches itself off
    (always-on base load such as cold appliances).
    """

    id: str
    label: str
    power_watts: float
    usage_profile: tuple[float, ...]
    deferrable: bool
    mean_on_minutes: float | None = 60.0


@dataclass(frozen=True, slots=True)
class ArchetypeSpec:
    """A household archetype: who lives there and how they behave."""

    id: str
    label: str
    leave_window: tuple[TimeOfDay, TimeOfDay]
    return_window: tuple[TimeOfDay, TimeOfDay]
    awareness: float  # propensity to talk about the technology, [0, 1]
    learning_rate_k: float
    max_attainable_M: float
    appliances: tuple[tuple[str, int], ...]  # (appliance id, count)


@dataclass(frozen=True, slots=True)
class LearningState:
    """Per agent learning progress once influenced.

    trials_t counts reinforced trials; experienced flips (and stays) true
    once the learning curve value reaches the adoption threshold.
    """

    trials_t: int
    experienced: bool

    def __post_init__(self) -> None:
        if self.trials_t < 0:
            raise ValueError("trials_t must be non-negative")


@dataclass(slots=True)
class AgentState:
    """Mutable per agent simulation state.

    learning is None while the agent is uninfluenced.  appliance_on has one
    flag per owned appliance instance, in archetype bundle order.  The
    leave/return times are resampled every simulated day and always fall
    inside the archetype windows.  bonus_trial_today caps peer learning at
    one extra trial per day.
    """

    agent_id: int
    archetype_id: str
    at_home: bool
    learning: LearningState | None
    appliance_on: list[bool]
    today_leave: int  # minutes since midnight
    today_return: int
    bonus_trial_today: bool = False


@dataclass(frozen=True, slots=True)
class ScenarioConfig:
    """Validated run parameters (the "scenario" JSON section)."""

    population: int
    archetype_mix: tuple[tuple[str, float], ...]
    network_mean_degree_K: int
    network_rewire_beta: float
    p_threshold: float
    intervention_start_day: int
    initial_experienced_fraction: float
    horizon_days: int
    tick_minutes: int
    base_interaction_rate: float
    seed: int
    peak_window: tuple[TimeOfDay, TimeOfDay] = (TimeOfDay(1020), TimeOfDay(1200))
    peak_suppression: float = 0.5

    @property
    def ticks_per_day(self) -> int:
        return MINUTES_PER_DAY // self.tick_minutes


@dataclass(frozen=True, slots=True)
class Scenario:
    """A fully cross referenced scenario: config plus resolved catalogs."""

    config: ScenarioConfig
    archetypes: tuple[ArchetypeSpec, ...]
    appliances: tuple[ApplianceSpec, ...]

    def archetype(self, archetype_id: str) -> ArchetypeSpec:
        for a in self.archetypes:
            if a.id == archetype_id:
                return a
        raise KeyError(archetype_id)

    def appliance(self, appliance_id: str) -> ApplianceSpec:
        for a in self.appliances:
            if a.id == appliance_id:
                return a
        raise KeyError(appliance_id)


@dataclass(frozen=True, slots=True)
class ValidationIssue:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class ScenarioValidationError(Exception):
    """Raised by validate_scenario with the complete list of violations."""

    def __init__(self, issues: list[ValidationIssue]):
        self.issues = issues
        super().__init__("\n".join(str(i) for i in issues))


class _Collector:
    """Accumulates violations so validation can report them all at once."""

    def __init__(self) -> None:
        self.issues: list[ValidationIssue] = []

    def add(self, code: str, message: str) -> None:
        self.issues.append(ValidationIssue(code, message))


def _get_number(
    obj: Mapping[str, Any], key: str, where: str, errs: _Collector,
    *, default: float | None = None, required: bool = True,
) -> float | None:
    if key not in obj:
        if required:
            errs.add(BAD_VALUE, f"{where}: missing field '{key}'")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        errs.add(BAD_VALUE, f"{where}: field '{key}' must be a number, got {value!r}")
        return default
    return float(value)


def _get_int(
    obj: Mapping[str, Any], key: str, where: str, errs: _Collector,
    *, default: int | None = None, required: bool = True,
) -> int | None:
    if key not in obj:
        if required:
            errs.add(BAD_VALUE, f"{where}: missing field '{key}'")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        errs.add(BAD_VALUE, f"{where}: field '{key}' must be an integer, got {value!r}")
        return default
    return value


def _get_str(obj: Mapping[str, Any], key: str, where: str, errs: _Collector) -> str | None:
    value = obj.get(key)
    if not isinstance(value, str) or not value:
        errs.add(BAD_VALUE, f"{where}: field '{key}' must be a non-empty string")
        return None
    return value


def _parse_window(
    obj: Mapping[str, Any], key: str, where: str, errs: _Collector,
) -> tuple[TimeOfDay, TimeOfDay] | None:
    raw = obj.get(key)
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        errs.add(BAD_WINDOW, f"{where}: '{key}' must be a [start, end] pair of HH:MM strings")
        return None
    try:
        start, end = TimeOfDay.parse(raw[0]), TimeOfDay.parse(raw[1])
    except ValueError as exc:
        errs.add(BAD_WINDOW, f"{where}: '{key}': {exc}")
        return None
    if start.minutes > end.minutes:
        errs.add(BAD_WINDOW, f"{where}: '{key}' start {start} is after end {end}")
        return None
    return (start, end)


def _parse_appliance(obj: Any, index: int, errs: _Collector) -> ApplianceSpec | None:
    where = f"appliances[{index}]"
    if not isinstance(obj, Mapping):
        errs.add(BAD_VALUE, f"{where}: must be an object")
        return None
    appliance_id = _get_str(obj, "id", where, errs)
    label = obj.get("label", appliance_id or "")
    power = _get_number(obj, "power_watts", where, errs)
    if power is not None and power <= 0:
        errs.add(BAD_VALUE, f"{where}: power_watts must be positive, got {power}")
        power = None

    profile_raw = obj.get("usage_profile")
    profile: tuple[float, ...] | None = None
    if not isinstance(profile_raw, (list, tuple)):
        errs.add(BAD_PROFILE_LENGTH, f"{where}: usage_profile must be a list of {PROFILE_BUCKETS} numbers")
    elif len(profile_raw) != PROFILE_BUCKETS:
        errs.add(
            BAD_PROFILE_LENGTH,
            f"{where}: usage_profile has {len(profile_raw)} entries, expected {PROFILE_BUCKETS}",
        )
    else:
        ok = True
        for i, v in enumerate(profile_raw):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not 0.0 <= float(v) <= 1.0:
                errs.add(BAD_VALUE, f"{where}: usage_profile[{i}] must be a number in [0, 1], got {v!r}")
                ok = False
        if ok:
            profile = tuple(float(v) for v in profile_raw)

    deferrable = obj.get("deferrable", False)
    if not isinstance(deferrable, bool):
        errs.add(BAD_VALUE, f"{where}: deferrable must be a boolean")
        deferrable = False

    mean_on: float | None
    if "mean_on_minutes" in obj and obj["mean_on_minutes"] is None:
        mean_on = None  # never switches itself off
    else:
        mean_on = _get_number(obj, "mean_on_minutes", where, errs, default=60.0, required=False)
        if mean_on is not None and mean_on <= 0:
            errs.add(BAD_VALUE, f"{where}: mean_on_minutes must be positive or null")
            mean_on = 60.0

    if appliance_id is None or power is None or profile is None:
        return None
    return ApplianceSpec(
        id=appliance_id,
        label=str(label),
        power_watts=power,
        usage_profile=profile,
        deferrable=deferrable,
        mean_on_minutes=mean_on,
    )


def _parse_archetype(obj: Any, index: int, errs: _Collector) -> ArchetypeSpec | None:
    where = f"archetypes[{index}]"
    if not isinstance(obj, Mapping):
        errs.add(BAD_VALUE, f"{where}: must be an object")
        return None
    archetype_id = _get_str(obj, "id", where, errs)
    label = obj.get("label", archetype_id or "")

    leave = _parse_window(obj, "leave_window", where, errs)
    ret = _parse_window(obj, "return_window", where, errs)
    if leave is not None and ret is not None and leave[1].minutes >= ret[0].minutes:
        errs.add(
            BAD_WINDOW,
            f"{where}: leave_window must end before return_window starts "
            f"({leave[1]} vs {ret[0]})",
        )
        leave = ret = None

    awareness = _get_number(obj, "awareness", where, errs)
    if awareness is not None and not 0.0 <= awareness <= 1.0:
        errs.add(BAD_VALUE, f"{where}: awareness must be in [0, 1], got {awareness}")
        awareness = None
    k = _get_number(obj, "learning_rate_k", where, errs)
    if k is not None and k <= 0:
        errs.add(BAD_VALUE, f"{where}: learning_rate_k must be positive, got {k}")
        k = None
    m = _get_number(obj, "max_attainable_M", where, errs)
    if m is not None and not 0.0 < m <= 1.0:
        errs.add(BAD_VALUE, f"{where}: max_attainable_M must be in (0, 1], got {m}")
        m = None

    bundle_raw = obj.get("appliances")
    bundle: tuple[tuple[str, int], ...] | None = None
    if not isinstance(bundle_raw, Mapping):
        errs.add(BAD_VALUE, f"{where}: appliances must be an object of id -> count")
    else:
        items: list[tuple[str, int]] = []
        ok = True
        for app_id, count in bundle_raw.items():
            if isinstance(count, bool) or not isinstance(count, int) or count < 0:
                errs.add(BAD_VALUE, f"{where}: appliance count for '{app_id}' must be a non-negative integer")
                ok = False
            else:
                items.append((str(app_id), count))
        if ok:
            bundle = tuple(items)

    if None in (archetype_id, leave, ret, awareness, k, m) or bundle is None:
        return None
    return ArchetypeSpec(
        id=archetype_id,  # type: ignore[arg-type]
        label=str(label),
        leave_window=leave,  # type: ignore[arg-type]
        return_window=ret,  # type: ignore[arg-type]
        awareness=awareness,  # type: ignore[arg-type]
        learning_rate_k=k,  # type: ignore[arg-type]
        max_attainable_M=m,  # type: ignore[arg-type]
        appliances=bundle,
    )


def _parse_scenario_section(
    obj: Any, errs: _Collector,
) -> ScenarioConfig | None:
    where = "scenario"
    if not isinstance(obj, Mapping):
        errs.add(BAD_VALUE, "scenario: must be an object")
        return None

    population = _get_int(obj, "population", where, errs)
    if population is not None and population <= 0:
        errs.add(BAD_VALUE, f"{where}: population must be positive, got {population}")
        population = None

    mix_raw = obj.get("archetype_mix")
    mix: tuple[tuple[str, float], ...] | None = None
    if not isinstance(mix_raw, Mapping) or not mix_raw:
        errs.add(BAD_VALUE, f"{where}: archetype_mix must be a non-empty object of id -> fraction")
    else:
        pairs: list[tuple[str, float]] = []
        ok = True
        for arch_id, frac in mix_raw.items():
            if isinstance(frac, bool) or not isinstance(frac, (int, float)) or not 0.0 <= float(frac) <= 1.0:
                errs.add(BAD_VALUE, f"{where}: mix fraction for '{arch_id}' must be a number in [0, 1]")
                ok = False
            else:
                pairs.append((str(arch_id), float(frac)))
        if ok:
            total = sum(f for _, f in pairs)
            if abs(total - 1.0) > MIX_TOLERANCE:
                errs.add(MIX_NOT_NORMALIZED, f"{where}: archetype_mix sums to {total!r}, expected 1.0")
            else:
                mix = tuple(pairs)

    degree = _get_int(obj, "network_mean_degree_K", where, errs)
    if degree is not None and (degree <= 0 or degree % 2 != 0):
        errs.add(BAD_DEGREE, f"{where}: network_mean_degree_K must be a positive even integer, got {degree}")
        degree = None
    if degree is not None and population is not None and degree >= population:
        errs.add(BAD_DEGREE, f"{where}: network_mean_degree_K ({degree}) must be smaller than population ({population})")
        degree = None

    beta = _get_number(obj, "network_rewire_beta", where, errs)
    if beta is not None and not 0.0 <= beta <= 1.0:
        errs.add(BAD_VALUE, f"{where}: network_rewire_beta must be in [0, 1], got {beta}")
        beta = None

    p_threshold = _get_number(obj, "p_threshold", where, errs)
    if p_threshold is not None and not 0.0 < p_threshold <= 1.0:
        errs.add(BAD_VALUE, f"{where}: p_threshold must be in (0, 1], got {p_threshold}")
        p_threshold = None

    start_day = _get_int(obj, "intervention_start_day", where, errs)
    if start_day is not None and start_day < 0:
        errs.add(BAD_VALUE, f"{where}: intervention_start_day must be non-negative, got {start_day}")
        start_day = None

    exp_frac = _get_number(obj, "initial_experienced_fraction", where, errs)
    if exp_frac is not None and not 0.0 <= exp_frac <= 1.0:
        errs.add(BAD_VALUE, f"{where}: initial_experienced_fraction must be in [0, 1], got {exp_frac}")
        exp_frac = None

    horizon = _get_int(obj, "horizon_days", where, errs)
    if horizon is not None and horizon <= 0:
        errs.add(BAD_VALUE, f"{where}: horizon_days must be positive, got {horizon}")
        horizon = None

    tick = _get_int(obj, "tick_minutes", where, errs)
    if tick is not None and (tick <= 0 or MINUTES_PER_DAY % tick != 0):
        errs.add(BAD_VALUE, f"{where}: tick_minutes must be a positive divisor of 1440, got {tick}")
        tick = None

    rate = _get_number(obj, "base_interaction_rate", where, errs)
    if rate is not None and not 0.0 <= rate <= 1.0:
        errs.add(BAD_VALUE, f"{where}: base_interaction_rate must be in [0, 1], got {rate}")
        rate = None

    seed = _get_int(obj, "seed", where, errs)
    if seed is not None and not 0 <= seed < 2**64:
        errs.add(BAD_VALUE, f"{where}: seed must be an unsigned 64-bit integer, got {seed}")
        seed = None

    peak_window = (TimeOfDay(1020), TimeOfDay(1200))  # 17:00 to 20:00
    if "peak_window" in obj:
        parsed = _parse_window(obj, "peak_window", where, errs)
        if parsed is not None:
            if parsed[0].minutes >= parsed[1].minutes:
                errs.add(BAD_WINDOW, f"{where}: peak_window must be non-empty")
            else:
                peak_window = parsed

    suppression = _get_number(obj, "peak_suppression", where, errs, default=0.5, required=False)
    if suppression is None or not 0.0 <= suppression <= 1.0:
        errs.add(BAD_VALUE, f"{where}: peak_suppression must be in [0, 1]")
        suppression = 0.5

    fields = (population, mix, degree, beta, p_threshold, start_day, exp_frac,
              horizon, tick, rate, seed)
    if any(f is None for f in fields):
        return None
    return ScenarioConfig(
        population=population,  # type: ignore[arg-type]
        archetype_mix=mix,  # type: ignore[arg-type]
        network_mean_degree_K=degree,  # type: ignore[arg-type]
        network_rewire_beta=beta,  # type: ignore[arg-type]
        p_threshold=p_threshold,  # type: ignore[arg-type]
        intervention_start_day=start_day,  # type: ignore[arg-type]
        initial_experienced_fraction=exp_frac,  # type: ignore[arg-type]
        horizon_days=horizon,  # type: ignore[arg-type]
        tick_minutes=tick,  # type: ignore[arg-type]
        base_interaction_rate=rate,  # type: ignore[arg-type]
        seed=seed,  # type: ignore[arg-type]
        peak_window=peak_window,
        peak_suppression=suppression,
    )


def validate_scenario(raw: Mapping[str, Any]) -> Scenario:
    """Validate a parsed scenario document.

    Returns a fully cross referenced Scenario, or raises
    ScenarioValidationError carrying every violation found.  Never raises
    anything else for malformed input.
    """
    errs = _Collector()
    if not isinstance(raw, Mapping):
        errs.add(BAD_VALUE, "document root must be an object")
        raise ScenarioValidationError(errs.issues)

    config = _parse_scenario_section(raw.get("scenario"), errs)

    appliances: list[ApplianceSpec] = []
    appliances_raw = raw.get("appliances")
    if not isinstance(appliances_raw, list):
        errs.add(BAD_VALUE, "appliances: must be a list")
    else:
        for i, obj in enumerate(appliances_raw):
            spec = _parse_appliance(obj, i, errs)
            if spec is not None:
                appliances.append(spec)

    archetypes: list[ArchetypeSpec] = []
    archetypes_raw = raw.get("archetypes")
    if not isinstance(archetypes_raw, list):
        errs.add(BAD_VALUE, "archetypes: must be a list")
    else:
        for i, obj in enumerate(archetypes_raw):
            spec = _parse_archetype(obj, i, errs)
            if spec is not None:
                archetypes.append(spec)

    # duplicate ids make cross references ambiguous
    seen: set[str] = set()
    for spec_list, kind in ((appliances, "appliance"), (archetypes, "archetype")):
        for s in spec_list:
            if s.id in seen:
                errs.add(BAD_VALUE, f"duplicate {kind} id '{s.id}'")
            seen.add(s.id)

    appliance_ids = {a.id for a in appliances}
    archetype_ids = {a.id for a in archetypes}

    for arch in archetypes:
        for app_id, _count in arch.appliances:
            if app_id not in appliance_ids:
                errs.add(
                    UNKNOWN_APPLIANCE,
                    f"archetype '{arch.id}' references unknown appliance '{app_id}'",
                )

    if config is not None:
        for arch_id, _frac in config.archetype_mix:
            if arch_id not in archetype_ids:
                errs.add(
                    UNKNOWN_ARCHETYPE,
                    f"archetype_mix references unknown archetype '{arch_id}'",
                )
        # pre-seeding experienced agents is impossible when the learning
        # curve asymptote never reaches the threshold
        if config.initial_experienced_fraction > 0:
            for arch in archetypes:
                in_mix = any(a == arch.id and f > 0 for a, f in config.archetype_mix)
                if in_mix and config.p_threshold >= arch.max_attainable_M:
                    errs.add(
                        BAD_VALUE,
                        f"archetype '{arch.id}' can never reach p_threshold "
                        f"{config.p_threshold} (max_attainable_M {arch.max_attainable_M}), "
                        "so initial_experienced_fraction > 0 is unsatisfiable",
                    )

    if errs.issues or config is None:
        raise ScenarioValidationError(errs.issues)
    return Scenario(config=config, archetypes=tuple(archetypes), appliances=tuple(appliances))


def load_scenario(path: str) -> Scenario:
    """Read and validate a scenario JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioValidationError(
                [ValidationIssue(BAD_VALUE, f"not valid JSON: {exc}")]
            ) from exc
    return validate_scenario(raw)
