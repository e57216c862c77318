"""Scenario configuration: typed tree, YAML loading with line tracking, validation.

A config file is a partial YAML document merged over config/default.yaml.
Presets are such files under config/presets/ and can be named directly.
"""

import copy
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

import yaml
from loguru import logger

from ..breakout import DynamicEvent, DynamicEventKind, ScenarioMode
from ..corepath import CORE_MAX_US, CORE_MIN_US, CORE_PRESETS, CorePathModel
from ..domain import FlowKey
from ..engine import Sampler, US_PER_MS
from ..errors import ConfigError, Diagnostic
from ..ran import GrantMode, LossModel, RadioTiming
from ..traffic import OnOffProfile
from . import constants as C

CONFIG_DIR = Path(__file__).resolve().parents[2] / "config"
DEFAULT_CONFIG = CONFIG_DIR / "default.yaml"
PRESET_DIR = CONFIG_DIR / "presets"


class Measurement(Enum):
    EVENT = "event"
    ANALYTIC = "analytic"


@dataclass(frozen=True)
class CellConfig:
    radius_m: float = C.CELL_RADIUS_M
    gnb_pos: Tuple[float, float, float] = C.GNB_POSITION
    ue_height_m: float = C.UE_HEIGHT_M


@dataclass(frozen=True)
class TopologyConfig:
    """Generated groups: group k is sourced by UE k*(r+1), the next r UEs receive."""
    n_groups: int = 1
    receivers_per_group: int = C.N_UES_MAX - 1

    def generate(self) -> List["GroupConfig"]:
        stride = self.receivers_per_group + 1
        return [
            GroupConfig(
                source=k * stride,
                receivers=tuple(range(k * stride + 1, (k + 1) * stride)),
                flow=k,
            )
            for k in range(self.n_groups)
        ]


@dataclass(frozen=True)
class GroupConfig:
    source: int
    receivers: Tuple[int, ...]
    flow: int = 0
    local_ft: bool = True
    qos_marking: str = "urllc"

    @property
    def key(self) -> FlowKey:
        return FlowKey(self.source, self.flow)


@dataclass(frozen=True)
class PolicyConfig:
    # None means every configured flow may break out locally.
    allowed_flows: Optional[Tuple[Tuple[int, int], ...]] = None
    prb_budget: int = 100
    prb_required: int = 4


@dataclass(frozen=True)
class DynamicEventConfig:
    at_us: int
    kind: DynamicEventKind
    ue: Optional[int] = None
    source: Optional[int] = None
    flow: Optional[int] = None

    def to_event(self) -> DynamicEvent:
        key = FlowKey(self.source, self.flow) if self.source is not None else None
        return DynamicEvent(at=self.at_us, kind=self.kind, ue=self.ue, key=key)


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "default"
    seed: int = 1
    duration_ms: int = C.DURATION_MS
    n_ues: int = C.N_UES_MAX
    cell: CellConfig = field(default_factory=CellConfig)
    topology: TopologyConfig = field(default_factory=TopologyConfig)
    groups: Tuple[GroupConfig, ...] = ()
    traffic: OnOffProfile = field(default_factory=OnOffProfile)
    radio: RadioTiming = field(default_factory=RadioTiming)
    core: CorePathModel = field(default_factory=CorePathModel)
    loss: LossModel = field(default_factory=LossModel)
    policies: PolicyConfig = field(default_factory=PolicyConfig)
    dynamic_events: Tuple[DynamicEventConfig, ...] = ()
    mode: ScenarioMode = ScenarioMode.LOCAL_BREAKOUT
    measurement: Measurement = Measurement.EVENT
    deadline_us: int = C.DEADLINE_US
    reliability_target: float = C.RELIABILITY_TARGET
    dl_only: bool = False
    record_trace: bool = False

    @property
    def horizon_us(self) -> int:
        return self.duration_ms * US_PER_MS

    def resolved_groups(self) -> List[GroupConfig]:
        """Explicit groups when listed, otherwise the generated topology."""
        return list(self.groups) if self.groups else self.topology.generate()

    def with_overrides(self, **changes: Any) -> "ScenarioConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


# ---------------------------------------------------------------------------
# Validation of a typed config
# ---------------------------------------------------------------------------

def _sampler_problems(path: str, sampler: Sampler) -> List[Diagnostic]:
    if sampler.low < 0:
        return [Diagnostic(path, f"sampler bounds must be non-negative, got {sampler}")]
    if sampler.low > sampler.high:
        return [Diagnostic(path, f"uniform lower bound exceeds upper bound in {sampler}")]
    return []


def validate(config: ScenarioConfig, max_ues: int = C.N_UES_MAX) -> List[Diagnostic]:
    """Every referential and range problem in a config; empty when clean."""
    problems: List[Diagnostic] = []
    if config.duration_ms < 0:
        problems.append(Diagnostic("duration_ms", f"must be >= 0, got {config.duration_ms}"))
    if not 1 <= config.n_ues <= max_ues:
        problems.append(Diagnostic("n_ues", f"must lie in [1, {max_ues}], got {config.n_ues}"))
    if config.deadline_us <= 0:
        problems.append(Diagnostic("deadline_us", "must be positive"))
    if not 0.0 < config.reliability_target <= 1.0:
        problems.append(Diagnostic("reliability_target", "must lie in (0, 1]"))
    if not 0 < config.cell.radius_m < math.inf:
        problems.append(Diagnostic("cell.radius_m", "must be positive and finite"))

    problems += _sampler_problems("radio.ul_grant_delay_us", config.radio.ul_grant_delay)
    problems += _sampler_problems("radio.gnb_proc_delay_us", config.radio.gnb_proc_delay)
    problems += _sampler_problems("core.delay_us", config.core.delay_sampler)
    if not config.core.allow_out_of_range and not config.core.within_nominal_range:
        problems.append(Diagnostic(
            "core.delay_us",
            f"{config.core.delay_sampler} leaves [{CORE_MIN_US}, {CORE_MAX_US}] us; "
            "set core.allow_out_of_range to accept it",
        ))

    section = "groups" if config.groups else "topology"
    seen: Dict[FlowKey, int] = {}
    for i, g in enumerate(config.resolved_groups()):
        path = f"groups[{i}]" if config.groups else f"topology (group {i})"
        if not g.receivers:
            problems.append(Diagnostic(f"{path}.receivers" if config.groups else path, "receiver set is empty"))
        if g.source in g.receivers:
            problems.append(Diagnostic(path, f"source {g.source} is also listed as a receiver"))
        if len(set(g.receivers)) != len(g.receivers):
            problems.append(Diagnostic(path, "duplicate receivers"))
        out_of_range = [u for u in (g.source, *g.receivers) if not 0 <= u < config.n_ues]
        if out_of_range:
            problems.append(Diagnostic(
                path, f"UE ids {out_of_range[:5]} outside [0, {config.n_ues}) (n_ues = {config.n_ues})"
            ))
        if g.key in seen:
            problems.append(Diagnostic(path, f"flow {g.key} already used by group {seen[g.key]}"))
        seen[g.key] = i
    if not seen:
        problems.append(Diagnostic(section, "at least one group is required"))

    if config.policies.allowed_flows is not None:
        for j, (s, f) in enumerate(config.policies.allowed_flows):
            if FlowKey(s, f) not in seen:
                problems.append(Diagnostic(f"policies.allowed_flows[{j}]", f"flow ({s},{f}) has no group"))

    for j, ev in enumerate(config.dynamic_events):
        path = f"dynamic_events[{j}]"
        if ev.at_us < 0:
            problems.append(Diagnostic(f"{path}.at_us", "must be >= 0"))
        if ev.kind in (DynamicEventKind.DETACH, DynamicEventKind.ATTACH):
            if ev.ue is None or not 0 <= ev.ue < config.n_ues:
                problems.append(Diagnostic(f"{path}.ue", f"{ev.kind.value} needs a UE id in [0, {config.n_ues})"))
        elif ev.source is None or ev.flow is None or FlowKey(ev.source, ev.flow) not in seen:
            problems.append(Diagnostic(path, f"{ev.kind.value} needs the source and flow of a configured group"))
    return problems


# ---------------------------------------------------------------------------
# YAML loading
# ---------------------------------------------------------------------------

def line_map(text: str) -> Dict[str, int]:
    """Dotted key path -> 1-based source line, from the YAML node tree."""
    root = yaml.compose(text)
    lines: Dict[str, int] = {}

    def walk(node, prefix: str):
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                path = f"{prefix}.{key_node.value}" if prefix else str(key_node.value)
                lines[path] = key_node.start_mark.line + 1
                walk(value_node, path)
        elif isinstance(node, yaml.SequenceNode):
            for i, item in enumerate(node.value):
                path = f"{prefix}[{i}]"
                lines[path] = item.start_mark.line + 1
                walk(item, path)

    if root is not None:
        walk(root, "")
    return lines


def deep_merge(base: Dict[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    """Mappings merge key by key; everything else (lists included) is replaced."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def resolve_config_path(name: Union[str, Path]) -> Path:
    """A file path, or the name of a preset under config/presets/."""
    path = Path(name)
    if path.is_file():
        return path
    for candidate in (PRESET_DIR / f"{name}.yaml", CONFIG_DIR / f"{name}.yaml"):
        if candidate.is_file():
            return candidate
    available = sorted(p.stem for p in PRESET_DIR.glob("*.yaml"))
    raise ConfigError([Diagnostic(str(name), f"no such file or preset (presets: {', '.join(available)})")])


def _read_yaml(path: Path) -> Tuple[Dict[str, Any], Dict[str, int]]:
    text = path.read_text()
    try:
        data = yaml.safe_load(text) or {}
        lines = line_map(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError([Diagnostic("<document>", f"YAML syntax error: {e}", line)], source=str(path))
    if not isinstance(data, dict):
        raise ConfigError([Diagnostic("<document>", "top level must be a mapping", 1)], source=str(path))
    return data, lines


def load_config(name: Union[str, Path]) -> ScenarioConfig:
    path = resolve_config_path(name)
    data, lines = _read_yaml(path)
    if path.resolve() != DEFAULT_CONFIG.resolve() and DEFAULT_CONFIG.is_file():
        defaults, _ = _read_yaml(DEFAULT_CONFIG)
        data = deep_merge(defaults, data)
    data.setdefault("name", path.stem)
    config = parse_config(data, lines=lines, source=str(path))
    logger.info(f"Loaded scenario '{config.name}' from {path}")
    return config


def parse_config(
    data: Mapping[str, Any],
    lines: Optional[Mapping[str, int]] = None,
    source: Optional[str] = None,
) -> ScenarioConfig:
    """Typed config from a raw mapping; every problem found is reported at once."""
    reader = _Reader(lines or {})
    config = reader.scenario(data)
    # Fields the reader rejected hold their defaults; skip repeats at those paths.
    flagged = [d.path for d in reader.diagnostics]
    reader.diagnostics += [d for d in validate(config) if not any(_overlaps(d.path, p) for p in flagged)]
    if reader.diagnostics:
        for d in reader.diagnostics:
            if d.line is None:
                d.line = reader.line_for(d.path)
        raise ConfigError(reader.diagnostics, source=source)
    return config


def _overlaps(a: str, b: str) -> bool:
    if a == b:
        return True
    short, long = sorted((a, b), key=len)
    return long.startswith(short) and long[len(short)] in ".["


_NUMBER = (int, float)

_SCENARIO_KEYS = {
    "name", "seed", "duration_ms", "n_ues", "cell", "topology", "groups", "traffic", "radio",
    "core", "loss", "policies", "dynamic_events", "mode", "measurement", "deadline_us",
    "reliability_target", "dl_only", "record_trace",
}


class _Reader:
    """Walks the raw mapping, collecting diagnostics instead of stopping at the first."""

    def __init__(self, lines: Mapping[str, int]):
        self.lines = lines
        self.diagnostics: List[Diagnostic] = []

    def line_for(self, path: str) -> Optional[int]:
        while path:
            if path in self.lines:
                return self.lines[path]
            cut = max(path.rfind("."), path.rfind("["))
            if cut <= 0:
                break
            path = path[:cut]
        return self.lines.get(path)

    def error(self, path: str, message: str):
        self.diagnostics.append(Diagnostic(path, message, self.line_for(path)))

    def mapping(self, data: Mapping, path: str, allowed: set) -> Mapping:
        value = data.get(path.rsplit(".", 1)[-1]) if path else data
        if value is None:
            return {}
        if not isinstance(value, Mapping):
            self.error(path, f"expected a mapping, got {type(value).__name__}")
            return {}
        for key in value:
            if key not in allowed:
                self.error(f"{path}.{key}" if path else str(key), "unknown key")
        return value

    def get(
        self,
        data: Mapping,
        path: str,
        default: Any,
        kinds: Tuple[type, ...],
        check: Optional[Callable[[Any], bool]] = None,
        expect: str = "",
    ) -> Any:
        key = path.rsplit(".", 1)[-1]
        if key not in data or data[key] is None:
            return default
        value = data[key]
        if (isinstance(value, bool) and bool not in kinds) or not isinstance(value, kinds):
            self.error(path, f"expected {' or '.join(k.__name__ for k in kinds)}, got {value!r}")
            return default
        if isinstance(value, float) and not math.isfinite(value):
            self.error(path, f"must be finite, got {value!r}")
            return default
        if check is not None and not check(value):
            self.error(path, f"{expect}, got {value!r}")
            return default
        return value

    def integer(self, data, path, default, minimum=None):
        check = None if minimum is None else (lambda v: v >= minimum)
        return self.get(data, path, default, (int,), check, f"must be >= {minimum}")

    def enum(self, data, path, default, enum_cls):
        value = self.get(data, path, default.value, (str,))
        try:
            return enum_cls(value)
        except ValueError:
            self.error(path, f"must be one of {[e.value for e in enum_cls]}, got {value!r}")
            return default

    def sampler(self, data, path, default: Sampler) -> Sampler:
        key = path.rsplit(".", 1)[-1]
        if key not in data or data[key] is None:
            return default
        try:
            return Sampler.from_spec(data[key])
        except ValueError as e:
            self.error(path, str(e))
            return default

    def build(self, path: str, factory: Callable[..., Any], fallback: Any, **kwargs) -> Any:
        try:
            return factory(**kwargs)
        except ValueError as e:
            self.error(path, str(e))
            return fallback

    # -- sections ----------------------------------------------------------

    def scenario(self, data: Mapping) -> ScenarioConfig:
        self.mapping(data, "", _SCENARIO_KEYS)
        d = ScenarioConfig()
        return ScenarioConfig(
            name=str(self.get(data, "name", d.name, (str, int))),
            seed=self.integer(data, "seed", d.seed, minimum=0),
            duration_ms=self.integer(data, "duration_ms", d.duration_ms, minimum=0),
            n_ues=self.integer(data, "n_ues", d.n_ues, minimum=1),
            cell=self.cell(data),
            topology=self.topology(data),
            groups=self.groups(data),
            traffic=self.traffic(data),
            radio=self.radio(data),
            core=self.core(data),
            loss=self.loss(data),
            policies=self.policies(data),
            dynamic_events=self.dynamic_events(data),
            mode=self.enum(data, "mode", d.mode, ScenarioMode),
            measurement=self.enum(data, "measurement", d.measurement, Measurement),
            deadline_us=self.integer(data, "deadline_us", d.deadline_us, minimum=1),
            reliability_target=float(self.get(
                data, "reliability_target", d.reliability_target, _NUMBER,
                lambda v: 0 < v <= 1, "must lie in (0, 1]",
            )),
            dl_only=self.get(data, "dl_only", d.dl_only, (bool,)),
            record_trace=self.get(data, "record_trace", d.record_trace, (bool,)),
        )

    def cell(self, data) -> CellConfig:
        sec = self.mapping(data, "cell", {"radius_m", "gnb_pos", "ue_height_m"})
        d = CellConfig()
        pos = self.get(
            sec, "cell.gnb_pos", list(d.gnb_pos), (list,),
            lambda v: len(v) == 3 and all(isinstance(x, _NUMBER) and math.isfinite(x) for x in v), "must be [x, y, z]",
        )
        return CellConfig(
            radius_m=float(self.get(sec, "cell.radius_m", d.radius_m, _NUMBER, lambda v: v > 0, "must be positive")),
            gnb_pos=tuple(float(x) for x in pos),
            ue_height_m=float(self.get(sec, "cell.ue_height_m", d.ue_height_m, _NUMBER)),
        )

    def topology(self, data) -> TopologyConfig:
        sec = self.mapping(data, "topology", {"n_groups", "receivers_per_group"})
        d = TopologyConfig()
        return TopologyConfig(
            n_groups=self.integer(sec, "topology.n_groups", d.n_groups, minimum=1),
            receivers_per_group=self.integer(sec, "topology.receivers_per_group", d.receivers_per_group, minimum=1),
        )

    def groups(self, data) -> Tuple[GroupConfig, ...]:
        raw = self.get(data, "groups", [], (list,))
        groups = []
        for i, item in enumerate(raw):
            path = f"groups[{i}]"
            if not isinstance(item, Mapping):
                self.error(path, "expected a mapping with source and receivers")
                continue
            for key in item:
                if key not in {"source", "receivers", "flow", "local_ft", "qos_marking"}:
                    self.error(f"{path}.{key}", "unknown key")
            if "source" not in item:
                self.error(path, "missing source")
                continue
            receivers = self.get(
                item, f"{path}.receivers", [], (list,),
                lambda v: all(isinstance(x, int) and not isinstance(x, bool) for x in v), "must be a list of UE ids",
            )
            if not receivers:
                self.error(f"{path}.receivers", "receiver set is empty")
            groups.append(GroupConfig(
                source=self.integer(item, f"{path}.source", 0, minimum=0),
                receivers=tuple(receivers),
                flow=self.integer(item, f"{path}.flow", i, minimum=0),
                local_ft=self.get(item, f"{path}.local_ft", True, (bool,)),
                qos_marking=str(self.get(item, f"{path}.qos_marking", "urllc", (str,))),
            ))
        return tuple(groups)

    def traffic(self, data) -> OnOffProfile:
        keys = {"on_time_us", "off_time_us", "data_rate_bps", "packet_bits", "exp_interarrival", "synchronized_phases"}
        sec = self.mapping(data, "traffic", keys)
        d = OnOffProfile()
        kwargs = {
            k: self.integer(sec, f"traffic.{k}", getattr(d, k), minimum=1)
            for k in ("on_time_us", "off_time_us", "data_rate_bps", "packet_bits")
        }
        kwargs["exp_interarrival"] = self.get(sec, "traffic.exp_interarrival", d.exp_interarrival, (bool,))
        kwargs["synchronized_phases"] = self.get(sec, "traffic.synchronized_phases", d.synchronized_phases, (bool,))
        return self.build("traffic", OnOffProfile, d, **kwargs)

    def radio(self, data) -> RadioTiming:
        keys = {
            "slot_len_us", "ul_grant_mode", "ul_grant_delay_us", "gnb_proc_delay_us",
            "dl_tx_slots", "ul_tx_slots", "nak_window_us", "repair_proc_delay_us",
        }
        sec = self.mapping(data, "radio", keys)
        d = RadioTiming()
        return self.build(
            "radio", RadioTiming, d,
            slot_len_us=self.integer(sec, "radio.slot_len_us", d.slot_len_us, minimum=1),
            ul_grant_mode=self.enum(sec, "radio.ul_grant_mode", d.ul_grant_mode, GrantMode),
            ul_grant_delay=self.sampler(sec, "radio.ul_grant_delay_us", d.ul_grant_delay),
            gnb_proc_delay=self.sampler(sec, "radio.gnb_proc_delay_us", d.gnb_proc_delay),
            dl_tx_slots=self.integer(sec, "radio.dl_tx_slots", d.dl_tx_slots, minimum=1),
            ul_tx_slots=self.integer(sec, "radio.ul_tx_slots", d.ul_tx_slots, minimum=1),
            nak_window_us=self.integer(sec, "radio.nak_window_us", d.nak_window_us, minimum=0),
            repair_proc_delay_us=self.integer(sec, "radio.repair_proc_delay_us", d.repair_proc_delay_us, minimum=0),
        )

    def core(self, data) -> CorePathModel:
        sec = self.mapping(data, "core", {"preset", "delay_us", "allow_out_of_range"})
        d = CorePathModel()
        sampler = d.delay_sampler
        preset = self.get(sec, "core.preset", None, (str,))
        if preset is not None:
            if preset in CORE_PRESETS:
                sampler = CORE_PRESETS[preset]
            else:
                self.error("core.preset", f"unknown preset {preset!r}, choose from {sorted(CORE_PRESETS)}")
        sampler = self.sampler(sec, "core.delay_us", sampler)
        return self.build(
            "core", CorePathModel, d,
            delay_sampler=sampler,
            allow_out_of_range=self.get(sec, "core.allow_out_of_range", d.allow_out_of_range, (bool,)),
        )

    def loss(self, data) -> LossModel:
        sec = self.mapping(data, "loss", {"per_receiver_loss_prob", "max_repair_attempts"})
        d = LossModel()
        return self.build(
            "loss", LossModel, d,
            per_receiver_loss_prob=float(self.get(
                sec, "loss.per_receiver_loss_prob", d.per_receiver_loss_prob, _NUMBER,
                lambda v: 0 <= v <= 1, "must lie in [0, 1]",
            )),
            max_repair_attempts=self.integer(sec, "loss.max_repair_attempts", d.max_repair_attempts, minimum=0),
        )

    def policies(self, data) -> PolicyConfig:
        sec = self.mapping(data, "policies", {"allowed_flows", "prb_budget", "prb_required"})
        d = PolicyConfig()
        raw = sec.get("allowed_flows", "all")
        allowed = d.allowed_flows
        if raw is None or raw == "all":
            allowed = None
        elif raw == "none":
            allowed = ()
        elif isinstance(raw, list) and all(
            isinstance(p, list) and len(p) == 2 and all(isinstance(x, int) for x in p) for p in raw
        ):
            allowed = tuple((int(s), int(f)) for s, f in raw)
        else:
            self.error("policies.allowed_flows", f"expected 'all', 'none' or a list of [source, flow], got {raw!r}")
        return PolicyConfig(
            allowed_flows=allowed,
            prb_budget=self.integer(sec, "policies.prb_budget", d.prb_budget, minimum=0),
            prb_required=self.integer(sec, "policies.prb_required", d.prb_required, minimum=1),
        )

    def dynamic_events(self, data) -> Tuple[DynamicEventConfig, ...]:
        raw = self.get(data, "dynamic_events", [], (list,))
        events = []
        for i, item in enumerate(raw):
            path = f"dynamic_events[{i}]"
            if not isinstance(item, Mapping) or "at_us" not in item or "kind" not in item:
                self.error(path, "expected a mapping with at_us and kind")
                continue
            for key in item:
                if key not in {"at_us", "kind", "ue", "source", "flow"}:
                    self.error(f"{path}.{key}", "unknown key")
            events.append(DynamicEventConfig(
                at_us=self.integer(item, f"{path}.at_us", 0, minimum=0),
                kind=self.enum(item, f"{path}.kind", DynamicEventKind.DETACH, DynamicEventKind),
                ue=self.get(item, f"{path}.ue", None, (int,)),
                source=self.get(item, f"{path}.source", None, (int,)),
                flow=self.get(item, f"{path}.flow", None, (int,)),
            ))
        return tuple(events)


def config_to_dict(config: ScenarioConfig) -> Dict[str, Any]:
    """Plain mapping in the YAML layout, for summaries and round trips."""
    return {
        "name": config.name,
        "seed": config.seed,
        "duration_ms": config.duration_ms,
        "n_ues": config.n_ues,
        "mode": config.mode.value,
        "measurement": config.measurement.value,
        "deadline_us": config.deadline_us,
        "reliability_target": config.reliability_target,
        "dl_only": config.dl_only,
        "record_trace": config.record_trace,
        "cell": {
            "radius_m": config.cell.radius_m,
            "gnb_pos": list(config.cell.gnb_pos),
            "ue_height_m": config.cell.ue_height_m,
        },
        "topology": {
            "n_groups": config.topology.n_groups,
            "receivers_per_group": config.topology.receivers_per_group,
        },
        "groups": [
            {"source": g.source, "receivers": list(g.receivers), "flow": g.flow,
             "local_ft": g.local_ft, "qos_marking": g.qos_marking}
            for g in config.groups
        ],
        "traffic": {
            "on_time_us": config.traffic.on_time_us,
            "off_time_us": config.traffic.off_time_us,
            "data_rate_bps": config.traffic.data_rate_bps,
            "packet_bits": config.traffic.packet_bits,
            "exp_interarrival": config.traffic.exp_interarrival,
            "synchronized_phases": config.traffic.synchronized_phases,
        },
        "radio": {
            "slot_len_us": config.radio.slot_len_us,
            "ul_grant_mode": config.radio.ul_grant_mode.value,
            "ul_grant_delay_us": config.radio.ul_grant_delay.to_spec(),
            "gnb_proc_delay_us": config.radio.gnb_proc_delay.to_spec(),
            "dl_tx_slots": config.radio.dl_tx_slots,
            "ul_tx_slots": config.radio.ul_tx_slots,
            "nak_window_us": config.radio.nak_window_us,
            "repair_proc_delay_us": config.radio.repair_proc_delay_us,
        },
        "core": {
            "delay_us": config.core.delay_sampler.to_spec(),
            "allow_out_of_range": config.core.allow_out_of_range,
        },
        "loss": {
            "per_receiver_loss_prob": config.loss.per_receiver_loss_prob,
            "max_repair_attempts": config.loss.max_repair_attempts,
        },
        "policies": {
            "allowed_flows": "all" if config.policies.allowed_flows is None
            else [list(p) for p in config.policies.allowed_flows],
            "prb_budget": config.policies.prb_budget,
            "prb_required": config.policies.prb_required,
        },
        "dynamic_events": [
            {k: v for k, v in (("at_us", ev.at_us), ("kind", ev.kind.value), ("ue", ev.ue),
                               ("source", ev.source), ("flow", ev.flow)) if v is not None}
            for ev in config.dynamic_events
        ],
    }
