"""JSON scene/scenario documents and the small CSV formats.

One document format covers both single scenes and scenarios; sections the
caller does not need are simply absent. Parse errors name the offending
field with a JSON-path-like prefix so CLI diagnostics stay actionable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .classify import ClassBands, DEFAULT_BANDS, TargetClass
from .scenario import (
    AddScatterer,
    MoveScatterer,
    Mutation,
    RemoveScatterer,
    Scenario,
    ScenarioStep,
)
from .scene import (
    MATERIAL_PRESETS,
    Material,
    Scatterer,
    Scene,
    TargetKind,
    Wall,
)
from .safety import TierConfig
from .synth import DEFAULT_CHIRP, ChirpConfig
from .throughwall import MonitorZone


@dataclass(frozen=True)
class SceneConfig:
    """Everything a single-scene command can pull from one document."""

    scene: Scene
    chirp: ChirpConfig
    baseline_hint_m: float | None
    bands: ClassBands | None
    zone: MonitorZone | None
    tier_config: TierConfig
    detect_min_rsa: float
    detect_min_prominence: float


def _expect_mapping(node, path: str) -> dict:
    if not isinstance(node, dict):
        raise ValueError(f"{path}: expected an object")
    return node


def _expect_list(node, path: str) -> list:
    if not isinstance(node, list):
        raise ValueError(f"{path}: expected an array")
    return node


def _number(node: dict, key: str, path: str, default=None) -> float:
    if key not in node:
        if default is not None:
            return default
        raise ValueError(f"{path}.{key}: required number missing")
    value = node[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{path}.{key}: expected a number, got {value!r}")
    return float(value)


def _string(node: dict, key: str, path: str, default=None) -> str:
    if key not in node:
        if default is not None:
            return default
        raise ValueError(f"{path}.{key}: required string missing")
    value = node[key]
    if not isinstance(value, str):
        raise ValueError(f"{path}.{key}: expected a string, got {value!r}")
    return value


def _material(node, path: str) -> Material:
    if isinstance(node, str):
        if node not in MATERIAL_PRESETS:
            raise ValueError(
                f"{path}: unknown material preset '{node}'; "
                f"known: {', '.join(sorted(MATERIAL_PRESETS))}"
            )
        return MATERIAL_PRESETS[node]
    m = _expect_mapping(node, path)
    return Material(
        name=_string(m, "name", path),
        reflectivity=_number(m, "reflectivity", path),
        transmissivity=_number(m, "transmissivity", path),
    )


def _scatterer(node, path: str) -> Scatterer:
    m = _expect_mapping(node, path)
    kind_name = _string(m, "kind", path, default="generic")
    try:
        kind = TargetKind(kind_name)
    except ValueError:
        raise ValueError(f"{path}.kind: unknown kind '{kind_name}'") from None
    extent = None
    if "extent_m" in m:
        raw = _expect_list(m["extent_m"], f"{path}.extent_m")
        if len(raw) != 2:
            raise ValueError(f"{path}.extent_m: expected [width, height]")
        extent = (float(raw[0]), float(raw[1]))
    return Scatterer(
        id=_string(m, "id", path),
        range_m=_number(m, "range_m", path),
        material=_material(m.get("material", "human"), f"{path}.material"),
        kind=kind,
        extent_m=extent,
    )


def _wall(node, path: str) -> Wall:
    m = _expect_mapping(node, path)
    return Wall(
        id=_string(m, "id", path),
        range_m=_number(m, "range_m", path),
        material=_material(m.get("material", "plasterboard"), f"{path}.material"),
    )


def _chirp(doc: dict) -> ChirpConfig:
    if "chirp" not in doc:
        return DEFAULT_CHIRP
    node = _expect_mapping(doc["chirp"], "chirp")
    return ChirpConfig(
        center_freq_hz=_number(node, "center_freq_hz", "chirp", DEFAULT_CHIRP.center_freq_hz),
        bandwidth_hz=_number(node, "bandwidth_hz", "chirp", DEFAULT_CHIRP.bandwidth_hz),
        sweep_time_s=_number(node, "sweep_time_s", "chirp", DEFAULT_CHIRP.sweep_time_s),
        sample_rate_hz=_number(node, "sample_rate_hz", "chirp", DEFAULT_CHIRP.sample_rate_hz),
    )


def _scene(doc: dict) -> Scene:
    node = _expect_mapping(doc.get("scene", {}), "scene")
    scatterers = tuple(
        _scatterer(s, f"scene.scatterers[{i}]")
        for i, s in enumerate(_expect_list(node.get("scatterers", []), "scene.scatterers"))
    )
    walls = tuple(
        _wall(w, f"scene.walls[{i}]")
        for i, w in enumerate(_expect_list(node.get("walls", []), "scene.walls"))
    )
    phase_seed = node.get("phase_seed")
    if phase_seed is not None and not isinstance(phase_seed, int):
        raise ValueError(f"scene.phase_seed: expected an integer, got {phase_seed!r}")
    return Scene(
        scatterers=scatterers,
        walls=walls,
        max_range_m=_number(node, "max_range_m", "scene", 8.0),
        noise_amplitude=_number(node, "noise_amplitude", "scene", 0.0),
        rng_seed=int(_number(node, "rng_seed", "scene", 0)),
        phase_seed=phase_seed,
    )


def _bands(doc: dict) -> ClassBands | None:
    classifier = doc.get("classifier")
    if not classifier:
        return None
    node = _expect_mapping(classifier, "classifier")
    if "bands" not in node:
        return None
    return bands_from_mapping(_expect_mapping(node["bands"], "classifier.bands"), "classifier.bands")


def _zone(doc: dict) -> MonitorZone | None:
    monitor = doc.get("monitor")
    if not monitor:
        return None
    node = _expect_mapping(monitor, "monitor")
    if "zone" not in node:
        return None
    z = _expect_mapping(node["zone"], "monitor.zone")
    return MonitorZone(
        near_m=_number(z, "near_m", "monitor.zone"),
        far_m=_number(z, "far_m", "monitor.zone"),
        excess_threshold=_number(z, "excess_threshold", "monitor.zone", 0.01),
        guard_bins=int(_number(z, "guard_bins", "monitor.zone", 2)),
    )


def _tiers(doc: dict) -> TierConfig:
    safety = doc.get("safety")
    if not safety:
        return TierConfig()
    node = _expect_mapping(safety, "safety")
    if "tiers" not in node:
        return TierConfig()
    t = _expect_mapping(node["tiers"], "safety.tiers")
    default = TierConfig()
    return TierConfig(
        stop_range_m=_number(t, "stop_range_m", "safety.tiers", default.stop_range_m),
        slow_range_m=_number(t, "slow_range_m", "safety.tiers", default.slow_range_m),
        slow_speed_cap=_number(t, "slow_speed_cap", "safety.tiers", default.slow_speed_cap),
        hysteresis_m=_number(t, "hysteresis_m", "safety.tiers", default.hysteresis_m),
        treat_unknown_as_human=bool(t.get("treat_unknown_as_human", False)),
    )


def _baseline_hint(doc: dict) -> float | None:
    baseline = doc.get("baseline")
    if not baseline:
        return None
    node = _expect_mapping(baseline, "baseline")
    if "feature_range_hint" not in node:
        return None
    return _number(node, "feature_range_hint", "baseline")


def parse_scene_config(doc: dict) -> SceneConfig:
    detector = _expect_mapping(doc.get("detector", {}), "detector")
    return SceneConfig(
        scene=_scene(doc),
        chirp=_chirp(doc),
        baseline_hint_m=_baseline_hint(doc),
        bands=_bands(doc),
        zone=_zone(doc),
        tier_config=_tiers(doc),
        detect_min_rsa=_number(detector, "min_rsa", "detector", 2e-4),
        detect_min_prominence=_number(detector, "min_prominence", "detector", 1e-4),
    )


def load_scene_config(path: str | Path) -> SceneConfig:
    with open(path) as fh:
        doc = json.load(fh)
    return parse_scene_config(_expect_mapping(doc, str(path)))


def _mutation(node, path: str) -> Mutation:
    m = _expect_mapping(node, path)
    op = _string(m, "op", path)
    if op == "add":
        return AddScatterer(_scatterer(m.get("scatterer"), f"{path}.scatterer"))
    if op == "move":
        return MoveScatterer(_string(m, "id", path), _number(m, "range_m", path))
    if op == "remove":
        return RemoveScatterer(_string(m, "id", path))
    raise ValueError(f"{path}.op: unknown mutation op '{op}'")


def parse_scenario(doc: dict) -> Scenario:
    cfg = parse_scene_config(doc)
    node = _expect_mapping(doc.get("scenario"), "scenario")
    steps = []
    for i, raw in enumerate(_expect_list(node.get("steps", []), "scenario.steps")):
        step = _expect_mapping(raw, f"scenario.steps[{i}]")
        mutations = tuple(
            _mutation(mn, f"scenario.steps[{i}].mutations[{j}]")
            for j, mn in enumerate(
                _expect_list(step.get("mutations", []), f"scenario.steps[{i}].mutations")
            )
        )
        steps.append(
            ScenarioStep(_string(step, "name", f"scenario.steps[{i}]", f"step_{i}"), mutations)
        )
    raw_pipeline = _expect_list(node.get("pipeline", []), "scenario.pipeline")
    for i, stage in enumerate(raw_pipeline):
        if not isinstance(stage, str):
            raise ValueError(f"scenario.pipeline[{i}]: expected a string, got {stage!r}")
    pipeline = tuple(raw_pipeline)
    return Scenario(
        name=_string(node, "name", "scenario"),
        base_scene=cfg.scene,
        steps=tuple(steps),
        pipeline=pipeline,
        chirp=cfg.chirp,
        baseline_hint_m=cfg.baseline_hint_m,
        bands=cfg.bands if cfg.bands is not None else DEFAULT_BANDS,
        zone=cfg.zone,
        tier_config=cfg.tier_config,
        detect_min_rsa=cfg.detect_min_rsa,
        detect_min_prominence=cfg.detect_min_prominence,
    )


def load_scenario_file(path: str | Path) -> Scenario:
    with open(path) as fh:
        doc = json.load(fh)
    return parse_scenario(_expect_mapping(doc, str(path)))


# ---------------------------------------------------------------------------
# Bands JSON and labeled-rrm CSV


def bands_from_mapping(node: dict, path: str = "bands") -> ClassBands:
    infrastructure_max = _number(node, "infrastructure_max", path)
    raw_human = node.get("human_max")
    human_max = math.inf if raw_human is None else _number(node, "human_max", path)
    return ClassBands(infrastructure_max, human_max)


def bands_to_json(bands: ClassBands) -> str:
    human = None if math.isinf(bands.human_max) else bands.human_max
    return json.dumps(
        {"infrastructure_max": bands.infrastructure_max, "human_max": human},
        indent=2,
        sort_keys=True,
    ) + "\n"


def load_bands(path: str | Path) -> ClassBands:
    with open(path) as fh:
        doc = json.load(fh)
    return bands_from_mapping(_expect_mapping(doc, str(path)), str(path))


def parse_labeled_rrm_csv(text: str) -> list[tuple[float, TargetClass]]:
    """Parse `rrm,label` rows; labels match TargetClass names, any case."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].lower().replace(" ", "") != "rrm,label":
        raise ValueError("labeled rrm CSV must start with header 'rrm,label'")
    out = []
    for i, line in enumerate(lines[1:], start=2):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise ValueError(f"line {i}: expected 'rrm,label', got {line!r}")
        try:
            value = float(parts[0])
        except ValueError:
            raise ValueError(f"line {i}: rrm is not a number: {parts[0]!r}") from None
        try:
            cls = TargetClass[parts[1].upper()]
        except KeyError:
            raise ValueError(
                f"line {i}: unknown label {parts[1]!r}; expected one of "
                f"{', '.join(c.name.title() for c in TargetClass)}"
            ) from None
        out.append((value, cls))
    return out
