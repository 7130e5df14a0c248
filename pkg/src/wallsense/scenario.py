"""Declarative multi-scan scenarios and the stage pipeline that runs them.

A scenario owns a base scene plus an ordered list of steps; every step is
the base scene with its own mutations applied, never the previous step's
result, so reordering steps cannot change what any single step sees. Each
step is pushed through the configured pipeline stages and the per-step
artifacts are kept for reporting.

Replays are exact: synthesis is seeded, stages are pure, and the writers
format deterministically, so a rerun reproduces every output byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Union

from .classify import (
    Baseline,
    ClassBands,
    DEFAULT_BANDS,
    RrmReading,
    TargetClass,
    capture_baseline,
    classify,
    rrm_compensated,
)
from .profile import Peak, RangeProfile, Window, detect_peaks, profile_to_csv, range_profile
from .safety import (
    INITIAL_STATE,
    SafetyState,
    TierConfig,
    format_log_line,
    update_door_policy,
    update_tier,
)
from .scene import (
    HUMAN_BODY,
    LAB_WALL,
    PLASTERBOARD,
    SHEET_METAL,
    Scatterer,
    Scene,
    TargetKind,
    Wall,
    validate_scene,
)
from .synth import DEFAULT_CHIRP, ChirpConfig, synthesize_beat
from .throughwall import (
    ApproachTrack,
    MonitorZone,
    OccupancyReport,
    detect_occupancy,
    track_approach,
)

STAGES = ("profile", "rrm", "classify", "throughwall", "safety")

# Peaks this close to the baseline reference bin are treated as the
# reference itself and skipped by the rrm stage.
REFERENCE_EXCLUSION_BINS = 3


class ScenarioError(ValueError):
    """A stage failed; the message carries the step index and stage name."""


@dataclass(frozen=True)
class AddScatterer:
    scatterer: Scatterer


@dataclass(frozen=True)
class MoveScatterer:
    scatterer_id: str
    range_m: float


@dataclass(frozen=True)
class RemoveScatterer:
    scatterer_id: str


Mutation = Union[AddScatterer, MoveScatterer, RemoveScatterer]


@dataclass(frozen=True)
class ScenarioStep:
    name: str
    mutations: tuple[Mutation, ...] = ()


@dataclass(frozen=True)
class Scenario:
    name: str
    base_scene: Scene
    steps: tuple[ScenarioStep, ...]
    pipeline: tuple[str, ...]
    chirp: ChirpConfig = DEFAULT_CHIRP
    baseline_hint_m: float | None = None
    bands: ClassBands = DEFAULT_BANDS
    zone: MonitorZone | None = None
    tier_config: TierConfig = TierConfig()
    detect_min_rsa: float = 2e-4
    detect_min_prominence: float = 1e-4


@dataclass(frozen=True)
class StepResult:
    index: int
    name: str
    scene: Scene
    true_range_m: float | None
    profile: RangeProfile
    peaks: tuple[Peak, ...]
    # One entry per non-reference peak: (peak, reading, class or None).
    readings: tuple[tuple[Peak, RrmReading, TargetClass | None], ...]
    occupancy: OccupancyReport | None
    safety: SafetyState | None

    def target(self) -> tuple[Peak, RrmReading, TargetClass | None] | None:
        """Strongest non-reference peak; the step's presumed subject."""
        if not self.readings:
            return None
        return max(self.readings, key=lambda entry: entry[0].rsa)


@dataclass(frozen=True)
class RunResult:
    scenario: Scenario
    baseline: Baseline | None
    steps: tuple[StepResult, ...]
    track: ApproachTrack | None


@dataclass(frozen=True)
class SummaryRow:
    step: str
    true_range_m: float | None
    detected_range_m: float | None
    rrm: float | None
    target_class: TargetClass | None


def apply_mutations(scene: Scene, mutations: tuple[Mutation, ...]) -> Scene:
    """Apply add/move/remove mutations, returning a new scene."""
    scatterers = list(scene.scatterers)
    for m in mutations:
        if isinstance(m, AddScatterer):
            if any(s.id == m.scatterer.id for s in scatterers):
                raise ValueError(f"scatterer id '{m.scatterer.id}' already present")
            scatterers.append(m.scatterer)
        elif isinstance(m, MoveScatterer):
            hits = [i for i, s in enumerate(scatterers) if s.id == m.scatterer_id]
            if not hits:
                raise ValueError(f"no scatterer with id '{m.scatterer_id}' to move")
            scatterers[hits[0]] = replace(scatterers[hits[0]], range_m=m.range_m)
        elif isinstance(m, RemoveScatterer):
            hits = [i for i, s in enumerate(scatterers) if s.id == m.scatterer_id]
            if not hits:
                raise ValueError(f"no scatterer with id '{m.scatterer_id}' to remove")
            del scatterers[hits[0]]
        else:
            raise ValueError(f"unknown mutation {m!r}")
    return replace(scene, scatterers=tuple(scatterers))


def _declared_target_range(step: ScenarioStep) -> float | None:
    for m in reversed(step.mutations):
        if isinstance(m, AddScatterer):
            return m.scatterer.range_m
        if isinstance(m, MoveScatterer):
            return m.range_m
    return None


def _validate_pipeline(scenario: Scenario) -> None:
    for stage in scenario.pipeline:
        if stage not in STAGES:
            raise ValueError(f"unknown pipeline stage '{stage}'")
    has = set(scenario.pipeline)
    if has - {"profile"} and "profile" not in has:
        raise ValueError("pipeline needs the 'profile' stage before any other stage")
    if "classify" in has and "rrm" not in has:
        raise ValueError("'classify' requires the 'rrm' stage")
    if ("rrm" in has or "throughwall" in has) and scenario.baseline_hint_m is None:
        raise ValueError("baseline_hint_m is required for 'rrm' or 'throughwall'")
    if "throughwall" in has and scenario.zone is None:
        raise ValueError("'throughwall' requires a monitor zone")


def _step_scene(scenario: Scenario, index: int, step: ScenarioStep) -> Scene:
    scene = apply_mutations(scenario.base_scene, step.mutations)
    # Fresh noise per scan, stable reflector phases across the whole run:
    # the room does not move between scans, the noise does.
    return replace(
        scene,
        rng_seed=scenario.base_scene.rng_seed + 1 + index,
        phase_seed=scenario.base_scene.effective_phase_seed,
    )


def run_scenario(scenario: Scenario) -> RunResult:
    """Execute every step through the configured stages.

    Any stage failure aborts the run with a ScenarioError naming the step
    index and stage.
    """
    _validate_pipeline(scenario)
    validate_scene(scenario.base_scene).raise_if_invalid()

    baseline: Baseline | None = None
    if "rrm" in scenario.pipeline or "throughwall" in scenario.pipeline:
        base_beat = synthesize_beat(scenario.base_scene, scenario.chirp)
        base_profile = range_profile(base_beat, Window.HANN)
        baseline = capture_baseline(
            [base_profile], scenario.baseline_hint_m, label=f"{scenario.name}:baseline"
        )

    state = INITIAL_STATE
    results: list[StepResult] = []
    reports: list[OccupancyReport] = []
    for i, step in enumerate(scenario.steps):
        def _run(stage: str, fn):
            try:
                return fn()
            except ScenarioError:
                raise
            except ValueError as exc:
                raise ScenarioError(
                    f"step {i} ('{step.name}') stage '{stage}': {exc}"
                ) from exc

        scene = _run("profile", lambda: _step_scene(scenario, i, step))
        _run("profile", lambda: validate_scene(scene).raise_if_invalid())
        prof = _run(
            "profile",
            lambda: range_profile(synthesize_beat(scene, scenario.chirp), Window.HANN),
        )
        peaks = tuple(
            _run(
                "profile",
                lambda: detect_peaks(
                    prof, scenario.detect_min_prominence, scenario.detect_min_rsa
                ),
            )
        )

        readings: tuple[tuple[Peak, RrmReading, TargetClass | None], ...] = ()
        if "rrm" in scenario.pipeline:
            ref_bin = baseline.reference_feature.bin_index
            candidates = [
                p for p in peaks if abs(p.bin_index - ref_bin) > REFERENCE_EXCLUSION_BINS
            ]
            entries = []
            for p in candidates:
                reading = _run("rrm", lambda p=p: rrm_compensated(p, baseline))
                cls = None
                if "classify" in scenario.pipeline:
                    cls = _run(
                        "classify", lambda r=reading: classify(r, scenario.bands)
                    )
                entries.append((p, reading, cls))
            readings = tuple(entries)

        occupancy = None
        if "throughwall" in scenario.pipeline:
            occupancy = _run(
                "throughwall",
                lambda: detect_occupancy(baseline, prof, scenario.zone, scan_index=i),
            )
            reports.append(occupancy)

        safety_state = None
        if "safety" in scenario.pipeline:
            if "classify" in scenario.pipeline:
                state = _run(
                    "safety",
                    lambda: update_tier(
                        state,
                        [(p, cls) for p, _, cls in readings],
                        scenario.tier_config,
                    ),
                )
            if occupancy is not None:
                state = _run("safety", lambda: update_door_policy(state, occupancy))
            safety_state = state

        results.append(
            StepResult(
                index=i,
                name=step.name,
                scene=scene,
                true_range_m=_declared_target_range(step),
                profile=prof,
                peaks=peaks,
                readings=readings,
                occupancy=occupancy,
                safety=safety_state,
            )
        )

    track = None
    if "throughwall" in scenario.pipeline:
        track = track_approach(reports, scenario.zone)
    return RunResult(scenario, baseline, tuple(results), track)


def summarize(result: RunResult) -> list[SummaryRow]:
    """One row per step: subject range, rrm, and class.

    Requires the rrm stage; an empty run yields an empty table.
    """
    if "rrm" not in result.scenario.pipeline:
        raise ValueError("summarize needs a run that included the 'rrm' stage")
    rows = []
    for step in result.steps:
        target = step.target()
        if target is None:
            rows.append(SummaryRow(step.name, step.true_range_m, None, None, None))
        else:
            peak, reading, cls = target
            rows.append(
                SummaryRow(step.name, step.true_range_m, peak.range_m, reading.rrm, cls)
            )
    return rows


# ---------------------------------------------------------------------------
# Built-in scenarios


def _human_sweep() -> Scenario:
    base = Scene(
        walls=(Wall("back_wall", 6.0, LAB_WALL),),
        max_range_m=8.0,
        noise_amplitude=0.0,
        rng_seed=7,
    )
    steps = tuple(
        ScenarioStep(
            f"human_at_{r:.0f}m",
            (
                AddScatterer(
                    Scatterer("person", float(r), HUMAN_BODY, TargetKind.HUMAN)
                ),
            ),
        )
        for r in (1.0, 2.0, 3.0, 4.0)
    )
    return Scenario(
        name="human_sweep",
        base_scene=base,
        steps=steps,
        pipeline=("profile", "rrm", "classify", "safety"),
        baseline_hint_m=6.0,
    )


def _copper_traverse() -> Scenario:
    base = Scene(
        walls=(
            Wall("partition", 0.10, PLASTERBOARD),
            Wall("far_wall", 2.60, PLASTERBOARD),
        ),
        max_range_m=8.0,
        noise_amplitude=0.0,
        rng_seed=11,
    )
    steps = tuple(
        ScenarioStep(
            f"position_{tag}",
            (
                AddScatterer(
                    Scatterer(
                        "copper_sheet",
                        r,
                        SHEET_METAL,
                        TargetKind.METAL_SHEET,
                        extent_m=(0.3, 0.3),
                    )
                ),
            ),
        )
        for tag, r in (("A", 2.2), ("B", 1.6), ("C", 1.0), ("D", 0.4))
    )
    return Scenario(
        name="copper_traverse",
        base_scene=base,
        steps=steps,
        pipeline=("profile", "throughwall", "safety"),
        baseline_hint_m=2.60,
        zone=MonitorZone(near_m=0.10, far_m=2.60),
    )


BUILTIN_SCENARIOS = ("human_sweep", "copper_traverse")


def builtin_scenario(name: str) -> Scenario:
    if name == "human_sweep":
        return _human_sweep()
    if name == "copper_traverse":
        return _copper_traverse()
    raise ValueError(
        f"unknown scenario '{name}'; built-ins: {', '.join(BUILTIN_SCENARIOS)}"
    )


# ---------------------------------------------------------------------------
# Deterministic writers


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.9g}"


def summary_to_csv(result: RunResult) -> str:
    lines = ["step,true_range_m,detected_range_m,rrm,class"]
    for row in summarize(result):
        cls = "" if row.target_class is None else str(row.target_class)
        lines.append(
            f"{row.step},{_fmt(row.true_range_m)},{_fmt(row.detected_range_m)},"
            f"{_fmt(row.rrm)},{cls}"
        )
    return "\n".join(lines) + "\n"


def classification_to_csv(result: RunResult) -> str:
    lines = ["peak_range_m,rsa,rrm,class"]
    for step in result.steps:
        for peak, reading, cls in step.readings:
            lines.append(
                f"{peak.range_m:.9g},{peak.rsa:.9g},{reading.rrm:.9g},"
                f"{'' if cls is None else str(cls)}"
            )
    return "\n".join(lines) + "\n"


def monitor_to_csv(result: RunResult) -> str:
    """scan_index,occupied,range_m,excess_rsa,status with a running status."""
    lines = ["scan_index,occupied,range_m,excess_rsa,status"]
    reports: list[OccupancyReport] = []
    for step in result.steps:
        if step.occupancy is None:
            continue
        reports.append(step.occupancy)
        status = track_approach(reports, result.scenario.zone).status.value
        strongest = step.occupancy.strongest()
        r = "" if strongest is None else f"{strongest.range_m:.9g}"
        e = "" if strongest is None else f"{strongest.rsa:.9g}"
        lines.append(
            f"{step.occupancy.scan_index},{step.occupancy.occupied},{r},{e},{status}"
        )
    return "\n".join(lines) + "\n"


def safety_log(result: RunResult) -> str:
    lines = [
        format_log_line(step.index, step.safety)
        for step in result.steps
        if step.safety is not None
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]", "_", name)


def write_run_result(result: RunResult, out_dir: str | Path) -> list[Path]:
    """Write every applicable artifact; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def _emit(name: str, text: str) -> None:
        path = out / name
        path.write_text(text)
        written.append(path)

    for step in result.steps:
        _emit(f"profile_{step.index:02d}_{_safe_name(step.name)}.csv", profile_to_csv(step.profile))
    pipeline = result.scenario.pipeline
    if "rrm" in pipeline:
        _emit("summary.csv", summary_to_csv(result))
        _emit("classification.csv", classification_to_csv(result))
    if "throughwall" in pipeline:
        _emit("monitor.csv", monitor_to_csv(result))
    if "safety" in pipeline:
        _emit("safety.log", safety_log(result))
    return written
