"""Command line front end.

Exit codes: 0 success, 1 validation error, 2 I/O error. Diagnostics go to
standard error; data goes to files or standard output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path

from . import __version__
from .classify import DEFAULT_BANDS, calibrate_bands, capture_baseline, classify, rrm_compensated
from .profile import Window, detect_peaks, profile_to_csv, range_profile
from .scenario import (
    BUILTIN_SCENARIOS,
    builtin_scenario,
    run_scenario,
    write_run_result,
)
from .scenefile import (
    SceneConfig,
    bands_to_json,
    load_bands,
    load_scenario_file,
    load_scene_config,
    parse_labeled_rrm_csv,
)
from .scene import validate_scene
from .synth import synthesize_beat
from .throughwall import MonitorZone, detect_occupancy, track_approach


def _parse_zone_flag(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"--zone expects 'near,far', got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise ValueError(f"--zone expects two numbers, got {text!r}") from None


def _load_config(path: str, seed: int | None) -> SceneConfig:
    cfg = load_scene_config(path)
    if seed is not None:
        cfg = replace(cfg, scene=replace(cfg.scene, rng_seed=seed))
    validate_scene(cfg.scene).raise_if_invalid()
    return cfg


def _profile_for(cfg: SceneConfig):
    return range_profile(synthesize_beat(cfg.scene, cfg.chirp), Window.HANN)


def _baseline_for(cfg: SceneConfig, label: str):
    prof = _profile_for(cfg)
    hint = cfg.baseline_hint_m
    if hint is None:
        # No hint configured: anchor on the strongest peak present.
        peaks = detect_peaks(prof, min_rsa=1e-4 * float(prof.rsa.max() or 0.0))
        if not peaks:
            raise ValueError("baseline profile has no peaks to anchor on")
        hint = max(peaks, key=lambda p: p.rsa).range_m
    return capture_baseline([prof], hint, label=label)


def _write(out_dir: str, name: str, text: str) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    return path


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_config(args.scene, args.seed)
    window = Window(args.window)
    path = _write(args.out, "profile.csv", profile_to_csv(
        range_profile(synthesize_beat(cfg.scene, cfg.chirp), window)
    ))
    print(path)
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    cfg = _load_config(args.scene, args.seed)
    base_cfg = _load_config(args.baseline, None)
    if base_cfg.chirp != cfg.chirp:
        raise ValueError("scene and baseline chirp configurations differ")
    baseline = _baseline_for(base_cfg, label=Path(args.baseline).stem)
    if args.bands:
        bands = load_bands(args.bands)
    else:
        bands = cfg.bands if cfg.bands is not None else DEFAULT_BANDS

    prof = _profile_for(cfg)
    peaks = detect_peaks(prof, cfg.detect_min_prominence, cfg.detect_min_rsa)
    ref_bin = baseline.reference_feature.bin_index
    lines = ["peak_range_m,rsa,rrm,class"]
    for peak in peaks:
        if abs(peak.bin_index - ref_bin) <= 3:
            continue
        reading = rrm_compensated(peak, baseline)
        cls = classify(reading, bands)
        lines.append(f"{peak.range_m:.9g},{peak.rsa:.9g},{reading.rrm:.9g},{cls}")
    path = _write(args.out, "classification.csv", "\n".join(lines) + "\n")
    print(path)
    return 0


def _cmd_monitor(args: argparse.Namespace) -> int:
    base_cfg = _load_config(args.baseline, None)
    zone = base_cfg.zone
    if args.zone:
        near, far = _parse_zone_flag(args.zone)
        defaults = zone or MonitorZone(near, far)
        zone = MonitorZone(near, far, defaults.excess_threshold, defaults.guard_bins)
    if zone is None:
        raise ValueError("no monitor zone: pass --zone near,far or a monitor.zone section")
    baseline = _baseline_for(
        replace(base_cfg, baseline_hint_m=base_cfg.baseline_hint_m or zone.far_m),
        label=Path(args.baseline).stem,
    )

    reports = []
    lines = ["scan_index,occupied,range_m,excess_rsa,status"]
    for i, scene_path in enumerate(args.scene):
        cfg = _load_config(scene_path, args.seed)
        if cfg.chirp != base_cfg.chirp:
            raise ValueError(f"{scene_path}: chirp differs from the baseline chirp")
        report = detect_occupancy(baseline, _profile_for(cfg), zone, scan_index=i)
        reports.append(report)
        status = track_approach(reports, zone).status.value
        strongest = report.strongest()
        r = "" if strongest is None else f"{strongest.range_m:.9g}"
        e = "" if strongest is None else f"{strongest.rsa:.9g}"
        lines.append(f"{i},{report.occupied},{r},{e},{status}")
    path = _write(args.out, "monitor.csv", "\n".join(lines) + "\n")
    print(path)
    return 0


def _cmd_scenario(args: argparse.Namespace) -> int:
    if bool(args.name) == bool(args.scene):
        raise ValueError("pass exactly one of --name or --scene")
    if args.name:
        if args.name not in BUILTIN_SCENARIOS:
            raise ValueError(
                f"unknown scenario '{args.name}'; built-ins: {', '.join(BUILTIN_SCENARIOS)}"
            )
        scenario = builtin_scenario(args.name)
    else:
        scenario = load_scenario_file(args.scene)
    if args.seed is not None:
        scenario = replace(
            scenario, base_scene=replace(scenario.base_scene, rng_seed=args.seed)
        )
    result = run_scenario(scenario)
    for path in write_run_result(result, args.out):
        print(path)
    return 0


def _cmd_calibrate(args: argparse.Namespace) -> int:
    if args.input:
        text = Path(args.input).read_text()
    else:
        text = (
            resources.files("wallsense") / "data" / "default_rrm_calibration.csv"
        ).read_text()
    bands = calibrate_bands(parse_labeled_rrm_csv(text))
    path = _write(args.out, "bands.json", bands_to_json(bands))
    print(f"infrastructure_max={bands.infrastructure_max:.9g} human_max={bands.human_max:.9g}")
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wallsense",
        description=(
            "Simulate FMCW radar scenes, classify reflections against an "
            "empty-room baseline, monitor zones through walls, and drive "
            "tiered safety policies."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="render a scene to a range-profile CSV")
    p.add_argument("--scene", required=True, help="scene JSON path")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override scene rng_seed")
    p.add_argument("--window", choices=[w.value for w in Window], default="hann")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("classify", help="classify scene peaks against a baseline scene")
    p.add_argument("--scene", required=True, help="target scene JSON path")
    p.add_argument("--baseline", required=True, help="empty-reference scene JSON path")
    p.add_argument("--bands", default=None, help="bands JSON path (defaults to config/stock)")
    p.add_argument("--seed", type=int, default=None, help="override target scene rng_seed")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("monitor", help="occupancy-check scan scenes against a baseline")
    p.add_argument(
        "--scene", action="append", required=True, help="scan scene JSON (repeatable)"
    )
    p.add_argument("--baseline", required=True, help="empty-reference scene JSON path")
    p.add_argument("--zone", default=None, help="zone override as 'near,far' in meters")
    p.add_argument("--seed", type=int, default=None, help="override scan rng_seed")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_monitor)

    p = sub.add_parser("scenario", help="run a built-in or file-defined scenario")
    p.add_argument("--name", default=None, help=f"built-in name: {', '.join(BUILTIN_SCENARIOS)}")
    p.add_argument("--scene", default=None, help="scenario JSON path")
    p.add_argument("--seed", type=int, default=None, help="override base scene rng_seed")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_scenario)

    p = sub.add_parser("calibrate", help="fit class bands from labeled rrm samples")
    p.add_argument("--input", default=None, help="labeled CSV 'rrm,label' (default: stock set)")
    p.add_argument("--out", required=True, help="output directory for bands.json")
    p.set_defaults(fn=_cmd_calibrate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
