"""Scene description for the radar simulator: materials, scatterers, walls.

A scene is a 1-D arrangement of reflectors along the radar boresight.
Walls attenuate everything behind them; scatterers do not. The amplitude
model is deliberately coarse (single reflectivity/transmissivity pair per
material, inverse-square spreading) so that runs are cheap and exactly
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

# Range at which a reflector's return equals its bare reflectivity.
REFERENCE_RANGE_M = 1.0


@dataclass(frozen=True)
class Material:
    """Surface description used by the amplitude model.

    reflectivity: amplitude fraction reflected back, >= 0.
    transmissivity: amplitude fraction passed through, in [0, 1].
        0 blocks everything behind the surface, 1 is transparent.
    """

    name: str
    reflectivity: float
    transmissivity: float


PLASTERBOARD = Material("plasterboard", reflectivity=0.05, transmissivity=0.7)
HUMAN_BODY = Material("human", reflectivity=0.08, transmissivity=0.3)
SHEET_METAL = Material("metal_sheet", reflectivity=0.9, transmissivity=0.0)
LAB_WALL = Material("lab_wall", reflectivity=0.05, transmissivity=0.0)

MATERIAL_PRESETS = {
    m.name: m for m in (PLASTERBOARD, HUMAN_BODY, SHEET_METAL, LAB_WALL)
}


class TargetKind(Enum):
    """Ground-truth tag carried by scatterers.

    Metadata only: tests and scenario summaries read it, the detection
    pipeline never does.
    """

    HUMAN = "human"
    METAL_SHEET = "metal_sheet"
    INFRASTRUCTURE = "infrastructure"
    GENERIC = "generic"


@dataclass(frozen=True)
class Scatterer:
    """A discrete point reflector at a fixed range."""

    id: str
    range_m: float
    material: Material
    kind: TargetKind = TargetKind.GENERIC
    extent_m: tuple[float, float] | None = None  # informational physical size


@dataclass(frozen=True)
class Wall:
    """A planar obstruction; attenuates every reflector behind it."""

    id: str
    range_m: float
    material: Material


@dataclass(frozen=True)
class Scene:
    """Immutable reflector arrangement plus noise/seed configuration.

    rng_seed drives the additive noise stream. phase_seed drives the
    per-reflector phases; it defaults to rng_seed when left None. Keeping
    phase_seed fixed while varying rng_seed models a static room observed
    through independent noise realizations, which is what repeated scans
    of an unchanged geometry look like.
    """

    scatterers: tuple[Scatterer, ...] = ()
    walls: tuple[Wall, ...] = ()
    max_range_m: float = 8.0
    noise_amplitude: float = 0.0
    rng_seed: int = 0
    phase_seed: int | None = None

    @property
    def effective_phase_seed(self) -> int:
        return self.rng_seed if self.phase_seed is None else self.phase_seed

    def reflectors(self) -> tuple[Wall | Scatterer, ...]:
        """All reflectors in deterministic order: walls first, then scatterers."""
        return (*self.walls, *self.scatterers)


@dataclass
class ValidationReport:
    """Outcome of validate_scene: empty violations means the scene is usable."""

    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_if_invalid(self) -> None:
        if self.violations:
            raise ValueError("; ".join(self.violations))


def _check_material(owner: str, material: Material, out: list[str]) -> None:
    if material.reflectivity < 0:
        out.append(f"{owner}: material.reflectivity must be >= 0, got {material.reflectivity}")
    if not 0.0 <= material.transmissivity <= 1.0:
        out.append(
            f"{owner}: material.transmissivity must be in [0, 1], got {material.transmissivity}"
        )


def validate_scene(scene: Scene) -> ValidationReport:
    """Check ranges, ordering, and material coefficients.

    Returns a report rather than raising so callers can surface every
    problem at once.
    """
    v: list[str] = []
    if scene.max_range_m <= 0:
        v.append(f"scene.max_range_m must be > 0, got {scene.max_range_m}")
    if scene.noise_amplitude < 0:
        v.append(f"scene.noise_amplitude must be >= 0, got {scene.noise_amplitude}")

    for s in scene.scatterers:
        owner = f"scatterer '{s.id}'"
        if s.range_m <= 0:
            v.append(f"{owner}: range_m must be > 0, got {s.range_m}")
        elif s.range_m >= scene.max_range_m:
            v.append(
                f"{owner} at {s.range_m} m is out of bounds (max_range_m {scene.max_range_m})"
            )
        _check_material(owner, s.material, v)

    for w in scene.walls:
        owner = f"wall '{w.id}'"
        if w.range_m <= 0:
            v.append(f"{owner}: range_m must be > 0, got {w.range_m}")
        elif w.range_m >= scene.max_range_m:
            v.append(
                f"{owner} at {w.range_m} m is out of bounds (max_range_m {scene.max_range_m})"
            )
        _check_material(owner, w.material, v)

    ranges = [w.range_m for w in scene.walls]
    if ranges != sorted(ranges):
        v.append("walls not sorted by range ascending")
    seen: dict[float, str] = {}
    for w in scene.walls:
        if w.range_m in seen:
            v.append(f"duplicate wall range at {w.range_m} m ('{seen[w.range_m]}', '{w.id}')")
        else:
            seen[w.range_m] = w.id

    ids = [r.id for r in scene.reflectors()]
    for rid in sorted({i for i in ids if ids.count(i) > 1}):
        v.append(f"duplicate reflector id '{rid}'")

    return ValidationReport(v)


def effective_amplitude(scene: Scene, target: Scatterer | Wall) -> float:
    """Return amplitude of the target as seen by the radar.

    reflectivity, attenuated by the squared transmissivity of every wall
    strictly nearer than the target (two-way transit), scaled by
    inverse-square spreading relative to REFERENCE_RANGE_M.
    """
    if target not in scene.reflectors():
        raise ValueError(f"target '{getattr(target, 'id', target)}' not in scene")
    amp = target.material.reflectivity
    for wall in scene.walls:
        if wall.range_m < target.range_m:
            amp *= wall.material.transmissivity**2
    amp *= (REFERENCE_RANGE_M / target.range_m) ** 2
    return amp
