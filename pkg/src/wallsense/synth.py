"""Dechirped FMCW beat-signal synthesis.

After mixing the received chirp with the transmitted one, each reflector
collapses to a constant tone whose frequency is proportional to its range.
Synthesis therefore reduces to summing cosines plus seeded Gaussian noise,
which keeps every run bit-identical for identical inputs.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .scene import Scene, effective_amplitude, validate_scene

SPEED_OF_LIGHT_M_S = 299_792_458.0

MIN_SAMPLES = 16


@dataclass(frozen=True)
class ChirpConfig:
    """Sawtooth FMCW sweep parameters.

    The sample count is fixed by sweep_time_s * sample_rate_hz; one sweep
    is one scan.
    """

    center_freq_hz: float
    bandwidth_hz: float
    sweep_time_s: float
    sample_rate_hz: float

    @property
    def n_samples(self) -> int:
        return int(round(self.sweep_time_s * self.sample_rate_hz))

    @property
    def max_unambiguous_range_m(self) -> float:
        # Beat frequency must stay below Nyquist (sample_rate / 2).
        return (
            SPEED_OF_LIGHT_M_S
            * self.sample_rate_hz
            * self.sweep_time_s
            / (4.0 * self.bandwidth_hz)
        )


# K-band stand-in: 24 GHz center, 2 GHz sweep over 1 ms at 1 MS/s.
DEFAULT_CHIRP = ChirpConfig(
    center_freq_hz=24e9,
    bandwidth_hz=2e9,
    sweep_time_s=1e-3,
    sample_rate_hz=1e6,
)


@dataclass(frozen=True)
class BeatSignal:
    """One scan of dechirped samples tied to the chirp that produced it."""

    samples: np.ndarray
    chirp: ChirpConfig

    def __post_init__(self) -> None:
        if len(self.samples) != self.chirp.n_samples:
            raise ValueError(
                f"sample count {len(self.samples)} does not match chirp n_samples "
                f"{self.chirp.n_samples}"
            )
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("beat signal contains non-finite samples")
        self.samples.flags.writeable = False


def beat_frequency(range_m: float, chirp: ChirpConfig) -> float:
    """Beat tone frequency for a reflector at range_m: 2*B*R / (c*T)."""
    if range_m < 0:
        raise ValueError(f"range_m must be >= 0, got {range_m}")
    return 2.0 * chirp.bandwidth_hz * range_m / (SPEED_OF_LIGHT_M_S * chirp.sweep_time_s)


def range_resolution(chirp: ChirpConfig) -> float:
    """Smallest resolvable range separation: c / (2*B)."""
    return SPEED_OF_LIGHT_M_S / (2.0 * chirp.bandwidth_hz)


def reflector_phase(phase_seed: int, reflector_id: str) -> float:
    """Deterministic per-reflector phase in [0, 2*pi).

    Hash based rather than RNG based so a reflector keeps its phase no
    matter how many other reflectors the scene contains.
    """
    digest = hashlib.sha256(f"{phase_seed}:{reflector_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big") / 2.0**64 * 2.0 * math.pi


def synthesize_beat(
    scene: Scene,
    chirp: ChirpConfig = DEFAULT_CHIRP,
    range_bias_m: float = 0.0,
) -> BeatSignal:
    """Render a scene into one scan of beat samples.

    Args:
        scene: validated reflector arrangement.
        chirp: sweep parameters; defaults to the stock 24 GHz profile.
        range_bias_m: additive range offset applied to every reflector,
            modelling an uncalibrated sensor. Default 0.

    Returns:
        BeatSignal whose samples are the sum over reflectors of
        amplitude * cos(2*pi*f_beat*t + phase) plus seeded Gaussian noise
        scaled by scene.noise_amplitude.

    Identical (scene, chirp, range_bias_m) inputs give bit-identical
    output arrays.
    """
    validate_scene(scene).raise_if_invalid()
    if chirp.n_samples < MIN_SAMPLES:
        raise ValueError(
            f"chirp yields {chirp.n_samples} samples; need at least {MIN_SAMPLES}"
        )
    if scene.max_range_m > chirp.max_unambiguous_range_m:
        raise ValueError(
            f"scene.max_range_m {scene.max_range_m} exceeds the maximum unambiguous "
            f"range {chirp.max_unambiguous_range_m:.2f} m for this chirp"
        )

    n = chirp.n_samples
    t = np.arange(n) / chirp.sample_rate_hz
    out = np.zeros(n)
    phase_seed = scene.effective_phase_seed
    for ref in scene.reflectors():
        amp = effective_amplitude(scene, ref)
        f_b = beat_frequency(ref.range_m + range_bias_m, chirp)
        phi = reflector_phase(phase_seed, ref.id)
        out += amp * np.cos(2.0 * np.pi * f_b * t + phi)
    if scene.noise_amplitude > 0:
        rng = np.random.default_rng(scene.rng_seed)
        out += scene.noise_amplitude * rng.standard_normal(n)
    return BeatSignal(out, chirp)
