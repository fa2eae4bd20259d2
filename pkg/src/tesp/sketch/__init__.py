"""Contains sketching operators, sketch sets and the special-case presets."""

from .operators import (
    SketchKind,
    SketchOperator,
    SketchSet,
    check_probs,
    gaussian_sketch,
    sampling_sketch,
)
from .presets import PRESET_SAMPLING, MethodPreset, PresetName, build_preset, preset_names

__all__ = [
    "PRESET_SAMPLING",
    "MethodPreset",
    "PresetName",
    "SketchKind",
    "SketchOperator",
    "SketchSet",
    "build_preset",
    "check_probs",
    "gaussian_sketch",
    "preset_names",
    "sampling_sketch",
]
