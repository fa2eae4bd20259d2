"""Contains image and result IO."""

from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np
from PIL import Image

from tesp.errors import ParameterError, ShapeError

LOGGER = logging.getLogger(__name__)

PLANAR_EXTENSIONS = (".npy",)


def load_image(path: Path) -> np.ndarray:
    """Load an RGB image as float64 h x w x 3 with values in [0, 1].

    PNG (or any format PIL opens) is read as 8-bit RGB. A .npy file holds raw planar
    floats of shape 3 x h x w and is returned as is, channels last.
    """
    LOGGER.debug("Loading image %s ...", path)
    if path.suffix.lower() in PLANAR_EXTENSIONS:
        planar = np.load(path)
        if planar.ndim != 3 or planar.shape[0] != 3:
            raise ShapeError(f"Expected planar 3 x h x w floats in {path}, got {planar.shape}.")
        return np.ascontiguousarray(np.moveaxis(planar.astype(np.float64), 0, -1))

    img = np.asarray(Image.open(path).convert("RGB"))
    LOGGER.debug("\tHxW: %dx%d", img.shape[0], img.shape[1])
    return img.astype(np.float64) / 255.0


def save_image(image: np.ndarray, output_path: Path) -> None:
    """Save an h x w x 3 image with values in [0, 1] as 8-bit PNG."""
    output_path.parent.mkdir(parents=True, exist_ok=True)
    if output_path.suffix.lower() != ".png":
        raise ParameterError(f"Unsupported output format {output_path.suffix}.")
    quantized = np.clip(np.rint(image * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(quantized).save(output_path, "PNG")


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and math.isinf(value):
        # PSNR of an exact restoration.
        return "exact"
    if isinstance(value, Mapping):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    return value


def write_jsonl(rows: Iterable[Mapping[str, Any]], output_path: Path) -> None:
    """Write one JSON object per line with sorted keys."""
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with output_path.open("w") as file_handle:
        for row in rows:
            file_handle.write(json.dumps(_jsonable(row), sort_keys=True) + "\n")


def read_jsonl(path: Path) -> list[dict[str, Any]]:
    with path.open() as file_handle:
        return [json.loads(line) for line in file_handle if line.strip()]


def write_csv(rows: list[dict[str, Any]], output_path: Path) -> None:
    """Write rows that share one set of keys as CSV; None becomes an empty cell."""
    output_path.parent.mkdir(parents=True, exist_ok=True)
    if not rows:
        output_path.write_text("")
        return
    with output_path.open("w", newline="") as file_handle:
        writer = csv.DictWriter(file_handle, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
