"""Edge-aware multi-scale image enhancement.

Images are numpy arrays: (H, W) grayscale or (H, W, 3) RGB, either float in
[0, 1] or uint8. Configuration is a preset name, a config-file text, or
keyword overrides using the config keys with dots replaced by underscores
(e.g. ``kernel_h=0.5`` for ``kernel.h``).
"""

import numpy as np

from . import _multilap

__version__ = "0.1.0"

__all__ = [
    "enhance",
    "decompose",
    "structure_mask",
    "estimate_alpha",
    "make_config",
    "preset_names",
    "verify",
]


def _to_key(name):
    # kernel_h -> kernel.h, mask_source_level -> mask.source_level,
    # curve_high_a -> curve.high.a; bare keys (levels, color) pass through.
    if name.startswith("curve_"):
        layer, _, field = name[len("curve_"):].partition("_")
        return f"curve.{layer}.{field}"
    for section in ("kernel", "norm", "mask"):
        if name.startswith(section + "_"):
            return f"{section}.{name[len(section) + 1:]}"
    return name


def _overrides(kwargs):
    return [(_to_key(key), str(value)) for key, value in kwargs.items()]


def make_config(preset="", config="", **kwargs):
    """Resolve a preset/config plus overrides into canonical config text."""
    return _multilap.make_config(preset or "", config or "", _overrides(kwargs))


def preset_names():
    return list(_multilap.preset_names())


def _to_float(image):
    arr = np.asarray(image)
    if arr.dtype == np.uint8:
        return arr.astype(np.float64) / 255.0, True
    return np.asarray(arr, dtype=np.float64), False


def _from_float(arr, was_uint8):
    if was_uint8:
        return np.clip(np.rint(arr * 255.0), 0, 255).astype(np.uint8)
    return arr


def enhance(image, preset="", config="", threads=0, **kwargs):
    """Run the full enhancement chain; returns an array shaped like the input."""
    text = make_config(preset, config, **kwargs)
    arr, was_uint8 = _to_float(image)
    if arr.ndim == 2:
        out = _multilap.enhance_plane(arr, text, threads)
    elif arr.ndim == 3 and arr.shape[2] == 3:
        out = _multilap.enhance_rgb(arr, text, threads)
    else:
        raise ValueError("expected an (H, W) or (H, W, 3) array")
    return _from_float(out, was_uint8)


def decompose(image, preset="", config="", threads=0, **kwargs):
    """Split a grayscale plane into (base, [bands...], high) layers."""
    text = make_config(preset, config, **kwargs)
    arr, _ = _to_float(image)
    base, bands, high = _multilap.decompose(arr, text, threads)
    return base, list(bands), high


def structure_mask(image, preset="", config="", **kwargs):
    """Per-pixel detail mask in [0, 1]; 0 in flat regions, high on structure."""
    text = make_config(preset, config, **kwargs)
    arr, _ = _to_float(image)
    return _multilap.structure_mask(arr, text)


def estimate_alpha(image, preset="", config="", **kwargs):
    """Normalization-free filter coefficient for this image's weight field.

    Returns (alpha, degenerate).
    """
    text = make_config(preset, config, **kwargs)
    arr, _ = _to_float(image)
    return _multilap.estimate_alpha(arr, text)


def verify():
    """Run the built-in dense-oracle self checks; returns (ok, report)."""
    return _multilap.verify()
