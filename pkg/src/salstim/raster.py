"""Rasterization: anti-aliased scene rendering, binary AOI masks, rough
surface synthesis and shading, and HSL color conversion.

The canvas is 1280 x 1080 px at 40 px/deg.  Images are float RGB in [0, 1]
internally and 8-bit on export; masks are boolean arrays of the same shape.
"""

from __future__ import annotations

import colorsys
import math

import numpy as np
from PIL import Image, ImageDraw

from . import scenegen
from .scenegen import Background, Item, SceneLayout

CANVAS_W = 1280
CANVAS_H = 1080
PX_PER_DEG = 40.0
SUPERSAMPLE = 4


class RenderError(ValueError):
    """An item cannot be drawn on the canvas."""


def hsl_to_rgb(h: float, s: float, l: float) -> tuple[float, float, float]:
    """Standard HSL to RGB conversion; hue in degrees, s and l fractions."""
    if not (0.0 <= s <= 1.0 and 0.0 <= l <= 1.0):
        raise ValueError("saturation and lightness must lie in [0, 1]")
    return colorsys.hls_to_rgb((h / 360.0) % 1.0, l, s)


def rgb_to_hsl(r: float, g: float, b: float) -> tuple[float, float, float]:
    h, l, s = colorsys.rgb_to_hls(r, g, b)
    # colorsys can overshoot the unit interval by a few ulp
    return (h * 360.0, min(max(s, 0.0), 1.0), min(max(l, 0.0), 1.0))


def deg_to_px(x: float, y: float) -> tuple[float, float]:
    """Degree coordinates (x right, y up, origin center) to pixel coordinates."""
    return (CANVAS_W / 2 + PX_PER_DEG * x, CANVAS_H / 2 - PX_PER_DEG * y)


def synth_surface(beta: float, sigma_rms: float, seed: int,
                  width: int = CANVAS_W, height: int = CANVAS_H) -> np.ndarray:
    """Isotropic random-phase noise height map with a 1/f^beta amplitude
    spectrum.

    The spectrum is zero at DC and the field is rescaled to zero mean and an
    exact standard deviation of sigma_rms, so the radially averaged log power
    falls off with slope -2*beta against log radial frequency (in cycles per
    image).
    """
    if not 1.0 <= beta <= 3.0:
        raise ValueError("roll-off exponent must lie in [1, 3]")
    if sigma_rms <= 0:
        raise ValueError("sigma_rms must be positive")
    rng = np.random.default_rng(seed)
    fy = np.fft.fftfreq(height) * height
    fx = np.fft.fftfreq(width) * width
    f = np.hypot(fy[:, None], fx[None, :])
    amp = np.zeros_like(f)
    nonzero = f > 0
    amp[nonzero] = f[nonzero] ** (-beta)
    noise = rng.standard_normal((height, width)) + 1j * rng.standard_normal((height, width))
    field = np.fft.ifft2(amp * noise).real
    field -= field.mean()
    field *= sigma_rms / field.std()
    return field


def lambert_shade(height: np.ndarray, slant: float = 60.0, tilt: float = 90.0,
                  normalize: bool = True) -> np.ndarray:
    """Lambertian shading of a height map under a distant light source.

    Surface normals come from central-difference gradients with unit spatial
    step; the light direction is given by slant (from the surface normal) and
    tilt (in the image plane, 90 = from above).  With normalize=True the
    image is min-max mapped to [0, 1]; otherwise raw cosine values are
    returned (a flat map then shades uniformly to cos(slant)).
    """
    height = np.asarray(height, dtype=float)
    p = np.gradient(height, axis=1)
    q = -np.gradient(height, axis=0)
    s, t = math.radians(slant), math.radians(tilt)
    lx, ly, lz = math.cos(t) * math.sin(s), math.sin(t) * math.sin(s), math.cos(s)
    shade = (-p * lx - q * ly + lz) / np.sqrt(1.0 + p * p + q * q)
    shade = np.maximum(shade, 0.0)
    if not normalize:
        return shade
    lo, hi = shade.min(), shade.max()
    if hi == lo:
        return np.full_like(shade, 0.5)
    return (shade - lo) / (hi - lo)


def _deg_grid() -> tuple[np.ndarray, np.ndarray]:
    xs = (np.arange(CANVAS_W) + 0.5 - CANVAS_W / 2) / PX_PER_DEG
    ys = (CANVAS_H / 2 - (np.arange(CANVAS_H) + 0.5)) / PX_PER_DEG
    return xs, ys


def _corner_gradient(item: Item) -> np.ndarray:
    """Full-canvas luminance field: dark above, white below, with the
    iso-luminance contour bent into an upward corner at the item center."""
    xs, ys = _deg_grid()
    vx, vy = item.center
    half = math.radians(item.orientation / 2.0)
    slope = 0.0 if item.orientation >= 180.0 else 1.0 / math.tan(half)
    corner_y = vy - slope * np.abs(xs[None, :] - vx)
    lum = 0.5 - (ys[:, None] - corner_y) / (2 * 13.5)
    return np.clip(lum, 0.0, 1.0)


def _tile_bounds(item: Item) -> tuple[int, int, int, int]:
    x0, y0, x1, y1 = scenegen.item_bbox(item)
    px0, py1 = deg_to_px(x0, y0)
    px1, py0 = deg_to_px(x1, y1)
    ix0 = max(0, int(math.floor(px0)) - 2)
    iy0 = max(0, int(math.floor(py0)) - 2)
    ix1 = min(CANVAS_W, int(math.ceil(px1)) + 2)
    iy1 = min(CANVAS_H, int(math.ceil(py1)) + 2)
    return ix0, iy0, ix1, iy1


def _item_coverage_tile(item: Item) -> tuple[np.ndarray, tuple[int, int, int, int]]:
    """Anti-aliased coverage of an item inside its integer pixel tile.

    The shape is drawn at 4x resolution and box-filtered down, clipping
    whatever falls outside the canvas.
    """
    cx, cy = item.center
    if abs(cx) > CANVAS_W / (2 * PX_PER_DEG) or abs(cy) > CANVAS_H / (2 * PX_PER_DEG):
        raise RenderError(f"item center {item.center} outside the canvas")
    ix0, iy0, ix1, iy1 = _tile_bounds(item)
    if ix1 <= ix0 or iy1 <= iy0:
        raise RenderError(f"item at {item.center} has no on-canvas pixels")
    tw, th = ix1 - ix0, iy1 - iy0
    ss = SUPERSAMPLE
    img = Image.new("L", (tw * ss, th * ss), 0)
    draw = ImageDraw.Draw(img)

    def to_tile(x_deg: float, y_deg: float) -> tuple[float, float]:
        px, py = deg_to_px(x_deg, y_deg)
        return ((px - ix0) * ss, (py - iy0) * ss)

    s = item.size
    if item.shape == "bar":
        _draw_bar(draw, to_tile, item.center, item.orientation, s, s * scenegen.BAR_WIDTH_RATIO)
    elif item.shape == "square":
        x, y = item.center
        draw.polygon(
            [to_tile(x - s / 2, y - s / 2), to_tile(x + s / 2, y - s / 2),
             to_tile(x + s / 2, y + s / 2), to_tile(x - s / 2, y + s / 2)],
            fill=255,
        )
    elif item.shape == "triangle":
        x, y = item.center
        r_out = s / math.sqrt(3)
        pts = [
            to_tile(x + r_out * math.cos(math.radians(a)), y + r_out * math.sin(math.radians(a)))
            for a in (90.0, 210.0, 330.0)
        ]
        draw.polygon(pts, fill=255)
    elif item.shape in ("circle", "crossed_circle"):
        _draw_ring(draw, to_tile, item.center, s)
        if item.shape == "crossed_circle":
            _draw_bar(draw, to_tile, item.center, 90.0, s, s * scenegen.RING_STROKE_RATIO)
    elif item.shape == "gaussian_blob":
        x, y = item.center
        draw.ellipse([to_tile(x - s / 2, y + s / 2), to_tile(x + s / 2, y - s / 2)], fill=255)
    else:
        raise RenderError(f"unknown item shape {item.shape!r}")

    arr = np.asarray(img, dtype=np.float64) / 255.0
    coverage = arr.reshape(th, ss, tw, ss).mean(axis=(1, 3))
    return coverage, (ix0, iy0, ix1, iy1)


def _draw_bar(draw, to_tile, center, orientation, length, width):
    x, y = center
    th = math.radians(orientation)
    ux, uy = math.cos(th), math.sin(th)
    vx, vy = -uy, ux
    hl, hw = length / 2, width / 2
    pts = [
        to_tile(x + sx * hl * ux + sy * hw * vx, y + sx * hl * uy + sy * hw * vy)
        for sx, sy in ((-1, -1), (1, -1), (1, 1), (-1, 1))
    ]
    draw.polygon(pts, fill=255)


def _draw_ring(draw, to_tile, center, size):
    x, y = center
    stroke = size * scenegen.RING_STROKE_RATIO
    r_out, r_in = size / 2, size / 2 - stroke
    draw.ellipse([to_tile(x - r_out, y + r_out), to_tile(x + r_out, y - r_out)], fill=255)
    if r_in > 0:
        draw.ellipse([to_tile(x - r_in, y + r_in), to_tile(x + r_in, y - r_in)], fill=0)


def item_coverage(item: Item) -> np.ndarray:
    """Full-canvas anti-aliased coverage of a single item (for inspection)."""
    cov = np.zeros((CANVAS_H, CANVAS_W))
    tile, (ix0, iy0, ix1, iy1) = _item_coverage_tile(item)
    cov[iy0:iy1, ix0:ix1] = tile
    return cov


def _blob_gradient_tile(item: Item, bounds) -> np.ndarray:
    """Vertical luminance ramp across the patch, dark at the bottom."""
    ix0, iy0, ix1, iy1 = bounds
    _, cy = item.center
    _, py_c = deg_to_px(0.0, cy)
    r_px = item.size / 2 * PX_PER_DEG
    rows = np.arange(iy0, iy1) + 0.5
    t = np.clip((py_c + r_px - rows) / (2 * r_px), 0.0, 1.0)
    return 0.2 + 0.6 * t


def _background_canvas(background: Background) -> np.ndarray:
    if background.kind == "surface":
        height = synth_surface(background.beta, background.sigma_rms, background.seed)
        gray = lambert_shade(height)
        return np.repeat(gray[:, :, None], 3, axis=2)
    rgb = hsl_to_rgb(*background.color)
    canvas = np.empty((CANVAS_H, CANVAS_W, 3))
    canvas[:] = rgb
    return canvas


def render(layout: SceneLayout) -> np.ndarray:
    """Anti-aliased float RGB rendering of a scene.

    Raises RenderError when an item center falls off the canvas; coverage of
    items that merely poke past the border (edge bars of the dense texture
    grids) is clipped.
    """
    canvas = _background_canvas(layout.background)
    for item in layout.items:
        if item.shape == "corner_gradient":
            lum = _corner_gradient(item)
            canvas = np.repeat(lum[:, :, None], 3, axis=2)
            continue
        cov, bounds = _item_coverage_tile(item)
        ix0, iy0, ix1, iy1 = bounds
        patch = canvas[iy0:iy1, ix0:ix1]
        if item.shape == "gaussian_blob":
            ramp = _blob_gradient_tile(item, bounds)
            color = np.repeat(ramp[:, None, None], 3, axis=2)
        else:
            color = np.asarray(hsl_to_rgb(*item.color))
        patch *= (1.0 - cov)[:, :, None]
        patch += color * cov[:, :, None]
    return canvas


def render_mask(layout: SceneLayout) -> np.ndarray:
    """Binary AOI mask with the same dimensions as the rendered image."""
    region = layout.aoi
    mask = np.zeros((CANVAS_H, CANVAS_W), dtype=bool)
    if region.is_empty:
        return mask
    xs, ys = _deg_grid()
    if region.kind == "disc":
        cx, cy, r = region.disc
        mask = (xs[None, :] - cx) ** 2 + (ys[:, None] - cy) ** 2 <= r * r
        return mask
    if region.kind == "strip":
        xc, w = region.strip
        in_x = np.abs(xs - xc) <= w / 2
        in_y = np.abs(ys) <= scenegen.FIELD_H / 2
        return in_y[:, None] & in_x[None, :]
    for x0, y0, x1, y1 in region.boxes:
        in_x = (xs >= x0) & (xs <= x1)
        in_y = (ys >= y0) & (ys <= y1)
        mask |= in_y[:, None] & in_x[None, :]
    return mask


def to_uint8(image: np.ndarray) -> np.ndarray:
    return np.clip(np.round(image * 255.0), 0, 255).astype(np.uint8)


def save_image_png(image: np.ndarray, path) -> None:
    # low compression level: stimuli are large flat regions, and encode time
    # dominates batch generation at the default level
    Image.fromarray(to_uint8(image), mode="RGB").save(path, format="PNG", compress_level=1)


def save_mask_png(mask: np.ndarray, path) -> None:
    Image.fromarray(np.where(mask, 255, 0).astype(np.uint8), mode="L").save(
        path, format="PNG", compress_level=1
    )


def load_mask_png(path) -> np.ndarray:
    arr = np.asarray(Image.open(path).convert("L"))
    return arr >= 128
