"""Scene construction for the 15 stimulus families.

A scene is a list of placed items (positions in degrees of visual angle,
origin at the display center, x rightward, y upward) plus an area of
interest around the salient structure.  Building a scene is deterministic
for a fixed seed and does not touch any pixel buffer; rasterization lives
in :mod:`salstim.raster`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from . import psychometric as psy

FIELD_W = 32.5
FIELD_H = 25.0
GRID_ROWS = 10
GRID_COLS = 13
CELL = 2.5
ITEM_SIZE = 1.5
AOI_PAD = 1.0
BAR_WIDTH_RATIO = 0.2
RING_STROKE_RATIO = 1.0 / 6.0

# The 32.5 deg field is a hair wider than the 32 deg canvas, so horizontal
# placement is capped by the canvas and vertical placement by the field.
X_LIMIT = 16.0
Y_LIMIT = 12.5

CORNER_ANGLES = (180.0, 135.0, 105.0, 75.0, 45.0, 30.0, 15.0)
CONTOUR_LENGTHS = (3, 5, 7, 8, 9, 10)
SET_SIZES = (2, 7, 13, 18, 23, 29, 34)
ROUGHNESS_SIGMAS = {"sigma-low": 0.9, "sigma-high": 1.1}
COLOR_HUES = {"red": 0.0, "blue": 240.0}
HETEROGENEITY_TILTS = {
    "homogeneous": (0.0, 0.0),
    "tilted-right": (15.0, 30.0),
    "flanking": (15.0, -30.0),
}
CATEGORY_PAIRS = {
    "steep": (-50.0, 50.0),
    "steepest": (-30.0, 70.0),
    "steep-right": (20.0, 80.0),
}
LINEARITY_SLOPES = {"linear": 0.0, "slope-10": 10.0, "slope-20": 20.0, "slope-90": 90.0}

FAMILY_SUBTYPES = {
    1: ("base",),
    2: ("single", "superimposed"),
    3: ("base",),
    4: ("base",),
    5: ("similar", "dissimilar"),
    6: ("feature", "conjunctive", "feature-absent", "conjunctive-absent"),
    7: ("bar-target", "plain-target"),
    8: ("sigma-low", "sigma-high"),
    9: ("red-unsat", "red-oversat", "blue-unsat", "blue-oversat"),
    10: ("light-bg", "dark-bg"),
    11: ("base",),
    12: ("base",),
    13: ("homogeneous", "tilted-right", "flanking"),
    14: ("linear", "slope-10", "slope-20", "slope-90"),
    15: ("steep", "steepest", "steep-right"),
}
FREE_VIEWING_FAMILIES = (1, 2, 3, 4, 5)

WHITE = (0.0, 0.0, 1.0)
BLACK = (0.0, 0.0, 0.0)
RED = (0.0, 1.0, 0.5)
GREEN = (120.0, 1.0, 0.5)


def contrast_levels(family: int) -> int:
    """Number of contrast indices published for a family."""
    return 6 if family == 4 else 7


@dataclass(frozen=True)
class StimulusSpec:
    family: int
    subtype: str
    contrast_index: int
    seed: int

    def __post_init__(self):
        if self.family not in FAMILY_SUBTYPES:
            raise ValueError(f"unknown family {self.family}")
        if self.subtype not in FAMILY_SUBTYPES[self.family]:
            raise ValueError(f"family {self.family} has no subtype {self.subtype!r}")
        if not 1 <= self.contrast_index <= contrast_levels(self.family):
            raise ValueError(
                f"contrast index {self.contrast_index} out of range for family {self.family}"
            )

    @property
    def stimulus_id(self) -> str:
        return f"{self.family:02d}_{self.subtype}_{self.contrast_index:02d}"


@dataclass(frozen=True)
class Item:
    shape: str
    center: tuple[float, float]
    orientation: float = 0.0
    size: float = ITEM_SIZE
    color: psy.HSL = BLACK


@dataclass(frozen=True)
class Background:
    kind: str = "solid"  # solid | surface
    color: psy.HSL = WHITE
    beta: float = 0.0
    sigma_rms: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class AoiRegion:
    """Salient-region geometry in degrees.

    kind is one of item_bbox, strip, disc, union or empty.  Boxes are
    (xmin, ymin, xmax, ymax); the strip spans the full field height.
    """

    kind: str
    boxes: tuple[tuple[float, float, float, float], ...] = ()
    disc: tuple[float, float, float] | None = None
    strip: tuple[float, float] | None = None  # (x_center, width)

    @staticmethod
    def empty() -> "AoiRegion":
        return AoiRegion("empty")

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    def contains(self, x: float, y: float) -> bool:
        if self.kind == "empty":
            return False
        if self.kind == "disc":
            cx, cy, r = self.disc
            return (x - cx) ** 2 + (y - cy) ** 2 <= r * r
        if self.kind == "strip":
            xc, w = self.strip
            return abs(x - xc) <= w / 2 and abs(y) <= FIELD_H / 2
        return any(x0 <= x <= x1 and y0 <= y <= y1 for x0, y0, x1, y1 in self.boxes)

    def bounding_box(self) -> tuple[float, float, float, float]:
        if self.kind == "empty":
            raise ValueError("empty region has no bounding box")
        if self.kind == "disc":
            cx, cy, r = self.disc
            return (cx - r, cy - r, cx + r, cy + r)
        if self.kind == "strip":
            xc, w = self.strip
            return (xc - w / 2, -FIELD_H / 2, xc + w / 2, FIELD_H / 2)
        xs0, ys0, xs1, ys1 = zip(*self.boxes)
        return (min(xs0), min(ys0), max(xs1), max(ys1))

    def centroid(self) -> tuple[float, float]:
        x0, y0, x1, y1 = self.bounding_box()
        return ((x0 + x1) / 2, (y0 + y1) / 2)

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.boxes:
            d["boxes"] = [list(b) for b in self.boxes]
        if self.disc:
            d["disc"] = list(self.disc)
        if self.strip:
            d["strip"] = list(self.strip)
        return d


@dataclass(frozen=True)
class SceneLayout:
    family: int
    subtype: str
    contrast_index: int
    seed: int
    items: tuple[Item, ...]
    target_index: int | None
    aoi: AoiRegion
    background: Background = Background()
    field_size: tuple[float, float] = (FIELD_W, FIELD_H)
    ct_value: float = 0.0
    ct_label: str = ""
    notes: tuple[str, ...] = ()

    @property
    def task(self) -> str:
        return "free-viewing" if self.family in FREE_VIEWING_FAMILIES else "visual-search"

    @property
    def fc_value(self) -> float:
        """Generalized contrast fraction in [0, 1] for this index."""
        return psy.psi(self.contrast_index, contrast_levels(self.family))

    @property
    def target(self) -> Item | None:
        return None if self.target_index is None else self.items[self.target_index]

    def notes_value(self, key: str):
        for note in self.notes:
            k, _, v = note.partition("=")
            if k == key:
                try:
                    return json.loads(v)
                except json.JSONDecodeError:
                    return v
        raise KeyError(key)

    def to_json(self) -> str:
        doc = {
            "family": self.family,
            "subtype": self.subtype,
            "contrast_index": self.contrast_index,
            "seed": self.seed,
            "task": self.task,
            "field_size": list(self.field_size),
            "ct": {"label": self.ct_label, "value": self.ct_value},
            "fc": self.fc_value,
            "background": {
                "kind": self.background.kind,
                "color": list(self.background.color),
                "beta": self.background.beta,
                "sigma_rms": self.background.sigma_rms,
                "seed": self.background.seed,
            },
            "target_index": self.target_index,
            "aoi": self.aoi.to_dict(),
            "notes": list(self.notes),
            "items": [
                {
                    "shape": it.shape,
                    "center": list(it.center),
                    "orientation": it.orientation,
                    "size": it.size,
                    "color": list(it.color),
                }
                for it in self.items
            ],
        }
        return json.dumps(doc, indent=1, sort_keys=True)


def item_bbox(item: Item) -> tuple[float, float, float, float]:
    """Tight axis-aligned bounds of an item, in degrees."""
    x, y = item.center
    s = item.size
    if item.shape == "bar":
        half_l, half_w = s / 2, s * BAR_WIDTH_RATIO / 2
        th = math.radians(item.orientation)
        hx = abs(half_l * math.cos(th)) + abs(half_w * math.sin(th))
        hy = abs(half_l * math.sin(th)) + abs(half_w * math.cos(th))
        return (x - hx, y - hy, x + hx, y + hy)
    if item.shape == "triangle":
        a = s
        return (x - a / 2, y - a / (2 * math.sqrt(3)), x + a / 2, y + a / math.sqrt(3))
    # circle, crossed_circle, square, gaussian_blob, corner_gradient marker
    return (x - s / 2, y - s / 2, x + s / 2, y + s / 2)


def grid_centers(rows: int = GRID_ROWS, cols: int = GRID_COLS) -> list[tuple[float, float]]:
    """Cell centers of a rows x cols grid filling the working field, row-major."""
    px, py = FIELD_W / cols, FIELD_H / rows
    return [
        (-FIELD_W / 2 + (c + 0.5) * px, FIELD_H / 2 - (r + 0.5) * py)
        for r in range(rows)
        for c in range(cols)
    ]


def _scatter_cells(rng, sizes: list[float], jitter: bool = True) -> list[tuple[float, float]]:
    """Place len(sizes) items on random grid cells without overlap.

    Items are assigned in order, so callers put the target first to give it
    an unbiased cell before the distractors constrain the layout.  Cells are
    eligible only where the whole item (plus its jitter budget) stays inside
    the display.
    """
    centers = grid_centers()
    pitch = min(FIELD_W / GRID_COLS, FIELD_H / GRID_ROWS)
    jit = [max(0.0, min(0.5, (pitch - s) / 2)) if jitter else 0.0 for s in sizes]
    placed: list[tuple[float, float]] = []
    taken: list[int] = []
    for i, s in enumerate(sizes):
        eligible = []
        for ci, (cx, cy) in enumerate(centers):
            if ci in taken:
                continue
            if abs(cx) + s / 2 > X_LIMIT or abs(cy) + s / 2 > Y_LIMIT:
                continue
            ok = True
            for j, (px_, py_) in enumerate(placed):
                min_d = (s + sizes[j]) / 2 + jit[i] + jit[j]
                if math.hypot(cx - px_, cy - py_) < min_d - 1e-9:
                    ok = False
                    break
            if ok:
                eligible.append(ci)
        if not eligible:
            raise ValueError("no eligible grid cell left for item placement")
        ci = eligible[int(rng.integers(len(eligible)))]
        taken.append(ci)
        cx, cy = centers[ci]
        if jit[i] > 0:
            jx_lo = max(-jit[i], -(X_LIMIT - s / 2) - cx)
            jx_hi = min(jit[i], (X_LIMIT - s / 2) - cx)
            jy_lo = max(-jit[i], -(Y_LIMIT - s / 2) - cy)
            jy_hi = min(jit[i], (Y_LIMIT - s / 2) - cy)
            cx += float(rng.uniform(jx_lo, jx_hi))
            cy += float(rng.uniform(jy_lo, jy_hi))
        placed.append((cx, cy))
    return placed


def _clip_box(box: tuple[float, float, float, float]) -> tuple[float, float, float, float]:
    x0, y0, x1, y1 = box
    return (max(x0, -16.0), max(y0, -13.5), min(x1, 16.0), min(y1, 13.5))


def _padded_box(item: Item, pad: float = AOI_PAD) -> tuple[float, float, float, float]:
    x0, y0, x1, y1 = item_bbox(item)
    return _clip_box((x0 - pad, y0 - pad, x1 + pad, y1 + pad))


def aoi_for(layout: SceneLayout) -> AoiRegion:
    """Area of interest around the salient structure of a built layout."""
    if layout.family == 1:
        vx, vy = layout.items[0].center
        return AoiRegion("disc", disc=(vx, vy, 1.5))
    if layout.family in (2, 3):
        boundary_x = layout.notes_value("boundary_x")
        return AoiRegion("strip", strip=(boundary_x, CELL + 2 * AOI_PAD))
    if layout.family == 4:
        chain = layout.notes_value("chain_indices")
        boxes = tuple(_padded_box(layout.items[i]) for i in chain)
        return AoiRegion("union", boxes=boxes)
    if layout.family == 5:
        group = layout.notes_value("group_indices")
        xs0, ys0, xs1, ys1 = zip(*(item_bbox(layout.items[i]) for i in group))
        box = _clip_box((min(xs0) - AOI_PAD, min(ys0) - AOI_PAD, max(xs1) + AOI_PAD, max(ys1) + AOI_PAD))
        return AoiRegion("item_bbox", boxes=(box,))
    if layout.target_index is None:
        return AoiRegion.empty()
    return AoiRegion("item_bbox", boxes=(_padded_box(layout.target),))


def _finish(layout: SceneLayout) -> SceneLayout:
    return replace(layout, aoi=aoi_for(layout))


def build_corner(contrast_index: int, seed: int = 0) -> SceneLayout:
    """Dark-to-white gradient bent into an upward corner; sharper is more salient."""
    rng = np.random.default_rng(seed)
    angle = CORNER_ANGLES[contrast_index - 1]
    vx = float(rng.uniform(-5.0, 5.0))
    item = Item("corner_gradient", (vx, 0.0), orientation=angle, size=3.0)
    return _finish(
        SceneLayout(
            family=1,
            subtype="base",
            contrast_index=contrast_index,
            seed=seed,
            items=(item,),
            target_index=None,
            aoi=AoiRegion.empty(),
            ct_value=angle,
            ct_label="slope_deg",
        )
    )


def _boundary(rng) -> float:
    """Random segment boundary, at least 3 columns from either field edge."""
    k = int(rng.integers(3, GRID_COLS - 2))
    return -FIELD_W / 2 + k * CELL


def build_segmentation_angle(contrast_index: int, superimposed: bool, seed: int = 0) -> SceneLayout:
    """Two bar fields split at a vertical boundary; contrast is the angle step.

    The superimposed variant composites a second bar tilted 45 degrees onto
    every grid position of both fields.
    """
    rng = np.random.default_rng(seed)
    boundary_x = _boundary(rng)
    phi = psy.phi_series(1.0, 0.0)[contrast_index]
    items = []
    for (cx, cy) in grid_centers():
        base = phi if cx < boundary_x else 90.0
        items.append(Item("bar", (cx, cy), orientation=psy.wrap_orientation(base)))
        if superimposed:
            items.append(Item("bar", (cx, cy), orientation=psy.wrap_orientation(base + 45.0)))
    ct = psy.delta_phi(phi + 45.0, 90.0) if superimposed else psy.delta_phi(phi, 90.0)
    return _finish(
        SceneLayout(
            family=2,
            subtype="superimposed" if superimposed else "single",
            contrast_index=contrast_index,
            seed=seed,
            items=tuple(items),
            target_index=None,
            aoi=AoiRegion.empty(),
            ct_value=ct,
            ct_label="delta_phi_deg",
            notes=(f"boundary_x={boundary_x}",),
        )
    )


def build_segmentation_spacing(contrast_index: int, seed: int = 0) -> SceneLayout:
    """Diagonal bar fields whose length shrinks as the segment spacing grows.

    Spacing runs 0..2.5 deg over the ladder while the bar length runs
    3.6..1.0 deg, so low indices give contiguous zig-zag lines.  Bars sit on
    the standard 2.5 deg grid; the published spacing value is recorded as
    the contrast even where the grid pitch caps the realized gap.
    """
    rng = np.random.default_rng(seed)
    boundary_x = _boundary(rng)
    spacing = psy.psi_scaled(contrast_index, psy.N_LEVELS, 2.5)
    length = 3.6 - 2.6 * psy.psi(contrast_index, psy.N_LEVELS)
    items = tuple(
        Item("bar", (cx, cy), orientation=45.0 if cx < boundary_x else 135.0, size=length)
        for (cx, cy) in grid_centers()
    )
    return _finish(
        SceneLayout(
            family=3,
            subtype="base",
            contrast_index=contrast_index,
            seed=seed,
            items=items,
            target_index=None,
            aoi=AoiRegion.empty(),
            ct_value=spacing,
            ct_label="spacing_deg",
            notes=(f"boundary_x={boundary_x}", f"bar_length={length}"),
        )
    )


def build_contour(contrast_index: int, seed: int = 0) -> SceneLayout:
    """Randomly oriented bar grid with an embedded straight collinear chain."""
    rng = np.random.default_rng(seed)
    n_chain = CONTOUR_LENGTHS[contrast_index - 1]
    horizontal = bool(rng.integers(2))
    if horizontal:
        row = int(rng.integers(GRID_ROWS))
        col0 = int(rng.integers(GRID_COLS - n_chain + 1))
        chain_cells = {(row, col0 + i) for i in range(n_chain)}
        chain_angle = 0.0
    else:
        col = int(rng.integers(GRID_COLS))
        row0 = int(rng.integers(GRID_ROWS - n_chain + 1))
        chain_cells = {(row0 + i, col) for i in range(n_chain)}
        chain_angle = 90.0
    items = []
    chain_indices = []
    for idx, (cx, cy) in enumerate(grid_centers()):
        r, c = divmod(idx, GRID_COLS)
        if (r, c) in chain_cells:
            angle = chain_angle
            chain_indices.append(idx)
        else:
            angle = float(rng.uniform(0.0, 180.0))
        items.append(Item("bar", (cx, cy), orientation=angle))
    return _finish(
        SceneLayout(
            family=4,
            subtype="base",
            contrast_index=contrast_index,
            seed=seed,
            items=tuple(items),
            target_index=None,
            aoi=AoiRegion.empty(),
            ct_value=n_chain * CELL,
            ct_label="chain_length_deg",
            notes=(f"chain_indices={json.dumps(chain_indices)}",),
        )
    )


def build_grouping(contrast_index: int, similar: bool, seed: int = 0) -> SceneLayout:
    """A compact 2x2 group of squares with scattered distractors kept at
    least the ladder distance away from the group centroid."""
    rng = np.random.default_rng(seed)
    dist = psy.psi_range(psy.N_LEVELS, 2.5, 7.5)[contrast_index]
    gx = float(rng.uniform(-8.0, 8.0))
    gy = float(rng.uniform(-6.0, 6.0))
    group_pitch = ITEM_SIZE + 0.25
    offsets = [(-0.5, -0.5), (0.5, -0.5), (-0.5, 0.5), (0.5, 0.5)]
    items = [
        Item("square", (gx + ox * group_pitch, gy + oy * group_pitch)) for ox, oy in offsets
    ]
    shape = "square" if similar else "triangle"
    n_distractors = 36
    attempts = 0
    while len(items) < 4 + n_distractors:
        attempts += 1
        if attempts > 50000:
            raise ValueError("could not scatter grouping distractors")
        x = float(rng.uniform(-X_LIMIT + ITEM_SIZE / 2, X_LIMIT - ITEM_SIZE / 2))
        y = float(rng.uniform(-Y_LIMIT + ITEM_SIZE / 2, Y_LIMIT - ITEM_SIZE / 2))
        if math.hypot(x - gx, y - gy) < dist:
            continue
        if any(math.hypot(x - it.center[0], y - it.center[1]) < ITEM_SIZE + 0.1 for it in items[4:]):
            continue
        items.append(Item(shape, (x, y)))
    return _finish(
        SceneLayout(
            family=5,
            subtype="similar" if similar else "dissimilar",
            contrast_index=contrast_index,
            seed=seed,
            items=tuple(items),
            target_index=None,
            aoi=AoiRegion.empty(),
            ct_value=dist,
            ct_label="group_distance_deg",
            notes=("group_indices=[0, 1, 2, 3]",),
        )
    )


def build_feature_conjunction(
    contrast_index: int, mode: str, present: bool, seed: int = 0
) -> SceneLayout:
    """Red 45-degree target bar among green bars (feature) or a green/red
    orientation conjunction; the ladder sets the distractor count."""
    if mode not in ("feature", "conjunctive"):
        raise ValueError(f"unknown search mode {mode!r}")
    rng = np.random.default_rng(seed)
    n_distractors = SET_SIZES[contrast_index - 1]
    n_items = n_distractors + (1 if present else 0)
    positions = _scatter_cells(rng, [ITEM_SIZE] * n_items)
    items = []
    target_index = None
    slots = list(range(n_items))
    if present:
        target_index = 0
        slots = slots[1:]
        items.append(Item("bar", positions[0], orientation=45.0, color=RED))
    n_green = n_distractors - n_distractors // 2 if mode == "conjunctive" else n_distractors
    for rank, slot in enumerate(slots):
        if rank < n_green:
            items.append(Item("bar", positions[slot], orientation=45.0, color=GREEN))
        else:
            items.append(Item("bar", positions[slot], orientation=135.0, color=RED))
    subtype = mode if present else f"{mode}-absent"
    return _finish(
        SceneLayout(
            family=6,
            subtype=subtype,
            contrast_index=contrast_index,
            seed=seed,
            items=tuple(items),
            target_index=target_index,
            aoi=AoiRegion.empty(),
            ct_value=float(n_distractors),
            ct_label="set_size",
        )
    )


def asymmetry_grid(contrast_index: int) -> tuple[int, int, float]:
    """(rows, cols, scale) of the search-asymmetry array at a ladder index."""
    scale = psy.psi_range(psy.N_LEVELS, 1.25, 5.0, baseline=2.5)[contrast_index]
    rows = math.floor(FIELD_H / scale + 0.5)
    cols = math.floor(FIELD_W / scale + 0.5)
    return rows, cols, scale


def build_asymmetry(contrast_index: int, target_has_bar: bool, seed: int = 0) -> SceneLayout:
    """Full grid of rings at a ladder-controlled scale; the odd element either
    gains or loses the crossing bar."""
    rng = np.random.default_rng(seed)
    rows, cols, scale = asymmetry_grid(contrast_index)
    pitch = min(FIELD_W / cols, FIELD_H / rows)
    size = 0.6 * pitch
    target_shape = "crossed_circle" if target_has_bar else "circle"
    distractor_shape = "circle" if target_has_bar else "crossed_circle"
    centers = grid_centers(rows, cols)
    t_idx = int(rng.integers(len(centers)))
    items = tuple(
        Item(target_shape if i == t_idx else distractor_shape, c, size=size)
        for i, c in enumerate(centers)
    )
    return _finish(
        SceneLayout(
            family=7,
            subtype="bar-target" if target_has_bar else "plain-target",
            contrast_index=contrast_index,
            seed=seed,
            items=items,
            target_index=t_idx,
            aoi=AoiRegion.empty(),
            ct_value=float(rows * cols),
            ct_label="set_size",
            notes=(f"scale_deg={scale}", f"grid=[{rows}, {cols}]"),
        )
    )


def build_roughness(contrast_index: int, sigma_rms: float, seed: int = 0) -> SceneLayout:
    """Shaded fractal surface background with a small gradient-filled patch."""
    if sigma_rms not in (0.9, 1.1):
        raise ValueError("height deviation must be 0.9 or 1.1")
    rng = np.random.default_rng(seed)
    beta = psy.psi_range(psy.N_LEVELS, 1.5, 1.8)[contrast_index]
    x = float(rng.uniform(-15.0, 15.0))
    y = float(rng.uniform(-Y_LIMIT + 1.0, Y_LIMIT - 1.0))
    target = Item("gaussian_blob", (x, y), size=0.78)
    subtype = "sigma-low" if sigma_rms == 0.9 else "sigma-high"
    return _finish(
        SceneLayout(
            family=8,
            subtype=subtype,
            contrast_index=contrast_index,
            seed=seed,
            items=(target,),
            target_index=0,
            aoi=AoiRegion.empty(),
            background=Background("surface", WHITE, beta=beta, sigma_rms=sigma_rms, seed=seed),
            ct_value=beta,
            ct_label="beta",
        )
    )


def build_color(contrast_index: int, hue: float, oversaturated: bool, seed: int = 0) -> SceneLayout:
    """Isoluminant rings; distractor saturation closes on the fully saturated
    target as the ladder index drops.

    The unsaturated background is the isoluminant grey; the oversaturated one
    is the pure hue at half lightness, which keeps the target visible.
    """
    rng = np.random.default_rng(seed)
    background = (hue, 1.0, 0.5) if oversaturated else (hue, 0.0, 0.75)
    target_color = (hue, 1.0, 0.75)
    geom = psy.color_geometry(background, target_color, contrast_index)
    distractor_color = (hue, geom.S_D, 0.75)
    positions = _scatter_cells(rng, [ITEM_SIZE] * 34)
    items = [Item("circle", positions[0], size=ITEM_SIZE, color=target_color)]
    items += [Item("circle", p, size=ITEM_SIZE, color=distractor_color) for p in positions[1:]]
    hue_name = "red" if hue == 0.0 else "blue"
    subtype = f"{hue_name}-{'oversat' if oversaturated else 'unsat'}"
    return _finish(
        SceneLayout(
            family=9,
            subtype=subtype,
            contrast_index=contrast_index,
            seed=seed,
            items=tuple(items),
            target_index=0,
            aoi=AoiRegion.empty(),
            background=Background("solid", background),
            ct_value=geom.deltaS_DT,
            ct_label="delta_saturation",
            notes=(f"theta_deg={geom.theta}", f"alpha_deg={geom.alpha}"),
        )
    )


def build_brightness(contrast_index: int, light_background: bool, seed: int = 0) -> SceneLayout:
    """Achromatic rings around a mid-grey target on a light or dark field."""
    rng = np.random.default_rng(seed)
    l_bg = 1.0 if light_background else 0.0
    lc = psy.lightness_contrast(l_bg, 0.5, contrast_index)
    positions = _scatter_cells(rng, [ITEM_SIZE] * 34)
    items = [Item("circle", positions[0], size=ITEM_SIZE, color=(0.0, 0.0, 0.5))]
    items += [
        Item("circle", p, size=ITEM_SIZE, color=(0.0, 0.0, lc.L_D)) for p in positions[1:]
    ]
    return _finish(
        SceneLayout(
            family=10,
            subtype="light-bg" if light_background else "dark-bg",
            contrast_index=contrast_index,
            seed=seed,
            items=tuple(items),
            target_index=0,
            aoi=AoiRegion.empty(),
            background=Background("solid", (0.0, 0.0, l_bg)),
            ct_value=lc.deltaL_DT,
            ct_label="delta_lightness",
            notes=(f"distractor_lightness={lc.L_D}",),
        )
    )


def build_size(contrast_index: int, seed: int = 0) -> SceneLayout:
    """34 rings of 2.5 deg with one target scaled by the ladder."""
    rng = np.random.default_rng(seed)
    target_size = psy.psi_range(psy.N_LEVELS, 1.25, 5.0, baseline=2.5)[contrast_index]
    sizes = [target_size] + [CELL] * 33
    positions = _scatter_cells(rng, sizes)
    items = [Item("circle", positions[0], size=target_size)]
    items += [Item("circle", p, size=CELL) for p in positions[1:]]
    return _finish(
        SceneLayout(
            family=11,
            subtype="base",
            contrast_index=contrast_index,
            seed=seed,
            items=tuple(items),
            target_index=0,
            aoi=AoiRegion.empty(),
            ct_value=target_size,
            ct_label="target_size_deg",
        )
    )


def build_orientation(contrast_index: int, seed: int = 0) -> SceneLayout:
    """34 horizontal bars with one bar tilted by the arcsine ladder."""
    rng = np.random.default_rng(seed)
    target_angle = psy.wrap_orientation(psy.phi_series(1.0, 0.0)[contrast_index])
    positions = _scatter_cells(rng, [ITEM_SIZE] * 34)
    items = [Item("bar", positions[0], orientation=target_angle)]
    items += [Item("bar", p, orientation=0.0) for p in positions[1:]]
    return _finish(
        SceneLayout(
            family=12,
            subtype="base",
            contrast_index=contrast_index,
            seed=seed,
            items=tuple(items),
            target_index=0,
            aoi=AoiRegion.empty(),
            ct_value=psy.delta_phi(target_angle, 0.0),
            ct_label="delta_phi_deg",
        )
    )


def _two_set_grid(rng, target_angle: float, set_angles: tuple[float, float]):
    """Full grid with one target bar and the two distractor sets randomly
    interleaved over the remaining cells."""
    centers = grid_centers()
    t_idx = int(rng.integers(len(centers)))
    rest = [i for i in range(len(centers)) if i != t_idx]
    labels = np.zeros(len(rest), dtype=int)
    labels[len(rest) // 2:] = 1
    rng.shuffle(labels)
    items: list[Item | None] = [None] * len(centers)
    items[t_idx] = Item("bar", centers[t_idx], orientation=psy.wrap_orientation(target_angle))
    for i, cell in enumerate(rest):
        angle = set_angles[labels[i]]
        items[cell] = Item("bar", centers[cell], orientation=psy.wrap_orientation(angle))
    return tuple(items), t_idx


def build_heterogeneity(contrast_index: int, condition: str, seed: int = 0) -> SceneLayout:
    """Bars at 75 deg base orientation with zero, same-side or flanking tilts;
    the target runs the arcsine ladder away from vertical."""
    if condition not in HETEROGENEITY_TILTS:
        raise ValueError(f"unknown heterogeneity condition {condition!r}")
    rng = np.random.default_rng(seed)
    base = 75.0
    t1, t2 = HETEROGENEITY_TILTS[condition]
    set_angles = (base + t1, base + t2)
    target_angle = psy.wrap_orientation(psy.phi_series(1.0, 90.0)[contrast_index])
    items, t_idx = _two_set_grid(rng, target_angle, set_angles)
    ct = psy.delta_phi(target_angle, set_angles[0])
    return _finish(
        SceneLayout(
            family=13,
            subtype=condition,
            contrast_index=contrast_index,
            seed=seed,
            items=items,
            target_index=t_idx,
            aoi=AoiRegion.empty(),
            ct_value=ct,
            ct_label="delta_phi_first_set_deg",
            notes=(f"set_angles=[{set_angles[0]}, {set_angles[1]}]",),
        )
    )


def build_linearity(contrast_index: int, slope_u: float, seed: int = 0) -> SceneLayout:
    """Accumulative-slope orientation pattern; the target deviates from its
    own cell's pattern angle by the arcsine ladder."""
    if slope_u not in LINEARITY_SLOPES.values():
        raise ValueError(f"unknown linearity slope {slope_u!r}")
    rng = np.random.default_rng(seed)
    centers = grid_centers()
    t_idx = int(rng.integers(len(centers)))
    deviation = psy.phi_series(1.0, 0.0)[contrast_index]
    items = []
    for idx, (cx, cy) in enumerate(centers):
        r, c = divmod(idx, GRID_COLS)
        angle = psy.pattern_angle(slope_u, r, c)
        if idx == t_idx:
            angle = psy.wrap_orientation(angle + deviation)
        items.append(Item("bar", (cx, cy), orientation=angle))
    subtype = {v: k for k, v in LINEARITY_SLOPES.items()}[slope_u]
    return _finish(
        SceneLayout(
            family=14,
            subtype=subtype,
            contrast_index=contrast_index,
            seed=seed,
            items=tuple(items),
            target_index=t_idx,
            aoi=AoiRegion.empty(),
            ct_value=deviation,
            ct_label="delta_phi_deg",
        )
    )


def categorization_series() -> psy.ContrastSeries:
    """Target deviations from vertical: the arcsine ladder rescaled to 40 deg."""
    base = psy.phi_series(1.0, 0.0)
    return psy.ContrastSeries(psy.N_LEVELS, tuple(v * 40.0 / 90.0 for v in base.values))


def build_categorization(contrast_index: int, category: str, seed: int = 0) -> SceneLayout:
    """Two distractor orientation sets from a named category; the target tilts
    away from vertical by the rescaled ladder, to a random side."""
    if category not in CATEGORY_PAIRS:
        raise ValueError(f"unknown categorization condition {category!r}")
    rng = np.random.default_rng(seed)
    c1, c2 = CATEGORY_PAIRS[category]
    set_angles = (psy.wrap_orientation(c1), psy.wrap_orientation(c2))
    deviation = categorization_series()[contrast_index]
    sign = 1.0 if rng.integers(2) else -1.0
    target_angle = psy.wrap_orientation(90.0 + sign * deviation)
    items, t_idx = _two_set_grid(rng, target_angle, set_angles)
    return _finish(
        SceneLayout(
            family=15,
            subtype=category,
            contrast_index=contrast_index,
            seed=seed,
            items=items,
            target_index=t_idx,
            aoi=AoiRegion.empty(),
            ct_value=deviation,
            ct_label="target_tilt_deg",
            notes=(f"set_angles=[{set_angles[0]}, {set_angles[1]}]", f"tilt_sign={sign}"),
        )
    )


def generate(spec: StimulusSpec) -> SceneLayout:
    """Build the scene for a stimulus spec; deterministic for a fixed seed."""
    f, s, x, seed = spec.family, spec.subtype, spec.contrast_index, spec.seed
    if f == 1:
        return build_corner(x, seed)
    if f == 2:
        return build_segmentation_angle(x, s == "superimposed", seed)
    if f == 3:
        return build_segmentation_spacing(x, seed)
    if f == 4:
        return build_contour(x, seed)
    if f == 5:
        return build_grouping(x, s == "similar", seed)
    if f == 6:
        mode = s.replace("-absent", "")
        return build_feature_conjunction(x, mode, present=not s.endswith("-absent"), seed=seed)
    if f == 7:
        return build_asymmetry(x, s == "bar-target", seed)
    if f == 8:
        return build_roughness(x, ROUGHNESS_SIGMAS[s], seed)
    if f == 9:
        hue_name, bg = s.split("-")
        return build_color(x, COLOR_HUES[hue_name], oversaturated=bg == "oversat", seed=seed)
    if f == 10:
        return build_brightness(x, s == "light-bg", seed)
    if f == 11:
        return build_size(x, seed)
    if f == 12:
        return build_orientation(x, seed)
    if f == 13:
        return build_heterogeneity(x, s, seed)
    if f == 14:
        return build_linearity(x, LINEARITY_SLOPES[s], seed)
    if f == 15:
        return build_categorization(x, s, seed)
    raise ValueError(f"unknown family {f}")


def enumerate_specs(master_seed: int, families=None) -> list[StimulusSpec]:
    """All stimulus specs of the standard enumeration, with per-stimulus seeds
    derived deterministically from the master seed."""
    if families is None:
        families = sorted(FAMILY_SUBTYPES)
    specs = []
    for family in families:
        for sub_i, subtype in enumerate(FAMILY_SUBTYPES[family]):
            for x in range(1, contrast_levels(family) + 1):
                ss = np.random.SeedSequence([master_seed, family, sub_i, x])
                seed = int(ss.generate_state(1, dtype=np.uint64)[0])
                specs.append(StimulusSpec(family, subtype, x, seed))
    return specs
