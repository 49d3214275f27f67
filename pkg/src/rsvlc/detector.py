"""Receiver phases 1 and 2: locate lit areas and split them into
transmission regions.

A Gaussian blur washes out the modulation stripes so lit areas can be
thresholded and labelled.  Within an area, each column's high-frequency
energy is measured over windows of three bit-periods (long enough to always
contain a preamble); where two orthogonal-preamble LEDs overlap the
preambles cancel, so the energy profile dips and its interior local minima
mark the interference-region centers.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import NoLightSource, WindowTooLarge
from .filters import centered_moving_average
from .protocol import Parity

# Raw energies below this are treated as "no modulation at all" and the
# profile is left at zero instead of being normalized (avoids 0/0).
DEGENERATE_ENERGY = 1e-9

_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)  # 4-connectivity


@dataclass(frozen=True)
class LitArea:
    """One connected lit component: bounding box plus its pixel mask."""

    row_min: int
    row_max: int
    col_min: int
    col_max: int
    mask: np.ndarray  # bool, shaped like the bounding box

    @property
    def n_rows(self) -> int:
        return self.row_max - self.row_min + 1

    @property
    def n_cols(self) -> int:
        return self.col_max - self.col_min + 1

    @property
    def n_pixels(self) -> int:
        return int(self.mask.sum())


@dataclass(frozen=True)
class EnergyProfile:
    """Per-column high-frequency energy across a lit area, normalized to max 1.

    ``values[i]`` belongs to image column ``col_start + i``.  ``raw_peak`` is
    the pre-normalization maximum; when it falls below DEGENERATE_ENERGY the
    values are all zero.
    """

    values: np.ndarray
    col_start: int
    row_min: int
    row_max: int
    raw_peak: float

    def __len__(self) -> int:
        return len(self.values)

    @property
    def columns(self) -> np.ndarray:
        return self.col_start + np.arange(len(self.values))


@dataclass(frozen=True)
class Region:
    """A transmission region: the column span owned by one LED."""

    col_start: int
    col_end: int
    row_min: int
    row_max: int
    parity_hint: Parity

    @property
    def n_cols(self) -> int:
        return self.col_end - self.col_start + 1

    @property
    def n_rows(self) -> int:
        return self.row_max - self.row_min + 1


@dataclass(frozen=True)
class RegionMap:
    """Transmission regions and the interference centers separating them."""

    regions: tuple[Region, ...]
    centers: tuple[int, ...]  # absolute column index per interference center


def find_lit_areas(
    img: np.ndarray,
    blur_sigma: float,
    threshold: float,
    min_area: int = 1,
) -> list[LitArea]:
    """Segment the frame into lit components.

    The image is Gaussian-blurred, thresholded at ``threshold`` of its
    brightness span above the background floor (the blurred minimum, so a
    constant ambient level never passes), and split into 4-connected
    components; components smaller than ``min_area`` pixels are dropped.
    """
    if blur_sigma <= 0:
        raise ValueError(f"blur sigma must be positive, got {blur_sigma}")
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    blurred = ndimage.gaussian_filter(np.asarray(img, dtype=float), sigma=blur_sigma)
    lo = float(blurred.min())
    hi = float(blurred.max())
    if hi - lo < 1e-12:
        raise NoLightSource("frame is uniform: no lit area to segment")
    binary = blurred >= lo + threshold * (hi - lo)
    labels, n_components = ndimage.label(binary, structure=_CROSS)
    areas = []
    for index, sl in enumerate(ndimage.find_objects(labels), start=1):
        component = labels[sl] == index
        if component.sum() < min_area:
            continue
        areas.append(
            LitArea(
                row_min=sl[0].start,
                row_max=sl[0].stop - 1,
                col_min=sl[1].start,
                col_max=sl[1].stop - 1,
                mask=component,
            )
        )
    if not areas:
        raise NoLightSource(
            f"no lit component of at least {min_area} pixels (found {n_components} smaller ones)"
        )
    areas.sort(key=lambda a: (a.col_min, a.row_min))
    return areas


def _windowed_energies(block: np.ndarray, window: int) -> np.ndarray:
    """Mean per-window DC-removed energy for every column of ``block``.

    Rows are cut into consecutive non-overlapping windows of ``window``
    samples (a trailing partial window is discarded); each window has its
    mean subtracted before the squared residuals are summed.
    """
    n_rows, n_cols = block.shape
    n_windows = n_rows // window
    if n_windows == 0:
        raise WindowTooLarge(
            f"window of {window} rows does not fit in a {n_rows}-row area"
        )
    windows = block[: n_windows * window].reshape(n_windows, window, n_cols)
    residual = windows - windows.mean(axis=1, keepdims=True)
    return (residual**2).sum(axis=1).mean(axis=0)


def column_energy(img: np.ndarray, area: LitArea, col: int, samples_per_bit: int) -> float:
    """High-frequency energy of one column over the lit area's row span."""
    if not area.col_min <= col <= area.col_max:
        raise ValueError(f"column {col} outside lit area {area.col_min}..{area.col_max}")
    block = np.asarray(img, dtype=float)[area.row_min : area.row_max + 1, col : col + 1]
    return float(_windowed_energies(block, 3 * samples_per_bit)[0])


def energy_profile(
    img: np.ndarray,
    area: LitArea,
    samples_per_bit: int,
    smooth_window: int,
) -> EnergyProfile:
    """Per-column energy across the lit area, smoothed and normalized to max 1."""
    if smooth_window < 1 or smooth_window % 2 == 0:
        raise ValueError(f"smoothing window must be odd and >= 1, got {smooth_window}")
    block = np.asarray(img, dtype=float)[
        area.row_min : area.row_max + 1, area.col_min : area.col_max + 1
    ]
    energies = _windowed_energies(block, 3 * samples_per_bit)
    smoothed = centered_moving_average(energies, smooth_window)
    raw_peak = float(smoothed.max())
    if raw_peak >= DEGENERATE_ENERGY:
        smoothed = smoothed / raw_peak
    else:
        smoothed = np.zeros_like(smoothed)
    return EnergyProfile(
        values=smoothed,
        col_start=area.col_min,
        row_min=area.row_min,
        row_max=area.row_max,
        raw_peak=raw_peak,
    )


def interior_minima(values) -> list[tuple[int, float]]:
    """Strict interior local minima of a sequence, as (index, value) pairs.

    A plateau counts as one minimum when both neighbouring runs are strictly
    larger; its center index is reported, ties breaking leftward.  Runs
    touching either end are never minima.
    """
    x = np.asarray(values, dtype=float)
    runs: list[tuple[int, int, float]] = []
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[j + 1] == x[i]:
            j += 1
        runs.append((i, j, float(x[i])))
        i = j + 1
    found = []
    for k in range(1, len(runs) - 1):
        start, end, value = runs[k]
        if runs[k - 1][2] > value and runs[k + 1][2] > value:
            found.append(((start + end) // 2, value))
    return found


def split_regions(profile: EnergyProfile, min_depth: float) -> RegionMap:
    """Cut the profile at its deep interior minima.

    Each contiguous run of values below ``min_depth`` contributes one
    interference center at its deepest column, so noise ripple inside a
    single valley cannot multiply the split points.  The maximal column
    intervals between consecutive centers (and the profile ends) are the
    transmission regions, ordered left to right with alternating parity
    hints starting Even.
    """
    if not 0 < min_depth < 1:
        raise ValueError(f"min_depth must be in (0, 1), got {min_depth}")
    below = profile.values < min_depth
    deepest_per_run: dict[int, tuple[float, int]] = {}
    for idx, value in interior_minima(profile.values):
        if value >= min_depth:
            continue
        run_start = idx
        while run_start > 0 and below[run_start - 1]:
            run_start -= 1
        best = deepest_per_run.get(run_start)
        if best is None or value < best[0]:
            deepest_per_run[run_start] = (value, idx)
    centers = [
        profile.col_start + idx
        for _, (_, idx) in sorted(deepest_per_run.items())
    ]
    bounds = (
        [profile.col_start - 1] + centers + [profile.col_start + len(profile.values)]
    )
    regions = []
    for k in range(len(bounds) - 1):
        regions.append(
            Region(
                col_start=bounds[k] + 1,
                col_end=bounds[k + 1] - 1,
                row_min=profile.row_min,
                row_max=profile.row_max,
                parity_hint=Parity.from_index(k),
            )
        )
    return RegionMap(regions=tuple(regions), centers=tuple(centers))


def profile_to_csv(profile: EnergyProfile, path: str | os.PathLike) -> None:
    """Dump the profile as ``col_index,energy`` rows for plotting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["col_index", "energy"])
        for col, value in zip(profile.columns, profile.values):
            writer.writerow([int(col), repr(float(value))])
