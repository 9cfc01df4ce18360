"""Deterministic SVG scatter plots (no plotting dependency, stable bytes)."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

__all__ = ["scatter_svg", "PALETTE", "NOISE_COLOR", "EXTERNAL_COLOR"]

PALETTE = (
    "#4e79a7",
    "#f28e2b",
    "#59a14f",
    "#e15759",
    "#b07aa1",
    "#76b7b2",
    "#edc948",
    "#ff9da7",
    "#9c755f",
    "#86bcb6",
    "#d37295",
    "#a0cbe8",
)
NOISE_COLOR = "#444444"
EXTERNAL_COLOR = "#bbbbbb"

_PANEL = 420
_MARGIN = 36
_LEGEND_W = 170


def _scale(coords: np.ndarray) -> np.ndarray:
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    unit = (coords - lo) / span
    out = np.empty_like(unit)
    out[:, 0] = _MARGIN + unit[:, 0] * (_PANEL - 2 * _MARGIN)
    out[:, 1] = _PANEL - _MARGIN - unit[:, 1] * (_PANEL - 2 * _MARGIN)
    return out


def _panel(
    coords: np.ndarray,
    keys: Sequence,
    colors: dict,
    title: str,
    x_off: int,
) -> list[str]:
    pts = _scale(coords)
    parts = [
        f'<g transform="translate({x_off},0)">',
        f'<rect x="0.5" y="0.5" width="{_PANEL - 1}" height="{_PANEL - 1}" '
        'fill="white" stroke="#cccccc"/>',
        f'<text x="{_PANEL // 2}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]
    for (x, y), key in zip(pts, keys):
        parts.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4.5" fill="{colors[key]}" '
            'fill-opacity="0.85" stroke="#333333" stroke-width="0.4"/>'
        )
    for i, (key, color) in enumerate(colors.items()):
        ly = 28 + i * 18
        parts.append(
            f'<circle cx="{_PANEL + 12}" cy="{ly}" r="5" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{_PANEL + 24}" y="{ly + 4}" font-family="sans-serif" '
            f'font-size="11">{_esc(str(key))}</text>'
        )
    parts.append("</g>")
    return parts


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def scatter_svg(
    coords: np.ndarray,
    panels: list[tuple[str, Sequence, dict]],
) -> str:
    """Render one scatter per panel spec (title, per-point keys, key colors)."""
    coords = np.asarray(coords, dtype=float)
    width = len(panels) * (_PANEL + _LEGEND_W)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{_PANEL}" viewBox="0 0 {width} {_PANEL}">',
    ]
    for i, (title, keys, colors) in enumerate(panels):
        parts.extend(_panel(coords, keys, colors, title, i * (_PANEL + _LEGEND_W)))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cluster_colors(labels: Sequence[int]) -> dict[int, str]:
    """Stable label->color map; DBSCAN noise (-1) gets the dark noise color."""
    out: dict[int, str] = {}
    idx = 0
    for label in sorted(set(labels)):
        if label == -1:
            out[label] = NOISE_COLOR
        else:
            out[label] = PALETTE[idx % len(PALETTE)]
            idx += 1
    return out


def team_colors(teams: Sequence[str], external: str = "(external)") -> dict[str, str]:
    """Stable team->color map; unmapped contributors are gray."""
    out: dict[str, str] = {}
    idx = 0
    for team in sorted(set(teams)):
        if team == external:
            out[team] = EXTERNAL_COLOR
        else:
            out[team] = PALETTE[idx % len(PALETTE)]
            idx += 1
    return out
