import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from voronoi_distill.core.base import Destination
from voronoi_distill.envs.base import EnvSpec
from voronoi_distill.evaluation.grids import CELL_COLUMN, HeatmapGrid, PolicyGrid
from voronoi_distill.utils.utils import ensure_parent

SIZE = 480
MARGIN = 24
PALETTE = (
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
    "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
)


@dataclass
class PartitionDiagram:
    grid: PolicyGrid
    spec: EnvSpec
    codewords: Optional[np.ndarray] = None
    title: str = ""


def _heat(value: float, scale: float) -> str:
    """Blue for negative, red for positive, white at zero."""
    t = 0.0 if scale == 0 else min(abs(value) / scale, 1.0)
    fade = int(round(255 * (1.0 - t)))
    return f"#ff{fade:02x}{fade:02x}" if value >= 0 else f"#{fade:02x}{fade:02x}ff"


class SvgDestination(Destination):
    """
    Renders a 2-D policy grid: one square per grid point coloured by owning
    cell (arrow field) or by force (heat map), cell borders where adjacent
    squares change cell, codewords as dots, and arrows for vector actions.
    """

    def __init__(self, output_path: str):
        self.output_path = Path(output_path)

    def load(self, data: PartitionDiagram):
        root = self.render(data)
        ET.indent(root)
        ensure_parent(self.output_path).write_text(ET.tostring(root, encoding="unicode") + "\n", encoding="utf-8")

    def _to_px(self, spec: EnvSpec, point) -> tuple[float, float]:
        span = spec.state_high - spec.state_low
        span = np.where(span == 0, 1.0, span)
        u = (np.asarray(point, dtype=float) - spec.state_low) / span
        return MARGIN + u[0] * SIZE, MARGIN + (1.0 - u[1]) * SIZE

    def render(self, diagram: PartitionDiagram) -> ET.Element:
        grid, spec = diagram.grid, diagram.spec
        total = SIZE + 2 * MARGIN
        root = ET.Element(
            "svg",
            xmlns="http://www.w3.org/2000/svg",
            width=str(total),
            height=str(total),
            viewBox=f"0 0 {total} {total}",
        )
        if diagram.title:
            ET.SubElement(root, "title").text = diagram.title

        nx_, ny_ = grid.resolution
        frame = grid.frame
        states = frame[grid.state_columns].to_numpy()
        actions = frame[grid.action_columns].to_numpy()
        cells = frame[CELL_COLUMN].to_numpy() if grid.has_cells else None
        w, h = SIZE / nx_, SIZE / ny_

        squares = ET.SubElement(root, "g", id="squares")
        if isinstance(grid, HeatmapGrid):
            scale = float(np.max(np.abs(np.concatenate([spec.action_low, spec.action_high]))))
            fills = [_heat(a[0], scale) for a in actions]
        elif cells is not None:
            fills = [PALETTE[int(c) % len(PALETTE)] for c in cells]
        else:
            fills = ["#f0f0f0"] * len(states)
        for state, fill in zip(states, fills):
            x, y = self._to_px(spec, state)
            ET.SubElement(
                squares, "rect",
                x=f"{x - w / 2:.2f}", y=f"{y - h / 2:.2f}",
                width=f"{w:.2f}", height=f"{h:.2f}", fill=fill, stroke="none",
            )

        if cells is not None:
            self._borders(root, spec, states, cells.reshape(nx_, ny_), w, h)
        if not isinstance(grid, HeatmapGrid) and actions.shape[1] >= 2:
            self._arrows(root, spec, states, actions, min(w, h))
        if diagram.codewords is not None:
            dots = ET.SubElement(root, "g", id="codewords")
            for k, point in enumerate(np.asarray(diagram.codewords).reshape(-1, 2)):
                x, y = self._to_px(spec, point)
                ET.SubElement(dots, "circle", cx=f"{x:.2f}", cy=f"{y:.2f}", r="4", fill="black").set("data-cell", str(k))
        return root

    def _borders(self, root, spec, states, cells, w, h):
        group = ET.SubElement(root, "g", id="borders", stroke="#333333")
        grid_states = states.reshape(cells.shape[0], cells.shape[1], 2)
        for i in range(cells.shape[0]):
            for j in range(cells.shape[1]):
                x, y = self._to_px(spec, grid_states[i, j])
                if i + 1 < cells.shape[0] and cells[i, j] != cells[i + 1, j]:
                    ET.SubElement(group, "line", x1=f"{x + w / 2:.2f}", y1=f"{y - h / 2:.2f}", x2=f"{x + w / 2:.2f}", y2=f"{y + h / 2:.2f}")
                if j + 1 < cells.shape[1] and cells[i, j] != cells[i, j + 1]:
                    ET.SubElement(group, "line", x1=f"{x - w / 2:.2f}", y1=f"{y - h / 2:.2f}", x2=f"{x + w / 2:.2f}", y2=f"{y - h / 2:.2f}")

    def _arrows(self, root, spec, states, actions, spacing):
        group = ET.SubElement(root, "g", id="arrows", stroke="black")
        norms = np.linalg.norm(actions[:, :2], axis=1)
        longest = float(norms.max()) if len(norms) else 0.0
        if longest == 0.0:
            return
        for state, action in zip(states, actions):
            x, y = self._to_px(spec, state)
            dx, dy = 0.45 * spacing * action[:2] / longest
            ET.SubElement(group, "line", x1=f"{x:.2f}", y1=f"{y:.2f}", x2=f"{x + dx:.2f}", y2=f"{y - dy:.2f}")
            ET.SubElement(group, "circle", cx=f"{x + dx:.2f}", cy=f"{y - dy:.2f}", r="1", fill="black")
