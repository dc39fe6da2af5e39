"""
SVG figure generator for the three report figures

Figures are built as ElementTree documents and pretty-printed through
minidom, so the output is plain diffable text.  Every figure has a CSV of
its underlying points written next to it by the CLI.
"""

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import List, Sequence, Tuple
from xml.dom import minidom

from .curves import RocCurve
from .metrics import ThreeRegion
from .synthetic import BoundValidationRow

SVG_NS = "http://www.w3.org/2000/svg"

COLORS = {
    "correct": "#4c72b0",
    "overlap": "#bbbbbb",
    "incorrect": "#c44e52",
    "strict": "#1f4e9c",
    "permissive": "#a8262b",
    "band": "#9ecae1",
    "star": "#222222",
    "axis": "#333333",
    "grid": "#e5e5e5",
}


@dataclass(frozen=True)
class PlotArea:
    """Maps data coordinates onto the pixel frame of one plot"""
    left: float
    top: float
    width: float
    height: float
    x_range: Tuple[float, float] = (0.0, 1.0)
    y_range: Tuple[float, float] = (0.0, 1.0)

    def px(self, x: float) -> float:
        lo, hi = self.x_range
        return self.left + (x - lo) / (hi - lo) * self.width

    def py(self, y: float) -> float:
        lo, hi = self.y_range
        return self.top + self.height - (y - lo) / (hi - lo) * self.height

    def points(self, xs: Sequence[float], ys: Sequence[float]) -> str:
        return " ".join(f"{self.px(x):.2f},{self.py(y):.2f}" for x, y in zip(xs, ys))


class SvgFigureGenerator:
    """Generates the combined ROC, stacked three-region and bound band figures"""

    def __init__(self, width: int = 480, height: int = 480, margin: int = 60) -> None:
        self.width = width
        self.height = height
        self.margin = margin

    def _new_canvas(self, title: str) -> Tuple[ET.Element, PlotArea]:
        root = ET.Element("svg")
        root.set("xmlns", SVG_NS)
        root.set("version", "1.1")
        root.set("width", str(self.width))
        root.set("height", str(self.height))
        root.set("viewBox", f"0 0 {self.width} {self.height}")
        ET.SubElement(root, "title").text = title
        background = ET.SubElement(root, "rect")
        background.set("width", str(self.width))
        background.set("height", str(self.height))
        background.set("fill", "white")

        heading = ET.SubElement(root, "text")
        heading.set("x", f"{self.width / 2:.1f}")
        heading.set("y", f"{self.margin / 2:.1f}")
        heading.set("text-anchor", "middle")
        heading.set("font-family", "sans-serif")
        heading.set("font-size", "14")
        heading.text = title

        side = self.margin
        area = PlotArea(left=side, top=side, width=self.width - 1.5 * side, height=self.height - 2 * side)
        return root, area

    def _add_axes(
        self,
        root: ET.Element,
        area: PlotArea,
        x_label: str,
        y_label: str,
        x_ticks: Sequence[Tuple[float, str]],
        y_ticks: Sequence[Tuple[float, str]],
    ) -> None:
        """Frame, tick labels and axis titles"""
        axes = ET.SubElement(root, "g")
        axes.set("font-family", "sans-serif")
        axes.set("font-size", "11")
        axes.set("fill", COLORS["axis"])

        frame = ET.SubElement(axes, "rect")
        frame.set("x", f"{area.left:.2f}")
        frame.set("y", f"{area.top:.2f}")
        frame.set("width", f"{area.width:.2f}")
        frame.set("height", f"{area.height:.2f}")
        frame.set("fill", "none")
        frame.set("stroke", COLORS["axis"])

        for value, label in x_ticks:
            tick = ET.SubElement(axes, "text")
            tick.set("x", f"{area.px(value):.2f}")
            tick.set("y", f"{area.top + area.height + 16:.2f}")
            tick.set("text-anchor", "middle")
            tick.text = label
        for value, label in y_ticks:
            tick = ET.SubElement(axes, "text")
            tick.set("x", f"{area.left - 6:.2f}")
            tick.set("y", f"{area.py(value) + 4:.2f}")
            tick.set("text-anchor", "end")
            tick.text = label

        x_title = ET.SubElement(axes, "text")
        x_title.set("x", f"{area.left + area.width / 2:.2f}")
        x_title.set("y", f"{area.top + area.height + 36:.2f}")
        x_title.set("text-anchor", "middle")
        x_title.text = x_label

        y_title = ET.SubElement(axes, "text")
        cx, cy = area.left - 40, area.top + area.height / 2
        y_title.set("x", f"{cx:.2f}")
        y_title.set("y", f"{cy:.2f}")
        y_title.set("text-anchor", "middle")
        y_title.set("transform", f"rotate(-90 {cx:.2f} {cy:.2f})")
        y_title.text = y_label

    def _add_polygon(
        self, root: ET.Element, area: PlotArea, xs: Sequence[float], ys: Sequence[float],
        fill: str, opacity: str = "0.6",
    ) -> None:
        polygon = ET.SubElement(root, "polygon")
        polygon.set("points", area.points(xs, ys))
        polygon.set("fill", fill)
        polygon.set("fill-opacity", opacity)
        polygon.set("stroke", "none")

    def _add_polyline(
        self, root: ET.Element, area: PlotArea, xs: Sequence[float], ys: Sequence[float],
        stroke: str, dash: str = "",
    ) -> None:
        line = ET.SubElement(root, "polyline")
        line.set("points", area.points(xs, ys))
        line.set("fill", "none")
        line.set("stroke", stroke)
        line.set("stroke-width", "2")
        if dash:
            line.set("stroke-dasharray", dash)

    def _add_legend(
        self, root: ET.Element, area: PlotArea, entries: Sequence[Tuple[str, str]]
    ) -> None:
        legend = ET.SubElement(root, "g")
        legend.set("font-family", "sans-serif")
        legend.set("font-size", "11")
        for i, (label, color) in enumerate(entries):
            y = area.top + 10 + i * 16
            swatch = ET.SubElement(legend, "rect")
            swatch.set("x", f"{area.left + area.width - 150:.2f}")
            swatch.set("y", f"{y:.2f}")
            swatch.set("width", "10")
            swatch.set("height", "10")
            swatch.set("fill", color)
            text = ET.SubElement(legend, "text")
            text.set("x", f"{area.left + area.width - 135:.2f}")
            text.set("y", f"{y + 9:.2f}")
            text.text = label

    def roc_figure(self, strict: RocCurve, permissive: RocCurve, title: str = "Interval ROC") -> str:
        """Both curves in the unit square with the three regions shaded

        Below the strict curve is P(I1 > I0), above the permissive curve is
        P(I1 < I0), and the white band between them is the overlap.
        """
        root, area = self._new_canvas(title)
        unit_ticks = [(v / 4, f"{v / 4:.2f}") for v in range(5)]

        strict_x, strict_y = list(strict.x), list(strict.y)
        perm_x, perm_y = list(permissive.x), list(permissive.y)
        self._add_polygon(root, area, strict_x + [1.0, 0.0], strict_y + [0.0, 0.0], COLORS["correct"])
        self._add_polygon(root, area, perm_x + [1.0, 0.0], perm_y + [1.0, 1.0], COLORS["incorrect"])
        self._add_polyline(root, area, [0.0, 1.0], [0.0, 1.0], COLORS["grid"], dash="4 4")
        self._add_polyline(root, area, strict_x, strict_y, COLORS["strict"])
        self._add_polyline(root, area, perm_x, perm_y, COLORS["permissive"])
        self._add_axes(root, area, "FPR", "TPR", unit_ticks, unit_ticks)
        self._add_legend(
            root,
            area,
            [
                ("TPR_L vs FPR_U", COLORS["strict"]),
                ("TPR_U vs FPR_L", COLORS["permissive"]),
            ],
        )
        return self._format_xml(root)

    def stacked_regions_figure(
        self, levels: Sequence[float], regions: Sequence[ThreeRegion], title: str = "Three-region decomposition"
    ) -> str:
        """Stacked areas of the three regions over confidence levels"""
        root, area = self._new_canvas(title)
        lo, hi = min(levels), max(levels)
        if hi == lo:
            hi = lo + 0.01
        area = PlotArea(area.left, area.top, area.width, area.height, x_range=(lo, hi))

        xs = list(levels)
        correct = [r.p_correct for r in regions]
        overlap_top = [r.p_correct + r.p_overlap for r in regions]
        ones = [1.0] * len(xs)
        zeros = [0.0] * len(xs)

        def band(bottom: List[float], top: List[float], fill: str) -> None:
            self._add_polygon(root, area, xs + xs[::-1], top + bottom[::-1], fill, opacity="0.85")

        band(zeros, correct, COLORS["correct"])
        band(correct, overlap_top, COLORS["overlap"])
        band(overlap_top, ones, COLORS["incorrect"])

        x_ticks = [(v, f"{v * 100:.0f}%") for v in _nice_ticks(lo, hi)]
        y_ticks = [(v / 4, f"{v / 4:.2f}") for v in range(5)]
        self._add_axes(root, area, "Confidence level", "Probability", x_ticks, y_ticks)
        self._add_legend(
            root,
            area,
            [
                ("P(I1 > I0)", COLORS["correct"]),
                ("P(overlap)", COLORS["overlap"]),
                ("P(I1 < I0)", COLORS["incorrect"]),
            ],
        )
        return self._format_xml(root)

    def bound_band_figure(self, rows: Sequence[BoundValidationRow], title: str = "Optimal AUC bounds") -> str:
        """Shaded [lower, upper] band over alpha with AUC* drawn through it"""
        root, area = self._new_canvas(title)
        ordered = sorted(rows, key=lambda r: r.alpha)
        xs = [r.alpha for r in ordered]
        lo, hi = min(xs), max(xs)
        if hi == lo:
            lo, hi = lo - 0.005, hi + 0.005
        area = PlotArea(area.left, area.top, area.width, area.height, x_range=(lo, hi))

        lower = [r.lower_bound for r in ordered]
        upper = [r.upper_bound for r in ordered]
        self._add_polygon(root, area, xs + xs[::-1], upper + lower[::-1], COLORS["band"], opacity="0.7")
        self._add_polyline(root, area, xs, [r.auc_l for r in ordered], COLORS["strict"], dash="5 3")
        self._add_polyline(root, area, xs, [r.auc_u for r in ordered], COLORS["permissive"], dash="5 3")
        self._add_polyline(root, area, xs, [r.auc_star for r in ordered], COLORS["star"])

        x_ticks = [(v, f"{v:.2f}") for v in _nice_ticks(lo, hi)]
        y_ticks = [(v / 4, f"{v / 4:.2f}") for v in range(5)]
        self._add_axes(root, area, "Miscoverage alpha", "AUC", x_ticks, y_ticks)
        self._add_legend(
            root,
            area,
            [
                ("bound range", COLORS["band"]),
                ("AUC_L", COLORS["strict"]),
                ("AUC_U", COLORS["permissive"]),
                ("AUC*", COLORS["star"]),
            ],
        )
        return self._format_xml(root)

    def _format_xml(self, root: ET.Element) -> str:
        """Pretty-print with minidom and drop blank lines"""
        rough_string = ET.tostring(root, "unicode")
        formatted = minidom.parseString(rough_string).toprettyxml(indent="  ")
        lines = [line for line in formatted.split("\n") if line.strip()]
        return "\n".join(lines) + "\n"


def _nice_ticks(lo: float, hi: float, count: int = 5) -> List[float]:
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]
