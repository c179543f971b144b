"""
Этот модуль содержит реализацию SvgWriter, который рендерит графики
через шаблон Jinja2.
"""
import math
from pathlib import Path
from typing import List, Sequence, Tuple

from ergolab.models.results import PlotSpec
from ergolab.services.fs import FileSystemService
from ergolab.services.template import TemplateService
from .base import BaseWriter

WIDTH = 640
HEIGHT = 400
MARGIN = 64
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]

PLOT_TEMPLATE = """<svg xmlns="http://www.w3.org/2000/svg" width="{{ width }}" height="{{ height }}" viewBox="0 0 {{ width }} {{ height }}">
  <rect width="100%" height="100%" fill="white"/>
  <text x="{{ width // 2 }}" y="28" text-anchor="middle" font-family="sans-serif" font-size="16">{{ title }}</text>
  <line x1="{{ left }}" y1="{{ bottom }}" x2="{{ right }}" y2="{{ bottom }}" stroke="black"/>
  <line x1="{{ left }}" y1="{{ top }}" x2="{{ left }}" y2="{{ bottom }}" stroke="black"/>
  <text x="{{ left }}" y="{{ bottom + 18 }}" text-anchor="start" font-family="sans-serif" font-size="11">{{ x_min | num }}</text>
  <text x="{{ right }}" y="{{ bottom + 18 }}" text-anchor="end" font-family="sans-serif" font-size="11">{{ x_max | num }}</text>
  <text x="{{ left - 6 }}" y="{{ bottom }}" text-anchor="end" font-family="sans-serif" font-size="11">{{ y_min | num }}</text>
  <text x="{{ left - 6 }}" y="{{ top + 10 }}" text-anchor="end" font-family="sans-serif" font-size="11">{{ y_max | num }}</text>
  <text x="{{ (left + right) // 2 }}" y="{{ height - 16 }}" text-anchor="middle" font-family="sans-serif" font-size="13">{{ x_label }}</text>
  <text x="18" y="{{ (top + bottom) // 2 }}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {{ (top + bottom) // 2 }})">{{ y_label }}</text>
{% for s in series %}
  <polyline fill="none" stroke="{{ s.color }}" stroke-width="1.5" points="{{ s.points }}"/>
  <text x="{{ right - 4 }}" y="{{ top + 14 + 16 * loop.index0 }}" text-anchor="end" font-family="sans-serif" font-size="12" fill="{{ s.color }}">{{ s.label }}</text>
{% endfor %}
</svg>
"""


def _axis(values: Sequence[float], log: bool) -> Tuple[float, float]:
    transformed = [math.log10(v) for v in values] if log else list(values)
    if not transformed:
        return 0.0, 1.0
    lo, hi = min(transformed), max(transformed)
    if hi == lo:
        pad = 0.5 * abs(lo) or 1.0
        lo, hi = lo - pad, hi + pad
    return lo, hi


def _label(bound: float, log: bool) -> float:
    return 10 ** bound if log else bound


class SvgWriter(BaseWriter):
    """
    Writer графиков: ломаные в прямоугольнике 640×400, логарифмические оси
    по запросу. На логарифмических осях неположительные точки отбрасываются.
    """

    suffix = ".svg"

    def __init__(self, fs_service: FileSystemService, template_service: TemplateService):
        super().__init__(fs_service)
        self._template_service = template_service

    def render(self, plot: PlotSpec) -> str:
        def keep(point: Tuple[float, float]) -> bool:
            x, y = point
            finite = math.isfinite(x) and math.isfinite(y)
            return finite and (not plot.log_x or x > 0) and (not plot.log_y or y > 0)

        series = [[p for p in s.points if keep(p)] for s in plot.series]
        x_lo, x_hi = _axis([x for pts in series for x, _ in pts], plot.log_x)
        y_lo, y_hi = _axis([y for pts in series for _, y in pts], plot.log_y)
        left, right, top, bottom = MARGIN, WIDTH - MARGIN // 2, MARGIN, HEIGHT - MARGIN

        def project(point: Tuple[float, float]) -> str:
            x = math.log10(point[0]) if plot.log_x else point[0]
            y = math.log10(point[1]) if plot.log_y else point[1]
            px = left + (x - x_lo) / (x_hi - x_lo) * (right - left)
            py = bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top)
            return f"{px:.2f},{py:.2f}"

        rendered: List[dict] = [
            {"label": s.label, "color": PALETTE[i % len(PALETTE)], "points": " ".join(project(p) for p in pts)}
            for i, (s, pts) in enumerate(zip(plot.series, series))
        ]
        return self._template_service.render(
            PLOT_TEMPLATE,
            {
                "width": WIDTH,
                "height": HEIGHT,
                "left": left,
                "right": right,
                "top": top,
                "bottom": bottom,
                "title": plot.title,
                "x_label": plot.x_label,
                "y_label": plot.y_label,
                "x_min": _label(x_lo, plot.log_x),
                "x_max": _label(x_hi, plot.log_x),
                "y_min": _label(y_lo, plot.log_y),
                "y_max": _label(y_hi, plot.log_y),
                "series": rendered,
            },
        )

    def write(self, path: Path, payload: PlotSpec) -> None:
        self._fs.write_file(path, self.render(payload))
