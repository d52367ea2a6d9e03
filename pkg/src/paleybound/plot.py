"""Self-contained SVG scatter/fit plot on log-log axes.

Hand-rolled rather than delegated to a plotting stack so the output is fully
deterministic and testable: every scatter series emits one <circle> per record
with a class naming the series, curves are single <path> elements, and the
legend carries the fitted exponents.
"""

from __future__ import annotations

import math
from pathlib import Path

from .paley import hp_bound
from .report import BoundsRecord, FitResult

__all__ = ["plot_bounds", "hp_curve", "power_curve"]

_WIDTH, _HEIGHT = 760, 520
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 24, 24, 56

_SERIES = (
    ("theta", "#1f77b4", "upper bound via the spectral relaxation"),
    ("l2", "#d62728", "block-diagonal relaxation"),
    ("omega", "#2ca02c", "clique number"),
)


def hp_curve(ps: list[int]) -> list[tuple[float, float]]:
    """Sampled closed-form comparison bound (sqrt(2p-1)+1)/2."""
    return [(p, hp_bound(p)) for p in ps]


def power_curve(fit: FitResult, p_lo: float, p_hi: float, samples: int = 64) -> list[tuple[float, float]]:
    step = (math.log(p_hi) - math.log(p_lo)) / (samples - 1)
    return [
        (math.exp(math.log(p_lo) + i * step), fit.a * math.exp(math.log(p_lo) + i * step) ** fit.b)
        for i in range(samples)
    ]


def plot_bounds(
    records: list[BoundsRecord],
    fits: dict[str, FitResult] | None = None,
    path=None,
    extra_series: dict[str, list[tuple[float, float]]] | None = None,
) -> str:
    """Render the bounds of ``records`` (plus fitted curves and the closed-form
    bound) as SVG text; writes to ``path`` when given and returns the text.

    ``extra_series`` overlays externally supplied (p, value) points, labeled
    as external data in the legend.
    """
    if not records:
        raise ValueError("no records to plot")
    fits = fits or {}
    extra_series = extra_series or {}

    records = sorted(records, key=lambda r: r.p)
    ps = [r.p for r in records]
    values: list[float] = []
    for r in records:
        values.extend(v for v in (r.theta, r.l2, float(r.omega), r.hp) if math.isfinite(v) and v > 0)
    for pts in extra_series.values():
        values.extend(v for _, v in pts if v > 0)
    x_lo, x_hi = min(ps) * 0.95, max(ps) * 1.05
    y_lo, y_hi = min(values) * 0.85, max(values) * 1.2

    def sx(p: float) -> float:
        frac = (math.log(p) - math.log(x_lo)) / (math.log(x_hi) - math.log(x_lo))
        return _MARGIN_L + frac * (_WIDTH - _MARGIN_L - _MARGIN_R)

    def sy(v: float) -> float:
        frac = (math.log(v) - math.log(y_lo)) / (math.log(y_hi) - math.log(y_lo))
        return _HEIGHT - _MARGIN_B - frac * (_HEIGHT - _MARGIN_T - _MARGIN_B)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{_WIDTH - _MARGIN_L - _MARGIN_R}" '
        f'height="{_HEIGHT - _MARGIN_T - _MARGIN_B}" fill="none" stroke="#444"/>',
    ]

    # log-decade ticks
    for dec in range(int(math.floor(math.log10(x_lo))), int(math.ceil(math.log10(x_hi))) + 1):
        val = 10**dec
        if x_lo <= val <= x_hi:
            x = sx(val)
            parts.append(f'<line x1="{x:.1f}" y1="{_HEIGHT - _MARGIN_B}" x2="{x:.1f}" '
                         f'y2="{_HEIGHT - _MARGIN_B + 6}" stroke="#444"/>')
            parts.append(f'<text x="{x:.1f}" y="{_HEIGHT - _MARGIN_B + 20}" font-size="12" '
                         f'text-anchor="middle">{val}</text>')
    for dec in range(int(math.floor(math.log10(y_lo))), int(math.ceil(math.log10(y_hi))) + 1):
        val = 10**dec
        if y_lo <= val <= y_hi:
            yq = sy(val)
            parts.append(f'<line x1="{_MARGIN_L - 6}" y1="{yq:.1f}" x2="{_MARGIN_L}" '
                         f'y2="{yq:.1f}" stroke="#444"/>')
            parts.append(f'<text x="{_MARGIN_L - 10}" y="{yq + 4:.1f}" font-size="12" '
                         f'text-anchor="end">{val}</text>')
    parts.append(f'<text x="{(_WIDTH + _MARGIN_L - _MARGIN_R) / 2:.0f}" y="{_HEIGHT - 16}" '
                 f'font-size="13" text-anchor="middle">p (log scale)</text>')

    def path_of(points) -> str:
        cmds = []
        for i, (p, v) in enumerate(points):
            cmds.append(f"{'M' if i == 0 else 'L'}{sx(p):.1f},{sy(v):.1f}")
        return " ".join(cmds)

    # closed-form bound curve
    hp_pts = hp_curve(ps) if len(ps) > 1 else hp_curve([ps[0]])
    if len(hp_pts) > 1:
        parts.append(f'<path class="curve-hp" d="{path_of(hp_pts)}" fill="none" '
                     f'stroke="#9467bd" stroke-width="1.5" stroke-dasharray="6 3"/>')

    for name, fit in fits.items():
        pts = power_curve(fit, x_lo, x_hi)
        parts.append(f'<path class="fit-{name}" d="{path_of(pts)}" fill="none" '
                     f'stroke="#8c564b" stroke-width="1.2"/>')

    for name, color, _ in _SERIES:
        for r in records:
            v = float(getattr(r, name))
            if math.isfinite(v) and v > 0:
                parts.append(f'<circle class="series-{name}" cx="{sx(r.p):.1f}" '
                             f'cy="{sy(v):.1f}" r="3.5" fill="{color}"/>')

    for i, (name, pts) in enumerate(sorted(extra_series.items())):
        for p, v in pts:
            parts.append(f'<circle class="external-{name}" cx="{sx(p):.1f}" cy="{sy(v):.1f}" '
                         f'r="3" fill="none" stroke="#7f7f7f"/>')

    # legend
    ly = _MARGIN_T + 14
    for name, color, label in _SERIES:
        parts.append(f'<circle cx="{_MARGIN_L + 12}" cy="{ly}" r="3.5" fill="{color}"/>')
        text = label
        if name in fits:
            text += f" (fit exponent {fits[name].b:.3f})"
        parts.append(f'<text x="{_MARGIN_L + 22}" y="{ly + 4}" font-size="12">{text}</text>')
        ly += 18
    parts.append(f'<text x="{_MARGIN_L + 22}" y="{ly + 4}" font-size="12">dashed: closed-form bound</text>')
    ly += 18
    for name in sorted(extra_series):
        parts.append(f'<text x="{_MARGIN_L + 22}" y="{ly + 4}" font-size="12">'
                     f'open circles: external data ({name})</text>')
        ly += 18

    parts.append("</svg>")
    svg = "\n".join(parts) + "\n"
    if path is not None:
        Path(path).write_text(svg, encoding="utf-8")
    return svg
