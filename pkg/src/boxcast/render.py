"""Text tables and SVG charts. Output is byte-for-byte deterministic."""

from __future__ import annotations

import csv
import io
import math
from typing import Optional, Sequence

from .errors import ContractError, DomainError
from .forecast import ForecastTable
from .ingest import MonthlySeries

FORMATS = ("csv", "markdown")


def format_count(value: float) -> str:
    text = f"{value:.0f}"
    return "0" if text == "-0" else text


def format_stat(value: float) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "NA"
    text = f"{value:.3f}"
    return "0.000" if text == "-0.000" else text


def render_rows(header: Sequence[str], rows: Sequence[Sequence[str]], fmt: str) -> str:
    """Render a header and string rows as CSV or a markdown pipe table."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    if fmt == "markdown":
        def line(cells):
            return "| " + " | ".join(str(c).replace("|", "\\|") for c in cells) + " |\n"
        return line(header) + line(["---"] * len(header)) + "".join(line(r) for r in rows)
    raise DomainError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def render_table(tables: Sequence[ForecastTable], fmt: str = "csv") -> str:
    """Forecast tables side by side: month, then Forecast/UCL/LCL per model."""
    tables = list(tables)
    header = ["month"]
    for t in tables:
        header += [f"{t.model_name} Forecast", f"{t.model_name} UCL", f"{t.model_name} LCL"]
    if not tables:
        return render_rows(header, [], fmt)
    months = tables[0].months
    for t in tables[1:]:
        if t.months != months:
            raise ContractError(f"{t.model_name} covers different months than {tables[0].model_name}")
    rows = []
    for i, month in enumerate(months):
        row = [month.short()]
        for t in tables:
            r = t.rows[i]
            row += [format_count(r.forecast), format_count(r.ucl), format_count(r.lcl)]
        rows.append(row)
    return render_rows(header, rows, fmt)


# -- SVG ---------------------------------------------------------------------

WIDTH, HEIGHT = 800, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 40, 60


def _nice_step(span: float, target: int = 6) -> float:
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 2.5, 5, 10):
        if m * mag >= raw:
            return m * mag
    return 10 * mag


def _f(x: float) -> str:
    text = f"{x:.2f}"
    return "0.00" if text == "-0.00" else text


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def render_plot(series: MonthlySeries, table: Optional[ForecastTable] = None,
                out=None, title: Optional[str] = None) -> str:
    """Line chart of ``series`` with an optional forecast and confidence band.

    Returns the SVG text; when ``out`` is given it is also written there.
    """
    n = len(series)
    h = len(table.rows) if table is not None else 0
    total = n + h
    ys = list(map(float, series.values))
    if table is not None:
        ys += [r.ucl for r in table.rows] + [r.lcl for r in table.rows]
    lo, hi = min(ys), max(ys)
    if hi - lo < 1e-9:
        lo, hi = lo - 1.0, hi + 1.0
    step = _nice_step(hi - lo)
    lo = math.floor(lo / step) * step
    hi = math.ceil(hi / step) * step

    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(i: int) -> float:
        return LEFT + (pw * i / (total - 1) if total > 1 else pw / 2)

    def py(v: float) -> float:
        return TOP + ph * (hi - v) / (hi - lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="22" text-anchor="middle" font-size="14">'
        f'{_esc(title or series.name)}</text>',
    ]
    # grid and count axis
    k = 0
    while lo + k * step <= hi + step * 1e-9:
        v = lo + k * step
        y = py(v)
        parts.append(f'<line x1="{LEFT}" y1="{_f(y)}" x2="{WIDTH - RIGHT}" y2="{_f(y)}" '
                     f'stroke="#e0e0e0"/>')
        label = f"{v:.0f}" if step >= 1 else f"{v:g}"
        parts.append(f'<text x="{LEFT - 6}" y="{_f(y + 4)}" text-anchor="end">{label}</text>')
        k += 1
    parts.append(f'<text x="16" y="{TOP + ph / 2:.0f}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {TOP + ph / 2:.0f})">Number of crimes</text>')
    # month axis
    tick_every = 1 if total <= 24 else (3 if total <= 48 else 12)
    start = series.start
    for i in range(total):
        m = start + i
        if (m.month - 1) % tick_every and i != 0:
            continue
        x = px(i)
        parts.append(f'<line x1="{_f(x)}" y1="{TOP + ph}" x2="{_f(x)}" y2="{TOP + ph + 5}" '
                     f'stroke="black"/>')
        parts.append(f'<text x="{_f(x)}" y="{TOP + ph + 18}" text-anchor="middle">'
                     f'{m.short()}</text>')
    parts.append(f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{WIDTH - RIGHT}" y2="{TOP + ph}" '
                 f'stroke="black"/>')
    parts.append(f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="black"/>')
    parts.append(f'<text x="{LEFT + pw / 2:.0f}" y="{HEIGHT - 12}" text-anchor="middle">Month</text>')

    if table is not None and h:
        upper = [(px(n + j), py(r.ucl)) for j, r in enumerate(table.rows)]
        lower = [(px(n + j), py(r.lcl)) for j, r in enumerate(table.rows)]
        ring = upper + lower[::-1]
        parts.append('<polygon class="band" fill="#f4a3a3" fill-opacity="0.45" stroke="none" '
                     'points="' + " ".join(f"{_f(x)},{_f(y)}" for x, y in ring) + '"/>')
        path = [(px(n - 1), py(float(series.values[-1])))]
        path += [(px(n + j), py(r.forecast)) for j, r in enumerate(table.rows)]
        parts.append('<polyline class="forecast" fill="none" stroke="#c0392b" stroke-width="1.8" '
                     'stroke-dasharray="5,3" points="'
                     + " ".join(f"{_f(x)},{_f(y)}" for x, y in path) + '"/>')
    if n == 1:
        parts.append(f'<circle class="observed" cx="{_f(px(0))}" cy="{_f(py(ys[0]))}" r="3" '
                     f'fill="#1f4e9a"/>')
    else:
        parts.append('<polyline class="observed" fill="none" stroke="#1f4e9a" stroke-width="1.8" '
                     'points="' + " ".join(f"{_f(px(i))},{_f(py(float(v)))}"
                                           for i, v in enumerate(series.values)) + '"/>')
    # legend
    lx, ly = LEFT + 10, TOP + 12
    parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="#1f4e9a" '
                 f'stroke-width="1.8"/><text x="{lx + 26}" y="{ly + 4}">Observed</text>')
    if table is not None and h:
        pct = f"{table.level * 100:g}"
        parts.append(f'<line x1="{lx + 100}" y1="{ly}" x2="{lx + 120}" y2="{ly}" stroke="#c0392b" '
                     f'stroke-dasharray="5,3" stroke-width="1.8"/>'
                     f'<text x="{lx + 126}" y="{ly + 4}">Forecast</text>')
        parts.append(f'<rect x="{lx + 200}" y="{ly - 5}" width="20" height="10" fill="#f4a3a3" '
                     f'fill-opacity="0.45"/><text x="{lx + 226}" y="{ly + 4}">{pct}% UCL/LCL</text>')
    parts.append("</svg>")
    doc = "\n".join(parts) + "\n"
    if out is not None:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(doc)
    return doc
