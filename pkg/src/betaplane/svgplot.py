"""Minimal hand-emitted SVG line plots (no plotting dependency).

Plots the first two numeric columns of a table as a polyline with axes and
tick labels.  Purely a convenience for eyeballing sweeps; never part of any
numeric contract.
"""

from __future__ import annotations

__all__ = ["table_to_svg"]

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 70, 20, 30, 50


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    return [lo + span * i / (n - 1) for i in range(n)]


def table_to_svg(table, x_col: int = 0, y_col: int = 1) -> str:
    xs = [float(r[x_col]) for r in table.rows]
    ys = [float(r[y_col]) for r in table.rows]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 0.0]
    xlo, xhi = min(xs), max(xs)
    ylo, yhi = min(ys), max(ys)
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0

    def px(x):
        return _ML + (_W - _ML - _MR) * (x - xlo) / (xhi - xlo)

    def py(y):
        return _H - _MB - (_H - _MT - _MB) * (y - ylo) / (yhi - ylo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W // 2}" y="18" text-anchor="middle" font-size="14">{table.name}</text>',
        f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" stroke="black"/>',
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" stroke="black"/>',
    ]
    for tx in _ticks(xlo, xhi):
        parts.append(
            f'<line x1="{px(tx):.1f}" y1="{_H - _MB}" x2="{px(tx):.1f}" y2="{_H - _MB + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px(tx):.1f}" y="{_H - _MB + 18}" text-anchor="middle" font-size="11">{tx:.4g}</text>'
        )
    for ty in _ticks(ylo, yhi):
        parts.append(
            f'<line x1="{_ML - 5}" y1="{py(ty):.1f}" x2="{_ML}" y2="{py(ty):.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_ML - 8}" y="{py(ty):.1f}" text-anchor="end" dominant-baseline="middle" '
            f'font-size="11">{ty:.4g}</text>'
        )
    parts.append(
        f'<text x="{_W // 2}" y="{_H - 12}" text-anchor="middle" font-size="12">{table.columns[x_col]}</text>'
    )
    parts.append(
        f'<text x="16" y="{_H // 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {_H // 2})">{table.columns[y_col]}</text>'
    )
    points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    parts.append(f'<polyline points="{points}" fill="none" stroke="steelblue" stroke-width="1.5"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
