"""Minimal self-contained SVG emitter for the trajectory, scatter, and
heatmap figures. Plots are conveniences; the CSVs are the contract."""

WIDTH = 640
HEIGHT = 420
MARGIN = 56

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd")


def _fmt(v):
    return f"{v:.2f}"


class _Canvas:
    def __init__(self, title, x_label, y_label, x_range, y_range):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" '
            f'font-size="14" font-family="sans-serif">{title}</text>',
        ]
        x0, x1 = x_range
        y0, y1 = y_range
        if x1 == x0:
            x1 = x0 + 1.0
        if y1 == y0:
            y1 = y0 + 1.0
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1
        self._axes(x_label, y_label)

    def px(self, x):
        frac = (x - self.x0) / (self.x1 - self.x0)
        return MARGIN + frac * (WIDTH - 2 * MARGIN)

    def py(self, y):
        frac = (y - self.y0) / (self.y1 - self.y0)
        return HEIGHT - MARGIN - frac * (HEIGHT - 2 * MARGIN)

    def _axes(self, x_label, y_label):
        left, right = MARGIN, WIDTH - MARGIN
        top, bottom = MARGIN, HEIGHT - MARGIN
        self.parts.append(
            f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" '
            'stroke="black"/>'
        )
        self.parts.append(
            f'<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" '
            'stroke="black"/>'
        )
        for i in range(5):
            fx = self.x0 + (self.x1 - self.x0) * i / 4
            fy = self.y0 + (self.y1 - self.y0) * i / 4
            px = self.px(fx)
            py = self.py(fy)
            self.parts.append(
                f'<line x1="{_fmt(px)}" y1="{bottom}" x2="{_fmt(px)}" '
                f'y2="{bottom + 4}" stroke="black"/>'
            )
            self.parts.append(
                f'<text x="{_fmt(px)}" y="{bottom + 18}" text-anchor="middle" '
                f'font-size="10" font-family="sans-serif">{_fmt(fx)}</text>'
            )
            self.parts.append(
                f'<line x1="{left - 4}" y1="{_fmt(py)}" x2="{left}" '
                f'y2="{_fmt(py)}" stroke="black"/>'
            )
            self.parts.append(
                f'<text x="{left - 8}" y="{_fmt(py + 3)}" text-anchor="end" '
                f'font-size="10" font-family="sans-serif">{_fmt(fy)}</text>'
            )
        self.parts.append(
            f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle" '
            f'font-size="12" font-family="sans-serif">{x_label}</text>'
        )
        self.parts.append(
            f'<text x="16" y="{HEIGHT / 2}" text-anchor="middle" '
            f'font-size="12" font-family="sans-serif" '
            f'transform="rotate(-90 16 {HEIGHT / 2})">{y_label}</text>'
        )

    def polyline(self, xs, ys, color, dashed=False):
        pts = " ".join(
            f"{_fmt(self.px(x))},{_fmt(self.py(y))}" for x, y in zip(xs, ys)
        )
        dash = ' stroke-dasharray="6 4"' if dashed else ""
        self.parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"{dash}/>'
        )

    def scatter(self, xs, ys, color):
        for x, y in zip(xs, ys):
            self.parts.append(
                f'<circle cx="{_fmt(self.px(x))}" cy="{_fmt(self.py(y))}" '
                f'r="2.5" fill="{color}" fill-opacity="0.6"/>'
            )

    def rect(self, x_lo, x_hi, y_lo, y_hi, color, opacity):
        x = self.px(x_lo)
        y = self.py(y_hi)
        w = self.px(x_hi) - x
        h = self.py(y_lo) - y
        self.parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" '
            f'height="{_fmt(h)}" fill="{color}" '
            f'fill-opacity="{_fmt(opacity)}"/>'
        )

    def legend(self, entries):
        y = MARGIN + 8
        for label, color in entries:
            self.parts.append(
                f'<line x1="{WIDTH - MARGIN - 120}" y1="{y}" '
                f'x2="{WIDTH - MARGIN - 96}" y2="{y}" stroke="{color}" '
                'stroke-width="2"/>'
            )
            self.parts.append(
                f'<text x="{WIDTH - MARGIN - 90}" y="{y + 4}" '
                f'font-size="11" font-family="sans-serif">{label}</text>'
            )
            y += 16

    def render(self):
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _series_range(series_list):
    lo = min(min(s) for s in series_list if len(s))
    hi = max(max(s) for s in series_list if len(s))
    return float(lo), float(hi)


def line_chart(series, title, x_label, y_label):
    """series: list of (label, ys, dashed) sharing an episode x-axis."""
    n = max(len(ys) for _, ys, _ in series)
    y_range = _series_range([ys for _, ys, _ in series])
    cv = _Canvas(title, x_label, y_label, (0.0, float(max(n - 1, 1))),
                 y_range)
    entries = []
    for k, (label, ys, dashed) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        cv.polyline(range(len(ys)), ys, color, dashed)
        entries.append((label, color))
    cv.legend(entries)
    return cv.render()


def scatter_chart(groups, title, x_label, y_label):
    """groups: list of (label, xs, ys) plotted in palette order."""
    xs_all = [x for _, xs, _ in groups for x in xs]
    ys_all = [y for _, _, ys in groups for y in ys]
    cv = _Canvas(title, x_label, y_label,
                 (min(xs_all), max(xs_all)), (min(ys_all), max(ys_all)))
    entries = []
    for k, (label, xs, ys) in enumerate(groups):
        color = _PALETTE[k % len(_PALETTE)]
        cv.scatter(xs, ys, color)
        entries.append((label, color))
    cv.legend(entries)
    return cv.render()


def heatmap_chart(counts, x_edges, y_edges, title, x_label, y_label):
    """counts[i][j] over x bin i, y bin j; darker cell = more mass."""
    cv = _Canvas(title, x_label, y_label,
                 (float(x_edges[0]), float(x_edges[-1])),
                 (float(y_edges[0]), float(y_edges[-1])))
    peak = max(1, max(max(row) for row in counts))
    for i, row in enumerate(counts):
        for j, c in enumerate(row):
            if c == 0:
                continue
            cv.rect(
                float(x_edges[i]), float(x_edges[i + 1]),
                float(y_edges[j]), float(y_edges[j + 1]),
                "#d62728", 0.15 + 0.85 * (c / peak),
            )
    return cv.render()
