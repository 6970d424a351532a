"""Minimal SVG plots of range boundaries."""
import numpy as np

SIZE = 800
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2")


def render(curves, labels=None, title=""):
    """One closed path per curve (arrays of complex points) on an 800x800 canvas.

    Axes are scaled to the union of the curves and the origin with a 5% margin;
    the origin crosshair is always drawn.
    """
    pts = [np.asarray(c, dtype=complex).ravel() for c in curves]
    allp = np.concatenate(pts + [np.zeros(1, complex)])
    lo_x, hi_x = allp.real.min(), allp.real.max()
    lo_y, hi_y = allp.imag.min(), allp.imag.max()
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-12)
    cx, cy = (lo_x + hi_x) / 2, (lo_y + hi_y) / 2
    scale = SIZE * 0.9 / span  # 5% margin on each side

    def xy(z):
        return (SIZE / 2 + (z.real - cx) * scale, SIZE / 2 - (z.imag - cy) * scale)

    ox, oy = xy(0j)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">',
           f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>']
    if title:
        out.append(f'<title>{title}</title>')
    out.append(f'<line x1="0" y1="{oy:.3f}" x2="{SIZE}" y2="{oy:.3f}" stroke="#999" stroke-width="1"/>')
    out.append(f'<line x1="{ox:.3f}" y1="0" x2="{ox:.3f}" y2="{SIZE}" stroke="#999" stroke-width="1"/>')
    out.append(f'<circle cx="{ox:.3f}" cy="{oy:.3f}" r="3" fill="black"/>')
    for i, p in enumerate(pts):
        color = COLORS[i % len(COLORS)]
        if p.size == 0:
            continue
        coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in map(xy, p))
        label = f' data-label="{labels[i]}"' if labels else ""
        if p.size == 1:
            x, y = xy(p[0])
            out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="4" fill="{color}"{label}/>')
        else:
            out.append(f'<path d="M {coords} Z" fill="{color}" fill-opacity="0.15" '
                       f'stroke="{color}" stroke-width="2"{label}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
