#!/usr/bin/env python3
"""Regenerates the bundled ASCII worlds in maps/ (resolution 0.1 m).

Free space is painted as thick polylines (capsules) or rectangles onto a
fully occupied canvas, so every world is closed by construction.
"""

import argparse
import math
import pathlib

import numpy as np

RES = 0.1


class Canvas:
    def __init__(self, width_m, height_m):
        self.w = int(round(width_m / RES))
        self.h = int(round(height_m / RES))
        self.free = np.zeros((self.h, self.w), dtype=bool)  # row 0 = lowest y
        ys, xs = np.mgrid[0 : self.h, 0 : self.w]
        self.cx = (xs + 0.5) * RES
        self.cy = (ys + 0.5) * RES
        self.start = None
        self.goal = None

    def capsule(self, a, b, half_width):
        ax, ay = a
        bx, by = b
        dx, dy = bx - ax, by - ay
        length_sq = dx * dx + dy * dy
        t = ((self.cx - ax) * dx + (self.cy - ay) * dy) / max(length_sq, 1e-12)
        t = np.clip(t, 0.0, 1.0)
        px = ax + t * dx
        py = ay + t * dy
        self.free |= (self.cx - px) ** 2 + (self.cy - py) ** 2 <= half_width**2

    def polyline(self, pts, half_width):
        for a, b in zip(pts, pts[1:]):
            self.capsule(a, b, half_width)

    def rect(self, x0, y0, x1, y1, free=True):
        m = (self.cx >= x0) & (self.cx < x1) & (self.cy >= y0) & (self.cy < y1)
        if free:
            self.free |= m
        else:
            self.free &= ~m

    def cell(self, x, y):
        return int(math.floor(y / RES)), int(math.floor(x / RES))

    def render(self):
        f = self.free.copy()
        f[0, :] = f[-1, :] = False
        f[:, 0] = f[:, -1] = False
        chars = np.where(f, ".", "#").astype("<U1")
        for marker, pos in (("S", self.start), ("G", self.goal)):
            if pos is None:
                continue
            r, c = self.cell(*pos)
            assert f[r, c], f"{marker} marker on an obstacle"
            chars[r, c] = marker
        return "\n".join("".join(row) for row in chars[::-1]) + "\n"


def corridor():
    c = Canvas(42.0, 5.0)
    c.rect(1.0, 1.3, 41.0, 3.7)
    c.start = (2.05, 2.55)
    c.goal = (39.05, 2.55)
    return c


def dead_end():
    c = Canvas(22.0, 5.0)
    c.rect(1.0, 1.3, 21.0, 3.7)
    c.start = (2.05, 2.55)
    c.goal = (19.05, 2.55)
    return c


def junction():
    c = Canvas(32.0, 26.0)
    c.rect(1.0, 11.5, 31.0, 14.5)
    c.rect(14.5, 1.0, 17.5, 25.0)
    c.start = (2.55, 13.05)
    c.goal = (16.05, 23.55)
    return c


def fork():
    # Curved approach tunnel, then a fork: the right branch is sealed a short
    # way in, the left branch runs straight for ~24 m and ends closed.
    c = Canvas(40.0, 26.0)
    main = [(2.0, 8.0), (6.0, 8.0), (10.0, 8.8), (14.0, 8.5)]
    c.polyline(main, 1.5)
    c.polyline([(14.0, 8.5), (34.0, 21.0)], 1.5)
    c.polyline([(14.0, 8.5), (18.0, 5.5)], 1.5)
    c.start = (2.55, 8.05)
    c.goal = (32.55, 20.05)
    return c


def pillars():
    c = Canvas(32.0, 16.0)
    c.rect(1.0, 1.0, 31.0, 15.0)
    for i, x in enumerate(np.arange(6.0, 28.0, 4.0)):
        off = 0.0 if i % 2 == 0 else 1.75
        for y in (4.5 + off, 8.0 + off, 11.5 + off):
            if y + 0.6 > 14.0:
                continue
            c.rect(x - 0.6, y - 0.6, x + 0.6, y + 0.6, free=False)
    c.start = (2.05, 8.05)
    c.goal = (29.55, 8.05)
    return c


def loop():
    # Ring tunnel around a solid core; centerline is a rounded square.
    c = Canvas(38.0, 38.0)
    lo, hi, rad = 3.0, 35.0, 5.0
    pts = []
    corners = [
        (hi - rad, lo + rad, -90.0),
        (hi - rad, hi - rad, 0.0),
        (lo + rad, hi - rad, 90.0),
        (lo + rad, lo + rad, 180.0),
    ]
    for cx, cy, a0 in corners:
        for k in range(0, 10):
            a = math.radians(a0 + 90.0 * k / 9)
            pts.append((cx + rad * math.cos(a), cy + rad * math.sin(a)))
    pts.append(pts[0])
    c.polyline(pts, 1.5)
    c.start = (10.05, 3.05)
    return c


MAPS = {
    "corridor": corridor,
    "dead_end": dead_end,
    "junction": junction,
    "fork": fork,
    "pillars": pillars,
    "loop": loop,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "maps"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in MAPS.items():
        (out / f"{name}.txt").write_text(make().render())
        print(f"wrote {out / name}.txt")


if __name__ == "__main__":
    main()
