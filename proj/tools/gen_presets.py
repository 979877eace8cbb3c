#!/usr/bin/env python3
"""Regenerates the scenario preset fixtures in data/presets/.

The fixtures are frozen goldens; rerun only when the layout pattern changes on purpose.

Layout: 61x61 world, one 10x5 exit block centred on the east edge (x 56..60, y 26..35).
Buildings sit in a 3x3 slot lattice with column centres x = 10, 27, 44 and row centres
y = 10, 30, 50. Slot k (row-major from the south-west) holds a building of width
6 + 2*(k % 3) and height 6 + (2*k) % 3, centred on the slot. Corridors between
buildings, and between buildings and the edges or the exit, are at least 2 patches wide.
"""
import pathlib

SIZE = 61
COLS = (10, 27, 44)
ROWS = (10, 30, 50)
PRESET_SLOTS = {
    "open_field": [],
    "village": [0, 4, 8],
    "town": [0, 2, 3, 5, 6, 8],
    "city": list(range(9)),
}


def building(slot):
    w = 6 + 2 * (slot % 3)
    h = 6 + (2 * slot) % 3
    cx, cy = COLS[slot % 3], ROWS[slot // 3]
    x0, y0 = cx - w // 2, cy - h // 2
    return x0, y0, w, h


def render(slots):
    grid = [["."] * SIZE for _ in range(SIZE)]  # grid[y][x], y = 0 is south
    for y in range(26, 36):
        for x in range(56, 61):
            grid[y][x] = "E"
    for slot in slots:
        x0, y0, w, h = building(slot)
        for y in range(y0, y0 + h):
            for x in range(x0, x0 + w):
                grid[y][x] = "#"
    return "\n".join("".join(grid[y]) for y in reversed(range(SIZE)))


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "presets"
    out.mkdir(parents=True, exist_ok=True)
    for name, slots in PRESET_SLOTS.items():
        (out / f"{name}.world").write_text(render(slots))


if __name__ == "__main__":
    main()
