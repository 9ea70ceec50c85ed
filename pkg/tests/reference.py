"""Brute-force reference implementations the tests use as oracles.

Everything here is written for clarity, not speed: per-window Python
loops, BFS flood fill, window offsets measured from the window's own
top-left corner (any origin works because charges sum to zero).
"""

from collections import deque

import numpy as np


def window_pixels(h, w, i, j, kind, di=0, dj=0):
    """Pixel coordinates of the window anchored/centered at (i, j)."""
    if kind == "block2x2":
        return [(k, l) for k in (i, i + 1) for l in (j, j + 1)]
    return [
        (k, l)
        for k in range(max(0, i - di), min(h - 1, i + di) + 1)
        for l in range(max(0, j - dj), min(w - 1, j + dj) + 1)
    ]


def brute_local_mean(pixels, kind, di=0, dj=0):
    b = np.asarray(pixels, dtype=np.float64)
    h, w = b.shape
    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            ii, jj = i, j
            if kind == "block2x2":
                # anchors past the last full block reuse the nearest one
                ii, jj = min(i, h - 2), min(j, w - 2)
            pts = window_pixels(h, w, ii, jj, kind, di, dj)
            out[i, j] = np.mean([b[k, l] for k, l in pts])
    return out


def brute_dipole(pixels, kind, di=0, dj=0):
    """Charge-weighted mean offset per window, offsets from the window corner."""
    b = np.asarray(pixels, dtype=np.float64)
    h, w = b.shape
    px = np.zeros((h, w))
    py = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            if kind == "block2x2" and (i == h - 1 or j == w - 1):
                continue
            pts = window_pixels(h, w, i, j, kind, di, dj)
            vals = np.array([b[k, l] for k, l in pts])
            q = vals - vals.mean()
            k0 = min(k for k, _ in pts)
            l0 = min(l for _, l in pts)
            px[i, j] = float(np.sum(q * np.array([l - l0 for _, l in pts]))) / len(pts)
            py[i, j] = float(np.sum(q * np.array([k - k0 for k, _ in pts]))) / len(pts)
    return px, py


def brute_patch_dipole(patch):
    """One whole patch as a single window."""
    p = np.asarray(patch, dtype=np.float64)
    h, w = p.shape
    q = p - p.mean()
    yy, xx = np.mgrid[0:h, 0:w]
    return float((q * xx).sum() / (h * w)), float((q * yy).sum() / (h * w))


def box_sums(arr, di, dj):
    """Clipped-window sums and pixel counts at every center (padded cumsum)."""
    a = np.asarray(arr, dtype=np.float64)
    h, w = a.shape
    s = np.zeros((h + 1, w + 1))
    s[1:, 1:] = a.cumsum(axis=0).cumsum(axis=1)
    r = np.arange(h)
    c = np.arange(w)
    r0, r1 = np.clip(r - di, 0, None), np.clip(r + di, None, h - 1)
    c0, c1 = np.clip(c - dj, 0, None), np.clip(c + dj, None, w - 1)
    rows = s[r1 + 1] - s[r0]
    sums = rows[:, c1 + 1] - rows[:, c0]
    counts = np.outer(r1 - r0 + 1, c1 - c0 + 1)
    return sums, counts


def flood_components(bits, connectivity=8):
    """BFS connected-component labels, numbered by raster-order discovery."""
    bits = np.asarray(bits, dtype=bool)
    h, w = bits.shape
    if connectivity == 8:
        steps = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]
    else:
        steps = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    labels = np.zeros((h, w), dtype=np.int64)
    count = 0
    for i in range(h):
        for j in range(w):
            if bits[i, j] and labels[i, j] == 0:
                count += 1
                labels[i, j] = count
                queue = deque([(i, j)])
                while queue:
                    a, b = queue.popleft()
                    for da, db in steps:
                        na, nb = a + da, b + db
                        if 0 <= na < h and 0 <= nb < w and bits[na, nb] and labels[na, nb] == 0:
                            labels[na, nb] = count
                            queue.append((na, nb))
    return labels, count
