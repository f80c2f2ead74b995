"""numpy version of ``_nb.stamp_distances``."""
import math

import numpy as np


def stamp_distances(pr, pi, x0, y0, h, nx, ny, reach):
    D = np.full((ny, nx), reach * reach)
    pr = np.asarray(pr, dtype=float)
    pi = np.asarray(pi, dtype=float)
    ns = pr.shape[0]
    xs = x0 + (np.arange(nx) + 0.5) * h
    ys = y0 + (np.arange(ny) + 0.5) * h
    for k in range(max(ns - 1, 1)):
        ax, ay = pr[k], pi[k]
        bx, by = (pr[k + 1] - ax, pi[k + 1] - ay) if ns > 1 else (0.0, 0.0)
        L = bx * bx + by * by
        i0 = max(int(math.floor((min(ax, ax + bx) - reach - x0) / h - 0.5)), 0)
        i1 = min(int(math.ceil((max(ax, ax + bx) + reach - x0) / h - 0.5)), nx - 1)
        j0 = max(int(math.floor((min(ay, ay + by) - reach - y0) / h - 0.5)), 0)
        j1 = min(int(math.ceil((max(ay, ay + by) + reach - y0) / h - 0.5)), ny - 1)
        if i1 < i0 or j1 < j0:
            continue
        cx = xs[None, i0:i1 + 1]
        cy = ys[j0:j1 + 1, None]
        if L > 0.0:
            u = np.clip(((cx - ax) * bx + (cy - ay) * by) / L, 0.0, 1.0)
        else:
            u = np.zeros((1, 1))
        d = (ax + u * bx - cx) ** 2 + (ay + u * by - cy) ** 2
        win = D[j0:j1 + 1, i0:i1 + 1]
        np.minimum(win, d, out=win)
    return np.sqrt(D)
