"""Compiled grid kernels for neighbourhood areas."""
import math

import numpy as np
from numba import njit


@njit(cache=True)
def stamp_distances(pr, pi, x0, y0, h, nx, ny, reach):
    """Distance from each cell centre to the polyline, capped at ``reach``.

    Cell (j, i) has centre (x0 + (i + 1/2) h, y0 + (j + 1/2) h).  Each segment
    only visits the cells inside its bounding box grown by ``reach``.
    """
    D = np.full((ny, nx), reach * reach)
    ns = pr.shape[0]
    for k in range(max(ns - 1, 1)):
        ax = pr[k]
        ay = pi[k]
        if ns > 1:
            bx = pr[k + 1] - ax
            by = pi[k + 1] - ay
        else:
            bx = 0.0
            by = 0.0
        L = bx * bx + by * by
        i0 = max(int(math.floor((min(ax, ax + bx) - reach - x0) / h - 0.5)), 0)
        i1 = min(int(math.ceil((max(ax, ax + bx) + reach - x0) / h - 0.5)), nx - 1)
        j0 = max(int(math.floor((min(ay, ay + by) - reach - y0) / h - 0.5)), 0)
        j1 = min(int(math.ceil((max(ay, ay + by) + reach - y0) / h - 0.5)), ny - 1)
        for j in range(j0, j1 + 1):
            cy = y0 + (j + 0.5) * h
            for i in range(i0, i1 + 1):
                cx = x0 + (i + 0.5) * h
                u = 0.0
                if L > 0.0:
                    u = ((cx - ax) * bx + (cy - ay) * by) / L
                    if u < 0.0:
                        u = 0.0
                    elif u > 1.0:
                        u = 1.0
                dx = ax + u * bx - cx
                dy = ay + u * by - cy
                d = dx * dx + dy * dy
                if d < D[j, i]:
                    D[j, i] = d
    return np.sqrt(D)
