"""Compiled Loewner kernels.

Complex numbers are carried as (re, im) float pairs inside the loops; numba's
complex division and sqrt are several times slower than the expanded forms.
"""
import math

import numpy as np
from numba import njit, uint64

_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_M3 = 0xC2B2AE3D27D4EB4F


@njit(cache=True, inline="always")
def _mix(x):
    x = (x ^ (x >> uint64(30))) * uint64(_M1)
    x = (x ^ (x >> uint64(27))) * uint64(_M2)
    return x ^ (x >> uint64(31))


@njit(cache=True)
def hash_normal(seed, a, b):
    """Standard normal keyed by (seed, a, b); splitmix64 + Box-Muller."""
    h = _mix(uint64(seed) + uint64(_GOLDEN))
    h = _mix(h ^ (uint64(a) * uint64(_GOLDEN)))
    h = _mix(h ^ (uint64(b) * uint64(_M3)))
    h2 = _mix(h + uint64(_GOLDEN))
    u1 = (float(h >> uint64(11)) + 0.5) * (1.0 / 9007199254740992.0)
    u2 = float(h2 >> uint64(11)) * (1.0 / 9007199254740992.0)
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


@njit(cache=True)
def slit_tip(cap):
    """Tip x in (0, 1) of the radial slit [x, 1] with capacity ``cap``."""
    b = 4.0 * math.exp(cap) - 2.0
    return 2.0 / (b + math.sqrt((b - 2.0) * (b + 2.0)))


@njit(cache=True, inline="always")
def _inv_slit(wr, wi, c, s, e):
    # Inverse of the radial slit map at angle (c, s) = (cos, sin) with
    # e = exp(capacity): solve w' + 1/w' = e (u + 1/u + 2) - 2, |w'| <= 1.
    ur = wr * c + wi * s
    ui = wi * c - wr * s
    m = ur * ur + ui * ui
    br = e * (ur + ur / m + 2.0) - 2.0
    bi = e * (ui - ui / m)
    qr = br * br - bi * bi - 4.0
    qi = 2.0 * br * bi
    aq = math.sqrt(qr * qr + qi * qi)
    sr = math.sqrt(0.5 * (aq + qr))
    si = math.sqrt(max(0.5 * (aq - qr), 0.0))
    if qi < 0.0:
        si = -si
    if br * sr + bi * si < 0.0:
        sr = -sr
        si = -si
    dr = br + sr
    di = bi + si
    dd = 2.0 / (dr * dr + di * di)
    vr = dr * dd
    vi = -di * dd
    return vr * c - vi * s, vi * c + vr * s


@njit(cache=True)
def compose_chain(wr, wi, k, C, S, E):
    """Apply inverse slit maps k-1, ..., 0 to (wr, wi)."""
    for j in range(k - 1, -1, -1):
        wr, wi = _inv_slit(wr, wi, C[j], S[j], E[j])
    return wr, wi


@njit(cache=True)
def zipper_uniform(values, dt):
    """Trace points on a uniform grid, driving held at left endpoints."""
    n = values.shape[0] - 1
    C = np.cos(values[:n])
    S = np.sin(values[:n])
    e = math.exp(dt)
    x = slit_tip(dt)
    WR = np.empty(n + 1)
    WI = np.empty(n + 1)
    WR[0] = 1.0
    WI[0] = 0.0
    for k in range(1, n + 1):
        WR[k] = x * C[k - 1]
        WI[k] = x * S[k - 1]
    # Map-major order: the inner loop runs over independent points.
    for j in range(n - 2, -1, -1):
        c = C[j]
        s = S[j]
        for k in range(j + 2, n + 1):
            WR[k], WI[k] = _inv_slit(WR[k], WI[k], c, s, e)
    return WR, WI


@njit(cache=True, inline="always")
def _resolution(wr, wi, qr, qi, rel, hmin, hmax):
    h = hmax
    for q in range(qr.shape[0]):
        dq = rel * math.sqrt((wr - qr[q]) ** 2 + (wi - qi[q]) ** 2)
        if dq < h:
            h = dq
    return max(h, hmin)


@njit(cache=True)
def _grow(a, n):
    out = np.empty((n,) + a.shape[1:], a.dtype)
    out[:a.shape[0]] = a
    return out


@njit(cache=True)
def zipper_adaptive(values, dt, kappa, seed, qr, qi, rel, hmin, hmax, max_depth, level=0):
    """Slit-map trace with dyadic Brownian-bridge refinement.

    A piece of the driving grid is bisected while its trace point lies
    further than the local resolution from the previous one.  When the
    previous accepted piece is the coarser of the two it is taken back and
    split instead: a constant piece next to a much finer one leaves a gap
    that bisecting the fine side cannot close.  Midpoint driving values are
    bridge samples keyed by (seed, base interval, dyadic node), so the
    refined path is a deterministic function of the seed.  ``level`` is the
    dyadic level of ``values`` relative to the originally sampled grid.
    Returns (re, im, t, n_maps_evaluated).
    """
    nb = values.shape[0] - 1
    cap = 4 * nb + 64
    C = np.empty(cap)
    S = np.empty(cap)
    E = np.empty(cap)
    PR = np.empty(cap + 1)
    PI = np.empty(cap + 1)
    LF = np.empty((cap, 4))  # accepted pieces: tl, tr, ll, lr
    LI = np.empty((cap, 3), np.int64)  # node, depth, grid index
    PR[0] = 1.0
    PI[0] = 0.0
    m = 0
    scap = nb + 4 * max_depth + 8
    SF = np.empty((scap, 4))
    SI = np.empty((scap, 3), np.int64)
    mask = (1 << level) - 1
    for k in range(nb):
        j = nb - 1 - k
        SF[k, 0] = j * dt
        SF[k, 1] = (j + 1) * dt
        SF[k, 2] = values[j]
        SF[k, 3] = values[j + 1]
        SI[k, 0] = (1 << level) | (j & mask)
        SI[k, 1] = 0
        SI[k, 2] = j
    sp = nb
    evals = 0
    while sp > 0:
        if sp + 3 > scap:
            scap *= 2
            SF = _grow(SF, scap)
            SI = _grow(SI, scap)
        sp -= 1
        tl, tr, ll, lr = SF[sp, 0], SF[sp, 1], SF[sp, 2], SF[sp, 3]
        node, dep, j = SI[sp, 0], SI[sp, 1], SI[sp, 2]
        cap_step = tr - tl
        x = slit_tip(cap_step)
        c = math.cos(ll)
        s = math.sin(ll)
        wr, wi = compose_chain(x * c, x * s, m, C, S, E)
        evals += m
        step = math.sqrt((wr - PR[m]) ** 2 + (wi - PI[m]) ** 2)
        h = min(_resolution(wr, wi, qr, qi, rel, hmin, hmax),
                _resolution(PR[m], PI[m], qr, qi, rel, hmin, hmax))
        if step > h and m > 0 and LF[m - 1, 1] - LF[m - 1, 0] > cap_step and LI[m - 1, 1] < max_depth:
            # take the coarser previous piece back and queue its halves first
            sp += 1
            m -= 1
            tl, tr, ll, lr = LF[m, 0], LF[m, 1], LF[m, 2], LF[m, 3]
            node, dep, j = LI[m, 0], LI[m, 1], LI[m, 2]
            cap_step = tr - tl
        elif not (step > h and dep < max_depth):
            if m == cap:
                cap *= 2
                C = _grow(C, cap)
                S = _grow(S, cap)
                E = _grow(E, cap)
                LF = _grow(LF, cap)
                LI = _grow(LI, cap)
                PR = _grow(PR, cap + 1)
                PI = _grow(PI, cap + 1)
            C[m] = c
            S[m] = s
            E[m] = math.exp(cap_step)
            LF[m, 0], LF[m, 1], LF[m, 2], LF[m, 3] = tl, tr, ll, lr
            LI[m, 0], LI[m, 1], LI[m, 2] = node, dep, j
            m += 1
            PR[m] = wr
            PI[m] = wi
            continue
        tm = 0.5 * (tl + tr)
        lm = 0.5 * (ll + lr) + math.sqrt(kappa * cap_step / 4.0) * hash_normal(seed, j >> level, node)
        SF[sp, 0], SF[sp, 1], SF[sp, 2], SF[sp, 3] = tm, tr, lm, lr
        SI[sp, 0], SI[sp, 1], SI[sp, 2] = 2 * node + 1, dep + 1, j
        sp += 1
        SF[sp, 0], SF[sp, 1], SF[sp, 2], SF[sp, 3] = tl, tm, ll, lm
        SI[sp, 0], SI[sp, 1], SI[sp, 2] = 2 * node, dep + 1, j
        sp += 1
    PT = np.empty(m + 1)
    PT[0] = 0.0
    PT[1:] = LF[:m, 1]
    return PR[:m + 1].copy(), PI[:m + 1].copy(), PT, evals


# ---------------------------------------------------------------- ODE flow


@njit(cache=True, inline="always")
def _rhs(wr, wi, lam):
    # w (e + w) / (e - w), e = exp(i lam)
    er = math.cos(lam)
    ei = math.sin(lam)
    nr = wr * (er + wr) - wi * (ei + wi)
    ni = wr * (ei + wi) + wi * (er + wr)
    dr = er - wr
    di = ei - wi
    dd = dr * dr + di * di
    return (nr * dr + ni * di) / dd, (ni * dr - nr * di) / dd, math.sqrt(dd)


@njit(cache=True, inline="always")
def _lam_at(u, t0, l0, slope):
    return l0 + slope * (u - t0)


@njit(cache=True)
def _rk4(wr, wi, u, h, t0, l0, slope):
    # One RK4 step of dw/du = rhs from u to u + h (h may be negative).
    k1r, k1i, _ = _rhs(wr, wi, _lam_at(u, t0, l0, slope))
    k2r, k2i, _ = _rhs(wr + 0.5 * h * k1r, wi + 0.5 * h * k1i, _lam_at(u + 0.5 * h, t0, l0, slope))
    k3r, k3i, _ = _rhs(wr + 0.5 * h * k2r, wi + 0.5 * h * k2i, _lam_at(u + 0.5 * h, t0, l0, slope))
    k4r, k4i, _ = _rhs(wr + h * k3r, wi + h * k3i, _lam_at(u + h, t0, l0, slope))
    wr = wr + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
    wi = wi + h / 6.0 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
    return wr, wi


@njit(cache=True)
def _march_back(wr, wi, t0, t1, l0, l1):
    """Integrate the Loewner ODE backwards across [t0, t1], from t1 to t0."""
    slope = (l1 - l0) / (t1 - t0)
    u = t1
    h = t1 - t0
    while u > t0:
        if h > u - t0:
            h = u - t0
        fr, fi, dist = _rhs(wr, wi, _lam_at(u, t0, l0, slope))
        if dist < 10.0 * h * math.sqrt(fr * fr + fi * fi) and h > 1e-300:
            h *= 0.5
            continue
        wr, wi = _rk4(wr, wi, u, -h, t0, l0, slope)
        u -= h
        h *= 2.0
    return wr, wi


@njit(cache=True)
def flow_point(values, dt, t, eps):
    """gamma(t) from the reversed flow started at (1 - eps) exp(i lam(t))."""
    n = values.shape[0] - 1
    k = int(math.floor(t / dt))
    if k >= n:
        k = n - 1
    lt = values[k] + (values[k + 1] - values[k]) * (t - k * dt) / dt
    wr = (1.0 - eps) * math.cos(lt)
    wi = (1.0 - eps) * math.sin(lt)
    if t > k * dt:
        wr, wi = _march_back(wr, wi, k * dt, t, values[k], lt)
    for j in range(k - 1, -1, -1):
        wr, wi = _march_back(wr, wi, j * dt, (j + 1) * dt, values[j], values[j + 1])
    return wr, wi


@njit(cache=True)
def flow_trace(values, dt, eps):
    """flow_point at every grid time j*dt."""
    n = values.shape[0] - 1
    WR = np.empty(n + 1)
    WI = np.empty(n + 1)
    for k in range(n + 1):
        wr = (1.0 - eps) * math.cos(values[k])
        wi = (1.0 - eps) * math.sin(values[k])
        for j in range(k - 1, -1, -1):
            wr, wi = _march_back(wr, wi, j * dt, (j + 1) * dt, values[j], values[j + 1])
        WR[k] = wr
        WI[k] = wi
    return WR, WI


@njit(cache=True)
def forward_flow(values, dt, n_steps, zr, zi, swallow_tol):
    """g_t(z) at t = n_steps*dt for each z; swallow time (or -1) per point."""
    npts = zr.shape[0]
    GR = np.empty(npts)
    GI = np.empty(npts)
    TS = np.full(npts, -1.0)
    for p in range(npts):
        wr = zr[p]
        wi = zi[p]
        swallowed = False
        for j in range(n_steps):
            t0 = j * dt
            t1 = t0 + dt
            slope = (values[j + 1] - values[j]) / dt
            u = t0
            h = dt
            while u < t1:
                if h > t1 - u:
                    h = t1 - u
                fr, fi, dist = _rhs(wr, wi, _lam_at(u, t0, values[j], slope))
                if dist < swallow_tol or h < 1e-300:
                    swallowed = True
                    TS[p] = u
                    break
                if dist < 10.0 * h * math.sqrt(fr * fr + fi * fi):
                    h *= 0.5
                    continue
                wr, wi = _rk4(wr, wi, u, h, t0, values[j], slope)
                u += h
                h *= 2.0
            if swallowed:
                break
        if swallowed:
            GR[p] = np.nan
            GI[p] = np.nan
        else:
            GR[p] = wr
            GI[p] = wi
    return GR, GI, TS


# ------------------------------------------------------------ polylines


@njit(cache=True)
def polyline_distances(pr, pi, zr, zi):
    """Minimum point-to-segment distance from each z to the polyline."""
    npts = zr.shape[0]
    out = np.empty(npts)
    ns = pr.shape[0]
    for q in range(npts):
        x = zr[q]
        y = zi[q]
        best = (pr[0] - x) ** 2 + (pi[0] - y) ** 2
        for k in range(ns - 1):
            ax = pr[k]
            ay = pi[k]
            bx = pr[k + 1] - ax
            by = pi[k + 1] - ay
            L = bx * bx + by * by
            u = 0.0
            if L > 0.0:
                u = ((x - ax) * bx + (y - ay) * by) / L
                if u < 0.0:
                    u = 0.0
                elif u > 1.0:
                    u = 1.0
            dx = ax + u * bx - x
            dy = ay + u * by - y
            d = dx * dx + dy * dy
            if d < best:
                best = d
        out[q] = math.sqrt(best)
    return out
