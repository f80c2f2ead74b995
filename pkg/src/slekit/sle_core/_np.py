"""Pure numpy versions of the kernels in ``_nb``.

Same arithmetic, same call signatures.  Loops that carry a dependency from
one step to the next stay as Python loops; everything else is vectorised
over points.
"""
import math

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_M3 = 0xC2B2AE3D27D4EB4F


def _mix(x):
    x = ((x ^ (x >> 30)) * _M1) & _MASK
    x = ((x ^ (x >> 27)) * _M2) & _MASK
    return x ^ (x >> 31)


def hash_normal(seed, a, b):
    h = _mix((int(seed) + _GOLDEN) & _MASK)
    h = _mix(h ^ ((int(a) * _GOLDEN) & _MASK))
    h = _mix(h ^ ((int(b) * _M3) & _MASK))
    h2 = _mix((h + _GOLDEN) & _MASK)
    u1 = (float(h >> 11) + 0.5) * (1.0 / 9007199254740992.0)
    u2 = float(h2 >> 11) * (1.0 / 9007199254740992.0)
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def _mix_arr(x):
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_M1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_M2)
    return x ^ (x >> np.uint64(31))


def hash_normal_array(seed, a, b):
    """Vectorised hash_normal over integer arrays a, b."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    with np.errstate(over="ignore"):
        s = np.array([(int(seed) + _GOLDEN) & _MASK], dtype=np.uint64)
        h = _mix_arr(s)
        h = _mix_arr(h ^ (a * np.uint64(_GOLDEN)))
        h = _mix_arr(h ^ (b * np.uint64(_M3)))
        h2 = _mix_arr(h + np.uint64(_GOLDEN))
    u1 = ((h >> np.uint64(11)).astype(float) + 0.5) * (1.0 / 9007199254740992.0)
    u2 = (h2 >> np.uint64(11)).astype(float) * (1.0 / 9007199254740992.0)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def slit_tip(cap):
    b = 4.0 * math.exp(cap) - 2.0
    return 2.0 / (b + math.sqrt((b - 2.0) * (b + 2.0)))


def _inv_slit(w, c, s, e):
    # complex-array version; root branch picked so that |result| <= 1
    u = w * complex(c, -s)
    b = e * (u + 1.0 / u + 2.0) - 2.0
    q = b * b - 4.0
    sq = np.sqrt(q)
    flip = (b.real * sq.real + b.imag * sq.imag) < 0.0
    sq = np.where(flip, -sq, sq)
    return (2.0 / (b + sq)) * complex(c, s)


def compose_chain(wr, wi, k, C, S, E):
    w = np.array([complex(wr, wi)])
    for j in range(k - 1, -1, -1):
        w = _inv_slit(w, C[j], S[j], E[j])
    return w[0].real, w[0].imag


def zipper_uniform(values, dt):
    values = np.asarray(values, dtype=float)
    n = values.shape[0] - 1
    C = np.cos(values[:n])
    S = np.sin(values[:n])
    e = math.exp(dt)
    x = slit_tip(dt)
    W = np.empty(n + 1, dtype=complex)
    W[0] = 1.0
    W[1:] = x * (C + 1j * S)
    for j in range(n - 2, -1, -1):
        W[j + 2:] = _inv_slit(W[j + 2:], C[j], S[j], e)
    return W.real.copy(), W.imag.copy()


def _resolution(w, q, rel, hmin, hmax):
    h = hmax
    if q.size:
        h = min(h, rel * float(np.min(np.abs(w - q))))
    return max(h, hmin)


def zipper_adaptive(values, dt, kappa, seed, qr, qi, rel, hmin, hmax, max_depth, level=0):
    values = np.asarray(values, dtype=float)
    q = np.asarray(qr, dtype=float) + 1j * np.asarray(qi, dtype=float)
    nb = values.shape[0] - 1
    mask = (1 << level) - 1
    leaves = []  # (tl, tr, ll, lr, node, dep, j)
    pts = [1.0 + 0.0j]
    evals = 0
    stack = [(j * dt, (j + 1) * dt, values[j], values[j + 1], (1 << level) | (j & mask), 0, j)
             for j in range(nb - 1, -1, -1)]
    while stack:
        piece = stack.pop()
        tl, tr, ll, lr, node, dep, j = piece
        cap_step = tr - tl
        x = slit_tip(cap_step)
        w = np.array([complex(x * math.cos(ll), x * math.sin(ll))])
        for lf in reversed(leaves):
            w = _inv_slit(w, math.cos(lf[2]), math.sin(lf[2]), math.exp(lf[1] - lf[0]))
        w = complex(w[0])
        evals += len(leaves)
        step = abs(w - pts[-1])
        h = min(_resolution(w, q, rel, hmin, hmax), _resolution(pts[-1], q, rel, hmin, hmax))
        if step > h and leaves and leaves[-1][1] - leaves[-1][0] > cap_step and leaves[-1][5] < max_depth:
            stack.append(piece)
            pts.pop()
            tl, tr, ll, lr, node, dep, j = leaves.pop()
            cap_step = tr - tl
        elif not (step > h and dep < max_depth):
            leaves.append(piece)
            pts.append(w)
            continue
        tm = 0.5 * (tl + tr)
        lm = 0.5 * (ll + lr) + math.sqrt(kappa * cap_step / 4.0) * hash_normal(seed, j >> level, node)
        stack.append((tm, tr, lm, lr, 2 * node + 1, dep + 1, j))
        stack.append((tl, tm, ll, lm, 2 * node, dep + 1, j))
    pts = np.asarray(pts)
    ts = np.array([0.0] + [lf[1] for lf in leaves])
    return pts.real.copy(), pts.imag.copy(), ts, evals


# ---------------------------------------------------------------- ODE flow


def _rhs(w, lam):
    e = np.cos(lam) + 1j * np.sin(lam)
    f = w * (e + w) / (e - w)
    return f, np.abs(e - w)


def _rk4(w, u, h, t0, l0, slope):
    lam = lambda uu: l0 + slope * (uu - t0)  # noqa: E731
    k1, _ = _rhs(w, lam(u))
    k2, _ = _rhs(w + 0.5 * h * k1, lam(u + 0.5 * h))
    k3, _ = _rhs(w + 0.5 * h * k2, lam(u + 0.5 * h))
    k4, _ = _rhs(w + h * k3, lam(u + h))
    return w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _march_back(w, t0, t1, l0, l1):
    """Vectorised backward march across [t0, t1]; each point keeps its own step."""
    w = np.array(w, dtype=complex, copy=True)
    slope = (l1 - l0) / (t1 - t0)
    u = np.full(w.shape, t1)
    h = np.full(w.shape, t1 - t0)
    active = u > t0
    while np.any(active):
        idx = np.nonzero(active)[0]
        ua = u[idx]
        ha = np.minimum(h[idx], ua - t0)
        wa = w[idx]
        f, dist = _rhs(wa, l0 + slope * (ua - t0))
        halve = (dist < 10.0 * ha * np.abs(f)) & (ha > 1e-300)
        step = ~halve
        ha = np.where(halve, 0.5 * ha, ha)
        si = idx[step]
        if si.size:
            w[si] = _rk4(wa[step], ua[step], -ha[step], t0, l0, slope)
            u[si] = ua[step] - ha[step]
            ha[step] *= 2.0
        h[idx] = ha
        active = u > t0
    return w


def flow_point(values, dt, t, eps):
    values = np.asarray(values, dtype=float)
    n = values.shape[0] - 1
    k = min(int(math.floor(t / dt)), n - 1)
    lt = values[k] + (values[k + 1] - values[k]) * (t - k * dt) / dt
    w = np.array([(1.0 - eps) * complex(math.cos(lt), math.sin(lt))])
    if t > k * dt:
        w = _march_back(w, k * dt, t, values[k], lt)
    for j in range(k - 1, -1, -1):
        w = _march_back(w, j * dt, (j + 1) * dt, values[j], values[j + 1])
    return w[0].real, w[0].imag


def flow_trace(values, dt, eps):
    values = np.asarray(values, dtype=float)
    n = values.shape[0] - 1
    W = (1.0 - eps) * (np.cos(values) + 1j * np.sin(values))
    # Interval j is crossed by every point k > j.
    for j in range(n - 1, -1, -1):
        W[j + 1:] = _march_back(W[j + 1:], j * dt, (j + 1) * dt, values[j], values[j + 1])
    return W.real.copy(), W.imag.copy()


def forward_flow(values, dt, n_steps, zr, zi, swallow_tol):
    values = np.asarray(values, dtype=float)
    w = np.asarray(zr, dtype=float) + 1j * np.asarray(zi, dtype=float)
    w = w.astype(complex)
    ts = np.full(w.shape, -1.0)
    alive = np.ones(w.shape, dtype=bool)
    for j in range(n_steps):
        t0 = j * dt
        t1 = t0 + dt
        slope = (values[j + 1] - values[j]) / dt
        u = np.full(w.shape, t0)
        h = np.full(w.shape, dt)
        active = alive & (u < t1)
        while np.any(active):
            idx = np.nonzero(active)[0]
            ua = u[idx]
            ha = np.minimum(h[idx], t1 - ua)
            wa = w[idx]
            f, dist = _rhs(wa, values[j] + slope * (ua - t0))
            dead = (dist < swallow_tol) | (ha < 1e-300)
            di = idx[dead]
            alive[di] = False
            ts[di] = ua[dead]
            halve = ~dead & (dist < 10.0 * ha * np.abs(f))
            step = ~dead & ~halve
            ha = np.where(halve, 0.5 * ha, ha)
            si = idx[step]
            if si.size:
                w[si] = _rk4(wa[step], ua[step], ha[step], t0, values[j], slope)
                u[si] = ua[step] + ha[step]
                ha[step] *= 2.0
            h[idx] = ha
            active = alive & (u < t1)
    g = np.where(alive, w, np.nan + 1j * np.nan)
    return g.real.copy(), g.imag.copy(), ts


# ------------------------------------------------------------ polylines


def polyline_distances(pr, pi, zr, zi, chunk=4096):
    a = np.asarray(pr, dtype=float) + 1j * np.asarray(pi, dtype=float)
    z = np.asarray(zr, dtype=float) + 1j * np.asarray(zi, dtype=float)
    out = np.abs(a[0] - z)
    if a.size < 2:
        return out
    for lo in range(0, a.size - 1, chunk):
        p = a[lo:lo + chunk + 1]
        s = p[:-1]
        d = np.diff(p)
        L = np.abs(d) ** 2
        rel = z[:, None] - s[None, :]
        with np.errstate(invalid="ignore", divide="ignore"):
            u = (rel.real * d.real + rel.imag * d.imag) / L
        u = np.clip(np.where(L > 0, u, 0.0), 0.0, 1.0)
        dist = np.abs(rel - u * d)
        out = np.minimum(out, dist.min(axis=1))
    return out
