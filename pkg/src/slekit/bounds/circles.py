"""Families of concentric circles and the circle construction behind the
radial multi-point bound."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..geometry import py_ratio
from .kernels import RADIAL, DuplicatePointError, PointSpec, _params

_RATIO = 4.0
_REL_TOL = 1e-9


class InvalidFamilyError(ValueError):
    """A circle family breaks one of the hypotheses.

    ``hypothesis`` is one of "ratio", "disjoint", "encloses"; ``groups``
    holds the offending group indices.
    """

    def __init__(self, hypothesis: str, groups: tuple, message: str):
        super().__init__(message)
        self.hypothesis = hypothesis
        self.groups = groups


@dataclass(frozen=True)
class CircleGroup:
    center: complex
    radii: tuple  # descending, ratio 4
    y: float
    point_index: int = -1

    @property
    def r_small(self) -> float:
        return self.radii[-1]

    @property
    def r_large(self) -> float:
        return self.radii[0]


@dataclass(frozen=True)
class CircleFamily:
    groups: tuple
    snap_factors: tuple = ()
    removed: tuple = ()  # (point index, s) of pruned circles
    meta: dict = field(default_factory=dict)

    @property
    def circles(self):
        """(center, radius, group index) of every circle."""
        return [(g.center, r, i) for i, g in enumerate(self.groups) for r in g.radii]

    def encloses(self, a, b) -> bool:
        """Circle a = (center, radius) encloses circle b: b is visited after a."""
        (ca, ra), (cb, rb) = a, b
        return abs(ca - cb) + rb < ra

    def order_pairs(self):
        """Pairs (i, j) of circle indices with circle i < circle j (i encloses j)."""
        cs = self.circles
        return [(i, j) for i, a in enumerate(cs) for j, b in enumerate(cs)
                if i != j and self.encloses(a[:2], b[:2])]


def _annulus_distance_range(center, r_in, r_out, p):
    """[min, max] of |w - p| over the closed annulus r_in <= |w - center| <= r_out."""
    d = abs(p - center)
    hi = d + r_out
    if d < r_in:
        lo = r_in - d
    elif d <= r_out:
        lo = 0.0
    else:
        lo = d - r_out
    return lo, hi


def annuli_intersect(g1: CircleGroup, g2: CircleGroup) -> bool:
    lo, hi = _annulus_distance_range(g2.center, g2.r_small, g2.r_large, g1.center)
    return lo <= g1.r_large and hi >= g1.r_small


def validate_family(family: CircleFamily) -> None:
    for i, g in enumerate(family.groups):
        if not g.radii:
            raise InvalidFamilyError("ratio", (i,), f"group {i} is empty")
        for a, b in zip(g.radii, g.radii[1:]):
            if abs(a / b - _RATIO) > _REL_TOL * _RATIO:
                raise InvalidFamilyError("ratio", (i,), f"group {i}: radii {a}, {b} not in ratio 4")
        for anchor in (0j, 1 + 0j):
            if abs(g.center - anchor) <= g.r_large * (1 + _REL_TOL):
                raise InvalidFamilyError(
                    "encloses", (i,), f"group {i}: a circle passes through or encloses {anchor}")
    gs = family.groups
    for i in range(len(gs)):
        for j in range(i + 1, len(gs)):
            if annuli_intersect(gs[i], gs[j]):
                raise InvalidFamilyError("disjoint", (i, j), f"annuli of groups {i} and {j} meet")


def concentric_family_kernel(params, family: CircleFamily) -> float:
    """prod_e P_{y_e}(r_e) / P_{y_e}(R_e) after validating the family."""
    p = _params(params)
    validate_family(family)
    out = 1.0
    for g in family.groups:
        out *= py_ratio(p, g.y, g.r_small, g.r_large)
    return out


def split_run_product(params, y: float, radii, cuts) -> float:
    """Product of the run kernels after cutting a run before each index in ``cuts``."""
    p = _params(params)
    radii = list(radii)
    bounds = [0] + sorted(cuts) + [len(radii)]
    out = 1.0
    for a, b in zip(bounds, bounds[1:]):
        if b <= a:
            raise ValueError("cuts must be distinct and inside the run")
        out *= py_ratio(p, y, radii[b - 1], radii[a])
    return out


def snap_exponent(l: float, r: float) -> int:
    """h with 4^-(h+1) < r/l <= 4^-h, i.e. r snapped up to l / 4^h."""
    if r >= l:
        return 0
    return int(math.floor(math.log(l / r) / math.log(_RATIO) + 1e-12))


def _circle_meets_disc(c, rho, d, a) -> bool:
    return abs(abs(c - d) - rho) <= a


def _circle_in_open_annulus(c2, rho2, c, r_in, r_out) -> bool:
    # Family circles are pairwise disjoint, so one point decides.
    w = c2 + rho2
    return r_in < abs(w - c) < r_out


def build_circle_family(specs) -> CircleFamily:
    """Circles l_j / 4^s, s = 1..h_j, around each point, minus those meeting a
    later disc D_k = {|z - z_k| <= l_k / 4}, cut into uninterrupted runs."""
    specs = list(specs)
    zs = [complex(s.z) for s in specs]
    for k, z in enumerate(zs):
        if z in zs[:k]:
            raise DuplicatePointError(f"point {z} repeated")
    n = len(specs)
    hs = [snap_exponent(s.l, s.r) for s in specs]
    snaps = tuple((s.l / _RATIO ** h) / s.r if h > 0 else 1.0 for s, h in zip(specs, hs))
    kept = {j: [] for j in range(n)}
    removed = []
    for j in range(n):
        for s in range(1, hs[j] + 1):
            rho = specs[j].l / _RATIO ** s
            if any(_circle_meets_disc(zs[j], rho, zs[k], specs[k].l / _RATIO) for k in range(j + 1, n)):
                removed.append((j, s))
            else:
                kept[j].append((s, rho))
    everything = [(zs[j], rho, j, s) for j in range(n) for s, rho in kept[j]]
    groups = []
    for j in range(n):
        run = []
        for s, rho in kept[j]:
            if run:
                s_prev, rho_prev = run[-1]
                linked = s == s_prev + 1 and not any(
                    (jj, ss) != (j, s) and (jj, ss) != (j, s_prev)
                    and _circle_in_open_annulus(c2, r2, zs[j], rho, rho_prev)
                    for c2, r2, jj, ss in everything)
                if not linked:
                    groups.append(_group(specs[j], j, run))
                    run = []
            run.append((s, rho))
        if run:
            groups.append(_group(specs[j], j, run))
    return CircleFamily(groups=tuple(groups), snap_factors=snaps, removed=tuple(removed),
                        meta={"h": tuple(hs)})


def _group(spec: PointSpec, j: int, run) -> CircleGroup:
    y = max(0.0, 1.0 - abs(spec.z)) if spec.mode == RADIAL else 1.0
    return CircleGroup(center=complex(spec.z), radii=tuple(r for _, r in run), y=y, point_index=j)


def group_count_bound(n: int) -> int:
    return n + 3 * n * (n - 1) // 2
