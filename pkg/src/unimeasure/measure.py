"""Ball masses, uniformity scans and generators for the classified families.

A support is either a :class:`CurveUnion` (isometric copies of one base
curve, carrying arclength measure) or a :class:`PointSet` (counting measure,
optionally repeated along a lattice vector).  Balls are closed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy import integrate, optimize

from .curves import Ellipse, HelixParams, Lissajous, curve_from_dict

log = logging.getLogger(__name__)

ROOT_XTOL = 1e-12
TANGENCY_TOL = 1e-10
DEFAULT_TOL = 1e-8
DEFAULT_BASEPOINTS = 17
POINT_TOL = 1e-9
DISJOINT_TOL = 1e-6


class TangencyUnresolved(RuntimeError):
    """A near-double root of ``|gamma(t) - x|^2 - r^2`` could not be classified."""


class IllConditioned(RuntimeError):
    """The radius grid cannot support the requested polynomial fit."""


class SupportValidationError(ValueError):
    """The support violates a precondition (not embedded, overlapping copies, ...)."""


@dataclass(frozen=True)
class Isometry:
    Q: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if Q.shape != (len(v), len(v)):
            raise ValueError("rotation and translation dimensions disagree")
        if not np.allclose(Q @ Q.T, np.eye(len(v)), atol=1e-10):
            raise ValueError("isometry matrix is not orthogonal")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "v", v)

    @classmethod
    def identity(cls, d: int) -> Isometry:
        return cls(np.eye(d), np.zeros(d))

    @classmethod
    def translation(cls, v) -> Isometry:
        v = np.asarray(v, dtype=float)
        return cls(np.eye(len(v)), v)

    def apply(self, pts: np.ndarray) -> np.ndarray:
        return pts @ self.Q.T + self.v

    def pull_back(self, x: np.ndarray) -> np.ndarray:
        return self.Q.T @ (np.asarray(x, dtype=float) - self.v)

    def to_dict(self) -> dict:
        return {"Q": self.Q.tolist(), "v": self.v.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> Isometry:
        if set(d) - {"Q", "v"}:
            raise ValueError(f"unknown isometry fields: {sorted(set(d) - {'Q', 'v'})}")
        v = np.asarray(d["v"], dtype=float)
        Q = np.asarray(d.get("Q", np.eye(len(v))), dtype=float)
        return cls(Q, v)


Curve = Union[HelixParams, Ellipse, Lissajous]


@dataclass(frozen=True)
class CurveUnion:
    base: Curve
    copies: tuple[Isometry, ...] = ()
    kind = "curve_union"

    def __post_init__(self):
        copies = tuple(self.copies) or (Isometry.identity(self.base.dim),)
        for c in copies:
            if len(c.v) != self.base.dim:
                raise ValueError("copy dimension differs from the base curve")
        object.__setattr__(self, "copies", copies)

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def domain(self) -> str | float:
        """``"full-line"`` or the period of a closed base curve."""
        T = self.base.period
        return "full-line" if T is None else T

    def to_dict(self) -> dict:
        dom = self.domain
        return {
            "kind": self.kind,
            "base": self.base.to_dict(),
            "copies": [c.to_dict() for c in self.copies],
            "domain": dom if dom == "full-line" else {"periodic": dom},
        }


@dataclass(frozen=True)
class PointSet:
    points: np.ndarray
    masses: np.ndarray | None = None
    lattice: np.ndarray | None = None
    kind = "point_set"

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        masses = np.ones(len(pts)) if self.masses is None else np.asarray(self.masses, dtype=float)
        if len(masses) != len(pts) or np.any(masses <= 0):
            raise ValueError("one positive mass per point is required")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", masses)
        if self.lattice is not None:
            g = np.asarray(self.lattice, dtype=float)
            if g.shape != (pts.shape[1],) or not np.linalg.norm(g) > 0:
                raise ValueError("lattice generator must be a nonzero vector of the point dimension")
            object.__setattr__(self, "lattice", g)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "points": self.points.tolist(),
            "masses": self.masses.tolist(),
            "lattice": None if self.lattice is None else self.lattice.tolist(),
        }


SupportSpec = Union[CurveUnion, PointSet]


def support_from_dict(d: dict) -> SupportSpec:
    kind = d.get("kind")
    if kind == "curve_union":
        unknown = set(d) - {"kind", "base", "copies", "domain"}
        if unknown:
            raise ValueError(f"unknown support fields: {sorted(unknown)}")
        spec = CurveUnion(curve_from_dict(d["base"]), tuple(Isometry.from_dict(c) for c in d.get("copies", [])))
        if "domain" in d:
            dom = d["domain"]
            want = spec.domain
            if dom == "full-line":
                ok = want == "full-line"
            else:
                ok = want != "full-line" and math.isclose(float(dom["periodic"]), want, rel_tol=1e-9)
            if not ok:
                raise ValueError(f"declared domain {dom!r} does not match the base curve ({want!r})")
        return spec
    if kind == "point_set":
        unknown = set(d) - {"kind", "points", "masses", "lattice"}
        if unknown:
            raise ValueError(f"unknown support fields: {sorted(unknown)}")
        return PointSet(d["points"], d.get("masses"), d.get("lattice"))
    raise ValueError(f"unknown support kind {kind!r}")


# --- ball mass -----------------------------------------------------------


@dataclass
class Tangency:
    t: float
    gap: float


def _refine_extremum(g, lo: float, hi: float, maximize: bool) -> tuple[float, float]:
    sign = -1.0 if maximize else 1.0
    res = optimize.minimize_scalar(lambda t: sign * g(t), bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-13})
    return float(res.x), float(g(res.x))


def _sublevel_intervals(g, lo: float, hi: float, step: float, r: float,
                        tangencies: list | None = None, strict: bool = False) -> list[tuple[float, float]]:
    """Intervals of ``[lo, hi]`` where ``g < 0`` (up to measure zero, where ``g <= 0``).

    Sign changes on a uniform grid are bracketed and polished with Brent's
    method.  Grid extrema close enough to zero to hide a pair of roots are
    refined first; an extremum within ``TANGENCY_TOL`` of zero is a tangency
    and contributes no length.
    """
    n = max(int(math.ceil((hi - lo) / step)), 8)
    t = np.linspace(lo, hi, n + 1)
    vals = g(t)
    dt = t[1] - t[0]
    slack = 2 * r * dt + dt * dt
    tangency_tol = TANGENCY_TOL * max(1.0, r * r)
    interior = np.arange(1, n)
    vm, v0, vp = vals[interior - 1], vals[interior], vals[interior + 1]
    near = np.abs(v0) <= slack
    mins = interior[(v0 <= vm) & (v0 <= vp) & near]
    maxs = interior[(v0 >= vm) & (v0 >= vp) & near]
    extra: list[float] = []
    touching: list[tuple[float, bool]] = []
    for idx, is_max in [(i, False) for i in mins] + [(i, True) for i in maxs]:
        ts, gs = _refine_extremum(g, t[idx - 1], t[idx + 1], is_max)
        if abs(gs) <= tangency_tol:
            if strict:
                raise TangencyUnresolved(f"near-double root at t={ts:.15g} (g={gs:.3g}, r={r})")
            log.info("tangency at t=%.15g ignored (g=%.3g)", ts, gs)
            if tangencies is not None:
                tangencies.append(Tangency(ts, gs))
            touching.append((ts, is_max))
        elif (gs < 0) != (vals[idx] < 0):
            extra.append(ts)
    if extra:
        t = np.sort(np.concatenate([t, extra]))
        vals = g(t)
        dt = step
    for ts, is_max in touching:
        # rounding noise at a touching point must not open or split an interval
        near_t = np.abs(t - ts) <= dt
        pin = near_t & (np.abs(vals) <= tangency_tol)
        vals[pin] = -tangency_tol if is_max else tangency_tol
    neg = vals < 0
    roots = []
    for i in np.nonzero(neg[:-1] != neg[1:])[0]:
        a, b = t[i], t[i + 1]
        if vals[i + 1] == 0:
            roots.append(float(b))
        else:
            roots.append(optimize.brentq(g, a, b, xtol=ROOT_XTOL, rtol=1e-15))
    out = []
    inside = bool(neg[0])
    start = lo
    for x in roots:
        if inside:
            out.append((start, x))
        else:
            start = x
        inside = not inside
    if inside:
        out.append((start, hi))
    return out


MAX_FINE_POINTS = 4096


def _closed_curve_windows(curve: Curve, x: np.ndarray, r: float) -> list[tuple[float, float]]:
    """Parameter windows of a closed curve that can meet the closed ball ``B(x, r)``.

    Coarse cells are discarded with the Lipschitz bound ``|gamma'| <= max_speed``
    and the survivors are subdivided until the fine root grid is affordable.
    Windows that touch across ``t = 0`` are joined, so the root search never
    starts at a point where the curve may touch the sphere.
    """
    T = curve.period
    vmax = curve.max_speed
    fine = curve.grid_step(r)
    pending = [(0.0, T)]
    done = []
    while pending:
        a, b = pending.pop()
        if (b - a) / fine <= MAX_FINE_POINTS:
            done.append((a, b))
            continue
        t = np.linspace(a, b, 257)
        d = np.linalg.norm(curve.point(t) - x, axis=1)
        cell = (b - a) / 256
        keep = 0.5 * (d[:-1] + d[1:] - vmax * cell) <= r * (1 + 1e-9) + 1e-12
        i = 0
        while i < len(keep):
            if keep[i]:
                j = i
                while j + 1 < len(keep) and keep[j + 1]:
                    j += 1
                pending.append((float(t[i]), float(t[j + 1])))
                i = j + 1
            else:
                i += 1
    done.sort()
    merged: list[list[float]] = []
    for a, b in done:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    if not merged:
        return []
    if len(merged) == 1 and merged[0] == [0.0, T]:
        # one window for the whole curve: start where it is farthest from the sphere
        t = np.linspace(0.0, T, 257)[:-1]
        gap = np.abs(np.sum((curve.point(t) - x) ** 2, axis=1) - r * r)
        t0 = float(t[np.argmax(gap)])
        return [(t0, t0 + T)]
    if len(merged) > 1 and merged[0][0] == 0.0 and merged[-1][1] == T:
        last = merged.pop()
        merged[0] = [last[0], merged[0][1] + T]
    return [(a, b) for a, b in merged]


def curve_ball_mass(curve: Curve, x, r: float, tangencies: list | None = None, strict: bool = False) -> float:
    """Arclength of ``{t : |curve(t) - x| <= r}`` for a single base curve."""
    x = np.asarray(x, dtype=float)

    def g(t):
        diff = curve.point(np.atleast_1d(t)) - x
        val = np.einsum("...i,...i->...", diff, diff) - r * r
        return val if np.ndim(t) else float(val[0])

    if curve.period is not None:
        windows = _closed_curve_windows(curve, x, r)
    else:
        windows = [curve.parameter_window(x, r)]
    pieces = []
    for lo, hi in windows:
        pieces.extend(_sublevel_intervals(g, lo, hi, curve.grid_step(r), r, tangencies, strict))
    if curve.unit_speed:
        return float(sum(b - a for a, b in pieces))
    return float(sum(integrate.quad(curve.speed, a, b, epsabs=1e-14, epsrel=1e-12, limit=200)[0]
                     for a, b in pieces))


def _lattice_range(w: np.ndarray, g: np.ndarray, r: float) -> range:
    # |w + k g|^2 <= r^2 is a quadratic inequality in k
    gg = g @ g
    wg = w @ g
    disc = wg * wg - gg * (w @ w - r * r)
    if disc < 0:
        return range(0)
    root = math.sqrt(disc)
    return range(math.floor((-wg - root) / gg) - 1, math.ceil((-wg + root) / gg) + 2)


def point_ball_mass(ps: PointSet, x, r: float) -> float:
    x = np.asarray(x, dtype=float)
    lim = r * (1 + POINT_TOL) + POINT_TOL
    if ps.lattice is None:
        dist = np.linalg.norm(ps.points - x, axis=1)
        return float(ps.masses[dist <= lim].sum())
    total = 0.0
    for p, m in zip(ps.points, ps.masses):
        w = p - x
        ks = np.array(list(_lattice_range(w, ps.lattice, r)), dtype=float)
        if len(ks) == 0:
            continue
        dist = np.linalg.norm(w + ks[:, None] * ps.lattice, axis=1)
        total += m * int(np.count_nonzero(dist <= lim))
    return float(total)


def ball_mass(spec: SupportSpec, x, r: float, tangencies: list | None = None, strict: bool = False) -> float:
    """``mu(B(x, r))`` for the closed ball."""
    if not r > 0:
        raise ValueError("radius must be positive")
    if isinstance(spec, PointSet):
        return point_ball_mass(spec, x, r)
    return float(sum(curve_ball_mass(spec.base, c.pull_back(x), r, tangencies, strict) for c in spec.copies))


# --- basepoints and scans ------------------------------------------------


def _sampling_span(curve: Curve) -> float:
    T = curve.period
    if T is not None:
        return T
    w = curve.max_angular_speed
    return 2 * math.pi / np.min(np.abs(curve.alphas)) if w > 0 else 1.0


def basepoints(spec: SupportSpec, per_copy: int = DEFAULT_BASEPOINTS, seed: int = 0) -> np.ndarray:
    """Stratified basepoints on the support (seeded jitter within each stratum)."""
    rng = np.random.default_rng(seed)
    if isinstance(spec, PointSet):
        if spec.lattice is None:
            return spec.points.copy()
        return np.concatenate([spec.points + k * spec.lattice for k in (-1, 0, 1)])
    span = _sampling_span(spec.base)
    out = []
    for c in spec.copies:
        t = (np.arange(per_copy) + rng.random(per_copy)) / per_copy * span
        out.append(c.apply(spec.base.point(t)))
    return np.concatenate(out)


@dataclass
class UniformityReport:
    radii: np.ndarray
    mean_mass: np.ndarray
    max_deviation: np.ndarray
    worst_basepoint: np.ndarray
    tol: float
    n_basepoints: int
    seed: int = 0
    tangencies: int = 0

    @property
    def uniform(self) -> bool:
        return bool(np.all(self.max_deviation <= self.tol))

    @property
    def first_failure(self) -> float | None:
        bad = np.nonzero(self.max_deviation > self.tol)[0]
        return float(self.radii[bad[0]]) if len(bad) else None

    @property
    def verdict(self) -> str:
        return "uniform" if self.uniform else "non-uniform"

    @property
    def worst(self) -> float:
        return float(np.max(self.max_deviation)) if len(self.max_deviation) else 0.0

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "first_failing_radius": self.first_failure,
            "tol": self.tol,
            "seed": self.seed,
            "basepoints": self.n_basepoints,
            "tangencies": self.tangencies,
            "radii": self.radii.tolist(),
            "mean_mass": self.mean_mass.tolist(),
            "max_deviation": self.max_deviation.tolist(),
            "worst_basepoint": self.worst_basepoint.tolist(),
        }

    def csv_rows(self) -> list[tuple[float, float, float]]:
        return list(zip(self.radii.tolist(), self.mean_mass.tolist(), self.max_deviation.tolist()))


def uniformity_scan(spec: SupportSpec, radii: Sequence[float], basepoints_per_copy: int = DEFAULT_BASEPOINTS,
                    tol: float = DEFAULT_TOL, seed: int = 0, strict: bool = False,
                    points: np.ndarray | None = None) -> UniformityReport:
    if basepoints_per_copy < 2:
        raise ValueError("need at least two basepoints")
    radii = np.asarray(radii, dtype=float)
    xs = basepoints(spec, basepoints_per_copy, seed) if points is None else np.asarray(points, dtype=float)
    tangencies: list = []
    masses = np.array([[ball_mass(spec, x, r, tangencies, strict) for x in xs] for r in radii])
    mean = masses.mean(axis=1)
    dev = np.abs(masses - mean[:, None])
    worst = xs[np.argmax(dev, axis=1)]
    return UniformityReport(radii, mean, dev.max(axis=1), worst, tol, len(xs), seed, len(tangencies))


# --- fitting -------------------------------------------------------------


@dataclass(frozen=True)
class FitResult:
    powers: tuple[int, ...]
    coefficients: np.ndarray
    stderr: np.ndarray

    def coefficient(self, power: int) -> float:
        return float(self.coefficients[self.powers.index(power)])


def default_basepoint(spec: SupportSpec) -> np.ndarray:
    if isinstance(spec, PointSet):
        return spec.points[0]
    return spec.copies[0].apply(spec.base.point(np.array([0.0])))[0]


def empirical_f_fit(spec: SupportSpec, degree: int, r_max: float, n_radii: int = 60,
                    x=None, cond_limit: float = 1e12) -> FitResult:
    """Least-squares fit of ``f(r)`` by ``r, r^3, ..., r^degree`` on ``(0, r_max]``."""
    if not 1 <= degree <= 7:
        raise ValueError("degree must lie in 1..7")
    powers = tuple(range(1, degree + 1, 2))
    x = default_basepoint(spec) if x is None else np.asarray(x, dtype=float)
    # Chebyshev-like nodes cluster at the ends of the interval
    u = 0.5 * (1 - np.cos(np.pi * (np.arange(n_radii) + 0.5) / n_radii))
    radii = r_max * u
    radii = radii[radii > 0]
    if len(np.unique(radii)) <= len(powers) or radii.max() / r_max < 0.5:
        raise IllConditioned("radius grid has too few distinct radii")
    if isinstance(spec, CurveUnion) and degree >= 3:
        # the r^degree term is (w r)^(degree - 1) smaller than 2r; below rounding it is noise
        w = spec.base.max_angular_speed
        if w > 0 and (w * r_max) ** (degree - 1) < 1e-13:
            raise IllConditioned(f"r_max={r_max:.3g} is too small to resolve the r^{degree} term")
    f = np.array([ball_mass(spec, x, r) for r in radii])
    A = np.stack([(radii / r_max) ** p for p in powers], axis=1)
    if np.linalg.cond(A) > cond_limit:
        raise IllConditioned(f"design matrix condition number {np.linalg.cond(A):.3g}")
    coef, *_ = np.linalg.lstsq(A, f, rcond=None)
    resid = f - A @ coef
    dof = max(len(radii) - len(powers), 1)
    cov = np.linalg.pinv(A.T @ A) * float(resid @ resid) / dof
    scale = np.array([r_max**p for p in powers])
    return FitResult(powers, coef / scale, np.sqrt(np.diag(cov)) / scale)


# --- component distances -------------------------------------------------


def point_curve_distance(curve: Curve, x) -> float:
    """Distance from ``x`` to a base curve (in the curve's own coordinates)."""
    x = np.asarray(x, dtype=float)
    if isinstance(curve, HelixParams) and not curve.blocks:
        k = curve.drift_axis
        y = x.copy()
        y[k] = 0.0
        return float(np.linalg.norm(y))
    if isinstance(curve, HelixParams) and curve.b > 0:
        k = curve.drift_axis
        tc = x[k] / curve.b
        bound = float(np.linalg.norm(curve.point(np.array([tc]))[0] - x))
        lo, hi = (x[k] - bound) / curve.b, (x[k] + bound) / curve.b
        if not hi > lo:
            # x sits on the curve to rounding accuracy
            return bound
    else:
        lo, hi = 0.0, curve.period
    step = min(curve.grid_step(1.0), (hi - lo) / 64)
    t = np.linspace(lo, hi, max(int(math.ceil((hi - lo) / step)), 64) + 1)
    d2 = np.sum((curve.point(t) - x) ** 2, axis=1)
    best = float(d2.min())
    for i in np.argsort(d2)[:4]:
        a, b = t[max(i - 1, 0)], t[min(i + 1, len(t) - 1)]
        res = optimize.minimize_scalar(lambda s: float(np.sum((curve.point(np.array([s]))[0] - x) ** 2)),
                                       bounds=(a, b), method="bounded", options={"xatol": 1e-12})
        best = min(best, float(res.fun))
    return math.sqrt(max(best, 0.0))


@dataclass
class DistanceReport:
    min_distance: np.ndarray
    variation: np.ndarray
    constant: np.ndarray
    tol: float


def component_distances(spec: CurveUnion, samples: int = 33, window: float | None = None,
                        tol: float = 1e-7) -> DistanceReport:
    """Pairwise ``min`` and variation of ``dist(x, copy_j)`` over sampled ``x`` on ``copy_i``.

    ``window`` is the parameter span sampled on each copy (one period or one
    turn by default).
    """
    if not isinstance(spec, CurveUnion):
        raise TypeError("component distances need a curve union")
    k = len(spec.copies)
    span = _sampling_span(spec.base) if window is None else window
    t = np.linspace(0.0, span, samples, endpoint=window is not None or spec.base.period is None)
    mins = np.zeros((k, k))
    var = np.zeros((k, k))
    if k < 2:
        return DistanceReport(np.zeros((0, 0)), np.zeros((0, 0)), np.zeros((0, 0), dtype=bool), tol)
    base_pts = spec.base.point(t)
    for i, ci in enumerate(spec.copies):
        pts = ci.apply(base_pts)
        for j, cj in enumerate(spec.copies):
            if i == j:
                continue
            d = np.array([point_curve_distance(spec.base, cj.pull_back(p)) for p in pts])
            mins[i, j] = d.min()
            var[i, j] = d.max() - d.min()
    const = var <= tol
    np.fill_diagonal(const, True)
    return DistanceReport(mins, var, const, tol)


def validate_support(spec: SupportSpec) -> None:
    """Reject non-embedded base curves and overlapping copies."""
    if isinstance(spec, PointSet):
        if spec.lattice is None and len(spec.points) > 1:
            diff = spec.points[:, None, :] - spec.points[None, :, :]
            d = np.linalg.norm(diff, axis=2)
            np.fill_diagonal(d, np.inf)
            if d.min() <= POINT_TOL:
                raise SupportValidationError("point set has coincident points")
        return
    if not spec.base.is_embedded():
        raise SupportValidationError(f"base curve {spec.base.to_dict()} is not embedded")
    if isinstance(spec.base, HelixParams) and spec.base.b == 0 and spec.base.period is None:
        raise SupportValidationError("toric curve with incommensurate speeds is not locally finite")
    if len(spec.copies) > 1:
        rep = component_distances(spec, samples=17)
        off = rep.min_distance[~np.eye(len(spec.copies), dtype=bool)]
        if off.min() <= DISJOINT_TOL:
            raise SupportValidationError(f"copies overlap (minimum distance {off.min():.3g})")


# --- generators ----------------------------------------------------------


def line(dim: int = 1) -> HelixParams:
    return HelixParams((), 1.0, dim)


def gen_line_measure(kind: str, a: float = 1.0, b: float | None = None) -> SupportSpec:
    """Lebesgue measure, ``a Z`` or ``a Z + {0, b}`` on the real line."""
    if kind == "lebesgue":
        return CurveUnion(line(1))
    if not a > 0:
        raise ValueError("lattice step must be positive")
    if kind == "lattice":
        return PointSet([[0.0]], None, [a])
    if kind == "double_lattice":
        if b is None or not 0 < b < a:
            raise ValueError("double lattice needs 0 < b < a")
        return PointSet([[0.0], [b]], None, [a])
    raise ValueError(f"unknown line measure {kind!r}")


def gen_ngon(n: int, R: float, offset: float | None = None) -> PointSet:
    """Vertices of a regular ``n``-gon, or of two of them rotated by ``offset``."""
    if n < 2 or not R > 0:
        raise ValueError("need n >= 2 and R > 0")
    ang = 2 * np.pi * np.arange(n) / n
    if offset is not None:
        ang = np.concatenate([ang, ang + offset])
    return PointSet(np.stack([R * np.cos(ang), R * np.sin(ang)], axis=1))


def axial_translates(params: HelixParams, shifts: Sequence[float]) -> CurveUnion:
    """Copies of a helix translated along its drift axis."""
    k = params.drift_axis
    if k is None:
        raise ValueError("axial translates need a helix with drift")
    copies = []
    for s in shifts:
        v = np.zeros(params.dim)
        v[k] = s
        copies.append(Isometry.translation(v))
    return CurveUnion(params, tuple(copies))


def prop3d_shifts(alpha: float, b: float, n: int, a: float) -> list[float]:
    step = 2 * math.pi * b / (n * abs(alpha))
    shifts = [i * step for i in range(n)]
    if a > 0:
        shifts += [a + i * step for i in range(n)]
    return shifts


def gen_prop3d(r1: float, alpha: float, b: float, n: int, a: float) -> CurveUnion:
    """A helix in ``R^3`` and its axial translates by ``(2 pi b / (n alpha)) Z`` and ``a`` plus that lattice.

    Translates differing by a full pitch ``2 pi b / alpha`` coincide, so the
    union has ``n`` (``a == 0``) or ``2n`` distinct components.
    """
    if abs(r1 * r1 * alpha * alpha + b * b - 1) > 1e-9:
        raise ValueError("need unit speed r1^2 alpha^2 + b^2 = 1")
    if not b > 0 or n < 1:
        raise ValueError("need b > 0 and n >= 1")
    step = 2 * math.pi * b / (n * abs(alpha))
    if not 0 <= a < step:
        raise ValueError(f"offset a must lie in [0, {step})")
    return axial_translates(HelixParams(((r1, alpha),), b, 3), prop3d_shifts(alpha, b, n, a))


def ellipse_support(a: float = 1.0, b: float = 2.0) -> CurveUnion:
    return CurveUnion(Ellipse(a, b))


def parallel_lines(delta: float, dim: int = 2) -> CurveUnion:
    v = np.zeros(dim)
    v[1] = delta
    return CurveUnion(line(dim), (Isometry.identity(dim), Isometry.translation(v)))
