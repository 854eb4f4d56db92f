"""Constant-curvature curves and a few non-uniform test curves.

Helix/toric curves use the block layout

    (r_1 cos(a_1 t), r_1 sin(a_1 t), ..., r_m cos(a_m t), r_m sin(a_m t), b t, 0, ...)

in ``R^dim``, with unit speed ``sum r_i^2 a_i^2 + b^2 = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize
from scipy.spatial import cKDTree

UNIT_SPEED_TOL = 1e-9
EIGEN_TOL = 1e-12
PIVOT_TOL = 1e-6


class DegenerateCurvatures(ValueError):
    """An interior curvature vanishes, so the curve lives in a smaller span."""


class DegenerateWindow(ValueError):
    """The Gram-Schmidt pivot of a sample window fell below tolerance."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class CurvatureVector:
    kappas: tuple[float, ...]

    def __init__(self, kappas: Sequence[float]):
        object.__setattr__(self, "kappas", tuple(kappas))

    @property
    def dim(self) -> int:
        return len(self.kappas) + 1

    def __len__(self) -> int:
        return len(self.kappas)

    def __iter__(self):
        return iter(self.kappas)

    def __getitem__(self, i):
        return self.kappas[i]


def _kappas(kv) -> tuple[float, ...]:
    return tuple(kv.kappas) if isinstance(kv, CurvatureVector) else tuple(kv)


@dataclass(frozen=True)
class HelixParams:
    blocks: tuple[tuple[float, float], ...]
    b: float = 0.0
    dim: int = field(default=0)

    def __post_init__(self):
        blocks = tuple((r, a) for r, a in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        dim = self.dim or (2 * len(blocks) + (1 if self.b > 0 else 0))
        object.__setattr__(self, "dim", dim)
        if self.b < 0:
            raise ValueError("drift b must be non-negative")
        if 2 * len(blocks) + (1 if self.b > 0 else 0) > dim:
            raise ValueError(f"{len(blocks)} blocks and drift {self.b} do not fit in R^{dim}")
        for r, a in blocks:
            if not r > 0:
                raise ValueError("block radii must be positive")
            if a == 0:
                raise ValueError("angular speeds must be nonzero")
        speeds = sorted(abs(float(a)) for _, a in blocks)
        for u, v in zip(speeds, speeds[1:]):
            if math.isclose(u, v, rel_tol=1e-12):
                raise ValueError("angular speeds must be pairwise distinct in absolute value")
        speed2 = sum(float(r) ** 2 * float(a) ** 2 for r, a in blocks) + float(self.b) ** 2
        if abs(speed2 - 1) > UNIT_SPEED_TOL:
            raise ValueError(f"not unit speed: sum r^2 a^2 + b^2 = {speed2!r}")

    @classmethod
    def normalized(cls, radii: Sequence[float], alphas: Sequence[float], b: float = 0.0, dim: int = 0) -> HelixParams:
        """Rescale the angular speeds and drift (a time change) to get unit speed."""
        s = math.sqrt(sum(r * r * a * a for r, a in zip(radii, alphas)) + b * b)
        return cls(tuple((r, a / s) for r, a in zip(radii, alphas)), b / s, dim)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def drift_axis(self) -> int | None:
        return 2 * len(self.blocks) if self.b > 0 else None

    @property
    def radii(self) -> np.ndarray:
        return np.array([float(r) for r, _ in self.blocks])

    @property
    def alphas(self) -> np.ndarray:
        return np.array([float(a) for _, a in self.blocks])

    @property
    def max_angular_speed(self) -> float:
        return float(np.max(np.abs(self.alphas))) if self.blocks else 0.0

    @property
    def period(self) -> float | None:
        if self.b > 0:
            return None
        ok, T = is_toric_knot(self)
        return T if ok else None

    unit_speed = True
    max_speed = 1.0

    def point(self, t) -> np.ndarray:
        return self.derivative(t, 0)

    __call__ = point

    def derivative(self, t, order: int = 1) -> np.ndarray:
        """``order``-th derivative in ``t``; shape ``t.shape + (dim,)``."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (self.dim,))
        shift = order * math.pi / 2
        for i, (r, a) in enumerate(self.blocks):
            r, a = float(r), float(a)
            out[..., 2 * i] = r * a**order * np.cos(a * t + shift)
            out[..., 2 * i + 1] = r * a**order * np.sin(a * t + shift)
        if self.b > 0:
            k = 2 * len(self.blocks)
            if order == 0:
                out[..., k] = float(self.b) * t
            elif order == 1:
                out[..., k] = float(self.b)
        return out

    def speed(self, t) -> np.ndarray:
        return np.ones(np.shape(t))

    def curvatures(self) -> tuple[float, ...]:
        """Curvature vector of length ``dim - 1`` (Gram-Schmidt on exact derivatives)."""
        derivs = np.stack([self.derivative(0.0, k) for k in range(1, self.dim + 1)], axis=1)
        return _curvatures_from_derivatives(derivs)[0]

    def is_embedded(self) -> bool:
        return self.b > 0 or self.period is not None

    def to_dict(self) -> dict:
        return {
            "type": "helix",
            "dim": self.dim,
            "blocks": [{"r": float(r), "alpha": float(a)} for r, a in self.blocks],
            "b": float(self.b),
        }

    @classmethod
    def from_dict(cls, d: dict) -> HelixParams:
        unknown = set(d) - {"type", "dim", "blocks", "b"}
        if unknown:
            raise ValueError(f"unknown helix fields: {sorted(unknown)}")
        blocks = []
        for blk in d.get("blocks", []):
            if set(blk) != {"r", "alpha"}:
                raise ValueError("each block needs exactly the keys 'r' and 'alpha'")
            blocks.append((float(blk["r"]), float(blk["alpha"])))
        return cls(tuple(blocks), float(d.get("b", 0.0)), int(d.get("dim", 0)))

    def parameter_window(self, x: np.ndarray, r: float) -> tuple[float, float]:
        """A parameter interval containing every ``t`` with ``|gamma(t) - x| <= r``."""
        if self.b > 0:
            c = float(x[self.drift_axis])
            b = float(self.b)
            return (c - r) / b - 1e-9, (c + r) / b + 1e-9
        T = self.period
        if T is None:
            raise ValueError("toric curve with incommensurate speeds is not locally finite")
        return 0.0, T

    def grid_step(self, r: float) -> float:
        w = self.max_angular_speed
        step = r / 8
        if w > 0:
            step = min(step, math.pi / (8 * w))
        return step


@dataclass(frozen=True)
class Ellipse:
    """``(a cos t, b sin t)`` padded with zeros to ``dim``; not arclength-parametrized."""

    a: float
    b: float
    dim: int = 2
    unit_speed = False

    @property
    def max_speed(self) -> float:
        return float(max(self.a, self.b))

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("ellipse semi-axes must be positive")

    @property
    def period(self) -> float:
        return 2 * math.pi

    @property
    def max_angular_speed(self) -> float:
        return max(self.a, self.b) / min(self.a, self.b) ** 2

    def point(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (self.dim,))
        out[..., 0] = self.a * np.cos(t)
        out[..., 1] = self.b * np.sin(t)
        return out

    __call__ = point

    def speed(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.hypot(self.a * np.sin(t), self.b * np.cos(t))

    def curvature(self, t) -> np.ndarray:
        return self.a * self.b / self.speed(t) ** 3

    def is_embedded(self) -> bool:
        return True

    def parameter_window(self, x, r):
        return 0.0, self.period

    def grid_step(self, r: float) -> float:
        vmax = max(self.a, self.b)
        rho = min(self.a, self.b) ** 2 / max(self.a, self.b)
        return min(r, rho) / (8 * vmax)

    def to_dict(self) -> dict:
        return {"type": "ellipse", "a": self.a, "b": self.b, "dim": self.dim}


@dataclass(frozen=True)
class Lissajous:
    """``(ax sin(p t + phase), ay sin(q t))``; ``p=1, q=2`` is a figure eight."""

    ax: float = 1.0
    ay: float = 1.0
    p: int = 1
    q: int = 2
    phase: float = 0.0
    dim: int = 2
    unit_speed = False

    @property
    def max_speed(self) -> float:
        return math.hypot(self.ax * self.p, self.ay * self.q)

    @property
    def period(self) -> float:
        return 2 * math.pi / math.gcd(self.p, self.q)

    @property
    def max_angular_speed(self) -> float:
        return float(max(self.p, self.q)) ** 2

    def point(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (self.dim,))
        out[..., 0] = self.ax * np.sin(self.p * t + self.phase)
        out[..., 1] = self.ay * np.sin(self.q * t)
        return out

    __call__ = point

    def speed(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.hypot(self.ax * self.p * np.cos(self.p * t + self.phase), self.ay * self.q * np.cos(self.q * t))

    def is_embedded(self) -> bool:
        return sampled_embedding_check(self, self.period)

    def parameter_window(self, x, r):
        return 0.0, self.period

    def grid_step(self, r: float) -> float:
        return min(r, 1.0) / (8 * max(self.ax * self.p, self.ay * self.q))

    def to_dict(self) -> dict:
        return {"type": "lissajous", "ax": self.ax, "ay": self.ay, "p": self.p, "q": self.q,
                "phase": self.phase, "dim": self.dim}


def curve_from_dict(d: dict):
    kind = d.get("type", "helix")
    if kind == "helix":
        return HelixParams.from_dict(d)
    fields = {k: v for k, v in d.items() if k != "type"}
    if kind == "ellipse":
        return Ellipse(**fields)
    if kind == "lissajous":
        return Lissajous(**fields)
    raise ValueError(f"unknown curve type {kind!r}")


def sampled_embedding_check(curve, period: float, n: int = 4096) -> bool:
    """False when two points far apart along a closed curve come close in space."""
    t = np.linspace(0.0, period, n, endpoint=False)
    pts = curve.point(t)
    seg = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
    arc = np.concatenate([[0.0], np.cumsum(seg)])
    length = arc[-1]
    delta = 2 * seg.max()
    for i, j in cKDTree(pts).query_pairs(delta):
        along = abs(arc[j] - arc[i])
        along = min(along, length - along)
        if along > 4 * delta:
            return False
    return True


def eval_helix(p: HelixParams, t):
    return p.point(t)


def frenet_matrix(kv) -> np.ndarray:
    """Skew tridiagonal matrix with ``M[j, j+1] = k_{j+1}`` (0-based rows)."""
    ks = np.asarray(_kappas(kv), dtype=float)
    d = len(ks) + 1
    M = np.zeros((d, d))
    idx = np.arange(d - 1)
    M[idx, idx + 1] = ks
    M[idx + 1, idx] = -ks
    return M


def curvatures_to_helix(kv, dim: int | None = None) -> HelixParams:
    """Helix/toric parameters of the unit-speed curve with constant curvatures ``kv``.

    With ``E(0) = I`` the frame is ``exp(s M)`` and ``gamma' = e_1^T exp(s M)``.
    ``M^T M`` has eigenvalue ``w^2`` on each invariant rotation plane and 0 on the
    kernel; the projection of ``e_1`` on a plane (length ``rho``) turns at angular
    speed ``w``, tracing a circle of radius ``rho / w``.  The kernel projection
    is the drift.
    """
    ks = [float(k) for k in _kappas(kv)]
    dim = dim or len(ks) + 1
    nz = [i for i, k in enumerate(ks) if k != 0]
    q = nz[-1] + 1 if nz else 0
    if any(k == 0 for k in ks[:q]):
        raise DegenerateCurvatures(
            f"interior zero curvature in {ks}; restrict to the span of the first nonzero block"
        )
    if q == 0:
        return HelixParams((), 1.0, dim)
    M = frenet_matrix(ks[:q])
    lam, vecs = np.linalg.eigh(M.T @ M)
    scale = max(lam.max(), 1.0)
    e1 = np.zeros(q + 1)
    e1[0] = 1.0
    coords = vecs.T @ e1
    blocks = []
    drift2 = 0.0
    i = 0
    order = np.argsort(lam)
    lam, coords = lam[order], coords[order]
    while i < len(lam):
        j = i + 1
        while j < len(lam) and abs(lam[j] - lam[i]) <= 1e-9 * scale:
            j += 1
        weight = float(np.sum(coords[i:j] ** 2))
        if lam[i] <= EIGEN_TOL * scale:
            drift2 += weight
        else:
            if j - i != 2:
                raise DegenerateCurvatures(f"eigenvalue {lam[i]} has multiplicity {j - i}")
            w = math.sqrt(lam[i])
            blocks.append((math.sqrt(weight) / w, w))
        i = j
    b = math.sqrt(drift2)
    # renormalize residual rounding so the unit-speed check stays tight
    s = math.sqrt(sum(r * r * a * a for r, a in blocks) + b * b)
    return HelixParams(tuple((r / s, a) for r, a in blocks), b / s, dim)


@dataclass(frozen=True)
class FrenetState:
    s: float
    position: np.ndarray
    frame: np.ndarray


def _orthonormalize(F: np.ndarray) -> np.ndarray:
    U, _, Vt = np.linalg.svd(F)
    return U @ Vt


def integrate_frenet(
    kv,
    s_end: float,
    steps: int,
    dim: int | None = None,
    position: Sequence[float] | None = None,
    frame: np.ndarray | None = None,
) -> list[FrenetState]:
    """RK4 integration of ``E' = M(s) E``, ``x' = E_1``.

    ``kv`` is a constant curvature sequence or a callable ``s -> curvatures``.
    The frame is projected back onto O(d) after every step.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if callable(kv):
        kfun: Callable = kv
        d = dim or len(np.atleast_1d(kfun(0.0))) + 1
    else:
        ks = np.asarray(_kappas(kv), dtype=float)
        d = dim or len(ks) + 1
        const = frenet_matrix(np.pad(ks, (0, d - 1 - len(ks))))
        kfun = None

    def mat(s):
        if kfun is None:
            return const
        ks = np.atleast_1d(np.asarray(kfun(s), dtype=float))
        return frenet_matrix(np.pad(ks, (0, d - 1 - len(ks))))

    x = np.zeros(d) if position is None else np.asarray(position, dtype=float).copy()
    F = np.eye(d) if frame is None else np.asarray(frame, dtype=float).copy()
    h = s_end / steps
    out = [FrenetState(0.0, x.copy(), F.copy())]
    for i in range(steps):
        s = i * h
        M0, Mh, M1 = mat(s), mat(s + h / 2), mat(s + h)
        k1F = M0 @ F
        k1x = F[0]
        F2 = F + h / 2 * k1F
        k2F, k2x = Mh @ F2, F2[0]
        F3 = F + h / 2 * k2F
        k3F, k3x = Mh @ F3, F3[0]
        F4 = F + h * k3F
        k4F, k4x = M1 @ F4, F4[0]
        x = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        F = _orthonormalize(F + h / 6 * (k1F + 2 * k2F + 2 * k3F + k4F))
        out.append(FrenetState((i + 1) * h, x.copy(), F.copy()))
    return out


@lru_cache(maxsize=None)
def central_stencil(order: int) -> tuple[int, np.ndarray]:
    """Second-order accurate central weights for the ``order``-th derivative.

    Returns ``(half_width, weights)`` for offsets ``-w..w`` (unit spacing).
    """
    w = (order + 1) // 2
    offsets = range(-w, w + 1)
    n = 2 * w + 1
    A = [[Fraction(j) ** p for j in offsets] for p in range(n)]
    rhs = [Fraction(math.factorial(order)) if p == order else Fraction(0) for p in range(n)]
    # exact Gauss-Jordan elimination on the Vandermonde system
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / A[col][col]
        A[col] = [v * inv for v in A[col]]
        rhs[col] *= inv
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [u - f * v for u, v in zip(A[r], A[col])]
                rhs[r] -= f * rhs[col]
    return w, np.array([float(v) for v in rhs])


def _curvatures_from_derivatives(derivs: np.ndarray, tol: float = PIVOT_TOL) -> tuple[tuple[float, ...], int | None]:
    """Curvatures from the columns ``gamma', ..., gamma^(d)`` of a unit-speed curve.

    The ``j``-th Gram-Schmidt pivot equals ``k_1 ... k_{j-1}``.  Returns the
    curvatures and the index of the first vanishing pivot (``None`` if none);
    curvatures from that point on are reported as 0.
    """
    d = derivs.shape[1]
    R = np.linalg.qr(derivs, mode="r")
    piv = np.abs(np.diag(R))
    scale = max(1.0, float(np.max(np.linalg.norm(derivs, axis=0))))
    ks = [0.0] * (d - 1)
    degenerate = None
    for j in range(1, d):
        if piv[j] < tol * scale:
            degenerate = j
            break
        ks[j - 1] = float(piv[j] / piv[j - 1])
    return tuple(ks), degenerate


@dataclass(frozen=True)
class CurvatureEstimates:
    index: np.ndarray
    s: np.ndarray
    kappas: np.ndarray
    degenerate: np.ndarray

    def __len__(self) -> int:
        return len(self.index)

    def vectors(self) -> list[CurvatureVector]:
        return [CurvatureVector(tuple(row)) for row in self.kappas]


def estimate_curvatures(samples, h: float, strict: bool = False, tol: float = PIVOT_TOL) -> CurvatureEstimates:
    """Curvatures along arclength-uniform samples with spacing ``h``.

    Derivatives ``1..d`` come from second-order central differences, so each
    estimate carries an O(h^2) error.  Windows whose Gram-Schmidt pivot falls
    below ``tol`` are flagged (curvatures past the pivot set to 0); with
    ``strict`` they raise :class:`DegenerateWindow` instead.
    """
    pts = np.asarray(samples, dtype=float)
    n, d = pts.shape
    stencils = [central_stencil(m) for m in range(1, d + 1)]
    w = max(s[0] for s in stencils)
    if n < 2 * w + 1:
        raise ValueError(f"need at least {2 * w + 1} samples for d={d}")
    centers = np.arange(w, n - w)
    derivs = np.zeros((len(centers), d, d))
    for m, (wm, weights) in enumerate(stencils, start=1):
        acc = np.zeros((len(centers), d))
        for off, c in zip(range(-wm, wm + 1), weights):
            if c != 0:
                acc += c * pts[centers + off]
        derivs[:, :, m - 1] = acc / h**m
    kappas = np.zeros((len(centers), d - 1))
    degenerate = np.zeros(len(centers), dtype=bool)
    for i, D in enumerate(derivs):
        ks, bad = _curvatures_from_derivatives(D, tol)
        if bad is not None:
            if strict:
                raise DegenerateWindow(f"pivot {bad + 1} vanishes at sample {centers[i]}", int(centers[i]))
            degenerate[i] = True
        kappas[i] = ks
    return CurvatureEstimates(centers, centers * h, kappas, degenerate)


def is_toric_knot(p: HelixParams, max_denominator: int = 10_000,
                  rtol: float = 1e-12) -> tuple[bool, float | None]:
    """Closed toric curve test; returns ``(True, minimal period)`` or ``(False, None)``.

    Ratios given as :class:`fractions.Fraction` or ints are used exactly;
    floats must match a fraction with denominator at most ``max_denominator``
    to ``rtol`` relative accuracy (loosen it for estimated curvatures).
    """
    if p.b > 0 or not p.blocks:
        return False, None
    a1 = p.blocks[0][1]
    lcm = 1
    for _, a in p.blocks[1:]:
        if isinstance(a, (int, Fraction)) and isinstance(a1, (int, Fraction)):
            ratio = Fraction(a) / Fraction(a1)
        else:
            x = float(a) / float(a1)
            ratio = Fraction(x).limit_denominator(max_denominator)
            if abs(float(ratio) - x) > rtol * abs(x):
                return False, None
        lcm = math.lcm(lcm, ratio.denominator)
    return True, 2 * math.pi * lcm / abs(float(a1))


def arclength_parameters(curve, h: float, count: int, t0: float = 0.0) -> np.ndarray:
    """Parameters ``t_i`` with arclength ``i h`` from ``t0`` along ``curve``."""
    if getattr(curve, "unit_speed", False):
        return t0 + h * np.arange(count)
    ts = [t0]
    vmin = float(np.min(curve.speed(np.linspace(0, 2 * math.pi, 512))))
    for _ in range(count - 1):
        start = ts[-1]

        def gap(t, start=start):
            return integrate.quad(curve.speed, start, t, epsabs=1e-14, epsrel=1e-13)[0] - h

        ts.append(optimize.brentq(gap, start, start + 2 * h / vmin, xtol=1e-15, rtol=1e-15))
    return np.array(ts)


def sample_by_arclength(curve, h: float, count: int, t0: float = 0.0) -> np.ndarray:
    return curve.point(arclength_parameters(curve, h, count, t0))


def fit_chord_coefficients(curve: HelixParams, t0: float = 0.0, s_max: float | None = None,
                           degree: int = 32, n: int = 801, max_power: int = 10) -> np.ndarray:
    """Taylor coefficients of ``|gamma(t0 + s) - gamma(t0)|**2`` in ``s`` from samples.

    The squared chord is sampled at Chebyshev nodes on ``[-s_max, s_max]`` and
    fitted by a Chebyshev series, whose derivatives at ``s = 0`` give the
    coefficients.  Index ``k`` of the result is the coefficient of ``s**k`` for
    ``k <= max_power``.  A wide window (six radians of the fastest rotation)
    keeps the fit well conditioned in double precision.
    """
    if s_max is None:
        s_max = 6.0 / max(curve.max_angular_speed, 1e-12)
    x = np.cos(math.pi * (np.arange(n) + 0.5) / n)
    diff = curve.point(t0 + s_max * x) - curve.point(t0)
    g = np.einsum("ij,ij->i", diff, diff)
    series = np.polynomial.Chebyshev.fit(x, g, degree, domain=[-1, 1])
    out = np.empty(max_power + 1)
    for k in range(max_power + 1):
        out[k] = series(0.0) / math.factorial(k) / s_max**k
        series = series.deriv()
    return out
