"""Command-line front end.

Every subcommand reads a JSON config (``--config``), writes JSON/CSV artifacts
into ``--out`` and prints a short table.  ``check-uniform`` exits 0 (uniform to
tolerance), 1 (non-uniform) or 2 (unresolved); invalid input exits 3.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from . import curves, measure, series, symcurv

CSV_VERSION = 1
EXIT_UNIFORM, EXIT_NONUNIFORM, EXIT_UNRESOLVED, EXIT_INVALID = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


def _from_dict(cls, d: dict):
    if not isinstance(d, dict):
        raise ConfigError(f"{cls.__name__}: expected a JSON object")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(d) - names
    if unknown:
        raise ConfigError(f"{cls.__name__}: unknown fields {sorted(unknown)}")
    try:
        obj = cls(**d)
    except TypeError as exc:
        raise ConfigError(f"{cls.__name__}: {exc}") from None
    obj.validate()
    return obj


class _Config:
    @classmethod
    def from_dict(cls, d: dict):
        return _from_dict(cls, d)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def validate(self) -> None:
        pass


@dataclass
class ExpandFConfig(_Config):
    C: list | None = None
    curvatures: list | None = None
    order: int = series.DEFAULT_ORDER

    def validate(self):
        if (self.C is None) == (self.curvatures is None):
            raise ConfigError("expand-f: give exactly one of 'C' or 'curvatures'")
        try:
            if self.C is not None:
                series.squared_distance_series([Fraction(str(c)) for c in self.C])
            else:
                [Fraction(str(k)) for k in self.curvatures]
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"expand-f: {exc}") from None
        if self.curvatures is not None and not 3 <= self.order <= 16:
            raise ConfigError("expand-f: order must lie in 3..16")


@dataclass
class CPolyConfig(_Config):
    k: int = 4
    dim: int = 3
    constant_up_to: int = 0

    def validate(self):
        if self.k < 2 or self.dim < 2 or self.constant_up_to < 0:
            raise ConfigError("c-poly: need k >= 2, dim >= 2, constant_up_to >= 0")


GEN_FAMILIES = ("lebesgue", "lattice", "double_lattice", "ngon", "double_ngon", "prop3d",
                "helix", "curvatures", "ellipse", "parallel_lines", "axial_translates")


@dataclass
class GenConfig(_Config):
    family: str = "lattice"
    params: dict = field(default_factory=dict)

    def validate(self):
        if self.family not in GEN_FAMILIES:
            raise ConfigError(f"gen: unknown family {self.family!r}; choose from {', '.join(GEN_FAMILIES)}")


@dataclass
class CheckUniformConfig(_Config):
    support: dict = field(default_factory=dict)
    radii: Any = None
    basepoints: int = measure.DEFAULT_BASEPOINTS
    tol: float = measure.DEFAULT_TOL

    def validate(self):
        if self.basepoints < 2:
            raise ConfigError("check-uniform: basepoints must be at least 2")
        if not self.tol > 0:
            raise ConfigError("check-uniform: tol must be positive")
        radius_grid(self.radii, 24)


@dataclass
class ClassifyConfig(_Config):
    samples: str = ""
    tol: float = 1e-3

    def validate(self):
        if not self.samples:
            raise ConfigError("classify: 'samples' (CSV path) is required")
        if not self.tol > 0:
            raise ConfigError("classify: tol must be positive")


@dataclass
class FrenetConfig(_Config):
    curvatures: list = field(default_factory=list)
    s_end: float = 1.0
    steps: int | None = None

    def validate(self):
        if not self.curvatures:
            raise ConfigError("frenet-integrate: 'curvatures' must be non-empty")
        if self.steps is not None and self.steps < 1:
            raise ConfigError("frenet-integrate: steps must be >= 1")


def radius_grid(spec, mesh: int) -> np.ndarray:
    """Radii from an explicit list or ``{"min", "max", "count"}`` (count defaults to ``mesh``)."""
    if spec is None:
        raise ConfigError("radii are required")
    if isinstance(spec, dict):
        if set(spec) - {"min", "max", "count"}:
            raise ConfigError(f"radii: unknown fields {sorted(set(spec) - {'min', 'max', 'count'})}")
        lo, hi = float(spec["min"]), float(spec["max"])
        n = int(spec.get("count", mesh))
        if not 0 < lo <= hi or n < 1:
            raise ConfigError("radii: need 0 < min <= max and count >= 1")
        return np.linspace(lo, hi, n)
    radii = np.asarray(spec, dtype=float)
    if radii.ndim != 1 or len(radii) == 0 or np.any(radii <= 0):
        raise ConfigError("radii must be a non-empty list of positive numbers")
    return radii


# --- output helpers ------------------------------------------------------


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_csv(path: Path, kind: str, header: list[str], rows) -> None:
    buf = io.StringIO()
    buf.write(f"# unimeasure {kind} v{CSV_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    path.write_text(buf.getvalue())


def read_csv(path: Path) -> tuple[list[str], np.ndarray]:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    rows = list(csv.reader(lines))
    header, body = rows[0], rows[1:]
    return header, np.array([[float(v) for v in r] for r in body])


class Context:
    def __init__(self, args):
        self.out = Path(args.out) if args.out else None
        self.tol = args.tol
        self.seed = args.seed
        self.mesh = args.mesh
        self.stdout = sys.stdout
        if self.out:
            self.out.mkdir(parents=True, exist_ok=True)

    def emit(self, name: str, text: str) -> None:
        if self.out:
            (self.out / name).write_text(text)

    def print(self, *a) -> None:
        print(*a, file=self.stdout)


# --- commands ------------------------------------------------------------


def c_series_from_curvatures(kappas, order: int) -> series.TruncatedSeries:
    ks = [Fraction(str(k)) for k in kappas]
    n = len(ks) + 1
    coeffs = [Fraction(0), Fraction(0)] + [symcurv.C_coefficient(k, n).evaluate(ks) for k in range(2, order + 1)]
    return series.TruncatedSeries(coeffs)


def cmd_expand_f(cfg: ExpandFConfig, ctx: Context) -> dict:
    if cfg.C is not None:
        G = series.TruncatedSeries.from_strings(cfg.C)
    else:
        G = c_series_from_curvatures(cfg.curvatures, cfg.order)
    fp = series.solve_branch(G, 1)
    fm = series.solve_branch(G, -1)
    f = fp - fm
    report = {
        "C": G.to_strings(),
        "f_plus": fp.to_strings(),
        "f_minus": fm.to_strings(),
        "f": f.to_strings(),
    }
    ctx.emit("expand_f.json", dump_json(report))
    ctx.print(f"{'k':>3}  {'C_k':>14}  {'f_+':>14}  {'f_-':>14}  {'f':>14}")
    for k in range(G.order + 1):
        cells = [G[k]] + [s[k] if k <= s.order else "" for s in (fp, fm, f)]
        ctx.print(f"{k:>3}  " + "  ".join(f"{str(c):>14}" for c in cells))
    ctx.print("f(r) =", f.pretty("r"))
    return report


def cmd_c_poly(cfg: CPolyConfig, ctx: Context) -> dict:
    p = symcurv.C_coefficient(cfg.k, cfg.dim)
    if cfg.constant_up_to:
        p = symcurv.specialize_constant(p, cfg.constant_up_to)
    report = {"k": cfg.k, "dim": cfg.dim, "constant_up_to": cfg.constant_up_to,
              "monomials": p.to_json_obj(), "text": p.to_lines()}
    ctx.emit("c_poly.json", dump_json(report))
    for line in p.to_lines():
        ctx.print(line)
    return report


def _need(params: dict, *names):
    missing = [n for n in names if n not in params]
    if missing:
        raise ConfigError(f"gen: missing parameters {missing}")
    return [params[n] for n in names]


def build_support(cfg: GenConfig) -> measure.SupportSpec:
    p = cfg.params
    fam = cfg.family
    if fam == "lebesgue":
        return measure.gen_line_measure("lebesgue")
    if fam == "lattice":
        return measure.gen_line_measure("lattice", float(p.get("a", 1.0)))
    if fam == "double_lattice":
        a, b = _need(p, "a", "b")
        return measure.gen_line_measure("double_lattice", float(a), float(b))
    if fam == "ngon":
        n, R = _need(p, "n", "R")
        return measure.gen_ngon(int(n), float(R))
    if fam == "double_ngon":
        n, R, off = _need(p, "n", "R", "offset")
        return measure.gen_ngon(int(n), float(R), float(off))
    if fam == "prop3d":
        r1, alpha, b, n, a = _need(p, "r1", "alpha", "b", "n", "a")
        return measure.gen_prop3d(float(r1), float(alpha), float(b), int(n), float(a))
    if fam == "helix":
        return measure.CurveUnion(curves.HelixParams.from_dict({"type": "helix", **p}))
    if fam == "curvatures":
        (ks,) = _need(p, "kappas")
        return measure.CurveUnion(curves.curvatures_to_helix([float(k) for k in ks]))
    if fam == "ellipse":
        return measure.ellipse_support(float(p.get("a", 1.0)), float(p.get("b", 2.0)))
    if fam == "parallel_lines":
        return measure.parallel_lines(float(_need(p, "delta")[0]))
    if fam == "axial_translates":
        base, shifts = _need(p, "helix", "shifts")
        return measure.axial_translates(curves.HelixParams.from_dict({"type": "helix", **base}),
                                        [float(s) for s in shifts])
    raise ConfigError(f"gen: unknown family {fam!r}")


def cmd_gen(cfg: GenConfig, ctx: Context) -> dict:
    spec = build_support(cfg)
    doc = spec.to_dict()
    ctx.emit("support.json", dump_json(doc))
    ctx.print(dump_json(doc).rstrip())
    return doc


def cmd_check_uniform(cfg: CheckUniformConfig, ctx: Context) -> tuple[int, dict]:
    spec = measure.support_from_dict(cfg.support)
    measure.validate_support(spec)
    radii = radius_grid(cfg.radii, ctx.mesh)
    tol = ctx.tol if ctx.tol is not None else cfg.tol
    try:
        rep = measure.uniformity_scan(spec, radii, cfg.basepoints, tol, seed=ctx.seed, strict=True)
    except measure.TangencyUnresolved as exc:
        doc = {"verdict": "unresolved", "reason": str(exc), "seed": ctx.seed}
        ctx.emit("uniformity.json", dump_json(doc))
        ctx.print("unresolved:", exc)
        return EXIT_UNRESOLVED, doc
    doc = rep.to_dict()
    ctx.emit("uniformity.json", dump_json(doc))
    if ctx.out:
        write_csv(ctx.out / "uniformity.csv", "uniformity", ["r", "mean_f", "max_dev"], rep.csv_rows())
    ctx.print(f"{'r':>12}  {'mean_f':>18}  {'max_dev':>10}")
    for r, m, d in rep.csv_rows():
        ctx.print(f"{r:>12.6g}  {m:>18.12g}  {d:>10.3g}")
    tail = "" if rep.uniform else f" (first failure at r={rep.first_failure:.6g})"
    ctx.print(f"verdict: {rep.verdict}{tail}")
    return (EXIT_UNIFORM if rep.uniform else EXIT_NONUNIFORM), doc


def classify_samples(pts: np.ndarray, h: float, tol: float) -> dict:
    est = curves.estimate_curvatures(pts, h)
    ks = est.kappas
    d = pts.shape[1]
    record: dict = {"dim": d, "spacing": h, "windows": len(est)}
    if est.degenerate.any() and not est.degenerate.all():
        i = int(np.argmax(est.degenerate != est.degenerate[0]))
        record.update(constant=False, failing_index=None, failing_s=float(est.s[i]),
                      message=f"degeneracy changes at s~{est.s[i]:.6g}")
        return record
    ref = ks[0]
    for j in range(ks.shape[1]):
        bad = np.nonzero(np.abs(ks[:, j] - ref[j]) > tol * max(1.0, abs(ref[j])))[0]
        if len(bad):
            i = int(bad[0])
            record.update(constant=False, failing_index=j + 1, failing_s=float(est.s[i]),
                          message=f"non-constant k{j + 1} at s~{est.s[i]:.6g}")
            return record
    kv = ks.mean(axis=0)
    small = np.abs(kv) <= tol
    kv[small] = 0.0
    # zeros past the first vanishing curvature mark a lower-dimensional span
    nz = np.nonzero(kv == 0)[0]
    if len(nz):
        kv[nz[0]:] = 0.0
    record["constant"] = True
    record["curvatures"] = kv.tolist()
    params = curves.curvatures_to_helix(kv, d)
    record["helix"] = params.to_dict()
    if not params.blocks:
        record["class"] = "line"
    elif params.b > 0:
        record["class"] = "generalized helix"
    else:
        ok, T = curves.is_toric_knot(params, max_denominator=100, rtol=tol)
        if len(params.blocks) == 1:
            record["class"] = "circle"
        else:
            record["class"] = "toric knot" if ok else "toric curve (not closed)"
        record["period"] = T
    return record


def cmd_classify(cfg: ClassifyConfig, ctx: Context) -> dict:
    header, data = read_csv(Path(cfg.samples))
    if header[0] != "s" or data.shape[1] < 3:
        raise ConfigError("classify: CSV needs columns s, x1, ..., xd")
    s = data[:, 0]
    steps = np.diff(s)
    h = float(steps.mean())
    if np.max(np.abs(steps - h)) > 1e-9 * max(1.0, abs(h)):
        raise ConfigError("classify: samples must be uniform in arclength")
    tol = ctx.tol if ctx.tol is not None else cfg.tol
    record = classify_samples(data[:, 1:], h, tol)
    ctx.emit("classify.json", dump_json(record))
    for key in sorted(record):
        ctx.print(f"{key}: {record[key]}")
    return record


def cmd_frenet(cfg: FrenetConfig, ctx: Context) -> list:
    steps = cfg.steps or ctx.mesh
    states = curves.integrate_frenet([float(k) for k in cfg.curvatures], float(cfg.s_end), steps)
    d = len(cfg.curvatures) + 1
    rows = [(st.s, *st.position.tolist()) for st in states]
    if ctx.out:
        write_csv(ctx.out / "trajectory.csv", "trajectory", ["s"] + [f"x{i + 1}" for i in range(d)], rows)
    end = states[-1]
    ctx.print(f"integrated {steps} steps to s={end.s:.6g}; end point {np.array2string(end.position, precision=10)}")
    return rows


def write_trajectory(path: Path, s: np.ndarray, pts: np.ndarray) -> None:
    d = pts.shape[1]
    write_csv(Path(path), "trajectory", ["s"] + [f"x{i + 1}" for i in range(d)],
              [(float(a), *map(float, p)) for a, p in zip(s, pts)])


# --- entry point ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config for the command")
    common.add_argument("--out", help="directory for JSON/CSV artifacts")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    common.add_argument("--seed", type=int, default=0, help="seed for basepoint jitter")
    common.add_argument("--mesh", type=int, default=1000, help="default grid/step count")
    parser = argparse.ArgumentParser(prog="unimeasure", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("expand-f", parents=[common], help="Taylor series of the ball-mass function f(r)")
    cp = sub.add_parser("c-poly", parents=[common], help="curvature polynomial of C_k")
    cp.add_argument("--k", type=int)
    cp.add_argument("--dim", type=int)
    cp.add_argument("--constant-up-to", type=int)
    sub.add_parser("gen", parents=[common], help="generate a support JSON for a classified family")
    sub.add_parser("check-uniform", parents=[common], help="scan mu(B(x,r)) across basepoints")
    sub.add_parser("classify", parents=[common], help="classify a sampled curve by its curvatures")
    sub.add_parser("frenet-integrate", parents=[common], help="integrate the Frenet equations")
    return parser


def _load_config(args) -> dict:
    if not args.config:
        return {}
    return json.loads(Path(args.config).read_text())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ctx = Context(args)
        raw = _load_config(args)
        if args.command == "expand-f":
            cmd_expand_f(ExpandFConfig.from_dict(raw), ctx)
        elif args.command == "c-poly":
            for name in ("k", "dim", "constant_up_to"):
                if getattr(args, name) is not None:
                    raw[name] = getattr(args, name)
            cmd_c_poly(CPolyConfig.from_dict(raw), ctx)
        elif args.command == "gen":
            cmd_gen(GenConfig.from_dict(raw), ctx)
        elif args.command == "check-uniform":
            code, _ = cmd_check_uniform(CheckUniformConfig.from_dict(raw), ctx)
            return code
        elif args.command == "classify":
            cmd_classify(ClassifyConfig.from_dict(raw), ctx)
        elif args.command == "frenet-integrate":
            cmd_frenet(FrenetConfig.from_dict(raw), ctx)
    except (ConfigError, measure.SupportValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except curves.DegenerateWindow as exc:
        print(f"error: degenerate window at sample {exc.index}: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    return 0


if __name__ == "__main__":
    sys.exit(main())
