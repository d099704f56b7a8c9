"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 a certified bound is violated,
4 refusal (not a degeneration, unstable family).
"""

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import io
from .complex_curves import (
    SamplingScheme,
    composition_residual,
    factor_through_line,
    log_diagram_residual,
    sample_amoeba,
)
from .errors import SchemaViolation, TropSpineError, TypeUnstable
from .geometry import Window
from .limits import is_degeneration, limit_of_family
from .limits.degenerations import MAX_LEAVES
from .plot import projections, svg_figure
from .spine import DEFAULT_ATOL, Spine, build_spine, certify, certify_curve
from .tropical import ON_IMAGE_TOL

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BOUND = 3
EXIT_REFUSED = 4

COMMANDS = ("spine", "check", "factor", "limit", "degenerations", "plot")


@dataclass
class JobConfig:
    command: str
    input: str
    output: str = None
    tropical: str = None
    scheme: SamplingScheme = field(default_factory=SamplingScheme)
    window: Window = None
    mesh_step: float = 0.05
    tolerance: float = None
    seed: int = 0
    strict: bool = False
    certify: bool = True
    bound: float = None
    curve_bound: float = None
    vertex_radius: float = None
    search_bound: int = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise SchemaViolation(f"unknown command {self.command!r}", "/command")
        if self.mesh_step <= 0:
            raise SchemaViolation("mesh step must be positive", "/mesh_step")
        if self.tolerance is not None and self.tolerance <= 0:
            raise SchemaViolation("tolerance must be positive", "/tolerance")


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise SchemaViolation(f"cannot read {path}: {e.strerror}", "/") from e
    except json.JSONDecodeError as e:
        raise SchemaViolation(f"{path} is not valid JSON: {e}", "/") from e


def _curve_of(data):
    if isinstance(data, dict) and "curve" in data and isinstance(data["curve"], dict):
        return io.parse_curve(data["curve"], "/curve")
    return io.parse_curve({k: v for k, v in data.items() if k != "type"})


def _eps(c):
    return {"exact": str(c), "value": c.value}


def spine_document(curve, sp, report=None):
    line_spine = sp if isinstance(sp, Spine) else sp.spine
    doc = {"type": "Spine", "input": io.to_dict(curve), "strict": line_spine.strict}
    if isinstance(sp, Spine):
        doc["kind"] = "line"
        doc["epsilon_exact"] = str(sp.epsilon)
        doc["epsilon"] = sp.epsilon.value
        doc["bounds"] = {
            "cloud_to_curve": _eps(sp.epsilon),
            "curve_to_cloud": _eps(sp.epsilon),
            "vertex_radius": _eps(sp.epsilon),
        }
    else:
        doc["kind"] = "general"
        doc["k"] = sp.k
        doc["norm"] = sp.norm
        doc["epsilon_k_exact"] = str(sp.spine.epsilon)
        doc["epsilon_prime_exact"] = str(sp.eps_prime)
        doc["epsilon_prime"] = sp.eps_prime.value
        doc["epsilon_exact"] = str(sp.eps)
        doc["epsilon"] = sp.eps.value
        doc["bounds"] = {
            "cloud_to_curve": _eps(sp.eps_prime),
            "curve_to_cloud": _eps(sp.eps),
            "vertex_radius": _eps(sp.eps_prime),
        }
        doc["line"] = io.to_dict(sp.spine.line)
        doc["line_spine"] = io.to_dict(sp.spine.gamma)
    doc["curve"] = io.to_dict(sp.curve)
    doc["levels"] = [
        {"level": m + 2, "p": [float(x) for x in lvl.p], "coordinate": lvl.coordinate + 1, "threshold": lvl.threshold}
        for m, lvl in enumerate(line_spine.levels)
    ]
    doc["boundary_hits"] = list(line_spine.boundary_hits)
    if report is not None:
        doc["certificate"] = report.to_dict()
    return doc


def cmd_spine(cfg):
    curve = _curve_of(_read_json(cfg.input))
    sp = build_spine(curve, cfg.strict, cfg.tolerance or ON_IMAGE_TOL)
    report = None
    if cfg.certify:
        cloud = sample_amoeba(curve, cfg.scheme)
        report = certify(sp, cloud, cfg.mesh_step, cfg.window, atol=cfg.tolerance or DEFAULT_ATOL)
    doc = spine_document(curve, sp, report)
    if report is not None and not report.passed:
        return doc, EXIT_BOUND
    return doc, EXIT_OK


def _tropical_of(data):
    """(TropicalCurve, bounds dict or None) from a spine document or a bare curve."""
    if data.get("type") == "Spine":
        tc = io.from_dict(data["curve"])
        b = data["bounds"]
        return tc, {k: b[k]["value"] for k in ("cloud_to_curve", "curve_to_cloud", "vertex_radius")}
    return io.from_dict(data), None


def cmd_check(cfg):
    curve = _curve_of(_read_json(cfg.input))
    if cfg.tropical is None:
        raise SchemaViolation("check needs --tropical", "/tropical")
    tc, bounds = _tropical_of(_read_json(cfg.tropical))
    if tc.n != curve.n:
        raise SchemaViolation("tropical curve and complex curve live in different dimensions", "/")
    bounds = dict(bounds or {})
    if cfg.bound is not None:
        bounds["cloud_to_curve"] = cfg.bound
    if cfg.curve_bound is not None:
        bounds["curve_to_cloud"] = cfg.curve_bound
    if cfg.vertex_radius is not None:
        bounds["vertex_radius"] = cfg.vertex_radius
    if "cloud_to_curve" not in bounds:
        raise SchemaViolation("a bare tropical curve needs --bound", "/bound")
    cloud = sample_amoeba(curve, cfg.scheme)
    report = certify_curve(
        tc,
        cloud,
        bounds["cloud_to_curve"],
        bounds.get("curve_to_cloud"),
        bounds.get("vertex_radius"),
        cfg.mesh_step,
        cfg.window,
        atol=cfg.tolerance or DEFAULT_ATOL,
    )
    doc = {"type": "CheckReport", **report.to_dict()}
    return doc, EXIT_OK if report.passed else EXIT_BOUND


def cmd_factor(cfg):
    curve = _curve_of(_read_json(cfg.input))
    line = factor_through_line(curve)
    tol = cfg.tolerance or 1e-9
    rng = np.random.default_rng(cfg.seed)
    z = rng.normal(size=64) + 1j * rng.normal(size=64)
    scale = max(1.0, float(np.abs(curve.punctures).max()))
    z = z * scale
    comp = composition_residual(curve, line, z)
    diag = log_diagram_residual(curve, line, z)
    doc = {
        "type": "Factorization",
        "input": io.to_dict(curve),
        "line": io.to_dict(line),
        "composition_residual": comp,
        "log_diagram_residual": diag,
        "tolerance": tol,
        "passed": comp <= tol and diag <= tol,
    }
    return doc, EXIT_OK if doc["passed"] else EXIT_BOUND


def _witness_doc(res):
    doc = {"found": res.found, "method": res.method, "examined": res.examined, "notes": list(res.notes)}
    if res.found:
        w = res.witness
        doc["witness"] = {
            "tree": io.to_dict(w.tree),
            "vertices": list(w.vertices),
            "vertex_degrees": [[list(v) for v in d.vectors] for d in w.degrees],
            "weights": {str(e): str(a) for e, a in sorted(w.weights.items())},
            "trivial": w.trivial,
        }
    return doc


def cmd_degenerations(cfg):
    data = _read_json(cfg.input)
    if not isinstance(data, dict) or "degree" not in data or "target" not in data:
        raise SchemaViolation("expected an object with 'degree' and 'target'", "/")
    degree = io.parse_degree(data["degree"], "/degree")
    target = data["target"]
    if not isinstance(target, list) or not target:
        raise SchemaViolation("target must be a nonempty list of degrees", "/target")
    if all(isinstance(x, list) and x and all(isinstance(c, int) for c in x) for x in target):
        target = [target]  # a single degree given directly
    tdegs = [io.parse_degree(t, f"/target/{i}") for i, t in enumerate(target)]
    for i, t in enumerate(tdegs):
        if t.n != degree.n:
            raise SchemaViolation("target degree lives in another dimension", f"/target/{i}")
    bound = cfg.search_bound if cfg.search_bound is not None else data.get("search_bound")
    res = is_degeneration(degree, tdegs, bound)
    doc = {
        "type": "DegenerationQuery",
        "degree": [list(v) for v in degree.vectors],
        "target": [[list(v) for v in t.vectors] for t in tdegs],
        **_witness_doc(res),
    }
    return doc, EXIT_OK if res.found else EXIT_REFUSED


def cmd_limit(cfg):
    data = _read_json(cfg.input)
    if not isinstance(data, dict) or "family" not in data or "t" not in data:
        raise SchemaViolation("expected an object with 'family' and 't'", "/")
    family = io.parse_family(data["family"], "/family")
    ts = data["t"]
    if not isinstance(ts, list) or not all(isinstance(t, (int, float)) for t in ts):
        raise SchemaViolation("t must be a list of numbers", "/t")
    window = cfg.window
    if window is None:
        if "window" not in data:
            raise SchemaViolation("a window is required", "/window")
        io.validate("Window", data["window"], "/window")
        window = Window(data["window"]["min"], data["window"]["max"])
    if len(window.lo) != family.degree.n:
        raise SchemaViolation("window dimension differs from the family", "/window")
    try:
        res = limit_of_family(family, ts, window)
    except TypeUnstable as e:
        return {"type": "LimitRefusal", "reason": str(e)}, EXIT_REFUSED
    doc = {
        "type": "Limit",
        "pieces": [
            {
                "index": p.index,
                "degree": [list(v) for v in p.degree.vectors],
                "moduli": io.to_dict(p.moduli),
                "curve": io.to_dict(p.curve),
                "marked_vertex": p.marked_vertex,
            }
            for p in res.pieces
        ],
        "datum": io.to_dict(res.datum),
        "ratios": {str(e): a for e, a in sorted(res.ratios.items())},
        "hausdorff": res.hausdorff,
        "hausdorff_error": res.hausdorff_error,
        "report": res.report,
    }
    if res.pieces and len(family.degree) <= MAX_LEAVES:
        doc["degeneration"] = _witness_doc(is_degeneration(family.degree, res.degrees))
    return doc, EXIT_OK


def cmd_plot(cfg):
    curve = _curve_of(_read_json(cfg.input))
    if cfg.tropical is not None:
        tc, bounds = _tropical_of(_read_json(cfg.tropical))
        radius = (bounds or {}).get("vertex_radius", cfg.vertex_radius or 0.0)
    else:
        sp = build_spine(curve, cfg.strict)
        tc, radius = sp.curve, sp.vertex_ball_radius
    cloud = sample_amoeba(curve, cfg.scheme)
    if curve.n == 2:
        return svg_figure(cloud.points, tc, radius), EXIT_OK
    if curve.n == 3:
        return projections(cloud.points, tc, radius), EXIT_OK
    raise SchemaViolation("plot supports n = 2 and n = 3", "/")


HANDLERS = {
    "spine": cmd_spine,
    "check": cmd_check,
    "factor": cmd_factor,
    "limit": cmd_limit,
    "degenerations": cmd_degenerations,
    "plot": cmd_plot,
}


def run(cfg):
    """Execute a job; returns ``(exit_code, text)`` and writes ``cfg.output`` if set."""
    try:
        result, code = HANDLERS[cfg.command](cfg)
    except SchemaViolation as e:
        return EXIT_INVALID, json.dumps({"error": str(e), "pointer": e.pointer}, indent=2) + "\n"
    except TropSpineError as e:
        return EXIT_INVALID, json.dumps({"error": str(e), "kind": type(e).__name__}, indent=2) + "\n"
    text = result if isinstance(result, str) else json.dumps(result, indent=2, allow_nan=False) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    return code, text


def _floats(s):
    return [float(x) for x in s.split(",")]


def build_parser():
    p = argparse.ArgumentParser(prog="tropspine", description=__doc__.strip().splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="input JSON file")
    p.add_argument("-o", "--output", help="write the result here instead of stdout")
    p.add_argument("--tropical", help="spine document or tropical curve JSON (check, plot)")
    p.add_argument(
        "--tolerance", type=float, help="replaces both the 1e-12 on-image and the 1e-9 comparison defaults"
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true", help="strict Case-1 threshold")
    p.add_argument("--no-certify", action="store_true")
    p.add_argument("--mesh-step", type=float, default=0.05)
    p.add_argument("--window-min", type=_floats)
    p.add_argument("--window-max", type=_floats)
    p.add_argument("--n-radii", type=int, default=64)
    p.add_argument("--n-angles", type=int, default=64)
    p.add_argument("--r-min", type=float, default=1e-6)
    p.add_argument("--r-max", type=float, default=1e6)
    p.add_argument("--infinity-radii", type=int, default=0)
    p.add_argument("--bound", type=float, help="cloud-to-curve bound for check")
    p.add_argument("--curve-bound", type=float, help="curve-to-cloud bound for check")
    p.add_argument("--vertex-radius", type=float)
    p.add_argument("--search-bound", type=int, help="max bounded edges in degeneration search")
    return p


def config_from_args(args):
    window = None
    if (args.window_min is None) != (args.window_max is None):
        raise SchemaViolation("give both --window-min and --window-max", "/window")
    if args.window_min is not None:
        try:
            window = Window(args.window_min, args.window_max)
        except TropSpineError as e:
            raise SchemaViolation(str(e), "/window") from e
    try:
        scheme = SamplingScheme(args.n_radii, args.n_angles, args.r_min, args.r_max, args.infinity_radii)
    except TropSpineError as e:
        raise SchemaViolation(str(e), "/scheme") from e
    return JobConfig(
        command=args.command,
        input=args.input,
        output=args.output,
        tropical=args.tropical,
        scheme=scheme,
        window=window,
        mesh_step=args.mesh_step,
        tolerance=args.tolerance,
        seed=args.seed,
        strict=args.strict,
        certify=not args.no_certify,
        bound=args.bound,
        curve_bound=args.curve_bound,
        vertex_radius=args.vertex_radius,
        search_bound=args.search_bound,
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except SchemaViolation as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INVALID
    code, text = run(cfg)
    if code == EXIT_INVALID:
        sys.stderr.write(text)
    elif not cfg.output:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
