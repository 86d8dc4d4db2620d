"""Scene files: the JSON format consumed and produced by the CLI.

A scene bundles a focal set, levels, a regular polygon, a parametric curve
spec and experiment parameters.  Parsing is strict: unknown fields are
rejected with a message naming them, and every numeric field must be finite.
Serialization formats floats with 17 significant digits (round-trip exact for
doubles) and sorts object keys, so identical scenes produce identical bytes.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .conic import ParamCurve, circle_curve, polyline_curve, segment_curve, sine_wave_curve
from .errors import SceneError
from .focal import WeightedFocalSet
from .hausdorff import RegularPolygonRep

SCENE_VERSION = 1

_TOP_KEYS = {"version", "focal_set", "levels", "level", "polygon", "curve", "params"}
_FOCAL_KEYS = {"points", "weights"}
_POLYGON_KEYS = {"p", "center", "circumradius", "phase"}
_PARAM_KEYS = {"n_rays", "root_tol", "quad_tol", "sub_tol", "seed", "m_list", "instances", "eps"}
_CURVE_KINDS = {
    "circle": {"kind", "center", "radius"},
    "segment": {"kind", "start", "end"},
    "sine_wave": {"kind"},
    "polyline": {"kind", "vertices"},
}


@dataclass
class SceneParams:
    n_rays: int = 512
    root_tol: float = 1e-12
    quad_tol: float = 1e-10
    sub_tol: float | None = None
    seed: int = 0
    m_list: list = field(default_factory=lambda: [8, 16, 32, 64])
    instances: int = 200
    eps: float = 1e-3


@dataclass
class Scene:
    version: int = SCENE_VERSION
    focal_set: WeightedFocalSet | None = None
    levels: list = field(default_factory=list)
    polygon: RegularPolygonRep | None = None
    curve_spec: dict | None = None
    params: SceneParams = field(default_factory=SceneParams)

    def build_curve(self) -> ParamCurve:
        if self.curve_spec is None:
            raise SceneError("scene has no curve")
        return build_curve(self.curve_spec)


def _fail(msg: str):
    raise SceneError(msg)


def _check_keys(obj: dict, allowed: set, where: str):
    unknown = sorted(set(obj) - allowed)
    if unknown:
        _fail(f"unknown field(s) in {where}: {', '.join(unknown)}")


def _finite(x, where: str) -> float:
    try:
        v = float(x)
    except (TypeError, ValueError):
        _fail(f"{where} must be a number, got {x!r}")
    if not math.isfinite(v):
        _fail(f"{where} must be finite, got {x!r}")
    return v


def _point(x, where: str):
    if not isinstance(x, (list, tuple)) or len(x) != 2:
        _fail(f"{where} must be a [x, y] pair")
    return [_finite(x[0], where), _finite(x[1], where)]


def build_curve(spec: dict) -> ParamCurve:
    if not isinstance(spec, dict) or "kind" not in spec:
        _fail("curve spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind not in _CURVE_KINDS:
        _fail(f"unknown curve kind {kind!r}; expected one of {sorted(_CURVE_KINDS)}")
    _check_keys(spec, _CURVE_KINDS[kind], f"curve ({kind})")
    if kind == "circle":
        center = _point(spec.get("center", [0.0, 0.0]), "curve.center")
        radius = _finite(spec.get("radius", 1.0), "curve.radius")
        return circle_curve(center, radius)
    if kind == "segment":
        if "start" not in spec or "end" not in spec:
            _fail("segment curve needs 'start' and 'end'")
        return segment_curve(_point(spec["start"], "curve.start"), _point(spec["end"], "curve.end"))
    if kind == "sine_wave":
        return sine_wave_curve()
    verts = spec.get("vertices")
    if not isinstance(verts, list) or len(verts) < 2:
        _fail("polyline curve needs a 'vertices' list of at least 2 points")
    return polyline_curve([_point(v, "curve.vertices") for v in verts])


def parse_scene(data: dict) -> Scene:
    if not isinstance(data, dict):
        _fail("scene must be a JSON object")
    _check_keys(data, _TOP_KEYS, "scene")
    if data.get("version") != SCENE_VERSION:
        _fail(f"scene version must be {SCENE_VERSION}, got {data.get('version')!r}")

    scene = Scene()
    if "focal_set" in data:
        fsd = data["focal_set"]
        if not isinstance(fsd, dict):
            _fail("focal_set must be an object")
        _check_keys(fsd, _FOCAL_KEYS, "focal_set")
        pts = fsd.get("points")
        if not isinstance(pts, list) or not pts:
            _fail("focal_set.points must be a non-empty list of [x, y] pairs")
        points = np.array([_point(p, "focal_set.points") for p in pts])
        weights = None
        if "weights" in fsd:
            wl = fsd["weights"]
            if not isinstance(wl, list) or len(wl) != len(pts):
                _fail("focal_set.weights must match points in length")
            weights = np.array([_finite(w, "focal_set.weights") for w in wl])
            if (weights <= 0).any():
                _fail("focal_set.weights must be positive")
        scene.focal_set = WeightedFocalSet(points, weights)

    if "level" in data and "levels" in data:
        _fail("give either 'level' or 'levels', not both")
    if "level" in data:
        scene.levels = [_finite(data["level"], "level")]
    elif "levels" in data:
        if not isinstance(data["levels"], list):
            _fail("levels must be a list")
        scene.levels = [_finite(c, "levels") for c in data["levels"]]

    if "polygon" in data:
        pd = data["polygon"]
        if not isinstance(pd, dict):
            _fail("polygon must be an object")
        _check_keys(pd, _POLYGON_KEYS, "polygon")
        if "p" not in pd:
            _fail("polygon needs 'p'")
        p = pd["p"]
        if not isinstance(p, int) or p < 3:
            _fail("polygon.p must be an integer >= 3")
        scene.polygon = RegularPolygonRep(
            p=p,
            center=tuple(_point(pd.get("center", [0.0, 0.0]), "polygon.center")),
            circumradius=_finite(pd.get("circumradius", 1.0), "polygon.circumradius"),
            phase=_finite(pd.get("phase", 0.0), "polygon.phase"),
        )
        if scene.polygon.circumradius <= 0:
            _fail("polygon.circumradius must be positive")

    if "curve" in data:
        spec = data["curve"]
        build_curve(spec)  # validate eagerly
        scene.curve_spec = spec

    if "params" in data:
        prm = data["params"]
        if not isinstance(prm, dict):
            _fail("params must be an object")
        _check_keys(prm, _PARAM_KEYS, "params")
        sp = SceneParams()
        if "n_rays" in prm:
            if not isinstance(prm["n_rays"], int) or prm["n_rays"] < 8:
                _fail("params.n_rays must be an integer >= 8")
            sp.n_rays = prm["n_rays"]
        for name in ("root_tol", "quad_tol", "eps"):
            if name in prm:
                v = _finite(prm[name], f"params.{name}")
                if v <= 0:
                    _fail(f"params.{name} must be positive")
                setattr(sp, name, v)
        if "sub_tol" in prm:
            v = _finite(prm["sub_tol"], "params.sub_tol")
            if v <= 0:
                _fail("params.sub_tol must be positive")
            sp.sub_tol = v
        if "seed" in prm:
            if not isinstance(prm["seed"], int) or prm["seed"] < 0:
                _fail("params.seed must be a nonnegative integer")
            sp.seed = prm["seed"]
        if "instances" in prm:
            if not isinstance(prm["instances"], int) or prm["instances"] < 0:
                _fail("params.instances must be a nonnegative integer")
            sp.instances = prm["instances"]
        if "m_list" in prm:
            ml = prm["m_list"]
            if not isinstance(ml, list) or not all(isinstance(m, int) and m >= 1 for m in ml):
                _fail("params.m_list must be a list of integers >= 1")
            sp.m_list = ml
        scene.params = sp
    return scene


def load_scene(path: str) -> Scene:
    import json

    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        _fail(f"scene file not found: {path}")
    except json.JSONDecodeError as exc:
        _fail(f"scene file is not valid JSON: {exc}")
    return parse_scene(data)


def scene_to_dict(scene: Scene) -> dict:
    out: dict = {"version": scene.version}
    if scene.focal_set is not None:
        out["focal_set"] = {
            "points": [[float(x), float(y)] for x, y in scene.focal_set.points],
            "weights": [float(w) for w in scene.focal_set.weights],
        }
    if scene.levels:
        out["levels"] = [float(c) for c in scene.levels]
    if scene.polygon is not None:
        out["polygon"] = {
            "p": scene.polygon.p,
            "center": [scene.polygon.center[0], scene.polygon.center[1]],
            "circumradius": float(scene.polygon.circumradius),
            "phase": float(scene.polygon.phase),
        }
    if scene.curve_spec is not None:
        out["curve"] = scene.curve_spec
    return out


# ---------------------------------------------------------------------------
# deterministic serialization

def format_float(x: float) -> str:
    """17 significant digits; always keeps a float marker for round-tripping."""
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            raise ValueError("cannot serialize non-finite numbers")
        s = f"{x:.17g}"
        if "." not in s and "e" not in s and "E" not in s:
            s += ".0"
        return s
    return repr(x)


def to_json(obj, indent: int = 0) -> str:
    """JSON with sorted keys and 17-significant-digit floats."""
    pad = "  " * indent
    pad_in = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [to_json(v, indent + 1) for v in obj]
        if all(len(s) < 24 and "\n" not in s for s in items) and len(items) <= 8:
            return "[" + ", ".join(items) + "]"
        return "[\n" + ",\n".join(pad_in + s for s in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = []
        for k in sorted(obj):
            parts.append(f'{pad_in}"{k}": ' + to_json(obj[k], indent + 1))
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def write_text_atomic(path: str, text: str):
    """Write via a temp file in the same directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_atomic(path: str, obj):
    write_text_atomic(path, to_json(obj) + "\n")


def write_csv_atomic(path: str, header: list[str], rows):
    """CSV with LF endings and 17-significant-digit floats."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, (bool, np.bool_)):
                cells.append("true" if v else "false")
            elif isinstance(v, (float, np.floating)):
                cells.append("nan" if math.isnan(v) else format_float(float(v)))
            elif isinstance(v, (int, np.integer)):
                cells.append(str(int(v)))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    write_text_atomic(path, "\n".join(lines) + "\n")
