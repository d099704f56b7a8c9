"""JSON serialisation of the domain types.

Every object becomes a dict with a ``"type"`` tag.  Floats are written with
``repr`` (shortest string that round-trips exactly), complex numbers as
``[re, im]`` and integers exactly.  Input is validated with jsonschema;
failures raise :class:`SchemaViolation` carrying a JSON pointer.
"""

import json
from fractions import Fraction

import jsonschema
import numpy as np

from .complex_curves import ComplexLine, ComplexRationalCurve, SamplingScheme
from .degrees import ToricDegree, line_degree, validate_degree
from .errors import SchemaViolation, TropSpineError
from .geometry import Window
from .limits.decorated import DecoratedTree, decorate
from .limits.family import DegenerationDatum, Family, Monomial, make_datum
from .spine import EpsilonConstant
from .tropical import CombinatorialTree, ModuliPoint, TropicalCurve

_INT = {"type": "integer"}
_NUM = {"type": "number"}
_VEC = {"type": "array", "items": _NUM}
_IVEC = {"type": "array", "items": _INT}
_COMPLEX = {"oneOf": [_NUM, {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}]}
_DEGREE = {"type": "array", "minItems": 2, "items": {"type": "array", "minItems": 1, "items": _INT}}
_TREE = {
    "type": "object",
    "required": ["n_vertices", "edges", "leaves"],
    "properties": {
        "n_vertices": {"type": "integer", "minimum": 1},
        "edges": {"type": "array", "items": {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2}},
        "leaves": _IVEC,
    },
}
_MONOMIAL = {
    "type": "object",
    "required": ["c"],
    "properties": {"c": _COMPLEX, "a": _NUM, "b": _NUM},
}

SCHEMAS = {
    "Monomial": _MONOMIAL,
    "ToricDegree": {"type": "object", "required": ["vectors"], "properties": {"vectors": _DEGREE}},
    "CombinatorialTree": _TREE,
    "ModuliPoint": {
        "type": "object",
        "required": ["degree", "tree", "base_vertex", "position", "lengths"],
        "properties": {
            "degree": _DEGREE,
            "tree": _TREE,
            "base_vertex": _INT,
            "position": _VEC,
            "lengths": {"type": "array", "items": {"type": "number", "minimum": 0}},
        },
    },
    "TropicalCurve": {
        "type": "object",
        "required": ["degree", "tree", "lengths", "edge_directions", "leaf_directions", "base_vertex", "base_position"],
        "properties": {
            "degree": _DEGREE,
            "tree": _TREE,
            "lengths": _VEC,
            "edge_directions": {"type": "array", "items": _IVEC},
            "leaf_directions": {"type": "array", "items": _IVEC},
            "base_vertex": _INT,
            "base_position": _VEC,
        },
    },
    "ComplexRationalCurve": {
        "type": "object",
        "required": ["punctures"],
        "properties": {
            "degree": _DEGREE,
            "punctures": {"type": "array", "items": _COMPLEX, "minItems": 1},
            "coefficients": {"type": "array", "items": _COMPLEX},
        },
    },
    "SamplingScheme": {
        "type": "object",
        "properties": {
            "n_radii": {"type": "integer", "minimum": 1},
            "n_angles": {"type": "integer", "minimum": 1},
            "r_min": {"type": "number", "exclusiveMinimum": 0},
            "r_max": {"type": "number", "exclusiveMinimum": 0},
            "n_infinity_radii": {"type": "integer", "minimum": 0},
        },
    },
    "Window": {"type": "object", "required": ["min", "max"], "properties": {"min": _VEC, "max": _VEC}},
    "EpsilonConstant": {
        "type": "object",
        "required": ["exact"],
        "properties": {"exact": {"type": "string", "pattern": "^-?[0-9]+\\*log2$"}, "value": _NUM},
    },
    "DecoratedTree": {
        "type": "object",
        "required": ["tree", "degree", "decorations"],
        "properties": {"tree": _TREE, "degree": _DEGREE, "decorations": {"type": "array", "items": _IVEC}},
    },
    "DegenerationDatum": {
        "type": "object",
        "required": ["degree", "tree", "infinity_edges", "inserted", "marked", "kept", "certificate"],
        "properties": {
            "degree": _DEGREE,
            "tree": _TREE,
            "infinity_edges": _IVEC,
            "inserted": _IVEC,
            "marked": _IVEC,
            "kept": _IVEC,
            "certificate": {
                "type": "object",
                "additionalProperties": {"type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$"},
            },
        },
    },
    "Family": {
        "type": "object",
        "required": ["punctures", "coefficients"],
        "properties": {
            "degree": _DEGREE,
            "punctures": {"type": "array", "items": _MONOMIAL},
            "coefficients": {"type": "array", "items": _MONOMIAL},
        },
    },
}


def _fail(err, prefix=""):
    pointer = prefix + "".join(f"/{p}" for p in err.absolute_path)
    raise SchemaViolation(f"{err.message} at {pointer or '/'}", pointer or "/")


def validate(kind, data, prefix=""):
    if kind not in SCHEMAS:
        raise SchemaViolation(f"unknown type {kind!r}", prefix + "/type")
    validator = jsonschema.Draft202012Validator(SCHEMAS[kind])
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        _fail(errors[0], prefix)


# ------------------------------------------------------------ encoders


def _c(z):
    z = complex(z)
    return [z.real, z.imag]


def _deg(d):
    return [list(v) for v in d.vectors]


def _tree(t):
    return {"n_vertices": t.n_vertices, "edges": [list(e) for e in t.edges], "leaves": list(t.leaves)}


def _floats(a):
    return [float(x) for x in np.asarray(a, dtype=np.float64).reshape(-1)]


def _ints(a):
    return [[int(x) for x in row] for row in np.asarray(a)]


def to_dict(obj):
    if isinstance(obj, ToricDegree):
        return {"type": "ToricDegree", "vectors": _deg(obj)}
    if isinstance(obj, CombinatorialTree):
        return {"type": "CombinatorialTree", **_tree(obj)}
    if isinstance(obj, ModuliPoint):
        return {
            "type": "ModuliPoint",
            "degree": _deg(obj.degree),
            "tree": _tree(obj.tree),
            "base_vertex": obj.base_vertex,
            "position": _floats(obj.position),
            "lengths": _floats(obj.lengths),
        }
    if isinstance(obj, TropicalCurve):
        return {
            "type": "TropicalCurve",
            "degree": _deg(obj.degree),
            "tree": _tree(obj.tree),
            "lengths": _floats(obj.lengths),
            "edge_directions": _ints(obj.edge_directions),
            "leaf_directions": _ints(obj.leaf_directions),
            "base_vertex": obj.base_vertex,
            "base_position": _floats(obj.base_position),
        }
    if isinstance(obj, ComplexRationalCurve):
        return {
            "type": "ComplexLine" if isinstance(obj, ComplexLine) else "ComplexRationalCurve",
            "degree": _deg(obj.degree),
            "punctures": [_c(z) for z in obj.punctures],
            "coefficients": [_c(z) for z in obj.coefficients],
        }
    if isinstance(obj, SamplingScheme):
        return {
            "type": "SamplingScheme",
            "n_radii": obj.n_radii,
            "n_angles": obj.n_angles,
            "r_min": float(obj.r_min),
            "r_max": float(obj.r_max),
            "n_infinity_radii": obj.n_infinity_radii,
        }
    if isinstance(obj, Window):
        return {"type": "Window", "min": _floats(obj.lo), "max": _floats(obj.hi)}
    if isinstance(obj, EpsilonConstant):
        return {"type": "EpsilonConstant", "exact": str(obj), "value": obj.value}
    if isinstance(obj, DecoratedTree):
        return {
            "type": "DecoratedTree",
            "tree": _tree(obj.tree),
            "degree": _deg(obj.degree),
            "decorations": _ints(obj.decorations),
        }
    if isinstance(obj, DegenerationDatum):
        return {
            "type": "DegenerationDatum",
            "degree": _deg(obj.degree),
            "tree": _tree(obj.tree),
            "infinity_edges": list(obj.infinity_edges),
            "inserted": list(obj.inserted),
            "marked": list(obj.marked),
            "kept": list(obj.kept),
            "certificate": {str(e): str(Fraction(a)) for e, a in sorted(obj.certificate.items())},
            "pieces": [_deg(p.degree) for p in obj.pieces],
            "trivial": obj.trivial,
        }
    if isinstance(obj, Monomial):
        return {"type": "Monomial", "c": _c(obj.c), "a": float(obj.a), "b": float(obj.b)}
    if isinstance(obj, Family):
        return {
            "type": "Family",
            "degree": _deg(obj.degree),
            "punctures": [to_dict(m) for m in obj.punctures],
            "coefficients": [to_dict(m) for m in obj.coefficients],
        }
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# ------------------------------------------------------------ decoders


def parse_complex(v):
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def parse_degree(vectors, pointer="/degree"):
    if not isinstance(vectors, list) or not vectors:
        raise SchemaViolation("degree must be a nonempty list of integer vectors", pointer)
    n = len(vectors[0]) if isinstance(vectors[0], list) else None
    for i, v in enumerate(vectors):
        if not isinstance(v, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in v):
            raise SchemaViolation(f"vector {i} must be a list of integers", f"{pointer}/{i}")
        if len(v) != n:
            raise SchemaViolation(f"vector {i} has length {len(v)}, expected {n}", f"{pointer}/{i}")
    try:
        return validate_degree(vectors)
    except TropSpineError as e:
        raise SchemaViolation(str(e), pointer) from e


def _parse_tree(d, pointer):
    try:
        return CombinatorialTree(d["n_vertices"], tuple(map(tuple, d["edges"])), tuple(d["leaves"]))
    except TropSpineError as e:
        raise SchemaViolation(str(e), pointer) from e


def parse_curve(d, pointer=""):
    """A complex curve; the degree defaults to a line when omitted."""
    validate("ComplexRationalCurve", d, pointer)
    alpha = [parse_complex(v) for v in d["punctures"]]
    if "degree" in d:
        degree = parse_degree(d["degree"], pointer + "/degree")
    else:
        degree = line_degree(len(alpha))
    kappa = [parse_complex(v) for v in d["coefficients"]] if "coefficients" in d else [1.0] * degree.n
    try:
        if degree == line_degree(degree.n):
            return ComplexLine(alpha, kappa)
        return ComplexRationalCurve(degree, alpha, kappa)
    except TropSpineError as e:
        raise SchemaViolation(str(e), pointer or "/") from e


def parse_monomial(d):
    return Monomial(parse_complex(d["c"]), float(d.get("a", 0.0)), float(d.get("b", 0.0)))


def parse_family(d, pointer=""):
    validate("Family", d, pointer)
    if "degree" in d:
        degree = parse_degree(d["degree"], pointer + "/degree")
    else:
        degree = line_degree(len(d["punctures"]))
    try:
        return Family(degree, tuple(map(parse_monomial, d["punctures"])), tuple(map(parse_monomial, d["coefficients"])))
    except TropSpineError as e:
        raise SchemaViolation(str(e), pointer or "/") from e


def from_dict(d):
    if not isinstance(d, dict) or "type" not in d:
        raise SchemaViolation("object must carry a 'type' tag", "/type")
    kind = d["type"]
    if kind in ("ComplexLine", "ComplexRationalCurve"):
        return parse_curve(d)
    if kind == "Family":
        return parse_family(d)
    if kind == "Monomial":
        validate(kind, d)
        return parse_monomial(d)
    validate(kind, d)
    if kind == "ToricDegree":
        return parse_degree(d["vectors"], "/vectors")
    if kind == "CombinatorialTree":
        return _parse_tree(d, "/")
    if kind == "ModuliPoint":
        degree = parse_degree(d["degree"])
        try:
            return ModuliPoint(degree, _parse_tree(d["tree"], "/tree"), d["base_vertex"], d["position"], d["lengths"])
        except TropSpineError as e:
            raise SchemaViolation(str(e), "/") from e
    if kind == "TropicalCurve":
        degree = parse_degree(d["degree"])
        tree = _parse_tree(d["tree"], "/tree")
        try:
            return TropicalCurve(
                degree,
                tree,
                np.array(d["lengths"], dtype=np.float64),
                np.array(d["edge_directions"], dtype=np.int64).reshape(-1, degree.n),
                np.array(d["leaf_directions"], dtype=np.int64).reshape(-1, degree.n),
                d["base_vertex"],
                np.array(d["base_position"], dtype=np.float64),
            )
        except (TropSpineError, ValueError) as e:
            raise SchemaViolation(str(e), "/") from e
    if kind == "SamplingScheme":
        try:
            return SamplingScheme(**{k: v for k, v in d.items() if k != "type"})
        except TropSpineError as e:
            raise SchemaViolation(str(e), "/") from e
    if kind == "Window":
        try:
            return Window(d["min"], d["max"])
        except TropSpineError as e:
            raise SchemaViolation(str(e), "/") from e
    if kind == "EpsilonConstant":
        return EpsilonConstant(int(d["exact"].split("*")[0]))
    if kind == "DecoratedTree":
        degree = parse_degree(d["degree"])
        tree = _parse_tree(d["tree"], "/tree")
        dt = decorate(tree, degree)
        if _ints(dt.decorations) != [list(map(int, r)) for r in d["decorations"]]:
            raise SchemaViolation("decorations do not match the tree and degree", "/decorations")
        return dt
    if kind == "DegenerationDatum":
        degree = parse_degree(d["degree"])
        tree = _parse_tree(d["tree"], "/tree")
        cert = {int(e): Fraction(a) for e, a in d["certificate"].items()}
        try:
            return make_datum(degree, tree, d["infinity_edges"], d["inserted"], d["marked"], d["kept"], cert)
        except TropSpineError as e:
            raise SchemaViolation(str(e), "/") from e
    raise SchemaViolation(f"unknown type {kind!r}", "/type")  # pragma: no cover


def dumps(obj, **kwargs):
    data = obj if isinstance(obj, dict) else to_dict(obj)
    return json.dumps(data, allow_nan=False, **kwargs)


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaViolation(f"invalid JSON: {e}", "/") from e
    return from_dict(data)
