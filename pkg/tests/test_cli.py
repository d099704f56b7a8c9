import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from generators import random_curve, random_degree, random_line
from tropspine.cli import EXIT_BOUND, EXIT_INVALID, EXIT_OK, EXIT_REFUSED, main
from tropspine.io import to_dict

HIRZ = [[0, -1]] * 4 + [[1, 2]] * 2 + [[-1, 0]] * 2


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spine_on_figure_line(tmp_path, capsys):
    src = write(tmp_path, "fig.json", {"punctures": [[0, 0], [-1, 0], [0, 2]]})
    code, out, _ = run_cli(["spine", src], capsys)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["epsilon_exact"] == "8*log2"
    assert doc["bounds"]["cloud_to_curve"]["exact"] == "8*log2"
    assert doc["certificate"]["passed"] is True


def test_check_translated_spine_fails(tmp_path, capsys):
    src = write(tmp_path, "zz1.json", {"punctures": [0, -1]})
    spine_path = str(tmp_path / "spine.json")
    assert main(["spine", src, "-o", spine_path]) == EXIT_OK
    code, _, _ = run_cli(["check", src, "--tropical", spine_path], capsys)
    assert code == EXIT_OK
    doc = json.loads(open(spine_path).read())
    doc["curve"]["base_position"] = [x + 10.0 for x in doc["curve"]["base_position"]]
    shifted = write(tmp_path, "shifted.json", doc)
    code, out, _ = run_cli(["check", src, "--tropical", shifted], capsys)
    assert code == EXIT_BOUND
    assert json.loads(out)["passed"] is False


def test_degenerations_exit_codes(tmp_path, capsys):
    neg = write(tmp_path, "neg.json", {"degree": HIRZ, "target": [[[0, -1]] * 4 + [[1, 2], [0, 1], [0, 1], [-1, 0]]]})
    code, out, _ = run_cli(["degenerations", neg], capsys)
    assert code == EXIT_REFUSED
    assert any("exhaustive" in n for n in json.loads(out)["notes"])
    pos = write(tmp_path, "pos.json", {"degree": HIRZ, "target": [[[0, -1]] * 4 + [[1, 2], [0, 2], [-1, 0]]]})
    code, _, _ = run_cli(["degenerations", pos], capsys)
    assert code == EXIT_OK


def test_invalid_input_reports_pointer(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {"degree": [[1, 0], [0]], "punctures": [0]})
    code, _, err = run_cli(["spine", bad], capsys)
    assert code == EXIT_INVALID
    assert json.loads(err)["pointer"] == "/degree/1"


def test_factor_and_limit(tmp_path, capsys):
    curve = {"degree": [[1, 1], [-2, 0], [1, -1]], "punctures": [0, 1], "coefficients": [2, [0, 1]]}
    code, out, _ = run_cli(["factor", write(tmp_path, "c.json", curve)], capsys)
    assert code == EXIT_OK and json.loads(out)
    fam = {
        "family": {"punctures": [{"c": 0}, {"c": -1, "a": 1}], "coefficients": [{"c": 1}, {"c": 1}]},
        "t": [100, 10000, 1000000],
        "window": {"min": [-3, -3], "max": [3, 3]},
    }
    code, out, _ = run_cli(["limit", write(tmp_path, "fam.json", fam)], capsys)
    assert code == EXIT_OK
    piece = json.loads(out)["pieces"][0]
    assert np.abs(np.array(piece["curve"]["base_position"]) - 1).max() <= 0.05


def test_outputs_are_byte_identical(tmp_path):
    src = write(tmp_path, "fig.json", {"punctures": [[0, 0], [-1, 0], [0, 2]]})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["spine", src, "-o", str(a), "--seed", "7"]) == EXIT_OK
    assert main(["spine", src, "-o", str(b), "--seed", "7"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_plot_svg_and_projections(tmp_path):
    plane = write(tmp_path, "zz1.json", {"punctures": [0, -1]})
    outs = []
    for name in ("p1.svg", "p2.svg"):
        path = tmp_path / name
        assert main(["plot", plane, "-o", str(path), "--n-radii", "16", "--n-angles", "16"]) == EXIT_OK
        outs.append(ET.fromstring(path.read_text()))
    for root in outs:
        groups = {g.get("id"): g for g in root}
        assert list(groups) == ["cloud", "vertex-balls", "curve"]
        assert len(groups["cloud"]) == 2 * 16 * 16
        assert len(groups["curve"]) == 3
    assert [len(g) for g in outs[0]] == [len(g) for g in outs[1]]
    space = write(tmp_path, "fig.json", {"punctures": [[0, 0], [-1, 0], [0, 2]]})
    proj = tmp_path / "proj.json"
    assert main(["plot", space, "-o", str(proj), "--n-radii", "8", "--n-angles", "8"]) == EXIT_OK
    doc = json.loads(proj.read_text())
    assert [p["pair"] for p in doc["projections"]] == [[0, 1], [0, 2], [1, 2]]


def test_every_spine_output_passes_check(tmp_path, capsys):
    rng = np.random.default_rng(61)
    curves = [random_line(rng, 2), random_line(rng, 3)] + [random_curve(rng, random_degree(rng, max_k=4)) for _ in range(4)]
    for i, curve in enumerate(curves):
        src = write(tmp_path, f"c{i}.json", to_dict(curve))
        spine_path = str(tmp_path / f"s{i}.json")
        assert main(["spine", src, "-o", spine_path]) == EXIT_OK
        code, _, _ = run_cli(["check", src, "--tropical", spine_path], capsys)
        assert code == EXIT_OK


def test_module_entry_point(tmp_path):
    src = write(tmp_path, "zz1.json", {"punctures": [0, -1]})
    proc = subprocess.run([sys.executable, "-m", "tropspine", "spine", src], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["epsilon_exact"] == "2*log2"


@pytest.mark.parametrize("tol", ["1e-6", "1e-12"])
def test_tolerance_flag(tmp_path, capsys, tol):
    src = write(tmp_path, "zz1.json", {"punctures": [0, -1]})
    code, out, _ = run_cli(["spine", src, "--tolerance", tol], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["certificate"]["atol"] == float(tol)
