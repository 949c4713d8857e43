import json

import numpy as np
import pytest

from app.core.serialization import format_float
from app.main import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParser:
    def test_shared_flags(self):
        args = build_parser().parse_args(["verify", "--space", "sphere:2", "--lambda", "-0.25", "--seed", "4"])
        assert args.space_spec == "sphere:2"
        assert args.lambdas == [-0.25]
        assert args.seed == 4
        assert args.output_format == "text"

    def test_unknown_flag(self, capsys):
        code, _, err = run(capsys, "verify", "--bogus")
        assert code == 2
        assert "unrecognized arguments" in err

    def test_missing_command(self, capsys):
        code, _, _ = run(capsys)
        assert code == 2


class TestList:
    def test_text(self, capsys):
        code, out, _ = run(capsys, "list")
        assert code == 0
        assert "sphere(n): lambda default -1/(2(n-1))" in out
        assert "sl_so(n): lambda default 1/(4n)" in out
        assert out.count("\n") == 5

    def test_json(self, capsys):
        code, out, _ = run(capsys, "list", "--format", "json")
        assert code == 0
        entries = json.loads(out)
        assert [e["kind"] for e in entries] == ["sphere", "hyperbolic2", "hyperbolic", "sl_so", "euclidean"]
        sl_so = entries[3]
        assert sl_so["example"]["space"] == "sl_so(3)"
        assert sl_so["example"]["signature"] == [5, 3]


class TestVerify:
    def test_sphere_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--space", "sphere:2", "--samples", "5")
        assert code == 0
        assert out.startswith("space: sphere(2)")
        assert out.rstrip().endswith("overall: pass")

    def test_json_is_reproducible(self, capsys):
        argv = ("verify", "--space", "hyperbolic2", "--samples", "5", "--seed", "11", "--format", "json")
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second
        report = json.loads(first)
        assert report["pass"] is True
        assert report["config"]["seed"] == 11

    def test_text_and_json_agree(self, capsys):
        argv = ("verify", "--space", "sphere:2", "--samples", "5")
        _, text, _ = run(capsys, *argv)
        _, as_json, _ = run(capsys, *argv, "--format", "json")
        from_text = {}
        for line in text.splitlines()[1:-1]:
            status, name, _, residual = line.split()[:4]
            from_text[name] = (status == "pass", residual)
        from_json = {c["name"]: (c["pass"], format_float(c["max_residual"])) for c in json.loads(as_json)["checks"]}
        assert from_text == from_json

    def test_lambda_with_catalog(self, capsys):
        code, out, err = run(capsys, "verify", "--space", "catalog", "--lambda", "-0.25")
        assert code == 2
        assert out == ""
        assert "catalog" in err

    def test_wrong_lambda_sign(self, capsys):
        code, _, err = run(capsys, "verify", "--space", "sphere:2", "--lambda", "0.5")
        assert code == 2
        assert "compact" in err

    def test_too_many_lambdas(self, capsys):
        code, _, _ = run(capsys, "verify", "--space", "sphere:2", "--lambda", "-0.5", "--lambda", "-0.5")
        assert code == 2

    def test_missing_space(self, capsys):
        code, _, err = run(capsys, "verify")
        assert code == 2
        assert "--space is required" in err

    def test_unknown_space(self, capsys):
        code, _, _ = run(capsys, "verify", "--space", "torus:2")
        assert code == 2

    def test_bad_tolerance(self, capsys):
        code, _, _ = run(capsys, "verify", "--space", "sphere:2", "--tol-fd", "-1")
        assert code == 2

    def test_space_file(self, capsys, tmp_path):
        path = tmp_path / "space.json"
        path.write_text(json.dumps({"factors": [{"kind": "sphere", "n": 2}, {"kind": "euclidean", "r": 1}]}))
        code, out, _ = run(capsys, "verify", "--space", str(path), "--samples", "5")
        assert code == 0
        assert "space: sphere(2) x euclidean(1)" in out

    def test_space_file_with_unknown_kind(self, capsys, tmp_path):
        path = tmp_path / "space.json"
        path.write_text(json.dumps({"factors": [{"kind": "torus", "n": 2}]}))
        code, _, _ = run(capsys, "verify", "--space", str(path))
        assert code == 2


class TestCurvature:
    @pytest.mark.parametrize("spec,expected", [("sphere:2", 1.0), ("hyperbolic2", -1.0), ("euclidean:2", 0.0)])
    def test_constant_curvature(self, capsys, spec, expected):
        code, out, _ = run(capsys, "curvature", "--space", spec, "--format", "json")
        assert code == 0
        result = json.loads(out)
        assert result["pass"] is True
        for row in result["planes"]:
            assert row["gauss"] == pytest.approx(expected, abs=1e-10)
            assert row["oracle"] == pytest.approx(expected, abs=1e-5)

    def test_text_table(self, capsys):
        code, out, _ = run(capsys, "curvature", "--space", "sphere:3")
        assert code == 0
        # three coordinate planes
        assert len(out.strip().splitlines()) == 2 + 3


class TestUniqueness:
    @pytest.mark.parametrize("spec", ["sphere:2", "hyperbolic2", "euclidean:2", "sl_so:3"])
    def test_recovers(self, capsys, spec):
        code, out, _ = run(capsys, "uniqueness", "--space", spec, "--seed", "7")
        assert code == 0
        assert out.rstrip().endswith("recovered: yes")

    def test_json(self, capsys):
        code, out, _ = run(capsys, "uniqueness", "--space", "euclidean:2", "--format", "json")
        assert code == 0
        summary = json.loads(out)
        assert summary["kernel_dim"] == 1
        assert summary["recovery_error"] < 1e-8


class TestInvariance:
    def test_central_element(self, capsys):
        code, out, _ = run(capsys, "invariance", "--space", "sphere:3", "--gamma", "-I", "--samples", "5")
        assert code == 0
        assert "-I: residual" in out
        assert "invariant: yes" in out

    def test_rotation_is_not_an_invariance(self, capsys):
        c, s = np.cos(1.0), np.sin(1.0)
        rotation = json.dumps([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
        code, out, _ = run(capsys, "invariance", "--space", "sphere:2", "--gamma", rotation, "--samples", "5")
        assert code == 0
        assert "invariant: no" in out

    def test_isometries_from_file(self, capsys, tmp_path):
        minus = (-np.eye(4)).tolist()
        path = tmp_path / "space.json"
        path.write_text(json.dumps({"factors": [{"kind": "sphere", "n": 3}],
                                    "isometries": [{"name": "antipodal", "matrix": minus}]}))
        code, out, _ = run(capsys, "invariance", "--space", str(path), "--format", "json", "--samples", "5")
        assert code == 0
        rows = json.loads(out)["isometries"]
        assert rows[0]["gamma"] == "antipodal"
        assert rows[0]["invariant"] is True

    def test_malformed_matrix(self, capsys):
        code, _, err = run(capsys, "invariance", "--space", "sphere:2", "--gamma", "[[1, 2], [3, 4]]")
        assert code == 2
        assert "3x3" in err

    def test_not_json(self, capsys):
        code, _, _ = run(capsys, "invariance", "--space", "sphere:2", "--gamma", "[[1, 2")
        assert code == 2

    def test_no_gamma(self, capsys):
        code, _, err = run(capsys, "invariance", "--space", "sphere:2")
        assert code == 2
        assert "No isometry given" in err

    def test_gamma_outside_the_group(self, capsys):
        stretch = json.dumps([[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        code, _, err = run(capsys, "invariance", "--space", "sphere:2", "--gamma", stretch, "--samples", "3")
        assert code == 2
        assert "does not normalize" in err
