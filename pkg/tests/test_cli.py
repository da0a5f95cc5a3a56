import json
import math
from fractions import Fraction as F

import pytest

from prefractal.cli import _parse_fraction, _parse_measure, main
from prefractal.gasket import complex_from_dict, curve_count
from prefractal.spectrum import SpectrumSpec, enumerate_eigenvalues


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestGen:
    def test_sg_complex_counts(self, capsys):
        code, out, err = _run(capsys, "gen", "--geometry", "sg", "--level", "2")
        assert code == 0 and err == ""
        doc = json.loads(out)
        assert doc["schemaVersion"] == 1
        assert doc["command"] == "gen"
        tris = [t for t in doc["complex"]["triangles"] if t["level"] == 2]
        assert len(tris) == 9
        assert len(doc["complex"]["curves"]) == curve_count(2)

    def test_round_trips_through_schema_parser(self, capsys):
        code, out, _ = _run(capsys, "gen", "--level", "2")
        cx = complex_from_dict(json.loads(out)["complex"])
        assert cx.max_level == 2
        assert len(cx.curves) == curve_count(2)

    def test_cap_violation_names_the_cap(self, capsys):
        code, out, err = _run(capsys, "gen", "--level", "30")
        assert code == 2 and out == ""
        payload = json.loads(err)
        assert payload["error"] == "validation"
        assert payload["exitCode"] == 2
        assert "cap" in payload["message"]

    def test_harmonic_carries_quadrature_metadata(self, capsys):
        code, out, _ = _run(capsys, "gen", "--geometry", "harmonic",
                            "--level", "1", "--tol", "1e-6")
        assert code == 0
        doc = json.loads(out)
        assert doc["subdivision"] == {"adjacent": 2, "opposite": 1,
                                      "denominator": 5}
        rows = doc["lengths"]
        assert len(rows) == curve_count(1)
        assert all({"depth", "converged", "length"} <= set(r) for r in rows)
        assert doc["quadrature"]["tol"] == 1e-6

    def test_strict_harmonic_flags_cap_hits(self, capsys):
        code, out, err = _run(capsys, "gen", "--geometry", "harmonic",
                              "--level", "1", "--tol", "1e-30", "--strict")
        assert code == 3 and out == ""
        payload = json.loads(err)
        assert payload["error"] == "non-convergence"
        assert "cap" in payload["message"]

    def test_svg_output(self, capsys):
        code, out, _ = _run(capsys, "gen", "--level", "2", "--format", "svg")
        assert code == 0
        assert out.startswith("<svg") and "<polygon" in out


class TestTables:
    def test_gh_table_rows(self, capsys):
        code, out, _ = _run(capsys, "gh-table", "--max-level", "2", "--m", "4",
                            "--workers", "1")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,m,bound,boundWithSlack,referenceBound,agreementDiscrepancy"
        assert len(lines) == 4
        for line in lines[1:]:
            n, m, bound, bound_slack, ref, agree = line.split(",")
            assert float(agree) == 0.0
            assert float(bound) <= float(ref)
            assert float(bound) <= float(bound_slack)

    def test_gh_table_json_and_svg(self, capsys):
        code, out, _ = _run(capsys, "gh-table", "--max-level", "1", "--m", "3",
                            "--workers", "1", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["header"][0] == "n" and len(doc["rows"]) == 2
        code, out, _ = _run(capsys, "gh-table", "--max-level", "1", "--m", "3",
                            "--workers", "1", "--format", "svg")
        assert code == 0 and out.startswith("<svg")

    def test_gh_table_rejects_inverted_levels(self, capsys):
        code, _, err = _run(capsys, "gh-table", "--max-level", "5", "--m", "3")
        assert code == 2
        assert json.loads(err)["error"] == "validation"

    def test_spectrum_matches_library(self, capsys):
        code, out, _ = _run(capsys, "spectrum", "--level", "1",
                            "--cutoff", "20", "--format", "csv")
        assert code == 0
        enum = enumerate_eigenvalues(SpectrumSpec.gasket(1), 20)
        lines = out.strip().splitlines()
        assert lines[0] == "value,multiplicity"
        got = [(float(a), int(b)) for a, b in
               (line.split(",") for line in lines[1:])]
        assert got == list(zip(enum.values.tolist(),
                               enum.multiplicities.tolist()))

    def test_spectrum_needs_a_spec(self, capsys):
        code, _, err = _run(capsys, "spectrum", "--cutoff", "10")
        assert code == 2
        assert "level" in json.loads(err)["message"]

    def test_dimension_fit_slope(self, capsys):
        code, out, _ = _run(capsys, "dimension", "--infinite",
                            "--lambda-min", "10", "--lambda-max", "1e4",
                            "--grid", "25")
        assert code == 0
        fit = json.loads(out)["fit"]
        assert 1.5 < fit["slope"] < 1.66
        assert len(fit["grid"]) == 25

    def test_kantorovich_splits_mass(self, capsys):
        code, out, _ = _run(capsys, "kantorovich", "--level", "1",
                            "--mu", "0:1/2,1:1/2", "--nu", "2:1")
        assert code == 0
        tr = json.loads(out)["transport"]
        assert tr["value"] == 1.0 and tr["exact"] and tr["gap"] == 0.0
        assert sorted(tuple(row) for row in tr["plan"]) == [(0, 2, 0.5), (1, 2, 0.5)]

    def test_extent_table_row(self, capsys):
        code, out, _ = _run(capsys, "extent", "--n", "2", "--m", "5")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,m,alpha,epsilon,bound,empiricalMax"
        n, m, alpha, eps, bound, emp = lines[1].split(",")
        assert (int(n), int(m)) == (2, 5)
        assert math.isclose(float(alpha), float(eps) / 4)
        assert float(emp) <= float(bound)

    def test_extent_explicit_alpha(self, capsys):
        code, out, _ = _run(capsys, "extent", "--n", "2", "--m", "4",
                            "--alpha", "1/16", "--format", "json")
        assert code == 0
        rep = json.loads(out)["report"]
        assert rep["alpha"] == 0.0625
        assert rep["empirical_max"] <= rep["bound"]

    def test_covariant_reach(self, capsys):
        code, out, _ = _run(capsys, "covariant", "--n", "4",
                            "--epsilon", "0.1", "--trials", "10")
        assert code == 0
        rep = json.loads(out)["report"]
        assert rep["below_epsilon"] is True
        assert rep["max_reach"] < 0.1


class TestPlumbing:
    def test_outputs_are_byte_identical(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        for path in (a, b):
            code = main(["extent", "--n", "2", "--m", "4", "--format", "json",
                         "--out", str(path)])
            capsys.readouterr()
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_cache_env_round_trip(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("PREFRACTAL_CACHE", str(tmp_path))
        code, first, _ = _run(capsys, "kantorovich", "--level", "2",
                              "--mu", "0:1", "--nu", "5:1")
        assert code == 0
        cached = list(tmp_path.glob("sg-metric-*.json"))
        assert len(cached) == 1
        code, second, _ = _run(capsys, "kantorovich", "--level", "2",
                               "--mu", "0:1", "--nu", "5:1")
        assert code == 0 and second == first

    def test_config_echo_embeds_parameters(self, capsys):
        _, out, _ = _run(capsys, "covariant", "--n", "3", "--epsilon", "0.1",
                         "--trials", "5", "--seed", "9")
        doc = json.loads(out)
        assert doc["config"]["n"] == 3
        assert doc["config"]["seed"] == 9
        assert doc["version"]

    def test_parsers(self):
        assert _parse_fraction("1/16") == F(1, 16)
        assert _parse_fraction("0.0625") == F(1, 16)
        assert _parse_fraction("3") == 3
        m = _parse_measure("0:1/2,4:0.25,7:1/4")
        assert m.weight(0) == F(1, 2) and m.weight(4) == F(1, 4)
        with pytest.raises(ValueError, match="index:weight"):
            _parse_measure("nonsense")
