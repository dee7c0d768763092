import io
import json

import pytest

from main import build_parser, dispatch


def run(argv, stdin=None):
    out = io.StringIO()
    code = dispatch(argv, stdin=io.StringIO(stdin) if stdin is not None else None, stdout=out)
    return code, out.getvalue()


def run_json(argv, stdin=None):
    code, text = run(["--format", "json"] + argv, stdin)
    return code, json.loads(text)


class TestSingularity:
    def test_analyze_json(self):
        code, payload = run_json(["singularity", "analyze", "--vars", "x,y,z", "--poly", "x*y - z^3"])
        assert code == 0
        assert payload["command"] == "singularity analyze"
        assert payload["errors"] == []
        result = payload["result"]
        assert (result["mu"], result["tau"], result["ade"]) == (2, 2, "A2")
        assert result["t1_basis"] == ["1", "z"]
        assert result["dynkin"]["weyl_order"] == "6"

    def test_analyze_text(self):
        code, text = run(["singularity", "analyze", "--vars", "x,y,z", "--poly", "x^2 + y^2 + z^2"])
        assert code == 0
        assert "A1" in text
        assert "τ = 1" in text

    def test_poly_from_stdin(self):
        code, payload = run_json(["singularity", "analyze", "--vars", "x,y,z", "--poly", "-"], stdin="x*y - z^4\n")
        assert code == 0
        assert payload["result"]["tau"] == 3

    def test_format_after_subcommand(self):
        code, text = run(["singularity", "analyze", "--vars", "x,y,z", "--poly", "x*y - z^2", "--format", "json"])
        assert code == 0
        assert json.loads(text)["result"]["ade"] == "A1"

    def test_syntax_error(self):
        code, payload = run_json(["singularity", "analyze", "--vars", "x,y,z", "--poly", "x +"])
        assert code == 1
        assert payload["result"] is None
        assert payload["errors"][0]["code"] == "syntax_error"

    def test_unicode_digit_is_syntax_error(self):
        code, payload = run_json(["singularity", "analyze", "--vars", "x,y,z", "--poly", "x^² + y^2 + z^2"])
        assert code == 1
        error = payload["errors"][0]
        assert error["type"] == "PolynomialSyntaxError"
        assert error["details"]["column"] == 3

    def test_non_isolated_text(self):
        code, text = run(["singularity", "analyze", "--vars", "x,y,z", "--poly", "x*y"])
        assert code == 1
        assert text.startswith("❌ NonIsolatedSingularityError")


class TestDeform:
    def test_semiuniversal(self):
        code, payload = run_json(["deform", "semiuniversal", "--vars", "x,y,z", "--poly", "x*y - z^3"])
        assert code == 0
        assert payload["result"]["parameters"] == ["t1", "t2"]
        assert payload["result"]["equations"] == ["-z^3 + x*y + z*t2 + t1"]

    def test_scan(self):
        code, payload = run_json(["deform", "scan", "--vars", "x,y,z", "--poly", "x*y - z^4", "--at", "-1,0,2"])
        assert code == 0
        points = payload["result"]["points"]
        assert [p["point"] for p in points] == [["0", "0", "-1"], ["0", "0", "1"]]

    def test_scan_parameter_count(self):
        code, payload = run_json(["deform", "scan", "--vars", "x,y,z", "--poly", "x*y - z^4", "--at", "1"])
        assert code == 1
        assert payload["errors"][0]["type"] == "ParameterCountError"

    def test_scan_bad_value(self):
        code, payload = run_json(["deform", "scan", "--vars", "x,y,z", "--poly", "x*y - z^2", "--at", "a"])
        assert code == 1
        assert payload["errors"][0]["type"] == "InvalidArgumentError"


class TestResolve:
    def test_a1(self):
        code, payload = run_json(["resolve", "an", "--n", "1"])
        assert code == 0
        charts = payload["result"]["variety"]["charts"]
        assert [c["certificate"]["verdict"] for c in charts] == ["smooth", "smooth"]

    def test_chart_cap(self):
        code, payload = run_json(["--chart-cap", "1", "resolve", "an", "--n", "2"])
        assert code == 1
        assert payload["errors"][0]["code"] == "chart_cap_exceeded"
        assert payload["config"]["chart_cap"] == 1

    def test_flop(self):
        code, payload = run_json(["resolve", "flop"])
        assert code == 0
        assert payload["result"]["indeterminacy"] == ["u", "tau"]
        assert payload["result"]["dimension"] == 1
        assert payload["result"]["biregular_off_center"] is True

    def test_node_text(self):
        code, text = run(["resolve", "node"])
        assert code == 0
        assert text.count("✅") == 4


class TestQuotient:
    def test_default_family(self):
        code, payload = run_json(["quotient", "bidouble"])
        assert code == 0
        assert payload["result"]["quotient"]["certified"] is True
        names = [g["name"] for g in payload["result"]["presentation"]["generators"]]
        assert names == ["x", "y", "z", "s", "t"]

    def test_fixed_locus(self):
        code, payload = run_json(["quotient", "bidouble", "--fixed", "1,1,-1,1"])
        assert code == 0
        assert "s" in payload["result"]["fixed_locus_image"]


class TestSurface:
    def test_invariants(self):
        code, payload = run_json(["surface", "invariants", "--chi", "1", "--k2", "9"])
        assert code == 0
        assert payload["result"]["enriques_lower_bound"] == -8
        assert payload["result"]["enriques_vacuous"] is True

    def test_invariants_text_shows_vacuous_bound(self):
        code, text = run(["surface", "invariants", "--chi", "1", "--k2", "9"])
        assert code == 0
        assert "0 (raw -8" in text

    def test_nodal_bounds(self):
        code, payload = run_json(["surface", "nodal-bounds", "--d", "6"])
        assert code == 0
        assert (payload["result"]["severi"], payload["result"]["segre"]) == (68, 45)
        assert payload["result"]["chmutov_low"] == "90"

    def test_nodal_table(self):
        code, text = run(["surface", "nodal-bounds", "--d-max", "6"])
        assert code == 0
        assert "Barth's sextic" in text

    def test_nodal_bounds_needs_degree(self):
        code, _ = run(["surface", "nodal-bounds"])
        assert code == 1

    def test_catalog(self):
        code, payload = run_json(["surface", "catalog", "--family", "3", "--k", "2", "--p", "3", "--r", "2"])
        assert code == 0
        assert payload["result"][0]["weights"] == [1, 1, 3, 5]
        assert payload["result"][0]["degree"] == 25

    def test_catalog_rejected(self):
        code, payload = run_json(["surface", "catalog", "--family", "1", "--k", "1"])
        assert code == 1
        assert payload["errors"][0]["type"] == "CatalogParameterError"

    def test_isogenous(self):
        assert run_json(["surface", "isogenous", "--g1", "6", "--g2", "6", "--order", "25"])[1]["result"] == {
            'euler_number': 4
        }
        code, payload = run_json(["surface", "isogenous", "--g1", "2", "--g2", "2", "--order", "3"])
        assert code == 1
        assert payload["errors"][0]["type"] == "DivisibilityObstructionError"

    def test_double_cover(self):
        code, payload = run_json(["surface", "double-cover", "--d1", "1", "--d2", "3"])
        assert code == 0
        assert payload["result"]["invariants"]["chi"] == 3

    def test_segre_is_deterministic(self):
        argv = ["--seed", "2", "surface", "segre", "--d", "2"]
        first, second = run_json(argv), run_json(argv)
        assert first == second
        assert first[1]["result"]["nodes"]["count"] == 1


class TestUsage:
    def test_missing_argument(self):
        assert run(["singularity", "analyze", "--vars", "x,y,z"])[0] == 2

    def test_unknown_command(self):
        assert run(["frobnicate"])[0] == 2

    def test_bad_format(self):
        assert run(["--format", "xml", "surface", "nodal-bounds", "--d", "4"])[0] == 2

    def test_help(self):
        assert run(["--help"])[0] == 0

    def test_bad_budget(self, monkeypatch):
        monkeypatch.setenv("DEFKIT_BUDGET", "colour=1")
        code, payload = run_json(["surface", "nodal-bounds", "--d", "4"])
        assert code == 1
        assert payload["errors"][0]["type"] == "ConfigurationError"

    def test_parser_builds(self):
        assert build_parser().prog == "defkit"
