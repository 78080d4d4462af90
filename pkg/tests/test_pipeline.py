import copy
import json
import subprocess
import sys

import pytest

from toroidal.documents import canonical_dumps
from toroidal.pipeline import (
    ReplayMismatch,
    ToroidalizeError,
    check_atlas,
    parse_document,
    replay,
    toroidalize,
    verify_global_toroidal,
    verify_resolution_script,
)


def identity_doc():
    """One 2 -> 2 chart, identity matrix, blow up the two-component origin."""
    return {
        "schema": "toroidal-atlas/1",
        "dims": {"d": 2, "m": 2},
        "labels": [{"name": "L1", "charts": ["A"]},
                   {"name": "L2", "charts": ["A"]}],
        "charts": [{
            "id": "A",
            "strata": [{
                "id": "p0",
                "chart": {"d": 2, "m": 2, "n": 2, "ell": 2, "s": 0,
                          "tag": "toroidal", "matrix": [[1, 0], [0, 1]]},
                "row_labels": ["L1", "L2"],
            }],
        }],
        "script": [{
            "id": "z1",
            "views": {"A": {"c": 2, "contained": ["L1", "L2"]}},
            "incidence": {"L1": "in", "L2": "in"},
        }],
    }


def two_chart_doc():
    """Chart A sees the center inside both its components; chart B is a
    smooth chart through the same center."""
    return {
        "schema": "toroidal-atlas/1",
        "dims": {"d": 3, "m": 2},
        "labels": [{"name": "L1", "charts": ["A"]},
                   {"name": "L2", "charts": ["A"]}],
        "charts": [
            {"id": "A",
             "strata": [{
                 "id": "p0",
                 "chart": {"d": 3, "m": 2, "n": 2, "ell": 2, "s": 0,
                           "tag": "toroidal", "matrix": [[1, 0], [0, 1]]},
                 "row_labels": ["L1", "L2"],
             }]},
            {"id": "B",
             "strata": [{
                 "id": "q0",
                 "chart": {"d": 3, "m": 2, "n": 0, "ell": 0, "s": 0,
                           "tag": "smooth", "matrix": []},
                 "row_labels": [],
             }]},
        ],
        "script": [{
            "id": "z1",
            "views": {"A": {"c": 2, "contained": ["L1", "L2"]},
                      "B": {"c": 2, "contained": [], "strata": ["q0"]}},
            "incidence": {"L1": "in", "L2": "in"},
        }],
    }


class TestParsingAndChecks:
    def test_identity_atlas_valid(self):
        atlas, script = parse_document(identity_doc())
        assert check_atlas(atlas).ok
        assert verify_resolution_script(atlas, script).ok

    def test_script_dichotomy_failure(self):
        doc = identity_doc()
        doc["script"][0]["incidence"]["L2"] = "meets"
        doc["script"][0]["views"]["A"]["contained"] = ["L1"]
        atlas, script = parse_document(doc)
        report = verify_resolution_script(atlas, script)
        assert any(code == "dichotomy" for code, _ in report.failures)

    def test_script_codimension_failure(self):
        doc = identity_doc()
        doc["script"][0]["views"]["A"]["c"] = 1
        doc["script"][0]["views"]["A"]["contained"] = ["L1"]
        atlas, script = parse_document(doc)
        report = verify_resolution_script(atlas, script)
        assert any(code == "codim" for code, _ in report.failures)

    def test_transform_containment_failure(self):
        # A center inside a divisor component declared outside the initial
        # union divisor: the new exceptional joins the local divisor while
        # escaping the total transform of the union.
        doc = identity_doc()
        doc["labels"].append(
            {"name": "X1", "charts": ["A"], "under_e0": False})
        doc["script"] = [{
            "id": "z1",
            "views": {"A": {"c": 2, "contained": ["X1"],
                            "strata": []}},
            "incidence": {"X1": "in"},
        }]
        atlas, script = parse_document(doc)
        report = verify_resolution_script(atlas, script)
        assert any(code == "transform" for code, _ in report.failures)


class TestEndToEnd:
    def test_identity_example_trace(self):
        atlas, script = parse_document(identity_doc())
        trace = toroidalize(atlas, script)
        assert trace["verdicts"]["pass"]

        step = trace["steps"][0]
        chart_doc = step["charts"]["A"]
        blowups = chart_doc["principalization"]["steps"]
        assert len(blowups) == 1
        assert blowups[0]["center"] == {"divisor_indices": [0, 1],
                                        "slot_count": 0}
        lifts = {lift["stratum"]: lift for lift in chart_doc["lifts"]}
        assert len(lifts) == 4

        # beta = 0 stratum of the j0 = 0 chart lifts to the identity.
        zero = lifts["A/p0.e0z"]
        assert zero["record"]["case"] == "case1"
        assert zero["chart"]["matrix"] == [[1, 0], [0, 1]]
        assert zero["record"]["t_nonzero"] == 2
        assert zero["record"]["target"]["ell1"] == 2
        assert zero["row_labels"] == ["exc.z1", "L2"]
        assert zero["commutes"]

        # generic stratum lifts through the one-point branch.
        generic = lifts["A/p0.e0g"]
        assert generic["chart"]["matrix"] == [[1]]
        assert generic["record"]["target"]["ell1"] == 1
        assert generic["row_labels"] == ["exc.z1"]
        assert generic["commutes"]

        final = trace["final_atlas"]["charts"][0]["strata"]
        assert len(final) == 4
        assert trace["verdicts"]["global_toroidal"]

    def test_empty_script(self):
        doc = identity_doc()
        doc["script"] = []
        atlas, script = parse_document(doc)
        trace = toroidalize(atlas, script)
        assert trace["steps"] == []
        assert trace["verdicts"]["pass"]
        assert trace["final_atlas"]["charts"][0]["strata"][0]["chart"]["matrix"] \
            == [[1, 0], [0, 1]]

    def test_two_chart_example(self):
        atlas, script = parse_document(two_chart_doc())
        trace = toroidalize(atlas, script)
        assert trace["verdicts"]["pass"]
        a_lifts = trace["steps"][0]["charts"]["A"]["lifts"]
        b_lifts = trace["steps"][0]["charts"]["B"]["lifts"]
        assert len(a_lifts) == 4 and all(l["commutes"] for l in a_lifts)
        assert len(b_lifts) == 4 and all(l["commutes"] for l in b_lifts)
        for lift in b_lifts:
            assert lift["record"]["target"]["exceptional_in_divisor"] is False
            assert lift["chart"]["ell"] == 0
        assert trace["verdicts"]["global_toroidal"]

    def test_low_cap_reports_exceeded(self):
        doc = identity_doc()
        doc["charts"][0]["strata"][0]["chart"]["matrix"] = [[2, 1], [1, 3]]
        doc["charts"][0]["strata"][0]["chart"]["d"] = 3
        doc["dims"]["d"] = 3
        atlas, script = parse_document(doc)
        trace = toroidalize(atlas, script, cap=1)
        assert trace["verdicts"]["cap_exceeded"]
        assert not trace["verdicts"]["pass"]


class TestGlobalVerification:
    def test_extra_global_labels_extend(self):
        doc = identity_doc()
        doc["dims"]["d"] = 3
        stratum = doc["charts"][0]["strata"][0]
        stratum["chart"] = {"d": 3, "m": 2, "n": 1, "ell": 1, "s": 0,
                            "tag": "toroidal", "matrix": [[2]]}
        stratum["row_labels"] = ["L1"]
        stratum["extra_global_labels"] = 1
        doc["script"] = []
        atlas, _ = parse_document(doc)
        assert verify_global_toroidal(atlas).ok

    def test_extension_failure_detected(self):
        doc = identity_doc()
        stratum = doc["charts"][0]["strata"][0]
        stratum["extra_global_labels"] = 3
        doc["script"] = []
        atlas, _ = parse_document(doc)
        report = verify_global_toroidal(atlas)
        assert not report.ok

    def test_mutated_stratum_reported_with_witness(self):
        doc = identity_doc()
        stratum = doc["charts"][0]["strata"][0]
        stratum["chart"]["matrix"] = [[1, 0], [2, 0]]
        stratum["extra_global_labels"] = 0
        doc["script"] = []
        atlas, _ = parse_document(doc)
        report = verify_global_toroidal(atlas)
        assert any(code == "column" and "A/p0" in msg
                   for code, msg in report.failures)


class TestDeterminismAndReplay:
    def test_traces_byte_identical(self):
        for doc_fn in (identity_doc, two_chart_doc):
            atlas1, script1 = parse_document(doc_fn())
            atlas2, script2 = parse_document(doc_fn())
            t1 = toroidalize(atlas1, script1)
            t2 = toroidalize(atlas2, script2)
            assert canonical_dumps(t1) == canonical_dumps(t2)

    def test_replay_identical(self):
        atlas, script = parse_document(identity_doc())
        trace = toroidalize(atlas, script)
        atlas2, script2 = parse_document(identity_doc())
        fresh = replay(trace, atlas2, script2)
        assert canonical_dumps(fresh) == canonical_dumps(trace)

    def test_tampered_trace_rejected(self):
        atlas, script = parse_document(identity_doc())
        trace = toroidalize(atlas, script)
        tampered = copy.deepcopy(trace)
        tampered["steps"][0]["charts"]["A"]["lifts"][0]["chart"]["matrix"] = [[9, 9]]
        atlas2, script2 = parse_document(identity_doc())
        with pytest.raises(ReplayMismatch):
            replay(tampered, atlas2, script2)

    def test_invalid_atlas_rejected(self):
        doc = identity_doc()
        doc["charts"][0]["strata"][0]["chart"]["matrix"] = [[1, 0], [2, 0]]
        atlas, script = parse_document(doc)
        with pytest.raises(ToroidalizeError):
            toroidalize(atlas, script)


class TestCli:
    def run_cli(self, *argv, stdin=None):
        return subprocess.run(
            [sys.executable, "-m", "toroidal.cli", *argv],
            input=stdin, capture_output=True, text=True)

    def test_toroidalize_and_verify_roundtrip(self, tmp_path):
        atlas_path = tmp_path / "atlas.json"
        trace_path = tmp_path / "trace.json"
        atlas_path.write_text(json.dumps(identity_doc()))
        run = self.run_cli("--out", str(trace_path), "toroidalize",
                           str(atlas_path))
        assert run.returncode == 0, run.stderr
        run = self.run_cli("verify-trace", str(atlas_path), str(trace_path))
        assert run.returncode == 0, run.stderr
        run = self.run_cli("report", str(trace_path))
        assert run.returncode == 0
        assert "pass: True" in run.stdout

    def test_check_atlas(self, tmp_path):
        atlas_path = tmp_path / "atlas.json"
        atlas_path.write_text(json.dumps(identity_doc()))
        assert self.run_cli("check-atlas", str(atlas_path)).returncode == 0

    def test_ideal_subcommand(self):
        run = self.run_cli("ideal", stdin=json.dumps(
            {"op": "factor", "generators": [[2, 1], [1, 3]]}))
        assert run.returncode == 0
        out = json.loads(run.stdout)
        assert out == {"monomial": [1, 1], "residual": [[0, 2], [1, 0]]}

    def test_normalize_toric_subcommand(self):
        run = self.run_cli("normalize-toric", stdin=json.dumps(
            {"source": [3, 2], "target": [2, 2],
             "matrix": [[1, 1, 1], [2, 2, 1]]}))
        assert run.returncode == 0
        out = json.loads(run.stdout)
        assert out["r"] == 1 and out["toroidal"]

    def test_invalid_input_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        assert self.run_cli("toroidalize", str(bad)).returncode == 2

    def test_cap_exit_code(self, tmp_path):
        doc = identity_doc()
        doc["charts"][0]["strata"][0]["chart"]["matrix"] = [[2, 1], [1, 3]]
        doc["charts"][0]["strata"][0]["chart"]["d"] = 3
        doc["dims"]["d"] = 3
        atlas_path = tmp_path / "atlas.json"
        atlas_path.write_text(json.dumps(doc))
        run = self.run_cli("--cap", "1", "toroidalize", str(atlas_path))
        assert run.returncode == 3


class TestCliMore:
    run_cli = TestCli.run_cli

    def test_ideal_colon_and_decompose(self):
        run = self.run_cli("ideal", stdin=json.dumps(
            {"op": "colon", "generators": [[2, 1], [0, 3]], "arg": [1, 1]}))
        assert json.loads(run.stdout) == {"generators": [[0, 2], [1, 0]]}
        run = self.run_cli("ideal", stdin=json.dumps(
            {"op": "decompose", "generators": [[2, 0], [1, 1]]}))
        assert json.loads(run.stdout) == {
            "components": [[[0, 1], [2, 0]], [[1, 0]]]}

    def test_ideal_unknown_op(self):
        run = self.run_cli("ideal", stdin=json.dumps(
            {"op": "nope", "generators": [[1]]}))
        assert run.returncode == 2

    def test_blowup_subcommand(self):
        doc = {
            "chart": {"d": 2, "m": 2, "n": 2, "ell": 2, "s": 0, "tag": "qtf1",
                      "matrix": [[1, 0], [0, 1]], "ell_bar": 2},
            "center": {"divisor_indices": [0, 1], "slot_count": 0},
            "choice": {"j0": 0, "betas": [[1, {"kind": "zero"}]]},
        }
        run = self.run_cli("blowup", stdin=json.dumps(doc))
        assert run.returncode == 0, run.stderr
        out = json.loads(run.stdout)
        assert out["permissible"] is True
        assert out["chart"]["matrix"] == [[1, 0], [1, 1]]

    def test_principalize_subcommand(self):
        doc = {"strata": [{
            "id": "x0",
            "chart": {"d": 3, "m": 2, "n": 2, "ell": 2, "s": 0, "tag": "qtf1",
                      "matrix": [[2, 1], [1, 3]], "ell_bar": 2},
            "descriptor": {"ell_bar": 2, "c": 2, "divisor_rows": [0, 1]},
        }]}
        run = self.run_cli("principalize", stdin=json.dumps(doc))
        assert run.returncode == 0, run.stderr
        out = json.loads(run.stdout)
        assert len(out["steps"]) == 2
        assert all(f["status"] == "principal" for f in out["final"])


class TestDocumentRoundtrip:
    def test_chart_with_units_and_strata(self):
        from fractions import Fraction

        from toroidal.chart import ChartForm
        from toroidal.documents import chart_from_doc, chart_to_doc
        from toroidal.units import Stratum, UnitToken, UnitValue

        unit = UnitToken(UnitValue(Fraction(3, 2))).with_factor(
            4, UnitValue.symbol("g", Fraction(1, 2)), 2)
        cf = ChartForm(
            d=5, m=3, n=2, ell=1, s=1, tag="qtf1",
            matrix=((2, 1), (1, 0)),
            units=(unit, UnitToken()),
            betas=(Stratum.of_value(Fraction(-7, 3)),),
            ell_bar=1)
        assert chart_from_doc(chart_to_doc(cf)) == cf

    def test_generic_stratum_roundtrip(self):
        from toroidal.documents import stratum_from_doc, stratum_to_doc
        from toroidal.units import Stratum

        for s in (Stratum.zero(), Stratum.generic("q.1.2"),
                  Stratum.of_value(5), None):
            assert stratum_from_doc(stratum_to_doc(s)) == s


class TestMultiStepScript:
    def doc(self):
        doc = identity_doc()
        doc["dims"]["d"] = 3
        doc["charts"][0]["strata"][0]["chart"]["d"] = 3
        doc["script"] = [
            {"id": "z1",
             "views": {"A": {"c": 2, "contained": ["L1", "L2"]}},
             "incidence": {"L1": "in", "L2": "in"}},
            # Second center: inside the first exceptional and the strict
            # transform of L2; only the stratum carrying both is above it.
            {"id": "z2",
             "views": {"A": {"c": 2, "contained": ["exc.z1", "L2"]}},
             "incidence": {"exc.z1": "in", "L2": "in"}},
        ]
        return doc

    def test_two_step_run(self):
        atlas, script = parse_document(self.doc())
        assert verify_resolution_script(atlas, script).ok
        trace = toroidalize(atlas, script)
        assert trace["verdicts"]["pass"]
        step2 = trace["steps"][1]["charts"]["A"]
        adapted_ids = [a["stratum"] for a in step2["adapted"]]
        assert adapted_ids == ["A/p0.e0z^"]
        labels_seen = {tuple(l["row_labels"]) for l in step2["lifts"]}
        assert ("exc.z2", "L2") in labels_seen or ("exc.z2",) in labels_seen
        final = trace["final_atlas"]["charts"][0]["strata"]
        assert len(final) == 3 + 4  # three untouched strata + four new ones

    def test_two_step_determinism(self):
        atlas1, script1 = parse_document(self.doc())
        atlas2, script2 = parse_document(self.doc())
        assert canonical_dumps(toroidalize(atlas1, script1)) == \
            canonical_dumps(toroidalize(atlas2, script2))

    def test_unknown_chart_in_view_rejected(self):
        doc = self.doc()
        doc["script"][1]["views"]["ZZ"] = {"c": 2, "contained": ["L1"]}
        atlas, script = parse_document(doc)
        report = verify_resolution_script(atlas, script)
        assert any("unknown chart" in msg for _, msg in report.failures)

    def test_duplicate_stratum_id_rejected(self):
        doc = self.doc()
        doc["charts"][0]["strata"].append(dict(doc["charts"][0]["strata"][0]))
        with pytest.raises(Exception):
            parse_document(doc)
