import csv
import io
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_panel
from qardl.ardl import fit_linear_ardl, to_ecm
from qardl.design import ModelSpec
from qardl.diagnostics import describe, unit_root_table_row
from qardl.errors import DataError
from qardl.quantile_ardl import confidence_bands, fit_qardl
from qardl.report import (
    csv_text,
    describe_document,
    fit_document,
    fmt,
    json_text,
    load_document,
    render,
    study_document,
    text_table,
    unitroot_document,
    write_artifacts,
)
from qardl.simulate import DgpSpec, run_recovery_study


@pytest.fixture(scope="module")
def fit_doc():
    panel = random_panel(200, seed=1, roles=("dependent", "epu", "panic"))
    spec = ModelSpec(2, {"epu": 1, "panic": 0})
    lin = to_ecm(fit_linear_ardl(panel, spec))
    q = fit_qardl(panel, spec, (0.25, 0.5, 0.75))
    return fit_document(spec, panel.role_map(), lin, q, confidence_bands(q), {"seed": 0})


class TestFormatting:
    @pytest.mark.parametrize("x, s", [(0.12345, "0.1235"), (-0.00001, "0.0000"), (-0.0, "0.0000"),
                                      (2.0, "2.0000"), (math.nan, "NA"), (None, "NA"), (-1.03156, "-1.0316")])
    def test_fmt(self, x, s):
        assert fmt(x) == s

    def test_text_table_alignment(self):
        t = text_table(["Name", "Value"], [["a", "1.0000"], ["long", "-12.5000"]], "Title")
        lines = t.splitlines()
        assert lines[0] == "Title"
        assert lines[2] == "Name     Value"
        assert lines[4] == "a       1.0000"
        assert t.endswith("\n")

    def test_csv_is_rfc4180(self):
        text = csv_text(["a", "b"], [["x,y", 1.0], ['q"uote', math.nan], [None, True]])
        assert text == 'a,b\r\n"x,y",1.0\r\n"q""uote",\r\n,true\r\n'

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=1, max_size=10))
    def test_csv_round_trips_floats_exactly(self, xs):
        text = csv_text(["v"], [[x] for x in xs])
        back = [float(r[0]) for r in list(csv.reader(io.StringIO(text, newline="")))[1:]]
        assert back == xs

    def test_json_nan_is_null(self):
        doc = json.loads(json_text({"a": math.nan, "b": [math.inf, 1.5]}))
        assert doc == {"a": None, "b": [None, 1.5]}


class TestDocuments:
    def test_fit_document_schema_and_files(self, fit_doc):
        assert fit_doc["schema"] == "qardl.fit/1"
        files = render(fit_doc)
        assert set(files) == {"fit.json", "fit.txt", "fit.csv", "bands.csv"}
        assert [r["gamma"] for r in fit_doc["quantiles"]] == [0.25, 0.5, 0.75]
        assert fit_doc["linear"]["gamma"] is None

    def test_fit_text_layout(self, fit_doc):
        text = render(fit_doc)["fit.txt"]
        assert "Linear ARDL" in text and "Cumulative short-run effects" in text
        rows = text.splitlines()
        i = next(k for k, line in enumerate(rows) if line.startswith("Linear ARDL"))
        assert rows[i + 1].lstrip().startswith("(")
        rho = fit_doc["linear"]["parameters"]["rho*"]
        assert fmt(rho["estimate"]) + rho["stars"] in rows[i]

    def test_csv_carries_full_precision(self, fit_doc):
        rows = list(csv.DictReader(io.StringIO(render(fit_doc)["fit.csv"], newline="")))
        lin = [r for r in rows if r["model"] == "ols" and r["parameter"] == "rho*"][0]
        assert float(lin["estimate"]) == fit_doc["linear"]["parameters"]["rho*"]["estimate"]
        assert len(rows) == sum(len(r["parameters"]) for r in [fit_doc["linear"], *fit_doc["quantiles"]])

    def test_render_is_deterministic_and_json_driven(self, fit_doc, tmp_path):
        a = render(fit_doc)
        write_artifacts(fit_doc, tmp_path)
        b = render(load_document(tmp_path / "fit.json"))
        assert a == b
        for name, text in a.items():
            assert (tmp_path / name).read_bytes() == text.encode("utf-8")

    def test_failures_and_warnings_in_notes(self, fit_doc):
        doc = json.loads(json_text(fit_doc))
        doc["failures"] = [{"gamma": 0.9, "error": "singular design"}]
        doc["quantiles"][0]["warnings"] = ["rho is not significant"]
        text = render(doc)["fit.txt"]
        assert "[0.9] fit failed: singular design" in text
        assert "[0.25] rho is not significant" in text

    def test_describe_and_unitroot(self):
        panel = random_panel(300, seed=2, roles=("dependent", "epu"))
        series = panel.to_series()
        d = render(describe_document([describe(s) for s in series]))
        assert set(d) == {"describe.json", "describe.txt", "describe.csv"}
        assert "excess kurtosis" in d["describe.txt"]
        u_doc = unitroot_document({s.name: unit_root_table_row(s) for s in series}, "constant")
        u = render(u_doc)
        assert len(list(csv.reader(io.StringIO(u["unitroot.csv"], newline="")))) == 1 + 2 * 4
        assert "Unit-root tests (constant)" in u["unitroot.txt"]

    def test_study(self):
        rep = run_recovery_study(DgpSpec(rho=-0.3, long_run={"epu": 1.0}, n=200, seed=3), 50)
        files = render(study_document(rep, {"rho": -0.3}))
        assert "50 replications, n=200" in files["study.txt"]
        rows = list(csv.DictReader(io.StringIO(files["study.csv"], newline="")))
        assert {r["parameter"] for r in rows} >= {"alpha", "rho*", "beta_EPU", "omega_0"}
        assert all(r["gamma"] == "" for r in rows)

    def test_unknown_schema(self, fit_doc):
        doc = dict(fit_doc, schema="qardl.fit/2")
        with pytest.raises(ValueError, match="schema"):
            render(doc)
        with pytest.raises(ValueError):
            render({"kind": "plot"})

    def test_load_malformed(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"a": 1,\n  oops}')
        with pytest.raises(DataError) as info:
            load_document(p)
        assert info.value.line == 2
