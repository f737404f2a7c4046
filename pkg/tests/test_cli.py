import csv
import json
import random

import numpy as np
import pytest

from conftest import FIXTURES
from peereval import cli, io

EX5 = dict(evals=FIXTURES / "example5_evals.csv", grades=FIXTURES / "ones_grades.csv", roster=FIXTURES / "roster3.csv")


def normalize_floats(obj):
    if isinstance(obj, float):
        return io.fmt(obj)
    if isinstance(obj, list):
        return [normalize_floats(x) for x in obj]
    if isinstance(obj, dict):
        return {k: normalize_floats(v) for k, v in obj.items()}
    return obj


def normalized_text(text):
    return json.dumps(normalize_floats(json.loads(text)), indent=2)


def compute(tmp_path, evals, roster, grades=None, *extra, name="out.json"):
    out = tmp_path / name
    argv = ["compute", "--evals", str(evals), "--roster", str(roster), "--out", str(out), *extra]
    if grades is not None:
        argv += ["--grades", str(grades)]
    return cli.main(argv), out


class TestCompute:
    def test_example5_golden(self, tmp_path):
        code, out = compute(tmp_path, EX5["evals"], EX5["roster"], EX5["grades"])
        assert code == 0
        assert normalized_text(out.read_text()) == normalized_text((FIXTURES / "example5_report.json").read_text())

    def test_golden_content(self):
        report = json.loads((FIXTURES / "example5_report.json").read_text())
        B = io.decode_matrix(report["auxiliary_matrix"])
        assert np.allclose(B, [[1, 2 / 3, 2 / 5], [3 / 2, 1, 3 / 5], [5 / 2, 5 / 3, 1]], atol=1e-11, rtol=0)
        assert [s["mechanism_share"] for s in report["students"]] == [0.2, 0.3, 0.5]
        assert report["qualifying_columns"] == [True, True, True]

    def test_pie_to_others(self, tmp_path):
        code, out = compute(
            tmp_path, FIXTURES / "example1_evals.csv", EX5["roster"], None, "--mechanism", "pie-to-others"
        )
        assert code == 0
        shares = [s["mechanism_share"] for s in json.loads(out.read_text())["students"]]
        assert np.allclose(shares, [4 / 9, 5 / 18, 5 / 18], atol=1e-11)

    def test_example6_weighted(self, tmp_path):
        code, out = compute(
            tmp_path, FIXTURES / "example6_evals.csv", FIXTURES / "roster4.csv", FIXTURES / "example6_grades.csv",
            "--max-grade", "4",
        )
        assert code == 0
        report = json.loads(out.read_text())
        B = io.decode_matrix(report["auxiliary_matrix"])
        assert B[0, 1] == pytest.approx(41 / 79, abs=1e-11)
        assert [s["report_grade"] for s in report["students"]] == [1.0, 0.0, 0.25, 0.75]

    def test_missing_student_is_imputed(self, tmp_path):
        evals = tmp_path / "e.csv"
        evals.write_text("evaluator_id,evaluatee_id,score\ns1,s2,3\ns1,s3,5\ns2,s1,2\ns2,s3,5\n")
        grades = tmp_path / "g.csv"
        grades.write_text("student_id,grade\ns1,1\ns2,1\ns3,0\n")
        code, out = compute(tmp_path, evals, EX5["roster"], grades)
        assert code == 0
        report = json.loads(out.read_text())
        assert report["imputed"] == ["s3"]
        assert report["students"][2]["submitted"] is False
        assert report["students"][2]["eval_error"] >= 1
        assert report["auxiliary_matrix"][0][1] == "undefined"
        assert report["qualifying_columns"] == [False, False, True]
        assert any("at least 3" in w for w in report["warnings"])
        assert sum(s["mechanism_share"] for s in report["students"]) == pytest.approx(1)

    def test_csv_and_text(self, tmp_path):
        code, out = compute(tmp_path, EX5["evals"], EX5["roster"], EX5["grades"], "--format", "csv", name="o.csv")
        assert code == 0
        rows = list(csv.DictReader(out.open()))
        assert [r["id"] for r in rows] == ["s1", "s2", "s3"]
        assert float(rows[2]["mechanism_share"]) == 0.5
        code, out = compute(tmp_path, EX5["evals"], EX5["roster"], EX5["grades"], "--format", "text", name="o.txt")
        assert code == 0 and "0.500000" in out.read_text()

    def test_roster_order_independent(self, tmp_path):
        base = json.loads(compute(tmp_path, FIXTURES / "example6_evals.csv", FIXTURES / "roster4.csv",
                                  FIXTURES / "example6_grades.csv", name="a.json")[1].read_text())
        rows = (FIXTURES / "roster4.csv").read_text().splitlines()
        body = rows[1:]
        random.Random(5).shuffle(body)
        roster = tmp_path / "r.csv"
        roster.write_text("\n".join([rows[0], *body]) + "\n")
        perm = json.loads(compute(tmp_path, FIXTURES / "example6_evals.csv", roster,
                                  FIXTURES / "example6_grades.csv", name="b.json")[1].read_text())
        assert [s["id"] for s in perm["students"]] == [r.split(",")[0] for r in body]
        by_id = {s["id"]: s for s in base["students"]}
        for s in perm["students"]:
            for key in ("mechanism_share", "eval_error", "final_score"):
                assert s[key] == pytest.approx(by_id[s["id"]][key], abs=1e-11)

    def test_evaluations_round_trip(self, tmp_path):
        code, out = compute(tmp_path, FIXTURES / "example6_evals.csv", FIXTURES / "roster4.csv",
                            FIXTURES / "example6_grades.csv")
        report = json.loads(out.read_text())
        roster = io.load_roster(FIXTURES / "roster4.csv")
        A, _ = io.load_evaluations(FIXTURES / "example6_evals.csv", roster)
        assert np.array_equal(io.decode_matrix(report["evaluations"]), A.entries)


class TestExitCodes:
    def test_validation_error(self, tmp_path, capsys):
        evals = tmp_path / "e.csv"
        evals.write_text("evaluator_id,evaluatee_id,score\ns1,s1,-3\n")
        code, out = compute(tmp_path, evals, EX5["roster"], EX5["grades"])
        assert code == 1 and not out.exists()
        diag = json.loads(capsys.readouterr().err)
        assert diag["error"] == "NegativeScore" and diag["line"] == "2"

    def test_mechanism_error(self, tmp_path, capsys):
        grades = tmp_path / "g.csv"
        grades.write_text("")
        code, out = compute(tmp_path, EX5["evals"], EX5["roster"], grades, "--default-zero-grades")
        assert code == 2 and not out.exists()
        assert json.loads(capsys.readouterr().err)["error"] == "NoInformedJudges"

    def test_io_error(self, tmp_path):
        code, out = compute(tmp_path, tmp_path / "nope.csv", EX5["roster"], EX5["grades"])
        assert code == 3 and not out.exists()

    def test_two_students_pie_only(self, tmp_path):
        roster = tmp_path / "r.csv"
        roster.write_text("id\na\nb\n")
        evals = tmp_path / "e.csv"
        evals.write_text("evaluator_id,evaluatee_id,score\na,b,1\nb,a,1\n")
        assert compute(tmp_path, evals, roster)[0] == 2
        assert compute(tmp_path, evals, roster, None, "--mechanism", "pie-to-others")[0] == 0


class TestSimulate:
    def run(self, tmp_path, scenario, name="sim.json"):
        out = tmp_path / name
        code = cli.main(["simulate", "--scenario", str(scenario), "--out", str(out)])
        return code, out

    def test_paper_scenario(self, tmp_path):
        code, out = self.run(tmp_path, FIXTURES / "paper_scenario.json")
        assert code == 0
        report = json.loads(out.read_text())
        assert report["accuracy"]["failures"] == 0
        row = report["manipulation"][0]
        assert row["deviation_share"] == pytest.approx(47 / 180, abs=1e-11)
        assert row["deviation_gain"] == pytest.approx(2 / 180, abs=1e-11)
        assert row["gain"] >= row["deviation_gain"]
        assert len(report["incentive"]) == 12

    def test_deterministic(self, tmp_path):
        a = self.run(tmp_path, FIXTURES / "paper_scenario.json", "a.json")[1].read_bytes()
        b = self.run(tmp_path, FIXTURES / "paper_scenario.json", "b.json")[1].read_bytes()
        assert a == b

    def test_many_trials(self, tmp_path):
        scenario = tmp_path / "s.json"
        scenario.write_text(json.dumps({"seed": 1, "accuracy": {"trials": 1000, "n_min": 3, "n_max": 8}}))
        code, out = self.run(tmp_path, scenario)
        assert code == 0 and json.loads(out.read_text())["accuracy"]["failures"] == 0

    def test_malformed(self, tmp_path, capsys):
        scenario = tmp_path / "s.json"
        scenario.write_text('{\n  "seed": 1,\n  "manipulation": [\n}\n')
        code, out = self.run(tmp_path, scenario)
        assert code == 1 and not out.exists()
        assert json.loads(capsys.readouterr().err)["line"] == "4"

    def test_bad_manipulator(self, tmp_path):
        scenario = tmp_path / "s.json"
        scenario.write_text(json.dumps({"manipulation": {"truth": [0.5, 0.5], "manipulator": "x"}}))
        assert self.run(tmp_path, scenario)[0] == 1

    def test_unknown_key(self, tmp_path):
        scenario = tmp_path / "s.json"
        scenario.write_text(json.dumps({"acuracy": {}}))
        assert self.run(tmp_path, scenario)[0] == 1
