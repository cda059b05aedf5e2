import io
import json
import shutil
import subprocess
import sys

import pytest

from dialectica import cli

SPEC_INPUT = ("(forall x:U. exists v:V. p(x,v)) -> "
              "(exists u:U. forall y:Y. q(u,y))")
SPEC_OUTPUT = ("exists u0:(U -> V) -> U. exists u1:(U -> V) * Y -> U. "
               "forall x0:U -> V. forall x1:Y. "
               "p(u1 @ <x0, x1>, x0 @ (u1 @ <x0, x1>)) -> q(u0 @ x0, x1)")


def run(capsys, *argv):
    try:
        code = cli.main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.fixture(scope="module")
def pow_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("doctrines") / "pow.json"
    code = cli.main(["examples", "powerset", "--size", "2",
                     "--out", str(path)])
    assert code == 0
    return str(path)


@pytest.fixture(scope="module")
def anti_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("doctrines") / "anti.json"
    code = cli.main(["examples", "kripke", "--frame", "antichain2",
                     "--size", "2", "--out", str(path)])
    assert code == 0
    return str(path)


class TestTranslate:
    def test_golden_translation(self, capsys):
        data = run_json(capsys, "translate", "--formula", SPEC_INPUT)
        assert data["command"] == "translate"
        assert data["formula"] == SPEC_OUTPUT
        assert [w["name"] for w in data["witnesses"]] == ["u0", "u1"]
        assert [c["name"] for c in data["counters"]] == ["x0", "x1"]
        assert data["witnesses"][0]["sort"] == "(U -> V) -> U"
        assert "->" in data["matrix"] and "exists" not in data["matrix"]

    def test_output_is_deterministic(self, capsys):
        first = run(capsys, "translate", "--formula", SPEC_INPUT)
        second = run(capsys, "translate", "--formula", SPEC_INPUT)
        assert first == second

    def test_text_format_prints_the_formula(self, capsys):
        code, out, _ = run(capsys, "translate", "--formula",
                           "exists x:X. p(x)", "--format", "text")
        assert code == 0
        assert "exists u0:X. p(u0)" in out
        assert not out.lstrip().startswith("{")

    def test_latex_format_switches_notation(self, capsys):
        data = run_json(capsys, "translate", "--formula",
                        "exists x:X. p(x)", "--format", "latex")
        assert "\\exists" in data["formula"]

    def test_parse_error_exits_2(self, capsys):
        code, _, err = run(capsys, "translate", "--formula", "p(")
        assert code == 2
        assert err.startswith("error: formula:")


class TestChain:
    def test_six_steps_with_fixed_justifications(self, capsys):
        data = run_json(capsys, "chain", "--formula",
                        "(exists x:X. p(x)) -> (exists y:Y. q(y))")
        steps = data["steps"]
        assert [s["index"] for s in steps] == [0, 1, 2, 3, 4, 5]
        assert [s["justification"] for s in steps] == [
            [], ["ClassicalEquiv"], ["IPStar"], ["IntuitionisticEquiv"],
            ["MP"], ["AC", "AC"]]
        assert steps[5]["formula"] == (
            "exists V0:X -> Y. forall u0:X. p(u0) -> q(V0 @ u0)")
        assert all("formula" in s for s in steps)

    def test_latex_flag_keeps_the_record_shape(self, capsys):
        data = run_json(capsys, "chain", "--latex", "--formula",
                        "(exists x:X. p(x)) -> (exists y:Y. q(y))")
        steps = data["steps"]
        assert [s["index"] for s in steps] == [0, 1, 2, 3, 4, 5]
        assert all("\\" in s["formula"] for s in steps[1:])

    def test_non_implication_is_a_usage_error(self, capsys):
        code, _, err = run(capsys, "chain", "--formula", "exists x:X. p(x)")
        assert code == 2
        assert "error:" in err


class TestDoctrineCommands:
    def test_check_passes_on_the_powerset_example(self, capsys, pow_path):
        data = run_json(capsys, "doctrine", "check", "--doctrine", pow_path)
        assert data["passed"] is True
        assert data["laws"]["passed"] is True
        for direction in ("exists", "forall"):
            assert data["quantifiers"][direction]["passed"] is True
            assert data["quantifiers"][direction]["beckChevalley"]["passed"] \
                is True

    def test_godel_reports_five_parts(self, capsys, pow_path):
        data = run_json(capsys, "doctrine", "godel", "--doctrine", pow_path)
        assert data["passed"] is True
        assert data["parts"] == {
            "cartesian_closed": True,
            "existential_universal": True,
            "enough_existential_free": True,
            "existential_free_stable_under_forall": True,
            "subdoctrine_enough_universal_free": True,
        }
        assert data["sideConditions"]["failures"] == []
        assert data["sideConditions"]["topExistentialFree"] == {
            "1": True, "A": True, "B": True}

    def test_godel_reads_a_generated_doctrine_from_stdin(self, capsys,
                                                         monkeypatch):
        code, out, _ = run(capsys, "examples", "powerset", "--size", "2",
                           "--pipe")
        assert code == 0
        monkeypatch.setattr(sys, "stdin", io.StringIO(out))
        data = run_json(capsys, "doctrine", "godel")
        assert data["passed"] is True
        assert data["doctrine"] == "powerset-2x2"

    def test_antichain_side_conditions_carry_witnesses(self, capsys,
                                                       anti_path):
        data = run_json(capsys, "doctrine", "godel", "--doctrine", anti_path)
        assert data["passed"] is True  # the five parts all hold
        side = data["sideConditions"]
        assert side["topExistentialFree"] == {"1": False, "A": False,
                                              "B": False}
        assert side["bottomQuantifierFree"] == {"1": False, "A": False,
                                                "B": False}
        assert len(side["failures"]) == 6
        failure = side["failures"][0]
        assert failure["condition"] == "top existential-free"
        assert failure["object"] == "1"
        witness = failure["witness"]
        assert witness["pullbackAlong"] == "1->1#0"
        assert witness["cover"] == "{a0@w0, a1@w1}"
        assert witness["partner"] == "A"

    def test_free_census(self, capsys, pow_path):
        data = run_json(capsys, "doctrine", "free", "--doctrine", pow_path)
        rows = {r["object"]: r for r in data["census"]}
        assert rows["A"]["predicates"] == 4
        assert rows["A"]["existentialFree"] == 4
        assert rows["A"]["quantifierFree"] == 4
        assert rows["1"]["topExistentialFree"] is True

    def test_free_single_predicate_query(self, capsys, pow_path):
        data = run_json(capsys, "doctrine", "free", "--doctrine", pow_path,
                        "--predicate", "A:3")
        assert data["object"] == "A"
        assert data["existentialFree"] is True
        assert "predicate" in data

    def test_adjoints_lists_both_directions(self, capsys, pow_path):
        data = run_json(capsys, "doctrine", "adjoints", "--doctrine",
                        pow_path)
        rows = data["projections"]
        assert rows
        for row in rows:
            assert row["exists"]["found"] is True
            assert row["forall"]["found"] is True


class TestDialComplete:
    def test_terminal_fibre_payload(self, capsys, pow_path):
        data = run_json(capsys, "dial", "complete", "--doctrine", pow_path,
                        "--fibre", "1", "--bound", "1,2")
        assert data["total"] == 82
        assert data["classes"] == 2
        assert data["preorder"]["passed"] is True
        assert data["preorder"]["reflexiveFailures"] == []
        assert list(data["quadruples"][0]) == ["I", "X", "U", "alpha"]
        assert len(data["matrix"]) == 82
        assert all(len(row) == 82 for row in data["matrix"])
        assert len(data["witnessPairs"]) <= 8
        for rec in data["witnessPairs"]:
            assert set(rec) == {"from", "to", "pair"}
            assert set(rec["pair"]) == {"f0", "f1"}

    def test_matrix_suppressed_when_listing_is_truncated(self, capsys,
                                                         pow_path):
        data = run_json(capsys, "dial", "complete", "--doctrine", pow_path,
                        "--fibre", "1", "--bound", "1,2", "--list", "5")
        assert len(data["quadruples"]) == 5
        assert data["matrix"] is None

    def test_unknown_fibre_is_an_input_error(self, capsys, pow_path):
        code, _, err = run(capsys, "dial", "complete", "--doctrine", pow_path,
                           "--fibre", "Z")
        assert code == 2
        assert "error:" in err


class TestPrinciples:
    def test_single_rule_pass(self, capsys, pow_path):
        data = run_json(capsys, "principles", "--doctrine", pow_path,
                        "--rule", "markov")
        assert data["passed"] is True
        assert data["mode"] == "strict"
        assert [r["rule"] for r in data["reports"]] == ["markov"]
        assert data["reports"][0]["verdict"] == "pass"

    def test_failed_hypothesis_exits_1(self, capsys, anti_path):
        code, out, _ = run(capsys, "principles", "--doctrine", anti_path,
                           "--rule", "markov")
        assert code == 1
        data = json.loads(out)
        assert data["passed"] is False
        assert data["reports"][0]["verdict"] == "hypothesis-failed"

    def test_diagnostic_mode_counts_violations(self, capsys, anti_path):
        code, out, _ = run(capsys, "principles", "--doctrine", anti_path,
                           "--rule", "markov", "--diagnostic")
        assert code == 1
        data = json.loads(out)
        assert data["mode"] == "diagnostic"
        assert data["reports"][0]["verdict"] == "fail"
        assert len(data["reports"][0]["violations"]) == 132

    def test_parallel_jobs_match_serial_output(self, capsys, pow_path):
        serial = run(capsys, "principles", "--doctrine", pow_path,
                     "--rule", "ip", "--jobs", "1")
        parallel = run(capsys, "principles", "--doctrine", pow_path,
                       "--rule", "ip", "--jobs", "4")
        assert serial == parallel


class TestExamples:
    def test_out_writes_the_doctrine_file(self, tmp_path, capsys):
        target = tmp_path / "chain.json"
        code, _, _ = run(capsys, "examples", "kripke", "--frame", "chain2",
                         "--sizes", "2,2", "--out", str(target))
        assert code == 0
        data = json.loads(target.read_text())
        assert data["name"] == "kripke-chain2-2x2"

    def test_pipe_streams_to_stdout(self, capsys):
        code, out, _ = run(capsys, "examples", "powerset", "--size", "2",
                           "--pipe")
        assert code == 0
        assert json.loads(out)["name"] == "powerset-2x2"

    def test_generated_json_is_byte_stable(self, capsys):
        first = run(capsys, "examples", "powerset", "--size", "2", "--pipe")
        second = run(capsys, "examples", "powerset", "--size", "2", "--pipe")
        assert first == second

    def test_unknown_frame_is_an_input_error(self, capsys):
        code, _, err = run(capsys, "examples", "kripke", "--frame", "blob")
        assert code == 2
        assert "error:" in err


class TestErrorChannels:
    def test_unreadable_input_message(self, capsys, tmp_path):
        missing = str(tmp_path / "gone.json")
        code, _, err = run(capsys, "doctrine", "check", "--doctrine", missing)
        assert code == 2
        assert err.startswith(f"error: cannot read input: {missing}:")

    def test_malformed_doctrine_message(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"universe": [')
        code, _, err = run(capsys, "doctrine", "check", "--doctrine",
                           str(bad))
        assert code == 2
        assert err.startswith(f"error: malformed doctrine JSON: {bad}:")

    def test_doctrine_json_without_the_right_shape(self, capsys, tmp_path):
        bad = tmp_path / "list.json"
        bad.write_text("[1, 2, 3]")
        code, _, err = run(capsys, "doctrine", "check", "--doctrine",
                           str(bad))
        assert code == 2
        assert err.startswith("error: malformed doctrine JSON:")

    def test_cap_exceeded_message(self, capsys, pow_path):
        code, _, err = run(capsys, "doctrine", "free", "--doctrine", pow_path,
                           "--cap", "3")
        assert code == 2
        assert err.startswith("error: cap exceeded:")

    def test_latex_is_restricted_to_formula_commands(self, capsys, pow_path):
        code, _, err = run(capsys, "doctrine", "check", "--doctrine",
                           pow_path, "--format", "latex")
        assert code == 2
        assert "latex" in err

    def test_invalid_jobs_and_cap_values(self, capsys):
        code, _, err = run(capsys, "translate", "--formula", "p()",
                           "--jobs", "0")
        assert code == 2
        code, _, err = run(capsys, "translate", "--formula", "p()",
                           "--cap", "0")
        assert code == 2

    def test_unknown_subcommand_exits_2(self, capsys):
        code, _, _ = run(capsys, "frobnicate")
        assert code == 2

    def test_missing_subcommand_exits_2(self, capsys):
        code, _, _ = run(capsys)
        assert code == 2


class TestInstalledEntryPoint:
    @pytest.mark.skipif(shutil.which("dialectica") is None,
                        reason="console script not on PATH")
    def test_console_script_translates(self):
        out = subprocess.run(
            ["dialectica", "translate", "--formula", "exists x:X. p(x)"],
            capture_output=True, text=True, check=True)
        data = json.loads(out.stdout)
        assert data["formula"] == "exists u0:X. p(u0)"

    @pytest.mark.skipif(shutil.which("dialectica") is None,
                        reason="console script not on PATH")
    def test_process_runs_are_byte_identical(self, pow_path):
        cmd = ["dialectica", "doctrine", "godel", "--doctrine", pow_path]
        first = subprocess.run(cmd, capture_output=True, check=True)
        second = subprocess.run(cmd, capture_output=True, check=True)
        assert first.stdout == second.stdout
