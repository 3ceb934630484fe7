import json

import pytest

from rewritekit import cli

DEMO_PRESENTATION = "letters: a b\nab^2a^2b^2 = b\n"


@pytest.fixture()
def pres_file(tmp_path):
    path = tmp_path / "m.pres"
    path.write_text(DEMO_PRESENTATION)
    return str(path)


@pytest.fixture()
def system_file(tmp_path):
    path = tmp_path / "demo.rs"
    assert cli.main(["build", "--params", "1", "2", "2", "2",
                     "--out", str(path)]) == 0
    return str(path)


class TestExitCodes:
    def test_build_ok(self, tmp_path, capsys):
        assert cli.main(["build", "--params", "1", "2", "2", "2", "--verify"]) == 0
        assert "PASS" in capsys.readouterr().out

    def test_usage_error_on_zero_exponent(self, capsys):
        assert cli.main(["build", "--params", "0", "1", "1", "1"]) == 2

    def test_usage_error_on_unknown_flag(self, capsys):
        assert cli.main(["build", "--bogus"]) == 2

    def test_usage_error_without_command(self, capsys):
        assert cli.main([]) == 2

    def test_usage_error_on_bad_word(self, system_file, capsys):
        assert cli.main(["nf", "--system", system_file, "zz"]) == 2

    def test_usage_error_on_empty_range(self, capsys):
        assert cli.main(["grid", "--range", "3..2"]) == 2

    def test_check_failure_on_uncertifiable_endo_target(self, capsys):
        # a Case2 tuple never certifies complete, so endo analysis refuses
        assert cli.main(["endo", "--params", "2", "2", "3", "2",
                         "--map", "a=a,b=bab"]) == 1

    def test_budget_exhaustion_on_tiny_completion_limits(self, pres_file, capsys):
        assert cli.main(["complete", "--presentation", pres_file,
                         "--max-steps", "1", "--max-rules", "1"]) == 3

    def test_budget_exhaustion_on_tiny_oracle(self, pres_file, capsys):
        assert cli.main(["equal", "--presentation", pres_file, "ab^2", "b",
                         "--bound", "40", "--nodes", "10"]) == 3


class TestCommands:
    def test_nf_prints_normal_form(self, system_file, capsys):
        assert cli.main(["nf", "--system", system_file, "ab^2"]) == 0
        assert capsys.readouterr().out.strip() == "x^2b"

    def test_equal_unequal_within_bound(self, pres_file, capsys):
        assert cli.main(["equal", "--presentation", pres_file, "ab^2", "b",
                         "--bound", "9"]) == 0
        assert capsys.readouterr().out.strip() == "unequal-within-bound"

    def test_equal_with_certificate(self, pres_file, capsys):
        assert cli.main(["equal", "--presentation", pres_file,
                         "ab^2a^2b^2", "b", "--bound", "9"]) == 0
        assert "d=1" in capsys.readouterr().out

    def test_complete_writes_system(self, tmp_path, capsys):
        pres = tmp_path / "p.pres"
        pres.write_text("letters: a b\nabab = b\n")
        out = tmp_path / "out.rs"
        assert cli.main(["complete", "--presentation", str(pres),
                         "--out", str(out)]) == 0
        text = out.read_text()
        assert "abab -> b" in text and "ab^2 -> bab" in text

    def test_dehn_table(self, pres_file, capsys):
        assert cli.main(["dehn", "--presentation", pres_file, "--n", "5"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 6  # header + rows 1..5

    def test_build_case2_verify_reports_empirical(self, capsys):
        assert cli.main(["build", "--params", "2", "2", "3", "2",
                         "--verify", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        result = payload["result"]
        assert result["case"] == "Case2"
        assert result["system"]["certification"] == "locally-confluent"
        assert result["empirical_termination"]["all_halted"] is True
        assert result["equivalence"]["passed"] is True

    def test_grid_small(self, capsys):
        assert cli.main(["grid", "--range", "1..2",
                         "--checks", "completeness,equivalence"]) == 0
        out = capsys.readouterr().out
        assert "16 tuples" in out and "hard failure: False" in out

    def test_grid_probe_and_dehn(self, tmp_path, capsys):
        out_path = tmp_path / "rows.json"
        assert cli.main(["grid", "--range", "1..1",
                         "--checks", "completeness,probe,dehn",
                         "--dehn-n", "3", "--out", str(out_path)]) == 0
        rows = json.loads(out_path.read_text())["rows"]
        assert rows[0]["probe"] == "completed"
        assert rows[0]["length_non_increasing"] is True
        assert rows[0]["dehn"][-1][0] == 3

    def test_equal_space_minimal(self, pres_file, capsys):
        assert cli.main(["equal", "--presentation", pres_file,
                         "abbab", "baabb", "--bound", "40", "--space"]) == 0
        assert "s=11" in capsys.readouterr().out

    def test_endo_report(self, capsys):
        assert cli.main(["endo", "--params", "1", "2", "2", "2",
                         "--map", "a=a,b=bab", "--noninjective-bound", "8",
                         "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["result"]["lifts"] is True
        assert payload["result"]["surjectivity"] == {"a": "a", "b": "ab^2"}
        assert payload["result"]["witness"] is not None

    def test_hopf_demo(self, capsys):
        assert cli.main(["hopf-demo"]) == 0
        out = capsys.readouterr().out
        assert "non-hopfian" in out and "x^3bax^3b" in out


class TestReproducibility:
    def run_json(self, argv, capsys):
        assert cli.main(argv) == 0
        return capsys.readouterr().out

    def test_json_reports_are_byte_identical(self, pres_file, capsys):
        for argv in (
            ["build", "--params", "1", "2", "2", "2", "--verify", "--json"],
            ["equal", "--presentation", pres_file, "ab^2a^2b^2", "b",
             "--bound", "9", "--json"],
            ["dehn", "--presentation", pres_file, "--n", "4", "--json"],
            ["grid", "--range", "1..2", "--checks", "completeness", "--json"],
            ["hopf-demo", "--json"],
        ):
            first = self.run_json(argv, capsys)
            second = self.run_json(argv, capsys)
            assert first == second
            payload = json.loads(first)
            assert payload["schema"] == 1
            assert "budgets" in payload
