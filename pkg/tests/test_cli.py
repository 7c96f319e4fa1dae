import subprocess
import sys

import pytest

from sitrewrite.cli import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_PARSE, EXIT_USAGE, main, run


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    root = tmp_path_factory.mktemp("dom")
    out = {}
    for key, args in {"switches3": ["switches", "--n", "3"],
                      "indicator3": ["switches", "--n", "3", "--variant", "indicator"],
                      "hanoi3": ["hanoi", "--n", "3"],
                      "river3": ["river", "--n", "3"],
                      "blocks3": ["blocks", "--n", "3"]}.items():
        path = root / f"{key}.dom"
        status, lines = run(["domain", *args, "--emit", str(path)])
        assert status == EXIT_OK and lines == [f"wrote {path}"]
        out[key] = str(path)
    return out


class TestCommands:
    def test_plan_switches(self, files):
        status, lines = run(["plan", files["switches3"]])
        assert status == EXIT_OK
        assert lines == ["action turn_on(1)", "action turn_on(2)", "action turn_off(3)", "plan_length 3"]

    def test_plan_trace(self, files):
        status, lines = run(["plan", files["hanoi3"], "--trace"])
        assert status == EXIT_OK
        k = int(lines[lines.index("plan_length 7")].split()[1])
        assert k == 7
        assert sum(line.startswith("step ") for line in lines) >= 7

    def test_plan_no_optimize(self, files):
        status, lines = run(["plan", files["hanoi3"], "--no-optimize"])
        assert status == EXIT_OK and lines[-1] == "plan_length 13"

    def test_plan_no_plan(self, files, tmp_path):
        text = open(files["blocks3"]).read().replace(
            "goal: f(t(bot,p1),f(t(g(b3,g(b2,g(b1,bot))),p2),bot))",
            "goal: f(t(bot,p1),f(t(g(b1,g(b2,g(b3,bot))),p2),bot))")
        path = tmp_path / "stuck.dom"
        path.write_text(text)
        assert run(["plan", str(path)]) == (EXIT_FAIL, ["no_plan"])

    def test_plan_needs_ends(self, tmp_path, files):
        path = tmp_path / "noends.dom"
        path.write_text("\n".join(l for l in open(files["switches3"]).read().splitlines()
                                  if not l.startswith(("start", "goal"))) + "\n")
        status, lines = run(["plan", str(path)])
        assert status == EXIT_PARSE

    def test_oracle(self, files):
        status, lines = run(["oracle", files["hanoi3"]])
        assert status == EXIT_OK and lines[-1] == "plan_length 7" and len(lines) == 8

    def test_check(self, files):
        status, lines = run(["check", files["hanoi3"]])
        assert status == EXIT_OK
        assert lines == ["eq1 surjectivity PASS", "eq2 closure PASS",
                         "eq3 rearrangement-equivalence PASS", "eq4 action-soundness PASS",
                         "eq5 action-completeness PASS"]

    def test_check_failure(self, files, tmp_path):
        text = "".join(l for l in open(files["hanoi3"]).readlines()
                       if l != "rule f(1,bot) -> f(2,bot)\n")
        path = tmp_path / "broken.dom"
        path.write_text(text)
        status, lines = run(["check", str(path)])
        assert status == EXIT_FAIL and lines[4].startswith("eq5 action-completeness FAIL")

    @pytest.mark.parametrize("level,count", [(0, 24), (1, 2), (2, 2)])
    def test_synth(self, files, level, count):
        status, lines = run(["synth", files["switches3"], "--level", str(level)])
        assert status == EXIT_OK and lines[-1] == f"rule_count {count}"
        assert all(l.startswith("rule ") for l in lines[:-1])

    def test_complete(self, files):
        status, lines = run(["complete", files["hanoi3"]])
        assert status == EXIT_OK
        assert "rule f(2,bot) -> f(1,bot)" in lines
        assert "status saturated" in lines
        keys = [l.split()[0] for l in lines[-3:]]
        assert keys == ["cps_generated", "cps_kept", "rewrite_ops"]

    def test_complete_budget(self, files):
        status, lines = run(["complete", files["river3"], "--max-cps", "10", "--max-term-size", "30"])
        assert status == EXIT_INCONCLUSIVE
        assert "status budget-exhausted" in lines

    def test_check_support(self, files):
        status, lines = run(["check-support", files["switches3"], "off"])
        assert status == EXIT_OK and lines[0] == "true"
        assert lines[1].startswith("certificate context=")
        status, lines = run(["check-support", files["hanoi3"], "1"])
        assert status == EXIT_FAIL and lines[0] == "false"

    def test_domain_stdout(self):
        status, lines = run(["domain", "switches", "--n", "2", "--emit", "-"])
        assert status == EXIT_OK and lines[0].startswith("domain: switches n=2")


class TestExitCodes:
    def test_usage(self):
        assert run(["frobnicate"])[0] == EXIT_USAGE
        assert run(["synth"])[0] == EXIT_USAGE
        assert run(["domain", "hanoi", "--n", "99", "--emit", "-"])[0] == EXIT_USAGE

    def test_missing_file(self):
        assert run(["plan", "/nonexistent/x.dom"])[0] == EXIT_USAGE

    def test_parse_error(self, tmp_path):
        path = tmp_path / "bad.dom"
        path.write_text("signature: f/1\n")
        status, lines = run(["check", str(path)])
        assert status == EXIT_PARSE and "prec" in lines[0]

    def test_no_theory(self, tmp_path):
        path = tmp_path / "bare.dom"
        path.write_text("signature: f/1 a/0\nprec: f > a\nrule f(?x) -> ?x\n")
        assert run(["check", str(path)])[0] == EXIT_PARSE
        assert run(["complete", str(path)])[0] == EXIT_OK

    def test_main_prints(self, files, capsys):
        assert main(["oracle", files["switches3"]]) == EXIT_OK
        assert capsys.readouterr().out.splitlines()[-1] == "plan_length 3"

    def test_module_entry_point(self, files):
        proc = subprocess.run([sys.executable, "-m", "sitrewrite", "oracle", files["hanoi3"]],
                              capture_output=True, text=True)
        assert proc.returncode == 0 and proc.stdout.splitlines()[-1] == "plan_length 7"

    def test_determinism(self, files):
        assert run(["plan", files["river3"]]) == run(["plan", files["river3"]])
