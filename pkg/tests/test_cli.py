import json
import subprocess
import sys

import pytest

from collatz2d import cli
from collatz2d.certificate import emit
from collatz2d.recurrence import RuleSpec

SECOND = ("13, 6, -7, -13, -10, 3, 13, 8, -5, -13, -9, -11, -10, 1, 11, 6, -5, -11, -8, 3, 11, 7, 9, 8, "
          "-1, -9, -5, -7, -6, 1, 7, 4, -3, -7, -5, -6, -1, 5, 2, -3, -5, -4, 1, 5, 3, 4, 1, -3, -1, -2, "
          "-1, 1, 0, -1")


def test_simulate_prints_trajectory(capsys):
    assert cli.main(["simulate", "--rule", "CL", "--seed", "13,6"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith(SECOND)
    assert "cycle (-1)" in out


def test_classify_then_verify(tmp_path, capsys):
    assert cli.main(["classify", "--rule", "CL", "--out", str(tmp_path)]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "FULL" in out
    js = tmp_path / "++++-+-+.json"
    cert = json.loads(js.read_text())
    assert cert["status"] == "FULL"
    assert sorted(map(len, cert["cycles"])) == [1, 1, 6]
    assert cli.main(["verify", str(js)]) == cli.EXIT_OK
    cert["cycles"][2][0] += 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cert))
    assert cli.main(["verify", str(js), str(bad)]) == cli.EXIT_VERIFY
    assert "FAIL" in capsys.readouterr().out


def test_structured_format(tmp_path, capsys):
    assert cli.main(["classify", "--rule", "(1,1,1,1)", "--out", str(tmp_path), "--format", "structured"]) == cli.EXIT_BOUND
    data = json.loads(capsys.readouterr().out)
    assert data["status"] == "FAILED" and data["detail"] == "bound-conjecture"


def test_output_dir_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    assert cli.main(["classify", "--rule", "E6"]) == cli.EXIT_OK
    assert (tmp_path / "env" / f"{RuleSpec.parse('E6').id}.json").exists()


def test_report_on_empty_manifest(capsys):
    assert cli.main(["report"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "FULL + BOUNDED_ONLY: 0" in out
    assert "open cases not proved: none" in out


@pytest.mark.parametrize(
    "argv",
    [["simulate", "--rule", "xyz", "--seed", "1,2"], ["simulate", "--rule", "CL", "--seed", "1"],
     ["classify"], ["frobnicate"], ["sweep", "--jobs", "two"]],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == cli.EXIT_USAGE


def test_modmap_command(capsys):
    assert cli.main(["modmap", "--seeds", "100"]) == cli.EXIT_OK
    assert "cycle (1,2)" in capsys.readouterr().out


SUBSET = ["CL", "E6", "(1,1,1,1)", "(-1,1,1,1)", "+-++-+-+", "++++-+++"]


def test_sweep_is_independent_of_jobs():
    rules = [RuleSpec.parse(r) for r in SUBSET]
    # the first two share an effective key with CL, so relabeling is exercised
    rules += [RuleSpec.from_id("-" + r.id[1:]) for r in rules[:2]]
    opts = {"budget": 60}
    a, _ = cli.sweep(opts, jobs=1, rules=rules)
    b, _ = cli.sweep(opts, jobs=2, rules=rules)
    assert list(a) == list(b)
    for rid in a:
        assert emit(a[rid]) == emit(b[rid])
    ma, mb = cli.manifest(a), cli.manifest(b)
    assert json.dumps(ma, sort_keys=True) == json.dumps(mb, sort_keys=True)


def test_relabeled_certificates_verify():
    from collatz2d.certificate import verify
    rules = [RuleSpec.parse("CL"), RuleSpec.from_id("-" + RuleSpec.parse("CL").id[1:])]
    certs, _ = cli.sweep({}, jobs=1, rules=rules)
    assert len(certs) == 2
    for c in certs.values():
        assert verify(c).ok


def test_failure_is_isolated(monkeypatch):
    from collatz2d import cli as mod

    def boom(*a, **k):
        raise RuntimeError("injected")

    monkeypatch.setattr(mod, "enumerate_sequences", boom)
    cert = mod.classify(RuleSpec.parse("CL"))
    assert cert.status == "FAILED" and cert.detail == "enumeration"
    assert cert.coeffs == ["1", "1"]


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "collatz2d", "simulate", "--rule", "CL", "--seed", "11,5", "--steps", "20"],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert p.stdout.startswith("11, 5, 8, 3, -5, -1, -3, -2, 1, 3, 2, -1")
