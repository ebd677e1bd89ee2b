import importlib.resources

import pytest

from epiplan.cli import main


def data_path(name):
    return str(importlib.resources.files("epiplan.data").joinpath(name))


@pytest.fixture
def mini(tmp_path):
    path = tmp_path / "mini.epi"
    path.write_text("""
(define (domain mini)
  (:fluents a g)
  (:action s1 :effect a)
  (:action s2 :executable a :effect g))
(define (problem mini1)
  (:init (not a) (not g))
  (:goal weak g))
""")
    return str(path)


def test_validate_ok(capsys):
    rc = main(["validate", data_path("baall.epi")])
    assert rc == 0
    assert "ok:" in capsys.readouterr().out


def test_validate_violations(tmp_path, capsys):
    bad = tmp_path / "bad.epi"
    bad.write_text("""
(define (domain bad)
  (:fluents a)
  (:action x :effect a :observe a))
""")
    rc = main(["validate", str(bad)])
    assert rc == 1
    assert "senses and affects" in capsys.readouterr().out


def test_validate_missing_file():
    with pytest.raises(SystemExit) as exc:
        main(["validate", "/nonexistent/file.epi"])
    assert exc.value.code == 2


def test_validate_parse_error(tmp_path):
    broken = tmp_path / "broken.epi"
    broken.write_text("(define (domain x)")
    with pytest.raises(SystemExit) as exc:
        main(["validate", str(broken)])
    assert exc.value.code == 1


def test_plan_output(mini, capsys):
    rc = main(["plan", mini, "--horizon", "4"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "occ(s1,0,0)" in out
    assert "occ(s2,1,0)" in out
    assert "quality(0,100,100,2)" in out
    assert "horizon=2" in out


def test_plan_no_plan_within_horizon(mini, capsys):
    rc = main(["plan", mini, "--horizon", "1"])
    assert rc == 1
    assert "no weak plan" in capsys.readouterr().out


def test_run_plain(mini, tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("EPIPLAN_TRACE_DIR", str(tmp_path / "traces"))
    rc = main(["run", mini, "--max-horizon", "5"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "outcome: goal-achieved" in out
    trace = (tmp_path / "traces" / "mini1.trace").read_text()
    assert "decision(goal-achieved)" in trace
    assert "exec(s1,0,0)" in trace
    assert "occ(s2,1,0)" in trace


def test_run_with_blocking_script(mini, tmp_path, capsys, monkeypatch):
    # no such action in the mini domain: script validation fails cleanly
    script = tmp_path / "ev.script"
    script.write_text("at 0 exo nothere\n")
    monkeypatch.setenv("EPIPLAN_TRACE_DIR", str(tmp_path))
    rc = main(["run", mini, "--script", str(script)])
    assert rc == 1
    assert "script error" in capsys.readouterr().err


def test_run_missing_script(mini, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("EPIPLAN_TRACE_DIR", str(tmp_path))
    rc = main(["run", mini, "--script", str(tmp_path / "none.script")])
    assert rc == 2


def test_version_reports_backend(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "engine backend:" in out


def test_traces_are_reproducible(mini, tmp_path, monkeypatch, capsys):
    def one(sub):
        d = tmp_path / sub
        monkeypatch.setenv("EPIPLAN_TRACE_DIR", str(d))
        assert main(["run", mini, "--max-horizon", "5"]) == 0
        capsys.readouterr()
        return (d / "mini1.trace").read_text()

    assert one("a") == one("b")
