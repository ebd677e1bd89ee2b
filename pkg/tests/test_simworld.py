import pytest

from epiplan.language import ground, parse
from epiplan.simworld import (
    ScriptedEvent,
    SimError,
    Simulator,
    parse_script,
)

from conftest import lit


SOURCE = """
(define (domain door)
  (:types door)
  (:fluents (open ?d - door) (ab_doOpen ?d - door) (mon_open ?d - door))
  (:action doOpen
    :parameters (?d - door)
    :effect (when (¬ab_doOpen ?d) (open ?d)))
  (:action doClose
    :parameters (?d - door)
    :executable (open ?d)
    :effect (¬open ?d))
  (:action senseOpen
    :parameters (?d - door)
    :observe (open ?d))
  (:action exoClosed
    :parameters (?d - door)
    :exogenous
    :executable (open ?d)
    :effect (¬open ?d)))
(define (problem p)
  (:objects d1 d2 - door)
  (:init (¬open d1) (¬open d2))
  (:goal weak (open d1)))
"""


@pytest.fixture
def gdom():
    dom, prob = parse(SOURCE)
    return ground(dom, prob)


def test_parse_script():
    events = parse_script("""
    # header comment
    at 5 exo exoClosed(d3)
    at 0 abnormal ab_doOpen(d1) true

    at 2 abnormal ab_doOpen(d1) false  # trailing comment
    """)
    assert events == [
        ScriptedEvent(5, "exo", "exoClosed(d3)", True),
        ScriptedEvent(0, "abnormal", "ab_doOpen(d1)", True),
        ScriptedEvent(2, "abnormal", "ab_doOpen(d1)", False),
    ]


@pytest.mark.parametrize("line", [
    "at x exo exoClosed(d3)",
    "at 5 boom exoClosed(d3)",
    "at 5 abnormal ab_doOpen(d1)",  # abnormal needs a value
    "exo exoClosed(d3)",
])
def test_parse_script_rejects(line):
    with pytest.raises(SimError):
        parse_script(line)


def test_initial_state(gdom):
    sim = Simulator(gdom)
    assert sim.state["open(d1)"] is False
    assert sim.state["ab_doOpen(d1)"] is False
    sim2 = Simulator(gdom, ("open(d2)",))
    assert sim2.state["open(d2)"] is True
    with pytest.raises(SimError):
        Simulator(gdom, ("nonsense",))


def test_script_target_validation(gdom):
    with pytest.raises(SimError):
        Simulator(gdom, (), [ScriptedEvent(0, "exo", "nope(d9)")])
    with pytest.raises(SimError):
        Simulator(gdom, (), [ScriptedEvent(0, "abnormal", "nope")])


def test_execute_applies_effects(gdom):
    sim = Simulator(gdom)
    result = sim.execute("doOpen(d1)")
    assert result.success
    assert sim.state["open(d1)"] is True
    assert sim.step_no == 1


def test_abnormality_blocks_effect(gdom):
    sim = Simulator(
        gdom, (), [ScriptedEvent(0, "abnormal", "ab_doOpen(d1)", True)]
    )
    assert sim.state["ab_doOpen(d1)"] is True
    sim.execute("doOpen(d1)")
    assert sim.state["open(d1)"] is False


def test_sensing_reads_pre_transition_state(gdom):
    sim = Simulator(gdom)
    result = sim.execute("senseOpen(d1)")
    code = gdom.encode(lit("open(d1)", False))
    assert result.sensed == [(code, 0)]


def test_physical_inexecutability_reported(gdom):
    sim = Simulator(gdom)
    result = sim.execute("doClose(d1)")  # door is closed
    assert not result.success
    assert "not executable" in result.reason
    assert sim.step_no == 1  # the step still advances


def test_scripted_exo_requires_physical_executability(gdom):
    # exoClosed(d1) needs the door open; with it closed the event fizzles
    events = [ScriptedEvent(0, "exo", "exoClosed(d1)")]
    sim = Simulator(gdom, (), events)
    sim.execute()
    assert sim.state["open(d1)"] is False
    assert not any(l.startswith("exo(") for l in sim.log)
    sim2 = Simulator(gdom, ("open(d1)",), events)
    sim2.execute()
    assert sim2.state["open(d1)"] is False
    assert "exo(exoClosed(d1),0)" in sim2.log


def test_monitor_emission(gdom):
    sim = Simulator(gdom, ("mon_open(d1)", "open(d1)"))
    out = sim.observe_monitored()
    open_idx = gdom.fluent_index["open(d1)"]
    assert out == [(open_idx * 2, 0)]
    sim.execute()
    out = sim.observe_monitored()
    assert out == [(open_idx * 2, 1)]
    assert Simulator(gdom).observe_monitored() == []


def test_inject(gdom):
    sim = Simulator(gdom, ("open(d1)",))
    sim.inject("exoClosed(d1)")
    assert sim.state["open(d1)"] is False
    assert sim.step_no == 0
    with pytest.raises(SimError):
        sim.inject("doOpen(d1)")  # not exogenous
    with pytest.raises(SimError):
        sim.inject("nope")


def test_determinism(gdom):
    def trajectory():
        sim = Simulator(
            gdom, ("mon_open(d1)",),
            [ScriptedEvent(1, "abnormal", "ab_doOpen(d1)", True)],
        )
        snaps = []
        for name in ("doOpen(d1)", "doOpen(d2)", None, "senseOpen(d2)"):
            sim.observe_monitored()
            sim.execute(name)
            snaps.append(sim.snapshot())
        return snaps, sim.log

    assert trajectory() == trajectory()


def test_snapshot_format(gdom):
    lines = Simulator(gdom).snapshot().strip().splitlines()
    assert lines == sorted(lines)
    assert "open(d1)=false" in lines
