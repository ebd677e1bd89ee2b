"""Ground-truth world simulator for closed-loop runs.

The simulator keeps the *actual* value of every ground fluent, which the
agent never sees directly.  The agent interacts with it in steps:

  * ``execute(action)`` performs one endogenous action during step t.
    Sensing (knowledge propositions) reads the pre-transition state and is
    reported for step t.  Effect conditions are evaluated on the
    pre-transition state and all effects applied simultaneously, together
    with any scripted exogenous events for the step.
  * ``observe_monitored()`` reports the current value of every fluent
    whose monitor fluent is true, timestamped with the current step.
  * ``inject(action)`` applies an exogenous action's effects immediately,
    without advancing the step.

Scripted events come from a small line format::

    # comment
    at 5 exo exoClosed(d3)
    at 0 abnormal ab_doOpen(d1) true
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .kernel import CompiledDomain
from .language import GroundDomain, MONITOR_PREFIX, split_atom

__all__ = [
    "SimError",
    "ScriptedEvent",
    "ExecResult",
    "Simulator",
    "parse_script",
    "load_script",
]


class SimError(Exception):
    pass


@dataclass(frozen=True)
class ScriptedEvent:
    step: int
    kind: str  # "exo" | "abnormal"
    target: str  # ground action atom or ground fluent atom
    value: bool = True  # only meaningful for "abnormal"


@dataclass
class ExecResult:
    success: bool
    sensed: list = field(default_factory=list)  # (lit_code, step)
    reason: str = ""


_EVENT_RE = re.compile(
    r"^at\s+(\d+)\s+(exo|abnormal)\s+(\S+)(?:\s+(true|false))?$"
)


def parse_script(text):
    events = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _EVENT_RE.match(line)
        if m is None:
            raise SimError(f"bad event script line {lineno}: {raw!r}")
        step, kind, target, value = m.groups()
        if kind == "abnormal" and value is None:
            raise SimError(
                f"line {lineno}: 'abnormal' needs a true/false value"
            )
        events.append(
            ScriptedEvent(int(step), kind, target, value != "false")
        )
    return events


def load_script(path):
    with open(path, encoding="utf-8") as fh:
        return parse_script(fh.read())


class Simulator:
    """Mutable ground-truth world; one instance per run."""

    def __init__(self, gdom: GroundDomain, true_atoms=(), events=()):
        self.dom = (
            gdom if isinstance(gdom, CompiledDomain) else CompiledDomain(gdom)
        )
        g = self.dom.gdom
        self.state = {atom: False for atom in g.fluent_index}
        for atom in true_atoms:
            if atom not in self.state:
                raise SimError(f"unknown fluent atom '{atom}'")
            self.state[atom] = True
        # unscripted init literals default to their declared value
        for code in self.dom.init_codes:
            lit = g.decode(code)
            if lit.atom not in true_atoms:
                self.state[lit.atom] = lit.positive
        self.step_no = 0
        self.events = {}
        for ev in events:
            if ev.kind == "exo" and ev.target not in g.actions:
                raise SimError(f"unknown action '{ev.target}' in script")
            if ev.kind == "abnormal" and ev.target not in self.state:
                raise SimError(f"unknown fluent '{ev.target}' in script")
            self.events.setdefault(ev.step, []).append(ev)
        self.log = []
        self._apply_abnormals(0)

    # -- helpers ---------------------------------------------------------
    def _holds(self, lit):
        return self.state[lit.atom] == lit.positive

    def _fidx(self, atom):
        return self.dom.gdom.fluent_index[atom]

    def _apply_abnormals(self, step):
        for ev in self.events.get(step, ()):
            if ev.kind == "abnormal":
                self.state[ev.target] = ev.value
                self.log.append(f"abnormal({ev.target},{ev.value},{step})")

    def _effects_of(self, name):
        """Effects whose conditions hold in the current (pre) state."""
        act = self.dom.gdom.actions[name]
        fired = []
        for conds, eff in act.eps:
            if all(self._holds(c) for c in conds):
                fired.append(eff)
        return fired

    def executable(self, name):
        act = self.dom.gdom.actions.get(name)
        if act is None:
            raise SimError(f"unknown action '{name}'")
        return all(self._holds(l) for l in act.executability)

    # -- observation -----------------------------------------------------
    def observe_monitored(self):
        """Sensed atoms for every monitored fluent, at the current step."""
        g = self.dom.gdom
        out = []
        for fidx, mon in sorted(self.dom.monitor_of.items()):
            mon_atom = g.decode(mon * 2).atom
            if self.state[mon_atom]:
                atom = g.decode(fidx * 2).atom
                code = fidx * 2 + (0 if self.state[atom] else 1)
                out.append((code, self.step_no))
        return out

    # -- transitions -----------------------------------------------------
    def execute(self, name=None):
        """Run step ``step_no``: optional endogenous action plus scripted
        exogenous events, then advance.  ``name=None`` is a wait step."""
        t = self.step_no
        sensed = []
        fired = []
        ok = True
        reason = ""
        if name is not None:
            if not self.executable(name):
                ok = False
                reason = f"{name} not executable in the actual world"
            else:
                act = self.dom.gdom.actions[name]
                for atom in act.kps:
                    code = self._fidx(atom) * 2 + (
                        0 if self.state[atom] else 1
                    )
                    sensed.append((code, t))
                fired.extend(self._effects_of(name))
                self.log.append(f"exec({name},{t})")
        for ev in self.events.get(t, ()):
            if ev.kind == "exo":
                if self.executable(ev.target):
                    fired.extend(self._effects_of(ev.target))
                    self.log.append(f"exo({ev.target},{t})")
        for eff in fired:
            self.state[eff.atom] = eff.positive
        self.step_no = t + 1
        self._apply_abnormals(self.step_no)
        return ExecResult(ok, sensed, reason)

    def inject(self, name):
        """Apply an exogenous action's effects right now (between steps)."""
        act = self.dom.gdom.actions.get(name)
        if act is None:
            raise SimError(f"unknown action '{name}'")
        if not act.exogenous:
            raise SimError(f"'{name}' is not exogenous")
        for eff in self._effects_of(name):
            self.state[eff.atom] = eff.positive
        self.log.append(f"inject({name},{self.step_no})")

    # -- reporting -------------------------------------------------------
    def snapshot(self):
        lines = [
            f"{atom}={'true' if val else 'false'}"
            for atom, val in sorted(self.state.items())
        ]
        return "\n".join(lines) + "\n"
