"""Online control loop: plan, execute, sense, explain, replan.

The Session owns the committed narrative (the epistemic tree plus the
record of what was actually executed and sensed) and talks to the planner
through a PlannerSession.  Each call to ``step`` yields one control
decision; ``run`` drives the loop against a world adapter until the goal
is known at the current node or the problem turns out unsolvable.

Unexpected change: when a sensed literal cannot be integrated consistently
(the current knowledge says the opposite at the sensed step), the
controller abduces an exogenous occurrence at the preceding step before
integrating.  Candidates are tried in deterministic lexicographic order;
the first one that restores consistency is adopted.  If none exists or
none fits, the affected branches are invalidated and a warning recorded —
the closed-world assumption behind abduction may simply not hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .kernel import (
    CompiledDomain,
    EpistemicTree,
    InconsistentKnowledge,
    KernelError,
    init_tree,
)
from .planner import ConditionalPlan, PlannerSession, SearchConfig, SearchLimit, assess

__all__ = [
    "ControllerError",
    "ControlDecision",
    "ExecutionNarrative",
    "Session",
    "Trace",
    "run",
]


class ControllerError(Exception):
    pass


@dataclass
class ExecutionNarrative:
    """What actually happened: the online ground truth."""

    execs: list = field(default_factory=list)  # (action, t, b)
    sensed: list = field(default_factory=list)  # (lit str, t)
    goals: list = field(default_factory=list)  # lit str
    explanations: list = field(default_factory=list)  # (action, t, b)


@dataclass(frozen=True)
class ControlDecision:
    kind: str  # execute | wait-for-horizon | replan | goal-achieved | unsolvable
    action: str = None
    t: int = None
    b: int = None

    def __str__(self):
        if self.kind == "execute":
            return f"decision(execute,{self.action},{self.t},{self.b})"
        return f"decision({self.kind})"


@dataclass
class Trace:
    log: list
    facts: str
    achieved: bool

    def text(self):
        return "\n".join(self.log) + "\n" + self.facts


class Session:
    """Single-writer control session over one planning problem."""

    def __init__(self, gdom, config: SearchConfig = None, goals=None):
        self.dom = (
            gdom if isinstance(gdom, CompiledDomain) else CompiledDomain(gdom)
        )
        self.config = config or SearchConfig()
        self.tree: EpistemicTree = init_tree(self.dom)
        self.goal_codes = (
            tuple(self.dom.gdom.encode(g) for g in goals)
            if goals is not None
            else self.dom.goal_codes
        )
        self.narrative = ExecutionNarrative(
            goals=[str(self.dom.gdom.decode(g)) for g in self.goal_codes]
        )
        self.t_cur = 0
        self.b_cur = 0
        self.plan: ConditionalPlan = None
        self.needs_replan = False
        self.psession = PlannerSession(
            self.tree, self.config, self.goal_codes
        )
        self.log = [f"goal({g})" for g in self.narrative.goals]
        self.done = False

    # ------------------------------------------------------------------
    # narrative updates
    # ------------------------------------------------------------------
    def _goal_known(self):
        t, b = self.t_cur, self.b_cur
        return all(self.tree.knows_code(g, t, t, b) for g in self.goal_codes)

    def commit_execution(self, action, t, b):
        if (t, b) != (self.t_cur, self.b_cur):
            raise ControllerError(
                f"execution at ({t},{b}) but current node is "
                f"({self.t_cur},{self.b_cur})"
            )
        if self.plan is None or self.plan.assignments.get((t, b)) != action:
            raise ControllerError(
                f"{action} is not the current plan's assignment at ({t},{b})"
            )
        if any(tt == t and bb == b for _, tt, bb in self.narrative.execs):
            raise ControllerError(f"node ({t},{b}) already executed")
        self.tree = self.tree.apply(action, t, b)
        self.narrative.execs.append((action, t, b))
        self.log.append(f"exec({action},{t},{b})")
        return self

    def advance(self):
        """Move the current node forward one step, following whichever
        projected outcome the integrated sensing results confirmed."""
        t, b = self.t_cur, self.b_cur
        tree = self.tree
        if tree.horizon < t + 1:
            tree = self.tree = tree.extend(t + 1)
        cands = [b] + [
            c for (tt, p, c) in tree.nextbr
            if tt == t and tree._descends_via(c, b, t)
        ]
        valid = [c for c in cands if tree.valid(t + 1, c)]
        sensed_here = tree.sensed.get(t, {})

        def agrees(c):
            lits = tree.sres.get((t, c), ())
            return sum(
                1
                for l in lits
                if sensed_here.get(l // 2) == (l % 2 == 0)
            )

        self.t_cur = t + 1
        if valid:
            # the branch whose projection matches reality, deepest first
            self.b_cur = max(valid, key=lambda c: (agrees(c), -c))
        return self

    def submit_sensed(self, literal, t):
        """Integrate a real sensing result, abducing an exogenous
        explanation first if it contradicts current knowledge."""
        lit_s = str(literal)
        self.log.append(f"sensed({lit_s},{t})")
        self.narrative.sensed.append((lit_s, t))
        code = self.dom.gdom.encode(literal)
        try:
            self.tree = self.tree.sense_result(literal, t)
        except InconsistentKnowledge:
            self._explain_and_integrate(literal, t, code)
        if self._plan_disturbed():
            self.plan = None
            self.needs_replan = True
        return self

    def _plan_disturbed(self):
        if self.plan is None:
            return False
        # replan when a node the plan relies on has been invalidated;
        # nodes beyond the narrative horizon cannot have been invalidated
        for (t, b) in self.plan.assignments:
            if (
                self.t_cur <= t <= self.tree.horizon
                and not self.tree.valid(t, b)
            ):
                return True
        return False

    def explain(self, literal, t):
        """Candidates per the abduction rule: exogenous actions with an
        effect proposition for the sensed literal, minus literals already
        produced by an endogenous action executed at t-1."""
        dom = self.dom
        code = dom.gdom.encode(literal)
        endo_effs = set()
        for action, tt, bb in self.narrative.execs:
            if tt == t - 1:
                for e in dom.action_eps[action]:
                    endo_effs.add(dom.ep_effs[e])
        if code in endo_effs:
            return []
        return sorted(
            name
            for name in dom.exogenous
            if any(dom.ep_effs[e] == code for e in dom.action_eps[name])
        )

    def _explain_and_integrate(self, literal, t, code):
        candidates = self.explain(literal, t)
        targets = sorted(
            b
            for b in self.tree.leaves(t - 1)
            if self.tree.knows_code(code ^ 1, t - 1, t - 1, b)
        ) or [self.b_cur]
        for name in candidates:
            try:
                trial = self.tree
                for b in targets:
                    trial = trial.apply(
                        name, t - 1, b, check_executability=False
                    )
                trial = trial.sense_result(literal, t)
            except (InconsistentKnowledge, KernelError):
                continue
            self.tree = trial
            for b in targets:
                self.narrative.explanations.append((name, t - 1, b))
                self.log.append(f"explain({name},{t - 1},{b})")
            self.log.append(
                "warning(explanation adopted under closed-world assumption)"
            )
            self.plan = None
            self.needs_replan = True
            return
        # unexplained: fail soft - drop the contradicted branches
        self.log.append(f"warning(unexplained change {literal} at {t})")
        tree = self.tree._clone()
        for b in targets:
            tree.brinvalid.add((t - 1, b))
        tree._close()
        self.tree = tree
        self.plan = None
        self.needs_replan = True

    # ------------------------------------------------------------------
    # decisions
    # ------------------------------------------------------------------
    def step(self):
        t, b = self.t_cur, self.b_cur
        if not self.tree.valid(t, b):
            self.done = True
            return self._emit(ControlDecision("unsolvable"))
        if self._goal_known():
            self.done = True
            return self._emit(ControlDecision("goal-achieved"))
        if self.needs_replan:
            self.needs_replan = False
            return self._emit(ControlDecision("replan"))
        if self.plan is not None:
            action = self.plan.assignments.get((t, b))
            if action is not None:
                return self._emit(ControlDecision("execute", action, t, b))
            # reality left the plan's lineage: plan is useless now
            self.plan = None
            return self._emit(ControlDecision("replan"))
        # no plan: search at the present horizon, extend on failure
        self.psession.tree = self.tree
        self.psession.start = (t, b)
        if self.psession.horizon <= t:
            self.psession.horizon = t + 1
        try:
            plan = self.psession.find()
        except SearchLimit as exc:
            self.log.append(f"warning({exc})")
            plan = None
            self.done = True
            return self._emit(ControlDecision("unsolvable"))
        if plan is None:
            try:
                self.psession.extend_horizon()
            except SearchLimit:
                self.done = True
                return self._emit(ControlDecision("unsolvable"))
            return self._emit(ControlDecision("wait-for-horizon"))
        self.plan = plan
        quality = assess(plan)
        body = ";".join(
            plan.serialize().splitlines()
            + [str(quality), f"horizon={self.psession.horizon}"]
        )
        self.log.append("plan{" + body + "}")
        action = plan.assignments.get((t, b))
        if action is None:  # goal already known along another route
            return self._emit(ControlDecision("replan"))
        return self._emit(ControlDecision("execute", action, t, b))

    def _emit(self, decision):
        self.log.append(str(decision))
        return decision


def run(session: Session, world, max_iterations=10_000):
    """Closed-loop driver: decisions against a world adapter."""
    g = session.dom.gdom
    achieved = False
    for _ in range(max_iterations):
        for code, t in world.observe_monitored():
            session.submit_sensed(g.decode(code), t)
        decision = session.step()
        if decision.kind == "goal-achieved":
            achieved = True
            break
        if decision.kind == "unsolvable":
            break
        if decision.kind == "execute":
            session.commit_execution(decision.action, decision.t, decision.b)
            result = world.execute(decision.action)
            if not result.success:
                session.log.append(f"warning({result.reason})")
            for code, t in result.sensed:
                session.submit_sensed(g.decode(code), t)
            session.advance()
        # wait-for-horizon and replan just loop again
    else:
        raise ControllerError("iteration limit reached")
    return Trace(list(session.log), session.tree.export_trace(), achieved)
