"""Weak conditional plan search, quality assessment and plan selection.

The search walks a single root-to-leaf lineage of the projected transition
tree: at every step it picks one executable action (or none, implicitly, by
stopping) and, when the action senses an unknown fluent, commits to one of
the projected outcomes.  A weak plan exists iff some lineage reaches a
state in which all weak goals are known, which makes single-lineage search
complete for weak planning.

Search is depth-first with iterative horizon deepening, so the first plan
ever returned is minimal in horizon.  Visited epistemic states are
memoized; the memo key keeps only the suffix of the knowledge slice that
can still influence future derivations (everything from the earliest
"live" effect application onward - an application is live while either its
effect or one of its conditions is still unknown, since only those can
feed later postdiction).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import engine
from .kernel import EpistemicTree

__all__ = [
    "SearchConfig",
    "ConditionalPlan",
    "PlanQuality",
    "exo_budget",
    "find_weak_plan",
    "assess",
    "select_best",
    "PlannerSession",
]


@dataclass(frozen=True)
class SearchConfig:
    exo_n: int = 4
    exo_mode: str = "modulo"  # or "division"
    max_horizon: int = 20
    node_limit: int = 2_000_000
    use_memo: bool = True

    def __post_init__(self):
        if self.exo_n < 1:
            raise ValueError("exo_n must be >= 1")
        if self.exo_mode not in ("modulo", "division"):
            raise ValueError("exo_mode must be 'modulo' or 'division'")
        if self.max_horizon < 1:
            raise ValueError("max_horizon must be >= 1")


def exo_budget(t, config: SearchConfig):
    """Number of exogenous occurrences admitted at planning horizon t."""
    if config.exo_mode == "modulo":
        return t % config.exo_n
    return t // config.exo_n


@dataclass(frozen=True, order=True)
class PlanQuality:
    num_exo: int
    strength: int  # percent, floor(100*G/L)
    m_value: int  # percent, floor(100*M/N)
    num_actions: int

    def sort_key(self):
        # minimal exo, maximal strength, maximal m-value, minimal actions
        return (self.num_exo, -self.strength, -self.m_value, self.num_actions)

    def __str__(self):
        return (
            f"quality({self.num_exo},{self.strength},"
            f"{self.m_value},{self.num_actions})"
        )


@dataclass
class ConditionalPlan:
    assignments: dict  # (t, b) -> ground action name
    horizon: int
    goal_node: tuple  # (t, b) where the goal is known in the induced tree
    tree: EpistemicTree = None  # induced tree (narrative + plan, closed)

    def serialize(self):
        # all occurrences of the induced tree: committed narrative prefix,
        # adopted exogenous occurrences, and the new assignments
        if self.tree is not None:
            lines = [
                f"occ({n},{t},{b})"
                for (t, b), names in sorted(self.tree.occs.items())
                for n in names
            ]
        else:
            lines = [
                f"occ({a},{t},{b})"
                for (t, b), a in sorted(self.assignments.items())
            ]
        return "\n".join(lines)

    def serialize_with_quality(self, quality):
        return self.serialize() + "\n" + str(quality) + "\n"


class SearchLimit(Exception):
    pass


class _Searcher:
    def __init__(self, tree, config, goals, start):
        self.tree = tree
        self.dom = tree.dom
        self.config = config
        self.goals = goals
        self.t0, self.b0 = start
        tree._ensure_closed()
        occs, _ = tree._lineage_inputs(self.b0)
        self.base_applies = tuple(
            (t, ep)
            for t, name in occs
            for ep in self.dom.action_eps[name]
        )
        self.base_exo = tree.exo_count()
        self.k0 = frozenset(tree.levels[self.b0][self.t0])
        self.action_order = sorted(self.dom.action_eps)
        self.nodes = 0

    # -- state classification helpers -----------------------------------
    def _live_floor(self, known, applies, t):
        nlits = self.dom.nlits
        floor = t
        for step, ep in applies:
            eff = self.dom.ep_effs[ep]
            nxt = (step + 1) * nlits
            base = step * nlits
            live = (
                nxt + eff not in known and nxt + (eff ^ 1) not in known
            ) or any(
                base + c not in known and base + (c ^ 1) not in known
                for c in self.dom.ep_conds[ep]
            )
            if live and step < floor:
                floor = step
        for group in self.dom.oneof_codes:
            if any(
                l not in known and (l ^ 1) not in known for l in group
            ):
                floor = 0
                break
        return floor

    def _memo_key(self, known, applies, t):
        nlits = self.dom.nlits
        w = self._live_floor(known, applies, t)
        lo = w * nlits
        return (
            t,
            frozenset(a for a in known if a >= lo),
            frozenset(p for p in applies if p[0] >= w),
        )

    def _relaxed_distance(self, known, t, cap):
        """Admissible lower bound on the steps still needed: delete-free
        reachability over literals, unknown fluents taken as either value."""
        dom = self.dom
        nlits = dom.nlits
        base = t * nlits
        reach = set()
        for lit in range(0, nlits, 2):
            if base + lit in known:
                reach.add(lit)
            elif base + lit + 1 in known:
                reach.add(lit + 1)
            else:
                reach.add(lit)
                reach.add(lit + 1)
        for level in range(cap + 1):
            if all(g in reach for g in self.goals):
                return level
            new = []
            for name in self.action_order:
                if not all(l in reach for l in dom.action_exe[name]):
                    continue
                for ep in dom.action_eps[name]:
                    eff = dom.ep_effs[ep]
                    if eff not in reach and all(
                        c in reach for c in dom.ep_conds[ep]
                    ):
                        new.append(eff)
            if not new:
                return cap + 1
            reach.update(new)
        return cap + 1

    def _goal_reached(self, known, t):
        nlits = self.dom.nlits
        return all(t * nlits + g in known for g in self.goals)

    def _executable(self, name, known, t):
        nlits = self.dom.nlits
        base = t * nlits
        return all(base + l in known for l in self.dom.action_exe[name])

    def _useless(self, name, known, t):
        """Sound prunes: actions that cannot contribute at this node."""
        dom = self.dom
        nlits = dom.nlits
        base = t * nlits
        for fidx in dom.action_kps[name]:
            if base + fidx * 2 not in known and base + fidx * 2 + 1 not in known:
                return False  # senses an unknown fluent
        eps = dom.action_eps[name]
        if not eps:
            return True  # no effects, nothing unknown to sense
        # every effect already known true: re-asserting adds nothing
        if all(base + dom.ep_effs[e] in known for e in eps):
            return True
        # every effect proposition has a condition known false: a no-op
        if all(
            any(base + (c ^ 1) in known for c in dom.ep_conds[e])
            for e in eps
        ):
            return True
        return False

    # -- search ----------------------------------------------------------
    def search(self, horizon):
        budget = exo_budget(horizon, self.config)
        if self.base_exo > budget:
            return None
        memo = set()
        path = self._dfs(
            self.k0, self.base_applies, self.t0, self.base_exo,
            horizon, budget, memo,
        )
        return path

    def _dfs(self, known, applies, t, exo_used, horizon, budget, memo):
        if self._goal_reached(known, t):
            return []
        if t >= horizon:
            return None
        self.nodes += 1
        if self.nodes > self.config.node_limit:
            raise SearchLimit(f"node limit {self.config.node_limit} reached")
        if t + self._relaxed_distance(known, t, horizon - t) > horizon:
            return None
        if self.config.use_memo:
            key = self._memo_key(known, applies, t)
            if key in memo:
                return None
        dom = self.dom
        nlits = dom.nlits
        base = t * nlits
        for name in self.action_order:
            is_exo = name in dom.exogenous
            if is_exo and exo_used + 1 > budget:
                continue
            if not self._executable(name, known, t):
                continue
            if self._useless(name, known, t):
                continue
            new_applies = applies + tuple(
                (t, ep) for ep in dom.action_eps[name]
            )
            unknown_kps = sorted(
                f for f in dom.action_kps[name]
                if base + f * 2 not in known and base + f * 2 + 1 not in known
            )
            for outcome in itertools.product(
                (True, False), repeat=len(unknown_kps)
            ):
                extra = [
                    base + f * 2 + (0 if val else 1)
                    for f, val in zip(unknown_kps, outcome)
                ]
                try:
                    nxt = engine.close_level(
                        known, t + 1, new_applies, dom.ep_conds,
                        dom.ep_effs, extra, dom.oneof_codes, nlits,
                    )
                except engine.Conflict:
                    continue
                sub = self._dfs(
                    frozenset(nxt), new_applies, t + 1,
                    exo_used + (1 if is_exo else 0),
                    horizon, budget, memo,
                )
                if sub is not None:
                    return [(name, dict(zip(unknown_kps, outcome)))] + sub
        if self.config.use_memo:
            memo.add(key)
        return None


def _materialize(tree, path, start):
    """Replay a found lineage on the kernel tree, producing the plan."""
    t, b = start
    assignments = {}
    cur = tree
    for name, outcomes in path:
        assignments[(t, b)] = name
        cur = cur.apply(name, t, b, check_executability=False)
        if outcomes:
            # follow the projected outcome chosen by the search
            target = None
            candidates = [b] + [
                c for (tt, p, c) in cur.nextbr
                if tt == t and cur._descends_via(c, b, t)
            ]
            for cand in candidates:
                lits = cur.sres.get((t, cand), ())
                ok = all(
                    (f * 2 + (0 if val else 1)) in lits
                    for f, val in outcomes.items()
                )
                if ok:
                    target = cand
                    break
            b = target if target is not None else b
        t += 1
    return assignments, (t, b), cur


def find_weak_plan(tree, horizon, config=None, goals=None, start=(0, 0)):
    """Search for a weak plan within `horizon`; None when there is none."""
    config = config or SearchConfig()
    goals = tuple(goals) if goals is not None else tree.dom.goal_codes
    searcher = _Searcher(tree, config, goals, start)
    path = searcher.search(horizon)
    if path is None:
        return None
    assignments, goal_node, induced = _materialize(tree, path, start)
    induced = induced.extend(max(horizon, induced.horizon))
    return ConditionalPlan(
        assignments=assignments,
        horizon=goal_node[0],
        goal_node=goal_node,
        tree=induced,
    )


def assess(plan, tree=None, maintenance_goals=None, t=None):
    """Quality tuple of a plan's induced tree at horizon t."""
    tree = tree if tree is not None else plan.tree
    t = t if t is not None else plan.horizon
    tree._ensure_closed()
    dom = tree.dom
    maint = (
        tuple(maintenance_goals)
        if maintenance_goals is not None
        else dom.maint_codes
    )
    leaves = tree.leaves(t)
    if not leaves:
        raise ValueError(f"no valid branches at step {t}")
    goals_in = sum(1 for b in leaves if tree.wgoal(t, b))
    strength = (100 * goals_in) // len(leaves)
    nodes = [(tt, b) for (tt, b) in tree.ubr if tt <= t]
    if maint:
        m = sum(
            1
            for (tt, b) in nodes
            for g in maint
            if tree.knows_code(g, tt, tt, b)
        )
        m_value = (100 * m) // len(nodes)
    else:
        m_value = 100  # vacuously satisfied
    return PlanQuality(
        num_exo=tree.exo_count(),
        strength=strength,
        m_value=m_value,
        num_actions=tree.occurrence_count(),
    )


def select_best(plans, qualities):
    """Lexicographic selection per the descending-priority criteria."""
    if not plans:
        raise ValueError("empty candidate set")
    pairs = list(zip(plans, qualities))
    pairs.sort(key=lambda pq: (pq[1].sort_key(), pq[0].serialize()))
    return pairs[0][0]


@dataclass
class PlannerSession:
    """Incremental-horizon planning over a committed narrative tree."""

    tree: EpistemicTree
    config: SearchConfig = field(default_factory=SearchConfig)
    goals: tuple = None
    horizon: int = 0
    start: tuple = (0, 0)
    unsolvable: bool = False
    ever_found: bool = False

    def __post_init__(self):
        if self.goals is None:
            self.goals = self.tree.dom.goal_codes

    def extend_horizon(self):
        if self.horizon + 1 > self.config.max_horizon:
            self.unsolvable = True
            raise SearchLimit(
                f"maximum horizon {self.config.max_horizon} exceeded"
            )
        self.horizon += 1
        return self

    def find(self):
        plan = find_weak_plan(
            self.tree, self.horizon, self.config, self.goals, self.start
        )
        if plan is not None:
            self.ever_found = True
        return plan
