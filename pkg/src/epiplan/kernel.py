"""Branching epistemic state: transition tree, knowledge closure, sensing.

The tree tracks which actions occurred at which (step, branch) nodes, the
projected sensing results that split branches, real sensing feedback, and
the temporal knowledge relation knows(l, t, t1, b): at epistemic step t1 in
branch b it is known that l held at step t (t <= t1).

Knowledge is computed per branch *lineage*: a child branch shares its
ancestors' history up to its creation step, with its own projected sensing
outcome substituted.  The closure itself runs level by level through the
backend engine (see epiplan.engine).

Conventions:
  * branch ids are allocated by a deterministic counter, root is 0;
  * a projected sensing result at step t becomes known at epistemic step
    t+1 (when the branches diverge);
  * a real sensed atom for step t becomes known at epistemic step t.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import engine
from .language import GroundDomain, Literal, MONITOR_PREFIX, split_atom

__all__ = [
    "CompiledDomain",
    "EpistemicTree",
    "InconsistentKnowledge",
    "KernelError",
    "init_tree",
    "apply_action",
    "apply_sensing",
    "closure",
    "integrate_sensed",
    "holds_known",
    "leaves",
    "export_trace",
]


class KernelError(Exception):
    pass


class InconsistentKnowledge(KernelError):
    """Both a literal and its complement derived for the same (t, t1, b)."""

    def __init__(self, literal, step, level, branch):
        self.literal = literal
        self.step = step
        self.level = level
        self.branch = branch
        super().__init__(
            f"inconsistent knowledge: both {literal} and its complement at "
            f"step {step}, level {level}, branch {branch}"
        )


class CompiledDomain:
    """Ground domain lowered to integer codes for the closure engine."""

    def __init__(self, gdom: GroundDomain):
        self.gdom = gdom
        self.nlits = gdom.nlits
        self.ep_conds = []
        self.ep_effs = []
        self.action_eps = {}
        self.action_kps = {}
        self.action_exe = {}
        self.exogenous = set()
        for name in sorted(gdom.actions):
            act = gdom.actions[name]
            ids = []
            for conds, eff in act.eps:
                ids.append(len(self.ep_effs))
                self.ep_conds.append(tuple(gdom.encode(c) for c in conds))
                self.ep_effs.append(gdom.encode(eff))
            self.action_eps[name] = tuple(ids)
            self.action_kps[name] = tuple(
                gdom.fluent_index[f] for f in act.kps
            )
            self.action_exe[name] = tuple(
                gdom.encode(l) for l in act.executability
            )
            if act.exogenous:
                self.exogenous.add(name)
        self.init_codes = tuple(gdom.encode(l) for l in gdom.init)
        self.oneof_codes = tuple(
            tuple(gdom.encode(l) for l in group) for group in gdom.oneofs
        )
        self.goal_codes = tuple(gdom.encode(l) for l in gdom.weak_goals)
        self.maint_codes = tuple(
            gdom.encode(l) for l in gdom.maintenance_goals
        )
        # fluent -> its monitor fluent (mon_<name> with the same arguments)
        self.monitor_of = {}
        for atom, idx in gdom.fluent_index.items():
            name, args = split_atom(atom)
            mon = Literal(MONITOR_PREFIX + name, args).atom
            if mon in gdom.fluent_index:
                self.monitor_of[idx] = gdom.fluent_index[mon]
        self.static_fluents = frozenset(
            gdom.fluent_index[f] for f in gdom.static_fluents()
        )

    def decode_lit(self, code):
        return self.gdom.decode(code)

    def lit_str(self, code):
        return str(self.gdom.decode(code))


@dataclass
class _Branch:
    parent: int | None
    created_step: int  # step of the sensing that created the branch


class EpistemicTree:
    """Value-style branching knowledge state.

    Mutating operations return a new tree; the receiver is unchanged.
    """

    def __init__(self, compiled: CompiledDomain):
        self.dom = compiled
        self.branches = {0: _Branch(None, 0)}
        self.occs = {}  # (t, b) -> list of action names, application order
        self.sres = {}  # (t, b) -> list of lit codes (projected results)
        self.nextbr = []  # (t, parent, child)
        self.sensed = {}  # t -> {fluent idx: bool}
        self.brinvalid = set()  # (t, b)
        self.horizon = 0
        self.warnings = []
        self._next_branch = 1
        # closure results
        self._levels = None  # b -> list of frozenset per level 0..horizon
        self._ubr = None

    # ------------------------------------------------------------------
    # plumbing
    # ------------------------------------------------------------------
    def _clone(self):
        t = EpistemicTree.__new__(EpistemicTree)
        t.dom = self.dom
        t.branches = dict(self.branches)
        t.occs = {k: list(v) for k, v in self.occs.items()}
        t.sres = {k: list(v) for k, v in self.sres.items()}
        t.nextbr = list(self.nextbr)
        t.sensed = {k: dict(v) for k, v in self.sensed.items()}
        t.brinvalid = set(self.brinvalid)
        t.horizon = self.horizon
        t.warnings = list(self.warnings)
        t._next_branch = self._next_branch
        t._levels = None
        t._ubr = None
        return t

    def _chain(self, b):
        chain = []
        cur = b
        while cur is not None:
            chain.append(cur)
            cur = self.branches[cur].parent
        chain.reverse()
        return chain

    def _lineage_inputs(self, b):
        """Effective occurrences and projected results along b's history."""
        chain = self._chain(b)
        occs = []  # (t, action)
        sres = []  # (lit, t)
        for i, node in enumerate(chain):
            if i + 1 < len(chain):
                cutoff = self.branches[chain[i + 1]].created_step
            else:
                cutoff = None
            for (t, bb), names in self.occs.items():
                if bb != node:
                    continue
                if cutoff is None or t <= cutoff:
                    occs.extend((t, n) for n in names)
            for (t, bb), lits in self.sres.items():
                if bb != node:
                    continue
                if cutoff is None or t < cutoff:
                    sres.extend((lit, t) for lit in lits)
        occs.sort(key=lambda x: x[0])
        sres.sort(key=lambda x: x[1])
        return occs, sres

    # ------------------------------------------------------------------
    # branch validity
    # ------------------------------------------------------------------
    def _compute_ubr(self):
        children = {}
        for t, p, c in self.nextbr:
            children.setdefault(t, []).append(c)
        ubr = {(0, 0)}
        for t in range(self.horizon):
            for tb in list(ubr):
                if tb[0] != t:
                    continue
                if tb not in self.brinvalid:
                    ubr.add((t + 1, tb[1]))
            for c in children.get(t, ()):
                if (t, c) not in self.brinvalid:
                    ubr.add((t + 1, c))
        return ubr

    @property
    def ubr(self):
        if self._ubr is None:
            self._ubr = self._compute_ubr()
        return self._ubr

    def valid(self, t, b):
        return (t, b) in self.ubr

    def leaves(self, t):
        return {b for (tt, b) in self.ubr if tt == t}

    # ------------------------------------------------------------------
    # closure
    # ------------------------------------------------------------------
    def _close(self):
        dom = self.dom
        nlits = dom.nlits
        levels_by_branch = {}
        sensed_atoms = []  # (lit code, step)
        for t, vals in self.sensed.items():
            for fidx, val in vals.items():
                sensed_atoms.append((fidx * 2 + (0 if val else 1), t))

        # knowledge is only maintained while a branch is alive: levels past
        # a branch's last valid node are never consulted, and closing them
        # could surface phantom conflicts with events the dead branch does
        # not inherit
        top_level = {}
        for t1, b in self.ubr:
            top_level[b] = max(top_level.get(b, -1), t1)

        for b in sorted(self.branches):
            top = min(top_level.get(b, -1), self.horizon)
            if top < 0:
                levels_by_branch[b] = []
                continue
            occs, sres = self._lineage_inputs(b)
            applies = []
            sensing_steps = {}  # step -> set of sensed fluent idx
            for t, name in occs:
                applies.extend((t, ep) for ep in dom.action_eps[name])
                for fidx in dom.action_kps[name]:
                    sensing_steps.setdefault(t, set()).add(fidx)
            pending = list(sensed_atoms)
            levels = []
            prev = ()
            for t1 in range(top + 1):
                extra = []
                if t1 == 0:
                    extra.extend(self.dom.init_codes)
                extra.extend(
                    lit + t * nlits for lit, t in sres if t + 1 == t1
                )
                # real sensing feedback backed by a sensing occurrence
                still_pending = []
                for lit, t in pending:
                    if t == t1 and lit // 2 in sensing_steps.get(t, ()):
                        extra.append(lit + t * nlits)
                    else:
                        still_pending.append((lit, t))
                pending = still_pending
                try:
                    cur = engine.close_level(
                        prev, t1, applies, dom.ep_conds, dom.ep_effs,
                        extra, dom.oneof_codes, nlits,
                    )
                    # monitor-backed feedback: inject once the monitor fluent
                    # is known for the sensed step
                    while True:
                        inject = []
                        for lit, t in pending:
                            if t > t1:
                                continue
                            mon = dom.monitor_of.get(lit // 2)
                            if mon is not None and (
                                t * nlits + mon * 2
                            ) in cur:
                                inject.append((lit, t))
                        if not inject:
                            break
                        pending = [p for p in pending if p not in inject]
                        cur = engine.close_level(
                            cur, t1, applies, dom.ep_conds, dom.ep_effs,
                            [lit + t * nlits for lit, t in inject],
                            dom.oneof_codes, nlits,
                        )
                except engine.Conflict as exc:
                    step, lit = divmod(exc.atom, nlits)
                    raise InconsistentKnowledge(
                        dom.decode_lit(lit), step, t1, b
                    ) from None
                levels.append(cur)
                prev = cur
            levels_by_branch[b] = levels
        self._levels = levels_by_branch

    def _ensure_closed(self):
        if self._levels is None:
            self._close()

    @property
    def levels(self):
        self._ensure_closed()
        return self._levels

    def knows_code(self, lit_code, t, t1, b):
        if t > t1 or t1 > self.horizon or b not in self.branches:
            return False
        self._ensure_closed()
        levels = self._levels[b]
        if t1 >= len(levels):
            return False
        return (t * self.dom.nlits + lit_code) in levels[t1]

    def holds_known(self, literal, t, t1, b):
        return self.knows_code(self.dom.gdom.encode(literal), t, t1, b)

    def wgoal(self, t, b):
        """All weak goals known at (t, t, b)."""
        return all(self.knows_code(g, t, t, b) for g in self.dom.goal_codes)

    def wgoal_nodes(self):
        out = set()
        for (t, b) in self.ubr:
            if self.wgoal(t, b):
                out.add((t, b))
        return out

    # ------------------------------------------------------------------
    # operations (value style: return a new tree)
    # ------------------------------------------------------------------
    def extend(self, t1):
        if t1 <= self.horizon:
            return self
        t = self._clone()
        t.horizon = t1
        t._close()
        return t

    def _endo_occ_at(self, t, b):
        return [
            n for n in self.occs.get((t, b), ())
            if n not in self.dom.exogenous
        ]

    def _effect_clash(self, t, b, action):
        new_effs = {self.dom.ep_effs[e] for e in self.dom.action_eps[action]}
        for name in self.occs.get((t, b), ()):
            for e in self.dom.action_eps[name]:
                if self.dom.ep_effs[e] in new_effs:
                    return name
        return None

    def apply(self, action, t, b, check_executability=True):
        """Record an occurrence of `action` at node (t, b), with sensing
        branching for its knowledge propositions, and re-close."""
        dom = self.dom
        if action not in dom.action_eps:
            raise KernelError(f"unknown action '{action}'")
        if not self.valid(t, b):
            raise KernelError(f"branch {b} is not valid at step {t}")
        if check_executability:
            for lit in dom.action_exe[action]:
                if not self.knows_code(lit, t, t, b):
                    raise KernelError(
                        f"executability of {action} at ({t},{b}) not known: "
                        f"{dom.lit_str(lit)}"
                    )
        clash = self._effect_clash(t, b, action)
        if clash is not None:
            raise KernelError(
                f"{action} shares an effect literal with {clash} at ({t},{b})"
            )
        if action not in dom.exogenous and self._endo_occ_at(t, b):
            raise KernelError(
                f"an endogenous action already occurs at ({t},{b})"
            )
        tree = self._clone()
        tree.occs.setdefault((t, b), []).append(action)
        tree.horizon = max(tree.horizon, t + 1)
        tree._project_sensing(action, t, b)
        tree._close()
        return tree

    def _project_sensing(self, action, t, b):
        """Split branches for each knowledge proposition whose fluent value
        is unknown at (t, t, b).  Mutates self (only called on fresh clones)."""
        dom = self.dom
        kps = sorted(dom.action_kps[action])
        if not kps:
            return
        for fidx in kps:
            pos = fidx * 2
            known = self.knows_code(pos, t, t, b) or self.knows_code(
                pos ^ 1, t, t, b
            )
            if known:
                continue
            # branch every current outcome of this sensing event
            targets = [b] + [
                c for (tt, p, c) in self.nextbr
                if tt == t and self._descends_via(c, b, t)
            ]
            for x in sorted(targets):
                child = self._next_branch
                self._next_branch += 1
                self.branches[child] = _Branch(x, t)
                self.nextbr.append((t, x, child))
                parent_sres = [
                    l for l in self.sres.get((t, x), ()) if l // 2 != fidx
                ]
                self.sres[(t, child)] = parent_sres + [pos ^ 1]
                self.sres.setdefault((t, x), []).append(pos)
            self._levels = None
            self._ubr = None
            self._close()

    def _descends_via(self, c, b, t):
        """True if c was created at step t below b (same sensing event)."""
        cur = c
        while cur is not None:
            info = self.branches[cur]
            if cur == b:
                return True
            if info.created_step != t:
                return False
            cur = info.parent
        return False

    def sense_result(self, literal, t):
        """Integrate a real sensing result: invalidate contradicted
        projections, retract their sres atoms, and re-close."""
        dom = self.dom
        code = dom.gdom.encode(literal)
        fidx = code // 2
        val = code % 2 == 0
        prior = self.sensed.get(t, {}).get(fidx)
        if prior is not None and prior != val:
            raise KernelError(
                f"conflicting sensed atoms for {literal.atom} at step {t}"
            )
        # is there a sensing occurrence or a monitor backing this atom?
        backed = False
        for (tt, bb), names in self.occs.items():
            if tt == t and any(
                fidx in dom.action_kps[n] for n in names
            ):
                backed = True
        if not backed:
            mon = dom.monitor_of.get(fidx)
            if mon is not None:
                base = self.extend(t) if t > self.horizon else self
                for b in base.leaves(t):
                    if base.knows_code(mon * 2, t, t, b):
                        backed = True
                        break
        if not backed:
            tree = self._clone()
            tree.warnings.append(
                f"sensed({literal},{t}) has no sensing occurrence or monitor;"
                " ignored"
            )
            tree._levels = self._levels
            tree._ubr = self._ubr
            return tree
        tree = self._clone()
        tree.sensed.setdefault(t, {})[fidx] = val
        # branches carrying the contradicting projection die
        contra = code ^ 1
        for (tt, bb), lits in list(tree.sres.items()):
            if tt != t:
                continue
            if contra in lits:
                tree.brinvalid.add((t, bb))
                lits.remove(contra)
                if not lits:
                    del tree.sres[(tt, bb)]
        tree.horizon = max(tree.horizon, t)
        tree._close()
        return tree

    # ------------------------------------------------------------------
    # counting / export
    # ------------------------------------------------------------------
    def occurrence_count(self):
        return sum(len(v) for v in self.occs.values())

    def exo_count(self):
        return sum(
            1 for v in self.occs.values() for n in v
            if n in self.dom.exogenous
        )

    def export_trace(self):
        """Line-oriented fact dump, sorted lexicographically."""
        self._ensure_closed()
        dom = self.dom
        nlits = dom.nlits
        lines = []
        for (t, b), names in self.occs.items():
            lines.extend(f"occ({n},{t},{b})" for n in names)
        for (t, b), lits in self.sres.items():
            lines.extend(f"sRes({dom.lit_str(l)},{t},{b})" for l in lits)
        for t, p, c in self.nextbr:
            lines.append(f"nextBr({t},{p},{c})")
        for t, b in self.ubr:
            lines.append(f"uBr({t},{b})")
        for t, b in self.brinvalid:
            lines.append(f"brInvalid({t},{b})")
        for b, levels in self._levels.items():
            for t1, atoms in enumerate(levels):
                for atom in atoms:
                    t, lit = divmod(atom, nlits)
                    lines.append(
                        f"knows({dom.lit_str(lit)},{t},{t1},{b})"
                    )
        return "\n".join(sorted(lines)) + "\n"


# ---------------------------------------------------------------------------
# spec-level operation wrappers
# ---------------------------------------------------------------------------

def init_tree(gdom: GroundDomain) -> EpistemicTree:
    compiled = gdom if isinstance(gdom, CompiledDomain) else CompiledDomain(gdom)
    tree = EpistemicTree(compiled)
    tree._close()  # surfaces contradictory init immediately
    return tree


def apply_action(tree, action, t, b):
    return tree.apply(action, t, b)


def apply_sensing(tree, action, t, b):
    """Occurrence + sensing branching for an action with knowledge
    propositions.  Equivalent to apply_action for such actions."""
    if not tree.dom.action_kps.get(action):
        raise KernelError(f"action '{action}' has no knowledge proposition")
    return tree.apply(action, t, b)


def closure(tree, t1):
    return tree.extend(t1)


def integrate_sensed(tree, literal, t):
    return tree.sense_result(literal, t)


def holds_known(tree, literal, t, t1, b):
    return tree.holds_known(literal, t, t1, b)


def leaves(tree, t):
    return tree.leaves(t)


def export_trace(tree):
    return tree.export_trace()
