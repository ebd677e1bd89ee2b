"""Brute-force possible-world oracle.

Independently of the closure engine, enumerate every total initial
assignment compatible with the declared initial knowledge, evolve each
one deterministically through a branch's occurrence lineage, filter by
the branch's sensing outcomes, and report which literals hold in *all*
surviving evolutions.  Soundness of the approximation means every
knows(l,t,t1,b) atom must pass this check.
"""

import itertools


def initial_worlds(gdom):
    """All total assignments satisfying init literals and oneof groups."""
    fluents = list(gdom.fluents)
    worlds = []
    for bits in itertools.product((True, False), repeat=len(fluents)):
        w = dict(zip(fluents, bits))
        if any(w[l.atom] != l.positive for l in gdom.init):
            continue
        ok = True
        for group in gdom.oneofs:
            if sum(1 for l in group if w[l.atom] == l.positive) != 1:
                ok = False
                break
        if ok:
            worlds.append(w)
    return worlds


def evolve(gdom, world, occs_by_step, upto):
    """Deterministic trajectory [state_0 .. state_upto]; None when two
    simultaneous effects contradict (physically impossible narrative)."""
    traj = [dict(world)]
    cur = world
    for s in range(upto):
        effects = {}
        for name in occs_by_step.get(s, ()):
            act = gdom.actions[name]
            for conds, eff in act.eps:
                if all(cur[c.atom] == c.positive for c in conds):
                    if effects.get(eff.atom, eff.positive) != eff.positive:
                        return None
                    effects[eff.atom] = eff.positive
        cur = dict(cur)
        cur.update(effects)
        traj.append(cur)
    return traj


def consistent_trajectories(tree, b, t1):
    """Trajectories (length t1) consistent with branch b's narrative as
    far as it is available at epistemic level t1."""
    gdom = tree.dom.gdom
    occs, sres = tree._lineage_inputs(b)
    occs_by_step = {}
    for t, name in occs:
        occs_by_step.setdefault(t, []).append(name)
    out = []
    for world in initial_worlds(gdom):
        traj = evolve(gdom, world, occs_by_step, t1)
        if traj is None:
            continue
        ok = True
        # projected sensing outcomes become available one level later
        for lit, s in sres:
            if s + 1 <= t1:
                l = gdom.decode(lit)
                if traj[s][l.atom] != l.positive:
                    ok = False
                    break
        if ok:
            for s, vals in tree.sensed.items():
                if s > t1:
                    continue
                for fidx, val in vals.items():
                    atom = gdom.fluents[fidx]
                    if traj[s][atom] != val:
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            out.append(traj)
    return out


def check_soundness(tree):
    """Return (violations, checked, vacuous) over every derived atom."""
    tree._ensure_closed()
    gdom = tree.dom.gdom
    nlits = gdom.nlits
    violations = []
    checked = 0
    vacuous = 0
    for b, levels in tree.levels.items():
        for t1, atoms in enumerate(levels):
            trajs = consistent_trajectories(tree, b, t1)
            if not trajs:
                vacuous += len(atoms)
                continue
            for atom in atoms:
                t, lit = divmod(atom, nlits)
                l = gdom.decode(lit)
                checked += 1
                if not all(tr[t][l.atom] == l.positive for tr in trajs):
                    violations.append((str(l), t, t1, b))
    return violations, checked, vacuous


def brute_min_weak_horizon(tree, goals, max_h, budget_fn):
    """Exhaustive minimal weak-plan horizon via plain lineage enumeration
    (no memoization, no pruning) - the reference for minimality checks."""
    from epiplan import engine

    dom = tree.dom
    nlits = dom.nlits
    tree._ensure_closed()
    k0 = frozenset(tree.levels[0][0])

    def goal_at(known, t):
        return all(t * nlits + g in known for g in goals)

    names = sorted(dom.action_eps)

    def rec(known, applies, t, exo, horizon):
        if goal_at(known, t):
            return True
        if t >= horizon:
            return False
        for name in names:
            base = t * nlits
            if not all(base + l in known for l in dom.action_exe[name]):
                continue
            is_exo = name in dom.exogenous
            if is_exo and exo + 1 > budget_fn(horizon):
                continue
            new_applies = applies + tuple(
                (t, ep) for ep in dom.action_eps[name]
            )
            unknown = sorted(
                f for f in dom.action_kps[name]
                if base + f * 2 not in known
                and base + f * 2 + 1 not in known
            )
            for outcome in itertools.product(
                (True, False), repeat=len(unknown)
            ):
                extra = [
                    base + f * 2 + (0 if v else 1)
                    for f, v in zip(unknown, outcome)
                ]
                try:
                    nxt = engine.close_level(
                        known, t + 1, new_applies, dom.ep_conds,
                        dom.ep_effs, extra, dom.oneof_codes, nlits,
                    )
                except engine.Conflict:
                    continue
                if rec(
                    frozenset(nxt), new_applies, t + 1,
                    exo + (1 if is_exo else 0), horizon,
                ):
                    return True
        return False

    for h in range(max_h + 1):
        if rec(k0, (), 0, 0, h):
            return h
    return None
