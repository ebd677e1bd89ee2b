"""Pure-Python closure engine.

Atoms are encoded as integers: ``atom = step * nlits + lit`` where
``lit = 2 * fluent_index + (0 if positive else 1)``.  The complement of a
literal is ``lit ^ 1``.

``close_level`` computes the fixpoint of the derivation rules for one
epistemic level: given the knowledge carried over from the previous level
plus freshly available sensing input, it returns the closed set of
known (literal, step) pairs at this level.
"""

BACKEND = "python"


class Conflict(Exception):
    """Both a literal and its complement were derived for the same step."""

    def __init__(self, atom):
        self.atom = atom
        super().__init__(f"conflicting knowledge (encoded atom {atom})")


def close_level(
    prev,          # iterable of encoded atoms carried into this level
    level,         # epistemic step t1 of this level
    applies,       # list of (step, ep_id), all steps < level allowed >=0
    ep_conds,      # ep_id -> tuple of encoded condition literals
    ep_effs,       # ep_id -> encoded effect literal
    extra,         # encoded atoms newly available at this level (sres/sensed)
    oneofs,        # list of tuples of encoded literals (step-0 groups)
    nlits,         # number of encoded literals
):
    """Return the closed knowledge set for one epistemic level.

    Raises Conflict if a literal and its complement are both derived.
    """
    known = set(prev)

    def add(step, lit):
        atom = step * nlits + lit
        if atom in known:
            return False
        if atom ^ 1 in known:
            raise Conflict(atom)
        known.add(atom)
        return True

    for atom in extra:
        if atom not in known:
            if atom ^ 1 in known:
                raise Conflict(atom)
            known.add(atom)

    # group applies by step, and by (step, effect literal) for attribution
    by_step = {}
    for step, ep in applies:
        if step < level:
            by_step.setdefault(step, []).append(ep)

    steps = sorted(by_step)
    max_step = level

    changed = True
    while changed:
        changed = False

        # effect projection and postdiction
        for step in steps:
            for ep in by_step[step]:
                eff = ep_effs[ep]
                conds = ep_conds[ep]
                base = step * nlits
                nxt = (step + 1) * nlits
                # effect projection: all conditions known true at step
                if all(base + c in known for c in conds):
                    if add(step + 1, eff):
                        changed = True
                # positive postdiction: effect newly true across the step and
                # this ep is the only applied candidate for that effect
                if (
                    nxt + eff in known
                    and base + (eff ^ 1) in known
                    and sum(
                        1 for e2 in by_step[step] if ep_effs[e2] == eff
                    ) == 1
                ):
                    for c in conds:
                        if add(step, c):
                            changed = True
                # negative postdiction: effect known false after the step;
                # all conditions but one known true pins the last one false
                if nxt + (eff ^ 1) in known and conds:
                    unknown = [
                        c for c in conds if base + c not in known
                    ]
                    if all(
                        base + c in known for c in conds if c not in unknown
                    ):
                        if len(unknown) == 1:
                            if add(step, unknown[0] ^ 1):
                                changed = True

        # inertia, forwards and backwards
        for atom in list(known):
            step, lit = divmod(atom, nlits)
            # forward: no applied ep can have caused the complement
            if step < max_step:
                blockers = [
                    e for e in by_step.get(step, ())
                    if ep_effs[e] == lit ^ 1
                ]
                base = step * nlits
                if all(
                    any(base + (c ^ 1) in known for c in ep_conds[e])
                    for e in blockers
                ):
                    if add(step + 1, lit):
                        changed = True
            # backward: no applied ep can have caused the literal itself
            if step > 0:
                pstep = step - 1
                causers = [
                    e for e in by_step.get(pstep, ())
                    if ep_effs[e] == lit
                ]
                base = pstep * nlits
                if all(
                    any(base + (c ^ 1) in known for c in ep_conds[e])
                    for e in causers
                ):
                    if add(pstep, lit):
                        changed = True

        # oneof completion over initial exclusive-or groups
        for group in oneofs:
            true_members = [l for l in group if l in known]
            if true_members:
                for l in group:
                    if l not in true_members:
                        if add(0, l ^ 1):
                            changed = True
            else:
                open_members = [l for l in group if (l ^ 1) not in known]
                if len(open_members) == 1:
                    if add(0, open_members[0]):
                        changed = True

    return known
