# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled closure engine: same semantics as _engine_py.close_level.

The encoding and rule set are documented in _engine_py; this version
keeps the algorithm identical (so both backends are interchangeable in
tests) but runs the fixpoint with C-typed loops.
"""

from ._engine_py import Conflict

BACKEND = "cython"


def close_level(prev, long level, applies, ep_conds, ep_effs, extra,
                oneofs, long nlits):
    """Return the closed knowledge set for one epistemic level."""
    cdef set known = set(prev)
    cdef long atom, lit, step, eff, c, pstep
    cdef long max_step = level
    cdef bint changed, blocked, all_known
    cdef long n_same, n_unknown, unknown_c
    cdef list steps, eps_here, conds
    cdef dict by_step = {}

    for atom in extra:
        if atom not in known:
            if atom ^ 1 in known:
                raise Conflict(atom)
            known.add(atom)

    for step_ep in applies:
        step = step_ep[0]
        if step < level:
            if step in by_step:
                by_step[step].append(step_ep[1])
            else:
                by_step[step] = [step_ep[1]]

    steps = sorted(by_step)

    def add(long step, long lit):
        cdef long a = step * nlits + lit
        if a in known:
            return False
        if a ^ 1 in known:
            raise Conflict(a)
        known.add(a)
        return True

    changed = True
    while changed:
        changed = False

        # effect projection and postdiction
        for step in steps:
            eps_here = by_step[step]
            for ep in eps_here:
                eff = ep_effs[ep]
                conds = list(ep_conds[ep])
                # effect projection
                all_known = True
                for c in conds:
                    if step * nlits + c not in known:
                        all_known = False
                        break
                if all_known:
                    if add(step + 1, eff):
                        changed = True
                # positive postdiction: effect became true over this step
                # and this is the only applied candidate for the effect
                if ((step + 1) * nlits + eff in known
                        and step * nlits + (eff ^ 1) in known):
                    n_same = 0
                    for e2 in eps_here:
                        if ep_effs[e2] == eff:
                            n_same += 1
                    if n_same == 1:
                        for c in conds:
                            if add(step, c):
                                changed = True
                # negative postdiction: effect known false afterwards and
                # exactly one condition not known true, none known false
                if (step + 1) * nlits + (eff ^ 1) in known and conds:
                    n_unknown = 0
                    unknown_c = 0
                    for c in conds:
                        if step * nlits + c not in known:
                            n_unknown += 1
                            unknown_c = c
                    if n_unknown == 1:
                        if add(step, unknown_c ^ 1):
                            changed = True

        # inertia, forwards and backwards
        for atom in list(known):
            step = atom // nlits
            lit = atom % nlits
            if step < max_step:
                blocked = False
                for e in by_step.get(step, ()):
                    if ep_effs[e] == lit ^ 1:
                        all_known = False
                        for c in ep_conds[e]:
                            if step * nlits + (c ^ 1) in known:
                                all_known = True
                                break
                        if not all_known:
                            blocked = True
                            break
                if not blocked:
                    if add(step + 1, lit):
                        changed = True
            if step > 0:
                pstep = step - 1
                blocked = False
                for e in by_step.get(pstep, ()):
                    if ep_effs[e] == lit:
                        all_known = False
                        for c in ep_conds[e]:
                            if pstep * nlits + (c ^ 1) in known:
                                all_known = True
                                break
                        if not all_known:
                            blocked = True
                            break
                if not blocked:
                    if add(pstep, lit):
                        changed = True

        # oneof completion over initial exclusive-or groups
        for group in oneofs:
            n_same = 0
            for l in group:
                if l in known:
                    n_same += 1
            if n_same > 0:
                for l in group:
                    if l not in known:
                        if add(0, l ^ 1):
                            changed = True
            else:
                n_unknown = 0
                unknown_c = 0
                for l in group:
                    if (l ^ 1) not in known:
                        n_unknown += 1
                        unknown_c = l
                if n_unknown == 1:
                    if add(0, unknown_c):
                        changed = True

    return known
