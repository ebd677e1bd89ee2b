import random

import pytest

from epiplan.kernel import InconsistentKnowledge, KernelError, init_tree
from epiplan.language import GroundAction, GroundDomain, Literal, parse


ONE_DOOR = """
(define (domain onedoor)
  (:types door)
  (:fluents (open ?d - door) (ab_doOpen ?d - door))
  (:action doOpen
    :parameters (?d - door)
    :effect (when (¬ab_doOpen ?d) (open ?d)))
  (:action senseOpen
    :parameters (?d - door)
    :observe (open ?d)))
(define (problem onedoor1)
  (:domain onedoor)
  (:objects d1 - door)
  (:init (¬open d1))
  (:goal weak (open d1)))
"""


@pytest.fixture
def one_door():
    dom, prob = parse(ONE_DOOR)
    from epiplan.language import ground

    return ground(dom, prob)


@pytest.fixture
def one_door_tree(one_door):
    return init_tree(one_door)


def lit(atom, positive=True):
    if "(" in atom:
        name, rest = atom.split("(", 1)
        args = tuple(rest.rstrip(")").split(","))
    else:
        name, args = atom, ()
    return Literal(name, args, positive)


# ---------------------------------------------------------------------------
# randomized instance generation (shared by the oracle-based suites)
# ---------------------------------------------------------------------------

def random_ground_domain(rng: random.Random, max_fluents=4, max_actions=4):
    nf = rng.randint(2, max_fluents)
    fluents = tuple(f"f{i}" for i in range(nf))

    def rand_lit(f=None):
        f = f if f is not None else rng.randrange(nf)
        return Literal(fluents[f], (), rng.random() < 0.5)

    actions = {}
    na = rng.randint(2, max_actions)
    sensing_done = False
    for i in range(na):
        name = f"a{i}"
        eps = []
        kps = ()
        if not sensing_done and rng.random() < 0.5:
            kps = (fluents[rng.randrange(nf)],)
            sensing_done = True
        n_eps = rng.randint(0 if kps else 1, 2)
        used_effects = set()
        for _ in range(n_eps):
            eff = rand_lit()
            if eff.atom in used_effects:
                continue
            used_effects.add(eff.atom)
            conds = tuple(
                rand_lit(f)
                for f in rng.sample(range(nf), rng.randint(0, 2))
            )
            eps.append((conds, eff))
        exe = ()
        if rng.random() < 0.3:
            exe = (rand_lit(),)
        exo = rng.random() < 0.2 and not kps
        actions[name] = GroundAction(name, tuple(eps), kps, exe, exo)

    init = []
    oneof_candidates = []
    for f in fluents:
        r = rng.random()
        if r < 0.4:
            init.append(Literal(f, (), rng.random() < 0.5))
        elif r < 0.6:
            oneof_candidates.append(f)
    oneofs = ()
    if len(oneof_candidates) >= 2 and rng.random() < 0.5:
        oneofs = (tuple(Literal(f, ()) for f in oneof_candidates[:3]),)
    goal = (rand_lit(),)
    maint = (rand_lit(),) if rng.random() < 0.3 else ()
    return GroundDomain(
        actions=actions,
        fluents=fluents,
        weak_goals=goal,
        maintenance_goals=maint,
        init=tuple(init),
        oneofs=oneofs,
    )


def random_narrative(rng: random.Random, gdom, horizon=3):
    """Random tree over a random domain: occurrences, sensing branching,
    occasionally integrated sensed atoms.  None when the narrative turns
    out inconsistent (a hard error by design, not a test subject)."""
    try:
        tree = init_tree(gdom)
    except InconsistentKnowledge:
        return None
    compiled = tree.dom
    names = sorted(compiled.action_eps)
    try:
        for t in range(horizon):
            for b in sorted(tree.leaves(t)):
                if rng.random() < 0.8:
                    name = rng.choice(names)
                    try:
                        tree = tree.apply(name, t, b,
                                          check_executability=False)
                    except KernelError:
                        pass
        tree = tree.extend(horizon)
        # occasionally feed back a real sensing result
        for _ in range(rng.randint(0, 2)):
            f = rng.randrange(len(gdom.fluents))
            lit_ = Literal(gdom.fluents[f], (), rng.random() < 0.5)
            try:
                tree = tree.sense_result(lit_, rng.randint(0, horizon))
            except KernelError:
                pass
    except InconsistentKnowledge:
        return None
    return tree
