"""Backend equivalence: the compiled closure engine must be observationally
identical to the pure-Python reference on arbitrary inputs."""

import random

import pytest

from epiplan.engine import _engine_py

try:
    from epiplan.engine import _engine_c
except ImportError:
    _engine_c = None

needs_cython = pytest.mark.skipif(
    _engine_c is None, reason="compiled engine not built"
)


def _random_inputs(rng):
    nf = rng.randint(2, 4)
    nlits = nf * 2
    n_eps = rng.randint(1, 6)
    ep_conds = []
    ep_effs = []
    for _ in range(n_eps):
        ep_effs.append(rng.randrange(nlits))
        ep_conds.append(
            tuple(rng.randrange(nlits) for _ in range(rng.randint(0, 2)))
        )
    level = rng.randint(1, 4)
    applies = tuple(
        (rng.randrange(level), rng.randrange(n_eps))
        for _ in range(rng.randint(0, 5))
    )
    prev = frozenset(
        rng.randrange(level * nlits) for _ in range(rng.randint(0, 6))
    )
    extra = [
        rng.randrange((level + 1) * nlits) for _ in range(rng.randint(0, 3))
    ]
    oneofs = ()
    if rng.random() < 0.3:
        oneofs = (
            tuple(f * 2 for f in rng.sample(range(nf), 2)),
        )
    return prev, level, applies, ep_conds, ep_effs, extra, oneofs, nlits


def _call(backend, args):
    try:
        return ("ok", frozenset(backend.close_level(*args)))
    except _engine_py.Conflict:
        return ("conflict", None)


@needs_cython
def test_backends_agree_on_random_inputs():
    rng = random.Random(20240817)
    agreements = 0
    for _ in range(500):
        args = _random_inputs(rng)
        got_py = _call(_engine_py, args)
        got_c = _call(_engine_c, args)
        assert got_py == got_c, f"backends diverge on {args}"
        agreements += 1
    assert agreements == 500


@needs_cython
def test_backends_agree_on_random_trees():
    # whole-tree comparison: close the same random narratives under both
    # backends by swapping the dispatch function
    from epiplan import engine

    from conftest import random_ground_domain, random_narrative

    rng = random.Random(7)
    originals = engine.close_level
    compared = 0
    for _ in range(40):
        gdom = random_ground_domain(rng)
        seed = rng.randrange(10**9)
        try:
            engine.close_level = _engine_py.close_level
            t_py = random_narrative(random.Random(seed), gdom)
            engine.close_level = _engine_c.close_level
            t_c = random_narrative(random.Random(seed), gdom)
        finally:
            engine.close_level = originals
        if t_py is None or t_c is None:
            assert (t_py is None) == (t_c is None)
            continue
        assert t_py.export_trace() == t_c.export_trace()
        compared += 1
    assert compared > 10


def test_backend_reported():
    from epiplan import engine

    assert engine.BACKEND in ("python", "cython")
    assert _engine_py.BACKEND == "python"


def test_pure_python_env_forces_fallback(tmp_path):
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c",
         "from epiplan import engine; print(engine.BACKEND)"],
        env={"PATH": "/usr/bin:/bin", "EPIPLAN_PURE_PYTHON": "1"},
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
