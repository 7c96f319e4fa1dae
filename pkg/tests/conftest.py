import random

import pytest

from sitrewrite.domains import make_domain
from sitrewrite.rewrite import decrease_monitor
from sitrewrite.terms import App, Var, parse_term


@pytest.fixture(autouse=True, scope="session")
def _monitor_decrease():
    """Every ordered rewrite step taken by the suite must decrease the LPO."""
    decrease_monitor.enabled = True
    yield
    decrease_monitor.enabled = False


@pytest.fixture
def P():
    return parse_term


@pytest.fixture(scope="session")
def domain():
    cache = {}

    def get(name, n, **kw):
        key = (name, n, tuple(sorted(kw.items())))
        if key not in cache:
            cache[key] = make_domain(name, n, **kw)
        return cache[key]
    return get


def random_ground(rng: random.Random, signature, depth: int):
    """Random ground term over ``signature`` of at most ``depth`` levels."""
    consts = [s for s in signature if s.arity == 0]
    funs = [s for s in signature if s.arity > 0]
    if depth <= 1 or not funs or rng.random() < 0.3:
        return App(rng.choice(consts).name)
    f = rng.choice(funs)
    return App(f.name, [random_ground(rng, signature, depth - 1) for _ in range(f.arity)])


def random_term(rng: random.Random, signature, depth: int, var_names=("x", "y", "z")):
    if rng.random() < 0.25:
        return Var(rng.choice(var_names))
    consts = [s for s in signature if s.arity == 0]
    funs = [s for s in signature if s.arity > 0]
    if depth <= 1 or not funs or rng.random() < 0.3:
        return App(rng.choice(consts).name)
    f = rng.choice(funs)
    return App(f.name, [random_term(rng, signature, depth - 1, var_names) for _ in range(f.arity)])
