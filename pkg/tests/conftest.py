import pytest

from dinicvx import eval_many, make_grid, parse, parse_interval


def phi_of(source: str, arity: int = 1):
    fn = parse(source, arity)
    return lambda pts: eval_many(fn, pts)


@pytest.fixture
def unit_grid():
    return make_grid(parse_interval("[-1,1]"), 257, 1e-6)


@pytest.fixture
def unit_interval():
    return parse_interval("[-1,1]")


def grid_for(domain: str, n: int = 257, margin: float = 1e-6):
    return make_grid(parse_interval(domain), n, margin)
