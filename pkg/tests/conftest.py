"""Shared program sources and helpers for the test suite."""

import pytest

from ypnosc.syntax import parse_program

LAPLACE_SRC = """\
dimensions X, Y;

stencil laplace = fun X*Y:| _   t  _ |
                          | l  @c  r |
                          | _   b  _ | -> t + l + r + b - 4.0*c;

boundary zero : Double = from (-1, -1) to (+1, +1) -> 0.0;
"""

WRAPREFLECT_SRC = """\
dimensions X, Y;

stencil laplace = fun X*Y:| _   t  _ |
                          | l  @c  r |
                          | _   b  _ | -> t + l + r + b - 4.0*c;

boundary wrapreflect : Double =
    (*i, -1) g -> g!!!(i, 0)
    (-1, *j) g -> g!!!(fst (size g) - 1, j)
    (+1, *j) g -> g!!!(0, j)
    from (-1, +1) to (+1, +2) -> 0.0
    (-1, -1) g -> g!!!(0, 0)
    (+1, -1) g -> g!!!(fst (size g) - 1, 0);
"""

# the one-deep region set around a rank-2 grid, by conventional letter
REGIONS_1DEEP = {
    "a": (-1, -1),
    "b": (0, -1),
    "c": (1, -1),
    "d": (-1, 0),
    "e": (1, 0),
    "f": (-1, 1),
    "g": (0, 1),
    "h": (1, 1),
}


@pytest.fixture(scope="session")
def laplace_prog():
    return parse_program(LAPLACE_SRC)


@pytest.fixture(scope="session")
def wrap_prog():
    return parse_program(WRAPREFLECT_SRC)
