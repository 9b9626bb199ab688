"""Body expression language for stencils and boundary clauses.

Small by design: arithmetic, variables, index tuples, and the three grid
builtins (``size``, ``fst``/``snd``, and checked absolute access via
``!!!``).  Evaluation is strict and left-to-right; float arithmetic follows
IEEE-754 for 64-bit values, integer division truncates toward zero and
raises on a zero divisor.

The evaluator is shared by three callers: scalar stencil application (values
are numpy scalars), vectorized application (values are numpy arrays of the
whole interior window), and boundary materialization (the environment also
carries the grid object for dynamic clauses).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivisionByZeroError, TypeMismatchError


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class FloatLit:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class TupleLit:
    items: tuple["Expr", ...]


@dataclass(frozen=True)
class Builtin:
    name: str  # size | fst | snd
    arg: "Expr"


@dataclass(frozen=True)
class GridAccess:
    """``g !!! index``: bounds-checked absolute access inside a boundary body."""

    grid: str
    index: "Expr"


Expr = IntLit | FloatLit | Var | BinOp | Neg | TupleLit | Builtin | GridAccess


def free_vars(e: Expr) -> frozenset[str]:
    match e:
        case Var(name):
            return frozenset((name,))
        case BinOp(_, left, right):
            return free_vars(left) | free_vars(right)
        case Neg(operand):
            return free_vars(operand)
        case TupleLit(items):
            return frozenset().union(*(free_vars(i) for i in items)) if items else frozenset()
        case Builtin(_, arg):
            return free_vars(arg)
        case GridAccess(grid, index):
            return frozenset((grid,)) | free_vars(index)
        case _:
            return frozenset()


def uses_grid_ops(e: Expr) -> bool:
    """True when the expression contains ``size`` or a ``!!!`` access."""
    match e:
        case Builtin("size", _) | GridAccess():
            return True
        case BinOp(_, left, right):
            return uses_grid_ops(left) or uses_grid_ops(right)
        case Neg(operand):
            return uses_grid_ops(operand)
        case TupleLit(items):
            return any(uses_grid_ops(i) for i in items)
        case Builtin(_, arg):
            return uses_grid_ops(arg)
        case _:
            return False


def _is_int(v) -> bool:
    if isinstance(v, np.ndarray):
        return v.dtype.kind in "iu"
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool)


def _is_float(v) -> bool:
    if isinstance(v, np.ndarray):
        return v.dtype.kind == "f"
    return isinstance(v, (float, np.floating))


def _is_numeric(v) -> bool:
    return _is_int(v) or _is_float(v)


def _trunc_div_int(a, b):
    # floor division rounds away from zero for mixed signs; correct via signs
    if isinstance(b, np.ndarray) or isinstance(a, np.ndarray):
        if np.any(b == 0):
            raise DivisionByZeroError("integer division by zero")
        return np.sign(a) * np.sign(b) * (np.abs(a) // np.abs(b))
    if b == 0:
        raise DivisionByZeroError("integer division by zero")
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def _arith(op: str, a, b):
    if not (_is_numeric(a) and _is_numeric(b)):
        raise TypeMismatchError(f"operator {op!r} needs numeric operands")
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    # division: IEEE for floats, truncating for ints
    if _is_int(a) and _is_int(b):
        return _trunc_div_int(a, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
            return np.true_divide(a, b)
        return np.float64(a) / np.float64(b)


def eval_expr(e: Expr, env: dict):
    """Evaluate ``e`` under ``env``; every free variable must be bound."""
    match e:
        case IntLit(value) | FloatLit(value):
            return value
        case Var(name):
            return env[name]
        case Neg(operand):
            v = eval_expr(operand, env)
            if not _is_numeric(v):
                raise TypeMismatchError("negation needs a numeric operand")
            return -v
        case BinOp(op, left, right):
            return _arith(op, eval_expr(left, env), eval_expr(right, env))
        case TupleLit(items):
            return tuple(eval_expr(i, env) for i in items)
        case Builtin("size", arg):
            g = eval_expr(arg, env)
            if not hasattr(g, "size_tuple"):
                raise TypeMismatchError("size expects a grid")
            return g.size_tuple()
        case Builtin(("fst" | "snd") as name, arg):
            v = eval_expr(arg, env)
            need = 1 if name == "fst" else 2
            if not isinstance(v, tuple) or len(v) < need:
                raise TypeMismatchError(f"{name} expects a tuple of at least {need}")
            return v[0] if name == "fst" else v[1]
        case GridAccess(grid, index):
            g = env[grid]
            if not hasattr(g, "at_abs"):
                raise TypeMismatchError("!!! expects a grid on the left")
            idx = eval_expr(index, env)
            if not isinstance(idx, tuple):
                idx = (idx,)
            if not all(_is_int(c) for c in idx):
                raise TypeMismatchError("!!! index components must be integers")
            return g.at_abs(tuple(int(c) for c in idx))
        case _:
            raise TypeMismatchError(f"cannot evaluate {e!r}")
