"""Grids, boundary materialization, and stencil application.

Storage layout: each grid owns one contiguous 1-D buffer covering the
extent plus its halo, with the first-named dimension varying fastest.
Strides are fixed at construction, so a relative access is a single
precomputed linear offset from the cursor's own offset; that is the whole
point of checking safety statically, and ``index_rel`` therefore performs
no bounds test (an ``assert`` guards debug runs only).

Extents are lower-inclusive, upper-exclusive.  A ``+n`` region component
materializes at ``upper - 1 + n`` and ``-n`` at ``lower - n``.

Application is double-buffered: the input grid is never written, so cursor
iteration order is unobservable.  ``run_a`` keeps the boundary (copying the
halo for static boundaries, recomputing the dynamic clauses against the new
interior); ``run`` drops it, returning a grid with no regions and zero halo.
"""

from __future__ import annotations

import copy
import itertools

import numpy as np

from . import expr as E
from .core import (
    AbsIndex,
    BoundaryClause,
    BoundarySpec,
    DimSpec,
    Dynamism,
    Rel,
    RegionDescriptor,
    RelIndex,
    Wild,
    empty_boundary,
)
from .errors import (
    DuplicateCellError,
    ElemTypeMismatchError,
    IndexOutsideExtentError,
    InvalidExtentError,
    MissingCellError,
    OutOfBoundsAccessError,
    RankMismatchError,
    SafetyViolationError,
    SizeMismatchError,
    TypeMismatchError,
)
from .safety import check_application
from .syntax import StencilDef

_DTYPES = {"float64": np.float64, "int64": np.int64}


class Grid:
    """An immutable n-dimensional array with halo storage and a boundary.

    Treat instances as read-only once construction returns; the runtime
    itself only writes cursors on private shallow copies during scalar
    application.
    """

    __slots__ = (
        "dims",
        "extent_lower",
        "extent_upper",
        "cursor",
        "spec",
        "storage_lower",
        "storage_upper",
        "strides",
        "data",
    )

    def __init__(self, dims: DimSpec, lower: AbsIndex, upper: AbsIndex, spec: BoundarySpec):
        rank = dims.rank
        if not (len(lower) == len(upper) == rank == spec.rank):
            raise RankMismatchError(
                f"rank disagreement: dims {rank}, lower {len(lower)}, "
                f"upper {len(upper)}, boundary {spec.rank}"
            )
        if any(upper[d] <= lower[d] for d in range(rank)):
            raise InvalidExtentError(f"empty extent {lower}..{upper}")
        self.dims = dims
        self.extent_lower = tuple(lower)
        self.extent_upper = tuple(upper)
        self.cursor = tuple(lower)
        self.spec = spec
        self.storage_lower = tuple(lower[d] + spec.halo_lower[d] for d in range(rank))
        self.storage_upper = tuple(upper[d] - 1 + spec.halo_upper[d] for d in range(rank))
        shape = [self.storage_upper[d] - self.storage_lower[d] + 1 for d in range(rank)]
        strides = [1] * rank
        for d in range(1, rank):
            strides[d] = strides[d - 1] * shape[d - 1]
        self.strides = tuple(strides)
        self.data = np.zeros(int(np.prod(shape)), dtype=_DTYPES[spec.elem_type])

    # -- geometry ------------------------------------------------------

    @property
    def rank(self) -> int:
        return self.dims.rank

    @property
    def dynamism(self) -> Dynamism:
        return self.spec.dynamism

    def storage_shape(self) -> tuple[int, ...]:
        return tuple(
            self.storage_upper[d] - self.storage_lower[d] + 1 for d in range(self.rank)
        )

    def extent_shape(self) -> tuple[int, ...]:
        return tuple(
            self.extent_upper[d] - self.extent_lower[d] for d in range(self.rank)
        )

    def linear(self, a: AbsIndex) -> int:
        return sum(
            (a[d] - self.storage_lower[d]) * self.strides[d] for d in range(self.rank)
        )

    def _ndview(self) -> np.ndarray:
        # axis k of the view is dimension rank-1-k: first dimension fastest
        return self.data.reshape(self.storage_shape()[::-1])

    def _interior_slices(self, offset: RelIndex | None = None) -> tuple[slice, ...]:
        off = offset or (0,) * self.rank
        slices = []
        for d in reversed(range(self.rank)):
            start = self.extent_lower[d] - self.storage_lower[d] + off[d]
            slices.append(slice(start, start + self.extent_shape()[d]))
        return tuple(slices)

    # -- value access --------------------------------------------------

    def size_tuple(self) -> tuple[int, ...]:
        return tuple(
            self.extent_upper[d] - self.extent_lower[d] for d in range(self.rank)
        )

    def at_abs(self, a: AbsIndex):
        """Checked absolute read anywhere in storage (the ``!!!`` operator)."""
        if len(a) != self.rank:
            raise OutOfBoundsAccessError(f"index {a} has wrong rank {len(a)}")
        for d in range(self.rank):
            if not self.storage_lower[d] <= a[d] <= self.storage_upper[d]:
                raise OutOfBoundsAccessError(
                    f"index {a} outside storage {self.storage_lower}..{self.storage_upper}"
                )
        return self.data[self.linear(a)]

    def interior_values(self) -> np.ndarray:
        """Interior cells in construction order (first dimension fastest)."""
        return np.ascontiguousarray(self._ndview()[self._interior_slices()]).ravel()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return (
            self.dims == other.dims
            and self.extent_lower == other.extent_lower
            and self.extent_upper == other.extent_upper
            and self.spec == other.spec
            and self.data.dtype == other.data.dtype
            and self.data.tobytes() == other.data.tobytes()
        )

    def __repr__(self) -> str:
        return (
            f"Grid(dims={self.dims.names}, extent={self.extent_lower}.."
            f"{self.extent_upper}, elem={self.spec.elem_type}, "
            f"regions={len(self.spec.region_set)})"
        )


# ----------------------------------------------------------------------
# Construction


def _coerce_values(values, elem_type: str, count: int) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.size != count:
        raise SizeMismatchError(f"expected {count} values, got {arr.size}")
    if arr.dtype.kind not in "iuf":
        raise ElemTypeMismatchError(f"non-numeric values of dtype {arr.dtype}")
    if elem_type == "int64" and arr.dtype.kind == "f":
        raise ElemTypeMismatchError("float values for an int grid")
    return arr.astype(_DTYPES[elem_type])


def list_grid(dims, lower, upper, values, spec: BoundarySpec) -> Grid:
    """Build a grid from a flat value sequence plus a boundary.

    Values fill the interior with the first-named dimension varying
    fastest.  Static clauses are materialized once; dynamic clauses then
    run against the fresh interior.
    """
    g = Grid(dims, tuple(lower), tuple(upper), spec)
    count = int(np.prod(g.extent_shape()))
    arr = _coerce_values(values, spec.elem_type, count)
    g._ndview()[g._interior_slices()] = arr.reshape(g.extent_shape()[::-1])
    materialize_boundary(g, "static")
    materialize_boundary(g, "dynamic")
    return g


def grid_from_pairs(dims, lower, upper, pairs, spec: BoundarySpec) -> Grid:
    """Build a grid from (index, value) pairs covering the extent exactly once."""
    g = Grid(dims, tuple(lower), tuple(upper), spec)
    count = int(np.prod(g.extent_shape()))
    seen: dict[AbsIndex, object] = {}
    for idx, value in pairs:
        idx = tuple(idx)
        if len(idx) != g.rank:
            raise RankMismatchError(f"index {idx} has wrong rank")
        if not all(
            g.extent_lower[d] <= idx[d] < g.extent_upper[d] for d in range(g.rank)
        ):
            raise IndexOutsideExtentError(f"index {idx} outside extent")
        if idx in seen:
            raise DuplicateCellError(f"cell {idx} assigned twice")
        seen[idx] = value
    if len(seen) != count:
        raise MissingCellError(f"{count - len(seen)} cells unassigned")
    shape = g.extent_shape()
    fill_strides = [1] * g.rank
    for d in range(1, g.rank):
        fill_strides[d] = fill_strides[d - 1] * shape[d - 1]
    values = np.empty(count, dtype=object)
    for idx, value in seen.items():
        flat = sum((idx[d] - g.extent_lower[d]) * fill_strides[d] for d in range(g.rank))
        values[flat] = value
    arr = _coerce_values(list(values), spec.elem_type, count)
    g._ndview()[g._interior_slices()] = arr.reshape(g.extent_shape()[::-1])
    materialize_boundary(g, "static")
    materialize_boundary(g, "dynamic")
    return g


def list_grid_no_boundary(dims, lower, upper, values, elem_type: str = "float64") -> Grid:
    """Grid with no boundary regions and zero halo."""
    return list_grid(dims, lower, upper, values, empty_boundary(len(lower), elem_type))


# ----------------------------------------------------------------------
# Boundary materialization


def enumerate_region_cells(
    descriptor: RegionDescriptor, lower: AbsIndex, upper: AbsIndex
):
    """Yield (cell, wildcard bindings) for a descriptor on an extent."""
    axes = []
    for d, comp in enumerate(descriptor.components):
        if isinstance(comp, Wild):
            axes.append([(coord, (comp.name, coord)) for coord in range(lower[d], upper[d])])
        elif comp.offset < 0:
            axes.append([(lower[d] + comp.offset, None)])
        else:
            axes.append([(upper[d] - 1 + comp.offset, None)])
    for combo in itertools.product(*reversed(axes)):
        combo = tuple(reversed(combo))
        cell = tuple(c for c, _ in combo)
        env = dict(b for _, b in combo if b is not None)
        yield cell, env


def _store_scalar(g: Grid, cell: AbsIndex, value):
    if isinstance(value, (tuple, np.ndarray)) or not E._is_numeric(value):
        raise TypeMismatchError(f"boundary body produced non-scalar {value!r}")
    if g.spec.elem_type == "int64" and E._is_float(value):
        raise TypeMismatchError("boundary body produced a float for an int grid")
    g.data[g.linear(cell)] = value


def materialize_boundary(g: Grid, which: str = "both"):
    """Evaluate boundary clauses into the halo, in clause order.

    ``which`` selects "static", "dynamic", or "both".  Dynamic bodies see
    the grid as it currently stands; their checked accesses may touch the
    whole storage region.
    """
    if which not in ("static", "dynamic", "both"):
        raise ValueError(f"bad selector {which!r}")
    for clause in g.spec.clauses:
        if which == "static" and clause.dynamic:
            continue
        if which == "dynamic" and not clause.dynamic:
            continue
        for cell, env in enumerate_region_cells(
            clause.descriptor, g.extent_lower, g.extent_upper
        ):
            if clause.dynamic:
                env[clause.grid_param] = g
            _store_scalar(g, cell, E.eval_expr(clause.body, env))


# ----------------------------------------------------------------------
# Indexing


def rel_offset(g: Grid, r: RelIndex) -> int:
    """The precomputed linear displacement of a relative index."""
    return sum(r[d] * g.strides[d] for d in range(g.rank))


def index_rel(g: Grid, r: RelIndex):
    """Unchecked cursor-relative read.

    Contract: a passed safety check covers every offset used.  The assert
    exists for debug runs only and vanishes under ``python -O``.
    """
    off = g.linear(g.cursor) + rel_offset(g, r)
    assert 0 <= off < g.data.size, f"relative access {r} escaped storage"
    return g.data[off]


def index_abs_checked(g: Grid, a: AbsIndex):
    return g.at_abs(tuple(a))


def size_of(g: Grid) -> AbsIndex:
    return g.size_tuple()


# ----------------------------------------------------------------------
# Application


def _eval_interior_vectorized(stencil: StencilDef, g: Grid) -> np.ndarray:
    ndv = g._ndview()
    env = {name: ndv[g._interior_slices(off)] for name, off in stencil.bindings.items()}
    return np.asarray(E.eval_expr(stencil.body, env))


def _eval_interior_scalar(stencil: StencilDef, g: Grid) -> np.ndarray:
    gw = copy.copy(g)  # shares the buffer; private cursor
    names = list(stencil.bindings)
    offsets = [stencil.bindings[n] for n in names]
    out = []
    for cursor in itertools.product(
        *[range(g.extent_lower[d], g.extent_upper[d]) for d in reversed(range(g.rank))]
    ):
        gw.cursor = tuple(reversed(cursor))
        env = {n: index_rel(gw, off) for n, off in zip(names, offsets)}
        out.append(E.eval_expr(stencil.body, env))
    kind = "f" if any(E._is_float(v) for v in out) else "i"
    arr = np.array(out, dtype=np.float64 if kind == "f" else np.int64)
    return arr.reshape(g.extent_shape()[::-1])


def _apply(stencil: StencilDef, g: Grid, scalar: bool) -> np.ndarray:
    report = check_application(stencil, g.spec)
    if not report.ok:
        raise SafetyViolationError(report)
    if scalar:
        res = _eval_interior_scalar(stencil, g)
    else:
        res = _eval_interior_vectorized(stencil, g)
    if res.dtype.kind not in "iuf":
        raise TypeMismatchError(f"stencil body produced dtype {res.dtype}")
    return res


def run_a(stencil: StencilDef, g: Grid, scalar: bool = False) -> Grid:
    """Apply a stencil at every extent position, keeping the boundary.

    Static boundaries carry over bit-identically; dynamic clauses are
    recomputed against the new interior.
    """
    res = _apply(stencil, g, scalar)
    if g.spec.elem_type == "int64" and res.dtype.kind == "f":
        raise TypeMismatchError("stencil body produced floats for an int grid")
    out = Grid(g.dims, g.extent_lower, g.extent_upper, g.spec)
    out.data[:] = g.data
    out._ndview()[out._interior_slices()] = res
    if g.dynamism == Dynamism.DYNAMIC:
        materialize_boundary(out, "dynamic")
    return out


def run(stencil: StencilDef, g: Grid, scalar: bool = False) -> Grid:
    """Apply a stencil and drop the boundary: empty region set, zero halo."""
    res = _apply(stencil, g, scalar)
    elem = "float64" if res.dtype.kind == "f" else "int64"
    out = Grid(g.dims, g.extent_lower, g.extent_upper, empty_boundary(g.rank, elem))
    out._ndview()[out._interior_slices()] = res
    return out
