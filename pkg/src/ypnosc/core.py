"""Domain types and the index algebra shared by the rest of the toolkit.

Indexing conventions used throughout:

* A *relative index* is a tuple of signed cell offsets, one per dimension.
  The zero vector is the cursor itself.
* An *absolute index* is a tuple of signed cell coordinates.
* Boundary *region descriptors* locate halo regions relative to the edge of
  a grid: ``-n`` means n cells before the lower extent, ``+n`` means n cells
  after the upper extent, and a wildcard spans the extent of that dimension,
  binding the coordinate to a variable.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field

from .errors import DuplicateRegionError, MixedRankError

# Signed per-dimension offsets / coordinates.  Length always equals the rank
# of the grid they are used with.
RelIndex = tuple[int, ...]
AbsIndex = tuple[int, ...]

ELEM_TYPES = ("float64", "int64")


class Dynamism(enum.IntEnum):
    """Whether boundary values may depend on a grid's interior."""

    STATIC = 0
    DYNAMIC = 1


def join_dynamism(a: Dynamism, b: Dynamism) -> Dynamism:
    """Combine dynamism flags; static only when both sides are static."""
    return Dynamism(max(a, b))


@dataclass(frozen=True)
class DimSpec:
    """Ordered dimension names of a grid; rank is 1 to 3."""

    names: tuple[str, ...]

    def __post_init__(self):
        if not 1 <= len(self.names) <= 3:
            raise ValueError(f"rank must be 1..3, got {len(self.names)}")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"dimension names must be distinct: {self.names}")

    @property
    def rank(self) -> int:
        return len(self.names)


@dataclass(frozen=True)
class Rel:
    """Region component placed a fixed nonzero offset outside the extent."""

    offset: int

    def __post_init__(self):
        if self.offset == 0:
            raise ValueError("relative region component must be nonzero")


@dataclass(frozen=True)
class Wild:
    """Region component spanning the extent, binding the coordinate."""

    name: str


RegionComponent = Rel | Wild


@dataclass(frozen=True)
class RegionDescriptor:
    """One boundary region: a component per dimension."""

    components: tuple[RegionComponent, ...]

    def __post_init__(self):
        wilds = [c.name for c in self.components if isinstance(c, Wild)]
        if len(set(wilds)) != len(wilds):
            raise ValueError(f"repeated wildcard name in descriptor: {wilds}")

    @property
    def rank(self) -> int:
        return len(self.components)

    def wildcard_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.components if isinstance(c, Wild))

    def shape(self) -> tuple:
        """Offsets with wildcards collapsed to '*'; ignores wildcard names."""
        return tuple(
            "*" if isinstance(c, Wild) else c.offset for c in self.components
        )


def pred(offset: int) -> int:
    """Step a signed offset one cell toward zero; zero is a fixed point."""
    if offset > 0:
        return offset - 1
    if offset < 0:
        return offset + 1
    return 0


def abs_to_rel(descriptor: RegionDescriptor) -> RelIndex:
    """Collapse a region descriptor to its edge-relative index.

    Wildcards land inside the extent, so they contribute offset zero; fixed
    components keep their offset.
    """
    return tuple(
        0 if isinstance(c, Wild) else c.offset for c in descriptor.components
    )


def halo_bounds(regions, rank: int) -> tuple[RelIndex, RelIndex]:
    """Componentwise (min, max) over the region set plus the origin.

    The origin keeps both bounds anchored at zero, so ``lower <= 0 <= upper``
    always holds and an empty region set yields zero-width halos.
    """
    lower = [0] * rank
    upper = [0] * rank
    for r in regions:
        for d, off in enumerate(r):
            lower[d] = min(lower[d], off)
            upper[d] = max(upper[d], off)
    return tuple(lower), tuple(upper)


@dataclass(frozen=True)
class BoundaryClause:
    """A single boundary rule: region descriptor -> body expression.

    ``grid_param`` names the grid parameter of a dynamic clause; it is None
    for static clauses, whose bodies may not read the grid at all.
    """

    descriptor: RegionDescriptor
    body: object  # expr.Expr; kept untyped to avoid a module cycle
    grid_param: str | None = None

    @property
    def dynamic(self) -> bool:
        return self.grid_param is not None


@dataclass(frozen=True)
class BoundarySpec:
    """An ordered collection of boundary clauses plus derived facts.

    Derived fields (region set, dynamism, halo bounds) are computed at
    construction; clauses with duplicate regions are rejected here, the
    single load-time point all boundary definitions pass through.
    """

    elem_type: str
    clauses: tuple[BoundaryClause, ...]
    rank: int

    region_set: frozenset[RelIndex] = field(init=False, compare=False)
    dynamism: Dynamism = field(init=False, compare=False)
    halo_lower: RelIndex = field(init=False, compare=False)
    halo_upper: RelIndex = field(init=False, compare=False)

    def __post_init__(self):
        if self.elem_type not in ELEM_TYPES:
            raise ValueError(f"unsupported element type: {self.elem_type}")
        seen: dict[RelIndex, RegionDescriptor] = {}
        for clause in self.clauses:
            if clause.descriptor.rank != self.rank:
                raise MixedRankError(
                    f"descriptor {clause.descriptor.shape()} has rank "
                    f"{clause.descriptor.rank}, boundary has rank {self.rank}"
                )
            r = abs_to_rel(clause.descriptor)
            if r in seen:
                raise DuplicateRegionError(
                    f"duplicate boundary region {clause.descriptor.shape()}"
                )
            seen[r] = clause.descriptor
        object.__setattr__(self, "region_set", frozenset(seen))
        dyn = functools.reduce(
            join_dynamism,
            (Dynamism.DYNAMIC if c.dynamic else Dynamism.STATIC for c in self.clauses),
            Dynamism.STATIC,
        )
        object.__setattr__(self, "dynamism", dyn)
        lower, upper = halo_bounds(self.region_set, self.rank)
        object.__setattr__(self, "halo_lower", lower)
        object.__setattr__(self, "halo_upper", upper)


def empty_boundary(rank: int, elem_type: str = "float64") -> BoundarySpec:
    """Boundary with no regions: zero halo, static."""
    return BoundarySpec(elem_type=elem_type, clauses=(), rank=rank)
