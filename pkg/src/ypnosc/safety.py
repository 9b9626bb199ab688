"""Static safety: decide whether relative accesses can ever leave storage.

The checker works purely on edge-relative region indices.  A relative index
is safe when it is itself a boundary region and every single-step
predecessor toward the cursor is safe; the zero index is always safe.
Unfolded, that means the whole "box" of indices between the access and the
cursor must be covered, which is exactly what keeps e.g. a corner access
from being accepted on the strength of the corner region alone.

``coverage_oracle`` is the brute-force ground truth used to test the
recurrence: materialize the regions on a concrete extent and enumerate
every cursor/access pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import AbsIndex, BoundarySpec, RelIndex, pred
from .errors import RankMismatchError
from .syntax import StencilDef


@dataclass(frozen=True)
class SafetyReport:
    ok: bool
    # one (unsafe access offset, missing region) pair per rejected access
    violations: tuple[tuple[RelIndex, RelIndex], ...]


def in_boundary(r: RelIndex, regions) -> bool:
    """Membership of a relative index in the region set."""
    return tuple(r) in regions


def safe(r: RelIndex, regions) -> bool:
    """The recurrence: zero is safe, anything else needs its region plus
    safe single-step predecessors on every nonzero component."""
    memo: dict[RelIndex, bool] = {}

    def go(q: RelIndex) -> bool:
        if all(c == 0 for c in q):
            return True
        cached = memo.get(q)
        if cached is not None:
            return cached
        memo[q] = False  # cycle-proof placeholder; pred descent cannot cycle
        ok = in_boundary(q, regions) and all(
            go(q[:d] + (pred(q[d]),) + q[d + 1 :])
            for d in range(len(q))
            if q[d] != 0
        )
        memo[q] = ok
        return ok

    return go(tuple(r))


def _descent_box(r: RelIndex):
    """Every nonzero index the recurrence visits when checking ``r``."""
    axes = []
    for c in r:
        if c >= 0:
            axes.append(range(0, c + 1))
        else:
            axes.append(range(c, 1))
    for q in itertools.product(*axes):
        if any(c != 0 for c in q):
            yield q


def missing_regions(r: RelIndex, regions) -> list[RelIndex]:
    """Regions the recurrence needs for ``r`` but the set lacks, sorted."""
    return sorted(q for q in _descent_box(r) if q not in regions)


def check_application(stencil: StencilDef, spec: BoundarySpec) -> SafetyReport:
    """Check every access of a stencil against a boundary's region set.

    Each violating access is reported with the lexicographically smallest
    region missing from its recurrence.
    """
    if stencil.dims.rank != spec.rank:
        raise RankMismatchError(
            f"stencil rank {stencil.dims.rank} vs boundary rank {spec.rank}"
        )
    violations = []
    for off in sorted(stencil.access_set):
        if not safe(off, spec.region_set):
            violations.append((off, missing_regions(off, spec.region_set)[0]))
    return SafetyReport(ok=not violations, violations=tuple(violations))


def coverage_oracle(
    access, regions, extent_lower: AbsIndex, extent_upper: AbsIndex
) -> bool:
    """Brute-force ground truth for ``safe`` on a concrete extent.

    Marks every interior cell defined, materializes each region on the
    extent (zero components span it, signed components sit outside it), and
    then checks that every access from every cursor lands on a defined
    cell.  The extent must comfortably exceed the largest offsets involved.
    """
    rank = len(extent_lower)
    defined: set[AbsIndex] = set(
        itertools.product(*(range(extent_lower[d], extent_upper[d]) for d in range(rank)))
    )
    for r in regions:
        axes = []
        for d, off in enumerate(r):
            if off == 0:
                axes.append(range(extent_lower[d], extent_upper[d]))
            elif off < 0:
                axes.append((extent_lower[d] + off,))
            else:
                axes.append((extent_upper[d] - 1 + off,))
        defined.update(itertools.product(*axes))
    for cursor in itertools.product(
        *(range(extent_lower[d], extent_upper[d]) for d in range(rank))
    ):
        for a in access:
            if tuple(c + o for c, o in zip(cursor, a)) not in defined:
                return False
    return True
