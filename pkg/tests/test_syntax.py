import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ypnosc.core import Rel, RegionDescriptor, Wild, abs_to_rel
from ypnosc.errors import (
    DuplicateNameError,
    DuplicateRegionError,
    MalformedRangeError,
    MissingCursorError,
    MultipleCursorsError,
    ParseError,
    RaggedRowsError,
    ScopeError,
    UndeclaredDimensionError,
)
from ypnosc.expr import FloatLit
from ypnosc.syntax import (
    desugar_range_form,
    format_program,
    parse_boundary_def,
    parse_program,
)

from conftest import LAPLACE_SRC, WRAPREFLECT_SRC


def rd(*comps):
    return RegionDescriptor(
        tuple(Wild(c[1:]) if isinstance(c, str) else Rel(c) for c in comps)
    )


def shapes(spec_or_clauses):
    clauses = getattr(spec_or_clauses, "clauses", spec_or_clauses)
    return {c.descriptor.shape() for c in clauses}


class TestParseProgram:
    def test_laplace_program(self, laplace_prog):
        assert len(laplace_prog.stencils) == 1
        assert len(laplace_prog.boundaries) == 1
        assert laplace_prog.dimensions == ("X", "Y")

    def test_dimensions_alone(self):
        prog = parse_program("dimensions X, Y;")
        assert prog.stencils == {} and prog.boundaries == {}

    def test_undeclared_dimension(self):
        with pytest.raises(UndeclaredDimensionError):
            parse_program("dimensions X;\nstencil s = fun Z:| @c | -> c;")

    def test_two_dimension_declarations(self):
        with pytest.raises(ParseError):
            parse_program("dimensions X; dimensions Y;")

    def test_missing_dimension_declaration(self):
        with pytest.raises(ParseError):
            parse_program("")

    def test_duplicate_names(self):
        src = "dimensions X;\nstencil s = fun X:| @c | -> c;\nboundary s : Double = (-1) -> 0.0;"
        with pytest.raises(DuplicateNameError):
            parse_program(src)

    def test_comments_and_whitespace(self):
        src = "-- leading\ndimensions X; -- trailing\n  stencil s =\n fun X:| @c | -> c;"
        assert "s" in parse_program(src).stencils


class TestGridPatterns:
    def test_one_dimensional_bindings(self):
        prog = parse_program("dimensions X;\nstencil s = fun X:| l @c r | -> l + c + r;")
        assert prog.stencils["s"].bindings == {"l": (-1,), "c": (0,), "r": (1,)}

    def test_laplace_access_set(self, laplace_prog):
        s = laplace_prog.stencils["laplace"]
        assert s.access_set == {(-1, 0), (1, 0), (0, -1), (0, 1), (0, 0)}
        assert s.bindings == {
            "t": (0, -1),
            "l": (-1, 0),
            "c": (0, 0),
            "r": (1, 0),
            "b": (0, 1),
        }

    def test_nested_equals_flat_nine_point(self):
        flat = parse_program(
            "dimensions X, Y;\n"
            "stencil s = fun X*Y:| lt lc lb | ct @cc cb | rt rc rb | -> cc;"
        ).stencils["s"]
        nested = parse_program(
            "dimensions X, Y;\n"
            "stencil s = fun Y:| X:| lt @lc lb | @ X:| ct @cc cb | X:| rt @rc rb | | -> cc;"
        ).stencils["s"]
        assert flat.bindings == nested.bindings
        assert flat.dims == nested.dims
        assert flat.access_set == nested.access_set

    def test_rank3_nested_chain(self):
        prog = parse_program(
            "dimensions X, Y, Z;\n"
            "stencil s = fun Z:| @Y:| @X:| l @c r | | Y:| @X:| _ @u _ | | | -> l + c + r + u;"
        )
        assert prog.stencils["s"].bindings == {
            "l": (-1, 0, 0),
            "c": (0, 0, 0),
            "r": (1, 0, 0),
            "u": (0, 0, 1),
        }

    def test_cursor_wildcard_binds_nothing(self):
        prog = parse_program("dimensions X;\nstencil s = fun X:| l @_ r | -> l + r;")
        assert prog.stencils["s"].bindings == {"l": (-1,), "r": (1,)}
        assert (0,) not in prog.stencils["s"].access_set

    def test_missing_cursor(self):
        with pytest.raises(MissingCursorError):
            parse_program("dimensions X;\nstencil s = fun X:| l c r | -> c;")

    def test_multiple_cursors(self):
        with pytest.raises(MultipleCursorsError):
            parse_program("dimensions X;\nstencil s = fun X:| @l @c | -> c;")

    def test_ragged_rows(self):
        with pytest.raises(RaggedRowsError):
            parse_program("dimensions X, Y;\nstencil s = fun X*Y:| a b | @c | -> c;")

    def test_unbound_body_variable(self):
        with pytest.raises(ScopeError):
            parse_program("dimensions X;\nstencil s = fun X:| @c | -> c + ghost;")

    def test_grid_ops_banned_in_stencil_bodies(self):
        with pytest.raises(ScopeError):
            parse_program("dimensions X;\nstencil s = fun X:| @c | -> c + fst size c;")

    def test_repeated_pattern_variable(self):
        with pytest.raises(DuplicateNameError):
            parse_program("dimensions X;\nstencil s = fun X:| c @c | -> c;")


@st.composite
def flat_pattern_cases(draw):
    w = draw(st.integers(1, 5))
    h = draw(st.integers(1, 5))
    r0 = draw(st.integers(0, h - 1))
    c0 = draw(st.integers(0, w - 1))
    mask = draw(st.lists(st.booleans(), min_size=w * h, max_size=w * h))
    return w, h, r0, c0, mask


@given(flat_pattern_cases())
@settings(max_examples=200, deadline=None)
def test_flat_and_nested_desugar_identically(case):
    """Random 2D patterns up to 5x5: the flat form and its nested spelling
    produce the same stencil."""
    w, h, r0, c0, mask = case
    names = {}
    for r in range(h):
        for c in range(w):
            names[(r, c)] = f"v{r}_{c}" if mask[r * w + c] else "_"
    body_vars = [n for n in names.values() if n != "_"]
    body = " + ".join(body_vars) if body_vars else "0.0"

    def cell(r, c):
        return ("@" if (r, c) == (r0, c0) else "") + names[(r, c)]

    flat_rows = " | ".join(" ".join(cell(r, c) for c in range(w)) for r in range(h))
    flat_src = f"dimensions X, Y;\nstencil s = fun X*Y:| {flat_rows} | -> {body};"

    inner = []
    for r in range(h):
        cells = " ".join(
            ("@" if c == c0 else "") + names[(r, c)] for c in range(w)
        )
        inner.append(("@" if r == r0 else "") + f"X:| {cells} |")
    nested_src = f"dimensions X, Y;\nstencil s = fun Y:| {' '.join(inner)} | -> {body};"

    flat = parse_program(flat_src).stencils["s"]
    nested = parse_program(nested_src).stencils["s"]
    assert flat.bindings == nested.bindings
    assert flat.dims == nested.dims
    assert flat.body == nested.body

    prog = parse_program(flat_src)
    assert parse_program(format_program(prog)) == prog


class TestRangeForm:
    def test_eight_case_expansion(self):
        clauses = desugar_range_form(rd(-1, -1), rd(1, 1), FloatLit(0.0))
        assert shapes(clauses) == {
            (-1, -1), ("*", -1), (1, -1),
            (-1, "*"), (1, "*"),
            (-1, 1), ("*", 1), (1, 1),
        }
        assert len(clauses) == 8

    def test_left_side_expansion(self):
        clauses = desugar_range_form(rd(-1, -1), rd(-1, 1), FloatLit(1.0))
        assert shapes(clauses) == {(-1, -1), (-1, "*"), (-1, 1)}

    def test_rank1_excludes_all_wildcard(self):
        # enumeration oracle: nonzero offsets in [-1, 1] plus a wildcard,
        # cartesian product minus the all-wildcard tuple
        per_dim = [{-1, "*", 1}]
        expect = {
            t for t in itertools.product(*per_dim) if any(c != "*" for c in t)
        }
        assert expect == {(-1,), (1,)}
        clauses = desugar_range_form(rd(-1), rd(1), FloatLit(0.0))
        assert shapes(clauses) == expect

    def test_positive_only_dimension_has_no_wildcard(self):
        clauses = desugar_range_form(rd(-1, 1), rd(1, 2), FloatLit(0.0))
        assert shapes(clauses) == {
            (-1, 1), ("*", 1), (1, 1), (-1, 2), ("*", 2), (1, 2),
        }

    def test_malformed_ranges(self):
        with pytest.raises(MalformedRangeError):
            desugar_range_form(rd(1), rd(-1), FloatLit(0.0))
        with pytest.raises(MalformedRangeError):
            desugar_range_form(rd("*i"), rd(1), FloatLit(0.0))
        with pytest.raises(MalformedRangeError):
            desugar_range_form(rd(-1), rd(-1, 1), FloatLit(0.0))

    @given(
        st.lists(
            st.tuples(st.integers(-3, 3), st.integers(-3, 3))
            .map(lambda p: (min(p), max(p)))
            .filter(lambda p: 0 not in p),
            min_size=1,
            max_size=3,
        )
    )
    def test_expansion_count(self, bounds):
        lo = rd(*(b[0] for b in bounds))
        hi = rd(*(b[1] for b in bounds))
        clauses = desugar_range_form(lo, hi, FloatLit(0.0))
        sizes = []
        for a, b in bounds:
            n = sum(1 for k in range(a, b + 1) if k != 0) + (1 if a < 0 < b else 0)
            sizes.append(n)
        product = 1
        for n in sizes:
            product *= n
        has_all_wild = all(a < 0 < b for a, b in bounds)
        assert len(clauses) == product - (1 if has_all_wild else 0)
        assert all(
            any(not isinstance(c, Wild) for c in cl.descriptor.components)
            for cl in clauses
        )

    @given(
        st.lists(
            st.tuples(st.integers(-3, 3), st.integers(-3, 3))
            .map(lambda p: (min(p), max(p)))
            .filter(lambda p: 0 not in p),
            min_size=1,
            max_size=2,
        )
    )
    def test_clauses_within_halo(self, bounds):
        lo = rd(*(b[0] for b in bounds))
        hi = rd(*(b[1] for b in bounds))
        clauses = desugar_range_form(lo, hi, FloatLit(0.0))
        from ypnosc.core import BoundarySpec

        spec = BoundarySpec("float64", tuple(clauses), len(bounds))
        for cl in clauses:
            r = abs_to_rel(cl.descriptor)
            assert all(
                spec.halo_lower[d] <= r[d] <= spec.halo_upper[d]
                for d in range(len(bounds))
            )


class TestBoundaryDefs:
    def test_laplace_boundary(self, laplace_prog):
        spec = laplace_prog.boundaries["zero"]
        assert len(spec.clauses) == 8
        assert spec.dynamism.name == "STATIC"
        assert (spec.halo_lower, spec.halo_upper) == ((-1, -1), (1, 1))

    def test_wrap_reflect_boundary(self, wrap_prog):
        spec = wrap_prog.boundaries["wrapreflect"]
        assert spec.dynamism.name == "DYNAMIC"
        assert spec.halo_upper == (1, 2)
        assert len(spec.clauses) == 5 + 6  # five specific + six from the range

    def test_two_sided_values_boundary(self):
        spec = parse_boundary_def(
            "boundary sides : Double = from (-1, -1) to (-1, +1) -> 1.0"
            " from (+1, -1) to (+1, +1) -> 2.0 (*i, -1) -> 0.0 (*i, +1) -> 0.0;"
        )
        left = {c.descriptor.shape() for c in spec.clauses if c.body == FloatLit(1.0)}
        right = {c.descriptor.shape() for c in spec.clauses if c.body == FloatLit(2.0)}
        assert left == {(-1, -1), (-1, "*"), (-1, 1)}
        assert right == {(1, -1), (1, "*"), (1, 1)}

    def test_duplicate_region(self):
        with pytest.raises(DuplicateRegionError):
            parse_boundary_def("boundary b : Double = (-1) -> 0.0 (-1) -> 1.0;")

    def test_static_clause_may_not_use_grid_ops(self):
        with pytest.raises(ScopeError):
            parse_boundary_def("boundary b : Double = (*i, -1) -> g!!!(i, 0);")

    def test_dynamic_clause_binds_grid(self):
        spec = parse_boundary_def("boundary b : Double = (*i, -1) g -> g!!!(i, 0);")
        assert spec.clauses[0].grid_param == "g"
        assert spec.clauses[0].dynamic

    def test_unbound_wildcard_in_body(self):
        with pytest.raises(ScopeError):
            parse_boundary_def("boundary b : Double = (-1, -1) -> i;")

    def test_all_wildcard_descriptor_rejected(self):
        with pytest.raises(ParseError):
            parse_boundary_def("boundary b : Double = (*i, *j) -> 0.0;")

    def test_tuple_body_rejected_outside_access_index(self):
        with pytest.raises(ScopeError):
            parse_boundary_def("boundary b : Double = (-1) -> (1.0, 2.0);")

    def test_rank1_wrap_uses_fst_of_size(self):
        spec = parse_boundary_def(
            "boundary wrap : Double = (+1) g -> g!!!(0) (-1) g -> g!!!(fst (size g) - 1);"
        )
        assert spec.dynamism.name == "DYNAMIC"
        assert spec.region_set == {(1,), (-1,)}

    def test_int_element_type(self):
        spec = parse_boundary_def("boundary b : Int = (-1) -> 7;")
        assert spec.elem_type == "int64"


class TestRoundTrip:
    @pytest.mark.parametrize("src", [LAPLACE_SRC, WRAPREFLECT_SRC])
    def test_named_programs(self, src):
        prog = parse_program(src)
        assert parse_program(format_program(prog)) == prog

    def test_rank1_and_rank3(self):
        src = (
            "dimensions X, Y, Z;\n"
            "stencil one = fun X:| a @b c | -> a - b / c;\n"
            "stencil three = fun Z:| @Y:| @X:| l @c r | | Y:| @X:| _ @u _ | | | -> l + c + r + u;\n"
            "boundary edges : Int = (-1, -1, -1) -> 0 (*i, +2, -1) -> i + 1;"
        )
        prog = parse_program(src)
        assert parse_program(format_program(prog)) == prog

    def test_expression_precedence_survives(self):
        src = "dimensions X;\nstencil s = fun X:| a @b c | -> (a + b) * c - a / (b - c) + -2.0*b;"
        prog = parse_program(src)
        assert parse_program(format_program(prog)) == prog
