"""Program file front end: lexer, parser, desugarers, pretty-printer.

A program file contains, in any order after the single ``dimensions``
declaration::

    dimensions X, Y;

    stencil blur = fun X*Y:| _   t  _ |
                           | l  @c  r |
                           | _   b  _ | -> t + l + r + b - 4.0*c;

    boundary zero : Double = from (-1, -1) to (+1, +1) -> 0.0;

``--`` starts a line comment.  Whitespace and layout are insignificant;
inside pattern rows only token order and row order matter.

Grid patterns come in three forms: one-dimensional ``X:| l @c r |``,
two-dimensional flat ``X*Y:| ... |`` with one row per line of the stencil,
and nested, where the elements of a one-dimensional pattern are themselves
patterns.  Exactly one element per pattern level carries the ``@`` cursor
mark.  In the flat form, columns advance the first-named dimension and rows
the second, with the cursor cell at offset (0, 0); nesting appends the outer
offset as the last offset component, which makes the flat form and its
nested spelling desugar identically.

Boundary clauses use parenthesized region descriptors.  Offsets in a
descriptor must be nonzero: ``-n``/``+n`` sit n cells outside the lower and
upper extent, ``*v`` spans the extent and binds the coordinate to ``v``.
A ``from (lo) to (hi)`` range expands per dimension into every offset
between the bounds (skipping zero) plus a wildcard when the bounds straddle
zero, excluding the all-wildcard combination.  A clause with a grid
parameter (``(desc) g -> body``) is dynamic; only dynamic bodies may use
``size`` or ``!!!``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import expr as E
from .core import (
    BoundaryClause,
    BoundarySpec,
    DimSpec,
    Rel,
    RegionDescriptor,
    RelIndex,
    Wild,
    abs_to_rel,
)
from .errors import (
    DuplicateNameError,
    EmptyRangeError,
    MalformedRangeError,
    MissingCursorError,
    MultipleCursorsError,
    ParseError,
    RaggedRowsError,
    ScopeError,
    UndeclaredDimensionError,
)

KEYWORDS = frozenset(
    "dimensions stencil boundary fun from to size fst snd Double Int".split()
)

_SYMBOLS = ("->", "!!!", ";", ":", "|", "@", "*", "+", "-", "/", "(", ")", ",", "=")

ELEM_TYPE_NAMES = {"Double": "float64", "Int": "int64"}
ELEM_TYPE_SURFACE = {v: k for k, v in ELEM_TYPE_NAMES.items()}


@dataclass
class Token:
    kind: str  # int | float | ident | kw | sym | eof
    value: object
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            is_float = False
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    is_float = True
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            lexeme = text[i:j]
            if is_float:
                toks.append(Token("float", float(lexeme), line, col))
            else:
                toks.append(Token("int", int(lexeme), line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            name = text[i:j]
            kind = "kw" if name in KEYWORDS else "ident"
            toks.append(Token(kind, name, line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token("sym", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("eof", None, line, col))
    return toks


# Parse-tree nodes for grid patterns, before desugaring.


@dataclass
class PLeaf:
    name: str | None  # None for the _ wildcard
    cursor: bool = False


@dataclass
class PTree:
    dims: tuple[str, ...]
    rows: list[list]
    cursor: bool = False


@dataclass
class StencilDef:
    """A desugared stencil: cursor-relative bindings plus a body."""

    dims: DimSpec
    bindings: dict[str, RelIndex]
    access_set: frozenset[RelIndex]
    body: E.Expr


@dataclass
class Program:
    dimensions: tuple[str, ...]
    stencils: dict[str, StencilDef] = field(default_factory=dict)
    boundaries: dict[str, BoundarySpec] = field(default_factory=dict)


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, value) -> bool:
        tok = self.peek()
        return tok.kind in ("sym", "kw") and tok.value == value

    def expect(self, value) -> Token:
        tok = self.peek()
        if not self.at(value):
            raise ParseError(f"expected {value!r}, found {tok.value!r}", tok.line, tok.col)
        return self.advance()

    def expect_ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(f"expected {what}, found {tok.value!r}", tok.line, tok.col)
        return self.advance()

    # ------------------------------------------------------------------
    # Programs

    def parse_program(self) -> Program:
        dims = None
        stencils: dict[str, StencilDef] = {}
        boundaries: dict[str, BoundarySpec] = {}
        while self.peek().kind != "eof":
            tok = self.peek()
            if self.at("dimensions"):
                if dims is not None:
                    raise ParseError(
                        "a program has a single dimensions declaration",
                        tok.line,
                        tok.col,
                    )
                dims = self._parse_dimensions_decl()
            elif self.at("stencil"):
                name_tok, sdef = self._parse_stencil_decl(dims)
                self._bind_name(name_tok, sdef, stencils, boundaries)
            elif self.at("boundary"):
                name_tok, bspec = self._parse_boundary_decl()
                self._bind_name(name_tok, bspec, boundaries, stencils)
            else:
                raise ParseError(
                    f"expected a declaration, found {tok.value!r}", tok.line, tok.col
                )
        if dims is None:
            raise ParseError("program never declares its dimensions")
        return Program(dimensions=dims, stencils=stencils, boundaries=boundaries)

    @staticmethod
    def _bind_name(tok: Token, value, table: dict, other: dict):
        if tok.value in table or tok.value in other:
            raise DuplicateNameError(f"name {tok.value!r} already defined", tok.line, tok.col)
        table[tok.value] = value

    def _parse_dimensions_decl(self) -> tuple[str, ...]:
        self.expect("dimensions")
        names = [self.expect_ident("dimension name").value]
        while self.at(","):
            self.advance()
            names.append(self.expect_ident("dimension name").value)
        tok = self.expect(";")
        if len(set(names)) != len(names):
            raise DuplicateNameError("repeated dimension name", tok.line, tok.col)
        if len(names) > 3:
            raise ParseError("at most three dimensions are supported", tok.line, tok.col)
        return tuple(names)

    def _parse_stencil_decl(self, dims: tuple[str, ...] | None):
        self.expect("stencil")
        name_tok = self.expect_ident("stencil name")
        self.expect("=")
        self.expect("fun")
        tree = self._parse_pattern(top_level=True)
        self.expect("->")
        body = self._parse_expr()
        self.expect(";")
        sdef = desugar_grid_pattern(tree, body, declared=dims or ())
        return name_tok, sdef

    # ------------------------------------------------------------------
    # Grid patterns

    def _at_pattern_start(self) -> bool:
        # IDENT (('*' IDENT)*) ':' begins a (possibly nested) pattern
        if self.peek().kind != "ident":
            return False
        k = 1
        while self.peek(k).kind == "sym" and self.peek(k).value == "*":
            if self.peek(k + 1).kind != "ident":
                return False
            k += 2
        return self.peek(k).kind == "sym" and self.peek(k).value == ":"

    def _parse_pattern(self, top_level: bool) -> PTree:
        start = self.peek()
        dims = [self.expect_ident("dimension name").value]
        while self.at("*"):
            self.advance()
            dims.append(self.expect_ident("dimension name").value)
        self.expect(":")
        if len(dims) > 2:
            raise ParseError(
                "flat patterns are at most two-dimensional; nest patterns for rank 3",
                start.line,
                start.col,
            )
        if len(dims) == 2 and not top_level:
            raise ParseError(
                "flat patterns cannot be nested inside another pattern",
                start.line,
                start.col,
            )
        self.expect("|")
        rows = [self._parse_pattern_row()]
        self.expect("|")
        if len(dims) == 2:
            # multi-row form; each further row may open with its own bar
            # (the pictorial layout puts bars on both sides of every line)
            while True:
                opened = False
                if self.at("|") :
                    self.advance()
                    opened = True
                if not self._at_pattern_element():
                    if opened:
                        tok = self.peek()
                        raise ParseError("empty pattern row", tok.line, tok.col)
                    break
                rows.append(self._parse_pattern_row())
                self.expect("|")
        return PTree(dims=tuple(dims), rows=rows)

    def _at_pattern_element(self) -> bool:
        tok = self.peek()
        return (tok.kind == "sym" and tok.value == "@") or tok.kind == "ident"

    def _parse_pattern_row(self) -> list:
        row = []
        while self._at_pattern_element():
            cursor = False
            if self.at("@"):
                self.advance()
                cursor = True
            if self._at_pattern_start():
                sub = self._parse_pattern(top_level=False)
                sub.cursor = cursor
                row.append(sub)
            else:
                tok = self.expect_ident("pattern variable")
                row.append(PLeaf(None if tok.value == "_" else tok.value, cursor))
        if not row:
            tok = self.peek()
            raise ParseError("empty pattern row", tok.line, tok.col)
        return row

    # ------------------------------------------------------------------
    # Boundaries

    def _parse_boundary_decl(self):
        self.expect("boundary")
        name_tok = self.expect_ident("boundary name")
        self.expect(":")
        ty_tok = self.peek()
        if not (ty_tok.kind == "kw" and ty_tok.value in ELEM_TYPE_NAMES):
            raise ParseError(
                f"expected element type (Double or Int), found {ty_tok.value!r}",
                ty_tok.line,
                ty_tok.col,
            )
        self.advance()
        elem_type = ELEM_TYPE_NAMES[ty_tok.value]
        self.expect("=")
        clauses: list[BoundaryClause] = []
        while not self.at(";"):
            clauses.extend(self._parse_boundary_clause())
        tok = self.expect(";")
        if not clauses:
            raise ParseError("boundary definition has no clauses", tok.line, tok.col)
        spec = BoundarySpec(
            elem_type=elem_type, clauses=tuple(clauses), rank=clauses[0].descriptor.rank
        )
        return name_tok, spec

    def _parse_boundary_clause(self) -> list[BoundaryClause]:
        tok = self.peek()
        if self.at("from"):
            self.advance()
            lo = self._parse_descriptor()
            self.expect("to")
            hi = self._parse_descriptor()
            self.expect("->")
            body = self._parse_expr()
            _check_body_shape(body)
            if E.free_vars(body):
                raise ScopeError(
                    f"range clause body must be closed, found {sorted(E.free_vars(body))}",
                    tok.line,
                    tok.col,
                )
            if E.uses_grid_ops(body):
                raise ScopeError(
                    "range clauses are static; size and !!! need a grid parameter",
                    tok.line,
                    tok.col,
                )
            return desugar_range_form(lo, hi, body)
        if not self.at("("):
            raise ParseError(
                f"expected a parenthesized region descriptor, found {tok.value!r}",
                tok.line,
                tok.col,
            )
        desc = self._parse_descriptor()
        grid_param = None
        if self.peek().kind == "ident":
            grid_param = self.advance().value
        self.expect("->")
        body = self._parse_expr()
        _check_body_shape(body)
        self._check_clause_scope(desc, grid_param, body, tok)
        if all(isinstance(c, Wild) for c in desc.components):
            raise ParseError(
                "region descriptor must place at least one component outside the extent",
                tok.line,
                tok.col,
            )
        return [BoundaryClause(descriptor=desc, body=body, grid_param=grid_param)]

    @staticmethod
    def _check_clause_scope(desc, grid_param, body, tok):
        bound = set(desc.wildcard_names())
        if grid_param is not None:
            if grid_param in bound:
                raise ScopeError(
                    f"grid parameter {grid_param!r} shadows a wildcard", tok.line, tok.col
                )
            bound.add(grid_param)
        loose = E.free_vars(body) - bound
        if loose:
            raise ScopeError(f"unbound variables in clause body: {sorted(loose)}", tok.line, tok.col)
        if grid_param is None and E.uses_grid_ops(body):
            raise ScopeError(
                "static clause body may not use size or !!!", tok.line, tok.col
            )

    def _parse_descriptor(self) -> RegionDescriptor:
        tok = self.expect("(")
        comps = [self._parse_component()]
        while self.at(","):
            self.advance()
            comps.append(self._parse_component())
        self.expect(")")
        try:
            return RegionDescriptor(tuple(comps))
        except ValueError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None

    def _parse_component(self):
        tok = self.peek()
        if self.at("-") or self.at("+"):
            sign = -1 if self.advance().value == "-" else 1
            num = self.peek()
            if num.kind != "int":
                raise ParseError("expected an offset after the sign", num.line, num.col)
            self.advance()
            if num.value == 0:
                raise ParseError("region offsets must be nonzero", num.line, num.col)
            return Rel(sign * num.value)
        if self.at("*"):
            self.advance()
            name = self.expect_ident("wildcard variable")
            return Wild(name.value)
        raise ParseError(
            f"expected -n, +n or *v in a region descriptor, found {tok.value!r}",
            tok.line,
            tok.col,
        )

    # ------------------------------------------------------------------
    # Expressions
    #
    # additive < multiplicative < unary minus < !!! < atoms.  The builtins
    # size/fst/snd apply to a single following atom.

    def _parse_expr(self) -> E.Expr:
        left = self._parse_term()
        while self.at("+") or self.at("-"):
            op = self.advance().value
            left = E.BinOp(op, left, self._parse_term())
        return left

    def _parse_term(self) -> E.Expr:
        left = self._parse_unary()
        while self.at("*") or self.at("/"):
            op = self.advance().value
            left = E.BinOp(op, left, self._parse_unary())
        return left

    def _parse_unary(self) -> E.Expr:
        if self.at("-"):
            self.advance()
            return E.Neg(self._parse_unary())
        return self._parse_postfix()

    def _parse_postfix(self) -> E.Expr:
        tok = self.peek()
        atom = self._parse_atom()
        if self.at("!!!"):
            self.advance()
            if not isinstance(atom, E.Var):
                raise ParseError("!!! applies to a grid variable", tok.line, tok.col)
            index = self._parse_atom()
            return E.GridAccess(atom.name, index)
        return atom

    def _parse_atom(self) -> E.Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return E.IntLit(tok.value)
        if tok.kind == "float":
            self.advance()
            return E.FloatLit(tok.value)
        if tok.kind == "kw" and tok.value in ("size", "fst", "snd"):
            self.advance()
            return E.Builtin(tok.value, self._parse_atom())
        if tok.kind == "ident":
            self.advance()
            return E.Var(tok.value)
        if self.at("("):
            self.advance()
            items = [self._parse_expr()]
            while self.at(","):
                self.advance()
                items.append(self._parse_expr())
            self.expect(")")
            return items[0] if len(items) == 1 else E.TupleLit(tuple(items))
        raise ParseError(f"expected an expression, found {tok.value!r}", tok.line, tok.col)


# ----------------------------------------------------------------------
# Desugaring


def _tuples_only_in_access_index(e: E.Expr, in_index: bool = False) -> bool:
    match e:
        case E.TupleLit(items):
            return in_index and all(_tuples_only_in_access_index(i) for i in items)
        case E.BinOp(_, left, right):
            return _tuples_only_in_access_index(left) and _tuples_only_in_access_index(right)
        case E.Neg(operand):
            return _tuples_only_in_access_index(operand)
        case E.Builtin(_, arg):
            return _tuples_only_in_access_index(arg)
        case E.GridAccess(_, index):
            return _tuples_only_in_access_index(index, in_index=True)
        case _:
            return True


def _check_body_shape(body: E.Expr):
    if not _tuples_only_in_access_index(body):
        raise ScopeError("tuple literals may only appear as !!! indices")


def desugar_grid_pattern(tree: PTree, body: E.Expr, declared=()) -> StencilDef:
    """Turn a parsed pattern plus body into a stencil definition."""
    dims, bindings = _desugar_tree(tree)
    if declared:
        for d in dims:
            if d not in declared:
                raise UndeclaredDimensionError(f"dimension {d!r} was never declared")
    if len(set(dims)) != len(dims):
        raise ParseError(f"pattern repeats a dimension: {dims}")
    if len(dims) > 3:
        raise ParseError("patterns beyond rank 3 are not supported")
    _check_body_shape(body)
    if E.uses_grid_ops(body):
        raise ScopeError("stencil bodies may not use size or !!!")
    loose = E.free_vars(body) - set(bindings)
    if loose:
        raise ScopeError(f"unbound variables in stencil body: {sorted(loose)}")
    return StencilDef(
        dims=DimSpec(tuple(dims)),
        bindings=bindings,
        access_set=frozenset(bindings.values()),
        body=body,
    )


def _desugar_tree(tree: PTree) -> tuple[tuple[str, ...], dict[str, RelIndex]]:
    if len(tree.dims) == 2:
        return _desugar_flat(tree)
    if len(tree.rows) != 1:
        raise ParseError("a one-dimensional pattern has exactly one row")
    return _desugar_row(tree.dims[0], tree.rows[0])


def _desugar_flat(tree: PTree) -> tuple[tuple[str, ...], dict[str, RelIndex]]:
    rows = tree.rows
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise RaggedRowsError("flat pattern rows differ in length")
    cursor_cells = []
    for r, row in enumerate(rows):
        for c, cell in enumerate(row):
            if not isinstance(cell, PLeaf):
                raise ParseError("flat pattern cells must be variables or _")
            if cell.cursor:
                cursor_cells.append((r, c))
    if not cursor_cells:
        raise MissingCursorError("pattern has no @ cursor")
    if len(cursor_cells) > 1:
        raise MultipleCursorsError("pattern has more than one @ cursor")
    r0, c0 = cursor_cells[0]
    bindings: dict[str, RelIndex] = {}
    for r, row in enumerate(rows):
        for c, cell in enumerate(row):
            if cell.name is None:
                continue
            if cell.name in bindings:
                raise DuplicateNameError(f"variable {cell.name!r} bound twice in pattern")
            bindings[cell.name] = (c - c0, r - r0)
    return tree.dims, bindings


def _desugar_row(dim: str, row: list) -> tuple[tuple[str, ...], dict[str, RelIndex]]:
    cursor_positions = [i for i, el in enumerate(row) if el.cursor]
    if not cursor_positions:
        raise MissingCursorError("pattern has no @ cursor")
    if len(cursor_positions) > 1:
        raise MultipleCursorsError("pattern has more than one @ cursor")
    i0 = cursor_positions[0]
    subtrees = [el for el in row if isinstance(el, PTree)]
    if not subtrees:
        bindings: dict[str, RelIndex] = {}
        for i, el in enumerate(row):
            if el.name is None:
                continue
            if el.name in bindings:
                raise DuplicateNameError(f"variable {el.name!r} bound twice in pattern")
            bindings[el.name] = (i - i0,)
        return (dim,), bindings
    # nested pattern: every element is a sub-pattern or a _ placeholder
    if any(isinstance(el, PLeaf) and el.name is not None for el in row):
        raise ParseError("cannot mix variables and sub-patterns at one level")
    if not isinstance(row[i0], PTree):
        raise ParseError("the cursor of a nested pattern must mark a sub-pattern")
    inner_dims = None
    bindings = {}
    for i, el in enumerate(row):
        if isinstance(el, PLeaf):
            continue
        sub_dims, sub_bindings = _desugar_tree(el)
        if inner_dims is None:
            inner_dims = sub_dims
        elif sub_dims != inner_dims:
            raise ParseError("nested sub-patterns disagree on their dimensions")
        for name, off in sub_bindings.items():
            if name in bindings:
                raise DuplicateNameError(f"variable {name!r} bound twice in pattern")
            bindings[name] = off + (i - i0,)
    return inner_dims + (dim,), bindings


def desugar_range_form(
    lo: RegionDescriptor, hi: RegionDescriptor, body: E.Expr
) -> list[BoundaryClause]:
    """Expand ``from lo to hi -> body`` into specific clauses.

    Per dimension the component set is every nonzero offset between the
    bounds, plus a wildcard when the bounds straddle zero; the cartesian
    product is emitted minus the all-wildcard combination.
    """
    if lo.rank != hi.rank:
        raise MalformedRangeError("range bounds differ in rank")
    for c in lo.components + hi.components:
        if isinstance(c, Wild):
            raise MalformedRangeError("range bounds must use fixed offsets")
    sets = []
    for d in range(lo.rank):
        a, b = lo.components[d].offset, hi.components[d].offset
        if a > b:
            raise MalformedRangeError(f"range bound {a:+d} exceeds {b:+d}")
        comps = []
        for k in range(a, b + 1):
            if k == 0:
                comps.append(Wild(f"_w{d}"))
            else:
                comps.append(Rel(k))
        sets.append(comps)
    clauses = []
    # first dimension varies fastest, mirroring how ranges read on paper
    for combo in itertools.product(*reversed(sets)):
        comps = tuple(reversed(combo))
        if all(isinstance(c, Wild) for c in comps):
            continue
        clauses.append(
            BoundaryClause(descriptor=RegionDescriptor(comps), body=body, grid_param=None)
        )
    if not clauses:
        raise EmptyRangeError("range expands to no boundary regions")
    return clauses


def parse_program(text: str) -> Program:
    """Parse a program file into its stencil and boundary definitions."""
    return _Parser(text).parse_program()


def parse_boundary_def(text: str) -> BoundarySpec:
    """Parse a single ``boundary ... ;`` declaration in isolation."""
    parser = _Parser(text)
    _, spec = parser._parse_boundary_decl()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected trailing input {tok.value!r}", tok.line, tok.col)
    return spec


# ----------------------------------------------------------------------
# Pretty-printing (the inverse of parsing, up to layout)

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_expr(e: E.Expr, parent_prec: int = 0, right_side: bool = False) -> str:
    match e:
        case E.IntLit(v):
            return str(v)
        case E.FloatLit(v):
            return repr(v)
        case E.Var(name):
            return name
        case E.Neg(operand):
            inner = format_expr(operand, 3)
            if isinstance(operand, E.Neg):
                inner = f"({inner})"  # avoid emitting the -- comment marker
            text = f"-{inner}"
            return f"({text})" if parent_prec > 2 and right_side else text
        case E.BinOp(op, left, right):
            prec = _PREC[op]
            lt = format_expr(left, prec)
            rt = format_expr(right, prec, right_side=True)
            text = f"{lt} {op} {rt}"
            if prec < parent_prec or (prec == parent_prec and right_side):
                return f"({text})"
            return text
        case E.TupleLit(items):
            return "(" + ", ".join(format_expr(i) for i in items) + ")"
        case E.Builtin(name, arg):
            if isinstance(arg, (E.Var, E.IntLit, E.FloatLit)):
                return f"{name} {format_expr(arg)}"
            return f"{name} ({format_expr(arg, 0)})"
        case E.GridAccess(grid, index):
            if isinstance(index, E.TupleLit):
                return f"{grid}!!!{format_expr(index)}"
            return f"{grid}!!!({format_expr(index, 0)})"
    raise TypeError(f"not an expression: {e!r}")


def format_descriptor(desc: RegionDescriptor) -> str:
    parts = []
    for c in desc.components:
        parts.append(f"*{c.name}" if isinstance(c, Wild) else f"{c.offset:+d}")
    return "(" + ", ".join(parts) + ")"


def _cell_text(bindings_at: dict[RelIndex, str], off: RelIndex, cursor: RelIndex) -> str:
    name = bindings_at.get(off, "_")
    return f"@{name}" if off == cursor else name


def format_stencil_pattern(sdef: StencilDef) -> str:
    rank = sdef.dims.rank
    offsets = set(sdef.bindings.values()) | {(0,) * rank}
    lo = [min(o[d] for o in offsets) for d in range(rank)]
    hi = [max(o[d] for o in offsets) for d in range(rank)]
    at = {off: name for name, off in sdef.bindings.items()}
    zero = (0,) * rank
    names = sdef.dims.names
    if rank == 1:
        row = " ".join(_cell_text(at, (x,), zero) for x in range(lo[0], hi[0] + 1))
        return f"{names[0]}:| {row} |"
    if rank == 2:
        rows = []
        for y in range(lo[1], hi[1] + 1):
            rows.append(
                " ".join(_cell_text(at, (x, y), zero) for x in range(lo[0], hi[0] + 1))
            )
        return f"{names[0]}*{names[1]}:| " + " | ".join(rows) + " |"
    # rank 3 prints as nested one-dimensional patterns
    outer = []
    for z in range(lo[2], hi[2] + 1):
        plane = {
            (x, y): n for (x, y, zz), n in ((o, n) for o, n in at.items()) if zz == z
        }
        if not plane and z != 0:
            outer.append("_")
            continue
        mids = []
        for y in range(lo[1], hi[1] + 1):
            # every nesting level re-marks its own cursor for alignment
            cells = " ".join(
                _cell_text(plane, (x, y), (0, 0)) for x in range(lo[0], hi[0] + 1)
            )
            prefix = "@" if y == 0 else ""
            mids.append(f"{prefix}{names[0]}:| {cells} |")
        marker = "@" if z == 0 else ""
        outer.append(f"{marker}{names[1]}:| " + " ".join(mids) + " |")
    return f"{names[2]}:| " + " ".join(outer) + " |"


def format_boundary(name: str, spec: BoundarySpec) -> str:
    lines = [f"boundary {name} : {ELEM_TYPE_SURFACE[spec.elem_type]} ="]
    for clause in spec.clauses:
        param = f" {clause.grid_param}" if clause.dynamic else ""
        lines.append(
            f"    {format_descriptor(clause.descriptor)}{param} -> {format_expr(clause.body)}"
        )
    return "\n".join(lines) + ";"


def format_program(prog: Program) -> str:
    parts = ["dimensions " + ", ".join(prog.dimensions) + ";"]
    for name, sdef in prog.stencils.items():
        parts.append(
            f"stencil {name} = fun {format_stencil_pattern(sdef)} -> {format_expr(sdef.body)};"
        )
    for name, spec in prog.boundaries.items():
        parts.append(format_boundary(name, spec))
    return "\n\n".join(parts) + "\n"
