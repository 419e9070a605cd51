"""The session description language and its parser.

A session file declares quivers, algebras (relations, invertible arrows,
flavor), representations (dimension vector, matrices, field) and families,
followed by commands.  Example::

    quiver q3 { vertices: v; arrows: X: v -> v, Y: v -> v }
    algebra A over q3 { relations: X*Y - Y*X; invertible: ; flavor: graded }
    rep r of A { dim: v = 1; X = [[2]]; Y = [[3]]; field: q }
    ext1 r r;

Polynomials use ``*`` for concatenation, ``^`` for repeated loops, ``e_v``
for the idempotent at vertex v, rational coefficients and, over a cyclotomic
field, the reserved scalar ``zeta``.  A trailing apostrophe on an arrow name
refers to the reversed copy inside a doubled quiver and cannot be declared
directly.  ``#`` starts a comment.

Parse errors carry line and column; references are resolved while parsing,
so an unknown name or an ill-shaped matrix is reported at its source
location.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .deform import FamilySpec
from .extcalc import Representation, check_representation
from .ncalg import NCPoly, Presentation
from .quiver import DimVector, Quiver, STAR_MARKER
from .scalars import Field, QQ, parse_scalar


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<comment>#[^\n]*)"
    r"|(?P<arrowsym>->)"
    r"|(?P<id>[A-Za-z_][A-Za-z0-9_]*'*)"
    r"|(?P<int>\d+)"
    r"|(?P<sym>[{}\[\]():;,=^*+\-/])"
)


@dataclass
class Token:
    kind: str  # "id" | "int" | "sym" | "eof"
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        text = m.group(0)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            if kind == "arrowsym":
                tokens.append(Token("sym", "->", line, col))
            else:
                tokens.append(Token(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass
class QuiverBlock:
    name: str
    quiver: Quiver


@dataclass
class AlgebraBlock:
    name: str
    quiver_name: str
    relations: list
    invertible: list
    flavor: str


@dataclass
class RepBlock:
    name: str
    algebra_name: str
    dims: dict
    matrices: dict  # arrow -> list of rows of scalar strings (canonical)
    field_tag: str


@dataclass
class FamilyBlock:
    name: str
    rep_name: str
    pattern: str
    order: int


@dataclass
class Command:
    name: str
    args: list
    line: int = dc_field(compare=False, default=0)


@dataclass
class SessionFile:
    field: Field
    blocks: list = dc_field(default_factory=list)
    commands: list = dc_field(default_factory=list)
    quivers: dict = dc_field(default_factory=dict)
    algebras: dict = dc_field(default_factory=dict)
    reps: dict = dc_field(default_factory=dict)
    families: dict = dc_field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, SessionFile):
            return NotImplemented
        return (
            self.field == other.field
            and self.blocks == other.blocks
            and self.commands == other.commands
        )


COMMAND_NAMES = (
    "double", "preproj", "ext1", "localquiver", "grideal", "gradable",
    "mincounts", "repideal", "tangent", "deform", "preprojform", "spform",
)


def _prescan_field(tokens: list[Token], declared: Field | None) -> Field:
    """Fix the session field before parsing: cyclotomic declarations in rep
    blocks must agree with each other and with the externally given field."""
    orders = set()
    saw_q = False
    for k, tok in enumerate(tokens):
        if tok.kind == "id" and tok.text == "cyclo":
            if k + 2 < len(tokens) and tokens[k + 1].text == ":" \
                    and tokens[k + 2].kind == "int":
                orders.add(int(tokens[k + 2].text))
        if tok.kind == "id" and tok.text == "field":
            if k + 2 < len(tokens) and tokens[k + 1].text == ":" \
                    and tokens[k + 2].text == "q":
                saw_q = True
    if len(orders) > 1:
        raise ParseError(
            f"inconsistent cyclotomic orders {sorted(orders)} in one session",
            1, 1)
    if orders:
        session = Field(orders.pop())
        if declared is not None and declared != session and not declared.is_rational:
            raise ParseError(
                f"session declares {session.label()} but {declared.label()} "
                "was requested", 1, 1)
        return session
    del saw_q  # purely rational sessions need no field reconciliation
    return declared if declared is not None else QQ


class Parser:
    def __init__(self, tokens: list[Token], field: Field):
        self.tokens = tokens
        self.pos = 0
        self.field = field

    # ---- token plumbing -------------------------------------------------
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        shown = tok.text or "end of input"
        raise ParseError(f"{message}, got {shown!r}", tok.line, tok.col)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text:
            self.error(f"expected {text!r}")
        return self.next()

    def expect_id(self) -> Token:
        tok = self.peek()
        if tok.kind != "id":
            self.error("expected an identifier")
        return self.next()

    def expect_int(self) -> int:
        tok = self.peek()
        if tok.kind != "int":
            self.error("expected an integer")
        self.next()
        return int(tok.text)

    def at(self, text: str) -> bool:
        return self.peek().text == text

    # ---- declared-name validation ---------------------------------------
    def check_declared_id(self, tok: Token, what: str, allow_e: bool = False):
        name = tok.text
        if name.endswith(STAR_MARKER):
            self.error(
                f"{what} id {name!r} uses the reserved doubling marker", tok)
        if name == "zeta":
            self.error(f"{what} id cannot be the reserved scalar 'zeta'", tok)
        if not allow_e and name.startswith("e_"):
            self.error(
                f"{what} id {name!r} collides with idempotent syntax", tok)

    # ---- session ---------------------------------------------------------
    def parse_session(self) -> SessionFile:
        session = SessionFile(self.field)
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.text == "quiver":
                self.parse_quiver(session)
            elif tok.text == "algebra":
                self.parse_algebra(session)
            elif tok.text == "rep":
                self.parse_rep(session)
            elif tok.text == "family":
                self.parse_family(session)
            elif tok.kind == "id" and tok.text in COMMAND_NAMES:
                self.parse_command(session)
            else:
                self.error("expected a block keyword or command")
        return session

    def _unique(self, session: SessionFile, name_tok: Token):
        name = name_tok.text
        taken = (set(session.quivers) | set(session.algebras)
                 | set(session.reps) | set(session.families))
        if name in taken:
            self.error(f"name {name!r} is already declared", name_tok)
        return name

    def parse_quiver(self, session: SessionFile):
        self.expect("quiver")
        name_tok = self.expect_id()
        self.check_declared_id(name_tok, "quiver", allow_e=True)
        name = self._unique(session, name_tok)
        self.expect("{")
        self.expect("vertices")
        self.expect(":")
        vertices = []
        while not self.at(";"):
            tok = self.expect_id()
            self.check_declared_id(tok, "vertex", allow_e=True)
            vertices.append(tok.text)
            if self.at(","):
                self.next()
        self.expect(";")
        self.expect("arrows")
        self.expect(":")
        arrows = []
        while not self.at("}") and not self.at(";"):
            a_tok = self.expect_id()
            self.check_declared_id(a_tok, "arrow")
            self.expect(":")
            tail = self.expect_id().text
            self.expect("->")
            head = self.expect_id().text
            if tail not in vertices:
                self.error(f"unknown vertex {tail!r}", a_tok)
            if head not in vertices:
                self.error(f"unknown vertex {head!r}", a_tok)
            arrows.append((a_tok.text, head, tail))
            if self.at(","):
                self.next()
        if self.at(";"):
            self.next()
        self.expect("}")
        try:
            quiver = Quiver(vertices, arrows)
        except ValueError as exc:
            self.error(str(exc), name_tok)
        session.quivers[name] = quiver
        session.blocks.append(QuiverBlock(name, quiver))

    def parse_algebra(self, session: SessionFile):
        self.expect("algebra")
        name_tok = self.expect_id()
        name = self._unique(session, name_tok)
        self.expect("over")
        q_tok = self.expect_id()
        if q_tok.text not in session.quivers:
            self.error(f"unknown quiver {q_tok.text!r}", q_tok)
        quiver = session.quivers[q_tok.text]
        self.expect("{")
        self.expect("relations")
        self.expect(":")
        relations = []
        while not self.at("invertible"):
            if self.at(";"):
                self.next()
                continue
            relations.append(self.parse_poly(quiver))
        self.expect("invertible")
        self.expect(":")
        invertible = []
        while not self.at(";"):
            tok = self.expect_id()
            if not quiver.has_arrow(tok.text):
                self.error(f"unknown arrow {tok.text!r}", tok)
            invertible.append(tok.text)
            if self.at(","):
                self.next()
        self.expect(";")
        self.expect("flavor")
        self.expect(":")
        flavor_tok = self.expect_id()
        if flavor_tok.text not in ("graded", "complete"):
            self.error("flavor must be 'graded' or 'complete'", flavor_tok)
        if self.at(";"):
            self.next()
        self.expect("}")
        try:
            pres = Presentation(quiver, relations, invertible=invertible,
                                flavor=flavor_tok.text, field=self.field)
        except ValueError as exc:
            self.error(str(exc), name_tok)
        session.algebras[name] = pres
        session.blocks.append(AlgebraBlock(
            name, q_tok.text, relations, invertible, flavor_tok.text))

    def parse_rep(self, session: SessionFile):
        self.expect("rep")
        name_tok = self.expect_id()
        name = self._unique(session, name_tok)
        self.expect("of")
        a_tok = self.expect_id()
        if a_tok.text not in session.algebras:
            self.error(f"unknown algebra {a_tok.text!r}", a_tok)
        pres = session.algebras[a_tok.text]
        self.expect("{")
        self.expect("dim")
        self.expect(":")
        dims = {}
        while not self.at(";"):
            v_tok = self.expect_id()
            if not pres.quiver.has_vertex(v_tok.text):
                self.error(f"unknown vertex {v_tok.text!r}", v_tok)
            self.expect("=")
            dims[v_tok.text] = self.expect_int()
            if self.at(","):
                self.next()
        self.expect(";")
        matrices = {}
        field_tag = None
        while True:
            tok = self.peek()
            if tok.text == "field":
                self.next()
                self.expect(":")
                if self.at("q"):
                    self.next()
                    field_tag = "q"
                elif self.at("cyclo"):
                    self.next()
                    self.expect(":")
                    order = self.expect_int()
                    field_tag = f"cyclo:{order}"
                else:
                    self.error("field must be 'q' or 'cyclo:m'")
                if self.at(";"):
                    self.next()
                break
            a2 = self.expect_id()
            if not pres.quiver.has_arrow(a2.text):
                self.error(f"unknown arrow {a2.text!r}", a2)
            self.expect("=")
            matrices[a2.text] = self.parse_matrix()
            if self.at(";"):
                self.next()
        self.expect("}")
        if field_tag == "q":
            rep_field = QQ
        else:
            rep_field = Field(int(field_tag.split(":")[1]))
        if not rep_field.is_rational and rep_field != self.field:
            self.error(f"rep field {field_tag} differs from the session field "
                       f"{self.field.label()}", name_tok)
        try:
            alpha = DimVector(pres.quiver, dims)
            parsed = {
                arrow: [[parse_scalar(x, self.field) for x in row]
                        for row in mat]
                for arrow, mat in matrices.items()
            }
            rep = Representation(pres, alpha, parsed, field=self.field,
                                 name=name)
        except ValueError as exc:
            self.error(str(exc), name_tok)
        result = check_representation(rep)
        if not result:
            self.error("not a representation: " + "; ".join(result.failures),
                       name_tok)
        session.reps[name] = rep
        session.blocks.append(RepBlock(name, a_tok.text, dims, matrices,
                                       field_tag))

    def parse_matrix(self) -> list:
        self.expect("[")
        rows = []
        while True:
            rows.append(self.parse_row())
            if self.at(","):
                self.next()
                continue
            break
        self.expect("]")
        width = {len(r) for r in rows}
        if len(width) != 1:
            self.error("ill-shaped matrix: rows of different lengths")
        return rows

    def parse_row(self) -> list:
        self.expect("[")
        entries = []
        while True:
            entries.append(self.parse_scalar_text())
            if self.at(","):
                self.next()
                continue
            break
        self.expect("]")
        return entries

    def parse_scalar_text(self) -> str:
        """Collect one scalar entry as canonical text (validated later)."""
        parts = []
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                self.error("unterminated matrix entry")
            if depth == 0 and tok.text in (",", "]"):
                break
            if tok.text == "(":
                depth += 1
            if tok.text == ")":
                depth -= 1
            parts.append(tok.text)
            self.next()
        if not parts:
            self.error("empty matrix entry")
        text = " ".join(parts)
        try:
            value = parse_scalar(text, self.field)
        except ValueError as exc:
            self.error(str(exc))
        return str(value)

    def parse_family(self, session: SessionFile):
        self.expect("family")
        name_tok = self.expect_id()
        name = self._unique(session, name_tok)
        self.expect("at")
        r_tok = self.expect_id()
        if r_tok.text not in session.reps:
            self.error(f"unknown rep {r_tok.text!r}", r_tok)
        self.expect("{")
        self.expect("pattern")
        self.expect(":")
        pat_tok = self.expect_id()
        if pat_tok.text != "unit":
            self.error("only the 'unit' pattern is supported", pat_tok)
        self.expect(";")
        self.expect("K")
        self.expect(":")
        order = self.expect_int()
        if self.at(";"):
            self.next()
        self.expect("}")
        try:
            fam = FamilySpec.unit_pattern(session.reps[r_tok.text], order)
        except ValueError as exc:
            self.error(str(exc), name_tok)
        session.families[name] = fam
        session.blocks.append(FamilyBlock(name, r_tok.text, "unit", order))

    def parse_command(self, session: SessionFile):
        tok = self.expect_id()
        args = []
        while not self.at(";"):
            cur = self.peek()
            if cur.kind == "eof":
                self.error("unterminated command (missing ';')")
            if cur.kind == "int":
                args.append(int(cur.text))
                self.next()
                continue
            ident = self.expect_id().text
            if self.at("^"):
                self.next()
                args.append((ident, self.expect_int()))
            elif self.at("="):
                self.next()
                args.append((ident, "=", self.expect_int()))
            else:
                args.append(ident)
        self.expect(";")
        session.commands.append(Command(tok.text, args, tok.line))

    # ---- polynomials ------------------------------------------------------
    def parse_poly(self, quiver: Quiver) -> NCPoly:
        poly = self.parse_poly_term(quiver)
        while self.peek().text in ("+", "-"):
            if self.next().text == "+":
                poly = poly + self.parse_poly_term(quiver)
            else:
                poly = poly - self.parse_poly_term(quiver)
        return poly

    def parse_poly_term(self, quiver: Quiver) -> NCPoly:
        sign = 1
        while self.peek().text in ("+", "-"):
            if self.next().text == "-":
                sign = -sign
        factors = [self.parse_poly_factor(quiver)]
        while self.at("*"):
            self.next()
            factors.append(self.parse_poly_factor(quiver))
        poly = factors[0]
        for f in factors[1:]:
            poly = poly * f
        return poly.scale(self.field.from_rational(sign))

    def parse_poly_factor(self, quiver: Quiver) -> NCPoly:
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            num = int(tok.text)
            if self.at("/"):
                self.next()
                den = self.expect_int()
                value = Fraction(num, den)
            else:
                value = Fraction(num)
            return NCPoly.unit(quiver, self.field).scale(
                self.field.from_rational(value))
        if tok.kind == "id" and tok.text == "zeta":
            self.next()
            power = 1
            if self.at("^"):
                self.next()
                power = self.expect_int()
            try:
                z = self.field.zeta(power)
            except ValueError as exc:
                self.error(str(exc), tok)
            return NCPoly.unit(quiver, self.field).scale(z)
        if tok.kind == "id":
            self.next()
            name = tok.text
            if name.startswith("e_"):
                vertex = name[2:]
                if not quiver.has_vertex(vertex):
                    self.error(f"unknown vertex {vertex!r} in idempotent", tok)
                base = NCPoly.vertex(quiver, vertex, self.field)
            elif quiver.has_arrow(name):
                base = NCPoly.arrow(quiver, name, self.field)
            else:
                self.error(f"unknown arrow {name!r}", tok)
            if self.at("^"):
                self.next()
                power = self.expect_int()
                if power < 1:
                    self.error("power must be >= 1", tok)
                out = base
                for _ in range(power - 1):
                    out = out * base
                return out
            return base
        self.error("expected a polynomial factor")


def parse(source: str, field: Field | None = None) -> SessionFile:
    """Parse a session; raises ParseError with line/column on bad input."""
    tokens = tokenize(source)
    session_field = _prescan_field(tokens, field)
    return Parser(tokens, session_field).parse_session()


# ---- canonical printing --------------------------------------------------

def print_session(session: SessionFile) -> str:
    """Canonical text of a session; parsing it back gives an equal session."""
    out = []
    for block in session.blocks:
        if isinstance(block, QuiverBlock):
            q = block.quiver
            arrows = ", ".join(
                f"{a.name}: {a.tail} -> {a.head}" for a in q.arrows)
            out.append(
                f"quiver {block.name} {{ vertices: "
                f"{', '.join(q.vertices)}; arrows: {arrows} }}"
            )
        elif isinstance(block, AlgebraBlock):
            rels = "; ".join(str(r) for r in block.relations)
            inv = ", ".join(block.invertible)
            out.append(
                f"algebra {block.name} over {block.quiver_name} {{\n"
                f"  relations: {rels};\n"
                f"  invertible: {inv};\n"
                f"  flavor: {block.flavor}\n}}"
            )
        elif isinstance(block, RepBlock):
            lines = [f"rep {block.name} of {block.algebra_name} {{"]
            dims = ", ".join(f"{v} = {n}" for v, n in block.dims.items())
            lines.append(f"  dim: {dims};")
            for arrow, mat in block.matrices.items():
                rows = ", ".join(
                    "[" + ", ".join(row) + "]" for row in mat)
                lines.append(f"  {arrow} = [{rows}];")
            lines.append(f"  field: {block.field_tag}")
            lines.append("}")
            out.append("\n".join(lines))
        elif isinstance(block, FamilyBlock):
            out.append(
                f"family {block.name} at {block.rep_name} "
                f"{{ pattern: {block.pattern}; K: {block.order} }}"
            )
    for cmd in session.commands:
        rendered = []
        for arg in cmd.args:
            if isinstance(arg, tuple) and len(arg) == 3:
                rendered.append(f"{arg[0]} = {arg[2]}")
            elif isinstance(arg, tuple):
                rendered.append(f"{arg[0]}^{arg[1]}")
            else:
                rendered.append(str(arg))
        out.append(f"{cmd.name} {' '.join(rendered)};".replace(" ;", ";"))
    return "\n".join(out) + "\n"
