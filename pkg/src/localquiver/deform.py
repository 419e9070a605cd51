"""Expansion of algebra relations along a parameterized family.

A family replaces every generator matrix by a truncated noncommutative power
series in deformation symbols with matrix coefficients.  Substituting these
series into a relation and collecting words gives, after the base point
cancels, the relations of a candidate local model in the symbols; taking the
associated-graded of that truncated presentation yields the tangent-cone
relations.

The unit pattern covers the standard situation: each primary generator g
moves as (1 + T_g) tensor its base matrix, and formal inverses follow by the
geometric series.  The analytic covering hypothesis on a family cannot be
checked symbolically; what is verified exactly is that the series start at
the base point and that the first-order directions meet the orbit tangent
space trivially.  Results are therefore labeled a candidate local model
unless the caller asserts the hypotheses.
"""

from __future__ import annotations

from . import linalg
from .ncalg import NCPoly, Presentation
from .quiver import Quiver
from .rewrite import GrIdealReport, gr_ideal
from .scalars import Field, FieldElem

Word = tuple[int, ...]


class TensorSeries:
    """A truncated series: words in symbols, matrix coefficients."""

    __slots__ = ("symbols", "size", "order", "field", "terms")

    def __init__(self, symbols: tuple[str, ...], size: int, order: int,
                 field: Field, terms: dict[Word, list[list[FieldElem]]] | None = None):
        self.symbols = symbols
        self.size = size
        self.order = order
        self.field = field
        self.terms = {}
        if terms:
            for w, mat in terms.items():
                if len(w) > order:
                    continue
                if any(s >= len(symbols) for s in w):
                    raise ValueError(f"word {w} uses an undeclared symbol")
                if len(mat) != size or any(len(row) != size for row in mat):
                    raise ValueError("coefficient matrices must all be size x size")
                if not linalg.is_zero_matrix(mat):
                    self.terms[w] = mat

    # ---- constructors ---------------------------------------------------
    @staticmethod
    def unit(symbols: tuple[str, ...], size: int, order: int,
             field: Field) -> "TensorSeries":
        return TensorSeries(symbols, size, order, field,
                            {(): linalg.identity_matrix(field, size)})

    @staticmethod
    def of_matrix(symbols: tuple[str, ...], mat, order: int,
                  field: Field) -> "TensorSeries":
        return TensorSeries(symbols, len(mat), order, field, {(): mat})

    def _compatible(self, other: "TensorSeries"):
        if self.symbols != other.symbols or self.size != other.size \
                or self.order != other.order or self.field != other.field:
            raise ValueError("tensor series shapes do not match")

    def __add__(self, other: "TensorSeries") -> "TensorSeries":
        self._compatible(other)
        terms = {w: [row[:] for row in m] for w, m in self.terms.items()}
        for w, m in other.terms.items():
            if w in terms:
                terms[w] = linalg.mat_add(terms[w], m)
            else:
                terms[w] = m
        return TensorSeries(self.symbols, self.size, self.order, self.field, terms)

    def __sub__(self, other: "TensorSeries") -> "TensorSeries":
        return self + other.scale(-self.field.one())

    def scale(self, c: FieldElem) -> "TensorSeries":
        c = self.field.elem(c)
        terms = {w: linalg.mat_scale(c, m) for w, m in self.terms.items()}
        return TensorSeries(self.symbols, self.size, self.order, self.field, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree_part(self, d: int) -> "TensorSeries":
        return TensorSeries(self.symbols, self.size, self.order, self.field,
                            {w: m for w, m in self.terms.items() if len(w) == d})

    def coefficient(self, word: Word):
        return self.terms.get(
            word, linalg.zero_matrix(self.field, self.size, self.size))

    def __eq__(self, other):
        if not isinstance(other, TensorSeries):
            return NotImplemented
        try:
            self._compatible(other)
        except ValueError:
            return False
        return (self - other).is_zero()

    def __repr__(self):
        words = ", ".join(
            "*".join(self.symbols[s] for s in w) if w else "1"
            for w in sorted(self.terms, key=lambda w: (len(w), w))
        )
        return f"TensorSeries(order={self.order}, words=[{words}])"


def ts_multiply(u: TensorSeries, v: TensorSeries) -> TensorSeries:
    """Word-concatenation convolution, truncated at the common order."""
    u._compatible(v)
    terms: dict[Word, list[list[FieldElem]]] = {}
    for w1, m1 in u.terms.items():
        for w2, m2 in v.terms.items():
            if len(w1) + len(w2) > u.order:
                continue
            w = w1 + w2
            prod = linalg.mat_mul(m1, m2)
            if w in terms:
                terms[w] = linalg.mat_add(terms[w], prod)
            else:
                terms[w] = prod
    return TensorSeries(u.symbols, u.size, u.order, u.field, terms)


def geometric_inverse(s: TensorSeries) -> TensorSeries:
    """The two-sided inverse through the truncation order.

    Requires an invertible constant term; the inverse is built degree by
    degree and is automatically two-sided in the truncated algebra.
    """
    const = s.coefficient(())
    inv0 = linalg.invert(const, s.field)
    if inv0 is None:
        raise ValueError("series has a singular constant term")
    neg_inv0 = linalg.mat_scale(-s.field.one(), inv0)
    result: dict[Word, list[list[FieldElem]]] = {(): inv0}
    by_degree: dict[int, list[tuple[Word, list[list[FieldElem]]]]] = {}
    for w, m in s.terms.items():
        if len(w) >= 1:
            by_degree.setdefault(len(w), []).append((w, m))
    for d in range(1, s.order + 1):
        new: dict[Word, list[list[FieldElem]]] = {}
        for ds in range(1, d + 1):
            for w1, m1 in by_degree.get(ds, ()):  # s-part of degree ds
                for w2, m2 in list(result.items()):
                    if len(w2) != d - ds:
                        continue
                    w = w1 + w2
                    prod = linalg.mat_mul(inv0, linalg.mat_mul(m1, m2))
                    prod = linalg.mat_scale(-s.field.one(), prod)
                    if w in new:
                        new[w] = linalg.mat_add(new[w], prod)
                    else:
                        new[w] = prod
        for w, m in new.items():
            if not linalg.is_zero_matrix(m):
                result[w] = m
    out = TensorSeries(s.symbols, s.size, s.order, s.field, result)
    check = ts_multiply(s, out) - TensorSeries.unit(s.symbols, s.size, s.order, s.field)
    if not check.is_zero():
        raise AssertionError("geometric inverse failed the right-product check")
    return out


class FamilySpec:
    """A parameterized family of representations around a base point.

    Currently restricted to one-vertex quivers (the base point is meant to
    be simple, so the family lives in square matrices).  Three analytic
    hypotheses on a family cannot be verified symbolically and stay the
    caller's responsibility, recorded in ``asserted_hypotheses``; what is
    checked exactly is that every series starts at the base matrix and that
    the first-order directions meet the orbit tangent space trivially.
    """

    __slots__ = ("presentation", "base", "series", "order", "symbols",
                 "symbol_quiver", "asserted_hypotheses")

    def __init__(self, presentation: Presentation, base, series: dict,
                 order: int, symbols: tuple[str, ...],
                 asserted_hypotheses: bool = False):
        if len(presentation.quiver.vertices) != 1:
            raise ValueError("families are supported over one-vertex quivers")
        self.presentation = presentation
        self.base = base
        self.series = series
        self.order = order
        self.symbols = symbols
        self.asserted_hypotheses = asserted_hypotheses
        vertex = presentation.quiver.vertices[0]
        self.symbol_quiver = Quiver([vertex], [(s, vertex, vertex) for s in symbols])
        for arrow in presentation.quiver.arrows:
            if arrow.name not in series:
                raise ValueError(f"missing series for generator {arrow.name!r}")
            s = series[arrow.name]
            if not linalg.mat_eq(s.coefficient(()), base.matrices[arrow.name]):
                raise ValueError(
                    f"series for {arrow.name!r} does not start at the base point"
                )
        self._check_first_order_transversality()

    @staticmethod
    def unit_pattern(base, order: int, asserted_hypotheses: bool = False
                     ) -> "FamilySpec":
        """The family (1 + T_g) tensor base(g) on each primary generator.

        Formal inverse loops detected from the unit relations follow the
        geometric series of their partner and share its symbol.
        """
        pres = base.presentation
        eliminated = pres.eliminated_inverses()
        primary = [a.name for a in pres.quiver.arrows if a.name not in eliminated]
        symbols = tuple(f"T{k + 1}" for k in range(len(primary)))
        sym_index = {g: k for k, g in enumerate(primary)}
        field = base.field
        n = base.dim()
        series = {}
        for g in primary:
            mat = base.matrices[g]
            series[g] = TensorSeries(symbols, n, order, field, {
                (): mat, (sym_index[g],): mat,
            })
        for ginv, g in eliminated.items():
            series[ginv] = geometric_inverse(series[g])
        return FamilySpec(pres, base, series, order, symbols,
                          asserted_hypotheses)

    def _check_first_order_transversality(self):
        """Exact rank check: linear directions meet coboundaries trivially."""
        field = self.base.field
        quiver = self.presentation.quiver
        n = self.base.dim()
        coords = []  # flattened tangent vectors in arrow-matrix space
        for k in range(len(self.symbols)):
            vec = []
            for arrow in quiver.arrows:
                mat = self.series[arrow.name].coefficient((k,))
                vec.extend(x for row in mat for x in row)
            if any(not x.is_zero() for x in vec):
                coords.append(vec)
        if not coords:
            return  # constant family: nothing to check
        inner = []
        for i in range(n):
            for j in range(n):
                phi = linalg.zero_matrix(field, n, n)
                phi[i][j] = field.one()
                vec = []
                for arrow in quiver.arrows:
                    mat = self.base.matrices[arrow.name]
                    delta = linalg.mat_sub(linalg.mat_mul(mat, phi),
                                           linalg.mat_mul(phi, mat))
                    vec.extend(x for row in delta for x in row)
                inner.append(vec)
        rank_inner = linalg.rank(inner)
        rank_joint = linalg.rank(inner + coords)
        if rank_joint != rank_inner + len(coords):
            raise ValueError(
                "family directions are not transversal to the orbit at the "
                "base point"
            )


def load_family(base, data: dict) -> FamilySpec:
    """Build a family around a base representation from its JSON form.

    ``{"pattern": "unit", "K": k}`` gives the standard unit family.  An
    explicit family instead carries ``{"pattern": "explicit", "K": k,
    "symbols": [names], "series": {arrow: {word: [[entries]]}}}`` where a
    word is a ``*``-joined chain of symbol names and ``"1"`` is the empty
    word; missing arrows with a detected inverse partner are derived by the
    geometric series.
    """
    order = int(data["K"])
    pattern = data.get("pattern", "unit")
    if pattern == "unit":
        return FamilySpec.unit_pattern(
            base, order, asserted_hypotheses=bool(data.get("asserted", False)))
    if pattern != "explicit":
        raise ValueError(f"unknown family pattern {pattern!r}")
    symbols = tuple(data["symbols"])
    index = {name: k for k, name in enumerate(symbols)}
    field = base.field
    n = base.dim()
    series = {}
    for arrow, table in data["series"].items():
        terms = {}
        for word_text, mat in table.items():
            if word_text == "1":
                word = ()
            else:
                try:
                    word = tuple(index[s] for s in word_text.split("*"))
                except KeyError as exc:
                    raise ValueError(f"unknown symbol {exc} in {word_text!r}")
            terms[word] = [[field.elem(str(x)) for x in row] for row in mat]
        series[arrow] = TensorSeries(symbols, n, order, field, terms)
    pres = base.presentation
    for ginv, g in pres.eliminated_inverses().items():
        if ginv not in series and g in series:
            series[ginv] = geometric_inverse(series[g])
    return FamilySpec(pres, base, series, order, symbols,
                      asserted_hypotheses=bool(data.get("asserted", False)))


def expand_relation(fs: FamilySpec, r: NCPoly) -> TensorSeries:
    """Substitute the family series into a relation, word by word."""
    field = fs.base.field
    n = fs.base.dim()
    total = TensorSeries(fs.symbols, n, fs.order, field)
    unit = TensorSeries.unit(fs.symbols, n, fs.order, field)
    for word, coeff in r.terms.items():
        prod = unit
        for a in word.arrows:
            if a not in fs.series:
                raise ValueError(f"no series for generator {a!r}")
            prod = ts_multiply(prod, fs.series[a])
        total = total + prod.scale(field.elem(coeff))
    return total


def local_model_relations(fs: FamilySpec) -> list[NCPoly]:
    """Relations of the candidate local model, in the deformation symbols.

    When every coefficient matrix of an expanded relation is a scalar
    multiple of the identity the relation collapses to one symbol
    polynomial; otherwise each matrix entry is emitted separately.  Each
    emitted polynomial is normalized to have a monic lowest part.
    """
    field = fs.base.field
    out: list[NCPoly] = []
    for r in fs.presentation.relations:
        series = expand_relation(fs, r)
        if series.is_zero():
            continue
        polys = []
        scalars: dict = {}
        collapsed = True
        for w, mat in series.terms.items():
            c = linalg.scalar_multiple_of_identity(mat)
            if c is None:
                collapsed = False
                break
            scalars[w] = c
        if collapsed:
            polys.append(scalars)
        else:
            for i in range(fs.base.dim()):
                for j in range(fs.base.dim()):
                    entry = {w: mat[i][j] for w, mat in series.terms.items()}
                    polys.append(entry)
        for table in polys:
            poly = NCPoly(fs.symbol_quiver, field)
            for w, c in table.items():
                if c.is_zero():
                    continue
                if w:
                    poly = poly + NCPoly.word(
                        fs.symbol_quiver, [fs.symbols[s] for s in w],
                        field, coeff=c)
                else:
                    poly = poly + NCPoly.vertex(
                        fs.symbol_quiver, fs.symbol_quiver.vertices[0],
                        field).scale(c)
            if not poly.is_zero():
                out.append(poly.monic())
    return out


def tangent_cone_relations(fs: FamilySpec) -> GrIdealReport:
    """Associated-graded relations of the candidate local model at bound K."""
    rels = local_model_relations(fs)
    if not rels:
        nontrivial = any(
            any(len(w) > 0 for w in s.terms) for s in fs.series.values()
        )
        units = fs.presentation.unit_relation_indices()
        proper = [k for k in range(len(fs.presentation.relations))
                  if k not in units]
        if nontrivial and proper:
            # unit relations vanish identically by construction of the
            # geometric inverse, so only surviving proper relations count
            raise ValueError(
                f"no relation survives at truncation order {fs.order}: "
                "K is too small to see any minimal part"
            )
        return GrIdealReport([], fs.order, True, [])
    local = Presentation(fs.symbol_quiver, rels, flavor="complete",
                         field=fs.base.field)
    return gr_ideal(local, fs.order)
