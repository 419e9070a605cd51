"""Hom and first Ext spaces between finite-dimensional representations.

A representation assigns an exact matrix to every arrow of a presentation's
quiver.  Hom spaces are intertwiner nullspaces; Ext^1 is computed from
arrow-indexed cocycles with the Leibniz rule, modulo inner derivations.
Invertible arrows that carry a formal inverse loop are eliminated from the
cocycle unknowns: the value on the inverse is forced by differentiating the
unit relation.

Simplicity is certified by a density argument: a representation of total
dimension n is simple exactly when the matrices of all paths span the full
n-by-n matrix algebra.  This check is deterministic and exact, and together
with vanishing Hom spaces it certifies the factor list of a semisimple
module, from which ``local_quiver`` builds the Ext matrix, the quiver and
the multiplicity vector.
"""

from __future__ import annotations

from typing import Iterable

from . import linalg
from .ncalg import NCPoly, Presentation
from .quiver import DimVector, Quiver
from .rewrite import minimal_relation_counts
from .scalars import Field, FieldElem, QQ, parse_scalar


class Representation:
    """A point of the representation space of a presentation."""

    __slots__ = ("presentation", "alpha", "matrices", "field", "name")

    def __init__(self, presentation: Presentation, alpha: DimVector,
                 matrices: dict[str, list[list[FieldElem]]],
                 field: Field | None = None, name: str = ""):
        if alpha.quiver != presentation.quiver:
            raise ValueError("dimension vector belongs to a different quiver")
        self.presentation = presentation
        self.alpha = alpha
        self.name = name
        if field is None:
            field = presentation.field
            for mat in matrices.values():
                for row in mat:
                    for x in row:
                        if isinstance(x, FieldElem) and not x.field.is_rational:
                            field = x.field
        self.field = field
        self.matrices = {}
        for arrow in presentation.quiver.arrows:
            if arrow.name not in matrices:
                raise ValueError(f"missing matrix for arrow {arrow.name!r}")
            mat = [[field.elem(x) for x in row] for row in matrices[arrow.name]]
            rows, cols = alpha[arrow.head], alpha[arrow.tail]
            if len(mat) != rows or any(len(r) != cols for r in mat):
                raise ValueError(
                    f"matrix for {arrow.name!r} must be {rows}x{cols}"
                )
            self.matrices[arrow.name] = mat
        extra = set(matrices) - {a.name for a in presentation.quiver.arrows}
        if extra:
            raise ValueError(f"matrices for unknown arrows {sorted(extra)}")

    @property
    def quiver(self) -> Quiver:
        return self.presentation.quiver

    def dim(self) -> int:
        return self.alpha.total()

    def evaluate(self, poly: NCPoly):
        """The matrix of a single-vertex-pair polynomial at this point."""
        pairs = poly.vertex_pairs()
        if len(pairs) > 1:
            raise ValueError("evaluation needs a single vertex-pair polynomial")
        if not pairs:
            return None
        (head, tail), = pairs
        total = linalg.zero_matrix(self.field, self.alpha[head], self.alpha[tail])
        for word, coeff in poly.terms.items():
            mat = linalg.identity_matrix(self.field, self.alpha[head])
            for a in word.arrows:
                mat = linalg.mat_mul(mat, self.matrices[a])
            total = linalg.mat_add(total, linalg.mat_scale(coeff, mat))
        return total

    def __repr__(self):
        label = self.name or "rep"
        return f"Representation({label}, alpha={self.alpha.entries})"


class CheckResult:
    """Outcome of check_representation: truthy plus failure diagnostics."""

    __slots__ = ("ok", "failures")

    def __init__(self, ok: bool, failures: list[str]):
        self.ok = ok
        self.failures = failures

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"CheckResult(ok={self.ok}, failures={self.failures})"


def check_representation(rep: Representation) -> CheckResult:
    """Exact verification of all relations and invertibility constraints."""
    failures = []
    for k, r in enumerate(rep.presentation.relations):
        mat = rep.evaluate(r)
        if mat is not None and not linalg.is_zero_matrix(mat):
            failures.append(f"relation {k} ({r}) does not vanish")
    for a in sorted(rep.presentation.invertible):
        if linalg.invert(rep.matrices[a], rep.field) is None:
            failures.append(f"invertible arrow {a} has a singular matrix")
    return CheckResult(not failures, failures)


def _require_same_presentation(x: Representation, y: Representation):
    if x.presentation is y.presentation:
        return
    px, py = x.presentation, y.presentation
    if px.quiver != py.quiver or len(px.relations) != len(py.relations) \
            or any(a != b for a, b in zip(px.relations, py.relations)):
        raise ValueError("presentation mismatch between the representations")


def _hom_system(x: Representation, y: Representation):
    """Matrix of the intertwiner equations; unknowns are vertex blocks of
    maps from x to y, vectorized row-major in vertex order."""
    _require_same_presentation(x, y)
    field = x.field if not x.field.is_rational else y.field
    quiver = x.quiver
    offsets = {}
    total = 0
    for v in quiver.vertices:
        offsets[v] = total
        total += x.alpha[v] * y.alpha[v]
    rows = []
    for arrow in quiver.arrows:
        ya = [[field.elem(c) for c in row] for row in y.matrices[arrow.name]]
        xa = [[field.elem(c) for c in row] for row in x.matrices[arrow.name]]
        h, t = arrow.head, arrow.tail
        for i in range(y.alpha[h]):
            for j in range(x.alpha[t]):
                row = [field.zero()] * total
                # (y_a phi_t)_{ij} = sum_k ya[i][k] phi_t[k][j]
                for k in range(y.alpha[t]):
                    row[offsets[t] + k * x.alpha[t] + j] += ya[i][k]
                # (phi_h x_a)_{ij} = sum_k phi_h[i][k] xa[k][j]
                for k in range(x.alpha[h]):
                    row[offsets[h] + i * x.alpha[h] + k] -= xa[k][j]
                rows.append(row)
    return rows, total, field


def hom_dim(x: Representation, y: Representation) -> int:
    """Dimension of the space of intertwiners from x to y."""
    rows, total, field = _hom_system(x, y)
    if total == 0:
        return 0
    if not rows:
        return total
    return total - linalg.rank(rows)


def _delta_table(pres: Presentation, x: Representation, y: Representation,
                 field: Field):
    """For each arrow, the cocycle value as combinations of primary unknowns.

    Returns (primary arrows, table) where table[a] is a list of triples
    (L, p, R): delta(a) = sum of L * delta(p) * R over the triples.
    """
    eliminated = pres.eliminated_inverses()
    primary = [a.name for a in pres.quiver.arrows if a.name not in eliminated]
    table = {}
    for a in pres.quiver.arrows:
        if a.name in eliminated:
            g = eliminated[a.name]
            ly = [[(-field.elem(c)) for c in row] for row in y.matrices[a.name]]
            rx = [[field.elem(c) for c in row] for row in x.matrices[a.name]]
            table[a.name] = [(ly, g, rx)]
        else:
            iy = linalg.identity_matrix(field, y.alpha[a.head])
            ix = linalg.identity_matrix(field, x.alpha[a.tail])
            table[a.name] = [(iy, a.name, ix)]
    return primary, table


def _cocycle_system(x: Representation, y: Representation):
    """Equations delta(r) = 0 over the primary arrow unknowns."""
    _require_same_presentation(x, y)
    pres = x.presentation
    field = x.field if not x.field.is_rational else y.field
    quiver = x.quiver
    primary, table = _delta_table(pres, x, y, field)
    offsets = {}
    total = 0
    for a in primary:
        offsets[a] = total
        total += y.alpha[quiver.head(a)] * x.alpha[quiver.tail(a)]

    def mat_of(rep: Representation, word, head: str):
        out = linalg.identity_matrix(field, rep.alpha[head])
        for a in word:
            out = linalg.mat_mul(out, [[field.elem(c) for c in row]
                                       for row in rep.matrices[a]])
        return out

    rows = []
    for r in pres.relations:
        pairs = r.vertex_pairs()
        (rh, rt), = pairs
        n_rows, n_cols = y.alpha[rh], x.alpha[rt]
        block = [[[field.zero()] * total for _ in range(n_cols)]
                 for _ in range(n_rows)]
        for word, coeff in r.terms.items():
            for pos, a in enumerate(word.arrows):
                left = linalg.mat_scale(
                    coeff, mat_of(y, word.arrows[:pos], word.head))
                right = mat_of(x, word.arrows[pos + 1:],
                               quiver.tail(a))
                for ly, p, rx in table[a]:
                    lmat = linalg.mat_mul(left, ly)
                    rmat = linalg.mat_mul(rx, right)
                    ph, pt = quiver.head(p), quiver.tail(p)
                    off = offsets[p]
                    for i in range(n_rows):
                        for j in range(n_cols):
                            row = block[i][j]
                            for u in range(y.alpha[ph]):
                                lu = lmat[i][u]
                                if lu.is_zero():
                                    continue
                                for w in range(x.alpha[pt]):
                                    c = lu * rmat[w][j]
                                    if not c.is_zero():
                                        idx = off + u * x.alpha[pt] + w
                                        row[idx] += c
        for i in range(n_rows):
            for j in range(n_cols):
                rows.append(block[i][j])
    return rows, total, field


def cocycle_dim(x: Representation, y: Representation) -> int:
    """Dimension of the space of arrow cocycles (first-order deformations
    of the identity gluing, before dividing by inner derivations)."""
    rows, total, field = _cocycle_system(x, y)
    if total == 0:
        return 0
    if not rows:
        return total
    return total - linalg.rank(rows)


def ext1_dim(x: Representation, y: Representation) -> int:
    """dim Ext^1 between two representations, as cocycles mod coboundaries."""
    z = cocycle_dim(x, y)
    inner_source = sum(
        x.alpha[v] * y.alpha[v] for v in x.quiver.vertices
    )
    b = inner_source - hom_dim(x, y)
    return z - b


def is_simple(rep: Representation) -> bool:
    """Density check: the path matrices must span the full matrix algebra."""
    n = rep.dim()
    if n == 0:
        return False
    field = rep.field
    quiver = rep.quiver
    offsets = {}
    pos = 0
    for v in quiver.vertices:
        offsets[v] = pos
        pos += rep.alpha[v]

    def embed(mat, head, tail):
        big = linalg.zero_matrix(field, n, n)
        for i in range(rep.alpha[head]):
            for j in range(rep.alpha[tail]):
                big[offsets[head] + i][offsets[tail] + j] = mat[i][j]
        return big

    basis: list[list[FieldElem]] = []  # row-reduced flattened spanning set

    def insert(flat):
        vec = list(flat)
        for row in basis:
            lead = next(k for k, c in enumerate(row) if not c.is_zero())
            if not vec[lead].is_zero():
                factor = vec[lead]
                vec = [a - factor * b for a, b in zip(vec, row)]
        if all(c.is_zero() for c in vec):
            return False
        lead = next(k for k, c in enumerate(vec) if not c.is_zero())
        inv = vec[lead].inverse()
        vec = [inv * c for c in vec]
        basis.append(vec)
        return True

    frontier = []
    for v in quiver.vertices:
        if rep.alpha[v] == 0:
            continue
        mat = embed(linalg.identity_matrix(field, rep.alpha[v]), v, v)
        if insert([c for row in mat for c in row]):
            frontier.append(mat)
    arrow_mats = {
        a.name: embed(rep.matrices[a.name], a.head, a.tail)
        for a in quiver.arrows
    }
    while frontier:
        nxt = []
        for m in frontier:
            for a in quiver.arrows:
                prod = linalg.mat_mul(arrow_mats[a.name], m)
                if insert([c for row in prod for c in row]):
                    nxt.append(prod)
        frontier = nxt
        if len(basis) == n * n:
            break
    return len(basis) == n * n


class SemisimpleModule:
    """A formal direct sum of pairwise distinct simple representations."""

    __slots__ = ("factors",)

    def __init__(self, factors: Iterable[tuple[Representation, int]]):
        self.factors = list(factors)
        if not self.factors:
            raise ValueError("a semisimple module needs at least one factor")
        for rep, mult in self.factors:
            if mult < 1:
                raise ValueError("multiplicities must be >= 1")

    def validate(self):
        """Certify simplicity and pairwise distinctness of the factors."""
        for k, (rep, _) in enumerate(self.factors):
            if hom_dim(rep, rep) != 1:
                raise ValueError(f"factor {k} has endomorphisms: not simple")
            if not is_simple(rep):
                raise ValueError(f"factor {k} fails the density check: not simple")
        for i in range(len(self.factors)):
            for j in range(len(self.factors)):
                if i == j:
                    continue
                if hom_dim(self.factors[i][0], self.factors[j][0]) != 0:
                    raise ValueError(f"factors {i} and {j} are isomorphic")


class LocalQuiverResult:
    """Local quiver, multiplicity vector and Ext matrices of a module."""

    __slots__ = ("quiver", "alpha", "ext1_matrix", "ext2_lower")

    def __init__(self, quiver: Quiver, alpha: DimVector,
                 ext1_matrix: list[list[int]],
                 ext2_lower: list[list[int]] | None):
        self.quiver = quiver
        self.alpha = alpha
        self.ext1_matrix = ext1_matrix
        self.ext2_lower = ext2_lower

    def to_json(self) -> dict:
        out = {
            "vertices": len(self.quiver.vertices),
            "loops": [self.ext1_matrix[i][i] for i in range(len(self.ext1_matrix))],
            "ext1": self.ext1_matrix,
            "alpha": [self.alpha[v] for v in self.quiver.vertices],
            "quiver": self.quiver.to_json(),
        }
        if self.ext2_lower is not None:
            out["ext2_lower"] = self.ext2_lower
        return out


def local_quiver(m: SemisimpleModule, cone: Presentation | None = None,
                 cone_degree: int | None = None) -> LocalQuiverResult:
    """The local quiver of a semisimple module.

    One vertex per simple factor; the number of arrows from vertex j to
    vertex i is dim Ext^1 of (factor i, factor j), stored as
    ``ext1_matrix[i][j]``.  The dimension vector records multiplicities.
    When a tangent-cone presentation over matching vertices is supplied, its
    minimal relation counts fill the lower bound for the second Ext matrix.
    """
    m.validate()
    k = len(m.factors)
    names = []
    for idx, (rep, _) in enumerate(m.factors):
        names.append(rep.name if rep.name else f"S{idx + 1}")
    if len(set(names)) != k:
        names = [f"S{idx + 1}" for idx in range(k)]
    ext1 = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            ext1[i][j] = ext1_dim(m.factors[i][0], m.factors[j][0])
    arrows = []
    for i in range(k):
        for j in range(k):
            for t in range(ext1[i][j]):
                if k == 1:
                    arrows.append((f"T{t + 1}", names[i], names[j]))
                else:
                    arrows.append((f"T{j + 1}_{i + 1}_{t + 1}", names[i], names[j]))
    quiver = Quiver(names, arrows)
    alpha = DimVector(quiver, {names[i]: m.factors[i][1] for i in range(k)})
    ext2 = None
    if cone is not None:
        if list(cone.quiver.vertices) != names:
            raise ValueError("cone presentation vertices must match the factors")
        degree = cone_degree if cone_degree is not None \
            else max(cone.max_relation_degree(), 2)
        counts = minimal_relation_counts(cone, degree)
        ext2 = [[counts.get((names[i], names[j]), 0) for j in range(k)]
                for i in range(k)]
    return LocalQuiverResult(quiver, alpha, ext1, ext2)


def load_representation(presentation: Presentation, data: dict,
                        name: str = "") -> Representation:
    """Build a representation from its JSON form.

    Expected shape: ``{"alpha": {vertex: int}, "matrices": {arrow: [[str]]},
    "field": "q" | "cyclo:m"}``; matrix entries are exact scalar literals.
    """
    tag = data.get("field", "q")
    if tag == "q":
        field = QQ
    elif isinstance(tag, str) and tag.startswith("cyclo:"):
        field = Field(int(tag.split(":", 1)[1]))
    else:
        raise ValueError(f"unknown field tag {tag!r}")
    alpha = DimVector(presentation.quiver, {
        v: int(n) for v, n in data["alpha"].items()
    })
    matrices = {}
    for arrow, mat in data["matrices"].items():
        matrices[arrow] = [
            [parse_scalar(str(x), field) for x in row] for row in mat
        ]
    return Representation(presentation, alpha, matrices, field=field, name=name)
