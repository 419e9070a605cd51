import random

import pytest

from localquiver import linalg
from localquiver.ncalg import NCPoly, PathWord, Presentation
from localquiver.quiver import Quiver
from localquiver.rewrite import (complete, graded_dims, gr_ideal, is_gradable,
                                 minimal_relation_counts, normal_form)
from localquiver.scalars import QQ


def loops(*names):
    return Quiver(["v"], [(n, "v", "v") for n in names])


def counterexample_presentation():
    q = loops("X", "Y", "Z")
    xy = NCPoly.word(q, ["X", "Y"])
    yx = NCPoly.word(q, ["Y", "X"])
    z3 = NCPoly.word(q, ["Z", "Z", "Z"])
    return Presentation(q, [xy + z3, yx + z3], flavor="complete")


def gradable_presentation():
    q = loops("X", "Y")
    xyx = NCPoly.word(q, ["X", "Y", "X"])
    return Presentation(
        q, [NCPoly.word(q, ["X", "Y"]) + xyx, NCPoly.word(q, ["Y", "X"]) + xyx],
        flavor="complete")


# ---- complete -------------------------------------------------------------

def test_complete_monomial():
    q = loops("X", "Y")
    p = Presentation(q, [NCPoly.word(q, ["X", "Y"]), NCPoly.word(q, ["Y", "X"])],
                     flavor="graded")
    rs = complete(p, 5)
    assert sorted(str(r.lead) for r in rs.rules) == ["X*Y", "Y*X"]
    assert rs.complete_up_to == 5


def test_complete_preprojective_a2():
    from localquiver.ncalg import preprojective_relations
    qd = Quiver(["1", "2"], [("a", "2", "1")]).double()
    p = Presentation(qd, preprojective_relations(qd), flavor="graded")
    rs = complete(p, 4)
    assert {str(r.lead) for r in rs.rules} == {"a*a'", "a'*a"}


def test_complete_introduces_higher_rules():
    rs = complete(counterexample_presentation(), 5)
    leads = sorted(str(r.lead) for r in rs.rules)
    assert leads == ["X*Y", "X*Z^3", "Y*X", "Y*Z^3"]


def test_complete_rejects_low_bound():
    with pytest.raises(ValueError):
        complete(counterexample_presentation(), 2)


# ---- normal_form ------------------------------------------------------------

def test_normal_form_examples():
    q = loops("X", "Y")
    p = Presentation(q, [NCPoly.word(q, ["X", "Y"]), NCPoly.word(q, ["Y", "X"])],
                     flavor="graded")
    rs = complete(p, 5)
    assert normal_form(rs, NCPoly.word(q, ["X", "Y", "X"])).is_zero()

    from localquiver.ncalg import preprojective_relations
    qd = Quiver(["1", "2"], [("a", "2", "1")]).double()
    rsd = complete(Presentation(qd, preprojective_relations(qd),
                                flavor="graded"), 4)
    assert normal_form(rsd, NCPoly.word(qd, ["a", "a'", "a"])).is_zero()

    free = complete(Presentation(q, [], flavor="graded"), 4)
    f = NCPoly.word(q, ["X", "Y", "X"]) - NCPoly.word(q, ["Y", "Y"]).scale(2)
    assert normal_form(free, f) == f
    with pytest.raises(ValueError):
        normal_form(free, NCPoly.word(q, ["X"] * 5))


def test_normal_form_is_linear_and_idempotent(seed=2):
    rng = random.Random(seed)
    rs = complete(counterexample_presentation(), 5)
    q = rs.quiver

    def random_poly():
        poly = NCPoly.zero(q)
        for _ in range(rng.randrange(1, 4)):
            w = [rng.choice(["X", "Y", "Z"]) for _ in range(rng.randrange(0, 5))]
            if w:
                poly = poly + NCPoly.word(q, w).scale(rng.randrange(-2, 3))
            else:
                poly = poly + NCPoly.vertex(q, "v").scale(rng.randrange(-2, 3))
        return poly

    for _ in range(15):
        f, g = random_poly(), random_poly()
        nf = rs.reduce(f)
        assert rs.reduce(nf) == nf
        assert rs.reduce(f + g) == rs.reduce(rs.reduce(f) + rs.reduce(g))


def test_confluence_random_reduction_orders(seed=13):
    # one-step rewrites applied at random positions agree with the normal form
    rng = random.Random(seed)
    rs = complete(counterexample_presentation(), 5)
    q = rs.quiver

    def random_single_step(poly):
        options = []
        for w, c in poly.terms.items():
            for rule in rs.rules:
                L = len(rule.lead.arrows)
                for pos in range(len(w.arrows) - L + 1):
                    if w.arrows[pos:pos + L] == rule.lead.arrows:
                        options.append((w, c, rule, pos))
        if not options:
            return None
        w, c, rule, pos = rng.choice(options)
        prefix = PathWord(w.arrows[:pos], "v", "v")
        suffix = PathWord(w.arrows[pos + len(rule.lead.arrows):], "v", "v")
        left = NCPoly(q, QQ, {prefix: QQ.one()})
        right = NCPoly(q, QQ, {suffix: QQ.one()})
        out = poly - (left * rule.poly * right).scale(c)
        keep = {w2: c2 for w2, c2 in out.terms.items() if len(w2) <= 5}
        trimmed = NCPoly(q, QQ)
        trimmed.terms = keep
        return trimmed

    for _ in range(10):
        word = [rng.choice(["X", "Y", "Z"]) for _ in range(rng.randrange(2, 6))]
        start = NCPoly.word(q, word)
        target = rs.reduce(start)
        current = start
        while True:
            nxt = random_single_step(current)
            if nxt is None:
                break
            current = nxt
        assert current == target


# ---- graded_dims -------------------------------------------------------------

def test_graded_dims_examples():
    from localquiver.ncalg import preprojective_relations
    qd = Quiver(["1", "2"], [("a", "2", "1")]).double()
    rs = complete(Presentation(qd, preprojective_relations(qd),
                               flavor="graded"), 4)
    assert graded_dims(rs) == [2, 2, 0, 0, 0]

    q = loops("X", "Y")
    free = complete(Presentation(q, [], flavor="graded"), 3)
    assert graded_dims(free) == [1, 2, 4, 8]

    q1 = loops("x")
    rs2 = complete(Presentation(q1, [NCPoly.word(q1, ["x", "x"])],
                                flavor="graded"), 3)
    assert graded_dims(rs2) == [1, 1, 0, 0]


def brute_force_graded_dims(p: Presentation, D: int) -> list[int]:
    """Independent oracle: exact spans over the full word basis."""
    q = p.quiver
    words = [PathWord.vertex(v) for v in q.vertices]
    by_degree = {0: list(words)}
    for d in range(1, D + 1):
        level = []
        for w in by_degree[d - 1]:
            for a in q.arrows:
                if a.head == w.tail:
                    level.append(PathWord(w.arrows + (a.name,), w.head, a.tail))
        by_degree[d] = level
        words.extend(level)
    index = {w: k for k, w in enumerate(words)}

    def vec(poly):
        out = [QQ.zero()] * len(index)
        for w, c in poly.terms.items():
            if len(w) <= D:
                out[index[w]] = out[index[w]] + c
        return out

    span = []
    for r in p.relations:
        room = D - r.min_degree()
        for du in range(room + 1):
            for dv in range(room - du + 1):
                for u in by_degree[du]:
                    for v in by_degree[dv]:
                        up = NCPoly(q, p.field, {u: QQ.one()})
                        vp = NCPoly(q, p.field, {v: QQ.one()})
                        prod = up * r * vp
                        if not prod.is_zero():
                            span.append(vec(prod))

    def rank_with_tail(min_degree):
        tail = []
        for w, k in index.items():
            if len(w) >= min_degree:
                row = [QQ.zero()] * len(index)
                row[k] = QQ.one()
                tail.append(row)
        rows = span + tail
        return linalg.rank(rows) if rows else 0

    dims = []
    for d in range(D + 1):
        dims.append(rank_with_tail(d) - rank_with_tail(d + 1))
    return dims


def test_graded_dims_against_brute_force(seed=23):
    rng = random.Random(seed)
    q = loops("X", "Y")
    arrows = ["X", "Y"]
    for _ in range(6):
        rels = []
        for _ in range(rng.randrange(1, 3)):
            poly = NCPoly.zero(q)
            for _ in range(rng.randrange(1, 3)):
                w = [rng.choice(arrows) for _ in range(rng.randrange(2, 4))]
                poly = poly + NCPoly.word(q, w).scale(rng.randrange(-2, 3))
            if not poly.is_zero():
                rels.append(poly)
        if not rels:
            continue
        p = Presentation(q, rels, flavor="complete")
        D = 4
        rs = complete(p, D)
        assert graded_dims(rs) == brute_force_graded_dims(p, D)


# ---- gr_ideal / is_gradable ---------------------------------------------------

def test_gr_ideal_counterexample():
    report = gr_ideal(counterexample_presentation(), 5)
    assert [str(g) for g in report.generators] == \
        ["X*Y", "Y*X", "X*Z^3 - Z^3*X", "Y*Z^3 - Z^3*Y"]
    assert report.gradable is False
    assert report.degree_bound == 5


def test_gr_ideal_gradable_set():
    report = gr_ideal(gradable_presentation(), 5)
    assert [str(g) for g in report.generators] == ["X*Y", "Y*X"]
    assert report.gradable is True


def test_gr_ideal_homogeneous_identity():
    q = loops("X", "Y")
    rels = [NCPoly.word(q, ["X", "Y"]) - NCPoly.word(q, ["Y", "X"])]
    report = gr_ideal(Presentation(q, rels, flavor="graded"), 4)
    assert [str(g) for g in report.generators] == ["X*Y - Y*X"]
    assert report.gradable is True


def test_gr_ideal_lifts_are_ideal_elements():
    p = counterexample_presentation()
    report = gr_ideal(p, 5)
    rs = complete(p, 5)
    for gen, lift in zip(report.generators, report.lifts):
        assert lift.min_part() == gen
        assert rs.reduce(lift).is_zero()


def test_gr_ideal_rejects_inadmissible():
    q = loops("x")
    bad = Presentation(
        q, [NCPoly.arrow(q, "x") - NCPoly.vertex(q, "v")], flavor="complete")
    with pytest.raises(ValueError):
        gr_ideal(bad, 4)


def test_is_gradable():
    assert is_gradable(counterexample_presentation(), 5) is False
    assert is_gradable(gradable_presentation(), 5) is True
    q = loops("X", "Y")
    single = Presentation(q, [NCPoly.word(q, ["X", "Y"])], flavor="graded")
    assert is_gradable(single, 4) is True


def test_gradable_implies_matching_dims():
    p = gradable_presentation()
    D = 5
    naive = Presentation(p.quiver, [r.min_part() for r in p.relations],
                         flavor="graded")
    d_complete = graded_dims(complete(p, D))
    d_naive = graded_dims(complete(naive, D))
    bound = D - p.max_relation_degree()
    assert d_complete[:bound + 1] == d_naive[:bound + 1]


# ---- minimal_relation_counts ---------------------------------------------------

def test_minimal_relation_counts():
    from localquiver.ncalg import preprojective_relations
    qd = loops("x").double()
    p = Presentation(qd, preprojective_relations(qd), flavor="graded")
    assert minimal_relation_counts(p, 4) == {("v", "v"): 1}

    q = loops("X", "Y")
    p2 = Presentation(q, [NCPoly.word(q, ["X", "Y"]),
                          NCPoly.word(q, ["Y", "X"])], flavor="graded")
    assert minimal_relation_counts(p2, 4) == {("v", "v"): 2}

    free = Presentation(q, [], flavor="graded")
    assert minimal_relation_counts(free, 4) == {}

    with pytest.raises(ValueError):
        minimal_relation_counts(counterexample_presentation(), 5)


def test_minimal_relation_counts_multivertex():
    from localquiver.ncalg import preprojective_relations
    qd = Quiver(["1", "2"], [("a", "2", "1")]).double()
    p = Presentation(qd, preprojective_relations(qd), flavor="graded")
    counts = minimal_relation_counts(p, 4)
    assert counts == {("1", "1"): 1, ("2", "2"): 1}


def test_group_algebra_truncation_collapses():
    from localquiver.ncalg import surface_group_presentation
    rs = complete(surface_group_presentation(1), 4)
    assert graded_dims(rs) == [0, 0, 0, 0, 0]


def test_gr_ideal_monomial_identity():
    q = loops("X", "Y")
    p = Presentation(q, [NCPoly.word(q, ["X", "Y"]),
                         NCPoly.word(q, ["Y", "X"])], flavor="graded")
    report = gr_ideal(p, 5)
    assert [str(g) for g in report.generators] == ["X*Y", "Y*X"]
    assert report.gradable is True


def test_gradability_detects_redundant_minimal_parts():
    # the minimal part of the first relation is a multiple of the second's,
    # and the lift of that redundancy leaves the naive ideal: the syzygy in
    # question comes from interreduction, not from a suffix-prefix overlap
    q = loops("X", "Y")
    r1 = NCPoly.word(q, ["X", "Y", "X"])
    r2 = NCPoly.word(q, ["Y", "X"]) + NCPoly.word(q, ["X", "X", "X"])
    p = Presentation(q, [r1, r2], flavor="complete")
    report = gr_ideal(p, 5)
    assert [str(g) for g in report.generators] == ["Y*X", "X^4"]
    assert report.gradable is False
    assert is_gradable(p, 5) is False
