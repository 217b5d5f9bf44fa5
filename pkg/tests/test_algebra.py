import pytest

from cotorkit.algebra import (
    Arrow,
    BadIdempotents,
    BadIdentity,
    CommutativePresentation,
    InhomogeneousRelation,
    NonAssociative,
    NotNilpotentByBound,
    NotPrimitive,
    QuiverPresentation,
    TablePresentation,
    UnsupportedField,
    build_graded_quotient,
    build_table_algebra,
    opposite,
    primitive_idempotents,
    radical,
)
from cotorkit.linalg import GF, QQ, Matrix, rank


def f1_presentation():
    return CommutativePresentation(vars=("x",), relations=(((1, (2,)),),))


def f2_presentation():
    loops = (Arrow("alpha", "e", "e"), Arrow("beta", "e", "e"))
    rels = (
        ((1, ("alpha", "alpha")),),
        ((1, ("beta", "beta")),),
        ((1, ("alpha", "beta")),),
        ((1, ("beta", "alpha")),),
    )
    return QuiverPresentation(vertices=("e",), arrows=loops, relations=rels)


def f3_presentation():
    # Q[v,x,y,z] / (v2, z2, xy, vx+2xz, vy+yz, vx+y2, vy-x2)
    def mono(v=0, x=0, y=0, z=0):
        return (v, x, y, z)

    rels = (
        ((1, mono(v=2)),),
        ((1, mono(z=2)),),
        ((1, mono(x=1, y=1)),),
        ((1, mono(v=1, x=1)), (2, mono(x=1, z=1))),
        ((1, mono(v=1, y=1)), (1, mono(y=1, z=1))),
        ((1, mono(v=1, x=1)), (1, mono(y=2))),
        ((1, mono(v=1, y=1)), (-1, mono(x=2))),
    )
    return CommutativePresentation(vars=("v", "x", "y", "z"), relations=rels)


def sympy_quotient_dimension(pres):
    """Independent oracle: vector-space dimension of Q[vars]/I via Groebner bases."""
    import sympy

    xs = sympy.symbols(" ".join(pres.vars))
    if len(pres.vars) == 1:
        xs = (xs,)
    polys = []
    for rel in pres.relations:
        p = 0
        for coeff, mono in rel:
            term = sympy.Integer(coeff)
            for v, e in zip(xs, mono):
                term *= v**e
            p += term
        polys.append(p)
    g = sympy.groebner(polys, *xs, order="grevlex")
    # standard monomials: not divisible by any leading monomial
    lead_exp = [q.monoms(order="grevlex")[0] for q in g.polys]

    def divisible(m, l):
        return all(a >= b for a, b in zip(m, l))

    count = 0
    frontier = [(0,) * len(xs)]
    seen = set(frontier)
    while frontier:
        m = frontier.pop()
        if any(divisible(m, l) for l in lead_exp):
            continue
        count += 1
        if count > 1000:
            raise AssertionError("quotient looks infinite-dimensional")
        for i in range(len(xs)):
            m2 = list(m)
            m2[i] += 1
            m2 = tuple(m2)
            if m2 not in seen:
                seen.add(m2)
                frontier.append(m2)
    return count


def test_one_dimensional_table_is_the_field():
    t = TablePresentation(dim=1, mul=(((1,),),), one=(1,), idempotents=((1,),), labels=("1",))
    a = build_table_algebra(t, QQ)
    assert a.dim == 1
    assert radical(a).cols == 0


def test_f1_build():
    a = build_graded_quotient(f1_presentation(), QQ)
    assert a.dim == 2
    assert a.basis_labels == ("1", "x")
    x = a.basis_vector(1)
    assert not any(a.multiply(x, x))
    assert radical(a).cols == 1
    assert primitive_idempotents(a) == [a.one]


def test_f1_as_table_algebra():
    # same algebra entered as a raw table: 1*1=1, 1*x=x, x*x=0
    t = TablePresentation(
        dim=2,
        mul=(((1, 0), (0, 1)), ((0, 1), (0, 0))),
        one=(1, 0),
        idempotents=((1, 0),),
        labels=("1", "x"),
    )
    a = build_table_algebra(t, QQ)
    assert radical(a).cols == 1
    assert rank(radical(a)) == 1


def test_f2_build():
    a = build_graded_quotient(f2_presentation(), QQ)
    assert a.dim == 3
    assert a.basis_labels == ("e", "alpha", "beta")
    assert a.grading == (0, 1, 1)
    al = a.basis_vector(1)
    be = a.basis_vector(2)
    for u in (al, be):
        for v in (al, be):
            assert not any(a.multiply(u, v))
    j = radical(a)
    assert j.cols == 2
    assert primitive_idempotents(a) == [a.basis_vector(0)]


def test_f2_rebuild_stability_under_larger_bound():
    p = f2_presentation()
    a3 = build_graded_quotient(
        QuiverPresentation(p.vertices, p.arrows, p.relations, degree_bound=3), QQ
    )
    a12 = build_graded_quotient(p, QQ)
    assert a3.basis_labels == a12.basis_labels
    assert a3.mul == a12.mul


def test_f3_build_matches_sympy_oracle():
    pres = f3_presentation()
    a = build_graded_quotient(pres, QQ)
    assert a.dim == sympy_quotient_dimension(pres)
    # degree-2 slice: 10 monomials minus the rank of the 7 relations
    deg2 = [i for i in range(a.dim) if a.grading[i] == 2]
    assert len(deg2) == 3
    assert radical(a).cols == a.dim - 1


def test_f3_products_respect_relations():
    a = build_graded_quotient(f3_presentation(), QQ)
    v = a.basis_vector(a.label_index("v"))
    x = a.basis_vector(a.label_index("x"))
    y = a.basis_vector(a.label_index("y"))
    z = a.basis_vector(a.label_index("z"))
    assert not any(a.multiply(v, v))
    assert not any(a.multiply(z, z))
    assert not any(a.multiply(x, y))
    # vx = -2xz and vy = x^2
    vx = a.multiply(v, x)
    xz = a.multiply(x, z)
    assert vx == tuple(-2 * c for c in xz)
    assert a.multiply(v, y) == a.multiply(x, x)


def test_corrupted_f2_table_reports_witness():
    good = build_graded_quotient(f2_presentation(), QQ)
    mul = [list(row) for row in good.mul]
    # alpha*beta = e breaks associativity/nilpotency
    mul[1][2] = good.basis_vector(0)
    t = TablePresentation(
        dim=3,
        mul=tuple(tuple(row) for row in mul),
        one=good.one,
        idempotents=good.idempotents,
        labels=good.basis_labels,
    )
    with pytest.raises((NonAssociative, BadIdentity)) as exc:
        build_table_algebra(t, QQ)
    if isinstance(exc.value, NonAssociative):
        assert len(exc.value.witness) == 3


def test_semisimple_two_by_two_table():
    # Q x Q with componentwise multiplication
    t = TablePresentation(
        dim=2,
        mul=(((1, 0), (0, 0)), ((0, 0), (0, 1))),
        one=(1, 1),
        idempotents=((1, 0), (0, 1)),
        labels=("u", "w"),
    )
    a = build_table_algebra(t, QQ)
    assert radical(a).cols == 0
    assert primitive_idempotents(a) == [(1, 0), (0, 1)]


def test_nonprimitive_idempotent_detected():
    # Q x Q with only the identity supplied: corner is 2-dimensional semisimple
    t = TablePresentation(
        dim=2,
        mul=(((1, 0), (0, 0)), ((0, 0), (0, 1))),
        one=(1, 1),
        idempotents=((1, 1),),
        labels=("u", "w"),
    )
    a = build_table_algebra(t, QQ)
    with pytest.raises(NotPrimitive):
        primitive_idempotents(a)


def test_bad_idempotents_rejected_at_build():
    t = TablePresentation(
        dim=2,
        mul=(((1, 0), (0, 0)), ((0, 0), (0, 1))),
        one=(1, 1),
        idempotents=((1, 0), (1, 1)),
        labels=("u", "w"),
    )
    with pytest.raises(BadIdempotents):
        build_table_algebra(t, QQ)


def test_not_nilpotent_by_bound():
    pres = CommutativePresentation(vars=("x", "y"), relations=(((1, (1, 1)),),), degree_bound=5)
    with pytest.raises(NotNilpotentByBound):
        build_graded_quotient(pres, QQ)


def test_inhomogeneous_relations_rejected():
    pres = CommutativePresentation(
        vars=("x",), relations=(((1, (2,)), (1, (3,))),), degree_bound=6
    )
    with pytest.raises(InhomogeneousRelation):
        build_graded_quotient(pres, QQ)
    loops = (Arrow("a", "e", "e"),)
    qpres = QuiverPresentation(("e",), loops, (((1, ("a",)),),))
    with pytest.raises(InhomogeneousRelation):
        build_graded_quotient(qpres, QQ)


def test_radical_unsupported_small_prime_field_table():
    t = TablePresentation(
        dim=2,
        mul=(((1, 0), (0, 1)), ((0, 1), (0, 0))),
        one=(1, 0),
        idempotents=((1, 0),),
        labels=("1", "x"),
    )
    a = build_table_algebra(t, GF(2))
    with pytest.raises(UnsupportedField):
        radical(a)
    # but a graded build over the same small field is fine
    b = build_graded_quotient(f1_presentation(), GF(2))
    assert radical(b).cols == 1


def test_radical_nilpotency_and_ideal_property():
    a = build_graded_quotient(f3_presentation(), QQ)
    j = radical(a)
    # J^2 then J^3: multiply out and take ranks
    prods = []
    for u in j.columns():
        for v in j.columns():
            prods.append(a.multiply(u, v))
    j2 = Matrix.from_columns(a.field, prods, rows=a.dim)
    assert rank(j2) == len([g for g in a.grading if g == 2])


def test_opposite_involution_and_commutative_fixed_point():
    f1 = build_graded_quotient(f1_presentation(), QQ)
    assert opposite(f1).mul == f1.mul
    f2 = build_graded_quotient(f2_presentation(), QQ)
    op = opposite(f2)
    assert op.mul != f2.mul or all(
        f2.mul[i][j] == f2.mul[j][i] for i in range(3) for j in range(3)
    )
    assert opposite(op) is f2
    assert opposite(op) == f2


def test_opposite_random_table_revalidates():
    # a small noncommutative validated table: upper triangular 2x2 matrices
    # basis: e11, e22, e12
    mul = (
        ((1, 0, 0), (0, 0, 0), (0, 0, 1)),
        ((0, 0, 0), (0, 1, 0), (0, 0, 0)),
        ((0, 0, 0), (0, 0, 1), (0, 0, 0)),
    )
    t = TablePresentation(
        dim=3,
        mul=mul,
        one=(1, 1, 0),
        idempotents=((1, 0, 0), (0, 1, 0)),
        labels=("e11", "e22", "e12"),
    )
    a = build_table_algebra(t, QQ)
    op = opposite(a)
    assert op.mul[0][2] == a.mul[2][0]
    assert radical(a).cols == 1
