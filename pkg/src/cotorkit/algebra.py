"""Finite-dimensional associative algebras from three presentation kinds.

An Algebra is a structure-constant table over an exact field plus enough
presentation metadata to rebuild module actions from generator matrices.
Builders:

  * build_table_algebra   -- raw multiplication table with user idempotents,
  * build_graded_quotient -- path algebra of a quiver, or a commutative
    polynomial ring, modulo homogeneous relations, computed degreewise.

Graded quotients are processed one degree at a time: the degree-n slice of
the ideal is the span of u*r*v over generating relations r and paths or
monomials u, v of matching degrees (vertex idempotents count as degree-0
multipliers), and the quotient basis is the set of non-pivot words after
row reduction.  The build finishes when a degree slice of the quotient
vanishes; everything above is then zero too, since the algebra is
generated in degree one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (
    CoordinateSolver,
    FieldDesc,
    Matrix,
    column_space_basis,
    rank,
    rref,
)


class AlgebraError(ValueError):
    pass


class NonAssociative(AlgebraError):
    def __init__(self, labels):
        self.witness = labels
        super().__init__(f"associativity fails on basis triple {labels}")


class BadIdentity(AlgebraError):
    pass


class BadIdempotents(AlgebraError):
    pass


class NotNilpotentByBound(AlgebraError):
    pass


class InhomogeneousRelation(AlgebraError):
    pass


class UnsupportedField(AlgebraError):
    pass


class NotPrimitive(AlgebraError):
    def __init__(self, index, msg):
        self.index = index
        super().__init__(msg)


# -- presentations -------------------------------------------------------


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    tgt: str


@dataclass(frozen=True)
class QuiverPresentation:
    """Path algebra presentation: relations are equal-length path combinations."""

    vertices: tuple
    arrows: tuple  # of Arrow
    relations: tuple  # of tuple of (coeff, tuple-of-arrow-names)
    degree_bound: int = 12

    kind = "quiver"

    def generator_names(self):
        return list(self.vertices) + [a.name for a in self.arrows]


@dataclass(frozen=True)
class CommutativePresentation:
    """Commutative polynomial quotient: relations combine equal-degree monomials."""

    vars: tuple
    relations: tuple  # of tuple of (coeff, exponent-tuple)
    degree_bound: int = 12

    kind = "commutative"

    def generator_names(self):
        return list(self.vars)


@dataclass(frozen=True)
class TablePresentation:
    dim: int
    mul: tuple  # dim x dim x dim raw scalars
    one: tuple
    idempotents: tuple
    labels: tuple = None

    kind = "table"

    def generator_names(self):
        return list(self.labels) if self.labels else [f"b{i}" for i in range(self.dim)]


@dataclass(frozen=True)
class OppositePresentation:
    """Provenance marker: this algebra is the opposite of a presented one."""

    inner: object

    kind = "opposite"

    def generator_names(self):
        return self.inner.generator_names()


class Algebra:
    """Validated finite-dimensional algebra given by structure constants.

    mul[i][j] is the coefficient vector of basis_i * basis_j.  basis_words
    maps each basis element to the product of presentation generators that
    realizes it, which is how module actions get extended from generator
    matrices.
    """

    __slots__ = (
        "field",
        "dim",
        "basis_labels",
        "mul",
        "one",
        "idempotents",
        "grading",
        "presentation",
        "basis_words",
        "_left_mats",
        "_right_mats",
        "_opposite",
        "_radical",
        "_cache",
    )

    def __init__(
        self,
        field,
        basis_labels,
        mul,
        one,
        idempotents,
        grading=None,
        presentation=None,
        basis_words=None,
        check=True,
    ):
        self.field = field
        self.basis_labels = tuple(basis_labels)
        self.dim = len(self.basis_labels)
        d = self.dim
        self.mul = tuple(
            tuple(tuple(field.coerce(c) for c in mul[i][j]) for j in range(d))
            for i in range(d)
        )
        self.one = tuple(field.coerce(c) for c in one)
        self.idempotents = tuple(tuple(field.coerce(c) for c in e) for e in idempotents)
        self.grading = tuple(grading) if grading is not None else None
        self.presentation = presentation
        self.basis_words = tuple(basis_words) if basis_words is not None else None
        self._left_mats = None
        self._right_mats = None
        self._opposite = None
        self._radical = None
        self._cache = {}
        if check:
            self._validate()

    # -- structural helpers ---------------------------------------------

    def left_mult(self, i):
        """Matrix of left multiplication by basis element i."""
        if self._left_mats is None:
            d = self.dim
            self._left_mats = [
                Matrix(
                    self.field,
                    d,
                    d,
                    tuple(tuple(self.mul[s][j][k] for j in range(d)) for k in range(d)),
                )
                for s in range(d)
            ]
        return self._left_mats[i]

    def right_mult(self, j):
        """Matrix of right multiplication by basis element j."""
        if self._right_mats is None:
            d = self.dim
            self._right_mats = [
                Matrix(
                    self.field,
                    d,
                    d,
                    tuple(tuple(self.mul[i][s][k] for i in range(d)) for k in range(d)),
                )
                for s in range(d)
            ]
        return self._right_mats[j]

    def _combination(self, mats, coeffs):
        terms = [(i, c) for i, c in enumerate(coeffs) if c]
        if not terms:
            return Matrix.zeros(self.field, self.dim, self.dim)
        if len(terms) == 1 and terms[0][1] == self.field.one():
            return mats(terms[0][0])
        z = self.field.zero()
        out = [[z] * self.dim for _ in range(self.dim)]
        for i, c in terms:
            data = mats(i).data
            for r in range(self.dim):
                row = data[r]
                orow = out[r]
                for col in range(self.dim):
                    v = row[col]
                    if v:
                        orow[col] += c * v
        if not self.field.is_rational:
            p = self.field.p
            out = [[x % p for x in row] for row in out]
        return Matrix(self.field, self.dim, self.dim, tuple(tuple(r) for r in out))

    def left_mult_of(self, coeffs):
        return self._combination(self.left_mult, coeffs)

    def right_mult_of(self, coeffs):
        return self._combination(self.right_mult, coeffs)

    def multiply(self, u, v):
        """Product of two coefficient vectors."""
        out = [self.field.zero()] * self.dim
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        ab = a * b
                        for k, c in enumerate(self.mul[i][j]):
                            if c:
                                out[k] += ab * c
        if not self.field.is_rational:
            p = self.field.p
            out = [x % p for x in out]
        return tuple(out)

    def basis_vector(self, i):
        z, o = self.field.zero(), self.field.one()
        return tuple(o if k == i else z for k in range(self.dim))

    def label_index(self, label):
        return self.basis_labels.index(label)

    def __eq__(self, other):
        return (
            isinstance(other, Algebra)
            and self.field == other.field
            and self.basis_labels == other.basis_labels
            and self.mul == other.mul
            and self.one == other.one
            and self.idempotents == other.idempotents
        )

    def __hash__(self):
        return hash((self.field, self.basis_labels, self.mul, self.one))

    def __repr__(self):
        kind = self.presentation.kind if self.presentation else "raw"
        return f"Algebra(dim={self.dim}, kind={kind}, field={self.field.kind})"

    # -- validation ------------------------------------------------------

    def _validate(self):
        d = self.dim
        if len(self.one) != d:
            raise BadIdentity("identity vector has wrong length")
        for i in range(d):
            b = self.basis_vector(i)
            if self.multiply(self.one, b) != b or self.multiply(b, self.one) != b:
                raise BadIdentity(
                    f"claimed identity fails on basis element {self.basis_labels[i]}"
                )
        for i in range(d):
            li = self.left_mult(i)
            for j in range(d):
                # associativity: L_i L_j must equal L_(b_i b_j)
                lhs = li * self.left_mult(j)
                rhs = Matrix.zeros(self.field, d, d)
                for k, c in enumerate(self.mul[i][j]):
                    if c:
                        rhs = rhs + self.left_mult(k).scale(c)
                if lhs != rhs:
                    col = next(c for c in range(d) if lhs.col(c) != rhs.col(c))
                    raise NonAssociative(
                        (
                            self.basis_labels[i],
                            self.basis_labels[j],
                            self.basis_labels[col],
                        )
                    )
        if not self.idempotents:
            raise BadIdempotents("no idempotents supplied")
        total = [self.field.zero()] * d
        for s, e in enumerate(self.idempotents):
            if self.multiply(e, e) != tuple(e):
                raise BadIdempotents(f"idempotent {s} fails e*e = e")
            for t, f in enumerate(self.idempotents):
                if t != s:
                    prod = self.multiply(e, f)
                    if any(prod):
                        raise BadIdempotents(f"idempotents {s}, {t} not orthogonal")
            total = [a + b for a, b in zip(total, e)]
        if not self.field.is_rational:
            total = [x % self.field.p for x in total]
        if tuple(total) != self.one:
            raise BadIdempotents("idempotents do not sum to the identity")


# -- table builder -------------------------------------------------------


def build_table_algebra(t, field):
    if not isinstance(field, FieldDesc):
        raise AlgebraError("need a FieldDesc")
    d = t.dim
    if len(t.mul) != d or any(len(r) != d for r in t.mul):
        raise AlgebraError("mul table has wrong shape")
    for row in t.mul:
        for cell in row:
            if len(cell) != d:
                raise AlgebraError("mul table has wrong shape")
    labels = t.labels if t.labels else tuple(f"b{i}" for i in range(d))
    words = tuple((lab,) for lab in labels)
    return Algebra(
        field,
        labels,
        t.mul,
        t.one,
        t.idempotents,
        grading=None,
        presentation=t,
        basis_words=words,
    )


# -- graded quotient builder ----------------------------------------------


class _DegreeSlice:
    """Quotient data in one degree: all words, survivors, and reduction."""

    __slots__ = ("words", "index", "survivors", "reduction")

    def __init__(self, words, index, survivors, reduction):
        self.words = words
        self.index = index
        self.survivors = survivors
        self.reduction = reduction  # candidate position -> {survivor position: coeff}


def _slice_from_rows(field, words, rows):
    index = {w: i for i, w in enumerate(words)}
    if rows:
        res = rref(Matrix.from_rows(field, rows, cols=len(words)))
        pivots = list(res.pivot_cols)
        reduced = res.reduced
    else:
        pivots, reduced = [], None
    pivset = set(pivots)
    survivors = [i for i in range(len(words)) if i not in pivset]
    surv_pos = {c: k for k, c in enumerate(survivors)}
    reduction = {}
    for k, c in enumerate(pivots):
        row = reduced.data[k]
        expr = {}
        for f in survivors:
            x = row[f]
            if x:
                expr[surv_pos[f]] = -x if field.is_rational else (-x) % field.p
        reduction[c] = expr
    for i in survivors:
        reduction[i] = {surv_pos[i]: field.one()}
    return _DegreeSlice(words, index, survivors, reduction)


def build_graded_quotient(pres, field):
    """Build kQ/I or k[x_1..x_n]/I for homogeneous I, degree by degree."""
    if pres.degree_bound < 2:
        raise AlgebraError("degree_bound must be at least 2")
    if pres.kind == "quiver":
        return _build_quiver(pres, field)
    if pres.kind == "commutative":
        return _build_commutative(pres, field)
    raise AlgebraError(f"not a graded presentation: {pres.kind}")


def _check_quiver_relations(pres):
    arrow_by_name = {a.name: a for a in pres.arrows}
    if len(arrow_by_name) != len(pres.arrows):
        raise AlgebraError("duplicate arrow names")
    for a in pres.arrows:
        if a.src not in pres.vertices or a.tgt not in pres.vertices:
            raise AlgebraError(f"arrow {a.name} touches unknown vertex")
    for rel in pres.relations:
        if not rel:
            raise InhomogeneousRelation("empty relation")
        lengths = set()
        for _coeff, path in rel:
            if len(path) < 2:
                raise InhomogeneousRelation(
                    f"length-{len(path)} path in relation; paths must have length >= 2"
                )
            lengths.add(len(path))
            prev = None
            for name in path:
                if name not in arrow_by_name:
                    raise AlgebraError(f"unknown arrow {name!r} in relation")
                a = arrow_by_name[name]
                if prev is not None and prev.tgt != a.src:
                    raise AlgebraError(f"non-composable path {path} in relation")
                prev = a
        if len(lengths) != 1:
            raise InhomogeneousRelation(f"relation mixes path lengths {sorted(lengths)}")


def _quiver_paths_by_degree(pres, max_deg):
    arrows = sorted(range(len(pres.arrows)), key=lambda i: pres.arrows[i].name)
    by_src = {}
    for i in arrows:
        by_src.setdefault(pres.arrows[i].src, []).append(i)
    levels = [None]  # degree 0 is the vertex span, handled separately
    current = [(i,) for i in arrows]
    current.sort(key=lambda p: tuple(pres.arrows[i].name for i in p))
    for _ in range(max_deg):
        levels.append(current)
        nxt = []
        for p in current:
            tgt = pres.arrows[p[-1]].tgt
            for i in by_src.get(tgt, []):
                nxt.append(p + (i,))
        nxt.sort(key=lambda p: tuple(pres.arrows[i].name for i in p))
        current = nxt
    return levels


def _build_quiver(pres, field):
    _check_quiver_relations(pres)
    verts = list(pres.vertices)
    if len(set(verts)) != len(verts):
        raise AlgebraError("duplicate vertex names")
    arrow_index = {a.name: i for i, a in enumerate(pres.arrows)}
    levels = _quiver_paths_by_degree(pres, pres.degree_bound)

    slices = {}
    stop_degree = None
    for d in range(1, pres.degree_bound + 1):
        words = levels[d]
        idx = {w: i for i, w in enumerate(words)}
        rows = []
        for rel in pres.relations:
            dr = len(rel[0][1])
            if dr > d:
                continue
            rel_paths = [
                (field.coerce(c), tuple(arrow_index[n] for n in names))
                for c, names in rel
            ]
            for s in range(0, d - dr + 1):
                tail = d - dr - s
                # degree-0 multipliers are the vertex idempotents, which
                # filter relation terms by source/target
                lefts = levels[s] if s > 0 else [v for v in verts]
                rights = levels[tail] if tail > 0 else [v for v in verts]
                for u in lefts:
                    for v in rights:
                        row = [field.zero()] * len(words)
                        hit = False
                        for coeff, p in rel_paths:
                            if isinstance(u, str):
                                if pres.arrows[p[0]].src != u:
                                    continue
                                left_part = ()
                            else:
                                if pres.arrows[u[-1]].tgt != pres.arrows[p[0]].src:
                                    continue
                                left_part = u
                            if isinstance(v, str):
                                if pres.arrows[p[-1]].tgt != v:
                                    continue
                                right_part = ()
                            else:
                                if pres.arrows[p[-1]].tgt != pres.arrows[v[0]].src:
                                    continue
                                right_part = v
                            row[idx[left_part + p + right_part]] += coeff
                            hit = True
                        if hit and any(row):
                            rows.append(row)
        sl = _slice_from_rows(field, words, rows)
        slices[d] = sl
        if not sl.survivors:
            stop_degree = d
            break
    if stop_degree is None:
        raise NotNilpotentByBound(
            f"quotient still nonzero in degree {pres.degree_bound}"
        )

    # global basis: vertex classes first, then surviving paths by degree
    basis_keys = [("v", i) for i in range(len(verts))]
    labels = list(verts)
    words_meta = [(verts[i],) for i in range(len(verts))]
    grading = [0] * len(verts)
    for d in range(1, stop_degree):
        sl = slices[d]
        for c in sl.survivors:
            p = sl.words[c]
            basis_keys.append(("p", p))
            labels.append("*".join(pres.arrows[i].name for i in p))
            words_meta.append(tuple(pres.arrows[i].name for i in p))
            grading.append(d)
    key_index = {k: i for i, k in enumerate(basis_keys)}
    dim = len(basis_keys)
    zero_vec = tuple(field.zero() for _ in range(dim))

    def unit(i):
        out = [field.zero()] * dim
        out[i] = field.one()
        return tuple(out)

    def reduce_path(p):
        d = len(p)
        if d >= stop_degree:
            return zero_vec
        sl = slices[d]
        out = [field.zero()] * dim
        for pos, coeff in sl.reduction[sl.index[p]].items():
            out[key_index[("p", sl.words[sl.survivors[pos]])]] = coeff
        return tuple(out)

    mul = []
    for i, ki in enumerate(basis_keys):
        row = []
        for j, kj in enumerate(basis_keys):
            if ki[0] == "v" and kj[0] == "v":
                row.append(unit(i) if i == j else zero_vec)
            elif ki[0] == "v":
                p = kj[1]
                row.append(unit(j) if pres.arrows[p[0]].src == verts[ki[1]] else zero_vec)
            elif kj[0] == "v":
                p = ki[1]
                row.append(unit(i) if pres.arrows[p[-1]].tgt == verts[kj[1]] else zero_vec)
            else:
                p, q = ki[1], kj[1]
                if pres.arrows[p[-1]].tgt != pres.arrows[q[0]].src:
                    row.append(zero_vec)
                else:
                    row.append(reduce_path(p + q))
        mul.append(tuple(row))

    one = [field.zero()] * dim
    for i in range(len(verts)):
        one[i] = field.one()
    idempotents = [unit(i) for i in range(len(verts))]
    return Algebra(
        field,
        labels,
        tuple(mul),
        tuple(one),
        tuple(idempotents),
        grading=grading,
        presentation=pres,
        basis_words=words_meta,
    )


def _check_commutative_relations(pres):
    n = len(pres.vars)
    for rel in pres.relations:
        if not rel:
            raise InhomogeneousRelation("empty relation")
        degrees = set()
        for _coeff, mono in rel:
            if len(mono) != n:
                raise AlgebraError(f"exponent vector {mono} has wrong length")
            if any(e < 0 for e in mono):
                raise AlgebraError(f"negative exponent in {mono}")
            degrees.add(sum(mono))
        if len(degrees) != 1:
            raise InhomogeneousRelation(f"relation mixes degrees {sorted(degrees)}")
        if degrees <= {0, 1}:
            raise InhomogeneousRelation("relations must have degree >= 2")


def _monomials_of_degree(nvars, deg):
    if deg == 0:
        return [(0,) * nvars]
    out = []

    def rec(prefix, remaining, pos):
        if pos == nvars - 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining + 1):
            rec(prefix + (e,), remaining - e, pos + 1)

    rec((), deg, 0)
    out.sort()
    return out


def _mono_label(pres, mono):
    parts = []
    for v, e in zip(pres.vars, mono):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


def _build_commutative(pres, field):
    _check_commutative_relations(pres)
    n = len(pres.vars)
    if len(set(pres.vars)) != n:
        raise AlgebraError("duplicate variable names")

    slices = {}
    stop_degree = None
    for d in range(1, pres.degree_bound + 1):
        words = _monomials_of_degree(n, d)
        idx = {w: i for i, w in enumerate(words)}
        rows = []
        for rel in pres.relations:
            dr = sum(rel[0][1])
            if dr > d:
                continue
            for m in _monomials_of_degree(n, d - dr):
                row = [field.zero()] * len(words)
                for coeff, mono in rel:
                    w = tuple(a + b for a, b in zip(m, mono))
                    row[idx[w]] += field.coerce(coeff)
                if any(row):
                    rows.append(row)
        sl = _slice_from_rows(field, words, rows)
        slices[d] = sl
        if not sl.survivors:
            stop_degree = d
            break
    if stop_degree is None:
        raise NotNilpotentByBound(
            f"quotient still nonzero in degree {pres.degree_bound}"
        )

    basis_keys = [(0,) * n]
    labels = ["1"]
    words_meta = [()]
    grading = [0]
    for d in range(1, stop_degree):
        sl = slices[d]
        for c in sl.survivors:
            mono = sl.words[c]
            basis_keys.append(mono)
            labels.append(_mono_label(pres, mono))
            word = []
            for v, e in zip(pres.vars, mono):
                word.extend([v] * e)
            words_meta.append(tuple(word))
            grading.append(d)
    key_index = {k: i for i, k in enumerate(basis_keys)}
    dim = len(basis_keys)
    zero_vec = tuple(field.zero() for _ in range(dim))

    def reduce_mono(mono):
        d = sum(mono)
        if d >= stop_degree:
            return zero_vec
        if d == 0:
            out = [field.zero()] * dim
            out[0] = field.one()
            return tuple(out)
        sl = slices[d]
        out = [field.zero()] * dim
        for pos, coeff in sl.reduction[sl.index[mono]].items():
            out[key_index[sl.words[sl.survivors[pos]]]] = coeff
        return tuple(out)

    mul = []
    for ki in basis_keys:
        row = []
        for kj in basis_keys:
            row.append(reduce_mono(tuple(a + b for a, b in zip(ki, kj))))
        mul.append(tuple(row))

    one = [field.zero()] * dim
    one[0] = field.one()
    return Algebra(
        field,
        labels,
        tuple(mul),
        tuple(one),
        (tuple(one),),
        grading=grading,
        presentation=pres,
        basis_words=words_meta,
    )


# -- radical and idempotents ----------------------------------------------


def _subspace_products(a, left_cols, right_cols):
    """All products u*v over columns of the two subspace bases."""
    cols = []
    for u in left_cols.columns():
        for v in right_cols.columns():
            cols.append(a.multiply(u, v))
    return Matrix.from_columns(a.field, cols, rows=a.dim)


def _verify_radical(a, j_cols):
    """Nilpotency, two-sided ideal property, and semisimplicity of A/J."""
    d = a.dim
    r = j_cols.cols
    if r:
        power = j_cols
        steps = 1
        while not power.is_zero():
            if steps > d:
                raise AlgebraError("claimed radical is not nilpotent within dim steps")
            power = column_space_basis(_subspace_products(a, j_cols, power))
            steps += 1
        basis = Matrix.identity(a.field, d)
        closure = _subspace_products(a, basis, j_cols).hstack(
            _subspace_products(a, j_cols, basis)
        )
        if rank(j_cols.hstack(closure)) != rank(j_cols):
            raise AlgebraError("claimed radical is not a two-sided ideal")
    piv = rref(j_cols.transpose()).pivot_cols if r else ()
    comp = [i for i in range(d) if i not in set(piv)]
    q = len(comp)
    if q == 0:
        return
    if r:
        lift = Matrix.from_columns(a.field, [a.basis_vector(i) for i in comp], rows=d)
        solver = CoordinateSolver(j_cols.hstack(lift))

        def project(vec):
            coords = solver.coords(Matrix.column(a.field, list(vec)))
            return tuple(coords[r + t, 0] for t in range(q))

    else:

        def project(vec):
            return tuple(vec[i] for i in comp)

    mul_bar = [
        [
            project(a.multiply(a.basis_vector(comp[s]), a.basis_vector(comp[t])))
            for t in range(q)
        ]
        for s in range(q)
    ]
    tr_bar = [sum(mul_bar[s][t][t] for t in range(q)) for s in range(q)]
    gram = []
    for s in range(q):
        row = []
        for t in range(q):
            val = sum(c * tr_bar[k] for k, c in enumerate(mul_bar[s][t]) if c)
            if not a.field.is_rational:
                val %= a.field.p
            row.append(val)
        gram.append(row)
    if rank(Matrix.from_rows(a.field, gram, cols=q)) != q:
        raise AlgebraError("quotient by claimed radical is not semisimple")


def radical(a):
    """Basis (as columns) of the Jacobson radical.

    Graded-presented algebras use the span of positive-degree classes;
    otherwise the radical of the trace form of the left regular
    representation (valid in characteristic 0 or p > dim).  The result is
    verified: nilpotent, a two-sided ideal, and with semisimple quotient.
    """
    if a._radical is not None:
        return a._radical
    d = a.dim
    if a.grading is not None:
        cols = [a.basis_vector(i) for i in range(d) if a.grading[i] > 0]
        j_cols = Matrix.from_columns(a.field, cols, rows=d)
    else:
        if not a.field.is_rational and a.field.p <= d:
            raise UnsupportedField(
                f"trace-form radical needs characteristic 0 or p > dim, got p={a.field.p}"
            )
        tr = [sum(a.left_mult(i)[k, k] for k in range(d)) for i in range(d)]
        gram = []
        for i in range(d):
            row = []
            for j in range(d):
                val = sum(c * tr[k] for k, c in enumerate(a.mul[i][j]) if c)
                if not a.field.is_rational:
                    val %= a.field.p
                row.append(val)
            gram.append(row)
        j_cols = rref(Matrix.from_rows(a.field, gram, cols=d)).kernel_basis
    _verify_radical(a, j_cols)
    a._radical = j_cols
    return j_cols


def primitive_idempotents(a):
    """The stored complete orthogonal idempotent set, validated primitive.

    Primitivity is certified cornerwise: rad(eAe) = eJe must have
    codimension exactly one in eAe.
    """
    j_cols = radical(a)
    d = a.dim
    for s, e in enumerate(a.idempotents):
        corner_gens = [
            a.multiply(a.multiply(e, a.basis_vector(i)), e) for i in range(d)
        ]
        corner = rank(Matrix.from_columns(a.field, corner_gens, rows=d))
        corner_rad_gens = [
            a.multiply(a.multiply(e, tuple(j)), e) for j in j_cols.columns()
        ]
        corner_rad = (
            rank(Matrix.from_columns(a.field, corner_rad_gens, rows=d))
            if corner_rad_gens
            else 0
        )
        if corner - corner_rad != 1:
            raise NotPrimitive(
                s,
                f"corner algebra of idempotent {s} has top of dimension {corner - corner_rad}",
            )
    return [tuple(e) for e in a.idempotents]


def opposite(a):
    """The opposite algebra: mul_op[i][j] = mul[j][i]; an involution."""
    if a._opposite is not None:
        return a._opposite
    d = a.dim
    mul_op = tuple(tuple(a.mul[j][i] for j in range(d)) for i in range(d))
    pres = a.presentation
    if isinstance(pres, OppositePresentation):
        op_pres = pres.inner
    elif pres is not None:
        op_pres = OppositePresentation(pres)
    else:
        op_pres = None
    # generator words multiply in reversed order on the opposite side
    words = (
        tuple(tuple(reversed(w)) for w in a.basis_words)
        if a.basis_words is not None
        else None
    )
    op = Algebra(
        a.field,
        a.basis_labels,
        mul_op,
        a.one,
        a.idempotents,
        grading=a.grading,
        presentation=op_pres,
        basis_words=words,
        check=True,
    )
    op._opposite = a
    a._opposite = op
    return op
