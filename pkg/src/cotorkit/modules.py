"""Finite-dimensional module and bimodule representations.

A Module stores one action matrix per algebra basis element; a right
module is the same data read as a left module over the opposite algebra
(the law checked against the swapped table), so every algorithm downstream
works on `acting_algebra()` and never branches on the side.

Hom spaces are computed from minimal projective presentations: Hom(M, N)
is the kernel of the induced map Hom(P0, N) -> Hom(P1, N), where
Hom(of a direct sum of A e's, N) collapses to the subspaces e N.  That
keeps every linear system small even when the ambient intertwiner system
would be large.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import Algebra, opposite, primitive_idempotents, radical
from .linalg import (
    CoordinateSolver,
    Matrix,
    block_diagonal,
    column_space_basis,
    kernel_basis,
    kronecker,
    rank,
    rref,
    solve,
)


class ModuleError(ValueError):
    pass


class RelationViolated(ModuleError):
    def __init__(self, witness, msg):
        self.witness = witness
        super().__init__(msg)


class NotUnital(ModuleError):
    pass


class SideMismatch(ModuleError):
    pass


LEFT = "left"
RIGHT = "right"


class Module:
    """A finite-dimensional left or right module over a validated Algebra."""

    __slots__ = ("algebra", "side", "dim", "action", "proj_summands", "meta", "_cache")

    def __init__(self, algebra, side, dim, action, check=True, proj_summands=None, meta=None):
        if side not in (LEFT, RIGHT):
            raise ModuleError(f"bad side {side!r}")
        self.algebra = algebra
        self.side = side
        self.dim = dim
        self.action = tuple(action)
        self.proj_summands = proj_summands
        self.meta = meta
        self._cache = {}
        if len(self.action) != algebra.dim:
            raise ModuleError("need one action matrix per algebra basis element")
        for m in self.action:
            if m.rows != dim or m.cols != dim:
                raise ModuleError("action matrix has wrong shape")
        if check:
            self._validate()

    def _mul_entry(self, i, j):
        return self.algebra.mul[i][j] if self.side == LEFT else self.algebra.mul[j][i]

    def _validate(self):
        a = self.algebra
        d = a.dim
        ident = Matrix.identity(a.field, self.dim)
        acted = Matrix.zeros(a.field, self.dim, self.dim)
        for i, c in enumerate(a.one):
            if c:
                acted = acted + self.action[i].scale(c)
        if acted != ident:
            raise NotUnital("identity does not act as the identity matrix")
        for i in range(d):
            for j in range(d):
                lhs = self.action[i] * self.action[j]
                rhs = Matrix.zeros(a.field, self.dim, self.dim)
                for k, c in enumerate(self._mul_entry(i, j)):
                    if c:
                        rhs = rhs + self.action[k].scale(c)
                if lhs != rhs:
                    raise RelationViolated(
                        (a.basis_labels[i], a.basis_labels[j]),
                        f"action violates the multiplication law at "
                        f"({a.basis_labels[i]}, {a.basis_labels[j]})",
                    )

    def acting_algebra(self):
        """The algebra over which the action matrices are a left representation."""
        return self.algebra if self.side == LEFT else opposite(self.algebra)

    def action_of(self, coeffs):
        field = self.algebra.field
        terms = [(i, c) for i, c in enumerate(coeffs) if c]
        if not terms:
            return Matrix.zeros(field, self.dim, self.dim)
        if len(terms) == 1 and terms[0][1] == field.one():
            return self.action[terms[0][0]]
        z = field.zero()
        out = [[z] * self.dim for _ in range(self.dim)]
        for i, c in terms:
            data = self.action[i].data
            for r in range(self.dim):
                row = data[r]
                orow = out[r]
                for col in range(self.dim):
                    v = row[col]
                    if v:
                        orow[col] += c * v
        if not field.is_rational:
            p = field.p
            out = [[x % p for x in row] for row in out]
        return Matrix(field, self.dim, self.dim, tuple(tuple(r) for r in out))

    def is_zero(self):
        return self.dim == 0

    @property
    def field(self):
        return self.algebra.field

    def __eq__(self, other):
        return (
            isinstance(other, Module)
            and self.algebra == other.algebra
            and self.side == other.side
            and self.action == other.action
        )

    def __hash__(self):
        return hash((self.algebra, self.side, self.action))

    def __repr__(self):
        return f"Module(dim={self.dim}, side={self.side}, over {self.algebra!r})"


def zero_module(algebra, side=LEFT):
    z = Matrix.zeros(algebra.field, 0, 0)
    return Module(algebra, side, 0, [z] * algebra.dim, check=False)


def retag_left_over_opposite(m):
    """Read a right A-module as a left module over A^op (same matrices)."""
    if m.side == LEFT:
        raise SideMismatch("module is already a left module")
    key = "retag"
    if key not in m._cache:
        m._cache[key] = Module(
            opposite(m.algebra), LEFT, m.dim, m.action, check=False,
            proj_summands=m.proj_summands,
        )
    return m._cache[key]


class ModuleHom:
    """An intertwining map between modules over the same algebra and side."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source, target, matrix, check=True):
        if source.algebra != target.algebra or source.side != target.side:
            raise SideMismatch("hom between modules over different algebras or sides")
        if matrix.rows != target.dim or matrix.cols != source.dim:
            raise ModuleError(
                f"hom matrix is {matrix.rows}x{matrix.cols}, expected {target.dim}x{source.dim}"
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            for i in range(source.algebra.dim):
                if matrix * source.action[i] != target.action[i] * matrix:
                    raise ModuleError(
                        f"matrix does not intertwine basis element "
                        f"{source.algebra.basis_labels[i]}"
                    )

    @staticmethod
    def identity(m):
        return ModuleHom(m, m, Matrix.identity(m.field, m.dim), check=False)

    @staticmethod
    def zero(source, target):
        return ModuleHom(
            source, target, Matrix.zeros(source.field, target.dim, source.dim), check=False
        )

    def compose(self, other):
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise ModuleError("composition mismatch")
        return ModuleHom(other.source, self.target, self.matrix * other.matrix, check=False)

    def __add__(self, other):
        return ModuleHom(self.source, self.target, self.matrix + other.matrix, check=False)

    def rank(self):
        return rank(self.matrix)

    def is_epi(self):
        return self.rank() == self.target.dim

    def is_mono(self):
        return self.rank() == self.source.dim

    def is_iso(self):
        return self.source.dim == self.target.dim and self.is_epi()

    def __repr__(self):
        return f"ModuleHom({self.source.dim} -> {self.target.dim})"


# -- construction from generators -----------------------------------------


def _word_matrix(gens, word, side, field, dim):
    m = Matrix.identity(field, dim)
    seq = word if side == LEFT else tuple(reversed(word))
    for name in seq:
        m = m * gens[name]
    return m


def make_module(a, generators, side=LEFT, dim=None):
    """Build and validate a module from matrices for the presentation generators.

    The action is extended multiplicatively to the full basis along each
    basis element's generator word (reversed for right modules), then the
    whole table law is re-verified.
    """
    pres = a.presentation
    if pres is None or a.basis_words is None:
        raise ModuleError("algebra carries no presentation; cannot extend generators")
    if pres.kind == "opposite":
        raise ModuleError(
            "make_module over an opposite algebra is unsupported; "
            "build over the base algebra with side='right'"
        )
    names = pres.generator_names()
    missing = [n for n in names if n not in generators]
    if missing:
        raise ModuleError(f"missing generator matrices: {missing}")
    field = a.field
    if dim is None:
        some = generators[names[0]]
        dim = some.rows
    gens = {}
    for n in names:
        g = generators[n]
        if g.rows != dim or g.cols != dim:
            raise ModuleError(f"generator {n!r} has shape {g.rows}x{g.cols}, expected {dim}x{dim}")
        gens[n] = g

    if pres.kind == "quiver":
        ident = Matrix.identity(field, dim)
        total = Matrix.zeros(field, dim, dim)
        for v in pres.vertices:
            ev = gens[v]
            if ev * ev != ev:
                raise RelationViolated((v,), f"vertex matrix {v!r} is not idempotent")
            total = total + ev
        if total != ident:
            raise NotUnital("vertex matrices do not sum to the identity")
        for u in pres.vertices:
            for v in pres.vertices:
                if u != v and not (gens[u] * gens[v]).is_zero():
                    raise RelationViolated((u, v), f"vertex matrices {u!r}, {v!r} not orthogonal")
        for arr in pres.arrows:
            g = gens[arr.name]
            left, right = (arr.src, arr.tgt) if side == LEFT else (arr.tgt, arr.src)
            if gens[left] * g != g or g * gens[right] != g:
                raise RelationViolated(
                    (arr.name,), f"arrow {arr.name!r} incompatible with its endpoint idempotents"
                )
        for rel in pres.relations:
            acc = Matrix.zeros(field, dim, dim)
            for coeff, path in rel:
                acc = acc + _word_matrix(gens, path, side, field, dim).scale(coeff)
            if not acc.is_zero():
                raise RelationViolated(rel, f"relation {rel} does not act as zero")
    elif pres.kind == "commutative":
        for i, u in enumerate(pres.vars):
            for v in pres.vars[i + 1 :]:
                if gens[u] * gens[v] != gens[v] * gens[u]:
                    raise RelationViolated((u, v), f"generators {u!r}, {v!r} do not commute")
        for rel in pres.relations:
            acc = Matrix.zeros(field, dim, dim)
            for coeff, mono in rel:
                word = []
                for v, e in zip(pres.vars, mono):
                    word.extend([v] * e)
                acc = acc + _word_matrix(gens, tuple(word), side, field, dim).scale(coeff)
            if not acc.is_zero():
                raise RelationViolated(rel, f"relation {rel} does not act as zero")

    action = [
        _word_matrix(gens, a.basis_words[i], side, field, dim) for i in range(a.dim)
    ]
    return Module(a, side, dim, action, check=True)


# -- structural modules ----------------------------------------------------


@dataclass(frozen=True)
class ProjSummand:
    """One A e_v summand of a projective module.

    embedding: columns give the summand's basis inside the big module;
    alg_coords: the same basis vectors as elements of the algebra;
    gen_coords: coordinates (in the summand basis) of the idempotent e_v,
    the canonical generator.
    """

    e_index: int
    embedding: Matrix
    alg_coords: tuple
    gen_coords: tuple


@dataclass
class StructuralModules:
    regular: Module
    projectives: list
    simples: list
    inclusions: list  # projective -> regular
    covers: list  # projective -> simple projections


def structural_modules(a):
    """Regular module, indecomposable projectives A e, and their tops."""
    if "struct" in a._cache:
        return a._cache["struct"]
    primitive_idempotents(a)  # validates; raises if the stored set is bad
    d = a.dim
    regular = Module(a, LEFT, d, [a.left_mult(i) for i in range(d)], check=True)
    projectives = []
    inclusions = []
    simples = []
    covers = []
    total = 0
    for e_idx, e in enumerate(a.idempotents):
        cols = column_space_basis(a.right_mult_of(e))
        sub, incl = submodule(regular, cols)
        gen = CoordinateSolver(cols).coords(Matrix.column(a.field, list(e)))
        sub.proj_summands = (
            ProjSummand(
                e_idx,
                Matrix.identity(a.field, sub.dim),
                tuple(tuple(c) for c in cols.columns()),
                tuple(gen.col(0)),
            ),
        )
        projectives.append(sub)
        inclusions.append(incl)
        total += sub.dim
        top, pr = top_of(sub)
        simples.append(top)
        covers.append(pr)
    assert total == d, "projectives do not exhaust the regular module"
    result = StructuralModules(regular, projectives, simples, inclusions, covers)
    regular.proj_summands = tuple(
        ProjSummand(
            s.proj_summands[0].e_index,
            inclusions[i].matrix,
            s.proj_summands[0].alg_coords,
            s.proj_summands[0].gen_coords,
        )
        for i, s in enumerate(projectives)
    )
    a._cache["struct"] = result
    return result


def radical_subspace(m):
    """Columns spanning J*M inside M (J of the acting algebra)."""
    acting = m.acting_algebra()
    j = radical(acting)
    if j.cols == 0 or m.dim == 0:
        return Matrix.zeros(m.field, m.dim, 0)
    stacked = None
    for jc in j.columns():
        mat = m.action_of(jc)
        stacked = mat if stacked is None else stacked.hstack(mat)
    return column_space_basis(stacked)


def socle_subspace(m):
    """Columns spanning soc M = the annihilator of J in M."""
    acting = m.acting_algebra()
    j = radical(acting)
    if j.cols == 0 or m.dim == 0:
        return Matrix.identity(m.field, m.dim)
    stacked = None
    for jc in j.columns():
        mat = m.action_of(jc)
        stacked = mat if stacked is None else stacked.vstack(mat)
    return kernel_basis(stacked)


def top_of(m):
    """The semisimple quotient M / J M with its projection."""
    return quotient_module(m, radical_subspace(m))


# -- sub/quotient machinery -------------------------------------------------


def submodule(m, cols, check=True):
    """The submodule spanned by the given (invariant) columns, with inclusion.

    check controls the invariance verification; the module law itself is
    inherited from m once invariance holds, so it is not re-verified.
    """
    if cols.cols == 0:
        sub = zero_module(m.algebra, m.side)
        return sub, ModuleHom(sub, m, Matrix.zeros(m.field, m.dim, 0), check=False)
    solver = CoordinateSolver(cols)
    acts = []
    for i in range(m.algebra.dim):
        acts.append(solver.coords(m.action[i] * cols, check=check))
    sub = Module(m.algebra, m.side, cols.cols, acts, check=False)
    return sub, ModuleHom(sub, m, cols, check=False)


def quotient_module(m, cols, check=True):
    """The quotient of m by the (invariant) column span, with projection.

    Well-definedness of the action is always verified (the projection must
    kill the subspace after acting); the quotient law is then inherited.
    """
    r = cols.cols
    if r == 0:
        return m, ModuleHom.identity(m)
    piv = set(rref(cols.transpose()).pivot_cols)
    comp = [i for i in range(m.dim) if i not in piv]
    q = len(comp)
    if q == 0:
        zm = zero_module(m.algebra, m.side)
        return zm, ModuleHom(m, zm, Matrix.zeros(m.field, 0, m.dim), check=False)
    lift = Matrix.from_columns(
        m.field, [tuple(m.field.one() if k == i else m.field.zero() for k in range(m.dim)) for i in comp],
        rows=m.dim,
    )
    inverse = CoordinateSolver(cols.hstack(lift)).left_inverse
    proj = Matrix(m.field, q, m.dim, inverse.data[r:])
    acts = []
    for i in range(m.algebra.dim):
        if not (proj * (m.action[i] * cols)).is_zero():
            raise ModuleError("subspace is not invariant; quotient action undefined")
        acts.append(proj * (m.action[i] * lift))
    quot = Module(m.algebra, m.side, q, acts, check=False)
    return quot, ModuleHom(m, quot, proj, check=False)


@dataclass
class Subquotients:
    kernel: Module
    kernel_inclusion: ModuleHom
    image: Module
    image_inclusion: ModuleHom
    image_projection: ModuleHom  # source ->> image
    cokernel: Module
    cokernel_projection: ModuleHom


def subquotients(h):
    """Kernel, image, cokernel of a hom, each with its canonical map."""
    ker_cols = kernel_basis(h.matrix)
    kernel, ker_incl = submodule(h.source, ker_cols)
    img_cols = column_space_basis(h.matrix)
    image, img_incl = submodule(h.target, img_cols)
    if image.dim:
        proj_mat = CoordinateSolver(img_cols).coords(h.matrix, check=True)
    else:
        proj_mat = Matrix.zeros(h.source.field, 0, h.source.dim)
    img_proj = ModuleHom(h.source, image, proj_mat)
    cokernel, cok_proj = quotient_module(h.target, img_cols)
    assert kernel.dim + image.dim == h.source.dim
    assert image.dim + cokernel.dim == h.target.dim
    assert img_incl.matrix * img_proj.matrix == h.matrix
    return Subquotients(kernel, ker_incl, image, img_incl, img_proj, cokernel, cok_proj)


# -- duality -----------------------------------------------------------------


def matlis_dual(m):
    """The linear dual with transposed actions and swapped side.

    Cached on the module so resolution caches hung off the dual survive.
    """
    if "matlis" not in m._cache:
        other = RIGHT if m.side == LEFT else LEFT
        m._cache["matlis"] = Module(
            m.algebra, other, m.dim, [x.transpose() for x in m.action], check=False
        )
    return m._cache["matlis"]


def dual_hom(h):
    """D is contravariant: a hom M -> N dualizes to D(N) -> D(M)."""
    return ModuleHom(
        matlis_dual(h.target), matlis_dual(h.source), h.matrix.transpose(), check=False
    )


# -- direct sums --------------------------------------------------------------


def direct_sum(ms, algebra=None, side=LEFT):
    """Block-diagonal sum with validated injections and projections."""
    ms = list(ms)
    if ms:
        algebra = ms[0].algebra
        side = ms[0].side
        for m in ms:
            if m.algebra != algebra or m.side != side:
                raise SideMismatch("direct sum of modules over different algebras/sides")
    elif algebra is None:
        raise ModuleError("empty direct sum needs an explicit algebra")
    field = algebra.field
    if not ms:
        z = zero_module(algebra, side)
        return z, [], []
    total = sum(m.dim for m in ms)
    acts = [
        block_diagonal(field, [m.action[i] for m in ms]) for i in range(algebra.dim)
    ]
    summ = None
    if all(m.proj_summands is not None for m in ms):
        summ = []
    big = Module(algebra, side, total, acts, check=False)
    injections = []
    projections = []
    offset = 0
    for m in ms:
        z1 = Matrix.zeros(field, offset, m.dim)
        z2 = Matrix.zeros(field, total - offset - m.dim, m.dim)
        inj = z1.vstack(Matrix.identity(field, m.dim)).vstack(z2)
        injections.append(ModuleHom(m, big, inj, check=False))
        proj = Matrix.zeros(field, m.dim, offset).hstack(Matrix.identity(field, m.dim)).hstack(
            Matrix.zeros(field, m.dim, total - offset - m.dim)
        )
        projections.append(ModuleHom(big, m, proj, check=False))
        if summ is not None:
            for ps in m.proj_summands:
                summ.append(
                    ProjSummand(
                        ps.e_index, inj * ps.embedding, ps.alg_coords, ps.gen_coords
                    )
                )
        offset += m.dim
    if summ is not None:
        big.proj_summands = tuple(summ)
    return big, injections, projections


def free_module(a, copies):
    """A^copies as a left module, with projective-summand bookkeeping."""
    struct = structural_modules(a)
    summands = []
    for _ in range(copies):
        summands.extend(struct.projectives)
    big, _, _ = direct_sum(summands, algebra=a)
    return big


def free_module_hom(source, target, entries, algebra):
    """Map of free left modules given by a matrix of algebra elements.

    entries[i][j] is a coefficient vector; the block (i, j) acts by right
    multiplication, which is what left-linearity demands.
    """
    n = len(entries)
    m = len(entries[0]) if n else 0
    d = algebra.dim
    blocks = [[algebra.right_mult_of(entries[i][j]) for j in range(m)] for i in range(n)]
    z = algebra.field.zero()
    rows = n * d
    cols = m * d
    out = [[z] * cols for _ in range(rows)]
    for i in range(n):
        for j in range(m):
            b = blocks[i][j]
            for r in range(d):
                for c in range(d):
                    out[i * d + r][j * d + c] = b[r, c]
    mat = Matrix(algebra.field, rows, cols, tuple(tuple(r) for r in out))
    return ModuleHom(source, target, mat)


# -- hom spaces via presentations ---------------------------------------------


class _HomData:
    """Coordinate machinery for Hom(P, N) with P a direct sum of A e's.

    A coordinate vector is the concatenation over summands of coordinates
    in the subspaces e N; emb_inverse decomposes elements of P back into
    summand components.
    """

    __slots__ = ("p", "n", "pieces", "emb_inverse", "total", "_act_mats")

    def __init__(self, p, n):
        if p.proj_summands is None:
            raise ModuleError("module lacks projective summand data")
        field = n.field
        acting = n.acting_algebra()
        self.p = p
        self.n = n
        self.pieces = []
        self.total = 0
        for ps in p.proj_summands:
            e = acting.idempotents[ps.e_index]
            en_basis = column_space_basis(n.action_of(e))
            solver = CoordinateSolver(en_basis) if en_basis.cols else None
            self.pieces.append((ps, en_basis, solver))
            self.total += en_basis.cols
        emb_total = None
        for ps, _, _ in self.pieces:
            emb_total = ps.embedding if emb_total is None else emb_total.hstack(ps.embedding)
        if p.dim and emb_total is not None:
            self.emb_inverse = solve(emb_total, Matrix.identity(field, p.dim))
            assert self.emb_inverse is not None, "summand embeddings do not span"
        else:
            self.emb_inverse = Matrix.zeros(field, 0, 0)
        self._act_mats = None

    def _action_matrices(self):
        # one rho_N(basis vector of summand) per summand basis element; lazy
        if self._act_mats is None:
            self._act_mats = [
                [self.n.action_of(c) for c in ps.alg_coords] for ps, _, _ in self.pieces
            ]
        return self._act_mats

    def decompose(self, vec):
        """Summand components of an element of P, stacked."""
        return self.emb_inverse * vec

    def summand_element(self, s, comps):
        """The algebra element realizing summand-s components of a decomposition."""
        field = self.n.field
        at = sum(len(self.pieces[t][0].alg_coords) for t in range(s))
        ps = self.pieces[s][0]
        k = len(ps.alg_coords)
        d = len(ps.alg_coords[0]) if k else 0
        out = [field.zero()] * d
        for r in range(k):
            c = comps[at + r, 0]
            if c:
                for idx, a in enumerate(ps.alg_coords[r]):
                    if a:
                        out[idx] += c * a
        if d and not field.is_rational:
            out = [v % field.p for v in out]
        return tuple(out)

    def to_matrix(self, coords):
        """Coordinate vector -> the full matrix P -> N."""
        field = self.n.field
        acts = self._action_matrices()
        cols_blocks = []
        at = 0
        for (ps, en_basis, _), mats in zip(self.pieces, acts):
            k = en_basis.cols
            x = Matrix.zeros(field, self.n.dim, 1)
            if k:
                sub = Matrix.from_rows(field, [[coords[at + t]] for t in range(k)], cols=1)
                x = en_basis * sub
            at += k
            for mat in mats:
                cols_blocks.append((mat * x).col(0))
        if not cols_blocks:
            return Matrix.zeros(field, self.n.dim, self.p.dim)
        on_summands = Matrix.from_columns(field, cols_blocks, rows=self.n.dim)
        return on_summands * self.emb_inverse

    def of_matrix(self, mat):
        """Full matrix P -> N (assumed a hom) -> coordinate vector."""
        field = self.n.field
        out = []
        for ps, en_basis, solver in self.pieces:
            gen_in_p = ps.embedding * Matrix.column(field, list(ps.gen_coords))
            val = mat * gen_in_p
            if en_basis.cols:
                out.extend(solver.coords(val).col(0))
            else:
                assert val.is_zero()
        return tuple(out)


def hom_from_projective(p, n):
    return _HomData(p, n)


def induced_hom_matrix(d, prev, nxt):
    """Matrix of Hom(P_prev, N) -> Hom(P_next, N), phi -> phi o d.

    Assembled blockwise: the (s, t) block sends e_t N-coordinates through
    rho_N(u) for the algebra element u = component in summand t of
    d(generator of summand s).
    """
    n = prev.n
    field = n.field
    z = field.zero()
    out = [[z] * prev.total for _ in range(nxt.total)]
    row_at = 0
    for ps_s, en_s, solver_s in nxt.pieces:
        if en_s.cols == 0:
            continue
        gen_in_p = ps_s.embedding * Matrix.column(field, list(ps_s.gen_coords))
        v = d.matrix * gen_in_p
        comps = prev.decompose(v)
        col_at = 0
        for t, (ps_t, en_t, _) in enumerate(prev.pieces):
            if en_t.cols:
                u = prev.summand_element(t, comps)
                if any(u):
                    block = solver_s.coords(n.action_of(u) * en_t)
                    for i in range(en_s.cols):
                        for j in range(en_t.cols):
                            x = block[i, j]
                            if x:
                                out[row_at + i][col_at + j] = x
            col_at += en_t.cols
        row_at += en_s.cols
    return Matrix(field, nxt.total, prev.total, tuple(tuple(r) for r in out))


def induced_tensor_matrix(d, src, tgt):
    """Matrix of 1 (x) d : x (x) P_src -> x (x) P_tgt for d: P_src -> P_tgt.

    src and tgt are hom_from_projective(P, x) data for a right module x:
    the pieces are then the subspaces x e, which are exactly the
    coordinates of x (x) A e.
    """
    x = src.n
    field = x.field
    z = field.zero()
    out = [[z] * src.total for _ in range(tgt.total)]
    col_at = 0
    for ps_s, xe_s, _ in src.pieces:
        if xe_s.cols:
            gen_in_p = ps_s.embedding * Matrix.column(field, list(ps_s.gen_coords))
            v = d.matrix * gen_in_p
            comps = tgt.decompose(v)
            row_at = 0
            for t, (ps_t, xe_t, solver_t) in enumerate(tgt.pieces):
                if xe_t.cols:
                    u = tgt.summand_element(t, comps)
                    if any(u):
                        block = solver_t.coords(x.action_of(u) * xe_s)
                        for i in range(xe_t.cols):
                            for j in range(xe_s.cols):
                                val = block[i, j]
                                if val:
                                    out[row_at + i][col_at + j] = val
                row_at += xe_t.cols
        col_at += xe_s.cols
    return Matrix(field, tgt.total, src.total, tuple(tuple(r) for r in out))


def minimal_presentation(m):
    """Minimal projective presentation P1 -> P0 -> m -> 0 plus a linear section."""
    if "presentation" in m._cache:
        return m._cache["presentation"]
    p0, eps = projective_cover(m)
    ker_cols = kernel_basis(eps.matrix)
    ker, ker_incl = submodule(p0, ker_cols)
    p1, eps1 = projective_cover(ker)
    d = ker_incl.compose(eps1)
    if m.dim:
        section = solve(eps.matrix, Matrix.identity(m.field, m.dim))
        assert section is not None
    else:
        section = Matrix.zeros(m.field, p0.dim, 0)
    pres = (p0, eps, p1, d, section)
    m._cache["presentation"] = pres
    return pres


def projective_cover(m):
    """Projective cover: P = (+) (A e)^(mult in top of m) with its epi."""
    if "cover" in m._cache:
        return m._cache["cover"]
    acting = m.acting_algebra()
    struct = structural_modules(acting)
    field = m.field
    if m.dim == 0:
        p = zero_module(m.algebra, m.side)
        p.proj_summands = ()
        result = (p, ModuleHom(p, m, Matrix.zeros(field, 0, 0), check=False))
        m._cache["cover"] = result
        return result
    top, top_proj = top_of(m)
    if top.dim:
        section = solve(top_proj.matrix, Matrix.identity(field, top.dim))
    summands = []
    gens = []
    for e_idx, e in enumerate(acting.idempotents):
        etop = column_space_basis(top.action_of(e))
        for t in range(etop.cols):
            lifted = m.action_of(e) * (section * etop.submatrix_columns([t]))
            summands.append(struct.projectives[e_idx])
            gens.append(lifted)
    p_raw, injs, _ = direct_sum(summands, algebra=acting)
    cols = []
    for s, g in enumerate(gens):
        ps = p_raw.proj_summands[s]
        for c in ps.alg_coords:
            cols.append((m.action_of(c) * g).col(0))
    epi_raw = Matrix.from_columns(field, cols, rows=m.dim) if cols else Matrix.zeros(field, m.dim, 0)
    # p_raw was assembled over the acting algebra; retag to m's algebra/side
    if m.side == LEFT:
        p = p_raw
    else:
        p = Module(m.algebra, RIGHT, p_raw.dim, p_raw.action, check=False,
                   proj_summands=p_raw.proj_summands)
    # evaluation at lifted top generators intertwines by construction
    epi = ModuleHom(p, m, epi_raw, check=False)
    assert epi.is_epi(), "cover is not surjective"
    jp = radical_subspace(p)
    ker = kernel_basis(epi.matrix)
    assert rank(jp.hstack(ker)) == rank(jp), "cover kernel not superfluous"
    result = (p, epi)
    m._cache["cover"] = result
    return result


def hom_space(m, n):
    """A basis of Hom(m, n) as validated ModuleHoms.

    Computed as the kernel of Hom(P0, n) -> Hom(P1, n) over a minimal
    presentation of m, then pushed down along the section of P0 ->> m.
    """
    if m.algebra != n.algebra or m.side != n.side:
        raise SideMismatch("hom between modules over different algebras or sides")
    if m.dim == 0 or n.dim == 0:
        return []
    p0, _eps, _p1, d, section = minimal_presentation(m)
    data0 = hom_from_projective(p0, n)
    data1 = hom_from_projective(d.source, n)
    if data0.total == 0:
        return []
    induced = induced_hom_matrix(d, data0, data1)
    ker = kernel_basis(induced)
    homs = []
    for t in range(ker.cols):
        mat = data0.to_matrix(ker.col(t)) * section
        homs.append(ModuleHom(m, n, mat, check=True))
    return homs


def hom_dense_oracle(m, n):
    """Brute-force intertwiner solve; used to cross-check hom_space."""
    if m.dim == 0 or n.dim == 0:
        return []
    field = m.field
    rows = []
    ident_n = Matrix.identity(field, n.dim)
    ident_m = Matrix.identity(field, m.dim)
    for i in range(m.algebra.dim):
        # vec(T A - B T) = (A^t (x) I - I (x) B) vec(T)
        block = kronecker(m.action[i].transpose(), ident_n) - kronecker(ident_m, n.action[i])
        rows.extend(block.data)
    big = Matrix(field, len(rows), n.dim * m.dim, tuple(rows))
    ker = kernel_basis(big)
    homs = []
    for t in range(ker.cols):
        col = ker.col(t)
        mat = Matrix(
            field,
            n.dim,
            m.dim,
            tuple(
                tuple(col[j * n.dim + i] for j in range(m.dim)) for i in range(n.dim)
            ),
        )
        homs.append(ModuleHom(m, n, mat, check=True))
    return homs


# -- bimodules -----------------------------------------------------------------


class Bimodule:
    """An (R, S)-bimodule: commuting left R-action and right S-action."""

    __slots__ = ("left_algebra", "right_algebra", "dim", "left_action", "right_action", "_cache")

    def __init__(self, left_algebra, right_algebra, dim, left_action, right_action, check=True):
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        self.dim = dim
        self.left_action = tuple(left_action)
        self.right_action = tuple(right_action)
        self._cache = {}
        if check:
            self.left_module()
            self.right_module()
            for l in self.left_action:
                for r in self.right_action:
                    if l * r != r * l:
                        raise ModuleError("left and right actions do not commute")

    def left_module(self):
        if "left" not in self._cache:
            self._cache["left"] = Module(
                self.left_algebra, LEFT, self.dim, self.left_action, check=True
            )
        return self._cache["left"]

    def right_module(self):
        if "right" not in self._cache:
            self._cache["right"] = Module(
                self.right_algebra, RIGHT, self.dim, self.right_action, check=True
            )
        return self._cache["right"]

    @property
    def field(self):
        return self.left_algebra.field

    def __repr__(self):
        return f"Bimodule(dim={self.dim})"


def regular_bimodule(a):
    return Bimodule(
        a, a, a.dim,
        [a.left_mult(i) for i in range(a.dim)],
        [a.right_mult(i) for i in range(a.dim)],
    )


def matlis_dual_bimodule(c):
    """D of an (R,S)-bimodule is an (S,R)-bimodule with transposed actions."""
    return Bimodule(
        c.right_algebra,
        c.left_algebra,
        c.dim,
        [x.transpose() for x in c.right_action],
        [x.transpose() for x in c.left_action],
    )


def matlis_bimodule(a):
    """D(A) as an (A, A)-bimodule: the canonical injective cogenerator."""
    return matlis_dual_bimodule(regular_bimodule(a))


@dataclass
class HomModuleMeta:
    """Remembers the hom basis behind a Hom(C, M) / Hom(M, C) module."""

    basis: list  # of Matrix
    solver: CoordinateSolver  # against vectorized basis
    variant: str

    def coords_of(self, mat):
        vec = Matrix.column(
            self.solver.basis.field, [x for row in mat.data for x in row]
        )
        return self.solver.coords(vec)


def _vectorize(mats, field, rows_cols):
    cols = [[x for row in m.data for x in row] for m in mats]
    return Matrix.from_columns(field, cols, rows=rows_cols)


def hom_module(c, m, variant):
    """Hom against one side of a bimodule, with the induced outer action.

    variant "ApplyLeft": Hom(C, m); "IntoLeft": Hom(m, C).  For left
    R-modules these carry a left, resp. right, S-structure; for right
    S-modules a right, resp. left, R-structure.
    """
    if variant not in ("ApplyLeft", "IntoLeft"):
        raise ModuleError(f"unknown hom_module variant {variant!r}")
    if m.side == LEFT:
        if m.algebra != c.left_algebra:
            raise SideMismatch("left module is not over the bimodule's left algebra")
        cmod = c.left_module()
        outer_algebra = c.right_algebra
        outer_action = c.right_action
        outer_side = LEFT if variant == "ApplyLeft" else RIGHT
    else:
        if m.algebra != c.right_algebra:
            raise SideMismatch("right module is not over the bimodule's right algebra")
        cmod = c.right_module()
        outer_algebra = c.left_algebra
        outer_action = c.left_action
        outer_side = RIGHT if variant == "ApplyLeft" else LEFT

    if variant == "ApplyLeft":
        basis = hom_space(cmod, m)
        shape = m.dim * c.dim
    else:
        basis = hom_space(m, cmod)
        shape = c.dim * m.dim
    k = len(basis)
    field = m.field
    vec = _vectorize([h.matrix for h in basis], field, shape) if k else Matrix.zeros(field, shape, 0)
    solver = CoordinateSolver(vec) if k else None
    acts = []
    for i in range(outer_algebra.dim):
        cols = []
        for h in basis:
            if variant == "ApplyLeft":
                # (s.f)(c) = f(c.s) on the left side; (f.r)(c) = f(r.c) on the right
                moved = h.matrix * outer_action[i]
            else:
                # (f.s)(x) = f(x).s, resp. (r.g)(x) = r.g(x)
                moved = outer_action[i] * h.matrix
            cols.append([x for row in moved.data for x in row])
        if k:
            acts.append(solver.coords(Matrix.from_columns(field, cols, rows=shape)))
        else:
            acts.append(Matrix.zeros(field, 0, 0))
    meta = HomModuleMeta([h.matrix for h in basis], solver, variant) if k else HomModuleMeta([], None, variant)
    out = Module(outer_algebra, outer_side, k, acts, check=True, meta=meta)
    return out


# -- tensor products ------------------------------------------------------------


@dataclass
class TensorSpace:
    """x (x)_S n presented as a quotient of the full k-tensor space.

    projection maps the full space (index i*dim_n + j) onto quotient
    coordinates; section splits it.  module is the induced left module
    when x was a bimodule, else a plain dimension marker.
    """

    dim: int
    projection: Matrix
    section: Matrix
    module: Module  # over the bimodule's left algebra, or None
    x_dim: int
    n_dim: int

    def induced_map(self, other, phi):
        """1 (x) phi : self -> other for phi between the right tensorands."""
        full = kronecker(Matrix.identity(phi.matrix.field, self.x_dim), phi.matrix)
        return other.projection * (full * self.section)


def tensor_module(x, n, check=True):
    """Tensor over S of a right S-module (or (R,S)-bimodule) with a left S-module."""
    if isinstance(x, Bimodule):
        xmod = x.right_module()
        bimodule = x
    else:
        xmod = x
        bimodule = None
        if xmod.side != RIGHT:
            raise SideMismatch("left tensorand must be a right module")
    if n.side != LEFT or n.algebra != xmod.algebra:
        raise SideMismatch("right tensorand must be a left module over the same algebra")
    field = n.field
    dx, dn = xmod.dim, n.dim
    N = dx * dn
    s_dim = xmod.algebra.dim
    rows = []
    for s in range(s_dim):
        xs = xmod.action[s]
        ns = n.action[s]
        for i in range(dx):
            for j in range(dn):
                row = [field.zero()] * N
                for k in range(dx):
                    v = xs[k, i]
                    if v:
                        row[k * dn + j] += v
                for l in range(dn):
                    v = ns[l, j]
                    if v:
                        row[i * dn + l] -= v
                if any(row):
                    rows.append(row)
    if rows:
        res = rref(Matrix.from_rows(field, rows, cols=N))
        pivots = list(res.pivot_cols)
        reduced = res.reduced
    else:
        pivots, reduced = [], None
    pivset = set(pivots)
    survivors = [i for i in range(N) if i not in pivset]
    q = len(survivors)
    surv_pos = {c: t for t, c in enumerate(survivors)}
    z = field.zero()
    proj_cols = []
    for idx in range(N):
        col = [z] * q
        if idx in pivset:
            krow = pivots.index(idx)
            row = reduced.data[krow]
            for f in survivors:
                v = row[f]
                if v:
                    col[surv_pos[f]] = -v if field.is_rational else (-v) % field.p
        else:
            col[surv_pos[idx]] = field.one()
        proj_cols.append(col)
    projection = Matrix.from_columns(field, proj_cols, rows=q)
    section = Matrix.from_columns(
        field,
        [[field.one() if k == f else z for k in range(N)] for f in survivors],
        rows=N,
    )
    module = None
    if bimodule is not None:
        acts = []
        ident = Matrix.identity(field, dn)
        for i in range(bimodule.left_algebra.dim):
            acts.append(projection * (kronecker(bimodule.left_action[i], ident) * section))
        module = Module(bimodule.left_algebra, LEFT, q, acts, check=check)
    return TensorSpace(q, projection, section, module, dx, dn)


# -- isomorphism testing ----------------------------------------------------------


@dataclass
class IsoResult:
    verdict: str  # "Isomorphic" | "NotIsomorphic" | "Undecided"
    witness: ModuleHom = None
    certificate: dict = None


def iso_test(m, n, rng=None):
    """Decide isomorphism at desk scale.

    NotIsomorphic when dims differ, hom dimensions differ, or the generic
    intertwiner determinant vanishes on 8 random samples plus dim+1
    structured points (over Q); over small prime fields the coefficient
    space is scanned exhaustively when feasible, else Undecided.
    """
    if rng is None:
        rng = random.Random(0)
    if m.algebra != n.algebra or m.side != n.side:
        raise SideMismatch("iso_test needs modules over the same algebra and side")
    if m.dim != n.dim:
        return IsoResult("NotIsomorphic", certificate={"reason": "dim", "dims": (m.dim, n.dim)})
    if m.dim == 0:
        return IsoResult("Isomorphic", witness=ModuleHom(m, n, Matrix.zeros(m.field, 0, 0), check=False))
    fwd = hom_space(m, n)
    bwd = hom_space(n, m)
    if len(fwd) != len(bwd):
        return IsoResult(
            "NotIsomorphic",
            certificate={"reason": "hom-dims", "hom_mn": len(fwd), "hom_nm": len(bwd)},
        )
    k = len(fwd)
    if k == 0:
        return IsoResult("NotIsomorphic", certificate={"reason": "hom-dims", "hom_mn": 0, "hom_nm": 0})
    field = m.field

    def combine(coeffs):
        mat = Matrix.zeros(field, n.dim, m.dim)
        for c, h in zip(coeffs, fwd):
            if c:
                mat = mat + h.matrix.scale(c)
        return mat

    trials = 0
    if field.is_rational:
        for _ in range(8):
            coeffs = [rng.randint(-10**6, 10**6) for _ in range(k)]
            trials += 1
            mat = combine(coeffs)
            if rank(mat) == m.dim:
                return IsoResult(
                    "Isomorphic",
                    witness=ModuleHom(m, n, mat),
                    certificate={"trials": trials},
                )
        # structured points: moment vectors (1, t, t^2, ...) for t = 1..dim+1
        for t in range(1, m.dim + 2):
            coeffs = [t**e for e in range(k)]
            trials += 1
            mat = combine(coeffs)
            if rank(mat) == m.dim:
                return IsoResult(
                    "Isomorphic", witness=ModuleHom(m, n, mat), certificate={"trials": trials}
                )
        return IsoResult(
            "NotIsomorphic",
            certificate={"reason": "determinant-identically-zero", "trials": trials},
        )
    p = m.field.p
    if p**k <= 4096:
        coeffs = [0] * k
        while True:
            mat = combine(coeffs)
            if rank(mat) == m.dim:
                return IsoResult("Isomorphic", witness=ModuleHom(m, n, mat))
            i = 0
            while i < k and coeffs[i] == p - 1:
                coeffs[i] = 0
                i += 1
            if i == k:
                return IsoResult(
                    "NotIsomorphic", certificate={"reason": "exhausted-coefficients"}
                )
            coeffs[i] += 1
    for _ in range(64):
        coeffs = [rng.randrange(p) for _ in range(k)]
        mat = combine(coeffs)
        if rank(mat) == m.dim:
            return IsoResult("Isomorphic", witness=ModuleHom(m, n, mat))
    return IsoResult("Undecided", certificate={"reason": "sampling-exhausted"})
