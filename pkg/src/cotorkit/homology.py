"""Minimal resolutions, (co)syzygies, Ext and Tor, pullbacks and exactness.

Projective covers drive everything: the injective side is computed by
Matlis duality from the projective side over the opposite algebra, so
there is a single resolution engine.  Resolutions are cached on the module
and extended on demand; a zero term ends the resolution and later terms
stay zero.

Ext(m, n) is the cohomology of Hom(P_*(m), n) in the e*n coordinates of
`_hom_from_projective`; Tor(x, n) is the homology of x (x) P_*(n) in the
matching x*e coordinates.  Both avoid ever forming a large intertwiner or
tensor-relation system.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import CoordinateSolver, Matrix, column_space_basis, kernel_basis, rank, solve
from .modules import (
    LEFT,
    Module,
    ModuleError,
    ModuleHom,
    direct_sum,
    dual_hom,
    hom_from_projective,
    induced_hom_matrix,
    induced_tensor_matrix,
    matlis_dual,
    minimal_presentation,
    projective_cover,
    radical_subspace,
    socle_subspace,
    submodule,
    subquotients,
    quotient_module,
    zero_module,
)

__all__ = [
    "Complex",
    "Resolution",
    "projective_cover",
    "injective_envelope",
    "min_resolution",
    "syzygy",
    "cosyzygy",
    "cosyzygy_data",
    "syzygy_data",
    "ext",
    "ext_via_injective",
    "tor",
    "pullback",
    "pushout",
    "is_exact_at",
    "padded_projective_resolution",
    "injective_dimension_bounded",
    "algebra_gorenstein_bounded",
]


class Complex:
    """A chain of modules with maps[i]: terms[i] -> terms[i+1], composites zero."""

    def __init__(self, terms, maps, check=True):
        self.terms = list(terms)
        self.maps = list(maps)
        if len(self.maps) != max(len(self.terms) - 1, 0):
            raise ModuleError("complex needs exactly one map between consecutive terms")
        if check:
            for i in range(len(self.maps) - 1):
                if not (self.maps[i + 1].matrix * self.maps[i].matrix).is_zero():
                    raise ModuleError(f"composite at position {i + 1} is not zero")

    def __len__(self):
        return len(self.terms)


def is_exact_at(c, pos):
    """(exact?, defect) at terms[pos]: defect = dim ker(outgoing) - rank(incoming)."""
    incoming = c.maps[pos - 1].matrix if pos >= 1 else None
    outgoing = c.maps[pos].matrix if pos < len(c.maps) else None
    dim_here = c.terms[pos].dim
    ker_dim = dim_here - rank(outgoing) if outgoing is not None else dim_here
    im_rank = rank(incoming) if incoming is not None else 0
    defect = ker_dim - im_rank
    return defect == 0, defect


def is_exact(c):
    return all(is_exact_at(c, i)[0] for i in range(len(c.terms)))


@dataclass
class Resolution:
    side: str  # "projective" | "injective"
    module: Module
    terms: list
    maps: list  # projective: maps[i]: terms[i+1] -> terms[i]; injective: terms[i] -> terms[i+1]
    augmentation: ModuleHom  # projective: terms[0] ->> module; injective: module >-> terms[0]
    minimal: bool

    def length_of_nonzero(self):
        last = -1
        for i, t in enumerate(self.terms):
            if t.dim:
                last = i
        return last


# -- the projective resolution engine ---------------------------------------


class _ProjResState:
    __slots__ = ("terms", "maps", "augmentation", "kernel", "kernel_incl", "finished")

    def __init__(self, m):
        p0, eps = projective_cover(m)
        self.terms = [p0]
        self.maps = []
        self.augmentation = eps
        ker_cols = kernel_basis(eps.matrix)
        k, incl = submodule(p0, ker_cols)
        self.kernel = k
        self.kernel_incl = incl
        self.finished = k.dim == 0 and p0.dim == 0

    def extend_to(self, n):
        while len(self.terms) <= n:
            if self.kernel.dim == 0:
                z = zero_module(self.terms[-1].algebra, self.terms[-1].side)
                z.proj_summands = ()
                self.terms.append(z)
                self.maps.append(ModuleHom.zero(z, self.terms[-2]))
                continue
            p, eps = projective_cover(self.kernel)
            d = self.kernel_incl.compose(eps)
            self.terms.append(p)
            self.maps.append(d)
            ker_cols = kernel_basis(eps.matrix)
            k, incl = submodule(p, ker_cols)
            self.kernel = k
            self.kernel_incl = incl


def _proj_state(m):
    if "projres" not in m._cache:
        m._cache["projres"] = _ProjResState(m)
    return m._cache["projres"]


def _verify_min_projective(res):
    for i, d in enumerate(res.maps):
        target = res.terms[i]
        jp = radical_subspace(target)
        im = column_space_basis(d.matrix)
        if rank(jp.hstack(im)) != rank(jp):
            return False
    return True


def _verify_min_injective(res):
    prev = res.augmentation
    for i, term in enumerate(res.terms):
        if term.dim == 0:
            continue
        soc = socle_subspace(term)
        im = column_space_basis(prev.matrix)
        if rank(im.hstack(soc)) != rank(im):
            return False
        if i < len(res.maps):
            prev = res.maps[i]
    return True


def min_resolution(m, side, length, verify=True):
    """Minimal resolution with terms 0..length (zero modules past termination)."""
    if length < 0:
        raise ModuleError("resolution length must be >= 0")
    if side == "projective":
        st = _proj_state(m)
        st.extend_to(length)
        res = Resolution(
            "projective",
            m,
            st.terms[: length + 1],
            st.maps[:length],
            st.augmentation,
            True,
        )
        if verify:
            assert _verify_min_projective(res), "cover chain lost minimality"
        return res
    if side == "injective":
        dual = matlis_dual(m)
        st = _proj_state(dual)
        st.extend_to(length)
        terms = [matlis_dual(t) for t in st.terms[: length + 1]]
        maps = [dual_hom(d) for d in st.maps[:length]]
        aug_dual = dual_hom(st.augmentation)  # D(D m) -> D(P0); D(D m) == m on the nose
        aug = ModuleHom(m, terms[0], aug_dual.matrix, check=False)
        res = Resolution("injective", m, terms, maps, aug, True)
        if verify:
            assert _verify_min_injective(res), "envelope chain lost minimality"
        return res
    raise ModuleError(f"unknown resolution side {side!r}")


def injective_envelope(m):
    """(I, mono) with I = D(projective cover of D(m)) and an essential mono."""
    dual = matlis_dual(m)
    p, epi = projective_cover(dual)
    i_mod = matlis_dual(p)
    mono = ModuleHom(m, i_mod, epi.matrix.transpose(), check=False)
    assert mono.is_mono(), "envelope map is not injective"
    soc = socle_subspace(i_mod)
    im = column_space_basis(mono.matrix)
    assert rank(im.hstack(soc)) == rank(im), "image is not essential (socle escapes)"
    return i_mod, mono


def syzygy_data(m, n):
    """(syzygy module, inclusion into P_{n-1}, projection from P_n)."""
    if n == 0:
        return m, None, None
    key = ("syz", n)
    if key in m._cache:
        return m._cache[key]
    st = _proj_state(m)
    st.extend_to(n)
    d = st.maps[n - 1]  # P_n -> P_{n-1}
    sq = subquotients(d)
    result = (sq.image, sq.image_inclusion, sq.image_projection)
    m._cache[key] = result
    return result


def syzygy(m, n):
    return syzygy_data(m, n)[0]


def cosyzygy_data(m, n):
    """(cosyzygy, mono into I^n, epi from I^{n-1}) for the minimal resolution."""
    if n == 0:
        return m, None, None
    key = ("cosyz", n)
    if key in m._cache:
        return m._cache[key]
    res = min_resolution(m, "injective", n, verify=False)
    f = res.maps[n - 1]  # I^{n-1} -> I^n
    sq = subquotients(f)
    result = (sq.image, sq.image_inclusion, sq.image_projection)
    m._cache[key] = result
    return result


def cosyzygy(m, n):
    return cosyzygy_data(m, n)[0]


# -- Ext and Tor ---------------------------------------------------------------


@dataclass
class ExtResult:
    dim: int
    cocycle_basis: Matrix  # columns, in Hom(P_i, n) coordinates
    boundary_rank: int
    hom_data: object  # coordinate machinery of Hom(P_i, n)


def ext(m, n, i, resolution=None):
    """dim Ext^i(m, n) with a representative cocycle space.

    Uses the cached minimal projective resolution of m unless an explicit
    (possibly padded) resolution is supplied.
    """
    if m.algebra != n.algebra or m.side != n.side:
        raise ModuleError("ext needs modules over the same algebra and side")
    if i < 0:
        raise ModuleError("ext degree must be >= 0")
    if resolution is None:
        resolution = min_resolution(m, "projective", i + 1, verify=False)
    terms = resolution.terms
    maps = resolution.maps
    data_i = hom_from_projective(terms[i], n)
    if i == 0:
        out = induced_hom_matrix(maps[0], data_i, hom_from_projective(terms[1], n))
        cocycles = kernel_basis(out)
        return ExtResult(cocycles.cols, cocycles, 0, data_i)
    data_prev = hom_from_projective(terms[i - 1], n)
    data_next = hom_from_projective(terms[i + 1], n)
    incoming = induced_hom_matrix(maps[i - 1], data_prev, data_i)
    outgoing = induced_hom_matrix(maps[i], data_i, data_next)
    cocycles = kernel_basis(outgoing)
    brank = rank(incoming)
    # boundaries lie inside cocycles, so the quotient dimension subtracts
    assert rank(cocycles.hstack(column_space_basis(incoming))) == cocycles.cols
    return ExtResult(cocycles.cols - brank, cocycles, brank, data_i)


def ext_via_injective(m, n, i):
    """dim Ext^i(m, n) from an injective coresolution of n (balance oracle)."""
    res = min_resolution(n, "injective", i + 1, verify=False)
    terms = res.terms
    maps = res.maps

    from .modules import hom_space

    bases = [hom_space(m, t) for t in terms[: i + 2]]
    field = m.field

    def induced(j):
        # Hom(m, I^j) -> Hom(m, I^{j+1}) by postcomposition
        src = bases[j]
        tgt = bases[j + 1]
        if not tgt:
            return Matrix.zeros(field, 0, len(src))
        vec = Matrix.from_columns(
            field,
            [[x for row in h.matrix.data for x in row] for h in tgt],
            rows=terms[j + 1].dim * m.dim,
        )
        solver = CoordinateSolver(vec)
        cols = []
        for h in src:
            moved = maps[j].matrix * h.matrix
            cols.append([x for row in moved.data for x in row])
        if not cols:
            return Matrix.zeros(field, len(tgt), 0)
        return solver.coords(Matrix.from_columns(field, cols, rows=terms[j + 1].dim * m.dim))

    if i == 0:
        # Hom(m, -) is left exact: Ext^0 = ker(Hom(m, I^0) -> Hom(m, I^1))
        out = induced(0)
        return len(bases[0]) - rank(out)
    out = induced(i)
    inc = induced(i - 1)
    ker = len(bases[i]) - rank(out)
    return ker - rank(inc)


@dataclass
class TorResult:
    dim: int
    module: Module  # left module over the bimodule's left algebra, or None


def tor(x, n, i, resolution=None):
    """dim Tor_i(x, n); when x is a bimodule the result keeps its left structure.

    x (x) P for projective P collapses to the subspaces x e, so the whole
    computation happens in hom_from_projective coordinates.
    """
    from .modules import Bimodule

    if i < 0:
        raise ModuleError("tor degree must be >= 0")
    bimodule = x if isinstance(x, Bimodule) else None
    xmod = x.right_module() if bimodule is not None else x
    if xmod.side != "right":
        raise ModuleError("first tor argument must be a right module or bimodule")
    if n.side != LEFT or n.algebra != xmod.algebra:
        raise ModuleError("second tor argument must be a left module over the same algebra")
    if resolution is None:
        resolution = min_resolution(n, "projective", i + 1, verify=False)
    terms = resolution.terms
    maps = resolution.maps
    data_i = hom_from_projective(terms[i], xmod)
    data_next = hom_from_projective(terms[i + 1], xmod)
    incoming = induced_tensor_matrix(maps[i], data_next, data_i)
    if i == 0:
        dim0 = data_i.total - rank(incoming)
        mod = _tor_module(bimodule, data_i, incoming, None) if bimodule else None
        return TorResult(dim0, mod)
    data_prev = hom_from_projective(terms[i - 1], xmod)
    outgoing = induced_tensor_matrix(maps[i - 1], data_i, data_prev)
    cycles = kernel_basis(outgoing)
    brank = rank(incoming)
    assert rank(cycles.hstack(column_space_basis(incoming))) == cycles.cols
    dim_h = cycles.cols - brank
    mod = _tor_module(bimodule, data_i, incoming, outgoing) if bimodule else None
    return TorResult(dim_h, mod)


def _tor_module(bimodule, data, incoming, outgoing):
    """Homology as an actual left module over the bimodule's left algebra."""
    c_left = bimodule.left_module()
    summands = []
    for ps, xe, _ in data.pieces:
        sub, _ = submodule(c_left, xe)
        summands.append(sub)
    term, _, _ = direct_sum(summands, algebra=bimodule.left_algebra)
    if outgoing is None:
        # cokernel of incoming
        quot, _ = quotient_module(term, column_space_basis(incoming))
        return quot
    ker_cols = kernel_basis(outgoing)
    k, incl = submodule(term, ker_cols)
    im_cols = column_space_basis(incoming)
    if k.dim == 0:
        return k
    coords = CoordinateSolver(ker_cols).coords(im_cols) if im_cols.cols else Matrix.zeros(term.field, k.dim, 0)
    h, _ = quotient_module(k, column_space_basis(coords) if coords.cols else coords)
    return h


# -- pullback / pushout ----------------------------------------------------------


def pullback(f, g):
    """(P, to_source_of_f, to_source_of_g) for f: X -> Z, g: Y -> Z."""
    if f.target != g.target:
        raise ModuleError("pullback needs maps into the same module")
    big, injs, projs = direct_sum([f.source, g.source])
    diff = f.matrix * projs[0].matrix - g.matrix * projs[1].matrix
    h = ModuleHom(big, f.target, diff, check=False)
    ker_cols = kernel_basis(h.matrix)
    p, incl = submodule(big, ker_cols)
    to_x = projs[0].compose(incl)
    to_y = projs[1].compose(incl)
    assert f.matrix * to_x.matrix == g.matrix * to_y.matrix
    return p, to_x, to_y


def pushout(f, g):
    """(Q, from_target_of_f, from_target_of_g) for f: Z -> X, g: Z -> Y."""
    if f.source != g.source:
        raise ModuleError("pushout needs maps out of the same module")
    big, injs, _ = direct_sum([f.target, g.target])
    span = injs[0].matrix * f.matrix - injs[1].matrix * g.matrix
    q, proj = quotient_module(big, column_space_basis(span))
    from_x = proj.compose(injs[0])
    from_y = proj.compose(injs[1])
    assert from_x.matrix * f.matrix == from_y.matrix * g.matrix
    return q, from_x, from_y


# -- padded (non-minimal) resolutions ----------------------------------------------


def padded_projective_resolution(res, j, extra):
    """Insert a trivial summand `extra` at degrees j, j+1 of a projective resolution.

    The result is exact but deliberately non-minimal; used to verify that
    ext/tor do not depend on minimality.
    """
    terms = list(res.terms)
    maps = list(res.maps)
    if j + 1 > len(maps):
        raise ModuleError("pad position beyond resolution length")
    pj, injs_j, projs_j = direct_sum([terms[j], extra])
    pj1, injs_j1, projs_j1 = direct_sum([terms[j + 1], extra])
    field = extra.field
    # d_{j+1}': old d on the old part, identity on the trivial part
    new_dj1 = ModuleHom(
        pj1,
        pj,
        injs_j[0].matrix * (maps[j].matrix * projs_j1[0].matrix)
        + injs_j[1].matrix * projs_j1[1].matrix,
        check=False,
    )
    terms[j] = pj
    terms[j + 1] = pj1
    maps[j] = new_dj1
    if j == 0:
        aug = ModuleHom(pj, res.module, res.augmentation.matrix * projs_j[0].matrix, check=False)
    else:
        aug = res.augmentation
        maps[j - 1] = ModuleHom(
            pj, terms[j - 1], maps[j - 1].matrix * projs_j[0].matrix, check=False
        )
    if j + 1 < len(maps):
        maps[j + 1] = ModuleHom(
            terms[j + 2], pj1, injs_j1[0].matrix * maps[j + 1].matrix, check=False
        )
    return Resolution("projective", res.module, terms, maps, aug, False)


# -- bounded injective dimension -----------------------------------------------------


def injective_dimension_bounded(m, bound):
    """Least n <= bound with I^{n+1} = 0 in the minimal injective resolution, else None."""
    res = min_resolution(m, "injective", bound + 1, verify=False)
    for n in range(bound + 1):
        if res.terms[n + 1].dim == 0:
            return n
    return None


@dataclass
class GorensteinReport:
    bound: int
    left_injective_dimension: object  # int or None (meaning "> bound")
    right_injective_dimension: object
    gorenstein_up_to_bound: bool


def algebra_gorenstein_bounded(a, bound):
    """Bounded two-sided self-injective-dimension check."""
    from .algebra import opposite
    from .modules import structural_modules

    left = injective_dimension_bounded(structural_modules(a).regular, bound)
    right = injective_dimension_bounded(structural_modules(opposite(a)).regular, bound)
    ok = left is not None and right is not None and left == right
    return GorensteinReport(bound, left, right, ok)
