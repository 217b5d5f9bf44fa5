"""Dense exact linear algebra over Q and prime fields.

Everything downstream (algebras, modules, resolutions) reduces to the
kernels in this file: reduced row echelon form, right null spaces, exact
solves, Kronecker products.  Scalars are `fractions.Fraction` over Q and
plain ints in [0, p) over F_p; there is no floating point anywhere.

Conventions fixed here and used by every other module:
  * matrices act on the left of column vectors,
  * entry (i, j) is the coefficient of output basis element i in the
    image of input basis element j,
  * subspaces are represented by matrices whose *columns* form a basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class LinalgError(ValueError):
    pass


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldDesc:
    """An exact coefficient field: the rationals, or F_p for a prime p."""

    kind: str  # "Q" or "Fp"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise LinalgError("rational field takes no characteristic")
        elif self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise LinalgError(f"characteristic must be prime, got {self.p}")
        else:
            raise LinalgError(f"unknown field kind {self.kind!r}")

    @property
    def is_rational(self):
        return self.kind == "Q"

    def zero(self):
        return Fraction(0) if self.is_rational else 0

    def one(self):
        return Fraction(1) if self.is_rational else 1

    def coerce(self, x):
        """Coerce an int / Fraction / scalar string into a field element."""
        if self.kind == "Q":
            if type(x) is Fraction:
                return x
            if type(x) is int:
                return Fraction(x)
            if isinstance(x, str):
                return self.parse_scalar(x)
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            raise LinalgError(f"cannot coerce {x!r} into Q")
        if type(x) is int:
            return x % self.p
        if isinstance(x, str):
            return self.parse_scalar(x)
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise LinalgError(f"denominator of {x} not invertible mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        raise LinalgError(f"cannot coerce {x!r} into F_{self.p}")

    def parse_scalar(self, s):
        """Parse "p/q" (q > 0 after reduction) over Q, a decimal residue over F_p."""
        s = s.strip()
        if self.is_rational:
            if "/" in s:
                num_s, _, den_s = s.partition("/")
                try:
                    num, den = int(num_s), int(den_s)
                except ValueError:
                    raise LinalgError(f"malformed rational scalar {s!r}") from None
                if den == 0:
                    raise LinalgError(f"zero denominator in scalar {s!r}")
                return Fraction(num, den)
            try:
                return Fraction(int(s))
            except ValueError:
                raise LinalgError(f"malformed rational scalar {s!r}") from None
        try:
            v = int(s)
        except ValueError:
            raise LinalgError(f"malformed residue {s!r}") from None
        return v % self.p

    def format_scalar(self, x):
        if self.is_rational:
            x = Fraction(x)
            if x.denominator == 1:
                return str(x.numerator)
            return f"{x.numerator}/{x.denominator}"
        return str(x % self.p)

    def invert(self, x):
        if self.is_rational:
            if x == 0:
                raise ZeroDivisionError("inverting zero")
            return 1 / Fraction(x)
        return pow(x, -1, self.p)


QQ = FieldDesc("Q")


def GF(p):
    return FieldDesc("Fp", p)


class Matrix:
    """Immutable dense matrix over a FieldDesc.

    Rows are stored as tuples; all arithmetic is exact.  Empty shapes
    (0 rows and/or 0 columns) are legal and show up constantly as zero
    modules.
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, rows, cols, data):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data  # tuple of row tuples

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(field, rows, cols=None):
        rows = [list(r) for r in rows]
        n = len(rows)
        if cols is None:
            if n == 0:
                raise LinalgError("cols required for a matrix with no rows")
            cols = len(rows[0])
        data = []
        for r in rows:
            if len(r) != cols:
                raise LinalgError("ragged rows")
            data.append(tuple(field.coerce(x) for x in r))
        return Matrix(field, n, cols, tuple(data))

    @staticmethod
    def zeros(field, rows, cols):
        z = field.zero()
        row = (z,) * cols
        return Matrix(field, rows, cols, (row,) * rows)

    @staticmethod
    def identity(field, n):
        z, o = field.zero(), field.one()
        data = tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))
        return Matrix(field, n, n, data)

    @staticmethod
    def column(field, entries):
        return Matrix.from_rows(field, [[x] for x in entries], cols=1)

    @staticmethod
    def from_columns(field, columns, rows=None):
        columns = list(columns)
        if rows is None:
            if not columns:
                raise LinalgError("rows required for a matrix with no columns")
            rows = len(columns[0])
        data = [[None] * len(columns) for _ in range(rows)]
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise LinalgError("ragged columns")
            for i, x in enumerate(col):
                data[i][j] = field.coerce(x)
        return Matrix(field, rows, len(columns), tuple(tuple(r) for r in data))

    # -- basic access --------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def col(self, j):
        return tuple(self.data[i][j] for i in range(self.rows))

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    @property
    def entries(self):
        """Row-major flat tuple of all entries."""
        return tuple(x for row in self.data for x in row)

    def is_zero(self):
        z = self.field.zero()
        return all(x == z for row in self.data for x in row)

    def is_square(self):
        return self.rows == self.cols

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(
            " ".join(self.field.format_scalar(x) for x in row) for row in self.data
        )
        return f"Matrix({self.rows}x{self.cols}: {body})"

    # -- arithmetic ----------------------------------------------------

    def _require_same_field(self, other):
        if self.field != other.field:
            raise LinalgError("field mismatch")

    def __add__(self, other):
        # zero entries are skipped to avoid pointless Fraction churn
        self._require_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinalgError("shape mismatch in addition")
        if self.field.is_rational:
            data = tuple(
                tuple((a + b) if (a and b) else (a or b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.data, other.data)
            )
        else:
            p = self.field.p
            data = tuple(
                tuple((a + b) % p if (a and b) else (a or b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.data, other.data)
            )
        return Matrix(self.field, self.rows, self.cols, data)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        if self.field.is_rational:
            data = tuple(tuple(-a if a else a for a in row) for row in self.data)
        else:
            p = self.field.p
            data = tuple(tuple((-a) % p if a else a for a in row) for row in self.data)
        return Matrix(self.field, self.rows, self.cols, data)

    def scale(self, c):
        c = self.field.coerce(c)
        if not c:
            return Matrix.zeros(self.field, self.rows, self.cols)
        if self.field.is_rational:
            data = tuple(tuple(c * a if a else a for a in row) for row in self.data)
        else:
            p = self.field.p
            data = tuple(tuple(c * a % p if a else a for a in row) for row in self.data)
        return Matrix(self.field, self.rows, self.cols, data)

    def __mul__(self, other):
        """Matrix product, skipping zero entries (our matrices are sparse)."""
        self._require_same_field(other)
        if self.cols != other.rows:
            raise LinalgError(
                f"shape mismatch in product: {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        z = self.field.zero()
        out = [[z] * other.cols for _ in range(self.rows)]
        for i in range(self.rows):
            Ai = self.data[i]
            Oi = out[i]
            for k in range(self.cols):
                a = Ai[k]
                if a:
                    Bk = other.data[k]
                    for j in range(other.cols):
                        b = Bk[j]
                        if b:
                            Oi[j] += a * b
        if not self.field.is_rational:
            p = self.field.p
            out = [[x % p for x in row] for row in out]
        return Matrix(self.field, self.rows, other.cols, tuple(tuple(r) for r in out))

    def transpose(self):
        data = tuple(
            tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)
        )
        return Matrix(self.field, self.cols, self.rows, data)

    def hstack(self, other):
        self._require_same_field(other)
        if self.rows != other.rows:
            raise LinalgError("row mismatch in hstack")
        data = tuple(ra + rb for ra, rb in zip(self.data, other.data))
        return Matrix(self.field, self.rows, self.cols + other.cols, data)

    def vstack(self, other):
        self._require_same_field(other)
        if self.cols != other.cols:
            raise LinalgError("column mismatch in vstack")
        return Matrix(self.field, self.rows + other.rows, self.cols, self.data + other.data)

    def submatrix_columns(self, js):
        data = tuple(tuple(row[j] for j in js) for row in self.data)
        return Matrix(self.field, self.rows, len(js), data)


def block_diagonal(field, blocks):
    blocks = list(blocks)
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    z = field.zero()
    out = [[z] * cols for _ in range(rows)]
    ro = co = 0
    for b in blocks:
        for i in range(b.rows):
            row = b.data[i]
            for j in range(b.cols):
                out[ro + i][co + j] = row[j]
        ro += b.rows
        co += b.cols
    return Matrix(field, rows, cols, tuple(tuple(r) for r in out))


# -- row reduction ------------------------------------------------------


def _int_rows_from_rational(data):
    """Clear denominators rowwise and divide by the content: primitive int rows."""
    out = []
    for row in data:
        lcm = 1
        for x in row:
            d = x.denominator
            if d != 1:
                lcm = lcm * d // gcd(lcm, d)
        if lcm == 1:
            ints = [x.numerator for x in row]
        else:
            ints = [(x.numerator * lcm) // x.denominator for x in row]
        g = 0
        for v in ints:
            if v:
                g = gcd(g, v)
                if g == 1:
                    break
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def _normalize_int_row(row):
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


def _rref_int_rows(mat, cols):
    """RREF of integer rows over Q.  Returns (pivot_cols, reduced Fraction rows)."""
    rows = [r[:] for r in mat]
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        a = pr[c]
        for i in range(r + 1, nrows):
            b = rows[i][c]
            if b:
                ri = rows[i]
                rows[i] = _normalize_int_row(
                    [a * x - b * y for x, y in zip(ri, pr)]
                )
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    # back substitution, still fraction-free
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        pr = rows[k]
        a = pr[c]
        for i in range(k):
            b = rows[i][c]
            if b:
                ri = rows[i]
                rows[i] = _normalize_int_row([a * x - b * y for x, y in zip(ri, pr)])
    reduced = []
    for k, c in enumerate(pivots):
        a = rows[k][c]
        reduced.append(tuple(Fraction(x, a) for x in rows[k]))
    return pivots, reduced


def _rref_fp_rows(mat, cols, p):
    rows = [[x % p for x in r] for r in mat]
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        pr = rows[r]
        for i in range(r + 1, nrows):
            b = rows[i][c]
            if b:
                rows[i] = [(x - b * y) % p for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        pr = rows[k]
        for i in range(k):
            b = rows[i][c]
            if b:
                rows[i] = [(x - b * y) % p for x, y in zip(rows[i], pr)]
    reduced = [tuple(rows[k]) for k in range(len(pivots))]
    return pivots, reduced


@dataclass(frozen=True)
class RrefResult:
    reduced: Matrix
    rank: int
    pivot_cols: tuple
    kernel_basis: Matrix  # columns span the right null space


def rref(m):
    """Reduced row echelon form plus rank, pivots and a right-kernel basis.

    The reduced matrix keeps m's shape (non-pivot rows are zero); kernel
    columns use the standard free-variable construction, so the result is
    canonical: rref(reduced) == reduced and m * kernel == 0.
    """
    field = m.field
    if field.is_rational:
        pivots, reduced_rows = _rref_int_rows(_int_rows_from_rational(m.data), m.cols)
    else:
        pivots, reduced_rows = _rref_fp_rows([list(r) for r in m.data], m.cols, field.p)
    rank = len(pivots)
    z = field.zero()
    pad = (z,) * m.cols
    full = tuple(reduced_rows) + (pad,) * (m.rows - rank)
    reduced = Matrix(field, m.rows, m.cols, full)
    pivset = set(pivots)
    free = [c for c in range(m.cols) if c not in pivset]
    one = field.one()
    cols = []
    for f in free:
        v = [z] * m.cols
        v[f] = one
        for k, c in enumerate(pivots):
            x = reduced_rows[k][f]
            if x:
                v[c] = -x if field.is_rational else (-x) % field.p
        cols.append(v)
    kernel = Matrix.from_columns(field, cols, rows=m.cols)
    return RrefResult(reduced, rank, tuple(pivots), kernel)


def rank(m):
    return rref(m).rank


def kernel_basis(m):
    return rref(m).kernel_basis


def column_space_basis(m):
    """The pivot columns of m: a deterministic basis of the column space."""
    piv = rref(m).pivot_cols
    return m.submatrix_columns(piv)


def solve(a, b):
    """One exact solution x of a x = b, or None when inconsistent.

    b may be a column vector or a matrix of right-hand sides (solved
    columnwise; None if any column is inconsistent).
    """
    if isinstance(b, (list, tuple)):
        b = Matrix.column(a.field, b)
    a._require_same_field(b)
    if a.rows != b.rows:
        raise LinalgError("dimension mismatch in solve")
    aug = a.hstack(b)
    res = rref(aug)
    # any pivot landing in the b-block certifies inconsistency
    for c in res.pivot_cols:
        if c >= a.cols:
            return None
    z = a.field.zero()
    out = [[z] * b.cols for _ in range(a.cols)]
    for k, c in enumerate(res.pivot_cols):
        row = res.reduced.data[k]
        for j in range(b.cols):
            out[c][j] = row[a.cols + j]
    return Matrix(a.field, a.cols, b.cols, tuple(tuple(r) for r in out))


class CoordinateSolver:
    """Repeated coordinate extraction against a fixed independent-column basis.

    Precomputes a left inverse L with L B = I, so coords(v) = L v; when
    check=True it verifies v actually lies in the span.
    """

    def __init__(self, basis):
        self.basis = basis
        if basis.cols == 0:
            self.left_inverse = Matrix.zeros(basis.field, 0, basis.rows)
            return
        bt = basis.transpose()
        lt = solve(bt, Matrix.identity(basis.field, basis.cols))
        if lt is None:
            raise LinalgError("basis columns are dependent")
        self.left_inverse = lt.transpose()

    def coords(self, v, check=True):
        c = self.left_inverse * v
        if check and self.basis * c != v:
            raise LinalgError("vector not in span of basis")
        return c


def kronecker(a, b):
    """(a (x) b)[(i,k),(j,l)] = a[i,j] * b[k,l]; row index i*b.rows + k."""
    a._require_same_field(b)
    field = a.field
    z = field.zero()
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    out = [[z] * cols for _ in range(rows)]
    for i in range(a.rows):
        for j in range(a.cols):
            x = a.data[i][j]
            if x:
                for k in range(b.rows):
                    for l in range(b.cols):
                        y = b.data[k][l]
                        if y:
                            v = x * y
                            if not field.is_rational:
                                v %= field.p
                            out[i * b.rows + k][j * b.cols + l] = v
    return Matrix(field, rows, cols, tuple(tuple(r) for r in out))


def unit_vector(field, n, i):
    z, o = field.zero(), field.one()
    return Matrix.from_columns(field, [[o if k == i else z for k in range(n)]], rows=n)
