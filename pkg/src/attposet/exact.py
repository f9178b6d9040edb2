"""Exact arithmetic over Q(sqrt q) and the exact matrix types built on it.

Scalars are a + b*sqrt(q) with rational components; q is a fixed prime, so
sqrt(q) is irrational and the representation is unique.  Sparse matrices
keep integer numerators under a single shared denominator, which is the
cleared-denominator discipline that keeps long products in Z[sqrt q]
instead of piling up rational normalizations.  Rational-only data (the
overwhelmingly common case) skips the sqrt component entirely.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .gfq import is_prime


def _fraction_sqrt(f: Fraction):
    """Exact square root of a rational, or None."""
    if f < 0:
        return None
    rn, rd = isqrt(f.numerator), isqrt(f.denominator)
    if rn * rn == f.numerator and rd * rd == f.denominator:
        return Fraction(rn, rd)
    return None


class QSqrt:
    """An element a + b*sqrt(q) of Q(sqrt q)."""

    __slots__ = ("q", "a", "b")

    def __init__(self, q, a=0, b=0):
        if not is_prime(q):
            raise ValueError(f"q must be prime, got {q!r}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("QSqrt is immutable")

    # -- predicates ---------------------------------------------------

    def is_zero(self):
        return not self.a and not self.b

    def is_rational(self):
        return not self.b

    # -- ring operations ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QSqrt):
            if other.q != self.q:
                raise ValueError(f"mixed base primes {self.q} and {other.q}")
            return other
        return QSqrt(self.q, other)

    def __add__(self, other):
        o = self._coerce(other)
        return QSqrt(self.q, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return QSqrt(self.q, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return QSqrt(self.q, -self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        return QSqrt(
            self.q, self.a * o.a + self.q * self.b * o.b, self.a * o.b + self.b * o.a
        )

    __rmul__ = __mul__

    def inverse(self):
        norm = self.a * self.a - self.q * self.b * self.b
        if not norm:
            raise ZeroDivisionError("inverse of zero in Q(sqrt q)")
        return QSqrt(self.q, self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = QSqrt(self.q, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sqrt(self):
        """Exact square root in Q(sqrt q), or None if there is none."""
        if self.is_zero():
            return QSqrt(self.q, 0)
        if not self.b:
            u = _fraction_sqrt(self.a)
            if u is not None:
                return QSqrt(self.q, u)
            v = _fraction_sqrt(self.a / self.q)
            if v is not None:
                return QSqrt(self.q, 0, v)
            return None
        disc = _fraction_sqrt(self.a * self.a - self.q * self.b * self.b)
        if disc is None:
            return None
        for half in ((self.a + disc) / 2, (self.a - disc) / 2):
            u = _fraction_sqrt(half)
            if u:
                return QSqrt(self.q, u, self.b / (2 * u))
        return None

    # -- comparisons / misc --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, QSqrt):
            return self.q == other.q and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash(self.a) if not self.b else hash((self.a, self.b, self.q))

    def __float__(self):
        return float(self.a) + float(self.b) * self.q**0.5

    def __repr__(self):
        if not self.b:
            return f"QSqrt({self.q}, {self.a})"
        return f"QSqrt({self.q}, {self.a}, {self.b})"


def qpow(q, k) -> Fraction:
    """q**k as an exact rational (k may be negative)."""
    return Fraction(q) ** k

def q_power(q, k) -> QSqrt:
    """q**(k/2) as an element of Q(sqrt q); k is any integer."""
    if k % 2 == 0:
        return QSqrt(q, qpow(q, k // 2))
    return QSqrt(q, 0, qpow(q, (k - 1) // 2))


def tau_bracket(q, n) -> QSqrt:
    """[n] at tau = sqrt(q): (tau^n - tau^-n) / (tau - tau^-1)."""
    out = QSqrt(q, 0)
    for j in range(n):
        out = out + q_power(q, n - 1 - 2 * j)
    return out


# -- wire format -------------------------------------------------------

def fraction_to_wire(f: Fraction) -> str:
    f = Fraction(f)
    return f"{f.numerator}/{f.denominator}"


def wire_to_fraction(s: str) -> Fraction:
    return Fraction(s)


def qsqrt_to_wire(x: QSqrt):
    if x.is_rational():
        return fraction_to_wire(x.a)
    return {"a": fraction_to_wire(x.a), "b": fraction_to_wire(x.b)}


# -- sparse matrices ---------------------------------------------------

def _rows_gcd(rows, den):
    g = den
    for row in rows:
        for _, a, b in row:
            if a:
                g = gcd(g, a)
            if b:
                g = gcd(g, b)
            if g == 1:
                return 1
    return g


class SparseMat:
    """Sparse matrix over Q(sqrt q).

    Rows hold (col, ra, rb) triples sorted by column, never storing a zero;
    the matrix value is (ra + rb*sqrt(q)) / den with one positive integer
    denominator shared by every entry.
    """

    __slots__ = ("q", "nrows", "ncols", "den", "rows", "rational")

    def __init__(self, q, nrows, ncols, den, rows):
        self.q = q
        self.nrows = nrows
        self.ncols = ncols
        self.den = den
        self.rows = rows
        self.rational = all(not b for row in rows for _, _, b in row)

    # -- constructors ---------------------------------------------------

    @classmethod
    def _build(cls, q, nrows, ncols, den, rows):
        if den < 0:
            den = -den
            rows = [[(c, -a, -b) for c, a, b in row] for row in rows]
        g = _rows_gcd(rows, den)
        if g > 1:
            den //= g
            rows = [[(c, a // g, b // g) for c, a, b in row] for row in rows]
        return cls(q, nrows, ncols, den, rows)

    @classmethod
    def zeros(cls, q, nrows, ncols):
        return cls(q, nrows, ncols, 1, [[] for _ in range(nrows)])

    @classmethod
    def identity(cls, q, n):
        return cls(q, n, n, 1, [[(i, 1, 0)] for i in range(n)])

    @classmethod
    def from_unit_entries(cls, q, nrows, ncols, positions):
        """0/1 matrix with a 1 at every (row, col) in positions."""
        rows = [[] for _ in range(nrows)]
        for i, j in positions:
            rows[i].append((j, 1, 0))
        for row in rows:
            row.sort()
        return cls(q, nrows, ncols, 1, rows)

    @classmethod
    def diagonal(cls, q, values):
        """Diagonal matrix from QSqrt (or int/Fraction) values."""
        vals = [v if isinstance(v, QSqrt) else QSqrt(q, v) for v in values]
        den = 1
        for v in vals:
            den = den * (v.a.denominator * v.b.denominator) // gcd(
                den, v.a.denominator * v.b.denominator
            )
        rows = []
        for i, v in enumerate(vals):
            a = int(v.a * den)
            b = int(v.b * den)
            rows.append([(i, a, b)] if a or b else [])
        n = len(vals)
        return cls._build(q, n, n, den, rows)

    @classmethod
    def from_entries(cls, q, nrows, ncols, entries):
        """Build from a {(row, col): QSqrt-like} mapping."""
        den = 1
        vals = {}
        for key, v in entries.items():
            v = v if isinstance(v, QSqrt) else QSqrt(q, v)
            vals[key] = v
            d = v.a.denominator * v.b.denominator // gcd(
                v.a.denominator, v.b.denominator
            )
            den = den * d // gcd(den, d)
        rows = [[] for _ in range(nrows)]
        for (i, j), v in vals.items():
            a, b = int(v.a * den), int(v.b * den)
            if a or b:
                rows[i].append((j, a, b))
        for row in rows:
            row.sort()
        return cls._build(q, nrows, ncols, den, rows)

    # -- inspection -----------------------------------------------------

    def nnz(self):
        return sum(len(row) for row in self.rows)

    def entry(self, i, j) -> QSqrt:
        for c, a, b in self.rows[i]:
            if c == j:
                return QSqrt(self.q, Fraction(a, self.den), Fraction(b, self.den))
            if c > j:
                break
        return QSqrt(self.q, 0)

    def entries(self):
        """Yield ((row, col), QSqrt) over stored entries."""
        den = self.den
        for i, row in enumerate(self.rows):
            for c, a, b in row:
                yield (i, c), QSqrt(self.q, Fraction(a, den), Fraction(b, den))

    def is_zero(self):
        return all(not row for row in self.rows)

    def __eq__(self, other):
        if not isinstance(other, SparseMat):
            return NotImplemented
        return (
            self.q == other.q
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.sub(other).is_zero()
        )

    def __hash__(self):
        raise TypeError("SparseMat is not hashable")

    # -- algebra ---------------------------------------------------------

    def transpose(self):
        rows = [[] for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for c, a, b in row:
                rows[c].append((i, a, b))
        return SparseMat(self.q, self.ncols, self.nrows, self.den, rows)

    def scale(self, s) -> "SparseMat":
        s = s if isinstance(s, QSqrt) else QSqrt(self.q, s)
        if s.is_zero():
            return SparseMat.zeros(self.q, self.nrows, self.ncols)
        sden = s.a.denominator * s.b.denominator // gcd(
            s.a.denominator, s.b.denominator
        )
        sa = int(s.a * sden)
        sb = int(s.b * sden)
        q = self.q
        rows = []
        if not sb:
            rows = [[(c, a * sa, b * sa) for c, a, b in row] for row in self.rows]
        else:
            for row in self.rows:
                rows.append(
                    [
                        (c, a * sa + q * b * sb, a * sb + b * sa)
                        for c, a, b in row
                    ]
                )
            rows = [[(c, a, b) for c, a, b in row if a or b] for row in rows]
        return SparseMat._build(q, self.nrows, self.ncols, self.den * sden, rows)

    def add(self, other) -> "SparseMat":
        self._check_shape(other, same=True)
        d1, d2 = self.den, other.den
        g = gcd(d1, d2)
        m1, m2 = d2 // g, d1 // g
        den = d1 * m1
        rows = []
        for r1, r2 in zip(self.rows, other.rows):
            acc = {}
            for c, a, b in r1:
                acc[c] = (a * m1, b * m1)
            for c, a, b in r2:
                pa, pb = acc.get(c, (0, 0))
                acc[c] = (pa + a * m2, pb + b * m2)
            rows.append(sorted((c, a, b) for c, (a, b) in acc.items() if a or b))
        return SparseMat._build(self.q, self.nrows, self.ncols, den, rows)

    def sub(self, other) -> "SparseMat":
        return self.add(other.scale(-1))

    def mul(self, other) -> "SparseMat":
        self._check_shape(other)
        q = self.q
        orows = other.rows
        out = []
        if self.rational and other.rational:
            for arow in self.rows:
                acc = {}
                get = acc.get
                for k, a1, _ in arow:
                    for j, a2, _b in orows[k]:
                        acc[j] = get(j, 0) + a1 * a2
                out.append(sorted((j, v, 0) for j, v in acc.items() if v))
        else:
            for arow in self.rows:
                acc = {}
                get = acc.get
                for k, a1, b1 in arow:
                    for j, a2, b2 in orows[k]:
                        pa, pb = get(j, (0, 0))
                        acc[j] = (
                            pa + a1 * a2 + q * b1 * b2,
                            pb + a1 * b2 + b1 * a2,
                        )
                out.append(sorted((j, a, b) for j, (a, b) in acc.items() if a or b))
        return SparseMat._build(
            q, self.nrows, other.ncols, self.den * other.den, out
        )

    def __matmul__(self, other):
        return self.mul(other)

    def apply(self, vec):
        """Matrix-vector product over QSqrt values."""
        if len(vec) != self.ncols:
            raise ValueError(f"vector length {len(vec)}, expected {self.ncols}")
        vals = [v if isinstance(v, QSqrt) else QSqrt(self.q, v) for v in vec]
        den = Fraction(1, self.den)
        out = []
        for row in self.rows:
            acc = QSqrt(self.q, 0)
            for c, a, b in row:
                acc = acc + QSqrt(self.q, a, b) * vals[c]
            out.append(acc * den)
        return out

    def apply_raw(self, vden, va, vb):
        """Exact matvec on a raw vector (den, rational nums, sqrt nums|None).

        Keeps everything in integers; returns the same representation.
        """
        q = self.q
        ra = self._matvec_nums(va)
        if vb is None:
            if self.rational:
                return self.den * vden, ra, None
            rb = self._matvec_irr_nums(va)
            return self.den * vden, ra, rb
        ia = self._matvec_nums(vb)
        if self.rational:
            return self.den * vden, ra, ia
        sa = self._matvec_irr_nums(va)
        sb = self._matvec_irr_nums(vb)
        out_a = [x + q * y for x, y in zip(ra, sb)]
        out_b = [x + y for x, y in zip(ia, sa)]
        return self.den * vden, out_a, out_b

    def _matvec_nums(self, nums):
        out = []
        append = out.append
        for row in self.rows:
            s = 0
            for c, a, _ in row:
                if a:
                    s += a * nums[c]
            append(s)
        return out

    def _matvec_irr_nums(self, nums):
        out = []
        append = out.append
        for row in self.rows:
            s = 0
            for c, _, b in row:
                if b:
                    s += b * nums[c]
            append(s)
        return out

    def to_dense(self) -> "DenseMat":
        rows = [
            [QSqrt(self.q, 0)] * self.ncols for _ in range(self.nrows)
        ]
        for (i, j), v in self.entries():
            rows[i][j] = v
        return DenseMat(self.q, rows)

    def _check_shape(self, other, same=False):
        if self.q != other.q:
            raise ValueError("mixed base primes")
        if same:
            if (self.nrows, self.ncols) != (other.nrows, other.ncols):
                raise ValueError(
                    f"shape mismatch: {self.nrows}x{self.ncols} "
                    f"vs {other.nrows}x{other.ncols}"
                )
        elif self.ncols != other.nrows:
            raise ValueError(
                f"cannot multiply {self.nrows}x{self.ncols} "
                f"by {other.nrows}x{other.ncols}"
            )

    def __repr__(self):
        return (
            f"SparseMat({self.nrows}x{self.ncols}, q={self.q}, "
            f"nnz={self.nnz()})"
        )


# -- dense matrices ----------------------------------------------------

class DenseMat:
    """Small dense matrix over Q(sqrt q); rows of QSqrt values."""

    __slots__ = ("q", "nrows", "ncols", "rows")

    def __init__(self, q, rows):
        self.q = q
        self.rows = [
            [v if isinstance(v, QSqrt) else QSqrt(q, v) for v in row] for row in rows
        ]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0

    @classmethod
    def zeros(cls, q, nrows, ncols):
        zero = QSqrt(q, 0)
        return cls(q, [[zero] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, q, n):
        m = cls.zeros(q, n, n)
        one = QSqrt(q, 1)
        for i in range(n):
            m.rows[i][i] = one
        return m

    @classmethod
    def diagonal(cls, q, values):
        n = len(values)
        m = cls.zeros(q, n, n)
        for i, v in enumerate(values):
            m.rows[i][i] = v if isinstance(v, QSqrt) else QSqrt(q, v)
        return m

    def entry(self, i, j):
        return self.rows[i][j]

    def set_entry(self, i, j, v):
        self.rows[i][j] = v if isinstance(v, QSqrt) else QSqrt(self.q, v)

    def __add__(self, other):
        return DenseMat(
            self.q,
            [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __sub__(self, other):
        return DenseMat(
            self.q,
            [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def scale(self, s):
        s = s if isinstance(s, QSqrt) else QSqrt(self.q, s)
        return DenseMat(self.q, [[s * x for x in row] for row in self.rows])

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(
                f"cannot multiply {self.nrows}x{self.ncols} "
                f"by {other.nrows}x{other.ncols}"
            )
        bcols = list(zip(*other.rows)) if other.rows else []
        zero = QSqrt(self.q, 0)
        out = []
        for arow in self.rows:
            orow = []
            for bcol in bcols:
                acc = zero
                for x, y in zip(arow, bcol):
                    if not x.is_zero() and not y.is_zero():
                        acc = acc + x * y
                orow.append(acc)
            out.append(orow)
        return DenseMat(self.q, out)

    def apply(self, vec):
        zero = QSqrt(self.q, 0)
        out = []
        for row in self.rows:
            acc = zero
            for x, v in zip(row, vec):
                if not x.is_zero():
                    acc = acc + x * (v if isinstance(v, QSqrt) else QSqrt(self.q, v))
            out.append(acc)
        return out

    def transpose(self):
        return DenseMat(self.q, [list(col) for col in zip(*self.rows)])

    def is_zero(self):
        return all(v.is_zero() for row in self.rows for v in row)

    def __eq__(self, other):
        if not isinstance(other, DenseMat):
            return NotImplemented
        return (
            self.q == other.q
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and all(
                x == y for r1, r2 in zip(self.rows, other.rows) for x, y in zip(r1, r2)
            )
        )

    def __hash__(self):
        raise TypeError("DenseMat is not hashable")

    def inverse(self):
        """Inverse by Gauss-Jordan over the field Q(sqrt q)."""
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        work = [row[:] + irow[:] for row, irow in zip(self.rows, DenseMat.identity(self.q, n).rows)]
        for c in range(n):
            piv = next((r for r in range(c, n) if not work[r][c].is_zero()), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            work[c], work[piv] = work[piv], work[c]
            inv = work[c][c].inverse()
            work[c] = [inv * v for v in work[c]]
            for r in range(n):
                if r != c and not work[r][c].is_zero():
                    f = work[r][c]
                    work[r] = [v - f * w for v, w in zip(work[r], work[c])]
        return DenseMat(self.q, [row[n:] for row in work])

    def kernel_basis(self):
        return dense_kernel_basis(self)

    def __repr__(self):
        return f"DenseMat({self.nrows}x{self.ncols}, q={self.q})"


def _int_echelon(rows, ncols):
    """Fraction-free row echelon over Z; returns (rows, pivot columns).

    Elimination uses cross-multiplication followed by a row gcd squeeze,
    so entries stay integral without Bareiss bookkeeping.
    """
    work = [row[:] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        prow = work[r]
        pval = prow[c]
        for i in range(r + 1, len(work)):
            f = work[i][c]
            if f:
                row = [pval * a - f * b for a, b in zip(work[i], prow)]
                g = 0
                for v in row:
                    if v:
                        g = gcd(g, v)
                        if g == 1:
                            break
                work[i] = [v // g for v in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def _kernel_from_echelon(rows, pivots, ncols):
    """Kernel basis vectors (as Fractions) from an integer echelon form."""
    basis = []
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    for f in free_cols:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            s = Fraction(0)
            for j in range(c + 1, ncols):
                if vec[j]:
                    s += rows[r][j] * vec[j]
            vec[c] = -s / rows[r][c]
        basis.append(vec)
    return basis


def dense_kernel_basis(m: DenseMat):
    """Exact basis of the right kernel of a dense QSqrt matrix."""
    q = m.q
    den = 1
    for row in m.rows:
        for v in row:
            d = v.a.denominator * v.b.denominator // gcd(
                v.a.denominator, v.b.denominator
            )
            den = den * d // gcd(den, d)
    if all(v.is_rational() for row in m.rows for v in row):
        int_rows = [[int(v.a * den) for v in row] for row in m.rows]
        ech, pivots = _int_echelon(int_rows, m.ncols)
        basis = _kernel_from_echelon(ech, pivots, m.ncols)
        out = []
        for vec in basis:
            scale = 1
            for x in vec:
                scale = scale * x.denominator // gcd(scale, x.denominator)
            out.append([QSqrt(q, x * scale) for x in vec])
        return out
    # General field elimination for genuinely irrational matrices.
    work = [row[:] for row in m.rows]
    pivots = []
    r = 0
    for c in range(m.ncols):
        piv = next((i for i in range(r, len(work)) if not work[i][c].is_zero()), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = work[r][c].inverse()
        work[r] = [inv * v for v in work[r]]
        for i in range(len(work)):
            if i != r and not work[i][c].is_zero():
                f = work[i][c]
                work[i] = [v - f * w for v, w in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    pivot_set = set(pivots)
    basis = []
    zero = QSqrt(q, 0)
    for f in [c for c in range(m.ncols) if c not in pivot_set]:
        vec = [zero] * m.ncols
        vec[f] = QSqrt(q, 1)
        for r, c in enumerate(pivots):
            vec[c] = -work[r][f]
        basis.append(vec)
    return basis


def linear_independence(mats) -> bool:
    """Whether a family of same-shape matrices is linearly independent.

    Flattens each matrix to a sparse vector and eliminates incrementally;
    exact, so the answer is unconditional.
    """
    mats = list(mats)
    if not mats:
        return True
    shape = (mats[0].nrows, mats[0].ncols)
    q = mats[0].q
    for m in mats[1:]:
        if (m.nrows, m.ncols) != shape:
            raise ValueError("matrices must share one shape")
    reduced = []  # list of (pivot position, {position: QSqrt}) rows
    for m in mats:
        vec = {pos: val for pos, val in m.entries()}
        for pivot, basis_vec in reduced:
            coeff = vec.get(pivot)
            if coeff is not None and not coeff.is_zero():
                f = coeff / basis_vec[pivot]
                for pos, val in basis_vec.items():
                    acc = vec.get(pos, QSqrt(q, 0)) - f * val
                    if acc.is_zero():
                        vec.pop(pos, None)
                    else:
                        vec[pos] = acc
        vec = {pos: val for pos, val in vec.items() if not val.is_zero()}
        if not vec:
            return False
        pivot = min(vec)
        reduced.append((pivot, vec))
    return True
