"""Prime-field arithmetic and the small dense linear algebra used to
enumerate and compare subspaces of F_p^n.

Matrices are tiny here (at most (N+M) columns), so everything is dense,
rows are tuples of residues, and reductions are performed eagerly.
Pivot columns are reported 1-indexed; internal helpers work 0-indexed.
"""

from __future__ import annotations

from dataclasses import dataclass


def is_prime(p):
    if not isinstance(p, int) or p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _check_prime(p):
    if not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p!r}")


class FieldScalar:
    """A residue in F_p with its modulus attached. Immutable."""

    __slots__ = ("value", "p")

    def __init__(self, value, p):
        _check_prime(p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "value", value % p)

    def __setattr__(self, name, value):
        raise AttributeError("FieldScalar is immutable")

    def _coerce(self, other):
        if isinstance(other, FieldScalar):
            if other.p != self.p:
                raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FieldScalar(self.value + self._coerce(other), self.p)

    def __sub__(self, other):
        return FieldScalar(self.value - self._coerce(other), self.p)

    def __mul__(self, other):
        return FieldScalar(self.value * self._coerce(other), self.p)

    def __neg__(self):
        return FieldScalar(-self.value, self.p)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return FieldScalar(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * FieldScalar(o, self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.p == other.p and self.value == other.value
        return self.value == int(other) % self.p

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldScalar({self.value}, p={self.p})"


@dataclass(frozen=True)
class GFMatrix:
    """Row-major matrix over F_p; rows are tuples of residues in [0, p)."""

    p: int
    nrows: int
    ncols: int
    rows: tuple

    @classmethod
    def from_rows(cls, rows, ncols, p):
        _check_prime(p)
        rows = tuple(tuple(int(v) % p for v in row) for row in rows)
        for row in rows:
            if len(row) != ncols:
                raise ValueError(f"row of width {len(row)}, expected {ncols}")
        return cls(p, len(rows), ncols, rows)

    def transpose(self):
        cols = tuple(tuple(row[j] for row in self.rows) for j in range(self.ncols))
        return GFMatrix(self.p, self.ncols, self.nrows, cols)

    def entry(self, i, j):
        return FieldScalar(self.rows[i][j], self.p)

    def __iter__(self):
        return iter(self.rows)


@dataclass(frozen=True)
class RrefResult:
    reduced: GFMatrix
    pivots: tuple  # 1-indexed column positions, strictly increasing
    rank: int


def _rref_rows(rows, ncols, p):
    """Reduced row echelon form of a list of residue tuples.

    Returns (rows, pivots) with zero rows removed and pivots 0-indexed.
    """
    work = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(work)
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if work[i][c] % p:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = pow(work[r][c] % p, p - 2, p)
        work[r] = [(v * inv) % p for v in work[r]]
        lead = work[r]
        for i in range(nrows):
            if i != r and work[i][c] % p:
                f = work[i][c] % p
                work[i] = [(a - f * b) % p for a, b in zip(work[i], lead)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [tuple(row) for row in work[:r]], pivots


def rref(m: GFMatrix) -> RrefResult:
    """Unique reduced row-echelon form of m's row space (zero rows dropped)."""
    rows, pivots = _rref_rows(m.rows, m.ncols, m.p)
    reduced = GFMatrix(m.p, len(rows), m.ncols, tuple(rows))
    return RrefResult(reduced, tuple(c + 1 for c in pivots), len(pivots))


def leading_positions(m: GFMatrix):
    """0-indexed leading-entry columns of an RREF matrix, one per row."""
    pivots = []
    last = -1
    for row in m.rows:
        c = next((j for j, v in enumerate(row) if v), None)
        if c is None or c <= last or row[c] != 1:
            raise ValueError("basis is not in reduced row-echelon form")
        pivots.append(c)
        last = c
    return pivots


def row_space_contains(basis: GFMatrix, v) -> bool:
    """Whether v lies in the row space of a matrix already in RREF.

    Reduces v against the pivot rows and tests for a zero residual.
    """
    vec = [int(x) % basis.p for x in v]
    if len(vec) != basis.ncols:
        raise ValueError(f"vector of width {len(vec)}, expected {basis.ncols}")
    p = basis.p
    for row, c in zip(basis.rows, leading_positions(basis)):
        f = vec[c]
        if f:
            vec = [(a - f * b) % p for a, b in zip(vec, row)]
    return not any(vec)


def stack_rank(a: GFMatrix, b: GFMatrix) -> int:
    """Rank of the vertical stack of a and b."""
    if a.ncols != b.ncols:
        raise ValueError(f"width mismatch: {a.ncols} vs {b.ncols}")
    if a.p != b.p:
        raise ValueError(f"modulus mismatch: {a.p} vs {b.p}")
    _, pivots = _rref_rows(list(a.rows) + list(b.rows), a.ncols, a.p)
    return len(pivots)
