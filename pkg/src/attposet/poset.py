"""Enumeration of the attenuated space poset A_q(N, M).

Elements are subspaces of F_q^(N+M) meeting a fixed M-dimensional
subspace h trivially, graded by dimension.  Coordinates are fixed so
that h is the span of the last M standard basis vectors; a subspace
then lies in the poset exactly when all pivot columns of its reduced
row-echelon basis fall in the first N coordinates.  That basis is the
canonical representative, and each grade is ordered lexicographically
on its flattened entries so every run and cache is bit-identical.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from itertools import combinations, product

from .gfq import GFMatrix, _check_prime, _rref_rows, stack_rank

ENUMERATION_CAP = 10**6
CACHE_FORMAT = "attposet-cache/1"


class EnumerationCapExceeded(RuntimeError):
    """The instance would have more elements than the configured cap."""


class CacheError(ValueError):
    """A poset cache file failed validation on load."""


def gaussian_binomial(n, k, q):
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@dataclass(frozen=True)
class InstanceParams:
    q: int
    N: int
    M: int

    def __post_init__(self):
        _check_prime(self.q)
        if self.N < 1 or self.M < 1:
            raise ValueError("N and M must be positive")

    @property
    def ambient_dim(self):
        return self.N + self.M

    def grade_size(self, i):
        return gaussian_binomial(self.N, i, self.q) * self.q ** (i * self.M)

    def poset_size(self):
        return sum(self.grade_size(i) for i in range(self.N + 1))


@dataclass(frozen=True)
class SubspaceCanon:
    """Canonical representative of a poset element: an RREF basis whose
    pivot columns all lie in the first N coordinates."""

    dim: int
    basis: GFMatrix

    def sort_key(self):
        return tuple(v for row in self.basis.rows for v in row)


def h_basis(params: InstanceParams) -> GFMatrix:
    """Basis of the fixed subspace h (span of the last M coordinates)."""
    n = params.ambient_dim
    rows = tuple(
        tuple(1 if j == params.N + i else 0 for j in range(n)) for i in range(params.M)
    )
    return GFMatrix(params.q, params.M, n, rows)


def _rref_full_rank(nrows, ncols, q):
    """All full-rank nrows x ncols matrices over F_q in RREF, as row tuples."""
    if nrows == 0:
        yield ()
        return
    for pivots in combinations(range(ncols), nrows):
        pivot_set = set(pivots)
        free = [
            (r, c)
            for r in range(nrows)
            for c in range(ncols)
            if c > pivots[r] and c not in pivot_set
        ]
        base = [[0] * ncols for _ in range(nrows)]
        for r, c in zip(range(nrows), pivots):
            base[r][c] = 1
        if not free:
            yield tuple(tuple(row) for row in base)
            continue
        for vals in product(range(q), repeat=len(free)):
            rows = [row[:] for row in base]
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield tuple(tuple(row) for row in rows)


class Poset:
    """The enumerated poset: per-grade canonical elements plus index maps."""

    def __init__(self, params: InstanceParams, grades):
        self.params = params
        self.grades = tuple(tuple(g) for g in grades)
        self.offsets = []
        total = 0
        for g in self.grades:
            self.offsets.append(total)
            total += len(g)
        self.size = total
        self.index = {}
        self._row_index = {}
        for i, grade in enumerate(self.grades):
            off = self.offsets[i]
            for pos, x in enumerate(grade):
                self.index[x] = (i, pos)
                self._row_index[x.basis.rows] = off + pos

    def grade_sizes(self):
        return [len(g) for g in self.grades]

    def global_index(self, x: SubspaceCanon) -> int:
        i, pos = self.index[x]
        return self.offsets[i] + pos

    def grade_of_global(self, gidx):
        for i in range(len(self.grades) - 1, -1, -1):
            if gidx >= self.offsets[i]:
                return i
        raise IndexError(gidx)

    def element(self, gidx) -> SubspaceCanon:
        i = self.grade_of_global(gidx)
        return self.grades[i][gidx - self.offsets[i]]


def enumerate_poset(params: InstanceParams, cap=ENUMERATION_CAP) -> Poset:
    """Enumerate every element of A_q(N, M), grade by grade.

    Each i-dimensional element is built as an RREF i x N rank-i block over
    the free coordinates paired with an arbitrary i x M tail block; the
    combined matrix is already the canonical RREF basis.
    """
    total = params.poset_size()
    if total > cap:
        raise EnumerationCapExceeded(
            f"instance has {total} elements, above the cap of {cap}"
        )
    q, N, M = params.q, params.N, params.M
    grades = []
    for i in range(N + 1):
        members = []
        for head in _rref_full_rank(i, N, q):
            for tail in product(product(range(q), repeat=M), repeat=i):
                rows = tuple(hr + tr for hr, tr in zip(head, tail))
                basis = GFMatrix(q, i, N + M, rows)
                members.append(SubspaceCanon(i, basis))
        members.sort(key=SubspaceCanon.sort_key)
        grades.append(members)
    return Poset(params, grades)


def covers(x: SubspaceCanon, y: SubspaceCanon) -> bool:
    """Whether y covers x: dim y = dim x + 1 and x is contained in y."""
    if y.dim != x.dim + 1:
        return False
    p = y.basis.p
    rows, _ = _rref_rows(list(y.basis.rows) + list(x.basis.rows), y.basis.ncols, p)
    return len(rows) == y.dim


def in_tilde(x: SubspaceCanon, y: SubspaceCanon, params: InstanceParams) -> bool:
    """Whether x + y is (dim+1)-dimensional and meets h in dimension one."""
    if x.dim != y.dim:
        raise ValueError(f"grade mismatch: {x.dim} vs {y.dim}")
    rows, _ = _rref_rows(
        list(x.basis.rows) + list(y.basis.rows), x.basis.ncols, x.basis.p
    )
    if len(rows) != x.dim + 1:
        return False
    span = GFMatrix(params.q, len(rows), x.basis.ncols, tuple(rows))
    meet_dim = len(rows) + params.M - stack_rank(span, h_basis(params))
    return meet_dim == 1


_COEFF_CACHE = {}


def _hyperplane_coeffs(k, q):
    """All bases of hyperplanes of F_q^k, as (k-1) x k RREF matrices."""
    key = (k, q)
    if key not in _COEFF_CACHE:
        _COEFF_CACHE[key] = list(_rref_full_rank(k - 1, k, q))
    return _COEFF_CACHE[key]


def _combine(coeffs, rows, q):
    """Rows of coeffs @ rows over F_q (small dense product)."""
    out = []
    for crow in coeffs:
        acc = [0] * len(rows[0])
        for c, brow in zip(crow, rows):
            if c:
                acc = [(a + c * b) % q for a, b in zip(acc, brow)]
        out.append(tuple(acc))
    return out


def hyperplanes(x: SubspaceCanon, q):
    """Canonical bases of all (dim-1)-dimensional subspaces of x."""
    if x.dim == 0:
        return
    ncols = x.basis.ncols
    for coeffs in _hyperplane_coeffs(x.dim, q):
        rows = _combine(coeffs, x.basis.rows, q)
        reduced, _ = _rref_rows(rows, ncols, q)
        yield tuple(reduced)


def h_line_vectors(params: InstanceParams):
    """One normalized vector per 1-dimensional subspace of h."""
    q, N, M = params.q, params.N, params.M
    for lead in range(M):
        for rest in product(range(q), repeat=M - lead - 1):
            tail = [0] * lead + [1] + list(rest)
            yield tuple([0] * N + tail)


def tilde_neighbors(poset: Poset, x: SubspaceCanon):
    """All y in the same grade with x + y in tilde-P (Definition-4.2 pairs).

    Every such y arises exactly once as a hyperplane of w = x + line for a
    unique line in h, which avoids the quadratic scan over grade pairs.
    """
    params = poset.params
    q, N = params.q, params.N
    ncols = params.ambient_dim
    x_rows = x.basis.rows
    for z in h_line_vectors(params):
        w_rows = list(x_rows) + [z]
        for coeffs in _hyperplane_coeffs(x.dim + 1, q):
            rows = _combine(coeffs, w_rows, q)
            reduced, pivots = _rref_rows(rows, ncols, q)
            if any(c >= N for c in pivots):
                continue  # y meets h, not a poset element
            rows_t = tuple(reduced)
            if rows_t == x_rows:
                continue
            yield SubspaceCanon(x.dim, GFMatrix(q, x.dim, ncols, rows_t))


def _payload_checksum(q, N, M, grades_json):
    blob = json.dumps([q, N, M, grades_json], separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def save_cache(poset: Poset, path):
    """Write the poset to a single JSON cache document."""
    p = poset.params
    grades_json = [
        [[list(row) for row in x.basis.rows] for x in grade] for grade in poset.grades
    ]
    doc = {
        "format": CACHE_FORMAT,
        "q": p.q,
        "N": p.N,
        "M": p.M,
        "grades": grades_json,
        "checksum": _payload_checksum(p.q, p.N, p.M, grades_json),
    }
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        json.dump(doc, fh, separators=(",", ":"))
    os.replace(tmp, path)


def load_cache(path, expect: InstanceParams | None = None) -> Poset:
    """Load and validate a poset cache; round trips are exact."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CacheError(f"malformed cache file {path}: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != CACHE_FORMAT:
        raise CacheError(
            f"unsupported cache format {doc.get('format')!r}"
            if isinstance(doc, dict)
            else "malformed cache file: not a JSON object"
        )
    for field in ("q", "N", "M", "grades", "checksum"):
        if field not in doc:
            raise CacheError(f"malformed cache file: missing field {field!r}")
    q, N, M = doc["q"], doc["N"], doc["M"]
    if doc["checksum"] != _payload_checksum(q, N, M, doc["grades"]):
        raise CacheError("cache checksum mismatch")
    try:
        params = InstanceParams(q, N, M)
    except ValueError as exc:
        raise CacheError(f"invalid cached parameters: {exc}") from None
    if expect is not None and params != expect:
        raise CacheError(f"cache holds {params}, expected {expect}")
    grades_json = doc["grades"]
    if len(grades_json) != N + 1:
        raise CacheError(f"expected {N + 1} grades, found {len(grades_json)}")
    grades = []
    for i, grade_json in enumerate(grades_json):
        if len(grade_json) != params.grade_size(i):
            raise CacheError(
                f"grade {i} has {len(grade_json)} elements, "
                f"expected {params.grade_size(i)}"
            )
        members = []
        for rows in grade_json:
            basis = GFMatrix.from_rows(rows, params.ambient_dim, q)
            if basis.nrows != i:
                raise CacheError(f"grade {i} holds a basis with {basis.nrows} rows")
            reduced, pivots = _rref_rows(basis.rows, basis.ncols, q)
            if tuple(reduced) != basis.rows or len(pivots) != i:
                raise CacheError("cached basis is not a canonical RREF")
            if any(c >= N for c in pivots):
                raise CacheError("cached basis meets h nontrivially")
            members.append(SubspaceCanon(i, basis))
        if members != sorted(members, key=SubspaceCanon.sort_key):
            raise CacheError(f"grade {i} is not in canonical order")
        grades.append(members)
    return Poset(params, grades)
