"""Irreducible-module models, central elements, spectral decomposition of
the standard module, and the quantum-group checks.

Types (r, d) index the isomorphism classes of irreducible modules; each
gets an explicit (d+1)-dimensional model.  The central elements C1, C2 act
on a type as an explicitly predicted pair of scalars, and the standard
module decomposes as the joint eigenspaces of that pair.  Because C1, C2
commute with every grade projector, each joint kernel is computed grade
block by grade block, which keeps the exact eliminations small.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import algebra
from .algebra import CheckResult, GeneratorSet
from .exact import DenseMat, QSqrt, SparseMat, _int_echelon, _kernel_from_echelon, q_power, qpow
from .poset import InstanceParams


class SpectralError(RuntimeError):
    """An exact spectral computation contradicted the predicted shape."""


@dataclass(frozen=True, order=True)
class ModuleType:
    r: int
    d: int


def enumerate_types(params: InstanceParams):
    """All realizable (endpoint, diameter) pairs for this instance."""
    N, M = params.N, params.M
    out = []
    for r in range(N + 1):
        for d in range(N + 1):
            if N - 2 * r <= d <= N - r and d <= N + M - 2 * r:
                out.append(ModuleType(r, d))
    return sorted(out)


def x_coeff(r, d, i, params: InstanceParams) -> QSqrt:
    """The lowering coefficient x_{r+i}(r, d); nonzero for 1 <= i <= d."""
    if not 1 <= i <= d:
        raise ValueError(f"i must be in 1..{d}, got {i}")
    q = params.q
    val = (
        qpow(q, params.N + params.M - r - d)
        * (q**i - 1)
        * (q ** (d + 1 - i) - 1)
        / (q - 1) ** 2
    )
    return QSqrt(q, val)


@dataclass
class ModuleModel:
    """Explicit matrices of the irreducible module of one type, in the
    basis w_0..w_d: R shifts up, L lowers with the x coefficients, K is
    the grade weighting."""

    type: ModuleType
    params: InstanceParams
    Rm: DenseMat
    Lm: DenseMat
    Km: DenseMat

    def k_inverse(self):
        q = self.params.q
        n = self.Km.nrows
        return DenseMat.diagonal(
            q, [self.Km.entry(i, i).inverse() for i in range(n)]
        )


def module_model(t: ModuleType, params: InstanceParams) -> ModuleModel:
    if t not in enumerate_types(params):
        raise ValueError(f"{t} is not a realizable type for {params}")
    q = params.q
    r, d = t.r, t.d
    n = d + 1
    Rm = DenseMat.zeros(q, n, n)
    for i in range(d):
        Rm.set_entry(i + 1, i, 1)
    Lm = DenseMat.zeros(q, n, n)
    for i in range(1, d + 1):
        Lm.set_entry(i - 1, i, x_coeff(r, d, i, params))
    Km = DenseMat.diagonal(
        q, [qpow(q, params.N + params.M - r - i) for i in range(n)]
    )
    return ModuleModel(t, params, Rm, Lm, Km)


def predicted_scalars(t: ModuleType, params: InstanceParams):
    """Exact scalars by which C1 and C2 act on a module of type t."""
    q = params.q
    r, d = t.r, t.d
    c1 = QSqrt(
        q,
        Fraction(1, q - 1) * qpow(q, params.N + params.M - r) * (1 + qpow(q, -d - 1)),
    )
    c2 = QSqrt(q, qpow(q, 2 * params.N + 2 * params.M - 2 * r - d))
    return c1, c2


@dataclass
class CentralPack:
    """C1, C2 with their per-type predicted scalars; spectral data
    (multiplicities, projections, Phi/Omega) filled in by
    spectral_decompose."""

    params: InstanceParams
    C1: SparseMat
    C2: SparseMat
    scalars: dict
    multiplicities: dict | None = None
    grade_kernels: dict | None = None
    projections: dict | None = None
    Phi: DenseMat | None = None
    Omega: DenseMat | None = None
    Phi_inv: DenseMat | None = None
    Omega_inv: DenseMat | None = None


def build_central(g: GeneratorSet) -> CentralPack:
    C1, C2 = algebra.central_elements(g)
    scalars = {t: predicted_scalars(t, g.params) for t in enumerate_types(g.params)}
    return CentralPack(g.params, C1, C2, scalars)


def _block_int_rows(m: SparseMat, start, size):
    """Dense integer rows of the square diagonal block m[start:start+size]
    (entries are numerators over m.den)."""
    out = []
    for i in range(start, start + size):
        row = [0] * size
        for c, a, b in m.rows[i]:
            if b:
                raise SpectralError("central element has an irrational entry")
            if start <= c < start + size:
                row[c - start] = a
        out.append(row)
    return out


def multiplicities_from_grades(params: InstanceParams):
    """Independent oracle: solve the grade-size equations
    |P_i| = sum of m_(r,d) over types with r <= i <= r+d.

    Returns the unique exact solution, or None when the system is
    underdetermined for this instance.
    """
    types = enumerate_types(params)
    rows = []
    rhs = []
    for i in range(params.N + 1):
        rows.append([1 if t.r <= i <= t.r + t.d else 0 for t in types])
        rhs.append(params.grade_size(i))
    aug = [row + [b] for row, b in zip(rows, rhs)]
    ech, pivots = _int_echelon(aug, len(types) + 1)
    if len(types) in pivots:
        raise SpectralError("grade-size system is inconsistent")
    if len(pivots) < len(types):
        return None
    sol = _kernel_from_echelon(
        [row[: len(types)] + [-row[len(types)]] for row in ech],
        pivots,
        len(types) + 1,
    )
    # kernel of [A | -b] with free column = the last one gives the solution
    vec = sol[0]
    assert vec[len(types)] == 1
    out = {}
    for t, v in zip(types, vec):
        if v.denominator != 1 or v < 0:
            raise SpectralError(f"non-integral multiplicity {v} for {t}")
        out[t] = int(v)
    return out


def spectral_decompose(
    g: GeneratorSet,
    pack: CentralPack | None = None,
    dense_cap=algebra.DENSE_CAP,
    with_projections="auto",
    projection_cap=300,
) -> CentralPack:
    """Decompose the standard module by joint (C1, C2) eigenvalues.

    Multiplicities come from exact per-grade joint kernels; the dimension
    count must tile the whole space, which also certifies that no
    eigenvalue pair outside the predicted list occurs.
    """
    if g.size > dense_cap:
        raise algebra.DenseCapExceeded(
            f"spectral decomposition needs |P| <= {dense_cap}, instance has {g.size}"
        )
    pack = pack or build_central(g)
    params = g.params
    q, N = params.q, params.N
    types = enumerate_types(params)
    pairs = [pack.scalars[t] for t in types]
    if len({(c1.a, c1.b, c2.a, c2.b) for c1, c2 in pairs}) != len(pairs):
        raise SpectralError("predicted (c1, c2) pairs are not pairwise distinct")
    poset = g.poset
    mults = {}
    grade_kernels = {}
    for t in types:
        c1, c2 = pack.scalars[t]
        per_grade = {}
        for i in range(N + 1):
            size = len(poset.grades[i])
            start = poset.offsets[i]
            rows = []
            for mat, c in ((pack.C1, c1), (pack.C2, c2)):
                block = _block_int_rows(mat, start, size)
                cn, cd = c.a.numerator, c.a.denominator
                for j, row in enumerate(block):
                    srow = [cd * v for v in row]
                    srow[j] -= cn * mat.den
                    rows.append(srow)
            ech, pivots = _int_echelon(rows, size)
            kdim = size - len(pivots)
            if kdim and not (t.r <= i <= t.r + t.d):
                raise SpectralError(f"type {t}: unexpected kernel at grade {i}")
            if kdim:
                per_grade[i] = (ech, pivots, size)
        dims = [
            (len(poset.grades[i]) - len(per_grade[i][1])) if i in per_grade else 0
            for i in range(N + 1)
        ]
        inside = [dims[i] for i in range(t.r, t.r + t.d + 1)]
        if len(set(inside)) != 1:
            raise SpectralError(
                f"type {t}: joint eigenspace dimension {sum(inside)} is not "
                f"divisible by d+1 = {t.d + 1} across grades {inside}"
            )
        mults[t] = inside[0]
        grade_kernels[t] = per_grade
    total = sum(m * (t.d + 1) for t, m in mults.items())
    if total != g.size:
        raise SpectralError(
            f"joint eigenspaces tile {total} dimensions of {g.size}"
        )
    oracle = multiplicities_from_grades(params)
    if oracle is not None and oracle != mults:
        raise SpectralError(
            f"kernel multiplicities {mults} disagree with the grade oracle {oracle}"
        )
    pack.multiplicities = mults
    pack.grade_kernels = grade_kernels
    if with_projections == "auto":
        with_projections = g.size <= projection_cap
    if with_projections:
        _build_projections(g, pack, types)
    return pack


def _kernel_vectors(ech, pivots, size):
    """Integer kernel basis vectors from a stored echelon form."""
    out = []
    for vec in _kernel_from_echelon(ech, pivots, size):
        den = 1
        for x in vec:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in vec])
    return out


def _build_projections(g: GeneratorSet, pack: CentralPack, types):
    """Assemble the primitive central idempotents e_t from the joint
    eigenbases, then Phi and Omega with their inverses."""
    q = g.params.q
    n = g.size
    poset = g.poset
    columns = []
    owners = []
    for t in types:
        per_grade = pack.grade_kernels[t]
        for i in sorted(per_grade):
            ech, pivots, size = per_grade[i]
            off = poset.offsets[i]
            for vec in _kernel_vectors(ech, pivots, size):
                col = [Fraction(0)] * n
                for j, v in enumerate(vec):
                    col[off + j] = Fraction(v)
                columns.append(col)
                owners.append(t)
    if len(columns) != n:
        raise SpectralError("joint eigenvectors do not span the module")
    u_rows = [[columns[c][r] for c in range(n)] for r in range(n)]
    uinv_rows = _fraction_inverse(u_rows)
    projections = {}
    for t in types:
        cols = [c for c, owner in enumerate(owners) if owner == t]
        rows = []
        for i in range(n):
            urow = u_rows[i]
            rows.append(
                [
                    sum(urow[c] * uinv_rows[c][j] for c in cols)
                    for j in range(n)
                ]
            )
        projections[t] = DenseMat(q, [[QSqrt(q, v) for v in row] for row in rows])
    pack.projections = projections
    zero = DenseMat.zeros(q, n, n)

    def combine(weight):
        acc = zero
        for t in types:
            acc = acc + projections[t].scale(weight(t))
        return acc

    pack.Phi = combine(lambda t: QSqrt(q, qpow(q, t.r)))
    pack.Phi_inv = combine(lambda t: QSqrt(q, qpow(q, -t.r)))
    pack.Omega = combine(lambda t: q_power(q, t.d))
    pack.Omega_inv = combine(lambda t: q_power(q, -t.d))


def _fraction_inverse(rows):
    """Gauss-Jordan inverse of a rational matrix given as Fraction rows."""
    n = len(rows)
    work = [
        [Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(rows)
    ]
    for c in range(n):
        piv = next((r for r in range(c, n) if work[r][c]), None)
        if piv is None:
            raise SpectralError("joint eigenvector matrix is singular")
        work[c], work[piv] = work[piv], work[c]
        inv = 1 / work[c][c]
        work[c] = [v * inv for v in work[c]]
        prow = work[c]
        for r in range(n):
            if r != c and work[r][c]:
                f = work[r][c]
                work[r] = [v - f * w for v, w in zip(work[r], prow)]
    return [row[n:] for row in work]


def verify_phi_omega(g: GeneratorSet, pack: CentralPack) -> CheckResult:
    """The two matrix identities expressing C1, C2 through Phi, Omega."""
    if pack.projections is None:
        raise ValueError("spectral projections are required; run spectral_decompose")
    q = g.params.q
    tau = QSqrt(q, 0, 1)
    scale = qpow(q, g.params.N + g.params.M - 1)
    inner = pack.Omega.scale(tau) + pack.Omega_inv.scale(tau.inverse())
    rhs1 = (
        (pack.Phi_inv @ pack.Omega_inv @ inner)
        .scale(QSqrt(q, scale) * (tau - tau.inverse()).inverse())
    )
    ok1 = pack.C1.to_dense() == rhs1
    rhs2 = (pack.Phi_inv @ pack.Phi_inv @ pack.Omega_inv @ pack.Omega_inv).scale(
        qpow(q, 2 * (g.params.N + g.params.M))
    )
    ok2 = pack.C2.to_dense() == rhs2
    witness = None if (ok1 and ok2) else {"identity": "C1" if not ok1 else "C2"}
    return CheckResult("PHI-OMEGA", ok1 and ok2, "dense", witness=witness)


# -- quantum group checks ----------------------------------------------

def _chevalley_ok(q, e, f, k, kinv):
    """The Chevalley relations at tau = sqrt(q) for dense e, f, k."""
    n = k.nrows
    ident = DenseMat.identity(q, n)
    tau = QSqrt(q, 0, 1)
    if not (k @ kinv == ident and kinv @ k == ident):
        return "kk^-1 = 1"
    if not (k @ e == (e @ k).scale(q)):
        return "ke = tau^2 ek"
    if not (k @ f == (f @ k).scale(Fraction(1, q))):
        return "kf = tau^-2 fk"
    lhs = e @ f - f @ e
    rhs = (k - kinv).scale((tau - tau.inverse()).inverse())
    if not (lhs == rhs):
        return "ef - fe = (k - k^-1)/(tau - tau^-1)"
    return None


def verify_uqsl2(
    t: ModuleType, params: InstanceParams, theta_powers=(0, 0)
) -> CheckResult:
    """Chevalley relations on the (d+1)-dimensional model of one type.

    Phi and Omega act as the scalars q^r and q^(d/2); Theta = Phi^a Omega^b
    is the optional invertible central twist.
    """
    q = params.q
    model = module_model(t, params)
    a, b = theta_powers
    theta = q_power(q, 2 * a * t.r + b * t.d)
    phi_omega = q_power(q, 2 * t.r + t.d)
    e = model.Lm.scale(theta)
    f = model.Rm.scale(
        q_power(q, 1 - 2 * (params.N + params.M)) * theta.inverse() * phi_omega
    )
    k = model.Km.scale(q_power(q, -2 * (params.N + params.M)) * phi_omega)
    kinv = DenseMat.diagonal(q, [k.entry(i, i).inverse() for i in range(k.nrows)])
    bad = _chevalley_ok(q, e, f, k, kinv)
    return CheckResult(
        f"UQSL2:{t.r},{t.d}", bad is None, "dense",
        witness=None if bad is None else {"relation": bad, "type": [t.r, t.d]},
    )


def verify_uqsl2_global(
    g: GeneratorSet, pack: CentralPack, theta_powers=(0, 0)
) -> CheckResult:
    """Chevalley relations on the whole standard module, with
    Theta = Phi^a Omega^b built from the spectral projections."""
    if pack.projections is None:
        raise ValueError("spectral projections are required; run spectral_decompose")
    q = g.params.q
    n = g.size
    a, b = theta_powers

    def dense_power(mat, inv, k):
        acc = DenseMat.identity(q, n)
        base = mat if k >= 0 else inv
        for _ in range(abs(k)):
            acc = acc @ base
        return acc

    theta = dense_power(pack.Phi, pack.Phi_inv, a) @ dense_power(
        pack.Omega, pack.Omega_inv, b
    )
    theta_inv = dense_power(pack.Phi, pack.Phi_inv, -a) @ dense_power(
        pack.Omega, pack.Omega_inv, -b
    )
    phi_omega = pack.Phi @ pack.Omega
    phi_omega_inv = pack.Omega_inv @ pack.Phi_inv
    e = theta @ g.L.to_dense()
    f = (theta_inv @ phi_omega @ g.R.to_dense()).scale(
        q_power(q, 1 - 2 * (g.params.N + g.params.M))
    )
    k = (phi_omega @ g.K.to_dense()).scale(qpow(q, -(g.params.N + g.params.M)))
    kinv = (phi_omega_inv @ g.Kinv.to_dense()).scale(qpow(q, g.params.N + g.params.M))
    bad = _chevalley_ok(q, e, f, k, kinv)
    return CheckResult(
        "UQSL2:global", bad is None, "dense",
        witness=None if bad is None else {"relation": bad},
    )


# -- per-module relation catalog ---------------------------------------

def model_ops(model: ModuleModel):
    """Dense operator map for evaluating catalog identities on a model.

    S is not defined on a bare module; it is pinned by the S + LR - RL
    relation, which is how the catalog treats it here.
    """
    q = model.params.q
    params = model.params
    n = model.Rm.nrows
    km_inv = model.k_inverse()
    ident = DenseMat.identity(q, n)
    rl = model.Rm @ model.Lm
    lr = model.Lm @ model.Rm
    s = (
        (
            model.Km
            - km_inv.scale(qpow(q, params.N + params.M))
            + ident.scale(1 - q**params.M)
        ).scale(Fraction(1, q - 1))
        - lr
        + rl
    )
    return {
        "R": model.Rm,
        "L": model.Lm,
        "K": model.Km,
        "Kinv": km_inv,
        "S": s,
        "I": ident,
    }


def verify_relation_on_model(rel_id, model: ModuleModel) -> CheckResult:
    """Evaluate a catalog relation on the dense module model (REL-01..15)."""
    ops = model_ops(model)
    q = model.params.q
    n = model.Rm.nrows

    def side(terms):
        acc = DenseMat.zeros(q, n, n)
        for coeff, word in terms:
            m = ops["I"]
            for name in word:
                m = m @ ops[name]
            acc = acc + m.scale(coeff)
        return acc

    for sub_id, lhs, rhs in algebra.relation_identities(rel_id, model.params):
        if not (side(lhs) == side(rhs)):
            return CheckResult(
                f"{rel_id}@{model.type.r},{model.type.d}", False, "dense",
                witness={"identity": sub_id},
            )
    return CheckResult(f"{rel_id}@{model.type.r},{model.type.d}", True, "dense")
