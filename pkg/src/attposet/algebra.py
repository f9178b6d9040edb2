"""Generators of the incidence algebra and the machine-checked relation
catalog.

Relations are stored as two-sided expressions: lists of (coefficient, word)
terms over the operator alphabet R, L, K, Kinv, S, F0..FN, I.  Before
evaluation every identity is scaled by the least common denominator of its
coefficients, so dense products and matrix-free matvec chains both run in
Z[sqrt q].  Dense mode asserts the exact zero matrix; matrix-free mode
asserts exact annihilation of seeded random integer vectors and is the only
mode permitted above the dense cap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .exact import (
    QSqrt,
    SparseMat,
    _int_echelon,
    linear_independence,
    qpow,
    qsqrt_to_wire,
    tau_bracket,
)
from .poset import Poset, hyperplanes, tilde_neighbors

DENSE_CAP = 3000

RELATION_IDS = tuple(
    [f"REL-{i:02d}" for i in range(1, 20)] + ["REL-22", "REL-23", "REL-24"]
)


class UnknownRelation(ValueError):
    pass


class DenseCapExceeded(RuntimeError):
    pass


@dataclass
class CheckResult:
    id: str
    passed: bool
    mode: str
    trials: int | None = None
    seed: int | None = None
    witness: dict | None = None

    def to_json(self):
        return {
            "id": self.id,
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
            "pass": self.passed,
            "witness": self.witness,
        }


class GeneratorSet:
    """The sparse generators R, L, K, K^-1, F_0..F_N (and lazily S) of one
    instance, indexed by the poset's global element order."""

    def __init__(self, poset: Poset):
        self.poset = poset
        self.params = poset.params
        q, N, M = self.params.q, self.params.N, self.params.M
        n = poset.size
        self.size = n
        r_pos = []
        for i in range(1, N + 1):
            off = poset.offsets[i]
            for pos, x in enumerate(poset.grades[i]):
                gx = off + pos
                for rows in hyperplanes(x, q):
                    r_pos.append((gx, poset._row_index[rows]))
        self.R = SparseMat.from_unit_entries(q, n, n, r_pos)
        self.L = SparseMat.from_unit_entries(q, n, n, [(j, i) for i, j in r_pos])
        grade_of = [i for i in range(N + 1) for _ in poset.grades[i]]
        self.grade_of = grade_of
        self.K = SparseMat.diagonal(q, [qpow(q, N + M - i) for i in grade_of])
        self.Kinv = SparseMat.diagonal(q, [qpow(q, i - N - M) for i in grade_of])
        self.F = [
            SparseMat.from_unit_entries(
                q, n, n, [(j, j) for j in range(poset.offsets[i], poset.offsets[i] + len(poset.grades[i]))]
            )
            for i in range(N + 1)
        ]
        self._S = None

    @property
    def S(self) -> SparseMat:
        """Pairs in the same grade whose span meets h in dimension one
        (Definition-4.2 matrix); built on first use."""
        if self._S is None:
            poset = self.poset
            n = self.size
            pos = []
            for grade in poset.grades:
                for x in grade:
                    gx = poset.global_index(x)
                    for y in tilde_neighbors(poset, x):
                        pos.append((gx, poset._row_index[y.basis.rows]))
            self._S = SparseMat.from_unit_entries(self.params.q, n, n, pos)
        return self._S

    def op(self, name) -> SparseMat:
        if name == "I":
            return SparseMat.identity(self.params.q, self.size)
        if name.startswith("F"):
            return self.F[int(name[1:])]
        if name == "S":
            return self.S
        return getattr(self, name)


def build_generators(poset: Poset) -> GeneratorSet:
    return GeneratorSet(poset)


def central_elements(g: GeneratorSet):
    """The central elements C1, C2 as sparse matrices (Definition-7.1 form)."""
    q = g.params.q
    RL = g.R.mul(g.L)
    LR = g.L.mul(g.R)
    C1 = (
        g.K.scale(Fraction(q + 1, q * (q - 1)))
        .add(RL)
        .sub(LR.scale(Fraction(1, q)))
    )
    C2 = (
        g.K.mul(g.K)
        .add(RL.mul(g.K).scale(q - 1))
        .sub(LR.mul(g.K).scale(q - 1))
    )
    return C1, C2


# -- expression algebra ------------------------------------------------
#
# A term is (coefficient, word); an expression is a list of terms and an
# identity is the pair (lhs, rhs) asserted equal.

def _t(coeff, *ops):
    return (coeff, tuple(ops))

def _expr_mul(e1, e2):
    return [(c1 * c2, w1 + w2) for c1, w1 in e1 for c2, w2 in e2]

def _expr_scale(e, s):
    return [(c * s, w) for c, w in e]

def _expr_sub(e1, e2):
    return list(e1) + [(-c, w) for c, w in e2]

def _commutator(e1, e2):
    return _expr_sub(_expr_mul(e1, e2), _expr_mul(e2, e1))


def _clear_pair(q, lhs, rhs):
    """Scale both sides by the lcm of coefficient denominators."""
    den = 1
    for c, _ in list(lhs) + list(rhs):
        c = c if isinstance(c, QSqrt) else QSqrt(q, c)
        for d in (c.a.denominator, c.b.denominator):
            den = den * d // gcd(den, d)
    def scaled(e):
        out = []
        for c, w in e:
            c = c if isinstance(c, QSqrt) else QSqrt(q, c)
            c = c * den
            if not c.is_zero():
                out.append((c, w))
        return out
    return scaled(lhs), scaled(rhs)


def _c1_expr(q):
    """C1 in generator words (natural, uncleared form)."""
    return [
        _t(Fraction(q + 1, q * (q - 1)), "K"),
        _t(1, "R", "L"),
        _t(Fraction(-1, q), "L", "R"),
    ]


def _c2_expr(q):
    return [
        _t(1, "K", "K"),
        _t(q - 1, "R", "L", "K"),
        _t(-(q - 1), "L", "R", "K"),
    ]


def relation_identities(rel_id, params):
    """Expand a catalog id into its (sub_id, lhs, rhs) identities, already
    cleared of denominators.  REL-18 is structural and handled separately."""
    q, N, M = params.q, params.N, params.M
    out = []

    def emit(sub_id, lhs, rhs=()):
        out.append((sub_id, *_clear_pair(q, lhs, rhs)))

    if rel_id == "REL-01":
        emit(rel_id, [_t(1, "R", "K")], [_t(q, "K", "R")])
    elif rel_id == "REL-02":
        emit(rel_id, [_t(1, "L", "K")], [_t(Fraction(1, q), "K", "L")])
    elif rel_id == "REL-03":
        emit(
            rel_id,
            [
                _t(Fraction(q, q + 1), "R", "L", "L"),
                _t(-1, "L", "R", "L"),
                _t(Fraction(1, q + 1), "L", "L", "R"),
                _t(1, "L", "K"),
            ],
        )
    elif rel_id == "REL-04":
        emit(
            rel_id,
            [
                _t(Fraction(q, q + 1), "R", "R", "L"),
                _t(-1, "R", "L", "R"),
                _t(Fraction(1, q + 1), "L", "R", "R"),
                _t(1, "K", "R"),
            ],
        )
    elif rel_id in ("REL-05", "REL-06", "REL-07", "REL-08"):
        c3 = Fraction(1, q**3 - 1)
        if rel_id == "REL-05":
            lhs = [_t(1, "R", "R", "L", "R")]
            rhs = [
                _t(Fraction(q + 1, q * q), "R", "R", "K"),
                _t(c3 * q * (q * q - 1), "R", "R", "R", "L"),
                _t(c3 * (q - 1), "L", "R", "R", "R"),
            ]
        elif rel_id == "REL-06":
            lhs = [_t(1, "R", "L", "R", "R")]
            rhs = [
                _t(Fraction(q + 1, q * q), "R", "R", "K"),
                _t(c3 * q * q * (q - 1), "R", "R", "R", "L"),
                _t(c3 * (q * q - 1), "L", "R", "R", "R"),
            ]
        elif rel_id == "REL-07":
            lhs = [_t(1, "L", "L", "R", "L")]
            rhs = [
                _t(q + 1, "L", "L", "K"),
                _t(c3 * q * q * (q - 1), "R", "L", "L", "L"),
                _t(c3 * (q * q - 1), "L", "L", "L", "R"),
            ]
        else:
            lhs = [_t(1, "L", "R", "L", "L")]
            rhs = [
                _t(q + 1, "L", "L", "K"),
                _t(c3 * q * (q * q - 1), "R", "L", "L", "L"),
                _t(c3 * (q - 1), "L", "L", "L", "R"),
            ]
        emit(rel_id, lhs, rhs)
    elif rel_id in ("REL-09", "REL-10"):
        br = tau_bracket(q, 3)  # q + 1 + 1/q
        a, b = ("R", "L") if rel_id == "REL-09" else ("L", "R")
        emit(
            rel_id,
            [
                _t(1, a, a, a, b),
                _t(-br, a, a, b, a),
                _t(br, a, b, a, a),
                _t(-1, b, a, a, a),
            ],
        )
    elif rel_id == "REL-11":
        gens = {"RL": [_t(1, "R", "L")], "LR": [_t(1, "L", "R")],
                "K": [_t(1, "K")], "Kinv": [_t(1, "Kinv")]}
        names = list(gens)
        for idx, x in enumerate(names):
            for y in names[idx + 1:]:
                emit(f"{rel_id}:[{x},{y}]", _commutator(gens[x], gens[y]))
    elif rel_id == "REL-12":
        emit(
            rel_id,
            [_t(1, "S"), _t(1, "L", "R"), _t(-1, "R", "L")],
            [
                _t(Fraction(1, q - 1), "K"),
                _t(Fraction(-(q ** (N + M)), q - 1), "Kinv"),
                _t(Fraction(1 - q**M, q - 1), "I"),
            ],
        )
    elif rel_id == "REL-13":
        emit(rel_id, [_t(1, "L", "S"), _t(-q, "S", "L")], [_t(q**M - 1, "L")])
    elif rel_id == "REL-14":
        emit(rel_id, [_t(1, "S", "R"), _t(-q, "R", "S")], [_t(q**M - 1, "R")])
    elif rel_id == "REL-15":
        s = [_t(1, "S")]
        for name, e in (
            ("RL", [_t(1, "R", "L")]),
            ("LR", [_t(1, "L", "R")]),
            ("K", [_t(1, "K")]),
            ("Kinv", [_t(1, "Kinv")]),
        ):
            emit(f"{rel_id}:[S,{name}]", _commutator(s, e))
    elif rel_id == "REL-16":
        for i in range(N + 1):
            for j in range(N + 1):
                lhs = [_t(1, f"F{i}", f"F{j}")]
                rhs = [_t(1, f"F{i}")] if i == j else []
                emit(f"{rel_id}:F{i}F{j}", lhs, rhs)
        emit(f"{rel_id}:sum", [_t(1, f"F{i}") for i in range(N + 1)], [_t(1, "I")])
    elif rel_id == "REL-17":
        for i in range(N):
            emit(f"{rel_id}:RF{i}", [_t(1, "R", f"F{i}")], [_t(1, f"F{i + 1}", "R")])
        emit(f"{rel_id}:RF{N}", [_t(1, "R", f"F{N}")])
        emit(f"{rel_id}:F0R", [_t(1, "F0", "R")])
        for i in range(1, N + 1):
            emit(f"{rel_id}:LF{i}", [_t(1, "L", f"F{i}")], [_t(1, f"F{i - 1}", "L")])
        emit(f"{rel_id}:LF0", [_t(1, "L", "F0")])
        emit(f"{rel_id}:FNL", [_t(1, f"F{N}", "L")])
    elif rel_id == "REL-19":
        if N < 6:
            raise ValueError("REL-19 belongs to the N >= 6 suite")
        c = Fraction(q**M * (q**3 - 1) * (q ** (N - 2) - 1), (q - 1) ** 2)
        emit(f"{rel_id}:LRRRF0", [_t(1, "L", "R", "R", "R", "F0")], [_t(c, "R", "R", "F0")])
        emit(f"{rel_id}:LLLRF2", [_t(1, "L", "L", "L", "R", "F2")], [_t(c, "L", "L", "F2")])
    elif rel_id == "REL-22":
        for cname, ce in (("C1", _c1_expr(q)), ("C2", _c2_expr(q))):
            for xname in ("R", "L", "K"):
                emit(f"{rel_id}:[{cname},{xname}]", _commutator(ce, [_t(1, xname)]))
    elif rel_id == "REL-23":
        c1, c2 = _c1_expr(q), _c2_expr(q)
        d2 = Fraction(1, (q - 1) ** 2)
        emit(
            f"{rel_id}:RL",
            [_t(1, "R", "L")],
            _expr_sub(
                _expr_scale(c1, Fraction(q, q - 1)),
                [_t(q * d2, "K")] + _expr_mul(_expr_scale(c2, d2), [_t(1, "Kinv")]),
            ),
        )
        emit(
            f"{rel_id}:LR",
            [_t(1, "L", "R")],
            _expr_sub(
                _expr_scale(c1, Fraction(q, q - 1)),
                [_t(d2, "K")] + _expr_mul(_expr_scale(c2, q * d2), [_t(1, "Kinv")]),
            ),
        )
    elif rel_id == "REL-24":
        # Augmented down-up module structure: K,E,F |-> K,L,R with central
        # assignments Cs = -tau (tau^2-1)^-2 C2, Ct = tau^2 (tau^2-1)^-1 C1,
        # s = -1, t = 0, phi(x) = -tau (tau^2-1)^-2 x, tau = sqrt(q).
        tau = QSqrt(q, 0, 1)
        cs = _expr_scale(_c2_expr(q), -tau * Fraction(1, (q - 1) ** 2))
        ct = _expr_scale(_c1_expr(q), Fraction(q, q - 1))
        emit(f"{rel_id}:KKinv", [_t(1, "K", "Kinv")], [_t(1, "I")])
        emit(f"{rel_id}:KinvK", [_t(1, "Kinv", "K")], [_t(1, "I")])
        for cname, ce in (("Cs", cs), ("Ct", ct)):
            for xname in ("K", "L", "R"):
                emit(f"{rel_id}:[{cname},{xname}]", _commutator(ce, [_t(1, xname)]))
        emit(f"{rel_id}:KE", [_t(1, "K", "L")], [_t(q, "L", "K")])
        emit(f"{rel_id}:KF", [_t(1, "K", "R")], [_t(Fraction(1, q), "R", "K")])
        # FE = Cs tau^-1 K^-1 + Ct + phi(tau K);  EF = Cs tau K^-1 + Ct + phi(tau^-1 K)
        fe_rhs = (
            _expr_mul(_expr_scale(cs, tau.inverse()), [_t(1, "Kinv")])
            + ct
            + [_t(-tau * tau * Fraction(1, (q - 1) ** 2), "K")]
        )
        ef_rhs = (
            _expr_mul(_expr_scale(cs, tau), [_t(1, "Kinv")])
            + ct
            + [_t(-Fraction(1, (q - 1) ** 2), "K")]
        )
        emit(f"{rel_id}:FE", [_t(1, "R", "L")], fe_rhs)
        emit(f"{rel_id}:EF", [_t(1, "L", "R")], ef_rhs)
    else:
        raise UnknownRelation(
            f"unknown relation id {rel_id!r}; known: {', '.join(RELATION_IDS)}"
        )
    return out


# -- evaluation sessions -----------------------------------------------

class CheckSession:
    """Shared word-product / word-matvec caches across checks on one
    generator set."""

    def __init__(self, g: GeneratorSet):
        self.g = g
        self._mats = {}
        self._words = {}

    def mat(self, name) -> SparseMat:
        if name not in self._mats:
            self._mats[name] = self.g.op(name)
        return self._mats[name]

    def word_matrix(self, word) -> SparseMat:
        """Product of a word, multiplying right-to-left so trailing grade
        projectors keep intermediates column-restricted."""
        if not word:
            return self.mat("I")
        if word not in self._words:
            if len(word) == 1:
                self._words[word] = self.mat(word[0])
            else:
                self._words[word] = self.mat(word[0]).mul(self.word_matrix(word[1:]))
        return self._words[word]

    def side_matrix(self, terms) -> SparseMat:
        q = self.g.params.q
        acc = SparseMat.zeros(q, self.g.size, self.g.size)
        for coeff, word in terms:
            acc = acc.add(self.word_matrix(word).scale(coeff))
        return acc

    def word_vector(self, word, vec, cache):
        if not word:
            return vec
        key = word
        if key not in cache:
            den, va, vb = self.word_vector(word[1:], vec, cache)
            cache[key] = self.mat(word[0]).apply_raw(den, va, vb)
        return cache[key]

    def side_vector(self, terms, vec, cache):
        """Exact sum of coeff * word(vec) as (den, nums, sqrt-nums|None)."""
        q = self.g.params.q
        n = self.g.size
        acc_den, acc_a, acc_b = 1, [0] * n, None
        for coeff, word in terms:
            coeff = coeff if isinstance(coeff, QSqrt) else QSqrt(q, coeff)
            wden, wa, wb = self.word_vector(word, vec, cache)
            for part, nums in (("a", wa), ("b", wb)):
                if nums is None:
                    continue
                if part == "a":
                    ca, cb = coeff.a, coeff.b
                else:
                    ca, cb = coeff.b * q, coeff.a
                # contribution (ca + cb sqrt q) * nums / wden
                for comp, cf in (("a", ca), ("b", cb)):
                    if not cf:
                        continue
                    num, den = cf.numerator, cf.denominator * wden
                    g_ = gcd(acc_den, den)
                    m_acc, m_new = den // g_, acc_den // g_
                    if m_acc != 1:
                        acc_a = [v * m_acc for v in acc_a]
                        if acc_b is not None:
                            acc_b = [v * m_acc for v in acc_b]
                        acc_den *= m_acc
                    scale = num * m_new
                    if comp == "a":
                        acc_a = [v + scale * w for v, w in zip(acc_a, nums)]
                    else:
                        if acc_b is None:
                            acc_b = [0] * n
                        acc_b = [v + scale * w for v, w in zip(acc_b, nums)]
        return acc_den, acc_a, acc_b


def _auto_mode(rel_id, g, dense_cap):
    if rel_id in ("REL-18", "REL-19"):
        return "dense"
    return "dense" if g.size <= dense_cap else "matrix-free"


def verify_relation(
    rel_id,
    g: GeneratorSet,
    mode="auto",
    trials=5,
    seed=42,
    dense_cap=DENSE_CAP,
    session: CheckSession | None = None,
) -> CheckResult:
    """Verify one catalog identity exactly.

    Dense mode forms the full sparse expression and asserts the zero
    matrix; matrix-free mode asserts exact annihilation of `trials`
    seeded random integer vectors (entries uniform in [0, 10^6]).
    """
    if rel_id not in RELATION_IDS:
        raise UnknownRelation(
            f"unknown relation id {rel_id!r}; known: {', '.join(RELATION_IDS)}"
        )
    if rel_id == "REL-18":
        return _verify_support_pattern(g)
    if mode == "auto":
        mode = _auto_mode(rel_id, g, dense_cap)
    if mode == "dense" and rel_id not in ("REL-19",) and g.size > dense_cap:
        raise DenseCapExceeded(
            f"dense mode needs |P| <= {dense_cap}, instance has {g.size}"
        )
    if mode not in ("dense", "matrix-free"):
        raise ValueError(f"unknown mode {mode!r}")
    identities = relation_identities(rel_id, g.params)
    session = session or CheckSession(g)
    if mode == "dense":
        for sub_id, lhs, rhs in identities:
            lm = session.side_matrix(lhs)
            rm = session.side_matrix(rhs)
            diff = lm.sub(rm)
            if not diff.is_zero():
                (i, j), _ = next(diff.entries())
                return CheckResult(
                    rel_id, False, mode,
                    witness={
                        "identity": sub_id,
                        "row": i,
                        "col": j,
                        "lhs": qsqrt_to_wire(lm.entry(i, j)),
                        "rhs": qsqrt_to_wire(rm.entry(i, j)),
                    },
                )
        return CheckResult(rel_id, True, mode)
    if trials < 1:
        raise ValueError("matrix-free mode needs trials >= 1")
    n = g.size
    for trial in range(trials):
        rng = random.Random(f"{seed}:{rel_id}:{trial}")
        vec = (1, [rng.randint(0, 10**6) for _ in range(n)], None)
        cache = {}
        for sub_id, lhs, rhs in identities:
            lside = session.side_vector(lhs, vec, cache)
            rside = session.side_vector(rhs, vec, cache)
            bad = _first_vec_mismatch(lside, rside)
            if bad is not None:
                return CheckResult(
                    rel_id, False, mode, trials=trials, seed=seed,
                    witness={"identity": sub_id, "trial": trial, "index": bad},
                )
    return CheckResult(rel_id, True, mode, trials=trials, seed=seed)


def _first_vec_mismatch(lside, rside):
    """Index of the first differing entry between two (den, a, b) sides.

    The sides carry independent positive denominators, so entries are
    compared cross-multiplied; exact.
    """
    lden, la, lb = lside
    rden, ra, rb = rside
    for i, (lv, rv) in enumerate(zip(la, ra)):
        if lv * rden != rv * lden:
            return i
    if lb is not None or rb is not None:
        n = len(la)
        for i in range(n):
            lv = lb[i] if lb is not None else 0
            rv = rb[i] if rb is not None else 0
            if lv * rden != rv * lden:
                return i
    return None


def _verify_support_pattern(g: GeneratorSet) -> CheckResult:
    """REL-18: F_i R^k F_j is nonzero exactly when k = i - j (and the L
    analogue with k = j - i), checked structurally on exact powers."""
    N = g.params.N
    session = CheckSession(g)
    grade_of = g.grade_of
    for opname, want in (("R", lambda i, j, k: k == i - j), ("L", lambda i, j, k: k == j - i)):
        power = SparseMat.identity(g.params.q, g.size)
        for k in range(N + 1):
            if k > 0:
                power = session.mat(opname).mul(power)
            present = set()
            for (i, j), _ in power.entries():
                present.add((grade_of[i], grade_of[j]))
            for i in range(N + 1):
                for j in range(N + 1):
                    nonzero = (i, j) in present
                    if nonzero != want(i, j, k):
                        return CheckResult(
                            "REL-18", False, "dense",
                            witness={"op": opname, "i": i, "j": j, "k": k,
                                     "nonzero": nonzero},
                        )
    return CheckResult("REL-18", True, "dense")


INDEPENDENCE_IDS = ("LIN-94", "LIN-95")


def independence_families(ind_id, params):
    """The word families whose linear independence the id asserts."""
    N = params.N
    if ind_id == "LIN-94":
        return [
            (f"{ind_id}:R2F{N - 2}", [("R", "R", f"F{N - 2}"), ("R", "R", "R", "L", f"F{N - 2}")]),
            (f"{ind_id}:L2F{N}", [("L", "L", f"F{N}"), ("R", "L", "L", "L", f"F{N}")]),
        ]
    if ind_id == "LIN-95":
        fams = []
        for i in range(1, N - 2):
            fams.append(
                (f"{ind_id}:i={i}",
                 [("R", "R", f"F{i}"), ("R", "R", "R", "L", f"F{i}"), ("L", "R", "R", "R", f"F{i}")])
            )
            fams.append(
                (f"{ind_id}:i={i}:t",
                 [("L", "L", f"F{i + 2}"), ("L", "L", "L", "R", f"F{i + 2}"), ("R", "L", "L", "L", f"F{i + 2}")])
            )
        return fams
    raise UnknownRelation(f"unknown independence id {ind_id!r}")


def verify_independence(
    ind_id,
    g: GeneratorSet,
    trials=5,
    seed=42,
    dense_cap=DENSE_CAP,
    session: CheckSession | None = None,
) -> CheckResult:
    """Linear independence checks of Lemmas 9.4/9.5 type word families.

    Under the dense cap the flattened matrices are tested directly (exact
    and complete).  Above it, independence is certified through exact
    random compressions: if the compressed vectors are independent the
    originals are; a family that never certifies is reported failed.
    """
    if g.params.N < 6:
        raise ValueError(f"{ind_id} requires N >= 6")
    session = session or CheckSession(g)
    families = independence_families(ind_id, g.params)
    mode = "dense" if g.size <= dense_cap else "matrix-free"
    if mode == "dense":
        for sub_id, words in families:
            mats = [session.word_matrix(w) for w in words]
            if not linear_independence(mats):
                return CheckResult(ind_id, False, mode, witness={"family": sub_id})
        return CheckResult(ind_id, True, mode)
    n = g.size
    for sub_id, words in families:
        certified = False
        for trial in range(trials):
            rng = random.Random(f"{seed}:{ind_id}:{sub_id}:{trial}")
            vec = (1, [rng.randint(0, 10**6) for _ in range(n)], None)
            cache = {}
            rows = []
            for w in words:
                _, va, vb = session.word_vector(w, vec, cache)
                assert vb is None or not any(vb)
                rows.append(va)
            _, pivots = _int_echelon(rows, n)
            if len(pivots) == len(words):
                certified = True
                break
        if not certified:
            return CheckResult(
                ind_id, False, mode, trials=trials, seed=seed,
                witness={"family": sub_id, "note": "no independent compression found"},
            )
    return CheckResult(ind_id, True, mode, trials=trials, seed=seed)
