"""Symbolic verification of rank-2 bracket identities, and Serre-type relations.

Words live in the enveloping algebra of the Lie algebra generated by
h_gamma, E_1, E_2, F_1, F_2 subject only to h-linearity, [h, h] = 0, the
h-weight rules, and [E_i, F_j] = delta_ij h_{gamma_i^vee}.  Monomials are
straightened into the normal order F* h* E* (E and F blocks keep their
internal word order; h's commute).  Equality of normal forms certifies a Lie
identity because the Lie algebra embeds into this quotient-free enveloping
algebra.

The operator n = exp(ad E_1) exp(-ad F_1) exp(ad E_1) is evaluated as an
exact matrix on the finite span it preserves once the nilpotency rules
ad(E_1)^{1-m} E_2 = ad(F_1)^{1-m} F_2 = 0 are adjoined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import linalg


class RuleConfigurationError(RuntimeError):
    pass


_ORDER = {"F": 0, "H": 1, "E": 2}


class WordAlgebra:
    """Straightening arithmetic for a fixed 2 x 2 pairing matrix."""

    def __init__(self, gram):
        self.gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
        if self.gram[0][0] == 0 or self.gram[1][1] == 0:
            raise ValueError("gamma_1 and gamma_2 must be non-isotropic")
        self._memo = {}

    def sq(self, i):
        return self.gram[i - 1][i - 1]

    def pair(self, i, j):
        return self.gram[i - 1][j - 1]

    def cartan(self, i, j):
        """(gamma_i^vee, gamma_j)."""
        return 2 * self.pair(i, j) / self.sq(i)

    # -- straightening -------------------------------------------------------

    def straighten_seq(self, seq):
        """Normal form of a raw symbol sequence as {monomial: coefficient}."""
        if seq in self._memo:
            return self._memo[seq]
        pos = None
        for idx in range(len(seq) - 1):
            a, b = seq[idx], seq[idx + 1]
            if _ORDER[a[0]] > _ORDER[b[0]] or (a[0] == "H" == b[0] and a[1] > b[1]):
                pos = idx
                break
        if pos is None:
            result = {seq: Fraction(1)}
        else:
            a, b = seq[pos], seq[pos + 1]
            head, tail = seq[:pos], seq[pos + 2:]
            branches = []
            if a[0] == "E" and b[0] == "F":
                branches.append((Fraction(1), head + (b, a) + tail))
                if a[1] == b[1]:
                    coeff = Fraction(2) / self.sq(a[1])
                    branches.append((coeff, head + (("H", a[1]),) + tail))
            elif a[0] == "E" and b[0] == "H":
                branches.append((Fraction(1), head + (b, a) + tail))
                branches.append((-self.pair(b[1], a[1]), head + (a,) + tail))
            elif a[0] == "H" and b[0] == "F":
                branches.append((Fraction(1), head + (b, a) + tail))
                branches.append((-self.pair(a[1], b[1]), head + (b,) + tail))
            else:  # H H out of order
                branches.append((Fraction(1), head + (b, a) + tail))
            result = {}
            for coeff, sub in branches:
                for mono, c in self.straighten_seq(sub).items():
                    val = result.get(mono, Fraction(0)) + coeff * c
                    if val:
                        result[mono] = val
                    elif mono in result:
                        del result[mono]
        self._memo[seq] = result
        return result

    # -- element constructors -------------------------------------------------

    def from_seq(self, seq, coeff=1):
        w = FreeWord(self, {})
        for mono, c in self.straighten_seq(tuple(seq)).items():
            w._add(mono, Fraction(coeff) * c)
        return w

    def zero(self):
        return FreeWord(self, {})

    def one(self):
        return FreeWord(self, {(): Fraction(1)})

    def E(self, i):
        return self.from_seq((("E", i),))

    def F(self, i):
        return self.from_seq((("F", i),))

    def h(self, c1, c2=0):
        """h attached to c1*gamma_1 + c2*gamma_2."""
        w = FreeWord(self, {})
        if c1:
            w._add((("H", 1),), Fraction(c1))
        if c2:
            w._add((("H", 2),), Fraction(c2))
        return w

    def h_coroot(self, i):
        c = Fraction(2) / self.sq(i)
        return self.h(c, 0) if i == 1 else self.h(0, c)


# Pairing matrices realizing the six rank-2 rows: the first Cartan integer
# determines the Gram up to the normalization (gamma_1, gamma_1) = 2.
LISTRAB_GRAMS = tuple([[2, a], [a, -2 * a]] for a in (-1, -2, -3, -2, -3, -2))


class FreeWord:
    """Linear combination of normal-order monomials over a WordAlgebra."""

    __slots__ = ("algebra", "data")

    def __init__(self, algebra, data):
        self.algebra = algebra
        self.data = data

    def _add(self, mono, coeff):
        val = self.data.get(mono, Fraction(0)) + coeff
        if val:
            self.data[mono] = val
        elif mono in self.data:
            del self.data[mono]

    def __add__(self, other):
        out = FreeWord(self.algebra, dict(self.data))
        for m, c in other.data.items():
            out._add(m, c)
        return out

    def __sub__(self, other):
        out = FreeWord(self.algebra, dict(self.data))
        for m, c in other.data.items():
            out._add(m, -c)
        return out

    def __neg__(self):
        return FreeWord(self.algebra, {m: -c for m, c in self.data.items()})

    def __rmul__(self, scalar):
        s = Fraction(scalar)
        if not s:
            return self.algebra.zero()
        return FreeWord(self.algebra, {m: s * c for m, c in self.data.items()})

    def __mul__(self, other):
        if not isinstance(other, FreeWord):
            return NotImplemented
        out = FreeWord(self.algebra, {})
        for m1, c1 in self.data.items():
            for m2, c2 in other.data.items():
                for mono, c in self.algebra.straighten_seq(m1 + m2).items():
                    out._add(mono, c1 * c2 * c)
        return out

    def __eq__(self, other):
        return isinstance(other, FreeWord) and self.data == other.data

    def __hash__(self):
        return hash(frozenset(self.data.items()))

    def is_zero(self):
        return not self.data

    def __repr__(self):
        if not self.data:
            return "FreeWord(0)"
        terms = []
        for mono, c in sorted(self.data.items()):
            sym = "".join(f"{s}{i}" for s, i in mono) or "1"
            terms.append(f"{c}*{sym}")
        return "FreeWord(" + " + ".join(terms) + ")"


def straighten(word: FreeWord) -> FreeWord:
    """Normal form (idempotent: words are stored straightened)."""
    out = FreeWord(word.algebra, {})
    for mono, c in word.data.items():
        for m2, c2 in word.algebra.straighten_seq(mono).items():
            out._add(m2, c * c2)
    return out


def commutator(x: FreeWord, y: FreeWord) -> FreeWord:
    return x * y - y * x


def ad_pow(x: FreeWord, k: int, y: FreeWord) -> FreeWord:
    for _ in range(k):
        y = commutator(x, y)
    return y


def verify_adfone(gram, k) -> bool:
    """[ad(E1)^k E2, ad(F1)^k F2] against its closed h-form."""
    alg = WordAlgebra(gram)
    lhs = commutator(ad_pow(alg.E(1), k, alg.E(2)), ad_pow(alg.F(1), k, alg.F(2)))
    m = alg.cartan(1, 2)
    coeff = Fraction(factorial(k))
    for j in range(1, k):
        coeff *= m + j
    rhs = coeff * (k * alg.cartan(2, 1) * alg.h_coroot(1) + m * alg.h_coroot(2))
    return lhs == rhs


def _express(basis_words, target):
    """Coefficients of target over a list of linearly independent FreeWords."""
    monos = sorted({m for w in basis_words for m in w.data}
                   | set(target.data))
    mat = [[w.data.get(m, Fraction(0)) for w in basis_words] for m in monos]
    rhs = [target.data.get(m, Fraction(0)) for m in monos]
    sol = linalg.solve(mat, rhs)
    if sol is None:
        raise RuleConfigurationError("element does not lie in the expected span")
    return sol


class _NOperator:
    """Exact matrix of n = exp(ad E1) exp(-ad F1) exp(ad E1) on the span of
    the string elements, with nilpotency at degree 1-m adjoined."""

    def __init__(self, gram):
        alg = WordAlgebra(gram)
        m = alg.cartan(1, 2)
        if m.denominator != 1 or m > 0:
            raise ValueError("(gamma_1^vee, gamma_2) must be a nonpositive integer")
        self.m = int(m)
        n = -self.m
        self.alg = alg
        xs = [ad_pow(alg.E(1), i, alg.E(2)) for i in range(n + 1)]
        ys = [ad_pow(alg.F(1), i, alg.F(2)) for i in range(n + 1)]
        if any(x.is_zero() for x in xs + ys):
            raise RuleConfigurationError("string element vanishes before the bound")
        # The adjoined rules kill the next string element; in the free algebra
        # it is still nonzero (the bound is tight).
        self.tight = (not ad_pow(alg.E(1), n + 1, alg.E(2)).is_zero()
                      and not ad_pow(alg.F(1), n + 1, alg.F(2)).is_zero())
        basis = xs + ys + [alg.E(1), alg.F(1), alg.h(1, 0), alg.h(0, 1)]
        self.basis = basis
        self.xs_at = 0
        self.ys_at = n + 1
        self.e_at, self.f_at, self.h1_at, self.h2_at = (2 * n + 2, 2 * n + 3,
                                                        2 * n + 4, 2 * n + 5)
        dim = len(basis)

        def ad_matrix(gen, kill_index):
            cols = []
            for j, w in enumerate(basis):
                if j == kill_index:
                    cols.append([Fraction(0)] * dim)
                    continue
                cols.append(_express(basis, commutator(gen, w)))
            return [[cols[j][i] for j in range(dim)] for i in range(dim)]

        ad_e = ad_matrix(alg.E(1), self.xs_at + n)
        ad_f = ad_matrix(alg.F(1), self.ys_at + n)
        self.matrix = linalg.mat_mul(
            _mat_exp(ad_e), linalg.mat_mul(_mat_exp(_neg(ad_f)), _mat_exp(ad_e)))

    def apply_basis(self, index):
        return [row[index] for row in self.matrix]

    def unit(self, index, coeff=1):
        return [Fraction(coeff) * Fraction(int(i == index))
                for i in range(len(self.basis))]


def _neg(m):
    return [[-x for x in row] for row in m]


def _mat_exp(m):
    dim = len(m)
    out = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    term = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    k = 1
    while True:
        term = linalg.mat_mul(term, m)
        if all(all(x == 0 for x in row) for row in term):
            return out
        out = [[out[i][j] + term[i][j] / factorial(k) for j in range(dim)]
               for i in range(dim)]
        k += 1
        if k > 4 * dim:
            raise RuleConfigurationError("exponential failed to truncate")


_NOP_CACHE = {}


def _noperator(gram):
    key = tuple(tuple(Fraction(x) for x in row) for row in gram)
    if key not in _NOP_CACHE:
        _NOP_CACHE[key] = _NOperator(key)
    return _NOP_CACHE[key]


def verify_adftwo(gram, i) -> bool:
    """The n-operator identities on the i-th string elements, 0 <= i <= -m."""
    op = _noperator(gram)
    m, alg = op.m, op.alg
    n = -m
    if not 0 <= i <= n:
        raise ValueError("i must satisfy 0 <= i <= -m")
    if not op.tight:
        return False

    checks = []
    cx = Fraction((-1) ** i * factorial(i), factorial(n - i))
    checks.append((op.apply_basis(op.xs_at + i), op.unit(op.xs_at + (n - i), cx)))
    sign_y = 1 if (m - i) % 2 == 0 else -1
    cy = Fraction(sign_y * factorial(i), factorial(n - i))
    checks.append((op.apply_basis(op.ys_at + i), op.unit(op.ys_at + (n - i), cy)))
    checks.append((op.apply_basis(op.e_at), op.unit(op.e_at, -1)))
    checks.append((op.apply_basis(op.f_at), op.unit(op.f_at, -1)))
    for idx, gamma in ((op.h1_at, (1, 0)), (op.h2_at, (0, 1))):
        target = alg.h(*gamma) - alg.pair(1, 1 if gamma == (1, 0) else 2) * alg.h_coroot(1)
        checks.append((op.apply_basis(idx), _express(op.basis, target)))
    if any(all(x == 0 for x in got) for got, _ in checks[:2]):
        return False
    return all(got == want for got, want in checks)


# ---------------------------------------------------------------------------
# Serre-type relations as data, with degree bookkeeping.


@dataclass
class SerreRelation:
    """One relation instance; sides are lists of (coefficient, bracket tree).

    Trees are ("E", coords), ("h", coords), or ("ad", t1, t2); the degree of a
    tree is the sum of its E-leaf degrees in Z Pi + Z a.
    """

    label: str
    lhs: list
    rhs: list
    params: dict = field(default_factory=dict)

    def degrees(self):
        out = []
        for coeff, tree in self.lhs + self.rhs:
            if coeff != 0:
                out.append(tree_degree(tree))
        return out

    @property
    def degree(self):
        degs = self.degrees()
        return degs[0] if degs else None

    def is_homogeneous(self):
        return len(set(self.degrees())) <= 1


def tree_degree(tree):
    if tree[0] == "E":
        return tree[1]
    if tree[0] == "h":
        return tuple(0 for _ in tree[1])
    d1, d2 = tree_degree(tree[1]), tree_degree(tree[2])
    return tuple(a + b for a, b in zip(d1, d2))


def _ad_tree(x, power, y):
    for _ in range(power):
        y = ("ad", x, y)
    return y


def _e(vec):
    return ("E", tuple(vec.coords))


def omega_value(datum, i, j):
    om = datum.omega
    if om.get("label") == "omega_q" and datum.family_key == "A(1)":
        q = Fraction(om.get("q", 1))
        l = datum.l
        succ = {(idx, idx + 1) for idx in range(1, l)} | {(0, 1), (l, 0)}
        if (i, j) == (l, 0):
            return q
        if (j, i) == (l, 0):
            return 1 / q
        if (i, j) in succ or (j, i) in succ:
            return Fraction(1)
        return Fraction(1)
    return Fraction(1)


def x_exponent(mu, nu):
    """1 - ((mu^vee, nu) - |(mu^vee, nu)|)/2."""
    from .core import cartan_integer
    c = cartan_integer(mu, nu)
    assert c.denominator == 1
    c = int(c)
    return 1 - (c - abs(c)) // 2


def encode_serre(datum):
    """All instances of the defining relations SR4..SR9 for a datum.

    SR1-SR3 (h-linearity, h-commutativity, h-weights) are the built-in word
    arithmetic and are not stored as relation objects.
    """
    rep = datum.validate()
    if not rep.valid:
        from .elliptic import InvalidDatumError
        raise InvalidDatumError(rep.summary())
    rels = []
    bplus = list(datum.b_plus)
    ball = bplus + [-v for v in bplus]

    for mu in bplus:
        rels.append(SerreRelation(
            "SR4", [(Fraction(1), ("ad", _e(mu), _e(-mu)))],
            [(Fraction(1), ("h", tuple(mu.coroot().coords)))],
            {"mu": tuple(mu.coords)}))

    for mu in ball:
        for nu in ball:
            if mu == nu or nu == -mu:
                continue
            x = x_exponent(mu, nu)
            rels.append(SerreRelation(
                "SR5", [(Fraction(1), _ad_tree(_e(mu), x, _e(nu)))], [],
                {"x": x}))

    pairs = [(i, j) for i in range(datum.l + 1) for j in range(datum.l + 1)
             if i != j and 2 * datum.pi[j].pair(datum.pi[i]) / datum.pi[j].sq == -1]
    for i, j in pairs:
        alpha, beta = datum.pi[i], datum.pi[j]
        astar, bstar = datum.alpha_stars[i], datum.alpha_stars[j]
        c = datum.c(i)
        ratio = Fraction(datum.k[j], datum.k[i])
        assert ratio.denominator == 1
        ratio = int(ratio)
        om = omega_value(datum, i, j)
        rels.append(SerreRelation(
            "SR6",
            [(Fraction(c), _ad_tree(_e(astar), ratio, _e(beta)))],
            [(om, _ad_tree(_e(alpha), c * ratio, _e(bstar)))],
            {"pair": (i, j)}))
        rels.append(SerreRelation(
            "SR7",
            [(Fraction((-1) ** (c + 1) * c), _ad_tree(_e(-astar), ratio, _e(-beta)))],
            [(1 / om, _ad_tree(_e(-alpha), c * ratio, _e(-bstar)))],
            {"pair": (i, j)}))
        for step in range(1, ratio):
            rels.append(SerreRelation(
                "SR8",
                [(Fraction(1),
                  _ad_tree(_e(alpha), step,
                           _ad_tree(_e(astar), ratio - step, _e(beta))))], [],
                {"pair": (i, j), "i": step}))
            rels.append(SerreRelation(
                "SR9",
                [(Fraction(1),
                  _ad_tree(_e(-alpha), step,
                           _ad_tree(_e(-astar), ratio - step, _e(-beta))))], [],
                {"pair": (i, j), "i": step}))
    return rels


def homogeneity_check(relations) -> bool:
    return all(r.is_homogeneous() for r in relations)
