"""Reduced elliptic root systems R(Pi, k, g) over a two-dimensional radical.

Coordinates: 0..l-1 span the finite part (alpha_1..alpha_l are the standard
basis there), coordinate l is delta = delta(Pi), coordinate l+1 is the marking
element a.  A datum is determined by the affine type of W_Pi . Pi together
with the maps k (isotropic step along a) and g (whether doubled roots occur
at odd multiples of k(alpha) a).

Membership is table-driven: each finite length class carries a set of cosets
of the isotropic lattice M = Z delta + Z a.  Root generation is an entirely
independent route (reflection closure of B+), which the test suite plays off
against the tables.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from . import linalg
from .affine import (AffineDatum, REDUCED_FAMILIES, _nodes, _residues,
                     _THETA_CLASS, affine_label, family_of_label,
                     orbit_records)
from .core import AmbientSpace, RootVector, cartan_integer
from .finite import (FiniteRootSystem, gram_from_data, orbit_max,
                     partition_shlgex, weyl_orbit)


class InvalidDatumError(ValueError):
    pass


class CosetClosureError(RuntimeError):
    pass


class KGError(RuntimeError):
    pass


DEFAULT_MAX_MODULUS = 16


def _max_modulus():
    return int(os.environ.get("ROOTSPAN_MAX_MODULUS", DEFAULT_MAX_MODULUS))


class CosetSet:
    """Finite union of cosets of t*M inside M, stored with minimal modulus."""

    def __init__(self, modulus, cosets):
        t = int(modulus)
        cs = frozenset((int(p) % t, int(z) % t) for p, z in cosets)
        self.modulus, self.cosets = self._canonical(t, cs)

    @staticmethod
    def _canonical(t, cs):
        best = (t, cs)
        for d in range(1, t + 1):
            if t % d:
                continue
            reduced = frozenset((p % d, z % d) for p, z in cs)
            if len(cs) == len(reduced) * (t // d) ** 2:
                lifted = frozenset((p, z) for p in range(t) for z in range(t)
                                   if (p % d, z % d) in reduced)
                if lifted == cs:
                    best = (d, reduced)
                    break
        return best

    def contains(self, p, z):
        return (int(p) % self.modulus, int(z) % self.modulus) in self.cosets

    def __eq__(self, other):
        return (isinstance(other, CosetSet) and self.modulus == other.modulus
                and self.cosets == other.cosets)

    def __hash__(self):
        return hash((self.modulus, self.cosets))

    def __repr__(self):
        reps = "+".join(f"({p},{z})" for p, z in sorted(self.cosets))
        return f"CosetSet(mod {self.modulus}: {reps})"

    def is_all(self):
        return self.modulus == 1 and len(self.cosets) == 1


LISTRAB = {
    (-1, Fraction(1), False): ("A2(1)", "sa_bstar"),
    (-2, Fraction(1), False): ("B2(1)", "sa_bstar"),
    (-3, Fraction(1), False): ("G2(1)", "sb_sa_bstar"),
    (-2, Fraction(2), False): ("D3(2)", "sb_astar"),
    (-3, Fraction(3), False): ("D4(3)", "sa_sb_astar"),
    (-2, Fraction(1), True): ("A4(2)", "sb_astar"),
}

L1_TUPLES = {
    (-2, 1, False, False),
    (-2, 1, False, True), (-2, 1, True, False), (-2, 1, True, True),
    (-2, 2, False, False), (-2, 2, True, False),
    (-1, 1, False, False), (-1, 1, False, True),
    (-1, 2, False, False), (-1, 2, False, True),
    (-1, 4, False, False),
}


class EllipticDatum:
    """R(Pi, k, g) with W_Pi . Pi of a named reduced affine type."""

    def __init__(self, type_label, k, g, omega=None):
        key, l = family_of_label(type_label)
        if key not in REDUCED_FAMILIES:
            raise InvalidDatumError(
                f"{type_label} is not a reduced affine type; W_Pi.Pi must be reduced")
        if len(k) != l + 1 or len(g) != l + 1:
            raise InvalidDatumError("k and g must have one entry per node 0..l")
        if any(int(x) != x or x < 1 for x in k):
            raise InvalidDatumError("k values must be positive integers")
        self.type_label = type_label
        self.family_key = key
        self.l = l
        self.k = tuple(int(x) for x in k)
        self.g = tuple(bool(x) for x in g)
        self.omega = dict(omega) if omega else {"label": "omega1"}

        sqs, edges = _nodes(key, l)
        full_gram = gram_from_data(sqs, edges)
        fin_gram = [[full_gram[i][j] for j in range(1, l + 1)] for i in range(1, l + 1)]
        self.fin_space = AmbientSpace(fin_gram)
        fin_base = [self.fin_space.basis_vector(i) for i in range(l)]
        fin_roots = set(weyl_orbit(fin_base, fin_base))
        self.orbits = orbit_records(key, l)
        need_ex = any(cls == "ex" for cls, _, _, _ in self.orbits) or any(self.g)
        if need_ex:
            shortest = min(v.sq for v in fin_roots)
            fin_roots |= {2 * v for v in fin_roots if v.sq == shortest}
        self.finite_sys = FiniteRootSystem(self.fin_space, fin_roots, fin_base)
        sh, lg, ex = partition_shlgex(self.finite_sys.roots)
        self.fin_classes = {"sh": frozenset(v.coords for v in sh),
                            "lg": frozenset(v.coords for v in lg),
                            "ex": frozenset(v.coords for v in ex)}
        self._class_of = {}
        for name, coords in self.fin_classes.items():
            for c in coords:
                self._class_of[c] = name

        gram = [[Fraction(0)] * (l + 2) for _ in range(l + 2)]
        for i in range(l):
            for j in range(l):
                gram[i][j] = fin_gram[i][j]
        self.space = AmbientSpace(gram)
        self.delta = self.space.basis_vector(l)
        self.a = self.space.basis_vector(l + 1)

        theta_cls = _THETA_CLASS[key]
        theta = orbit_max(self.finite_sys,
                          sorted(self.fin_space.vector(c)
                                 for c in self.fin_classes[theta_cls])[0])
        self._theta = theta
        alpha0 = self.delta - self.embed_finite(theta)
        self.pi = (alpha0,) + tuple(self.space.basis_vector(i) for i in range(l))

        self._node_class = {}
        self._node_offset = {}
        for cls, r, t, nodes in self.orbits:
            for i in nodes:
                self._node_class[i] = cls
                self._node_offset[i] = (r, t)
            ks = {self.k[i] for i in nodes}
            gs = {self.g[i] for i in nodes}
            if len(ks) != 1 or len(gs) != 1:
                raise InvalidDatumError(
                    f"k and g must be constant on the Weyl orbit of nodes {nodes}")
        for i in range(l + 1):
            if self.g[i] and self._node_class[i] != "sh":
                raise InvalidDatumError(
                    f"g can mark odd doubled roots only on short nodes (node {i})")

        moduli = []
        for cls, r, t, nodes in self.orbits:
            ki, gi = self.k[nodes[0]], self.g[nodes[0]]
            moduli += [t, ki] + ([2 * t, 2 * ki] if gi else [])
        self.modulus = lcm(*moduli)
        tt = self.modulus
        cosets = {"sh": set(), "lg": set(), "ex": set()}
        for cls, r, t, nodes in self.orbits:
            ki, gi = self.k[nodes[0]], self.g[nodes[0]]
            for p in range(r % t, tt, t):
                for z in range(0, tt, ki):
                    cosets[cls].add((p, z))
            if gi:
                for p in range((2 * r) % (2 * t), tt, 2 * t):
                    for z in range(ki % (2 * ki), tt, 2 * ki):
                        cosets["ex"].add((p, z))
        self.cosets = {cls: frozenset(s) for cls, s in cosets.items()}

        self.alpha_stars = tuple(self.alpha_star(i) for i in range(l + 1))
        self.b_plus = self.pi + self.alpha_stars

    # -- basic geometry ----------------------------------------------------

    def embed_finite(self, fv):
        return self.space.vector(tuple(fv.coords) + (0, 0))

    def c(self, i):
        return 2 if self.g[i] else 1

    def alpha_star(self, i):
        """The companion root c(alpha) alpha + k(alpha) a."""
        if not 0 <= i <= self.l:
            raise ValueError("node index out of range")
        star = self.c(i) * self.pi[i] + self.k[i] * self.a
        assert self.member(star)
        return star

    def delta_of(self):
        """delta(Pi) as the marked positive combination of Pi."""
        gcm = [[int(cartan_integer(x, y)) for y in self.pi] for x in self.pi]
        null = linalg.kernel_basis(gcm)
        assert len(null) == 1
        marks = [abs(int(x)) for x in null[0]]
        d = self.space.zero()
        for m, e in zip(marks, self.pi):
            d = d + m * e
        assert d == self.delta and d.is_isotropic
        return d

    def iso_point(self, p, z):
        return self.space.vector((0,) * self.l + (p, z))

    def split(self, v):
        """(finite coords, p, z) of a lattice vector."""
        cs = v.coords
        return cs[:self.l], cs[self.l], cs[self.l + 1]

    # -- membership --------------------------------------------------------

    def membership(self, v):
        """Length class of a root, or None; raises off the root lattice."""
        if any(Fraction(c).denominator != 1 for c in v.coords):
            raise ValueError("vector is not in the root lattice ZR")
        return self._member_class(v.coords)

    def _member_class(self, coords):
        phi = coords[:self.l]
        cls = self._class_of.get(phi)
        if cls is None:
            return None
        p, z = int(coords[self.l]), int(coords[self.l + 1])
        t = self.modulus
        if (p % t, z % t) in self.cosets[cls]:
            return cls
        return None

    def member(self, v):
        if any(Fraction(c).denominator != 1 for c in v.coords):
            return False
        return self._member_class(v.coords) is not None

    # -- generation (independent of the tables) -----------------------------

    def generate_roots(self, fin_bound, p_bound, z_bound):
        """Reflection closure of B+ pruned to a box, then cut to the box.

        The box is |finite coords| <= fin_bound, |p| <= p_bound, |z| <= z_bound.
        """
        cache = getattr(self, "_gen_cache", None)
        if cache is None:
            cache = self._gen_cache = {}
        key = (fin_bound, p_bound, z_bound)
        if key in cache:
            return cache[key]
        l = self.l
        dim = l + 2
        gens = []
        for mu in self.b_plus:
            w = [sum(self.space.gram[i][j] * mu.coords[j] for j in range(l))
                 for i in range(l)]
            gens.append((tuple(mu.coords), tuple(w), mu.sq))
        fb = 2 * fin_bound + 2
        pb = 2 * p_bound + 8
        zb = 2 * z_bound + 8

        def inside(c):
            return (all(abs(x) <= fb for x in c[:l])
                    and abs(c[l]) <= pb and abs(c[l + 1]) <= zb)

        seen = {tuple(v.coords) for v in self.b_plus}
        frontier = list(seen)
        while frontier:
            new = []
            for v in frontier:
                for mu, w, sq in gens:
                    n = 2 * sum(wi * vi for wi, vi in zip(w, v)) / sq
                    if n == 0:
                        continue
                    img = tuple(vi - n * mi for vi, mi in zip(v, mu))
                    if img not in seen and inside(img):
                        seen.add(img)
                        new.append(img)
            frontier = new
        out = [self.space.vector(c) for c in sorted(seen)
               if all(abs(x) <= fin_bound for x in c[:l])
               and abs(c[l]) <= p_bound and abs(c[l + 1]) <= z_bound]
        cache[key] = out
        return out

    # -- coset sets by reflection closure ------------------------------------

    def _closure_at(self, t):
        pair = self.fin_space.pair_coords
        state = {}

        def add(phi, off):
            s = state.setdefault(phi, set())
            if off not in s:
                s.add(off)
                return True
            return False

        seeds = []
        for i in range(self.l + 1):
            phi = self.pi[i].coords[:self.l]
            d = int(self.pi[i].coords[self.l])
            for z in range(0, t, self.k[i]):
                seeds.append((phi, (d % t, z)))
            if self.g[i]:
                phi2 = tuple(2 * x for x in phi)
                for z in range(self.k[i] % (2 * self.k[i]), t, 2 * self.k[i]):
                    seeds.append((phi2, ((2 * d) % t, z)))
        gens = []
        for mu in self.b_plus:
            psi = mu.coords[:self.l]
            off = (int(mu.coords[self.l]), int(mu.coords[self.l + 1]))
            gens.append((psi, off, pair(psi, psi)))
        work = []
        for phi, off in seeds:
            if add(phi, off):
                work.append((phi, off))
        while work:
            phi, (p, z) = work.pop()
            for psi, (mp, mz), sq in gens:
                n = 2 * pair(psi, phi) / sq
                assert n.denominator == 1
                n = int(n)
                img = tuple(a - n * b for a, b in zip(phi, psi))
                off = ((p - n * mp) % t, (z - n * mz) % t)
                if add(img, off):
                    work.append((img, off))
        return state

    def coset_sets(self, max_modulus=None):
        """(L_sh, L_lg, L_ex) computed by reflection closure, not from tables."""
        cap = max_modulus if max_modulus is not None else _max_modulus()
        t = 2 * lcm(*[self.c(i) * self.k[i] for i in range(self.l + 1)])
        while t <= cap:
            fine = self._closure_at(2 * t)
            coarse = self._closure_at(t)
            projected = {phi: {(p % t, z % t) for p, z in offs}
                         for phi, offs in fine.items()}
            if projected == coarse:
                state = coarse
                break
            t *= 2
        else:
            raise CosetClosureError(f"coset closure did not stabilize below {cap}")

        gamma1 = self.gamma1()
        result = [CosetSet(t, state[gamma1.coords[:self.l]])]
        gamma2 = self.gamma2()
        result.append(CosetSet(t, state[gamma2.coords[:self.l]]) if gamma2 else None)
        twice = tuple(2 * x for x in gamma1.coords[:self.l])
        result.append(CosetSet(t, state[twice]) if twice in state else None)
        return tuple(result)

    def gamma1(self):
        for i in range(1, self.l + 1):
            if self._node_class[i] == "sh":
                return self.pi[i]
        raise InvalidDatumError("no short node besides alpha_0")

    def gamma2(self):
        for i in range(1, self.l + 1):
            if self._node_class[i] == "lg":
                return self.pi[i]
        return None

    # -- k/g recovery, rank-2 subsystems, validation -------------------------

    def rank2_subsystem(self, i, j):
        """Type and closing root gamma of the affine plane spanned by two nodes."""
        alpha, beta = self.pi[i], self.pi[j]
        if cartan_integer(beta, alpha) != -1:
            raise ValueError("pair must satisfy (beta^vee, alpha) = -1")
        key = (int(cartan_integer(alpha, beta)),
               Fraction(self.k[j], self.k[i]), self.g[i])
        if key not in LISTRAB:
            raise InvalidDatumError(f"pair {key} matches no admissible rank-2 row")
        label, recipe = LISTRAB[key]
        astar, bstar = self.alpha_stars[i], self.alpha_stars[j]
        if recipe == "sa_bstar":
            gamma = -(alpha.reflect(bstar))
        elif recipe == "sb_sa_bstar":
            gamma = -(beta.reflect(alpha.reflect(bstar)))
        elif recipe == "sb_astar":
            gamma = -(beta.reflect(astar))
        else:
            gamma = -(alpha.reflect(beta.reflect(astar)))
        assert self.member(gamma)
        assert not self.g[j]
        return label, gamma

    def validate(self):
        return validate_datum(self)

    # -- serialization -------------------------------------------------------

    def to_json(self):
        return {"schema": 1, "type": self.type_label, "l": self.l,
                "k": list(self.k), "g": list(self.g), "omega": dict(self.omega)}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        if "preset" in data:
            return preset_datum(data["preset"], int(data["l"]))
        return cls(data["type"], data["k"], data["g"], data.get("omega"))

    def __repr__(self):
        return (f"EllipticDatum({self.type_label}, k={list(self.k)}, "
                f"g={list(self.g)})")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class DatumReport:
    checks: list = field(default_factory=list)

    @property
    def valid(self):
        return all(c.passed for c in self.checks)

    def add(self, name, passed, detail=""):
        self.checks.append(CheckResult(name, passed, detail))

    def summary(self):
        return "\n".join(f"{c.name}: {'pass' if c.passed else 'FAIL'}"
                         + (f" ({c.detail})" if c.detail and not c.passed else "")
                         for c in self.checks)


def validate_datum(datum: EllipticDatum) -> DatumReport:
    """Admissibility of (Pi, k, g) per the rank-2 row list (l >= 2) or the
    explicit rank-1 tuple list."""
    rep = DatumReport()
    a = datum.a
    rep.add("FS1: marking element isotropic and primitive",
            a.is_isotropic and all(Fraction(c).denominator == 1 for c in a.coords))
    rep.add("FS2: |Pi| = l+1 roots", len(datum.pi) == datum.l + 1
            and all(datum.member(v) for v in datum.pi))
    if datum.l >= 2:
        rep.add("1 in k(Pi)", 1 in datum.k,
                f"k = {list(datum.k)}")
        bad = []
        for i in range(datum.l + 1):
            for j in range(datum.l + 1):
                if i == j:
                    continue
                if cartan_integer(datum.pi[j], datum.pi[i]) != -1:
                    continue
                key = (int(cartan_integer(datum.pi[i], datum.pi[j])),
                       Fraction(datum.k[j], datum.k[i]), datum.g[i])
                if key not in LISTRAB:
                    bad.append((i, j, key))
        rep.add("adjacent pairs match the rank-2 row list", not bad, str(bad))
    else:
        c01 = int(cartan_integer(datum.pi[0], datum.pi[1]))
        c10 = int(cartan_integer(datum.pi[1], datum.pi[0]))
        k0, k1 = datum.k[0], datum.k[1]
        g0, g1 = datum.g[0], datum.g[1]
        if c01 == c10 == -2 and k1 > k0:
            k0, k1, g0, g1 = k1, k0, g1, g0
        rep.add("rank 1: k(alpha_1) = 1", k1 == 1, f"k = {list(datum.k)}")
        tup = (c01, k0, g0, g1)
        rep.add("rank 1: tuple in the admissible list", tup in L1_TUPLES, str(tup))
    return rep


def compute_kg(member, elements, direction, bound=64):
    """Recover (k, g) for a family of roots along an isotropic direction."""
    ks, gs = [], []
    for alpha in elements:
        k = next((s for s in range(1, bound + 1)
                  if member(alpha + s * direction)), None)
        if k is None:
            raise KGError(f"no recurrence along the line through {alpha}")
        double = 2 * alpha + k * direction
        gs.append(bool(member(double)))
        if member(2 * alpha + 2 * k * direction):
            raise KGError("doubled roots at even multiples: system not reduced")
        ks.append(k)
    return tuple(ks), tuple(gs)


# ---------------------------------------------------------------------------
# Quotient by a marking direction: pi_{a'} (R) as an affine datum.


def _complete_basis(x, y):
    """delta'' = (u, v) with x*v - y*u = 1, deterministically reduced."""
    g, s, t = _egcd(x, y)
    assert g == 1
    u, v = -t, s
    den = x * x + y * y
    q = (u * x + v * y + den // 2) // den
    return u - q * x, v - q * y


def _egcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, s, t = _egcd(b, a % b)
    return g, t, s - (a // b) * t


def affine_quotient(datum: EllipticDatum, a_prime):
    """The affine root system pi_{a'}(R) with its lift data.

    a_prime is a primitive (x, y) in the {delta, a} basis.  Returns
    (AffineDatum, (u, v)) where delta'' = u delta + v a completes the basis
    and the quotient coordinate n means the class of n delta'' + Z a'.
    """
    x, y = int(a_prime[0]), int(a_prime[1])
    if gcd(x, y) != 1:
        raise ValueError("marking direction must be primitive")
    if not (x > 0 or (x == 0 and y > 0)):
        raise ValueError("marking direction must carry the canonical sign")
    u, v = _complete_basis(x, y)
    l = datum.l
    gram = [[Fraction(0)] * (l + 1) for _ in range(l + 1)]
    for i in range(l):
        for j in range(l):
            gram[i][j] = datum.fin_space.gram[i][j]
    qspace = AmbientSpace(gram)
    t = datum.modulus

    def member_q(vec):
        cs = vec.coords
        if any(Fraction(c).denominator != 1 for c in cs):
            return False
        phi = cs[:l]
        cls = datum._class_of.get(phi)
        if cls is None:
            return False
        n = int(cs[l])
        cos = datum.cosets[cls]
        return any(((n * u + s * x) % t, (n * v + s * y) % t) in cos
                   for s in range(t))

    q = AffineDatum(qspace, member_q, datum.finite_sys,
                    label=f"pi_{(x, y)}({datum.type_label})")
    return q, (u, v)


# ---------------------------------------------------------------------------
# Presets: the ten multiplicity-table data, plus companions used in proofs.


def _k_by_length(key, l):
    sqs, _ = _nodes(key, l)
    m = min(sqs)
    return [int(Fraction(s, m)) for s in sqs]


def _case8_family(l):
    return ("C(1)", l) if l == 2 else ("B(1)", l)


def preset_datum(name, l) -> EllipticDatum:
    """Named data case1..case10 (and proof companions) at rank l >= 2."""
    if l < 2:
        raise InvalidDatumError("presets are defined for rank l >= 2")
    no_g = [False] * (l + 1)

    def mark(*nodes):
        gg = [False] * (l + 1)
        for n in nodes:
            gg[n] = True
        return gg

    if name == "case1":
        return EllipticDatum(affine_label("A(1)", l), [1] * (l + 1), no_g)
    if name == "case2":
        return EllipticDatum(affine_label("C(1)", l), _k_by_length("C(1)", l), no_g)
    if name == "case3":
        return EllipticDatum(affine_label("Dl+1(2)", l),
                             _k_by_length("Dl+1(2)", l), no_g)
    if name == "case4":
        k = [2, 1] + [2] * (l - 1)
        return EllipticDatum(affine_label("Dl+1(2)", l), k, no_g)
    if name == "case5":
        k = [2, 1] + [2] * (l - 1)
        return EllipticDatum(affine_label("Dl+1(2)", l), k, mark(0))
    if name == "case6":
        return EllipticDatum(affine_label("Dl+1(2)", l), [1] * (l + 1), mark(0, 1))
    if name == "case7":
        return EllipticDatum(affine_label("A2l(2)", l), [1] * (l + 1), mark(1))
    if name == "case8":
        key, ll = _case8_family(l)
        return EllipticDatum(affine_label(key, ll), [1] * (l + 1), mark(1))
    if name == "case9":
        return EllipticDatum(affine_label("A2l(2)", l), [1] * (l + 1), no_g)
    if name == "case10":
        return EllipticDatum(affine_label("Dl+1(2)", l), [1] * (l + 1), mark(0))
    if name == "case10_pi5":
        return EllipticDatum(affine_label("A2l(2)", l), _k_by_length("A2l(2)", l), no_g)
    if name == "case10_r6":
        return EllipticDatum(affine_label("Dl+1(2)", l), [1] * (l + 1), mark(1))
    raise InvalidDatumError(f"unknown preset {name!r}")


PRESET_NAMES = tuple(f"case{i}" for i in range(1, 11)) + ("case10_pi5", "case10_r6")
