"""Affine root systems: models, the base-construction algorithm, classification.

An affine datum lives in a space whose last basis vector is the primitive
isotropic generator delta' and whose first l basis vectors form Pi', a lift
of a base of the finite quotient.  Root membership is a predicate, so the
same pipeline serves both explicit models and quotients of elliptic systems.

The base construction finds the indecomposable roots of the half-space cut
out by a functional that is 1 on Pi' and large on delta'; the unique extra
indecomposable is alpha_0 = delta' - theta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import linalg
from .core import AmbientSpace, RootVector, cartan_integer
from .finite import (FiniteRootSystem, big_theta, cartan_matrix_of,
                     gcm_permutation_match, gram_from_data, orbit_max,
                     weyl_orbit)


class OrderingError(ValueError):
    pass


class NotAffineTypeError(ValueError):
    pass


class ClassificationError(ValueError):
    pass


class BasePropertyError(ValueError):
    pass


class MembershipError(RuntimeError):
    """A membership predicate produced structurally impossible answers."""


# ---------------------------------------------------------------------------
# Affine family table.  Node index 0 is alpha_0; 1..l follow the diagram
# labels of the classification list.  Edges carry the pairing (alpha_i, alpha_j).


def _cycle_or_pair(l):
    if l == 1:
        return [2, 2], [(0, 1, -2)]
    edges = [(i, i + 1, -1) for i in range(1, l)] + [(0, 1, -1), (0, l, -1)]
    return [2] * (l + 1), edges


def _b_family_nodes(l):
    # alpha_1 short end, long chain, fork {alpha_0, alpha_l} at alpha_{l-1}.
    if l == 2:
        return [4, 2, 4], [(0, 1, -2), (1, 2, -2)]
    sqs = [4, 2] + [4] * (l - 1)
    edges = [(1, 2, -2)] + [(i, i + 1, -2) for i in range(2, l)] + [(0, l - 1, -2)]
    return sqs, edges


def _a2l_nodes(l):
    if l == 1:
        return [8, 2], [(0, 1, -4)]
    sqs = [8, 2] + [4] * (l - 1)
    edges = [(1, 2, -2)] + [(i, i + 1, -2) for i in range(2, l)] + [(l, 0, -4)]
    return sqs, edges


def _d2_nodes(l):
    if l == 1:
        return [2, 2], [(0, 1, -2)]
    sqs = [2, 2] + [4] * (l - 1)
    edges = [(1, 2, -2)] + [(i, i + 1, -2) for i in range(2, l)] + [(l, 0, -2)]
    return sqs, edges


def _nodes(key, l):
    if key == "A(1)":
        return _cycle_or_pair(l)
    if key == "B(1)":
        return _b_family_nodes(l)
    if key == "C(1)":
        if l == 2:
            return [4, 2, 4], [(0, 1, -2), (1, 2, -2)]
        sqs = [4, 4] + [2] * (l - 1)
        edges = [(1, 2, -2)] + [(i, i + 1, -1) for i in range(2, l)] + [(l, 0, -2)]
        return sqs, edges
    if key == "D(1)":
        edges = [(i, i + 1, -1) for i in range(1, l - 1)] + [(0, 2, -1), (l, l - 2, -1)]
        return [2] * (l + 1), edges
    if key == "E6(1)":
        return [2] * 7, [(1, 2, -1), (2, 3, -1), (3, 4, -1), (4, 5, -1), (6, 3, -1), (0, 6, -1)]
    if key == "E7(1)":
        return [2] * 8, ([(i, i + 1, -1) for i in range(1, 6)] + [(7, 3, -1), (0, 1, -1)])
    if key == "E8(1)":
        return [2] * 9, ([(i, i + 1, -1) for i in range(1, 7)] + [(8, 5, -1), (0, 1, -1)])
    if key == "F4(1)":
        return [4, 2, 2, 4, 4], [(0, 4, -2), (4, 3, -2), (3, 2, -2), (2, 1, -1)]
    if key == "G2(1)":
        return [6, 2, 6], [(1, 2, -3), (2, 0, -3)]
    if key == "A2l(2)":
        return _a2l_nodes(l)
    if key == "A2l-1(2)":
        sqs = [2] + [2] * (l - 1) + [4]
        edges = ([(i, i + 1, -1) for i in range(1, l - 1)]
                 + [(l - 1, l, -2), (0, 2, -1)])
        return sqs, edges
    if key == "Dl+1(2)" or key == "C(2)(l+1)" or key == "A(4)(0,2l)":
        return _d2_nodes(l)
    if key == "E6(2)":
        return [2, 2, 2, 4, 4], [(0, 1, -1), (1, 2, -1), (2, 3, -2), (3, 4, -2)]
    if key == "D4(3)":
        return [2, 2, 6], [(0, 1, -1), (1, 2, -3)]
    if key == "B(1)(0,l)":
        return _a2l_nodes(l)
    if key == "A(2)(0,2l-1)":
        return _b_family_nodes(l)
    raise ValueError(f"unknown affine family {key}")


def _residues(key, l):
    z = [(0, 1)]
    if key in ("A(1)", "D(1)", "E6(1)", "E7(1)", "E8(1)"):
        return {"sh": z}
    if key in ("B(1)", "C(1)", "F4(1)", "G2(1)"):
        return {"sh": z, "lg": z}
    if key == "A2l(2)":
        return {"sh": z, "ex": [(1, 2)]} if l == 1 else {"sh": z, "lg": z, "ex": [(1, 2)]}
    if key in ("A2l-1(2)", "Dl+1(2)", "E6(2)"):
        return {"sh": z, "lg": [(0, 2)]}
    if key == "D4(3)":
        return {"sh": z, "lg": [(0, 3)]}
    if key == "B(1)(0,l)":
        return {"sh": z, "ex": z} if l == 1 else {"sh": z, "lg": z, "ex": z}
    if key == "C(2)(l+1)":
        return {"sh": z, "ex": [(0, 2)]} if l == 1 else {"sh": z, "lg": [(0, 2)], "ex": [(0, 2)]}
    if key == "A(2)(0,2l-1)":
        return {"sh": z, "lg": z, "ex": [(0, 2)]}
    if key == "A(4)(0,2l)":
        return {"sh": z, "ex": [(0, 4)]} if l == 1 else {"sh": z, "lg": [(0, 2)], "ex": [(0, 4)]}
    raise ValueError(key)


_THETA_CLASS = {
    "A(1)": "sh", "D(1)": "sh", "E6(1)": "sh", "E7(1)": "sh", "E8(1)": "sh",
    "B(1)": "lg", "C(1)": "lg", "F4(1)": "lg", "G2(1)": "lg",
    "A2l(2)": "ex", "A2l-1(2)": "sh", "Dl+1(2)": "sh", "E6(2)": "sh",
    "D4(3)": "sh", "B(1)(0,l)": "ex", "C(2)(l+1)": "sh",
    "A(2)(0,2l-1)": "lg", "A(4)(0,2l)": "sh",
}

# W_Pi orbits of the base elements of the reduced families, as
# (class, delta-residue, modulus, node indices).  Used by the elliptic layer.


def orbit_records(key, l):
    allnodes = tuple(range(l + 1))
    if key == "A(1)":
        return ([("sh", 0, 2, (1,)), ("sh", 1, 2, (0,))] if l == 1
                else [("sh", 0, 1, allnodes)])
    if key == "B(1)":
        return [("sh", 0, 1, (1,)), ("lg", 0, 1, (0,) + tuple(range(2, l + 1)))]
    if key == "C(1)":
        if l == 2:
            return [("sh", 0, 1, (1,)), ("lg", 0, 1, (0, 2))]
        return [("sh", 0, 1, tuple(range(2, l + 1))), ("lg", 0, 1, (0, 1))]
    if key in ("D(1)", "E6(1)", "E7(1)", "E8(1)"):
        return [("sh", 0, 1, allnodes)]
    if key == "F4(1)":
        return [("sh", 0, 1, (1, 2)), ("lg", 0, 1, (0, 3, 4))]
    if key == "G2(1)":
        return [("sh", 0, 1, (1,)), ("lg", 0, 1, (0, 2))]
    if key == "A2l(2)":
        if l == 1:
            return [("sh", 0, 1, (1,)), ("ex", 1, 2, (0,))]
        return [("sh", 0, 1, (1,)), ("lg", 0, 1, tuple(range(2, l + 1))),
                ("ex", 1, 2, (0,))]
    if key == "A2l-1(2)":
        return [("sh", 0, 1, (0,) + tuple(range(1, l))), ("lg", 0, 2, (l,))]
    if key == "Dl+1(2)":
        return [("sh", 0, 2, (1,)), ("sh", 1, 2, (0,)),
                ("lg", 0, 2, tuple(range(2, l + 1)))]
    if key == "E6(2)":
        return [("sh", 0, 1, (0, 1, 2)), ("lg", 0, 2, (3, 4))]
    if key == "D4(3)":
        return [("sh", 0, 1, (0, 1)), ("lg", 0, 3, (2,))]
    raise ValueError(f"{key} is not a reduced affine family")


def _rank_ok(key, l):
    ranges = {
        "A(1)": (1, None), "B(1)": (3, None), "C(1)": (2, None), "D(1)": (4, None),
        "E6(1)": (6, 6), "E7(1)": (7, 7), "E8(1)": (8, 8), "F4(1)": (4, 4),
        "G2(1)": (2, 2), "A2l(2)": (1, None), "A2l-1(2)": (3, None),
        "Dl+1(2)": (2, None), "E6(2)": (4, 4), "D4(3)": (2, 2),
        "B(1)(0,l)": (1, None), "C(2)(l+1)": (1, None),
        "A(2)(0,2l-1)": (2, None), "A(4)(0,2l)": (1, None),
    }
    lo, hi = ranges[key]
    return l >= lo and (hi is None or l <= hi)


AFFINE_FAMILIES = tuple(_THETA_CLASS)

REDUCED_FAMILIES = ("A(1)", "B(1)", "C(1)", "D(1)", "E6(1)", "E7(1)", "E8(1)",
                    "F4(1)", "G2(1)", "A2l(2)", "A2l-1(2)", "Dl+1(2)", "E6(2)",
                    "D4(3)")


def affine_label(key, l):
    fixed = {"E6(1)": "E6(1)", "E7(1)": "E7(1)", "E8(1)": "E8(1)",
             "F4(1)": "F4(1)", "G2(1)": "G2(1)", "E6(2)": "E6(2)", "D4(3)": "D4(3)"}
    if key in fixed:
        return fixed[key]
    return {"A(1)": f"A{l}(1)", "B(1)": f"B{l}(1)", "C(1)": f"C{l}(1)",
            "D(1)": f"D{l}(1)", "A2l(2)": f"A{2 * l}(2)",
            "A2l-1(2)": f"A{2 * l - 1}(2)", "Dl+1(2)": f"D{l + 1}(2)",
            "B(1)(0,l)": f"B(1)(0,{l})", "C(2)(l+1)": f"C(2)({l + 1})",
            "A(2)(0,2l-1)": f"A(2)(0,{2 * l - 1})", "A(4)(0,2l)": f"A(4)(0,{2 * l})"}[key]


def family_of_label(label):
    for key in AFFINE_FAMILIES:
        for l in range(1, 13):
            if _rank_ok(key, l) and affine_label(key, l) == label:
                return key, l
    raise ValueError(f"unknown affine type label {label!r}")


# ---------------------------------------------------------------------------


class AffineDatum:
    """An affine root system given by a membership predicate.

    The space has the convention: coordinates 0..l-1 span the finite part
    (pi_prime is the standard basis there) and coordinate l is delta_prime.
    """

    def __init__(self, space, membership, finite_sys, label=None):
        self.space = space
        self.membership = membership
        self.finite_sys = finite_sys
        self.label = label
        l = space.dim - 1
        self.rank = l
        self.delta_prime = space.basis_vector(l)
        self.pi_prime = tuple(space.basis_vector(i) for i in range(l))
        assert space.nullity == 1

    def finite_part(self, v):
        return v.coords[:-1]

    def embed_finite(self, fvec):
        return self.space.vector(tuple(fvec.coords) + (0,))

    def contains(self, v):
        return self.membership(v)

    def roots_window(self, m_lo, m_hi):
        """All roots gamma + m*delta' with gamma a finite-part root, m in range."""
        out = []
        for fv in self.finite_sys.roots:
            base = tuple(fv.coords)
            for m in range(m_lo, m_hi + 1):
                v = self.space.vector(base + (m,))
                if self.membership(v):
                    out.append(v)
        return sorted(out)


def build_affine_model(label_or_key, l=None):
    """Explicit model of an affine type, driven by the family tables."""
    if l is None:
        key, l = family_of_label(label_or_key)
    else:
        key = label_or_key
    if not _rank_ok(key, l):
        raise ValueError(f"family {key} has no member of rank {l}")
    sqs, edges = _nodes(key, l)
    residues = _residues(key, l)

    fin_gram = [[Fraction(0)] * l for _ in range(l)]
    full_gram = gram_from_data(sqs, edges)
    for i in range(1, l + 1):
        for j in range(1, l + 1):
            fin_gram[i - 1][j - 1] = full_gram[i][j]
    fin_space = AmbientSpace(fin_gram)
    fin_base = [fin_space.basis_vector(i) for i in range(l)]
    fin_roots = set(weyl_orbit(fin_base, fin_base))
    if "ex" in residues:
        shortest = min(v.sq for v in fin_roots)
        fin_roots |= {2 * v for v in fin_roots if v.sq == shortest}
    fin_sys = FiniteRootSystem(fin_space, fin_roots, fin_base)

    from .finite import partition_shlgex
    sh, lg, ex = partition_shlgex(fin_sys.roots)
    class_of = {}
    for name, part in (("sh", sh), ("lg", lg), ("ex", ex)):
        for v in part:
            class_of[v.coords] = name
    present = {name for name in class_of.values()}
    assert present == set(residues), (key, l, present)

    aff_gram = [[Fraction(0)] * (l + 1) for _ in range(l + 1)]
    for i in range(l):
        for j in range(l):
            aff_gram[i][j] = fin_gram[i][j]
    space = AmbientSpace(aff_gram)

    def membership(v):
        cs = v.coords
        if any(Fraction(c).denominator != 1 for c in cs):
            return False
        cls = class_of.get(cs[:-1])
        if cls is None:
            return False
        m = int(cs[-1])
        return any(m % t == r for r, t in residues[cls])

    datum = AffineDatum(space, membership, fin_sys, label=affine_label(key, l))
    datum.family_key = key

    theta_fin = orbit_max(fin_sys, sorted(v for v in fin_sys.roots
                                          if class_of[v.coords] == _THETA_CLASS[key])[0])
    alpha0 = datum.delta_prime - datum.embed_finite(theta_fin)
    datum.model_base = (alpha0,) + datum.pi_prime
    got = cartan_matrix_of(datum.model_base)
    want = [[int(2 * full_gram[i][j] / full_gram[i][i]) for j in range(l + 1)]
            for i in range(l + 1)]
    assert got == want, (key, l, got, want)
    assert membership(alpha0)
    return datum


# ---------------------------------------------------------------------------
# Theorem-style base construction.


def order_pi_prime(datum):
    """Order Pi' by length with a unique-neighbor shortest element first."""
    pi = list(datum.pi_prime)
    pi.sort(key=lambda v: (v.sq, v.coords))
    if len(pi) == 1:
        return tuple(pi)
    min_sq = pi[0].sq
    for i, cand in enumerate(pi):
        if cand.sq != min_sq:
            break
        nbrs = sum(1 for other in pi if other != cand and cand.pair(other) != 0)
        if nbrs == 1:
            rest = pi[:i] + pi[i + 1:]
            return (cand,) + tuple(rest)
    raise OrderingError("no shortest element of Pi' has a unique neighbor")


def check_pi_ordering(pi):
    for a, b in zip(pi, pi[1:]):
        if a.sq > b.sq:
            raise OrderingError("Pi' not ordered by nondecreasing length")
    if len(pi) >= 2:
        nbrs = sum(1 for other in pi[1:] if pi[0].pair(other) != 0)
        if nbrs != 1:
            raise OrderingError("first element of Pi' must have a unique neighbor")


def build_rprime(datum, pi_ordered=None):
    """Finite window R' used to bound the base-finding functional."""
    pi = tuple(pi_ordered) if pi_ordered is not None else order_pi_prime(datum)
    check_pi_ordering(pi)
    seeds = list(pi)
    l = len(pi)
    if l == 1 or 2 * pi[0].sq == pi[1].sq:
        seeds = seeds + [2 * pi[0]]
    window = weyl_orbit(pi, seeds)
    return tuple(window), pi


@dataclass
class BaseFunctional:
    coeffs: tuple
    bound: int

    def __call__(self, v):
        return sum(c * x for c, x in zip(self.coeffs, v.coords))


def build_f(datum, rprime=None):
    """The functional with f(alpha_i) = 1 and f(delta') = 3M, M = max|f| on R'."""
    if rprime is None:
        rprime, _ = build_rprime(datum)
    l = datum.rank
    m_val = max(abs(sum(v.coords[:l])) for v in rprime)
    coeffs = (Fraction(1),) * l + (Fraction(3 * m_val),)
    return BaseFunctional(coeffs, int(m_val))


def compute_pif(datum):
    """Indecomposable positive roots for the functional of build_f.

    The delta'-coefficient of an f-positive root is 0 or 1 inside the window
    where indecomposables can live, and any decomposition splits into one
    coefficient-1 part plus simple roots.  Hence the indecomposables are Pi'
    itself (a positive finite root with coefficient sum >= 2 splits off a
    simple root) together with the dominance-minimal roots of the
    delta' + R' slice.

    Returns (pif, f); pif lists Pi' in datum order followed by alpha_0.
    """
    rprime, _ = build_rprime(datum)
    f = build_f(datum, rprime)
    member = datum.membership
    delta = datum.delta_prime

    p1 = [v for v in rprime
          if all(c >= 0 for c in v.coords[:-1]) and member(v)]
    simple = set(datum.pi_prime)
    for v in p1:
        assert v in simple or sum(v.coords[:-1]) >= 2
    p2 = [delta + g for g in rprime if member(delta + g)]

    def covers(a, b):
        return a != b and all(x >= y for x, y in zip(a.coords, b.coords))

    minimal = [v for v in p2 if not any(covers(v, w) for w in p2)]
    if len(minimal) != 1:
        raise MembershipError(
            f"|Pi^f| = {datum.rank + len(minimal)} != l+1; membership is corrupt")

    # Guard: the 2*delta' + R' slice (f-values in (4M, 7M]) decomposes fully.
    fins2 = [w.coords[:-1] for w in p2]
    pair_sums = {tuple(a + b for a, b in zip(x, y))
                 for x in fins2 for y in fins2}
    p3 = [2 * delta + g for g in rprime if member(2 * delta + g)]
    for v in p3:
        vc = v.coords[:-1]
        ok = (any(covers(v, w) for w in p3)
              or any(all(a - b >= 0 for a, b in zip(vc, t)) for t in pair_sums))
        assert ok, f"indecomposable found in the guard slice: {v}"

    return list(datum.pi_prime) + minimal, f


def affine_alpha0(datum):
    """The unique alpha_0 with {alpha_0} u Pi' a base and alpha_0 in N delta' + Z Pi'."""
    pif, _ = compute_pif(datum)
    extras = [v for v in pif if v not in set(datum.pi_prime)]
    assert len(extras) == 1
    alpha0 = extras[0]
    assert alpha0.coords[-1] == 1, "alpha_0 must be delta' - theta"
    theta = datum.delta_prime - alpha0
    tc = theta.coords[:-1]
    assert any(c != 0 for c in tc)
    assert all(c >= 0 and Fraction(c).denominator == 1 for c in tc)
    theta_fin = datum.finite_sys.space.vector(tc)
    assert theta_fin in set(big_theta(datum.finite_sys)), \
        "theta does not land in Theta(pi(R), pi(Pi'))"
    return alpha0


@dataclass
class MarkedAffineBase:
    """An affine base with its Cartan matrix, null marks, and 2x doubling marks."""

    elements: tuple
    marks: tuple
    gcm: tuple
    delta: RootVector
    delta_marks: tuple
    type_label: str | None = None

    @property
    def rank(self):
        return len(self.elements) - 1

    def edges(self):
        n = len(self.elements)
        out = []
        for i in range(n):
            for j in range(i + 1, n):
                if self.gcm[i][j] != 0:
                    out.append((i, j, self.gcm[i][j], self.gcm[j][i]))
        return out


def cartan_and_delta(base_elements, membership) -> MarkedAffineBase:
    elems = tuple(base_elements)
    n = len(elems)
    gcm = []
    for a in elems:
        row = []
        for b in elems:
            c = cartan_integer(a, b)
            if c.denominator != 1:
                raise NotAffineTypeError("non-integral Cartan pairing")
            row.append(int(c))
        gcm.append(tuple(row))
    for i in range(n):
        if gcm[i][i] != 2:
            raise NotAffineTypeError("diagonal of a GCM must be 2")
        for j in range(n):
            if i != j and gcm[i][j] > 0:
                raise NotAffineTypeError("positive off-diagonal entry")
    kern = linalg.kernel_basis([list(r) for r in gcm])
    if len(kern) != 1:
        raise NotAffineTypeError(f"GCM corank is {len(kern)}, not 1")
    null = kern[0]
    if all(x < 0 for x in null):
        null = [-x for x in null]
    if not all(x > 0 and x.denominator == 1 for x in null):
        raise NotAffineTypeError("GCM null vector is not strictly positive")
    marks = tuple(int(x) for x in null)
    delta = elems[0].space.zero()
    for m, e in zip(marks, elems):
        delta = delta + m * e
    assert delta.is_isotropic
    black = tuple(bool(membership(2 * e)) for e in elems)
    return MarkedAffineBase(elems, black, tuple(gcm), delta, marks)


@lru_cache(maxsize=None)
def _catalog_entry(key, l):
    model = build_affine_model(key, l)
    base = model.model_base
    gcm = cartan_matrix_of(base)
    marks = [bool(model.membership(2 * e)) for e in base]
    return [list(r) for r in gcm], marks


def classify_affine(marked: MarkedAffineBase) -> str:
    """Match (GCM, marks) against the classification list, up to relabeling."""
    l = marked.rank
    gcm = [list(r) for r in marked.gcm]
    marks = list(marked.marks)
    for key in AFFINE_FAMILIES:
        if not _rank_ok(key, l):
            continue
        ref_gcm, ref_marks = _catalog_entry(key, l)
        if gcm_permutation_match(ref_gcm, gcm, ref_marks, marks) is not None:
            marked.type_label = affine_label(key, l)
            return marked.type_label
    raise ClassificationError("marked diagram is outside the classification list")


def verify_base_property(datum, base, m_bound=3):
    """Check every window root lies in Z+ base or Z- base."""
    inv = linalg.invert([list(b.coords) for b in base])
    for v in datum.roots_window(-m_bound, m_bound):
        coords = linalg.mat_vec([list(col) for col in zip(*inv)], list(v.coords))
        if not (all(c >= 0 for c in coords) or all(c <= 0 for c in coords)):
            return False
    return True


def _in_cone(inv_t, v, sign):
    coords = linalg.mat_vec(inv_t, list(v.coords))
    return all(sign * c >= 0 for c in coords)


def conjugate_bases(datum, base1, base2):
    """Express base2 as eps * w(base1) with w a word in reflections of base1.

    Returns (eps, word); word lists elements of base1, to be applied right to
    left: base2 == eps * s_{word[0]} ... s_{word[-1]} (base1).
    """
    pi1 = tuple(base1.elements if isinstance(base1, MarkedAffineBase) else base1)
    pi2 = tuple(base2)
    if len(pi2) != len(pi1):
        raise BasePropertyError("bases must have equal size")
    for v in pi2:
        if not datum.membership(v):
            raise BasePropertyError("base2 contains a non-root")
    if not verify_base_property(datum, pi2, m_bound=2):
        raise BasePropertyError("base2 fails the base property on a window")

    fin_roots = list(datum.finite_sys.roots)
    delta = datum.delta_prime

    def functional_for(pi):
        rows = [list(b.coords) for b in pi]
        h = linalg.solve(rows, [1] * len(pi))
        assert h is not None
        return tuple(h)

    def h_apply(h, v):
        return sum(c * x for c, x in zip(h, v.coords))

    h = functional_for(pi2)
    hd = h_apply(h, delta)
    if hd == 0:
        raise BasePropertyError("degenerate base: h(delta') = 0")
    eps = 1
    if hd < 0:
        eps = -1
        pi2 = tuple(-v for v in pi2)
        h = tuple(-c for c in h)
        hd = -hd

    inv1_t = [list(col) for col in zip(*linalg.invert([list(b.coords) for b in pi1]))]

    def m_value(pi2_cur, h_cur, hd_cur):
        cap = 0
        for g in fin_roots:
            gv = datum.embed_finite(g)
            cap = max(cap, int(abs(h_apply(h_cur, gv)) / hd_cur) + 1)
        count = 0
        for g in fin_roots:
            base = tuple(g.coords)
            for m in range(0, cap + 1):
                v = datum.space.vector(base + (m,))
                if not datum.membership(v):
                    continue
                if not _in_cone(inv1_t, v, 1):
                    continue
                if h_apply(h_cur, v) >= 0:
                    continue
                half = datum.space.vector(tuple(Fraction(c, 2) for c in v.coords))
                if datum.membership(half):
                    continue
                count += 1
        return count

    word = []
    m = m_value(pi2, h, hd)
    initial_m = m
    while m > 0:
        inv2_t = [list(col) for col in zip(*linalg.invert([list(b.coords) for b in pi2]))]
        alpha = next((a for a in pi1 if _in_cone(inv2_t, a, -1)), None)
        assert alpha is not None, "descent step found no alpha in Z- base2"
        pi2 = tuple(alpha.reflect(v) for v in pi2)
        word.append(alpha)
        h = functional_for(pi2)
        hd = h_apply(h, delta)
        assert hd > 0
        m_new = m_value(pi2, h, hd)
        assert m_new == m - 1, "descent failed to reduce m by one"
        m = m_new
    assert set(pi2) == set(pi1), "descent terminated away from base1"
    assert len(word) == initial_m
    return eps, word


def apply_word(word, v):
    """Apply s_{word[0]} ... s_{word[-1]} to a vector (rightmost acts first)."""
    for alpha in reversed(word):
        v = alpha.reflect(v)
    return v
