"""Irreducible finite root systems: construction, Weyl orbits, orbit maxima.

Systems are realized in base coordinates: the simple roots are the standard
basis vectors and the Gram matrix carries the geometry.  Short roots are
normalized to squared length 2.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .core import AmbientSpace, Projection, RootVector, cartan_integer

# (squared lengths, edges (i, j, pairing)) per type, paper-aligned node order:
# B/BC put the short root first, C puts the long root last, F4 shorts first.


def _chain(pairs):
    return [(i, i + 1, p) for i, p in enumerate(pairs)]


def _finite_data(type_label, rank):
    t, l = type_label, rank
    if t == "A" and l >= 1:
        return [2] * l, _chain([-1] * (l - 1))
    if t in ("B", "BC") and l >= 2:
        return [2] + [4] * (l - 1), _chain([-2] * (l - 1))
    if t == "BC" and l == 1:
        return [2], []
    if t == "C" and l >= 2:
        return [2] * (l - 1) + [4], _chain([-1] * (l - 2) + [-2])
    if t == "D" and l >= 4:
        edges = _chain([-1] * (l - 3)) + [(l - 3, l - 1, -1)]
        return [2] * l, edges
    if t == "E" and l in (6, 7, 8):
        branch = {6: 2, 7: 2, 8: 4}[l]
        edges = _chain([-1] * (l - 2)) + [(branch, l - 1, -1)]
        return [2] * l, edges
    if t == "F" and l == 4:
        return [2, 2, 4, 4], _chain([-1, -2, -2])
    if t == "G" and l == 2:
        return [2, 6], [(0, 1, -3)]
    raise ValueError(f"no finite root system of type {type_label}_{rank}")


def gram_from_data(sqs, edges):
    n = len(sqs)
    g = [[Fraction(0)] * n for _ in range(n)]
    for i, s in enumerate(sqs):
        g[i][i] = Fraction(s)
    for i, j, p in edges:
        g[i][j] = Fraction(p)
        g[j][i] = Fraction(p)
    return g


def weyl_orbit(generators, seeds):
    """BFS closure of seeds under reflections in the generators.

    Returns a deterministically sorted list.
    """
    gens = list(generators)
    if any(g.is_isotropic for g in gens):
        raise ValueError("isotropic reflection generator")
    seen = set(seeds if isinstance(seeds, (list, tuple, set)) else [seeds])
    frontier = list(seen)
    while frontier:
        new = []
        for v in frontier:
            for g in gens:
                w = g.reflect(v)
                if w not in seen:
                    seen.add(w)
                    new.append(w)
        frontier = new
    return sorted(seen)


class FiniteRootSystem:
    """Explicit finite root system with a distinguished base."""

    def __init__(self, space, roots, base, type_label=None):
        self.space = space
        self.roots = tuple(sorted(set(roots)))
        self.root_set = frozenset(self.roots)
        self.base = tuple(base)
        self.type_label = type_label
        self._base_inv = linalg.invert([list(b.coords) for b in self.base]) \
            if len(self.base) == space.dim else None

    @property
    def rank(self):
        return len(self.base)

    @property
    def non_reduced(self):
        return any(2 * v in self.root_set for v in self.roots)

    def base_coords(self, v):
        """Coordinates of v in the base (exact; v need not be a root)."""
        if self._base_inv is None:
            raise ValueError("base does not span the space")
        row = [sum(self._base_inv[i][j] * v.coords[i] for i in range(len(v.coords)))
               for j in range(len(self.base))]
        return tuple(row)

    def contains(self, v):
        return v in self.root_set

    def __repr__(self):
        label = self.type_label or "?"
        return f"FiniteRootSystem({label}, {len(self.roots)} roots)"


def build_finite(type_label, rank) -> FiniteRootSystem:
    sqs, edges = _finite_data(type_label, rank)
    space = AmbientSpace(gram_from_data(sqs, edges))
    base = [space.basis_vector(i) for i in range(rank)]
    roots = set(weyl_orbit(base, base))
    if type_label == "BC":
        shortest = min(v.sq for v in roots)
        roots |= {2 * v for v in roots if v.sq == shortest}
        roots = set(weyl_orbit(base, roots))
    return FiniteRootSystem(space, roots, base, f"{type_label}{rank}")


def orbit_max(system: FiniteRootSystem, alpha: RootVector) -> RootVector:
    """The unique orbit element with maximal coefficient sum over the base."""
    if alpha not in system.root_set:
        raise ValueError("seed is not a root of the system")
    orbit = weyl_orbit(system.base, alpha)
    best = max(orbit, key=lambda v: (sum(system.base_coords(v)), v.coords))
    best_sum = sum(system.base_coords(best))
    assert sum(1 for v in orbit if sum(system.base_coords(v)) == best_sum) == 1
    for v in orbit:
        assert all(c >= 0 and c.denominator == 1
                   for c in system.base_coords(best - v))
    return best


def big_theta(system: FiniteRootSystem):
    """Orbit-maximal roots, one per squared-length class."""
    maxima = {}
    for v in system.roots:
        if v.sq not in maxima:
            maxima[v.sq] = orbit_max(system, v)
    return sorted(maxima.values())


def partition_shlgex(roots):
    """Split a finite set of roots into (short, long, extra-long) classes.

    Extra-long means mapping to twice a short root in the quotient modulo the
    radical; this works for finite systems and for windows of affine or
    elliptic systems alike.
    """
    rs = sorted(set(roots))
    if not rs:
        raise ValueError("empty root set")
    space = rs[0].space
    proj = Projection(space, space.radical_basis)
    min_sq = min(v.sq for v in rs)
    sh = [v for v in rs if v.sq == min_sq]
    doubled = {tuple(2 * x for x in proj.apply(v)) for v in sh}
    ex = [v for v in rs if v not in sh and proj.apply(v) in doubled]
    exset = set(ex)
    lg = [v for v in rs if v not in exset and v.sq != min_sq]
    return sh, lg, ex


def find_base(roots, seed=0):
    """Base of an explicit finite root system via a regular functional."""
    rs = sorted(set(roots))
    rng = random.Random(seed)
    for _ in range(64):
        f = [rng.randint(1, 10 ** 6) for _ in range(rs[0].space.dim)]
        values = {v: sum(fi * c for fi, c in zip(f, v.coords)) for v in rs}
        if all(val != 0 for val in values.values()):
            break
    else:
        raise RuntimeError("could not find a regular functional")
    pos = [v for v in rs if values[v] > 0]
    pos_set = set(pos)
    base = [v for v in pos
            if not any(values[x] < values[v] and (v - x) in pos_set for x in pos)]
    return sorted(base)


def cartan_matrix_of(base):
    return [[int(cartan_integer(a, b)) for b in base] for a in base]


def gcm_permutation_match(a, b, marks_a=None, marks_b=None):
    """Permutation p with a[p[i]][p[j]] == b[i][j] (and matching marks), or None."""
    n = len(a)
    if len(b) != n:
        return None
    ma = marks_a or [False] * n
    mb = marks_b or [False] * n

    def node_key(m, marks, i):
        return (marks[i], sorted((m[i][j], m[j][i]) for j in range(n) if j != i and m[i][j]))

    keys_a = [node_key(a, ma, i) for i in range(n)]
    keys_b = [node_key(b, mb, i) for i in range(n)]
    if sorted(keys_a) != sorted(keys_b):
        return None

    perm = [None] * n
    used = [False] * n

    def extend(i):
        if i == n:
            return True
        for cand in range(n):
            if used[cand] or keys_a[cand] != keys_b[i]:
                continue
            ok = all(perm[j] is None or
                     (a[cand][perm[j]] == b[i][j] and a[perm[j]][cand] == b[j][i])
                     for j in range(n))
            if ok:
                perm[i] = cand
                used[cand] = True
                if extend(i + 1):
                    return True
                perm[i] = None
                used[cand] = False
        return False

    return perm if extend(0) else None


_FINITE_CATALOG = (
    [("A", l) for l in range(1, 9)] + [("B", l) for l in range(2, 9)]
    + [("C", l) for l in range(2, 9)] + [("D", l) for l in range(4, 9)]
    + [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]
    + [("BC", l) for l in range(1, 9)]
)


def recognize_type(system: FiniteRootSystem):
    """Name a finite system by matching its base Cartan matrix to the catalog."""
    gcm = cartan_matrix_of(system.base)
    non_reduced = system.non_reduced
    for t, l in _FINITE_CATALOG:
        if l != system.rank or (t == "BC") != non_reduced:
            continue
        sqs, edges = _finite_data(t, l)
        ref_space = AmbientSpace(gram_from_data(sqs, edges))
        ref = [[int(cartan_integer(ref_space.basis_vector(i), ref_space.basis_vector(j)))
                for j in range(l)] for i in range(l)]
        if gcm_permutation_match(ref, gcm) is not None:
            return f"{t}{l}"
    raise ValueError("finite type not recognized")
