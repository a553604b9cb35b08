"""Ambient spaces with exact positive semi-definite forms, vectors, reflections.

Everything is immutable after construction and safe to share.  Vectors carry a
reference to their space; arithmetic between different spaces is an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg


class SpaceMismatchError(ValueError):
    pass


class IsotropicVectorError(ValueError):
    pass


def _exact(x):
    """Ints stay ints; integral fractions collapse to int; else Fraction."""
    if isinstance(x, int):
        return x
    f = Fraction(x)
    return f.numerator if f.denominator == 1 else f


class AmbientSpace:
    """Rational vector space with a positive semi-definite symmetric form.

    The radical basis (an integer basis of the kernel of the Gram matrix) is
    computed once at construction.
    """

    def __init__(self, gram):
        g = tuple(tuple(_exact(x) for x in row) for row in gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise ValueError("gram matrix must be symmetric")
        if not linalg.is_positive_semidefinite([list(r) for r in g]):
            raise ValueError("gram matrix must be positive semi-definite")
        self.dim = n
        self.gram = g
        self.radical_basis = tuple(
            RootVector(tuple(v), self)
            for v in linalg.kernel_basis([list(r) for r in g])
        )

    @property
    def nullity(self):
        return len(self.radical_basis)

    def vector(self, coords) -> "RootVector":
        c = tuple(_exact(x) for x in coords)
        if len(c) != self.dim:
            raise ValueError("coordinate length mismatch")
        return RootVector(c, self)

    def zero(self) -> "RootVector":
        return self.vector([0] * self.dim)

    def basis_vector(self, i) -> "RootVector":
        return self.vector([int(j == i) for j in range(self.dim)])

    def pair_coords(self, a, b):
        g = self.gram
        total = 0
        for i, ai in enumerate(a):
            if ai:
                gi = g[i]
                total += ai * sum(gi[j] * bj for j, bj in enumerate(b) if bj)
        return total

    def __repr__(self):
        return f"AmbientSpace(dim={self.dim}, nullity={self.nullity})"


class RootVector:
    """Exact rational coordinate vector tied to an AmbientSpace."""

    __slots__ = ("coords", "space", "_hash")

    def __init__(self, coords, space):
        self.coords = tuple(coords)
        self.space = space
        self._hash = hash(self.coords)

    def _check(self, other):
        if self.space is not other.space:
            raise SpaceMismatchError("vectors live in different spaces")

    def __add__(self, other):
        self._check(other)
        return RootVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.space)

    def __sub__(self, other):
        self._check(other)
        return RootVector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.space)

    def __neg__(self):
        return RootVector(tuple(-a for a in self.coords), self.space)

    def __rmul__(self, scalar):
        return RootVector(tuple(scalar * a for a in self.coords), self.space)

    __mul__ = None

    def __eq__(self, other):
        return isinstance(other, RootVector) and self.space is other.space \
            and self.coords == other.coords

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.coords < other.coords

    def __repr__(self):
        return f"RootVector({list(self.coords)})"

    def pair(self, other) -> Fraction:
        self._check(other)
        return self.space.pair_coords(self.coords, other.coords)

    @property
    def sq(self) -> Fraction:
        return self.space.pair_coords(self.coords, self.coords)

    @property
    def is_isotropic(self) -> bool:
        return self.sq == 0

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def coroot(self) -> "RootVector":
        q = self.sq
        if q == 0:
            raise IsotropicVectorError("coroot of an isotropic vector")
        return RootVector(tuple(2 * c / q for c in self.coords), self.space)

    def reflect(self, z: "RootVector") -> "RootVector":
        """Image of z under the reflection in self."""
        self._check(z)
        q = self.sq
        if q == 0:
            raise IsotropicVectorError("reflection in an isotropic vector")
        f = 2 * self.pair(z) / q
        return RootVector(tuple(zc - f * sc for zc, sc in zip(z.coords, self.coords)),
                          self.space)


def pairing(v: RootVector, w: RootVector) -> Fraction:
    return v.pair(w)


def coroot(v: RootVector) -> RootVector:
    return v.coroot()


def reflect(v: RootVector, z: RootVector) -> RootVector:
    return v.reflect(z)


def cartan_integer(v: RootVector, w: RootVector) -> Fraction:
    """(v^vee, w) = 2(v, w)/(v, v)."""
    return 2 * v.pair(w) / v.sq


def is_connected(vectors) -> bool:
    """Connectivity of the pairing graph (edge iff pairing nonzero)."""
    vs = list(vectors)
    if not vs:
        raise ValueError("connectivity of an empty set is undefined")
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(len(vs)):
            if j not in seen and vs[i].pair(vs[j]) != 0:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(vs)


class Projection:
    """Canonical projection of a space modulo a span of kernel vectors."""

    def __init__(self, source: AmbientSpace, kernel_vectors):
        self.source = source
        self.kernel_basis = tuple(kernel_vectors)
        kmat = [list(v.coords) for v in self.kernel_basis]
        if kmat:
            rows = linalg.kernel_basis(kmat)
        else:
            rows = [[Fraction(int(i == j)) for j in range(source.dim)]
                    for i in range(source.dim)]
        self.matrix = tuple(tuple(r) for r in rows)
        self.quotient_dims = len(rows)
        for v in self.kernel_basis:
            assert all(sum(r[j] * v.coords[j] for j in range(source.dim)) == 0
                       for r in self.matrix)

    def apply(self, v: RootVector):
        if v.space is not self.source:
            raise SpaceMismatchError("vector not in the projection source")
        return tuple(sum(r[j] * v.coords[j] for j in range(self.source.dim))
                     for r in self.matrix)


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    witnesses: list = field(default_factory=list)
    boundary: list = field(default_factory=list)


@dataclass
class AxiomReport:
    checks: dict

    @property
    def all_pass(self):
        return all(c.passed for c in self.checks.values())

    def __getitem__(self, name):
        return self.checks[name]

    def summary(self):
        lines = []
        for c in self.checks.values():
            status = "pass" if c.passed else "FAIL"
            extra = f" ({len(c.witnesses)} witnesses)" if c.witnesses else ""
            if c.boundary:
                extra += f" [{len(c.boundary)} boundary-only]"
            lines.append(f"{c.name}: {status}{extra}")
        return "\n".join(lines)


def verify_axioms(roots, lattice_rank) -> AxiomReport:
    """Check the extended-affine-root-system axioms on a finite set.

    A finite window of an infinite system may fail closure at the boundary;
    those violations are reported separately from interior ones and do not
    fail the check.
    """
    rs = sorted(set(roots))
    if not rs:
        raise ValueError("empty root set")
    space = rs[0].space
    rset = set(rs)
    report = {}

    iso = [v for v in rs if v.is_isotropic]
    coord_rows = [list(v.coords) for v in rs]
    spans = linalg.rank(coord_rows) == space.dim
    report["AX1"] = AxiomCheck("AX1", not iso and spans, witnesses=iso)

    scale = 1
    for v in rs:
        for c in v.coords:
            scale = scale * Fraction(c).denominator // __import__("math").gcd(
                scale, Fraction(c).denominator)
    int_rows = [[int(Fraction(c) * scale) for c in v.coords] for v in rs]
    divisors = linalg.smith_normal_form(int_rows)
    report["AX2"] = AxiomCheck("AX2", len(divisors) == lattice_rank,
                               witnesses=[("rank", len(divisors), "divisors", divisors)]
                               if len(divisors) != lattice_rank else [])

    bad3 = []
    for a in rs:
        if a.is_isotropic:
            continue
        for b in rs:
            if cartan_integer(a, b).denominator != 1:
                bad3.append((a, b))
    report["AX3"] = AxiomCheck("AX3", not bad3, witnesses=bad3)

    lo = [min(v.coords[i] for v in rs) for i in range(space.dim)]
    hi = [max(v.coords[i] for v in rs) for i in range(space.dim)]
    hard4, edge4 = [], []
    for a in rs:
        if a.is_isotropic:
            continue
        for b in rs:
            img = a.reflect(b)
            if img not in rset:
                inside = all(lo[i] <= img.coords[i] <= hi[i] for i in range(space.dim))
                (hard4 if inside else edge4).append((a, b, img))
    report["AX4"] = AxiomCheck("AX4", not hard4, witnesses=hard4, boundary=edge4)

    noniso = [v for v in rs if not v.is_isotropic]
    connected = bool(noniso) and is_connected(noniso)
    report["AX5"] = AxiomCheck("AX5", connected)

    return AxiomReport(report)
