"""Root multiplicities of the elliptic Lie algebra attached to a datum.

Real roots have multiplicity 1, the zero weight carries l+2, and an isotropic
point m*a' (a' primitive) carries the number of elements of a fundamental set
adapted to a' whose isotropic step divides m.  The fundamental set for a
marking direction is produced by running the affine base construction on the
quotient modulo a' and lifting, never by tabulating residues of the content
map: the content of a lattice point is not periodic, so any shortcut through
"gcd mod t" tables is wrong (and the tests keep a negative control for it).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .affine import affine_alpha0
from .elliptic import EllipticDatum, affine_quotient, compute_kg


def content(p, z):
    """gcd of the two coordinates of an isotropic lattice point; 0 at 0."""
    return gcd(int(p), int(z))


def canonical_direction(p, z):
    """(m, (x, y)) with (p, z) = m (x, y), (x, y) primitive with canonical sign."""
    c = content(p, z)
    if c == 0:
        raise ValueError("the origin has no direction")
    x, y = p // c, z // c
    if x > 0 or (x == 0 and y > 0):
        return c, (x, y)
    return -c, (-x, -y)


@dataclass
class MarkingLine:
    """A primitive isotropic direction with its adapted fundamental set."""

    direction: tuple
    pi: tuple
    k: tuple
    g: tuple

    @property
    def kprime(self):
        return self.k


def fundamental_set_for(datum: EllipticDatum, a_prime) -> MarkingLine:
    """Fundamental set (Pi', k', g') for the marking direction a_prime.

    Runs the affine base construction on pi_{a'}(R), lifts the new node back
    into R, and reads k', g' off the membership predicate along a'.
    """
    x, y = int(a_prime[0]), int(a_prime[1])
    quotient, (u, v) = affine_quotient(datum, (x, y))
    alpha0_q = affine_alpha0(quotient)
    l = datum.l
    phi0 = alpha0_q.coords[:l]
    n0 = int(alpha0_q.coords[l])
    t = datum.modulus

    lift = None
    for radius in range(0, 2 * t + 1):
        for s in ([0] if radius == 0 else [radius, -radius]):
            cand = datum.space.vector(phi0 + (n0 * u + s * x, n0 * v + s * y))
            if datum.member(cand):
                lift = cand
                break
        if lift is not None:
            break
    if lift is None:
        raise RuntimeError("affine node of the quotient does not lift into R")

    pi = (lift,) + tuple(datum.pi[i] for i in range(1, l + 1))
    direction = x * datum.delta + y * datum.a
    k, g = compute_kg(datum.member, pi, direction, bound=4 * t + 4)
    assert 1 in k
    return MarkingLine((x, y), pi, k, g)


def _line_cache(datum):
    cache = getattr(datum, "_marking_cache", None)
    if cache is None:
        cache = {}
        datum._marking_cache = cache
    return cache


def marking_line(datum, a_prime) -> MarkingLine:
    cache = _line_cache(datum)
    key = (int(a_prime[0]), int(a_prime[1]))
    if key not in cache:
        cache[key] = fundamental_set_for(datum, key)
    return cache[key]


def marking_lines(datum, bound):
    """All primitive directions with coordinates bounded by `bound`, one per
    +- pair, each carrying its fundamental set."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    dirs = []
    for x in range(0, bound + 1):
        for y in range(-bound, bound + 1):
            if x == 0:
                if y != 1:
                    continue
            elif gcd(x, y) != 1:
                continue
            dirs.append((x, y))
    return [marking_line(datum, d) for d in sorted(dirs)]


def mult_along(datum, line: MarkingLine, m) -> int:
    """dim of the m a'-component: elements of Pi' whose step divides m."""
    if m == 0:
        raise ValueError("use mult_at for the origin")
    return sum(1 for kp in line.k if m % kp == 0)


def mult_at(datum, lam) -> int:
    """Multiplicity of any point of the root lattice ZR."""
    if isinstance(lam, tuple):
        lam = datum.space.vector((0,) * datum.l + (lam[0], lam[1]))
    if any(Fraction(c).denominator != 1 for c in lam.coords):
        raise ValueError("point is not in the root lattice ZR")
    if lam.is_zero():
        return datum.l + 2
    phi, p, z = datum.split(lam)
    if all(c == 0 for c in phi):
        m, direction = canonical_direction(int(p), int(z))
        return mult_along(datum, marking_line(datum, direction), m)
    return 1 if datum.member(lam) else 0


@dataclass
class MultiplicityTable:
    box: tuple
    entries: dict
    symbolic: list | None

    def value(self, p, z):
        return self.entries[(p, z)]

    def to_json(self):
        pmin, pmax, zmin, zmax = self.box
        rows = [[self.entries[(p, z)] for z in range(zmin, zmax + 1)]
                for p in range(pmin, pmax + 1)]
        data = {"schema": 1, "box": list(self.box), "entries": rows}
        data["symbolic"] = ([{"mod": t, "p": rp, "z": rz, "value": val}
                             for t, rp, rz, val in self.symbolic]
                            if self.symbolic is not None else None)
        return data

    def render_text(self):
        """Grid with the origin at bottom left, a rightward, delta upward."""
        pmin, pmax, zmin, zmax = self.box
        width = max(len(str(v)) for v in self.entries.values())
        lines = []
        for p in range(pmax, pmin - 1, -1):
            row = " ".join(str(self.entries[(p, z)]).rjust(width)
                           for z in range(zmin, zmax + 1))
            lines.append(row)
        return "\n".join(lines)


def _fit_symbolic(entries, box):
    pmin, pmax, zmin, zmax = box
    for t in (1, 2, 4):
        classes = {}
        ok = True
        for (p, z), val in entries.items():
            if (p, z) == (0, 0):
                continue
            key = (p % t, z % t)
            if classes.setdefault(key, val) != val:
                ok = False
                break
        if ok and len(classes) == t * t:
            return [(t, rp, rz, val) for (rp, rz), val in sorted(classes.items())]
        if ok and t == 4:
            return [(t, rp, rz, val) for (rp, rz), val in sorted(classes.items())]
    return None


def mult_table(datum, box) -> MultiplicityTable:
    """Multiplicities on a rectangular box of the isotropic lattice."""
    pmin, pmax, zmin, zmax = box
    entries = {(p, z): mult_at(datum, (p, z))
               for p in range(pmin, pmax + 1) for z in range(zmin, zmax + 1)}
    symbolic = _fit_symbolic(entries, box)
    if symbolic is not None:
        for (p, z), val in entries.items():
            if (p, z) == (0, 0):
                continue
            t = symbolic[0][0]
            rule = next(v for tt, rp, rz, v in symbolic
                        if (p % tt, z % tt) == (rp, rz))
            assert rule == val
    return MultiplicityTable(tuple(box), entries, symbolic)


class IsoTransportError(ValueError):
    pass


def check_iso_transport(fmap, datum1, datum2, box=6, fin_bound=2):
    """Verify fmap is a root-system isomorphism on a box and transports
    multiplicities pointwise.

    fmap maps datum1 coordinates to datum2 coordinates: a pair (fin, M) where
    fin is an l x l integer matrix (identity if None) and M is the 2 x 2
    action on (delta, a) columns, i.e. f(delta), f(a) written in (delta, a).
    """
    fin, mm = fmap
    l = datum1.l
    if datum2.l != l:
        raise IsoTransportError("ranks differ")
    if fin is None:
        fin = [[int(i == j) for j in range(l)] for i in range(l)]
    ((m00, m01), (m10, m11)) = mm
    if m00 * m11 - m01 * m10 not in (1, -1):
        raise IsoTransportError("isotropic block is not unimodular")

    def apply(vec):
        phi = vec.coords[:l]
        p, z = vec.coords[l], vec.coords[l + 1]
        new_phi = tuple(sum(fin[i][j] * phi[i] for i in range(l)) for j in range(l))
        return datum2.space.vector(new_phi + (m00 * p + m10 * z, m01 * p + m11 * z))

    basis1 = [datum1.space.basis_vector(i) for i in range(l + 2)]
    images = [apply(b) for b in basis1]
    scale = None
    for i in range(l + 2):
        for j in range(l + 2):
            lhs = images[i].pair(images[j])
            rhs = basis1[i].pair(basis1[j])
            if rhs != 0:
                c = lhs / rhs
                if scale is None:
                    scale = c
                elif scale != c:
                    raise IsoTransportError("form is not scaled uniformly")
            elif lhs != 0:
                raise IsoTransportError("form scaling fails on an isotropic pair")
    if scale is None or scale <= 0:
        raise IsoTransportError("form scale must be positive")

    roots1 = datum1.generate_roots(fin_bound, box, box)
    for r in roots1:
        if not datum2.member(apply(r)):
            raise IsoTransportError(f"image of root {r} is not a root")
    inv_fin = [[Fraction(x) for x in row]
               for row in _invert_int(fin)]
    det = m00 * m11 - m01 * m10
    inv_mm = [[m11 * det, -m01 * det], [-m10 * det, m00 * det]]

    def unapply(vec):
        phi = vec.coords[:l]
        p, z = vec.coords[l], vec.coords[l + 1]
        old_phi = tuple(sum(inv_fin[i][j] * phi[i] for i in range(l)) for j in range(l))
        return datum1.space.vector(
            old_phi + (inv_mm[0][0] * p + inv_mm[1][0] * z,
                       inv_mm[0][1] * p + inv_mm[1][1] * z))

    for r in datum2.generate_roots(fin_bound, box, box):
        pre = unapply(r)
        if not datum1.member(pre):
            raise IsoTransportError(f"preimage of root {r} is not a root")

    for p in range(-box, box + 1):
        for z in range(-box, box + 1):
            lam = datum1.iso_point(p, z)
            if mult_at(datum2, apply(lam)) != mult_at(datum1, lam):
                return False
    return True


def _invert_int(m):
    from . import linalg
    return linalg.invert([[Fraction(x) for x in row] for row in m])
