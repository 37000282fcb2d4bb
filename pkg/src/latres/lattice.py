"""Lattices L in Z^n with a positive grading, and the geometry built on them."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .linalg import (
    QQ,
    IntMatrix,
    hermite_normal_form,
    kernel_basis,
    rank,
    smith_normal_form,
    solve,
    solve_field,
)


class LatticeError(ValueError):
    pass


class NotCoArtinianError(LatticeError):
    """L meets the nonnegative orthant; ``witness`` is a nonzero point of L ∩ N^n."""

    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__(f"lattice contains the nonnegative vector {list(self.witness)}")


class DependentBasisError(LatticeError):
    """Basis vectors are dependent; ``certificate`` holds coefficients z with sum z_j v_j = 0."""

    def __init__(self, certificate):
        self.certificate = tuple(certificate)
        super().__init__(f"basis vectors are dependent: coefficients {list(self.certificate)}")


@dataclass(frozen=True)
class Lattice:
    n: int
    basis: tuple
    grading: tuple

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(tuple(int(x) for x in v) for v in self.basis))
        object.__setattr__(self, "grading", tuple(int(x) for x in self.grading))
        if len(self.grading) != self.n or any(v for v in self.basis if len(v) != self.n):
            raise LatticeError("vector length does not match the ambient dimension")
        if any(x < 1 for x in self.grading):
            raise LatticeError("grading must be strictly positive")
        for v in self.basis:
            if sum(a * b for a, b in zip(self.grading, v)):
                raise LatticeError(f"grading is not orthogonal to basis vector {list(v)}")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @classmethod
    def trivial(cls, n: int) -> "Lattice":
        return cls(n, (), (1,) * n)

    def degree(self, b: Sequence[int]) -> int:
        """The d-degree d·b (constant on cosets of L)."""
        return sum(x * y for x, y in zip(self.grading, b))

    def combine(self, z: Sequence[int]) -> tuple:
        """The lattice point sum_j z_j basis_j."""
        out = [0] * self.n
        for zj, v in zip(z, self.basis):
            if zj:
                for i, x in enumerate(v):
                    out[i] += zj * x
        return tuple(out)

    @cached_property
    def _echelon(self):
        # Hermite form taken on reversed coordinates: pivots land on the
        # trailing coordinates, so normal forms keep the leading ones.
        if not self.basis:
            return []
        H, piv = hermite_normal_form([list(reversed(v)) for v in self.basis])
        n = self.n
        return [(tuple(reversed(h)), n - 1 - p) for h, p in zip(H, piv)]

    @cached_property
    def _member_cache(self) -> dict:
        return {}

    @cached_property
    def quotient(self) -> "QuotientGroup":
        return quotient(self)

    def normal_form(self, b: Sequence[int]) -> tuple:
        return coset_normal_form(self, b)

    def class_of(self, b: Sequence[int]) -> tuple:
        return self.quotient.project(b)


# --------------------------------------------------------------------------
# Certification
# --------------------------------------------------------------------------


def _lcm_denominators(xs) -> int:
    out = 1
    for x in xs:
        out = out * Fraction(x).denominator // math.gcd(out, Fraction(x).denominator)
    return out


def _integral_primitive(xs) -> tuple:
    m = _lcm_denominators(xs)
    ints = [int(Fraction(x) * m) for x in xs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return tuple(v // g for v in ints) if g else tuple(ints)


def _grading_vertices(basis: list, n: int) -> list[tuple]:
    """Vertices of {d : d·v = 0 for v in basis, d >= 1} (exact rationals)."""
    if basis:
        perp = kernel_basis(IntMatrix.from_rows(basis, cols=n))
    else:
        perp = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    m = len(perp)
    if m == 0:
        return []
    # d = sum_t y_t perp_t ; constraint rows: d_i = row_i . y >= 1
    C = [[perp[t][i] for t in range(m)] for i in range(n)]
    verts = set()
    for tight in itertools.combinations(range(n), m):
        sub = [C[i] for i in tight]
        if rank(sub) < m:
            continue
        y = solve_field(sub, [1] * m, QQ, ncols=m)
        d = tuple(sum(Fraction(C[i][t]) * y[t] for t in range(m)) for i in range(n))
        if all(x >= 1 for x in d):
            verts.add(d)
    return sorted(verts)


def _nonnegative_witness(basis: list, n: int) -> tuple | None:
    """A nonzero point of L ∩ N^n as a vertex of {l in L_Q : l >= 0, sum l = 1}."""
    k = len(basis)
    # l = sum_j z_j basis_j ; row i of l is C[i] . z
    C = [[basis[j][i] for j in range(k)] for i in range(n)]
    total = [sum(C[i][j] for i in range(n)) for j in range(k)]
    for tight in itertools.combinations(range(n), k - 1):
        sub = [C[i] for i in tight] + [total]
        if rank(sub) < k:
            continue
        z = solve_field(sub, [0] * (k - 1) + [1], QQ, ncols=k)
        ell = [sum(Fraction(C[i][j]) * z[j] for j in range(k)) for i in range(n)]
        if all(x >= 0 for x in ell):
            zi = _integral_primitive(z)
            return tuple(sum(basis[j][i] * zi[j] for j in range(k)) for i in range(n))
    return None


def certify_lattice(basis: Sequence[Sequence[int]], n: int) -> Lattice:
    """Certify L ∩ N^n = {0} by exhibiting a positive grading orthogonal to L.

    Among rational vertices of {d : d·L = 0, d >= 1} the one with the least
    coordinate sum (ties: lexicographically least) is scaled to a primitive
    integer vector.  Raises ``NotCoArtinianError`` with a witness in L ∩ N^n
    when no grading exists, ``DependentBasisError`` on a dependent basis.
    """
    basis = [tuple(int(x) for x in v) for v in basis]
    for v in basis:
        if len(v) != n:
            raise LatticeError(f"basis vector {list(v)} does not have length {n}")
    if basis and rank(basis) < len(basis):
        cert = kernel_basis(IntMatrix.from_rows(basis, cols=n).transpose())[0]
        raise DependentBasisError(cert)
    verts = _grading_vertices(basis, n)
    if not verts:
        witness = _nonnegative_witness(basis, n)
        assert witness is not None, "alternative theorem violated"
        raise NotCoArtinianError(witness)
    best = min(verts, key=lambda d: (sum(d), d))
    return Lattice(n, tuple(basis), _integral_primitive(best))


def lattice_member(L: Lattice, v: Sequence[int]) -> tuple | None:
    """Coordinates z with sum z_j basis_j = v, or None if v is not in L."""
    v = tuple(int(x) for x in v)
    if len(v) != L.n:
        raise LatticeError("vector has the wrong length")
    if not L.basis:
        return () if not any(v) else None
    return solve(IntMatrix.from_columns(L.basis, L.n), v)


# --------------------------------------------------------------------------
# Enumeration below a bound
# --------------------------------------------------------------------------


def _box(L: Lattice, c: Sequence[int]):
    d = L.grading
    total = sum(x * y for x, y in zip(d, c))
    lo = []
    for i in range(L.n):
        rest = total - d[i] * c[i]
        lo.append(-(rest // d[i]))  # ceil(-rest / d_i)
    return lo, list(c)


def _search_below(L: Lattice, c: Sequence[int], first_only: bool) -> list[tuple]:
    n = L.n
    lo, hi = _box(L, c)
    if any(a > b for a, b in zip(lo, hi)):
        return []
    if not L.basis:
        return [(0,) * n] if min(c, default=0) >= 0 else []
    rows = L._echelon
    found = []
    pivot_cols = [q for _, q in rows]

    def check(vec, cols):
        return all(lo[i] <= vec[i] <= hi[i] for i in cols)

    def rec(j, vec):
        if j == len(rows):
            if check(vec, range(n)):
                found.append(tuple(vec))
                return first_only
            return False
        h, q = rows[j]
        hq = h[q]
        zmin = -((vec[q] - lo[q]) // hq)  # ceil((lo - vec)/h)
        zmax = (hi[q] - vec[q]) // hq
        nxt = pivot_cols[j + 1] if j + 1 < len(rows) else -1
        fixed = range(nxt + 1, q)
        for z in range(zmin, zmax + 1):
            w = [a + z * b for a, b in zip(vec, h)] if z else vec
            if check(w, fixed) and rec(j + 1, w):
                return True
        return False

    # coordinates beyond the first pivot are zero for every lattice point
    if not check([0] * n, range(pivot_cols[0] + 1, n)):
        return []
    rec(0, [0] * n)
    return sorted(found)


def points_below(L: Lattice, c: Sequence[int]) -> list[tuple]:
    """All l in L with l <= c componentwise, in lexicographic order."""
    return _search_below(L, tuple(c), first_only=False)


def has_point_below(L: Lattice, c: Sequence[int]) -> bool:
    c = tuple(c)
    key = coset_normal_form(L, c) if L.basis else c
    cache = L._member_cache
    hit = cache.get(key)
    if hit is None:
        hit = bool(_search_below(L, key, first_only=True))
        cache.setdefault(key, hit)
    return hit


def points_in_ball(L: Lattice, radius: int) -> list[tuple]:
    """Lattice points of sup-norm at most ``radius``."""
    pts = points_below(L, (radius,) * L.n)
    return [p for p in pts if min(p, default=0) >= -radius]


# --------------------------------------------------------------------------
# Quotient group and coset representatives
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientGroup:
    """Z^n / L as Z^free_rank ⊕ ⊕ Z/f_i, with a projection matrix.

    ``project(b)`` lists the torsion coordinates (reduced mod f_i) first and
    then the free coordinates.
    """

    free_rank: int
    torsion_factors: tuple
    projection: tuple  # rows of an integer matrix, torsion rows then free rows

    def project(self, b: Sequence[int]) -> tuple:
        out = []
        for t, row in enumerate(self.projection):
            x = sum(a * y for a, y in zip(row, b))
            if t < len(self.torsion_factors):
                x %= self.torsion_factors[t]
            out.append(x)
        return tuple(out)


def quotient(L: Lattice) -> QuotientGroup:
    n = L.n
    if not L.basis:
        ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        return QuotientGroup(n, (), ident)
    snf = smith_normal_form(IntMatrix.from_columns(L.basis, n))
    U = snf.U.tolist()
    tors, tors_rows = [], []
    for t, f in enumerate(snf.invariant_factors):
        if f > 1:
            tors.append(f)
            tors_rows.append(tuple(U[t]))
    free_rows = [tuple(U[t]) for t in range(snf.rank, n)]
    return QuotientGroup(n - snf.rank, tuple(tors), tuple(tors_rows + free_rows))


def coset_normal_form(L: Lattice, b: Sequence[int]) -> tuple:
    """Canonical representative of b + L.

    Reduces b along the Hermite basis so that each pivot coordinate lands in
    [0, pivot); pivots sit on trailing coordinates.
    """
    b = [int(x) for x in b]
    for h, q in L._echelon:
        t = b[q] // h[q]
        if t:
            b = [x - t * y for x, y in zip(b, h)]
    return tuple(b)


# --------------------------------------------------------------------------
# Saturated decreasing lattice paths
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticePath:
    """b = c_0 > c_1 > ... > c_k = a, each step lowering coordinate ``steps[t]`` by one."""

    start: tuple
    end: tuple
    steps: tuple

    def vertices(self) -> list[tuple]:
        out = [self.start]
        cur = list(self.start)
        for j in self.steps:
            cur[j] -= 1
            out.append(tuple(cur))
        return out


def saturated_paths(a: Sequence[int], b: Sequence[int]) -> Iterator[LatticePath]:
    """Enumerate all saturated decreasing paths from b down to a (lex order of steps)."""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise ValueError("endpoints have different lengths")
    if any(x > y for x, y in zip(a, b)):
        raise ValueError(f"{list(a)} is not below {list(b)}")
    remaining = [y - x for x, y in zip(a, b)]
    steps: list[int] = []

    def rec():
        if not any(remaining):
            yield LatticePath(b, a, tuple(steps))
            return
        for j, r in enumerate(remaining):
            if r:
                remaining[j] -= 1
                steps.append(j)
                yield from rec()
                steps.pop()
                remaining[j] += 1

    yield from rec()


def count_paths(a: Sequence[int], b: Sequence[int]) -> int:
    """Multinomial count of saturated paths from b to a."""
    diff = [y - x for x, y in zip(a, b)]
    if any(x < 0 for x in diff):
        raise ValueError("endpoints are not comparable")
    out = math.factorial(sum(diff))
    for x in diff:
        out //= math.factorial(x)
    return out
