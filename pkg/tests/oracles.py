"""Brute-force reference computations, sharing no code with the package.

Everything here goes through sympy (exact ranks, Smith forms) and plain
enumeration.  Slow, but small fixtures only.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache

from sympy import GF, QQ, ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.matrices import DomainMatrix


def lattice_points(basis, zbound):
    """All sum z_j v_j with |z_j| <= zbound."""
    n = len(basis[0])
    out = set()
    for z in itertools.product(range(-zbound, zbound + 1), repeat=len(basis)):
        out.add(tuple(sum(zj * v[i] for zj, v in zip(z, basis)) for i in range(n)))
    return out


def subsets(n):
    for k in range(n + 1):
        yield from itertools.combinations(range(1, n + 1), k)


def koszul_faces(member, b):
    n = len(b)
    faces = []
    for tau in subsets(n):
        c = list(b)
        for v in tau:
            c[v - 1] -= 1
        if member(tuple(c)):
            faces.append(tau)
    return frozenset(faces)


def _rank(rows, ncols, p=None):
    if not rows or not ncols:
        return 0
    dom = QQ if p is None else GF(p)
    return DomainMatrix.from_list_sympy(len(rows), ncols, rows).convert_to(dom).rank()


def boundary_rows(faces, i):
    src = sorted(f for f in faces if len(f) == i + 1)
    dst = sorted(f for f in faces if len(f) == i)
    pos = {f: r for r, f in enumerate(dst)}
    rows = [[0] * len(src) for _ in dst]
    for c, f in enumerate(src):
        for t in range(len(f)):
            rows[pos[f[:t] + f[t + 1:]]][c] = (-1) ** t
    return rows, len(src)


@lru_cache(maxsize=None)
def reduced_betti(faces: frozenset, i: int, p=None) -> int:
    if not faces:
        return 0
    nf = sum(1 for f in faces if len(f) == i + 1)
    if not nf:
        return 0
    r_i = _rank(*boundary_rows(faces, i), p=p) if i >= 0 else 0
    r_up = _rank(*boundary_rows(faces, i + 1), p=p)
    return nf - r_i - r_up


def join(*vs):
    return tuple(max(xs) for xs in zip(*vs))


def lattice_betti_table(basis, key, radius, zbound=25, max_points=2):
    """{(i, key(b)): rank} over joins of 0 with up to ``max_points`` lattice points of sup-norm <= radius."""
    n = len(basis[0])
    pts = lattice_points(basis, zbound)
    ball = sorted(p for p in pts if max(map(abs, p)) <= radius and any(p))

    def member(c):
        return any(all(a <= b for a, b in zip(p, c)) for p in pts)

    zero = (0,) * n
    cands = {zero}
    for k in range(1, max_points + 1):
        for combo in itertools.combinations(ball, k):
            cands.add(join(zero, *combo))
    table = {}
    for b in cands:
        K = koszul_faces(member, b)
        for i in range(n + 1):
            r = reduced_betti(K, i - 1)
            if r:
                table[(i, key(b))] = r
    return table


def generated_betti_table(gens, p=None):
    """{(i, b): rank} over joins of all nonempty generator subsets."""
    n = len(gens[0])

    def member(c):
        return any(all(a <= b for a, b in zip(g, c)) for g in gens)

    cands = set()
    for k in range(1, len(gens) + 1):
        for combo in itertools.combinations(gens, k):
            cands.add(join(*combo))
    table = {}
    for b in cands:
        K = koszul_faces(member, b)
        for i in range(n + 1):
            r = reduced_betti(K, i - 1, p)
            if r:
                table[(i, b)] = r
    return table


def fiber_size(grading, degree, key, target):
    """Number of w in N^n with grading . w = degree and key(w) = target."""
    if degree < 0:
        return 0
    count = 0
    ranges = [range(degree // g + 1) for g in grading]
    for w in itertools.product(*ranges):
        if sum(a * g for a, g in zip(w, grading)) == degree and key(w) == target:
            count += 1
    return count


# forestry ------------------------------------------------------------------


def closure(facets):
    faces = {()}
    for f in facets:
        for k in range(len(f) + 1):
            faces.update(itertools.combinations(sorted(f), k))
    return frozenset(faces)


def _gcd_maximal_minors(cols, r):
    """Product of the invariant factors of the matrix with these columns (rank r)."""
    if r == 0:
        return 1
    facs = invariant_factors(Matrix(cols).T, domain=ZZ)
    out = 1
    for f in facs[:r]:
        out *= int(f)
    return abs(out)


def forestry_bruteforce(faces, i):
    """(shrubberies, stake sets, sum tau^2, sum sigma^2) for ∂_i by exhaustive subsets."""
    rows, ncols = boundary_rows(faces, i)
    src = sorted(f for f in faces if len(f) == i + 1)
    dst = sorted(f for f in faces if len(f) == i)
    cols = [[rows[r][c] for r in range(len(rows))] for c in range(ncols)]
    r = _rank(rows, ncols)
    whole = _gcd_maximal_minors(cols, r) if r else 1
    shrubs, tau = [], 0
    for T in itertools.combinations(range(ncols), r):
        sub = [cols[c] for c in T]
        if _rank([list(x) for x in zip(*sub)], r) == r if r else True:
            shrubs.append(tuple(src[c] for c in T))
            t = _gcd_maximal_minors(sub, r) // whole if r else 1
            tau += t * t
    stakes, sigma = [], 0
    # boundary lattice basis: columns of a Z-basis of the column span (Hermite via sympy)
    if r:
        H = _lattice_basis(cols, len(dst))
    for S in itertools.combinations(range(len(dst)), r):
        if r == 0:
            stakes.append(())
            sigma += 1
            continue
        proj = [[cols[c][s] for s in S] for c in range(ncols)]
        if _rank(proj, r) == r:
            stakes.append(tuple(dst[s] for s in S))
            m = Matrix([[h[s] for s in S] for h in H]).det()
            sigma += int(m) ** 2
    return shrubs, stakes, tau, sigma


def _lattice_basis(cols, m):
    """Z-basis of the span of integer vectors, as rows, via Smith form."""
    from sympy.matrices.normalforms import smith_normal_decomp

    A = Matrix(cols).T  # m x k
    D, U, V = smith_normal_decomp(A, domain=ZZ)
    # A = U^-1 D V^-1; image of A = U^-1 image(D)
    Uinv = U.inv()
    basis = []
    for t in range(min(D.shape)):
        if D[t, t] != 0:
            basis.append([int(D[t, t] * Uinv[r, t]) for r in range(m)])
    return basis


def multinomial(diff):
    out = math.factorial(sum(diff))
    for x in diff:
        out //= math.factorial(x)
    return out
