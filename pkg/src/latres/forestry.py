"""Shrubberies, stake sets, their indices, bad primes and communities.

A shrubbery for ∂_i is a column basis of the boundary matrix (a set of
i-faces whose boundaries form a basis of the boundaries); a stake set is a
row basis (a set of (i-1)-faces on whose coordinates the boundaries project
injectively).  Both are bases of a matroid, so they all have size rank ∂_i.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .linalg import (
    QQ,
    IntMatrix,
    determinant,
    hermite_normal_form,
    matmul,
    prime_factors,
    rank,
    reduce_against,
    subgroup_index,
)
from .simplicial import SimplicialComplex, boundary_matrix, torsion_order

Face = tuple


class ForestryError(ValueError):
    pass


# --------------------------------------------------------------------------
# Matroid bases of a vector family
# --------------------------------------------------------------------------


class _Echelon:
    """Incremental independence test over a field."""

    def __init__(self, F):
        self.F = F
        self.rows: list = []
        self.piv: list = []

    def try_add(self, v) -> bool:
        F = self.F
        w = reduce_against(v, self.rows, self.piv, F)
        c = next((k for k, x in enumerate(w) if x != 0), None)
        if c is None:
            return False
        inv = F.inv(w[c])
        w = [F.mul(x, inv) for x in w]
        new_rows = []
        for r in self.rows:
            f = r[c]
            new_rows.append([F.sub(x, F.mul(f, y)) for x, y in zip(r, w)] if f != 0 else r)
        self.rows = new_rows + [w]
        self.piv = self.piv + [c]
        return True

    def copy(self) -> "_Echelon":
        e = _Echelon(self.F)
        e.rows = list(self.rows)
        e.piv = list(self.piv)
        return e


def matroid_bases(vectors: Sequence[Sequence], F=QQ) -> list[tuple[int, ...]]:
    """All maximal independent index sets, lexicographically ordered.

    Depth-first over index subsets with pruning on dependence and on the
    number of remaining candidates.
    """
    vectors = [list(v) for v in vectors]
    r = rank(vectors, F) if vectors else 0
    out: list = []
    m = len(vectors)

    def rec(start, chosen, ech):
        if len(chosen) == r:
            out.append(tuple(chosen))
            return
        for k in range(start, m - (r - len(chosen)) + 1):
            e = ech.copy()
            if e.try_add(vectors[k]):
                chosen.append(k)
                rec(k + 1, chosen, e)
                chosen.pop()

    rec(0, [], _Echelon(F))
    return out


def matroid_bases_by_exchange(vectors: Sequence[Sequence], F=QQ) -> list[tuple[int, ...]]:
    """Same set as :func:`matroid_bases`, reached by basis exchanges from the greedy basis."""
    vectors = [list(v) for v in vectors]
    r = rank(vectors, F) if vectors else 0
    start = tuple(greedy_basis(vectors, F))
    seen = {start}
    frontier = [start]

    def independent(idx):
        return rank([vectors[k] for k in idx], F) == len(idx)

    while frontier:
        B = frontier.pop()
        for x in B:
            for y in range(len(vectors)):
                if y in B:
                    continue
                C = tuple(sorted(set(B) - {x} | {y}))
                if C not in seen and (r == 0 or independent(C)):
                    seen.add(C)
                    frontier.append(C)
    return sorted(seen)


def greedy_basis(vectors: Sequence[Sequence], F=QQ, skip: Iterable[int] = ()) -> list[int]:
    """Lexicographically least basis among the allowed indices (matroid greedy)."""
    skip = set(skip)
    ech = _Echelon(F)
    out = []
    for k, v in enumerate(vectors):
        if k not in skip and ech.try_add(list(v)):
            out.append(k)
    return out


# --------------------------------------------------------------------------
# Shrubberies and stake sets
# --------------------------------------------------------------------------


def _columns(M: IntMatrix) -> list[tuple]:
    return [M.column(c) for c in range(M.cols)]


def _rows(M: IntMatrix) -> list[tuple]:
    return [M.row(r) for r in range(M.rows)]


def shrubberies(K: SimplicialComplex, i: int, field=QQ) -> list[tuple[Face, ...]]:
    """All shrubberies for ∂_i, as tuples of i-faces in lex order."""
    faces = K.faces_of_dim(i)
    d = boundary_matrix(K, i)
    if not faces:
        return [()]
    return [tuple(faces[k] for k in B) for B in matroid_bases(_columns(d), field)]


def stake_sets(K: SimplicialComplex, i: int, field=QQ) -> list[tuple[Face, ...]]:
    """All stake sets for ∂_i, as tuples of (i-1)-faces in lex order."""
    faces = K.faces_of_dim(i - 1)
    d = boundary_matrix(K, i)
    if not faces:
        return [()]
    return [tuple(faces[k] for k in B) for B in matroid_bases(_rows(d), field)]


def is_shrubbery(K: SimplicialComplex, i: int, T: Sequence[Face], field=QQ) -> bool:
    faces = K.index(i)
    if any(t not in faces for t in T) or len(set(T)) != len(T):
        return False
    d = boundary_matrix(K, i)
    cols = [d.column(faces[t]) for t in T]
    r = rank(_columns(d), field)
    return len(T) == r and (not T or rank(cols, field) == r)


def is_stake_set(K: SimplicialComplex, i: int, S: Sequence[Face], field=QQ) -> bool:
    faces = K.index(i - 1)
    if any(s not in faces for s in S) or len(set(S)) != len(S):
        return False
    d = boundary_matrix(K, i)
    r = rank(_rows(d), field)
    rows = [d.row(faces[s]) for s in S]
    return len(S) == r and (not S or rank(rows, field) == r)


def tau_index(K: SimplicialComplex, i: int, T: Sequence[Face]) -> int:
    """Index of the span of ∂_i(T) in the integral boundary group ∂_i(C_i)."""
    if not is_shrubbery(K, i, T):
        raise ForestryError(f"{[list(t) for t in T]} is not a shrubbery for the {i}-th boundary")
    d = boundary_matrix(K, i)
    if not T:
        return 1
    idx = K.index(i)
    sub = d.submatrix(range(d.rows), [idx[t] for t in T])
    return subgroup_index(d, sub)


def sigma_index(K: SimplicialComplex, i: int, S: Sequence[Face]) -> int:
    """Index of the projection of ∂_i(C_i) onto the stake coordinates in Z^S."""
    if not is_stake_set(K, i, S):
        raise ForestryError(f"{[list(s) for s in S]} is not a stake set for the {i}-th boundary")
    if not S:
        return 1
    d = boundary_matrix(K, i)
    idx = K.index(i - 1)
    proj = d.submatrix([idx[s] for s in S], range(d.cols))
    return subgroup_index(IntMatrix.identity(len(S)), proj)


# --------------------------------------------------------------------------
# Invariants and bad primes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ForestInvariants:
    tau: dict  # i -> sum of tau(T)^2 over shrubberies for ∂_i
    sigma: dict  # i -> sum of sigma(S)^2 over stake sets for ∂_i
    torsion: dict  # i -> order of the torsion of C_i / ∂_{i+1} C_{i+1}
    bad_primes: frozenset

    def provenance(self) -> dict:
        """prime -> list of (quantity, i, value) that it divides."""
        out: dict = {}
        for name, table in (("tau", self.tau), ("sigma", self.sigma), ("torsion", self.torsion)):
            for i, v in sorted(table.items()):
                for p in prime_factors(v):
                    out.setdefault(p, []).append((name, i, v))
        return out


def _boundary_lattice_basis(d: IntMatrix) -> list[list[int]]:
    """Hermite basis (as rows) of the integral span of the columns of d."""
    cols = [list(c) for c in _columns(d) if any(c)]
    return hermite_normal_form(cols)[0] if cols else []


def _index_sums(K: SimplicialComplex, i: int) -> tuple[int, int]:
    """(sum tau(T)^2, sum sigma(S)^2) for ∂_i.

    With H a lattice basis of the boundary group, tau(T)^2 is the ratio of
    Gram determinants det(∂T ∂T^t) / det(H H^t), and sigma(S) is the minor of
    H on the stake coordinates.
    """
    d = boundary_matrix(K, i)
    H = _boundary_lattice_basis(d)
    if not H:
        return 1, 1
    gram_H = determinant(matmul(H, [list(r) for r in zip(*H)]))
    idx = K.index(i)
    rows_idx = K.index(i - 1)
    tau = 0
    for T in shrubberies(K, i):
        M = [list(d.column(idx[t])) for t in T]
        g = determinant(matmul(M, [list(r) for r in zip(*M)]))
        assert g % gram_H == 0
        tau += g // gram_H
    sigma = 0
    for S in stake_sets(K, i):
        cols = [rows_idx[s] for s in S]
        sigma += determinant([[h[c] for c in cols] for h in H]) ** 2
    return tau, sigma


def forest_invariants(K: SimplicialComplex) -> ForestInvariants:
    tau, sigma, tors = {}, {}, {}
    if not K.is_void:
        for i in range(0, K.dim + 1):
            tau[i], sigma[i] = _index_sums(K, i)
        for i in range(-1, K.dim + 1):
            tors[i] = torsion_order(K, i)
    primes = set()
    for table in (tau, sigma, tors):
        for v in table.values():
            primes |= prime_factors(v)
    return ForestInvariants(tau, sigma, tors, frozenset(primes))


def bad_primes_for_complexes(complexes: Iterable[SimplicialComplex]) -> frozenset:
    seen = set()
    primes: set = set()
    for K in complexes:
        if K in seen or K.is_void:
            continue
        seen.add(K)
        primes |= forest_invariants(K).bad_primes
    return frozenset(primes)


def bad_primes_for_module(M, degrees: Iterable[Sequence[int]]) -> frozenset:
    """Primes dividing a forest invariant of some K^b M over the given degrees."""
    from .koszul import koszul_complex

    return bad_primes_for_complexes(koszul_complex(M, b) for b in degrees)


# --------------------------------------------------------------------------
# Communities
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Hedge:
    """st_i = (S_{i-1}, T_i): stakes for ∂_i and shrubs for ∂_i."""

    i: int
    stakes: tuple
    shrubs: tuple


@dataclass(frozen=True)
class Community:
    hedges: tuple  # hedges[i] is st_i

    def hedge(self, i: int) -> Hedge:
        if 0 <= i < len(self.hedges):
            return self.hedges[i]
        return Hedge(i, (), ())

    def stakes(self, i: int) -> tuple:
        """Stake set S_i (i-faces), taken from st_{i+1}."""
        return self.hedge(i + 1).stakes

    def shrubs(self, i: int) -> tuple:
        return self.hedge(i).shrubs


def validate_community(K: SimplicialComplex, C: Community) -> list[str]:
    """Problems with C as a community in K; empty when valid."""
    problems = []
    for i, h in enumerate(C.hedges):
        if h.i != i:
            problems.append(f"hedge {i} is labelled {h.i}")
        if not is_shrubbery(K, i, h.shrubs):
            problems.append(f"T_{i} is not a shrubbery")
        if not is_stake_set(K, i, h.stakes):
            problems.append(f"S_{i - 1} is not a stake set")
    for i in range(len(C.hedges)):
        clash = set(C.shrubs(i)) & set(C.stakes(i))
        if clash:
            problems.append(f"T_{i} meets S_{i}: {sorted(clash)}")
    return problems


def default_community(K: SimplicialComplex) -> Community:
    """Greedy lexicographic community.

    T_i is the lex-least shrubbery for ∂_i; S_i is the lex-least stake set for
    ∂_{i+1} avoiding T_i.  If none avoids T_i the next shrubbery is tried.
    """
    if K.is_void:
        return Community(())
    top = K.dim + 1
    T: dict = {}
    S: dict = {-1: None}
    for i in range(0, top + 1):
        faces = K.faces_of_dim(i)
        d = boundary_matrix(K, i)
        d_up = boundary_matrix(K, i + 1)
        up_rows = _rows(d_up)
        first = tuple(faces[k] for k in greedy_basis(_columns(d)))
        candidates = [first] + [t for t in shrubberies(K, i) if t != first]
        for t in candidates:
            skip = {faces.index(f) for f in t}
            s = greedy_basis(up_rows, skip=skip) if up_rows else []
            if len(s) == rank(up_rows):
                T[i], S[i] = t, tuple(faces[k] for k in s)
                break
        else:
            raise ForestryError(f"no stake set for ∂_{i + 1} avoids any shrubbery for ∂_{i}")
    stakes_m1 = tuple(K.faces_of_dim(-1)[k] for k in greedy_basis(_rows(boundary_matrix(K, 0))))
    hedges = []
    for i in range(0, top + 1):
        stakes = stakes_m1 if i == 0 else S[i - 1]
        hedges.append(Hedge(i, stakes, T[i]))
    C = Community(tuple(hedges))
    problems = validate_community(K, C)
    if problems:
        raise ForestryError("; ".join(problems))
    return C
