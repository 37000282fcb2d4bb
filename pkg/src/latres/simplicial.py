"""Simplicial complexes on {1..n} with reduced chain complexes and homology."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .linalg import (
    QQ,
    IntMatrix,
    matmul,
    nullspace,
    rank,
    reduce_against,
    rref,
    smith_normal_form,
    solve_field,
)

Face = tuple


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class SimplicialComplex:
    """A subset-closed family of faces of {1..n}.

    The void complex has no faces at all; every other complex contains the
    empty face.  Faces are sorted tuples of vertex labels.
    """

    n: int
    faces: frozenset

    def __post_init__(self):
        faces = frozenset(tuple(sorted(f)) for f in self.faces)
        object.__setattr__(self, "faces", faces)
        for f in faces:
            if len(set(f)) != len(f):
                raise ComplexError(f"face {list(f)} repeats a vertex")
            if any(not (1 <= v <= self.n) for v in f):
                raise ComplexError(f"face {list(f)} has a vertex outside 1..{self.n}")
            for k in range(len(f)):
                if f[:k] + f[k + 1:] not in faces:
                    raise ComplexError(
                        f"face list is not closed under subsets: {list(f)} lacks {list(f[:k] + f[k + 1:])}"
                    )

    @classmethod
    def from_facets(cls, n: int, facets: Iterable[Sequence[int]]) -> "SimplicialComplex":
        faces = {()}
        for f in facets:
            f = tuple(sorted(f))
            for k in range(len(f) + 1):
                faces.update(itertools.combinations(f, k))
        return cls(n, frozenset(faces))

    @classmethod
    def void(cls, n: int) -> "SimplicialComplex":
        return cls(n, frozenset())

    @classmethod
    def irrelevant(cls, n: int) -> "SimplicialComplex":
        return cls(n, frozenset({()}))

    @classmethod
    def simplex(cls, vertices: Sequence[int], n: int | None = None) -> "SimplicialComplex":
        return cls.from_facets(n or max(vertices, default=0), [vertices])

    @property
    def is_void(self) -> bool:
        return not self.faces

    @cached_property
    def dim(self) -> int:
        """Largest face dimension; -1 for {∅}, and -2 for the void complex."""
        return max((len(f) - 1 for f in self.faces), default=-2)

    def faces_of_dim(self, i: int) -> list[Face]:
        return self._by_dim.get(i, [])

    @cached_property
    def _by_dim(self) -> dict:
        out: dict[int, list] = {}
        for f in self.faces:
            out.setdefault(len(f) - 1, []).append(f)
        return {k: sorted(v) for k, v in out.items()}

    @cached_property
    def facets(self) -> list[Face]:
        fs = [f for f in self.faces if not any(set(f) < set(g) for g in self.faces)]
        return sorted(fs, key=lambda f: (len(f), f))

    def index(self, i: int) -> dict:
        return self._index[i] if i in self._index else {}

    @cached_property
    def _index(self) -> dict:
        return {i: {f: k for k, f in enumerate(fs)} for i, fs in self._by_dim.items()}

    def cone(self) -> "SimplicialComplex":
        """Cone over a new vertex n+1."""
        apex = self.n + 1
        faces = set(self.faces) | {f + (apex,) for f in self.faces}
        return SimplicialComplex(apex, frozenset(faces))

    @cached_property
    def chain_data(self) -> "ChainData":
        return ChainData.of(self)


@dataclass(frozen=True)
class ChainData:
    """Boundary matrices of the reduced chain complex, ∂_i : C_i -> C_{i-1}."""

    boundaries: dict  # i -> IntMatrix, for -1 <= i <= dim + 1

    @classmethod
    def of(cls, K: SimplicialComplex) -> "ChainData":
        mats = {}
        for i in range(-1, K.dim + 2):
            mats[i] = _boundary(K, i)
        for i in range(0, K.dim + 2):
            hi, lo = mats[i], mats[i - 1]
            if lo.cols and hi.cols and lo.rows:
                prod = matmul(lo.tolist(), hi.tolist(), hi.cols)
                assert not any(any(r) for r in prod), f"boundary squared is nonzero at {i}"
        return cls(mats)


def _boundary(K: SimplicialComplex, i: int) -> IntMatrix:
    src = K.faces_of_dim(i)
    dst = K.index(i - 1)
    rows = [[0] * len(src) for _ in range(len(dst))]
    if i >= 0:
        for c, f in enumerate(src):
            for t in range(len(f)):
                rows[dst[f[:t] + f[t + 1:]]][c] = -1 if t % 2 else 1
    return IntMatrix.from_rows(rows, cols=len(src))


def boundary_matrix(K: SimplicialComplex, i: int) -> IntMatrix:
    """Matrix of ∂_i in lexicographic face bases (rows: (i-1)-faces)."""
    if K.is_void:
        return IntMatrix.zeros(0, 0)
    if -1 <= i <= K.dim + 1:
        return K.chain_data.boundaries[i]
    return IntMatrix.zeros(len(K.faces_of_dim(i - 1)), len(K.faces_of_dim(i)))


@dataclass(frozen=True)
class HomologyBasis:
    """Cycle representatives whose classes form a basis of reduced H_i."""

    dim: int
    field: object
    rank: int
    faces: tuple
    representatives: tuple  # tuples of field elements indexed by ``faces``
    boundary_basis: tuple = ()  # RREF basis of the boundaries B_i, same coordinates

    def coordinates(self, cycle: Sequence) -> tuple:
        """Coordinates of the class of ``cycle`` in this basis."""
        F = self.field
        k = self.rank
        cols = list(self.representatives) + list(self.boundary_basis)
        if not cols:
            if any(F(x) != 0 for x in cycle):
                raise ValueError("not a cycle of this complex")
            return ()
        A = [[c[r] for c in cols] for r in range(len(self.faces))]
        x = solve_field(A, [F(v) for v in cycle], F, ncols=len(cols))
        if x is None:
            raise ValueError("chain is not a cycle in the span of the homology basis")
        return tuple(x[:k])


_homology_cache: dict = {}


def reduced_homology(K: SimplicialComplex, i: int, field=QQ, stakes: Sequence[Face] | None = None) -> HomologyBasis:
    """Reduced homology in dimension i over ``field``.

    Representatives are canonical: the kernel's RREF basis reduced against the
    RREF of the boundaries, then put in RREF.  With ``stakes`` (a stake set
    for ∂_{i+1}) every representative is instead normalised to vanish on
    those faces, which pins it down uniquely inside its class.
    """
    key = (K, i, field, tuple(stakes) if stakes is not None else None)
    hit = _homology_cache.get(key)
    if hit is not None:
        return hit
    F = field
    faces = tuple(K.faces_of_dim(i))
    if K.is_void or not faces:
        out = HomologyBasis(i, F, 0, faces, ())
        _homology_cache.setdefault(key, out)
        return out
    d_i = boundary_matrix(K, i)
    d_up = boundary_matrix(K, i + 1)
    cycles = nullspace(d_i.tolist(), F, ncols=len(faces)) if d_i.rows else nullspace([], F, ncols=len(faces))
    up_cols = [d_up.column(c) for c in range(d_up.cols)]
    B, bpiv = rref(up_cols, F) if up_cols else ([], [])
    reduced = [reduce_against(z, B, bpiv, F) for z in cycles]
    reduced = [z for z in reduced if any(x != 0 for x in z)]
    reps = rref(reduced, F)[0] if reduced else []
    if stakes is not None and reps:
        reps = [_normalise_off(z, B, faces, stakes, F) for z in reps]
    out = HomologyBasis(i, F, len(reps), faces, tuple(tuple(z) for z in reps), tuple(tuple(b) for b in B))
    _homology_cache.setdefault(key, out)
    return out


def _normalise_off(z, B, faces, stakes, F):
    """Subtract the unique boundary that agrees with z on the stake faces."""
    idx = {f: k for k, f in enumerate(faces)}
    S = [idx[s] for s in stakes]
    if not B:
        return list(z)
    A = [[b[s] for b in B] for s in S]
    c = solve_field(A, [z[s] for s in S], F, ncols=len(B))
    if c is None:
        raise ValueError("stake faces do not determine boundaries")
    out = list(z)
    for coef, b in zip(c, B):
        if coef != 0:
            out = [F.sub(x, F.mul(coef, y)) for x, y in zip(out, b)]
    return out


def betti_number(K: SimplicialComplex, i: int, field=QQ) -> int:
    """dim of reduced H_i over ``field``, without building representatives."""
    if K.is_void:
        return 0
    nfaces = len(K.faces_of_dim(i))
    if not nfaces:
        return 0
    return nfaces - rank(boundary_matrix(K, i), field) - rank(boundary_matrix(K, i + 1), field)


def integral_homology(K: SimplicialComplex, i: int) -> tuple[int, tuple]:
    """(free rank, torsion invariant factors) of reduced H_i over Z."""
    if K.is_void:
        return 0, ()
    nfaces = len(K.faces_of_dim(i))
    if not nfaces:
        return 0, ()
    r_i = smith_normal_form(boundary_matrix(K, i)).rank
    snf_up = smith_normal_form(boundary_matrix(K, i + 1))
    torsion = tuple(f for f in snf_up.invariant_factors if f > 1)
    return nfaces - r_i - snf_up.rank, torsion


def torsion_order(K: SimplicialComplex, i: int) -> int:
    """Order of the torsion subgroup of C_i / ∂_{i+1}(C_{i+1})."""
    out = 1
    for f in integral_homology(K, i)[1]:
        out *= f
    return out


def euler_characteristic(K: SimplicialComplex) -> int:
    """Reduced Euler characteristic sum_i (-1)^i #faces of dim i (i >= -1)."""
    return sum(-1 if len(f) % 2 == 0 else 1 for f in K.faces)
