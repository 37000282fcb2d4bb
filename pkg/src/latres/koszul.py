"""Co-artinian monomial modules, Koszul simplicial complexes and Betti numbers.

Two kinds of module are supported: the lattice module spanned by x^l for
l in a lattice L, and a module generated by finitely many Laurent monomials.
The generated case is handled as a lattice module over the zero lattice, so
that everything downstream has a single code path.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .lattice import Lattice, coset_normal_form, has_point_below, points_in_ball
from .linalg import QQ
from .simplicial import SimplicialComplex, betti_number

log = logging.getLogger(__name__)


class UncertifiedError(RuntimeError):
    pass


def _join(a, b):
    return tuple(x if x >= y else y for x, y in zip(a, b))


class _ModuleBase:
    n: int
    lattice: Lattice

    @cached_property
    def _koszul_cache(self) -> dict:
        return {}

    def normal_form(self, b: Sequence[int]) -> tuple:
        return coset_normal_form(self.lattice, b)

    def class_of(self, b: Sequence[int]) -> tuple:
        return self.lattice.class_of(b)

    def degree(self, b: Sequence[int]) -> int:
        return self.lattice.degree(b)


@dataclass(frozen=True)
class LatticeModule(_ModuleBase):
    """M_L, spanned by the Laurent monomials x^l, l in L."""

    lattice: Lattice

    @property
    def n(self) -> int:  # type: ignore[override]
        return self.lattice.n

    @property
    def kind(self) -> str:
        return "lattice"

    def member(self, c: Sequence[int]) -> bool:
        return has_point_below(self.lattice, c)


@dataclass(frozen=True)
class GeneratedModule(_ModuleBase):
    """Monomial module generated by x^g for the listed exponent vectors.

    Non-minimal generators are dropped and the rest sorted, so equal modules
    compare equal.
    """

    n: int
    gens: tuple = field(default=())

    def __post_init__(self):
        gens = {tuple(int(x) for x in g) for g in self.gens}
        for g in gens:
            if len(g) != self.n:
                raise ValueError(f"generator {list(g)} does not have length {self.n}")
        minimal = sorted(
            g for g in gens if not any(h != g and all(a <= b for a, b in zip(h, g)) for h in gens)
        )
        object.__setattr__(self, "gens", tuple(minimal))
        if not minimal:
            raise ValueError("a generated module needs at least one generator")

    @cached_property
    def lattice(self) -> Lattice:  # type: ignore[override]
        return Lattice.trivial(self.n)

    @property
    def kind(self) -> str:
        return "generated"

    def member(self, c: Sequence[int]) -> bool:
        return any(all(a <= b for a, b in zip(g, c)) for g in self.gens)

    def shifted(self, ell: Sequence[int]) -> "GeneratedModule":
        """The graded shift M(-l), generated by g + l."""
        return GeneratedModule(self.n, tuple(tuple(a + b for a, b in zip(g, ell)) for g in self.gens))


MonomialModule = (LatticeModule, GeneratedModule)


def member(M, c: Sequence[int]) -> bool:
    return M.member(tuple(c))


def koszul_complex(M, b: Sequence[int], use_cache: bool = True) -> SimplicialComplex:
    """K^b M = {τ ⊆ {1..n} : x^(b - τ) ∈ M}; void exactly when x^b ∉ M."""
    b = tuple(int(x) for x in b)
    key = M.normal_form(b)
    if use_cache:
        hit = M._koszul_cache.get(key)
        if hit is not None:
            return hit
    n = M.n
    faces = []
    if M.member(b):
        # M is a module, so faces are reachable by adding vertices in order
        stack = [()]
        while stack:
            f = stack.pop()
            faces.append(f)
            for v in range(f[-1] + 1 if f else 1, n + 1):
                g = f + (v,)
                c = list(b)
                for u in g:
                    c[u - 1] -= 1
                if M.member(c):
                    stack.append(g)
    K = SimplicialComplex(n, frozenset(faces))
    if use_cache:
        M._koszul_cache.setdefault(key, K)
    return K


def betti(M, i: int, b: Sequence[int], field=QQ) -> int:
    """β_{i,b}(M) = dim reduced H_{i-1}(K^b M)."""
    return betti_number(koszul_complex(M, b), i - 1, field)


def betti_vector(K: SimplicialComplex, n: int, field=QQ) -> tuple:
    """(β_0, ..., β_n) read off a single Koszul complex."""
    return tuple(betti_number(K, i - 1, field) for i in range(n + 1))


@dataclass(frozen=True)
class BettiEntry:
    i: int
    coset: tuple
    lift: tuple
    rank: int


@dataclass(frozen=True)
class SearchConfig:
    """Iterative deepening over sup-norm radii for the Betti support."""

    initial_radius: int | None = None
    increment: int = 1
    radius_cap: int | None = None
    jobs: int = 1

    def resolved(self, L: Lattice) -> tuple[int, int]:
        base = 2 * max((abs(x) for v in L.basis for x in v), default=1)
        r0 = self.initial_radius if self.initial_radius is not None else max(base, 1)
        cap = self.radius_cap if self.radius_cap is not None else 10 * r0
        if self.initial_radius is None:
            r0 = min(r0, cap)
        if r0 < 0 or cap < r0 or self.increment < 1:
            raise ValueError("radius bounds must satisfy 0 <= initial <= cap and increment >= 1")
        return r0, cap


@dataclass(frozen=True)
class BettiSupport:
    entries: tuple
    certified: bool  # the search stabilised before the radius cap
    radius: int | None
    candidates: int

    def ranks(self) -> dict:
        out: dict = {}
        for e in self.entries:
            out[e.i] = out.get(e.i, 0) + e.rank
        return out


def _joins_with_origin(points: list, n: int) -> set:
    """Joins of 0 with up to n-1 of ``points``."""
    zero = (0,) * n
    level = {zero}
    seen = {zero}
    for _ in range(max(n - 1, 0)):
        nxt = set()
        for j in level:
            for p in points:
                q = _join(j, p)
                if q not in seen:
                    nxt.add(q)
        seen |= nxt
        level = nxt
        if not level:
            break
    return seen


def _generator_joins(gens: Sequence[tuple], n: int) -> set:
    """Joins of nonempty sets of at most n generators."""
    seen = set(gens)
    level = set(gens)
    for _ in range(max(n - 1, 0)):
        nxt = {_join(j, g) for j in level for g in gens} - seen
        seen |= nxt
        level = nxt
        if not level:
            break
    return seen


def _entries_at(M, candidates: set, field, jobs: int) -> tuple:
    reps = sorted({M.normal_form(c) for c in candidates})

    def evaluate(b):
        return b, betti_vector(koszul_complex(M, b), M.n, field)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(evaluate, reps))
    else:
        results = [evaluate(b) for b in reps]
    entries = []
    for b, vec in results:
        for i, r in enumerate(vec):
            if r:
                entries.append(BettiEntry(i, M.class_of(b), b, r))
    entries.sort(key=lambda e: (e.i, M.degree(e.lift), e.lift))
    return tuple(entries), len(reps)


def betti_support(M, field=QQ, config: SearchConfig | None = None) -> BettiSupport:
    """All (i, coset) with nonzero Betti number, one entry per coset.

    Candidates are joins of minimal generators: all of them for a generated
    module; for a lattice module, joins of 0 with up to n-1 lattice points in
    a sup-norm ball whose radius grows until two consecutive enlargements add
    nothing (or the cap is hit, which leaves the result uncertified).
    """
    config = config or SearchConfig()
    if isinstance(M, GeneratedModule):
        cands = _generator_joins(M.gens, M.n)
        entries, count = _entries_at(M, cands, field, config.jobs)
        return BettiSupport(entries, True, None, count)
    L = M.lattice
    r, cap = config.resolved(L)
    if not L.basis:
        entries, count = _entries_at(M, {(0,) * L.n}, field, config.jobs)
        return BettiSupport(entries, True, 0, count)
    prev, count = _entries_at(M, _joins_with_origin(points_in_ball(L, r), L.n), field, config.jobs)
    quiet = 0
    while quiet < 2:
        if r + config.increment > cap:
            log.warning("Betti support search hit radius cap %d before stabilising", cap)
            return BettiSupport(prev, False, r, count)
        r += config.increment
        cur, count = _entries_at(M, _joins_with_origin(points_in_ball(L, r), L.n), field, config.jobs)
        quiet = quiet + 1 if cur == prev else 0
        prev = cur
    return BettiSupport(prev, True, r, count)
