"""Equivariant minimal free resolutions of co-artinian monomial modules.

The resolution of M_L over R is stored on coset representatives only.  A
basis element u of F_i sits at the normal-form degree ``lift`` of its coset;
its translate by l in L sits at lift + l.  A differential term
(target v, translate l, coefficient c) in ∂u stands for

    c * x^(lift(u) - lift(v) - l) * (v translated by l),

so translating u by l' translates every term by l' as well: equivariance
holds by construction.

Differentials are synthesised degree by degree.  In degree b the slice of
F_i is finite (pairs (u, l) with l <= b - lift(u)); the new generators of
F_{i+1} at b are a basis of ker(∂_i)_b modulo the part generated from lower
degrees, sum_j x_j ker(∂_i)_{b-e_j}.  The count is checked against the
Koszul homology rank at b.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

from .forestry import Community, default_community, greedy_basis
from .koszul import BettiSupport, GeneratedModule, SearchConfig, betti, betti_support, koszul_complex
from .lattice import points_below
from .linalg import QQ, nullspace, reduce_against, rref
from .simplicial import boundary_matrix, reduced_homology

MODES = ("canonical-basis", "community")


class ResolutionError(RuntimeError):
    pass


class RankMismatchError(ResolutionError):
    def __init__(self, i, degree, expected, found):
        self.i, self.degree, self.expected, self.found = i, tuple(degree), expected, found
        super().__init__(
            f"RANK_MISMATCH in homological degree {i} at {list(degree)}: "
            f"Koszul homology gives {expected}, lift-and-solve found {found}"
        )


@dataclass(frozen=True)
class BasisElement:
    i: int
    coset: tuple
    lift: tuple
    ordinal: int


@dataclass(frozen=True)
class Term:
    target: int  # index into the basis of F_{i-1}
    translate: tuple
    coeff: object


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


@dataclass
class EquivariantResolution:
    module: object
    field: object
    mode: str
    basis: list  # basis[i] : list of BasisElement, sorted by (lift, ordinal)
    differentials: list  # differentials[i][k] : tuple of Term for ∂_i(basis[i][k]); [] for i = 0
    certified: bool = True
    radius: int | None = None

    @property
    def length(self) -> int:
        return len(self.basis) - 1

    def ranks(self) -> tuple:
        return tuple(len(b) for b in self.basis)

    def exponent(self, i: int, k: int, term: Term) -> tuple:
        return _sub(_sub(self.basis[i][k].lift, self.basis[i - 1][term.target].lift), term.translate)

    def elements_at(self, i: int, lift: Sequence[int]) -> list[int]:
        lift = tuple(lift)
        return [k for k, u in enumerate(self.basis[i]) if u.lift == lift]

    def community(self, b: Sequence[int]) -> Community:
        return default_community(koszul_complex(self.module, b))

    def homology_basis(self, i: int, b: Sequence[int]):
        """Basis of reduced H_{i-1}(K^b) matched, in order, with the F_i basis at b."""
        K = koszul_complex(self.module, b)
        stakes = self.community(b).stakes(i - 1) if self.mode == "community" else None
        return reduced_homology(K, i - 1, self.field, stakes=stakes)

    def cycle(self, i: int, k: int) -> tuple:
        u = self.basis[i][k]
        H = self.homology_basis(i, u.lift)
        return H.faces, H.representatives[u.ordinal]


# --------------------------------------------------------------------------
# Slices
# --------------------------------------------------------------------------


class _Slicer:
    """Degree-b slices of an (equivariant) partial resolution."""

    def __init__(self, module, field, basis, differentials):
        self.M = module
        self.F = field
        self.basis = basis
        self.diffs = differentials
        self.L = module.lattice

    def keys(self, i: int, c: Sequence[int]) -> list[tuple]:
        out = []
        for k, u in enumerate(self.basis[i]):
            for ell in points_below(self.L, _sub(c, u.lift)):
                out.append((k, ell))
        return out

    def matrix(self, i: int, c: Sequence[int]):
        """(rows, row keys, column keys) of ∂_i in degree c; i = 0 is the augmentation."""
        F = self.F
        cols = self.keys(i, c)
        if i == 0:
            rows = [[F.one()] * len(cols)] if cols else []
            return rows, [()] if cols else [], cols
        row_keys = self.keys(i - 1, c)
        idx = {key: r for r, key in enumerate(row_keys)}
        rows = [[F.zero()] * len(cols) for _ in row_keys]
        for col, (k, ell) in enumerate(cols):
            for t in self.diffs[i][k]:
                r = idx.get((t.target, _add(ell, t.translate)))
                if r is None:
                    raise ResolutionError(f"term of ∂_{i} on element {k} leaves the slice at {list(c)}")
                rows[r][col] = F.add(rows[r][col], t.coeff)
        return rows, row_keys, cols

    def kernel(self, i: int, c: Sequence[int]):
        rows, _, cols = self.matrix(i, c)
        if not cols:
            return [], cols
        basis = nullspace(rows, self.F, ncols=len(cols)) if rows else nullspace([], self.F, ncols=len(cols))
        return (rref(basis, self.F)[0] if basis else []), cols

    def new_generators(self, i: int, b: Sequence[int]):
        """Canonical minimal generators of ker(∂_i) in degree b.

        Returns (vectors, column keys, dim ker, dim of the decomposable part).
        """
        F = self.F
        K, keys = self.kernel(i, b)
        idx = {key: r for r, key in enumerate(keys)}
        W = []
        for j in range(len(b)):
            c = list(b)
            c[j] -= 1
            Kj, keys_j = self.kernel(i, c)
            for v in Kj:
                w = [F.zero()] * len(keys)
                for x, key in zip(v, keys_j):
                    if x != 0:
                        w[idx[key]] = x
                W.append(w)
        Wr, wpiv = rref(W, F) if W else ([], [])
        reduced = [reduce_against(v, Wr, wpiv, F) for v in K]
        reduced = [v for v in reduced if any(x != 0 for x in v)]
        gens = rref(reduced, F)[0] if reduced else []
        return gens, keys, len(K), len(Wr)


def _terms(vec, keys) -> tuple:
    return tuple(Term(k, ell, x) for x, (k, ell) in zip(vec, keys) if x != 0)


# --------------------------------------------------------------------------
# Construction
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolveConfig:
    mode: str = "canonical-basis"
    search: SearchConfig = field(default_factory=SearchConfig)
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


def resolve_equivariant(M, field=QQ, config: ResolveConfig | None = None,
                        support: BettiSupport | None = None) -> EquivariantResolution:
    """Minimal free resolution of M, equivariant under its lattice."""
    config = config or ResolveConfig()
    if support is None:
        support = betti_support(M, field, replace(config.search, jobs=config.jobs))
    by_degree: dict = {}
    for e in support.entries:
        by_degree.setdefault(e.i, []).append(e)

    basis: list = [[]]
    diffs: list = [[]]
    for e in by_degree.get(0, []):
        if e.rank != 1:
            raise ResolutionError(f"Koszul rank {e.rank} in homological degree 0 at {list(e.lift)}")
        basis[0].append(BasisElement(0, e.coset, e.lift, 0))
        diffs[0].append(())
    slicer = _Slicer(M, field, basis, diffs)

    i = 0
    while by_degree.get(i + 1):
        entries = sorted(by_degree[i + 1], key=lambda e: e.lift)

        def step(e, i=i):
            gens, keys, dim_k, dim_w = slicer.new_generators(i, e.lift)
            if len(gens) != e.rank:
                raise RankMismatchError(i + 1, e.lift, e.rank, len(gens))
            return e, gens, keys

        if config.jobs > 1:
            with ThreadPoolExecutor(max_workers=config.jobs) as pool:
                results = list(pool.map(step, entries))
        else:
            results = [step(e) for e in entries]
        new_basis, new_diffs = [], []
        for e, gens, keys in results:
            for ordinal, v in enumerate(gens):
                new_basis.append(BasisElement(i + 1, e.coset, e.lift, ordinal))
                new_diffs.append(_terms(v, keys))
        basis.append(new_basis)
        diffs.append(new_diffs)
        i += 1

    res = EquivariantResolution(M, field, config.mode, basis, diffs, support.certified, support.radius)
    _check_minimal_terms(res)
    return res


def _check_minimal_terms(res: EquivariantResolution) -> None:
    for i in range(1, len(res.basis)):
        for k, terms in enumerate(res.differentials[i]):
            for t in terms:
                e = res.exponent(i, k, t)
                if min(e) < 0 or not any(e):
                    raise ResolutionError(
                        f"term of ∂_{i} on element {k} has exponent {list(e)}; expected nonnegative and nonzero"
                    )


def rank_agreement(res: EquivariantResolution) -> list[tuple]:
    """(i, lift, basis count, Koszul rank) wherever they disagree."""
    bad = []
    for i, elems in enumerate(res.basis):
        for lift in sorted({u.lift for u in elems}):
            count = len(res.elements_at(i, lift))
            r = betti(res.module, i, lift, res.field)
            if r != count:
                bad.append((i, lift, count, r))
    return bad


def square_zero_terms(res: EquivariantResolution) -> list[tuple]:
    """Nonzero coefficients of ∂_{i-1}∂_i computed as translate-tagged sums."""
    F = res.field
    bad = []
    for i in range(2, len(res.basis)):
        for k, terms in enumerate(res.differentials[i]):
            acc: dict = {}
            for t in terms:
                for s in res.differentials[i - 1][t.target]:
                    key = (s.target, _add(t.translate, s.translate))
                    acc[key] = F.add(acc.get(key, F.zero()), F.mul(t.coeff, s.coeff))
            for key, v in sorted(acc.items()):
                if v != 0:
                    bad.append((i, k, key, v))
    return bad


# --------------------------------------------------------------------------
# Face-indexed matrix views
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SylvanMatrixView:
    """Face-indexed map C_{i-1}(K^alpha) <- C_i(K^beta) realising one block."""

    i: int
    alpha: tuple  # target degree (lift of alpha plus the translate)
    beta: tuple
    translate: tuple
    row_faces: tuple
    col_faces: tuple
    entries: tuple  # rows of field elements
    coefficients: tuple  # block[v][u] of scalar coefficients
    source_basis: object  # HomologyBasis of K^beta in dim i
    target_basis: object  # HomologyBasis of K^alpha in dim i-1

    def apply(self, chain: Sequence) -> tuple:
        F = self.source_basis.field
        return tuple(
            sum((F.mul(a, x) for a, x in zip(row, chain)), F.zero()) for row in self.entries
        )

    def induced_map(self) -> tuple:
        """Matrix (target x source) of the map induced on homology classes."""
        cols = [self.target_basis.coordinates(self.apply(z)) for z in self.source_basis.representatives]
        nrows = self.target_basis.rank
        return tuple(tuple(c[r] for c in cols) for r in range(nrows))


def _invert(Q, F):
    n = len(Q)
    aug = [list(r) + [F.one() if i == j else F.zero() for j in range(n)] for i, r in enumerate(Q)]
    R, piv = rref(aug, F)
    if piv[:n] != list(range(n)):
        raise ResolutionError("chain basis is singular")
    return [r[n:] for r in R]


def sylvan_matrix_view(res: EquivariantResolution, i: int, alpha: Sequence[int], beta: Sequence[int],
                       translate: Sequence[int] | None = None, community: bool | None = None) -> SylvanMatrixView:
    """Face-indexed matrix for the block of ∂_{i+1} from F_{i+1} at beta to F_i at alpha.

    Rows are (i-1)-faces of K^alpha, columns i-faces of K^beta.  The matrix
    sends the i-th homology representative of K^beta matched with the k-th
    basis element at beta to the combination of (i-1)-representatives given
    by the block's coefficients, and kills boundaries and the span of a
    shrubbery.  With ``community`` the representatives are normalised off
    the stake sets of the default community of each complex.
    """
    F = res.field
    M = res.module
    use_comm = (res.mode == "community") if community is None else community
    a0, b0 = M.normal_form(alpha), M.normal_form(beta)
    if i + 1 >= len(res.basis):
        raise ValueError(f"no differential leaves homological degree {i + 1}")
    src = res.elements_at(i + 1, b0)
    dst = res.elements_at(i, a0)
    if not src or not dst:
        raise ValueError(f"no differential block between degree {list(b0)} (i={i + 1}) and {list(a0)} (i={i})")
    dst_pos = {k: r for r, k in enumerate(dst)}
    translates = sorted({t.translate for k in src for t in res.differentials[i + 1][k] if t.target in dst_pos})
    if translate is None:
        translate = translates[0] if translates else (0,) * M.n
    translate = tuple(translate)
    C = [[F.zero()] * len(src) for _ in dst]
    for c, k in enumerate(src):
        for t in res.differentials[i + 1][k]:
            if t.target in dst_pos and t.translate == translate:
                C[dst_pos[t.target]][c] = F.add(C[dst_pos[t.target]][c], t.coeff)

    a = _add(a0, translate)
    Ka, Kb = koszul_complex(M, a), koszul_complex(M, b0)
    comm_a = default_community(Ka) if use_comm else None
    comm_b = default_community(Kb) if use_comm else None
    Hb = reduced_homology(Kb, i, F, stakes=comm_b.stakes(i) if use_comm else None)
    Ha = reduced_homology(Ka, i - 1, F, stakes=comm_a.stakes(i - 1) if use_comm else None)
    rows = Ka.faces_of_dim(i - 1)
    cols = Kb.faces_of_dim(i)
    if Hb.rank != len(src) or Ha.rank != len(dst):
        raise ResolutionError("homology ranks do not match the resolution basis")

    # chain basis of C_i(K^beta): representatives, boundaries, then a shrubbery
    d_i = boundary_matrix(Kb, i)
    if use_comm:
        shrubs = comm_b.shrubs(i)
    else:
        shrubs = tuple(cols[k] for k in greedy_basis([d_i.column(c) for c in range(d_i.cols)], F))
    col_idx = {f: k for k, f in enumerate(cols)}
    chain_basis = [list(z) for z in Hb.representatives] + [list(bv) for bv in Hb.boundary_basis]
    for s in shrubs:
        e = [F.zero()] * len(cols)
        e[col_idx[s]] = F.one()
        chain_basis.append(e)
    if len(chain_basis) != len(cols):
        raise ResolutionError("chain basis has the wrong size")
    images = []
    for c in range(len(src)):
        y = [F.zero()] * len(rows)
        for r in range(len(dst)):
            if C[r][c] != 0:
                y = [F.add(p, F.mul(C[r][c], q)) for p, q in zip(y, Ha.representatives[r])]
        images.append(y)
    images += [[F.zero()] * len(rows) for _ in range(len(cols) - len(src))]
    entries = []
    if cols:
        # D Q = images (columns), where Q holds chain_basis as columns
        Q = [[chain_basis[c][r] for c in range(len(cols))] for r in range(len(cols))]
        Qinv = _invert(Q, F)
        for r in range(len(rows)):
            img_row = [images[c][r] for c in range(len(cols))]
            entries.append(tuple(
                sum((F.mul(img_row[k], Qinv[k][j]) for k in range(len(cols))), F.zero())
                for j in range(len(cols))
            ))
    else:
        entries = [() for _ in rows]
    return SylvanMatrixView(
        i, a, b0, translate, tuple(rows), tuple(cols), tuple(entries),
        tuple(tuple(r) for r in C), Hb, Ha,
    )


# --------------------------------------------------------------------------
# Equivariance audit
# --------------------------------------------------------------------------


@dataclass
class EquivarianceReport:
    passed: bool
    checks: int
    witnesses: list

    def __str__(self):
        return f"{'PASS' if self.passed else 'FAIL'} ({self.checks} checks)"


def _shift_terms(terms, ell) -> tuple:
    return tuple((t.target, _add(t.translate, ell), t.coeff) for t in terms)


def _matrix_dict(rows, row_keys, col_keys, ell=None) -> dict:
    out = {}
    for r, rk in enumerate(row_keys):
        for c, ck in enumerate(col_keys):
            v = rows[r][c]
            if v != 0:
                if ell is not None:
                    rk2 = (rk[0], _add(rk[1], ell)) if rk else rk
                    ck2 = (ck[0], _add(ck[1], ell))
                    out[(rk2, ck2)] = v
                else:
                    out[(rk, ck)] = v
    return out


def check_equivariance(res: EquivariantResolution, samples: int = 100,
                       seed: int = 0) -> EquivarianceReport:
    """Recompute Koszul complexes, differential slices and new generators at
    translated degrees from scratch, and compare with the stored data moved
    along the lattice."""
    M = res.module
    L = M.lattice
    if not L.basis or isinstance(M, GeneratedModule):
        return EquivarianceReport(True, 0, [])
    rng = random.Random(seed)
    slicer = _Slicer(M, res.field, res.basis, res.differentials)
    pool = [(i, k) for i in range(len(res.basis)) for k in range(len(res.basis[i]))]
    witnesses = []
    checks = 0
    for _ in range(samples):
        i, k = pool[rng.randrange(len(pool))]
        b = res.basis[i][k].lift
        z = [rng.randint(-3, 3) for _ in L.basis]
        if not any(z):
            z[rng.randrange(len(z))] = 1
        ell = L.combine(z)
        bl = _add(b, ell)
        checks += 1
        K1 = koszul_complex(M, b, use_cache=False)
        K2 = koszul_complex(M, bl, use_cache=False)
        if K1 != K2:
            witnesses.append({"check": "koszul", "degree": b, "translate": ell})
            continue
        if i >= 1:
            try:
                r1, rk1, ck1 = slicer.matrix(i, b)
                r2, rk2, ck2 = slicer.matrix(i, bl)
                same = _matrix_dict(r1, rk1, ck1, ell) == _matrix_dict(r2, rk2, ck2)
                gens, keys, _, _ = slicer.new_generators(i - 1, bl)
            except ResolutionError as exc:
                witnesses.append({"check": "slice", "i": i, "degree": b, "translate": ell, "error": str(exc)})
                continue
            if not same:
                witnesses.append({"check": "slice", "i": i, "degree": b, "translate": ell})
                continue
            recomputed = [tuple((t.target, t.translate, t.coeff) for t in _terms(v, keys)) for v in gens]
            stored = [_shift_terms(res.differentials[i][kk], ell) for kk in res.elements_at(i, b)]
            if recomputed != stored:
                witnesses.append({"check": "generators", "i": i, "degree": b, "translate": ell,
                                  "stored": stored, "recomputed": recomputed})
    return EquivarianceReport(not witnesses, checks, witnesses)
