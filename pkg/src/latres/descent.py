"""Descent to the quotient grading, and certification of the result.

Summing an equivariant resolution over each lattice orbit gives a complex of
free R-modules graded by Z^n / L.  The entry from u to v collects every
translate: sum over terms (v, l, c) of c * x^(lift(u) - lift(v) - l).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .koszul import GeneratedModule, betti
from .lattice import points_below
from .linalg import rank
from .polynomial import Polynomial
from .resolution import EquivariantResolution, ResolutionError


@dataclass(frozen=True)
class DescendedElement:
    i: int
    coset: tuple
    lift: tuple


@dataclass
class DescendedResolution:
    module: object
    field: object
    basis: list  # basis[i] : list of DescendedElement
    matrices: list  # matrices[i][row][col] : Polynomial, for ∂_i : F_i -> F_{i-1}; matrices[0] = []
    certified: bool = True

    @property
    def n(self) -> int:
        return self.module.n

    @property
    def length(self) -> int:
        return len(self.basis) - 1

    def ranks(self) -> tuple:
        return tuple(len(b) for b in self.basis)

    def rendered(self, i: int) -> list[list[str]]:
        return [[p.render(self.field) for p in row] for row in self.matrices[i]]

    def truncated(self, length: int) -> "DescendedResolution":
        return DescendedResolution(self.module, self.field, self.basis[: length + 1],
                                   self.matrices[: length + 1], self.certified)


def descend(res: EquivariantResolution) -> DescendedResolution:
    F = res.field
    n = res.module.n
    basis = [[DescendedElement(u.i, u.coset, u.lift) for u in level] for level in res.basis]
    mats: list = [[]]
    for i in range(1, len(res.basis)):
        acc = [[{} for _ in res.basis[i]] for _ in res.basis[i - 1]]
        for k, terms in enumerate(res.differentials[i]):
            for t in terms:
                e = res.exponent(i, k, t)
                cell = acc[t.target][k]
                cell[e] = F.add(cell.get(e, F.zero()), t.coeff)
        mats.append([[Polynomial.from_dict(n, cell, F) for cell in row] for row in acc])
    return DescendedResolution(res.module, F, basis, mats, res.certified)


def minimal_generators(desc: DescendedResolution) -> list[Polynomial]:
    """Minimal generators: the binomials of ∂_1 for a lattice ideal, the monomials for a generated module."""
    if isinstance(desc.module, GeneratedModule):
        return [Polynomial.monomial(u.lift, 1, desc.field) for u in desc.basis[0]]
    if desc.length < 1:
        return []
    return [desc.matrices[1][0][k] for k in range(len(desc.basis[1]))]


# --------------------------------------------------------------------------
# Checks
# --------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: object = None

    def __str__(self):
        return f"{self.name}: {'PASS' if self.passed else 'FAIL'}"


def verify_square_zero(desc: DescendedResolution) -> CheckResult:
    F = desc.field
    for i in range(2, len(desc.matrices)):
        A, B = desc.matrices[i - 1], desc.matrices[i]
        for r in range(len(A)):
            for c in range(len(desc.basis[i])):
                total = Polynomial.zero(desc.n)
                for m in range(len(B)):
                    total = total.add(A[r][m].mul(B[m][c], F), F)
                if not total.is_zero():
                    return CheckResult("square-zero", False, {"i": i, "row": r, "col": c,
                                                              "entry": total.render(F)})
    return CheckResult("square-zero", True)


def verify_minimal(desc: DescendedResolution) -> CheckResult:
    for i in range(1, len(desc.matrices)):
        for r, row in enumerate(desc.matrices[i]):
            for c, p in enumerate(row):
                if p.constant_term(desc.field) != 0:
                    return CheckResult("minimality", False, {"i": i, "row": r, "col": c})
    return CheckResult("minimality", True)


@dataclass(frozen=True)
class DegreeCheck:
    degree: tuple  # representative exponent vector of the class
    grade: int  # its degree under the grading vector
    dims: tuple  # dim of each F_i in this degree
    homology: tuple  # dim of H_i; H_0 compared with the module's fibre
    expected_h0: int

    @property
    def passed(self) -> bool:
        return self.homology[0] == self.expected_h0 and not any(self.homology[1:])


@dataclass
class ExactnessReport:
    bound: int | None
    degrees: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(d.passed for d in self.degrees)

    @property
    def failures(self) -> list:
        return [d for d in self.degrees if not d.passed]


def _compositions(grading: Sequence[int], budget: int):
    """Nonnegative w with grading . w <= budget, in lexicographic order."""
    n = len(grading)
    w = [0] * n

    def rec(j, left):
        if j == n:
            yield tuple(w)
            return
        for a in range(left // grading[j] + 1):
            w[j] = a
            yield from rec(j + 1, left - a * grading[j])
        w[j] = 0

    yield from rec(0, budget)


def _slice_keys(desc, i, w) -> list:
    L = desc.module.lattice
    keys = []
    for k, u in enumerate(desc.basis[i]):
        c = tuple(a - b for a, b in zip(w, u.lift))
        for ell in points_below(L, c):
            keys.append((k, tuple(a - b for a, b in zip(c, ell))))
    return keys


def _slice_rank(desc, i, w, src_keys, dst_keys) -> int:
    if not src_keys or not dst_keys:
        return 0
    F = desc.field
    idx = {key: r for r, key in enumerate(dst_keys)}
    rows = [[F.zero()] * len(src_keys) for _ in dst_keys]
    mat = desc.matrices[i]
    for col, (k, m) in enumerate(src_keys):
        for v in range(len(desc.basis[i - 1])):
            for e, c in mat[v][k].terms:
                r = idx.get((v, tuple(a + b for a, b in zip(m, e))))
                if r is None:
                    raise ResolutionError(f"∂_{i} leaves the degree slice at {list(w)}")
                rows[r][col] = F.add(rows[r][col], c)
    return rank(rows, F)


def check_degree(desc: DescendedResolution, w: Sequence[int], expected_h0: int) -> DegreeCheck:
    w = tuple(w)
    top = len(desc.basis)
    keys = [_slice_keys(desc, i, w) for i in range(top)]
    ranks = [0] + [_slice_rank(desc, i, w, keys[i], keys[i - 1]) for i in range(1, top)] + [0]
    dims = tuple(len(k) for k in keys)
    homology = tuple(dims[i] - ranks[i] - ranks[i + 1] for i in range(top))
    grade = desc.module.degree(w)
    return DegreeCheck(w, grade, dims, homology, expected_h0)


def _window(desc: DescendedResolution, dmax: int | None) -> list[tuple]:
    M = desc.module
    if isinstance(M, GeneratedModule):
        lo = tuple(min(g[j] for g in M.gens) for j in range(M.n))
        hi = tuple(max(g[j] for g in M.gens) for j in range(M.n))
        out = [lo]
        for j in range(M.n):
            out = [p[:j] + (a,) + p[j + 1:] for p in out for a in range(lo[j], hi[j] + 1)]
        if dmax is not None:
            out = [p for p in out if M.degree(p) <= dmax]
        return sorted(out, key=lambda p: (M.degree(p), p))
    seen = {}
    for w in _compositions(M.lattice.grading, dmax):
        key = M.normal_form(w)
        seen.setdefault(key, w)
    return sorted(seen.values(), key=lambda p: (M.degree(p), p))


def default_bound(desc: DescendedResolution) -> int:
    """Largest basis degree plus the largest degree of a ∂_1 column."""
    M = desc.module
    top = max((M.degree(u.lift) for level in desc.basis for u in level), default=0)
    col = 0
    if desc.length >= 1:
        for k, u in enumerate(desc.basis[1]):
            col = max(col, M.degree(u.lift) - min(M.degree(v.lift) for v in desc.basis[0]))
    return top + col


def verify_exact_up_to(desc: DescendedResolution, dmax: int | None = None) -> ExactnessReport:
    """Exactness on every graded slice of degree at most ``dmax``.

    For a lattice module the slices are the classes of nonnegative vectors of
    degree <= dmax, with H_0 expected to be 1 (R/I_L is one-dimensional in
    every class).  For a generated module the window is the box between the
    meet and the join of the generators, where H_0 must match membership; a
    bound of None means the whole box.
    """
    M = desc.module
    if dmax is None and not isinstance(M, GeneratedModule):
        dmax = default_bound(desc)
    report = ExactnessReport(dmax)
    for w in _window(desc, dmax):
        expected = (1 if M.member(w) else 0) if isinstance(M, GeneratedModule) else 1
        report.degrees.append(check_degree(desc, w, expected))
    return report


def betti_crosscheck(desc: DescendedResolution, degrees: Sequence[Sequence[int]] = ()) -> CheckResult:
    """Basis counts per degree class against Koszul homology ranks."""
    M = desc.module
    F = desc.field
    classes = {M.normal_form(u.lift) for level in desc.basis for u in level}
    classes |= {M.normal_form(w) for w in degrees}
    for b in sorted(classes):
        for i in range(M.n + 1):
            count = sum(1 for u in desc.basis[i] if u.lift == b) if i < len(desc.basis) else 0
            r = betti(M, i, b, F)
            if r != count:
                return CheckResult("betti", False, {"i": i, "degree": b, "basis": count, "koszul": r})
    return CheckResult("betti", True)


@dataclass
class VerificationReport:
    square_zero: CheckResult
    minimal: CheckResult
    exactness: ExactnessReport
    betti: CheckResult
    certified: bool

    @property
    def passed(self) -> bool:
        return (self.square_zero.passed and self.minimal.passed and self.exactness.passed
                and self.betti.passed and self.certified)

    def lines(self) -> list[str]:
        ex = self.exactness
        bound = "full window" if ex.bound is None else f"degree <= {ex.bound}"
        return [
            str(self.square_zero),
            str(self.minimal),
            f"exactness ({bound}, {len(ex.degrees)} classes): {'PASS' if ex.passed else 'FAIL'}",
            str(self.betti),
            f"support search: {'certified' if self.certified else 'UNCERTIFIED'}",
        ]


def verify(desc: DescendedResolution, dmax: int | None = None) -> VerificationReport:
    ex = verify_exact_up_to(desc, dmax)
    return VerificationReport(
        verify_square_zero(desc),
        verify_minimal(desc),
        ex,
        betti_crosscheck(desc, [d.degree for d in ex.degrees]),
        desc.certified,
    )
