"""Exact linear algebra over the integers, the rationals and prime fields.

Matrices are dense lists of rows.  Integer work (Smith and Hermite normal
forms, integer kernels, subgroup indices) uses Python's arbitrary precision
ints; field work goes through a small field object that knows how to reduce,
divide and print its elements.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple
Rows = list  # list of lists


# --------------------------------------------------------------------------
# Integer matrices
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix; ``entries`` is row-major."""

    rows: int
    cols: int
    entries: tuple = ()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [tuple(c) for c in columns]
        return cls.from_rows(
            [[c[i] for c in columns] for i in range(rows)], cols=len(columns)
        )

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows(_identity(n), cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def tolist(self) -> Rows:
        c = self.cols
        return [list(self.entries[r * c:(r + 1) * c]) for r in range(self.rows)]

    def row(self, r: int) -> tuple:
        return self.entries[r * self.cols:(r + 1) * self.cols]

    def column(self, c: int) -> tuple:
        return tuple(self.entries[r * self.cols + c] for r in range(self.rows))

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r * self.cols + c]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [self.column(c) for c in range(self.cols)], cols=self.rows
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        return IntMatrix.from_rows(matmul(self.tolist(), other.tolist(), other.cols),
                                   cols=other.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_rows([[self[r, c] for c in cols] for r in rows], cols=len(cols))

    def is_zero(self) -> bool:
        return not any(self.entries)


def as_rows(A) -> tuple[Rows, int, int]:
    """Normalise an IntMatrix or a list of rows to (rows, nrows, ncols)."""
    if isinstance(A, IntMatrix):
        return A.tolist(), A.rows, A.cols
    rows = [list(r) for r in A]
    return rows, len(rows), (len(rows[0]) if rows else 0)


def _identity(n: int) -> Rows:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A: Rows, B: Rows, bcols: int | None = None) -> Rows:
    if bcols is None:
        bcols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * bcols
        for k, a in enumerate(row):
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        acc[j] += a * b
        out.append(acc)
    return out


def matvec(A: Rows, v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v) if a) for row in A]


# --------------------------------------------------------------------------
# Fields
# --------------------------------------------------------------------------


class _FieldOps:
    """Shared arithmetic for the two field variants."""

    characteristic: int

    def __call__(self, x):
        raise NotImplementedError

    def reduce(self, x):
        return x

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def mul(self, a, b):
        return self.reduce(a * b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def add(self, a, b):
        return self.reduce(a + b)

    def neg(self, a):
        return self.reduce(-a)


@dataclass(frozen=True)
class Rationals(_FieldOps):
    """The field of rational numbers; elements are ``Fraction``."""

    characteristic: int = field(default=0, init=False)

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def to_str(self, a) -> str:
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def parse(self, s: str) -> Fraction:
        return Fraction(s)

    def spec(self) -> str:
        return "q"

    def __repr__(self):
        return "QQ"


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
PRIME_BOUND = 1 << 62


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField(_FieldOps):
    """Z/p for a prime p < 2**62; elements are ints in [0, p)."""

    p: int

    def __post_init__(self):
        if not (2 <= self.p < PRIME_BOUND) or not is_prime(self.p):
            raise ValueError(f"PrimeField needs a prime below 2**62, got {self.p}")

    @property
    def characteristic(self) -> int:  # type: ignore[override]
        return self.p

    def __call__(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x):
        return x % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def to_str(self, a) -> str:
        return str(a % self.p)

    def parse(self, s: str) -> int:
        return self(s)

    def spec(self) -> str:
        return f"fp:{self.p}"

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


class _Integers:
    """Marker for computations over Z (kernels, solving)."""

    characteristic = 0

    def __repr__(self):
        return "ZZ"


ZZ = _Integers()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str):
    """Parse ``q`` or ``fp:<p>``."""
    t = text.strip().lower()
    if t in ("q", "qq", "rationals"):
        return QQ
    if t.startswith("fp:"):
        try:
            p = int(t[3:])
        except ValueError:
            raise ValueError(f"bad prime in field spec {text!r}") from None
        return PrimeField(p)
    raise ValueError(f"unknown field spec {text!r}; expected 'q' or 'fp:<p>'")


# --------------------------------------------------------------------------
# Field elimination
# --------------------------------------------------------------------------


def rref(A, F=QQ) -> tuple[Rows, list[int]]:
    """Reduced row echelon form over ``F``; returns (nonzero rows, pivot columns)."""
    rows, m, n = as_rows(A)
    M = [[F(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(x, inv) for x in M[r]]
        pr = M[r]
        for i in range(m):
            if i != r:
                f = M[i][c]
                if f != 0:
                    M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], pr)]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(A, F=QQ) -> int:
    rows, m, n = as_rows(A)
    if m == 0 or n == 0:
        return 0
    if F is ZZ:
        F = QQ
    return len(rref(rows, F)[1])


def nullspace(A, F=QQ, ncols: int | None = None) -> list[list]:
    """Basis of {x : A x = 0} over a field, read off the RREF.

    One vector per free column, with a 1 in that column; the basis is
    therefore canonical for the kernel.
    """
    rows, m, n = as_rows(A)
    if ncols is not None:
        n = ncols
    if m == 0:
        return [[F(1) if i == j else F(0) for i in range(n)] for j in range(n)]
    R, piv = rref(rows, F)
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = [F(0)] * n
        v[f] = F(1)
        for r, pc in enumerate(piv):
            v[pc] = F.neg(R[r][f])
        basis.append(v)
    return basis


def row_space_basis(vectors, F=QQ, ncols: int | None = None) -> Rows:
    """Canonical (RREF) basis of the span of ``vectors``."""
    vectors = list(vectors)
    if not vectors:
        return []
    return rref(vectors, F)[0]


def reduce_against(v: Sequence, echelon: Rows, pivots: Sequence[int], F=QQ) -> list:
    """Reduce ``v`` by an RREF basis so it vanishes in every pivot column."""
    v = [F(x) for x in v]
    for row, c in zip(echelon, pivots):
        f = v[c]
        if f != 0:
            v = [F.sub(x, F.mul(f, y)) for x, y in zip(v, row)]
    return v


def solve_field(A, b: Sequence, F=QQ, ncols: int | None = None):
    rows, m, n = as_rows(A)
    if ncols is not None:
        n = ncols
    if m == 0:
        return [F(0)] * n if all(F(x) == 0 for x in b) else None
    aug = [list(r) + [x] for r, x in zip(rows, b)]
    R, piv = rref(aug, F)
    if n in piv:
        return None
    x = [F(0)] * n
    for r, c in enumerate(piv):
        x[c] = R[r][n]
    return x


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SnfResult:
    """``U @ A @ V == D`` with D diagonal carrying ``invariant_factors``."""

    U: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix
    D: IntMatrix
    invariant_factors: tuple
    rank: int


def smith_normal_form(A) -> SnfResult:
    """Smith normal form with unimodular transforms and their inverses.

    Pivot rule: the nonzero entry of least absolute value in the active
    submatrix, ties to the lowest row and then the lowest column.
    """
    D, m, n = as_rows(A)
    if isinstance(A, IntMatrix):
        n = A.cols
    D = [[int(x) for x in r] for r in D]
    U, Ui = _identity(m), _identity(m)
    V, Vi = _identity(n), _identity(n)

    def swap_rows(a, b):
        if a != b:
            D[a], D[b] = D[b], D[a]
            U[a], U[b] = U[b], U[a]
            for row in Ui:
                row[a], row[b] = row[b], row[a]

    def swap_cols(a, b):
        if a != b:
            for row in D:
                row[a], row[b] = row[b], row[a]
            for row in V:
                row[a], row[b] = row[b], row[a]
            Vi[a], Vi[b] = Vi[b], Vi[a]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q:
            D[dst] = [x + q * y for x, y in zip(D[dst], D[src])]
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]
            for row in Ui:
                row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        if q:
            for row in D:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]
            Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    t = 0
    factors = []
    while t < min(m, n):
        while True:
            best = None
            for i in range(t, m):
                Di = D[i]
                for j in range(t, n):
                    x = Di[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
            piv = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // piv))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // piv))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if best is None:
            break
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
            for row in Ui:
                row[t] = -row[t]
        factors.append(D[t][t])
        t += 1

    return SnfResult(
        U=IntMatrix.from_rows(U, cols=m),
        V=IntMatrix.from_rows(V, cols=n),
        U_inv=IntMatrix.from_rows(Ui, cols=m),
        V_inv=IntMatrix.from_rows(Vi, cols=n),
        D=IntMatrix.from_rows(D, cols=n),
        invariant_factors=tuple(factors),
        rank=len(factors),
    )


def invariant_factors(A) -> tuple:
    return smith_normal_form(A).invariant_factors


# --------------------------------------------------------------------------
# Hermite normal form
# --------------------------------------------------------------------------


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> tuple[Rows, list[int]]:
    """Row-style Hermite normal form of the row lattice.

    Returns (H, pivots): nonzero rows in echelon form with positive pivots
    and entries above each pivot reduced into [0, pivot).
    """
    H = [[int(x) for x in r] for r in rows]
    m = len(H)
    n = len(H[0]) if H else 0
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(H[i][c]), i))
            H[r], H[p] = H[p], H[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if not any(H[i][c] for i in range(r, m)):
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
        pivots.append(c)
        r += 1
    return H[:r], pivots


# --------------------------------------------------------------------------
# Kernels, solving, indices
# --------------------------------------------------------------------------


def kernel_basis(A, ring=ZZ) -> list[tuple]:
    """Basis of the kernel of A.

    Over ``ZZ`` the result is a lattice basis of the integer kernel in
    Hermite normal form (hence saturated).  Over a field it is the RREF
    nullspace basis.
    """
    rows, m, n = as_rows(A)
    if isinstance(A, IntMatrix):
        n = A.cols
    if ring is ZZ:
        snf = smith_normal_form(IntMatrix.from_rows(rows, cols=n))
        V = snf.V.tolist()
        cols = [[V[i][j] for i in range(n)] for j in range(snf.rank, n)]
        if not cols:
            return []
        H, _ = hermite_normal_form(cols)
        return [tuple(h) for h in H]
    return [tuple(v) for v in nullspace(rows, ring, ncols=n)]


def solve(A, b: Sequence, ring=ZZ):
    """Some x with A x = b over ``ring``, or None if there is none."""
    rows, m, n = as_rows(A)
    if isinstance(A, IntMatrix):
        n = A.cols
    if len(b) != m:
        raise ValueError("right-hand side has wrong length")
    if ring is not ZZ:
        x = solve_field(rows, [ring(v) for v in b], ring, ncols=n)
        return None if x is None else tuple(x)
    snf = smith_normal_form(IntMatrix.from_rows(rows, cols=n))
    Ub = matvec(snf.U.tolist(), [int(v) for v in b])
    y = [0] * n
    for t, f in enumerate(snf.invariant_factors):
        if Ub[t] % f:
            return None
        y[t] = Ub[t] // f
    if any(Ub[t] for t in range(snf.rank, m)):
        return None
    return tuple(matvec(snf.V.tolist(), y))


class _Infinite:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITE"

    def __str__(self):
        return "infinite"


INFINITE = _Infinite()


def subgroup_index(ambient_gens, sub_gens):
    """Index of the subgroup spanned by the columns of ``sub_gens`` inside the
    group spanned by the columns of ``ambient_gens``.

    Returns ``INFINITE`` when the ranks differ.  Raises ``ValueError`` if the
    sub-generators leave the rational span, or are not integral combinations
    of the ambient generators.
    """
    A = ambient_gens if isinstance(ambient_gens, IntMatrix) else IntMatrix.from_rows(ambient_gens)
    S = sub_gens if isinstance(sub_gens, IntMatrix) else IntMatrix.from_rows(sub_gens)
    if A.rows != S.rows:
        raise ValueError("ambient and sub generators live in different spaces")
    snf_a = smith_normal_form(A)
    if S.cols == 0:
        return 1 if snf_a.rank == 0 else INFINITE
    joint = IntMatrix.from_rows([A.row(r) + S.row(r) for r in range(A.rows)],
                                cols=A.cols + S.cols)
    if rank(joint) != snf_a.rank:
        raise ValueError("sub generators are not in the rational span of the ambient group")
    for c in range(S.cols):
        if solve(A, S.column(c)) is None:
            raise ValueError(f"sub generator {c} is not in the ambient group")
    snf_s = smith_normal_form(S)
    if snf_s.rank != snf_a.rank:
        return INFINITE
    num = _prod(snf_s.invariant_factors)
    den = _prod(snf_a.invariant_factors)
    assert num % den == 0
    return num // den


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def prime_factors(n: int) -> set[int]:
    n = abs(n)
    out = set()
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.add(n)
    return out


def determinant(A) -> int:
    """Integer determinant by fraction-free Bareiss elimination."""
    rows, m, n = as_rows(A)
    if m != n:
        raise ValueError("determinant of a non-square matrix")
    if m == 0:
        return 1
    M = [[int(x) for x in r] for r in rows]
    sign, prev = 1, 1
    for k in range(m - 1):
        if M[k][k] == 0:
            sw = next((i for i in range(k + 1, m) if M[i][k]), None)
            if sw is None:
                return 0
            M[k], M[sw] = M[sw], M[k]
            sign = -sign
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1]
