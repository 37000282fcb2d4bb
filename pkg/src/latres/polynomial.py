"""Sparse polynomials with exact coefficients."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .linalg import QQ


@dataclass(frozen=True)
class Polynomial:
    """Terms are (exponent, coefficient) pairs sorted by exponent, no zeros."""

    n: int
    terms: tuple = ()

    @classmethod
    def from_dict(cls, n: int, coeffs: Mapping, field=QQ) -> "Polynomial":
        items = []
        for e, c in coeffs.items():
            c = field(c)
            if c != 0:
                e = tuple(int(x) for x in e)
                if len(e) != n:
                    raise ValueError(f"exponent {list(e)} does not have length {n}")
                items.append((e, c))
        return cls(n, tuple(sorted(items)))

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n, ())

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1, field=QQ) -> "Polynomial":
        return cls.from_dict(len(exp), {tuple(exp): coeff}, field)

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict:
        return dict(self.terms)

    def constant_term(self, field=QQ):
        for e, c in self.terms:
            if not any(e):
                return c
        return field.zero()

    def add(self, other: "Polynomial", field=QQ) -> "Polynomial":
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = field.add(acc.get(e, field.zero()), c)
        return Polynomial.from_dict(self.n, acc, field)

    def scale(self, c, field=QQ) -> "Polynomial":
        return Polynomial.from_dict(self.n, {e: field.mul(c, x) for e, x in self.terms}, field)

    def mul(self, other: "Polynomial", field=QQ) -> "Polynomial":
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = field.add(acc.get(e, field.zero()), field.mul(c1, c2))
        return Polynomial.from_dict(self.n, acc, field)

    def degree(self, grading: Sequence[int]) -> int | None:
        """Common grading-degree of the terms; None for zero, ValueError if mixed."""
        degs = {sum(a * b for a, b in zip(e, grading)) for e, _ in self.terms}
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        return degs.pop() if degs else None

    def render(self, field=QQ, names: Sequence[str] | None = None) -> str:
        """Human-readable form such as ``x1^2*x3 - 2*x2``."""
        if not self.terms:
            return "0"
        names = names or [f"x{k + 1}" for k in range(self.n)]
        out = []
        for e, c in reversed(self.terms):
            s = field.to_str(c)
            neg = s.startswith("-")
            mag = s[1:] if neg else s
            mono = "*".join(names[k] + (f"^{a}" if a > 1 else "") for k, a in enumerate(e) if a)
            if not mono:
                body = mag
            elif mag == "1":
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)
