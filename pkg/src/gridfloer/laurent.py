"""Multivariate Laurent polynomials with integer coefficients."""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import NotDivisible


class LaurentPoly:
    """Sparse map from integer exponent vectors to nonzero integer coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, terms: Mapping | Iterable = (), nvars: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple[int, ...], int] = {}
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            clean[exp] = clean.get(exp, 0) + int(c)
        self.terms = {e: c for e, c in clean.items() if c}
        if nvars is None:
            nvars = len(next(iter(clean))) if clean else 0
        self.nvars = nvars
        for e in self.terms:
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has the wrong number of variables")

    @classmethod
    def one(cls, nvars: int) -> "LaurentPoly":
        return cls({(0,) * nvars: 1}, nvars)

    @classmethod
    def monomial(cls, exp, coeff: int = 1) -> "LaurentPoly":
        return cls({tuple(exp): coeff}, len(exp))

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({(0,) * self.nvars: other}, self.nvars)
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, self.nvars)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self.terms.items()}, self.nvars)
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out, self.nvars)

    __rmul__ = __mul__

    def substitute_negated(self) -> "LaurentPoly":
        """Replace every variable by its inverse."""
        return LaurentPoly({tuple(-v for v in e): c for e, c in self.terms.items()}, self.nvars)

    def leading(self) -> tuple[tuple[int, ...], int]:
        e = max(self.terms)
        return e, self.terms[e]

    def divide_by_difference(self, i: int) -> "LaurentPoly":
        """Exact quotient by ``tau_i - tau_i^{-1}``."""
        if not self.terms:
            return self
        floor = min(e[i] for e in self.terms)
        rem = dict(self.terms)
        quotient: dict[tuple[int, ...], int] = {}
        while rem:
            # peel the term with the largest exponent in variable i
            e = max(rem, key=lambda k: (k[i], k))
            if e[i] - 2 < floor:
                raise NotDivisible(f"{self.to_string()} is not divisible by tau{i + 1} - tau{i + 1}^-1")
            c = rem.pop(e)
            quotient[e[:i] + (e[i] - 1,) + e[i + 1:]] = c
            low = e[:i] + (e[i] - 2,) + e[i + 1:]
            rem[low] = rem.get(low, 0) + c
            if not rem[low]:
                del rem[low]
        return LaurentPoly(quotient, self.nvars)

    def normalized(self) -> "LaurentPoly":
        """Centre the exponents at the origin and make the leading coefficient positive."""
        if not self.terms:
            return self
        shift = []
        for k in range(self.nvars):
            lo = min(e[k] for e in self.terms)
            hi = max(e[k] for e in self.terms)
            if (lo + hi) % 2:
                raise ValueError(f"cannot centre {self}: odd exponent span in variable {k}")
            shift.append((lo + hi) // 2)
        out = LaurentPoly(
            {tuple(a - s for a, s in zip(e, shift)): c for e, c in self.terms.items()}, self.nvars
        )
        return -out if out.leading()[1] < 0 else out

    def __repr__(self):
        return f"LaurentPoly({self.to_string()})"

    def to_string(self, names=None, halve: bool = False) -> str:
        """Render as text; ``halve`` prints ``v^e`` as ``t^(e/2)``."""
        if not self.terms:
            return "0"
        if names is None:
            base = "t" if halve else "tau"
            names = [base] if self.nvars == 1 else [f"{base}{k + 1}" for k in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = []
            for name, p in zip(names, e):
                if not p:
                    continue
                if halve:
                    p = p // 2 if p % 2 == 0 else f"({p}/2)"
                factors.append(name if p == 1 else f"{name}^{p}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        return [{"exponent": list(e), "coeff": c} for e, c in sorted(self.terms.items())]
