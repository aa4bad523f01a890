"""Exact arithmetic in Laurent polynomial rings over the integers.

Two rings live here.  `LaurentPoly` is the commutative ring with one
invertible variable x_i per integer index i; it carries an index-shift
map x_i -> x_{i+m} used by the twisted multiplication one level up.
`LaurentXT` is the two-variable ring Z[x^{+-1}, t^{+-1}] that serves as
the target of the collapse homomorphism sending every x_i to x.

Coefficients are arbitrary-precision ints throughout; nothing here is
floating point.  Monomials are sorted tuples of (index, exponent) pairs
with all exponents nonzero, so equality of elements is dict equality.
"""

from __future__ import annotations

from typing import Iterable, Mapping

Monomial = tuple[tuple[int, int], ...]


def _normalize_monomial(pairs: Iterable[tuple[int, int]]) -> Monomial:
    merged: dict[int, int] = {}
    for index, exponent in pairs:
        merged[index] = merged.get(index, 0) + exponent
    return tuple(sorted((i, e) for i, e in merged.items() if e != 0))


def _mul_monomials(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return _normalize_monomial(list(a) + list(b))


class LaurentPoly:
    """Element of Z[x_i^{+-1} : i in Z], stored as monomial -> coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[Monomial, int] | None = None):
        self.coeffs: dict[Monomial, int] = {
            m: c for m, c in (coeffs or {}).items() if c != 0
        }

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({(): c})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls.const(1)

    @classmethod
    def x(cls, index: int, exponent: int = 1) -> "LaurentPoly":
        if exponent == 0:
            return cls.one()
        return cls({((index, exponent),): 1})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[Monomial, int] = {}
        for ma, ca in self.coeffs.items():
            for mb, cb in other.coeffs.items():
                m = _mul_monomials(ma, mb)
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return LaurentPoly(out)

    def __rmul__(self, scalar: int) -> "LaurentPoly":
        if not isinstance(scalar, int):
            return NotImplemented
        return LaurentPoly({m: scalar * c for m, c in self.coeffs.items()})

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers only exist for monomials; invert x(i, e) directly")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, m: int) -> "LaurentPoly":
        """Ring automorphism relabelling x_i to x_{i+m}."""
        if m == 0:
            return self
        return LaurentPoly(
            {tuple(sorted((i + m, e) for i, e in mono)): c for mono, c in self.coeffs.items()}
        )

    def indices(self) -> set[int]:
        return {i for mono in self.coeffs for i, _ in mono}

    def monomial_keys(self) -> list[Monomial]:
        return sorted(self.coeffs)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r})"


def one_minus_x(index: int) -> LaurentPoly:
    """The element 1 - x_i."""
    return LaurentPoly.one() - LaurentPoly.x(index)


def x_diff(index: int) -> LaurentPoly:
    """The element x_{i-1} - x_i."""
    return LaurentPoly.x(index - 1) - LaurentPoly.x(index)


def format_monomial(mono: Monomial) -> str:
    if not mono:
        return "1"
    return " ".join(f"x_{i}^{e}" for i, e in mono)


def format_poly(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for mono in sorted(p.coeffs):
        parts.append(f"[{format_monomial(mono)}] * {p.coeffs[mono]}")
    return " + ".join(parts)


class LaurentXT:
    """Element of the commutative ring Z[x^{+-1}, t^{+-1}].

    Target of the collapse map: keys are (x-exponent, t-exponent).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[tuple[int, int], int] | None = None):
        self.coeffs: dict[tuple[int, int], int] = {
            k: c for k, c in (coeffs or {}).items() if c != 0
        }

    @classmethod
    def zero(cls) -> "LaurentXT":
        return cls()

    @classmethod
    def const(cls, c: int) -> "LaurentXT":
        return cls({(0, 0): c})

    @classmethod
    def one(cls) -> "LaurentXT":
        return cls.const(1)

    @classmethod
    def term(cls, xe: int, te: int, c: int = 1) -> "LaurentXT":
        return cls({(xe, te): c})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentXT):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "LaurentXT") -> "LaurentXT":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentXT(out)

    def __neg__(self) -> "LaurentXT":
        return LaurentXT({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentXT") -> "LaurentXT":
        return self + (-other)

    def __mul__(self, other: "LaurentXT") -> "LaurentXT":
        out: dict[tuple[int, int], int] = {}
        for (xa, ta), ca in self.coeffs.items():
            for (xb, tb), cb in other.coeffs.items():
                k = (xa + xb, ta + tb)
                s = out.get(k, 0) + ca * cb
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return LaurentXT(out)

    def __repr__(self) -> str:
        if self.is_zero():
            return "LaurentXT(0)"
        parts = [f"x^{xe} t^{te} * {c}" for (xe, te), c in sorted(self.coeffs.items())]
        return f"LaurentXT({' + '.join(parts)})"


def collapse_poly(p: LaurentPoly, t_exp: int = 0) -> LaurentXT:
    """Apply the homomorphism x_i -> x to one coefficient, at t-degree t_exp."""
    out: dict[tuple[int, int], int] = {}
    for mono, c in p.coeffs.items():
        xe = sum(e for _, e in mono)
        k = (xe, t_exp)
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return LaurentXT(out)
