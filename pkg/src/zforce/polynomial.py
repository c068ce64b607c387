"""Exact polynomials in ``t`` with nonnegative integer coefficients.

Comparison operators on :class:`Poly` implement eventual dominance: ``p < r``
when ``p(t) < r(t)`` for all sufficiently large ``t``. For nonnegative
coefficients that is a lexicographic comparison starting at the top degree.
"""

from __future__ import annotations

import enum
from functools import total_ordering
from typing import Iterable, Mapping

# Coefficients at or above this magnitude are JSON-encoded as decimal strings.
JSON_INT_LIMIT = 2**53


class Order(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@total_ordering
class Poly:
    """Immutable univariate polynomial, coefficients ascending by degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        if any(c < 0 for c in cs):
            raise ValueError(f"negative coefficient in {cs}")
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly, (self.coeffs,))

    @classmethod
    def const(cls, c: int) -> Poly:
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: int = 1) -> Poly:
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __add__(self, other: Poly) -> Poly:
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Poly(out)

    def __mul__(self, other: Poly) -> Poly:
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if not self or not other:
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def mul_t(self) -> Poly:
        """Multiply by ``t``."""
        if not self:
            return self
        return Poly((0,) + self.coeffs)

    def scale(self, c: int) -> Poly:
        return Poly(c * a for a in self.coeffs)

    def square(self) -> Poly:
        return self * self

    def cmp(self, other: Poly) -> Order:
        a, b = self._key(), other._key()
        if a == b:
            return Order.EQUAL
        return Order.LESS if a < b else Order.GREATER

    def _key(self) -> tuple:
        return (len(self.coeffs), self.coeffs[::-1])

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __lt__(self, other: Poly) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        """Horner evaluation; ``x`` may be a float, Fraction or int."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        if not self:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
                continue
            mono = "t" if k == 1 else f"t^{k}"
            terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> Poly:
        """Inverse of ``str()``, e.g. ``"t^4+3t^3+4t^2"``."""
        text = text.replace(" ", "")
        if text == "0":
            return cls()
        out: dict[int, int] = {}
        for term in text.split("+"):
            if not term:
                raise ValueError(f"bad polynomial {text!r}")
            if "t" in term:
                c, _, e = term.partition("t")
                c = int(c) if c else 1
                e = int(e[1:]) if e.startswith("^") else (1 if not e else None)
                if e is None:
                    raise ValueError(f"bad term {term!r}")
            else:
                c, e = int(term), 0
            out[e] = out.get(e, 0) + c
        deg = max(out)
        return cls(out.get(k, 0) for k in range(deg + 1))

    def to_json(self) -> dict:
        return {"coeffs": [_json_int(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: Mapping) -> Poly:
        return cls(int(c) for c in obj["coeffs"])


def _json_int(c: int):
    return c if c < JSON_INT_LIMIT else str(c)


def cmp_preceq(a: Poly, b: Poly) -> Order:
    return a.cmp(b)


ZERO = Poly()
ONE = Poly.const(1)
T = Poly.monomial(1)


class AlphaForm:
    """A linear form ``sum_i c_i(t) * alpha_i`` over source vertices ``i``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Poly] | None = None):
        clean = {i: p for i, p in sorted((terms or {}).items()) if p}
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("AlphaForm is immutable")

    def __reduce__(self):
        return (AlphaForm, (self.terms,))

    @classmethod
    def source(cls, i: int) -> AlphaForm:
        return cls({i: ONE})

    def coefficient(self, i: int) -> Poly:
        return self.terms.get(i, ZERO)

    def __add__(self, other: AlphaForm) -> AlphaForm:
        out = dict(self.terms)
        for i, p in other.terms.items():
            out[i] = out.get(i, ZERO) + p
        return AlphaForm(out)

    def mul_t(self) -> AlphaForm:
        return AlphaForm({i: p.mul_t() for i, p in self.terms.items()})

    def collapse(self) -> Poly:
        """Value at ``alpha_i = 1`` for every ``i``."""
        total = ZERO
        for p in self.terms.values():
            total = total + p
        return total

    def sum_of_squares(self) -> Poly:
        total = ZERO
        for p in self.terms.values():
            total = total + p.square()
        return total

    def eval_alpha(self, t) -> dict[int, float]:
        return {i: p.eval(t) for i, p in self.terms.items()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlphaForm):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({p})*a{i}" for i, p in self.terms.items())

    def __repr__(self) -> str:
        return f"AlphaForm({str(self)!r})"

    def to_json(self) -> dict:
        return {"alpha": {str(i): p.to_json() for i, p in self.terms.items()}}

    @classmethod
    def from_json(cls, obj: Mapping) -> AlphaForm:
        return cls({int(i): Poly.from_json(p) for i, p in obj["alpha"].items()})


def eval_alpha(f: AlphaForm, t) -> dict[int, float]:
    return f.eval_alpha(t)
