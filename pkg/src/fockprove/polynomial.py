"""Polynomials with nonnegative integer coefficients and their ranges.

Nonnegative coefficients make ``F`` monotone in every coordinate, which
gives finite, complete search boxes for range enumeration and preimages.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from ._lex import TokenStream
from .errors import ArityError, ParseError
from .unary import LinearForm

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class NonnegPolynomial:
    """``sum(c * prod(x_j ** e_j))`` over ``terms``, a map exponents -> c.

    Terms with a zero coefficient are dropped; the constant term is keyed by
    the all-zero exponent vector.
    """

    k: int
    terms: Mapping[Exponents, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("arity must be nonnegative")
        clean = {}
        for exps, c in dict(self.terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.k:
                raise ArityError(f"exponent vector {exps} does not have length {self.k}")
            if c < 0 or any(e < 0 for e in exps):
                raise ValueError("coefficients and exponents must be nonnegative")
            if c:
                clean[exps] = clean.get(exps, 0) + int(c)
        object.__setattr__(self, "terms", dict(sorted(clean.items(), reverse=True)))

    def __hash__(self):
        return hash((self.k, tuple(self.terms.items())))

    def __call__(self, *n: int) -> int:
        return evaluate(self, n)

    @property
    def constant(self) -> int:
        return self.terms.get((0,) * self.k, 0)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def with_arity(self, k: int) -> "NonnegPolynomial":
        """Pad with unused trailing variables."""
        if k < self.k:
            raise ArityError(f"cannot shrink a {self.k}-variable polynomial to {k}")
        pad = (0,) * (k - self.k)
        return NonnegPolynomial(k, {e + pad: c for e, c in self.terms.items()})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms.items():
            factors = [
                f"x{j + 1}" if e == 1 else f"x{j + 1}^{e}"
                for j, e in enumerate(exps) if e
            ]
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append("*".join(factors))
        return " + ".join(parts)


def evaluate(poly: NonnegPolynomial, n: Sequence[int]) -> int:
    """Exact value of ``poly`` at ``n`` (Python ints, no overflow).

    >>> evaluate(parse_polynomial("2*x1 + 3*x2 + 1"), (2, 1))
    8
    """
    if len(n) != poly.k:
        raise ArityError(f"expected {poly.k} arguments, got {len(n)}")
    total = 0
    for exps, c in poly.terms.items():
        term = c
        for x, e in zip(n, exps):
            if e:
                term *= x**e
        total += term
    return total


def parse_polynomial(text: str, k: int | None = None) -> NonnegPolynomial:
    """Parse ``2*x1 + 3*x2 + 1``, ``x1^2 + 2`` and the like.

    The arity is the largest variable index unless ``k`` is given.
    """
    stream = TokenStream(text)
    monomials = [_parse_monomial(stream)]
    while stream.accept("+"):
        monomials.append(_parse_monomial(stream))
    stream.expect_end()
    used = max((max(m, default=0) for _, m in monomials), default=0)
    if k is None:
        k = used
    elif used > k:
        raise ArityError(f"polynomial uses x{used} but arity is {k}")
    terms: dict[Exponents, int] = {}
    for c, powers in monomials:
        exps = [0] * k
        for j, e in powers.items():
            exps[j - 1] += e
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + c
    return NonnegPolynomial(k, terms)


def _parse_monomial(stream: TokenStream) -> tuple[int, dict[int, int]]:
    coeff = 1
    powers: dict[int, int] = {}
    while True:
        tok = stream.peek
        if tok.kind == "int":
            coeff *= int(stream.next().text)
        elif tok.kind == "var":
            stream.next()
            j = int(tok.text[1:])
            if j < 1:
                raise ParseError("variables are numbered from x1", tok.offset)
            e = 1
            if stream.accept("^"):
                e = int(stream.expect("int").text)
            powers[j] = powers.get(j, 0) + e
        else:
            raise ParseError(f"expected a number or variable, found {tok.text or 'end of input'!r}",
                             tok.offset)
        if not stream.accept("*"):
            return coeff, powers


def from_linear(form: LinearForm) -> NonnegPolynomial:
    k = form.k
    terms = {tuple(int(i == j) for i in range(k)): c for j, c in enumerate(form.coeffs)}
    if form.offset:
        terms[(0,) * k] = form.offset
    return NonnegPolynomial(k, terms)


def search_bounds(poly: NonnegPolynomial, bound: int) -> tuple[int, ...]:
    """Per-coordinate box ``[0, B_i]`` for values up to ``bound``.

    ``B_i`` is the least ``v`` with ``c * v**e_i > bound`` for every monomial
    containing ``x_i``. A tuple with ``n_i > B_i`` and ``F(n) <= bound`` has
    every ``x_i``-monomial vanishing, so ``n_i`` can be lowered without
    changing ``F``.
    """
    out = []
    for i in range(poly.k):
        b = 0
        for exps, c in poly.terms.items():
            e = exps[i]
            if e:
                v = 0
                while c * v**e <= bound:
                    v += 1
                b = max(b, v)
        out.append(b)
    return tuple(out)


def free_coordinates(poly: NonnegPolynomial) -> tuple[int, ...]:
    """Coordinates (0-based) that occur in no monomial."""
    return tuple(i for i in range(poly.k) if not any(e[i] for e in poly.terms))


# Polynomials below are "suffix" polynomials: exponent vectors over the
# variables not yet fixed, as hashable tuples of (exponents, coeff).
_Suffix = tuple[tuple[Exponents, int], ...]


def _substitute_first(poly: _Suffix, v: int) -> _Suffix:
    out: dict[Exponents, int] = {}
    for exps, c in poly:
        rest = exps[1:]
        val = c * v ** exps[0] if exps[0] else c
        if val:
            out[rest] = out.get(rest, 0) + val
    return tuple(sorted(out.items()))


def _const(poly: _Suffix) -> int:
    for exps, c in poly:
        if not any(exps):
            return c
    return 0


@lru_cache(maxsize=None)
def _values(poly: _Suffix, limits: tuple[int, ...], bound: int) -> frozenset[int]:
    """All values ``<= bound`` of a suffix polynomial over the box ``limits``."""
    if not limits:
        c = _const(poly)
        return frozenset((c,)) if c <= bound else frozenset()
    if not any(exps[0] for exps, _ in poly):
        # first variable absent: one representative suffices for values
        return _values(_substitute_first(poly, 0), limits[1:], bound)
    found: set[int] = set()
    for v in range(limits[0] + 1):
        sub = _substitute_first(poly, v)
        if _const(sub) > bound:
            break
        found |= _values(sub, limits[1:], bound)
    return frozenset(found)


def _suffix(poly: NonnegPolynomial) -> _Suffix:
    return tuple(sorted(poly.terms.items()))


def enumerate_range(poly: NonnegPolynomial, bound: int) -> list[int]:
    """Sorted distinct values of ``poly`` over ``N^k`` that are ``<= bound``.

    >>> enumerate_range(parse_polynomial("x1^2 + 2"), 20)
    [2, 3, 6, 11, 18]
    """
    if bound < 0:
        return []
    values = sorted(_values(_suffix(poly), search_bounds(poly, bound), bound))
    _values.cache_clear()
    return values


def preimages(poly: NonnegPolynomial, m: int, limit: int = 1) -> list[tuple[int, ...]]:
    """Up to ``limit`` tuples ``n`` with ``poly(n) == m`` in lexicographic order.

    Complete within :func:`search_bounds` for ``m``; use
    :func:`has_unbounded_preimages` to learn whether further solutions exist
    outside that box.
    """
    if limit < 1:
        raise ValueError("limit must be positive")
    if m < 0:
        return []
    limits = search_bounds(poly, m)
    found: list[tuple[int, ...]] = []

    def walk(sub: _Suffix, rest: tuple[int, ...], prefix: list[int]) -> None:
        if not rest:
            if _const(sub) == m:
                found.append(tuple(prefix))
            return
        for v in range(rest[0] + 1):
            nxt = _substitute_first(sub, v)
            if _const(nxt) > m:
                break
            if m not in _values(nxt, rest[1:], m):
                continue
            prefix.append(v)
            walk(nxt, rest[1:], prefix)
            prefix.pop()
            if len(found) >= limit:
                return

    try:
        walk(_suffix(poly), limits, [])
    finally:
        _values.cache_clear()
    return found


def has_unbounded_preimages(poly: NonnegPolynomial, m: int) -> bool:
    """True iff ``m`` has infinitely many preimages.

    That happens exactly when some preimage has a coordinate whose monomials
    all vanish there; that coordinate can then grow freely.
    """
    for n in preimages(poly, m, limit=_box_size(search_bounds(poly, m))):
        for i in range(poly.k):
            if all(
                any(n[j] == 0 for j, e in enumerate(exps) if e and j != i)
                for exps in poly.terms if exps[i]
            ):
                return True
    return False


def _box_size(limits: Iterable[int]) -> int:
    size = 1
    for b in limits:
        size *= b + 1
    return size


def box(k: int, cutoff: int) -> Iterable[tuple[int, ...]]:
    """All tuples in ``[0, cutoff)^k`` in colexicographic order."""
    return (t[::-1] for t in itertools.product(range(cutoff), repeat=k))
