"""Unary sets built from singletons, sums and Kleene star.

Every set generated from ``{b}`` by sum and star has the shape
``{a1*n1 + ... + ak*nk + a : n_i >= 0}``, which :class:`LinearForm` stores.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Optional, Union

from ._lex import TokenStream
from .errors import ParseError

MAX_LITERAL = 2**63 - 1


@dataclass(frozen=True)
class Singleton:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("singleton payload must be nonnegative")


@dataclass(frozen=True)
class Sum:
    left: "SetExpr"
    right: "SetExpr"


@dataclass(frozen=True)
class Star:
    child: "SetExpr"


SetExpr = Union[Singleton, Sum, Star]


@dataclass(frozen=True)
class LinearForm:
    """The set ``{sum(c*n for c, n in zip(coeffs, ns)) + offset}``.

    Zero coefficients are dropped and duplicates removed on construction;
    redundant but distinct generators are kept.
    """

    coeffs: tuple[int, ...] = ()
    offset: int = 0

    def __post_init__(self):
        if self.offset < 0 or any(c < 0 for c in self.coeffs):
            raise ValueError("linear form entries must be nonnegative")
        object.__setattr__(
            self, "coeffs", tuple(sorted({int(c) for c in self.coeffs if c}))
        )

    @property
    def k(self) -> int:
        return len(self.coeffs)

    def __str__(self) -> str:
        return f"([{','.join(map(str, self.coeffs))}],{self.offset})"


# -- parsing -----------------------------------------------------------------

def parse_set_expr(text: str) -> SetExpr:
    """Parse ``expr := term ('+' term)*``, ``term := atom '*'*``,
    ``atom := '{' digits '}' | '(' expr ')'``.

    >>> parse_set_expr("({2} + {3})*")
    Star(child=Sum(left=Singleton(value=2), right=Singleton(value=3)))
    """
    stream = TokenStream(text)
    expr = _parse_expr(stream)
    stream.expect_end()
    return expr


def _parse_expr(stream: TokenStream) -> SetExpr:
    node = _parse_term(stream)
    while stream.accept("+"):
        node = Sum(node, _parse_term(stream))
    return node


def _parse_term(stream: TokenStream) -> SetExpr:
    node = _parse_atom(stream)
    while stream.accept("*"):
        node = Star(node)
    return node


def _parse_atom(stream: TokenStream) -> SetExpr:
    if stream.accept("("):
        node = _parse_expr(stream)
        stream.expect(")")
        return node
    stream.expect("{")
    tok = stream.expect("int")
    value = int(tok.text)
    if value > MAX_LITERAL:
        raise ParseError(f"literal {tok.text} exceeds 2**63-1", tok.offset)
    stream.expect("}")
    return Singleton(value)


def format_set_expr(expr: SetExpr) -> str:
    if isinstance(expr, Singleton):
        return "{%d}" % expr.value
    if isinstance(expr, Sum):
        return f"{format_set_expr(expr.left)} + {_format_operand(expr.right)}"
    return f"{_format_operand(expr.child)}*"


def _format_operand(expr: SetExpr) -> str:
    text = format_set_expr(expr)
    return f"({text})" if isinstance(expr, Sum) else text


# -- canonical form ----------------------------------------------------------

def canonicalize(expr: SetExpr) -> LinearForm:
    """Reduce a set expression to an equivalent :class:`LinearForm`.

    Sums concatenate generators and add offsets. The star of
    ``a + <x>`` with ``a > 0`` is the monoid generated by
    ``a + <x>``, whose generators are ``a + w`` for ``w`` in the Apery set
    of ``<x, a>`` with respect to ``a``.
    """
    if isinstance(expr, Singleton):
        return LinearForm((), expr.value)
    if isinstance(expr, Sum):
        left, right = canonicalize(expr.left), canonicalize(expr.right)
        return LinearForm(left.coeffs + right.coeffs, left.offset + right.offset)
    if isinstance(expr, Star):
        return star(canonicalize(expr.child))
    raise TypeError(f"not a set expression: {expr!r}")


def star(form: LinearForm) -> LinearForm:
    a = form.offset
    if a == 0:
        # already a submonoid of N
        return form
    if not form.coeffs:
        return LinearForm((a,), 0)
    apery = _apery_set(form.coeffs + (a,), a)
    return LinearForm(tuple(a + w for w in apery), 0)


def _min_per_residue(gens: tuple[int, ...], modulus: int) -> dict[int, int]:
    """Least element of the monoid ``<gens>`` in each reachable residue class."""
    best = {0: 0}
    heap = [(0, 0)]
    while heap:
        value, res = heapq.heappop(heap)
        if value > best.get(res, value):
            continue
        for g in gens:
            nxt = value + g
            r = nxt % modulus
            if r not in best or nxt < best[r]:
                best[r] = nxt
                heapq.heappush(heap, (nxt, r))
    return best


def _apery_set(gens: tuple[int, ...], modulus: int) -> list[int]:
    return sorted(_min_per_residue(tuple(g for g in gens if g % modulus), modulus).values())


# -- enumeration and membership ---------------------------------------------

def _reachable(coeffs: tuple[int, ...], limit: int) -> bytearray:
    """Coin-problem table: ``table[v]`` is 1 iff ``v`` is in ``<coeffs>``.

    Runs in O(len(coeffs) * limit).
    """
    if limit < 0:
        return bytearray()
    table = bytearray(limit + 1)
    table[0] = 1
    for c in coeffs:
        for v in range(c, limit + 1):
            if table[v - c]:
                table[v] = 1
    return table


def enumerate_set(form: LinearForm, bound: int) -> list[int]:
    """Members of ``form`` in ``[0, bound]``, ascending.

    >>> enumerate_set(LinearForm((2, 3), 1), 8)
    [1, 3, 4, 5, 6, 7, 8]
    """
    table = _reachable(form.coeffs, bound - form.offset)
    return [form.offset + v for v, hit in enumerate(table) if hit]


def member_with_witness(form: LinearForm, m: int) -> Optional[tuple[int, ...]]:
    """Lexicographically smallest ``n`` with ``form(n) == m``, or ``None``."""
    target = m - form.offset
    if target < 0:
        return None
    coeffs = form.coeffs
    # suffix[i][v]: v is representable using coeffs[i:]
    suffix = [_reachable(coeffs[i:], target) for i in range(len(coeffs) + 1)]
    if not suffix[0][target]:
        return None
    witness = []
    rest = target
    for i, c in enumerate(coeffs):
        n = 0
        while not suffix[i + 1][rest - c * n]:
            n += 1
        witness.append(n)
        rest -= c * n
    return tuple(witness)


@dataclass(frozen=True)
class GapResult:
    """Outcome of :func:`frobenius_gap`.

    ``kind`` is ``"gap"`` (``value`` holds the largest gap),
    ``"cofinite-none"`` or ``"not-applicable"``.
    """

    kind: str
    value: Optional[int] = None

    def __str__(self) -> str:
        return str(self.value) if self.kind == "gap" else self.kind


def frobenius_gap(form: LinearForm) -> GapResult:
    coeffs = form.coeffs
    if not coeffs or reduce(gcd, coeffs) != 1:
        return GapResult("not-applicable")
    smallest = coeffs[0]
    frob = max(_min_per_residue(coeffs, smallest).values()) - smallest
    if frob < 0:
        return GapResult("cofinite-none")
    return GapResult("gap", form.offset + frob)
