"""Truncated Fock space for ``k`` bosonic modes.

Basis states are occupation tuples ``(n_1, ..., n_k)`` with every
``n_j < cutoff``. Matrix indices follow colexicographic order, i.e.
``index = sum(n_j * cutoff**j)`` with the first mode varying fastest.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import ArityError, StateError
from .polynomial import NonnegPolynomial, box

Occupations = tuple[int, ...]

NORM_TOL = 1e-9


# -- basis -------------------------------------------------------------------

def basis_index(n: Sequence[int], cutoff: int) -> int:
    index = 0
    for j in reversed(range(len(n))):
        index = index * cutoff + n[j]
    return index


def basis_state(index: int, k: int, cutoff: int) -> Occupations:
    out = []
    for _ in range(k):
        index, r = divmod(index, cutoff)
        out.append(r)
    return tuple(out)


def basis_states(k: int, cutoff: int) -> list[Occupations]:
    return list(box(k, cutoff))


# -- states ------------------------------------------------------------------

@dataclass(frozen=True)
class StateVector:
    """Finite superposition over Fock basis states.

    ``truncation_loss`` is the squared norm discarded at the cutoff by the
    operations that produced this vector.
    """

    k: int
    cutoff: int
    amplitudes: Mapping[Occupations, complex] = field(default_factory=dict)
    truncation_loss: float = 0.0

    def __post_init__(self):
        if self.k < 0 or self.cutoff < 1:
            raise StateError("need k >= 0 and cutoff >= 1")
        clean = {}
        for n, c in dict(self.amplitudes).items():
            n = tuple(int(x) for x in n)
            if len(n) != self.k:
                raise ArityError(f"basis state {n} does not have {self.k} modes")
            if any(x < 0 or x >= self.cutoff for x in n):
                raise StateError(f"occupation {n} outside [0, {self.cutoff})")
            if c != 0:
                clean[n] = complex(c)
        object.__setattr__(
            self, "amplitudes",
            dict(sorted(clean.items(), key=lambda item: item[0][::-1])),
        )

    @classmethod
    def basis(cls, n: Sequence[int], cutoff: int) -> "StateVector":
        return cls(len(n), cutoff, {tuple(n): 1.0})

    def __getitem__(self, n: Sequence[int]) -> complex:
        return self.amplitudes.get(tuple(n), 0j)

    def norm_squared(self) -> float:
        return math.fsum(abs(c) ** 2 for c in self.amplitudes.values())

    def normalize(self) -> "StateVector":
        norm2 = self.norm_squared()
        if norm2 == 0:
            raise StateError("cannot normalize the zero vector")
        scale = 1 / math.sqrt(norm2)
        return StateVector(self.k, self.cutoff,
                           {n: c * scale for n, c in self.amplitudes.items()})

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared() - 1) <= tol

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.cutoff**self.k, dtype=complex)
        for n, c in self.amplitudes.items():
            out[basis_index(n, self.cutoff)] = c
        return out

    @classmethod
    def from_array(cls, vec: np.ndarray, k: int, cutoff: int) -> "StateVector":
        return cls(k, cutoff, {
            basis_state(i, k, cutoff): complex(c) for i, c in enumerate(vec) if c != 0
        })

    def __add__(self, other: "StateVector") -> "StateVector":
        _check_compatible(self, other)
        out = dict(self.amplitudes)
        for n, c in other.amplitudes.items():
            out[n] = out.get(n, 0j) + c
        return StateVector(self.k, self.cutoff, out,
                           self.truncation_loss + other.truncation_loss)

    def __mul__(self, scalar: complex) -> "StateVector":
        return StateVector(self.k, self.cutoff,
                           {n: c * scalar for n, c in self.amplitudes.items()},
                           self.truncation_loss * abs(scalar) ** 2)

    __rmul__ = __mul__

    def allclose(self, other: "StateVector", atol: float = 1e-12) -> bool:
        _check_compatible(self, other)
        keys = set(self.amplitudes) | set(other.amplitudes)
        return all(abs(self[n] - other[n]) <= atol for n in keys)


def _check_compatible(a: StateVector, b: StateVector) -> None:
    if (a.k, a.cutoff) != (b.k, b.cutoff):
        raise ArityError(f"incompatible spaces: k={a.k}/D={a.cutoff} vs k={b.k}/D={b.cutoff}")


# -- state preparation -------------------------------------------------------

@dataclass(frozen=True)
class Explicit:
    k: int
    cutoff: int
    amplitudes: tuple[tuple[Occupations, complex], ...]


@dataclass(frozen=True)
class UniformBox:
    k: int
    cutoff: int


@dataclass(frozen=True)
class Coherent:
    k: int
    cutoff: int
    alpha: tuple[complex, ...]


@dataclass(frozen=True)
class RandomGaussian:
    k: int
    cutoff: int
    seed: int


StateSpec = Union[Explicit, UniformBox, Coherent, RandomGaussian]


def make_state(spec: StateSpec) -> StateVector:
    """Build the normalized state described by ``spec``."""
    if spec.cutoff < 1 or spec.k < 0:
        raise StateError("need k >= 0 and cutoff >= 1")
    if isinstance(spec, Explicit):
        if not spec.amplitudes:
            raise StateError("explicit state has no amplitudes")
        amps: dict[Occupations, complex] = {}
        for n, c in spec.amplitudes:
            n = tuple(n)
            amps[n] = amps.get(n, 0j) + complex(c)
        state = StateVector(spec.k, spec.cutoff, amps)
        if not state.amplitudes:
            raise StateError("explicit amplitudes are all zero")
        return state.normalize()
    if isinstance(spec, UniformBox):
        c = 1 / math.sqrt(spec.cutoff**spec.k)
        return StateVector(spec.k, spec.cutoff,
                           {n: c for n in box(spec.k, spec.cutoff)})
    if isinstance(spec, Coherent):
        if len(spec.alpha) != spec.k:
            raise ArityError(f"need {spec.k} coherent amplitudes, got {len(spec.alpha)}")
        # alpha**n / sqrt(n!) built incrementally per mode
        factors = []
        for alpha in spec.alpha:
            row = [1 + 0j]
            for n in range(1, spec.cutoff):
                row.append(row[-1] * alpha / math.sqrt(n))
            factors.append(row)
        amps = {n: math.prod((factors[j][nj] for j, nj in enumerate(n)), start=1 + 0j)
                for n in box(spec.k, spec.cutoff)}
        state = StateVector(spec.k, spec.cutoff, amps)
        if not state.amplitudes:
            raise StateError("coherent state vanishes on the truncated box")
        return state.normalize()
    if isinstance(spec, RandomGaussian):
        rng = np.random.default_rng(spec.seed)
        dim = spec.cutoff**spec.k
        draws = rng.standard_normal((dim, 2))
        vec = (draws[:, 0] + 1j * draws[:, 1]) / math.sqrt(2)
        return StateVector.from_array(vec, spec.k, spec.cutoff).normalize()
    raise StateError(f"unknown state spec {spec!r}")


def state_spec_from_json(doc: Mapping) -> StateSpec:
    """Decode the StateSpec JSON object used by the command line."""
    try:
        kind = doc["kind"]
        k = int(doc["k"])
        cutoff = int(doc["cutoff"])
    except KeyError as exc:
        raise StateError(f"state spec missing field {exc.args[0]!r}") from None
    if kind == "uniform":
        return UniformBox(k, cutoff)
    if kind == "coherent":
        return Coherent(k, cutoff, tuple(complex(re, im) for re, im in doc["alpha"]))
    if kind == "random":
        return RandomGaussian(k, cutoff, int(doc.get("seed", 0)))
    if kind == "explicit":
        amps = tuple(
            (tuple(int(x) for x in a["n"]), complex(a.get("re", 0.0), a.get("im", 0.0)))
            for a in doc["amplitudes"]
        )
        return Explicit(k, cutoff, amps)
    raise StateError(f"unknown state kind {kind!r}")


def state_spec_to_json(spec: StateSpec) -> dict:
    doc: dict = {"k": spec.k, "cutoff": spec.cutoff}
    if isinstance(spec, UniformBox):
        doc["kind"] = "uniform"
    elif isinstance(spec, Coherent):
        doc["kind"] = "coherent"
        doc["alpha"] = [[complex(a).real, complex(a).imag] for a in spec.alpha]
    elif isinstance(spec, RandomGaussian):
        doc["kind"] = "random"
        doc["seed"] = spec.seed
    else:
        doc["kind"] = "explicit"
        doc["amplitudes"] = [
            {"n": list(n), "re": complex(c).real, "im": complex(c).imag}
            for n, c in spec.amplitudes
        ]
    return doc


def load_state_spec(path) -> StateSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StateError(f"{path}: invalid JSON ({exc})") from None
    return state_spec_from_json(doc)


# -- ladder operators --------------------------------------------------------

@dataclass(frozen=True)
class Ladder:
    """``a_j`` (``dagger=False``) or ``a_j^dagger``; ``mode`` counts from 1."""

    mode: int
    dagger: bool = False

    def __str__(self) -> str:
        return f"a{self.mode}" + ("+" if self.dagger else "")


def _apply_factor(op: Ladder, amps: Mapping[Occupations, complex], cutoff: int
                  ) -> tuple[dict[Occupations, complex], float]:
    j = op.mode - 1
    out: dict[Occupations, complex] = {}
    lost = 0.0
    for n, c in amps.items():
        nj = n[j]
        if op.dagger:
            new = c * math.sqrt(nj + 1)
            if nj + 1 >= cutoff:
                lost += abs(new) ** 2
                continue
            target = n[:j] + (nj + 1,) + n[j + 1:]
        else:
            if nj == 0:
                continue
            new = c * math.sqrt(nj)
            target = n[:j] + (nj - 1,) + n[j + 1:]
        out[target] = out.get(target, 0j) + new
    return out, lost


def apply_ladder(op: Ladder, state: StateVector) -> StateVector:
    """Apply ``a_j`` or ``a_j^dagger`` without renormalizing.

    Components pushed to occupation ``cutoff`` are dropped and their squared
    norm is added to ``truncation_loss``.
    """
    if not 1 <= op.mode <= state.k:
        raise ArityError(f"mode {op.mode} outside 1..{state.k}")
    amps, lost = _apply_factor(op, state.amplitudes, state.cutoff)
    return StateVector(state.k, state.cutoff, amps, state.truncation_loss + lost)


# -- general observables -----------------------------------------------------

@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, (Rational, float)):
            return cls(Fraction(value))
        raise TypeError(f"cannot use {value!r} as an exact coefficient")

    def __add__(self, other):
        if isinstance(other, GeneralObservable):
            return NotImplemented
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, GeneralObservable):
            return NotImplemented
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re or self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


I = GaussianRational(0, 1)

Monomial = tuple[GaussianRational, tuple[Ladder, ...]]


@dataclass(frozen=True)
class GeneralObservable:
    """Noncommutative polynomial in ``a_j`` and ``a_j^dagger``.

    Each monomial is ``(coefficient, factors)`` with factors in written
    order; the rightmost factor acts first. Build observables with
    :func:`annihilate`, :func:`create`, ``+``, ``*`` and scalars::

        N = create(1) * annihilate(1)
        H = N + Fraction(1, 2)
    """

    k: int
    monomials: tuple[Monomial, ...] = ()

    def __post_init__(self):
        merged: dict[tuple[Ladder, ...], GaussianRational] = {}
        for coeff, factors in self.monomials:
            factors = tuple(factors)
            for f in factors:
                if not 1 <= f.mode <= self.k:
                    raise ArityError(f"factor {f} outside modes 1..{self.k}")
            merged[factors] = merged.get(factors, GaussianRational()) + coeff
        object.__setattr__(
            self, "monomials",
            tuple((c, f) for f, c in merged.items() if c),
        )

    @property
    def degree(self) -> int:
        return max((len(f) for _, f in self.monomials), default=0)

    def _lift(self, other) -> "GeneralObservable":
        if isinstance(other, GeneralObservable):
            return other
        return GeneralObservable(self.k, ((GaussianRational.coerce(other), ()),))

    def _join(self, other: "GeneralObservable") -> int:
        return max(self.k, other.k)

    def __add__(self, other) -> "GeneralObservable":
        other = self._lift(other)
        return GeneralObservable(self._join(other), self.monomials + other.monomials)

    __radd__ = __add__

    def __neg__(self) -> "GeneralObservable":
        return self * -1

    def __sub__(self, other) -> "GeneralObservable":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "GeneralObservable":
        return self._lift(other) - self

    def __mul__(self, other) -> "GeneralObservable":
        other = self._lift(other)
        return GeneralObservable(self._join(other), tuple(
            (c1 * c2, f1 + f2)
            for c1, f1 in self.monomials for c2, f2 in other.monomials
        ))

    def __rmul__(self, other) -> "GeneralObservable":
        return self._lift(other) * self

    def __pow__(self, n: int) -> "GeneralObservable":
        out = self._lift(1)
        for _ in range(n):
            out = out * self
        return out

    def adjoint(self) -> "GeneralObservable":
        return GeneralObservable(self.k, tuple(
            (c.conjugate(), tuple(Ladder(f.mode, not f.dagger) for f in reversed(fs)))
            for c, fs in self.monomials
        ))

    def with_arity(self, k: int) -> "GeneralObservable":
        return GeneralObservable(max(k, self.k), self.monomials)

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        return " + ".join(
            " ".join([str(c)] + [str(f) for f in fs]) for c, fs in self.monomials
        )


def annihilate(mode: int, k: int | None = None) -> GeneralObservable:
    return GeneralObservable(k or mode, ((GaussianRational(1), (Ladder(mode),)),))


def create(mode: int, k: int | None = None) -> GeneralObservable:
    return GeneralObservable(k or mode, ((GaussianRational(1), (Ladder(mode, True),)),))


def number(mode: int, k: int | None = None) -> GeneralObservable:
    return create(mode, k) * annihilate(mode, k)


def diagonal_observable(poly: NonnegPolynomial) -> GeneralObservable:
    """``F(N_1, ..., N_k)`` as a ladder polynomial."""
    k = poly.k
    out = GeneralObservable(k)
    for exps, c in poly.terms.items():
        term = GeneralObservable(k, ((GaussianRational(c), ()),))
        for j, e in enumerate(exps):
            term = term * number(j + 1, k) ** e
        out = out + term
    return out


def apply_observable(obs: GeneralObservable, state: StateVector) -> StateVector:
    """Linear action of ``obs`` on ``state`` (not renormalized).

    Factors are applied right to left, truncating at the cutoff after each
    one; ``truncation_loss`` accumulates the discarded squared norm weighted
    by ``|coefficient|**2``.
    """
    if obs.k > state.k:
        raise ArityError(f"observable acts on {obs.k} modes, state has {state.k}")
    total: dict[Occupations, complex] = {}
    lost_total = 0.0
    for coeff, factors in obs.monomials:
        amps = state.amplitudes
        lost = 0.0
        for f in reversed(factors):
            amps, step = _apply_factor(f, amps, state.cutoff)
            lost += step
        c = complex(coeff)
        lost_total += abs(c) ** 2 * lost
        for n, a in amps.items():
            total[n] = total.get(n, 0j) + c * a
    return StateVector(state.k, state.cutoff, total,
                       state.truncation_loss + lost_total)


def matrix_of(obs: GeneralObservable, k: int, cutoff: int) -> np.ndarray:
    """Dense truncated matrix ``M[r, c] = <r|obs|c>`` in colexicographic order."""
    if obs.k > k:
        raise ArityError(f"observable acts on {obs.k} modes, space has {k}")
    dim = cutoff**k
    mat = np.zeros((dim, dim), dtype=complex)
    for col, n in enumerate(box(k, cutoff)):
        image = apply_observable(obs, StateVector.basis(n, cutoff))
        for m, amp in image.amplitudes.items():
            mat[basis_index(m, cutoff), col] = amp
    return mat


def interior_indices(k: int, cutoff: int, margin: int) -> list[int]:
    """Indices of basis states with every occupation ``< cutoff - margin``."""
    edge = cutoff - margin
    return [basis_index(n, cutoff) for n in box(k, cutoff) if all(x < edge for x in n)]


def is_hermitian(obs: GeneralObservable, k: int, cutoff: int, tol: float = 1e-9) -> bool:
    """Hermiticity of the truncated matrix, away from the cutoff edge."""
    mat = matrix_of(obs, k, cutoff)
    idx = interior_indices(k, cutoff, obs.degree)
    block = mat[np.ix_(idx, idx)]
    if block.size == 0:
        return True
    return bool(np.max(np.abs(block - block.conj().T)) <= tol)


def commutator(x: GeneralObservable, y: GeneralObservable) -> GeneralObservable:
    return x * y - y * x
