"""Born-rule measurement of ``F(N_1, ..., N_k)`` and number operators.

Generators are any object with a ``random()`` method returning a float in
``[0, 1)`` (``numpy.random.Generator`` or ``random.Random``). Sampling is by
inverse CDF over outcomes in ascending order, so results depend only on the
seed.
"""
from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ArityError, ConsistencyError, StateError
from .fock import StateVector
from .polynomial import NonnegPolynomial, box, evaluate

NORMALIZATION_TOL = 1e-6


@dataclass(frozen=True)
class MeasurementOutcome:
    m: int
    collapsed: StateVector
    probability: float
    seed: Optional[int] = None


def _check_normalized(state: StateVector) -> None:
    norm2 = state.norm_squared()
    if abs(norm2 - 1) > NORMALIZATION_TOL:
        raise StateError(f"state is not normalized (norm^2 = {norm2:.12g})")


def _check_arity(poly: NonnegPolynomial, state: StateVector) -> None:
    if poly.k != state.k:
        raise ArityError(f"polynomial has {poly.k} variables, state has {state.k} modes")


def _inverse_cdf(cumulative: Sequence[float], u: float) -> int:
    # scale by the total so rounding in the last partial sum never overflows
    i = bisect.bisect_right(cumulative, u * cumulative[-1])
    return min(i, len(cumulative) - 1)


class Partition:
    """Eigenspace decomposition of a state under ``F(N)``.

    Groups the support of ``state`` by ``F`` value once so repeated
    measurements of the same state are cheap.
    """

    def __init__(self, poly: NonnegPolynomial, state: StateVector):
        _check_arity(poly, state)
        _check_normalized(state)
        self.poly = poly
        self.state = state
        groups: dict[int, list] = {}
        for n, c in state.amplitudes.items():
            groups.setdefault(evaluate(poly, n), []).append((n, c))
        self.outcomes = sorted(groups)
        self._groups = groups
        self.probabilities = [
            math.fsum(abs(c) ** 2 for _, c in groups[m]) for m in self.outcomes
        ]
        self._cumulative = list(itertools.accumulate(self.probabilities))
        self._collapsed: dict[int, StateVector] = {}

    def distribution(self) -> dict[int, float]:
        return dict(zip(self.outcomes, self.probabilities))

    def collapse(self, m: int) -> StateVector:
        if m not in self._collapsed:
            i = self.outcomes.index(m)
            scale = 1 / math.sqrt(self.probabilities[i])
            self._collapsed[m] = StateVector(
                self.state.k, self.state.cutoff,
                {n: c * scale for n, c in self._groups[m]},
            )
        return self._collapsed[m]

    def sample(self, rng, seed: Optional[int] = None) -> MeasurementOutcome:
        i = _inverse_cdf(self._cumulative, rng.random())
        m = self.outcomes[i]
        return MeasurementOutcome(m, self.collapse(m), self.probabilities[i], seed)


def outcome_distribution(poly: NonnegPolynomial, state: StateVector) -> dict[int, float]:
    """``p(m)``: summed ``|c_n|**2`` over basis states with ``F(n) == m``.

    Outcomes with zero probability are omitted; keys are ascending.
    """
    return Partition(poly, state).distribution()


def measure(poly: NonnegPolynomial, state: StateVector, rng,
            seed: Optional[int] = None) -> MeasurementOutcome:
    """Measure ``F(N)`` and collapse onto the observed eigenspace.

    ``seed`` is recorded on the outcome for provenance only.
    """
    return Partition(poly, state).sample(rng, seed)


def measure_numbers(state: StateVector, rng) -> tuple[tuple[int, ...], float]:
    """Simultaneously measure ``N_1, ..., N_k``; returns ``(n, |<n|state>|**2)``."""
    _check_normalized(state)
    # amplitudes are stored in colexicographic order
    support = list(state.amplitudes.items())
    weights = [abs(c) ** 2 for _, c in support]
    i = _inverse_cdf(list(itertools.accumulate(weights)), rng.random())
    return support[i][0], weights[i]


def extract_proof(poly: NonnegPolynomial, outcome: MeasurementOutcome, rng) -> tuple[int, ...]:
    """Read a proof off the collapsed state by measuring the number operators."""
    proof, _ = measure_numbers(outcome.collapsed, rng)
    value = evaluate(poly, proof)
    if value != outcome.m:
        raise ConsistencyError(f"F{proof} = {value} but the measured theorem was {outcome.m}")
    return proof


def spectrum_diagonal(poly: NonnegPolynomial, k: int, cutoff: int) -> list[int]:
    """Distinct values of ``F`` on the box ``[0, cutoff)^k``, ascending.

    This is the spectrum of the truncated matrix of ``F(N_1, ..., N_k)``.
    """
    if poly.k != k:
        poly = poly.with_arity(k)
    return sorted({evaluate(poly, n) for n in box(k, cutoff)})


def truncation_threshold(poly: NonnegPolynomial, cutoff: int) -> Optional[int]:
    """``min_i F(cutoff * e_i)``; values below it only occur inside the box.

    ``None`` when ``F`` has no variables (the box is the whole space).
    """
    if poly.k == 0:
        return None
    return min(
        evaluate(poly, tuple(cutoff if j == i else 0 for j in range(poly.k)))
        for i in range(poly.k)
    )


def harmonic_energies(scales: Sequence[float], cutoff: int) -> list[float]:
    """Distinct ``sum(scale_j * (n_j + 1/2))`` over the box, ascending."""
    if not scales:
        raise ValueError("need at least one mode")
    if any(s <= 0 for s in scales):
        raise ValueError("energy scales must be positive")
    values = sorted(
        math.fsum(s * (nj + 0.5) for s, nj in zip(scales, n))
        for n in box(len(scales), cutoff)
    )
    out: list[float] = []
    for v in values:
        if not out or v - out[-1] > 1e-12 * max(1.0, abs(v)):
            out.append(v)
    return out
