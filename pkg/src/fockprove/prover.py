"""Repeated measure-then-extract rounds over a coded formal system.

A formal system is coded by a polynomial ``F``: the theorems are the values
``F(n)`` and the tuple ``n`` is the proof of ``F(n)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Union

import numpy as np

from .fock import StateSpec, StateVector, make_state
from .measurement import Partition, extract_proof
from .polynomial import NonnegPolynomial, enumerate_range, preimages


@dataclass(frozen=True)
class FormalSystem:
    F: NonnegPolynomial
    label: str = ""
    decoder: Optional[Union[Mapping[int, str], Callable[[int], str]]] = None

    def display(self, theorem: int) -> str:
        if self.decoder is None:
            return str(theorem)
        if callable(self.decoder):
            return self.decoder(theorem)
        return self.decoder.get(theorem, str(theorem))


@dataclass(frozen=True)
class MeasurementRecord:
    m: int
    proof: tuple[int, ...]
    p: float
    seed: Optional[int] = None
    trial: Optional[int] = None

    def to_json(self) -> str:
        return json.dumps({"m": self.m, "proof": list(self.proof), "p": self.p,
                           "seed": self.seed, "trial": self.trial})


@dataclass
class TrialReport:
    label: str
    seed: int
    records: list[MeasurementRecord]
    empirical: dict[int, int]
    theoretical: dict[int, float]
    total_variation: float = field(init=False)

    def __post_init__(self):
        self.total_variation = total_variation(self.empirical, self.theoretical)

    @property
    def trials(self) -> int:
        return len(self.records)

    def to_json(self, records_path: Optional[str] = None) -> dict:
        outcomes = sorted(set(self.empirical) | set(self.theoretical))
        return {
            "label": self.label,
            "trials": self.trials,
            "seed": self.seed,
            "total_variation": self.total_variation,
            "outcomes": [
                {"m": m, "p": self.theoretical.get(m, 0.0), "count": self.empirical.get(m, 0)}
                for m in outcomes
            ],
            "records_path": records_path,
        }

    def histogram_tsv(self) -> str:
        outcomes = sorted(set(self.empirical) | set(self.theoretical))
        return "".join(
            f"{m}\t{self.theoretical.get(m, 0.0)!r}\t{self.empirical.get(m, 0)}\n"
            for m in outcomes
        )


def total_variation(counts: Mapping[int, int], probs: Mapping[int, float]) -> float:
    n = sum(counts.values())
    keys = set(counts) | set(probs)
    return 0.5 * sum(abs(counts.get(m, 0) / n - probs.get(m, 0.0)) for m in keys)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial, keyed by ``(seed, trial)``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _prove(partition: Partition, rng, seed=None, trial=None) -> MeasurementRecord:
    outcome = partition.sample(rng, seed)
    proof = extract_proof(partition.poly, outcome, rng)
    return MeasurementRecord(outcome.m, proof, outcome.probability, seed, trial)


def prove_once(system: FormalSystem, state: StateVector, rng,
               seed: Optional[int] = None, trial: Optional[int] = None) -> MeasurementRecord:
    """Measure ``F(N)`` once and extract a verified proof of the outcome."""
    return _prove(Partition(system.F, state), rng, seed, trial)


def run_trials(system: FormalSystem, spec: Union[StateSpec, StateVector],
               trials: int, seed: int = 0) -> TrialReport:
    """Run ``trials`` independent rounds on fresh copies of the same state.

    Trial ``i`` draws from :func:`trial_rng` ``(seed, i)``, so a report is a
    deterministic function of its arguments.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    state = spec if isinstance(spec, StateVector) else make_state(spec)
    partition = Partition(system.F, state)
    records = [_prove(partition, trial_rng(seed, i), seed, i) for i in range(trials)]
    counts: dict[int, int] = {}
    for r in records:
        counts[r.m] = counts.get(r.m, 0) + 1
    return TrialReport(system.label, seed, records, dict(sorted(counts.items())),
                       partition.distribution())


@dataclass(frozen=True)
class Coverage:
    observed: frozenset[int]
    missing: frozenset[int]
    spurious: frozenset[int]


def coverage_check(system: FormalSystem, report: TrialReport, bound: int) -> Coverage:
    """Compare observed theorems with the range of ``F``.

    ``missing`` lists range values up to ``bound`` that the state can produce
    but were never observed; ``spurious`` lists observed values with no
    preimage at all and is empty for any correct run.
    """
    observed = frozenset(report.empirical)
    reachable = set(enumerate_range(system.F, bound)) & {
        m for m, p in report.theoretical.items() if p > 0
    }
    spurious = frozenset(m for m in observed if not preimages(system.F, m, 1))
    return Coverage(observed, frozenset(reachable - observed), spurious)
