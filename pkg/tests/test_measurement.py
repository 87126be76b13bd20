import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockprove.errors import ArityError, StateError
from fockprove.fock import (Explicit, RandomGaussian, StateVector, UniformBox,
                            diagonal_observable, make_state, matrix_of)
from fockprove.jacobi import eigen_spectrum
from fockprove.measurement import (MeasurementOutcome, Partition,
                                   extract_proof, harmonic_energies, measure,
                                   measure_numbers, outcome_distribution,
                                   spectrum_diagonal, truncation_threshold)
from fockprove.polynomial import (NonnegPolynomial, box, enumerate_range,
                                  evaluate, parse_polynomial)

X = parse_polynomial("x1")
X2 = parse_polynomial("x1^2")
XY = parse_polynomial("x1 + x2")
LIN = parse_polynomial("2*x1 + 3*x2 + 1")
ket = StateVector.basis


def superpose(k, cutoff, *ns):
    return make_state(Explicit(k, cutoff, tuple((n, 1) for n in ns)))


@pytest.mark.parametrize("poly, state, expected", [
    (X, make_state(UniformBox(1, 4)), {0: .25, 1: .25, 2: .25, 3: .25}),
    (X2, make_state(UniformBox(1, 4)), {0: .25, 1: .25, 4: .25, 9: .25}),
    (XY, make_state(UniformBox(2, 2)), {0: .25, 1: .5, 2: .25}),
])
def test_outcome_distribution(poly, state, expected):
    dist = outcome_distribution(poly, state)
    assert list(dist) == sorted(expected)
    assert dist == pytest.approx(expected)


def test_distribution_errors():
    with pytest.raises(ArityError):
        outcome_distribution(XY, ket((0,), 3))
    with pytest.raises(StateError):
        outcome_distribution(X, 2 * ket((0,), 3))


def test_measure_eigenstate():
    rng = random.Random(0)
    for _ in range(20):
        out = measure(X, ket((2,), 4), rng)
        assert out.m == 2 and out.probability == 1
        assert out.collapsed.allclose(ket((2,), 4))


def test_measure_two_point():
    state = superpose(1, 4, (0,), (3,))
    seen = set()
    rng = random.Random(1)
    for _ in range(200):
        out = measure(X2, state, rng)
        assert out.probability == pytest.approx(0.5)
        expected = {0: (0,), 9: (3,)}[out.m]
        assert out.collapsed.allclose(ket(expected, 4))
        seen.add(out.m)
    assert seen == {0, 9}


def test_collapse_renormalizes_degenerate_space():
    part = Partition(XY, make_state(UniformBox(2, 2)))
    collapsed = part.collapse(1)
    h = 1 / math.sqrt(2)
    assert collapsed.allclose(StateVector(2, 2, {(0, 1): h, (1, 0): h}))
    assert collapsed.is_normalized()


def test_inverse_cdf_is_ascending():
    class Fixed:
        def __init__(self, u):
            self.u = u

        def random(self):
            return self.u

    state = make_state(UniformBox(1, 4))
    assert [measure(X, state, Fixed(u)).m for u in (0, .24, .25, .5, .74, .99)] == [0, 0, 1, 2, 2, 3]


def test_measure_numbers():
    assert measure_numbers(ket((1, 2), 3), random.Random(0)) == ((1, 2), 1.0)
    state = superpose(2, 2, (0, 1), (1, 0))
    rng = random.Random(2)
    outs = {measure_numbers(state, rng) for _ in range(100)}
    assert {n for n, _ in outs} == {(0, 1), (1, 0)}
    assert all(p == pytest.approx(0.5) for _, p in outs)


def test_measure_numbers_uniform_weights():
    rng = random.Random(3)
    counts = {}
    for _ in range(4000):
        n, p = measure_numbers(make_state(UniformBox(1, 4)), rng)
        assert p == pytest.approx(0.25)
        counts[n] = counts.get(n, 0) + 1
    assert sorted(counts) == [(0,), (1,), (2,), (3,)]


def test_measure_numbers_rejects_unnormalized():
    with pytest.raises(StateError):
        measure_numbers(StateVector(1, 2, {(0,): 1, (1,): 1}), random.Random(0))


def test_extract_proof_examples():
    rng = random.Random(0)
    out = MeasurementOutcome(9, ket((3,), 4), 0.5)
    assert extract_proof(X2, out, rng) == (3,)
    part = Partition(XY, make_state(UniformBox(2, 2)))
    for _ in range(50):
        proof = extract_proof(XY, MeasurementOutcome(1, part.collapse(1), .5), rng)
        assert proof in {(0, 1), (1, 0)}
    const = NonnegPolynomial(1, {(0,): 4})
    state = make_state(UniformBox(1, 3))
    for _ in range(10):
        out = measure(const, state, rng)
        assert out.m == 4 and evaluate(const, extract_proof(const, out, rng)) == 4


def test_extract_proof_detects_inconsistency():
    with pytest.raises(AssertionError):
        extract_proof(X2, MeasurementOutcome(4, ket((3,), 4), 1.0), random.Random(0))


@pytest.mark.parametrize("poly, k, cutoff, expected", [
    (LIN, 2, 3, [1, 3, 4, 5, 6, 7, 8, 9, 11]),
    (NonnegPolynomial(2, {(0, 0): 5}), 2, 3, [5]),
    (X, 1, 5, [0, 1, 2, 3, 4]),
])
def test_spectrum_diagonal(poly, k, cutoff, expected):
    assert spectrum_diagonal(poly, k, cutoff) == expected


def test_truncation_threshold():
    assert truncation_threshold(LIN, 3) == 7
    assert truncation_threshold(parse_polynomial("x1^2 + 2"), 8) == 66
    assert truncation_threshold(NonnegPolynomial(0, {(): 3}), 8) is None


@pytest.mark.parametrize("scales, cutoff, expected", [
    ([1], 3, [0.5, 1.5, 2.5]),
    ([1, 1], 2, [1, 2, 3]),
    ([2], 2, [1, 3]),
    ([1, 2], 2, [1.5, 2.5, 3.5, 4.5]),
])
def test_harmonic_energies(scales, cutoff, expected):
    assert harmonic_energies(scales, cutoff) == pytest.approx(expected)


def test_harmonic_energies_reject_bad_scales():
    with pytest.raises(ValueError):
        harmonic_energies([1, 0], 3)
    with pytest.raises(ValueError):
        harmonic_energies([], 3)


def _random_poly(rng, k):
    terms = {tuple(rng.randint(0, 2) for _ in range(k)): rng.randint(1, 3)
             for _ in range(rng.randint(1, 3))}
    return NonnegPolynomial(k, terms)


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(1, 2), st.integers(1, 6))
def test_spectral_agreement(seed, k, cutoff):
    poly = _random_poly(random.Random(seed), k)
    eigs = eigen_spectrum(matrix_of(diagonal_observable(poly), k, cutoff))
    distinct = []
    for e in eigs:
        if not distinct or e - distinct[-1] > 0.5:
            distinct.append(e)
    expected = spectrum_diagonal(poly, k, cutoff)
    assert len(distinct) == len(expected)
    assert all(abs(a - b) <= 1e-8 for a, b in zip(distinct, expected))


@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 5))
def test_representation_at_desk_scale(seed, k, cutoff):
    poly = _random_poly(random.Random(seed), k)
    spectrum = spectrum_diagonal(poly, k, cutoff)
    values = enumerate_range(poly, max(spectrum))
    assert set(spectrum) <= set(values)
    t = truncation_threshold(poly, cutoff)
    assert [v for v in spectrum if v < t] == [v for v in values if v < t]


@given(st.integers(0, 10**6), st.integers(1, 2), st.integers(1, 4))
def test_born_normalization_and_collapse_support(seed, k, cutoff):
    poly = _random_poly(random.Random(seed), k)
    state = make_state(RandomGaussian(k, cutoff, seed))
    dist = outcome_distribution(poly, state)
    assert abs(math.fsum(dist.values()) - 1) <= 1e-9
    box_max = evaluate(poly, (cutoff - 1,) * k)
    assert set(dist) <= set(enumerate_range(poly, box_max))
    rng = np.random.default_rng(seed)
    out = measure(poly, state, rng)
    assert out.collapsed.is_normalized()
    assert all(evaluate(poly, n) == out.m for n in out.collapsed.amplitudes)


def test_measure_is_reproducible():
    state = make_state(RandomGaussian(2, 4, 9))
    a = [measure(LIN, state, np.random.default_rng(5)).m for _ in range(3)]
    b = [measure(LIN, state, np.random.default_rng(5)).m for _ in range(3)]
    assert a == b
    rng1, rng2 = np.random.default_rng(7), np.random.default_rng(7)
    assert [measure(LIN, state, rng1) for _ in range(50)] == [measure(LIN, state, rng2) for _ in range(50)]


def test_constructive_two_step_route_distribution():
    # measuring N_1..N_k and evaluating F gives the same law as measuring F(N)
    state = make_state(RandomGaussian(2, 3, 4))
    rng = np.random.default_rng(0)
    trials = 20000
    direct, two_step = {}, {}
    for _ in range(trials):
        m = measure(LIN, state, rng).m
        direct[m] = direct.get(m, 0) + 1
        n, _ = measure_numbers(state, rng)
        v = evaluate(LIN, n)
        two_step[v] = two_step.get(v, 0) + 1
    dist = outcome_distribution(LIN, state)
    keys = set(direct) | set(two_step)
    tv = 0.5 * sum(abs(direct.get(m, 0) - two_step.get(m, 0)) / trials for m in keys)
    assert tv < 0.03
    assert set(two_step) <= set(dist)
