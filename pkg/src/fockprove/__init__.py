"""Spectral representation of unary sets on a truncated Fock space.

Sets built from singletons by sum and Kleene star are ranges of linear
polynomials; the range of any nonnegative-coefficient polynomial ``F`` is the
spectrum of ``F(N_1, ..., N_k)``. Measuring that observable yields a value of
``F`` and, after collapse, a tuple ``n`` with ``F(n)`` equal to it.
"""
from .errors import (ArityError, ConsistencyError, ConvergenceError,
                     FockProveError, ParseError, StateError)
from .fock import (Coherent, Explicit, GaussianRational, GeneralObservable, I,
                   Ladder, RandomGaussian, StateVector, UniformBox, annihilate,
                   apply_ladder, apply_observable, basis_index, basis_states,
                   commutator, create, diagonal_observable, is_hermitian,
                   load_state_spec, make_state, matrix_of, number)
from .jacobi import eigen_spectrum
from .measurement import (MeasurementOutcome, extract_proof, harmonic_energies,
                          measure, measure_numbers, outcome_distribution,
                          spectrum_diagonal, truncation_threshold)
from .polynomial import (NonnegPolynomial, enumerate_range, evaluate,
                         from_linear, has_unbounded_preimages, parse_polynomial,
                         preimages)
from .prover import (FormalSystem, MeasurementRecord, TrialReport,
                     coverage_check, prove_once, run_trials, trial_rng)
from .unary import (LinearForm, Singleton, Star, Sum, canonicalize,
                    enumerate_set, frobenius_gap, member_with_witness,
                    parse_set_expr)

__version__ = "0.1.0"
