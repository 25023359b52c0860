"""Combinatorics on words, symbolic dynamics, and ring-embedded randomness."""

from .automata import (BlockCode, Dfa, cerny_automaton, edit_distance,
                       error_capability, hamming_distance, is_synchronizing_word,
                       min_distance, shortest_sync_word)
from .errors import BudgetExceededError, ParseError
from .lattice import (DeltaParams, LatticeSymbolicSystem, NtruParams,
                      RingElement, ScaledLatticePoint, SymbolEmbedding,
                      check_bounded_distance, d_sl, default_system, delta_bound,
                      deficiency_bound, mixing_embedding, phi_ntru, phi_weighted,
                      ring_add, ring_mul, system_step, ternary_sft,
                      unit_embedding, validate_parameters)
from .prng import (PrfKey, PrgState, TestReport, block_frequency_test,
                   distinguisher_harness, extract_m, monobit_test, prf_eval,
                   prg_next, runs_test, seed_to_state)
from .shifts import (EntropyEstimate, ShiftOfFiniteType, contains,
                     contains_circular, count_words, entropy_finite_slope,
                     entropy_transfer_matrix, full_shift, shift_apply)
from .words import (Alphabet, DeBruijnGraph, LyndonFactorization, Word,
                    count_lyndon, cyclic_factors, de_bruijn_graph,
                    de_bruijn_sequence, duval_factorize, is_lyndon,
                    lyndon_words_dividing, mobius)

__version__ = "0.1.0"
