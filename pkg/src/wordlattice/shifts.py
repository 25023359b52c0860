"""Shifts of finite type: language counting and topological entropy.

A shift of finite type is given by an alphabet and a finite set of forbidden
factors. The complexity function |B_n| counts admissible words of length n,
and the entropy

    h = lim log2 |B_n| / n

is estimated two ways: the finite-n slope log2|B_n|/n (an upper bound, by
subadditivity) and the log of the spectral radius of the transfer matrix on
(m-1)-blocks, which is the limit itself.

Logs are base 2 throughout: entropy is reported in bits per symbol.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .words import Alphabet, Word

POWER_ITERATION_CAP = 10_000
POWER_ITERATION_TOL = 1e-10


@dataclass(frozen=True)
class ShiftOfFiniteType:
    alphabet: Alphabet
    forbidden: frozenset  # of Word

    def __post_init__(self):
        if not isinstance(self.forbidden, frozenset):
            object.__setattr__(self, "forbidden", frozenset(self.forbidden))
        for f in self.forbidden:
            if len(f) == 0:
                raise ValueError("forbidden words must be nonempty")
            if f.alphabet != self.alphabet:
                raise ValueError("forbidden word over a different alphabet")

    @property
    def memory(self) -> int:
        """Longest forbidden-word length; 0 means the full shift."""
        return max((len(f) for f in self.forbidden), default=0)


def full_shift(alphabet: Alphabet) -> ShiftOfFiniteType:
    return ShiftOfFiniteType(alphabet, frozenset())


@dataclass(frozen=True)
class EntropyEstimate:
    value: float                  # bits per symbol
    method: str                   # "finite-slope" | "transfer-matrix"
    n_used: int
    error_bound: float | None
    empty_language: bool = False


def contains(sft: ShiftOfFiniteType, w: Word) -> bool:
    """True iff no forbidden word occurs as a factor of w."""
    if w.alphabet != sft.alphabet:
        raise ValueError("word over a different alphabet")
    s = w.indices
    for f in sft.forbidden:
        fi = f.indices
        L = len(fi)
        if L <= len(s):
            for i in range(len(s) - L + 1):
                if s[i:i + L] == fi:
                    return False
    return True


def contains_circular(sft: ShiftOfFiniteType, w: Word) -> bool:
    """Factor check on the circular reading of w (wraps across the seam)."""
    if w.alphabet != sft.alphabet:
        raise ValueError("word over a different alphabet")
    m = sft.memory
    if m == 0 or len(w) == 0:
        return True
    doubled = Word(sft.alphabet, w.indices + w.indices[: m - 1])
    return contains(sft, doubled)


def _forbidden_suffix(sft: ShiftOfFiniteType, tail: tuple) -> bool:
    """Does some forbidden word end exactly at the last position of `tail`?"""
    for f in sft.forbidden:
        fi = f.indices
        if len(fi) <= len(tail) and tail[-len(fi):] == fi:
            return True
    return False


def count_words(sft: ShiftOfFiniteType, n: int) -> int:
    """|B_n|: admissible words of length n, exact integer count.

    Dynamic program over the last min(t, m-1) symbols; states that would
    complete a forbidden factor are pruned as each symbol is appended.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k = sft.alphabet.size
    m = sft.memory
    if m == 0:
        return k**n
    window = max(m - 1, 0)
    states = {(): 1}
    for _t in range(n):
        nxt: dict = {}
        for suffix, cnt in states.items():
            for a in range(k):
                tail = suffix + (a,)
                if _forbidden_suffix(sft, tail):
                    continue
                key = tail[-window:] if window else ()
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
        if not states:
            return 0
    return sum(states.values())


def _transfer_matrix(sft: ShiftOfFiniteType):
    """Transition matrix on admissible (m-1)-blocks, forbidden moves removed."""
    k = sft.alphabet.size
    m = sft.memory
    L = max(m - 1, 0)
    blocks = [
        idx for idx in itertools.product(range(k), repeat=L)
        if contains(sft, Word(sft.alphabet, idx))
    ]
    index = {b: i for i, b in enumerate(blocks)}
    size = len(blocks)
    A = np.zeros((size, size), dtype=float)
    for b in blocks:
        for a in range(k):
            tail = b + (a,)
            if _forbidden_suffix(sft, tail):
                continue
            target = tail[-L:] if L else ()
            if target in index:
                A[index[b], index[target]] += 1.0
    return A, blocks


def entropy_transfer_matrix(sft: ShiftOfFiniteType,
                            tol: float = POWER_ITERATION_TOL,
                            max_iter: int = POWER_ITERATION_CAP) -> EntropyEstimate:
    """Entropy as log2 of the transfer-matrix spectral radius.

    Power iteration on A + I (the shift keeps periodic block graphs from
    oscillating) with a deterministic all-ones start vector.
    """
    A, blocks = _transfer_matrix(sft)
    size = len(blocks)
    if size == 0:
        return EntropyEstimate(0.0, "transfer-matrix", 0, None, empty_language=True)
    B = A + np.eye(size)
    v = np.ones(size) / math.sqrt(size)
    lam = 1.0
    for _ in range(max_iter):
        w = B @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return EntropyEstimate(0.0, "transfer-matrix", size, None,
                                   empty_language=True)
        lam = float(v @ w)  # Rayleigh quotient, ||v|| = 1
        residual = float(np.linalg.norm(w - lam * v))
        v = w / norm
        if residual <= tol * max(lam, 1.0):
            break
    rho = lam - 1.0
    residual = float(np.linalg.norm(A @ v - rho * v))
    if rho < 0.5:
        # integer transition counts: spectral radius is 0 (no cycles,
        # language eventually dies) or >= 1
        return EntropyEstimate(0.0, "transfer-matrix", size, residual,
                               empty_language=True)
    value = max(0.0, math.log2(rho))
    error = residual / (rho * math.log(2))
    return EntropyEstimate(value, "transfer-matrix", size, error)


def entropy_finite_slope(sft: ShiftOfFiniteType, n_max: int) -> EntropyEstimate:
    """log2|B_{n_max}| / n_max; an upper bound on the entropy for every SFT."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    c = count_words(sft, n_max)
    if c == 0:
        return EntropyEstimate(0.0, "finite-slope", n_max, None, empty_language=True)
    return EntropyEstimate(math.log2(c) / n_max, "finite-slope", n_max, None)


def shift_apply(x, steps: int):
    """Cyclic left shift by `steps` on a finite circular buffer.

    Accepts a Word, str, or any sequence; returns the same kind of value.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    n = len(x)
    if n == 0:
        raise ValueError("buffer must be nonempty")
    r = steps % n
    if isinstance(x, Word):
        return x.rotate(r)
    if isinstance(x, str):
        return x[r:] + x[:r]
    seq = tuple(x)
    return seq[r:] + seq[:r]
