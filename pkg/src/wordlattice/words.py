"""Lyndon words, the Chen-Fox-Lyndon factorization, and de Bruijn sequences.

A word here is a finite sequence of symbols drawn from an ordered alphabet.
All lexicographic comparisons go through the alphabet's list order (symbols
are compared by index, never by their own type's ordering), so results are
reproducible no matter what the symbols are.

The counting formula is the classic Mobius sum

    L(n, k) = (1/n) * sum_{d | n} mu(d) * k^(n/d)

and de Bruijn sequences are built the necklace way: Lyndon words with length
dividing n, concatenated in lexicographic order.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import BudgetExceededError

#: Default cap on k**n for exhaustive enumerations (overridable per call).
DEFAULT_ENUM_BUDGET = 2**20


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite alphabet; the tuple order *is* the total order."""

    symbols: tuple

    def __post_init__(self):
        if not isinstance(self.symbols, tuple):
            object.__setattr__(self, "symbols", tuple(self.symbols))
        if len(self.symbols) < 1:
            raise ValueError("alphabet must contain at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be pairwise distinct")

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise ValueError(f"symbol {symbol!r} not in alphabet") from None

    def word(self, symbols: Iterable) -> "Word":
        """Build a word from symbols (looked up in this alphabet)."""
        return Word(self, tuple(self.index(s) for s in symbols))

    def word_from_indices(self, indices: Iterable[int]) -> "Word":
        return Word(self, tuple(indices))


@functools.total_ordering
@dataclass(frozen=True)
class Word:
    """Immutable word stored as symbol indices into its alphabet."""

    alphabet: Alphabet
    indices: tuple

    def __post_init__(self):
        if not isinstance(self.indices, tuple):
            object.__setattr__(self, "indices", tuple(self.indices))
        k = self.alphabet.size
        for i in self.indices:
            if not (0 <= i < k):
                raise ValueError(f"symbol index {i} out of range for alphabet of size {k}")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator:
        return iter(self.symbols)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.alphabet, self.indices[i])
        return self.alphabet.symbols[self.indices[i]]

    @property
    def symbols(self) -> tuple:
        return tuple(self.alphabet.symbols[i] for i in self.indices)

    def __lt__(self, other: "Word") -> bool:
        self._check_same_alphabet(other)
        return self.indices < other.indices

    def _check_same_alphabet(self, other: "Word"):
        if self.alphabet != other.alphabet:
            raise ValueError("words are over different alphabets")

    def concat(self, other: "Word") -> "Word":
        self._check_same_alphabet(other)
        return Word(self.alphabet, self.indices + other.indices)

    def rotate(self, r: int) -> "Word":
        """Cyclic left rotation by r positions."""
        n = len(self.indices)
        if n == 0:
            return self
        r %= n
        return Word(self.alphabet, self.indices[r:] + self.indices[:r])

    def text(self) -> str:
        """Render symbols for display: joined when unambiguous, else spaced."""
        syms = [str(s) for s in self.symbols]
        if all(len(s) == 1 for s in syms):
            return "".join(syms)
        return " ".join(syms)


@dataclass(frozen=True)
class LyndonFactorization:
    """Nonincreasing product of Lyndon words whose concatenation is the input."""

    factors: tuple

    def __post_init__(self):
        if len(self.factors) == 0:
            raise ValueError("factorization must have at least one factor")

    def concatenation(self) -> Word:
        out = self.factors[0]
        for f in self.factors[1:]:
            out = out.concat(f)
        return out


@dataclass(frozen=True)
class DeBruijnGraph:
    """Order-n de Bruijn graph: vertices are (n-1)-words, edges n-words."""

    order: int
    alphabet: Alphabet
    vertices: tuple  # of Word
    edges: tuple     # of (Word, Word, symbol)


def mobius(d: int) -> int:
    """Mobius function: 0 on squareful integers, else (-1)^(#prime factors)."""
    if d < 1:
        raise ValueError("mobius is defined for positive integers only")
    if d == 1:
        return 1
    nfactors = 0
    p = 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return 0
            nfactors += 1
        p += 1 if p == 2 else 2
    if d > 1:
        nfactors += 1
    return -1 if nfactors % 2 else 1


def _divisors(n: int) -> list:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def count_lyndon(n: int, k: int) -> int:
    """Number of Lyndon words of length n over a k-symbol alphabet.

    Exact integer arithmetic throughout; the Mobius divisor sum is always a
    multiple of n, and we check that rather than assume it.
    """
    if n < 1 or k < 1:
        raise ValueError("count_lyndon requires n >= 1 and k >= 1")
    total = sum(mobius(d) * k ** (n // d) for d in _divisors(n))
    if total % n != 0:
        raise ArithmeticError(f"Mobius sum {total} not divisible by n={n}")
    return total // n


def is_lyndon(w: Word) -> bool:
    """True iff w is strictly smaller than every proper cyclic rotation."""
    n = len(w)
    if n == 0:
        raise ValueError("the empty word is not eligible")
    s = w.indices
    return all(s < s[r:] + s[:r] for r in range(1, n))


def duval_factorize(w: Word) -> LyndonFactorization:
    """Chen-Fox-Lyndon factorization via Duval's algorithm, O(|w|)."""
    n = len(w)
    if n == 0:
        raise ValueError("cannot factorize the empty word")
    s = w.indices
    factors = []
    i = 0
    while i < n:
        j, k = i + 1, i
        while j < n and s[k] <= s[j]:
            k = i if s[k] < s[j] else k + 1
            j += 1
        while i <= k:
            factors.append(Word(w.alphabet, s[i:i + j - k]))
            i += j - k
    return LyndonFactorization(tuple(factors))


def _check_budget(k: int, n: int, budget: int):
    if k**n > budget:
        raise BudgetExceededError(
            f"k^n = {k}^{n} exceeds enumeration budget {budget}"
        )


def lyndon_words_dividing(n: int, alphabet: Alphabet,
                          budget: int = DEFAULT_ENUM_BUDGET) -> list:
    """All Lyndon words with length dividing n, in lexicographic order.

    Uses the standard necklace successor recurrence (amortized linear in the
    output), not filter-everything.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k = alphabet.size
    _check_budget(k, n, budget)
    out = []
    a = [0] * (n + 1)

    def gen(t: int, p: int):
        if t > n:
            if n % p == 0:
                out.append(Word(alphabet, tuple(a[1:p + 1])))
            return
        a[t] = a[t - p]
        gen(t + 1, p)
        for j in range(a[t - p] + 1, k):
            a[t] = j
            gen(t + 1, t)

    gen(1, 1)
    return out


def de_bruijn_sequence(n: int, alphabet: Alphabet,
                       budget: int = DEFAULT_ENUM_BUDGET) -> Word:
    """Cyclic sequence of length k^n containing every n-word exactly once.

    Concatenates lyndon_words_dividing(n) in order.
    """
    parts = lyndon_words_dividing(n, alphabet, budget=budget)
    indices = tuple(itertools.chain.from_iterable(w.indices for w in parts))
    return Word(alphabet, indices)


def de_bruijn_graph(n: int, alphabet: Alphabet,
                    budget: int = DEFAULT_ENUM_BUDGET) -> DeBruijnGraph:
    """Order-n de Bruijn graph; requires n >= 2 so vertices are nonempty."""
    if n < 2:
        raise ValueError("de Bruijn graph needs order n >= 2")
    k = alphabet.size
    _check_budget(k, n, budget)
    vertices = tuple(
        Word(alphabet, idx) for idx in itertools.product(range(k), repeat=n - 1)
    )
    edges = []
    for u in vertices:
        for a in range(k):
            v = Word(alphabet, u.indices[1:] + (a,))
            edges.append((u, v, alphabet.symbols[a]))
    graph = DeBruijnGraph(n, alphabet, vertices, tuple(edges))
    _check_graph_degrees(graph)
    return graph


def _check_graph_degrees(graph: DeBruijnGraph):
    k = graph.alphabet.size
    outdeg = {v.indices: 0 for v in graph.vertices}
    indeg = {v.indices: 0 for v in graph.vertices}
    for u, v, _ in graph.edges:
        outdeg[u.indices] += 1
        indeg[v.indices] += 1
    if any(d != k for d in outdeg.values()) or any(d != k for d in indeg.values()):
        raise AssertionError("de Bruijn graph degrees are not uniformly k")


def cyclic_factors(w: Word, n: int) -> list:
    """The k^n-many length-n factors of w read cyclically (with multiplicity)."""
    L = len(w)
    if n < 1 or L == 0:
        raise ValueError("need a nonempty word and n >= 1")
    doubled = w.indices + w.indices[: n - 1]
    return [doubled[i:i + n] for i in range(L)]
