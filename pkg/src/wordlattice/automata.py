"""Synchronizing words, edit distance, and block-code distance bounds.

A word w synchronizes a DFA when delta(q, w) is the same state for every
start q. Shortest reset words are found by breadth-first search over state
subsets (bitmasks), after a pairwise-merge check that decides
synchronizability without touching the exponential subset space.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import BudgetExceededError
from .words import Alphabet, Word

SUBSET_BFS_MAX_STATES = 14


@dataclass(frozen=True)
class Dfa:
    alphabet: Alphabet
    delta: tuple  # delta[state][symbol_index] -> state

    def __post_init__(self):
        if not isinstance(self.delta, tuple):
            object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        n = len(self.delta)
        if n < 1:
            raise ValueError("DFA needs at least one state")
        k = self.alphabet.size
        for row in self.delta:
            if len(row) != k:
                raise ValueError("each state needs a transition per symbol")
            for target in row:
                if not (0 <= target < n):
                    raise ValueError(f"transition target {target} out of range")

    @property
    def state_count(self) -> int:
        return len(self.delta)


@dataclass(frozen=True)
class BlockCode:
    codewords: tuple  # of Word, equal length, pairwise distinct

    def __post_init__(self):
        if not isinstance(self.codewords, tuple):
            object.__setattr__(self, "codewords", tuple(self.codewords))
        if len(self.codewords) == 0:
            raise ValueError("code must contain at least one codeword")
        lengths = {len(w) for w in self.codewords}
        if len(lengths) != 1:
            raise ValueError("codewords must all have the same length")
        if len({w.indices for w in self.codewords}) != len(self.codewords):
            raise ValueError("codewords must be pairwise distinct")


def cerny_automaton(n: int) -> Dfa:
    """Two-letter automaton with shortest reset word of length (n-1)^2.

    Letter 'a' is the cycle i -> i+1 mod n; letter 'b' sends 0 -> 1 and
    fixes everything else.
    """
    if n < 2:
        raise ValueError("need at least 2 states")
    alphabet = Alphabet(("a", "b"))
    delta = tuple(((i + 1) % n, 1 if i == 0 else i) for i in range(n))
    return Dfa(alphabet, delta)


def is_synchronizing_word(dfa: Dfa, w: Word) -> bool:
    """Does applying w from every state land in one common state?"""
    if w.alphabet != dfa.alphabet:
        raise ValueError("word over a different alphabet than the DFA")
    image = set(range(dfa.state_count))
    for a in w.indices:
        image = {dfa.delta[q][a] for q in image}
        if len(image) == 1:
            break
    return len(image) == 1


def _all_pairs_mergeable(dfa: Dfa) -> bool:
    """Necessary and sufficient synchronizability test on state pairs."""
    n = dfa.state_count
    k = dfa.alphabet.size
    merged = set()
    queue = deque()
    # backward search from the diagonal over the pair graph
    preimage: dict = {}
    for p in range(n):
        for q in range(p, n):
            for a in range(k):
                tp, tq = dfa.delta[p][a], dfa.delta[q][a]
                key = (min(tp, tq), max(tp, tq))
                preimage.setdefault(key, []).append((p, q))
    for r in range(n):
        merged.add((r, r))
        queue.append((r, r))
    while queue:
        pair = queue.popleft()
        for src in preimage.get(pair, ()):
            if src not in merged:
                merged.add(src)
                queue.append(src)
    return all((p, q) in merged for p in range(n) for q in range(p + 1, n))


def shortest_sync_word(dfa: Dfa) -> Word | None:
    """Shortest reset word via subset BFS, or None if not synchronizing.

    Symbols are tried in alphabet order, so among all shortest reset words
    the lexicographically first one is returned.
    """
    n = dfa.state_count
    if n > SUBSET_BFS_MAX_STATES:
        raise BudgetExceededError(
            f"{n} states exceeds the subset-BFS budget of {SUBSET_BFS_MAX_STATES}"
        )
    if n == 1:
        return Word(dfa.alphabet, ())
    if not _all_pairs_mergeable(dfa):
        return None
    k = dfa.alphabet.size
    full = (1 << n) - 1
    parent: dict = {full: None}
    queue = deque([full])
    while queue:
        mask = queue.popleft()
        if mask & (mask - 1) == 0:
            # singleton reached: rebuild the word backwards
            letters = []
            cur = mask
            while parent[cur] is not None:
                prev, a = parent[cur]
                letters.append(a)
                cur = prev
            return Word(dfa.alphabet, tuple(reversed(letters)))
        for a in range(k):
            img = 0
            rest = mask
            while rest:
                low = rest & -rest
                img |= 1 << dfa.delta[low.bit_length() - 1][a]
                rest ^= low
            if img not in parent:
                parent[img] = (mask, a)
                queue.append(img)
    return None  # unreachable for synchronizing automata


def edit_distance(u: Word, v: Word) -> int:
    """Levenshtein distance with unit costs for insert/delete/replace."""
    if u.alphabet != v.alphabet:
        raise ValueError("words are over different alphabets")
    a, b = u.indices, v.indices
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current[j] = min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
        previous = current
    return previous[-1]


def hamming_distance(u: Word, v: Word) -> int:
    if len(u) != len(v):
        raise ValueError("Hamming distance needs equal lengths")
    return sum(1 for a, b in zip(u.indices, v.indices) if a != b)


def min_distance(code: BlockCode) -> int:
    """Minimum pairwise Hamming distance of the code."""
    if len(code.codewords) < 2:
        raise ValueError("minimum distance needs at least two codewords")
    best = None
    words = code.codewords
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            d = hamming_distance(words[i], words[j])
            if best is None or d < best:
                best = d
    return best


def error_capability(d: int) -> tuple:
    """(detectable, correctable) error counts for minimum distance d."""
    if d < 1:
        raise ValueError("minimum distance must be >= 1")
    return d - 1, (d - 1) // 2
