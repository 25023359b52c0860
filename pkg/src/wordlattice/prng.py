"""Deterministic bit generation on top of the ring-embedded ternary shift.

The generator seeds a circular ternary buffer, walks it with the shift, and
on each step extracts the low-order bits of the window map's coefficients
into a reservoir. The keyed function variant jumps straight to a key- and
input-dependent shift count instead of walking. Quality is judged by an
empirical harness (frequency, runs, block frequency) — an honest proxy, not
a proof of indistinguishability.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy import special as _special

from .lattice import LatticeSymbolicSystem, RingElement, phi_ntru
from .shifts import contains_circular

DEFAULT_ALPHA_SIG = 0.01
PRF_STEP_RANGE = 2**20
MIN_TEST_BITS = 100


# ---------------------------------------------------------------- bit plumbing

def hex_to_bits(s: str) -> np.ndarray:
    """Hex string (optionally 0x-prefixed) to MSB-first bit array."""
    s = s.strip().lower().removeprefix("0x")
    if len(s) % 2:
        s = "0" + s
    try:
        raw = bytes.fromhex(s)
    except ValueError as e:
        raise ValueError(f"invalid hex seed: {e}") from None
    return bytes_to_bits(raw)


def bytes_to_bits(raw: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))


def bits_to_bytes(bits) -> bytes:
    arr = np.asarray(bits, dtype=np.uint8)
    return np.packbits(arr).tobytes()


def bits_to_text(bits) -> str:
    return "".join("1" if b else "0" for b in np.asarray(bits, dtype=np.uint8))


# ------------------------------------------------------------------- seeding

_PAIR_SYMBOL = {0: -1, 1: 0, 2: 1}  # 0b11 is a skip


def _bits_to_symbols(bits) -> list:
    symbols = []
    arr = list(np.asarray(bits, dtype=np.uint8))
    for hi, lo in zip(arr[0::2], arr[1::2]):
        v = 2 * int(hi) + int(lo)
        if v != 3:
            symbols.append(_PAIR_SYMBOL[v])
    return symbols


def seed_to_state(seed_bits, sys: LatticeSymbolicSystem, length: int | None = None) -> tuple:
    """Deterministically map seed bits to an admissible circular buffer.

    Seed bits are consumed in pairs (00 -> -1, 01 -> 0, 10 -> 1, 11 -> skip);
    a counter hash of the seed extends the supply until the buffer is full;
    forbidden factors are then repaired in place, scanning left to right.
    """
    bits = np.asarray(seed_bits, dtype=np.uint8)
    if bits.size < 16:
        raise ValueError("seed must provide at least 16 bits")
    length = sys.params.N if length is None else length
    symbols = _bits_to_symbols(bits)
    seed_bytes = bits_to_bytes(bits) + bits.size.to_bytes(4, "big")
    ctr = 0
    while len(symbols) < length:
        digest = hashlib.sha256(seed_bytes + b"/extend/%d" % ctr).digest()
        symbols.extend(_bits_to_symbols(bytes_to_bits(digest)))
        ctr += 1
    buffer = list(symbols[:length])
    _repair(buffer, sys)
    return tuple(buffer)


def _violation_ending_at(buffer: list, j: int, sys: LatticeSymbolicSystem) -> bool:
    L = len(buffer)
    for f in sys.sft.forbidden:
        syms = f.symbols
        m = len(syms)
        if m > L:
            continue
        if all(buffer[(j - m + 1 + t) % L] == syms[t] for t in range(m)):
            return True
    return False


def _repair(buffer: list, sys: LatticeSymbolicSystem):
    if not sys.sft.forbidden:
        return
    L = len(buffer)
    alphabet = sys.sft.alphabet.symbols
    for _pass in range(L):
        dirty = False
        for j in range(L):
            if not _violation_ending_at(buffer, j, sys):
                continue
            original = buffer[j]
            for candidate in alphabet:
                buffer[j] = candidate
                if not _violation_ending_at(buffer, j, sys):
                    break
            else:
                buffer[j] = original
            dirty = True
        if not dirty and contains_circular(sys.sft, sys.buffer_word(tuple(buffer))):
            return
    if not contains_circular(sys.sft, sys.buffer_word(tuple(buffer))):
        raise ValueError("seed repair failed: shift constraints too tight")


# ---------------------------------------------------------------- extraction

def extract_m(elem: RingElement, m: int) -> np.ndarray:
    """First m bits of the per-coefficient low-order-bit concatenation.

    Each coefficient contributes its floor(log2 q) low bits, written
    most-significant-first, in coefficient index order.
    """
    b = elem.params.bits_per_coeff
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > elem.params.N * b:
        raise ValueError(f"m = {m} exceeds the {elem.params.N * b} available bits")
    coeffs = np.asarray(elem.coeffs, dtype=np.int64)
    shifts = np.arange(b - 1, -1, -1, dtype=np.int64)
    bits = ((coeffs[:, None] >> shifts) & 1).astype(np.uint8).ravel()
    return bits[:m]


# ----------------------------------------------------------------- generator

class PrgState:
    """Single-owner stream state: buffer position plus a bit reservoir.

    Each refill advances the shift by `r` steps, maps the window at the new
    position into the ring, and banks every available extracted bit, so the
    produced stream does not depend on how reads are chunked.
    """

    def __init__(self, sys: LatticeSymbolicSystem, state: tuple, r: int = 1):
        if r < 1:
            raise ValueError("shift step r must be >= 1")
        if not sys.allowed(state):
            raise ValueError("initial state is not admissible")
        self.sys = sys
        self.state = tuple(state)
        self.r = r
        self.position = 0
        self._reservoir = np.zeros(0, dtype=np.uint8)

    @classmethod
    def from_seed(cls, seed, sys: LatticeSymbolicSystem, r: int = 1) -> "PrgState":
        bits = hex_to_bits(seed) if isinstance(seed, str) else seed
        return cls(sys, seed_to_state(bits, sys), r=r)

    def _refill(self):
        self.position += self.r
        window = self.sys.window_at(self.state, self.position)
        elem = phi_ntru(window, self.sys)
        chunk = extract_m(elem, self.sys.params.N * self.sys.params.bits_per_coeff)
        self._reservoir = np.concatenate([self._reservoir, chunk])

    def next_bits(self, m: int) -> np.ndarray:
        if m < 1:
            raise ValueError("m must be >= 1")
        while self._reservoir.size < m:
            self._refill()
        out, self._reservoir = self._reservoir[:m], self._reservoir[m:]
        return out


def prg_next(state: PrgState, m: int) -> np.ndarray:
    return state.next_bits(m)


# ----------------------------------------------------------- keyed function

class PrfKey:
    """Key material plus its derived starting buffer and step hash."""

    def __init__(self, key: bytes, sys: LatticeSymbolicSystem,
                 n_min: int | None = None):
        if not isinstance(key, (bytes, bytearray)):
            raise ValueError("key must be bytes")
        self.key = bytes(key)
        self.sys = sys
        self.n_min = sys.params.N if n_min is None else n_min
        state_bits = bytes_to_bits(
            hashlib.sha256(self.key + b"/prf-state").digest()
        )
        self.start_state = seed_to_state(state_bits, sys)

    def steps_for(self, x_bits) -> int:
        arr = np.asarray(x_bits, dtype=np.uint8)
        payload = bits_to_bytes(arr) + arr.size.to_bytes(4, "big")
        digest = hashlib.sha256(self.key + b"/prf-steps/" + payload).digest()
        return self.n_min + int.from_bytes(digest[:8], "big") % PRF_STEP_RANGE


def prf_eval(key: PrfKey, x_bits, m: int) -> np.ndarray:
    """Extract m bits of phi at the key- and input-selected shift count."""
    n = key.steps_for(x_bits)
    window = key.sys.window_at(key.start_state, n)
    return extract_m(phi_ntru(window, key.sys), m)


# ------------------------------------------------------------- bit statistics

@dataclass(frozen=True)
class TestReport:
    name: str
    statistic: float
    p_value: float
    passed: bool
    alpha_sig: float
    n_bits: int


def _as_bit_array(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.size < MIN_TEST_BITS:
        raise ValueError(f"need at least {MIN_TEST_BITS} bits")
    return arr


def monobit_test(bits, alpha_sig: float = DEFAULT_ALPHA_SIG) -> TestReport:
    """Normalized bias of ones vs zeros; p from the half-normal tail."""
    arr = _as_bit_array(bits)
    n = arr.size
    s_obs = abs(2.0 * int(arr.sum()) - n) / math.sqrt(n)
    p = math.erfc(s_obs / math.sqrt(2.0))
    return TestReport("monobit", s_obs, p, p >= alpha_sig, alpha_sig, n)


def runs_test(bits, alpha_sig: float = DEFAULT_ALPHA_SIG) -> TestReport:
    """Total number of runs against its expectation at the observed bias."""
    arr = _as_bit_array(bits)
    n = arr.size
    pi = float(arr.mean())
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        # frequency prerequisite failed; runs statistic is meaningless
        return TestReport("runs", float("inf"), 0.0, False, alpha_sig, n)
    v = 1 + int(np.count_nonzero(np.diff(arr)))
    num = abs(v - 2.0 * n * pi * (1.0 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi)
    p = math.erfc(num / den)
    return TestReport("runs", v, p, p >= alpha_sig, alpha_sig, n)


def block_frequency_test(bits, block_len: int = 128,
                         alpha_sig: float = DEFAULT_ALPHA_SIG) -> TestReport:
    """Chi-square of per-block ones-proportions around 1/2."""
    arr = _as_bit_array(bits)
    if block_len < 1:
        raise ValueError("block_len must be >= 1")
    nblocks = arr.size // block_len
    if nblocks < 1:
        raise ValueError("need at least one full block")
    blocks = arr[: nblocks * block_len].reshape(nblocks, block_len)
    props = blocks.mean(axis=1)
    chi2 = 4.0 * block_len * float(np.sum((props - 0.5) ** 2))
    p = float(_special.gammaincc(nblocks / 2.0, chi2 / 2.0))
    return TestReport("block-frequency", chi2, p, p >= alpha_sig, alpha_sig, arr.size)


DEFAULT_TESTS = (
    ("monobit", monobit_test),
    ("runs", runs_test),
    ("block-frequency", partial(block_frequency_test, block_len=128)),
)


# ------------------------------------------------------------------- harness

@dataclass(frozen=True)
class TestAggregate:
    name: str
    passes: int
    trials: int
    pass_fraction: float
    band_low: float
    band_high: float
    in_band: bool
    p_values: tuple


@dataclass(frozen=True)
class HarnessReport:
    trials: int
    bits_per_trial: int
    alpha_sig: float
    seed: int
    aggregates: tuple  # of TestAggregate

    @property
    def all_in_band(self) -> bool:
        return all(a.in_band for a in self.aggregates)


def binomial_band(p0: float, trials: int, confidence_z: float = 2.5758293035489004):
    """Two-sided normal-approximation band for a Bin(trials, p0) fraction."""
    half = confidence_z * math.sqrt(p0 * (1.0 - p0) / trials)
    return max(0.0, p0 - half), min(1.0, p0 + half)


def distinguisher_harness(generator, tests=DEFAULT_TESTS, trials: int = 100,
                          bits_per_trial: int = 2**15,
                          alpha_sig: float = DEFAULT_ALPHA_SIG,
                          seed: int = 0) -> HarnessReport:
    """Run each test over fresh per-trial seeds and band-check pass rates.

    `generator` is a callable taking a 64-bit trial seed and returning at
    least `bits_per_trial` bits. Aggregation is order-independent.
    """
    if trials < 30:
        raise ValueError("need at least 30 trials for the binomial band")
    rng = random.Random(seed)
    trial_seeds = [rng.getrandbits(64) for _ in range(trials)]
    results = {name: [] for name, _ in tests}
    for ts in trial_seeds:
        bits = np.asarray(generator(ts), dtype=np.uint8)[:bits_per_trial]
        for name, fn in tests:
            results[name].append(fn(bits, alpha_sig=alpha_sig))
    lo, hi = binomial_band(1.0 - alpha_sig, trials)
    aggregates = []
    for name, _ in tests:
        reports = results[name]
        passes = sum(1 for r in reports if r.passed)
        frac = passes / trials
        aggregates.append(TestAggregate(
            name, passes, trials, frac, lo, hi, lo <= frac <= hi,
            tuple(r.p_value for r in reports),
        ))
    return HarnessReport(trials, bits_per_trial, alpha_sig, seed, tuple(aggregates))


# ------------------------------------------------------- reference generators

def prg_generator(sys: LatticeSymbolicSystem, nbits: int, r: int = 1):
    """Fresh-stream factory for the harness: trial seed -> nbits."""
    def gen(trial_seed: int) -> np.ndarray:
        bits = bytes_to_bits(trial_seed.to_bytes(8, "big"))
        return PrgState.from_seed(bits, sys, r=r).next_bits(nbits)
    return gen


def reference_random_generator(nbits: int):
    """High-quality deterministic fixture (Mersenne Twister)."""
    def gen(trial_seed: int) -> np.ndarray:
        rng = random.Random(trial_seed)
        raw = rng.getrandbits(nbits)
        return np.array([(raw >> (nbits - 1 - i)) & 1 for i in range(nbits)],
                        dtype=np.uint8)
    return gen


def constant_generator(nbits: int, value: int = 0):
    def gen(_trial_seed: int) -> np.ndarray:
        return np.full(nbits, value, dtype=np.uint8)
    return gen


def alternating_generator(nbits: int):
    def gen(_trial_seed: int) -> np.ndarray:
        return np.fromiter(((i & 1) for i in range(nbits)), dtype=np.uint8,
                           count=nbits)
    return gen


def counter_generator(nbits: int, width: int = 32):
    """0, 1, 2, ... as fixed-width big-endian blocks."""
    def gen(_trial_seed: int) -> np.ndarray:
        out = np.zeros(nbits, dtype=np.uint8)
        pos = 0
        ctr = 0
        while pos < nbits:
            take = min(width, nbits - pos)
            for i in range(take):
                out[pos + i] = (ctr >> (width - 1 - i)) & 1
            pos += take
            ctr += 1
        return out
    return gen
