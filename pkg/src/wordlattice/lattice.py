"""Ternary symbolic dynamics embedded into the NTRU convolution ring.

The ring is R_q = Z_q[X]/(X^N - 1) with q prime, elements stored as length-N
coefficient vectors with canonical representatives in [0, q). A symbol
embedding psi maps each of {-1, 0, 1} to an integer vector; the window map

    phi(x) = sum_{i=-k}^{k} psi(x_i) * X^i   mod (X^N - 1, q)

reads a 2k+1 window of a ternary sequence into the ring (negative exponents
wrap to X^(N+i)). Alongside it live:

  * the sequence metric  d(x, y) = sum_i 2^{-|i|} min(1, |psi(x_i) - psi(y_i)|),
    computed truncated with an explicit tail bound,
  * the dyadically weighted point map sum_i psi(x_i) * 2^{-|i|} in exact
    scaled-integer arithmetic,
  * the entropy-deficiency diagnostic C * log2(q) and the parameter
    validation rules built on it.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass

import numpy as np

from .shifts import (ShiftOfFiniteType, contains_circular,
                     entropy_transfer_matrix, shift_apply)
from .words import Alphabet, Word

TERNARY_SYMBOLS = (-1, 0, 1)

#: Entropy-deficiency constant from the transfer bound.
DEFAULT_DEFICIENCY_C = 0.02

#: Entropy floor the parameter rules assume for the ternary shift.
MIN_ENTROPY_FLOOR = 0.5

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for anything below 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class NtruParams:
    N: int
    q: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("ring dimension N must be >= 1")
        if not is_prime(self.q):
            raise ValueError(f"modulus q={self.q} must be prime")

    @property
    def bits_per_coeff(self) -> int:
        return self.q.bit_length() - 1  # floor(log2 q)

    @property
    def log2_determinant(self) -> float:
        # det = q^N for the convolution lattice
        return self.N * math.log2(self.q)


@dataclass(frozen=True)
class RingElement:
    params: NtruParams
    coeffs: tuple

    def __post_init__(self):
        if not isinstance(self.coeffs, tuple):
            object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != self.params.N:
            raise ValueError("coefficient vector must have length N")
        q = self.params.q
        for c in self.coeffs:
            if not (0 <= c < q):
                raise ValueError("coefficients must be canonical in [0, q)")

    @classmethod
    def zero(cls, params: NtruParams) -> "RingElement":
        return cls(params, (0,) * params.N)

    @classmethod
    def one(cls, params: NtruParams) -> "RingElement":
        return cls(params, (1,) + (0,) * (params.N - 1))

    @classmethod
    def monomial(cls, params: NtruParams, exponent: int, coeff: int = 1) -> "RingElement":
        c = [0] * params.N
        c[exponent % params.N] = coeff % params.q
        return cls(params, tuple(c))

    def centered(self) -> tuple:
        """Representatives in (-q/2, q/2], the natural lift for distances."""
        q = self.params.q
        return tuple(c - q if c > q // 2 else c for c in self.coeffs)


def _check_same_params(a: RingElement, b: RingElement):
    if a.params != b.params:
        raise ValueError("ring elements have mismatched parameters")


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    _check_same_params(a, b)
    q = a.params.q
    return RingElement(a.params, tuple((x + y) % q for x, y in zip(a.coeffs, b.coeffs)))


def ring_neg(a: RingElement) -> RingElement:
    q = a.params.q
    return RingElement(a.params, tuple((-x) % q for x in a.coeffs))


def ring_sub(a: RingElement, b: RingElement) -> RingElement:
    _check_same_params(a, b)
    return ring_add(a, ring_neg(b))


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    """Cyclic convolution mod (X^N - 1, q).

    Fast path folds a linear numpy convolution back onto N slots; exact as
    long as the accumulated products stay inside int64, else plain big-int
    arithmetic takes over.
    """
    _check_same_params(a, b)
    N, q = a.params.N, a.params.q
    if N * (q - 1) ** 2 < 2**62:
        av = np.asarray(a.coeffs, dtype=np.int64)
        bv = np.asarray(b.coeffs, dtype=np.int64)
        lin = np.convolve(av, bv)
        out = lin[:N].copy()
        out[: len(lin) - N] += lin[N:]
        return RingElement(a.params, tuple(int(c) for c in out % q))
    return _ring_mul_bigint(a, b)


def _ring_mul_bigint(a: RingElement, b: RingElement) -> RingElement:
    N, q = a.params.N, a.params.q
    acc = [0] * N
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j, bj in enumerate(b.coeffs):
            k = i + j
            if k >= N:
                k -= N
            acc[k] += ai * bj
    return RingElement(a.params, tuple(c % q for c in acc))


@dataclass(frozen=True)
class SymbolEmbedding:
    """psi: symbol -> integer vector, with its separation bookkeeping.

    `separation` is the minimum pairwise Euclidean distance of the table,
    and `declared_lambda1` is the shortest-vector lower bound the embedding
    claims to respect (separation >= declared_lambda1 / 2 is enforced here;
    solving SVP to verify the declaration is nobody's desk job).
    """

    table: tuple            # ((symbol, vector-tuple), ...) in symbol order
    separation: float
    declared_lambda1: float

    def __post_init__(self):
        vecs = dict(self.table)
        syms = list(vecs)
        for v in vecs.values():
            if len(v) != len(next(iter(vecs.values()))):
                raise ValueError("embedding vectors must share one dimension")
        pairwise = [
            math.dist(vecs[a], vecs[b])
            for i, a in enumerate(syms) for b in syms[i + 1:]
        ]
        if pairwise and min(pairwise) + 1e-9 < self.separation:
            raise ValueError("claimed separation exceeds an actual pairwise distance")
        if self.separation < self.declared_lambda1 / 2 - 1e-9:
            raise ValueError("separation must be at least declared lambda1 / 2")

    def vector(self, symbol) -> tuple:
        for s, v in self.table:
            if s == symbol:
                return v
        raise ValueError(f"symbol {symbol!r} not in embedding table")

    @property
    def symbols(self) -> tuple:
        return tuple(s for s, _ in self.table)

    def distance(self, sym_a, sym_b) -> float:
        return math.dist(self.vector(sym_a), self.vector(sym_b))


def unit_embedding(N: int, scale: int = 1,
                   declared_lambda1: float | None = None) -> SymbolEmbedding:
    """Axis-aligned table: psi(-1) = -s*e1, psi(0) = 0, psi(1) = +s*e1."""
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    zero = (0,) * N
    plus = (scale,) + (0,) * (N - 1)
    minus = (-scale,) + (0,) * (N - 1)
    return SymbolEmbedding(
        table=((-1, minus), (0, zero), (1, plus)),
        separation=float(scale),
        declared_lambda1=2.0 * scale if declared_lambda1 is None else declared_lambda1,
    )


def _digest_vector(N: int, q: int, tag: bytes) -> tuple:
    vals = []
    ctr = 0
    while len(vals) < N:
        h = hashlib.sha256(tag + b"|%d|%d|%d" % (N, q, ctr)).digest()
        for off in range(0, 32, 4):
            vals.append(int.from_bytes(h[off:off + 4], "big") % q)
            if len(vals) == N:
                break
        ctr += 1
    return tuple(vals)


def mixing_embedding(N: int, q: int) -> SymbolEmbedding:
    """Dense deterministic table so every ring coefficient mixes the window.

    Vectors are derived from fixed SHA-256 streams; the axis table keeps its
    role for metric work, this one exists for bit extraction quality.
    """
    table = tuple(
        (s, _digest_vector(N, q, b"wordlattice/psi/%d" % s))
        for s in TERNARY_SYMBOLS
    )
    vecs = dict(table)
    separation = min(
        math.dist(vecs[a], vecs[b])
        for i, a in enumerate(TERNARY_SYMBOLS) for b in TERNARY_SYMBOLS[i + 1:]
    )
    return SymbolEmbedding(table=table, separation=separation,
                           declared_lambda1=2.0 * separation)


class LatticeSymbolicSystem:
    """Ternary shift of finite type + ring parameters + window embedding.

    Construction checks the entropy floor against the transfer-matrix value
    of the underlying shift and fails loudly when the floor is not met.
    """

    def __init__(self, sft: ShiftOfFiniteType, params: NtruParams,
                 embedding: SymbolEmbedding, window_k: int,
                 entropy_floor: float = 0.0):
        if tuple(sft.alphabet.symbols) != TERNARY_SYMBOLS:
            raise ValueError("alphabet must be exactly (-1, 0, 1)")
        if window_k < 1:
            raise ValueError("window radius k must be >= 1")
        if 2 * window_k + 1 > params.N:
            raise ValueError("window 2k+1 must fit inside the ring dimension N")
        if set(embedding.symbols) != set(TERNARY_SYMBOLS):
            raise ValueError("embedding must cover exactly the ternary symbols")
        for _, v in embedding.table:
            if len(v) != params.N:
                raise ValueError("embedding vectors must have length N")
        self.sft = sft
        self.params = params
        self.embedding = embedding
        self.window_k = window_k
        self.entropy_floor = float(entropy_floor)
        self.entropy = entropy_transfer_matrix(sft)
        if self.entropy.value < self.entropy_floor - 1e-12:
            raise ValueError(
                f"shift entropy {self.entropy.value:.6f} is below the "
                f"declared floor {self.entropy_floor:.6f}"
            )
        self._psi_arrays = {
            s: np.asarray(v, dtype=np.int64) for s, v in embedding.table
        }

    @property
    def window_length(self) -> int:
        return 2 * self.window_k + 1

    def buffer_word(self, buffer) -> Word:
        return self.sft.alphabet.word(buffer)

    def allowed(self, buffer) -> bool:
        return contains_circular(self.sft, self.buffer_word(buffer))

    def window_at(self, buffer, center: int) -> tuple:
        L = len(buffer)
        k = self.window_k
        return tuple(buffer[(center + i) % L] for i in range(-k, k + 1))


def ternary_sft(forbidden_symbol_words=()) -> ShiftOfFiniteType:
    """SFT over (-1, 0, 1) from forbidden words given as symbol tuples."""
    alphabet = Alphabet(TERNARY_SYMBOLS)
    return ShiftOfFiniteType(
        alphabet, frozenset(alphabet.word(w) for w in forbidden_symbol_words)
    )


def default_system(N: int = 64, q: int = 4099, window_k: int = 8,
                   forbidden=(), entropy_floor: float = MIN_ENTROPY_FLOOR,
                   profile: str = "unit", scale: int = 1,
                   lambda1: float | None = None) -> LatticeSymbolicSystem:
    """Convenience constructor; profile picks the embedding table."""
    params = NtruParams(N, q)
    if profile == "unit":
        embedding = unit_embedding(N, scale, declared_lambda1=lambda1)
    elif profile == "mixing":
        embedding = mixing_embedding(N, q)
    else:
        raise ValueError(f"unknown embedding profile {profile!r}")
    return LatticeSymbolicSystem(ternary_sft(forbidden), params, embedding,
                                 window_k, entropy_floor)


def phi_ntru(window, sys: LatticeSymbolicSystem) -> RingElement:
    """Window map into the ring: sum of psi(x_i) * X^i, i in [-k, k]."""
    k = sys.window_k
    if len(window) != 2 * k + 1:
        raise ValueError(f"window must have length {2 * k + 1}")
    N, q = sys.params.N, sys.params.q
    acc = np.zeros(N, dtype=np.int64)
    for offset, sym in zip(range(-k, k + 1), window):
        vec = sys._psi_arrays.get(sym)
        if vec is None:
            raise ValueError(f"symbol {sym!r} outside the ternary alphabet")
        acc += np.roll(vec, offset % N)
    return RingElement(sys.params, tuple(int(c) for c in acc % q))


@dataclass(frozen=True)
class ScaledLatticePoint:
    """Exact dyadic point: coordinates are integers over the scale 2^k."""

    numerators: tuple
    log2_scale: int

    def as_floats(self) -> tuple:
        s = float(2 ** self.log2_scale)
        return tuple(n / s for n in self.numerators)

    def distance(self, other: "ScaledLatticePoint") -> float:
        if self.log2_scale != other.log2_scale:
            raise ValueError("points carry different scales")
        return math.dist(self.as_floats(), other.as_floats())


def phi_weighted(window, sys: LatticeSymbolicSystem) -> ScaledLatticePoint:
    """Dyadically weighted sum of psi(x_i)*2^(-|i|), exact at scale 2^k."""
    k = sys.window_k
    if len(window) != 2 * k + 1:
        raise ValueError(f"window must have length {2 * k + 1}")
    N = sys.params.N
    acc = [0] * N
    for offset, sym in zip(range(-k, k + 1), window):
        vec = sys.embedding.vector(sym)
        w = 2 ** (k - abs(offset))
        for j, c in enumerate(vec):
            acc[j] += c * w
    return ScaledLatticePoint(tuple(acc), k)


@dataclass(frozen=True)
class TruncatedDistance:
    value: float
    tail_bound: float

    @property
    def upper(self) -> float:
        return self.value + self.tail_bound


def d_sl(sys: LatticeSymbolicSystem, x, y, p: int) -> TruncatedDistance:
    """Sequence metric sum_{|i|<=p} 2^{-|i|} min(1, |psi(x_i)-psi(y_i)|).

    Buffers are circular and must have equal length; the discarded tail is
    bounded by 2^(1-p) and reported alongside the truncated value.
    """
    if len(x) != len(y):
        raise ValueError("buffers must have equal length")
    if p < 0:
        raise ValueError("truncation radius must be >= 0")
    L = len(x)
    if L == 0:
        raise ValueError("buffers must be nonempty")
    dist = {}
    for a in sys.embedding.symbols:
        for b in sys.embedding.symbols:
            dist[(a, b)] = sys.embedding.distance(a, b)
    total = 0.0
    for i in range(-p, p + 1):
        d = dist[(x[i % L], y[i % L])]
        total += 2.0 ** (-abs(i)) * min(1.0, d)
    return TruncatedDistance(total, 2.0 ** (1 - p))


@dataclass(frozen=True)
class DeltaParams:
    C: float = DEFAULT_DEFICIENCY_C

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError("deficiency constant C must be positive")


def deficiency_bound(C: float, q: int) -> float:
    """Raw form of the entropy-deficiency bound: C * log2(q)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return C * math.log2(q)


def delta_bound(params: NtruParams, dp: DeltaParams) -> float:
    """C * log2(det)^(1/N) = C * log2(q) for the convolution lattice."""
    return deficiency_bound(dp.C, params.q)


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationResult:
    accepted: bool
    conditions: tuple          # of ConditionCheck
    proposition_bits: float    # alpha*N/2, calibrated so (512, 0.5) <-> 128
    theorem_bits: float        # the literal alpha*N/4 exponent
    delta: float | None

    @property
    def reasons(self) -> tuple:
        return tuple(c.name for c in self.conditions if not c.passed)


def validate_parameters(N: int, q: int, alpha: float, security_bits: int,
                        C: float = DEFAULT_DEFICIENCY_C) -> ValidationResult:
    """Accept/reject parameter sets against the published thresholds.

    Total function: malformed inputs surface as failed conditions, never
    exceptions. Both security estimates are always reported; acceptance
    follows the calibrated alpha*N/2 rule that puts (N=512, alpha=0.5) at
    128 bits, together with q prime, C*log2(q) < alpha/2, and alpha >= 0.5.
    """
    checks = []

    prop_bits = alpha * N / 2 if alpha > 0 and N > 0 else 0.0
    thm_bits = alpha * N / 4 if alpha > 0 and N > 0 else 0.0
    checks.append(ConditionCheck(
        "dimension", prop_bits >= security_bits,
        f"alpha*N/2 = {prop_bits:.6g} vs required {security_bits} bits",
    ))

    prime_ok = isinstance(q, int) and is_prime(q)
    checks.append(ConditionCheck("modulus-prime", prime_ok, f"q = {q}"))

    delta = deficiency_bound(C, q) if isinstance(q, int) and q >= 1 else None
    if delta is None:
        checks.append(ConditionCheck("entropy-deficiency", False, "q out of domain"))
    else:
        checks.append(ConditionCheck(
            "entropy-deficiency", delta < alpha / 2,
            f"C*log2(q) = {delta:.6g} vs alpha/2 = {alpha / 2:.6g}",
        ))

    checks.append(ConditionCheck(
        "entropy-floor", alpha >= MIN_ENTROPY_FLOOR,
        f"alpha = {alpha:.6g} vs floor {MIN_ENTROPY_FLOOR}",
    ))

    return ValidationResult(
        accepted=all(c.passed for c in checks),
        conditions=tuple(checks),
        proposition_bits=prop_bits,
        theorem_bits=thm_bits,
        delta=delta,
    )


def system_step(sys: LatticeSymbolicSystem, state, steps: int):
    """Rotate an admissible circular state; rejects disallowed inputs."""
    buffer = tuple(state)
    if not sys.allowed(buffer):
        raise ValueError("state is not an admissible word of the shift")
    return shift_apply(buffer, steps)


def random_allowed_buffer(sys: LatticeSymbolicSystem, length: int,
                          rng: random.Random, max_tries: int = 1000) -> tuple:
    """Rejection-sample a circularly admissible ternary buffer."""
    symbols = sys.sft.alphabet.symbols
    for _ in range(max_tries):
        buf = tuple(rng.choice(symbols) for _ in range(length))
        if sys.allowed(buf):
            return buf
    raise ValueError("could not sample an admissible buffer; shift too constrained")


@dataclass(frozen=True)
class BoundedDistanceReport:
    max_distance: float
    samples: int
    seed: int


def check_bounded_distance(sys: LatticeSymbolicSystem, samples: int,
                           seed: int = 0, orbit=None) -> BoundedDistanceReport:
    """Empirical max of |phi(x) - phi(Tx)| over sampled admissible states.

    With `orbit` set to a fixed buffer, samples walk that buffer's rotation
    orbit instead of drawing fresh buffers, so the maximum saturates once
    the whole (finite) orbit has been visited.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    N = sys.params.N
    worst = 0.0
    for t in range(samples):
        if orbit is not None:
            buf = shift_apply(tuple(orbit), t % len(orbit))
        else:
            buf = random_allowed_buffer(sys, N, rng)
        here = phi_ntru(sys.window_at(buf, 0), sys)
        there = phi_ntru(sys.window_at(buf, 1), sys)
        d = math.dist(here.centered(), there.centered())
        worst = max(worst, d)
    return BoundedDistanceReport(worst, samples, seed)
