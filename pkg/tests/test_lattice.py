import math
import random

import pytest

import oracles
from wordlattice import (DeltaParams, LatticeSymbolicSystem, NtruParams,
                         RingElement, SymbolEmbedding, check_bounded_distance,
                         d_sl, default_system, deficiency_bound, delta_bound,
                         mixing_embedding, phi_ntru, phi_weighted, ring_add,
                         ring_mul, shift_apply, system_step,
                         unit_embedding, validate_parameters)
from wordlattice.lattice import is_prime, random_allowed_buffer

P8 = NtruParams(8, 17)


def random_element(params, rng):
    return RingElement(params, tuple(rng.randrange(params.q)
                                     for _ in range(params.N)))


# ----------------------------------------------------------------- ring ops

def test_params_validation():
    with pytest.raises(ValueError):
        NtruParams(0, 17)
    with pytest.raises(ValueError):
        NtruParams(8, 16)  # not prime
    with pytest.raises(ValueError):
        NtruParams(8, 1)


def test_is_prime():
    primes = {2, 3, 5, 7, 257, 4099, 65537, 2**20 + 7}
    for n in list(primes) + [1, 4, 4096, 2**20 + 1]:
        assert is_prime(n) == (n in primes)


def test_ring_add_identities():
    rng = random.Random(0)
    a = random_element(P8, rng)
    assert ring_add(a, RingElement.zero(P8)) == a
    allq1 = RingElement(P8, (P8.q - 1,) * 8)
    all1 = RingElement(P8, (1,) * 8)
    assert ring_add(allq1, all1) == RingElement.zero(P8)


def test_ring_add_round_trip():
    rng = random.Random(1)
    for _ in range(200):
        a, b = random_element(P8, rng), random_element(P8, rng)
        s = ring_add(a, b)
        back = RingElement(P8, tuple((x - y) % P8.q
                                     for x, y in zip(s.coeffs, b.coeffs)))
        assert back == a


def test_ring_mul_identities():
    rng = random.Random(2)
    a = random_element(P8, rng)
    assert ring_mul(a, RingElement.one(P8)) == a
    x = RingElement.monomial(P8, 1)
    x_top = RingElement.monomial(P8, P8.N - 1)
    assert ring_mul(x, x_top) == RingElement.one(P8)


@pytest.mark.parametrize("N,q", [(8, 17), (16, 257), (64, 4099)])
def test_ring_mul_matches_naive_oracle(N, q):
    params = NtruParams(N, q)
    rng = random.Random(N * q)
    for _ in range(300):
        a, b = random_element(params, rng), random_element(params, rng)
        expected = oracles.naive_ring_mul(a.coeffs, b.coeffs, N, q)
        assert ring_mul(a, b).coeffs == expected


def test_ring_mul_bigint_path_agrees():
    from wordlattice.lattice import _ring_mul_bigint
    rng = random.Random(3)
    for _ in range(50):
        a, b = random_element(P8, rng), random_element(P8, rng)
        assert _ring_mul_bigint(a, b) == ring_mul(a, b)


def test_ring_params_mismatch():
    other = NtruParams(8, 257)
    with pytest.raises(ValueError):
        ring_add(RingElement.zero(P8), RingElement.zero(other))
    with pytest.raises(ValueError):
        ring_mul(RingElement.zero(P8), RingElement.zero(other))


def test_coefficients_must_be_canonical():
    with pytest.raises(ValueError):
        RingElement(P8, (17, 0, 0, 0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        RingElement(P8, (-1, 0, 0, 0, 0, 0, 0, 0))


# ---------------------------------------------------------------- embedding

def test_unit_embedding_geometry():
    emb = unit_embedding(16, scale=3)
    assert emb.vector(0) == (0,) * 16
    assert emb.vector(1)[0] == 3 and emb.vector(-1)[0] == -3
    assert emb.separation == 3.0
    assert emb.distance(-1, 1) == 6.0


def test_embedding_separation_invariants():
    with pytest.raises(ValueError):
        SymbolEmbedding(table=((0, (0, 0)), (1, (1, 0)), (-1, (-1, 0))),
                        separation=1.5, declared_lambda1=2.0)
    with pytest.raises(ValueError):
        SymbolEmbedding(table=((0, (0, 0)), (1, (3, 0)), (-1, (-3, 0))),
                        separation=3.0, declared_lambda1=10.0)


def test_mixing_embedding_dense_and_deterministic():
    e1 = mixing_embedding(32, 4099)
    e2 = mixing_embedding(32, 4099)
    assert e1 == e2
    v = e1.vector(1)
    assert sum(1 for c in v if c != 0) > 24  # dense, not axis-aligned


# ------------------------------------------------------------------- system

def test_system_requires_ternary_alphabet():
    from wordlattice import Alphabet, ShiftOfFiniteType
    bad = ShiftOfFiniteType(Alphabet((0, 1)), frozenset())
    with pytest.raises(ValueError):
        LatticeSymbolicSystem(bad, NtruParams(16, 17), unit_embedding(16), 4)


def test_system_entropy_floor_enforced():
    with pytest.raises(ValueError):
        # entropy 0 < floor 0.5 once everything but 0 is forbidden
        default_system(forbidden=((1,), (-1,)), entropy_floor=0.5)
    sys_ = default_system(forbidden=((1,), (-1,)), entropy_floor=0.0)
    assert sys_.entropy.value == 0.0


def test_system_window_must_fit():
    with pytest.raises(ValueError):
        default_system(N=16, window_k=8)


# ---------------------------------------------------------------------- phi

def test_phi_zero_window_is_zero():
    sys_ = default_system(profile="unit")
    window = (0,) * sys_.window_length
    assert phi_ntru(window, sys_) == RingElement.zero(sys_.params)


def test_phi_single_center_symbol():
    sys_ = default_system(profile="unit")
    window = tuple(1 if i == sys_.window_k else 0
                   for i in range(sys_.window_length))
    elem = phi_ntru(window, sys_)
    assert elem.coeffs[0] == 1
    assert all(c == 0 for c in elem.coeffs[1:])


def test_phi_matches_term_by_term_oracle():
    for profile in ("unit", "mixing"):
        sys_ = default_system(N=32, q=257, window_k=5, profile=profile)
        rng = random.Random(17)
        k = sys_.window_k
        vectors = {s: sys_.embedding.vector(s) for s in (-1, 0, 1)}
        for _ in range(50):
            window = tuple(rng.choice((-1, 0, 1)) for _ in range(2 * k + 1))
            expected = oracles.phi_reference(
                window, range(-k, k + 1), vectors, 32, 257
            )
            assert phi_ntru(window, sys_).coeffs == expected


def test_phi_window_length_checked():
    sys_ = default_system()
    with pytest.raises(ValueError):
        phi_ntru((0,) * 5, sys_)


def test_phi_shift_equivariance_on_tight_ring():
    # window covering the whole ring: rotating the window left then
    # multiplying by X undoes the move exactly
    sys_ = default_system(N=17, q=257, window_k=8, profile="unit")
    X = RingElement.monomial(sys_.params, 1)
    rng = random.Random(5)
    for _ in range(100):
        w = tuple(rng.choice((-1, 0, 1)) for _ in range(17))
        assert ring_mul(phi_ntru(shift_apply(w, 1), sys_), X) == phi_ntru(w, sys_)


# ------------------------------------------------------------- phi_weighted

def test_phi_weighted_zero_window():
    sys_ = default_system(profile="unit")
    pt = phi_weighted((0,) * sys_.window_length, sys_)
    assert all(n == 0 for n in pt.numerators)
    assert pt.log2_scale == sys_.window_k


def test_phi_weighted_edge_linearity():
    sys_ = default_system(profile="unit")
    k = sys_.window_k
    base = (0,) * (2 * k + 1)
    bumped = (1,) + (0,) * (2 * k)  # differs only at offset -k
    a, b = phi_weighted(base, sys_), phi_weighted(bumped, sys_)
    diff = [x - y for x, y in zip(b.numerators, a.numerators)]
    assert diff[0] == 1  # psi(1)-psi(0) scaled by 2^(k-k) = 1
    assert all(d == 0 for d in diff[1:])


def test_phi_weighted_exact_vs_float():
    sys_ = default_system(profile="unit")
    rng = random.Random(23)
    k = sys_.window_k
    for _ in range(100):
        window = tuple(rng.choice((-1, 0, 1)) for _ in range(2 * k + 1))
        exact = phi_weighted(window, sys_).as_floats()
        recomputed = [0.0] * sys_.params.N
        for off, sym in zip(range(-k, k + 1), window):
            vec = sys_.embedding.vector(sym)
            for j, c in enumerate(vec):
                recomputed[j] += c * 2.0 ** (-abs(off))
        assert all(abs(x - y) < 2**-40 for x, y in zip(exact, recomputed))


# --------------------------------------------------------------- the metric

def test_d_sl_identity_symmetry_single_term():
    sys_ = default_system(profile="unit")
    rng = random.Random(4)
    for _ in range(50):
        x = tuple(rng.choice((-1, 0, 1)) for _ in range(20))
        y = tuple(rng.choice((-1, 0, 1)) for _ in range(20))
        assert d_sl(sys_, x, x, 8).value == 0.0
        assert d_sl(sys_, x, y, 8).value == d_sl(sys_, y, x, 8).value
    x = (0,) * 15
    y = (1,) + (0,) * 14
    assert d_sl(sys_, x, y, 6).value == 1.0  # one term at i=0, distance 1
    y2 = (-1,) + (1,) * 14
    x2 = (1,) * 15
    assert d_sl(sys_, x2, y2, 6).value == 1.0  # distance 2 clamps to 1


def test_d_sl_range_and_tail():
    sys_ = default_system(profile="unit")
    x = (1,) * 9
    y = (-1,) * 9
    res = d_sl(sys_, x, y, 20)
    assert res.value <= 3.0
    assert res.tail_bound == 2.0 ** (1 - 20)


def test_d_sl_validation():
    sys_ = default_system(profile="unit")
    with pytest.raises(ValueError):
        d_sl(sys_, (0, 1), (0,), 2)
    with pytest.raises(ValueError):
        d_sl(sys_, (0,), (0,), -1)


def test_d_sl_metric_axioms_sampled():
    sys_ = default_system(profile="unit")
    rng = random.Random(77)
    for _ in range(300):
        L = rng.randint(5, 24)
        x, y, z = (
            tuple(rng.choice((-1, 0, 1)) for _ in range(L)) for _ in range(3)
        )
        p = rng.randint(0, 12)
        dxy = d_sl(sys_, x, y, p).value
        dyz = d_sl(sys_, y, z, p).value
        dxz = d_sl(sys_, x, z, p).value
        assert dxy >= 0.0
        assert dxz <= dxy + dyz + 1e-12


def test_lipschitz_bound_on_unclamped_pairs():
    sys_ = default_system(profile="unit")
    k = sys_.window_k
    rng = random.Random(11)
    tested = 0
    for _ in range(3000):
        L = 2 * k + 1
        x = tuple(rng.choice((-1, 0, 1)) for _ in range(L))
        y = tuple(x[i] if rng.random() < 0.6 else rng.choice((-1, 0, 1))
                  for i in range(L))
        wx, wy = sys_.window_at(x, 0), sys_.window_at(y, 0)
        if any(abs(a - b) > 1 for a, b in zip(wx, wy)):
            continue  # clamp active: outside the bound's domain
        tested += 1
        dl = phi_weighted(wx, sys_).distance(phi_weighted(wy, sys_))
        ds = d_sl(sys_, x, y, k)
        assert dl <= 2.0 * ds.value + 2.0 * ds.tail_bound + 1e-9
    assert tested > 200


# ---------------------------------------------------- deficiency/validation

def test_delta_bound_values():
    assert deficiency_bound(0.02, 4096) == pytest.approx(0.24, abs=1e-12)
    assert deficiency_bound(0.02, 2) == pytest.approx(0.02, abs=1e-15)
    assert deficiency_bound(0.5, 1) == 0.0
    assert delta_bound(NtruParams(512, 4099), DeltaParams()) == \
        pytest.approx(0.02 * math.log2(4099), abs=1e-15)
    with pytest.raises(ValueError):
        deficiency_bound(0.02, 0)
    with pytest.raises(ValueError):
        DeltaParams(0.0)


def test_validate_parameters_acceptance_triples():
    v = validate_parameters(512, 4099, 0.5, 128)
    assert v.accepted and v.reasons == ()
    assert v.proposition_bits == 128.0
    assert v.theorem_bits == 64.0

    v = validate_parameters(256, 4099, 0.5, 128)
    assert not v.accepted
    assert "dimension" in v.reasons

    v = validate_parameters(512, 2**20 + 7, 0.5, 128)
    assert not v.accepted
    assert "entropy-deficiency" in v.reasons
    assert v.delta == pytest.approx(0.4, abs=1e-5)
    assert v.delta >= 0.25


def test_validate_parameters_individual_conditions():
    v = validate_parameters(512, 4096, 0.5, 128)  # q not prime
    assert "modulus-prime" in v.reasons
    v = validate_parameters(512, 4099, 0.4, 100)
    assert "entropy-floor" in v.reasons
    v = validate_parameters(0, 4099, 0.5, 1)  # total on junk
    assert not v.accepted


def test_validate_parameters_monotone_over_primes():
    rng = random.Random(6)
    primes = [p for p in range(3, 5000) if is_prime(p)]
    for _ in range(200):
        N = rng.randint(1, 2048)
        q = rng.choice(primes)
        alpha = rng.choice((0.5, 0.75, 1.0, 1.5))
        bits = rng.choice((32, 64, 128))
        v = validate_parameters(N, q, alpha, bits)
        if not v.accepted:
            continue
        assert validate_parameters(N + rng.randint(1, 512), q, alpha, bits).accepted
        smaller = [p for p in primes if p < q]
        if smaller:
            assert validate_parameters(N, rng.choice(smaller), alpha, bits).accepted


# -------------------------------------------------------------- system step

def test_system_step_identity_and_period():
    sys_ = default_system(profile="unit")
    state = tuple(random_allowed_buffer(sys_, 12, random.Random(0)))
    assert system_step(sys_, state, 0) == state
    assert system_step(sys_, state, len(state)) == state


def test_system_step_composition():
    sys_ = default_system(profile="unit")
    rng = random.Random(40)
    for _ in range(50):
        state = random_allowed_buffer(sys_, 16, rng)
        a, b = rng.randint(0, 30), rng.randint(0, 30)
        assert system_step(sys_, system_step(sys_, state, a), b) == \
            system_step(sys_, state, a + b)


def test_system_step_rejects_disallowed_state():
    sys_ = default_system(forbidden=((1, 1),), entropy_floor=0.0)
    with pytest.raises(ValueError):
        system_step(sys_, (1, 1, 0, 0), 1)


# -------------------------------------------------------- bounded distance

def test_bounded_distance_zero_on_constant_state():
    sys_ = default_system(profile="unit")
    rep = check_bounded_distance(sys_, 5, orbit=(0,) * 64)
    assert rep.max_distance == 0.0
    assert rep.samples == 5


def test_bounded_distance_stable_and_saturating():
    sys_ = default_system(profile="unit")
    r1 = check_bounded_distance(sys_, 1000, seed=3)
    r2 = check_bounded_distance(sys_, 1000, seed=3)
    assert r1 == r2  # same seed, same report
    assert 0.0 < r1.max_distance < float("inf")
    buf = random_allowed_buffer(sys_, 64, random.Random(9))
    one_orbit = check_bounded_distance(sys_, 64, orbit=buf)
    ten_orbits = check_bounded_distance(sys_, 640, orbit=buf)
    assert ten_orbits.max_distance == one_orbit.max_distance


def test_bounded_distance_finite():
    sys_ = default_system(profile="unit")
    rep = check_bounded_distance(sys_, 200, seed=5)
    assert 0.0 < rep.max_distance < float("inf")
