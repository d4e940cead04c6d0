import random
from itertools import product
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schurindex.abgroup import span
from schurindex.cocycle import (
    CocycleData,
    GeneralData,
    Presentation,
    all_skew_pairings,
    build_extension,
    cyclic_constraints,
    max_pairing_value,
    max_theta_eta,
    pairing_from_data,
    pairing_on_C,
    realize_pairing,
    rho_square_forms,
    setup_of,
    sign_flip,
    symbolic_collector,
    to_general,
    validate_cyclic_case,
    validate_general,
    variable_count,
    variable_names,
    xi_forms,
    xi_value,
    Collector,
    SkewPairing,
)
from schurindex.errors import DomainError, ShapeError
from schurindex.field import cyclotomic, make_field
from schurindex.frame import build_frame, extend_frame
from schurindex.oracle import valid_data_kernel

from conftest import corpus_setups, extended_frames

KLEIN = Presentation((2, 2), ((), (0,)), (1, 1), 2)


def kernel_sample(setup, rng, count):
    """Random valid data vectors: random combinations of kernel generators."""
    gens, orders = valid_data_kernel(setup)
    M = setup.word
    out = []
    for _ in range(count):
        v = np.zeros(variable_count(setup.n), dtype=np.int64)
        for g, o in zip(gens, orders):
            v = (v + rng.randrange(o) * g) % M
        out.append(CocycleData.from_vector(setup.n, v, M))
    return out


def all_kernel_vectors(setup):
    gens, orders = valid_data_kernel(setup)
    M = setup.word
    seen = set()
    for coeffs in product(*(range(o) for o in orders)):
        v = np.zeros(variable_count(setup.n), dtype=np.int64)
        for c, g in zip(coeffs, gens):
            v = v + c * g
        seen.add(tuple(int(x) for x in v % M))
    return seen


def element_order(G, elem):
    k, x = 1, elem
    one = G.identity()
    while (x[0], list(x[1])) != one:
        x = G.multiply(x, elem)
        k += 1
    return k


# --- general validator ------------------------------------------------------


def test_trivial_general_data_is_valid():
    pres = Presentation((4, 2), ((), (2,)), (3, 1), 8)
    assert validate_general(pres, GeneralData.trivial(2, 8))[0]


def test_broken_antisymmetry_is_reported():
    data = GeneralData([[0, 1], [0, 0]], [0, 0], 2)
    ok, bad = validate_general(KLEIN, data)
    assert not ok and ("C1", (0, 1)) in bad


def test_klein_quaternion_data_is_valid():
    data = GeneralData([[0, 1], [1, 0]], [1, 1], 2)
    assert validate_general(KLEIN, data) == (True, [])


def test_presentation_shape_errors():
    with pytest.raises(ShapeError):
        Presentation((2, 2), ((), ()), (1, 1), 2)
    with pytest.raises(ShapeError):
        Presentation((2, 2), ((), (2,)), (1, 1), 2)
    with pytest.raises(DomainError):
        Presentation((2,), ((),), (2,), 4)


# --- extensions -------------------------------------------------------------


def test_trivial_data_gives_semidirect_product():
    pres = Presentation((2,), ((),), (3,), 4)
    G = build_extension(pres, GeneralData.trivial(1, 4))
    assert G.order == 8
    assert sum(1 for _ in G.elements()) == 8
    u = G.generator(0)
    assert element_order(G, u) == 2
    assert G.conjugation_multiplier(u) == 3


def test_klein_quaternion_extension_is_quaternion():
    data = GeneralData([[0, 1], [1, 0]], [1, 1], 2)
    G = build_extension(KLEIN, data)
    orders = sorted(element_order(G, g) for g in G.elements())
    assert orders == [1, 2, 4, 4, 4, 4, 4, 4]
    assert G.collector.commutator_w([1, 0], [0, 1]) == 1
    # the split abelian extension (Z/2)^3 has no element of order 4
    split = build_extension(KLEIN, GeneralData.trivial(2, 2))
    assert max(element_order(split, g) for g in split.elements()) == 2


def test_build_extension_refuses_invalid_data():
    with pytest.raises(DomainError):
        build_extension(KLEIN, GeneralData([[0, 1], [0, 0]], [0, 0], 2))


def check_associative(G, rng, trials=40):
    elems = list(G.elements())
    for _ in range(trials):
        x, y, z = (rng.choice(elems) for _ in range(3))
        assert G.multiply(G.multiply(x, y), z) == G.multiply(x, G.multiply(y, z))


def test_round_trip_and_associativity_on_frames():
    rng = random.Random(7)
    done = 0
    for K, p, fr in extended_frames()[::6]:
        s = setup_of(fr)
        pres = s.presentation()
        if pres.word * np.prod(pres.orders) > 4096:
            continue
        for data in kernel_sample(s, rng, 3):
            gen = to_general(s, data)
            G = build_extension(pres, gen)
            ext = G.extract_data()
            assert ext.slots() == gen.slots()
            check_associative(G, rng)
            done += 1
    assert done >= 30


# --- cyclic-case validator ----------------------------------------------------


def test_trivial_cyclic_data_is_valid_everywhere():
    for K, p, fr in extended_frames():
        s = setup_of(fr)
        assert validate_cyclic_case(s, CocycleData.trivial(s.n, s.word))[0]


def test_single_condition_violation():
    qf = extend_frame(build_frame(cyclotomic(1), 2), 3, 3)
    s = setup_of(qf)
    data = CocycleData.trivial(1, 16)
    data.beta_sigma = [1]  # order 16, while gamma_0 stays trivial
    ok, bad = validate_cyclic_case(s, data)
    assert not ok and ("C3b", (0,)) in bad


def test_cyclic_and_general_validators_agree():
    rng = random.Random(11)
    for K, p, fr in extended_frames()[::3]:
        s = setup_of(fr)
        pres = s.presentation()
        M = s.word
        forced = [("rho" in name) and not s.has_rho for name in variable_names(s.n)]
        for data in kernel_sample(s, rng, 4):
            assert validate_general(pres, to_general(s, data))[0]
            # a random single-coordinate perturbation
            vec = list(data.to_vector())
            i = rng.randrange(len(vec))
            if forced[i]:
                continue
            vec[i] = (vec[i] + rng.randrange(1, M)) % M
            other = CocycleData.from_vector(s.n, vec, M)
            assert validate_cyclic_case(s, other)[0] == validate_general(pres, to_general(s, other))[0]


def test_cyclic_constraints_labels():
    s = setup_of(build_frame(make_field(140, [27, 41]), 2))
    labels = {lab for lab, _, _ in cyclic_constraints(s)}
    assert {"C2b", "C3b", "C3c", "C3d", "C3f"} <= labels and "C3e" not in labels


def test_sign_flip_preserves_validity():
    rng = random.Random(3)
    flips = 0
    for K, p, fr in extended_frames():
        s = setup_of(fr)
        if s.quotient_cyclic:
            continue
        ks = [k for k in range(s.n) if s.orders[k] % 2 == 0 and s.t[k] % 2 == 0]
        for data in kernel_sample(s, rng, 3):
            for k in ks:
                assert validate_cyclic_case(s, sign_flip(s, data, k))[0]
                flips += 1
    assert flips > 0


def test_sign_flip_refuses_cyclic_quotients():
    s = setup_of(build_frame(cyclotomic(5), 5))
    with pytest.raises(DomainError):
        sign_flip(s, CocycleData.trivial(0, s.word), 0)


# --- collector ----------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_collector_is_associative_on_valid_data(seed):
    rng = random.Random(seed)
    frames = [fr for _, _, fr in extended_frames() if fr.B.order <= 4][:40]
    fr = rng.choice(frames)
    s = setup_of(fr)
    data = to_general(s, kernel_sample(s, rng, 1)[0])
    pres = s.presentation()
    col = Collector(pres, data.beta, data.gamma)

    def rand_elem():
        return rng.randrange(pres.word), [rng.randrange(q) for q in pres.orders]

    x, y, z = rand_elem(), rand_elem(), rand_elem()
    assert col.multiply(col.multiply(x, y), z) == col.multiply(x, col.multiply(y, z))


def test_symbolic_collector_evaluates_like_numeric():
    rng = random.Random(5)
    for K, p, fr in extended_frames()[::10]:
        s = setup_of(fr)
        pres = s.presentation()
        sym = symbolic_collector(pres)
        data = to_general(s, kernel_sample(s, rng, 1)[0])
        num = Collector(pres, data.beta, data.gamma)
        slots = np.array(data.slots(), dtype=np.int64)
        for _ in range(5):
            x = [rng.randrange(q) for q in pres.orders]
            y = [rng.randrange(q) for q in pres.orders]
            ws, xs = sym.multiply(sym.monomial(x), sym.monomial(y))
            wn, xn = num.multiply(num.monomial(x), num.monomial(y))
            assert xs == xn and int(ws @ slots) % pres.word == wn


# --- xi -----------------------------------------------------------------------


def test_xi_of_trivial_data():
    qf = extend_frame(build_frame(cyclotomic(1), 2), 3, 3)
    assert xi_value(qf, CocycleData.trivial(1, 16), 3) == 0


def test_xi_on_Q_at_2_reaches_order_two():
    qf = extend_frame(build_frame(cyclotomic(1), 2), 3, 3)
    s = setup_of(qf)
    forms = xi_forms(qf, 3)
    M = s.word
    best = max(M // gcd(int(np.dot(forms.xi, v)) % M, M) for v in all_kernel_vectors(s))
    assert best == 2


def test_xi_matches_extension_powering():
    """xi from the linear form equals the commutator and power computed in the realized group."""
    rng = random.Random(2)
    cases = [(cyclotomic(1), 2, 3, 3), (cyclotomic(1), 2, 5, 5), (cyclotomic(5), 5, 11, 11),
             (cyclotomic(4), 2, 5, 5), (cyclotomic(3), 3, 7, 7)]
    for K, p, r, q in cases:
        qf = extend_frame(build_frame(K, p), q, r)
        forms = xi_forms(qf, r)
        s = forms.setup
        pres = s.presentation()
        M = s.word
        for data in kernel_sample(s, rng, 6):
            G = build_extension(pres, to_general(s, data))
            col = G.collector
            comm = col.commutator_w(forms.theta_form, forms.phi_form)
            w_pow, x_pow = col.power(col.monomial(forms.theta_form), forms.e)
            assert not any(x_pow)
            direct = (comm + (r ** forms.f - 1) // forms.e * w_pow) % M
            assert direct == xi_value(qf, data, r, forms)


# --- skew pairings ------------------------------------------------------------


def test_pairing_from_trivial_data_is_zero():
    s = setup_of(build_frame(make_field(140, [27, 41]), 2))
    P = pairing_from_data(s, CocycleData.trivial(s.n, s.word))
    assert all(x == 0 for row in P.matrix for x in row)


def test_pairing_reads_beta():
    setup = setup_of(build_frame(make_field(180, [89, 107]), 2))
    data = CocycleData.trivial(setup.n, setup.word)
    assert pairing_from_data(setup, data).orders == setup.orders


def test_realize_zero_pairing_is_trivial():
    s = setup_of(build_frame(cyclotomic(5), 5))
    P = SkewPairing((), 5, 1, [])
    data = realize_pairing(P, s)
    assert data.to_vector() == CocycleData.trivial(0, s.word).to_vector()
    assert list(all_skew_pairings((), 5, 1)) == [P]


def rank_one_setup():
    """A frame-like setup with B of orders (4, 4), p = 2, a = 1."""
    from schurindex.cocycle import CyclicSetup
    return CyclicSetup(p=2, a=1, b=3, orders=(4, 4), t=(0, 0), rho_order=1, t_rho=0,
                       q_sigma=4, c=5, quotient_cyclic=False)


def test_rank_one_pairing_round_trip():
    s = rank_one_setup()
    P = SkewPairing((4, 4), 2, 1, [[0, 1], [1, 0]])
    data = realize_pairing(P, s)
    assert validate_cyclic_case(s, data)[0]
    assert pairing_from_data(s, data) == P
    with pytest.raises(DomainError):
        realize_pairing(SkewPairing((4, 4), 2, 1, [[0, 1], [0, 0]]), s)


def test_every_pairing_round_trips_on_frames():
    checked = 0
    for s in corpus_setups():
        for P in all_skew_pairings(s.orders, s.p, s.a):
            data = realize_pairing(P, s)
            assert validate_cyclic_case(s, data)[0]
            assert pairing_from_data(s, data) == P
            checked += 1
    assert checked > 1000


def brute_pairing_value(orders, h, g_order, p, a):
    best = 1
    pa = p ** a
    n = len(orders)
    for P in all_skew_pairings(tuple(orders) + (g_order,), p, a):
        v = P.value(list(h) + [0], [0] * n + [1])
        best = max(best, pa // gcd(v, pa))
    return best


def test_max_pairing_value_examples():
    assert max_pairing_value([9], [1], 3, 3, 1) == 3
    assert max_pairing_value([9], [3], 3, 3, 1) == 1
    assert max_pairing_value([9], [1], 5, 3, 1) == 1
    B = span(19, [4])
    assert max_pairing_value(B, 4, 3, 3, 1) == 3
    assert max_pairing_value(B, 1, 3, 3, 1) == 1


def shapes(max_gens=3, max_order=8):
    for n in range(max_gens + 1):
        for orders in product(range(2, max_order + 1), repeat=n):
            if list(orders) == sorted(orders):
                yield orders


def test_max_pairing_value_matches_brute_force():
    rng = random.Random(13)
    for p, a in ((2, 1), (2, 2), (3, 1)):
        for orders in shapes(2, 8):
            for g_order in (2, 3, 4, 8, 9):
                h = [rng.randrange(q) for q in orders]
                assert max_pairing_value(list(orders), h, g_order, p, a) == \
                    brute_pairing_value(orders, h, g_order, p, a)


def brute_theta_eta(orders, s, t, p, a):
    pa = p ** a
    return max(pa // gcd(P.value(s, t), pa) for P in all_skew_pairings(orders, p, a))


def test_max_theta_eta_examples():
    assert max_theta_eta([4, 4], [1, 0], [0, 1], 2, 2) == 4
    assert max_theta_eta([4, 4], [1, 0], [1, 0], 2, 2) == 1
    assert max_theta_eta([4, 4], [0, 0], [0, 1], 2, 2) == 1
    with pytest.raises(ShapeError):
        max_theta_eta([4], [1, 0], [0], 2, 1)


def test_max_theta_eta_matches_brute_force():
    rng = random.Random(17)
    for p in (2, 3):
        for a in (1, 2):
            for orders in shapes(3, 8):
                pairings = list(all_skew_pairings(orders, p, a))
                pa = p ** a
                for _ in range(3):
                    s = [rng.randrange(q) for q in orders]
                    t = [rng.randrange(q) for q in orders]
                    brute = max(pa // gcd(P.value(s, t), pa) for P in pairings)
                    assert max_theta_eta(list(orders), s, t, p, a) == brute


def test_maximum_over_a_product_is_the_larger_maximum():
    """For b1, b2 in B' and b3 in B'', the largest |Psi(b1 b3, b2)| is the larger of the two separate maxima."""
    rng = random.Random(19)
    for p, a in ((2, 1), (2, 2), (3, 1)):
        pa = p ** a
        for left in shapes(2, 4):
            for right in shapes(1, 4):
                orders = tuple(left) + tuple(right)
                if not left or not right or np.prod(orders) > 64:
                    continue
                pairings = list(all_skew_pairings(orders, p, a))
                nl = len(left)
                for _ in range(3):
                    b1 = [rng.randrange(q) for q in left] + [0] * len(right)
                    b2 = [rng.randrange(q) for q in left] + [0] * len(right)
                    b3 = [0] * nl + [rng.randrange(q) for q in right]
                    b13 = [x + y for x, y in zip(b1, b3)]

                    def best(x, y):
                        return max(pa // gcd(P.value(x, y), pa) for P in pairings)

                    assert best(b13, b2) == max(best(b1, b2), best(b3, b2))


# --- the rho^2 correction -----------------------------------------------------


def test_rho_square_pairings_vanish():
    frames = [fr for _, _, fr in extended_frames() if fr.rho * fr.rho % fr.N != 1]
    assert len(frames) >= 3
    for fr in frames:
        s = setup_of(fr)
        gens, _ = valid_data_kernel(s)
        for form in rho_square_forms(s):
            assert all(int(np.dot(form, g)) % s.word == 0 for g in gens)


def test_rho_square_pairing_on_enumerated_data():
    s = setup_of(build_frame(make_field(140, [27, 41]), 2))
    vectors = all_kernel_vectors(s)
    assert len(vectors) > 100
    for v in vectors:
        m = pairing_on_C(s, CocycleData.from_vector(s.n, v, s.word))
        assert all(row[-1] == 0 for row in m)


def test_skew_pairing_on_C_without_the_rho_square_condition_is_not_realized():
    s = setup_of(build_frame(make_field(140, [27, 41]), 2))
    rho2_order = s.rho_order // 2
    P = SkewPairing(tuple(s.orders) + (rho2_order,), 2, 1, [[0, 1], [1, 0]])
    assert P.is_valid() and P.value([1, 0], [0, 1]) == 1
    step = s.invariant_step
    realized = set()
    for v in all_kernel_vectors(s):
        m = pairing_on_C(s, CocycleData.from_vector(s.n, v, s.word))
        realized.add(tuple(tuple(x // step % 2 for x in row) for row in m))
    assert ((0, 1), (1, 0)) not in realized
    assert ((0, 0), (0, 0)) in realized
