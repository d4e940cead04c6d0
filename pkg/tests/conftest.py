import functools

import pytest

from schurindex.arith import find_q0, is_prime
from schurindex.cocycle import setup_of
from schurindex.field import make_field, root_of_unity_exponent, subfields
from schurindex.frame import build_frame, extend_frame

# (conductor, generators of the fixing group) for the small headline corpus
SMALL_FIELDS = {
    "Q": (1, []),
    "Q(i)": (4, []),
    "Q(zeta3)": (3, []),
    "Q(zeta5)": (5, []),
    "Q(zeta8)": (8, []),
    "Q(sqrt2)": (8, [7]),
    "Q(sqrt-2)": (8, [3]),
    "Q(i) in Q(zeta8)": (8, [5]),
}

# fields whose frames have rho^2 != 1 and an element of even order in B
RHO_SQUARE_FIELDS = [(140, [27, 41]), (180, [89, 107]), (220, [21, 23])]


def small_field(name):
    n, gens = SMALL_FIELDS[name]
    return make_field(n, gens)


def odd_primes(upto):
    return [x for x in range(3, upto + 1) if is_prime(x)]


def small_corpus():
    """(name, K, p, r) for the headline oracle comparison."""
    out = []
    for name in SMALL_FIELDS:
        K = small_field(name)
        for p in (2, 3, 5):
            if root_of_unity_exponent(K, p) == 0:
                continue
            for r in odd_primes(23):
                if r % p == 1:
                    out.append((name, K, p, r))
    return out


@functools.lru_cache(maxsize=None)
def extended_fields():
    """All subfields of Q(zeta_n) for n <= 60, plus the rho^2 examples."""
    seen = {}
    for n in range(1, 61):
        for K in subfields(n):
            seen[(K.conductor, K.fixing.elements)] = K
    for n, gens in RHO_SQUARE_FIELDS:
        K = make_field(n, gens)
        seen[(K.conductor, K.fixing.elements)] = K
    return tuple(seen.values())


@functools.lru_cache(maxsize=None)
def extended_frames():
    """(K, p, frame) for every extended field and p in {2, 3, 5} with zeta_p in K."""
    out = []
    for K in extended_fields():
        for p in (2, 3, 5):
            if root_of_unity_exponent(K, p):
                out.append((K, p, build_frame(K, p)))
    return tuple(out)


def corpus_qframes(r_count=2):
    """(frame, qframe, r) for every extended frame and its first ``r_count`` primes r = 1 mod p."""
    for K, p, fr in extended_frames():
        m = fr.constants.m
        for r in [x for x in range(3, 24) if is_prime(x) and x % p == 1][:r_count]:
            q = r if m % r else find_q0(p, fr.a, r, m)
            yield fr, extend_frame(fr, q, r), r


def corpus_setups():
    """Setups over B for every extended frame, and over B_q for two primes r each."""
    last = None
    for fr, qf, _ in corpus_qframes():
        if fr is not last:
            yield setup_of(fr)
            last = fr
        yield setup_of(qf)


def label(K, p=None, r=None):
    parts = [f"m{K.conductor}", "H" + "-".join(map(str, sorted(K.fixing.elements)[:4]))]
    if p is not None:
        parts.append(f"p{p}")
    if r is not None:
        parts.append(f"r{r}")
    return "_".join(parts)


@pytest.fixture(scope="session")
def frames():
    return extended_frames()
