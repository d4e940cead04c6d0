"""Brute-force verification.

``brute_force_beta`` enumerates every valid data tuple in the restricted
value group and maximizes the order of xi.  ``enumerate_cocycles`` solves
the 2-cocycle identity directly on tiny groups, giving ground truth for the
validators.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from math import gcd, prod

import numpy as np
from .arith import factorize, vp
from .cocycle import (
    CocycleData,
    GeneralData,
    Presentation,
    cyclic_constraints,
    slot_count,
    variable_count,
    variable_names,
    xi_forms,
)
from .errors import DomainError, OracleRefusal
from .field import root_of_unity_exponent
from .frame import build_frame, extend_frame

DEFAULT_MAX_COMBINATIONS = 10 ** 8


@dataclass
class OracleLimits:
    max_combinations: int = DEFAULT_MAX_COMBINATIONS
    workers: int = 1


@dataclass
class OracleResult:
    beta: int
    max_order: int
    witness: object
    cardinality: int
    valid_count: int
    level_stats: list = field(default_factory=list)
    q: int = 0

    def to_json(self):
        return {
            "beta": self.beta,
            "max_order": self.max_order,
            "q": self.q,
            "cardinality": self.cardinality,
            "valid_count": self.valid_count,
            "pruning": [
                {"variable": name, "candidates": cand, "survivors": surv}
                for name, cand, surv in self.level_stats
            ],
            "witness": self.witness.to_json() if self.witness is not None else None,
        }


def value_exponent(constants, p):
    """Data take values in <zeta_{p^k}> for the returned k."""
    k = 4 if p ** constants.s == 2 else constants.s
    return min(k, constants.a + constants.b)


def value_lists(setup, constants):
    """Allowed exponents for each variable (forced zeros collapse to {0})."""
    M = setup.word
    step = setup.p ** (setup.a + setup.b - value_exponent(constants, setup.p))
    allowed = list(range(0, M, step))
    n = setup.n
    names = variable_names(n)
    out = []
    for name in names:
        forced = not setup.has_rho and ("rho" in name)
        out.append([0] if forced else allowed)
    return out


def _schedule(setup):
    """Group constraint rows by the last variable they involve."""
    nv = variable_count(setup.n)
    by_last = [[] for _ in range(nv)]
    for _, _, row in cyclic_constraints(setup):
        nz = np.nonzero(row % setup.word)[0]
        if len(nz) == 0:
            continue
        by_last[int(nz[-1])].append(row)
    return [np.array(rows, dtype=np.int64) if rows else None for rows in by_last]


def _search(setup, values, xi_form, leading):
    """Enumerate all valid assignments with the first variable in ``leading``."""
    M = setup.word
    sched = _schedule(setup)
    names = variable_names(setup.n)
    P = np.array(leading, dtype=np.int64).reshape(-1, 1)
    stats = []
    for k in range(len(values)):
        if k > 0:
            vals = np.array(values[k], dtype=np.int64)
            P = np.hstack([np.repeat(P, len(vals), axis=0), np.tile(vals, len(P)).reshape(-1, 1)])
        candidates = len(P)
        rows = sched[k]
        if rows is not None and len(P):
            mask = np.all((P @ rows[:, : k + 1].T) % M == 0, axis=1)
            P = P[mask]
        stats.append((names[k], candidates, len(P)))
    if len(P) == 0:
        return 0, None, 0, stats
    xi = (P @ xi_form) % M
    orders = M // np.gcd(xi, M)
    best = int(orders.max())
    hits = P[orders == best]
    witness = min(tuple(int(v) for v in row) for row in hits)
    return best, witness, len(P), stats


def _search_job(args):
    return _search(*args)


def _chunks(values, parts):
    parts = max(1, min(parts, len(values)))
    return [values[i::parts] for i in range(parts)]


def brute_force_beta(K, p, r, q, limits=None):
    """v_p of the largest |xi| over all valid data with q as auxiliary prime."""
    limits = limits or OracleLimits()
    if root_of_unity_exponent(K, p) == 0:
        return OracleResult(0, 1, None, 1, 1, [], q)
    frame = build_frame(K, p)
    return brute_force_qframe(extend_frame(frame, q, r), r, limits)


def brute_force_qframe(qframe, r, limits=None):
    """The enumeration behind ``brute_force_beta`` for an already extended frame."""
    limits = limits or OracleLimits()
    frame = qframe.base
    p, q = frame.p, qframe.q
    forms = xi_forms(qframe, r)
    setup = forms.setup
    values = value_lists(setup, frame.constants)
    cardinality = prod(len(v) for v in values)
    if cardinality > limits.max_combinations:
        raise OracleRefusal(
            f"data space has {cardinality} combinations (limit {limits.max_combinations})",
            cardinality=cardinality,
        )
    jobs = [(setup, values, forms.xi, chunk) for chunk in _chunks(values[0], limits.workers)]
    if limits.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=limits.workers) as pool:
            results = list(pool.map(_search_job, jobs))
    else:
        results = [_search(*job) for job in jobs]
    best, witness, count = 0, None, 0
    stats = None
    for order, wit, n_valid, st in results:
        count += n_valid
        if wit is not None and (order > best or (order == best and wit < witness)):
            best, witness = order, wit
        if stats is None:
            stats = [list(s) for s in st]
        else:
            for acc, s in zip(stats, st):
                acc[1] += s[1]
                acc[2] += s[2]
    data = CocycleData.from_vector(setup.n, witness, setup.word) if witness else None
    beta = vp(p, best) if best else 0
    return OracleResult(beta, best, data, cardinality, count, [tuple(s) for s in stats], q)


# ---------------------------------------------------------------------------
# Raw 2-cocycles on tiny groups


MAX_RAW_GROUP = 8
MAX_RAW_WORD = 4


class SmallAbelianGroup:
    """Z/n_1 x ... x Z/n_k with elements indexed in mixed radix."""

    def __init__(self, shape):
        self.shape = tuple(int(n) for n in shape if n > 1)
        self.elements = list(product(*(range(n) for n in self.shape)))
        self.index = {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self):
        return len(self.elements)

    def add(self, g, h):
        return tuple((x + y) % n for x, y, n in zip(g, h, self.shape))

    def scale(self, g, t):
        return tuple(x * t % n for x, n in zip(g, self.shape))

    @property
    def zero(self):
        return tuple(0 for _ in self.shape)

    def element_order(self, g):
        out = 1
        for x, n in zip(g, self.shape):
            out = out * (n // gcd(x, n)) // gcd(out, n // gcd(x, n))
        return out

    def multiplier(self, action, g, word):
        """Action of g on Z/word given the multipliers of the standard generators."""
        out = 1
        for a, x in zip(action, g):
            out = out * pow(a, x, word) % word
        return out


def all_actions(shape, word):
    """Every homomorphism from the group of the given shape to Aut(Z/word)."""
    G = SmallAbelianGroup(shape)
    units = [u for u in range(1, max(word, 2)) if gcd(u, word) == 1] or [0]
    out = []
    for choice in product(units, repeat=len(G.shape)):
        if all(pow(u, n, word) == 1 % word for u, n in zip(choice, G.shape)):
            out.append(tuple(u % word if word > 1 else 0 for u in choice))
    return out


def _cocycle_system(G, word, action):
    nonzero = [g for g in G.elements if g != G.zero]
    col = {(g, h): i for i, (g, h) in enumerate(product(nonzero, nonzero))}
    rows = set()
    for g, h, k in product(nonzero, repeat=3):
        row = [0] * len(col)
        gh, hk = G.add(g, h), G.add(h, k)
        row[col[(g, h)]] += 1
        if gh != G.zero:
            row[col[(gh, k)]] += 1
        row[col[(h, k)]] -= G.multiplier(action, g, word)
        if hk != G.zero:
            row[col[(g, hk)]] -= 1
        row = tuple(x % word for x in row)
        if any(row):
            rows.add(row)
    return sorted(rows), col


def smith_mod_prime_power(A, modulus):
    """Diagonalize A over Z/modulus (a prime power) by unimodular row and column moves.

    Returns ``(diag, T)`` with ``S A T = diag`` for some invertible S; only the
    column transform T is tracked since kernels are read off from it.
    """
    fac = factorize(modulus)
    if len(fac) != 1:
        raise DomainError("modulus must be a prime power")
    p, _ = fac[0]
    M = modulus
    A = np.array(A, dtype=np.int64) % M
    rows, cols = A.shape
    T = np.eye(cols, dtype=np.int64)
    diag = []

    def val(x):
        return vp(p, int(x)) if x % M else None

    for k in range(min(rows, cols)):
        sub = A[k:, k:]
        nz = np.argwhere(sub % M)
        if len(nz) == 0:
            break
        vals = [val(sub[i, j]) for i, j in nz]
        i, j = nz[int(np.argmin(vals))]
        i, j = i + k, j + k
        A[[k, i]] = A[[i, k]]
        A[:, [k, j]] = A[:, [j, k]]
        T[:, [k, j]] = T[:, [j, k]]
        piv = int(A[k, k])
        v = val(piv)
        unit_inv = pow(piv // p ** v, -1, M)
        # column k scaled to make the pivot exactly p^v
        A[:, k] = A[:, k] * unit_inv % M
        T[:, k] = T[:, k] * unit_inv % M
        step = p ** v
        for r in range(rows):
            if r != k and A[r, k] % M:
                A[r] = (A[r] - (int(A[r, k]) // step) * A[k]) % M
        for c in range(cols):
            if c != k and A[k, c] % M:
                f = int(A[k, c]) // step
                A[:, c] = (A[:, c] - f * A[:, k]) % M
                T[:, c] = (T[:, c] - f * T[:, k]) % M
        diag.append(step)
    return diag, T


def kernel_mod_prime_power(rows, nvar, modulus):
    """Generators and additive orders of {x : rows @ x = 0 mod modulus}."""
    if nvar == 0 or modulus == 1:
        return [], []
    if not len(rows):
        unit = np.eye(nvar, dtype=np.int64)
        return [unit[i] for i in range(nvar)], [modulus] * nvar
    diag, T = smith_mod_prime_power(np.array(rows, dtype=np.int64), modulus)
    gens, orders = [], []
    for i in range(nvar):
        g = gcd(int(diag[i]) if i < len(diag) else 0, modulus)
        if g == 1:
            continue
        gens.append(T[:, i] * (modulus // g) % modulus)
        orders.append(g)
    return gens, orders


def valid_data_kernel(setup):
    """Generators (with orders) of the group of all valid cyclic-case data vectors."""
    rows = [row for _, _, row in cyclic_constraints(setup)]
    return kernel_mod_prime_power(rows, variable_count(setup.n), setup.word)


def form_vanishes(setup, form):
    """True iff the linear form is zero on every valid data vector."""
    gens, _ = valid_data_kernel(setup)
    return all(int(np.dot(form, g)) % setup.word == 0 for g in gens)


def cocycle_kernel(shape, word, action):
    """Generators of the normalized 2-cocycle group with their additive orders.

    Returns ``(columns, generators, orders)`` where ``columns`` maps (g, h) to
    a coordinate and each generator is an integer vector mod ``word``.
    """
    G = SmallAbelianGroup(shape)
    if G.order > MAX_RAW_GROUP or word > MAX_RAW_WORD:
        raise OracleRefusal(
            f"raw cocycle solve needs |G| <= {MAX_RAW_GROUP} and |W| <= {MAX_RAW_WORD}",
            cardinality=word ** ((G.order - 1) ** 2),
        )
    rows, col = _cocycle_system(G, word, action)
    gens, orders = kernel_mod_prime_power(rows, len(col), word)
    return col, gens, orders


def enumerate_cocycles(shape, word, action):
    """Stream every normalized 2-cocycle as a dict {(g, h): exponent}."""
    col, gens, orders = cocycle_kernel(shape, word, action)
    if not col:
        yield {}
        return
    keys = list(col)
    for coeffs in product(*(range(o) for o in orders)):
        vec = np.zeros(len(keys), dtype=np.int64)
        for c, g in zip(coeffs, gens):
            if c:
                vec += c * g
        vec %= word
        yield {key: int(vec[col[key]]) for key in keys}


def cocycle_count(shape, word, action):
    _, _, orders = cocycle_kernel(shape, word, action)
    return prod(orders)


def presentation_for(shape, word, action, generators):
    """Relative orders and tails of a generator list of the small group."""
    G = SmallAbelianGroup(shape)
    gens = [tuple(g) for g in generators]
    orders, tails = [], []
    span = {G.zero: ()}
    for g in gens:
        q, y = 1, g
        while y not in span:
            y = G.add(y, g)
            q += 1
        tails.append(span[y])
        orders.append(q)
        span = {
            G.add(base, G.scale(g, t)): exps + (t,)
            for base, exps in span.items()
            for t in range(q)
        }
    if len(span) != G.order:
        raise DomainError("generators do not generate the group")
    actions = tuple(G.multiplier(action, g, word) % max(word, 1) for g in gens)
    return Presentation(tuple(orders), tuple(tuple(t) for t in tails), actions, word)


def induced_data_map(shape, word, action, generators):
    """Matrix mapping a cocycle vector to the slots of its induced data."""
    G = SmallAbelianGroup(shape)
    pres = presentation_for(shape, word, action, generators)
    nonzero = [g for g in G.elements if g != G.zero]
    col = {(g, h): i for i, (g, h) in enumerate(product(nonzero, nonzero))}
    nvar = len(col)
    gens = [tuple(g) for g in generators]

    def alpha(g, h):
        v = np.zeros(nvar, dtype=np.int64)
        if g != G.zero and h != G.zero:
            v[col[(g, h)]] = 1
        return v

    def times(left, h):
        w, g = left
        return (w + alpha(g, h)) % max(word, 1), G.add(g, h)

    def word_of(exps):
        out = (np.zeros(nvar, dtype=np.int64), G.zero)
        for g, t in zip(gens, exps):
            for _ in range(t):
                out = times(out, g)
        return out

    k = pres.rank
    rows = []
    for i in range(k):
        for j in range(i + 1, k):
            rows.append((alpha(gens[j], gens[i]) - alpha(gens[i], gens[j])) % max(word, 1))
    for i in range(k):
        w_pow, g_pow = word_of([0] * i + [pres.orders[i]])
        w_tail, g_tail = word_of(list(pres.tails[i]))
        if g_pow != g_tail:
            raise DomainError("power relation mismatch")
        rows.append((w_pow - w_tail) % max(word, 1))
    return pres, np.array(rows, dtype=np.int64).reshape(len(rows), nvar), col


def induced_data(shape, word, action, generators, cocycle):
    """GeneralData induced by one cocycle (full beta matrix, computed pairwise)."""
    G = SmallAbelianGroup(shape)
    gens = [tuple(g) for g in generators]
    pres, D, col = induced_data_map(shape, word, action, generators)
    vec = np.zeros(len(col), dtype=np.int64)
    for key, i in col.items():
        vec[i] = cocycle.get(key, 0)
    slots = (D @ vec) % max(word, 1)
    k = pres.rank

    def a(g, h):
        return cocycle.get((g, h), 0) if g != G.zero and h != G.zero else 0

    beta = [[(a(gens[j], gens[i]) - a(gens[i], gens[j])) % max(word, 1) for j in range(k)] for i in range(k)]
    gamma = [int(x) for x in slots[-k:]] if k else []
    return GeneralData(beta, gamma, word)


def induced_data_set(shape, word, action, generators):
    """All data slot tuples induced by normalized cocycles (as a set)."""
    col, gens, _ = cocycle_kernel(shape, word, action)
    pres, D, _ = induced_data_map(shape, word, action, generators)
    k = pres.rank
    images = [tuple(int(x) for x in (D @ g) % word) for g in gens] if col else []
    zero = (0,) * slot_count(k)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for g in images:
                y = tuple((a + b) % word for a, b in zip(v, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return pres, seen


def default_workers():
    return max(1, min(8, os.cpu_count() or 1))
