"""Factor-set data for abelian groups acting on a cyclic group W = <zeta>.

Roots of unity are integer exponents of zeta, so W is Z/word and all
arithmetic is additive.  A group element u_g of an extension of G by W is
kept in normal form ``w * u_1^x_1 ... u_k^x_k`` with ``0 <= x_i < q_i``.

Conventions: ``u_g w u_g^-1 = action_g(w)``, ``u_j u_i = beta_ij u_i u_j``,
``u_i^q_i = gamma_i u_1^t_1 ... u_{i-1}^t_{i-1}`` and ``[x, y] = x y x^-1 y^-1``.
"""

from dataclasses import dataclass, field, replace
from math import gcd

import numpy as np

from .arith import geometric_sum_int, inverse_mod, mult_order, vp, vp_mod
from .errors import DomainError, InvariantViolation, ShapeError
from .field import ramification_over_Q


# ---------------------------------------------------------------------------
# General presentations (any generator list of a finite abelian group)


@dataclass(frozen=True)
class Presentation:
    """Relative orders, power tails and action multipliers of a generator list."""

    orders: tuple
    tails: tuple
    actions: tuple
    word: int

    def __post_init__(self):
        k = len(self.orders)
        if len(self.tails) != k or len(self.actions) != k:
            raise ShapeError("orders, tails and actions must have equal length")
        for i, (q, tail) in enumerate(zip(self.orders, self.tails)):
            if q < 1:
                raise ShapeError(f"relative order q_{i} must be positive")
            if len(tail) != i:
                raise ShapeError(f"tail {i} must have length {i}")
            for j, t in enumerate(tail):
                if not 0 <= t < self.orders[j]:
                    raise ShapeError(f"t_{j}^({i}) = {t} outside [0, {self.orders[j]})")
        for u in self.actions:
            if gcd(u, self.word) != 1:
                raise DomainError(f"action multiplier {u} is not a unit mod {self.word}")

    @property
    def rank(self):
        return len(self.orders)

    def norm(self, i, t):
        """Scalar s with N_i^t(w) = s * w."""
        return geometric_sum_int(self.actions[i], t) % self.word


@dataclass
class GeneralData:
    """Data (beta_ij, gamma_i) for a presentation; beta is a full k x k matrix."""

    beta: list
    gamma: list
    word: int

    @classmethod
    def trivial(cls, k, word):
        return cls([[0] * k for _ in range(k)], [0] * k, word)

    @classmethod
    def from_slots(cls, k, slots, word):
        """Build from the upper-triangle-then-gamma slot vector."""
        beta = [[0] * k for _ in range(k)]
        pos = 0
        for i in range(k):
            for j in range(i + 1, k):
                beta[i][j] = int(slots[pos]) % word
                beta[j][i] = -int(slots[pos]) % word
                pos += 1
        gamma = [int(x) % word for x in slots[pos:pos + k]]
        return cls(beta, gamma, word)

    def slots(self):
        k = len(self.gamma)
        upper = [self.beta[i][j] % self.word for i in range(k) for j in range(i + 1, k)]
        return tuple(upper + [g % self.word for g in self.gamma])


def slot_count(k):
    return k * (k - 1) // 2 + k


def _check_general_shape(pres, data):
    k = pres.rank
    if len(data.gamma) != k or len(data.beta) != k or any(len(row) != k for row in data.beta):
        raise ShapeError(f"data does not match a presentation with {k} generators")
    if data.word != pres.word:
        raise ShapeError("data and presentation use different words")


def validate_general(pres, data):
    """Check C1, C2 and C3 for general data; returns ``(valid, violations)``.

    Violations are tuples ``(condition, indices)`` with 0-based indices.
    """
    _check_general_shape(pres, data)
    M = pres.word
    k = pres.rank
    act = pres.actions
    beta = [[x % M for x in row] for row in data.beta]
    gamma = [x % M for x in data.gamma]
    bad = []
    for i in range(k):
        if beta[i][i]:
            bad.append(("C1", (i, i)))
        for j in range(i + 1, k):
            if (beta[i][j] + beta[j][i]) % M:
                bad.append(("C1", (i, j)))
    for i in range(k):
        for j in range(k):
            for l in range(k):
                lhs = beta[i][j] + beta[j][l] + beta[l][i]
                rhs = act[l] * beta[i][j] + act[i] * beta[j][l] + act[j] * beta[l][i]
                if (lhs - rhs) % M:
                    bad.append(("C2", (i, j, l)))
    for i in range(k):
        tail = pres.tails[i]
        for j in range(k):
            lhs = pres.norm(i, pres.orders[i]) * beta[i][j] + gamma[i]
            rhs = act[j] * gamma[i]
            prefix = 1
            for l, t in enumerate(tail):
                rhs += prefix * pres.norm(l, t) * beta[l][j]
                prefix = prefix * pow(act[l], t, M) % M
            if (lhs - rhs) % M:
                bad.append(("C3", (i, j)))
    return not bad, bad


# ---------------------------------------------------------------------------
# Normal-form collection


class Collector:
    """Multiplication of normal forms ``(w, x)`` under the relations of given data.

    W-values may be Python ints or numpy integer vectors; with unit vectors as
    data the W-parts come out as linear forms in the data.
    """

    def __init__(self, pres, beta, gamma, zero=0):
        self.pres = pres
        self.beta = beta
        self.gamma = gamma
        self.zero = zero
        self.M = pres.word

    def _prefix_action(self, x, upto):
        M = self.M
        out = 1
        for l in range(upto):
            if x[l]:
                out = out * pow(self.pres.actions[l], x[l], M) % M
        return out

    def mul_gen(self, w, x, i):
        """Right-multiply the normal form ``(w, x)`` by ``u_i``; ``x`` is updated in place."""
        pres, M = self.pres, self.M
        k = pres.rank
        acc = self.zero
        for j in range(k - 1, i, -1):
            if x[j]:
                acc = (pow(pres.actions[j], x[j], M) * acc + pres.norm(j, x[j]) * self.beta[i][j]) % M
        w = (w + self._prefix_action(x, i + 1) * acc) % M
        x[i] += 1
        if x[i] == pres.orders[i]:
            x[i] = 0
            w = (w + self._prefix_action(x, i) * self.gamma[i]) % M
            suffix = x[i + 1:]
            for j in range(i + 1, k):
                x[j] = 0
            for l, t in enumerate(pres.tails[i]):
                for _ in range(t):
                    w = self.mul_gen(w, x, l)
            x[i + 1:] = suffix
        return w

    def multiply(self, left, right):
        """Product of normal forms ``left * right``."""
        w1, x1 = left
        w2, x2 = right
        x = list(x1)
        w = (w1 + self._prefix_action(x, len(x)) * w2) % self.M
        for i, e in enumerate(x2):
            for _ in range(e):
                w = self.mul_gen(w, x, i)
        return w, x

    def monomial(self, x):
        return self.zero, list(x)

    def power(self, elem, e):
        out = (self.zero, [0] * self.pres.rank)
        for _ in range(e):
            out = self.multiply(out, elem)
        return out

    def commutator_w(self, x, y):
        """W-part of [u_x, u_y] for monomials x, y (which commute modulo W)."""
        wa, xa = self.multiply(self.monomial(x), self.monomial(y))
        wb, xb = self.multiply(self.monomial(y), self.monomial(x))
        if xa != xb:
            raise InvariantViolation("monomials do not commute modulo W")
        return (wa - wb) % self.M


def symbolic_collector(pres):
    """Collector whose W-parts are linear forms over the slot vector."""
    k = pres.rank
    n = slot_count(k)
    M = pres.word
    unit = np.eye(n, dtype=np.int64)
    beta = [[np.zeros(n, dtype=np.int64) for _ in range(k)] for _ in range(k)]
    pos = 0
    for i in range(k):
        for j in range(i + 1, k):
            beta[i][j] = unit[pos].copy()
            beta[j][i] = (-unit[pos]) % M
            pos += 1
    gamma = [unit[pos + i].copy() for i in range(k)]
    return Collector(pres, beta, gamma, zero=np.zeros(n, dtype=np.int64))


@dataclass
class ExtensionGroup:
    """The group generated by W and u_1..u_k subject to the relations of the data."""

    pres: Presentation
    data: GeneralData
    collector: Collector

    @property
    def order(self):
        out = self.pres.word
        for q in self.pres.orders:
            out *= q
        return out

    def elements(self):
        from itertools import product
        for x in product(*(range(q) for q in self.pres.orders)):
            for w in range(self.pres.word):
                yield w, list(x)

    def multiply(self, a, b):
        return self.collector.multiply(a, b)

    def identity(self):
        return 0, [0] * self.pres.rank

    def generator(self, i):
        x = [0] * self.pres.rank
        w = self.collector.mul_gen(0, x, i)
        return w, x

    def project(self, elem):
        """Image in G as the exponent vector over the generator list."""
        return list(elem[1])

    def conjugation_multiplier(self, elem):
        """u w u^-1 = multiplier * w for the element u."""
        return self.collector._prefix_action(elem[1], self.pres.rank)

    def extract_data(self):
        k = self.pres.rank
        M = self.pres.word
        beta = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                wa, _ = self.multiply(self.generator(j), self.generator(i))
                wb, _ = self.multiply(self.generator(i), self.generator(j))
                beta[i][j] = (wa - wb) % M
        gamma = []
        for i in range(k):
            w, x = self.collector.power(self.generator(i), self.pres.orders[i])
            if x != list(self.pres.tails[i]) + [0] * (k - i):
                raise InvariantViolation("power relation lands on the wrong monomial")
            gamma.append(w % M)
        return GeneralData(beta, gamma, M)


def build_extension(pres, data):
    """Realize valid data as a group in normal form; refuses invalid data."""
    ok, bad = validate_general(pres, data)
    if not ok:
        raise DomainError(f"data violates {bad[:8]}")
    return ExtensionGroup(pres, data, Collector(pres, data.beta, data.gamma))


# ---------------------------------------------------------------------------
# Cyclic-W setups coming from a frame


@dataclass(frozen=True)
class CyclicSetup:
    """Generators c_1..c_n (of B), rho, sigma with the action on zeta = zeta_{p^{a+b}}."""

    p: int
    a: int
    b: int
    orders: tuple
    t: tuple
    rho_order: int
    t_rho: int
    q_sigma: int
    c: int
    quotient_cyclic: bool
    generators: tuple = ()

    @property
    def word(self):
        return self.p ** (self.a + self.b)

    @property
    def n(self):
        return len(self.orders)

    @property
    def has_rho(self):
        return self.rho_order > 1

    @property
    def V(self):
        """V(q_sigma) reduced mod the word."""
        return geometric_sum_int(self.c, self.q_sigma) % self.word

    @property
    def invariant_step(self):
        """W^G consists of the multiples of p^b."""
        return self.p ** self.b

    def presentation(self):
        n = self.n
        orders = list(self.orders)
        tails = [(0,) * i for i in range(n)]
        actions = [1] * n
        if self.has_rho:
            orders.append(self.rho_order)
            tails.append((0,) * n)
            actions.append(self.word - 1)
        sigma_tail = tuple(self.t) + ((2 * self.t_rho,) if self.has_rho else ())
        orders.append(self.q_sigma)
        tails.append(sigma_tail)
        actions.append(self.c % self.word)
        return Presentation(tuple(orders), tuple(tails), tuple(actions), self.word)

    def fixed(self, x):
        M = self.word
        ok = (self.c - 1) * x % M == 0
        if self.has_rho:
            ok = ok and 2 * x % M == 0
        return ok


def setup_of(frame):
    """CyclicSetup for a GaloisFrame (basis of B) or a QFrame (basis of B_q)."""
    from .frame import QFrame

    if isinstance(frame, QFrame):
        base = frame.base
        basis = frame.Bq_basis
        t = [0] + list(base.t)
        gens = tuple(g for g, _ in basis) + (frame.lift(base.rho), frame.lift(base.sigma))
    else:
        base = frame
        basis = frame.B_basis
        t = list(frame.t)
        gens = tuple(g for g, _ in basis) + (frame.rho, frame.sigma)
    return CyclicSetup(
        p=base.p, a=base.a, b=base.b,
        orders=tuple(q for _, q in basis), t=tuple(t),
        rho_order=base.rho_order, t_rho=base.t_rho,
        q_sigma=base.q_sigma, c=base.c % base.word,
        quotient_cyclic=base.quotient_cyclic, generators=gens,
    )


@dataclass
class CocycleData:
    """Data (beta, gamma) relative to c_1..c_n, rho, sigma as exponents of zeta."""

    beta: list
    beta_sigma: list
    beta_rho: list
    beta_sigma_rho: int
    gamma: list
    gamma_rho: int
    gamma_sigma: int
    word: int

    @classmethod
    def trivial(cls, n, word):
        return cls([[0] * n for _ in range(n)], [0] * n, [0] * n, 0, [0] * n, 0, 0, word)

    @property
    def n(self):
        return len(self.gamma)

    def to_vector(self):
        """Variables in the order: beta_ij (i<j), beta_i sigma, beta_i rho, beta_sigma rho, gamma_i, gamma_rho, gamma_sigma."""
        n, M = self.n, self.word
        out = [self.beta[i][j] % M for i in range(n) for j in range(i + 1, n)]
        out += [x % M for x in self.beta_sigma]
        out += [x % M for x in self.beta_rho]
        out.append(self.beta_sigma_rho % M)
        out += [x % M for x in self.gamma]
        out += [self.gamma_rho % M, self.gamma_sigma % M]
        return tuple(out)

    @classmethod
    def from_vector(cls, n, vec, word):
        vec = [int(v) % word for v in vec]
        if len(vec) != variable_count(n):
            raise ShapeError(f"expected {variable_count(n)} variables, got {len(vec)}")
        beta = [[0] * n for _ in range(n)]
        pos = 0
        for i in range(n):
            for j in range(i + 1, n):
                beta[i][j] = vec[pos]
                beta[j][i] = -vec[pos] % word
                pos += 1
        bs = vec[pos:pos + n]
        br = vec[pos + n:pos + 2 * n]
        bsr = vec[pos + 2 * n]
        gam = vec[pos + 2 * n + 1:pos + 3 * n + 1]
        return cls(beta, bs, br, bsr, gam, vec[-2], vec[-1], word)

    def to_json(self):
        return {
            "beta": [list(row) for row in self.beta],
            "beta_sigma": list(self.beta_sigma),
            "beta_rho": list(self.beta_rho),
            "beta_sigma_rho": self.beta_sigma_rho,
            "gamma": list(self.gamma),
            "gamma_rho": self.gamma_rho,
            "gamma_sigma": self.gamma_sigma,
            "word": self.word,
        }


def variable_count(n):
    return n * (n - 1) // 2 + 3 * n + 3


def variable_names(n):
    names = [f"beta[{i},{j}]" for i in range(n) for j in range(i + 1, n)]
    names += [f"beta[{i},sigma]" for i in range(n)]
    names += [f"beta[{i},rho]" for i in range(n)]
    names.append("beta[sigma,rho]")
    names += [f"gamma[{i}]" for i in range(n)]
    names += ["gamma[rho]", "gamma[sigma]"]
    return names


def general_slot_map(setup):
    """Integer matrix L with general slots = L @ cyclic variables (mod word)."""
    n = setup.n
    k = n + (2 if setup.has_rho else 1)
    rho_idx = n if setup.has_rho else None
    nv = variable_count(n)
    iv_beta = {}
    pos = 0
    for i in range(n):
        for j in range(i + 1, n):
            iv_beta[(i, j)] = pos
            pos += 1
    iv_bs = pos
    iv_br = pos + n
    iv_bsr = pos + 2 * n
    iv_g = pos + 2 * n + 1
    iv_grho = nv - 2
    iv_gsig = nv - 1

    rows = []
    for i in range(k):
        for j in range(i + 1, k):
            row = [0] * nv
            if j < n:
                row[iv_beta[(i, j)]] = 1
            elif j == rho_idx:
                row[iv_br + i] = 1
            elif i == rho_idx:  # (rho, sigma): beta_rho,sigma = -beta_sigma,rho
                row[iv_bsr] = -1
            else:  # (i, sigma)
                row[iv_bs + i] = 1
            rows.append(row)
    for i in range(k):
        row = [0] * nv
        if i < n:
            row[iv_g + i] = 1
        elif i == rho_idx:
            row[iv_grho] = 1
        else:
            row[iv_gsig] = 1
        rows.append(row)
    return np.array(rows, dtype=np.int64).reshape(len(rows), nv)


def to_general(setup, data):
    """Rewrite CocycleData as GeneralData over the presentation of ``setup``."""
    L = general_slot_map(setup)
    vec = np.array(data.to_vector(), dtype=np.int64)
    slots = (L @ vec) % setup.word
    k = setup.presentation().rank
    return GeneralData.from_slots(k, slots, setup.word)


def cyclic_constraints(setup):
    """The conditions of the cyclic case as labelled linear forms over the variables.

    Each entry is ``(label, indices, coefficients)``; the condition holds iff
    ``coefficients @ variables = 0 mod word``.  Antisymmetry (C1) is built
    into the variable layout and is checked separately on full matrices.
    """
    n, M = setup.n, setup.word
    nv = variable_count(n)
    pos = {}
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            pos[(i, j)] = k
            k += 1
    bs = k
    br = k + n
    bsr = k + 2 * n
    g0 = k + 2 * n + 1
    grho, gsig = nv - 2, nv - 1

    def beta_coef(i, j, coef, row):
        if i < j:
            row[pos[(i, j)]] += coef
        elif j < i:
            row[pos[(j, i)]] -= coef

    c, V = setup.c % M, setup.V
    out = []

    def add(label, idx, row):
        out.append((label, idx, np.array([x % M for x in row], dtype=np.int64)))

    for (i, j), v in pos.items():
        for mult in ((c - 1, 2) if setup.has_rho else (c - 1,)):
            row = [0] * nv
            row[v] = mult
            add("C2a", (i, j), row)
        row = [0] * nv
        row[v] = setup.orders[i]
        add("C3a", (i, j), row)
        row = [0] * nv
        row[v] = setup.orders[j]
        add("C3a", (j, i), row)
    for i in range(n):
        if setup.has_rho:
            row = [0] * nv
            row[bs + i] = 2
            row[br + i] = -(1 - c)
            add("C2b", (i,), row)
        row = [0] * nv
        row[bs + i] = setup.orders[i]
        row[g0 + i] = -(c - 1)
        add("C3b", (i,), row)
        row = [0] * nv
        row[bs + i] = -V
        for j in range(n):
            beta_coef(j, i, -setup.t[j], row)
        add("C3c", (i,), row)
    row = [0] * nv
    row[gsig] = c - 1
    for i in range(n):
        row[bs + i] += setup.t[i]
    add("C3d", (), row)
    if not setup.has_rho:
        for i in range(n):
            row = [0] * nv
            row[br + i] = 1
            add("C3e", (i,), row)
        for v in (bsr, grho):
            row = [0] * nv
            row[v] = 1
            add("C3e", (), row)
    else:
        for i in range(n):
            row = [0] * nv
            row[br + i] = setup.orders[i]
            row[g0 + i] = 2
            add("C3f", (i,), row)
        row = [0] * nv
        row[bsr] = V
        row[gsig] = 2
        for i in range(n):
            row[br + i] -= setup.t[i]
        add("C3f", (), row)
        for mult in (c - 1, 2):
            row = [0] * nv
            row[grho] = mult
            add("C3f", ("rho",), row)
    return out


def validate_cyclic_case(frame_or_setup, data):
    """Check the cyclic-case conditions; returns ``(valid, violations)``."""
    setup = frame_or_setup if isinstance(frame_or_setup, CyclicSetup) else setup_of(frame_or_setup)
    if data.n != setup.n or data.word != setup.word:
        raise ShapeError("data does not match the frame")
    M = setup.word
    bad = []
    for i in range(data.n):
        if data.beta[i][i] % M:
            bad.append(("C1", (i, i)))
        for j in range(i + 1, data.n):
            if (data.beta[i][j] + data.beta[j][i]) % M:
                bad.append(("C1", (i, j)))
    vec = np.array(data.to_vector(), dtype=np.int64)
    seen = set()
    for label, idx, row in cyclic_constraints(setup):
        if int(row @ vec) % M and (label, idx) not in seen:
            seen.add((label, idx))
            bad.append((label, idx))
    return not bad, bad


def sign_flip(setup, data, k):
    """Replace beta_{k sigma} by its negative (multiply by -1 in W)."""
    if setup.quotient_cyclic:
        raise DomainError("the sign flip applies to non-cyclic G/C only")
    if setup.orders[k] % 2 or setup.t[k] % 2:
        raise DomainError("q_k and t_k must both be even")
    bs = list(data.beta_sigma)
    bs[k] = (bs[k] + data.word // 2) % data.word
    return replace(data, beta_sigma=bs)


# ---------------------------------------------------------------------------
# Skew pairings


def pairing_exponent(p, a, q_i, q_j):
    return min(a, vp(p, q_i), vp(p, q_j))


@dataclass
class SkewPairing:
    """Antisymmetric matrix over a basis of B with values in <zeta_{p^a}> (exponents mod p^a)."""

    orders: tuple
    p: int
    a: int
    matrix: list

    @property
    def n(self):
        return len(self.orders)

    def bound(self, i, j):
        """a_ij: the entry (i, j) has order dividing p^{a_ij}."""
        if i == j:
            return 0
        return pairing_exponent(self.p, self.a, self.orders[i], self.orders[j])

    def violations(self):
        pa = self.p ** self.a
        bad = []
        if len(self.matrix) != self.n or any(len(r) != self.n for r in self.matrix):
            raise ShapeError("pairing matrix has the wrong shape")
        for i in range(self.n):
            for j in range(self.n):
                x = self.matrix[i][j] % pa
                if (x + self.matrix[j][i]) % pa:
                    bad.append(("antisymmetry", (i, j)))
                if x * self.p ** self.bound(i, j) % pa:
                    bad.append(("order", (i, j)))
        return bad

    def is_valid(self):
        return not self.violations()

    def value(self, x, y):
        """Exponent of Psi(prod c_i^x_i, prod c_j^y_j)."""
        pa = self.p ** self.a
        return sum(self.matrix[i][j] * x[i] * y[j] for i in range(self.n) for j in range(self.n)) % pa

    def __eq__(self, other):
        pa = self.p ** self.a
        return (
            isinstance(other, SkewPairing)
            and tuple(self.orders) == tuple(other.orders)
            and (self.p, self.a) == (other.p, other.a)
            and all(
                (self.matrix[i][j] - other.matrix[i][j]) % pa == 0
                for i in range(self.n) for j in range(self.n)
            )
        )


def all_skew_pairings(orders, p, a):
    """Every skew pairing of prod Z/q_i over <zeta_{p^a}>."""
    from itertools import product

    n = len(orders)
    pa = p ** a
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    choices = []
    for i, j in pairs:
        e = pairing_exponent(p, a, orders[i], orders[j])
        step = p ** (a - e)
        choices.append(range(0, pa, step))
    for vals in product(*choices):
        m = [[0] * n for _ in range(n)]
        for (i, j), v in zip(pairs, vals):
            m[i][j] = v
            m[j][i] = -v % pa
        yield SkewPairing(tuple(orders), p, a, m)


def pairing_from_data(setup, data):
    """The skew pairing Psi(c_i, c_j) = beta_ij read in <zeta_{p^a}>."""
    step = setup.invariant_step
    pa = setup.p ** setup.a
    m = []
    for row in data.beta:
        out = []
        for x in row:
            x %= setup.word
            if x % step:
                raise InvariantViolation("beta_ij is not fixed by G")
            out.append(x // step % pa)
        m.append(out)
    return SkewPairing(tuple(setup.orders), setup.p, setup.a, m)


def rho_square_forms(setup):
    """Linear forms giving [u_i, u_rho^2] for each c_i of B, over the data variables."""
    if not setup.has_rho:
        raise DomainError("rho is trivial for this frame")
    pres = setup.presentation()
    col = symbolic_collector(pres)
    L = general_slot_map(setup)
    rho2 = [0] * pres.rank
    rho2[setup.n] = 2 % pres.orders[setup.n]
    forms = []
    for i in range(setup.n):
        x = [0] * pres.rank
        x[i] = 1
        if rho2[setup.n] == 0:
            forms.append(np.zeros(L.shape[1], dtype=np.int64))
            continue
        forms.append(col.commutator_w(x, rho2) @ L % setup.word)
    return forms


def pairing_on_C(setup, data):
    """Exponents of the commutator pairing on B x <rho^2>, basis c_1..c_n, rho^2."""
    n, M = setup.n, setup.word
    vec = np.array(data.to_vector(), dtype=np.int64)
    extra = [int(f @ vec) % M for f in rho_square_forms(setup)] if setup.has_rho else [0] * n
    m = [[data.beta[i][j] % M for j in range(n)] + [extra[i]] for i in range(n)]
    m.append([-x % M for x in extra] + [0])
    return m


def realize_pairing(pairing, frame_or_setup):
    """Data inducing the given skew pairing (constructive converse of the pairing map)."""
    setup = frame_or_setup if isinstance(frame_or_setup, CyclicSetup) else setup_of(frame_or_setup)
    bad = pairing.violations()
    if bad:
        raise DomainError(f"not a skew pairing: {bad[:8]}")
    if tuple(pairing.orders) != tuple(setup.orders) or (pairing.p, pairing.a) != (setup.p, setup.a):
        raise ShapeError("pairing does not live on this frame's B")
    p, a, b = setup.p, setup.a, setup.b
    n, M = setup.n, setup.word
    pa = p ** a
    # beta_ij = zeta^(b_ij p^(a+b-a_ij)) with b exactly antisymmetric
    bmat = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            aij = pairing.bound(i, j)
            v = pairing.matrix[i][j] % pa // p ** (a - aij)
            bmat[i][j] = v
            bmat[j][i] = -v
    beta = [[bmat[i][j] * p ** (a + b - pairing.bound(i, j)) % M if i != j else 0
             for j in range(n)] for i in range(n)]
    data = CocycleData.trivial(n, M)
    data.beta = beta
    if setup.q_sigma == 1 and setup.c % M == 1:
        return data
    c = setup.c
    d = vp_mod(p, c - 1, a + b)
    e = a + b - d
    V = geometric_sum_int(c, setup.q_sigma)
    X1 = (c - 1) // p ** d
    X2 = V // p ** e
    Y1 = inverse_mod(X1 % M, M)
    Y2 = inverse_mod(X2 % M, M)
    t = setup.t
    xs, ys = [], []
    for i in range(n):
        x = Y2 * sum(t[j] * bmat[j][i] * p ** (a - pairing.bound(j, i)) for j in range(n))
        y = Y1 * Y2 * sum(t[j] * bmat[j][i] * setup.orders[i] // p ** pairing.bound(i, j) for j in range(n))
        xs.append(x)
        ys.append(y)
    data.beta_sigma = [-x * p ** (d - a) % M for x in xs]
    data.gamma = [-y % M for y in ys]
    if setup.has_rho:
        data.beta_rho = [Y1 * x % M for x in xs]
    return data


def max_pairing_value(B, h, g_order, p, a):
    """Largest order of Psi(h, g) over skew pairings of B x <g> into <zeta_{p^a}>.

    ``B`` is either a UnitSubgroup with ``h`` a residue, or a sequence of
    cyclic orders with ``h`` an exponent vector.
    """
    from .abgroup import UnitSubgroup, coset_order

    k = gcd(p ** a, g_order)
    if isinstance(B, UnitSubgroup):
        return coset_order(h, B, k)
    best = 1
    for q, x in zip(B, h):
        m = gcd(q, k)
        best = max(best, m // gcd(x % m, m) if m > 1 else 1)
    return best


def max_theta_eta(orders, s, t, p, a):
    """Largest order of Psi(theta, eta) as Psi runs over skew pairings of B."""
    n = len(orders)
    if len(s) != n or len(t) != n:
        raise ShapeError("exponent vectors must match the basis")
    best = 1
    for i in range(n):
        for j in range(i + 1, n):
            pe = p ** pairing_exponent(p, a, orders[i], orders[j])
            best = max(best, pe // gcd(pe, (s[i] * t[j] - s[j] * t[i]) % pe))
    return best


# ---------------------------------------------------------------------------
# The root of unity xi


@dataclass
class XiForms:
    """xi and xi_0 as linear forms over the cyclic-case variables."""

    setup: CyclicSetup
    xi: np.ndarray
    xi0: np.ndarray
    e: int
    f: int
    theta_form: list = field(default_factory=list)
    phi_form: list = field(default_factory=list)

    def evaluate(self, data, which="xi"):
        vec = np.array(data.to_vector(), dtype=np.int64)
        form = self.xi if which == "xi" else self.xi0
        return int(form @ vec) % self.setup.word


def _monomial(qframe, g, setup):
    nf = qframe.normal_form(g)
    if not setup.has_rho:
        if nf[-2]:
            raise InvariantViolation("rho exponent must vanish when rho = 1")
        nf = nf[:-2] + nf[-1:]
    return nf


def xi_forms(qframe, r):
    """Linear forms for xi = [u_theta, u_phi_q] gamma_theta^((r^f-1)/e) and for xi_0."""
    setup = setup_of(qframe)
    pres = setup.presentation()
    col = symbolic_collector(pres)
    M = setup.word
    e = mult_order(qframe.theta, qframe.Nq)
    if e == 0 or e % r == 0:
        raise InvariantViolation(f"ramification index {e} must be positive and prime to r")
    _, f = ramification_over_Q(qframe.base.K, r)
    if qframe.f0 != f:
        raise InvariantViolation("the Frobenius exponent must equal f(K/Q, r)")
    if (r ** f - 1) % e:
        raise InvariantViolation("e must divide r^f - 1")
    theta = _monomial(qframe, qframe.theta, setup)
    phi = _monomial(qframe, qframe.phi_q, setup)
    tail = [0] * pres.rank
    if setup.has_rho:
        tail[-2] = qframe.j_prime
    tail[-1] = qframe.j
    w_pow, x_pow = col.power(col.monomial(theta), e)
    if any(x_pow):
        raise InvariantViolation("theta^e is not trivial")
    scale = (r ** f - 1) // e % M
    xi_g = (col.commutator_w(theta, phi) + scale * w_pow) % M
    xi0_g = (col.commutator_w(theta, tail) + scale * w_pow) % M
    L = general_slot_map(setup)
    return XiForms(
        setup=setup, xi=(xi_g @ L) % M, xi0=(xi0_g @ L) % M, e=e, f=f,
        theta_form=theta, phi_form=phi,
    )


def xi_value(qframe, data, r, forms=None):
    """Exponent of zeta giving the root of unity xi for the data."""
    forms = forms or xi_forms(qframe, r)
    return forms.evaluate(data, "xi")


def xi0_value(qframe, data, r, forms=None):
    forms = forms or xi_forms(qframe, r)
    return forms.evaluate(data, "xi0")


def exponent_order(x, word):
    """Order of zeta^x in <zeta> of order ``word``."""
    return word // gcd(x % word, word)
