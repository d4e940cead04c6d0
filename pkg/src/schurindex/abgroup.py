"""Finite abelian groups realized as subgroups of (Z/NZ)*.

Groups are small (a few thousand elements at most), so element sets are
enumerated eagerly and every structural question is answered by set
arithmetic on them.
"""

from functools import cached_property
from itertools import product
from math import gcd

from .arith import factorize, mult_order, vp
from .errors import ContainmentError, DomainError, MembershipError

SMALLEST = "smallest"
LARGEST = "largest"


def _closure(modulus, generators):
    elements = {1 % modulus}
    frontier = [1 % modulus]
    while frontier:
        new = []
        for x in frontier:
            for g in generators:
                y = x * g % modulus
                if y not in elements:
                    elements.add(y)
                    new.append(y)
        frontier = new
    return frozenset(elements)


def _pick(candidates, tiebreak):
    return min(candidates) if tiebreak == SMALLEST else max(candidates)


class UnitSubgroup:
    """The subgroup of (Z/modulus)* generated by ``generators``.

    ``tiebreak`` controls which element is chosen when computing a basis:
    the smallest residue (default) or the largest one.
    """

    def __init__(self, modulus, generators=(), tiebreak=SMALLEST, elements=None):
        if modulus < 1:
            raise DomainError("modulus must be positive")
        gens = tuple(int(g) % modulus for g in generators)
        for g in gens:
            if gcd(g, modulus) != 1:
                raise DomainError(f"{g} is not a unit mod {modulus}")
        self.modulus = modulus
        self.tiebreak = tiebreak
        if elements is None:
            self._generators = gens
            self.elements = _closure(modulus, gens)
        else:
            self._generators = None
            self.elements = elements

    @classmethod
    def from_elements(cls, modulus, elements, tiebreak=SMALLEST):
        elements = frozenset(int(x) % modulus for x in elements)
        return cls(modulus, (), tiebreak=tiebreak, elements=elements)

    @property
    def generators(self):
        if self._generators is None:
            self._generators = tuple(g for g, _ in self.basis)
        return self._generators

    def __len__(self):
        return len(self.elements)

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, x):
        return int(x) % self.modulus in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    def __eq__(self, other):
        return (
            isinstance(other, UnitSubgroup)
            and self.modulus == other.modulus
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((self.modulus, self.elements))

    def __repr__(self):
        return f"UnitSubgroup(mod {self.modulus}, order {self.order}, basis {self.basis})"

    def element_order(self, x):
        return mult_order(int(x), self.modulus)

    def issubgroup(self, other):
        return self.modulus == other.modulus and self.elements <= other.elements

    def subgroup(self, generators):
        return UnitSubgroup(self.modulus, generators, tiebreak=self.tiebreak)

    def filter(self, predicate):
        """Subgroup of elements satisfying ``predicate`` (caller guarantees closure)."""
        return UnitSubgroup.from_elements(
            self.modulus, [x for x in self.elements if predicate(x)], self.tiebreak
        )

    @cached_property
    def basis(self):
        return basis_of(self)

    @cached_property
    def exponent(self):
        out = 1
        for _, q in self.basis:
            out = out * q // gcd(out, q)
        return out


def span(modulus, generators, tiebreak=SMALLEST):
    return UnitSubgroup(modulus, generators, tiebreak=tiebreak)


def _sylow_elements(S, ell):
    n = S.order
    cofactor = n // ell ** vp(ell, n)
    return {pow(x, cofactor, S.modulus) for x in S.elements}


def _extend_basis(modulus, elements, seed, tiebreak):
    """Greedily complete ``seed`` to a basis of the p-group ``elements``.

    ``seed`` must already span a direct summand (true for a single element
    of maximal order).  Each step adds an element whose order equals its
    order modulo the current span and is maximal among such, which keeps the
    span a direct summand.
    """
    basis = list(seed)
    current = _closure(modulus, [g for g, _ in basis])
    while len(current) < len(elements):
        best, candidates = 0, []
        for x in elements:
            if x in current:
                continue
            order = mult_order(x, modulus)
            coset = 1
            y = x
            while y not in current:
                y = y * x % modulus
                coset += 1
            if coset != order:
                continue
            if order > best:
                best, candidates = order, [x]
            elif order == best:
                candidates.append(x)
        g = _pick(candidates, tiebreak)
        basis.append((g, best))
        current = _closure(modulus, [h for h, _ in basis])
    return basis


def basis_of(S):
    """Independent generators ``[(c_i, |c_i|)]`` with S the direct product of the <c_i>.

    Sylow subgroups are handled one prime at a time (ascending), each by
    greedy extraction of elements of maximal order.
    """
    n = S.order
    if n == 1:
        return []
    basis = []
    for ell, _ in factorize(n):
        sylow = _sylow_elements(S, ell)
        basis.extend(_extend_basis(S.modulus, sylow, [], S.tiebreak))
    return basis


def complement_basis(S, seed):
    """Extend ``seed`` (an element of maximal order in the p-group S) to a basis."""
    return _extend_basis(S.modulus, S.elements, [(seed, mult_order(seed, S.modulus))], S.tiebreak)


def power_subgroup(S, k):
    """``{s**k : s in S}``."""
    if k < 1:
        raise DomainError("k must be positive")
    return UnitSubgroup.from_elements(
        S.modulus, {pow(x, k, S.modulus) for x in S.elements}, S.tiebreak
    )


def coset_order(g, S, k=1):
    """Smallest t > 0 with ``g**t`` in ``S**k``."""
    target = power_subgroup(S, k).elements if k != 1 else S.elements
    N = S.modulus
    g %= N
    if gcd(g, N) != 1:
        raise DomainError(f"{g} is not a unit mod {N}")
    t, y = 1, g
    while y not in target:
        y = y * g % N
        t += 1
    return t


def invariant_factors(counts_by_prime):
    """Turn ``{ell: [|Q[ell^i]| for i = 0, 1, ...]}`` into invariant factors."""
    primary = []
    for ell, counts in counts_by_prime.items():
        # number of cyclic factors of order >= ell^i is log_ell(|Q[ell^i]| / |Q[ell^(i-1)]|)
        ranks = []
        for i in range(1, len(counts)):
            ratio = counts[i] // counts[i - 1]
            ranks.append(vp(ell, ratio) if ratio > 1 else 0)
        exps = []
        for i, rk in enumerate(ranks):
            nxt = ranks[i + 1] if i + 1 < len(ranks) else 0
            exps.extend([i + 1] * (rk - nxt))
        primary.append(sorted((ell ** e for e in exps), reverse=True))
    width = max((len(x) for x in primary), default=0)
    factors = []
    for i in range(width):
        f = 1
        for col in primary:
            if i < len(col):
                f *= col[i]
        factors.append(f)
    return sorted(factors)


def quotient_shape(G, H):
    """Return ``(is_cyclic, invariant_factors)`` of G/H."""
    if not H.issubgroup(G):
        raise ContainmentError("H is not contained in G")
    index = G.order // H.order
    counts = {}
    for ell, k in factorize(index) if index > 1 else ():
        row = []
        for i in range(k + 1):
            e = ell ** i
            hits = sum(1 for x in G.elements if pow(x, e, G.modulus) in H.elements)
            row.append(hits // H.order)
        counts[ell] = row
    factors = invariant_factors(counts)
    return len(factors) <= 1, factors


def decompose_in_basis(g, basis, modulus):
    """Exponents ``x`` with ``g = prod c_i**x_i`` and ``0 <= x_i < q_i``."""
    g %= modulus
    table = _dlog_table(tuple(basis), modulus)
    try:
        return list(table[g])
    except KeyError:
        raise MembershipError(f"{g} is not in the span of the basis mod {modulus}") from None


def recompose(exponents, basis, modulus):
    out = 1 % modulus
    for x, (c, _) in zip(exponents, basis):
        out = out * pow(c, x, modulus) % modulus
    return out


_DLOG_CACHE = {}


def _dlog_table(basis, modulus):
    key = (basis, modulus)
    table = _DLOG_CACHE.get(key)
    if table is None:
        table = {}
        for exps in product(*(range(q) for _, q in basis)):
            table[recompose(exps, basis, modulus)] = exps
        if len(_DLOG_CACHE) > 256:
            _DLOG_CACHE.clear()
        _DLOG_CACHE[key] = table
    return table


def is_direct_product(modulus, factors, target):
    """True if the subgroups ``factors`` form an internal direct product equal to ``target``."""
    size = 1
    gens = []
    for F in factors:
        size *= F.order
        gens.extend(F.generators)
    spanned = _closure(modulus, gens)
    return spanned == target.elements and size == len(spanned)
