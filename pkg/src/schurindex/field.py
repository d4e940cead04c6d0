"""Abelian number fields as fixed fields inside cyclotomic fields.

A field K is stored as ``(n, H)`` with K the fixed field of H in Q(zeta_n),
where ``u`` in (Z/nZ)* acts by ``zeta_n -> zeta_n**u``.  Every question we
ask about K (roots of unity, ramification, Frobenius elements) reduces to
arithmetic in unit groups, so no algebraic numbers ever appear.
"""

from dataclasses import dataclass
from functools import cached_property
from math import gcd

from .abgroup import UnitSubgroup, quotient_shape
from .arith import crt, euler_phi, factorize, lcm, mult_order, vp
from .errors import ContainmentError, DomainError, InvariantViolation


def _is_unit(u, n):
    return gcd(u, n) == 1


class AbelianField:
    """Fixed field of ``fixing`` inside Q(zeta_conductor); conductor minimal and even."""

    def __init__(self, conductor, fixing):
        self.conductor = conductor
        self.fixing = fixing

    def __repr__(self):
        return f"AbelianField(conductor={self.conductor}, fixing={sorted(self.fixing.elements)})"

    def __eq__(self, other):
        return (
            isinstance(other, AbelianField)
            and self.conductor == other.conductor
            and self.fixing == other.fixing
        )

    def __hash__(self):
        return hash((self.conductor, self.fixing.elements))

    @cached_property
    def degree(self):
        return euler_phi(self.conductor) // self.fixing.order

    def lift(self, modulus):
        """Gal(Q(zeta_modulus)/K) as a unit subgroup mod ``modulus``."""
        n = self.conductor
        if modulus % n:
            raise DomainError(f"{modulus} is not a multiple of the conductor {n}")
        elems = self.fixing.elements
        return UnitSubgroup.from_elements(
            modulus,
            [u for u in range(1, modulus) if _is_unit(u, modulus) and u % n in elems],
            self.fixing.tiebreak,
        )

    def image_mod(self, k):
        """Image of H in (Z/kZ)* for ``k`` dividing the conductor."""
        if self.conductor % k:
            raise DomainError(f"{k} does not divide the conductor {self.conductor}")
        return {h % k for h in self.fixing.elements}

    def contains(self, other):
        """True if ``other`` is a subfield of ``self``."""
        M = lcm(self.conductor, other.conductor)
        return self.lift(M).issubgroup(other.lift(M))


def make_field(n, generators=(), tiebreak="smallest"):
    """Fixed field of <generators> in Q(zeta_n), normalized to its minimal even conductor."""
    if n < 1:
        raise DomainError("n must be positive")
    gens = [int(g) for g in generators]
    for g in gens:
        if not _is_unit(g % n, n):
            raise DomainError(f"{g} is not a unit mod {n}")
    if n % 2:
        # (Z/2nZ)* -> (Z/nZ)* is an isomorphism for odd n; lift to the odd preimage.
        gens = [g % n if (g % n) % 2 else g % n + n for g in gens]
        n *= 2
    H = UnitSubgroup(n, gens, tiebreak=tiebreak)
    reduced = True
    while reduced:
        reduced = False
        for ell, _ in factorize(n):
            n_small = n // ell
            if n_small % 2:
                continue
            kernel_ok = all(
                u in H.elements
                for u in range(1, n, n_small)
                if _is_unit(u, n)
            )
            if kernel_ok:
                H = UnitSubgroup.from_elements(n_small, {h % n_small for h in H.elements}, tiebreak)
                n = n_small
                reduced = True
                break
    return AbelianField(n, H)


def cyclotomic(n, tiebreak="smallest"):
    return make_field(n, (), tiebreak=tiebreak)


def root_of_unity_order(K, p):
    """Largest ``p**t`` with zeta_{p^t} in K."""
    n = K.conductor
    t = 0
    while n % p ** (t + 1) == 0 and all(h % p ** (t + 1) == 1 for h in K.fixing.elements):
        t += 1
    return p ** t


def root_of_unity_exponent(K, p):
    return vp(p, root_of_unity_order(K, p))


@dataclass(frozen=True)
class Constants:
    m: int
    a: int
    s: int
    b: int


def notation_constants(K, p):
    """The integers (m, a, s, b) attached to K and p (requires zeta_p in K)."""
    a = root_of_unity_exponent(K, p)
    if a == 0:
        raise DomainError(f"zeta_{p} is not in K")
    m = K.conductor
    s = vp(p, m)
    if p != 2 or root_of_unity_order(K, 4) == 4:
        return Constants(m, a, s, s)
    k = 2 * a + s
    M = lcm(m, p ** k)
    image = {u % p ** k for u in K.lift(M).elements}
    gal = UnitSubgroup.from_elements(p ** k, image)
    cyclic, _ = quotient_shape(gal, UnitSubgroup(p ** k))
    if not cyclic:
        image_s = K.image_mod(p ** s)
        degree = euler_phi(p ** s) // len(image_s)
        return Constants(m, a, s, s + vp(p, degree) + 2)
    return Constants(m, a, s, s + 1)


def frobenius_psi(N, r):
    """u mod N with u = 1 mod r^{v_r(N)} and u = r mod N / r^{v_r(N)}."""
    rk = r ** vp(r, N)
    rest = N // rk
    return crt([1 % rk, r % rest], [rk, rest])


def _ramification_over_Q(H_lifted, N, r):
    """(e, f) of the fixed field of ``H_lifted`` (mod N) over Q at r."""
    rest = N // r ** vp(r, N)
    elems = H_lifted.elements
    inertia = [u for u in range(1, N, rest) if _is_unit(u, N)]
    e = len(inertia) // sum(1 for u in inertia if u in elems)
    # H*T is a subgroup; f is the order of psi_r modulo it.
    HT = {h * t % N for h in elems for t in inertia}
    psi = frobenius_psi(N, r)
    f, y = 1, psi
    while y not in HT:
        y = y * psi % N
        f += 1
    return e, f


def ramification(E, K, r):
    """Ramification index and residue degree of E/K at r (K must be a subfield of E)."""
    if not E.contains(K):
        raise ContainmentError("K is not a subfield of E")
    N = lcm(E.conductor, K.conductor, r)
    eE, fE = _ramification_over_Q(E.lift(N), N, r)
    eK, fK = _ramification_over_Q(K.lift(N), N, r)
    if eE % eK or fE % fK:
        raise InvariantViolation("local degrees are not multiplicative")
    return eE // eK, fE // fK


def ramification_over_Q(K, r):
    N = lcm(K.conductor, r)
    return _ramification_over_Q(K.lift(N), N, r)


def adjoin_root_of_unity(K, k):
    """The field K(zeta_k)."""
    M = lcm(K.conductor, k)
    G = K.lift(M)
    return make_field(M, [u for u in G.elements if u % k == 1 % k], tiebreak=K.fixing.tiebreak)


@dataclass(frozen=True)
class LocalData:
    e: int
    f: int
    psi: int
    phi: int
    theta: int
    f0: int
    modulus: int


def inertia_subgroup(G, r):
    """Elements of G (unit subgroup mod N) that are 1 mod N / r^{v_r(N)}."""
    N = G.modulus
    rest = N // r ** vp(r, N)
    return G.filter(lambda u: u % rest == 1 % rest)


def cyclic_generator(S):
    """Generator of the cyclic group S (by tie-breaking rule); raises if S is not cyclic."""
    n = S.order
    gens = [x for x in S.elements if mult_order(x, S.modulus) == n]
    if not gens:
        raise InvariantViolation(f"group of order {n} mod {S.modulus} is not cyclic")
    return min(gens) if S.tiebreak == "smallest" else max(gens)


def canonical_frobenius(G, r):
    """(psi, f, phi): a Frobenius element at r in G, a unit subgroup mod N.

    f is the least exponent for which some element of G acts as r^f on the
    roots of unity of order prime to r, and phi is such an element: psi_r^f
    itself when it lies in G, otherwise the first candidate in tie-break
    order (candidates differ by inertia, which leaves xi unchanged).
    """
    N = G.modulus
    psi = frobenius_psi(N, r)
    rest = N // r ** vp(r, N)
    by_rest = {}
    for u in G.elements:
        by_rest.setdefault(u % rest, []).append(u)
    f, y = 1, psi
    while y % rest not in by_rest:
        y = y * psi % N
        f += 1
    if y in G.elements:
        return psi, f, y
    candidates = sorted(by_rest[y % rest], reverse=(G.tiebreak != "smallest"))
    return psi, f, candidates[0]


def local_data(F, K, r):
    """Local data at r for a cyclotomic F containing K.

    F must be a full cyclotomic field (trivial fixing group); G = Gal(F/K)
    is then a unit subgroup modulo the conductor of F.
    """
    if r % 2 == 0:
        raise DomainError("r must be odd")
    if F.fixing.order != 1:
        raise DomainError("local_data needs F to be a full cyclotomic field")
    if not F.contains(K):
        raise ContainmentError("K is not a subfield of F")
    N = F.conductor
    G = K.lift(N)
    psi, f0, phi = canonical_frobenius(G, r)
    theta = cyclic_generator(inertia_subgroup(G, r))
    e, _ = ramification(adjoin_root_of_unity(K, r), K, r)
    _, f = ramification_over_Q(K, r)
    return LocalData(e=e, f=f, psi=psi, phi=phi, theta=theta, f0=f0, modulus=N)


def unit_subgroups(n):
    """Every subgroup of (Z/nZ)*, each as a frozenset of residues."""
    units = [u for u in range(1, n) if _is_unit(u, n)] or [0]
    found = {frozenset({1 % n})}
    frontier = list(found)
    while frontier:
        nxt = []
        for S in frontier:
            for g in units:
                if g in S:
                    continue
                T = UnitSubgroup(n, list(S) + [g]).elements
                if T not in found:
                    found.add(T)
                    nxt.append(T)
        frontier = nxt
    return sorted(found, key=lambda S: (len(S), sorted(S)))


def subfields(n, tiebreak="smallest"):
    """All subfields of Q(zeta_n), each normalized to its minimal even conductor."""
    out = {}
    for S in unit_subgroups(n):
        K = make_field(n, sorted(S), tiebreak=tiebreak)
        out.setdefault((K.conductor, K.fixing.elements), K)
    return list(out.values())
