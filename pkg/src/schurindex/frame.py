"""The Galois frame attached to (K, p) and its extension by an auxiliary prime q.

With zeta = zeta_{p^{a+b}} and F = Q(zeta_m, zeta) = Q(zeta_N), the frame
records G = Gal(F/K), the kernel C of the action on <zeta>, the subgroup D
acting by zeta -> zeta^{+-1}, a splitting D = B x <rho>, C = B x <rho^2>,
an element sigma with G/C = <rho C> x <sigma C>, and the exponent c with
sigma(zeta) = zeta^c.  All groups live in (Z/NZ)*.
"""

from dataclasses import dataclass, field
from functools import cached_property

from .abgroup import (
    SMALLEST,
    UnitSubgroup,
    coset_order,
    complement_basis,
    decompose_in_basis,
    is_direct_product,
    quotient_shape,
    recompose,
)
from .arith import crt, geometric_sum_int, inverse_mod, lcm, mult_order, vp, vp_mod
from .errors import DomainError, InvariantViolation, MembershipError
from .field import (
    Constants,
    canonical_frobenius,
    cyclic_generator,
    inertia_subgroup,
    notation_constants,
)


def _check(condition, message):
    if not condition:
        raise InvariantViolation(message)


@dataclass
class GaloisFrame:
    K: object
    p: int
    constants: Constants
    N: int
    G: UnitSubgroup
    C: UnitSubgroup
    D: UnitSubgroup
    rho: int
    B: UnitSubgroup
    B_basis: list
    sigma: int
    c: int
    q_sigma: int
    t: list
    t_rho: int
    quotient_cyclic: bool
    tiebreak: str = SMALLEST

    @property
    def a(self):
        return self.constants.a

    @property
    def b(self):
        return self.constants.b

    @property
    def word(self):
        """Order p^{a+b} of the value group <zeta>."""
        return self.p ** (self.constants.a + self.constants.b)

    @cached_property
    def rho_order(self):
        return mult_order(self.rho, self.N)

    @property
    def d(self):
        """v_p(c - 1), read modulo the word size."""
        return vp_mod(self.p, self.c - 1, self.constants.a + self.constants.b)

    @cached_property
    def V_q_sigma(self):
        """Exact integer 1 + c + ... + c^(q_sigma - 1)."""
        return geometric_sum_int(self.c, self.q_sigma)

    def to_json(self):
        return {
            "m": self.constants.m,
            "a": self.constants.a,
            "s": self.constants.s,
            "b": self.constants.b,
            "N": self.N,
            "G": _group_json(self.G),
            "C": _group_json(self.C),
            "D": _group_json(self.D),
            "rho": self.rho,
            "B": [[g, q] for g, q in self.B_basis],
            "sigma": self.sigma,
            "c": self.c,
            "q_sigma": self.q_sigma,
            "t": list(self.t) + [self.t_rho],
        }


def _group_json(S):
    return {"order": S.order, "basis": [[g, q] for g, q in S.basis]}


def _ordered(elements, tiebreak):
    return sorted(elements, reverse=(tiebreak != SMALLEST))


def _split_rho(G, C, D, N, tiebreak):
    """Find rho and a basis of B with D = B x <rho>, C = B x <rho^2>."""
    if C == D:
        return 1, list(C.basis)
    candidates = [
        x for x in _ordered(D.elements - C.elements, tiebreak)
        if mult_order(x, N) & (mult_order(x, N) - 1) == 0
    ]
    _check(candidates, "D \\ C contains no element of 2-power order")
    rho = candidates[0]

    n = C.order
    odd = n
    while odd % 2 == 0:
        odd //= 2
    C2 = C.filter(lambda x: pow(x, n // odd, N) == 1)
    C2odd = C.filter(lambda x: pow(x, odd, N) == 1)
    basis2 = list(C2.basis)
    exps = decompose_in_basis(rho * rho % N, basis2, N) if basis2 else []
    odd_idx = [i for i, x in enumerate(exps) if x % 2]
    even_idx = [i for i, x in enumerate(exps) if x % 2 == 0]
    for i in even_idx:
        ci, qi = basis2[i]
        rho = rho * pow(ci, (qi - exps[i] // 2) % qi, N) % N
    H = UnitSubgroup(N, [rho] + [basis2[i][0] for i in odd_idx], tiebreak=tiebreak)
    H_basis = complement_basis(H, rho)
    _check(H_basis[0][0] == rho, "rho must lead its complement basis")
    B_basis = H_basis[1:] + [basis2[i] for i in even_idx] + list(C2odd.basis)
    return rho, B_basis


def build_frame(K, p, tiebreak=SMALLEST):
    """Build and verify the frame for K and p (zeta_p must lie in K)."""
    consts = notation_constants(K, p)
    a, b = consts.a, consts.b
    word = p ** (a + b)
    N = lcm(consts.m, word)
    G = K.lift(N)
    G.tiebreak = tiebreak
    C = G.filter(lambda u: u % word == 1)
    D = G.filter(lambda u: u % word in (1, word - 1))
    _check(C.issubgroup(D) and D.order in (C.order, 2 * C.order), "[D:C] must be 1 or 2")
    if C != D:
        _check(p ** a == 2, "C != D forces p^a = 2")

    rho, B_basis = _split_rho(G, C, D, N, tiebreak)
    B = UnitSubgroup(N, [g for g, _ in B_basis], tiebreak=tiebreak)
    R = UnitSubgroup(N, [rho])
    R2 = UnitSubgroup(N, [rho * rho % N])
    _check(is_direct_product(N, [B, R], D), "D != B x <rho>")
    _check(is_direct_product(N, [B, R2], C), "C != B x <rho^2>")

    cyclic, _ = quotient_shape(G, C)
    sigma, c, q_sigma = _choose_sigma(G, C, D, rho, consts, p, cyclic, tiebreak)

    target = pow(sigma, q_sigma, N)
    full_basis = list(B_basis) + [(rho * rho % N, mult_order(rho * rho % N, N))]
    exps = decompose_in_basis(target, full_basis, N)
    t, t_rho = exps[:-1], exps[-1]

    frame = GaloisFrame(
        K=K, p=p, constants=consts, N=N, G=G, C=C, D=D, rho=rho, B=B,
        B_basis=B_basis, sigma=sigma, c=c, q_sigma=q_sigma, t=list(t), t_rho=t_rho,
        quotient_cyclic=cyclic, tiebreak=tiebreak,
    )
    _verify_frame(frame)
    return frame


def _sigma_ok(sigma, G, C, rho, consts, p, cyclic):
    N = G.modulus
    word = p ** (consts.a + consts.b)
    q = coset_order(sigma, C)
    rho_index = 1 if rho == 1 else 2
    spanned = UnitSubgroup(N, list(C.generators) + [rho, sigma])
    if spanned != G or spanned.order != C.order * rho_index * q:
        return None
    c = sigma % word
    if vp(p, c ** q - 1) != consts.a + consts.b:
        return None
    d = vp_mod(p, c - 1, consts.a + consts.b)
    if cyclic and d != consts.a:
        return None
    if not cyclic and d < 2:
        return None
    return c, q


def _choose_sigma(G, C, D, rho, consts, p, cyclic, tiebreak):
    word = p ** (consts.a + consts.b)
    if D == G:
        return 1, 1, 1
    for sigma in _ordered(G.elements - D.elements, tiebreak):
        found = _sigma_ok(sigma, G, C, rho, consts, p, cyclic)
        if found:
            return sigma, found[0], found[1]
    raise InvariantViolation(f"no sigma satisfies the action conditions (word {word})")


def _verify_frame(fr):
    p, a, b = fr.p, fr.constants.a, fr.constants.b
    word = fr.word
    N = fr.N
    _check(fr.q_sigma == coset_order(fr.sigma, fr.C), "q_sigma != |sigma C|")
    if fr.sigma != 1:
        _check(vp(p, fr.c ** fr.q_sigma - 1) == a + b, "v_p(c^q_sigma - 1) != a + b")
    d = fr.d
    if fr.quotient_cyclic:
        _check(d == (a + b if fr.D == fr.G else a), "v_p(c - 1) does not match the cyclic case")
    else:
        _check(p ** a == 2 and d >= 2, "non-cyclic G/C needs p^a = 2 and d >= 2")
        _check(b == fr.constants.s + d, "b != s + d in the non-cyclic case")
        k = 2 ** (b - 1)
        _check(fr.c * k % word == k, "sigma must fix zeta^(2^(b-1))")
    if fr.rho != 1:
        _check(fr.rho % word == word - 1, "rho must invert zeta")
    rebuilt = recompose(list(fr.t) + [fr.t_rho], list(fr.B_basis) + [(fr.rho * fr.rho % N, 0)], N)
    _check(rebuilt == pow(fr.sigma, fr.q_sigma, N), "sigma^q_sigma decomposition is wrong")


def decompose_phi(frame, g):
    """Return (j', j, eta) with g = rho^j' sigma^j eta, eta in B."""
    N = frame.N
    g %= N
    if g not in frame.G.elements:
        raise MembershipError(f"{g} is not in G")
    rho_inv = inverse_mod(frame.rho, N)
    sigma_inv = inverse_mod(frame.sigma, N)
    for jp in range(frame.rho_order):
        h0 = g * pow(rho_inv, jp, N) % N
        for j in range(frame.q_sigma):
            h = h0 * pow(sigma_inv, j, N) % N
            if h in frame.B.elements:
                return jp, j, h
    raise InvariantViolation(f"{g} has no rho/sigma/B decomposition")


@dataclass
class QFrame:
    base: GaloisFrame
    q: int
    r: int
    Nq: int
    G_q: UnitSubgroup
    C_q: UnitSubgroup
    c0: int
    Bq_basis: list
    theta: int
    phi: int
    phi_q: int
    s0: int
    j_prime: int
    j: int
    eta: int
    eta_q: int
    f0: int
    theta_exponents: list = field(default_factory=list)

    @property
    def word(self):
        return self.base.word

    def lift(self, x):
        """Embed x in G (mod N) into G_q as the element fixing zeta_q."""
        return crt([x % self.base.N, 1], [self.base.N, self.q])

    @cached_property
    def generators(self):
        """[(residue, relative order)] in the order c_0..c_n, rho, sigma."""
        fr = self.base
        gens = [(g, q) for g, q in self.Bq_basis]
        gens.append((self.lift(fr.rho), fr.rho_order))
        gens.append((self.lift(fr.sigma), fr.q_sigma))
        return gens

    def normal_form(self, g):
        """Exponents (x_0..x_n, x_rho, x_sigma) of g in G_q (ranges as in the generator orders)."""
        fr = self.base
        Nq = self.Nq
        g %= Nq
        if g not in self.G_q.elements:
            raise MembershipError(f"{g} is not in G_q")
        jp, j, _ = decompose_phi(fr, g % fr.N)
        rest = g * inverse_mod(pow(self.lift(fr.rho), jp, Nq) * pow(self.lift(fr.sigma), j, Nq), Nq) % Nq
        xs = decompose_in_basis(rest, self.Bq_basis, Nq)
        return list(xs) + [jp, j]

    def action(self, g):
        """Exponent u with g(zeta) = zeta^u."""
        return g % self.word


def extend_frame(frame, q, r):
    """Extend the frame by an odd prime q not dividing m, and locate r's data in G_q."""
    m = frame.constants.m
    if q % 2 == 0 or m % q == 0:
        raise DomainError(f"q = {q} must be an odd prime not dividing m = {m}")
    if r % 2 == 0:
        raise DomainError("r must be odd")
    N = frame.N
    Nq = N * q
    G_q = frame.K.lift(Nq)
    G_q.tiebreak = frame.tiebreak
    word = frame.word
    C_q = G_q.filter(lambda u: u % word == 1)

    def lift(x):
        return crt([x % N, 1], [N, q])

    top = G_q.filter(lambda u: u % N == 1)
    c0 = cyclic_generator(top)
    _check(top.order == q - 1, "Gal(F(zeta_q)/F) must have order q - 1")
    Bq_basis = [(c0, q - 1)] + [(lift(g), o) for g, o in frame.B_basis]
    lifted_C = [lift(g) for g in frame.C.generators]
    _check(is_direct_product(Nq, [top, UnitSubgroup(Nq, lifted_C)], C_q), "C_q != <c_0> x C")
    D_q = G_q.filter(lambda u: u % word in (1, word - 1))
    lifted_D = [lift(g) for g in frame.D.generators]
    _check(is_direct_product(Nq, [UnitSubgroup(Nq, lifted_D), top], D_q), "D_q != D x <c_0>")
    _check(G_q.order // C_q.order == frame.G.order // frame.C.order, "|G/C| != |G_q/C_q|")

    theta = cyclic_generator(inertia_subgroup(G_q, r))
    _check(theta in C_q.elements, "theta must lie in C_q")
    if q != r:
        _check(theta % q == 1, "theta must lie in C when q != r")

    _, f0, phi = canonical_frobenius(frame.G, r)
    _, f0q, phi_q = canonical_frobenius(G_q, r)
    if phi_q % N != phi:
        # keep the choice made over F so that phi_q restricts to phi
        phi_q = crt([phi, pow(r, f0, q)], [N, q]) if q != r else phi_q
    _check(f0q == f0 and phi_q % N == phi, "phi_q does not restrict to phi")
    _check(phi_q in G_q.elements, "phi_q must lie in G_q")
    ratio = phi_q * inverse_mod(lift(phi), Nq) % Nq
    s0 = decompose_in_basis(ratio, [(c0, q - 1)], Nq)[0]
    jp, j, eta = decompose_phi(frame, phi)
    eta_q = pow(c0, s0, Nq) * lift(eta) % Nq

    rho2 = frame.rho * frame.rho % N
    theta_basis = Bq_basis + [(lift(rho2), mult_order(rho2, N))]
    theta_exps = decompose_in_basis(theta, theta_basis, Nq)

    return QFrame(
        base=frame, q=q, r=r, Nq=Nq, G_q=G_q, C_q=C_q, c0=c0, Bq_basis=Bq_basis,
        theta=theta, phi=phi, phi_q=phi_q, s0=s0, j_prime=jp, j=j, eta=eta,
        eta_q=eta_q, f0=f0q, theta_exponents=list(theta_exps),
    )
