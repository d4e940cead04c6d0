"""The maximal r-local index p^beta of Schur algebras over an abelian field K."""

from dataclasses import dataclass, field

from .abgroup import SMALLEST, coset_order, decompose_in_basis, power_subgroup, recompose
from .arith import DEFAULT_Q0_BOUND, find_q0, is_prime, mult_order, vp
from .cocycle import max_theta_eta
from .errors import DomainError, InvariantViolation
from .field import (
    adjoin_root_of_unity,
    canonical_frobenius,
    notation_constants,
    ramification,
    ramification_over_Q,
    root_of_unity_exponent,
)
from .frame import build_frame, decompose_phi, extend_frame


@dataclass
class IndexOptions:
    tiebreak: str = SMALLEST
    q0_skip: int = 0
    q0_bound: int = DEFAULT_Q0_BOUND
    trace: bool = False


@dataclass
class IndexReport:
    beta: int
    p: int
    case_tag: str
    nu: int
    constants: dict
    d_r: int = None
    h: int = None
    inertia_coset_order: int = None
    q0: int = None
    frame_trace: dict = None
    details: dict = field(default_factory=dict)

    @property
    def p_power(self):
        return self.p ** self.beta

    def to_json(self):
        out = {
            "beta": self.beta,
            "p_power": self.p_power,
            "case": self.case_tag,
            "nu": self.nu,
            "constants": self.constants,
        }
        if self.q0 is not None:
            out["q0"] = self.q0
        if self.h is not None:
            out["h"] = self.h
        if self.frame_trace is not None:
            out["frame"] = self.frame_trace
        return out


def _check_inputs(p, r):
    if not is_prime(p):
        raise DomainError(f"p = {p} is not prime")
    if r % 2 == 0 or not is_prime(r):
        raise DomainError(f"r = {r} must be an odd prime")


def _trivial(K, p, r):
    return root_of_unity_exponent(K, p) == 0 or r % p != 1


def nu(K, p, r):
    """max(0, a + v_p(e) - v_p(r^f - 1)) with e = e(K(zeta_r)/K, r), f = f(K/Q, r)."""
    _check_inputs(p, r)
    if _trivial(K, p, r):
        return 0
    a = root_of_unity_exponent(K, p)
    e, _ = ramification(adjoin_root_of_unity(K, r), K, r)
    _, f = ramification_over_Q(K, r)
    return max(0, a + vp(p, e) - vp(p, r ** f - 1))


def _constants_json(K, p):
    a = root_of_unity_exponent(K, p)
    m = K.conductor
    if a == 0:
        return {"m": m, "a": 0, "s": vp(p, m) if m % p == 0 else 0, "b": None}
    c = notation_constants(K, p)
    return {"m": c.m, "a": c.a, "s": c.s, "b": c.b}


def beta(K, p, r, options=None):
    """Compute beta_p(r) for K and report the case and every intermediate quantity."""
    options = options or IndexOptions()
    _check_inputs(p, r)
    constants = _constants_json(K, p)
    if _trivial(K, p, r):
        return IndexReport(beta=0, p=p, case_tag="trivial", nu=0, constants=constants)

    frame = build_frame(K, p, tiebreak=options.tiebreak)
    a = frame.a
    m = frame.constants.m
    nu_r = nu(K, p, r)
    _, f = ramification_over_Q(K, r)
    _, f0, phi = canonical_frobenius(frame.G, r)
    jp, j, eta = decompose_phi(frame, phi)
    noncyclic = not frame.quotient_cyclic
    parity_split = (j - jp) % 2 == 1
    details = {"phi": phi, "f0": f0, "j_prime": jp, "j": j, "eta": eta, "f": f}
    trace = frame.to_json() if options.trace else None
    report = IndexReport(
        beta=0, p=p, case_tag="", nu=nu_r, constants=constants,
        frame_trace=trace, details=details,
    )

    if m % r:
        if noncyclic and parity_split:
            report.beta, report.case_tag = 1, "1a"
        else:
            d_r = min(a, vp(p, r - 1))
            order = coset_order(eta, frame.B, p ** d_r)
            report.d_r = d_r
            report.details["eta_coset_order"] = order
            report.beta = max(nu_r, vp(p, order))
            report.case_tag = "1b"
    else:
        q0 = find_q0(p, a, r, m, bound=options.q0_bound, skip=options.q0_skip)
        qframe = extend_frame(frame, q0, r)
        theta = qframe.theta % frame.N
        if qframe.theta % q0 != 1 or theta not in frame.C.elements:
            raise InvariantViolation("inertia generator must lie in C")
        report.q0 = q0
        details["theta"] = theta
        in_D_squared = theta in power_subgroup(frame.D, 2).elements
        if noncyclic and parity_split and not in_D_squared:
            report.beta, report.case_tag = 1, "2a"
        else:
            basis = list(frame.B_basis)
            rho2 = frame.rho * frame.rho % frame.N
            full = basis + [(rho2, mult_order(rho2, frame.N))]
            s = decompose_in_basis(theta, full, frame.N)[:-1]
            t = decompose_in_basis(eta, basis, frame.N)
            orders = [q for _, q in basis]
            h = vp(p, max_theta_eta(orders, s, t, p, a))
            # pairings vanish on rho^2, so only the B-part of theta counts
            theta_B = recompose(s, basis, frame.N)
            ico = coset_order(pow(theta_B, f, frame.N), frame.B, p ** a)
            details["theta_B"] = theta_B
            report.h = h
            report.inertia_coset_order = ico
            report.beta = max(nu_r, h, vp(p, ico))
            report.case_tag = "2b"

    if report.beta > a:
        raise InvariantViolation(f"beta = {report.beta} exceeds a = {a}")
    if report.beta < nu_r:
        raise InvariantViolation(f"beta = {report.beta} is below nu = {nu_r}")
    return report


def oracle_prime(K, p, r, options=None):
    """The auxiliary prime the brute-force check should use: r itself, or q0 when r | m."""
    options = options or IndexOptions()
    c = notation_constants(K, p)
    if c.m % r:
        return r
    return find_q0(p, c.a, r, c.m, bound=options.q0_bound, skip=options.q0_skip)
