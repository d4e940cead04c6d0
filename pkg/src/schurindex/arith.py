"""Exact integer and modular arithmetic primitives.

Everything here works on Python integers, so there is no overflow to worry
about.  Factorizations are by trial division, which is plenty for the moduli
that occur (well below 2**32 in practice).
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import BoundExceededError, DomainError

# Deterministic Miller-Rabin witnesses, valid for every n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

DEFAULT_Q0_BOUND = 100_000


@dataclass(frozen=True)
class Residue:
    """A residue class ``value mod modulus`` with ``0 <= value < modulus``."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def is_unit(self):
        return gcd(self.value, self.modulus) == 1

    def __mul__(self, other):
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise DomainError("moduli differ")
            other = other.value
        return Residue(self.value * other, self.modulus)

    def __pow__(self, k):
        return Residue(pow(self.value, k, self.modulus), self.modulus)

    def __int__(self):
        return self.value


def is_prime(n):
    """Deterministic primality test (exact for every n below 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=4096)
def factorize(n):
    """Return the prime factorization of ``n >= 1`` as a tuple of (p, k) pairs."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n):
    return [p for p, _ in factorize(n)]


def vp(p, x):
    """Exponent of the prime ``p`` in the nonzero integer ``x``."""
    if x == 0:
        raise DomainError("p-adic valuation of 0 is undefined")
    x = abs(x)
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def vp_mod(p, x, k):
    """Valuation of ``x`` read modulo ``p**k``: ``min(vp(p, x), k)``, with 0 -> k."""
    x %= p ** k
    return k if x == 0 else vp(p, x)


def p_part(p, n):
    return p ** vp(p, n)


def euler_phi(n):
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def carmichael(n):
    """Exponent of the unit group (Z/nZ)*."""
    lam = 1
    for p, k in factorize(n):
        if p == 2:
            part = 1 if k == 1 else 2 if k == 2 else 2 ** (k - 2)
        else:
            part = (p - 1) * p ** (k - 1)
        lam = lam * part // gcd(lam, part)
    return lam


def mult_order(u, modulus=None):
    """Multiplicative order of a unit residue.

    Accepts a :class:`Residue` or a plain ``(value, modulus)`` pair.  The
    order is obtained by stripping prime factors off the group exponent, so
    no naive powering loop is involved.
    """
    if modulus is None:
        value, modulus = u.value, u.modulus
    else:
        value = u % modulus
    if gcd(value, modulus) != 1:
        raise DomainError(f"{value} is not a unit mod {modulus}")
    if modulus == 1:
        return 1
    t = carmichael(modulus)
    for p, _ in factorize(t):
        while t % p == 0 and pow(value, t // p, modulus) == 1:
            t //= p
    return t


def geometric_sum_V(c, t, modulus):
    """``1 + c + ... + c**(t-1)`` reduced mod ``modulus`` (0 for ``t == 0``)."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    # Binary splitting: V(2k) = V(k)(1 + c^k), V(k+1) = 1 + c V(k).
    total, power = 0, 1
    c %= modulus
    for bit in bin(t)[2:] if t else "":
        total = total * (1 + power) % modulus
        power = power * power % modulus
        if bit == "1":
            total = (1 + c * total) % modulus
            power = power * c % modulus
    return Residue(total, modulus)


def geometric_sum_int(c, t):
    """Exact integer ``1 + c + ... + c**(t-1)``."""
    if c == 1:
        return t
    return (c ** t - 1) // (c - 1)


def inverse_mod(x, n):
    if n == 1:
        return 0
    try:
        return pow(x, -1, n)
    except ValueError:
        raise DomainError(f"{x} is not invertible mod {n}") from None


def crt(residues, moduli):
    """Solve ``x = r_i mod m_i`` for pairwise coprime moduli."""
    x, n = 0, 1
    for r, m in zip(residues, moduli):
        if gcd(n, m) != 1:
            raise DomainError("CRT moduli must be pairwise coprime")
        x = x + n * ((r - x) * inverse_mod(n, m) % m)
        n *= m
    return x % n


def lcm(*values):
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def next_prime(n):
    n += 1
    while not is_prime(n):
        n += 1
    return n


def qualifies_as_q0(q, p, a, r, m):
    """Check the four conditions an auxiliary prime must meet."""
    return (
        is_prime(q)
        and q % 2 == 1
        and m % q != 0
        and q != r
        and q % p ** a == 1
        and pow(r, (q - 1) // p, q) != 1
    )


def find_q0(p, a, r, m, bound=DEFAULT_Q0_BOUND, skip=0):
    """Smallest prime ``q <= bound`` usable as auxiliary prime.

    The prime must be odd, coprime to ``m``, different from ``r``, congruent
    to 1 mod ``p**a`` and ``r`` must not be a ``p``-th power mod ``q``.
    ``skip`` discards that many qualifying primes first (used to probe that
    results do not depend on the choice).
    """
    if p == r:
        raise DomainError("p and r must differ")
    step = p ** a
    q = step + 1
    while q <= bound:
        if qualifies_as_q0(q, p, a, r, m):
            if skip == 0:
                return q
            skip -= 1
        q += step
    raise BoundExceededError(
        f"no prime q <= {bound} with q odd, q coprime to {m}, q != {r}, "
        f"q = 1 mod {step} and {r} not a {p}-th power mod q"
    )
