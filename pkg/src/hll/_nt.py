"""Small integer helpers (trial division is plenty at desk scale)."""
from functools import lru_cache, reduce
from math import gcd


@lru_cache(maxsize=4096)
def factor(n: int) -> tuple:
    """Prime factorisation as a sorted tuple of (prime, exponent)."""
    if n < 1:
        raise ValueError("factor expects a positive integer")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def is_prime(n: int) -> bool:
    return n >= 2 and factor(n) == ((n, 1),)


def primes_of(n: int) -> list:
    return [p for p, _ in factor(n)]


def radical(n: int) -> int:
    r = 1
    for p, _ in factor(n):
        r *= p
    return r


def euler_phi(n: int) -> int:
    r = n
    for p, _ in factor(n):
        r = r // p * (p - 1)
    return r


def lcm(*xs) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), xs, 1)


def divisors(n: int) -> list:
    ds = [1]
    for p, e in factor(n):
        ds = [d * p ** k for d in ds for k in range(e + 1)]
    return sorted(ds)


def mult_order(a: int, n: int) -> int:
    """Multiplicative order of a modulo n (gcd(a, n) = 1)."""
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise ValueError("not a unit")
    order = euler_phi(n)
    for p, _ in factor(order):
        while order % p == 0 and pow(a, order // p, n) == 1:
            order //= p
    return order


def p_part(n: int, p: int) -> tuple:
    """Split n = p^j * m with p not dividing m; returns (j, m)."""
    j = 0
    while n % p == 0:
        n //= p
        j += 1
    return j, n


def crt(residues, moduli) -> int:
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        t = ((r - x) * pow(m, -1, mi)) % mi
        x += m * t
        m *= mi
    return x % m


def primitive_root(pk: int) -> int:
    """Smallest generator of (Z/p^k)^x for an odd prime power p^k."""
    (p, _), = factor(pk)
    phi = euler_phi(pk)
    qs = primes_of(phi)
    for g in range(2, pk):
        if g % p and all(pow(g, phi // q, pk) != 1 for q in qs):
            return g
    return 1


@lru_cache(maxsize=1024)
def unit_generators(n: int) -> tuple:
    """A generating set of (Z/n)^x, one CRT-lifted generator per cyclic factor."""
    fac = factor(n)
    mods = [p ** e for p, e in fac]
    local = []
    for p, e in fac:
        pk = p ** e
        if p == 2:
            if e == 2:
                local.append((pk, [3]))
            elif e >= 3:
                local.append((pk, [pk - 1, 5]))
        else:
            local.append((pk, [primitive_root(pk)]))
    gens = []
    for pk, gs in local:
        for g in gs:
            res = [g if m == pk else 1 for m in mods]
            gens.append(crt(res, mods))
    return tuple(gens)


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1
