"""Dense polynomials over F_p, coefficient lists lowest degree first.

Only what the cyclic idempotent machinery needs: products, division, gcd,
modular powers and an irreducibility test.  Factoring itself is delegated to
sympy's finite-field routines and re-checked with these helpers.
"""

from __future__ import annotations

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return trim([(x - y) % p for x, y in zip(a, b)])


def poly_divmod(a, b, p):
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b):
        c = (r[-1] * inv) % p
        shift = len(r) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = (r[shift + i] - c * y) % p
        r = trim(r)
    return trim(q), r


def poly_gcd(a, b, p):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [(x * inv) % p for x in a]
    return a


def poly_powmod(base, e, mod, p):
    result, base = [1], poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = poly_divmod(poly_mul(result, base, p), mod, p)[1]
        base = poly_divmod(poly_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _prime_factors(d):
    out, k = [], 2
    while k * k <= d:
        if d % k == 0:
            out.append(k)
            while d % k == 0:
                d //= k
        k += 1
    if d > 1:
        out.append(d)
    return out


def is_irreducible(f, p) -> bool:
    """Rabin's test: x^(p^d) = x mod f and gcd(x^(p^(d/q)) - x, f) = 1 for primes q | d."""
    f = trim(f)
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    if poly_sub(poly_powmod(x, p ** d, f, p), x, p):
        return False
    for q in _prime_factors(d):
        h = poly_sub(poly_powmod(x, p ** (d // q), f, p), x, p)
        if len(poly_gcd(h, f, p)) > 1:
            return False
    return True


def xn_minus_1(n, p):
    return trim([(-1) % p] + [0] * (n - 1) + [1])


def factor_xn_minus_1(n: int, p: int) -> list[list[int]]:
    """Monic irreducible factors of x^n - 1 over F_p, with multiplicity, sorted."""
    if n < 1:
        from .errors import InvalidParameter
        raise InvalidParameter(f"n must be >= 1, got {n}")
    target = xn_minus_1(n, p)
    _, facs = gf_factor(ZZ.map(list(reversed(target))), p, ZZ)
    out = []
    for f, mult in facs:
        low_first = [int(c) % p for c in reversed(f)]
        out.extend([low_first] * mult)
    out.sort(key=lambda f: (len(f), f[::-1]))
    prod = [1]
    for f in out:
        if f[-1] != 1 or not is_irreducible(f, p):
            raise ArithmeticError(f"factor {f} is not monic irreducible")
        prod = poly_mul(prod, f, p)
    if prod != target:
        raise ArithmeticError("factors do not multiply back to x^n - 1")
    return out


def format_poly(f, var="x") -> str:
    parts = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            parts.append(str(c))
        else:
            parts.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(parts) if parts else "0"
