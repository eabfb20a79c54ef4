"""Exact arithmetic for monic integer polynomials.

Polynomials are tuples of plain Python ints in *descending* degree order,
``(c[0], c[1], ..., c[n])`` representing ``c[0]*T^n + ... + c[n]``, matching
the ``a_0, a_1, ..., a_{2g}`` coefficient convention used throughout the
package.  Everything here is exact: big integers, ``fractions.Fraction`` for
intermediate divisions, and Sturm chains for real-root counting.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

Poly = tuple  # tuple of ints (or Fractions for the internal chains)


def degree(c):
    return len(c) - 1


def normalize(c):
    """Strip leading zeros; the zero polynomial is ``(0,)``."""
    i = 0
    while i < len(c) - 1 and c[i] == 0:
        i += 1
    return tuple(c[i:])


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return tuple(out)


def poly_pow(a, e):
    out = (1,)
    base = a
    while e:
        if e & 1:
            out = poly_mul(out, base)
        e >>= 1
        if e:
            base = poly_mul(base, base)
    return out


def poly_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    off = len(a) - len(b)
    return normalize(tuple(a[i] + (b[i - off] if i >= off else 0) for i in range(len(a))))


def poly_neg(a):
    return tuple(-x for x in a)


def poly_derivative(c):
    n = degree(c)
    if n == 0:
        return (0,)
    return tuple(c[i] * (n - i) for i in range(n))


def poly_eval(c, x):
    acc = 0
    for ci in c:
        acc = acc * x + ci
    return acc


def poly_divmod_exact(a, b):
    """Divide a by monic-leading integer polynomial b; (quotient, remainder).

    Works over Q internally only when b is not monic; here b is always monic
    in practice so the arithmetic stays integral.
    """
    b = normalize(b)
    if b[0] != 1:
        raise ValueError("divisor must be monic")
    a = list(a)
    db, da = degree(b), degree(tuple(a))
    if da < db:
        return (0,), tuple(a)
    quot = [0] * (da - db + 1)
    for i in range(da - db + 1):
        coef = a[i]
        quot[i] = coef
        if coef:
            for j in range(1, db + 1):
                a[i + j] -= coef * b[j]
    rem = normalize(tuple(a[da - db + 1:])) if db > 0 else (0,)
    return tuple(quot), rem


def poly_div_if_exact(a, b):
    """Quotient a//b if b divides a exactly over Z, else None (b monic)."""
    q, r = poly_divmod_exact(a, b)
    if r == (0,):
        return q
    return None


def content(c):
    g = 0
    for x in c:
        g = gcd(g, abs(x))
    return g or 1


def primitive(c):
    g = content(c)
    sign = -1 if c[0] < 0 else 1
    return tuple(x // (sign * g) for x in c)


def _frac_poly_mod(a, b):
    """Remainder of a mod b over Q (lists of Fractions, descending)."""
    a = list(a)
    db = len(b) - 1
    lead = b[0]
    while len(a) - 1 >= db and any(x != 0 for x in a):
        if a[0] == 0:
            a.pop(0)
            continue
        coef = a[0] / lead
        for j in range(db + 1):
            a[j] -= coef * b[j]
        a.pop(0)
    while len(a) > 1 and a[0] == 0:
        a.pop(0)
    return a if a else [Fraction(0)]


def poly_gcd(a, b):
    """Primitive integer gcd of two integer polynomials (monic-friendly)."""
    fa = [Fraction(x) for x in normalize(a)]
    fb = [Fraction(x) for x in normalize(b)]
    if fa == [0]:
        return primitive(normalize(b))
    if fb == [0]:
        return primitive(normalize(a))
    while True:
        if len(fb) == 1 and fb[0] == 0:
            break
        fa, fb = fb, _frac_poly_mod(fa, fb)
    # clear denominators of fa and take the primitive part
    den = 1
    for x in fa:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = tuple(int(x * den) for x in fa)
    return primitive(normalize(ints))


def squarefree_part(c):
    """Primitive squarefree part of an integer polynomial."""
    d = poly_gcd(c, poly_derivative(c))
    if degree(d) == 0:
        return primitive(normalize(c))
    q = poly_div_if_exact(primitive(normalize(c)), _monicize(d))
    assert q is not None
    return primitive(q)


def _monicize(c):
    # gcds of monic inputs have invertible-leading primitive form already;
    # guard for safety
    if c[0] == 1:
        return c
    if c[0] == -1:
        return tuple(-x for x in c)
    raise ValueError("expected a monic (up to sign) polynomial, got %r" % (c,))


def squarefree_decomposition(c):
    """Yun's algorithm: [(factor_i, i)] with c = lc * prod factor_i^i.

    Input must be monic; the factors come out monic, squarefree and pairwise
    coprime.
    """
    c = normalize(c)
    if c[0] != 1:
        raise ValueError("expected monic input")
    out = []
    g = poly_gcd(c, poly_derivative(c))
    g = _monicize(g)
    if degree(g) == 0:
        return [(c, 1)]
    w = poly_div_if_exact(c, g)
    i = 1
    while degree(w) > 0:
        y = _monicize(poly_gcd(w, g))
        f = poly_div_if_exact(w, y)
        if degree(f) > 0:
            out.append((f, i))
        w = y
        g = poly_div_if_exact(g, y)
        i += 1
        if degree(g) == 0 and degree(w) > 0:
            out.append((w, i))
            break
    return out


def is_perfect_power(c, e):
    """Return h with c == h^e if such a monic integer h exists, else None."""
    n = degree(c)
    if n % e or c[0] != 1:
        return None
    parts = squarefree_decomposition(c)
    if any(mult % e for _, mult in parts):
        return None
    h = (1,)
    for fac, mult in parts:
        h = poly_mul(h, poly_pow(fac, mult // e))
    return h


# ---------------------------------------------------------------------------
# power sums / Newton identities


def power_sums(c, upto):
    """s_1..s_upto for the monic polynomial c (s_k = sum of k-th root powers)."""
    c = normalize(c)
    if c[0] != 1:
        raise ValueError("expected monic input")
    n = degree(c)
    a = list(c[1:])  # a_1..a_n
    s = []
    for k in range(1, upto + 1):
        if k <= n:
            acc = -k * a[k - 1]
            for i in range(1, k):
                acc -= a[i - 1] * s[k - i - 1]
        else:
            acc = 0
            for i in range(1, n + 1):
                acc -= a[i - 1] * s[k - i - 1]
        s.append(acc)
    return s


def poly_from_power_sums(s, n):
    """Monic integer polynomial of degree n with power sums s_1..s_n."""
    e = [1]  # elementary symmetric functions, e[0] = 1
    for k in range(1, n + 1):
        acc = 0
        sign = 1
        for i in range(1, k + 1):
            acc += sign * e[k - i] * s[i - 1]
            sign = -sign
        q, r = divmod(acc, k)
        if r:
            raise ArithmeticError("power sums do not define an integer polynomial")
        e.append(q)
    return tuple((-1) ** i * e[i] for i in range(n + 1))


def base_change_coeffs(c, r):
    """Coefficients of prod (T - alpha^r) over the roots alpha of c (exact)."""
    if r < 1:
        raise ValueError("extension degree must be >= 1")
    c = normalize(c)
    n = degree(c)
    if r == 1 or n == 0:
        return c
    s = power_sums(c, n * r)
    return poly_from_power_sums([s[k * r - 1] for k in range(1, n + 1)], n)


# ---------------------------------------------------------------------------
# cyclotomic polynomials


@lru_cache(maxsize=None)
def cyclotomic(n):
    """The n-th cyclotomic polynomial (descending integer coefficients)."""
    if n == 1:
        return (1, -1)
    c = tuple([1] + [0] * (n - 1) + [-1])  # T^n - 1
    for d in range(1, n):
        if n % d == 0:
            q = poly_div_if_exact(c, cyclotomic(d))
            assert q is not None
            c = q
    return c


def euler_phi(n):
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


# ---------------------------------------------------------------------------
# Sturm chains


def _sign(x):
    return (x > 0) - (x < 0)


def _sturm_chain(c):
    chain = [[Fraction(x) for x in c]]
    chain.append([Fraction(x) for x in poly_derivative(c)])
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        rem = _frac_poly_mod(chain[-2], chain[-1])
        if len(rem) == 1 and rem[0] == 0:
            break
        chain.append([-x for x in rem])
    return chain


def _variations_at(chain, x):
    signs = []
    for poly in chain:
        if x == "-inf":
            s = _sign(poly[0]) * (-1) ** (len(poly) - 1)
        elif x == "+inf":
            s = _sign(poly[0])
        else:
            acc = Fraction(0)
            for ci in poly:
                acc = acc * x + ci
            s = _sign(acc)
        if s:
            signs.append(s)
    return sum(1 for i in range(len(signs) - 1) if signs[i] != signs[i + 1])


def sturm_count(c, lo=None, hi=None):
    """Number of distinct real roots of c in (lo, hi]; None means +-infinity."""
    c = squarefree_part(c)
    if degree(c) == 0:
        return 0
    chain = _sturm_chain(c)
    a = "-inf" if lo is None else Fraction(lo)
    b = "+inf" if hi is None else Fraction(hi)
    count = _variations_at(chain, a) - _variations_at(chain, b)
    # Sturm counts roots in (a, b]; the convention matches the callers.
    return count


def distinct_degree(c):
    """Degree of the squarefree part."""
    return degree(squarefree_part(c))
