"""Weil polynomials: data model, validation, LMFDB labels, root systems.

A q-Weil polynomial of an abelian variety of dimension g is monic of degree
2g with integer coefficients ``a_0=1, a_1, ..., a_{2g}`` (descending powers),
satisfies the functional equation ``a_{2g-i} = q^{g-i} a_i`` and has all
complex roots of absolute value sqrt(q).  Validation here is exact: the
functional equation is an integer identity, and the root-modulus condition is
decided by Sturm chains on the associated real polynomial (the characteristic
polynomial of Frobenius + Verschiebung), with no floating point involved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import isqrt

import mpmath as mp

from . import _intpoly as ip

DEFAULT_PRECISION = 256


class WeilError(ValueError):
    """Base class for every input/validation error in the package."""


class NotMonic(WeilError):
    pass


class FunctionalEquationViolated(WeilError):
    pass


class RootOffCircle(WeilError):
    pass


class MalformedLabel(WeilError):
    pass


class NotPrimePower(WeilError):
    pass


class NonConvergence(RuntimeError):
    """Root refinement did not reach the requested residual."""


def factor_prime_power(q):
    """Return (p, d) with q = p^d, p prime; trial division is plenty here."""
    if q < 2:
        raise NotPrimePower("q = %s is not a prime power" % q)
    m = q
    p = None
    for cand in range(2, isqrt(q) + 1):
        if m % cand == 0:
            p = cand
            break
    if p is None:
        return q, 1
    d = 0
    while m % p == 0:
        m //= p
        d += 1
    if m != 1:
        raise NotPrimePower("q = %s is not a prime power" % q)
    return p, d


@dataclass(frozen=True)
class WeilPolynomial:
    """A validated q-Weil polynomial P(T) = sum a_i T^(2g-i)."""

    g: int
    q: int
    p: int
    d: int
    coeffs: tuple  # (a_0=1, a_1, ..., a_{2g})

    def a(self, i):
        return self.coeffs[i]

    @property
    def trace(self):
        """Sum of the roots, -a_1."""
        return -self.coeffs[1]

    @property
    def middle(self):
        """(a_1, ..., a_g); the rest is forced by the functional equation."""
        return self.coeffs[1:self.g + 1]

    @property
    def label(self):
        return format_label(self)

    def __str__(self):
        n = 2 * self.g
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = n - i
            mag = "" if (abs(c) == 1 and e > 0) else str(abs(c))
            var = "" if e == 0 else ("T" if e == 1 else "T^%d" % e)
            s = mag + var
            terms.append(("- " if c < 0 else "+ ") + s if terms else ("-" if c < 0 else "") + s)
        return " ".join(terms) + " over F_%d" % self.q

    def to_json(self):
        return {"g": self.g, "q": self.q, "p": self.p, "d": self.d,
                "coeffs": list(self.coeffs)}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def real_weil_transform(coeffs, q, g):
    """H with T^g * H(T + q/T) = P; exists iff P satisfies the functional eq.

    H is monic of degree g with integer coefficients; its roots are the
    numbers alpha + q/alpha, one per conjugate pair of roots of P.
    """
    # E_k(T) = T^k (T^2+q)^(g-k) has degree 2g-k; solve triangularly for the
    # coefficients of H against those of P.
    basis = []
    for k in range(g + 1):
        ek = ip.poly_mul(tuple([1] + [0] * k), ip.poly_pow((1, 0, q), g - k))
        basis.append(ek)
    c = [1]
    for k in range(1, g + 1):
        acc = coeffs[k]
        for i in range(k):
            # coefficient of T^(2g-k) in E_i
            ei = basis[i]
            acc -= c[i] * ei[k - i]
        c.append(acc)
    # verify the full identity; anything left over violates the functional eq
    total = (0,)
    for k in range(g + 1):
        total = ip.poly_add(total, tuple(c[k] * x for x in basis[k]))
    if ip.normalize(total) != ip.normalize(tuple(coeffs)):
        raise FunctionalEquationViolated(
            "coefficients do not satisfy a_(2g-i) = q^(g-i) a_i")
    return tuple(c)


def _roots_on_circle_exact(coeffs, q, g):
    """Exact test that all roots of P have |alpha| = sqrt(q).

    Equivalent to: H real-rooted with every root y in [-2 sqrt(q), 2 sqrt(q)],
    i.e. every root of E(z) = prod (z - y_i^2) lies in [0, 4q].
    """
    h = real_weil_transform(coeffs, q, g)
    hsf = ip.squarefree_part(h)
    if ip.sturm_count(hsf) != ip.degree(hsf):
        return False
    # E(z) with E(y^2) = (-1)^g H(y) H(-y); keep the even part
    hneg = tuple(x * (-1) ** i for i, x in enumerate(h))
    prod = ip.poly_mul(h, hneg)
    even = tuple(prod[i] for i in range(0, len(prod), 2))
    e = tuple(x * (-1) ** g for x in even)
    esf = ip.squarefree_part(e)
    return ip.sturm_count(esf, -1, 4 * q) == ip.degree(esf)


def validate(coeffs, q):
    """Build a WeilPolynomial from raw coefficients, or raise a WeilError."""
    coeffs = tuple(int(x) for x in coeffs)
    if len(coeffs) % 2 == 0 or len(coeffs) < 3:
        raise WeilError("need exactly 2g+1 coefficients, got %d" % len(coeffs))
    if coeffs[0] != 1:
        raise NotMonic("leading coefficient must be 1, got %s" % coeffs[0])
    g = (len(coeffs) - 1) // 2
    p, d = factor_prime_power(q)
    for i in range(g + 1):
        if coeffs[2 * g - i] != q ** (g - i) * coeffs[i]:
            raise FunctionalEquationViolated(
                "a_%d = %s but q^%d * a_%d = %s"
                % (2 * g - i, coeffs[2 * g - i], g - i, i, q ** (g - i) * coeffs[i]))
    if not _roots_on_circle_exact(coeffs, q, g):
        raise RootOffCircle("some root does not have absolute value sqrt(%d)" % q)
    return WeilPolynomial(g=g, q=q, p=p, d=d, coeffs=coeffs)


def from_middle(g, q, middle):
    """Validate the polynomial with a_1..a_g = middle, the rest mirrored."""
    middle = tuple(int(x) for x in middle)
    if len(middle) != g:
        raise WeilError("expected %d middle coefficients, got %d" % (g, len(middle)))
    coeffs = [1] + list(middle)
    for i in range(g - 1, -1, -1):
        coeffs.append(q ** (g - i) * coeffs[i])
    return validate(tuple(coeffs), q)


def is_valid(coeffs, q):
    try:
        validate(coeffs, q)
        return True
    except WeilError:
        return False


# ---------------------------------------------------------------------------
# LMFDB labels: g.q.c1_c2_..._cg with base-26 signed tokens


def _decode_token(tok):
    if not tok or any(ch < "a" or ch > "z" for ch in tok):
        raise MalformedLabel("coefficient token %r is not lower-case a-z" % tok)
    if tok == "a":
        return 0
    if tok[0] == "a":
        mag = tok[1:]
        if mag[0] == "a":
            raise MalformedLabel("token %r has a non-canonical magnitude" % tok)
        return -_decode_token(mag)
    val = 0
    for ch in tok:
        val = val * 26 + (ord(ch) - ord("a"))
    return val


def _encode_token(n):
    if n == 0:
        return "a"
    neg = n < 0
    n = abs(n)
    digits = ""
    while n:
        digits = chr(ord("a") + n % 26) + digits
        n //= 26
    return "a" + digits if neg else digits


def parse_label(label):
    """Parse an LMFDB isogeny-class label into a validated WeilPolynomial."""
    parts = label.strip().split(".")
    if len(parts) != 3:
        raise MalformedLabel("label must have the form g.q.iso, got %r" % label)
    try:
        g = int(parts[0])
        q = int(parts[1])
    except ValueError:
        raise MalformedLabel("label must have the form g.q.iso, got %r" % label)
    if g < 1:
        raise MalformedLabel("dimension must be positive in %r" % label)
    toks = parts[2].split("_")
    if len(toks) != g:
        raise MalformedLabel("expected %d coefficient tokens in %r" % (g, label))
    middle = [_decode_token(t) for t in toks]
    return from_middle(g, q, middle)


def format_label(P):
    """Inverse of parse_label; bit-exact round trip."""
    toks = "_".join(_encode_token(a) for a in P.middle)
    return "%d.%d.%s" % (P.g, P.q, toks)


# ---------------------------------------------------------------------------
# high-precision roots with the non-decreasing angle convention


@dataclass(frozen=True)
class RootSystem:
    """Roots of P at a fixed precision, paired and angle-ordered.

    ``roots[j]`` for j < g are the representatives with angle in [0, 1/2],
    sorted by non-decreasing angle, and ``roots[g+j] = q / roots[j]`` is the
    complex conjugate partner.  ``angles[j]`` is theta_j in [0,1) with
    ``roots[j] = sqrt(q) exp(2 pi i theta_j)``.
    """

    g: int
    q: int
    precision: int
    roots: tuple      # 2g mpmath mpc values
    angles: tuple     # 2g mpmath mpf values in [0, 1)

    @property
    def thetas(self):
        """The g fundamental angles theta_1 <= ... <= theta_g."""
        return self.angles[:self.g]

    def unit_eigenvalues(self):
        with mp.workprec(self.precision + 32):
            s = mp.sqrt(self.q)
            return tuple(self.roots[j] / s for j in range(self.g))


def _squarefree_roots(coeffs, precision):
    """[(root, multiplicity)] via exact squarefree split + mpmath solve."""
    out = []
    with mp.workprec(precision + 32):
        for fac, mult in ip.squarefree_decomposition(tuple(coeffs)):
            deg = ip.degree(fac)
            if deg == 0:
                continue
            if deg == 1:
                rts = [mp.mpc(-fac[1], 0)]
            else:
                rts = mp.polyroots([mp.mpf(c) for c in fac],
                                   maxsteps=200, extraprec=precision // 2)
            for r in rts:
                out.append((mp.mpc(r), mult))
    return out


def roots(P, precision=DEFAULT_PRECISION):
    """RootSystem of P at the requested precision (bits).

    Deterministic for fixed (P, precision); raises NonConvergence when the
    polynomial residual at a computed root exceeds 2^(-precision/2) * q^g.
    """
    if precision < 64:
        raise WeilError("precision must be at least 64 bits")
    g, q = P.g, P.q
    with mp.workprec(precision + 32):
        pairs = _squarefree_roots(P.coeffs, precision)
        tol = mp.mpf(2) ** (-(precision // 2)) * mp.mpf(q) ** g
        coeffs_mp = [mp.mpf(c) for c in P.coeffs]
        for r, _ in pairs:
            if abs(mp.polyval(coeffs_mp, r)) >= tol:
                raise NonConvergence(
                    "residual %s exceeds tolerance at precision %d"
                    % (mp.nstr(abs(mp.polyval(coeffs_mp, r))), precision))
        sqrtq = mp.sqrt(q)
        upper = []   # (theta, insertion index, root) for one member per pair
        idx = 0
        for r, mult in pairs:
            if r.imag > 0:
                theta = mp.arg(r) / (2 * mp.pi)
                for _ in range(mult):
                    upper.append((theta, idx, r))
                    idx += 1
            elif r.imag == 0:
                theta = mp.mpf(0) if r.real > 0 else mp.mpf("0.5")
                if mult % 2:
                    raise RootOffCircle("real root of odd multiplicity")
                for _ in range(mult // 2):
                    upper.append((theta, idx, r))
                    idx += 1
        if len(upper) != g:
            raise RootOffCircle("conjugate pairing failed")
        upper.sort(key=lambda t: (t[0], t[1]))
        first = [r for _, _, r in upper]
        thetas = [t for t, _, _ in upper]
        all_roots = tuple(first) + tuple(mp.conj(r) for r in first)
        all_angles = tuple(thetas) + tuple(
            (1 - t) if t > 0 else mp.mpf(0) for t in thetas)
        return RootSystem(g=g, q=q, precision=precision,
                          roots=all_roots, angles=all_angles)
