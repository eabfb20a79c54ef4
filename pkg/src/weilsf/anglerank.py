"""Numeric determination of the angle rank and torsion order.

The multiplicative group U generated by the normalized Frobenius eigenvalues
u_j = alpha_j/sqrt(q) is Z^delta + Z/m.  Writing theta_j for the angles,
an element c of the relation lattice R = {c in Z^g : sum c_j theta_j in Z}
is detected numerically: LLL reduction of the rows [e_j | N theta_j] and
[0 | N] makes integer relations show up as short vectors.  Candidates are
re-verified at doubled precision, the found lattice is saturated and its
rational parts normalized with a denominator bound, and the Smith normal
form of R then gives delta = g - rank(R) and m = largest elementary divisor.

Everything after the angle computation is exact integer/rational linear
algebra, so the only numeric trust lives in the (doubly checked) residuals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import mpmath as mp

from .polyarith import base_change
from .weilpoly import DEFAULT_PRECISION, WeilError, roots

DENOMINATOR_BOUND = 72
COEFF_BOUND_PRESENTED = 12         # relations in the saturated presentation
COEFF_BOUND_RAW = 12 * DENOMINATOR_BOUND


class UnverifiedRelation(WeilError):
    pass


class DenominatorBoundExceeded(WeilError):
    pass


class BoundExceeded(WeilError):
    pass


class InconsistentLattice(WeilError):
    pass


# ---------------------------------------------------------------------------
# exact LLL on integer row bases


def lll_reduce(rows, delta=Fraction(99, 100)):
    """Textbook LLL with exact rational Gram-Schmidt; rows of small dimension."""
    b = [list(map(int, r)) for r in rows]
    n = len(b)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n

    def gso():
        star = [[Fraction(x) for x in row] for row in b]
        for i in range(n):
            for j in range(i):
                if B[j] == 0:
                    mu[i][j] = Fraction(0)
                    continue
                mu[i][j] = Fraction(dot(b[i], b[j])) - sum(
                    mu[i][k] * mu[j][k] * B[k] for k in range(j))
                mu[i][j] /= B[j]
            for j in range(i):
                for t in range(len(star[i])):
                    star[i][t] -= mu[i][j] * star[j][t]
            B[i] = sum(x * x for x in star[i])

    gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            if abs(mu[k][j]) > Fraction(1, 2):
                r = round(mu[k][j])
                b[k] = [x - r * y for x, y in zip(b[k], b[j])]
                gso()
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            gso()
            k = max(k - 1, 1)
    return b


# ---------------------------------------------------------------------------
# small exact integer linear algebra: kernels, saturation, Smith form


def integer_kernel(rows, n):
    """Z-basis of {x in Z^n : M x^T = 0} for the integer matrix M.

    With U M V = [D | 0] in Smith form, the kernel is spanned by the columns
    of the unimodular V past the nonzero divisors, so the result is a genuine
    Z-basis (not merely a spanning set of the rational kernel).
    """
    rows = [r for r in rows if any(r)]
    if not rows:
        return [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    divisors, v = smith_normal_form(rows, n)
    r = len(divisors)
    return [[v[i][j] for i in range(n)] for j in range(r, n)]


def saturate_lattice(rows, n):
    """Z-basis of (span_Q(rows) intersect Z^n) via a double integer kernel.

    The integer kernel of an integer matrix is always saturated, so applying
    it twice lands exactly on the saturation of the row span.
    """
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    return integer_kernel(integer_kernel(rows, n), n)


def smith_normal_form(rows, n):
    """(divisors, V) for the row lattice L of `rows` inside Z^n.

    V is unimodular with L*V = {(t_1 d_1, ..., t_r d_r, 0, ...)}; divisors
    satisfy d_1 | d_2 | ... | d_r.  All column operations are mirrored on V
    so that the pair stays consistent (the embedding construction relies on
    this), and a post-condition re-checks the transformed rows.
    """
    original = [list(map(int, r)) for r in rows]
    a = [row[:] for row in original]
    m = len(a)
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_op(c1, c2, f):
        for row in a:
            row[c2] -= f * row[c1]
        for row in v:
            row[c2] -= f * row[c1]

    def col_swap(c1, c2):
        for row in a:
            row[c1], row[c2] = row[c2], row[c1]
        for row in v:
            row[c1], row[c2] = row[c2], row[c1]

    def col_neg(c):
        for row in a:
            row[c] = -row[c]
        for row in v:
            row[c] = -row[c]

    def eliminate():
        rank = 0
        top = 0
        left = 0
        while top < m and left < n:
            piv = None
            best = None
            for i in range(top, m):
                for j in range(left, n):
                    if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                        best = abs(a[i][j])
                        piv = (i, j)
            if piv is None:
                break
            pi, pj = piv
            a[top], a[pi] = a[pi], a[top]
            if pj != left:
                col_swap(left, pj)
            while True:
                done = True
                for j in range(left + 1, n):
                    if a[top][j]:
                        f = a[top][j] // a[top][left]
                        col_op(left, j, f)
                        if a[top][j]:
                            col_swap(left, j)
                            done = False
                for i in range(top + 1, m):
                    if a[i][left]:
                        f = a[i][left] // a[top][left]
                        a[i] = [x - f * y for x, y in zip(a[i], a[top])]
                        if a[i][left]:
                            a[top], a[i] = a[i], a[top]
                            done = False
                if done:
                    break
            if a[top][left] < 0:
                col_neg(left)
            rank += 1
            top += 1
            left += 1
        return rank

    rank = eliminate()
    # enforce d_1 | d_2 | ... by folding offending columns together and
    # re-eliminating; V tracks every operation
    while True:
        bad = None
        for i in range(rank - 1):
            if a[i + 1][i + 1] % a[i][i]:
                bad = i
                break
        if bad is None:
            break
        col_op(bad + 1, bad, -1)   # column bad += column bad+1
        rank = eliminate()
    divisors = [a[i][i] for i in range(rank)]
    # post-condition: each original row, transformed by V, lies in the
    # diagonal lattice span{d_i e_i}
    for row in original:
        t = [sum(row[k] * v[k][j] for k in range(n)) for j in range(n)]
        for j in range(n):
            if j < rank:
                assert t[j] % divisors[j] == 0, "SNF transform drifted"
            else:
                assert t[j] == 0, "SNF transform drifted"
    return divisors, v


# ---------------------------------------------------------------------------
# the relation lattice itself


@dataclass(frozen=True)
class RelationLattice:
    """Verified multiplicative relations among the normalized eigenvalues."""

    g: int
    precision: int
    relations: tuple          # ((c tuple, numer, denom), ...): sum c th = n/d mod 1
    rank: int                 # = g - delta
    torsion_order: int        # = m
    basis: tuple = field(default=())   # rows of R = {c : sum c th in Z}

    @property
    def delta(self):
        return self.g - self.rank

    def embedding(self):
        """(M, phases): the image of U(1)^delta x C_m inside U(1)^g.

        M is a g x delta integer matrix; phases is a list of m rational
        g-vectors f with the group being the union over f of
        {exp(2 pi i (f + M t)) : t in the delta-torus}.
        """
        g = self.g
        if self.rank == 0:
            ident = [[1 if i == j else 0 for j in range(g)] for i in range(g)]
            return ident, [tuple(Fraction(0) for _ in range(g))]
        divisors, v = smith_normal_form(self.basis, g)
        r = len(divisors)
        cols_m = [[v[i][j] for j in range(r, g)] for i in range(g)]
        phases = []

        def rec(idx, current):
            if idx == r:
                phases.append(tuple(current))
                return
            for k in range(divisors[idx]):
                shift = [Fraction(k * v[i][idx], divisors[idx]) for i in range(g)]
                rec(idx + 1, [c + s for c, s in zip(current, shift)])

        rec(0, [Fraction(0)] * g)
        assert len(phases) == self.torsion_order
        return cols_m, phases

    def to_json(self):
        return {"delta": self.delta, "m": self.torsion_order,
                "relations": [{"c": list(c), "frac": "%d/%d" % (a, b)}
                              for c, a, b in self.relations]}

    def dumps(self):
        return json.dumps(self.to_json())


def _residual_to_int(thetas, c):
    x = mp.fsum(ci * t for ci, t in zip(c, thetas))
    return abs(x - mp.nint(x))


def _nearest_fraction(x, max_den):
    """Closest a/b to x mod 1 with 1 <= b <= max_den; (a, b, error)."""
    best = None
    xf = x - mp.floor(x)
    for b in range(1, max_den + 1):
        a = int(mp.nint(xf * b))
        err = abs(xf - mp.mpf(a) / b)
        if best is None or err < best[2]:
            best = (a % b, b, err)
            if err == 0:
                break
    return best


def angle_rank_numeric(P, precision=DEFAULT_PRECISION):
    """RelationLattice of P: delta and m via LLL-certified angle relations."""
    if precision < 64:
        raise WeilError("precision must be at least 64 bits")
    g = P.g
    rs = roots(P, precision)
    with mp.workprec(precision + 32):
        thetas = [mp.mpf(t) for t in rs.thetas]
        n_scale = 1 << (precision // 2)
        rows = []
        for j in range(g):
            row = [0] * g + [int(mp.nint(thetas[j] * n_scale))]
            row[j] = 1
            rows.append(row)
        rows.append([0] * g + [n_scale])
        reduced = lll_reduce(rows)
        accept_tol = mp.mpf(2) ** (-(precision // 4))
        candidates = []
        for row in reduced:
            c = tuple(row[:g])
            if not any(c):
                continue
            norm1 = sum(abs(x) for x in c)
            if max(abs(x) for x in c) > COEFF_BOUND_RAW:
                continue
            if _residual_to_int(thetas, c) < accept_tol * max(norm1, 1):
                candidates.append(c)
    if not candidates:
        return RelationLattice(g=g, precision=precision, relations=(),
                               rank=0, torsion_order=1, basis=())
    # doubled-precision verification of every accepted candidate
    rs2 = roots(P, 2 * precision)
    with mp.workprec(2 * precision + 32):
        thetas2 = [mp.mpf(t) for t in rs2.thetas]
        verify_tol = mp.mpf(2) ** (-precision)
        for c in candidates:
            if _residual_to_int(thetas2, c) >= verify_tol:
                raise UnverifiedRelation(
                    "candidate %r fails at doubled precision; raise precision" % (c,))
        # saturate and attach rational parts
        sat = saturate_lattice(candidates, g)
        rank = len(sat)
        presented = []
        scaled_rows = []
        denoms = []
        for vec in sat:
            x = mp.fsum(ci * t for ci, t in zip(vec, thetas2))
            a, b, err = _nearest_fraction(x, DENOMINATOR_BOUND)
            if err >= verify_tol:
                raise DenominatorBoundExceeded(
                    "relation %r has no denominator <= %d" % (vec, DENOMINATOR_BOUND))
            if max(abs(t) for t in vec) > COEFF_BOUND_PRESENTED:
                raise InconsistentLattice(
                    "presented relation %r exceeds the coefficient bound" % (vec,))
            presented.append((tuple(vec), a, b))
            denoms.append(b)
        # R = {c in span : value is an integer}: kernel of t -> sum t_i a_i/b_i mod 1
        big_d = lcm(*denoms) if denoms else 1
        kernel_rows = [[(presented[i][1] * big_d) // presented[i][2]
                        for i in range(rank)] + [big_d]]
        tker = integer_kernel(kernel_rows, rank + 1)
        rbasis = []
        for tv in tker:
            coeffs = tv[:rank]
            vec = [sum(coeffs[i] * sat[i][j] for i in range(rank)) for j in range(g)]
            if any(vec):
                rbasis.append(vec)
        divisors, _ = smith_normal_form(rbasis, g)
        if len(divisors) != rank:
            raise InconsistentLattice("relation lattice rank drifted")
        for d in divisors[:-1]:
            if d != 1:
                raise InconsistentLattice(
                    "torsion is not cyclic: divisors %r" % (divisors,))
        m = divisors[-1] if divisors else 1
        if m > DENOMINATOR_BOUND:
            raise DenominatorBoundExceeded("torsion order %d > %d" % (m, DENOMINATOR_BOUND))
    return RelationLattice(g=g, precision=precision,
                           relations=tuple(presented), rank=rank,
                           torsion_order=m,
                           basis=tuple(tuple(r) for r in rbasis))


def torsion_order_structural(P, bound=DENOMINATOR_BOUND,
                             precision=DEFAULT_PRECISION):
    """Smallest r with a torsion-free relation lattice after base change.

    Cross-check oracle for the torsion order: equals angle_rank_numeric(P).m.
    """
    for r in range(1, bound + 1):
        if angle_rank_numeric(base_change(P, r), precision).torsion_order == 1:
            return r
    raise BoundExceeded("no torsion-free base change with r <= %d" % bound)
