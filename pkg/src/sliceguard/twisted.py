"""Metabelian representations of torus knot groups, Fox calculus, and the
twisted Alexander polynomials they produce.

The torus knot group has the presentation <c1, c2 | c1^p = c2^q>.  For a
zero-sum character chi = (a_1, ..., a_p) over Z_q the working
representative of the metabelian representation sends

    c2 |-> t * diag(xi^(a_1), ..., xi^(a_p)),      xi = e^(2 pi i / q),
    c1 |-> A_p(t)^q,

with A_p(t) the companion-style matrix whose p-th power is t * id.  The
twisted polynomial of the exterior is computed twice: once through Fox
calculus on the relator (a determinant quotient) and once from the closed
product formula; the two must agree up to units on every call.  Dividing
by the extra (-1)^(p-1) (t - 1) gives the polynomial of the 0-surgery.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .covers import Character
from .cyclo import Cyclo, RootOfUnity
from .laurent import LaurentPoly, RationalFn

Word = tuple[tuple[int, int], ...]  # ((generator, exponent), ...), reduced


def word(*pairs) -> Word:
    """Build a reduced word from (generator, exponent) pairs."""
    out: list[list[int]] = []
    for gen, exp in pairs:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([gen, exp])
    return tuple((g, e) for g, e in out)


def fox_derivative(w: Word, gen: int) -> list[tuple[int, Word]]:
    """Free Fox derivative: d(uv) = du + u dv, d(g) = 1, d(g^-1) = -g^-1.

    Returns a formal integer combination of group words; like terms are
    collected so the result is canonical.
    """
    terms: list[tuple[int, Word]] = []
    prefix: Word = ()
    for g, e in w:
        if g == gen:
            if e > 0:
                # d(g^e) = 1 + g + ... + g^(e-1)
                for i in range(e):
                    terms.append((1, word(*prefix, (g, i))))
            else:
                # d(g^e) = -(g^-1 + g^-2 + ... + g^e)
                for i in range(1, -e + 1):
                    terms.append((-1, word(*prefix, (g, -i))))
        prefix = word(*prefix, (g, e))
    collected: dict[Word, int] = {}
    for c, u in terms:
        collected[u] = collected.get(u, 0) + c
    return [(c, u) for u, c in sorted(collected.items()) if c]


# ---------------------------------------------------------------------------
# The representation
# ---------------------------------------------------------------------------


def _mat_mul(A, B):
    n = len(A)
    out = [[LaurentPoly.zero()] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            a = A[i][k]
            if a.is_zero():
                continue
            for j in range(n):
                b = B[k][j]
                if not b.is_zero():
                    out[i][j] = out[i][j] + a * b
    return [row[:] for row in out]

def _mat_pow(A, e, size):
    out = _identity(size)
    base = A
    while e:
        if e & 1:
            out = _mat_mul(out, base)
        base = _mat_mul(base, base)
        e >>= 1
    return out


def _identity(n):
    return [
        [LaurentPoly.one() if i == j else LaurentPoly.zero() for j in range(n)]
        for i in range(n)
    ]


def _companion(p: int):
    """A_p(t): ones on the superdiagonal, t in the corner; A_p^p = t*id."""
    A = [[LaurentPoly.zero()] * p for _ in range(p)]
    for i in range(p - 1):
        A[i][i + 1] = LaurentPoly.one()
    A[p - 1][0] = LaurentPoly.t()
    return A


def _companion_inv(p: int):
    A = [[LaurentPoly.zero()] * p for _ in range(p)]
    for i in range(p - 1):
        A[i + 1][i] = LaurentPoly.one()
    A[0][p - 1] = LaurentPoly.t(-1)
    return A


class TorusRep:
    """Images of c1, c2 (and inverses) under the working representative."""

    def __init__(self, p: int, q: int, chi: Character):
        if chi.p != p:
            raise ValueError("character length must equal p")
        if chi.r != q:
            raise ValueError("character modulus must equal q")
        self.p, self.q, self.chi = p, q, chi
        roots = [RootOfUnity.normalized(a, q) for a in chi.values]
        diag = [
            [
                LaurentPoly(1, [roots[i].as_cyclo()]) if i == j else LaurentPoly.zero()
                for j in range(p)
            ]
            for i in range(p)
        ]
        diag_inv = [
            [
                LaurentPoly(-1, [roots[i].inverse().as_cyclo()])
                if i == j
                else LaurentPoly.zero()
                for j in range(p)
            ]
            for i in range(p)
        ]
        self.images = {
            (1, 1): _mat_pow(_companion(p), q, p),
            (1, -1): _mat_pow(_companion_inv(p), q, p),
            (2, 1): diag,
            (2, -1): diag_inv,
        }

    def image_of_word(self, w: Word):
        out = _identity(self.p)
        for g, e in w:
            base = self.images[(g, 1 if e > 0 else -1)]
            out = _mat_mul(out, _mat_pow(base, abs(e), self.p))
        return out

    def image_of_combination(self, terms):
        out = [[LaurentPoly.zero()] * self.p for _ in range(self.p)]
        for coeff, w in terms:
            m = self.image_of_word(w)
            for i in range(self.p):
                for j in range(self.p):
                    if not m[i][j].is_zero():
                        out[i][j] = out[i][j] + m[i][j].scale(coeff)
        return out


def rep_images(p: int, q: int, chi: Character):
    """(image of c1, image of c2); the defining relation is re-checked."""
    rep = TorusRep(p, q, chi)
    c1, c2 = rep.images[(1, 1)], rep.images[(2, 1)]
    lhs = _mat_pow(c1, p, p)
    rhs = _mat_pow(c2, q, p)
    for i in range(p):
        for j in range(p):
            if lhs[i][j] != rhs[i][j]:
                raise ArithmeticError("representation violates c1^p = c2^q")
    return c1, c2


def _det(rows):
    """Determinant of a small matrix of Laurent polynomials (subset DP)."""
    n = len(rows)
    states = {0: LaurentPoly.one()}
    for k in range(n):
        new = {}
        for subset, acc in states.items():
            seen = 0
            for c in range(n):
                bit = 1 << c
                if subset & bit:
                    seen += 1
                    continue
                entry = rows[k][c]
                if entry.is_zero():
                    continue
                term = acc * entry if seen % 2 == 0 else -(acc * entry)
                key = subset | bit
                if key in new:
                    new[key] = new[key] + term
                else:
                    new[key] = term
        states = {s: v for s, v in new.items() if not v.is_zero()}
    return states.get((1 << n) - 1, LaurentPoly.zero())


RELATOR_DERIVATIVE_GEN = 1  # differentiate c1^p c2^-q with respect to c1


@lru_cache(maxsize=None)
def _fox_numerator(p: int, q: int) -> LaurentPoly:
    """det of the image of d(c1^p c2^-q)/d c1; character independent since
    the image of c1 is."""
    rep = TorusRep(p, q, Character(q, tuple([0] * p)))
    relator = word((1, p), (2, -q))
    terms = fox_derivative(relator, RELATOR_DERIVATIVE_GEN)
    return _det(rep.image_of_combination(terms))


@dataclass(frozen=True)
class TwistedPoly:
    """The twisted polynomial as a reduced fraction, normalized up to units."""

    fraction: RationalFn

    def is_unit(self) -> bool:
        return self.fraction.is_unit()

    def __str__(self):
        return str(self.fraction)


@lru_cache(maxsize=None)
def twisted_alex_exterior(p: int, q: int, chi: Character) -> TwistedPoly:
    """Twisted Alexander polynomial of the knot exterior, by both routes.

    Route one is the Fox calculus torsion quotient
    det(rep(d relator / d c1)) / det(rep(c2) - id); route two is the
    closed form (1 - t^q)^(p-1) / prod_i (t xi^(a_i) - 1).  They must
    agree up to units, and the reduced closed form is returned.
    """
    rep = TorusRep(p, q, chi)
    fox_num = _fox_numerator(p, q)
    c2 = rep.images[(2, 1)]
    den_rows = [
        [c2[i][j] - (LaurentPoly.one() if i == j else LaurentPoly.zero()) for j in range(p)]
        for i in range(p)
    ]
    fox_den = _det(den_rows)
    # closed form
    closed_num = (LaurentPoly.one() - LaurentPoly.from_ints([1], q)) ** (p - 1)
    closed_den = LaurentPoly.one()
    for a in chi.values:
        factor = LaurentPoly(0, [Cyclo.from_fraction(-1), RootOfUnity.normalized(a, q).as_cyclo()])
        closed_den = closed_den * factor
    if fox_num == closed_num and fox_den == closed_den:
        # the usual outcome: the routes agree on the nose, reduce once
        return TwistedPoly(RationalFn(closed_num, closed_den))
    fox = RationalFn(fox_num, fox_den)
    closed = RationalFn(closed_num, closed_den)
    if not fox.eq_up_to_units(closed):
        raise ArithmeticError(
            f"Fox-calculus and closed-form twisted polynomials disagree for "
            f"p={p}, q={q}, chi={chi}"
        )
    return TwistedPoly(closed)


@lru_cache(maxsize=None)
def twisted_alex_surgery(p: int, q: int, chi: Character) -> TwistedPoly:
    """Twisted polynomial of the 0-surgery: the exterior polynomial divided
    by (-1)^(p-1) (t - 1)."""
    ext = twisted_alex_exterior(p, q, chi).fraction
    sign = 1 if (p - 1) % 2 == 0 else -1
    num = ext.num.scale(sign)
    # the exterior fraction is already reduced, so only the new (t - 1)
    # factor can cancel
    one = RootOfUnity.one()
    extra = 0
    while num.span() > 0 and num.evaluate_root(one).is_zero() and extra < 1:
        num = num.divide_linear(one)
        extra += 1
    if extra:
        return TwistedPoly(RationalFn.from_reduced(num, ext.den))
    return TwistedPoly(
        RationalFn.from_reduced(num, ext.den * LaurentPoly.from_ints([-1, 1]))
    )
