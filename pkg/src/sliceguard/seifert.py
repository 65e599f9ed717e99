"""Seifert data of torus knots: matrices, Alexander polynomials,
Levine-Tristram signatures, and branched cyclic covers with linking forms.

The Seifert matrix comes from Seifert's algorithm on the closed positive
braid (s_1 s_2 ... s_{p-1})^q: one disk per strand, one band per letter,
and one homology cycle for each pair of consecutive bands on the same
strand pair.  Writing e(i, j) for the cycle through occurrences j and
j+1 of letter i, the linking numbers reduce to a four-line rule:

  * lk(e, e+) = -1 for every cycle (two positively twisted bands);
  * consecutive cycles on the same pair: lk(e(i,j), e(i,j+1)+) = 1
    and lk(e(i,j+1), e(i,j)+) = 0 (they meet once, in the shared band);
  * cycles on adjacent pairs never link the pushoff of the lower one
    (the pushoff leaves the slab between the disks), and the lower cycle
    links the upper pushoff by +1 or -1 according to which of the two
    interleaving patterns the four band positions form;
  * everything else is 0.

The construction is re-validated on every call: det(V - V^T) must be a
unit and det(V - t V^T) must give the torus-knot Alexander polynomial, so
a convention slip cannot propagate silently.

Signatures are computed on exact Hermitian matrices over a cyclotomic
field.  The working route is an LDL* sweep in complex interval
arithmetic whose pivot signs must be certified, raising precision until
they are; if certification keeps failing, an exact characteristic
polynomial with certified coefficient signs settles the count (Descartes'
rule is exact for polynomials with all-real roots).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from mpmath import iv

from .cyclo import Cyclo, RootOfUnity, certified_sign
from .knots import is_prime_power, _is_prime
from .laurent import LaurentPoly, unit_circle_roots


class ConventionError(ArithmeticError):
    """A structural self-check failed; never guess past one of these."""


DEFAULT_PRECISION_BITS = 64
_precision_floor = DEFAULT_PRECISION_BITS


def set_precision_floor(bits: int):
    """Set the starting precision for signature certification.  Results do
    not depend on it (precision is raised until signs are certified, with
    an exact fallback); it only tunes how often retries happen."""
    global _precision_floor
    _precision_floor = max(int(bits), 8)


# ---------------------------------------------------------------------------
# Seifert matrices from the positive braid
# ---------------------------------------------------------------------------


def braid_word(p: int, q: int) -> list[int]:
    """The positive word (s_1 s_2 ... s_{p-1})^q on p strands."""
    return [i for _ in range(q) for i in range(1, p)]


def _band_cycles(word: list[int], strands: int):
    occurrences: dict[int, list[int]] = {i: [] for i in range(1, strands)}
    for pos, letter in enumerate(word):
        occurrences[letter].append(pos)
    cycles = []
    for letter in range(1, strands):
        pos = occurrences[letter]
        cycles.extend((letter, pos[j], pos[j + 1]) for j in range(len(pos) - 1))
    return cycles


def _seifert_matrix_raw(p: int, q: int) -> tuple[tuple[int, ...], ...]:
    cycles = _band_cycles(braid_word(p, q), p)
    n = len(cycles)
    V = [[0] * n for _ in range(n)]
    for a in range(n):
        V[a][a] = -1
    for a, b in itertools.permutations(range(n), 2):
        (i, s, t), (k, u, v) = cycles[a], cycles[b]
        if k == i and t == u:
            V[a][b] = 1
        elif k == i + 1:
            if s < u < t < v:
                V[b][a] = 1
            elif u < s < v < t:
                V[b][a] = -1
    return tuple(tuple(row) for row in V)


@lru_cache(maxsize=None)
def seifert_matrix(p: int, q: int) -> tuple[tuple[int, ...], ...]:
    """Validated Seifert matrix of T(p, q), size (p-1)(q-1)."""
    if p < 2 or q < 2:
        raise ValueError("torus knot parameters must be at least 2")
    if gcd(p, q) != 1:
        raise ValueError(f"gcd({p}, {q}) != 1")
    V = _seifert_matrix_raw(p, q)
    if len(V) != (p - 1) * (q - 1):
        raise ConventionError("unexpected cycle count in the band basis")
    if abs(_int_det([[V[i][j] - V[j][i] for j in range(len(V))] for i in range(len(V))])) != 1:
        raise ConventionError("det(V - V^T) is not a unit")
    # det(V - t V^T) against the closed torus-knot Alexander polynomial
    if not _seifert_alexander(V).eq_up_to_units(_torus_alexander_reference(p, q)):
        raise ConventionError("det(V - t V^T) does not match the Alexander polynomial")
    return V


def _int_det(rows) -> int:
    # Bareiss fraction-free elimination
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _laurent_det(rows: list[list[LaurentPoly]]) -> LaurentPoly:
    """Fraction-free Bareiss determinant over the polynomial ring; every
    division is exact by the Sylvester identity, which doubles as a
    consistency check."""
    n = len(rows)
    M = [row[:] for row in rows]
    sign = 1
    prev = LaurentPoly.one()
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if swap is None:
                return LaurentPoly.zero()
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                M[i][j] = num.exact_div(prev) if prev.span() > 0 else num.scale(
                    prev.lead().inverse()
                ).shift(-prev.low)
        prev = M[k][k]
    out = M[n - 1][n - 1]
    return out if sign == 1 else -out


@lru_cache(maxsize=None)
def _torus_alexander_reference(p: int, q: int) -> LaurentPoly:
    # (t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1)), exact integer division
    def cyc(k):
        return LaurentPoly.from_ints([-1] + [0] * (k - 1) + [1])

    num = cyc(p * q) * cyc(1)
    return num.exact_div(cyc(p)).exact_div(cyc(q))


def _seifert_alexander(V) -> LaurentPoly:
    n = len(V)
    t = LaurentPoly.t()
    rows = [
        [LaurentPoly.from_ints([V[i][j]]) - t * V[j][i] for j in range(n)]
        for i in range(n)
    ]
    return _laurent_det(rows)


@lru_cache(maxsize=None)
def alexander_poly(p: int, q: int) -> LaurentPoly:
    """det(V - t V^T) in monic low-0 normal form."""
    return _seifert_alexander(seifert_matrix(p, q)).unit_normal()


@lru_cache(maxsize=None)
def _alexander_roots_cached(p: int, q: int) -> tuple:
    return tuple(unit_circle_roots(alexander_poly(p, q), {p * q}).items())


def alexander_roots(p: int, q: int) -> dict:
    """Unit-circle roots of the Alexander polynomial (all of them), with
    multiplicities; the admissible orders divide pq."""
    return dict(_alexander_roots_cached(p, q))


# ---------------------------------------------------------------------------
# Levine-Tristram signatures
# ---------------------------------------------------------------------------


def _interval_ldl_signature(V, k: int, n: int, prec: int):
    """Signature of (1-w)V + (1-wbar)V^T at w = e^(2 pi i k/n), or None
    when some pivot sign cannot be certified at this precision."""
    size = len(V)
    old = iv.prec
    try:
        iv.prec = prec
        theta = 2 * iv.pi * k / n
        w = iv.mpc(iv.cos(theta), iv.sin(theta))
        wbar = iv.mpc(w.real, -w.imag)
        a = (1 - w)
        b = (1 - wbar)
        H = [[a * V[i][j] + b * V[j][i] for j in range(size)] for i in range(size)]
        active = list(range(size))
        signature = 0
        while active:
            pivot = None
            best = None
            for i in active:
                d = H[i][i].real
                if 0 in d:
                    continue
                margin = min(abs(d.a), abs(d.b))
                if best is None or margin > best:
                    best, pivot = margin, i
            if pivot is None:
                return None
            d = H[pivot][pivot].real
            signature += 1 if d.a > 0 else -1
            active.remove(pivot)
            dinv = 1 / H[pivot][pivot]
            for i in active:
                f = H[i][pivot] * dinv
                for j in active:
                    H[i][j] = H[i][j] - f * H[pivot][j]
        return signature
    finally:
        iv.prec = old


def _exact_signature(V, x: Fraction) -> int:
    """Exact route: characteristic polynomial over the cyclotomic field,
    certified coefficient signs, Descartes count (exact for real spectra)."""
    size = len(V)
    w = RootOfUnity(x).as_cyclo()
    wbar = RootOfUnity(x).inverse().as_cyclo()
    one = Cyclo.one()
    a = one - w
    b = one - wbar
    H = [[a * V[i][j] + b * V[j][i] for j in range(size)] for i in range(size)]
    coeffs = [Cyclo.one()]
    M = [row[:] for row in H]
    for k in range(1, size + 1):
        tr = Cyclo.zero()
        for i in range(size):
            tr = tr + M[i][i]
        ck = tr * Fraction(-1, k)
        coeffs.append(ck)
        if k < size:
            for i in range(size):
                M[i][i] = M[i][i] + ck
            M = _cyclo_mat_mul(H, M)
    if coeffs[-1].is_zero():
        raise ValueError("singular Hermitian matrix: evaluation point is a root")
    signs = [certified_sign(c) for c in coeffs]
    nonzero = [s for s in signs if s != 0]
    positives = sum(1 for u, v in zip(nonzero, nonzero[1:]) if u != v)
    return 2 * positives - size


def _cyclo_mat_mul(A, B):
    n = len(A)
    out = [[Cyclo.zero()] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            aik = A[i][k]
            if aik.is_zero():
                continue
            for j in range(n):
                if not B[k][j].is_zero():
                    out[i][j] = out[i][j] + aik * B[k][j]
    return out


def lt_signature(p: int, q: int, x, precision_bits: int | None = None) -> int:
    """Levine-Tristram signature of T(p, q) at e^(2 pi i x), x in (0, 1).

    Rejects evaluation at roots of the Alexander polynomial, where the
    signature is undefined.
    """
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError("evaluation point must be strictly between 0 and 1")
    if RootOfUnity(x) in alexander_roots(p, q):
        raise ValueError(f"{x} is a root of the Alexander polynomial of T({p},{q})")
    V = seifert_matrix(p, q)
    prec = max(precision_bits if precision_bits is not None else _precision_floor, 8)
    for _ in range(4):
        sig = _interval_ldl_signature(V, x.numerator, x.denominator, prec)
        if sig is not None:
            return sig
        prec *= 2
    return _exact_signature(V, x)


def jump_function(p: int, q: int, precision_bits: int | None = None) -> dict:
    """Signature jumps of T(p, q): candidate points are the Alexander roots
    a/(pq); the two one-sided limits are read off at midpoints between
    consecutive candidates.  Zero jumps are dropped.
    """
    return dict(_jump_function_cached(p, q, precision_bits))


@lru_cache(maxsize=None)
def _jump_function_cached(p: int, q: int, precision_bits) -> tuple:
    candidates = sorted(root.frac for root in alexander_roots(p, q))
    mids = []
    prev = Fraction(0)
    for c in candidates:
        mids.append((prev + c) / 2)
        prev = c
    mids.append((prev + 1) / 2)
    sigma = [lt_signature(p, q, m, precision_bits) for m in mids]
    if sigma[0] != 0 or sigma[-1] != 0:
        raise ConventionError("signature does not vanish near 1 on the circle")
    jumps = []
    for i, c in enumerate(candidates):
        delta = sigma[i + 1] - sigma[i]
        if delta:
            jumps.append((c, delta))
    return tuple(jumps)


# ---------------------------------------------------------------------------
# Branched cyclic covers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverPresentation:
    """Block-circulant record of H_1 of the n-fold cover: the matrix of
    t*V - V^T with t acting as the n-cycle block shift."""

    n: int
    matrix: tuple
    deck: tuple


@dataclass(frozen=True)
class PrimeModule:
    """H_1 of the cover as an F_r vector space with deck action and linking
    form.  ``gram[i][j]`` means the fraction gram[i][j] / r in Q/Z.
    Vectors are rows; the action is v -> v @ action."""

    r: int
    dim: int
    action: tuple
    gram: tuple


@dataclass(frozen=True)
class CoverHomology:
    p: int
    q: int
    n: int
    presentation: CoverPresentation
    divisors: tuple
    order: int
    module: PrimeModule | None


def smith_normal_form(rows):
    """Integer Smith normal form.  Returns (divisors, U, Uinv) where
    U @ A @ W = diag(divisors) for a unimodular U tracked explicitly
    (column operations are untracked).  coker(A) = ⊕ Z/d_i via x -> U x.
    """
    A = [list(map(int, r)) for r in rows]
    nrows, ncols = len(A), len(A[0])
    U = [[int(i == j) for j in range(nrows)] for i in range(nrows)]

    def row_sub(i, j, c):
        if c:
            A[i] = [x - c * y for x, y in zip(A[i], A[j])]
            U[i] = [x - c * y for x, y in zip(U[i], U[j])]

    def reduce_from(t):
        while t < min(nrows, ncols):
            best = None
            for i in range(t, nrows):
                for j in range(t, ncols):
                    if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                        best = (abs(A[i][j]), i, j)
            if best is None:
                return
            _, i0, j0 = best
            A[t], A[i0] = A[i0], A[t]
            U[t], U[i0] = U[i0], U[t]
            for row in A:
                row[t], row[j0] = row[j0], row[t]
            while True:
                dirty = False
                for i in range(t + 1, nrows):
                    if A[i][t]:
                        row_sub(i, t, A[i][t] // A[t][t])
                        if A[i][t]:
                            A[t], A[i] = A[i], A[t]
                            U[t], U[i] = U[i], U[t]
                            dirty = True
                for j in range(t + 1, ncols):
                    if A[t][j]:
                        c = A[t][j] // A[t][t]
                        for row in A:
                            row[j] -= c * row[t]
                        if A[t][j]:
                            for row in A:
                                row[t], row[j] = row[j], row[t]
                            dirty = True
                if not dirty:
                    break
            t += 1

    reduce_from(0)
    rank = min(nrows, ncols)
    # sign normalization and the divisibility chain
    while True:
        for i in range(rank):
            if A[i][i] < 0:
                A[i] = [-x for x in A[i]]
                U[i] = [-x for x in U[i]]
        broken = next(
            (
                i
                for i in range(rank - 1)
                if A[i][i] and A[i + 1][i + 1] % A[i][i] != 0
            ),
            None,
        )
        if broken is None:
            break
        row_sub(broken, broken + 1, -1)
        reduce_from(broken)
    divisors = tuple(A[i][i] for i in range(rank))
    Uinv = _int_matrix_inverse(U)
    return divisors, tuple(map(tuple, U)), Uinv


def _int_matrix_inverse(U):
    n = len(U)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(U)]
    for col in range(n):
        pivot = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                c = aug[i][col]
                aug[i] = [x - c * y for x, y in zip(aug[i], aug[col])]
    out = []
    for row in aug:
        vals = row[n:]
        if any(f.denominator != 1 for f in vals):
            raise ConventionError("matrix inverse is not integral")
        out.append(tuple(int(f) for f in vals))
    return tuple(out)


def _fraction_matrix_inverse(rows):
    n = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                c = aug[i][col]
                aug[i] = [x - c * y for x, y in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


def _symmetric_cover_presentation(V, n: int):
    """The (n-1) x (n-1) block matrix with V + V^T on the diagonal, -V^T
    above, -V below: the intersection form of the pushed-in Seifert
    surface's n-fold cyclic cover, whose boundary linking form is the one
    we want.  Its inverse mod Z presents the linking form directly."""
    g2 = len(V)
    N = (n - 1) * g2
    Y = [[0] * N for _ in range(N)]
    for k in range(n - 1):
        for a in range(g2):
            for b in range(g2):
                Y[k * g2 + a][k * g2 + b] = V[a][b] + V[b][a]
                if k + 1 < n - 1:
                    Y[k * g2 + a][(k + 1) * g2 + b] = -V[b][a]
                    Y[(k + 1) * g2 + a][k * g2 + b] = -V[a][b]
    T = [[0] * N for _ in range(N)]
    for k in range(n - 2):
        for a in range(g2):
            T[(k + 1) * g2 + a][k * g2 + a] = 1
    for k in range(n - 1):
        for a in range(g2):
            T[k * g2 + a][(n - 2) * g2 + a] = -1
    return Y, T


def _circulant_presentation(V, n: int) -> CoverPresentation:
    g2 = len(V)
    N = n * g2
    M = [[0] * N for _ in range(N)]
    P = [[0] * N for _ in range(N)]
    for i in range(n):
        for a in range(g2):
            P[((i + 1) % n) * g2 + a][i * g2 + a] = 1
            for b in range(g2):
                # t*V - V^T with t the cyclic shift
                M[((i + 1) % n) * g2 + a][i * g2 + b] += V[a][b]
                M[i * g2 + a][i * g2 + b] -= V[b][a]
    return CoverPresentation(n, tuple(map(tuple, M)), tuple(map(tuple, P)))


@lru_cache(maxsize=None)
def branched_cover(p: int, q: int, n: int) -> CoverHomology:
    """Homology of the n-fold cyclic branched cover of T(p, q) with its
    deck action and linking form.

    The block-circulant presentation is recorded and its cokernel is
    cross-checked against the symmetric presentation that carries the
    linking form; a zero elementary divisor (infinite homology) is
    rejected, which catches non-prime-power n.
    """
    if n < 2:
        raise ValueError("cover degree must be at least 2")
    V = seifert_matrix(p, q)
    circ = _circulant_presentation(V, n)
    circ_div, _, _ = smith_normal_form(circ.matrix)
    Y, T = _symmetric_cover_presentation(V, n)
    divisors, U, Uinv = smith_normal_form(Y)
    if any(d == 0 for d in divisors) or any(d == 0 for d in circ_div):
        raise ConventionError(
            f"singular cover presentation for n={n}"
            + ("" if is_prime_power(n) else " (n is not a prime power)")
        )
    torsion = tuple(d for d in divisors if d != 1)
    circ_torsion = tuple(sorted(d for d in circ_div if d != 1))
    if tuple(sorted(torsion)) != circ_torsion:
        raise ConventionError(
            "block-circulant and symmetric presentations disagree: "
            f"{circ_torsion} vs {torsion}"
        )
    order = 1
    for d in torsion:
        order *= d
    module = None
    if _is_prime(q) and torsion and all(d == q for d in torsion):
        module = _prime_module(Y, T, divisors, U, Uinv, q, n)
    return CoverHomology(
        p=p, q=q, n=n, presentation=circ,
        divisors=torsion, order=order, module=module,
    )


def _prime_module(Y, T, divisors, U, Uinv, r: int, n: int) -> PrimeModule:
    N = len(Y)
    gen_idx = [i for i, d in enumerate(divisors) if d != 1]
    dim = len(gen_idx)
    gens = [[Uinv[i][g] for i in range(N)] for g in gen_idx]
    Yinv = _fraction_matrix_inverse(Y)

    def pair(u, v) -> Fraction:
        total = Fraction(0)
        for i, ui in enumerate(u):
            if ui:
                row = Yinv[i]
                total += ui * sum(row[j] * vj for j, vj in enumerate(v) if vj)
        return total % 1

    gram = []
    for gu in gens:
        row = []
        for gv in gens:
            val = pair(gu, gv) * r
            if val.denominator != 1:
                raise ConventionError(
                    f"linking value with denominator {val.denominator} != {r}"
                )
            row.append(int(val) % r)
        gram.append(tuple(row))
    # The block-shift matrix satisfies T^tr Y T = Y, so the linking form is
    # invariant under x -> T^tr x; that transpose is the deck action in the
    # generator coordinates (row convention: v -> v @ action).
    action = []
    for g in gens:
        tg = [sum(T[j][i] * g[j] for j in range(N)) for i in range(N)]
        coords = [sum(U[k][i] * tg[i] for i in range(N)) % r for k in gen_idx]
        action.append(tuple(coords))
    module = PrimeModule(r=r, dim=dim, action=tuple(action), gram=tuple(gram))
    _validate_module(module, n)
    return module


def _validate_module(m: PrimeModule, n: int):
    from . import modp

    r, dim = m.r, m.dim
    if any(m.gram[i][j] != m.gram[j][i] for i in range(dim) for j in range(dim)):
        raise ConventionError("linking form is not symmetric")
    det = _int_det([list(row) for row in m.gram]) % r
    if det == 0:
        raise ConventionError("linking form is singular mod r")
    A = m.action
    AG = modp.mat_mul(A, m.gram, r)
    AGA = modp.mat_mul(AG, tuple(zip(*A)), r)
    if not modp.mat_eq(AGA, m.gram):
        raise ConventionError("deck action is not an isometry of the form")
    power = modp.identity(dim)
    total = [[0] * dim for _ in range(dim)]
    for _ in range(n):
        for i in range(dim):
            for j in range(dim):
                total[i][j] = (total[i][j] + power[i][j]) % r
        power = modp.mat_mul(power, A, r)
    if not modp.mat_eq(power, modp.identity(dim)):
        raise ConventionError("deck action does not have order dividing n")
    if any(x for row in total for x in row):
        raise ConventionError("deck action not annihilated by 1 + t + ... + t^{n-1}")


def cover_order_from_alexander(p: int, q: int, n: int) -> int:
    """|prod_{a=1}^{n-1} Delta(xi_n^a)|, the classical order formula for the
    homology of the n-fold branched cover; exact cyclotomic arithmetic."""
    delta = alexander_poly(p, q)
    prod = Cyclo.one()
    for a in range(1, n):
        prod = prod * delta.evaluate_root(RootOfUnity.normalized(a, n))
    value = prod.to_fraction()
    if value.denominator != 1:
        raise ConventionError("order product is not an integer")
    return abs(int(value))
