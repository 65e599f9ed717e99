"""Iterated torus knots with a common cabling parameter and their formal sums.

``IteratedTorusKnot(p, (q1, ..., ql))`` denotes the knot obtained from the
(p, q1) torus knot by successive (p, qi)-cabling.  A ``KnotCombination``
is a formal integer linear combination of such knots (under connected
sum), all sharing the same p; the empty combination stands for the unknot.

The torus-knot summands of the s-th companion level drive the algebraic
sliceness test: a combination is algebraically slice exactly when every
level cancels completely, which reduces the decision to bookkeeping on
the cabling sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, n + 1):
        if p * p > n:
            return True  # n itself is prime
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return False


@dataclass(frozen=True, order=True, repr=False)
class IteratedTorusKnot:
    p: int
    qs: tuple[int, ...]

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("cabling parameter p must be at least 2")
        if not self.qs:
            raise ValueError("empty cabling sequence")
        for q in self.qs:
            if q < 1:
                raise ValueError(f"cabling index {q} must be positive")
            if gcd(self.p, q) != 1:
                raise ValueError(f"gcd({self.p}, {q}) != 1: not a torus knot cable")

    @property
    def length(self) -> int:
        return len(self.qs)

    @property
    def final(self) -> int:
        """The last cabling index; prime for members of the working family."""
        return self.qs[-1]

    def __str__(self):
        return "T(" + ";".join(f"{self.p},{q}" for q in self.qs) + ")"

    __repr__ = __str__


def in_sp(knot: IteratedTorusKnot) -> bool:
    """Membership in the family S_p: the final index is prime and every
    earlier index is coprime to it (coprimality with p is enforced by the
    type)."""
    if not _is_prime(knot.final):
        return False
    if knot.length > 1:
        for q in knot.qs[:-1]:
            if gcd(q, knot.final) != 1:
                return False
    return True


class KnotCombination:
    """Formal sum of iterated torus knots with integer coefficients.

    Terms with the same cabling sequence are combined on construction, so
    a combination never contains a summand together with its mirror.
    """

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms):
        combined: dict[IteratedTorusKnot, int] = {}
        for knot, coeff in dict(terms).items() if isinstance(terms, dict) else terms:
            if knot.p != p:
                raise ValueError(
                    f"knot {knot} has cabling parameter {knot.p}, expected {p}"
                )
            if coeff:
                combined[knot] = combined.get(knot, 0) + coeff
        object.__setattr__(self, "p", p)
        object.__setattr__(
            self, "terms",
            {k: c for k, c in sorted(combined.items()) if c != 0},
        )

    def is_empty(self) -> bool:
        return not self.terms

    def mirror(self) -> "KnotCombination":
        return KnotCombination(self.p, {k: -c for k, c in self.terms.items()})

    def __add__(self, other: "KnotCombination") -> "KnotCombination":
        if other.p != self.p:
            raise ValueError("cannot add combinations with different p")
        merged = dict(self.terms)
        for k, c in other.terms.items():
            merged[k] = merged.get(k, 0) + c
        return KnotCombination(self.p, merged)

    def __eq__(self, other):
        return isinstance(other, KnotCombination) and (
            self.p == other.p and self.terms == other.terms
        )

    __hash__ = None

    def max_length(self) -> int:
        return max((k.length for k in self.terms), default=0)

    def ending_primes(self) -> list[int]:
        """Distinct final indices, candidates for the obstruction prime."""
        return sorted({k.final for k in self.terms})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for knot, coeff in self.terms.items():
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            body = str(knot) if mag == 1 else f"{mag}*{knot}"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" # {'-' if sign == '-' else ''}{body}"
        return out

    __repr__ = __str__


class TorusKnotSum:
    """Formal sum of plain torus knots T(p, q); the empty sum is the unknot."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        combined: dict[tuple[int, int], int] = {}
        for pq, coeff in dict(terms).items() if isinstance(terms, dict) else terms:
            if coeff:
                combined[pq] = combined.get(pq, 0) + coeff
        object.__setattr__(
            self, "terms", {k: c for k, c in sorted(combined.items()) if c != 0}
        )

    def is_unknot(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, TorusKnotSum) and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "U"
        return " + ".join(f"{c}*T{pq}" for pq, c in self.terms.items())


def s_level(K: KnotCombination, s: int) -> TorusKnotSum:
    """The level-s companion sum: each term T(p, (q1..ql)) contributes its
    (l - s)-th index, or nothing when the sequence is too short."""
    if s < 0:
        raise ValueError("level must be nonnegative")
    terms: dict[tuple[int, int], int] = {}
    for knot, coeff in K.terms.items():
        idx = knot.length - s
        if idx >= 1:
            pq = (K.p, knot.qs[idx - 1])
            terms[pq] = terms.get(pq, 0) + coeff
    return TorusKnotSum(terms)


def algebraically_slice(K: KnotCombination):
    """Decide algebraic sliceness by total cancellation of every level.

    Returns ``(True, None)`` or ``(False, (s, (p, q), coefficient))`` where
    the witness is the first surviving torus-knot summand.
    """
    for s in range(K.max_length()):
        level = s_level(K, s)
        if not level.is_unknot():
            (pq, coeff) = next(iter(level.terms.items()))
            return False, (s, pq, coeff)
    return True, None


def simplify(K: KnotCombination) -> KnotCombination:
    """Cancel mirror pairs.  Combinations combine equal sequences on
    construction, so this is a re-normalization; it is idempotent and kept
    as the explicit combination-level shadow of deleting slice summands."""
    return KnotCombination(K.p, K.terms)


@dataclass(frozen=True)
class NormalForm:
    """A simplified, level-cancelling combination arranged into signed pairs.

    ``groups[0]`` holds the pairs whose sequences end in the chosen prime r;
    the remaining groups are the other final primes in increasing order.
    Each pair is (positive sequence, negative sequence) with both sequences
    ending in the group's prime; multiplicities are expanded to unit
    coefficient copies.
    """

    p: int
    r: int
    primes: tuple[int, ...]
    groups: tuple[tuple[tuple[tuple[int, ...], tuple[int, ...]], ...], ...]

    @property
    def m(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    @property
    def m1(self) -> int:
        return len(self.groups[0])

    def max_length(self) -> int:
        return max(
            max(len(a), len(b)) for g in self.groups for a, b in g
        )


def normal_form(K: KnotCombination, r: int) -> NormalForm:
    """Pair off positive and negative terms by final prime, r-group first.

    Requires the zero level to cancel (counts of positive and negative
    terms agree for every final index) and r to occur as a final index.
    Pairing within a group is lexicographic, which makes the result
    deterministic; any pairing is equally valid.
    """
    K = simplify(K)
    if K.is_empty():
        raise ValueError("empty combination has no normal form")
    positives: dict[int, list[tuple[int, ...]]] = {}
    negatives: dict[int, list[tuple[int, ...]]] = {}
    for knot, coeff in K.terms.items():
        bucket = positives if coeff > 0 else negatives
        bucket.setdefault(knot.final, []).extend([knot.qs] * abs(coeff))
    if set(positives) != set(negatives) or any(
        len(positives[e]) != len(negatives[e]) for e in positives
    ):
        raise ValueError(
            "zero level does not cancel: the combination is not algebraically slice"
        )
    if r not in positives:
        raise ValueError(f"{r} does not occur as a final index of {K}")
    primes = [r] + sorted(e for e in positives if e != r)
    groups = []
    for e in primes:
        pos = sorted(positives[e])
        neg = sorted(negatives[e])
        groups.append(tuple(zip(pos, neg)))
    return NormalForm(p=K.p, r=r, primes=tuple(primes), groups=tuple(groups))
