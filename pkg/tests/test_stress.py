"""Randomized end-to-end robustness: generated level-cancelling
combinations must come out NOT_SLICE with verifying certificates, or
INCONCLUSIVE for an explicit budget reason.  Nothing else is acceptable."""

import json
import random
from math import gcd

from sliceguard import knots
from sliceguard.knots import IteratedTorusKnot, KnotCombination
from sliceguard.pipeline import obstruct, verify_verdict


def _j_block(p, a, b, c):
    T = IteratedTorusKnot
    return [(T(p, (a, b)), 1), (T(p, (b,)), -1), (T(p, (a, c)), -1), (T(p, (c,)), 1)]


def _deep_block(p, a1, a2, b, c):
    T = IteratedTorusKnot
    return [
        (T(p, (a1, a2, b)), 1),
        (T(p, (a2, b)), -1),
        (T(p, (a1, a2, c)), -1),
        (T(p, (a2, c)), 1),
    ]


def test_generated_combinations_obstructed_or_refused():
    rng = random.Random(20240718)
    seen = {"NOT_SLICE": 0, "INCONCLUSIVE": 0}
    trials = 0
    while trials < 14:
        p = rng.choice([2, 2, 3])
        primes = [q for q in (3, 5, 7, 11, 13) if q % p]
        b, c = rng.sample(primes, 2)
        pool = [a for a in range(2, 13) if all(gcd(a, y) == 1 for y in (p, b, c))]
        coeff = rng.choice([1, -1, 2])
        if rng.random() < 0.6:
            block = _j_block(p, rng.choice(pool), b, c)
        else:
            block = _deep_block(p, rng.choice(pool), rng.choice(pool), b, c)
        K = KnotCombination(p, [(k, coeff * s) for k, s in block])
        if K.is_empty():
            continue
        trials += 1
        assert knots.algebraically_slice(K)[0]
        verdict = obstruct(K)
        assert verdict.kind in ("NOT_SLICE", "INCONCLUSIVE"), str(K)
        seen[verdict.kind] += 1
        if verdict.kind == "NOT_SLICE":
            assert verdict.certificates
            verify_verdict(json.loads(verdict.to_json()))
        else:
            assert "budget" in verdict.reason or "exceed" in verdict.reason, verdict.reason
    assert seen["NOT_SLICE"] >= 8


def test_mixed_depth_combination():
    # two blocks sharing the prime 5 from different depths: the r = 5 form
    # has m1 = 2 and every metabolizer still gets certified
    T = IteratedTorusKnot
    K = KnotCombination(
        2,
        _j_block(2, 3, 5, 7)
        + _deep_block(2, 9, 11, 5, 13),
    )
    assert knots.algebraically_slice(K)[0]
    verdict = obstruct(K)
    assert verdict.kind == "NOT_SLICE"
    verify_verdict(json.loads(verdict.to_json()))
