import random
from fractions import Fraction

import pytest

from sliceguard import seifert
from sliceguard.covers import Character
from sliceguard.cyclo import normalize_root
from sliceguard.laurent import LaurentPoly
from sliceguard.witt import (
    Classical,
    Twisted,
    WittClass,
    is_metabolic_classical,
    jump_of,
    order_of,
    split_components,
    support_of,
)


def C(p, q, num=0, den=1, power=1, coeff=1):
    return Classical(p, q, normalize_root(num, den), power, coeff)


class TestOrders:
    def test_classical_untwisted(self):
        assert order_of(C(2, 3)).num == LaurentPoly.from_ints([1, -1, 1])

    def test_classical_twisted(self):
        out = order_of(C(2, 3, 1, 3))
        z3 = normalize_root(1, 3).as_cyclo()
        expected = LaurentPoly(0, [1 + 0 * z3, -z3, z3 * z3])
        assert out.num == expected

    def test_twisted_unit(self):
        atom = Twisted(2, 3, Character(3, (1, 2)))
        assert order_of(atom).is_unit()


class TestJumps:
    def test_basic(self):
        assert jump_of(C(2, 3), Fraction(1, 6)) == -2
        assert jump_of(C(2, 3), Fraction(5, 6)) == 2
        assert jump_of(C(2, 3), Fraction(1, 2)) == 0
        assert jump_of(C(2, 3, coeff=-3), Fraction(1, 6)) == 6

    def test_reparametrized_support(self):
        # twist by 1/3: jumps where x + 1/3 lands on {1/6, 5/6}
        atom = C(2, 3, 1, 3)
        assert jump_of(atom, Fraction(5, 6)) == -2  # 5/6 + 1/3 = 1/6 mod 1
        assert jump_of(atom, Fraction(1, 2)) == 2
        assert support_of(atom) == frozenset({Fraction(5, 6), Fraction(1, 2)})

    def test_power_two_support(self):
        atom = C(2, 3, power=2)
        assert support_of(atom) == frozenset(
            {Fraction(1, 12), Fraction(5, 12), Fraction(7, 12), Fraction(11, 12)}
        )
        assert jump_of(atom, Fraction(1, 12)) == -2

    def test_composition_property(self):
        rng = random.Random(31)
        base = seifert.jump_function(2, 5)
        for _ in range(10):
            c = normalize_root(rng.randrange(5), 5)
            m = rng.randrange(1, 4)
            atom = C(2, 5, c.numer, c.order, power=m)
            for x0 in base:
                for j in range(m):
                    x = (Fraction(x0 - c.frac + j)) / m % 1
                    assert jump_of(atom, x) == base[x0]

    def test_rejects_twisted(self):
        with pytest.raises(TypeError):
            jump_of(Twisted(2, 3, Character(3, (0, 0))), Fraction(1, 2))


class TestSplit:
    def test_distinct_torus_knots_split(self):
        W = WittClass([C(2, 3), C(2, 5)])
        parts = split_components(W)
        assert len(parts) == 2

    def test_distinct_twists_split(self):
        W = WittClass([C(2, 3, 1, 5), C(2, 3, 2, 5)])
        assert len(split_components(W)) == 2

    def test_identical_supports_merge_coefficients(self):
        W = WittClass([C(2, 3), C(2, 3)])
        assert len(W.atoms) == 1 and W.atoms[0].coefficient == 2
        assert len(split_components(W)) == 1

    def test_mixed_twisted_classical(self):
        W = WittClass([Twisted(2, 3, Character(3, (0, 0))), C(2, 5)])
        parts = split_components(W)
        assert len(parts) == 2


class TestMetabolic:
    def test_cancelling_pair(self):
        W = WittClass([C(2, 3), C(2, 3, coeff=-1)])
        assert W.is_empty()
        assert is_metabolic_classical(W) == (True, None)

    def test_single_atom_witness(self):
        ok, witness = is_metabolic_classical(WittClass([C(2, 3)]))
        assert not ok
        assert witness == (Fraction(1, 6), -2)

    def test_disjoint_twists_survive(self):
        W = WittClass([C(2, 3, 1, 3), C(2, 3, coeff=-1)])
        ok, witness = is_metabolic_classical(W)
        assert not ok
        x, total = witness
        assert total != 0 and x in support_of(C(2, 3, 1, 3)) | support_of(C(2, 3))

    def test_group_inverse_property(self):
        rng = random.Random(17)
        for _ in range(10):
            atoms = [
                C(2, rng.choice([3, 5]), rng.randrange(3), 3,
                  power=rng.randrange(1, 3), coeff=rng.randrange(1, 3))
                for _ in range(3)
            ]
            W = WittClass(atoms)
            assert is_metabolic_classical(W + (-W))[0]

    def test_split_consistency(self):
        W = WittClass([C(2, 3), C(2, 5), C(2, 3, coeff=-1)])
        parts = split_components(W)
        total_ok = is_metabolic_classical(W)[0]
        assert total_ok == all(is_metabolic_classical(part)[0] for part in parts)

    def test_witness_even_nonzero(self):
        W = WittClass([C(3, 4, 1, 5), C(3, 4, coeff=-3)])
        ok, (x, total) = is_metabolic_classical(W)
        assert not ok and total % 2 == 0 and total != 0
