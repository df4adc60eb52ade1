import pytest
import os
from fractions import Fraction

import numpy as np

from polyent.setfn import GroundSet, RankVector, is_polymatroid, is_matroid, closure, contraction, restriction, \
    conditional, is_embedding, grouped, uniform_matroid, vamos_matroid, flats, modular_cut_extension, \
    diminishing_returns_violation, is_subadditive
from polyent.utils import GroundSetError, ModeError, InputFormatError

DATA = os.path.join(os.path.dirname(__file__), 'data')


def random_polymatroid(rng, n):
    """Weighted coverage function: f(S) = total weight of the union of the sets of S"""
    sets = rng.integers(0, 2, size=(n, 6)).astype(bool)
    weights = rng.integers(1, 5, size=6)
    return RankVector.from_function(['x{}'.format(i) for i in range(n)],
                                    lambda S: int(weights[np.any(sets[[int(x[1:]) for x in S]], axis=0)].sum())
                                    if S else 0)


class TestGroundSet:

    def test_masks(self):
        ground = GroundSet(['a', 'b', 'c'])

        assert ground.mask(['c', 'a']) == 0b101
        assert ground.mask('b') == 0b010
        assert ground.subset(0b110) == ('b', 'c')
        assert ground.format(0) == '{}'
        assert ground.size == 8

    def test_duplicate_labels(self):
        with pytest.raises(GroundSetError):
            GroundSet(['a', 'b', 'a'])

    def test_unknown_label(self):
        with pytest.raises(GroundSetError):
            GroundSet(['a']).mask(['z'])

    def test_cap(self):
        with pytest.raises(GroundSetError):
            GroundSet(['x{}'.format(i) for i in range(25)])


class TestRankVector:

    @pytest.fixture(autouse=True)
    def setUp(self):
        self.u23 = uniform_matroid(2, 'abc')

    def test_read(self):
        v = RankVector.read(os.path.join(DATA, 'u23.rank'))

        assert v.is_exact
        assert v == self.u23
        assert v('a', 'b') == 2

    def test_read_numeric(self):
        v = RankVector.read(os.path.join(DATA, 'half.rank'))

        assert not v.is_exact
        assert v('x') == pytest.approx(0.5)

    def test_text_round_trip(self):
        v = RankVector.exact(['p', 'q'], [0, Fraction(1, 3), Fraction(2, 3), 1])

        text = v.to_text()

        assert text.splitlines()[3] == "{q}: 2/3"
        assert RankVector.read(text) == v

    def test_wrong_length(self):
        with pytest.raises(GroundSetError):
            RankVector.exact(['a'], [0, 1, 2])

    def test_equality_ignores_label_order(self):
        w = self.u23.reordered(['c', 'a', 'b'])

        assert w.labels == ('c', 'a', 'b')
        assert w == self.u23

    def test_numeric_tolerance(self):
        v = self.u23.to_numeric()
        w = RankVector.numeric(v.labels, v.as_array() + 1e-12)

        assert v == w
        assert v != RankVector.numeric(v.labels, v.as_array() + 1e-3)

    def test_arithmetic(self):
        twice = self.u23 + self.u23

        assert twice == self.u23.scaled(2)
        assert (twice - self.u23) == self.u23

    def test_with_value(self):
        v = self.u23.with_value([], 1)

        assert v[()] == 1
        assert self.u23[()] == 0

    def test_to_exact(self):
        v = RankVector.numeric(['a'], [0.0, 1 / 3])

        w = v.to_exact(100)

        assert w('a') == Fraction(1, 3)
        assert w.meta['rationalized'] == 100


class TestAxioms:

    def test_uniform_matroid(self):
        report = is_polymatroid(uniform_matroid(2, 'abc'))

        assert report.is_polymatroid
        assert report.first_violation is None
        assert is_matroid(uniform_matroid(2, 'abc'))

    def test_not_normalized(self):
        v = uniform_matroid(2, 'abc').with_value([], 1)

        report = is_polymatroid(v)

        assert report.is_normalized is False
        assert report.is_polymatroid is False

    def test_not_monotone(self):
        v = RankVector.read(os.path.join(DATA, 'bad.rank'))

        report = is_polymatroid(v)

        assert report.is_monotone is False
        assert report.is_submodular is True
        violation = report.first_violation
        assert violation.axiom == 'monotone'
        assert (violation.A, violation.B) == (('a',), ('a', 'b'))

    def test_not_submodular(self):
        v = RankVector.exact(['a', 'b'], [0, 1, 1, 3])

        report = is_polymatroid(v)

        assert report.is_submodular is False
        assert "submodular" in report.lines()[-1]

    def test_half_singletons_not_matroid(self):
        v = RankVector.exact(['a', 'b'], [0, Fraction(1, 2), Fraction(1, 2), 1])

        assert is_polymatroid(v).is_polymatroid
        assert not is_matroid(v)

    def test_numeric_not_integral(self):
        v = RankVector.numeric(['a'], [0.0, 0.5])

        with pytest.raises(ModeError):
            is_matroid(v)

    def test_local_check_agrees(self):
        # 13 elements is past the exhaustive pair limit
        w = uniform_matroid(3, ['z{}'.format(i) for i in range(13)])
        assert is_polymatroid(w).is_polymatroid

        bad = w.with_value(['z0', 'z1'], 3)
        report = is_polymatroid(bad)
        assert report.is_monotone is True
        assert report.is_submodular is False
        assert report.first_violation.axiom == 'submodular'

    def test_random_polymatroids(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            v = random_polymatroid(rng, 5)

            assert is_polymatroid(v).is_polymatroid
            assert diminishing_returns_violation(v) is None
            assert is_subadditive(v, [['x0', 'x1'], ['x1', 'x2', 'x3'], ['x4']])

    def test_diminishing_returns_detects_supermodular(self):
        v = RankVector.exact(['a', 'b'], [0, 1, 1, 3])

        assert diminishing_returns_violation(v) is not None
        assert not is_subadditive(v, [['a'], ['b']])


class TestOperations:

    @pytest.fixture(autouse=True)
    def setUp(self):
        self.u23 = uniform_matroid(2, 'abc')

    def test_closure(self):
        assert closure(self.u23, ['a', 'b']) == frozenset('abc')
        assert closure(self.u23, ['a']) == frozenset('a')
        assert closure(self.u23, list('abc')) == frozenset('abc')

    def test_closure_properties(self):
        v = vamos_matroid()
        rng = np.random.default_rng(3)
        for _ in range(20):
            A = [label for label in v.labels if rng.random() < 0.4]
            cl = closure(v, A)

            assert set(A) <= cl
            assert v[cl] == v[A]
            assert closure(v, cl) == cl

    def test_contraction(self):
        w = contraction(self.u23, ['a'])

        assert w == RankVector.from_function('abc', lambda S: min(len(set(S) - {'a'}), 1))
        assert is_polymatroid(w).is_polymatroid
        assert contraction(self.u23, []) == self.u23

    def test_conditional(self):
        assert conditional(self.u23, ['b'], ['a']) == 1
        assert conditional(self.u23, ['b', 'c'], ['a']) == 1

    def test_restriction(self):
        w = restriction(vamos_matroid(), ['d2', 'a1', 'c1'])

        assert w.labels == ('a1', 'c1', 'd2')
        assert w('a1', 'c1', 'd2') == 3
        assert restriction(self.u23, list('abc')) == self.u23

        empty = restriction(self.u23, [])
        assert empty.n == 0
        assert empty.values() == [0]

    def test_embedding(self):
        assert is_embedding(self.u23, self.u23, {'a': 'a', 'b': 'b', 'c': 'c'})
        assert is_embedding(self.u23, self.u23, {'a': 'b', 'b': 'c', 'c': 'a'})
        assert is_embedding(uniform_matroid(2, 'ab'), self.u23, {'a': 'c', 'b': 'a'})
        assert not is_embedding(uniform_matroid(1, 'ab'), self.u23, {'a': 'c', 'b': 'a'})

    def test_embedding_not_injective(self):
        with pytest.raises(GroundSetError):
            is_embedding(uniform_matroid(2, 'ab'), self.u23, {'a': 'c', 'b': 'c'})

    def test_grouped_vamos(self):
        w = grouped(vamos_matroid(), {x: [x + '1', x + '2'] for x in 'abcd'})

        assert w('a') == 2
        assert w('a', 'b') == 4
        assert w('c', 'd') == 3
        assert w('a', 'c', 'd') == 4

    def test_vamos_is_matroid(self):
        v = vamos_matroid()

        assert is_matroid(v)
        assert v(*v.labels) == 4

    def test_from_circuits(self):
        v = RankVector.from_circuits('abc', [('a', 'b', 'c')])

        assert v == self.u23

    def test_flats(self):
        found = flats(self.u23)

        assert frozenset() in found
        assert frozenset('abc') in found
        assert len(found) == 5

    def test_modular_cut_free_extension(self):
        # the cut generated by E alone places the new point in general position
        w = modular_cut_extension(self.u23, [list('abc')], 'd')

        assert w == uniform_matroid(2, 'abcd')

    def test_modular_cut_parallel_point(self):
        w = modular_cut_extension(self.u23, [['a']], 'a2')

        assert w('a', 'a2') == 1
        assert w('b', 'a2') == 2
        assert is_matroid(w)

    def test_modular_cut_label_clash(self):
        with pytest.raises(GroundSetError):
            modular_cut_extension(self.u23, [['a']], 'b')


def test_read_bad_file_rejected():
    with pytest.raises(InputFormatError):
        RankVector.read(os.path.join(DATA, 'truncated.rank'))
