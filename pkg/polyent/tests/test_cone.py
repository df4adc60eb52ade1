import pytest
import os
from fractions import Fraction

import numpy as np

from polyent.cone import EntropyInequality, load_inequalities, elemental_shannon_inequalities, in_shannon_cone, \
    LinearInequalitySystem, FeasibilityCertificate, lp_feasible, build_copy_system, default_copy_schedule, \
    Refuted, Unknown, copy_lp_refute, vamos_grouped_vector
from polyent.linear import linear_rank_vector, random_realization
from polyent.setfn import RankVector, is_polymatroid, uniform_matroid
from polyent.utils import CopySystemError, PolyentError, PolyentWarning

DATA = os.path.join(os.path.dirname(__file__), 'data')


class TestInequalities:

    def test_elemental_count(self):
        for n in range(1, 6):
            expected = n + n * (n - 1) // 2 * 2 ** (n - 2) if n > 1 else 1
            assert len(elemental_shannon_inequalities(n)) == expected

        assert len(elemental_shannon_inequalities(4)) == 28

    def test_elemental_names(self):
        names = [ineq.name for ineq in elemental_shannon_inequalities(3)]

        assert names[:3] == ['H(1|2,3)', 'H(2|1,3)', 'H(3|1,2)']
        assert 'I(1;2)' in names
        assert 'I(1;2|3)' in names

    def test_elemental_bounds(self):
        with pytest.raises(PolyentError):
            elemental_shannon_inequalities(0)
        with pytest.raises(PolyentError):
            elemental_shannon_inequalities(9)

    def test_information_terms(self):
        ineq = EntropyInequality.from_information_terms('I', 2, [{'coef': 1, 'left': [1], 'right': [2]}])

        assert ineq.coefficients == {0b01: 1, 0b10: 1, 0b11: -1}
        assert str(ineq) == "I: h(1) +h(2) -h(1,2) >= 0"
        assert ineq.evaluate(uniform_matroid(1, 'ab')) == 1

    def test_empty_set_coefficient(self):
        with pytest.raises(PolyentError):
            EntropyInequality('bad', 2, {0: 1})

    def test_zhang_yeung_shipped(self):
        zy = load_inequalities()['zhang_yeung']

        assert zy.n == 4
        assert zy.holds(uniform_matroid(2, 'abcd'))

    def test_zhang_yeung_violated_by_grouped_vamos(self):
        zy = load_inequalities()['zhang_yeung']
        v = vamos_grouped_vector()

        assert zy.evaluate(v) == -1
        assert not zy.holds(v)

    def test_evaluate_with_labels(self):
        zy = load_inequalities()['zhang_yeung']
        v = vamos_grouped_vector().reordered(['d', 'c', 'b', 'a'])

        assert zy.evaluate(v, labels=['a', 'b', 'c', 'd']) == -1


class TestShannonCone:

    def test_matroids_inside(self):
        assert in_shannon_cone(uniform_matroid(2, 'abc')) == (True, None)
        assert in_shannon_cone(vamos_grouped_vector())[0] is True

    def test_file_vector(self):
        v = RankVector.read(os.path.join(DATA, 'vamos4.rank'))

        assert v == vamos_grouped_vector()
        assert in_shannon_cone(v)[0]

    def test_not_normalized(self):
        v = uniform_matroid(2, 'abc').with_value([], 1)

        assert in_shannon_cone(v) == (False, None)

    def test_violated_mutual_information(self):
        v = RankVector.exact(['a', 'b'], [0, 1, 1, 3])

        inside, violated = in_shannon_cone(v)

        assert inside is False
        assert violated.name == 'I(1;2)'
        assert violated.evaluate(v) == -1

    def test_violated_conditional_entropy(self):
        v = RankVector.read(os.path.join(DATA, 'bad.rank'))

        inside, violated = in_shannon_cone(v)

        assert inside is False
        assert violated.name == 'H(2|1)'

    def test_agrees_with_elemental_list(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            values = [0] + [int(x) for x in rng.integers(0, 4, size=7)]
            v = RankVector.exact('abc', values)
            failing = [ineq for ineq in elemental_shannon_inequalities(3) if ineq.evaluate(v) < 0]

            inside, violated = in_shannon_cone(v)

            assert inside == (not failing)
            if violated is not None:
                assert violated.evaluate(v) < 0

    def test_agrees_with_polymatroid_axioms(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            n = int(rng.integers(1, 5))
            values = [0] + [int(x) for x in rng.integers(0, 5, size=(1 << n) - 1)]
            v = RankVector.exact('abcd'[:n], values)

            assert in_shannon_cone(v)[0] == is_polymatroid(v).is_polymatroid

    def test_agrees_on_sums_of_linear_vectors(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            v = linear_rank_vector(random_realization(rng, 3, 3, 4)) + \
                linear_rank_vector(random_realization(rng, 2, 2, 4))
            w = v.with_value(['e1', 'e2'], v('e1', 'e2') + 1)

            assert in_shannon_cone(v)[0] is True
            assert is_polymatroid(v).is_polymatroid
            assert in_shannon_cone(w)[0] == is_polymatroid(w).is_polymatroid


class TestLinearFeasibility:

    def test_feasible(self):
        system = LinearInequalitySystem(['x', 'y'])
        system.add({'x': 1, 'y': 1}, '=', 3, name='sum')
        system.add({'x': 1, 'y': -1}, '>=', 1, name='gap')

        certificate = lp_feasible(system)

        assert certificate.feasible
        assert certificate.verify()
        assert certificate.to_text().startswith("FEASIBLE\n")
        x, y = certificate.point
        assert x + y == 3
        assert x - y >= 1

    def test_infeasible_has_farkas_multipliers(self):
        system = LinearInequalitySystem(['x', 'y'])
        system.add({'x': 1, 'y': 1}, '>=', 4, name='big')
        system.add({'x': -1}, '>=', -1, name='x small')
        system.add({'y': -1}, '>=', -1, name='y small')

        certificate = lp_feasible(system)

        assert not certificate.feasible
        assert system.farkas_holds(certificate.multipliers)
        assert all(lam >= 0 for lam in certificate.multipliers)
        assert certificate.to_text().splitlines()[0] == "INFEASIBLE"

    def test_presolve_contradiction(self):
        system = LinearInequalitySystem(['x'])
        system.add({'x': 1}, '=', 2)
        system.add({'x': 1}, '=', 3)

        certificate = lp_feasible(system)

        assert not certificate.feasible
        assert certificate.verify()

    def test_free_variable(self):
        system = LinearInequalitySystem(['x'], nonnegative=False)
        system.add({'x': 1}, '=', -2)

        certificate = lp_feasible(system)

        assert certificate.point == [Fraction(-2)]

    def test_negative_fixed_value(self):
        system = LinearInequalitySystem(['x'])
        system.add({'x': 2}, '=', -2)

        assert not lp_feasible(system).feasible

    def test_certificate_needs_one_kind(self):
        system = LinearInequalitySystem(['x'])

        with pytest.raises(PolyentError):
            FeasibilityCertificate(system)

    def test_undeclared_variable(self):
        with pytest.raises(PolyentError):
            LinearInequalitySystem(['x']).add({'z': 1})


class TestCopyLemma:

    @pytest.fixture(autouse=True)
    def setUp(self):
        self.vamos = vamos_grouped_vector()

    def test_copy_system_shape(self):
        system = build_copy_system(uniform_matroid(2, 'abc'), ['a'], ['b'])

        assert len(system.variables) == 16
        assert system.variables[-1] == "{a,b,c,b'}"
        assert system.rows[0].name == "fix {}"
        assert any(row.name == "copy {a,b'}" for row in system.rows)

    def test_copy_system_overlap(self):
        with pytest.raises(CopySystemError):
            build_copy_system(uniform_matroid(2, 'abc'), ['a'], ['a', 'b'])

    def test_copy_system_needs_exact(self):
        with pytest.raises(CopySystemError):
            build_copy_system(uniform_matroid(2, 'abc').to_numeric(), ['a'], ['b'])

    def test_default_schedule(self):
        schedule = default_copy_schedule(['a', 'b', 'c'], size=2)

        assert schedule[0] == ((), ('a',))
        assert ((), ('a', 'b')) in schedule
        assert (('a',), ('b',)) in schedule
        assert all(len(B) + len(C) <= 2 for B, C in schedule)

    def test_vamos_refuted(self):
        result = copy_lp_refute(self.vamos, [(('a', 'b'), ('c', 'd'))])

        assert isinstance(result, Refuted)
        assert result.refuted
        assert result.pair == (('a', 'b'), ('c', 'd'))
        assert not result.certificate.feasible
        assert result.certificate.verify()
        assert result.lines()[:2] == ["REFUTED", "B={a,b} C={c,d}"]

    def test_refutation_is_scale_invariant(self):
        result = copy_lp_refute(self.vamos.scaled(Fraction(5, 3)), [(('a', 'b'), ('c', 'd'))])

        assert result.refuted

    def test_matroid_unknown(self):
        result = copy_lp_refute(uniform_matroid(2, 'abc'))

        assert isinstance(result, Unknown)
        assert not result
        assert result.lines()[0] == "UNKNOWN"
        assert len(result.tried) == len(default_copy_schedule(['a', 'b', 'c']))

    @pytest.mark.slow
    def test_linear_vectors_unknown(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            v = linear_rank_vector(random_realization(rng, 2, 3, 3))

            assert not copy_lp_refute(v, [(('e1',), ('e2',)), ((), ('e3',))])

    def test_outside_shannon_cone(self):
        v = RankVector.exact(['a', 'b'], [0, 1, 1, 3])

        result = copy_lp_refute(v)

        assert result.refuted
        assert result.pair is None
        assert result.lines()[1] == "not in the Shannon cone"

    def test_not_normalized_refuted(self):
        result = copy_lp_refute(uniform_matroid(2, 'abc').with_value([], 1))

        assert result.refuted
        assert result.certificate.verify()

    def test_numeric_is_rounded(self):
        with pytest.warns(PolyentWarning):
            result = copy_lp_refute(self.vamos.to_numeric(), [(('a', 'b'), ('c', 'd'))])

        assert result.refuted
        assert result.rounded
        assert "rounding" in result.lines()[0]
