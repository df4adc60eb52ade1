import pytest
import itertools
import os

from polyent.config import conf
from polyent.groups import GroupTable
from polyent.pdg import GeneratorSet, Presentation, PdgLayout, Pdg, build_rank3_pdg, build_dowling_pdg, \
    validate_pdg, relators, check_acyclic_independence, check_pair_independence, check_weak_pair_independence, \
    check_flat_closure
from polyent.setfn import closure, is_matroid, is_polymatroid, restriction
from polyent.utils import InputFormatError, PdgError, PresentationError, load_preset

DATA = os.path.join(os.path.dirname(__file__), 'data')


@pytest.fixture(scope='module')
def z3_pdg4():
    return build_dowling_pdg(GroupTable.from_preset('Z3'), 4)


class TestPresentation:

    def test_generator_set(self):
        gens = GeneratorSet(['e', 's', 't'], {'s': 't', 't': 's'})

        assert gens.inv('s') == 't'
        assert gens.inv('e') == 'e'
        assert gens.inverse_pairs() == [('s', 't')]
        assert 's' in gens

    def test_generator_set_not_involution(self):
        with pytest.raises(PresentationError):
            GeneratorSet(['e', 's', 't', 'u'], {'s': 't', 't': 'u', 'u': 's'})

    def test_generator_label_with_underscore(self):
        with pytest.raises(PresentationError):
            GeneratorSet(['e', 's_1'])

    def test_preset_closure(self):
        p = Presentation.from_preset('Z3')

        # (s, s, s) closes up to every triple with product e in Z3
        assert len(p.relations) == 9
        assert ('t', 't', 't') in p.relations
        assert ('e', 't', 's') in p.relations
        assert ('e', 'e', 'e') in p.relations

    def test_read_requires_symmetry(self):
        with pytest.raises(PresentationError):
            Presentation.read(os.path.join(DATA, 'z3_open.pres'))

        closed = Presentation.read(os.path.join(DATA, 'z3_open.pres'), close=True)
        assert closed.relations == Presentation.from_preset('Z3').relations

    def test_read_full(self):
        p = Presentation.read(os.path.join(DATA, 'z3.pres'))

        assert len(p.relations) == 9
        assert p.relations == Presentation.from_group(GroupTable.from_preset('Z3')).relations
        assert Presentation.read(p.to_text()).relations == p.relations

    def test_unknown_generator_in_relation(self):
        gens = GeneratorSet(['e'])

        with pytest.raises(PresentationError):
            Presentation(gens, [('e', 'e', 'x')])

    def test_bad_inverse_line(self):
        with pytest.raises(InputFormatError):
            Presentation.read("gens: e s\ninv: s=x\nrel: e e e\n")


class TestRank3Construction:

    @pytest.fixture(autouse=True)
    def setUp(self):
        self.p = Presentation.from_preset('Z3')
        self.pdg = build_rank3_pdg(self.p)

    def test_trivial_group(self):
        pdg = build_rank3_pdg(Presentation.from_preset('trivial'))

        assert len(pdg.labels) == 6
        assert pdg.f('b1', 'b2', 'b3') == 3
        assert pdg.f(*pdg.labels) == 3
        assert is_matroid(pdg.rank_vector)

    def test_z3_shape(self):
        assert len(self.pdg.labels) == 12
        assert self.pdg.labels[:4] == ('b1', 'b2', 'b3', 'e_12')

    def test_z3_triangles(self):
        el = self.pdg.element

        assert self.pdg.f(el('s', 1, 2), el('s', 2, 3), el('s', 3, 1)) == 2
        assert self.pdg.f(el('s', 1, 2), el('t', 2, 3), el('s', 3, 1)) == 3
        assert self.pdg.rank_of(('s', 1, 2), ('t', 2, 3), ('e', 3, 1)) == 2

    def test_reversed_index_is_inverse(self):
        assert self.pdg.element('s', 2, 1) == 't_12'
        assert self.pdg.layout.normalize('e', 3, 1) == ('e', 1, 3)

    def test_is_matroid(self):
        assert is_polymatroid(self.pdg.rank_vector).is_polymatroid
        assert is_matroid(self.pdg.rank_vector)

    def test_validate(self):
        report = validate_pdg(self.pdg)

        assert report.ok
        assert [check.name[:3] for check in report.checks] == ['(1)', '(2)', '(3)', '(4)', '(5)', '(6)']

    def test_relators_are_presentation(self):
        assert relators(self.pdg) == frozenset(self.p.relations)
        assert ('e', 'e', 'e') in self.pdg.relators()

    def test_closure_of_coordinate_line(self):
        line = closure(self.pdg.rank_vector, ['b1', 'b2'])

        assert line == frozenset(['b1', 'b2', 'e_12', 's_12', 't_12'])

    def test_matches_dowling(self):
        dowling = build_dowling_pdg(GroupTable.from_preset('Z3'), 3)

        assert dowling.rank_vector == self.pdg.rank_vector

    def test_dump_round_trip(self):
        dump = Pdg.read(self.pdg.to_text())

        assert dump.r == 3
        assert dump.gens == self.pdg.gens
        assert dump.coherent
        assert dump.rank_vector == self.pdg.rank_vector

    def test_condition_5_failure(self):
        broken = Pdg(self.pdg.layout, self.pdg.rank_vector.with_value(['e_12'], 0))

        report = validate_pdg(broken)

        assert not report.ok
        assert not report.condition(5).ok

    def test_incoherent_layout(self):
        present = self.pdg.layout.present - {('s', 1, 2)}
        layout = PdgLayout(3, self.pdg.gens, present)
        sub = Pdg(layout, restriction(self.pdg.rank_vector, layout.ground.labels))

        assert not sub.coherent
        assert validate_pdg(sub, coherent=False).ok
        assert not validate_pdg(sub).ok
        with pytest.raises(PdgError):
            relators(sub)

    def test_dump_incoherent(self):
        present = self.pdg.layout.present - {('t', 2, 3)}
        layout = PdgLayout(3, self.pdg.gens, present)
        sub = Pdg(layout, restriction(self.pdg.rank_vector, layout.ground.labels))

        dump = Pdg.read(sub.to_text())

        assert not dump.coherent
        assert 't_23' not in dump.labels

    def test_layout_rank(self):
        with pytest.raises(PdgError):
            PdgLayout(5, self.pdg.gens)

    def test_missing_element(self):
        layout = PdgLayout(3, self.pdg.gens, self.pdg.layout.present - {('s', 1, 2)})

        with pytest.raises(PdgError):
            layout.element('s', 1, 2)


class TestDowling:

    def test_z2_rank3(self):
        pdg = build_dowling_pdg(GroupTable.from_preset('Z2'), 3)

        assert len(pdg.labels) == 9
        assert pdg.f(*pdg.labels) == 3
        assert is_matroid(pdg.rank_vector)
        assert pdg.rank_vector.meta['source'] == 'dowling'

    def test_z2_rank4(self):
        pdg = build_dowling_pdg(GroupTable.from_preset('Z2'), 4)

        assert len(pdg.labels) == 16
        assert pdg.f('b1', 'b2', 'b3', 'b4') == 4
        assert is_matroid(pdg.rank_vector)
        assert validate_pdg(pdg).ok
        assert check_flat_closure(pdg).ok

    def test_z3_rank4(self, z3_pdg4):
        el = z3_pdg4.element

        assert len(z3_pdg4.labels) == 22
        assert validate_pdg(z3_pdg4).ok
        for s, t in (('e', 'e'), ('s', 't'), ('t', 's')):
            assert z3_pdg4.f(el(s, 1, 3), el(t, 3, 4), el('e', 4, 1)) == 2

    def test_z3_relators(self, z3_pdg4):
        found = z3_pdg4.relators()

        assert len(found) == 9
        g = GroupTable.from_preset('Z3')
        assert all(g.product(*triple) == 'e' for triple in found)

    def test_independence_lemmas(self, z3_pdg4):
        assert check_pair_independence(z3_pdg4) == []
        assert check_weak_pair_independence(z3_pdg4) == []
        assert check_acyclic_independence(z3_pdg4, [('s', 1, 2), ('t', 2, 3), ('e', 3, 4)])
        assert check_acyclic_independence(z3_pdg4, [('s', 1, 2), ('s', 2, 3), ('s', 3, 1)])

    def test_acyclic_needs_distinct_pairs(self, z3_pdg4):
        with pytest.raises(PdgError):
            check_acyclic_independence(z3_pdg4, [('s', 1, 2), ('t', 1, 2)])

    def test_restrict_indices(self, z3_pdg4):
        sub = z3_pdg4.restrict_indices([1, 3, 4])

        assert sub.r == 3
        assert sub.rank_vector == build_dowling_pdg(GroupTable.from_preset('Z3'), 3).rank_vector

    def test_custom_generators(self):
        g = GroupTable.from_preset('Z2')
        gens = GeneratorSet(['e', 'u', 'w'])
        pdg = build_dowling_pdg(g, 3, gens=gens, labelling={'e': 'e', 'u': 's', 'w': 's'})

        assert pdg.f(pdg.element('u', 1, 2), pdg.element('w', 1, 2)) == 1
        assert validate_pdg(pdg).ok

    def test_labelling_must_respect_identity(self):
        g = GroupTable.from_preset('Z2')

        with pytest.raises(PdgError):
            build_dowling_pdg(g, 3, labelling={'e': 's', 's': 'e'})

    def test_size_cap(self):
        with pytest.raises(PdgError):
            build_dowling_pdg(GroupTable.from_preset('S3'), 4)


def _all_acyclic_checks(pdg):
    pairs = list(itertools.combinations(range(1, pdg.r + 1), 2))
    for k in range(1, len(pairs) + 1):
        for chosen in itertools.combinations(pairs, k):
            for labels in itertools.product(pdg.gens, repeat=k):
                picks = [(s, i, j) for s, (i, j) in zip(labels, chosen)]
                yield picks, check_acyclic_independence(pdg, picks)


@pytest.mark.parametrize('name', ['trivial', 'Z2', 'Z3'])
def test_presentation_presets_load(name):
    p = Presentation.from_preset(name)

    assert p.gens.identity == 'e'
    assert all(p.gens.inv(p.gens.inv(s)) == s for s in p.gens)


def test_every_presentation_preset_loads():
    for name in load_preset(conf.presentations_file):
        assert Presentation.from_preset(name).relations


def test_one_sided_inverse_is_completed():
    gens = GeneratorSet(['e', 's', 't'], {'s': 't'})

    assert gens.inv('t') == 's'


@pytest.mark.parametrize('name', ['trivial', 'Z2', 'Z3'])
def test_rank3_construction(name):
    p = Presentation.from_preset(name)
    pdg = build_rank3_pdg(p)

    assert validate_pdg(pdg).ok
    assert relators(pdg) == frozenset(p.relations)
    assert check_pair_independence(pdg) == []
    assert check_weak_pair_independence(pdg) == []
    assert all(ok for _, ok in _all_acyclic_checks(pdg))


@pytest.mark.slow
@pytest.mark.parametrize('rank', [3, 4])
@pytest.mark.parametrize('name', ['trivial', 'Z2', 'Z3'])
def test_dowling_independence_lemmas(name, rank):
    pdg = build_dowling_pdg(GroupTable.from_preset(name), rank)

    assert validate_pdg(pdg).ok
    assert check_pair_independence(pdg) == []
    assert check_weak_pair_independence(pdg) == []
    failures = [picks for picks, ok in _all_acyclic_checks(pdg) if not ok]
    assert failures == []
