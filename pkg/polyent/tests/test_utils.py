import pytest
import os
from fractions import Fraction

import numpy as np

from polyent.utils import InputFormatError, Report, bits, popcount, popcounts, subset_index, parse_value, \
    format_value, format_subset, read_rank_vector, read_prob_space, read_presentation, read_group_table, \
    read_realization, read_pdg_dump, load_preset

DATA = os.path.join(os.path.dirname(__file__), 'data')


class TestBitHelpers:

    def test_bits(self):
        assert bits(0) == []
        assert bits(0b1011) == [0, 1, 3]

    def test_popcounts(self):
        pc = popcounts(3)

        assert pc.tolist() == [0, 1, 1, 2, 1, 2, 2, 3]
        assert all(pc[m] == popcount(m) for m in range(8))

    def test_subset_index(self):
        idx = subset_index([1, 3])

        assert idx.tolist() == [0, 2, 8, 10]


class TestValues:

    def test_parse_exact(self):
        assert parse_value('3/4') == (Fraction(3, 4), True)
        assert parse_value(' 2 ') == (Fraction(2), True)

    def test_parse_numeric(self):
        value, exact = parse_value('0.25')

        assert exact is False
        assert value == pytest.approx(0.25)

    def test_parse_bad(self):
        with pytest.raises(InputFormatError):
            parse_value('two')

    def test_format(self):
        assert format_value(Fraction(6, 4)) == '3/2'
        assert format_value(np.int64(3)) == '3'
        assert format_value(2.0) == '2.0'
        assert format_subset(('a', 'b')) == '{a,b}'
        assert format_subset(()) == '{}'


class TestReaders:

    def test_read_rank_vector(self):
        labels, values, exact = read_rank_vector(os.path.join(DATA, 'u23.rank'))

        assert labels == ['a', 'b', 'c']
        assert exact is True
        assert values == [0, 1, 1, 2, 1, 2, 2, 2]

    def test_read_rank_vector_mixed_is_numeric(self):
        labels, values, exact = read_rank_vector(os.path.join(DATA, 'half.rank'))

        assert exact is False
        assert float(values[1]) == pytest.approx(0.5)

    def test_read_rank_vector_from_text(self):
        text = "groundset: x\n{}: 0\n{x}: 1  # comment\n"

        labels, values, exact = read_rank_vector(text)

        assert labels == ['x']
        assert values == [0, 1]

    def test_missing_subsets(self):
        with pytest.raises(InputFormatError) as execinfo:
            read_rank_vector(os.path.join(DATA, 'truncated.rank'))

        assert 'missing' in str(execinfo.value)

    def test_unknown_label(self):
        with pytest.raises(InputFormatError):
            read_rank_vector("groundset: a\n{}: 0\n{b}: 1\n")

    def test_duplicate_subset(self):
        with pytest.raises(InputFormatError):
            read_rank_vector("groundset: a\n{}: 0\n{a}: 1\n{a}: 1\n")

    def test_no_groundset_line(self):
        with pytest.raises(InputFormatError):
            read_rank_vector("{}: 0\n")

    def test_read_prob_space(self):
        probs, variables = read_prob_space(os.path.join(DATA, 'xor.prob'))

        assert probs == [Fraction(1, 4)] * 4
        assert [name for name, _ in variables] == ['X', 'Y', 'Z']
        assert variables[2][1] == ['0', '1', '1', '0']

    def test_read_prob_space_wrong_length(self):
        with pytest.raises(InputFormatError):
            read_prob_space("atoms: 3\np: 1/2 1/2\n")

    def test_read_presentation(self):
        gens, inverse, relations = read_presentation(os.path.join(DATA, 'z3_open.pres'))

        assert gens == ['e', 's', 't']
        assert inverse == {'s': 't', 't': 's'}
        assert relations == [('s', 's', 's')]

    def test_read_presentation_long_relation(self):
        with pytest.raises(InputFormatError):
            read_presentation("gens: e s\nrel: s s s s\n")

    def test_read_group_table(self):
        elements, rows = read_group_table(os.path.join(DATA, 'z3.group'))

        assert elements == ['e', 's', 't']
        assert rows[1] == ['s', 't', 'e']

    def test_read_group_table_order_mismatch(self):
        with pytest.raises(InputFormatError):
            read_group_table("order: 2\nelems: e s t\nmul:\ne s t\ns t e\nt e s\n")

    def test_read_realization(self):
        p, dim, maps = read_realization(os.path.join(DATA, 'u23_gf5.lin'))

        assert (p, dim) == (5, 2)
        assert maps[2] == ('c', [[1, 1]])

    def test_read_pdg_dump_needs_header(self):
        with pytest.raises(InputFormatError):
            read_pdg_dump("groundset: b1\n{}: 0\n{b1}: 1\n")

    def test_load_preset(self):
        presets = load_preset('groups.toml')

        assert 'S3' in presets
        assert len(presets['S3']['elements']) == 6


class TestReport:

    def test_add_and_verdict(self):
        report = Report("demo")

        assert report.add("one", 1, 1) is True
        assert report.add("two", 2, Fraction(3, 2)) is False
        assert report.ok is False
        assert len(report) == 2
        assert report.lines() == ["OK   one", "FAIL two expected=2 got=3/2"]
        assert report.find("tw")[0].name == "two"
