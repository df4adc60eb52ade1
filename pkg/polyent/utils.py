import os
import sys
from fractions import Fraction

try:
    if sys.version_info >= (3, 9):
        # This exists in 3.8 but a different API
        import importlib.resources as pkg_resources
    else:
        raise ImportError
except ImportError:
    # Try backported to PY<37 `importlib_resources`.
    import importlib_resources as pkg_resources

import numpy as np
import toml
from astropy.utils.exceptions import AstropyUserWarning

from . import data
from .config import conf


class PolyentError(Exception):
    pass


class GroundSetError(PolyentError):
    pass


class ModeError(PolyentError):
    pass


class InputFormatError(PolyentError):
    pass


class ProbabilityError(PolyentError):
    pass


class SubgroupError(PolyentError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class GroupAxiomViolation(PolyentError):
    pass


class PresentationError(PolyentError):
    pass


class PdgError(PolyentError):
    pass


class NotProductClosed(PdgError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class WellDefinednessViolation(PdgError):
    pass


class HypothesisError(PolyentError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConclusionViolated(PolyentError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class AxiomViolated(PolyentError):
    pass


class PremiseError(PolyentError):
    pass


class CopySystemError(PolyentError):
    pass


class LinearRealizationError(PolyentError):
    pass


class PolyentWarning(AstropyUserWarning):
    pass


# Bitmask helpers. Bit i of a mask stands for the i-th label of a ground set.

def popcount(mask):
    return bin(mask).count('1')


def bits(mask):
    """Positions of the set bits of <mask>, ascending"""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcounts(n):
    """Array of popcounts for every mask below 2**<n>"""
    pc = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        pc = np.concatenate([pc, pc + 1])
    return pc


def subset_index(positions):
    """Masks of all subsets of the bits in <positions>, enumerated so that the
    k-th entry is the subset selected by the bits of k (positions[0] is the
    lowest). Used to restrict or transport dense vectors."""
    idx = np.zeros(1, dtype=np.int64)
    for p in positions:
        idx = np.concatenate([idx, idx | (1 << p)])
    return idx


# Rational formatting

def parse_value(text):
    """Parses a value token. Returns (value, exact) where exact values are
    Fractions and numeric ones floats."""
    text = text.strip()
    try:
        if any(c in text for c in '.eE') or text.lower() in ('nan', 'inf', '-inf'):
            return float(text), False
        return Fraction(text), True
    except (ValueError, ZeroDivisionError):
        raise InputFormatError("Invalid value: {!r}".format(text))


def format_value(value):
    if isinstance(value, (Fraction, int, np.integer)):
        value = Fraction(int(value)) if isinstance(value, np.integer) else Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return "{}/{}".format(value.numerator, value.denominator)
    text = "{:.10g}".format(float(value))
    if not any(c in text for c in '.eninf'):
        # keep numeric values recognisable as numeric when read back
        text += '.0'
    return text


def format_subset(labels):
    return "{" + ",".join(labels) + "}"


# Text readers. Each accepts a filename or the file contents.

def _read_lines(source):
    if isinstance(source, (str, os.PathLike)) and os.path.isfile(source):
        with open(source, 'r') as fh:
            text = fh.read()
    else:
        text = str(source)
    lines = []
    for line in text.splitlines():
        line = line.split('#', 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def _split_key(line):
    if ':' not in line:
        raise InputFormatError("Expected 'key: value', got {!r}".format(line))
    key, value = line.split(':', 1)
    return key.strip(), value.strip()


def _parse_rank_lines(lines):
    if len(lines) == 0:
        raise InputFormatError("Empty rank vector")
    key, value = _split_key(lines[0])
    if key != 'groundset':
        raise InputFormatError("First line must be 'groundset: ...', got {!r}".format(lines[0]))
    labels = value.split()
    index = {label: i for i, label in enumerate(labels)}
    if len(index) != len(labels):
        raise InputFormatError("Duplicate labels in ground set")
    if len(labels) > conf.max_ground_size:
        raise InputFormatError("Ground set too large for a dense rank vector")
    size = 1 << len(labels)
    values = [None] * size
    exact = True
    for line in lines[1:]:
        if not line.startswith('{') or '}' not in line:
            raise InputFormatError("Malformed subset line {!r}".format(line))
        subset_text, rest = line[1:].split('}', 1)
        rest = rest.strip()
        if not rest.startswith(':'):
            raise InputFormatError("Malformed subset line {!r}".format(line))
        mask = 0
        for label in [l.strip() for l in subset_text.split(',') if l.strip()]:
            if label not in index:
                raise InputFormatError("Unknown label {!r}".format(label))
            mask |= 1 << index[label]
        if values[mask] is not None:
            raise InputFormatError("Subset {{{}}} given twice".format(subset_text))
        values[mask], is_exact = parse_value(rest[1:])
        exact = exact and is_exact
    missing = [m for m, v in enumerate(values) if v is None]
    if missing:
        raise InputFormatError("{} subsets are missing (first: mask {})".format(len(missing), missing[0]))
    return labels, values, exact


def read_rank_vector(source):
    """Reads the rank vector text format from <source>.
    Returns (labels, values, exact); values are indexed by bitmask."""
    return _parse_rank_lines(_read_lines(source))


def read_pdg_dump(source):
    """Reads a PDG dump: a small header (pdg, gens, inv, identity) followed
    by a rank vector. Returns (header, labels, values, exact)."""
    lines = _read_lines(source)
    header = {}
    while lines and not lines[0].startswith('groundset'):
        key, value = _split_key(lines.pop(0))
        header[key] = value
    if 'pdg' not in header or 'gens' not in header:
        raise InputFormatError("PDG dump needs 'pdg: rank <r>' and 'gens:' header lines")
    labels, values, exact = _parse_rank_lines(lines)
    return header, labels, values, exact


def read_prob_space(source):
    """Reads a probability space file.
    Returns (probs, variables) with probs as Fractions and variables a list of
    (name, values-per-atom)."""
    lines = _read_lines(source)
    n_atoms = None
    probs = None
    variables = []
    for line in lines:
        key, value = _split_key(line)
        if key == 'atoms':
            try:
                n_atoms = int(value)
            except ValueError:
                raise InputFormatError("Invalid atom count {!r}".format(value))
        elif key == 'p':
            probs = [parse_value(tok)[0] for tok in value.split()]
            if not all(isinstance(p, Fraction) for p in probs):
                raise InputFormatError("Probabilities must be exact rationals")
        elif key.startswith('var '):
            variables.append((key[4:].strip(), value.split()))
        else:
            raise InputFormatError("Unknown key {!r}".format(key))
    if n_atoms is None or probs is None:
        raise InputFormatError("Probability space needs 'atoms:' and 'p:' lines")
    if len(probs) != n_atoms or any(len(vals) != n_atoms for _, vals in variables):
        raise InputFormatError("Every row must have {} entries".format(n_atoms))
    return probs, variables


def read_presentation(source):
    """Reads a presentation file. Returns (gens, inverse, relations)."""
    lines = _read_lines(source)
    gens = None
    inverse = {}
    relations = []
    for line in lines:
        key, value = _split_key(line)
        if key == 'gens':
            gens = value.split()
        elif key == 'inv':
            for pair in value.split():
                if '=' not in pair:
                    raise InputFormatError("Inverse pairs are written s=t, got {!r}".format(pair))
                s, t = pair.split('=', 1)
                inverse[s] = t
                inverse[t] = s
        elif key == 'rel':
            triple = tuple(value.split())
            if len(triple) != 3:
                raise InputFormatError("Relations must have length 3: {!r}".format(value))
            relations.append(triple)
        else:
            raise InputFormatError("Unknown key {!r}".format(key))
    if gens is None:
        raise InputFormatError("Presentation needs a 'gens:' line")
    return gens, inverse, relations


def read_group_table(source):
    """Reads a multiplication table file. Returns (elements, rows)."""
    lines = _read_lines(source)
    header = {}
    while lines and not lines[0].startswith('mul'):
        key, value = _split_key(lines.pop(0))
        header[key] = value
    if not lines or 'elems' not in header:
        raise InputFormatError("Group table needs 'elems:' and 'mul:' sections")
    elements = header['elems'].split()
    if 'order' in header and int(header['order']) != len(elements):
        raise InputFormatError("Order {} does not match {} elements".format(header['order'], len(elements)))
    rows = [line.split() for line in lines[1:]]
    if len(rows) != len(elements) or any(len(row) != len(elements) for row in rows):
        raise InputFormatError("Multiplication table must be {0}x{0}".format(len(elements)))
    return elements, rows


def read_realization(source):
    """Reads a linear realization file. Returns (p, dim, maps) where maps is a
    list of (element, rows)."""
    lines = _read_lines(source)
    header = {}
    maps = []
    current = None
    for line in lines:
        if line.startswith('map '):
            label = line[4:].rstrip(':').strip()
            current = (label, [])
            maps.append(current)
        elif current is None:
            key, value = _split_key(line)
            header[key] = value
        else:
            try:
                current[1].append([int(tok) for tok in line.split()])
            except ValueError:
                raise InputFormatError("Invalid matrix row {!r}".format(line))
    try:
        p = int(header['p'])
        dim = int(header['dim'])
    except (KeyError, ValueError):
        raise InputFormatError("Realization needs integer 'p:' and 'dim:' lines")
    return p, dim, maps


def load_preset(filename):
    """Loads a TOML resource from polyent.data"""
    return toml.loads(pkg_resources.files(data).joinpath(filename).read_text())


class Check:
    """One checked equation of a report"""

    def __init__(self, name, expected, got, ok=None):
        self.name = name
        self.expected = expected
        self.got = got
        self.ok = bool(expected == got) if ok is None else bool(ok)

    def line(self):
        if self.ok:
            return "OK   {}".format(self.name)
        return "FAIL {} expected={} got={}".format(self.name, _format_any(self.expected), _format_any(self.got))

    def __repr__(self):
        return "<Check {} {}>".format(self.name, 'ok' if self.ok else 'FAIL')


def _format_any(value):
    if isinstance(value, (Fraction, int, float, np.integer, np.floating)) and not isinstance(value, bool):
        return format_value(value)
    return str(value)


class Report:
    """Ordered list of checks with an overall verdict"""

    def __init__(self, title=None):
        self.title = title
        self.checks = []

    def add(self, name, expected, got, ok=None):
        check = Check(name, expected, got, ok)
        self.checks.append(check)
        return check.ok

    def extend(self, other):
        self.checks.extend(other.checks)

    @property
    def ok(self):
        return all(check.ok for check in self.checks)

    @property
    def failures(self):
        return [check for check in self.checks if not check.ok]

    def find(self, prefix):
        return [check for check in self.checks if check.name.startswith(prefix)]

    def lines(self):
        return [check.line() for check in self.checks]

    def __len__(self):
        return len(self.checks)

    def __repr__(self):
        return "<{} {}: {} checks, {} failed>".format(type(self).__name__, self.title or '', len(self.checks),
                                                      len(self.failures))
