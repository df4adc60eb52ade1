import itertools

import numpy as np

from .config import conf
from .utils import GroupAxiomViolation, GroundSetError, load_preset, read_group_table

__all__ = ['GroupTable']


class GroupTable:
    """A finite group given by its multiplication table over element labels.
    The group axioms are verified on construction."""

    def __init__(self, elements, table, name=None):
        self.elements = tuple(str(x) for x in elements)
        self.name = name if name is not None else "G{}".format(len(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise GroupAxiomViolation("Duplicate element labels")
        self._index = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        if n == 0:
            raise GroupAxiomViolation("A group has at least one element")
        if len(table) != n or any(len(row) != n for row in table):
            raise GroupAxiomViolation("Multiplication table must be {0}x{0}".format(n))
        try:
            self._mul = np.array([[self._index[str(x)] for x in row] for row in table], dtype=np.int64)
        except KeyError as e:
            raise GroupAxiomViolation("Table entry {} is not an element".format(e))
        self._identity = self._find_identity()
        self._inv = self._find_inverses()
        self._check_associative()

    def _find_identity(self):
        n = len(self.elements)
        everything = np.arange(n)
        for e in range(n):
            if np.array_equal(self._mul[e], everything) and np.array_equal(self._mul[:, e], everything):
                return e
        raise GroupAxiomViolation("No identity element")

    def _find_inverses(self):
        inv = []
        for a in range(len(self.elements)):
            candidates = np.flatnonzero((self._mul[a] == self._identity) & (self._mul[:, a] == self._identity))
            if len(candidates) == 0:
                raise GroupAxiomViolation("{} has no inverse".format(self.elements[a]))
            inv.append(int(candidates[0]))
        return inv

    def _check_associative(self):
        m = self._mul
        left = m[m, :]                 # left[a, b, c] = (ab)c
        right = m[:, m]                # right[a, b, c] = a(bc)
        bad = np.argwhere(left != right)
        if len(bad):
            a, b, c = (self.elements[i] for i in bad[0])
            raise GroupAxiomViolation("Not associative: ({0}{1}){2} != {0}({1}{2})".format(a, b, c))

    @classmethod
    def from_preset(cls, name):
        presets = load_preset(conf.groups_file)
        if name not in presets:
            raise GroundSetError("Unknown group preset {!r}; known: {}".format(name, ", ".join(presets)))
        entry = presets[name]
        return cls(entry['elements'], entry['mul'], name=name)

    @classmethod
    def read(cls, source):
        elements, rows = read_group_table(source)
        return cls(elements, rows)

    @classmethod
    def cyclic(cls, n, generator='r'):
        labels = ['e'] + ["{}{}".format(generator, k) for k in range(1, n)]
        table = [[labels[(a + b) % n] for b in range(n)] for a in range(n)]
        return cls(labels, table, name="Z{}".format(n))

    def to_text(self):
        lines = ["order: {}".format(self.order), "elems: " + " ".join(self.elements), "mul:"]
        for row in self._mul:
            lines.append(" ".join(self.elements[i] for i in row))
        return "\n".join(lines) + "\n"

    @property
    def order(self):
        return len(self.elements)

    @property
    def identity(self):
        return self.elements[self._identity]

    @property
    def mul_table(self):
        """Products as element indices"""
        return self._mul

    @property
    def inv_table(self):
        return list(self._inv)

    @property
    def identity_index(self):
        return self._identity

    def index(self, x):
        try:
            return self._index[x]
        except KeyError:
            raise GroundSetError("{!r} is not an element of {}".format(x, self.name))

    def mul(self, a, b):
        return self.elements[self._mul[self.index(a), self.index(b)]]

    def inv(self, a):
        return self.elements[self._inv[self.index(a)]]

    def product(self, *factors):
        result = self._identity
        for x in factors:
            result = self._mul[result, self.index(x)]
        return self.elements[result]

    def inverse_map(self):
        return {x: self.inv(x) for x in self.elements}

    def subgroup_violation(self, subset):
        """First pair (a, b) of <subset> with a*b outside it, or None"""
        members = {self.index(x) for x in subset}
        for a in sorted(members):
            for b in sorted(members):
                if int(self._mul[a, b]) not in members:
                    return self.elements[a], self.elements[b]
        return None

    def find_isomorphism(self, other):
        """A label map self -> other preserving products, or None.
        Brute force over bijections fixing the identity."""
        if self.order != other.order:
            return None
        if self.order > conf.isomorphism_order_limit:
            raise GroupAxiomViolation("Isomorphism search limited to order {}".format(conf.isomorphism_order_limit))
        rest = [i for i in range(self.order) if i != self._identity]
        other_rest = [i for i in range(other.order) if i != other._identity]
        for perm in itertools.permutations(other_rest):
            phi = np.zeros(self.order, dtype=np.int64)
            phi[self._identity] = other._identity
            phi[rest] = perm
            if np.array_equal(phi[self._mul], other._mul[phi[:, None], phi[None, :]]):
                return {self.elements[i]: other.elements[phi[i]] for i in range(self.order)}
        return None

    def is_isomorphic(self, other):
        return self.find_isomorphism(other) is not None

    def __eq__(self, other):
        return isinstance(other, GroupTable) and self.elements == other.elements \
            and np.array_equal(self._mul, other._mul)

    __hash__ = None

    def __repr__(self):
        return "<GroupTable {} order={}>".format(self.name, self.order)
