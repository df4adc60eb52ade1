from fractions import Fraction
from math import gcd, log2

import numpy as np
from astropy import units as u
from astropy import log

from .setfn import GroundSet, RankVector, restriction
from .utils import ProbabilityError, SubgroupError, bits

__all__ = ['FinProbSpace', 'RandomVariableFamily', 'EntropyVector',
           'entropy_vector', 'restrict_entropic', 'conditional_entropy',
           'group_characterizable', 'random_space']


class FinProbSpace:
    """Finite probability space with exact rational atom probabilities"""

    def __init__(self, probs, outcomes=None):
        self.probs = [Fraction(p) for p in probs]
        if any(p < 0 for p in self.probs):
            raise ProbabilityError("Negative probability")
        total = sum(self.probs, Fraction(0))
        if total != 1:
            raise ProbabilityError("Probabilities sum to {}, not 1".format(total))
        self.outcomes = list(outcomes) if outcomes is not None else list(range(len(self.probs)))
        if len(self.outcomes) != len(self.probs):
            raise ProbabilityError("{} outcomes for {} probabilities".format(len(self.outcomes), len(self.probs)))

    @classmethod
    def uniform(cls, n_atoms):
        return cls([Fraction(1, n_atoms)] * n_atoms)

    def __len__(self):
        return len(self.probs)

    def __repr__(self):
        return "<FinProbSpace atoms={}>".format(len(self.probs))

    def weights(self):
        """Integer weights and their common denominator"""
        den = 1
        for p in self.probs:
            den = den * p.denominator // gcd(den, p.denominator)
        return np.array([p.numerator * (den // p.denominator) for p in self.probs], dtype=np.int64), den


class RandomVariableFamily:
    """Random variables on the atoms of a space: <assignment> maps each
    variable name to its value on every atom."""

    def __init__(self, ground, assignment):
        self.ground = ground if isinstance(ground, GroundSet) else GroundSet(ground)
        missing = [label for label in self.ground if label not in assignment]
        if missing:
            raise ProbabilityError("No assignment for variables {}".format(", ".join(missing)))
        self.assignment = {label: list(assignment[label]) for label in self.ground}
        lengths = {len(values) for values in self.assignment.values()}
        if len(lengths) > 1:
            raise ProbabilityError("Variables are defined on different numbers of atoms")
        self.n_atoms = lengths.pop() if lengths else None

    @classmethod
    def from_columns(cls, names, columns):
        return cls(names, dict(zip(names, columns)))

    def restricted(self, labels):
        labels = [label for label in self.ground if label in set(labels)]
        return RandomVariableFamily(labels, {label: self.assignment[label] for label in labels})

    def codes(self):
        """Integer codes per variable, shape (n_vars, n_atoms)"""
        rows = []
        for label in self.ground:
            lookup = {}
            rows.append([lookup.setdefault(value, len(lookup)) for value in self.assignment[label]])
        if not rows:
            return np.zeros((0, self.n_atoms or 0), dtype=np.int64)
        return np.array(rows, dtype=np.int64)

    def __repr__(self):
        return "<RandomVariableFamily ({})>".format(", ".join(self.ground.labels))


class EntropyVector(RankVector):
    """Numeric rank vector of joint entropies in bits. Keeps the space and
    family it was computed from, when known."""

    def __init__(self, ground, data, tolerance=None, meta=None, space=None, family=None):
        super().__init__(ground, data, tolerance=tolerance, meta=meta)
        self.space = space
        self.family = family

    def quantity(self, subset):
        return self[subset] * u.bit

    def __repr__(self):
        return "<EntropyVector n={} groundset=({})>".format(self.n, ", ".join(self.labels))


def _entropy_bits(weights, den, code):
    totals = np.zeros(int(code.max()) + 1 if len(code) else 1, dtype=np.int64)
    np.add.at(totals, code, weights)
    totals = totals[totals > 0].astype(np.float64)
    return float(np.sum(totals / den * (log2(den) - np.log2(totals))))


def _recode(code, column, radix):
    _, inverse = np.unique(code * radix + column, return_inverse=True)
    return inverse.astype(np.int64).ravel()


def entropy_vector(space, family):
    """h(S) = H(X_S) in bits; zero-probability values contribute nothing"""
    if family.n_atoms is not None and family.n_atoms != len(space):
        raise ProbabilityError("Family is defined on {} atoms, space has {}".format(family.n_atoms, len(space)))
    weights, den = space.weights()
    codes = family.codes()
    radix = [int(row.max()) + 1 if row.size else 1 for row in codes]
    n = len(family.ground)
    joint = [np.zeros(len(space), dtype=np.int64)]
    values = np.zeros(1 << n, dtype=np.float64)
    for mask in range(1, 1 << n):
        top = mask.bit_length() - 1
        code = _recode(joint[mask ^ (1 << top)], codes[top], radix[top])
        joint.append(code)
        values[mask] = _entropy_bits(weights, den, code)
    log.debug("Computed {} joint entropies over {} atoms".format(len(values), len(space)))
    return EntropyVector(family.ground, values, meta={'source': 'entropy'}, space=space, family=family)


def restrict_entropic(v, T):
    """Restriction of an entropic vector; recomputed from the same space when
    the vector remembers it"""
    labels = v.ground.subset(v.mask(T))
    if getattr(v, 'family', None) is not None:
        return entropy_vector(v.space, v.family.restricted(labels))
    w = restriction(v, labels)
    return EntropyVector(w.ground, w.as_array(), tolerance=v.tolerance, meta=v.meta)


def conditional_entropy(space, family, S, A):
    """H(X_S | X_A) = sum over a of P(X_A = a) H(X_S | X_A = a), summed directly"""
    s_labels = family.ground.subset(family.ground.mask(S))
    a_labels = family.ground.subset(family.ground.mask(A))
    groups = {}
    for atom, p in enumerate(space.probs):
        a_key = tuple(family.assignment[label][atom] for label in a_labels)
        s_key = tuple(family.assignment[label][atom] for label in s_labels)
        cond = groups.setdefault(a_key, {})
        cond[s_key] = cond.get(s_key, Fraction(0)) + p
    total = 0.0
    for cond in groups.values():
        p_a = sum(cond.values(), Fraction(0))
        if p_a == 0:
            continue
        h = 0.0
        for p in cond.values():
            if p > 0:
                q = p / p_a
                h -= float(q) * log2(float(q))
        total += float(p_a) * h
    return total


def group_characterizable(g, subgroups, labels=None):
    """Entropy vector of a uniform element of <g> observed through the left
    cosets of each subgroup: h(S) = log2(|G| / |intersection of G_i, i in S|)"""
    labels = list(labels) if labels is not None else [str(i + 1) for i in range(len(subgroups))]
    masks = []
    for subgroup in subgroups:
        if len(subgroup) == 0:
            raise SubgroupError("The empty set is not a subgroup")
        pair = g.subgroup_violation(subgroup)
        if pair is not None:
            raise SubgroupError("{} is not a subgroup: {} * {} = {} falls outside".format(
                sorted(subgroup), pair[0], pair[1], g.mul(*pair)), pair=pair)
        mask = 0
        for element in subgroup:
            mask |= 1 << g.index(element)
        masks.append(mask)
    everything = (1 << g.order) - 1
    values = np.zeros(1 << len(masks), dtype=np.float64)
    for mask in range(1, 1 << len(masks)):
        common = everything
        for i in bits(mask):
            common &= masks[i]
        values[mask] = log2(g.order / bin(common).count('1'))
    return EntropyVector(labels, values, meta={'source': 'group'})


def random_space(rng, n_vars, n_atoms, n_values=3):
    """Seeded random space and family (for property checks)"""
    weights = rng.integers(0, 6, size=n_atoms)
    if weights.sum() == 0:
        weights[0] = 1
    total = int(weights.sum())
    space = FinProbSpace([Fraction(int(w), total) for w in weights])
    columns = rng.integers(0, n_values, size=(n_vars, n_atoms))
    names = ["X{}".format(i + 1) for i in range(n_vars)]
    family = RandomVariableFamily.from_columns(names, [list(col) for col in columns.tolist()])
    return space, family
