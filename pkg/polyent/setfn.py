import itertools
from fractions import Fraction
from math import gcd

import numpy as np

from .config import conf
from .utils import GroundSetError, ModeError, bits, popcounts, subset_index, \
    format_subset, format_value, read_rank_vector

__all__ = ['GroundSet', 'RankVector', 'AxiomReport', 'Violation',
           'is_polymatroid', 'is_matroid', 'closure', 'contraction',
           'restriction', 'is_embedding', 'conditional', 'grouped',
           'uniform_matroid', 'vamos_matroid', 'flats', 'modular_cut_extension',
           'diminishing_returns_violation', 'is_subadditive']


class GroundSet:
    """Ordered finite set of element labels. Bit i of a subset mask stands for
    labels[i]; this correspondence never changes for a given GroundSet."""

    def __init__(self, labels):
        labels = tuple(str(label) for label in labels)
        if len(set(labels)) != len(labels):
            dupes = sorted({label for label in labels if labels.count(label) > 1})
            raise GroundSetError("Duplicate labels: {}".format(", ".join(dupes)))
        if len(labels) > conf.max_ground_size:
            raise GroundSetError("Ground set of {} elements exceeds the cap of {}".format(len(labels), conf.max_ground_size))
        self.labels = labels
        self._index = {label: i for i, label in enumerate(labels)}

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self._index

    def __eq__(self, other):
        return isinstance(other, GroundSet) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return "<GroundSet({})>".format(", ".join(self.labels))

    @property
    def size(self):
        """Number of subsets"""
        return 1 << len(self.labels)

    @property
    def full(self):
        return self.size - 1

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise GroundSetError("Unknown label {!r}".format(label))

    def mask(self, subset):
        """Bitmask of <subset>: an int mask, a single label or an iterable of labels"""
        if subset is None:
            return 0
        if isinstance(subset, (int, np.integer)) and not isinstance(subset, bool):
            subset = int(subset)
            if subset < 0 or subset > self.full:
                raise GroundSetError("Mask {} out of range".format(subset))
            return subset
        if isinstance(subset, str):
            subset = [subset]
        mask = 0
        for label in subset:
            mask |= 1 << self.index(label)
        return mask

    def subset(self, mask):
        return tuple(self.labels[i] for i in bits(mask))

    def format(self, mask):
        return format_subset(self.subset(mask))


def _as_ground(ground):
    return ground if isinstance(ground, GroundSet) else GroundSet(ground)


class RankVector:
    """A set function on all subsets of a finite ground set, stored densely.

    Exact vectors keep integer numerators over one common positive
    denominator, so every comparison is exact. Numeric vectors keep doubles and
    compare with an attached tolerance. Vectors are immutable; the `meta` dict
    only records provenance (e.g. meta['source'] = 'linear').
    """

    def __init__(self, ground, data, denominator=None, tolerance=None, meta=None):
        ground = _as_ground(ground)
        data = np.asarray(data)
        if data.shape != (ground.size,):
            raise GroundSetError("Expected {} values for {} elements, got {}".format(ground.size, len(ground), data.shape))
        self.ground = ground
        if denominator is None:
            self._data = data.astype(np.float64)
            self._den = None
            self.tolerance = conf.tolerance if tolerance is None else float(tolerance)
        else:
            data = data.astype(np.int64)
            denominator = int(denominator)
            if denominator <= 0:
                raise ModeError("Denominator must be positive")
            common = gcd(int(np.gcd.reduce(np.abs(data))) if len(data) else 0, denominator)
            if common > 1:
                data = data // common
                denominator //= common
            self._data = data
            self._den = denominator
            self.tolerance = 0.0
        self._data.setflags(write=False)
        self.meta = dict(meta) if meta else {}

    @classmethod
    def exact(cls, ground, values, meta=None):
        """Exact vector from rationals (or an integer array) indexed by mask"""
        ground = _as_ground(ground)
        if isinstance(values, np.ndarray) and np.issubdtype(values.dtype, np.integer):
            return cls(ground, values, denominator=1, meta=meta)
        fractions = [Fraction(value) for value in values]
        den = 1
        for value in fractions:
            den = den * value.denominator // gcd(den, value.denominator)
        data = np.array([value.numerator * (den // value.denominator) for value in fractions], dtype=np.int64)
        return cls(ground, data, denominator=den, meta=meta)

    @classmethod
    def numeric(cls, ground, values, tolerance=None, meta=None):
        return cls(ground, np.asarray(values, dtype=np.float64), tolerance=tolerance, meta=meta)

    @classmethod
    def from_function(cls, ground, fn, exact=True):
        """Evaluates <fn> (called with a tuple of labels) on every subset"""
        ground = _as_ground(ground)
        values = [fn(ground.subset(mask)) for mask in range(ground.size)]
        if exact:
            return cls.exact(ground, values)
        return cls.numeric(ground, values)

    @classmethod
    def from_circuits(cls, ground, circuits):
        """Rank function of the matroid whose circuits are <circuits> (which
        must be the complete circuit list). A set is independent when it
        contains no circuit; a dependent set has the rank of its best
        one-element deletion."""
        ground = _as_ground(ground)
        circuit_masks = [ground.mask(c) for c in circuits]
        rank = np.zeros(ground.size, dtype=np.int64)
        for mask in range(1, ground.size):
            if any(mask & c == c for c in circuit_masks):
                rank[mask] = max(rank[mask ^ (1 << i)] for i in bits(mask))
            else:
                rank[mask] = bin(mask).count('1')
        return cls(ground, rank, denominator=1, meta={'source': 'circuits'})

    @classmethod
    def read(cls, source):
        labels, values, exact = read_rank_vector(source)
        if exact:
            return cls.exact(labels, values)
        return cls.numeric(labels, values)

    def to_text(self):
        lines = ["groundset: " + " ".join(self.labels)]
        for mask in range(self.ground.size):
            lines.append("{}: {}".format(self.ground.format(mask), format_value(self._value(mask))))
        return "\n".join(lines) + "\n"

    @property
    def labels(self):
        return self.ground.labels

    @property
    def n(self):
        return len(self.ground)

    @property
    def is_exact(self):
        return self._den is not None

    @property
    def denominator(self):
        return self._den

    @property
    def numerators(self):
        if self._den is None:
            raise ModeError("Numeric vectors have no numerators")
        return self._data

    def _value(self, mask):
        if self._den is None:
            return float(self._data[mask])
        return Fraction(int(self._data[mask]), self._den)

    def _comparable(self):
        """Values on an integer scale (exact) or as doubles, with the tolerance to compare them"""
        return self._data, self.tolerance

    def _like(self, data, ground=None, meta=None):
        return RankVector(self.ground if ground is None else ground, data, denominator=self._den,
                          tolerance=self.tolerance, meta=self.meta if meta is None else meta)

    def mask(self, subset):
        return self.ground.mask(subset)

    def __getitem__(self, subset):
        return self._value(self.ground.mask(subset))

    def __call__(self, *labels):
        return self._value(self.ground.mask(labels))

    def values(self):
        return [self._value(mask) for mask in range(self.ground.size)]

    def as_array(self):
        if self._den is None:
            return self._data.copy()
        return self._data / self._den

    def is_integral(self):
        if self._den is not None:
            return bool(np.all(self._data % self._den == 0))
        return bool(np.all(np.abs(self._data - np.rint(self._data)) <= self.tolerance))

    def scaled(self, c):
        """c * v for a positive rational (exact) or real (numeric) c"""
        if self._den is None:
            return self._like(self._data * float(c))
        c = Fraction(c)
        if c <= 0:
            raise ModeError("Scale factor must be positive")
        return RankVector(self.ground, self._data * c.numerator, denominator=self._den * c.denominator, meta=self.meta)

    def __add__(self, other):
        if not isinstance(other, RankVector):
            return NotImplemented
        if other.ground != self.ground:
            other = other.reordered(self.labels)
        if self._den is not None and other._den is not None:
            den = self._den * other._den // gcd(self._den, other._den)
            data = self._data * (den // self._den) + other._data * (den // other._den)
            return RankVector(self.ground, data, denominator=den)
        return RankVector.numeric(self.ground, self.as_array() + other.as_array(),
                                  tolerance=max(self.tolerance, other.tolerance))

    def __sub__(self, other):
        if not isinstance(other, RankVector):
            return NotImplemented
        if other._den is None:
            return self + RankVector.numeric(other.ground, -other._data, tolerance=other.tolerance)
        return self + RankVector(other.ground, -other._data, denominator=other._den)

    def __eq__(self, other):
        if not isinstance(other, RankVector):
            return NotImplemented
        if set(self.labels) != set(other.labels):
            return False
        if other.labels != self.labels:
            other = other.reordered(self.labels)
        a, b, tol = _common_scale(self, other)
        return bool(np.all(np.abs(a - b) <= tol))

    __hash__ = None

    def __repr__(self):
        mode = 'exact' if self.is_exact else 'numeric'
        return "<RankVector {} n={} groundset=({})>".format(mode, self.n, ", ".join(self.labels))

    def with_value(self, subset, value):
        """Copy with the value at <subset> replaced"""
        mask = self.ground.mask(subset)
        if self._den is None:
            data = self._data.copy()
            data[mask] = float(value)
            return self._like(data)
        values = self.values()
        values[mask] = Fraction(value)
        return RankVector.exact(self.ground, values, meta=self.meta)

    def relabel(self, mapping):
        """Same values on renamed elements; <mapping> may omit unchanged labels"""
        labels = [mapping.get(label, label) for label in self.labels]
        return self._like(self._data, ground=GroundSet(labels))

    def reordered(self, labels):
        """Same set function with the ground set listed in the order <labels>"""
        if sorted(labels) != sorted(self.labels):
            raise GroundSetError("Reordering must use the same labels")
        idx = subset_index([self.ground.index(label) for label in labels])
        return self._like(self._data[idx], ground=GroundSet(labels))

    def to_numeric(self, tolerance=None):
        return RankVector.numeric(self.ground, self.as_array(), tolerance=tolerance, meta=self.meta)

    def to_exact(self, max_denominator=None):
        """Rationalizes a numeric vector, each value rounded to the nearest
        fraction with denominator at most <max_denominator>."""
        if self._den is not None:
            return self
        max_denominator = conf.rational_max_denominator if max_denominator is None else max_denominator
        values = [Fraction(float(x)).limit_denominator(max_denominator) for x in self._data]
        meta = dict(self.meta)
        meta['rationalized'] = max_denominator
        return RankVector.exact(self.ground, values, meta=meta)


def _common_scale(v, w):
    if v._den is not None and w._den is not None:
        return v._data * w._den, w._data * v._den, 0
    return v.as_array(), w.as_array(), max(v.tolerance, w.tolerance)


class Violation:
    """A failed axiom instance: lhs >= rhs does not hold for the subsets A, B"""

    def __init__(self, axiom, A, B, lhs, rhs):
        self.axiom = axiom
        self.A = A
        self.B = B
        self.lhs = lhs
        self.rhs = rhs

    def __repr__(self):
        return "<Violation {} A={} B={} lhs={} rhs={}>".format(self.axiom, format_subset(self.A), format_subset(self.B),
                                                              format_value(self.lhs), format_value(self.rhs))

    def __str__(self):
        return "{} fails at A={} B={}: {} vs {}".format(self.axiom, format_subset(self.A), format_subset(self.B),
                                                      format_value(self.lhs), format_value(self.rhs))


class AxiomReport:
    def __init__(self, is_normalized, is_monotone, is_submodular, violations=None):
        self.is_normalized = bool(is_normalized)
        self.is_monotone = bool(is_monotone)
        self.is_submodular = bool(is_submodular)
        self.violations = violations if violations is not None else []

    @property
    def is_polymatroid(self):
        return self.is_normalized and self.is_monotone and self.is_submodular

    @property
    def first_violation(self):
        return self.violations[0] if self.violations else None

    def lines(self):
        out = []
        for name, flag in (('NORMALIZED', self.is_normalized), ('MONOTONE', self.is_monotone),
                           ('SUBMODULAR', self.is_submodular)):
            out.append("{}: {}".format(name, 'yes' if flag else 'no'))
        for violation in self.violations:
            out.append("FAIL " + str(violation))
        return out

    def __repr__(self):
        return "<AxiomReport normalized={} monotone={} submodular={}>".format(
            self.is_normalized, self.is_monotone, self.is_submodular)


def _violation(v, axiom, A, B, lhs, rhs):
    if v.is_exact:
        lhs, rhs = Fraction(int(lhs), v._den), Fraction(int(rhs), v._den)
    else:
        lhs, rhs = float(lhs), float(rhs)
    return Violation(axiom, v.ground.subset(int(A)), v.ground.subset(int(B)), lhs, rhs)


def _pairwise_check(v, d, tol):
    """All subset pairs, A ascending and then B ascending"""
    allm = np.arange(len(d), dtype=np.int64)
    mono = sub = None
    for A in range(len(d)):
        if mono is None:
            sup = allm[(allm & A) == A]
            bad = d[sup] + tol < d[A]
            if bad.any():
                B = int(sup[np.argmax(bad)])
                mono = _violation(v, 'monotone', A, B, d[B], d[A])
        if sub is None:
            lhs = d[A] + d
            rhs = d[A | allm] + d[A & allm]
            bad = lhs + tol < rhs
            if bad.any():
                B = int(np.argmax(bad))
                sub = _violation(v, 'submodular', A, B, lhs[B], rhs[B])
        if mono is not None and sub is not None:
            break
    return mono, sub


def _unflatten(flat_index, remaining_bits):
    """Mask for a C-order flat index into a (2,)*m view whose axes are the
    bits <remaining_bits> (most significant first)"""
    mask = 0
    m = len(remaining_bits)
    for t, bit in enumerate(remaining_bits):
        if (flat_index >> (m - 1 - t)) & 1:
            mask |= 1 << bit
    return mask


def _local_check(v, d, tol):
    """Elemental form: f(S+i) >= f(S) and f(S+i)+f(S+j) >= f(S+i+j)+f(S)"""
    n = v.n
    t = d.reshape((2,) * n)

    def axis(i):
        return n - 1 - i

    def view(fixed):
        index = [slice(None)] * n
        for i, value in fixed.items():
            index[axis(i)] = value
        return t[tuple(index)]

    mono = sub = None
    for i in range(n):
        f0, f1 = view({i: 0}), view({i: 1})
        bad = f1 + tol < f0
        if bad.any():
            rem = [b for b in reversed(range(n)) if b != i]
            S = _unflatten(int(np.argmax(bad.ravel())), rem)
            mono = _violation(v, 'monotone', S, S | (1 << i), d[S | (1 << i)], d[S])
            break
    for i, j in itertools.combinations(range(n), 2):
        f00, f01 = view({i: 0, j: 0}), view({i: 0, j: 1})
        f10, f11 = view({i: 1, j: 0}), view({i: 1, j: 1})
        bad = f10 + f01 + tol < f11 + f00
        if bad.any():
            rem = [b for b in reversed(range(n)) if b not in (i, j)]
            S = _unflatten(int(np.argmax(bad.ravel())), rem)
            A, B = S | (1 << i), S | (1 << j)
            sub = _violation(v, 'submodular', A, B, d[A] + d[B], d[A | B] + d[S])
            break
    return mono, sub


def is_polymatroid(v):
    """Checks normalization, monotonicity and submodularity of <v>.

    Up to conf.exhaustive_pair_limit elements every pair (A, B) is tested with A
    then B ascending by mask, and the first failing pair is reported. Larger
    ground sets are tested in the equivalent elemental form, scanning the
    added elements in ascending order.
    """
    d, tol = v._comparable()
    violations = []
    normalized = abs(d[0]) <= tol
    if not normalized:
        violations.append(_violation(v, 'normalized', 0, 0, d[0], 0))
    if v.n <= conf.exhaustive_pair_limit:
        mono, sub = _pairwise_check(v, d, tol)
    else:
        mono, sub = _local_check(v, d, tol)
    found = [x for x in (mono, sub) if x is not None]
    found.sort(key=lambda x: (v.mask(x.A), v.mask(x.B)))
    violations.extend(found)
    return AxiomReport(normalized, mono is None, sub is None, violations)


def is_matroid(v):
    """Integer-valued polymatroid with every singleton of rank at most 1.
    Numeric vectors with values farther than the tolerance from integers are
    rejected with ModeError."""
    d, tol = v._comparable()
    if not v.is_exact and np.any(np.abs(d - np.rint(d)) > tol):
        raise ModeError("Numeric vector is not integral within tolerance {}".format(tol))
    if not is_polymatroid(v).is_polymatroid:
        return False
    if v.is_exact:
        if np.any(d % v._den != 0):
            return False
        ints = d // v._den
    else:
        ints = np.rint(d)
    singletons = ints[[1 << i for i in range(v.n)]]
    return bool(np.all(singletons <= 1))


def _closure_mask(d, tol, n, mask):
    cl = mask
    for i in range(n):
        bit = 1 << i
        if not mask & bit and abs(d[mask | bit] - d[mask]) <= tol:
            cl |= bit
    return cl


def _closure_masks(d, tol, n):
    """Closure of every subset at once"""
    allm = np.arange(len(d), dtype=np.int64)
    cl = allm.copy()
    for i in range(n):
        bit = 1 << i
        without = allm[(allm & bit) == 0]
        same = np.abs(d[without | bit] - d[without]) <= tol
        cl[without[same]] |= bit
    return cl


def closure(v, A):
    """cl(A) = {x | f(A+x) = f(A)} as a frozenset of labels"""
    d, tol = v._comparable()
    return frozenset(v.ground.subset(_closure_mask(d, tol, v.n, v.mask(A))))


def contraction(v, A):
    """f_{/A}(S) = f(S u A) - f(A), on the same ground set"""
    a = v.mask(A)
    d = v._data
    allm = np.arange(len(d), dtype=np.int64)
    meta = dict(v.meta)
    meta['contracted'] = v.ground.subset(a)
    return v._like(d[allm | a] - d[a], meta=meta)


def restriction(v, T):
    """v on the subsets of T; the new ground set keeps the original label order"""
    positions = bits(v.mask(T))
    ground = GroundSet([v.labels[p] for p in positions])
    return v._like(v._data[subset_index(positions)], ground=ground)


def conditional(v, S, A):
    return v[v.mask(S) | v.mask(A)] - v[A]


def is_embedding(v, w, eta):
    """True iff v(S) = w(eta(S)) for every S; <eta> maps labels of v to labels of w"""
    if set(eta) != set(v.labels):
        raise GroundSetError("Embedding must be defined on exactly the ground set of the source")
    images = [eta[label] for label in v.labels]
    if len(set(images)) != len(images):
        raise GroundSetError("Embedding is not injective")
    positions = [w.ground.index(label) for label in images]
    idx = subset_index(positions)
    a, b, tol = _common_scale(v, w)
    return bool(np.all(np.abs(a - b[idx]) <= tol))


def grouped(v, groups):
    """Vector on group labels: h(T) = v(union of the groups in T).
    <groups> maps each new label to a list of labels of v."""
    group_masks = [v.mask(members) for members in groups.values()]
    idx = np.zeros(1, dtype=np.int64)
    for gm in group_masks:
        idx = np.concatenate([idx, idx | gm])
    meta = dict(v.meta)
    meta['grouped'] = dict(groups)
    return v._like(v._data[idx], ground=GroundSet(list(groups)), meta=meta)


def uniform_matroid(k, labels):
    labels = list(labels)
    pc = popcounts(len(labels))
    return RankVector.exact(labels, np.minimum(pc, k))


def vamos_matroid():
    """The eight-element rank-4 Vamos matroid. Its elements come in four pairs
    a, b, c, d; the unions of two pairs are dependent for every combination of
    pairs except {a, b}."""
    labels = ['a1', 'a2', 'b1', 'b2', 'c1', 'c2', 'd1', 'd2']
    ground = GroundSet(labels)
    planes = {ground.mask([x + '1', x + '2', y + '1', y + '2'])
              for x, y in [('a', 'c'), ('a', 'd'), ('b', 'c'), ('b', 'd'), ('c', 'd')]}
    rank = np.minimum(popcounts(8), 4)
    for mask in planes:
        rank[mask] = 3
    return RankVector(ground, rank, denominator=1, meta={'source': 'vamos'})


def _flat_masks(d, tol, n):
    cl = _closure_masks(d, tol, n)
    return np.flatnonzero(cl == np.arange(len(d))), cl


def flats(v):
    """All closed sets of <v>, by ascending mask"""
    d, tol = v._comparable()
    masks, _ = _flat_masks(d, tol, v.n)
    return [frozenset(v.ground.subset(int(m))) for m in masks]


def modular_cut_extension(v, generators, label):
    """Single-element extension of a matroid by the modular cut generated by
    the flats spanned by each subset in <generators>.

    The cut is the up-closure of the generators, closed under intersections of
    modular pairs (r(F1) + r(F2) = r(F1 v F2) + r(F1 ^ F2)). The new element
    lies on exactly the flats of the cut: f(S + x) = f(S) when cl(S) is in the
    cut and f(S) + 1 otherwise.
    """
    if label in v.ground:
        raise GroundSetError("Label {!r} already in the ground set".format(label))
    d, tol = v._comparable()
    flat_masks, cl = _flat_masks(d, tol, v.n)
    cut = set()

    def add_up(flat):
        added = flat_masks[(flat_masks & flat) == flat]
        cut.update(int(m) for m in added)

    for generator in generators:
        add_up(int(cl[v.mask(generator)]))
    changed = True
    while changed:
        changed = False
        for F1, F2 in itertools.combinations(sorted(cut), 2):
            meet = F1 & F2
            if meet in cut:
                continue
            if abs(d[F1] + d[F2] - d[F1 | F2] - d[meet]) <= tol:
                add_up(meet)
                changed = True
    in_cut = np.isin(cl, np.array(sorted(cut), dtype=np.int64))
    unit = v._den if v.is_exact else 1.0
    data = np.concatenate([d, d + np.where(in_cut, 0, unit)])
    meta = dict(v.meta)
    meta['extension'] = label
    meta.pop('source', None)
    return v._like(data, ground=GroundSet(v.labels + (label,)), meta=meta)


def diminishing_returns_violation(v):
    """First (A, B, C) with A <= B, C disjoint from B and
    f(B u C) - f(B) < f(A u C) - f(A), or None. Exhaustive; small ground sets only."""
    d, tol = v._comparable()
    allm = np.arange(len(d), dtype=np.int64)
    for B in range(len(d)):
        C = allm[(allm & B) == 0]
        for A in bits_subsets(B):
            bad = d[B | C] - d[B] + tol < d[A | C] - d[A]
            if bad.any():
                c = int(C[np.argmax(bad)])
                return v.ground.subset(A), v.ground.subset(B), v.ground.subset(c)
    return None


def bits_subsets(mask):
    """All submasks of <mask>, ascending"""
    return [int(m) for m in subset_index(bits(mask))]


def is_subadditive(v, parts):
    """f(union of parts) <= sum of f(part)"""
    d, tol = v._comparable()
    masks = [v.mask(p) for p in parts]
    union = 0
    for m in masks:
        union |= m
    return bool(d[union] <= sum(d[m] for m in masks) + tol)
