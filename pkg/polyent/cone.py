"""Entropy inequalities and exact linear feasibility.

The Shannon cone is tested directly on rank vectors. Copy-lemma systems are
decided by an exact rational simplex (phase I only, Bland's rule); both
outcomes carry a certificate that is checked against the original rows
before it is returned.
"""
import itertools
import warnings
from fractions import Fraction

import numpy as np
from astropy import log

from .config import conf
from .setfn import GroundSet, RankVector, grouped, vamos_matroid, _unflatten
from .utils import CopySystemError, PolyentError, PolyentWarning, bits, format_subset, format_value, load_preset

__all__ = ['EntropyInequality', 'load_inequalities', 'elemental_shannon_inequalities',
           'in_shannon_cone', 'LinearInequalitySystem', 'FeasibilityCertificate',
           'lp_feasible', 'build_copy_system', 'default_copy_schedule',
           'CopyRefutation', 'Refuted', 'Unknown', 'copy_lp_refute', 'vamos_grouped_vector']


class EntropyInequality:
    """sum(coef[S] * h(S)) >= 0 over the subsets S of variables 1..n.
    Coefficients are keyed by bitmask (bit i is variable i+1)."""

    def __init__(self, name, n, coefficients):
        self.name = name
        self.n = n
        coefficients = {int(mask): Fraction(c) for mask, c in coefficients.items() if c != 0}
        if 0 in coefficients:
            raise PolyentError("Inequality {} has a coefficient on the empty set".format(name))
        if any(mask >> n for mask in coefficients):
            raise PolyentError("Inequality {} uses variables beyond {}".format(name, n))
        self.coefficients = coefficients

    @classmethod
    def from_information_terms(cls, name, n, terms):
        """Builds sum(coef * I(left; right | given)) >= 0 from 1-based index
        lists; an empty <right> stands for H(left | given)."""
        coefficients = {}

        def add(indices, c):
            mask = 0
            for i in indices:
                mask |= 1 << (int(i) - 1)
            if mask:
                coefficients[mask] = coefficients.get(mask, 0) + c

        for term in terms:
            c = Fraction(term['coef'])
            left, right, given = term['left'], term.get('right', []), term.get('given', [])
            if right:
                add(list(left) + list(given), c)
                add(list(right) + list(given), c)
                add(list(left) + list(right) + list(given), -c)
                add(given, -c)
            else:
                add(list(left) + list(given), c)
                add(given, -c)
        return cls(name, n, coefficients)

    def _positions(self, v, labels):
        if labels is None:
            if v.n != self.n:
                raise PolyentError("{} has arity {}, vector has {} elements".format(self.name, self.n, v.n))
            return list(range(v.n))
        if len(labels) != self.n:
            raise PolyentError("{} needs {} labels".format(self.name, self.n))
        return [v.ground.index(label) for label in labels]

    def evaluate(self, v, labels=None):
        """Left-hand side on <v>; <labels> names the element of v playing each variable"""
        positions = self._positions(v, labels)
        total = 0
        for mask, c in self.coefficients.items():
            target = 0
            for i in bits(mask):
                target |= 1 << positions[i]
            total += c * v[target]
        return total

    def holds(self, v, labels=None):
        return self.evaluate(v, labels) >= -v.tolerance

    def row(self):
        """Dense coefficient array indexed by mask"""
        out = [Fraction(0)] * (1 << self.n)
        for mask, c in self.coefficients.items():
            out[mask] = c
        return out

    def __str__(self):
        terms = []
        for mask in sorted(self.coefficients, key=lambda m: (bin(m).count('1'), m)):
            c = self.coefficients[mask]
            name = "h({})".format(",".join(str(i + 1) for i in bits(mask)))
            sign = '-' if c < 0 else '+'
            terms.append(sign + (name if abs(c) == 1 else "{}*{}".format(format_value(abs(c)), name)))
        return "{}: {} >= 0".format(self.name, " ".join(terms).lstrip('+'))

    def __repr__(self):
        return "<EntropyInequality {} n={}>".format(self.name, self.n)


def load_inequalities():
    """Non-Shannon inequalities shipped as data, by key"""
    entries = load_preset(conf.inequalities_file)
    return {key: EntropyInequality.from_information_terms(entry.get('name', key), entry['arity'], entry['terms'])
            for key, entry in entries.items()}


def _insert_zero_bit(pool, bit_index):
    """Insert a zero bit at the specified position"""
    bit = 1 << bit_index
    left = (pool & ~(bit - 1)) << 1
    right = pool & (bit - 1)
    return left | right


def _conditional_entropy_row(n, a):
    full = (1 << n) - 1
    rest = full ^ (1 << a)
    coefficients = {full: 1}
    if rest:
        coefficients[rest] = -1
    name = "H({}|{})".format(a + 1, ",".join(str(i + 1) for i in bits(rest))) if rest else "H({})".format(a + 1)
    return EntropyInequality(name, n, coefficients)


def _mutual_information_row(n, a, b, K):
    A, B = 1 << a, 1 << b
    coefficients = {A | K: 1, B | K: 1, A | B | K: -1}
    if K:
        coefficients[K] = -1
    given = ",".join(str(i + 1) for i in bits(K))
    name = "I({};{}|{})".format(a + 1, b + 1, given) if K else "I({};{})".format(a + 1, b + 1)
    return EntropyInequality(name, n, coefficients)


def _elemental(n):
    for a in range(n):
        yield _conditional_entropy_row(n, a)
    for a, b in itertools.combinations(range(n), 2):
        for i in range(1 << max(n - 2, 0)):
            yield _mutual_information_row(n, a, b, _insert_zero_bit(_insert_zero_bit(i, a), b))


def elemental_shannon_inequalities(n):
    """The n + C(n,2) 2^(n-2) elemental inequalities: H(i | E - i) >= 0 and
    I(i; j | K) >= 0. They generate the Shannon (polymatroid) cone."""
    if not 1 <= n <= 8:
        raise PolyentError("Elemental inequalities are generated for 1 <= n <= 8, not {}".format(n))
    return list(_elemental(n))


def in_shannon_cone(v):
    """(True, None) when <v> satisfies every elemental inequality, otherwise
    (False, first violated inequality). A vector with v(empty) != 0 is outside
    the cone with no violated inequality."""
    d, tol = v._comparable()
    n = v.n
    if abs(d[0]) > tol:
        return False, None
    full = (1 << n) - 1
    for a in range(n):
        if d[full] - d[full ^ (1 << a)] < -tol:
            return False, _conditional_entropy_row(n, a)
    t = d.reshape((2,) * n) if n else d

    def view(fixed):
        index = [slice(None)] * n
        for i, value in fixed.items():
            index[n - 1 - i] = value
        return t[tuple(index)]

    for a, b in itertools.combinations(range(n), 2):
        bad = view({a: 1, b: 0}) + view({a: 0, b: 1}) + tol < view({a: 1, b: 1}) + view({a: 0, b: 0})
        if bad.any():
            rest = [i for i in reversed(range(n)) if i not in (a, b)]
            K = _unflatten(int(np.argmax(np.ravel(bad))), rest)
            return False, _mutual_information_row(n, a, b, K)
    return True, None


class Row:
    """sum(coefficients[j] * x_j) <relation> rhs, relation one of '>=' and '='"""

    def __init__(self, coefficients, relation, rhs, name=None):
        self.coefficients = coefficients
        self.relation = relation
        self.rhs = rhs
        self.name = name

    def value(self, point):
        return sum((c * point[j] for j, c in self.coefficients.items()), Fraction(0))

    def satisfied(self, point):
        lhs = self.value(point)
        return lhs == self.rhs if self.relation == '=' else lhs >= self.rhs

    def __repr__(self):
        return "<Row {} {} {}>".format(self.name or '', self.relation, self.rhs)


class LinearInequalitySystem:
    """Exact rational rows over named variables. Variables are nonnegative
    unless declared free."""

    def __init__(self, variables, nonnegative=True):
        self.variables = tuple(variables)
        self._index = {name: j for j, name in enumerate(self.variables)}
        if len(self._index) != len(self.variables):
            raise PolyentError("Duplicate variable names")
        if isinstance(nonnegative, bool):
            self.nonnegative = [nonnegative] * len(self.variables)
        else:
            self.nonnegative = [bool(flag) for flag in nonnegative]
        self.rows = []

    def index(self, variable):
        if isinstance(variable, (int, np.integer)):
            if not 0 <= variable < len(self.variables):
                raise PolyentError("Variable index {} out of range".format(variable))
            return int(variable)
        try:
            return self._index[variable]
        except KeyError:
            raise PolyentError("Undeclared variable {!r}".format(variable))

    def add(self, coefficients, relation='>=', rhs=0, name=None):
        if relation not in ('>=', '='):
            raise PolyentError("Relation must be '>=' or '=', not {!r}".format(relation))
        row = {}
        for variable, c in coefficients.items():
            j = self.index(variable)
            row[j] = row.get(j, 0) + Fraction(c)
        row = {j: c for j, c in row.items() if c != 0}
        self.rows.append(Row(row, relation, Fraction(rhs), name))
        return len(self.rows) - 1

    def row_id(self, r):
        return self.rows[r].name or "row {}".format(r)

    def is_satisfied_by(self, point):
        if any(flag and x < 0 for flag, x in zip(self.nonnegative, point)):
            return False
        return all(row.satisfied(point) for row in self.rows)

    def farkas_holds(self, multipliers):
        """True when the multipliers combine the rows into 0 >= positive"""
        if len(multipliers) != len(self.rows):
            return False
        combined = {}
        bound = Fraction(0)
        for row, lam in zip(self.rows, multipliers):
            if lam == 0:
                continue
            if row.relation == '>=' and lam < 0:
                return False
            for j, c in row.coefficients.items():
                combined[j] = combined.get(j, 0) + lam * c
            bound += lam * row.rhs
        for j, c in combined.items():
            if c > 0 or (c < 0 and not self.nonnegative[j]):
                return False
        return bound > 0

    def __len__(self):
        return len(self.rows)

    def __repr__(self):
        return "<LinearInequalitySystem {} variables, {} rows>".format(len(self.variables), len(self.rows))


class FeasibilityCertificate:
    """Either a feasible point or Farkas multipliers (one per row)"""

    def __init__(self, system, point=None, multipliers=None):
        if (point is None) == (multipliers is None):
            raise PolyentError("A certificate holds exactly one of a point and multipliers")
        self.system = system
        self.point = point
        self.multipliers = multipliers

    @property
    def feasible(self):
        return self.point is not None

    @property
    def kind(self):
        return 'feasible' if self.feasible else 'infeasible'

    def verify(self):
        if self.feasible:
            return self.system.is_satisfied_by(self.point)
        return self.system.farkas_holds(self.multipliers)

    def to_text(self):
        if self.feasible:
            lines = ["FEASIBLE"]
            lines += ["{}: {}".format(name, format_value(x)) for name, x in zip(self.system.variables, self.point)]
        else:
            lines = ["INFEASIBLE"]
            lines += ["{}: {}".format(self.system.row_id(r), format_value(lam))
                      for r, lam in enumerate(self.multipliers) if lam != 0]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return "<FeasibilityCertificate {}>".format(self.kind)


def _presolve(system):
    """Eliminates variables fixed by singleton equality rows.

    Every working row keeps its provenance: the combination of original rows
    it equals. Returns (rows, fixed, multipliers) where multipliers is a
    Farkas combination of the original rows when presolve alone proves
    infeasibility."""
    rows = [dict(row.coefficients) for row in system.rows]
    rhs = [row.rhs for row in system.rows]
    relation = [row.relation for row in system.rows]
    provenance = [{r: Fraction(1)} for r in range(len(rows))]
    alive = set(range(len(rows)))
    fixed = {}
    occurs = {}
    for r, row in enumerate(rows):
        for j in row:
            occurs.setdefault(j, set()).add(r)

    def combine(target, source, factor):
        for r, c in source.items():
            value = target.get(r, 0) + factor * c
            if value:
                target[r] = value
            else:
                target.pop(r, None)

    def contradiction(r):
        if relation[r] == '=' and rhs[r] != 0:
            return 1 if rhs[r] > 0 else -1
        if relation[r] == '>=' and rhs[r] > 0:
            return 1
        return 0

    queue = [r for r in alive if relation[r] == '=' and len(rows[r]) == 1]
    for r in alive:
        if not rows[r] and contradiction(r):
            return None, None, _lift(system, provenance[r], contradiction(r))
    while queue:
        s = queue.pop()
        if s not in alive or len(rows[s]) != 1:
            continue
        (j, a), = rows[s].items()
        value = rhs[s] / a
        if value < 0 and system.nonnegative[j]:
            return None, None, _lift(system, provenance[s], -1 / a)
        fixed[j] = value
        alive.discard(s)
        for k in occurs.pop(j, ()):
            if k not in alive:
                continue
            factor = rows[k].pop(j) / a
            rhs[k] -= factor * rhs[s]
            combine(provenance[k], provenance[s], -factor)
            if not rows[k]:
                sign = contradiction(k)
                if sign:
                    return None, None, _lift(system, provenance[k], sign)
                alive.discard(k)
            elif relation[k] == '=' and len(rows[k]) == 1:
                queue.append(k)
    for r in list(alive):
        if not rows[r]:
            alive.discard(r)
    working = [(rows[r], relation[r], rhs[r], provenance[r]) for r in sorted(alive)]
    return working, fixed, None


def _lift(system, provenance, factor):
    multipliers = [Fraction(0)] * len(system.rows)
    for r, c in provenance.items():
        multipliers[r] = factor * c
    return multipliers


def _phase_one(rows, variables, free):
    """Phase I of the simplex method on rows (coefficients, relation, rhs)
    over the column ids in <variables>. Returns ('feasible', values) or
    ('infeasible', y) with y one multiplier per row."""
    column = {}
    negative = {}
    for j in variables:
        column[j] = len(column)
    next_col = len(column)
    for j in variables:
        if j in free:
            negative[j] = next_col
            next_col += 1
    tableau = []
    b = []
    basis = []
    initial = []
    sigma = []
    artificial = set()
    for coefficients, relation, rhs in rows:
        row = {}
        for j, c in coefficients.items():
            row[column[j]] = c
            if j in negative:
                row[negative[j]] = -c
        if relation == '>=' and rhs <= 0:
            sign = -1
            row = {k: -c for k, c in row.items()}
            row[next_col] = Fraction(1)
            slack = next_col
            next_col += 1
        else:
            sign = -1 if rhs < 0 else 1
            if sign < 0:
                row = {k: -c for k, c in row.items()}
            if relation == '>=':
                row[next_col] = Fraction(-1)
                next_col += 1
            slack = next_col
            row[slack] = Fraction(1)
            artificial.add(slack)
            next_col += 1
        tableau.append(row)
        b.append(sign * rhs)
        basis.append(slack)
        initial.append(slack)
        sigma.append(sign)

    cost = {}
    value = Fraction(0)
    for i, row in enumerate(tableau):
        if basis[i] in artificial:
            value += b[i]
            for k, c in row.items():
                if k != basis[i]:
                    cost[k] = cost.get(k, 0) - c
    cost = {k: c for k, c in cost.items() if c}

    def eliminate(target, source, factor):
        for k, c in source.items():
            new = target.get(k, 0) - factor * c
            if new:
                target[k] = new
            else:
                target.pop(k, None)

    iterations = 0
    while True:
        entering = min((k for k, c in cost.items() if c < 0), default=None)
        if entering is None:
            break
        best = None
        for i, row in enumerate(tableau):
            a = row.get(entering)
            if a is not None and a > 0:
                key = (b[i] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            # phase I is bounded below by zero
            raise PolyentError("Unbounded phase I direction")
        i = best[1]
        a = tableau[i][entering]
        if a != 1:
            tableau[i] = {k: c / a for k, c in tableau[i].items()}
            b[i] /= a
        pivot_row = tableau[i]
        for k, row in enumerate(tableau):
            if k != i and entering in row:
                factor = row[entering]
                eliminate(row, pivot_row, factor)
                b[k] -= factor * b[i]
        factor = cost[entering]
        eliminate(cost, pivot_row, factor)
        value += factor * b[i]
        basis[i] = entering
        iterations += 1
    log.debug("Phase I finished after {} pivots with value {}".format(iterations, value))

    if value > 0:
        y = []
        for i in range(len(tableau)):
            c = 1 if initial[i] in artificial else 0
            y.append(sigma[i] * (c - cost.get(initial[i], 0)))
        return 'infeasible', y
    solution = {basis[i]: b[i] for i in range(len(tableau))}
    values = {}
    for j in variables:
        x = solution.get(column[j], Fraction(0))
        if j in negative:
            x -= solution.get(negative[j], Fraction(0))
        values[j] = x
    return 'feasible', values


def lp_feasible(system):
    """Decides feasibility of <system> exactly. The returned certificate has
    been re-verified against the original rows."""
    rows, fixed, multipliers = _presolve(system)
    if multipliers is None:
        variables = sorted({j for row in rows for j in row[0]})
        log.debug("Presolve fixed {} variables; {} rows over {} variables remain".format(
            len(fixed), len(rows), len(variables)))
        free = {j for j in variables if not system.nonnegative[j]}
        kind, result = _phase_one([row[:3] for row in rows], variables, free)
        if kind == 'infeasible':
            multipliers = [Fraction(0)] * len(system.rows)
            for (_, _, _, provenance), y in zip(rows, result):
                if y:
                    for r, c in provenance.items():
                        multipliers[r] += y * c
        else:
            point = [Fraction(0)] * len(system.variables)
            for j, x in fixed.items():
                point[j] = x
            for j, x in result.items():
                point[j] = x
            certificate = FeasibilityCertificate(system, point=point)
            if not certificate.verify():
                raise PolyentError("Feasible point failed exact re-verification")
            return certificate
    certificate = FeasibilityCertificate(system, multipliers=multipliers)
    if not certificate.verify():
        raise PolyentError("Farkas certificate failed exact re-verification")
    return certificate


def _copy_label(label, taken):
    candidate = label + "'"
    while candidate in taken:
        candidate += "'"
    return candidate


def build_copy_system(v, B, C):
    """Copy-lemma system for adjoining a copy C' of C over B.

    Variables are the values of the extension on every subset of E + C'. The
    rows fix the extension to <v> on E, make B + C' a copy of B + C, make C'
    conditionally independent of E - C' given B, and add every elemental
    Shannon inequality on E + C'.
    """
    if not v.is_exact:
        raise CopySystemError("Copy systems need an exact vector; rationalize it first")
    b_mask, c_mask = v.mask(B), v.mask(C)
    if b_mask & c_mask:
        raise CopySystemError("B and C overlap in {}".format(v.ground.format(b_mask & c_mask)))
    n = v.n
    c_labels = v.ground.subset(c_mask)
    copies = []
    for label in c_labels:
        copies.append(_copy_label(label, set(v.labels) | set(copies)))
    extended = GroundSet(v.labels + tuple(copies))
    m = len(extended)
    system = LinearInequalitySystem([extended.format(mask) for mask in range(1 << m)])
    values = v.values()

    for mask in range(1 << n):
        system.add({mask: 1}, '=', values[mask], name="fix {}".format(extended.format(mask)))

    # bit positions of c and of its copy
    pairs = [(v.ground.index(c), n + k) for k, c in enumerate(c_labels)]
    for mask in range(1 << n):
        if mask & ~(b_mask | c_mask) or not mask & c_mask:
            continue
        image = mask & b_mask
        for c_pos, copy_pos in pairs:
            if mask & (1 << c_pos):
                image |= 1 << copy_pos
        system.add({image: 1}, '=', values[mask], name="copy {}".format(extended.format(image)))

    copy_mask = ((1 << m) - 1) ^ ((1 << n) - 1)
    for S in range(1 << m):
        if S & b_mask:
            continue
        in_copy, outside = S & copy_mask, S & ~copy_mask
        if not in_copy or not outside:
            continue
        row = {}
        for mask, c in ((S | b_mask, 1), (in_copy | b_mask, -1), (outside | b_mask, -1), (b_mask, 1)):
            row[mask] = row.get(mask, 0) + c
        system.add(row, '=', 0, name="indep {}".format(extended.format(S | b_mask)))

    for inequality in _elemental(m):
        system.add(inequality.coefficients, '>=', 0, name=inequality.name)
    log.debug("Copy system for B={} C={}: {} variables, {} rows".format(
        v.ground.format(b_mask), v.ground.format(c_mask), len(system.variables), len(system)))
    return system


def default_copy_schedule(ground, size=None):
    """All (B, C) with B, C disjoint, C nonempty and |B| + |C| <= size, in
    lexicographic order of their index tuples"""
    ground = ground if isinstance(ground, GroundSet) else GroundSet(ground)
    size = conf.copy_schedule_size if size is None else size
    n = len(ground)
    pairs = []
    for nb in range(0, size):
        for b in itertools.combinations(range(n), nb):
            others = [i for i in range(n) if i not in b]
            for nc in range(1, size - nb + 1):
                for c in itertools.combinations(others, nc):
                    pairs.append((b, c))
    pairs.sort()
    return [(tuple(ground.labels[i] for i in b), tuple(ground.labels[i] for i in c)) for b, c in pairs]


class CopyRefutation:
    """Outcome of copy_lp_refute"""

    refuted = False

    def __init__(self, vector, rounded=False):
        self.vector = vector
        self.rounded = rounded

    def __bool__(self):
        return self.refuted


class Refuted(CopyRefutation):
    """The copy system for <pair> is infeasible, so the vector is not almost
    entropic. With rounded set this holds for the rationalized vector."""

    refuted = True

    def __init__(self, vector, pair, certificate, rounded=False):
        super().__init__(vector, rounded)
        self.pair = pair
        self.certificate = certificate

    def lines(self):
        head = "REFUTED"
        if self.rounded:
            head += " (at rounding radius 1/{})".format(self.vector.meta.get('rationalized'))
        if self.pair is None:
            lines = [head, "not in the Shannon cone"]
        else:
            B, C = self.pair
            lines = [head, "B={} C={}".format(format_subset(B), format_subset(C))]
        return lines + self.certificate.to_text().splitlines()

    def __repr__(self):
        return "<Refuted pair={}>".format(self.pair)


class Unknown(CopyRefutation):
    def __init__(self, vector, tried, rounded=False):
        super().__init__(vector, rounded)
        self.tried = tried

    def lines(self):
        return ["UNKNOWN", "{} copy systems feasible".format(len(self.tried))]

    def __repr__(self):
        return "<Unknown tried={}>".format(len(self.tried))


def _refuted(w, pair, certificate, rounded):
    if rounded:
        warnings.warn("Refuted at the rounding radius 1/{}; the numeric input itself may be almost "
                      "entropic".format(conf.rational_max_denominator), PolyentWarning)
    return Refuted(w, pair, certificate, rounded=rounded)


def copy_lp_refute(v, schedule=None):
    """Tries each (B, C) of <schedule> in order and returns Refuted at the
    first infeasible copy system, Unknown otherwise. Numeric vectors are
    rationalized first and the result is flagged as rounded."""
    rounded = not v.is_exact
    w = v.to_exact(conf.rational_max_denominator) if rounded else v
    if rounded:
        log.info("Rationalized numeric vector to denominators <= {}".format(conf.rational_max_denominator))
    inside, violated = in_shannon_cone(w)
    if not inside:
        log.info("Vector is outside the Shannon cone ({})".format(violated.name if violated else 'not normalized'))
        system = build_copy_system(w, (), ())
        system.add({0: 1}, '=', 0, name="empty set")
        certificate = lp_feasible(system)
        return _refuted(w, None, certificate, rounded)
    if schedule is None:
        schedule = default_copy_schedule(w.ground)
    tried = []
    for B, C in schedule:
        B, C = w.ground.subset(w.mask(B)), w.ground.subset(w.mask(C))
        certificate = lp_feasible(build_copy_system(w, B, C))
        if not certificate.feasible:
            log.info("Copy of {} over {} is infeasible".format(format_subset(C), format_subset(B)))
            return _refuted(w, (B, C), certificate, rounded)
        tried.append((B, C))
    return Unknown(w, tried, rounded=rounded)


def vamos_grouped_vector():
    """The Vamos matroid with each pair of elements merged into one variable:
    h(i) = 2, h(ab) = 4, every other pair 3, and 4 on larger sets"""
    w = grouped(vamos_matroid(), {x: [x + '1', x + '2'] for x in 'abcd'})
    return RankVector(w.ground, w.numerators, denominator=w.denominator, meta={'source': 'vamos-grouped'})
