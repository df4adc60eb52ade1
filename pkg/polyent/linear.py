"""Linear polymatroids over prime fields GF(p)"""
import itertools
import warnings
from fractions import Fraction

import numpy as np
from astropy import log

from .config import conf
from .desargues import DesarguesConfig, check_desargues_hypotheses
from .entropy import FinProbSpace, RandomVariableFamily, entropy_vector
from .setfn import GroundSet, RankVector, restriction, _closure_masks
from .utils import GroundSetError, LinearRealizationError, PolyentWarning, read_realization

__all__ = ['gf_rref', 'gf_rank', 'gf_nullspace', 'LinearRealization', 'linear_rank_vector',
           'entropic_from_linear', 'projective_plane_points', 'projective_plane_lines',
           'projective_plane_matroid', 'almost_multilinear_check', 'random_realization',
           'intersection_point', 'random_desargues_configuration']


def _is_prime(p):
    if p < 2:
        return False
    return all(p % k for k in range(2, int(p ** 0.5) + 1))


def gf_rref(matrix, p):
    """Reduced row echelon form over GF(p). Returns (nonzero rows, pivot columns)."""
    m = np.atleast_2d(np.array(matrix, dtype=np.int64)) % p
    n_rows, n_cols = m.shape
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if len(nz) == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), p - 2, p)) % p
        others = np.flatnonzero(m[:, c])
        others = others[others != r]
        if len(others):
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def gf_rank(matrix, p):
    return len(gf_rref(matrix, p)[1])


def gf_nullspace(matrix, p):
    """Basis (as rows) of {x | matrix @ x = 0} over GF(p)"""
    reduced, pivots = gf_rref(matrix, p)
    n_cols = np.asarray(matrix).shape[1]
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        x = np.zeros(n_cols, dtype=np.int64)
        x[f] = 1
        for i, c in enumerate(pivots):
            x[c] = (-reduced[i, f]) % p
        basis.append(x)
    return np.array(basis, dtype=np.int64).reshape(len(basis), n_cols)


class LinearRealization:
    """Linear maps T_e : GF(p)^dim -> W_e, one matrix (rows x dim) per element"""

    def __init__(self, p, dim, maps):
        if not _is_prime(p) or p > conf.max_prime:
            raise LinearRealizationError("Field size must be a prime <= {}, got {}".format(conf.max_prime, p))
        if not 1 <= dim <= conf.max_linear_dim:
            raise LinearRealizationError("Dimension must be in 1..{}, got {}".format(conf.max_linear_dim, dim))
        maps = list(maps.items()) if isinstance(maps, dict) else list(maps)
        if len(maps) > conf.max_linear_elements:
            raise LinearRealizationError("At most {} elements, got {}".format(conf.max_linear_elements, len(maps)))
        self.p = p
        self.dim = dim
        self.maps = {}
        for label, rows in maps:
            matrix = np.array(rows, dtype=np.int64)
            if matrix.size == 0:
                matrix = np.zeros((0, dim), dtype=np.int64)
            if matrix.ndim != 2 or matrix.shape[1] != dim:
                raise LinearRealizationError("Map {} must be a matrix with {} columns".format(label, dim))
            self.maps[str(label)] = matrix % p
        try:
            self.ground = GroundSet(self.maps)
        except GroundSetError as e:
            raise LinearRealizationError(str(e))

    @classmethod
    def read(cls, source):
        p, dim, maps = read_realization(source)
        for label, rows in maps:
            if any(len(row) != dim for row in rows):
                raise LinearRealizationError("Map {} must have rows of length {}".format(label, dim))
        return cls(p, dim, maps)

    def to_text(self):
        lines = ["p: {}".format(self.p), "dim: {}".format(self.dim)]
        for label, matrix in self.maps.items():
            lines.append("map {}:".format(label))
            lines += [" ".join(str(int(x)) for x in row) for row in matrix]
        return "\n".join(lines) + "\n"

    @property
    def labels(self):
        return self.ground.labels

    def stacked(self, S):
        rows = [self.maps[label] for label in self.ground.subset(self.ground.mask(S))]
        return np.vstack(rows) if rows else np.zeros((0, self.dim), np.int64)

    def restricted(self, labels):
        labels = [label for label in self.labels if label in set(labels)]
        return LinearRealization(self.p, self.dim, [(label, self.maps[label]) for label in labels])

    def multilinear(self, c):
        """c-fold realization: every T_e replaced by T_e (x) I_c"""
        eye = np.eye(c, dtype=np.int64)
        return LinearRealization(self.p, self.dim * c, [(label, np.kron(m, eye)) for label, m in self.maps.items()])

    def __repr__(self):
        return "<LinearRealization GF({})^{} ({})>".format(self.p, self.dim, ", ".join(self.labels))


def linear_rank_vector(r):
    """f(S) = rank of the stacked maps of S over GF(p). Echelon bases are
    built up one element at a time, indexed by mask."""
    n = len(r.labels)
    mats = [r.maps[label] for label in r.labels]
    bases = [np.zeros((0, r.dim), dtype=np.int64)]
    ranks = np.zeros(1 << n, dtype=np.int64)
    for mask in range(1, 1 << n):
        top = mask.bit_length() - 1
        basis, pivots = gf_rref(np.vstack([bases[mask ^ (1 << top)], mats[top]]), r.p)
        bases.append(basis)
        ranks[mask] = len(pivots)
    return RankVector(r.ground, ranks, denominator=1, meta={'source': 'linear', 'p': r.p})


def entropic_from_linear(r):
    """Entropy vector of X_e = T_e v for v uniform on GF(p)^dim; equals
    log2(p) times the rank vector"""
    size = r.p ** r.dim
    if size > conf.max_sample_space:
        raise LinearRealizationError("Sample space {}^{} exceeds the cap of {}".format(r.p, r.dim, conf.max_sample_space))
    vectors = np.array(list(itertools.product(range(r.p), repeat=r.dim)), dtype=np.int64).T
    columns = []
    for label in r.labels:
        image = (r.maps[label] @ vectors) % r.p
        weights = r.p ** np.arange(image.shape[0], dtype=np.int64)
        columns.append((weights @ image).tolist() if image.shape[0] else [0] * size)
    family = RandomVariableFamily.from_columns(list(r.labels), columns)
    log.debug("Sampling {} vectors for an entropic realization".format(size))
    return entropy_vector(FinProbSpace.uniform(size), family)


def projective_plane_points(q):
    """Points of PG(2, q) as normalized vectors (first nonzero coordinate 1)"""
    return [vec for vec in itertools.product(range(q), repeat=3)
            if any(vec) and vec[next(i for i, x in enumerate(vec) if x)] == 1]


def projective_plane_lines(q):
    """Lines of PG(2, q) as frozensets of point labels p0, p1, ..."""
    points = projective_plane_points(q)
    return [frozenset("p{}".format(k) for k, pt in enumerate(points) if sum(a * b for a, b in zip(line, pt)) % q == 0)
            for line in points]


def projective_plane_matroid(q):
    """Rank 1 on points, 2 on collinear sets of two or more points, 3 otherwise"""
    if q not in (2, 3):
        raise LinearRealizationError("Projective planes are built for q in (2, 3); q={} exceeds the ground set cap".format(q))
    points = projective_plane_points(q)
    realization = LinearRealization(q, 3, [("p{}".format(k), [pt]) for k, pt in enumerate(points)])
    v = linear_rank_vector(realization)
    v.meta['source'] = 'projective'
    return v


def almost_multilinear_check(f, fprime, c, eps):
    """max over S of |f(S) - f'(S) / c| < eps, evaluated exactly on exact inputs"""
    if set(f.labels) != set(fprime.labels):
        raise GroundSetError("Vectors live on different ground sets")
    if fprime.meta.get('source') != 'linear':
        warnings.warn("f' does not come from a linear realization", PolyentWarning)
    if fprime.labels != f.labels:
        fprime = fprime.reordered(f.labels)
    if c <= 0:
        raise LinearRealizationError("c must be a positive integer")
    if f.is_exact and fprime.is_exact:
        eps = Fraction(eps)
        worst = max(abs(a - b / c) for a, b in zip(f.values(), fprime.values()))
    else:
        worst = float(np.max(np.abs(f.as_array() - fprime.as_array() / c)))
        eps = float(eps)
    return worst < eps


def random_realization(rng, p, dim, n, rows=1):
    labels = ["e{}".format(i + 1) for i in range(n)]
    return LinearRealization(p, dim, [(label, rng.integers(0, p, size=(rows, dim))) for label in labels])


def intersection_point(r, line1, line2):
    """Vector spanning the meet of the projective lines spanned by two pairs
    of elements. Raises LinearRealizationError unless they meet in a point."""
    a = np.vstack([r.maps[x] for x in line1])
    b = np.vstack([r.maps[x] for x in line2])
    if gf_rank(a, r.p) != 2 or gf_rank(b, r.p) != 2:
        raise LinearRealizationError("Both pairs must span lines")
    kernel = gf_nullspace(np.vstack([a, -b]).T, r.p)
    if len(kernel) != 1:
        raise LinearRealizationError("Lines do not meet in a single point")
    point = (kernel[0][:2] @ a) % r.p
    return point.reshape(1, r.dim)


_DESARGUES_LABELS = ['O', 'a1', 'a2', 'a3', 'b1', 'b2', 'b3', 'x1', 'x2', 'x3']


def _flat_generic(full, n9):
    """True when x3 lies in the span of a subset of the first nine points only
    when the closure of that subset contains a1a2, b1b2 or x1x2"""
    d = full.numerators
    v = restriction(full, full.labels[:n9])
    cl = _closure_masks(v.numerators, 0, n9)
    index = {label: i for i, label in enumerate(v.labels)}
    lines = [(1 << index[p]) | (1 << index[q]) for p, q in (('a1', 'a2'), ('b1', 'b2'), ('x1', 'x2'))]
    x3 = 1 << n9
    masks = np.arange(1 << n9, dtype=np.int64)
    in_span = d[masks | x3] == d[masks]
    expected = np.zeros(len(masks), dtype=bool)
    for line in lines:
        expected |= (cl & line) == line
    return bool(np.all(in_span == expected))


def random_desargues_configuration(p, rng, generic=False, max_tries=1000):
    """Seeded two-triangle configuration in GF(p)^4 with its true third
    intersection point x3 = a1a2 ^ b1b2.

    Triangles a and b are in perspective from O (b_i = l_i O + m_i a_i);
    x1 = a2a3 ^ b2b3 and x2 = a1a3 ^ b1b3. Draws are rejected until the nine
    points satisfy the Desargues hypotheses and x3 is distinct from them.
    With <generic> set, draws are also rejected unless x3 lies in no span of
    the nine points beyond those the incidences force. Returns
    (realization on ten points, DesarguesConfig).
    """
    cfg = DesarguesConfig('O', ('a1', 'a2', 'a3'), ('b1', 'b2', 'b3'), 'x1', 'x2')
    for attempt in range(max_tries):
        base = rng.integers(0, p, size=(4, 4))
        if gf_rank(base, p) != 4:
            continue
        O, a = base[0], base[1:]
        lam = rng.integers(1, p, size=3)
        mu = rng.integers(1, p, size=3)
        b = (lam[:, None] * O + mu[:, None] * a) % p
        points = {'O': O, 'a1': a[0], 'a2': a[1], 'a3': a[2], 'b1': b[0], 'b2': b[1], 'b3': b[2]}
        r = LinearRealization(p, 4, [(label, [vec]) for label, vec in points.items()])
        try:
            x1 = intersection_point(r, ('a2', 'a3'), ('b2', 'b3'))
            x2 = intersection_point(r, ('a1', 'a3'), ('b1', 'b3'))
            x3 = intersection_point(r, ('a1', 'a2'), ('b1', 'b2'))
        except LinearRealizationError:
            continue
        maps = [(label, [vec]) for label, vec in points.items()] + [('x1', x1), ('x2', x2), ('x3', x3)]
        r = LinearRealization(p, 4, maps)
        full = linear_rank_vector(r)
        if not check_desargues_hypotheses(restriction(full, _DESARGUES_LABELS[:9]), cfg).ok:
            continue
        if any(full(x, 'x3') != 2 for x in _DESARGUES_LABELS[:9]):
            continue
        if generic and not _flat_generic(full, 9):
            continue
        log.debug("Desargues configuration over GF({}) after {} draws".format(p, attempt + 1))
        return r, cfg
    raise LinearRealizationError("No configuration found in {} draws".format(max_tries))
