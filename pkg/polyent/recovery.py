"""Recovering a group from a product-closed rank-4 PDG, the rank-4 lift of a
Dowling geometry and the quotient/nontriviality check built on them."""
import itertools

import numpy as np
from astropy import log

from .groups import GroupTable
from .pdg import build_dowling_pdg
from .setfn import restriction
from .utils import GroupAxiomViolation, NotProductClosed, PdgError, PresentationError, Report, \
    WellDefinednessViolation, format_subset, subset_index

__all__ = ['geometric_products', 'RelatorCheck', 'find_relator_from_triple', 'ParallelismClasses',
           'parallelism_classes', 'is_product_closed', 'recover_group', 'check_copy_semantics',
           'LiftingReport', 'verify_lifting', 'lift_rank3_to_rank4', 'NontrivialityVerdict',
           'nontriviality_pipeline']


def _require_rank4(pdg):
    if pdg.r != 4:
        raise PdgError("Needs a rank-4 PDG, got rank {}".format(pdg.r))
    if not pdg.coherent:
        raise PdgError("Needs a coherent PDG")


def geometric_products(pdg, s, sp):
    """All t with (s, s', t^-1) a relator"""
    _require_rank4(pdg)
    relators = pdg.relators()
    return frozenset(t for t in pdg.gens if (s, sp, pdg.gens.inv(t)) in relators)


class RelatorCheck:
    def __init__(self, triple, first, good, bad):
        self.triple = triple
        self.first = first
        self.good = good
        self.bad = bad

    @property
    def holds(self):
        return self.first and not self.bad

    @property
    def anomalous(self):
        """Some index triples pass and others fail"""
        return bool(self.good) and bool(self.bad)

    def __bool__(self):
        return self.holds

    def __repr__(self):
        return "<RelatorCheck {} holds={} anomalous={}>".format(self.triple, self.holds, self.anomalous)


def find_relator_from_triple(pdg, s, sp, spp, p, q, r):
    """Tests f(s_pq, s'_qr, s''_rp) = 2 and then the same rank condition on
    every other index triple"""
    _require_rank4(pdg)
    if len({p, q, r}) != 3:
        raise PdgError("Indices must be distinct")

    def good(i, j, k):
        return pdg.f(pdg.element(s, i, j), pdg.element(sp, j, k), pdg.element(spp, k, i)) == 2

    results = {triple: good(*triple) for triple in itertools.permutations(range(1, 5), 3)}
    return RelatorCheck((s, sp, spp), results[(p, q, r)],
                        [t for t, ok in results.items() if ok], [t for t, ok in results.items() if not ok])


class ParallelismClasses:
    """Partition of the generators into parallel classes, each listed in
    generator order"""

    def __init__(self, classes, gens):
        self.classes = [tuple(c) for c in classes]
        self.gens = gens
        self._class = {}
        for c in self.classes:
            for s in c:
                self._class[s] = c

    def class_of(self, s):
        return self._class[s]

    def representative(self, s):
        return self._class[s][0]

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)

    def __repr__(self):
        return "<ParallelismClasses {}>".format(" ".join(format_subset(c) for c in self.classes))


def parallelism_classes(pdg):
    """t ~ t' iff f(t_12, t'_12) = 1; the same relation must hold on every
    ordered index pair"""
    _require_rank4(pdg)
    gens = list(pdg.gens)

    def parallel(t, tp, i, j):
        return pdg.f(pdg.element(t, i, j), pdg.element(tp, i, j)) == 1

    relation = {(t, tp): parallel(t, tp, 1, 2) for t in gens for tp in gens}
    for i, j in itertools.permutations(range(1, 5), 2):
        for (t, tp), related in relation.items():
            if parallel(t, tp, i, j) != related:
                raise PdgError("Parallelism of {} and {} differs between (1,2) and ({},{})".format(t, tp, i, j))
    classes = []
    seen = set()
    for t in gens:
        if t in seen:
            continue
        members = [tp for tp in gens if relation[(t, tp)]]
        for tp in members:
            if [u for u in gens if relation[(tp, u)]] != members:
                raise PdgError("Parallelism is not an equivalence relation at {}".format(tp))
        seen.update(members)
        classes.append(members)
    return ParallelismClasses(classes, pdg.gens)


def is_product_closed(pdg):
    return all(geometric_products(pdg, s, sp) for s in pdg.gens for sp in pdg.gens)


def recover_group(pdg):
    """The group of parallelism classes under the geometric product"""
    _require_rank4(pdg)
    classes = parallelism_classes(pdg)
    gens = pdg.gens
    table = {}
    for s, sp in itertools.product(gens, repeat=2):
        products = geometric_products(pdg, s, sp)
        if not products:
            raise NotProductClosed("{} * {} has no geometric product".format(s, sp), pair=(s, sp))
        product_classes = {classes.representative(t) for t in products}
        if len(product_classes) > 1:
            raise WellDefinednessViolation("Products of {} and {} fall in several classes: {}".format(
                s, sp, sorted(product_classes)))
        key = (classes.representative(s), classes.representative(sp))
        value = product_classes.pop()
        if table.setdefault(key, value) != value:
            raise WellDefinednessViolation("Product of classes [{}] and [{}] depends on representatives".format(*key))
    elements = [c[0] for c in classes]
    rows = [[table[(a, b)] for b in elements] for a in elements]
    recovered = GroupTable(elements, rows, name="recovered")
    if recovered.identity != classes.representative(gens.identity):
        raise GroupAxiomViolation("Identity of the recovered group is not [{}]".format(gens.identity))
    for s in gens:
        if recovered.inv(classes.representative(s)) != classes.representative(gens.inv(s)):
            raise GroupAxiomViolation("Inverse of [{}] is not [{}]".format(s, gens.inv(s)))
    log.debug("Recovered a group of order {} from {} generators".format(recovered.order, len(gens)))
    return recovered


def check_copy_semantics(v, vt, B, C, copy_map):
    """Checks that <vt> extends <v> by a copy C' = copy_map(C) of C over B:
    (1) vt agrees with v on E, (2) B + C' is isomorphic to B + C and (3) C' is
    independent of E - C' given B."""
    report = Report("copy semantics")
    b_labels = v.ground.subset(v.mask(B))
    c_labels = v.ground.subset(v.mask(C))
    if set(copy_map) != set(c_labels):
        raise PdgError("Copy map must be defined on exactly C")
    if v.is_exact and vt.is_exact:
        sv, d, tol = v.numerators * vt.denominator, vt.numerators * v.denominator, 0
    else:
        sv, d, tol = v.as_array(), vt.as_array(), max(v.tolerance, vt.tolerance)
    scaled = {id(v): sv, id(vt): d}

    def values(w, positions):
        return scaled[id(w)][subset_index(positions)]

    base = sv
    ext = values(vt, [vt.ground.index(label) for label in v.labels])
    bad = np.flatnonzero(np.abs(base - ext) > tol)
    report.add("(1) extension agrees on E" + (" at {}".format(v.ground.format(int(bad[0]))) if len(bad) else ""),
               0, len(bad))

    domain = list(b_labels) + list(c_labels)
    image = list(b_labels) + [copy_map[c] for c in c_labels]
    src = values(v, [v.ground.index(label) for label in domain])
    dst = values(vt, [vt.ground.index(label) for label in image])
    bad = np.flatnonzero(np.abs(src - dst) > tol)
    witness = ""
    if len(bad):
        witness = " at {}".format(format_subset([domain[i] for i in range(len(domain)) if int(bad[0]) >> i & 1]))
    report.add("(2) B+C' is a copy of B+C" + witness, 0, len(bad))

    b_mask = vt.mask(b_labels)
    copy_mask = vt.mask([copy_map[c] for c in c_labels])
    allm = np.arange(len(d), dtype=np.int64)
    lhs = d[allm | b_mask] + d[b_mask]
    rhs = d[(allm & copy_mask) | b_mask] + d[(allm & ~copy_mask) | b_mask]
    bad = np.flatnonzero(np.abs(lhs - rhs) > tol)
    report.add("(3) C' independent of E-C' over B" + (" at {}".format(vt.ground.format(int(bad[0]))) if len(bad) else ""),
               0, len(bad))
    return report


class LiftingReport(Report):
    def __init__(self, title=None, pdg=None):
        super().__init__(title)
        self.pdg = pdg


def _row(report, f, labels, expected):
    report.add("f({}) = {}".format(",".join(labels), expected), expected, f(*labels))


def verify_lifting(g):
    """Builds the rank-4 Dowling PDG of <g> and checks every rank condition
    of its construction from the rank-3 one: the copy step (index 3 copied
    to 4 over the line {1,2}), the rows adjoining each s_34, nondegeneracy
    of b_4 and coherence on the triples (1,3,4), (4,1,3), (4,2,3), (3,4,2)."""
    pdg3 = build_dowling_pdg(g, 3)
    pdg4 = build_dowling_pdg(g, 4)
    report = LiftingReport("lifting {}".format(g.name), pdg=pdg4)
    lay4 = pdg4.layout
    f = pdg4.f
    f3 = pdg3.f
    gens = pdg4.gens
    e = gens.identity

    report.add("restriction to 1,2,3 equals the rank-3 PDG", True,
               pdg4.restrict_indices([1, 2, 3]).rank_vector == pdg3.rank_vector)

    B = ['b1', 'b2'] + pdg3.layout.block(1, 2)
    C = [label for label in pdg3.labels if label not in B]
    copy_map = {'b3': 'b4'}
    for s in gens:
        for i in (1, 2):
            copy_map[pdg3.element(s, i, 3)] = lay4.element(s, i, 4)
    extended = restriction(pdg4.rank_vector, list(pdg3.labels) + list(copy_map.values()))
    report.extend(check_copy_semantics(pdg3.rank_vector, extended, B, C, copy_map))

    for s in gens:
        for i in (1, 2):
            labels4 = ['b{}'.format(i), 'b4', lay4.element(s, i, 4)]
            labels3 = ['b{}'.format(i), 'b3', pdg3.element(s, i, 3)]
            report.add("f({}) = f({}) = 2".format(",".join(labels4), ",".join(labels3)), (2, 2),
                       (f(*labels4), f3(*labels3)))
    for s in gens:
        s34 = lay4.element(s, 3, 4)
        _row(report, f, [s34], 1)
        _row(report, f, [lay4.element(s, 3, 2), lay4.element(e, 4, 2), s34], 2)
        _row(report, f, ['b3', 'b4', s34], 2)
        _row(report, f, [lay4.element(e, 3, 1), lay4.element(s, 1, 4), s34], 2)
        _row(report, f, ['b4', s34], 2)
    for i, j, k in ((1, 3, 4), (4, 1, 3), (4, 2, 3), (3, 4, 2)):
        for s in gens:
            _row(report, f, [lay4.element(s, i, j), lay4.element(gens.inv(s), j, k), lay4.element(e, k, i)], 2)
    return report


def lift_rank3_to_rank4(g):
    report = verify_lifting(g)
    if not report.ok:
        raise PdgError("Lifting check fails: " + report.failures[0].line())
    return report.pdg


class NontrivialityVerdict:
    NONTRIVIAL = 'NONTRIVIAL'
    TRIVIAL = 'TRIVIAL'
    INCONSISTENT = 'INCONSISTENT'

    def __init__(self, verdict, report):
        self.verdict = verdict
        self.report = report

    def lines(self):
        return [self.verdict] + self.report.lines()

    def __eq__(self, other):
        if isinstance(other, str):
            return self.verdict == other
        return isinstance(other, NontrivialityVerdict) and self.verdict == other.verdict

    __hash__ = None

    def __repr__(self):
        return "<NontrivialityVerdict {}>".format(self.verdict)


def nontriviality_pipeline(p, g, x, label_map=None):
    """Checks that <g> is a quotient of the presentation <p> under
    <label_map> and decides through the rank-4 Dowling PDG of g whether x maps
    to a nontrivial element"""
    gens = p.gens
    label_map = dict(label_map) if label_map is not None else {s: s for s in gens}
    missing = [s for s in gens if s not in label_map]
    if missing:
        raise PresentationError("Label map is not defined on {}".format(", ".join(missing)))
    if x not in gens:
        raise PresentationError("{!r} is not a generator".format(x))
    for s in gens:
        g.index(label_map[s])

    report = Report("nontriviality of {}".format(x))
    quotient = report.add("phi({}) = {}".format(gens.identity, g.identity), g.identity, label_map[gens.identity])
    for rel in p.relations:
        image = [label_map[s] for s in rel]
        quotient &= report.add("relation {} maps to {}".format(" ".join(rel), g.identity), g.identity, g.product(*image))
    if not quotient:
        return NontrivialityVerdict(NontrivialityVerdict.INCONSISTENT, report)

    pdg = build_dowling_pdg(g, 4)
    recovered = recover_group(pdg)
    report.add("recovered group isomorphic to {}".format(g.name), True, recovered.is_isomorphic(g))
    image = label_map[x]
    separated = pdg.f(pdg.element(image, 1, 2), pdg.element(g.identity, 1, 2)) != 1
    classes = parallelism_classes(pdg)
    distinct = classes.representative(image) != classes.representative(g.identity)
    report.add("f({0}_12, {1}_12) != 1 iff [{0}] != [{1}]".format(image, g.identity), separated, distinct)
    if not report.ok:
        return NontrivialityVerdict(NontrivialityVerdict.INCONSISTENT, report)
    verdict = NontrivialityVerdict.NONTRIVIAL if separated else NontrivialityVerdict.TRIVIAL
    return NontrivialityVerdict(verdict, report)
