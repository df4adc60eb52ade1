import itertools

from astropy import log

from .pdg import PdgLayout
from .setfn import RankVector, is_matroid, is_polymatroid, modular_cut_extension
from .utils import AxiomViolated, ConclusionViolated, GroundSetError, HypothesisError, PdgError, \
    PremiseError, Report

__all__ = ['ThreeLineConfig', 'DesarguesConfig', 'DesarguesReport', 'three_line_base_matroid',
           'three_line_extended_matroid', 'in_perspective', 'check_desargues_hypotheses', 'check_desargues_conclusion',
           'extend_by_lines', 'adjoin_intersection_point', 'check_further_clause', 'pdg_desargues_check']


def _rank_row(report, v, labels, expected):
    labels = list(labels)
    return report.add("f({}) = {}".format(",".join(labels), expected), expected, v(*labels))


class ThreeLineConfig:
    """Three lines a, b, c given by two points each, pairwise coplanar, plus
    an optional common point d"""

    def __init__(self, a=('a1', 'a2'), b=('b1', 'b2'), c=('c1', 'c2'), d='d'):
        self.lines = {'a': tuple(a), 'b': tuple(b), 'c': tuple(c)}
        self.d = d
        labels = self.labels + ([d] if d is not None else [])
        if len(set(labels)) != len(labels) or any(len(line) != 2 for line in self.lines.values()):
            raise GroundSetError("Three-line configuration needs six distinct points (and a distinct d)")

    @property
    def labels(self):
        return [p for line in self.lines.values() for p in line]

    def plane_circuits(self):
        return [self.lines[x] + self.lines[y] for x, y in itertools.combinations('abc', 2)]

    def point_circuits(self):
        return [line + (self.d,) for line in self.lines.values()]


def three_line_base_matroid(cfg=None):
    """Rank-4 matroid on six points: three lines, each two of them coplanar"""
    cfg = cfg or ThreeLineConfig()
    v = RankVector.from_circuits(cfg.labels, cfg.plane_circuits())
    v.meta['source'] = 'three-line'
    return v


def three_line_extended_matroid(cfg=None):
    """The base matroid with d added on all three lines"""
    cfg = cfg or ThreeLineConfig()
    v = RankVector.from_circuits(cfg.labels + [cfg.d], cfg.plane_circuits() + cfg.point_circuits())
    v.meta['source'] = 'three-line'
    return v


class DesarguesConfig:
    """Two triangles a, b in perspective from O, with x1 on a2a3 and b2b3
    and x2 on a1a3 and b1b3"""

    def __init__(self, O, a, b, x1, x2):
        self.O = O
        self.a = tuple(a)
        self.b = tuple(b)
        self.x1 = x1
        self.x2 = x2
        if len(self.a) != 3 or len(self.b) != 3:
            raise GroundSetError("Triangles need three points each")
        if len(set(self.labels)) != 9:
            raise GroundSetError("Desargues configuration needs nine distinct points")

    @property
    def labels(self):
        return [self.O, *self.a, *self.b, self.x1, self.x2]

    def __repr__(self):
        return "<DesarguesConfig O={} a={} b={} x1={} x2={}>".format(self.O, self.a, self.b, self.x1, self.x2)


class DesarguesReport(Report):
    """Report with separate verdicts for hypotheses, premise and conclusion"""

    def __init__(self, title=None):
        super().__init__(title)
        self.hypotheses = None
        self.premise = None
        self.conclusion = None

    @property
    def holds(self):
        """False only for an instance whose hypotheses and premise hold but
        whose conclusion fails"""
        if not self.hypotheses or not self.premise:
            return True
        return bool(self.conclusion)


def in_perspective(v, A, B, O):
    return all(v(O, a, b) == 2 for a, b in zip(A, B))


def check_desargues_hypotheses(v, cfg):
    report = DesarguesReport("desargues hypotheses")
    points = cfg.labels
    for p in points:
        _rank_row(report, v, [p], 1)
    for p, q in itertools.combinations(points, 2):
        _rank_row(report, v, [p, q], 2)
    for a, b in zip(cfg.a, cfg.b):
        _rank_row(report, v, [cfg.O, a, b], 2)
    a1, a2, a3 = cfg.a
    b1, b2, b3 = cfg.b
    for triple in ([a2, a3, cfg.x1], [b2, b3, cfg.x1], [a1, a3, cfg.x2], [b1, b3, cfg.x2]):
        _rank_row(report, v, triple, 2)
    _rank_row(report, v, [cfg.O, a1, a2, a3], 4)
    report.hypotheses = report.ok
    return report


def check_desargues_conclusion(fhat, cfg, x3):
    """Conclusion rows for an extension <fhat> with the new point <x3>"""
    a1, a2, _ = cfg.a
    b1, b2, _ = cfg.b
    report = DesarguesReport("desargues conclusion")
    _rank_row(report, fhat, [x3], 1)
    _rank_row(report, fhat, [a1, a2, x3], 2)
    _rank_row(report, fhat, [b1, b2, x3], 2)
    _rank_row(report, fhat, [a1, x3], 2)
    _rank_row(report, fhat, [b1, x3], 2)
    _rank_row(report, fhat, [cfg.x1, cfg.x2, x3], 2)
    report.conclusion = report.ok
    return report


def extend_by_lines(v, line1, line2, label):
    """Adds <label> as the intersection point of two coplanar lines, through
    the modular cut the two lines generate"""
    for line in (line1, line2):
        if v(*line) != 2:
            raise PremiseError("{} does not span a line".format(",".join(line)))
    if v(*line1, *line2) != 3:
        raise PremiseError("Lines {} and {} are not coplanar".format(",".join(line1), ",".join(line2)))
    return modular_cut_extension(v, [line1, line2], label)


def _fresh_label(v, label):
    while label in v.ground:
        label += "'"
    return label


def adjoin_intersection_point(v, cfg, label='x3'):
    """Extends the matroid <v> by the point x3 where a1a2 meets b1b2.
    Returns (extension, x3 label); the conclusion rows are verified."""
    hypotheses = check_desargues_hypotheses(v, cfg)
    if not hypotheses.ok:
        raise HypothesisError("Desargues hypotheses fail: " + hypotheses.failures[0].line(), report=hypotheses)
    if not is_matroid(v):
        raise HypothesisError("Intersection points are adjoined to matroids only")
    label = _fresh_label(v, label)
    a1, a2, _ = cfg.a
    b1, b2, _ = cfg.b
    fhat = extend_by_lines(v, (a1, a2), (b1, b2), label)
    axioms = is_polymatroid(fhat)
    if not axioms.is_polymatroid:
        raise AxiomViolated("Extension is not a polymatroid: {}".format(axioms.first_violation))
    report = check_desargues_conclusion(fhat, cfg, label)
    if not report.ok:
        raise ConclusionViolated("Conclusion fails: " + report.failures[0].line(), report=report)
    log.debug("Adjoined {} to {} elements".format(label, v.n))
    return fhat, label


def check_further_clause(fhat, cfg, x3, xt3):
    """For a point xt3 of the original set lying on a1a2 and b1b2: xt3 and x3
    are parallel and xt3 lies on x1x2. Raises PremiseError when xt3 is not
    such a point."""
    a1, a2, _ = cfg.a
    b1, b2, _ = cfg.b
    premises = Report("further premises")
    _rank_row(premises, fhat, [a1, a2, xt3], 2)
    _rank_row(premises, fhat, [b1, b2, xt3], 2)
    _rank_row(premises, fhat, [xt3], 1)
    _rank_row(premises, fhat, [xt3, a1], 2)
    _rank_row(premises, fhat, [xt3, b1], 2)
    if not premises.ok:
        raise PremiseError("Premise fails: " + premises.failures[0].line())
    return fhat(x3, xt3) == 1 and fhat(cfg.x1, cfg.x2, xt3) == 2


def pdg_desargues_check(pdg, s, u, w, t, vgen, x=None, perm=(1, 2, 3, 4)):
    """Desargues step inside a rank-4 PDG.

    With (i, j, k, m) = perm, the triangles (b_k, b_i, b_j) and
    (w_km, s_im, u_jm) are in perspective from b_m. The hypotheses are
    f(s_im, t_ij, u_jm) = 2 and f(u_jm, v_jk, w_km) = 2; given x with
    f(w_km, s_im, x_ki) = 2 the conclusion is f(t_ij, v_jk, x_ki) = 2.
    """
    if pdg.r != 4 or sorted(perm) != [1, 2, 3, 4]:
        raise PdgError("Needs a rank-4 PDG and a permutation of 1..4")
    i, j, k, m = perm
    picks = {'s_im': (s, i, m), 'u_jm': (u, j, m), 'w_km': (w, k, m), 't_ij': (t, i, j), 'v_jk': (vgen, j, k)}
    if x is not None:
        picks['x_ki'] = (x, k, i)
    missing = [PdgLayout.label(*p) for p in picks.values() if not pdg.layout.has(*p)]
    if missing:
        raise PdgError("Missing elements: {}".format(", ".join(missing)))
    el = {key: pdg.element(*p) for key, p in picks.items()}
    f = pdg.rank_vector
    b = {idx: "b{}".format(idx) for idx in perm}

    report = DesarguesReport("pdg desargues {}".format("".join(map(str, perm))))
    ok1 = _rank_row(report, f, [el['s_im'], el['t_ij'], el['u_jm']], 2)
    ok2 = _rank_row(report, f, [el['u_jm'], el['v_jk'], el['w_km']], 2)
    report.hypotheses = ok1 and ok2
    cfg = DesarguesConfig(b[m], (b[k], b[i], b[j]), (el['w_km'], el['s_im'], el['u_jm']), el['t_ij'], el['v_jk'])
    report.extend(check_desargues_hypotheses(f, cfg))
    if x is not None:
        report.premise = _rank_row(report, f, [el['w_km'], el['s_im'], el['x_ki']], 2)
        if report.premise:
            report.conclusion = _rank_row(report, f, [el['t_ij'], el['v_jk'], el['x_ki']], 2)
    return report
