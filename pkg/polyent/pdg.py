"""Partial Dowling geometries (PDGs).

A PDG of rank r has a distinguished basis b1..br and, on every coordinate line
{i, j} with i < j, one copy s_ij of each generator s. Copies with reversed
indices are named through the involution: s_ji stands for the element
(s^-1)_ij. Element labels are written "<s>_<i><j>" with i < j.
"""
import itertools

import networkx as nx
import numpy as np
from astropy import log

from .config import conf
from .groups import GroupTable
from .setfn import GroundSet, RankVector, closure, restriction
from .utils import PdgError, PresentationError, GroundSetError, InputFormatError, Report, \
    load_preset, read_presentation, read_pdg_dump, popcounts, format_subset

__all__ = ['GeneratorSet', 'Presentation', 'PdgLayout', 'Pdg', 'build_rank3_pdg',
           'build_dowling_pdg', 'validate_pdg', 'relators', 'check_acyclic_independence',
           'check_pair_independence', 'check_weak_pair_independence', 'check_flat_closure']


class GeneratorSet:
    """Generator labels with an involution and a distinguished element e"""

    def __init__(self, labels, inverse=None, identity='e'):
        self.labels = tuple(str(s) for s in labels)
        if len(set(self.labels)) != len(self.labels):
            raise PresentationError("Duplicate generator labels")
        if identity not in self.labels:
            raise PresentationError("Identity {!r} is not a generator".format(identity))
        for s in self.labels:
            if '_' in s or ' ' in s:
                raise PresentationError("Generator labels may not contain '_' or spaces: {!r}".format(s))
        self.identity = identity
        inverse = dict(inverse) if inverse else {}
        # one-sided entries s=t also give t=s
        for s, t in list(inverse.items()):
            inverse.setdefault(t, s)
        self._inverse = {s: inverse.get(s, s) for s in self.labels}
        for s, t in self._inverse.items():
            if t not in self._inverse:
                raise PresentationError("Inverse of {} is {}, which is not a generator".format(s, t))
            if self._inverse[t] != s:
                raise PresentationError("Inverse map is not an involution at {}".format(s))
        if self._inverse[identity] != identity:
            raise PresentationError("The identity must be its own inverse")

    @classmethod
    def from_group(cls, g):
        return cls(g.elements, g.inverse_map(), g.identity)

    def inv(self, s):
        try:
            return self._inverse[s]
        except KeyError:
            raise PresentationError("Unknown generator {!r}".format(s))

    def inverse_pairs(self):
        return [(s, t) for s, t in self._inverse.items() if s < t]

    def __iter__(self):
        return iter(self.labels)

    def __len__(self):
        return len(self.labels)

    def __contains__(self, s):
        return s in self._inverse

    def __eq__(self, other):
        return isinstance(other, GeneratorSet) and self.labels == other.labels \
            and self._inverse == other._inverse and self.identity == other.identity

    def __repr__(self):
        return "<GeneratorSet {} e={}>".format(" ".join(self.labels), self.identity)


def _cyclic(triple):
    s, t, u = triple
    return (u, s, t)


class Presentation:
    """A symmetric triangular presentation <S | R>: every relation has length
    3, R is closed under cyclic shifts and under inversion
    (s, s', s'') -> (s''^-1, s'^-1, s^-1), and contains (s, s^-1, e) for every s."""

    def __init__(self, gens, relations, name=None):
        self.gens = gens
        self.name = name
        for rel in relations:
            if len(rel) != 3:
                raise PresentationError("Relation {} does not have length 3".format(rel))
            for s in rel:
                if s not in gens:
                    raise PresentationError("Relation {} uses unknown generator {!r}".format(rel, s))
        self.relations = tuple(sorted({tuple(rel) for rel in relations}))
        problem = self._first_asymmetry()
        if problem is not None:
            raise PresentationError("Not symmetric triangular: {} is missing".format(problem))

    def _inverted(self, triple):
        s, t, u = triple
        return (self.gens.inv(u), self.gens.inv(t), self.gens.inv(s))

    def _first_asymmetry(self):
        rels = set(self.relations)
        for rel in self.relations:
            for image in (_cyclic(rel), self._inverted(rel)):
                if image not in rels:
                    return image
        for s in self.gens:
            if (s, self.gens.inv(s), self.gens.identity) not in rels:
                return (s, self.gens.inv(s), self.gens.identity)
        return None

    @classmethod
    def symmetric_closure(cls, gens, relations, name=None):
        """Smallest symmetric triangular presentation containing <relations>"""
        closed = set()
        todo = [tuple(rel) for rel in relations]
        todo += [(s, gens.inv(s), gens.identity) for s in gens]
        while todo:
            rel = todo.pop()
            if rel in closed:
                continue
            if len(rel) != 3:
                raise PresentationError("Relation {} does not have length 3".format(rel))
            closed.add(rel)
            s, t, u = rel
            todo.append(_cyclic(rel))
            todo.append((gens.inv(u), gens.inv(t), gens.inv(s)))
        return cls(gens, closed, name=name)

    @classmethod
    def from_preset(cls, name):
        presets = load_preset(conf.presentations_file)
        if name not in presets:
            raise PresentationError("Unknown presentation preset {!r}; known: {}".format(name, ", ".join(presets)))
        entry = presets[name]
        gens = GeneratorSet(entry['gens'], entry.get('inverse', {}), entry.get('identity', 'e'))
        return cls.symmetric_closure(gens, entry['relations'], name=name)

    @classmethod
    def from_group(cls, g):
        """All triples with product e"""
        gens = GeneratorSet.from_group(g)
        rels = [(s, t, u) for s, t, u in itertools.product(g.elements, repeat=3)
                if g.product(s, t, u) == g.identity]
        return cls(gens, rels, name=g.name)

    @classmethod
    def read(cls, source, close=False):
        labels, inverse, relations = read_presentation(source)
        identity = 'e'
        try:
            gens = GeneratorSet(labels, inverse, identity)
        except PresentationError as e:
            raise InputFormatError(str(e))
        if close:
            return cls.symmetric_closure(gens, relations)
        return cls(gens, relations)

    def to_text(self):
        lines = ["gens: " + " ".join(self.gens)]
        pairs = self.gens.inverse_pairs()
        if pairs:
            lines.append("inv: " + " ".join("{}={}".format(s, t) for s, t in pairs))
        for rel in self.relations:
            lines.append("rel: " + " ".join(rel))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return "<Presentation {}: {} generators, {} relations>".format(self.name or '', len(self.gens),
                                                                      len(self.relations))


class PdgLayout:
    """Labels of a (possibly incoherent) PDG: basis b1..br followed by the
    blocks of generator copies, one block per pair i < j in lexicographic
    order, each block in generator order."""

    def __init__(self, rank, gens, present=None):
        if rank not in (3, 4):
            raise PdgError("PDGs are built in rank 3 or 4, not {}".format(rank))
        self.rank = rank
        self.gens = gens
        self.pairs = list(itertools.combinations(range(1, rank + 1), 2))
        everything = {(s, i, j) for (i, j) in self.pairs for s in gens}
        if present is None:
            present = everything
        present = {tuple(p) for p in present}
        unknown = present - everything
        if unknown:
            raise PdgError("Layout names elements outside the PDG: {}".format(sorted(unknown)))
        self.present = frozenset(present)
        self.coherent = self.present == everything
        self.basis = ["b{}".format(i) for i in range(1, rank + 1)]
        labels = list(self.basis)
        for (i, j) in self.pairs:
            labels += [self.label(s, i, j) for s in gens if (s, i, j) in self.present]
        try:
            self.ground = GroundSet(labels)
        except GroundSetError as e:
            raise PdgError(str(e))

    @staticmethod
    def label(s, i, j):
        return "{}_{}{}".format(s, i, j)

    def normalize(self, s, i, j):
        """(s, i, j) with i < j, using s_ji = (s^-1)_ij"""
        if i == j or not (1 <= i <= self.rank and 1 <= j <= self.rank):
            raise PdgError("Invalid index pair ({}, {})".format(i, j))
        if i > j:
            return self.gens.inv(s), j, i
        if s not in self.gens:
            raise PdgError("Unknown generator {!r}".format(s))
        return s, i, j

    def has(self, s, i, j):
        return self.normalize(s, i, j) in self.present

    def element(self, s, i, j):
        key = self.normalize(s, i, j)
        if key not in self.present:
            raise PdgError("Element {}_{}{} is not present".format(s, i, j))
        return self.label(*key)

    def block(self, i, j):
        i, j = min(i, j), max(i, j)
        return [self.label(s, i, j) for s in self.gens if (s, i, j) in self.present]

    def parse(self, label):
        """(s, i, j) for a generator-copy label"""
        s, _, idx = label.rpartition('_')
        if not s or len(idx) != 2 or not idx.isdigit():
            raise PdgError("Not a generator copy label: {!r}".format(label))
        return s, int(idx[0]), int(idx[1])

    def __repr__(self):
        kind = 'coherent' if self.coherent else 'incoherent'
        return "<PdgLayout rank={} {} n={}>".format(self.rank, kind, len(self.ground))


class Pdg:
    """A layout together with its rank vector"""

    def __init__(self, layout, rank_vector, source=None):
        if rank_vector.labels != layout.ground.labels:
            if set(rank_vector.labels) != set(layout.ground.labels):
                raise PdgError("Rank vector does not live on the layout's ground set")
            rank_vector = rank_vector.reordered(layout.ground.labels)
        self.layout = layout
        self.rank_vector = rank_vector
        self.source = source
        self._relators = None

    @property
    def r(self):
        return self.layout.rank

    @property
    def gens(self):
        return self.layout.gens

    @property
    def coherent(self):
        return self.layout.coherent

    @property
    def labels(self):
        return self.layout.ground.labels

    def element(self, s, i, j):
        return self.layout.element(s, i, j)

    def f(self, *labels):
        return self.rank_vector(*labels)

    def rank_of(self, *picks):
        """Rank of generator copies given as (s, i, j) triples or plain labels"""
        labels = [self.element(*p) if isinstance(p, tuple) else p for p in picks]
        return self.rank_vector(*labels)

    def restrict_indices(self, indices):
        """Sub-PDG on the coordinates <indices>, renumbered 1..k in increasing order"""
        indices = sorted(indices)
        renumber = {old: new for new, old in enumerate(indices, start=1)}
        present = {(s, renumber[i], renumber[j]) for (s, i, j) in self.layout.present
                   if i in renumber and j in renumber}
        layout = PdgLayout(len(indices), self.gens, present)
        mapping = {"b{}".format(old): "b{}".format(new) for old, new in renumber.items()}
        for (s, i, j) in self.layout.present:
            if i in renumber and j in renumber:
                mapping[PdgLayout.label(s, i, j)] = PdgLayout.label(s, renumber[i], renumber[j])
        sub = restriction(self.rank_vector, list(mapping)).relabel(mapping)
        return Pdg(layout, sub, source=self.source)

    def to_text(self):
        lines = ["pdg: rank {}".format(self.r), "gens: " + " ".join(self.gens)]
        pairs = self.gens.inverse_pairs()
        if pairs:
            lines.append("inv: " + " ".join("{}={}".format(s, t) for s, t in pairs))
        lines.append("identity: {}".format(self.gens.identity))
        return "\n".join(lines) + "\n" + self.rank_vector.to_text()

    @classmethod
    def read(cls, source):
        header, labels, values, exact = read_pdg_dump(source)
        try:
            rank = int(header['pdg'].split()[-1])
        except ValueError:
            raise InputFormatError("Bad 'pdg:' header {!r}".format(header['pdg']))
        inverse = {}
        for pair in header.get('inv', '').split():
            s, _, t = pair.partition('=')
            inverse[s] = t
            inverse[t] = s
        try:
            gens = GeneratorSet(header['gens'].split(), inverse, header.get('identity', 'e'))
        except PresentationError as e:
            raise InputFormatError(str(e))
        basis_layout = PdgLayout(rank, gens)
        present = set()
        for label in labels:
            if label in basis_layout.basis:
                continue
            try:
                present.add(basis_layout.parse(label))
            except PdgError:
                raise InputFormatError("Unexpected element {!r} in PDG dump".format(label))
        layout = PdgLayout(rank, gens, present)
        vector = RankVector.exact(labels, values) if exact else RankVector.numeric(labels, values)
        return cls(layout, vector)

    def relators(self):
        if self._relators is None:
            self._relators = relators(self)
        return self._relators

    def __repr__(self):
        kind = 'coherent' if self.coherent else 'incoherent'
        return "<Pdg rank={} {} n={} gens={}>".format(self.r, kind, len(self.labels), " ".join(self.gens))


def _level_max(data, n):
    """For sets of 4 or more elements, f(T) = max over x of f(T - x)"""
    pc = popcounts(n)
    allm = np.arange(1 << n, dtype=np.int64)
    for level in range(4, n + 1):
        members = allm[pc == level]
        best = np.zeros(len(members), dtype=data.dtype)
        for i in range(n):
            bit = 1 << i
            has = (members & bit) != 0
            cand = np.where(has, data[members & ~bit], 0)
            np.maximum(best, cand, out=best)
        data[members] = best
    return data


def build_rank3_pdg(p):
    """Rank-3 PDG of a symmetric triangular presentation.

    f(T) = |T| for |T| <= 2. A 3-set has rank 2 when it lies on a coordinate
    line {b_i, b_j} u S_ij or is a triangle {s_ij, s'_jk, s''_ki} for a relation
    (s, s', s''); otherwise 3. Larger sets take the maximum over their
    3-subsets.
    """
    layout = PdgLayout(3, p.gens)
    ground = layout.ground
    n = len(ground)
    pc = popcounts(n)
    data = np.minimum(pc, 3).astype(np.int64)
    for (i, j) in layout.pairs:
        line = ground.mask(["b{}".format(i), "b{}".format(j)] + layout.block(i, j))
        members = [1 << k for k in range(n) if line & (1 << k)]
        for a, b, c in itertools.combinations(members, 3):
            data[a | b | c] = 2
    for rel in p.relations:
        s, t, u = rel
        for i, j, k in itertools.permutations((1, 2, 3)):
            mask = ground.mask([layout.element(s, i, j), layout.element(t, j, k), layout.element(u, k, i)])
            data[mask] = 2
    data = _level_max(data, n)
    log.debug("Built rank-3 PDG with {} elements from {} relations".format(n, len(p.relations)))
    return Pdg(layout, RankVector(ground, data, denominator=1, meta={'source': 'construction'}), source=p)


def _frame_table(r, pairs, g):
    """Rank of every (joint set, pair states) combination of a gain graph on
    r vertices. A pair state is 0 (no edge), 1 + k (edges all with gain
    element k) or |G| + 1 (two different gains). Returns the table indexed by
    joints + 2**r * sum(state_p * (|G| + 2)**p)."""
    n_states = g.order + 2
    multiple = g.order + 1
    mul = g.mul_table
    inv = g.inv_table
    e = g.identity_index
    joints = np.arange(1 << r, dtype=np.int64)
    pc = popcounts(r)
    table = np.zeros((n_states ** len(pairs)) << r, dtype=np.int64)
    for states in itertools.product(range(n_states), repeat=len(pairs)):
        index = 0
        for p, state in enumerate(states):
            index += state * n_states ** p
        adjacency = {v: [] for v in range(r)}
        unbalanced = set()
        edge_vertices = 0
        for (i, j), state in zip(pairs, states):
            if state == 0:
                continue
            u, v = i - 1, j - 1
            edge_vertices |= (1 << u) | (1 << v)
            if state == multiple:
                unbalanced.update((u, v))
                adjacency[u].append((v, None))
                adjacency[v].append((u, None))
            else:
                gain = state - 1
                adjacency[u].append((v, gain))
                adjacency[v].append((u, inv[gain]))
        seen = {}
        balanced_components = []
        for root in range(r):
            if root in seen or not adjacency[root]:
                continue
            seen[root] = e
            stack = [root]
            component = 1 << root
            balanced = root not in unbalanced
            while stack:
                x = stack.pop()
                for y, gain in adjacency[x]:
                    if gain is None:
                        balanced = False
                        if y not in seen:
                            seen[y] = e
                            component |= 1 << y
                            stack.append(y)
                        continue
                    potential = int(mul[seen[x], gain])
                    if y not in seen:
                        seen[y] = potential
                        component |= 1 << y
                        stack.append(y)
                    elif seen[y] != potential:
                        balanced = False
            if balanced:
                balanced_components.append(component)
        ranks = pc[edge_vertices | joints].copy()
        for component in balanced_components:
            ranks -= ((component & joints) == 0).astype(np.int64)
        table[(index << r) + joints] = ranks
    return table


def build_dowling_pdg(g, r, gens=None, labelling=None, present=None):
    """Dowling PDG of the group <g> in rank <r>.

    Generator s_ij is an edge from vertex i to vertex j with gain
    labelling[s], b_i a joint at vertex i, and f(T) is the frame-matroid rank:
    the number of vertices T touches minus the number of its balanced
    components carrying no joint. By default the generators are the group
    elements themselves; a custom GeneratorSet and labelling may repeat
    group elements.
    """
    if not isinstance(g, GroupTable):
        raise PdgError("Expected a GroupTable")
    if gens is None:
        gens = GeneratorSet.from_group(g)
    if labelling is None:
        labelling = {s: s for s in gens}
    missing = [s for s in gens if s not in labelling]
    if missing:
        raise PdgError("Labelling is not defined on {}".format(", ".join(missing)))
    for s in gens:
        if g.inv(labelling[s]) != labelling[gens.inv(s)]:
            raise PdgError("Labelling does not respect inverses at {}".format(s))
    if labelling[gens.identity] != g.identity:
        raise PdgError("Labelling must send {} to the identity".format(gens.identity))
    layout = PdgLayout(r, gens, present)
    n = len(layout.ground)
    if n > conf.max_ground_size:
        raise PdgError("Dowling PDG would have {} elements, cap is {}".format(n, conf.max_ground_size))
    table = _frame_table(r, layout.pairs, g)
    n_states = g.order + 2
    masks = np.arange(1 << n, dtype=np.int64)
    state = masks & ((1 << r) - 1)
    scale = 1 << r
    offset = r
    for (i, j) in layout.pairs:
        members = [g.index(labelling[s]) for s in gens if (s, i, j) in layout.present]
        width = len(members)
        lookup = np.zeros(1 << width, dtype=np.int64)
        for pattern in range(1, 1 << width):
            gains = {members[k] for k in range(width) if pattern & (1 << k)}
            lookup[pattern] = 1 + gains.pop() if len(gains) == 1 else g.order + 1
        state += lookup[(masks >> offset) & ((1 << width) - 1)] * scale
        scale *= n_states
        offset += width
    data = table[state]
    log.debug("Built rank-{} Dowling PDG of {} with {} elements".format(r, g.name, n))
    return Pdg(layout, RankVector(layout.ground, data, denominator=1, meta={'source': 'dowling'}), source=g)


class PdgReport(Report):
    def condition(self, k):
        rows = self.find("({})".format(k))
        return rows[0] if rows else None


def validate_pdg(pdg, coherent=True):
    """Checks PDG conditions (1)-(6), one row per condition with the first
    failing witness. Incoherent mode skips conditions (3) and (6) and checks
    (4) and (5) only on present elements."""
    layout = pdg.layout
    gens = pdg.gens
    f = pdg.f
    report = PdgReport("validate_pdg")

    bad = [s for s in gens if gens.inv(gens.inv(s)) != s]
    if gens.inv(gens.identity) != gens.identity:
        bad.insert(0, gens.identity)
    report.add("(1) involution on S with e^-1 = e" + (" at {}".format(bad[0]) if bad else ""), True, not bad)

    witness = None
    for size in range(len(layout.basis) + 1):
        for A in itertools.combinations(layout.basis, size):
            if f(*A) != size:
                witness = (A, size, f(*A))
                break
        if witness:
            break
    if witness:
        report.add("(2) f(A) = |A| on the basis at {}".format(format_subset(witness[0])), witness[1], witness[2])
    else:
        report.add("(2) f(A) = |A| on the basis", True, True)

    if coherent:
        missing = [PdgLayout.label(s, i, j) for (i, j) in layout.pairs for s in gens
                   if (s, i, j) not in layout.present]
        report.add("(3) every s_ij present" + (" (missing {})".format(missing[0]) if missing else ""),
                   0, len(missing))
    else:
        report.add("(3) skipped for incoherent PDG", True, True)

    cond4 = cond5 = None
    for (i, j) in layout.pairs:
        bi, bj = "b{}".format(i), "b{}".format(j)
        for label in layout.block(i, j):
            if cond4 is None and f(bi, bj, label) != f(bi, bj):
                cond4 = ("{} in cl({},{})".format(label, bi, bj), f(bi, bj), f(bi, bj, label))
            if cond5 is None:
                for args, expected in (((label,), 1), ((bi, label), 2), ((bj, label), 2)):
                    if f(*args) != expected:
                        cond5 = ("f({}) = {}".format(",".join(args), expected), expected, f(*args))
                        break
    report.add("(4) " + (cond4[0] if cond4 else "s_ij in cl(b_i,b_j)"),
               *(cond4[1:] if cond4 else (True, True)))
    report.add("(5) " + (cond5[0] if cond5 else "f(s_ij) = 1 and f(b_i,s_ij) = 2"),
               *(cond5[1:] if cond5 else (True, True)))

    if coherent and layout.coherent:
        cond6 = None
        for s in gens:
            for i, j, k in itertools.permutations(range(1, pdg.r + 1), 3):
                labels = (layout.element(s, i, j), layout.element(gens.inv(s), j, k),
                          layout.element(gens.identity, k, i))
                if f(*labels) != 2:
                    cond6 = ("f({}) = 2".format(",".join(labels)), 2, f(*labels))
                    break
            if cond6:
                break
        report.add("(6) " + (cond6[0] if cond6 else "f(s_ij, s^-1_jk, e_ki) = 2"),
                   *(cond6[1:] if cond6 else (True, True)))
    elif coherent:
        report.add("(6) coherence needs every s_ij present", True, False)
    else:
        report.add("(6) skipped for incoherent PDG", True, True)
    return report


def relators(pdg):
    """All (s, s', s'') with f(s_ij, s'_jk, s''_ki) = 2 for every distinct
    i, j, k. Raises PdgError for triples that pass on some index triples but
    not others, and if the result is not closed under cyclic shifts and
    inversion."""
    if not pdg.coherent:
        raise PdgError("Relators are defined for coherent PDGs")
    layout = pdg.layout
    gens = pdg.gens
    index_triples = list(itertools.permutations(range(1, pdg.r + 1), 3))
    found = set()
    anomalies = []
    for triple in itertools.product(gens, repeat=3):
        s, t, u = triple
        good = [pdg.f(layout.element(s, i, j), layout.element(t, j, k), layout.element(u, k, i)) == 2
                for i, j, k in index_triples]
        if all(good):
            found.add(triple)
        elif any(good):
            anomalies.append(triple)
    if anomalies:
        raise PdgError("Rank-2 property depends on the indices for {}".format(anomalies[:5]))
    for triple in found:
        s, t, u = triple
        for image in (_cyclic(triple), (gens.inv(u), gens.inv(t), gens.inv(s))):
            if image not in found:
                raise PdgError("Relators not closed: {} present, {} missing".format(triple, image))
    return frozenset(found)


def check_acyclic_independence(pdg, picks):
    """For picks (s, i, j) on distinct index pairs: if the index graph is a
    forest then the picked elements are independent. Returns whether that
    implication holds."""
    pairs = [frozenset((i, j)) for (_, i, j) in picks]
    if len(set(pairs)) != len(pairs):
        raise PdgError("Picks must use distinct index pairs")
    graph = nx.Graph()
    graph.add_nodes_from(range(1, pdg.r + 1))
    graph.add_edges_from(tuple(pair) for pair in pairs)
    labels = [pdg.element(*pick) for pick in picks]
    acyclic = nx.is_forest(graph)
    return (not acyclic) or pdg.f(*labels) == len(labels)


def check_pair_independence(pdg):
    """Pairs x, y with f(x, y) != 2 that are not copies on one index pair"""
    layout = pdg.layout
    failures = []
    for x, y in itertools.combinations(pdg.labels, 2):
        if x not in layout.basis and y not in layout.basis:
            _, i, j = layout.parse(x)
            _, k, l = layout.parse(y)
            if (i, j) == (k, l):
                continue
        if pdg.f(x, y) != 2:
            failures.append((x, y, pdg.f(x, y)))
    return failures


def check_weak_pair_independence(pdg):
    """Pairs (b_i, s_jk) with f != 2"""
    failures = []
    for b in pdg.layout.basis:
        for label in pdg.labels[pdg.r:]:
            if pdg.f(b, label) != 2:
                failures.append((b, label, pdg.f(b, label)))
    return failures


def check_flat_closure(pdg):
    """Every coordinate line has rank 2, f(E) = r and the basis spans E"""
    report = Report("flat closure")
    for (i, j) in pdg.layout.pairs:
        line = ["b{}".format(i), "b{}".format(j)] + pdg.layout.block(i, j)
        report.add("f({}) = 2".format(format_subset(line)), 2, pdg.f(*line))
    report.add("f(E) = r", pdg.r, pdg.f(*pdg.labels))
    report.add("cl(B) = E", len(pdg.labels), len(closure(pdg.rank_vector, pdg.layout.basis)))
    return report
