"""Command line front end: `polyent <command> ...`

Exit codes: 0 when the check passes (or nothing was refuted), 1 on a failed
property or a refutation, 2 on malformed input.
"""
import argparse
import os
import sys
from math import log2

import numpy as np
from astropy import log

from . import cone, desargues, entropy, linear, pdg, recovery, setfn
from .groups import GroupTable
from .utils import InputFormatError, ModeError, PolyentError, Report, read_prob_space

__all__ = ['run', 'main']


def _echo(lines):
    for line in lines:
        print(line)


def _text(block):
    sys.stdout.write(block)


def _load(reader, source):
    try:
        return reader(source)
    except InputFormatError:
        raise
    except PolyentError as e:
        raise InputFormatError(str(e))


def _require_file(path):
    if not os.path.isfile(path):
        raise InputFormatError("No such file: {}".format(path))
    return path


def _group(source):
    if os.path.isfile(source):
        return _load(GroupTable.read, source)
    return _load(GroupTable.from_preset, source)


def _presentation(source):
    if os.path.isfile(source):
        return _load(pdg.Presentation.read, source)
    return _load(pdg.Presentation.from_preset, source)


def _labels(text):
    return tuple(label.strip() for label in text.split(',') if label.strip())


def cmd_axioms_check(args):
    v = _load(setfn.RankVector.read, _require_file(args.file))
    report = setfn.is_polymatroid(v)
    try:
        matroid = report.is_polymatroid and setfn.is_matroid(v)
    except ModeError:
        matroid = False
    print("POLYMATROID: {}  MATROID: {}".format('yes' if report.is_polymatroid else 'no', 'yes' if matroid else 'no'))
    _echo(report.lines())
    return 0 if report.is_polymatroid else 1


def cmd_entropy(args):
    probs, variables = _load(read_prob_space, _require_file(args.file))
    space = _load(lambda p: entropy.FinProbSpace(p), probs)
    family = _load(lambda vs: entropy.RandomVariableFamily([name for name, _ in vs], dict(vs)), variables)
    _text(entropy.entropy_vector(space, family).to_text())
    return 0


def cmd_shannon_check(args):
    v = _load(setfn.RankVector.read, _require_file(args.file))
    inside, violated = cone.in_shannon_cone(v)
    print("SHANNON: {}".format('yes' if inside else 'no'))
    if violated is not None:
        print("violated {}".format(violated))
    return 0 if inside else 1


def cmd_copy_refute(args):
    v = _load(setfn.RankVector.read, _require_file(args.file))
    if (args.base is None) != (args.copy is None):
        raise InputFormatError("--base and --copy go together")
    schedule = None
    if args.copy is not None:
        schedule = [(_labels(args.base), _labels(args.copy))]
        for B, C in schedule:
            for label in B + C:
                if label not in v.ground:
                    raise InputFormatError("Unknown label {!r}".format(label))
    result = cone.copy_lp_refute(v, schedule)
    _echo(result.lines())
    return 1 if result.refuted else 0


def cmd_pdg_build(args):
    p = _presentation(args.presentation)
    built = pdg.build_rank3_pdg(p)
    _text(built.to_text())
    return 0


def cmd_pdg_validate(args):
    dump = _load(pdg.Pdg.read, _require_file(args.file))
    report = pdg.validate_pdg(dump, coherent=not args.incoherent)
    _echo(report.lines())
    return 0 if report.ok else 1


def cmd_dowling(args):
    g = _group(args.group)
    built = _load(lambda grp: pdg.build_dowling_pdg(grp, args.rank), g)
    if args.dump:
        _text(built.to_text())
        return 0
    print("DOWLING {} rank {}: {} elements".format(g.name, built.r, len(built.labels)))
    report = pdg.validate_pdg(built)
    _echo(report.lines())
    pair_failures = pdg.check_pair_independence(built)
    weak_failures = pdg.check_weak_pair_independence(built)
    print("pair independence: {} failures".format(len(pair_failures)))
    print("weak pair independence: {} failures".format(len(weak_failures)))
    relators = sorted(built.relators())
    print("relators: {}".format(len(relators)))
    ok = report.ok and not pair_failures and not weak_failures
    return 0 if ok else 1


def cmd_recover_group(args):
    g = _group(args.group)
    if args.rank != 4:
        raise InputFormatError("Group recovery works on rank-4 PDGs")
    recovered = recovery.recover_group(_load(lambda grp: pdg.build_dowling_pdg(grp, args.rank), g))
    _text(recovered.to_text())
    isomorphic = recovered.is_isomorphic(g)
    print("ISOMORPHIC: {}".format('yes' if isomorphic else 'no'))
    return 0 if isomorphic else 1


def cmd_lift(args):
    g = _group(args.group)
    report = recovery.verify_lifting(g)
    print("LIFT {}: {}".format(g.name, 'OK' if report.ok else 'FAIL'))
    _echo(report.lines())
    return 0 if report.ok else 1


def cmd_desargues(args):
    rng = np.random.default_rng(args.seed)
    failures = 0
    for k in range(args.count):
        realization, cfg = linear.random_desargues_configuration(args.prime, rng, generic=args.generic)
        truth = linear.linear_rank_vector(realization)
        v = setfn.restriction(truth, cfg.labels)
        hypotheses = desargues.check_desargues_hypotheses(v, cfg)
        try:
            fhat, label = desargues.adjoin_intersection_point(v, cfg)
        except PolyentError as e:
            print("CONFIG {}: FAIL {}".format(k, e))
            failures += 1
            continue
        conclusion = desargues.check_desargues_conclusion(fhat, cfg, label)
        exact = fhat == truth
        print("CONFIG {}: hypotheses {} conclusion {} oracle {}".format(
            k, 'OK' if hypotheses.ok else 'FAIL', 'OK' if conclusion.ok else 'FAIL',
            'exact' if exact else 'coarser'))
        if not conclusion.ok:
            failures += 1
        if args.generic and not exact:
            failures += 1
    return 1 if failures else 0


def cmd_three_line(args):
    base = desargues.three_line_base_matroid()
    extended = desargues.three_line_extended_matroid()
    report = Report("three-line")
    report.add("f(E) = 4", 4, base(*base.labels))
    for circuit in desargues.ThreeLineConfig().plane_circuits():
        report.add("f({}) = 3".format(",".join(circuit)), 3, base(*circuit))
    report.add("base is a matroid", True, setfn.is_matroid(base))
    report.add("extension is a matroid", True, setfn.is_matroid(extended))
    report.add("base embeds in the extension", True,
               setfn.is_embedding(base, extended, {label: label for label in base.labels}))
    adjoined = desargues.extend_by_lines(base, ('a1', 'a2'), ('b1', 'b2'), 'd')
    report.add("adjoining d on a and b gives the extension", True, adjoined == extended)
    _echo(report.lines())
    return 0 if report.ok else 1


def cmd_linear_rank(args):
    r = _load(linear.LinearRealization.read, _require_file(args.file))
    _text(linear.linear_rank_vector(r).to_text())
    return 0


def cmd_realize_entropic(args):
    r = _load(linear.LinearRealization.read, _require_file(args.file))
    h = linear.entropic_from_linear(r)
    _text(h.to_text())
    ranks = linear.linear_rank_vector(r)
    scaled = np.abs(h.as_array() - log2(r.p) * ranks.as_array())
    return 0 if np.all(scaled <= h.tolerance) else 1


def cmd_nontrivial(args):
    p = _presentation(args.presentation)
    g = _group(args.group)
    label_map = None
    if args.map:
        label_map = {s: s for s in p.gens}
        for pair in args.map.split(','):
            if '=' not in pair:
                raise InputFormatError("Label map entries are written s=x, got {!r}".format(pair))
            s, x = pair.split('=', 1)
            label_map[s.strip()] = x.strip()
    verdict = recovery.nontriviality_pipeline(p, g, args.element, label_map)
    _echo(verdict.lines())
    return 1 if verdict == recovery.NontrivialityVerdict.INCONSISTENT else 0


def _parser():
    parser = argparse.ArgumentParser(prog='polyent', description="Polymatroids, entropy cones and partial Dowling geometries")
    parser.add_argument('-v', '--verbose', action='count', default=0, help="more log output (repeat for debug)")
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    def command(name, fn, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=fn)
        return p

    p = command('axioms-check', cmd_axioms_check, "check the polymatroid and matroid axioms of a rank vector")
    p.add_argument('file')
    p = command('entropy', cmd_entropy, "entropy vector of a probability space file")
    p.add_argument('file')
    p = command('shannon-check', cmd_shannon_check, "test a rank vector against every elemental Shannon inequality")
    p.add_argument('file')
    p = command('copy-refute', cmd_copy_refute, "try to refute almost-entropicity with copy-lemma LPs")
    p.add_argument('file')
    p.add_argument('--base', help="comma separated B (default: the full default schedule)")
    p.add_argument('--copy', help="comma separated C")
    p = command('pdg-build', cmd_pdg_build, "dump the rank-3 PDG of a presentation (file or preset name)")
    p.add_argument('presentation')
    p = command('pdg-validate', cmd_pdg_validate, "check PDG conditions (1)-(6) on a PDG dump")
    p.add_argument('file')
    p.add_argument('--incoherent', action='store_true', help="skip the coherence conditions")
    p = command('dowling', cmd_dowling, "build and check the Dowling PDG of a group (file or preset name)")
    p.add_argument('group')
    p.add_argument('--rank', type=int, default=3, choices=(3, 4))
    p.add_argument('--dump', action='store_true', help="print the PDG dump instead of the summary")
    p = command('recover-group', cmd_recover_group, "recover a group from its rank-4 Dowling PDG")
    p.add_argument('group')
    p.add_argument('--rank', type=int, default=4)
    p = command('lift', cmd_lift, "verify the rank-4 lift of the rank-3 Dowling PDG")
    p.add_argument('group')
    p = command('desargues', cmd_desargues, "adjoin x3 on seeded random Desargues configurations")
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--prime', type=int, default=5)
    p.add_argument('--count', type=int, default=1)
    p.add_argument('--generic', action='store_true', help="only configurations without incidental coplanarities")
    command('three-line', cmd_three_line, "check the three-line matroids and their extension")
    p = command('linear-rank', cmd_linear_rank, "rank vector of a linear realization file")
    p.add_argument('file')
    p = command('realize-entropic', cmd_realize_entropic, "entropy vector of a linear realization")
    p.add_argument('file')
    p = command('nontrivial', cmd_nontrivial, "decide whether a generator maps to a nontrivial element of a quotient")
    p.add_argument('presentation')
    p.add_argument('group')
    p.add_argument('--element', required=True)
    p.add_argument('--map', help="label map s=x,... (default: identity)")
    return parser


def run(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    if args.verbose:
        log.setLevel('DEBUG' if args.verbose > 1 else 'INFO')
    try:
        return args.func(args)
    except InputFormatError as e:
        print("ERROR: {}".format(e), file=sys.stderr)
        return 2
    except PolyentError as e:
        print("ERROR: {}".format(e), file=sys.stderr)
        return 1


def main():
    sys.exit(run())
