"""Command-line harness: inspect models, run single checkers, or the suite.

Reports are deterministic byte-for-byte for identical inputs: everything
is sorted, nothing timestamped.  Exit codes: 0 (ok; truncated verdicts
and skipped checkers only produce warnings), 1 (a violation or an invalid
model), 2 (usage error).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .core import (
    LeafSpaceError,
    Point,
    PreconditionFailed,
    TruncatedError,
    cached_validation,
    expand,
)
from .paths import Comparability, compare, path
from .action import Word, act, act_locus, branching_type, classify_element, in_comparable_set
from . import checkers as ck
from .checkers import CheckReport, PASS, SCREEN_DISCLAIMER, TRUNCATED, VIOLATION
from .formats import emit, parse
from .gallery import GALLERY_NAMES, gallery
from .randspec import RandomParams, random_spec

POINT_RE = re.compile(r"^([A-Za-z_]\w*)\[(-?\d+)\](?::(\d+/\d+|\d+))?$")


class SystemExit2(Exception):
    """Usage error carrying exit code 2."""


def parse_point(text):
    m = POINT_RE.match(text.strip())
    if m is None:
        raise ValueError(f"cannot parse point {text!r}; use FAMILY[index] or FAMILY[index]:p/q")
    fam, idx, t = m.group(1), int(m.group(2)), m.group(3)
    return Point((fam, idx), Fraction(t) if t else None)


def load_model(args):
    if getattr(args, "gallery", None):
        return gallery(args.gallery).spec, args.gallery
    if getattr(args, "spec", None):
        with open(args.spec, encoding="utf-8") as fh:
            return parse(fh.read()), args.spec
    raise SystemExit2("a model is required: --gallery NAME or --spec FILE")


class Output:
    def __init__(self, as_json):
        self.as_json = as_json
        self.lines = []
        self.payload = None

    def line(self, text=""):
        self.lines.append(text)

    def emit(self, stream):
        if self.as_json:
            stream.write(json.dumps(self.payload, indent=2, sort_keys=True) + "\n")
        else:
            for line in self.lines:
                stream.write(line + "\n")


def render_report(out, report):
    verdict = report.verdict.upper()
    extra = " ".join(f"{k}={v}" for k, v in report.witness)
    out.line(f"{verdict:<10} {report.name}" + (f"  {extra}" if extra else ""))
    for note in report.notes:
        out.line(f"           note: {note}")


# ---------------------------------------------------------------------------
# single subcommands


def cmd_validate(args, out):
    spec, name = load_model(args)
    trunc = expand(spec, args.depth)
    report = cached_validation(trunc)
    out.payload = {"model": name, "depth": args.depth, "valid": report.valid,
                   "violations": [{"code": v.code, "message": v.message}
                                  for v in report.violations]}
    out.line(f"validate {name} depth={args.depth}")
    if report.valid:
        out.line("valid: yes (0 violations)")
        return 0
    out.line(f"valid: no ({len(report.violations)} violations)")
    for v in report.violations:
        out.line(f"  [{v.code}] {v.message}")
    return 1


def cmd_expand(args, out):
    spec, name = load_model(args)
    trunc = expand(spec, args.depth)
    out.payload = {
        "model": name, "depth": args.depth,
        "vertex_cells": [f"{f}[{i}]" for f, i in trunc.vertex_cells],
        "edge_cells": [f"{f}[{i}]" for f, i in trunc.edge_cells],
        "truncated_ends": [
            {"at": str(te.at), "continuation": te.continuation}
            for te in trunc.truncated_ends],
    }
    out.line(f"expand {name} depth={args.depth}")
    out.line(f"vertex cells: {len(trunc.vertex_cells)}")
    out.line(f"edge cells:   {len(trunc.edge_cells)}")
    out.line(f"truncated ends: {len(trunc.truncated_ends)}")
    for te in trunc.truncated_ends:
        out.line(f"  {te.at} -> {te.continuation}")
    return 0


def cmd_loci(args, out):
    spec, name = load_model(args)
    trunc = expand(spec, args.depth)
    from .core import branch_loci
    loci = branch_loci(trunc)
    bt = branching_type(spec, args.depth)
    out.payload = {"model": name, "depth": args.depth, "branching": str(bt),
                   "loci": [{"members": [f"{f}[{i}]" for f, i in b.members],
                             "sign": b.sign, "stem": str(b.stem)} for b in loci]}
    out.line(f"loci {name} depth={args.depth}  branching={bt}")
    for k, b in enumerate(loci):
        members = ",".join(f"{f}[{i}]" for f, i in b.members)
        out.line(f"  [{k}] {b.sign:<8} {{{members}}}  stem={b.stem}")
    if not loci:
        out.line("  (none)")
    return 0


def cmd_compare(args, out):
    spec, name = load_model(args)
    trunc = expand(spec, args.depth)
    x, y = parse_point(args.x), parse_point(args.y)
    rel = compare(trunc, x, y)
    out.payload = {"model": name, "x": str(x), "y": str(y), "relation": rel.value}
    out.line(f"compare {x} {y}: {rel.value}")
    return 0


def cmd_path(args, out):
    spec, name = load_model(args)
    trunc = expand(spec, args.depth)
    x, y = parse_point(args.frm), parse_point(args.to)
    try:
        p = path(trunc, x, y)
    except TruncatedError as exc:
        out.payload = {"model": name, "truncated": True, "reason": str(exc)}
        out.line(f"path {x} -> {y}: TRUNCATED ({exc})")
        return 0
    out.payload = {
        "model": name, "x": str(x), "y": str(y), "length": p.length,
        "intervals": [{"start": str(iv.start), "end": str(iv.end),
                       "direction": iv.direction} for iv in p.intervals],
        "junctions": [{"arrive": str(j.arrive), "depart": str(j.depart),
                       "locus": [f"{f}[{i}]" for f, i in j.locus.members]}
                      for j in p.junctions],
    }
    out.line(f"path {x} -> {y}: length {p.length}")
    for k, iv in enumerate(p.intervals, start=1):
        out.line(f"  interval {k}: {iv}")
    for k, j in enumerate(p.junctions, start=1):
        members = ",".join(f"{f}[{i}]" for f, i in j.locus.members)
        out.line(f"  junction {k}: {j.arrive} ~ {j.depart} in {{{members}}}")
    return 0


def cmd_classify(args, out):
    spec, name = load_model(args)
    word = Word.parse(args.word)
    profile = classify_element(spec, word, args.depth)
    out.payload = {"model": name, "word": str(word), "depth": args.depth,
                   "tangentiable": str(profile.tangentiable),
                   "pos_transversable": str(profile.pos_transversable),
                   "neg_transversable": str(profile.neg_transversable),
                   "neither_in_window": profile.neither_in_window}
    out.line(f"classify {name} word={word} depth={args.depth}")
    out.line(f"  tangentiable:        {profile.tangentiable}")
    out.line(f"  pos transversable:   {profile.pos_transversable}")
    out.line(f"  neg transversable:   {profile.neg_transversable}")
    if profile.neither_in_window:
        out.line("  neither-candidate within this window")
    return 0


class NoLoci(Exception):
    """The window holds no branch loci; an empty answer, not an error."""


def _pick_locus(trunc, index):
    from .core import branch_loci
    loci = branch_loci(trunc)
    if not loci:
        raise NoLoci
    if not 0 <= index < len(loci):
        raise SystemExit2(f"--locus must be in 0..{len(loci) - 1}")
    return loci[index]


def cmd_stab(args, out):
    spec, name = load_model(args)
    trunc = expand(spec, args.depth)
    try:
        locus = _pick_locus(trunc, args.locus)
    except NoLoci:
        out.payload = {"model": name, "loci": 0, "ball": []}
        out.line(f"stabilizer query on {name}: no branch loci in this window")
        return 0
    ball = ck.stabilizer_ball(spec, locus, args.word_len, args.depth)
    members = ",".join(f"{f}[{i}]" for f, i in ball.locus)
    out.payload = {
        "model": name, "locus": members, "radius": ball.radius,
        "ball": [str(w) for w in ball.members],
        "cyclic_at_radius": ball.cyclic_at_radius,
        "cyclic_generator": str(ball.cyclic_generator) if ball.cyclic_generator else None,
        "acts_nontrivially": ball.acts_nontrivially,
    }
    out.line(f"stabilizer ball of {{{members}}} radius={ball.radius} depth={args.depth}")
    out.line(f"  size: {len(ball.members)}")
    out.line(f"  words: {', '.join(str(w) for w in ball.members)}")
    out.line(f"  cyclic at this radius: {'yes' if ball.cyclic_at_radius else 'no'}"
             + (f" (generator {ball.cyclic_generator})" if ball.cyclic_generator else ""))
    out.line(f"  acts on the locus nontrivially: {'yes' if ball.acts_nontrivially else 'no'}")
    return 0


def cmd_gallery(args, out):
    entry = gallery(args.name)
    out.payload = {"name": entry.name, "notes": entry.notes, "document": emit(entry.spec)}
    out.lines.append(emit(entry.spec).rstrip("\n"))
    return 0


def cmd_random(args, out):
    params = RandomParams(
        seed=args.seed,
        locus_count=tuple(args.loci),
        locus_size=tuple(args.sizes),
        sign_mix=args.sign_mix,
        extra_edges=args.extra,
        symmetric=args.symmetric,
    )
    spec = random_spec(params)
    out.payload = {"seed": args.seed, "document": emit(spec)}
    out.lines.append(emit(spec).rstrip("\n"))
    return 0


# ---------------------------------------------------------------------------
# checkers


def _basic_words(spec):
    words = []
    for name in sorted(spec.generators):
        g = Word.generator(name)
        words.extend([g, g * g])
    return words


def _canonical(spec, depth):
    from .action import canonical_points
    return canonical_points(spec.window(depth))


def _find_comparable_pair(spec, word, depth, limit=400):
    """First (lam, mu) with lam < mu and lam < w(mu), both certified."""
    trunc = spec.window(depth)
    pts = _canonical(spec, depth)
    tried = 0
    for lam in pts:
        for mu in pts:
            if lam == mu:
                continue
            tried += 1
            if tried > limit:
                return None
            if compare(trunc, lam, mu) is not Comparability.LESS:
                continue
            w_mu = act(spec, word, mu)
            if not trunc.contains_point(w_mu):
                continue
            if compare(trunc, lam, w_mu) is Comparability.LESS:
                return lam, mu
    return None


def _membership_scan(spec, word, depth, want):
    from .core import Tri
    for p in _canonical(spec, depth):
        if in_comparable_set(spec, word, p, depth) is want:
            yield p


def discover_instances(spec, depth, word_len):
    """Deterministic (checker name, kwargs) instances for the suite."""
    from .core import Tri, branch_loci

    words = _basic_words(spec)
    trunc = spec.window(depth)
    loci = branch_loci(trunc)[:4]
    instances = {name: [] for name in SUITE_CHECKERS}

    for word in words:
        instances["check_connected_open"].append({"word": word})

        pair = _find_comparable_pair(spec, word, depth)
        if pair is not None and branching_type(spec, depth).value == "one_sided_positive":
            instances["check_lower_bound"].append(
                {"word": word, "lam": pair[0], "mu": pair[1]})

        yes_points = []
        for p in _membership_scan(spec, word, depth, Tri.YES):
            yes_points.append(p)
            if len(yes_points) == 3:
                break
        for i in range(len(yes_points)):
            for j in range(i + 1, len(yes_points)):
                instances["check_path_in_comparable_set"].append(
                    {"word": word, "lam": yes_points[i], "mu": yes_points[j]})

        odd_lam = even_lam = None
        for p in _membership_scan(spec, word, depth, Tri.NO):
            try:
                gamma = path(trunc, p, act(spec, word, p))
            except (TruncatedError, LeafSpaceError):
                continue
            if gamma.length % 2 == 1 and odd_lam is None:
                odd_lam = p
            if gamma.length % 2 == 0 and even_lam is None:
                even_lam = p
            if odd_lam is not None and even_lam is not None:
                break
        if odd_lam is not None:
            instances["check_odd_path"].append(
                {"word": word, "lam": odd_lam, "k_max": min(4, word_len)})
        if even_lam is not None:
            for k in range(2, max(3, word_len // 2) + 1):
                if in_comparable_set(spec, word ** k, even_lam, depth) is Tri.YES:
                    instances["check_return"].append(
                        {"word": word, "lam": even_lam, "k": k})
                    break

        pos = next(iter(_transverse_scan(spec, word, depth, Comparability.LESS)), None)
        neg = next(iter(_transverse_scan(spec, word, depth, Comparability.GREATER)), None)
        if pos is not None and neg is not None:
            instances["check_intermediate_fixed"].append(
                {"word": word, "x_pos": pos, "x_neg": neg})

        for locus in loci:
            if act_locus(spec, word, locus.members) == locus.members:
                instances["check_invariant_locus_stem"].append(
                    {"word": word, "locus": locus})

    for locus in loci:
        instances["check_fix_propagation"].append({"locus": locus, "radius": word_len})
    instances["check_faithfulness"].append({"max_word_len": word_len})
    instances["screen_infinite_locus"].append({"max_word_len": word_len})
    return instances


def _transverse_scan(spec, word, depth, want):
    from .action import image_relation
    trunc = spec.window(depth)
    for p in _canonical(spec, depth):
        if image_relation(spec, trunc, p, act(spec, word, p)) is want:
            yield p


SUITE_CHECKERS = (
    "check_lower_bound",
    "check_path_in_comparable_set",
    "check_connected_open",
    "check_odd_path",
    "check_return",
    "check_invariant_locus_stem",
    "check_fix_propagation",
    "check_faithfulness",
    "check_intermediate_fixed",
    "screen_infinite_locus",
)

CHECKER_FNS = {
    "check_lower_bound": ck.check_lower_bound,
    "check_path_in_comparable_set": ck.check_path_in_comparable_set,
    "check_connected_open": ck.check_connected_open,
    "check_odd_path": ck.check_odd_path,
    "check_return": ck.check_return,
    "check_invariant_locus_stem": ck.check_invariant_locus_stem,
    "check_fix_propagation": ck.check_fix_propagation,
    "check_faithfulness": ck.check_faithfulness,
    "check_intermediate_fixed": ck.check_intermediate_fixed,
    "screen_infinite_locus": ck.screen_infinite_locus,
}

SCREENS = {"check_fix_propagation", "check_faithfulness", "screen_infinite_locus"}


def _run_instance(spec, depth, name, kwargs):
    fn = CHECKER_FNS[name]
    try:
        return fn(spec, depth=depth, **kwargs)
    except PreconditionFailed as exc:
        return CheckReport.make(name, "precondition-failed", depth=depth,
                                screen=name in SCREENS, notes=(str(exc),))


def cmd_suite(args, out):
    spec, name = load_model(args)
    trunc = expand(spec, args.depth)
    report = cached_validation(trunc)
    bt = branching_type(spec, args.depth) if report.valid else None
    out.line(f"leafspace suite: {name}  depth={args.depth} word-len={args.word_len}")
    if not report.valid:
        out.line(f"model invalid ({len(report.violations)} violations); suite aborted")
        out.payload = {"model": name, "valid": False}
        return 1
    from .core import branch_loci
    out.line(f"model valid; loci={len(branch_loci(trunc))} branching={bt}")
    out.line(f"note: {SCREEN_DISCLAIMER}")
    out.line("")

    instances = discover_instances(spec, args.depth, args.word_len)
    jobs = []
    for checker in SUITE_CHECKERS:
        for kwargs in instances[checker]:
            jobs.append((checker, kwargs))
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_run_instance, spec, args.depth, c, kw)
                       for c, kw in jobs]
            results = [f.result() for f in futures]
    else:
        results = [_run_instance(spec, args.depth, c, kw) for c, kw in jobs]

    by_checker = {c: [] for c in SUITE_CHECKERS}
    for (checker, _), rep in zip(jobs, results):
        by_checker[checker].append(rep)

    order = {VIOLATION: 0, TRUNCATED: 1, "precondition-failed": 2, PASS: 3}
    violations = truncations = skips = 0
    payload_reports = []
    for checker in SUITE_CHECKERS:
        reps = by_checker[checker]
        if not reps:
            out.line(f"SKIP       {checker}  (no applicable instance found)")
            skips += 1
            payload_reports.append({"check": checker, "verdict": "skip"})
            continue
        worst = min(reps, key=lambda r: order[r.verdict])
        n = len(reps)
        suffix = f"  instances={n}"
        if worst.verdict == VIOLATION:
            violations += 1
        elif worst.verdict == TRUNCATED:
            truncations += 1
        elif worst.verdict == "precondition-failed":
            skips += 1
        render_report(out, CheckReport(worst.name, worst.verdict, worst.witness,
                                       worst.depth, worst.word_bound, worst.screen,
                                       worst.notes + (suffix.strip(),)))
        payload_reports.append(dict(worst.to_dict(), instances=n))
    out.line("")
    out.line(f"suite: {len(SUITE_CHECKERS)} checkers, "
             f"{len(SUITE_CHECKERS) - violations - truncations - skips} pass, "
             f"{violations} violations, {truncations} truncated, {skips} skipped")
    out.payload = {"model": name, "depth": args.depth, "word_len": args.word_len,
                   "branching": str(bt), "reports": payload_reports,
                   "violations": violations, "warnings": truncations + skips}
    return 1 if violations else 0


def cmd_check(args, out):
    spec, name = load_model(args)
    checker = args.checker
    if checker not in CHECKER_FNS:
        raise SystemExit2(f"unknown checker {checker!r}; "
                          f"choose from {', '.join(SUITE_CHECKERS)}")
    kwargs = {}
    if checker in ("check_lower_bound", "check_path_in_comparable_set"):
        kwargs = {"word": Word.parse(_require(args.word, "--word")),
                  "lam": parse_point(_require(args.frm, "--from")),
                  "mu": parse_point(_require(args.to, "--to"))}
    elif checker == "check_connected_open":
        kwargs = {"word": Word.parse(_require(args.word, "--word"))}
    elif checker == "check_odd_path":
        kwargs = {"word": Word.parse(_require(args.word, "--word")),
                  "lam": parse_point(_require(args.point, "--point")),
                  "k_max": args.k_max}
    elif checker == "check_return":
        kwargs = {"word": Word.parse(_require(args.word, "--word")),
                  "lam": parse_point(_require(args.point, "--point")),
                  "k": args.k}
    elif checker in ("check_invariant_locus_stem", "check_fix_propagation"):
        trunc = expand(spec, args.depth)
        try:
            locus = _pick_locus(trunc, args.locus)
        except NoLoci:
            out.line(f"SKIP       {checker}  (no branch loci in this window)")
            out.payload = {"check": checker, "verdict": "skip"}
            return 0
        if checker == "check_fix_propagation":
            kwargs = {"locus": locus, "radius": args.word_len}
        else:
            kwargs = {"word": Word.parse(_require(args.word, "--word")),
                      "locus": locus}
    elif checker == "check_faithfulness":
        kwargs = {"max_word_len": args.word_len}
    elif checker == "check_intermediate_fixed":
        kwargs = {"word": Word.parse(_require(args.word, "--word")),
                  "x_pos": parse_point(_require(args.pos, "--pos")),
                  "x_neg": parse_point(_require(args.neg, "--neg"))}
    elif checker == "screen_infinite_locus":
        kwargs = {"max_word_len": args.word_len}
    if checker in SCREENS:
        out.line(f"note: {SCREEN_DISCLAIMER}")
    rep = _run_instance(spec, args.depth, checker, kwargs)
    render_report(out, rep)
    out.payload = rep.to_dict()
    return 1 if rep.verdict == VIOLATION else 0


def _require(value, flag):
    if value is None:
        raise SystemExit2(f"{flag} is required for this checker")
    return value


# ---------------------------------------------------------------------------
# argument plumbing


def _add_model_args(p):
    p.add_argument("--gallery", choices=GALLERY_NAMES)
    p.add_argument("--spec", help="model document file")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--json", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="leafspace",
        description="models of non-Hausdorff 1-manifold leaf spaces with group actions")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (("validate", cmd_validate), ("expand", cmd_expand),
                     ("loci", cmd_loci)):
        p = sub.add_parser(name)
        _add_model_args(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("compare")
    _add_model_args(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("path")
    _add_model_args(p)
    p.add_argument("--from", dest="frm", required=True)
    p.add_argument("--to", required=True)
    p.set_defaults(fn=cmd_path)

    p = sub.add_parser("classify")
    _add_model_args(p)
    p.add_argument("--word", required=True)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("stab")
    _add_model_args(p)
    p.add_argument("--locus", type=int, default=0)
    p.add_argument("--word-len", type=int, default=6)
    p.set_defaults(fn=cmd_stab)

    p = sub.add_parser("check")
    p.add_argument("checker")
    _add_model_args(p)
    p.add_argument("--word")
    p.add_argument("--from", dest="frm")
    p.add_argument("--to")
    p.add_argument("--point")
    p.add_argument("--pos")
    p.add_argument("--neg")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--locus", type=int, default=0)
    p.add_argument("--word-len", type=int, default=6)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("gallery")
    p.add_argument("name")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_gallery)

    p = sub.add_parser("random")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--loci", type=int, nargs=2, default=(1, 3))
    p.add_argument("--sizes", type=int, nargs=2, default=(2, 4))
    p.add_argument("--sign-mix", type=float, default=0.5)
    p.add_argument("--extra", type=int, default=2)
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_random)

    p = sub.add_parser("suite")
    _add_model_args(p)
    p.add_argument("--word-len", type=int, default=6)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_suite)

    return parser


def main(argv=None, stream=None):
    stream = stream or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    out = Output(getattr(args, "json", False))
    try:
        code = args.fn(args, out)
    except SystemExit2 as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, LeafSpaceError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    out.emit(stream)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
