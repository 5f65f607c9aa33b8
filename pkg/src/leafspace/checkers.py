"""Executable consistency checks for models with group actions.

Each checker returns a :class:`CheckReport` with verdict pass /
violation / truncated, or raises :class:`PreconditionFailed` when its
hypothesis does not hold for the given arguments.  Violation witnesses
replay: re-running the cited primitive operations on the witness
reproduces the violation.

Checkers marked ``screen=True`` (fix propagation, faithfulness, the
infinite-locus screen) test necessary conditions for a model to arise
from a leafwise hyperbolic taut foliation: a Violation there means the
model is not realizable by such a foliation, not that a theorem failed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    PreconditionFailed,
    Tri,
    TruncatedError,
    mid_point,
    require_valid,
)
from .paths import Comparability, compare, path, sample_points
from .action import (
    Word,
    act,
    act_cell,
    act_locus,
    branching_type,
    canonical_points,
    classify_element,
    comparable_sample,
    fingerprint,
    in_comparable_set,
    is_identity_action,
)

PASS, VIOLATION, TRUNCATED = "pass", "violation", "truncated"

SCREEN_DISCLAIMER = (
    "realizability screen: a Violation means this model cannot be the leaf "
    "space of a leafwise hyperbolic taut foliation, not that a theorem failed")


@dataclass(frozen=True)
class CheckReport:
    name: str
    verdict: str
    witness: tuple = ()         # sorted (key, value-str) pairs
    depth: int = 0
    word_bound: int | None = None
    screen: bool = False
    notes: tuple = ()

    @staticmethod
    def make(name, verdict, witness=None, depth=0, word_bound=None, screen=False, notes=()):
        items = tuple(sorted((k, str(v)) for k, v in (witness or {}).items()))
        return CheckReport(name, verdict, items, depth, word_bound, screen, tuple(notes))

    def to_dict(self):
        return {
            "check": self.name,
            "verdict": self.verdict,
            "witness": dict(self.witness),
            "depth": self.depth,
            "word_bound": self.word_bound,
            "screen": self.screen,
            "notes": list(self.notes),
        }


def word_sort_key(word):
    return (len(word), tuple((n, 0 if e > 0 else 1) for n, e in word.letters))


def reduced_words(names, max_len, include_identity=True):
    """All reduced words of length <= max_len over the given generator
    names, in deterministic order (shorter first, positive letters first)."""
    alphabet = [(n, e) for n in sorted(names) for e in (1, -1)]
    out = [Word.identity()] if include_identity else []
    layer = [()]
    for _ in range(max_len):
        nxt = []
        for letters in layer:
            for let in alphabet:
                if letters and letters[-1] == (let[0], -let[1]):
                    continue
                nxt.append(letters + (let,))
        out.extend(Word(ls) for ls in nxt)
        layer = nxt
    out.sort(key=word_sort_key)
    return out


def _certified(spec, word, point, depth, want, label):
    """Require a certified comparison between a point and its image."""
    from .action import image_relation

    trunc = spec.window(depth)
    trunc.require_point(point)
    rel = image_relation(spec, trunc, point, act(spec, word, point))
    if rel is None:
        return None
    if rel is not want:
        raise PreconditionFailed(f"{label}: expected {want.value}, got {rel.value}")
    return rel


def check_lower_bound(spec, word, lam, mu, depth):
    """On a one-sided-positively-branching model, a common lower bound of
    a point and its image is itself comparable with its own image."""
    bt = branching_type(spec, depth)
    if bt.value != "one_sided_positive":
        raise PreconditionFailed(f"needs one_sided_positive branching, model is {bt.value}")
    trunc = spec.window(depth)
    image_mu = act(spec, word, mu)
    for a, b, label in ((lam, mu, "lam < mu"), (lam, image_mu, "lam < w(mu)")):
        trunc.require_point(a)
        if not trunc.contains_point(b):
            return CheckReport.make("check_lower_bound", TRUNCATED, depth=depth,
                                    notes=("bound leaves the window",))
        rel = compare(trunc, a, b)
        if rel is Comparability.TRUNCATED:
            return CheckReport.make("check_lower_bound", TRUNCATED, depth=depth)
        if rel is not Comparability.LESS:
            raise PreconditionFailed(f"{label} fails: {rel.value}")
    member = in_comparable_set(spec, word, lam, depth)
    if member is Tri.YES:
        return CheckReport.make("check_lower_bound", PASS, depth=depth,
                                witness={"word": word, "lam": lam})
    if member is Tri.TRUNCATED:
        return CheckReport.make("check_lower_bound", TRUNCATED, depth=depth)
    return CheckReport.make("check_lower_bound", VIOLATION, depth=depth,
                            witness={"word": word, "lam": lam, "membership": "no"})


def check_path_in_comparable_set(spec, word, lam, mu, depth):
    """The connection between two points comparable with their images
    stays inside the comparable set, and its junction points are fixed."""
    name = "check_path_in_comparable_set"
    for pt, label in ((lam, "lam"), (mu, "mu")):
        member = in_comparable_set(spec, word, pt, depth)
        if member is Tri.NO:
            raise PreconditionFailed(f"{label} is not comparable with its image")
        if member is Tri.TRUNCATED:
            return CheckReport.make(name, TRUNCATED, depth=depth,
                                    notes=(f"{label} membership undecided",))
    trunc = spec.window(depth)
    try:
        gamma = path(trunc, lam, mu)
    except TruncatedError:
        return CheckReport.make(name, TRUNCATED, depth=depth,
                                notes=("path leaves the window",))
    truncated = False
    for j, junction in enumerate(gamma.junctions, start=1):
        for pt, role in ((junction.arrive, "arrive"), (junction.depart, "depart")):
            if act(spec, word, pt) != pt:
                return CheckReport.make(name, VIOLATION, depth=depth, witness={
                    "word": word, "junction": j, "point": pt, role: act(spec, word, pt)})
    for pt in sample_points(gamma):
        member = in_comparable_set(spec, word, pt, depth)
        if member is Tri.NO:
            return CheckReport.make(name, VIOLATION, depth=depth,
                                    witness={"word": word, "point": pt})
        truncated = truncated or member is Tri.TRUNCATED
    if truncated:
        return CheckReport.make(name, TRUNCATED, depth=depth)
    return CheckReport.make(name, PASS, depth=depth,
                            witness={"word": word, "path_length": gamma.length})


def _vertex_sides(trunc, vcell):
    """Per side of a vertex: (neighboring cells, boundary kind or None)."""
    from .core import LOW, HIGH

    sides = []
    for side in (LOW, HIGH):
        nbrs = []
        boundary = None
        for provider, in_window in trunc._germ_providers(vcell, side):
            if provider[0] == "cell" and in_window:
                nbrs.append(provider[1:3])
            elif provider[0] == "chain":
                nbrs.append(trunc._tail_neighbor(provider))
            else:
                boundary = "cut"
        if not nbrs and boundary is None:
            boundary = "cut"
        sides.append((tuple(nbrs), boundary))
    return sides


def check_connected_open(spec, word, depth):
    """The comparable set of a word, sampled on window cells, induces a
    connected subgraph and is open at the sampled resolution."""
    name = "check_connected_open"
    trunc = spec.window(depth)
    require_valid(trunc)
    sweep = comparable_sample(spec, word, depth)
    status = {p.cell: a for p, a in sweep.answers}
    yes_cells = sorted(c for c, a in status.items() if a is Tri.YES)
    if not yes_cells:
        note = "comparable set empty in window" if not sweep.touched_truncation \
            else "comparable set empty in window (sweep truncated)"
        return CheckReport.make(name, PASS, depth=depth,
                                witness={"word": word}, notes=(note,))

    def components(cells):
        cells = set(cells)
        comps = []
        while cells:
            seed = min(cells)
            comp, stack = {seed}, [seed]
            while stack:
                for nbr in trunc.cell_neighbors(stack.pop()):
                    if nbr in cells and nbr not in comp:
                        comp.add(nbr)
                        stack.append(nbr)
            comps.append(comp)
            cells -= comp
        return comps

    comps = components(yes_cells)
    if len(comps) > 1:
        widened = components([c for c, a in status.items()
                              if a in (Tri.YES, Tri.TRUNCATED)])
        if len(widened) < len(comps):
            return CheckReport.make(name, TRUNCATED, depth=depth, witness={"word": word},
                                    notes=("components join only through undecided cells",))
        return CheckReport.make(name, VIOLATION, depth=depth, witness={
            "word": word, "components": len(comps),
            "cells": " | ".join(str(sorted(c)[0]) for c in comps)})

    for cell in yes_cells:
        if not trunc.has_vertex(cell):
            continue        # an edge cell's interior is open by itself
        for nbrs, boundary in _vertex_sides(trunc, cell):
            if boundary in ("open", "cut"):
                continue
            if any(status.get(n) in (Tri.YES, Tri.TRUNCATED) for n in nbrs):
                continue
            return CheckReport.make(name, VIOLATION, depth=depth, witness={
                "word": word, "cell": f"{cell[0]}[{cell[1]}]",
                "reason": "closed side at a sampled vertex"})
    notes = ("sweep touched truncated ends",) if sweep.touched_truncation else ()
    return CheckReport.make(name, PASS, depth=depth, notes=notes,
                            witness={"word": word, "yes_cells": len(yes_cells)})


def check_odd_path(spec, word, lam, k_max, depth):
    """A point whose connection to its image has odd length forces every
    power of the word to have an empty comparable set."""
    name = "check_odd_path"
    member = in_comparable_set(spec, word, lam, depth)
    if member is Tri.YES:
        raise PreconditionFailed("lam is comparable with its image")
    if member is Tri.TRUNCATED:
        return CheckReport.make(name, TRUNCATED, depth=depth,
                                notes=("membership of lam undecided",))
    trunc = spec.window(depth)
    gamma = path(trunc, lam, act(spec, word, lam))
    if gamma.length % 2 == 0:
        raise PreconditionFailed(f"path length {gamma.length} is even")
    for k in range(1, k_max + 1):
        power = word ** k
        for x in canonical_points(trunc):
            if in_comparable_set(spec, power, x, depth) is Tri.YES:
                return CheckReport.make(name, VIOLATION, depth=depth, witness={
                    "word": word, "k": k, "point": x})
    return CheckReport.make(name, PASS, depth=depth, witness={
        "word": word, "path_length": gamma.length, "k_max": k_max})


def check_return(spec, word, lam, k, depth):
    """For lam incomparable with its image but comparable with its k-th
    image, the middle junction of the connection returns: the word sends
    its arrival point to its departure point, and the k-th power fixes
    the arrival point."""
    name = "check_return"
    if k <= 1:
        raise PreconditionFailed("k must exceed 1")
    member = in_comparable_set(spec, word, lam, depth)
    if member is Tri.YES:
        raise PreconditionFailed("lam is comparable with its image")
    if member is Tri.TRUNCATED:
        return CheckReport.make(name, TRUNCATED, depth=depth)
    member_k = in_comparable_set(spec, word ** k, lam, depth)
    if member_k is Tri.NO:
        raise PreconditionFailed(f"lam is not comparable with its image under the {k}-th power")
    if member_k is Tri.TRUNCATED:
        return CheckReport.make(name, TRUNCATED, depth=depth)
    trunc = spec.window(depth)
    try:
        gamma = path(trunc, lam, act(spec, word, lam))
    except TruncatedError:
        return CheckReport.make(name, TRUNCATED, depth=depth)
    if gamma.length % 2 == 1:
        raise PreconditionFailed(
            f"path length {gamma.length} is odd, contradicting comparability of the power")
    m = gamma.length // 2
    junction = gamma.junctions[m - 1]
    arrive, depart = junction.arrive, junction.depart
    if act(spec, word, arrive) != depart:
        return CheckReport.make(name, VIOLATION, depth=depth, witness={
            "word": word, "m": m, "arrive": arrive,
            "image": act(spec, word, arrive), "expected": depart})
    if act(spec, word ** k, arrive) != arrive:
        return CheckReport.make(name, VIOLATION, depth=depth, witness={
            "word": word, "k": k, "m": m, "arrive": arrive,
            "image": act(spec, word ** k, arrive)})
    return CheckReport.make(name, PASS, depth=depth, witness={
        "word": word, "k": k, "m": m, "arrive": arrive, "depart": depart})


def _stem_cells_outward(trunc, locus):
    """Stem cells ordered from the locus outward; None when the stem does
    not meet the window."""
    kind = locus.stem[0]
    if kind == "cell_end":
        cell = locus.stem[1:3]
        return [cell] if trunc.has_edge(cell) else None
    fam, side = locus.stem[1], locus.stem[2]
    indices = range(-trunc.depth, trunc.depth + 1)
    ordered = list(indices) if side == "neg" else list(reversed(indices))
    return [(fam, i) for i in ordered]


def check_invariant_locus_stem(spec, word, locus, depth):
    """A word fixing a locus setwise keeps a whole stem suffix (the
    stem cells nearest the locus) inside its comparable set."""
    name = "check_invariant_locus_stem"
    if act_locus(spec, word, locus.members) != locus.members:
        raise PreconditionFailed("word does not fix the locus setwise")
    trunc = spec.window(depth)
    cells = _stem_cells_outward(trunc, locus)
    if not cells:
        return CheckReport.make(name, TRUNCATED, depth=depth,
                                notes=("stem does not meet the window",))
    run = 0
    for cell in cells:
        member = in_comparable_set(spec, word, mid_point(*cell), depth)
        if member is Tri.YES:
            run += 1
        elif member is Tri.TRUNCATED and run == 0:
            return CheckReport.make(name, TRUNCATED, depth=depth)
        else:
            break
    if run == 0:
        return CheckReport.make(name, VIOLATION, depth=depth, witness={
            "word": word, "stem_cell": f"{cells[0][0]}[{cells[0][1]}]"})
    return CheckReport.make(name, PASS, depth=depth, witness={
        "word": word, "suffix_cells": run})


@dataclass(frozen=True)
class StabilizerBall:
    """All reduced words up to a radius that fix a locus setwise."""

    locus: tuple                # member cells
    radius: int
    members: tuple              # Words, sorted by (length, letters)
    action_table: tuple         # (word, image member tuple) pairs
    cyclic_at_radius: bool
    cyclic_generator: Word | None
    acts_nontrivially: bool


def stabilizer_ball(spec, locus, radius, depth):
    members = locus.members if hasattr(locus, "members") else tuple(sorted(locus))
    trunc = spec.window(depth)
    require_valid(trunc)
    ball = [w for w in reduced_words(spec.generators, radius)
            if act_locus(spec, w, members) == members]
    ball.sort(key=word_sort_key)
    table = tuple((w, tuple(act_cell(spec, w, m) for m in members)) for w in ball)
    nontrivial = any(images != members for _, images in table)

    cyclic, generator = False, None
    nontriv_words = [w for w in ball if not w.is_identity]
    if not nontriv_words:
        cyclic = True
    else:
        have = set(ball) - {Word.identity()}
        for cand in nontriv_words:
            powers = set()
            for base in (cand, cand.inverse()):
                power = base
                while len(power) <= radius:
                    powers.add(power)
                    power = power * base
            if powers == have:
                cyclic, generator = True, cand
                break
    return StabilizerBall(members, radius, tuple(ball), table, cyclic, generator, nontrivial)


def check_fix_propagation(spec, locus, radius, depth):
    """Any stabilizer word fixing one member of a finite locus must fix
    them all; a partial fix flags the model as non-realizable."""
    name = "check_fix_propagation"
    ball = stabilizer_ball(spec, locus, radius, depth)
    for word, images in ball.action_table:
        fixed = tuple(m for m, img in zip(ball.locus, images) if m == img)
        if fixed and len(fixed) < len(ball.locus):
            return CheckReport.make(name, VIOLATION, depth=depth, word_bound=radius,
                                    screen=True, witness={
                                        "word": word,
                                        "fixes": ",".join(f"{f}[{i}]" for f, i in fixed),
                                        "locus_size": len(ball.locus)})
    return CheckReport.make(name, PASS, depth=depth, word_bound=radius, screen=True,
                            witness={"ball_size": len(ball.members)})


def check_faithfulness(spec, max_word_len, depth):
    """On a branching model, no nontrivial word may act as the identity."""
    name = "check_faithfulness"
    bt = branching_type(spec, depth)
    if bt.value == "none":
        raise PreconditionFailed(
            "model shows no branching in the window; a fibration-like model "
            "may act unfaithfully, so the check does not apply")
    for word in reduced_words(spec.generators, max_word_len, include_identity=False):
        if is_identity_action(spec, word):
            return CheckReport.make(name, VIOLATION, depth=depth, word_bound=max_word_len,
                                    screen=True, witness={"word": word})
    return CheckReport.make(name, PASS, depth=depth, word_bound=max_word_len, screen=True)


def check_intermediate_fixed(spec, word, x_pos, x_neg, depth):
    """A word moving one point up and another down fixes a point between
    them; for an incomparable pair the fixed witness sits in a locus."""
    name = "check_intermediate_fixed"
    if _certified(spec, word, x_pos, depth, Comparability.LESS, "x_pos") is None:
        return CheckReport.make(name, TRUNCATED, depth=depth)
    if _certified(spec, word, x_neg, depth, Comparability.GREATER, "x_neg") is None:
        return CheckReport.make(name, TRUNCATED, depth=depth)
    trunc = spec.window(depth)
    try:
        gamma = path(trunc, x_pos, x_neg)
    except TruncatedError:
        return CheckReport.make(name, TRUNCATED, depth=depth)
    witness = None
    for pt in sample_points(gamma):
        if act(spec, word, pt) == pt:
            witness = pt
            break
    if witness is None:
        if trunc.has_truncation:
            return CheckReport.make(name, TRUNCATED, depth=depth,
                                    notes=("no fixed point sampled in window",))
        return CheckReport.make(name, VIOLATION, depth=depth,
                                witness={"word": word, "path_length": gamma.length})
    incomparable = compare(trunc, x_pos, x_neg) is Comparability.INCOMPARABLE
    in_locus = witness.is_vertex and trunc.locus_group_of(witness.cell) is not None
    if incomparable and not in_locus:
        return CheckReport.make(name, VIOLATION, depth=depth, witness={
            "word": word, "witness": witness,
            "reason": "incomparable endpoints but witness not in a locus"})
    return CheckReport.make(name, PASS, depth=depth, witness={
        "word": word, "witness": witness,
        "in_locus": "yes" if in_locus else "no"})


def screen_infinite_locus(spec, max_word_len, depth):
    """Consistency screen for models whose declared loci are all finite:
    every tangentiable word must also be transversable (else its loop is
    non-transversable and the model would need an infinite locus).  Also
    reports neither-candidates against the two-sided-branching remark."""
    name = "screen_infinite_locus"
    trunc = spec.window(depth)
    require_valid(trunc)
    bt = branching_type(spec, depth)
    seen = set()
    neither = []
    tainted = False
    for word in reduced_words(spec.generators, max_word_len, include_identity=False):
        fp = fingerprint(spec, word)
        if fp in seen:
            continue
        seen.add(fp)
        if is_identity_action(spec, word):
            continue
        profile = classify_element(spec, word, depth)
        tangent = profile.tangentiable.value is Tri.YES
        transversable = (profile.pos_transversable.value is Tri.YES
                         or profile.neg_transversable.value is Tri.YES)
        if tangent and not transversable:
            if trunc.has_truncation:
                tainted = True
            else:
                return CheckReport.make(name, VIOLATION, depth=depth,
                                        word_bound=max_word_len, screen=True,
                                        witness={"word": word,
                                                 "reason": "tangentiable, never transversable"})
        if profile.neither_in_window:
            neither.append(word)
    notes = []
    if neither:
        notes.append("neither-candidates in window: "
                     + ", ".join(str(w) for w in neither[:4]))
        notes.append(f"branching_type={bt.value}: "
                     + ("consistent with the two-sided remark" if bt.value == "two_sided"
                        else "candidates not certified; one-sided window"))
    if tainted:
        return CheckReport.make(name, TRUNCATED, depth=depth, word_bound=max_word_len,
                                screen=True, notes=tuple(notes))
    return CheckReport.make(name, PASS, depth=depth, word_bound=max_word_len,
                            screen=True, notes=tuple(notes))
