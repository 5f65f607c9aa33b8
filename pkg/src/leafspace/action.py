"""Words over generator actions and their effect on a model.

Generators are per-family maps composed with integer index shifts, so a
word's total action is again such a map; two words act identically on the
whole model exactly when their composed maps coincide, which makes the
map a cheap exact fingerprint for deduplication and identity tests.

Window sweeps answer in Tri: a Yes always comes with a witness; a No is
certified only when the sweep closed without touching a truncated end,
otherwise the answer degrades to Truncated (recording whether a witness
was at least absent from the window).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .core import (
    Point,
    Tri,
    UndefinedGenerator,
    mid_point,
    require_valid,
    vertex_point,
)
from .paths import COMPARABLE, Comparability, compare


@dataclass(frozen=True)
class Word:
    """A reduced word over the model's generators.

    ``letters`` is a sequence of (generator name, exponent) with exponent
    +1 or -1; construction cancels adjacent inverse pairs (free reduction
    only -- the acting group is treated as free on the generators)."""

    letters: tuple

    @staticmethod
    def of(letters):
        reduced = []
        for name, exp in letters:
            if exp not in (1, -1):
                raise ValueError("letter exponent must be +1 or -1")
            if reduced and reduced[-1] == (name, -exp):
                reduced.pop()
            else:
                reduced.append((name, exp))
        return Word(tuple(reduced))

    @staticmethod
    def identity():
        return Word(())

    @staticmethod
    def generator(name, power=1):
        exp = 1 if power > 0 else -1
        return Word.of([(name, exp)] * abs(power))

    @staticmethod
    def parse(text):
        """Parse e.g. "g", "g^3", "g^-1*h", "g g h^-2"."""
        letters = []
        for token in re.split(r"[\s*]+", text.strip()):
            if not token or token == "1":
                continue
            m = re.fullmatch(r"([A-Za-z_]\w*)(?:\^(-?\d+))?", token)
            if m is None:
                raise ValueError(f"cannot parse word token {token!r}")
            name, power = m.group(1), int(m.group(2) or 1)
            exp = 1 if power > 0 else -1
            letters.extend([(name, exp)] * abs(power))
        return Word.of(letters)

    @property
    def is_identity(self):
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other):
        return Word.of(self.letters + other.letters)

    def inverse(self):
        return Word(tuple((name, -exp) for name, exp in reversed(self.letters)))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = Word.identity()
        for _ in range(k):
            out = out * self
        return out

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        for name, exp in self.letters:
            if parts and parts[-1][0] == name and (parts[-1][1] > 0) == (exp > 0):
                parts[-1][1] += exp
            else:
                parts.append([name, exp])
        return "*".join(n if e == 1 else f"{n}^{e}" for n, e in parts)


def _generator_map(spec, name, exp):
    gen = spec.generators.get(name)
    if gen is None:
        raise UndefinedGenerator(f"generator {name!r} is not defined on this model")
    return gen.maps if exp == 1 else gen.inverse_maps()


def word_map(spec, word):
    """Composed cell map of a word: family -> (image family, shift).
    Letters apply right to left.  Exact on the whole model, so equality of
    maps is equality of actions (the action fingerprint)."""
    total = {fam: (fam, 0) for fam in spec.families}
    for name, exp in reversed(word.letters):
        step = _generator_map(spec, name, exp)
        total = {fam: (step[img][0], shift + step[img][1])
                 for fam, (img, shift) in total.items()}
    return total


def fingerprint(spec, word):
    return tuple(sorted(word_map(spec, word).items()))


def is_identity_action(spec, word):
    return all(img == fam and shift == 0 for fam, (img, shift) in word_map(spec, word).items())


def act_cell(spec, word, cell):
    img, shift = word_map(spec, word)[cell[0]]
    return (img, cell[1] + shift)


def act(spec, word, point):
    """Image of a point; interior coordinates are preserved because
    actions restrict to index shifts on each family."""
    return Point(act_cell(spec, word, point.cell), point.t)


def act_locus(spec, word, members):
    return tuple(sorted(act_cell(spec, word, m) for m in members))


def canonical_points(trunc):
    """One representative point per window cell: the vertex itself, or
    the edge midpoint (comparability is constant on cell interiors under
    shift actions)."""
    pts = [vertex_point(*c) for c in trunc.vertex_cells]
    pts += [mid_point(*c) for c in trunc.edge_cells]
    return pts


def _same_glued_chain_relation(spec, point, image):
    """Exact comparison when both points sit on one glued chain, which is
    a totally ordered ray; decides images that land beyond the window."""
    fam = point.cell[0]
    if image.cell[0] != fam:
        return None
    f = spec.families[fam]
    if f.kind != "edge" or f.glue is None:
        return None
    a, b = (point.cell[1], point.t), (image.cell[1], image.t)
    if a == b:
        return Comparability.EQUAL
    if a[0] == b[0]:
        return Comparability.LESS if a[1] < b[1] else Comparability.GREATER
    ascending = a[0] < b[0] if f.glue == 1 else a[0] > b[0]
    return Comparability.LESS if ascending else Comparability.GREATER


def image_relation(spec, trunc, point, image):
    """Comparability of a point with its image, or None when the window
    cannot decide it."""
    if trunc.contains_point(image):
        rel = compare(trunc, point, image)
        return None if rel is Comparability.TRUNCATED else rel
    return _same_glued_chain_relation(spec, point, image)


def in_comparable_set(spec, word, point, depth):
    """Whether the point is comparable with its image, on the given window."""
    trunc = spec.window(depth)
    trunc.require_point(point)
    image = act(spec, word, point)
    rel = image_relation(spec, trunc, point, image)
    if rel is None:
        return Tri.TRUNCATED
    return Tri.YES if rel in COMPARABLE else Tri.NO


@dataclass(frozen=True)
class ComparableSample:
    """A recorded membership sweep for one word at one depth."""

    word: Word
    depth: int
    answers: tuple        # ((Point, Tri), ...) in canonical order

    def points(self, value):
        return [p for p, a in self.answers if a is value]

    @property
    def touched_truncation(self):
        return any(a is Tri.TRUNCATED for _, a in self.answers)


def comparable_sample(spec, word, depth):
    trunc = spec.window(depth)
    answers = tuple((p, in_comparable_set(spec, word, p, depth))
                    for p in canonical_points(trunc))
    return ComparableSample(word, depth, answers)


def fixed_cells(spec, word, depth):
    """Window cells the word maps to themselves.  Under shift-only
    actions a fixed edge cell is fixed pointwise, so fixed cells and
    fixed points coincide."""
    trunc = spec.window(depth)
    fixed_families = {fam for fam, (img, shift) in word_map(spec, word).items()
                      if img == fam and shift == 0}
    return sorted(c for c in trunc.vertex_cells + trunc.edge_cells
                  if c[0] in fixed_families)


class Found(enum.Enum):
    YES = "yes"
    NO = "no"                  # certified: the sweep closed
    NO_IN_WINDOW = "no*"       # absent from the window, not certified


@dataclass(frozen=True)
class ProfileEntry:
    value: Tri
    witness: Point | None
    found: Found

    def __str__(self):
        if self.value is Tri.YES:
            return f"yes ({self.witness})"
        return "no" if self.found is Found.NO else "no within window (truncated)"


@dataclass(frozen=True)
class ElementProfile:
    word: Word
    depth: int
    tangentiable: ProfileEntry
    pos_transversable: ProfileEntry
    neg_transversable: ProfileEntry

    @property
    def neither_in_window(self):
        return all(e.value is not Tri.YES for e in
                   (self.tangentiable, self.pos_transversable, self.neg_transversable))


def _entry(witness, tainted):
    if witness is not None:
        return ProfileEntry(Tri.YES, witness, Found.YES)
    if tainted:
        return ProfileEntry(Tri.TRUNCATED, None, Found.NO_IN_WINDOW)
    return ProfileEntry(Tri.NO, None, Found.NO)


def classify_element(spec, word, depth):
    """Fixed-point, upward and downward witnesses for a word.

    A No is certified only when the exhaustive sweep over window cells
    closed without any truncated answer; otherwise the entry degrades to
    Truncated with found = no-in-window.
    """
    trunc = spec.window(depth)
    require_valid(trunc)

    fixed = fixed_cells(spec, word, depth)
    tan_witness = None
    for cell in fixed:
        tan_witness = (vertex_point(*cell) if trunc.has_vertex(cell) else mid_point(*cell))
        break
    pos_witness = neg_witness = None
    tainted = trunc.has_truncation
    for p in canonical_points(trunc):
        rel = image_relation(spec, trunc, p, act(spec, word, p))
        if rel is None:
            tainted = True
        elif rel is Comparability.LESS and pos_witness is None:
            pos_witness = p
        elif rel is Comparability.GREATER and neg_witness is None:
            neg_witness = p
    return ElementProfile(
        word, depth,
        tangentiable=_entry(tan_witness, tainted),
        pos_transversable=_entry(pos_witness, tainted),
        neg_transversable=_entry(neg_witness, tainted),
    )


@dataclass(frozen=True)
class BranchingType:
    value: str                 # "none" | "one_sided_positive" | "one_sided_negative" | "two_sided"
    truncated_caveat: bool     # deeper windows could reveal more loci

    def __str__(self):
        return self.value + ("*" if self.truncated_caveat else "")


def branching_type(spec, depth):
    trunc = spec.window(depth)
    require_valid(trunc)
    signs = {locus.sign for locus in trunc.loci}
    if not signs:
        value = "none"
    elif signs == {"positive"}:
        value = "one_sided_positive"
    elif signs == {"negative"}:
        value = "one_sided_negative"
    else:
        value = "two_sided"
    return BranchingType(value, trunc.has_truncation)
