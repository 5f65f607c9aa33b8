"""Finitely generated models of simply connected non-Hausdorff oriented 1-manifolds.

A model is described by *cell families*: vertex families and edge families,
each either a single cell (``unit``) or one cell per integer (``chain``).
Every edge cell is an open oriented interval with a ``low`` and a ``high``
end.  Ends attach to vertices in one of three ways:

* ``vertex`` -- the end is glued to a vertex cell (the vertex becomes the
  endpoint of the closed-up edge);
* ``limit`` -- the end accumulates on a set of vertices without reaching
  them.  A limit set of size >= 2 is a *branch locus*: its members are
  pairwise non-separated and the limiting edge end is the locus *stem*.
  A branch locus is *positive* when the stem approaches its members from
  below (the limit sits on the stem's high end) and *negative* when from
  above;
* ``open`` -- a free end; the manifold simply stops there.

Edge chains come in two flavours.  An *unlinked* chain has independent
cells, each carrying its own end rules (index offsets are applied per
cell).  A *glued* chain (``glue`` = +1 or -1) concatenates consecutive
cells into a single long ray or line: cell n's high end meets cell
(n+glue)'s low end, so the whole chain ascends with n (glue +1) or
against n (glue -1).  The two ends at infinity of a glued chain each
carry a chain-end rule, ``open`` or ``limit``: a limit at infinity is how
an interval accumulates onto a vertex (size 1) or a branch locus
(size >= 2) after infinitely many cells.

All queries run on a :class:`Truncation`: the finite window of cells with
indices in [-depth, depth].  Ends whose continuation falls outside the
window are recorded as truncated ends; beyond a truncated glued-chain end
the structure is still exact (a monotone run of one family, then the
declared chain-end rule), which lets paths traverse elided tails without
guessing.

Points on the model are vertex cells or exact rational positions in the
interior of edge cells.  Group actions are per-family maps composed with
integer index shifts; see :mod:`leafspace.action`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction


class Tri(enum.Enum):
    """Three-valued answer for queries a finite window cannot always settle."""

    YES = "yes"
    NO = "no"
    TRUNCATED = "truncated"

    def __str__(self):
        return self.value


LOW, HIGH = "low", "high"
NEG, POS = "neg", "pos"          # chain side: index -> -inf / +inf
POSITIVE, NEGATIVE = "positive", "negative"


class LeafSpaceError(Exception):
    """Base class for model errors."""


class UnresolvedName(LeafSpaceError):
    """An attachment or generator references an unknown family."""


class BadOffset(LeafSpaceError):
    """An index expression is not an integer shift."""


class InvalidModel(LeafSpaceError):
    """Operation requires a truncation that passes validation."""


class PointOutOfRange(LeafSpaceError):
    """A query point does not lie in the truncation window."""


class UndefinedGenerator(LeafSpaceError):
    """A word uses a generator the model does not define."""


class TruncatedError(LeafSpaceError):
    """The answer needs cells beyond the depth window."""


class PreconditionFailed(LeafSpaceError):
    """A checker's hypothesis does not hold for the given arguments."""


class UnknownName(LeafSpaceError):
    """Unknown gallery entry."""


# ---------------------------------------------------------------------------
# spec data


@dataclass(frozen=True)
class Family:
    name: str
    kind: str                 # "edge" | "vertex"
    chain: bool = False       # integer chain vs single cell
    glue: int | None = None   # edge chains only: +1 / -1 links consecutive cells


@dataclass(frozen=True)
class EndRule:
    """Attachment rule for one end of an unlinked edge family.

    ``targets`` holds (vertex family, offset) pairs: one for ``vertex``,
    one or more for ``limit``, none for ``open``.  For a chain edge the
    offset is added to the cell index; for a unit edge it is the absolute
    index into a chain target (and must be 0 for a unit target).
    """

    kind: str                                  # "open" | "vertex" | "limit"
    targets: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(sorted(self.targets)))


@dataclass(frozen=True)
class ChainEndRule:
    """Rule for a glued chain's end at infinity; targets are unit vertex families."""

    kind: str                                  # "open" | "limit"
    targets: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(sorted(self.targets)))


def open_end():
    return EndRule("open")


def to_vertex(family, offset=0):
    return EndRule("vertex", ((family, offset),))


def to_limit(*targets):
    return EndRule("limit", tuple(targets))


@dataclass(frozen=True)
class GeneratorAction:
    """One generator of the acting group: per-family image plus index shift.

    ``maps[f] = (f', b)`` sends cell f[n] to f'[n+b], preserving edge
    orientation and interior coordinates.
    """

    name: str
    maps: dict

    def inverse_maps(self):
        return {img: (fam, -shift) for fam, (img, shift) in self.maps.items()}


@dataclass(frozen=True)
class Point:
    """A position: a vertex cell, or an interior point of an edge cell.

    ``t`` is None for a vertex, else an exact rational strictly between
    0 and 1 measured from the low end of the edge.
    """

    cell: tuple      # (family, index); index 0 for unit families
    t: Fraction | None = None

    def __post_init__(self):
        if self.t is not None:
            t = Fraction(self.t)
            if not 0 < t < 1:
                raise ValueError("interior coordinate must be in (0,1)")
            object.__setattr__(self, "t", t)

    @property
    def is_vertex(self):
        return self.t is None

    def sort_key(self):
        return (self.cell, self.t if self.t is not None else Fraction(-1))

    def __str__(self):
        fam, idx = self.cell
        base = f"{fam}[{idx}]"
        return base if self.t is None else f"{base}:{self.t}"


def vertex_point(family, index=0):
    return Point((family, index))


def mid_point(family, index=0):
    return Point((family, index), Fraction(1, 2))


class LeafSpaceSpec:
    """A finitely generated model; immutable after construction by convention."""

    def __init__(self):
        self.families = {}
        self.ends = {}          # (edge family, "low"/"high") -> EndRule
        self.chain_ends = {}    # (edge family, "neg"/"pos") -> ChainEndRule
        self.generators = {}
        self.marks = {}
        self._windows = {}

    # -- construction helpers -------------------------------------------

    def add_vertex(self, name, chain=False):
        self._add_family(Family(name, "vertex", chain))

    def add_edge(self, name, low, high, chain=False):
        """Unit edge or unlinked chain edge with per-cell end rules."""
        self._add_family(Family(name, "edge", chain))
        self.ends[(name, LOW)] = low
        self.ends[(name, HIGH)] = high

    def add_glued_chain(self, name, glue, neg, pos):
        """Edge chain whose cells concatenate; ``neg``/``pos`` rule the two
        ends at infinity (index -> -inf / +inf)."""
        if glue not in (1, -1):
            raise BadOffset(f"glue direction must be +1 or -1, got {glue!r}")
        self._add_family(Family(name, "edge", True, glue))
        self.chain_ends[(name, NEG)] = neg
        self.chain_ends[(name, POS)] = pos

    def _add_family(self, fam):
        if fam.name in self.families:
            raise UnresolvedName(f"duplicate family {fam.name!r}")
        self.families[fam.name] = fam

    def add_generator(self, name, maps, check=True):
        gen = GeneratorAction(name, dict(maps))
        if check:
            problems = automorphism_problems(self, gen)
            if problems:
                raise UnresolvedName(
                    f"generator {name!r} is not an automorphism: " + "; ".join(problems))
        self.generators[name] = gen

    def add_mark(self, name, point):
        self.marks[name] = point

    # -- well-formedness -------------------------------------------------

    def check_wellformed(self):
        """Raise UnresolvedName/BadOffset for unresolvable declarations."""
        for (fam, end), rule in list(self.ends.items()) + list(self.chain_ends.items()):
            if fam not in self.families:
                raise UnresolvedName(f"end rule on unknown family {fam!r}")
            for tgt in rule.targets:
                if isinstance(tgt, tuple):
                    vfam, off = tgt
                    if not isinstance(off, int):
                        raise BadOffset(f"offset {off!r} on {fam}.{end} is not an integer shift")
                else:
                    vfam = tgt
                if vfam not in self.families:
                    raise UnresolvedName(f"{fam}.{end} targets unknown family {vfam!r}")
        for gen in self.generators.values():
            for fam, (img, shift) in gen.maps.items():
                if fam not in self.families or img not in self.families:
                    raise UnresolvedName(f"generator {gen.name!r} maps unknown family")
                if not isinstance(shift, int):
                    raise BadOffset(f"generator {gen.name!r} shift {shift!r} is not an integer")

    def window(self, depth):
        """Cached truncation at the given depth."""
        if depth not in self._windows:
            self._windows[depth] = expand(self, depth)
        return self._windows[depth]


def automorphism_problems(spec, gen):
    """Check that a generator's cell map induces a bijection of the
    attachment set; returns a list of human-readable problems (empty when
    the map is an automorphism).  Limit rules must map onto limit rules
    with the same member set, so loci map to loci preserving sign.
    """
    problems = []
    if sorted(gen.maps) != sorted(spec.families):
        problems.append("cell map must cover every family exactly once")
        return problems
    images = [img for img, _ in gen.maps.values()]
    if sorted(images) != sorted(spec.families):
        problems.append("family map is not a bijection")
        return problems
    for fam, (img, shift) in gen.maps.items():
        f, g = spec.families[fam], spec.families.get(img)
        if g is None:
            problems.append(f"{fam} -> unknown family {img}")
            continue
        if (f.kind, f.chain, f.glue) != (g.kind, g.chain, g.glue):
            problems.append(f"{fam} -> {img} changes kind/indexing/glue")
        if not f.chain and shift != 0:
            problems.append(f"unit family {fam} mapped with nonzero shift")

    def image_rule(rule, shift):
        tgts = []
        for vfam, off in rule.targets:
            vimg, vshift = gen.maps[vfam]
            if spec.families[vfam].chain:
                tgts.append((vimg, off + vshift - shift))
            else:
                tgts.append((vimg, off))
        return EndRule(rule.kind, tuple(tgts))

    for (fam, end), rule in spec.ends.items():
        img, shift = gen.maps[fam]
        want = image_rule(rule, shift)
        have = spec.ends.get((img, end))
        if have != want:
            problems.append(f"{fam}.{end} does not map onto {img}.{end}")
    for (fam, side), rule in spec.chain_ends.items():
        img, _ = gen.maps[fam]
        want = ChainEndRule(rule.kind, tuple(gen.maps[v][0] for v in rule.targets))
        have = spec.chain_ends.get((img, side))
        if have != want:
            problems.append(f"{fam} chain end {side} does not map onto {img}")
    return problems


# ---------------------------------------------------------------------------
# branch loci


@dataclass(frozen=True)
class BranchLocus:
    """A set of >= 2 mutually non-separated vertices with the edge end
    (stem) whose limit set they are."""

    members: tuple           # sorted (family, index) cells
    sign: str                # "positive" | "negative"
    stem: tuple              # ("cell_end", fam, index, end) | ("chain_end", fam, side)

    def key(self):
        return self.members


def chain_end_ascends(glue, side):
    """True when the elided tail at the given chain side goes upward."""
    return (glue == 1) == (side == POS)


# ---------------------------------------------------------------------------
# truncation


@dataclass(frozen=True)
class TruncatedEnd:
    """A cut made by the depth bound, tagged with its symbolic continuation."""

    at: tuple          # (cell, side) for a vertex side, or ("chain", fam, side)
    continuation: str


@dataclass(frozen=True)
class Violation:
    code: str          # "germ-count" | "limit-set" | "not-a-tree" | "shape" | "mark"
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def valid(self):
        return not self.violations


class Truncation:
    """Depth-bounded window of a model: concrete cells plus an adjacency
    graph whose nodes collapse branch loci (the Hausdorffification of the
    window), with elided glued-chain tails kept as explicit edges."""

    def __init__(self, spec, depth):
        self.spec = spec
        self.depth = depth
        self._build_cells()
        self._collect_loci()
        self._build_graph()
        self._scan_truncated_ends()
        self._validation = None

    # -- cells -----------------------------------------------------------

    def _indices(self, fam):
        return range(-self.depth, self.depth + 1) if fam.chain else (0,)

    def _target_index(self, efam, i, vfam, off):
        """Concrete index of a per-cell attachment target."""
        if not self.spec.families[vfam].chain:
            return 0
        return i + off if self.spec.families[efam].chain else off

    def _target_in_range(self, efam, i, vfam, off):
        j = self._target_index(efam, i, vfam, off)
        return not self.spec.families[vfam].chain or abs(j) <= self.depth

    def _build_cells(self):
        spec = self.spec
        self.vertex_cells = []
        self.edge_cells = []
        self.excluded_edges = []
        for name in sorted(spec.families):
            fam = spec.families[name]
            cells = [(name, i) for i in self._indices(fam)]
            if fam.kind == "vertex":
                self.vertex_cells.extend(cells)
            elif fam.glue is not None:
                self.edge_cells.extend(cells)
            else:
                for cell in cells:
                    ok = True
                    for end in (LOW, HIGH):
                        rule = spec.ends.get((name, end))
                        if rule is None:
                            continue
                        for vfam, off in rule.targets:
                            if not self._target_in_range(name, cell[1], vfam, off):
                                ok = False
                    (self.edge_cells if ok else self.excluded_edges).append(cell)
        self.vertex_cells.sort()
        self.edge_cells.sort()
        self._edge_set = set(self.edge_cells)
        self._vertex_set = set(self.vertex_cells)

    def has_vertex(self, cell):
        return cell in self._vertex_set

    def has_edge(self, cell):
        return cell in self._edge_set

    def contains_point(self, p):
        return p.cell in self._vertex_set if p.is_vertex else p.cell in self._edge_set

    def require_point(self, p):
        if not self.contains_point(p):
            raise PointOutOfRange(f"{p} is not in the depth-{self.depth} window")

    # -- loci --------------------------------------------------------------

    def _collect_loci(self):
        # A locus is present once all its members are in the window; its
        # stem edge may lie beyond the cut (the members are non-separated
        # regardless, and collapsing them is what keeps boundary windows
        # connected).
        spec = self.spec
        loci = []
        for (fam, end), rule in sorted(spec.ends.items()):
            if rule.kind != "limit" or len(rule.targets) < 2:
                continue
            offsets = [off for _, off in rule.targets]
            if spec.families[fam].chain:
                stem_indices = range(-self.depth - max(offsets),
                                     self.depth - min(offsets) + 1)
            else:
                stem_indices = (0,)
            for i in stem_indices:
                members = tuple(sorted(
                    (v, self._target_index(fam, i, v, off)) for v, off in rule.targets))
                if all(m in self._vertex_set for m in members):
                    sign = POSITIVE if end == HIGH else NEGATIVE
                    loci.append(BranchLocus(members, sign, ("cell_end", fam, i, end)))
        for (fam, side), rule in sorted(spec.chain_ends.items()):
            if rule.kind != "limit" or len(rule.targets) < 2:
                continue
            members = tuple(sorted((v, 0) for v in rule.targets))
            glue = spec.families[fam].glue
            sign = POSITIVE if chain_end_ascends(glue, side) else NEGATIVE
            loci.append(BranchLocus(members, sign, ("chain_end", fam, side)))
        loci.sort(key=lambda b: (b.members, b.stem))
        self.loci = tuple(loci)

        # union-find over loci sharing members (a vertex may sit in a
        # positive and a negative locus on its two sides)
        parent = list(range(len(loci)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        owner = {}
        for idx, locus in enumerate(loci):
            for m in locus.members:
                if m in owner:
                    parent[find(idx)] = find(owner[m])
                else:
                    owner[m] = idx
        self._locus_group = {}        # vertex cell -> group id (min locus index)
        self._group_loci = {}         # group id -> tuple of locus indices
        for idx in range(len(loci)):
            root = find(idx)
            self._group_loci.setdefault(root, []).append(idx)
        self._group_loci = {min(v): tuple(v) for v in self._group_loci.values()}
        for gid, idxs in self._group_loci.items():
            for li in idxs:
                for m in loci[li].members:
                    self._locus_group[m] = gid
        # member -> [(mate, locus index)] for jump searches inside a node
        self._mates = {}
        for li, locus in enumerate(loci):
            for m in locus.members:
                for m2 in locus.members:
                    if m2 != m:
                        self._mates.setdefault(m, []).append((m2, li))
        for m in self._mates:
            self._mates[m].sort()

    def locus_group_of(self, vcell):
        return self._locus_group.get(vcell)

    def group_members(self, gid):
        out = set()
        for li in self._group_loci[gid]:
            out.update(self.loci[li].members)
        return sorted(out)

    def common_locus(self, m1, m2):
        """Smallest locus index containing both vertices, else None."""
        for mate, li in self._mates.get(m1, ()):
            if mate == m2:
                return li
        return None

    # -- graph --------------------------------------------------------------

    def vertex_node(self, vcell):
        gid = self._locus_group.get(vcell)
        return ("locus", gid) if gid is not None else ("vertex",) + vcell

    def _locus_index_of_stem(self, stem):
        for li, locus in enumerate(self.loci):
            if locus.stem == stem:
                return li
        return None

    def _resolve_cell_end(self, cell, end):
        """(node, anchor) for one end of an in-window edge cell.

        The anchor says what arriving at the node through this end means:
        ("point", vcell) pins a specific vertex, ("stem", locus index)
        arrives along the locus stem (any member reachable), None for
        structural nodes (glue junctions, cuts, open leaves).
        """
        fam, i = cell
        f = self.spec.families[fam]
        if f.glue is not None:
            up_is_next = f.glue == 1
            if (end == HIGH) == up_is_next:
                nbr = i + 1
                junction = ("glue", fam, i)
            else:
                nbr = i - 1
                junction = ("glue", fam, i - 1)
            if abs(nbr) <= self.depth:
                return junction, None
            side = POS if nbr > 0 else NEG
            return ("cut", fam, side), None
        rule = self.spec.ends.get((fam, end))
        if rule is None or rule.kind == "open":
            return ("open", fam, i, end), None
        cells = [(v, self._target_index(fam, i, v, off)) for v, off in rule.targets]
        if rule.kind == "vertex" or len(cells) == 1:
            v = cells[0]
            return self.vertex_node(v), ("point", v)
        li = self._locus_index_of_stem(("cell_end", fam, i, end))
        return self.vertex_node(cells[0]), ("stem", li)

    def _build_graph(self):
        edges = []      # (payload, lo_node, hi_node, anchor_lo, anchor_hi)
        for cell in self.edge_cells:
            lo_node, lo_anchor = self._resolve_cell_end(cell, LOW)
            hi_node, hi_anchor = self._resolve_cell_end(cell, HIGH)
            edges.append((("cell",) + cell, lo_node, hi_node, lo_anchor, hi_anchor))
        for (fam, side), rule in sorted(self.spec.chain_ends.items()):
            if rule.kind != "limit":
                continue
            glue = self.spec.families[fam].glue
            cut = ("cut", fam, side)
            cells = [(v, 0) for v in rule.targets]
            if len(cells) == 1:
                target, anchor = self.vertex_node(cells[0]), ("point", cells[0])
            else:
                li = self._locus_index_of_stem(("chain_end", fam, side))
                target, anchor = self.vertex_node(cells[0]), ("stem", li)
            if chain_end_ascends(glue, side):
                edges.append((("tail", fam, side), cut, target, None, anchor))
            else:
                edges.append((("tail", fam, side), target, cut, anchor, None))
        edges.sort(key=lambda e: e[0])
        self.graph_edges = tuple(edges)
        adj = {}
        for eid, (payload, lo, hi, _, _) in enumerate(edges):
            adj.setdefault(lo, []).append((eid, hi))
            adj.setdefault(hi, []).append((eid, lo))
        for vcell in self.vertex_cells:
            adj.setdefault(self.vertex_node(vcell), [])
        for nbrs in adj.values():
            nbrs.sort(key=lambda pair: (self.graph_edges[pair[0]][0], pair[1]))
        self.adjacency = adj

    def nodes(self):
        return sorted(self.adjacency)

    def edge_anchor_at(self, eid, node):
        payload, lo, hi, a_lo, a_hi = self.graph_edges[eid]
        if node == lo:
            return a_lo
        if node == hi:
            return a_hi
        raise KeyError(node)

    # -- truncated ends ------------------------------------------------------

    def _germ_providers(self, vcell, side):
        """Schematic providers of one germ of a vertex: list of
        (edge cell or chain descriptor, in_window flag).  ``side`` is the
        vertex's own side: LOW means the germ below the vertex."""
        vfam, j = vcell
        vchain = self.spec.families[vfam].chain
        want_end = HIGH if side == LOW else LOW   # edge end that supplies this germ
        out = []
        for (efam, end), rule in sorted(self.spec.ends.items()):
            if end != want_end or rule.kind == "open":
                continue
            for tfam, off in rule.targets:
                if tfam != vfam:
                    continue
                ef = self.spec.families[efam]
                if ef.chain and vchain:
                    i = j - off
                    out.append((("cell", efam, i), abs(i) <= self.depth
                                and (efam, i) in self._edge_set))
                elif ef.chain and not vchain:
                    out.append((("cell-every", efam), False))   # one germ per index: overfull
                elif vchain:
                    if off == j:
                        out.append((("cell", efam, 0), (efam, 0) in self._edge_set))
                else:
                    out.append((("cell", efam, 0), (efam, 0) in self._edge_set))
        for (efam, cside), rule in sorted(self.spec.chain_ends.items()):
            if rule.kind != "limit" or vfam not in rule.targets:
                continue
            glue = self.spec.families[efam].glue
            provides = LOW if chain_end_ascends(glue, cside) else HIGH
            if provides == side:
                out.append((("chain", efam, cside), True))   # tail edge is in the graph
        return out

    def _scan_truncated_ends(self):
        ends = []
        for vcell in self.vertex_cells:
            for side in (LOW, HIGH):
                for provider, in_window in self._germ_providers(vcell, side):
                    if not in_window and provider[0] == "cell":
                        ends.append(TruncatedEnd(
                            (vcell, side), f"edge {provider[1]}[{provider[2]}]"))
        for name in sorted(self.spec.families):
            fam = self.spec.families[name]
            if fam.glue is None:
                continue
            for side in (NEG, POS):
                # a missing rule is a shape violation validate() reports
                rule = self.spec.chain_ends.get((name, side), ChainEndRule("open"))
                nxt = -self.depth - 1 if side == NEG else self.depth + 1
                tail = "open" if rule.kind == "open" else "limit {%s}" % ",".join(rule.targets)
                ends.append(TruncatedEnd(
                    ("chain", name, side), f"{name}[{nxt}] ... then {tail}"))
        ends.sort(key=lambda te: (te.at, te.continuation))
        self.truncated_ends = tuple(ends)
        self.has_truncation = bool(self.truncated_ends)
        # vertex sides whose germ lies beyond the window
        self._cut_vertex_sides = {
            te.at for te in ends if te.at[0] != "chain"}

    def vertex_side_is_cut(self, vcell, side):
        return (vcell, side) in self._cut_vertex_sides

    # -- cell adjacency (for sweeps) -----------------------------------------

    def cell_neighbors(self, cell):
        """Cells incident to the given cell, via attachments, gluings,
        limit membership and elided tails; symmetric by construction."""
        out = set()
        if cell in self._edge_set:
            for payload, lo, hi, a_lo, a_hi in self.graph_edges:
                if payload[0] != "cell" or payload[1:] != cell:
                    continue
                for anchor, node in ((a_lo, lo), (a_hi, hi)):
                    if anchor and anchor[0] == "point":
                        out.add(anchor[1])
                    elif anchor and anchor[0] == "stem":
                        out.update(self.loci[anchor[1]].members)
                    elif node[0] == "glue":
                        fam, n = node[1], node[2]
                        other = (fam, n) if (fam, n) != cell else (fam, n + 1)
                        if other in self._edge_set:
                            out.add(other)
                    elif node[0] == "cut":
                        rule = self.spec.chain_ends.get((node[1], node[2]))
                        if rule is not None and rule.kind == "limit":
                            out.update((v, 0) for v in rule.targets)
        else:
            for payload, lo, hi, a_lo, a_hi in self.graph_edges:
                for anchor in (a_lo, a_hi):
                    if anchor and anchor[0] == "point" and anchor[1] == cell:
                        out.add(payload[1:3] if payload[0] == "cell"
                                else self._tail_neighbor(payload))
                    elif anchor and anchor[0] == "stem" and cell in self.loci[anchor[1]].members:
                        out.add(payload[1:3] if payload[0] == "cell"
                                else self._tail_neighbor(payload))
        out.discard(cell)
        return sorted(out)

    def _tail_neighbor(self, payload):
        fam, side = payload[1], payload[2]
        return (fam, -self.depth) if side == NEG else (fam, self.depth)


# ---------------------------------------------------------------------------
# operations


def expand(spec, depth):
    """Instantiate the depth-bounded window.  Monotone: every cell and
    attachment present at depth d appears unchanged at depth d+1."""
    if depth < 0:
        raise BadOffset("depth must be non-negative")
    spec.check_wellformed()
    return Truncation(spec, depth)


def validate(trunc):
    """Report violations of the 1-manifold contract; never raises.

    Checks: (a) every vertex has exactly one germ on each side, (b) limit
    sets are sane (no duplicates, chain-end limits target unit vertices),
    (c) the Hausdorffification of the window is a tree, (d) family and
    rule shapes are orientation-consistent.
    """
    spec = trunc.spec
    violations = []

    def bad(code, msg):
        violations.append(Violation(code, msg))

    # (d) shape checks
    for name in sorted(spec.families):
        fam = spec.families[name]
        if fam.kind == "vertex":
            for end in (LOW, HIGH):
                if (name, end) in spec.ends:
                    bad("shape", f"vertex family {name} has an end rule")
        elif fam.glue is not None:
            if not fam.chain:
                bad("shape", f"unit edge family {name} declares a glue direction")
            for end in (LOW, HIGH):
                if (name, end) in spec.ends:
                    bad("shape", f"glued chain {name} has a per-cell end rule")
            for side in (NEG, POS):
                if (name, side) not in spec.chain_ends:
                    bad("shape", f"glued chain {name} misses its {side} chain-end rule")
        else:
            for end in (LOW, HIGH):
                if (name, end) not in spec.ends:
                    bad("shape", f"edge family {name} misses its {end} rule")
            for side in (NEG, POS):
                if (name, side) in spec.chain_ends:
                    bad("shape", f"unglued family {name} has a chain-end rule")

    # (b) limit-set sanity
    for (fam, end), rule in sorted(spec.ends.items()):
        if rule.kind == "limit" and len(set(rule.targets)) != len(rule.targets):
            bad("limit-set", f"{fam}.{end} limit set repeats a vertex")
        for v, off in rule.targets:
            if spec.families.get(v) and spec.families[v].kind != "vertex":
                bad("limit-set", f"{fam}.{end} targets non-vertex family {v}")
            if spec.families.get(v) and not spec.families[v].chain and off != 0:
                bad("limit-set", f"{fam}.{end} uses nonzero offset into unit family {v}")
    for (fam, side), rule in sorted(spec.chain_ends.items()):
        if len(set(rule.targets)) != len(rule.targets):
            bad("limit-set", f"{fam} chain end {side} repeats a vertex")
        for v in rule.targets:
            f = spec.families.get(v)
            if f and (f.kind != "vertex" or f.chain):
                bad("limit-set",
                    f"{fam} chain end {side} must target unit vertex families, got {v}")

    # (a) germ counts, schematic over the window
    for vcell in trunc.vertex_cells:
        for side in (LOW, HIGH):
            providers = trunc._germ_providers(vcell, side)
            if any(p[0][0] == "cell-every" for p in providers):
                bad("germ-count",
                    f"{vcell[0]}[{vcell[1]}] {side} side receives one germ per chain index")
            elif len(providers) != 1:
                bad("germ-count",
                    f"{vcell[0]}[{vcell[1]}] has {len(providers)} germs on its {side} side")

    # (c) tree check on the window graph
    nodes = trunc.nodes()
    n_edges = len(trunc.graph_edges)
    if nodes:
        for payload, lo, hi, _, _ in trunc.graph_edges:
            if lo == hi:
                bad("not-a-tree", f"edge {payload} closes a loop at {lo}")
        seen = set()
        components = 0
        for node in nodes:
            if node in seen:
                continue
            components += 1
            seen.add(node)
            stack = [node]
            while stack:
                for eid, other in trunc.adjacency[stack.pop()]:
                    if other not in seen:
                        seen.add(other)
                        stack.append(other)
        if components > 1:
            bad("disconnected",
                f"window graph falls into {components} components")
        if n_edges != len(nodes) - components:
            bad("not-a-tree",
                f"window graph has {n_edges} edges on {len(nodes)} nodes "
                f"in {components} components")

    for name, mark in sorted(spec.marks.items()):
        fam = spec.families.get(mark.cell[0])
        if fam is None:
            bad("mark", f"mark {name} references unknown family {mark.cell[0]}")
        elif (fam.kind == "vertex") != mark.is_vertex:
            bad("mark", f"mark {name} kind does not match family {mark.cell[0]}")

    return ValidationReport(tuple(violations))


def cached_validation(trunc):
    if trunc._validation is None:
        trunc._validation = validate(trunc)
    return trunc._validation


def require_valid(trunc):
    report = cached_validation(trunc)
    if not report.valid:
        raise InvalidModel("; ".join(v.message for v in report.violations))
    return trunc


def require_routable(trunc):
    """Routing needs a sound acyclic window; a disconnected one is fine
    (the missing connections lie beyond the depth bound and route
    searches report Truncated instead)."""
    report = cached_validation(trunc)
    real = [v for v in report.violations if v.code != "disconnected"]
    if real:
        raise InvalidModel("; ".join(v.message for v in real))
    return trunc


def branch_loci(trunc):
    """Branch loci visible in the window, deterministically ordered."""
    require_valid(trunc)
    return list(trunc.loci)


@dataclass(frozen=True)
class HausdorffTree:
    """The window graph with each branch locus collapsed to one node."""

    nodes: tuple
    edges: tuple         # (payload, lo_node, hi_node)
    vertex_projection: dict
    edge_projection: dict

    def degree(self, node):
        return sum(1 for _, lo, hi in self.edges for n in (lo, hi) if n == node)


def hausdorffify(trunc):
    require_valid(trunc)
    return HausdorffTree(
        nodes=tuple(trunc.nodes()),
        edges=tuple((p, lo, hi) for p, lo, hi, _, _ in trunc.graph_edges),
        vertex_projection={v: trunc.vertex_node(v) for v in trunc.vertex_cells},
        edge_projection={cell: ("cell",) + cell for cell in trunc.edge_cells},
    )
