"""Order, comparability and unique interval-decomposed paths.

Two points are comparable when a single embedded monotone arc joins them;
the connection between incomparable points decomposes uniquely into a
minimal chain of monotone intervals joined by jumps inside branch loci.
The decomposition is computed by routing through the window graph (whose
nodes collapse branch loci, so routes are unique tree geodesics) and
lifting the route back: passing a collapsed node through a single vertex
keeps the interval going, while switching between members of a locus
closes the interval, records a junction, and opens the next one.
Consecutive junctions inside one collapsed node are separated by
degenerate single-point intervals.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    BranchLocus,
    InvalidModel,
    Point,
    TruncatedError,
    require_routable,
)


class Comparability(enum.Enum):
    EQUAL = "equal"
    LESS = "less"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"
    TRUNCATED = "truncated"

    def __str__(self):
        return self.value


COMPARABLE = (Comparability.EQUAL, Comparability.LESS, Comparability.GREATER)

ASC, DESC = "ascending", "descending"


@dataclass(frozen=True)
class Interval:
    """A maximal monotone arc of a path.

    ``steps`` lists the traversal in order: ("vertex", fam, i) entries for
    vertices passed through (including locus members crossed without a
    jump), ("edge", fam, i, lo, hi) entries for the closed parameter span
    covered inside an edge cell, and ("tail", fam, side) for an elided
    glued-chain run beyond the window.  Degenerate intervals have
    start == end and direction "ascending" by convention.
    """

    start: Point
    end: Point
    direction: str
    steps: tuple

    @property
    def degenerate(self):
        return self.start == self.end

    def reverse(self):
        if self.degenerate:
            return self
        return Interval(self.end, self.start, DESC if self.direction == ASC else ASC,
                        tuple(reversed(self.steps)))

    def contains(self, z):
        if z.is_vertex:
            return ("vertex",) + z.cell in self.steps
        for step in self.steps:
            if step[0] == "edge" and step[1:3] == z.cell and step[3] <= z.t <= step[4]:
                return True
        return False

    def __str__(self):
        arrow = "^" if self.direction == ASC else "v"
        return f"[{self.start} {arrow} {self.end}]"


@dataclass(frozen=True)
class PathJunction:
    arrive: Point
    depart: Point
    locus: BranchLocus

    def reverse(self):
        return PathJunction(self.depart, self.arrive, self.locus)

    def __str__(self):
        return f"({self.arrive} ~ {self.depart})"


@dataclass(frozen=True)
class Path:
    intervals: tuple
    junctions: tuple

    @property
    def length(self):
        return len(self.intervals)

    def reverse(self):
        return Path(tuple(iv.reverse() for iv in reversed(self.intervals)),
                    tuple(j.reverse() for j in reversed(self.junctions)))

    def __str__(self):
        return " ".join(str(iv) for iv in self.intervals)


def _edge_index(trunc):
    idx = getattr(trunc, "_cell_to_eid", None)
    if idx is None:
        idx = {}
        for eid, (payload, *_rest) in enumerate(trunc.graph_edges):
            if payload[0] == "cell":
                idx[payload[1:]] = eid
        trunc._cell_to_eid = idx
    return idx


@dataclass(frozen=True)
class _Rec:
    """One routable edge: a window-graph edge or a split half of one."""

    eid: int
    lo: tuple
    hi: tuple
    span: tuple | None       # (lo_t, hi_t) for halves of a cell edge

    def anchor_at(self, trunc, node):
        if self.span is not None and node[0] == "pt":
            return None
        return trunc.edge_anchor_at(self.eid, node)

    def payload(self, trunc):
        return trunc.graph_edges[self.eid][0]


def _route(trunc, x, y):
    """Unique simple route between the positions of x and y, as a list of
    (_Rec, from_node, to_node); None when the window graph does not
    connect them (the connection lies beyond the depth bound)."""
    adj = {n: list(pairs) for n, pairs in trunc.adjacency.items()}
    recs = {}

    def base_rec(eid):
        if eid not in recs:
            _, lo, hi, _, _ = trunc.graph_edges[eid]
            recs[eid] = _Rec(eid, lo, hi, None)
        return recs[eid]

    for node, pairs in adj.items():
        adj[node] = [(base_rec(eid), other) for eid, other in pairs]

    def split(eid, cuts):
        """Replace a cell edge by consecutive segments at the given
        (t, point-node) cuts, ordered by t."""
        rec = base_rec(eid)
        for node, pairs in adj.items():
            adj[node] = [(r, o) for r, o in pairs if r.eid != eid or r.span is not None]
        pieces = []
        prev_t, prev_node = Fraction(0), rec.lo
        for t, pnode in sorted(cuts):
            pieces.append(_Rec(eid, prev_node, pnode, (prev_t, t)))
            adj.setdefault(pnode, [])
            prev_t, prev_node = t, pnode
        pieces.append(_Rec(eid, prev_node, rec.hi, (prev_t, Fraction(1))))
        for piece in pieces:
            adj[piece.lo].append((piece, piece.hi))
            adj[piece.hi].append((piece, piece.lo))

    cuts = {}
    if not x.is_vertex:
        cuts.setdefault(_edge_index(trunc)[x.cell], []).append((x.t, ("pt", 0)))
    if not y.is_vertex:
        cuts.setdefault(_edge_index(trunc)[y.cell], []).append((y.t, ("pt", 1)))
    for eid, cut in cuts.items():
        split(eid, cut)

    start = ("pt", 0) if not x.is_vertex else trunc.vertex_node(x.cell)
    goal = ("pt", 1) if not y.is_vertex else trunc.vertex_node(y.cell)
    if start == goal:
        return []
    parent = {start: None}
    frontier = [start]
    while frontier and goal not in parent:
        nxt = []
        for node in frontier:
            for rec, other in adj[node]:
                if other not in parent:
                    parent[other] = (rec, node)
                    nxt.append(other)
        frontier = nxt
    if goal not in parent:
        return None
    route = []
    node = goal
    while parent[node] is not None:
        rec, prev = parent[node]
        route.append((rec, prev, node))
        node = prev
    route.reverse()
    return route


def _resolve_anchor(trunc, anchor):
    """Vertex cells an anchor can stand on: a pinned point, or every
    member of the locus whose stem we arrive along."""
    if anchor[0] == "point":
        return [anchor[1]]
    return list(trunc.loci[anchor[1]].members)


def _jump_chain(trunc, entry, exit_):
    """Minimal chain of locus members c0..cj inside one collapsed node,
    where consecutive members share a locus; j is the number of jumps
    (0 means the node is crossed through a single vertex)."""
    starts = sorted(_resolve_anchor(trunc, entry))
    goals = set(_resolve_anchor(trunc, exit_))
    shared = sorted(set(starts) & goals)
    if shared:
        return [shared[0]]
    parent = {c: None for c in starts}
    frontier = list(starts)
    hit = None
    while frontier and hit is None:
        nxt = []
        for c in frontier:
            for mate, _li in trunc._mates.get(c, ()):
                if mate not in parent:
                    parent[mate] = c
                    if mate in goals and hit is None:
                        hit = mate
                    nxt.append(mate)
        frontier = nxt
    if hit is None:
        raise InvalidModel("branch loci at a collapsed node are not jump-connected")
    chain = [hit]
    while parent[chain[-1]] is not None:
        chain.append(parent[chain[-1]])
    chain.reverse()
    return chain


class _Builder:
    def __init__(self, trunc, start):
        self.trunc = trunc
        self.intervals = []
        self.junctions = []
        self.steps = [("vertex",) + start.cell] if start.is_vertex else []
        self.start = start
        self.direction = None

    def vertex_step(self, cell):
        step = ("vertex",) + cell
        if not self.steps or self.steps[-1] != step:
            self.steps.append(step)

    def close(self, end):
        self.intervals.append(Interval(
            self.start, end, self.direction or ASC, tuple(self.steps)))

    def transit(self, entry, exit_):
        chain = _jump_chain(self.trunc, entry, exit_)
        if len(chain) == 1:
            self.vertex_step(chain[0])
            return
        self.vertex_step(chain[0])
        self.close(Point(chain[0]))
        for k, (a, b) in enumerate(zip(chain, chain[1:])):
            li = self.trunc.common_locus(a, b)
            self.junctions.append(PathJunction(Point(a), Point(b), self.trunc.loci[li]))
            if k < len(chain) - 2:
                self.intervals.append(Interval(Point(b), Point(b), ASC, (("vertex",) + b,)))
        self.start = Point(chain[-1])
        self.steps = [("vertex",) + chain[-1]]
        self.direction = None

    def traverse(self, rec, to, trunc):
        direction = ASC if to == rec.hi else DESC
        if self.direction is None:
            self.direction = direction
        elif self.direction != direction:
            raise InvalidModel("route lift is not monotone between junctions")
        payload = rec.payload(trunc)
        if payload[0] == "tail":
            self.steps.append(payload)
        else:
            lo, hi = rec.span or (Fraction(0), Fraction(1))
            self.steps.append(("edge", payload[1], payload[2], lo, hi))


def path(trunc, x, y):
    """The unique minimal decomposition of the connection from x to y.

    Raises TruncatedError when the route needs cells beyond the window
    (elided glued-chain tails do not count: their course is determined),
    PointOutOfRange for points outside the window.
    """
    trunc.require_point(x)
    trunc.require_point(y)
    require_routable(trunc)
    if x == y:
        steps = (("vertex",) + x.cell,) if x.is_vertex else (("edge",) + x.cell + (x.t, x.t),)
        return Path((Interval(x, x, ASC, steps),), ())
    route = _route(trunc, x, y)
    if route is None:
        raise TruncatedError(f"no route from {x} to {y} inside the depth-{trunc.depth} window")

    builder = _Builder(trunc, x)
    pending = ("point", x.cell) if x.is_vertex else None
    for rec, frm, to in route:
        if frm[0] == "locus":
            exit_anchor = rec.anchor_at(trunc, frm)
            builder.transit(pending, exit_anchor)
        elif frm[0] == "vertex":
            builder.vertex_step(frm[1:])
        builder.traverse(rec, to, trunc)
        pending = rec.anchor_at(trunc, to)
    final = ("pt", 1) if not y.is_vertex else trunc.vertex_node(y.cell)
    if final[0] == "locus":
        builder.transit(pending, ("point", y.cell))
        builder.vertex_step(y.cell)
    elif final[0] == "vertex":
        builder.vertex_step(y.cell)
    builder.close(y)
    return Path(tuple(builder.intervals), tuple(builder.junctions))


def compare(trunc, x, y):
    """Less iff an embedded monotone ascending arc runs from x to y;
    Truncated when the deciding arc leaves the depth window."""
    trunc.require_point(x)
    trunc.require_point(y)
    if x == y:
        return Comparability.EQUAL
    try:
        p = path(trunc, x, y)
    except TruncatedError:
        return Comparability.TRUNCATED
    if p.length > 1:
        return Comparability.INCOMPARABLE
    return Comparability.LESS if p.intervals[0].direction == ASC else Comparability.GREATER


def interval_contains(trunc, interval, z):
    """Whether z lies on the interval (endpoints included)."""
    from .core import Tri

    trunc.require_point(z)
    return Tri.YES if interval.contains(z) else Tri.NO


def sample_points(p):
    """Representative points of a path: endpoints, junction vertices,
    every vertex passed through, and a midpoint inside each covered edge
    span (elided tails have no in-window points to sample)."""
    seen = []

    def add(pt):
        if pt not in seen:
            seen.append(pt)

    for iv in p.intervals:
        add(iv.start)
        for step in iv.steps:
            if step[0] == "vertex":
                add(Point(step[1:3]))
            elif step[0] == "edge":
                lo, hi = step[3], step[4]
                t = (lo + hi) / 2
                if 0 < t < 1:
                    add(Point(step[1:3], t))
        add(iv.end)
    return seen
