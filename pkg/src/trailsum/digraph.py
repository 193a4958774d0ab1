"""Doubly-rooted directed multigraphs with a marked edge subset.

Vertices are 1..n.  Edges form an ordered list; the order is significant
because it fixes the permutation signs computed by the trails module.  Loops
and parallel edges are allowed.  ``marked`` holds the 1-based indices of the
distinguished edges.

The module also provides the witness family ``make_gn``, the root-absorbing
extension, the opposite graph, the two loop-creating edge surgeries, an
exhaustive enumerator of small marked graphs up to edge relabelling, a
seeded sampler of trail-feasible graphs, and a strict line-oriented text
format used by the command line tools.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass


class GraphFormatError(ValueError):
    """Malformed graph text; carries the 1-based offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class MarkedDigraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    s: int
    t: int
    marked: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        object.__setattr__(self, "marked", frozenset(self.marked))
        if self.n < 1:
            raise ValueError("vertex count must be at least 1")
        for i, (u, v) in enumerate(self.edges, start=1):
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge {i} endpoint outside 1..{self.n}")
        if not (1 <= self.s <= self.n and 1 <= self.t <= self.n):
            raise ValueError(f"roots ({self.s},{self.t}) outside 1..{self.n}")
        k = len(self.edges)
        for j in self.marked:
            if not 1 <= j <= k:
                raise ValueError(f"marked index {j} outside 1..{k}")

    @property
    def k(self) -> int:
        return len(self.edges)

    def marked_indices(self) -> tuple[int, ...]:
        """Ascending indices of the marked edges."""
        return tuple(sorted(self.marked))

    def compact(self) -> str:
        """One-line rendering; a trailing * flags a marked edge."""
        parts = []
        for i, (u, v) in enumerate(self.edges, start=1):
            parts.append(f"{u}>{v}" + ("*" if i in self.marked else ""))
        return f"n={self.n} s={self.s} t={self.t} edges=" + ",".join(parts)


@dataclass(frozen=True)
class DegreeProfile:
    """Per-vertex degree bookkeeping; index 0 of each tuple is unused."""
    n: int
    indeg: tuple[int, ...]
    outdeg: tuple[int, ...]
    cdeg: tuple[int, ...] | None
    balanced: bool
    connected: bool
    feasible: bool


def validate(g: MarkedDigraph) -> DegreeProfile:
    """Degree profile plus the necessary-and-sufficient trail-existence flags.

    ``balanced`` holds when indeg(v) + [v = s] = outdeg(v) + [v = t] at every
    vertex; ``connected`` is weak connectivity of the vertices touched by at
    least one edge; ``feasible`` combines both with the roots being touched,
    and is exactly the condition for an Eulerian trail from s to t to exist.
    """
    n = g.n
    indeg = [0] * (n + 1)
    outdeg = [0] * (n + 1)
    for u, v in g.edges:
        outdeg[u] += 1
        indeg[v] += 1
    balanced = all(indeg[v] + (v == g.s) == outdeg[v] + (v == g.t) for v in range(1, n + 1))
    cdeg = tuple(indeg[v] + (v == g.s) for v in range(n + 1)) if balanced else None

    touched = [v for v in range(1, n + 1) if indeg[v] or outdeg[v]]
    if touched:
        adj: dict[int, set[int]] = {}
        for u, v in g.edges:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        seen = {touched[0]}
        stack = [touched[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        connected = all(v in seen for v in touched)
    else:
        connected = True

    if g.k == 0:
        feasible = g.s == g.t
    else:
        feasible = (balanced and connected
                    and (indeg[g.s] or outdeg[g.s]) != 0
                    and (indeg[g.t] or outdeg[g.t]) != 0)
    return DegreeProfile(n, tuple(indeg), tuple(outdeg), cdeg, balanced, connected, feasible)


def make_gn(n: int, mbar: int) -> MarkedDigraph:
    """The lower-bound witness graph on n vertices with 2*mbar marked edges.

    Roots are (1, 2) and the enumeration is fixed: mbar two-edge circles
    between 1 and 2 (all marked), a loop on 1, one more (1,2) edge, a
    four-edge gadget 1 <-> h <-> h-1 for each vertex h = 3..n, and a final
    loop on n.  Total edge count is 2*mbar + 4n - 5.
    """
    if n < 2:
        raise ValueError("need at least 2 vertices")
    if mbar < 1:
        raise ValueError("need at least one marked circle")
    m = 2 * mbar
    edges: list[tuple[int, int]] = []
    for _ in range(mbar):
        edges.append((1, 2))
        edges.append((2, 1))
    edges.append((1, 1))
    edges.append((1, 2))
    for h in range(3, n + 1):
        edges.append((h - 1, h))
        edges.append((h, 1))
        edges.append((1, h))
        edges.append((h, h - 1))
    edges.append((n, n))
    return MarkedDigraph(n, tuple(edges), 1, 2, frozenset(range(1, m + 1)))


def extend(g: MarkedDigraph) -> MarkedDigraph:
    """Absorb the roots: new vertex r with a first edge (r,s) and a last (t,r).

    The new edges sit at the extreme ends of both enumeration and every
    trail, so the signed trail sum is unchanged.
    """
    r = g.n + 1
    edges = ((r, g.s),) + g.edges + ((g.t, r),)
    return MarkedDigraph(r, edges, r, r, frozenset(j + 1 for j in g.marked))


def opposite(g: MarkedDigraph) -> MarkedDigraph:
    """Reverse every edge in place and swap the roots; marking is unchanged."""
    return MarkedDigraph(g.n, tuple((v, u) for u, v in g.edges), g.t, g.s, g.marked)


def surgery_in(g: MarkedDigraph, a: int, c: int) -> MarkedDigraph:
    """Turn edge a into a loop at its head; redirect incoming edge c there.

    Requires a non-loop, c != a and c pointing at the tail of a.  Both
    replacements keep their indices, so marking carries through unchanged.
    """
    if not 1 <= a <= g.k or not 1 <= c <= g.k:
        raise ValueError("edge index out of range")
    am, ap = g.edges[a - 1]
    if am == ap:
        raise ValueError(f"edge {a} is a loop")
    if c == a:
        raise ValueError("the redirected edge must differ from a")
    if g.edges[c - 1][1] != am:
        raise ValueError(f"edge {c} does not end at the tail of edge {a}")
    edges = list(g.edges)
    edges[a - 1] = (ap, ap)
    edges[c - 1] = (g.edges[c - 1][0], ap)
    return MarkedDigraph(g.n, tuple(edges), g.s, g.t, g.marked)


def surgery_out(g: MarkedDigraph, a: int, d: int) -> MarkedDigraph:
    """Turn edge a into a loop at its head; restart outgoing edge d at its tail."""
    if not 1 <= a <= g.k or not 1 <= d <= g.k:
        raise ValueError("edge index out of range")
    am, ap = g.edges[a - 1]
    if am == ap:
        raise ValueError(f"edge {a} is a loop")
    if d == a:
        raise ValueError("the redirected edge must differ from a")
    if g.edges[d - 1][0] != ap:
        raise ValueError(f"edge {d} does not start at the head of edge {a}")
    edges = list(g.edges)
    edges[a - 1] = (ap, ap)
    edges[d - 1] = (am, g.edges[d - 1][1])
    return MarkedDigraph(g.n, tuple(edges), g.s, g.t, g.marked)


class MarkedGraphEnumeration:
    """One representative per class of marked graphs, filtered for feasibility.

    Two graphs are in one class when they share the multiset of (source,
    target, marked) triples and the roots; the signed trail sum's absolute
    value only depends on the class.  Representatives list their edges in
    sorted triple order.  Classes failing the trail-existence condition are
    skipped and counted (their trail set is empty), so every yielded graph
    is balanced with at least one Eulerian trail.

    Single-pass iterator; the skip counters update as items are consumed.
    """

    def __init__(self, n: int, k: int, bmax: int):
        if n < 1 or k < 1 or bmax < 0:
            raise ValueError("need n, k >= 1 and bmax >= 0")
        self.n = n
        self.k = k
        self.bmax = bmax
        self.yielded = 0
        self.skipped_unbalanced = 0
        self.skipped_infeasible = 0
        self._it = self._generate()

    def __iter__(self):
        return self

    def __next__(self) -> MarkedDigraph:
        return next(self._it)

    def _generate(self):
        n, k = self.n, self.k
        types = [(u, v, f) for u in range(1, n + 1) for v in range(1, n + 1) for f in (0, 1)]
        for s, t in itertools.product(range(1, n + 1), repeat=2):
            for combo in itertools.combinations_with_replacement(types, k):
                if sum(f for _, _, f in combo) > self.bmax:
                    continue
                edges = tuple((u, v) for u, v, _ in combo)
                marked = frozenset(i for i, (_, _, f) in enumerate(combo, start=1) if f)
                g = MarkedDigraph(n, edges, s, t, marked)
                prof = validate(g)
                if not prof.balanced:
                    self.skipped_unbalanced += 1
                    continue
                if not prof.feasible:
                    self.skipped_infeasible += 1
                    continue
                self.yielded += 1
                yield g


def enumerate_marked_graphs(n: int, k: int, bmax: int) -> MarkedGraphEnumeration:
    return MarkedGraphEnumeration(n, k, bmax)


def random_feasible_graph(rng: random.Random, n: int, k: int, bmax: int,
                          require_nonloop: bool = False) -> MarkedDigraph:
    """Rejection-sample a graph that admits an Eulerian trail between its roots."""
    if require_nonloop and n < 2:
        raise ValueError("a one-vertex graph has only loops")
    while True:
        edges = tuple((rng.randint(1, n), rng.randint(1, n)) for _ in range(k))
        s = rng.randint(1, n)
        t = rng.randint(1, n)
        size = rng.randint(0, min(bmax, k))
        marked = frozenset(rng.sample(range(1, k + 1), size))
        if require_nonloop and all(u == v for u, v in edges):
            continue
        g = MarkedDigraph(n, edges, s, t, marked)
        if validate(g).feasible:
            return g


# -- text format -----------------------------------------------------------
#
#   line 1:      n <n> s <s> t <t>
#   lines 2..:   <source> <target> <0|1>      (one per edge, in order)
#
# Blank lines are ignored and '#' starts a comment that runs to end of line.


def format_graph(g: MarkedDigraph) -> str:
    lines = [f"n {g.n} s {g.s} t {g.t}"]
    for i, (u, v) in enumerate(g.edges, start=1):
        lines.append(f"{u} {v} {1 if i in g.marked else 0}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> MarkedDigraph:
    header = None
    edges: list[tuple[int, int]] = []
    marked: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 6 or tokens[0] != "n" or tokens[2] != "s" or tokens[4] != "t":
                raise GraphFormatError(lineno, "expected header 'n <n> s <s> t <t>'")
            try:
                header = (int(tokens[1]), int(tokens[3]), int(tokens[5]))
            except ValueError:
                raise GraphFormatError(lineno, "header fields must be integers") from None
            continue
        if len(tokens) != 3:
            raise GraphFormatError(lineno, "expected edge line '<source> <target> <0|1>'")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphFormatError(lineno, "edge endpoints must be integers") from None
        if tokens[2] not in ("0", "1"):
            raise GraphFormatError(lineno, "marked flag must be 0 or 1")
        edges.append((u, v))
        if tokens[2] == "1":
            marked.add(len(edges))
    if header is None:
        raise GraphFormatError(1, "missing header line")
    n, s, t = header
    try:
        return MarkedDigraph(n, tuple(edges), s, t, frozenset(marked))
    except ValueError as exc:
        raise GraphFormatError(1, str(exc)) from None


def read_graph_file(path) -> MarkedDigraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph_file(g: MarkedDigraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g))
