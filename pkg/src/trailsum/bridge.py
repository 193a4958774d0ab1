"""The correspondence between marked digraphs and tuples of basis matrices.

A marked digraph maps to a tuple of matrix elements: edge (u, v) becomes the
matrix unit E_(u,v), and a marked edge additionally carries one anticommuting
generator, numbered by the edge's ascending rank within the marked set.  The
(s, t) entry of the alternating sum over the tuple then equals, up to sign,
T(G) times the ordered product of all generators.  ``cross_check`` verifies
this equality on concrete graphs by computing both sides independently, and
``identity_verdict`` decides whether the alternating sum of a given degree
vanishes over a whole class of graphs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .digraph import (MarkedDigraph, enumerate_marked_graphs, random_feasible_graph)
from .grassmann import (DEFAULT_ARITY_CAP, GrassmannElement, GrassmannMatrix,
                        standard_polynomial)
from .trails import DEFAULT_NODE_BUDGET, signed_sum


@dataclass(frozen=True)
class SimplifiedSet:
    """An ordered tuple of basis matrices, each E_(a,b) or v_i E_(a,b).

    The generator indices in use are exactly 1..l for some l <= m, each
    appearing once.  ``elements`` holds triples (alpha, beta, gen) with gen 0
    for a bare matrix unit.
    """
    n: int
    m: int
    elements: tuple[tuple[int, int, int], ...]
    s: int
    t: int

    def __post_init__(self):
        object.__setattr__(self, "elements",
                           tuple((int(a), int(b), int(g)) for a, b, g in self.elements))
        if not (1 <= self.s <= self.n and 1 <= self.t <= self.n):
            raise ValueError("roots outside the matrix dimension")
        gens = [g for _, _, g in self.elements if g]
        if len(set(gens)) != len(gens):
            raise ValueError("repeated generator index; set is not simplified")
        ell = len(gens)
        if sorted(gens) != list(range(1, ell + 1)):
            raise ValueError(f"generator indices must be exactly 1..{ell}")
        if ell > self.m:
            raise ValueError("more generators than the algebra provides")
        for a, b, _ in self.elements:
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise ValueError("matrix-unit position outside the dimension")

    @property
    def ell(self) -> int:
        return sum(1 for _, _, g in self.elements if g)

    def to_matrices(self) -> list[GrassmannMatrix]:
        out = []
        for a, b, g in self.elements:
            if g:
                out.append(GrassmannMatrix.unit(
                    self.n, self.m, a, b, GrassmannElement.generator(self.m, g)))
            else:
                out.append(GrassmannMatrix.unit(self.n, self.m, a, b))
        return out


def graph_to_simplified(g: MarkedDigraph, m: int | None = None) -> SimplifiedSet:
    """Edge i becomes E at its endpoints; marked edges pick up generators.

    Generator numbers follow the ascending order of the marked edge indices.
    The algebra size m defaults to the number of marked edges.
    """
    ranks = {e: r + 1 for r, e in enumerate(g.marked_indices())}
    if m is None:
        m = len(ranks)
    if m < len(ranks):
        raise ValueError(f"{len(ranks)} marked edges need at least {len(ranks)} generators")
    elements = tuple((u, v, ranks.get(i, 0))
                     for i, (u, v) in enumerate(g.edges, start=1))
    return SimplifiedSet(g.n, m, elements, g.s, g.t)


def simplified_to_graph(x: SimplifiedSet) -> MarkedDigraph:
    """Inverse of graph_to_simplified: positions become edges, generators marks."""
    edges = tuple((a, b) for a, b, _ in x.elements)
    marked = frozenset(i for i, (_, _, g) in enumerate(x.elements, start=1) if g)
    return MarkedDigraph(x.n, edges, x.s, x.t, marked)


@dataclass(frozen=True)
class CrossCheckReport:
    lhs_entry: GrassmannElement
    S: int
    T: int
    agrees: bool
    observed_sign: int


def cross_check(g: MarkedDigraph, cap: int = DEFAULT_ARITY_CAP,
                allow_large: bool = False,
                max_nodes: int = DEFAULT_NODE_BUDGET) -> CrossCheckReport:
    """Compare the algebra side against the trail side on one graph.

    The algebra side is the (s, t) entry of the alternating sum over the
    matrices of graph_to_simplified(g); the trail side is T(g).  They agree
    when the entry equals sign * T * v_1...v_l for a sign in {+1, -1}, or
    when both vanish (observed_sign 0).
    """
    simp = graph_to_simplified(g)
    value = standard_polynomial(simp.to_matrices(), cap=cap, allow_large=allow_large)
    entry = value.entry(g.s, g.t)
    rep = signed_sum(g, max_nodes=max_nodes)
    ell = simp.ell
    if entry.is_zero():
        return CrossCheckReport(entry, rep.S, rep.T, rep.T == 0, 0)
    if rep.T == 0:
        return CrossCheckReport(entry, rep.S, rep.T, False, 0)
    target = GrassmannElement.monomial(simp.m, range(1, ell + 1), rep.T)
    if entry == target:
        return CrossCheckReport(entry, rep.S, rep.T, True, 1)
    if entry == -target:
        return CrossCheckReport(entry, rep.S, rep.T, True, -1)
    return CrossCheckReport(entry, rep.S, rep.T, False, 0)


@dataclass(frozen=True)
class IdentityVerdict:
    holds: bool
    witness: MarkedDigraph | None
    checked: int


def identity_verdict(n: int, m: int, k: int, mode: str = "exhaustive",
                     seed: int = 0, samples: int = 100,
                     cap: int = DEFAULT_ARITY_CAP, allow_large: bool = False,
                     max_nodes: int = DEFAULT_NODE_BUDGET,
                     max_classes: int = 10 ** 6) -> IdentityVerdict:
    """Does the degree-k alternating sum vanish on n-by-n matrices with m
    generators?  Equivalently: is T zero for every n-vertex, k-edge graph
    with at most m marked edges?

    Exhaustive mode walks every graph class in canonical order and reports
    the first counterexample; sampled mode draws seeded random feasible
    graphs instead.  Exhaustive mode refuses search spaces larger than
    max_classes graph classes.
    """
    if mode == "exhaustive":
        import math
        space = math.comb(2 * n * n + k - 1, k) * n * n
        if space > max_classes:
            raise ValueError(
                f"exhaustive space of {space} classes exceeds the guard of {max_classes}")
        graphs = enumerate_marked_graphs(n, k, bmax=m)
    elif mode == "sampled":
        rng = random.Random(seed)
        graphs = (random_feasible_graph(rng, n, k, bmax=m) for _ in range(samples))
    else:
        raise ValueError(f"unknown mode {mode!r}")

    checked = 0
    for g in graphs:
        checked += 1
        if signed_sum(g, max_nodes=max_nodes).T != 0:
            return IdentityVerdict(False, g, checked)
    return IdentityVerdict(True, None, checked)
