"""Command-line surface: single computations, the witness family, theorem
verification suites, and exhaustive search over small marked graphs.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 graph file
format error, 4 search budget exceeded.  All reports are plain text with one
key=value line per case; identical invocations produce byte-identical stdout
(wall-clock timings go to stderr).
"""

from __future__ import annotations

import argparse
import math
import random
import sys
import time
from dataclasses import dataclass, field

from . import bridge, digraph, trails
from .digraph import GraphFormatError, MarkedDigraph, enumerate_marked_graphs, make_gn
from .trails import (AtPosition, BudgetExceededError, Precedes, Subtrail,
                     enumerate_trails, filtered_signed_sum, signed_sum)

DEFAULT_BUDGET = trails.DEFAULT_NODE_BUDGET


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


@dataclass
class VerificationReport:
    suite: str
    seed: int
    cases: list[tuple[str, str, str, bool]] = field(default_factory=list)
    elapsed: float = 0.0

    def add(self, case_id: str, expected, computed):
        expected, computed = str(expected), str(computed)
        self.cases.append((case_id, expected, computed, expected == computed))

    @property
    def passed(self) -> int:
        return sum(1 for c in self.cases if c[3])

    @property
    def failed(self) -> int:
        return len(self.cases) - self.passed

    def render(self) -> str:
        lines = [f"suite={self.suite} seed={self.seed}"]
        for case_id, expected, computed, ok in self.cases:
            lines.append(f"case={case_id} expected={expected} computed={computed} "
                         f"pass={'true' if ok else 'false'}")
        verdict = "PASS" if self.failed == 0 else "FAIL"
        lines.append(f"suite={self.suite} cases={len(self.cases)} passed={self.passed} "
                     f"failed={self.failed} result={verdict}")
        return "\n".join(lines) + "\n"


def gn_closed_form(n: int, mbar: int) -> int:
    if n == 2:
        return math.factorial(mbar + 1) ** 2
    return 2 * mbar * math.factorial(mbar + n - 1) * math.factorial(mbar) // 3


# -- verification suites -----------------------------------------------------

def suite_gn_formulas(seed: int, budget: int) -> VerificationReport:
    rep = VerificationReport("gn-formulas", seed)
    for mbar in (1, 2, 3):
        r = signed_sum(make_gn(2, mbar), max_nodes=budget)
        rep.add(f"S(G2,mbar={mbar})", gn_closed_form(2, mbar), r.S)
        rep.add(f"trails(G2,mbar={mbar})",
                math.factorial(mbar + 1) ** 2 * (mbar + 1), r.trail_count)
    for mbar in (1, 2, 3):
        r = signed_sum(make_gn(3, mbar), max_nodes=budget)
        rep.add(f"S(G3,mbar={mbar})", gn_closed_form(3, mbar), r.S)
    return rep


def suite_recursion(seed: int, budget: int) -> VerificationReport:
    rep = VerificationReport("recursion", seed)
    for n in (4, 5):
        for mbar in (1, 2):
            lhs = signed_sum(make_gn(n, mbar), max_nodes=budget).S
            prev = signed_sum(make_gn(n - 1, mbar), max_nodes=budget).S
            rep.add(f"S(G{n},mbar={mbar})=(mbar+{n}-1)*S(G{n - 1})",
                    (mbar + n - 1) * prev, lhs)
    rep.add("S(G4,mbar=1)", 16, signed_sum(make_gn(4, 1), max_nodes=budget).S)
    rep.add("S(G5,mbar=1)", 80, signed_sum(make_gn(5, 1), max_nodes=budget).S)
    return rep


def suite_lower_bound(seed: int, budget: int) -> VerificationReport:
    rep = VerificationReport("lower-bound", seed)
    for n in (2, 3, 4):
        for mbar in (1, 2):
            g = make_gn(n, mbar)
            rep.add(f"edges(G{n},mbar={mbar})", 2 * mbar + 4 * n - 5, g.k)
            r = signed_sum(g, max_nodes=budget)
            rep.add(f"T(G{n},mbar={mbar})>0", True, r.T > 0)
    return rep


def suite_upper_n2(seed: int, budget: int) -> VerificationReport:
    rep = VerificationReport("upper-n2", seed)
    for k in (6, 7):
        stream = enumerate_marked_graphs(2, k, bmax=3)
        violations = sum(1 for g in stream if signed_sum(g, max_nodes=budget).T != 0)
        rep.add(f"classes(n=2,k={k},bmax=3) with T!=0 of {stream.yielded}", 0, violations)
    return rep


def suite_amitsur_levitzki(seed: int, budget: int) -> VerificationReport:
    rep = VerificationReport("amitsur-levitzki", seed)
    stream = enumerate_marked_graphs(2, 4, bmax=0)
    violations = sum(1 for g in stream if signed_sum(g, max_nodes=budget).T != 0)
    rep.add(f"unmarked classes(n=2,k=4) with T!=0 of {stream.yielded}", 0, violations)
    rng = random.Random(seed)
    violations = 0
    for _ in range(100):
        g = digraph.random_feasible_graph(rng, 3, 6, bmax=0)
        if signed_sum(g, max_nodes=budget).T != 0:
            violations += 1
    rep.add("sampled unmarked graphs(n=3,k=6) with T!=0 of 100", 0, violations)
    return rep


def suite_swan(seed: int, budget: int) -> VerificationReport:
    rep = VerificationReport("swan", seed)
    rng = random.Random(seed)
    failures = 0
    for _ in range(200):
        n = rng.choice((2, 3))
        k = rng.randint(3, 7)
        g = digraph.random_feasible_graph(rng, n, k, bmax=3, require_nonloop=True)
        nonloops = [i for i, (u, v) in enumerate(g.edges, start=1) if u != v]
        a = rng.choice(nonloops)
        lhs, rhs = trails.swan_identity(g, a, max_nodes=budget)
        if lhs != rhs:
            failures += 1
    rep.add("loop-resolution identity failures of 200", 0, failures)
    return rep


def suite_bridge(seed: int, budget: int) -> VerificationReport:
    rep = VerificationReport("bridge", seed)
    rng = random.Random(seed)
    failures = 0
    for _ in range(100):
        n = rng.randint(1, 3)
        k = rng.randint(2, 8)
        g = digraph.random_feasible_graph(rng, n, k, bmax=3)
        if not bridge.cross_check(g, max_nodes=budget).agrees:
            failures += 1
    rep.add("cross-check failures on 100 sampled graphs", 0, failures)
    failures = 0
    stream = enumerate_marked_graphs(2, 6, bmax=3)
    total = 0
    for g in stream:
        total += 1
        if not bridge.cross_check(g, max_nodes=budget).agrees:
            failures += 1
    rep.add(f"cross-check failures on all {total} classes(n=2,k=6,bmax=3)", 0, failures)
    return rep


def _swap_candidates(g: MarkedDigraph, sigma: tuple[int, ...], max_len: int = 3):
    """All disjoint parallel run pairs of bounded length inside one trail."""
    k = len(sigma)
    for i in range(k):
        for li in range(1, min(max_len, k - i) + 1):
            q1 = sigma[i:i + li]
            for j in range(i + li, k):
                for lj in range(1, min(max_len, k - j) + 1):
                    q2 = sigma[j:j + lj]
                    if (g.edges[q1[0] - 1][0] == g.edges[q2[0] - 1][0]
                            and g.edges[q1[-1] - 1][1] == g.edges[q2[-1] - 1][1]):
                        yield q1, q2


def suite_signs(seed: int, budget: int) -> VerificationReport:
    rep = VerificationReport("signs", seed)
    rng = random.Random(seed)

    failures = 0
    plain_failures = 0
    for _ in range(100):
        g = digraph.random_feasible_graph(rng, rng.randint(1, 3), rng.randint(2, 6), bmax=3)
        pi = list(range(1, g.k + 1))
        rng.shuffle(pi)
        g2, rel = trails.relabel(g, pi)
        r1 = signed_sum(g, max_nodes=budget)
        r2 = signed_sum(g2, max_nodes=budget)
        if r2.S != rel * r1.S or r2.T != r1.T:
            failures += 1
        M = g.marked_indices()
        preserved = trails.sigma_M(trails.invert_permutation(pi), M) == tuple(
            range(1, len(M) + 1))
        if preserved and rel != trails.sgn_perm(pi):
            plain_failures += 1
    rep.add("relabel law failures of 100", 0, failures)
    rep.add("relabel plain-sign failures on order-preserving pi", 0, plain_failures)

    applicable = 0
    failures = 0
    for _ in range(50):
        g = digraph.random_feasible_graph(rng, rng.randint(1, 3), rng.randint(3, 6), bmax=3)
        for count, trail in enumerate(enumerate_trails(g, max_nodes=budget)):
            if count >= 25:
                break
            sg, sm = trails.trail_signs(g, trail)
            for q1, q2 in _swap_candidates(g, trail.sigma):
                applicable += 1
                swapped, ps, psm = trails.swap_parallel_subtrails(g, trail, q1, q2)
                if not trails.is_trail(g, swapped):
                    failures += 1
                    continue
                sg2, sm2 = trails.trail_signs(g, swapped)
                if sg2 != ps * sg or sm2 != psm * sm:
                    failures += 1
    rep.add(f"swap-sign prediction failures of {applicable}", 0, failures)

    failures = 0
    for _ in range(50):
        g = digraph.random_feasible_graph(rng, rng.randint(1, 3), rng.randint(2, 6), bmax=3)
        all_trails = list(enumerate_trails(g, max_nodes=budget))
        base = rng.choice(all_trails).sigma
        kind = rng.choice(("subtrail", "precedes", "at"))
        if kind == "subtrail":
            i = rng.randrange(len(base))
            j = rng.randint(i + 1, len(base))
            c = Subtrail(base[i:j])
        elif kind == "precedes" and len(base) >= 2:
            i = rng.randrange(len(base) - 1)
            j = rng.randint(i + 1, len(base) - 1)
            c = Precedes(base[i:i + 1], base[j:j + 1])
        else:
            c = AtPosition(rng.choice(base), rng.randint(1, len(base)))
        part = filtered_signed_sum(g, [c], max_nodes=budget)
        rest = 0
        for trail in all_trails:
            if not c.satisfied(trail.sigma):
                sg, sm = trails.trail_signs(g, trail)
                rest += sg * sm
        if part + rest != signed_sum(g, max_nodes=budget).S:
            failures += 1
    rep.add("partition additivity failures of 50", 0, failures)

    failures = 0
    for _ in range(100):
        g = digraph.random_feasible_graph(rng, rng.randint(1, 3), rng.randint(2, 6), bmax=3)
        gop = digraph.opposite(g)
        r1 = signed_sum(g, max_nodes=budget)
        r2 = signed_sum(gop, max_nodes=budget)
        b = len(g.marked)
        factor = -1 if (g.k * (g.k - 1) // 2 + b * (b - 1) // 2) & 1 else 1
        if r2.T != r1.T or r2.S != factor * r1.S:
            failures += 1
    rep.add("opposite-graph sign failures of 100", 0, failures)
    return rep


SUITES = {
    "gn-formulas": suite_gn_formulas,
    "recursion": suite_recursion,
    "lower-bound": suite_lower_bound,
    "upper-n2": suite_upper_n2,
    "amitsur-levitzki": suite_amitsur_levitzki,
    "swan": suite_swan,
    "bridge": suite_bridge,
    "signs": suite_signs,
}


# -- commands -----------------------------------------------------------------

def parse_constraint(spec: str):
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise _UsageError(f"bad constraint {spec!r}: expected '<kind>:...'")
    try:
        if kind == "subtrail":
            return Subtrail(tuple(int(x) for x in rest.split(",")))
        if kind == "precedes":
            a, sep2, b = rest.partition("|")
            if not sep2:
                raise ValueError("missing '|'")
            return Precedes(tuple(int(x) for x in a.split(",")),
                            tuple(int(x) for x in b.split(",")))
        if kind == "at":
            e, sep2, p = rest.partition("@")
            if not sep2:
                raise ValueError("missing '@'")
            return AtPosition(int(e), int(p))
    except ValueError as exc:
        raise _UsageError(f"bad constraint {spec!r}: {exc}") from None
    raise _UsageError(f"unknown constraint kind {kind!r} "
                      "(use subtrail:..., precedes:...|..., at:...@...)")


def cmd_signed_sum(args) -> int:
    g = digraph.read_graph_file(args.graph_file)
    constraints = [parse_constraint(spec) for spec in args.filter]
    if args.list_trails:
        for trail in enumerate_trails(g, max_nodes=args.budget):
            sg, sm = trails.trail_signs(g, trail)
            seq = ",".join(str(e) for e in trail.sigma)
            print(f"trail={seq} sgn={sg:+d} sgn_M={sm:+d}")
    r = signed_sum(g, max_nodes=args.budget)
    print(f"S={r.S} T={r.T} trails={r.trail_count}")
    if constraints:
        part = filtered_signed_sum(g, constraints, max_nodes=args.budget)
        print(f"filtered={part}")
    print(f"elapsed={r.elapsed:.3f}s", file=sys.stderr)
    return 0


def cmd_gn(args) -> int:
    if args.n < 2 or args.mbar < 1:
        raise _UsageError("need --n >= 2 and --mbar >= 1")
    g = make_gn(args.n, args.mbar)
    if args.emit:
        digraph.write_graph_file(g, args.emit)
        print(f"emitted={args.emit} n={args.n} mbar={args.mbar} edges={g.k}")
        return 0
    expected = gn_closed_form(args.n, args.mbar)
    computed = signed_sum(g, max_nodes=args.budget).S
    ok = expected == computed
    print(f"case=gn(n={args.n},mbar={args.mbar}) expected={expected} "
          f"computed={computed} pass={'true' if ok else 'false'}")
    return 0 if ok else 2


def cmd_verify(args) -> int:
    start = time.perf_counter()
    report = SUITES[args.suite](args.seed, args.budget)
    report.elapsed = time.perf_counter() - start
    sys.stdout.write(report.render())
    print(f"elapsed={report.elapsed:.3f}s", file=sys.stderr)
    return 0 if report.failed == 0 else 2


def cmd_exhaustive(args) -> int:
    if args.n < 1 or args.k < 1 or args.bmax < 0:
        raise _UsageError("need --n, --k >= 1 and --bmax >= 0")
    space = math.comb(2 * args.n * args.n + args.k - 1, args.k) * args.n * args.n
    if space > args.max_classes:
        raise _UsageError(f"search space of {space} classes exceeds the guard of "
                          f"{args.max_classes}; raise --max-classes to proceed")
    print(f"n={args.n} k={args.k} bmax={args.bmax}")
    stream = enumerate_marked_graphs(args.n, args.k, args.bmax)
    histogram: dict[int, int] = {}
    witness = None
    for g in stream:
        value = signed_sum(g, max_nodes=args.budget).T
        histogram[value] = histogram.get(value, 0) + 1
        if value > 0 and witness is None:
            witness = (value, g)
            if args.stop_on_witness:
                break
    for value in sorted(histogram):
        print(f"T={value} classes={histogram[value]}")
    if witness is not None:
        print(f"witness T={witness[0]} {witness[1].compact()}")
    print(f"classes={stream.yielded} skipped_unbalanced={stream.skipped_unbalanced} "
          f"skipped_infeasible={stream.skipped_infeasible}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="trailsum",
                     description="Exact signed Eulerian-trail sums on marked digraphs "
                                 "and their matrix-algebra counterpart.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("signed-sum", help="compute S, T and the trail count of a graph file")
    p.add_argument("graph_file")
    p.add_argument("--list-trails", action="store_true",
                   help="print every trail with its two signs")
    p.add_argument("--filter", action="append", default=[], metavar="SPEC",
                   help="constraint: subtrail:3,5,2 | precedes:1,2|4 | at:4@7 "
                        "(repeatable; prints the constrained partial sum)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_signed_sum)

    p = sub.add_parser("gn", help="emit or verify the lower-bound witness graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mbar", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--emit", metavar="PATH", help="write the graph file")
    group.add_argument("--compute", action="store_true",
                       help="compare the enumerated sum against the closed form")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_gn)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("exhaustive",
                       help="walk every marked-graph class and histogram T")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bmax", type=int, required=True)
    p.add_argument("--stop-on-witness", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--max-classes", type=int, default=10 ** 6)
    p.set_defaults(func=cmd_exhaustive)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (None, 0) else 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except GraphFormatError as exc:
        print(f"graph format error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 3
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
