import random

import pytest

from oracles import brute_signed_sum, brute_trails
from trailsum.digraph import (MarkedDigraph, enumerate_marked_graphs, extend,
                              make_gn, opposite, random_feasible_graph)
from trailsum.trails import (AtPosition, BudgetExceededError, Precedes,
                             Subtrail, TrailPermutation, enumerate_trails,
                             filtered_signed_sum, invert_permutation, is_trail,
                             marked_order_sign, relabel, sgn_perm, sigma_M,
                             signed_sum, swan_identity, swap_parallel_subtrails,
                             trail_signs)


def graph(n, edges, s, t, marked=()):
    return MarkedDigraph(n, tuple(edges), s, t, frozenset(marked))


def random_graphs(seed, count, n_max=3, k_max=6, bmax=3, k_min=1):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_feasible_graph(rng, rng.randint(1, n_max),
                                    rng.randint(k_min, k_max), bmax=bmax), rng


class TestSgnPerm:
    def test_identity(self):
        assert sgn_perm((1, 2, 3)) == 1

    def test_transposition(self):
        assert sgn_perm((2, 1, 3)) == -1

    def test_three_inversions(self):
        assert sgn_perm((2, 4, 1, 3)) == -1

    def test_not_a_bijection(self):
        with pytest.raises(ValueError):
            sgn_perm((1, 1, 2))

    def test_accepts_trail_permutation(self):
        assert sgn_perm(TrailPermutation((2, 1))) == -1


class TestSigmaM:
    def test_identity_any_subset(self):
        assert sigma_M((1, 2, 3, 4), [2, 4]) == (1, 2)

    def test_two_element_rule(self):
        # pattern is the identity exactly when sigma(j1) < sigma(j2)
        assert sigma_M((3, 1, 2), [1, 3]) == (2, 1)
        assert sigma_M((1, 3, 2), [1, 3]) == (1, 2)

    def test_worked_example(self):
        assert sigma_M((2, 4, 1, 3), [2, 4]) == (2, 1)
        assert sgn_perm(sigma_M((2, 4, 1, 3), [2, 4])) == -1

    def test_rejects_bad_subset(self):
        with pytest.raises(ValueError):
            sigma_M((1, 2), [3])

    def test_marked_order_sign_is_sigma_m_of_inverse(self):
        rng = random.Random(2)
        for _ in range(100):
            k = rng.randint(1, 8)
            sigma = list(range(1, k + 1))
            rng.shuffle(sigma)
            marked = rng.sample(range(1, k + 1), rng.randint(0, k))
            expected = sgn_perm(sigma_M(invert_permutation(sigma), sorted(marked)))
            assert marked_order_sign(sigma, marked) == expected


class TestEnumerateTrails:
    def test_two_loops(self):
        g = graph(1, [(1, 1), (1, 1)], 1, 1)
        assert [t.sigma for t in enumerate_trails(g)] == [(1, 2), (2, 1)]

    def test_single_edge(self):
        g = graph(2, [(1, 2)], 1, 2)
        assert [t.sigma for t in enumerate_trails(g)] == [(1,)]

    def test_g2_has_eight_trails(self):
        trails = list(enumerate_trails(make_gn(2, 1)))
        assert len(trails) == 8

    def test_empty_graph(self):
        assert [t.sigma for t in enumerate_trails(graph(1, [], 1, 1))] == [()]
        assert list(enumerate_trails(graph(2, [], 1, 2))) == []

    def test_infeasible_graph_yields_nothing(self):
        assert list(enumerate_trails(graph(2, [(1, 2)], 1, 1))) == []

    def test_matches_unpruned_enumeration(self):
        for g, _ in random_graphs(21, 40, k_max=5):
            got = [t.sigma for t in enumerate_trails(g)]
            assert got == sorted(brute_trails(g))
            assert all(is_trail(g, t) for t in got)

    def test_lexicographic_order(self):
        for g, _ in random_graphs(22, 20, k_max=6):
            seqs = [t.sigma for t in enumerate_trails(g)]
            assert seqs == sorted(seqs)

    def test_budget_exceeded(self):
        with pytest.raises(BudgetExceededError):
            list(enumerate_trails(make_gn(2, 2), max_nodes=3))


class TestSignedSum:
    def test_g2_closed_form(self):
        r = signed_sum(make_gn(2, 1))
        assert (r.S, r.T, r.trail_count) == (4, 4, 8)

    def test_g3_mbar2(self):
        assert signed_sum(make_gn(3, 2)).S == 64

    def test_two_unmarked_parallel_loops(self):
        r = signed_sum(graph(1, [(1, 1), (1, 1)], 1, 1))
        assert (r.S, r.trail_count) == (0, 2)

    def test_two_marked_loops(self):
        r = signed_sum(graph(1, [(1, 1), (1, 1)], 1, 1, marked=[1, 2]))
        assert (r.S, r.T) == (2, 2)

    def test_empty_graph_convention(self):
        assert signed_sum(graph(1, [], 1, 1)).trail_count == 1
        assert signed_sum(graph(2, [], 1, 2)).trail_count == 0

    def test_matches_brute_force(self):
        for g, _ in random_graphs(23, 60, k_max=6):
            r = signed_sum(g)
            assert (r.S, r.trail_count) == brute_signed_sum(g)

    def test_matches_trail_fold(self):
        # dual route: the memoized sum equals folding per-trail signs
        for g, _ in random_graphs(24, 30, k_max=6):
            total = 0
            count = 0
            for trail in enumerate_trails(g):
                sg, sm = trail_signs(g, trail)
                total += sg * sm
                count += 1
            r = signed_sum(g)
            assert (r.S, r.trail_count) == (total, count)

    def test_budget_exceeded(self):
        with pytest.raises(BudgetExceededError):
            signed_sum(make_gn(3, 2), max_nodes=5)

    def test_report_sanity(self):
        r = signed_sum(make_gn(2, 2))
        assert r.T == abs(r.S) <= r.trail_count
        assert r.elapsed >= 0.0 and r.nodes > 0


class TestFilteredSums:
    def test_empty_filter_equals_full_sum(self):
        for g, _ in random_graphs(25, 20, k_max=5):
            assert filtered_signed_sum(g, []) == signed_sum(g).S

    def test_precedes_partition_on_g2(self):
        g = make_gn(2, 1)
        both = filtered_signed_sum(g, [Subtrail([1]), Subtrail([4])])
        first = filtered_signed_sum(g, [Precedes([1], [4])])
        second = filtered_signed_sum(g, [Precedes([4], [1])])
        assert both == first + second == signed_sum(g).S == 4

    def test_parallel_odd_runs_cancel(self):
        # two parallel unmarked edges occur in every trail: the swap pairing
        # cancels everything
        g = graph(2, [(1, 2), (2, 1), (1, 2)], 1, 2)
        assert filtered_signed_sum(g, [Subtrail([1]), Subtrail([3])]) == 0
        g2 = graph(2, [(1, 2), (2, 1), (1, 2)], 1, 2, marked=[2])
        assert signed_sum(g2).S == 0

    def test_at_position(self):
        g = graph(1, [(1, 1), (1, 1)], 1, 1, marked=[1])
        assert filtered_signed_sum(g, [AtPosition(1, 1)]) == 1
        assert filtered_signed_sum(g, [AtPosition(1, 2)]) == -1

    def test_subtrail_requires_adjacency(self):
        g = graph(1, [(1, 1), (1, 1), (1, 1)], 1, 1)
        # edges 1,3 adjacent in exactly two of six trails: (1,3,2) and (2,1,3)
        vals = [t.sigma for t in enumerate_trails(g)
                if Subtrail([1, 3]).satisfied(t.sigma)]
        assert vals == [(1, 3, 2), (2, 1, 3)]

    def test_constraint_validation(self):
        g = make_gn(2, 1)
        with pytest.raises(ValueError):
            filtered_signed_sum(g, [AtPosition(1, 9)])
        with pytest.raises(ValueError):
            filtered_signed_sum(g, [Subtrail([9])])
        with pytest.raises(ValueError):
            Subtrail([])
        with pytest.raises(ValueError):
            Subtrail([1, 1])
        with pytest.raises(TypeError):
            filtered_signed_sum(g, ["subtrail:1"])

    def test_random_partition_additivity(self):
        for g, rng in random_graphs(26, 30, k_max=6):
            trails = list(enumerate_trails(g))
            base = rng.choice(trails).sigma
            i = rng.randrange(len(base))
            j = rng.randint(i + 1, len(base))
            c = Subtrail(base[i:j])
            inside = filtered_signed_sum(g, [c])
            outside = sum(sg * sm for trail in trails
                          for sg, sm in [trail_signs(g, trail)]
                          if not c.satisfied(trail.sigma))
            assert inside + outside == signed_sum(g).S


class TestSwap:
    def test_adjacent_parallel_single_edges(self):
        g = graph(1, [(1, 1), (1, 1)], 1, 1)
        trail = TrailPermutation((1, 2))
        swapped, ps, psm = swap_parallel_subtrails(g, trail, [1], [2])
        assert swapped.sigma == (2, 1)
        assert ps == -1 and psm == 1

    def test_length_one_and_three(self):
        g = graph(2, [(1, 1), (1, 2), (2, 2), (2, 1)], 1, 1)
        trail = TrailPermutation((1, 2, 3, 4))
        swapped, ps, psm = swap_parallel_subtrails(g, trail, [1], [2, 3, 4])
        assert ps == -1
        assert swapped.sigma == (2, 3, 4, 1)
        assert is_trail(g, swapped)

    def test_involution(self):
        g = graph(1, [(1, 1), (1, 1), (1, 1)], 1, 1, marked=[2])
        trail = TrailPermutation((1, 2, 3))
        swapped, _, _ = swap_parallel_subtrails(g, trail, [1], [3])
        back, _, _ = swap_parallel_subtrails(g, swapped, [1], [3])
        assert back == trail

    def test_prediction_matches_recomputation(self):
        for g, rng in random_graphs(27, 40, k_max=6, k_min=2):
            for count, trail in enumerate(enumerate_trails(g)):
                if count >= 15:
                    break
                sg, sm = trail_signs(g, trail)
                seq = trail.sigma
                for i in range(len(seq)):
                    for li in (1, 2):
                        for j in range(i + li, len(seq)):
                            for lj in (1, 2):
                                if j + lj > len(seq):
                                    continue
                                q1, q2 = seq[i:i + li], seq[j:j + lj]
                                if (g.edges[q1[0] - 1][0] != g.edges[q2[0] - 1][0]
                                        or g.edges[q1[-1] - 1][1] != g.edges[q2[-1] - 1][1]):
                                    continue
                                swapped, ps, psm = swap_parallel_subtrails(g, trail, q1, q2)
                                assert is_trail(g, swapped)
                                sg2, sm2 = trail_signs(g, swapped)
                                assert sg2 == ps * sg
                                assert sm2 == psm * sm

    def test_errors(self):
        g = graph(1, [(1, 1), (1, 1), (1, 1)], 1, 1)
        trail = TrailPermutation((1, 2, 3))
        with pytest.raises(ValueError):
            swap_parallel_subtrails(g, trail, [1, 2], [2, 3])  # overlap
        g2 = graph(2, [(1, 2), (2, 1), (1, 1)], 1, 1)
        trail2 = TrailPermutation((1, 2, 3))
        with pytest.raises(ValueError):
            swap_parallel_subtrails(g2, trail2, [1], [2])  # not parallel
        with pytest.raises(ValueError):
            swap_parallel_subtrails(g, trail, [1, 3], [2])  # no occurrence


class TestRelabel:
    def test_identity(self):
        g = make_gn(2, 1)
        g2, sign = relabel(g, (1, 2, 3, 4, 5))
        assert g2 == g and sign == 1

    def test_unmarked_transposition_flips_s(self):
        g = make_gn(2, 1)
        g2, sign = relabel(g, (1, 2, 4, 3, 5))
        assert sign == -1
        assert signed_sum(g2).S == -4

    def test_marked_swap_counterexample(self):
        # exchanging two marked parallel loops renumbers the marked edges and
        # contributes its own sign; the relation factor stays +1 and S is
        # unchanged, while plain sgn(pi) = -1 would wrongly predict a flip
        g = graph(1, [(1, 1), (1, 1)], 1, 1, marked=[1, 2])
        g2, sign = relabel(g, (2, 1))
        assert g2 == g
        assert sign == 1
        assert signed_sum(g2).S == signed_sum(g).S == 2

    def test_law_and_t_invariance(self):
        for g, rng in random_graphs(28, 60, k_max=6):
            pi = list(range(1, g.k + 1))
            rng.shuffle(pi)
            g2, sign = relabel(g, pi)
            r1, r2 = signed_sum(g), signed_sum(g2)
            assert r2.S == sign * r1.S
            assert r2.T == r1.T

    def test_plain_sign_when_marked_order_preserved(self):
        for g, rng in random_graphs(29, 40, k_max=6):
            M = g.marked_indices()
            while True:
                pi = list(range(1, g.k + 1))
                rng.shuffle(pi)
                inv = invert_permutation(pi)
                if sigma_M(inv, M) == tuple(range(1, len(M) + 1)):
                    break
            _, sign = relabel(g, pi)
            assert sign == sgn_perm(pi)

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            relabel(make_gn(2, 1), (1, 1, 2, 3, 4))


class TestStructuralSignLaws:
    def test_extension_preserves_sum(self):
        for g, _ in random_graphs(30, 40, k_max=6):
            r1, r2 = signed_sum(g), signed_sum(extend(g))
            assert (r1.S, r1.trail_count) == (r2.S, r2.trail_count)

    def test_extension_example_t4(self):
        g = make_gn(2, 1)
        assert signed_sum(extend(g)).T == signed_sum(g).T == 4

    def test_opposite_t_and_sign_factor(self):
        for g, _ in random_graphs(31, 60, k_max=6):
            r1, r2 = signed_sum(g), signed_sum(opposite(g))
            b = len(g.marked)
            factor = -1 if (g.k * (g.k - 1) // 2 + b * (b - 1) // 2) & 1 else 1
            assert r2.T == r1.T
            assert r2.S == factor * r1.S

    def test_opposite_g2(self):
        assert signed_sum(opposite(make_gn(2, 1))).T == 4


class TestSwanIdentity:
    def test_small_fixed_case(self):
        g = graph(2, [(1, 2), (2, 1), (1, 1)], 1, 1, marked=[1])
        lhs, rhs = swan_identity(g, 1)
        assert lhs == rhs == signed_sum(g).S

    def test_random_graphs(self):
        rng = random.Random(32)
        for _ in range(60):
            g = random_feasible_graph(rng, rng.choice((2, 3)), rng.randint(3, 6),
                                      bmax=3, require_nonloop=True)
            nonloops = [i for i, (u, v) in enumerate(g.edges, start=1) if u != v]
            a = rng.choice(nonloops)
            lhs, rhs = swan_identity(g, a)
            assert lhs == rhs

    def test_rejects_loop(self):
        g = graph(1, [(1, 1)], 1, 1)
        with pytest.raises(ValueError):
            swan_identity(g, 1)


class TestVanishingFamilies:
    def test_unmarked_two_vertex_graphs_vanish(self):
        # alternating sums of 2n integer matrix units vanish: every balanced
        # 4-edge graph on 2 vertices has T = 0 with nothing marked
        count = 0
        for g in enumerate_marked_graphs(2, 4, 0):
            count += 1
            assert signed_sum(g).T == 0
        assert count > 0

    def test_random_unmarked_big_graphs_vanish(self):
        rng = random.Random(33)
        for n in (2, 3):
            for _ in range(20):
                k = rng.randint(2 * n, 2 * n + 2)
                g = random_feasible_graph(rng, n, k, bmax=0)
                assert signed_sum(g).T == 0

    def test_parallel_unmarked_edges_vanish(self):
        rng = random.Random(34)
        found = 0
        while found < 25:
            g = random_feasible_graph(rng, rng.randint(1, 3), rng.randint(2, 6), bmax=2)
            unmarked = [(u, v) for i, (u, v) in enumerate(g.edges, start=1)
                        if i not in g.marked]
            if len(unmarked) != len(set(unmarked)):
                found += 1
                assert signed_sum(g).T == 0


class TestRecursion:
    def test_g4_follows_from_g3(self):
        for mbar in (1, 2):
            lhs = signed_sum(make_gn(4, mbar)).S
            rhs = (mbar + 3) * signed_sum(make_gn(3, mbar)).S
            assert lhs == rhs
