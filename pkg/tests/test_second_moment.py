import math
import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from tamechroma.errors import DomainError
from tamechroma.iset import GraphParams, alpha
from tamechroma.numeric import LogReal
from tamechroma.optimal import round_to_integer, solve_continuous, threshold
from tamechroma.profiles import Profile, expect_unordered
from tamechroma.second_moment import (OverlapSpec, count_01_matrices, f_terms,
                                      m1_term, mckay_count, shared_forbidden,
                                      t_sum, t_term)


def brute_01(sigma, tau):
    """Count 0-1 matrices by trying every matrix."""
    rows, cols = len(sigma), len(tau)
    total = 0
    for cells in product((0, 1), repeat=rows * cols):
        m = [cells[i * cols:(i + 1) * cols] for i in range(rows)]
        if [sum(r) for r in m] == list(sigma) and [sum(c) for c in zip(*m)] == list(tau):
            total += 1
    return total


PR = Profile(12, {3: 2, 2: 3}, 4)


class TestSpec:
    def test_derived(self):
        s = OverlapSpec(PR, {3: 1}, {(2, 3, 2): 1})
        assert s.t_u(3) == 1 and s.t_u(2) == 3
        assert s.n_id == 3 and s.n_tr == 9 and s.r1 == 7
        assert s.eta == pytest.approx(2 / 9)
        assert s.lam == pytest.approx(3 / 12)
        assert s.r_x(2) == 1 and s.a == 4

    def test_min_block_allowed_between_unequal_sizes(self):
        OverlapSpec(PR, {}, {(2, 3, 2): 2})

    @pytest.mark.parametrize("ell,r", [
        ({3: 3}, {}),
        ({}, {(1, 3, 2): 1}),
        ({}, {(2, 2, 2): 1}),
        ({}, {(3, 3, 3): 1}),
        ({}, {(2, 5, 2): 1}),
        ({}, {(2, 3, 3): 7}),
    ])
    def test_rejects(self, ell, r):
        with pytest.raises(DomainError):
            OverlapSpec(PR, ell, r)

    def test_a_minus_one_block_vanishes(self):
        pr = Profile(12, {4: 3}, 4)
        with pytest.raises(DomainError):
            OverlapSpec(pr, {}, {(3, 3, 3): 1}, a=4)


class TestShared:
    def test_examples(self):
        pr = Profile(9, {3: 3})
        assert shared_forbidden(OverlapSpec(pr, {3: 1})) == (3, 3, 0)
        assert shared_forbidden(OverlapSpec(pr, {3: 1}, {(2, 3, 3): 1}))[0] == 4
        assert shared_forbidden(OverlapSpec(pr)) == (0, 0, 0)


class TestTSums:
    def test_all_identical_gives_zero(self):
        pr = Profile(12, {3: 2, 2: 3}, 5)
        s = OverlapSpec(pr, {3: 2, 2: 3})
        assert s.n_tr == 0
        s = OverlapSpec(Profile(12, {3: 4}, 5), {3: 3}, {})
        assert t_sum(s, 2, 0.5).sign == 1
        s = OverlapSpec(Profile(14, {4: 2, 3: 2}, 6), {4: 2})
        assert float(t_term(s, 2, 4, 4, 0.5)) == 0.0

    def test_sum_matches_terms(self):
        rnd = random.Random(5)
        for _ in range(30):
            counts = {u: rnd.randint(1, 4) for u in rnd.sample(range(2, 7), 3)}
            n = sum(u * k for u, k in counts.items())
            pr = Profile(n, counts, 8)
            ell = {u: rnd.randint(0, k - 1) for u, k in counts.items()}
            s = OverlapSpec(pr, ell)
            for x in range(2, 6):
                if x == s.a - 1 or x >= s.n_tr:
                    continue
                total = LogReal.zero()
                for u in counts:
                    for v in counts:
                        total = total + t_term(s, x, u, v, 0.5)
                assert t_sum(s, x, 0.5).log_abs == pytest.approx(total.log_abs, rel=1e-9)

    def test_special_top_term(self):
        pr = Profile(20, {5: 2, 4: 2, 2: 1}, 5)
        s = OverlapSpec(pr)
        a = 5
        expect = (math.exp((a - 1) * s.eta) * (a * a * 4 + 2 * a * 4)
                  / (math.comb(20, 4) * 0.5 ** 6))
        assert float(t_sum(s, 4, 0.5)) == pytest.approx(expect, rel=1e-12)

    def test_x_range(self):
        s = OverlapSpec(PR)
        with pytest.raises(DomainError):
            t_sum(s, 1, 0.5)
        with pytest.raises(DomainError):
            t_term(s, 12, 3, 3, 0.5)

    @staticmethod
    def _optimal(n):
        t = alpha(GraphParams(n)) - 2
        k, _ = threshold(n, t, "L0")
        return OverlapSpec(round_to_integer(solve_continuous(n, k, t), n, k, t)), t

    def test_optimal_profile(self):
        n = 10**5
        s, t = self._optimal(n)
        ln = math.log(n)
        assert float(t_sum(s, 2, 0.5)) <= 1e4 * ln ** 2
        # T(3) is far inside ln^3 n / t but still above 1 at this n
        t3 = float(t_sum(s, 3, 0.5))
        assert t3 <= ln ** 3 / t
        assert t3 == pytest.approx(3.3609, abs=1e-3)
        assert float(t_sum(self._optimal(10**6)[0], 3, 0.5)) < 1
        vals = [t_sum(s, x, 0.5).log_abs for x in range(3, t // 2 + 1)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestFTerms:
    def test_f3_no_overlap(self):
        pr = Profile(12, {3: 2, 2: 3}, 4)
        s = OverlapSpec(pr)
        params = GraphParams(12)
        ft = f_terms(s, params, expect_unordered(pr, params))
        f = 3 * 2 + 1 * 3
        assert ft.F3 == pytest.approx(-2 * params.b * f * f / 144)

    def test_f1_all_identical(self):
        pr = Profile(12, {3: 2, 2: 3}, 4)
        params = GraphParams(12)
        e = expect_unordered(pr, params)
        ft = f_terms(OverlapSpec(pr, {3: 2, 2: 3}), params, e)
        assert ft.F1.log_abs == pytest.approx(-e.log_abs)

    def test_f1_needs_positive(self):
        with pytest.raises(DomainError):
            f_terms(OverlapSpec(PR), GraphParams(12), LogReal.zero())

    @given(st.data())
    def test_f3_sign(self, data):
        counts = data.draw(st.dictionaries(st.integers(2, 6), st.integers(1, 4), min_size=1, max_size=4))
        n = sum(u * k for u, k in counts.items())
        pr = Profile(n, counts)
        ell = {u: data.draw(st.integers(0, k)) for u, k in counts.items()}
        s = OverlapSpec(pr, ell)
        f = sum(u * (u - 1) // 2 * k for u, k in counts.items())
        if f >= 2 * shared_forbidden(s)[0]:
            assert f_terms(s, GraphParams(max(n, 2)), LogReal.from_float(1.0)).F3 <= 0

    def test_m1_spot(self):
        assert m1_term(10**6, 1e3, 1e6) == pytest.approx(math.log(1e6) ** 2 / 1e6)
        assert m1_term(10**6, 1e3, 1e6) == pytest.approx(1.9087e-4, rel=1e-4)


class TestMcKay:
    def test_permutations(self):
        for S in (2, 3):
            v, _ = mckay_count([1] * S, [1] * S)
            assert float(v) == pytest.approx(math.factorial(S))
            assert count_01_matrices([1] * S, [1] * S) == math.factorial(S)

    def test_loose_small(self):
        v, valid = mckay_count([2, 1, 1], [2, 1, 1])
        ratio = float(v) / count_01_matrices([2, 1, 1], [2, 1, 1])
        assert 0.7 <= ratio <= 1.4 and not valid

    def test_validity_flag(self):
        assert mckay_count([1] * 10, [1] * 10)[1]

    def test_mismatch(self):
        with pytest.raises(DomainError):
            mckay_count([1, 1], [1])

    def test_exact_against_brute(self):
        rnd = random.Random(9)
        for _ in range(60):
            r, c = rnd.randint(1, 4), rnd.randint(1, 4)
            cells = [[rnd.randint(0, 1) for _ in range(c)] for _ in range(r)]
            sigma = [sum(row) for row in cells]
            tau = [sum(col) for col in zip(*cells)]
            assert count_01_matrices(sigma, tau) == brute_01(sigma, tau)
        assert count_01_matrices([2], [1]) == 0
