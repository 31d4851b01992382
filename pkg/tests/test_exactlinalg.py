import random
from fractions import Fraction

import pytest

from delpezzo import exactlinalg as el


def naive_rank(rows):
    """Independent oracle: plain Gaussian elimination over Fractions."""
    rows = [[Fraction(e) for e in r] for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def random_matrix(rng, nrows, ncols, bound=9):
    return [[rng.randint(-bound, bound) for _ in range(ncols)] for _ in range(nrows)]


class TestRank:
    def test_identity(self):
        assert el.rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3

    def test_proportional_rows(self):
        assert el.rank([[1, 2], [2, 4]]) == 1

    def test_empty(self):
        assert el.rank([], cols=5) == 0

    def test_five_points_on_conic(self):
        # evaluation matrix of 5 general points on the 6 conic monomials
        pts = [(1, 0, 1), (0, 1, 1), (3, 4, 5), (4, 3, 5), (5, 12, 13)]
        rows = [[x * x, x * y, x * z, y * y, y * z, z * z] for x, y, z in pts]
        assert el.rank(rows) == 5
        assert naive_rank(rows) == 5

    def test_matches_naive_on_random(self):
        rng = random.Random(0)
        for _ in range(20):
            m = random_matrix(rng, rng.randint(1, 8), rng.randint(1, 8))
            assert el.rank(m) == naive_rank(m)

    def test_rank_of_transpose(self):
        rng = random.Random(1)
        for _ in range(10):
            m = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
            t = [list(col) for col in zip(*m)]
            assert el.rank(m) == el.rank(t)

    def test_rational_entries(self):
        rows = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(2, 1)]]
        assert el.rank(rows) == 2
        assert el.rank([[Fraction(1, 2), 1], [1, 2]]) == 1


class TestKernel:
    def test_zero_matrix_full_kernel(self):
        basis = el.kernel_basis([[0] * 5, [0] * 5], cols=5)
        assert len(basis) == 5

    def test_sum_row(self):
        basis = el.kernel_basis([[1, 1, 1]])
        assert len(basis) == 2
        for v in basis:
            assert sum(v) == 0

    def test_full_column_rank_empty(self):
        assert el.kernel_basis([[1, 0], [0, 1], [1, 1]]) == []

    def test_rank_nullity_and_exactness(self):
        rng = random.Random(2)
        for _ in range(20):
            nrows, ncols = rng.randint(1, 7), rng.randint(1, 7)
            m = random_matrix(rng, nrows, ncols)
            basis = el.kernel_basis(m, cols=ncols)
            assert el.rank(m, cols=ncols) + len(basis) == ncols
            for v in basis:
                for row in m:
                    assert sum(a * b for a, b in zip(row, v)) == 0

    def test_primitive_normalization(self):
        basis = el.kernel_basis([[2, -2]])
        assert basis == [[1, 1]]


class TestModular:
    def test_pivot_divisible_by_p(self):
        p = el.DEFAULT_PRIME
        assert el.modular_rank([[p, 0], [0, 1]], p) == 1
        assert el.rank([[p, 0], [0, 1]]) == 2

    def test_identity_mod_7(self):
        eye = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
        assert el.modular_rank(eye, 7) == 4

    def test_modular_at_most_exact(self):
        rng = random.Random(3)
        for _ in range(5):
            m = random_matrix(rng, 10, 12, bound=50)
            exact = el.rank(m)
            for p in (2**31 - 1, 1073741789, 998244353):
                assert el.modular_rank(m, p) <= exact

    def test_bad_prime(self):
        with pytest.raises(el.BadPrime):
            el.modular_rank([[Fraction(1, 7), 1]], 7)


class TestKernelProbe:
    def test_agrees_with_exact(self):
        rng = random.Random(4)
        for _ in range(30):
            nrows, ncols = rng.randint(1, 8), rng.randint(1, 8)
            m = random_matrix(rng, nrows, ncols)
            probe = el.kernel_probe(m, cols=ncols)
            assert probe.rank == el.rank(m, cols=ncols)
            assert probe.kernel_dim == ncols - probe.rank
            if probe.kernel_dim:
                assert probe.vector is not None
                for row in m:
                    assert sum(a * b for a, b in zip(row, probe.vector)) == 0
            else:
                assert probe.vector is None

    def test_exact_mode(self):
        probe = el.kernel_probe([[1, 1, 1]], prime=None)
        assert probe.kernel_dim == 2

    def test_unlucky_prime_still_exact(self):
        p = el.DEFAULT_PRIME
        m = [[p, 0, 0], [0, 1, 0], [0, 0, 1]]
        probe = el.kernel_probe(m, prime=p)
        assert probe.rank == 3 and probe.kernel_dim == 0

    def test_rank_certified(self):
        rng = random.Random(5)
        for _ in range(20):
            m = random_matrix(rng, rng.randint(1, 7), rng.randint(1, 7))
            assert el.rank_certified(m) == el.rank(m)


class TestRatMatrix:
    def test_roundtrip(self):
        m = el.RatMatrix.from_rows([[1, 2], [3, 4]])
        assert m.rows == 2 and m.cols == 2
        assert m.row_lists() == [[1, 2], [3, 4]]
        assert el.rank(m) == 2

    def test_dimension_check(self):
        with pytest.raises(ValueError):
            el.RatMatrix(2, 2, (1, 2, 3))

    def test_ragged_rejected(self):
        with pytest.raises(ValueError):
            el.RatMatrix.from_rows([[1, 2], [3]])
