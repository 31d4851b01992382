import random
from math import comb

import pytest

from delpezzo import exactlinalg as el
from delpezzo.blowup import (AdaptedTransformData, DelPezzoConfig, Exterior,
                             FatPointSpec, InvalidPoint, LineBundle,
                             NotGeneral, NotInSystem, OnExceptional,
                             base_condition_rows, check_generality,
                             mult_on_blowup, point_condition_rows,
                             sample_exterior_points, sample_general_config)
from delpezzo.plane import (NODAL_CUBIC, HomogeneousForm, PlanePoint,
                            form_power, line_through, monomial_basis,
                            multiply, multiplicity_at, nodal_cubic_point)

P1 = PlanePoint(0, 0, 1)


def anticanonical_config(r, seed=0):
    return sample_general_config(r, random.Random(seed)), LineBundle.anticanonical(r)


class TestTypes:
    def test_bundle_validation(self):
        with pytest.raises(ValueError):
            LineBundle(0, ())
        with pytest.raises(ValueError):
            LineBundle(3, (-1,))
        assert LineBundle.anticanonical(3).mults == (1, 1, 1)

    def test_direction_normalization(self):
        assert OnExceptional(1, (2, 4)).direction == (1, 2)
        assert OnExceptional(1, (-1, 2)).direction == (1, -2)
        with pytest.raises(ValueError):
            OnExceptional(1, (0, 0))

    def test_fat_point_spec(self):
        q = OnExceptional(1, (1, 0))
        with pytest.raises(ValueError):
            FatPointSpec(((q, 1), (q, 2)))
        with pytest.raises(ValueError):
            FatPointSpec(((q, 0),))
        spec = FatPointSpec.uniform([q, Exterior(PlanePoint(1, 2, 1))], 3)
        assert all(m == 3 for _, m in spec.points)


class TestGenerality:
    def test_coordinate_triangle(self):
        pts = [PlanePoint(1, 0, 0), PlanePoint(0, 1, 0), PlanePoint(0, 0, 1)]
        assert check_generality(pts, 3).passed

    def test_collinear_triple(self):
        pts = [PlanePoint(0, 0, 1), PlanePoint(1, 0, 1), PlanePoint(2, 0, 1),
               PlanePoint(0, 1, 1)]
        rep = check_generality(pts, 4)
        assert not rep.passed and rep.first_failure == "collinear triple"

    def test_duplicate(self):
        rep = check_generality([P1, P1], 2)
        assert not rep.passed and rep.first_failure == "pairwise distinct"

    def test_six_on_conic(self):
        pts = [PlanePoint(t * t, t, 1) for t in (0, 1, 2, 3, -1, -2)]
        rep = check_generality(pts, 6)
        assert not rep.passed and rep.first_failure == "six on a conic"

    def test_nodal_cubic_points_pass(self):
        pts = [nodal_cubic_point(t) for t in (2, 3, 4, 5, 6, 7, 8, -4)]
        assert check_generality(pts, 8).passed

    def test_create_rejects(self):
        with pytest.raises(NotGeneral):
            DelPezzoConfig.create([PlanePoint(0, 0, 1), PlanePoint(1, 0, 1),
                                   PlanePoint(2, 0, 1)])

    def test_sampler(self):
        for r in (1, 4, 8):
            cfg = sample_general_config(r, random.Random(r))
            assert cfg.r == r and cfg.generality.passed


class TestConditionRows:
    def test_base_row_counts(self):
        cfg, bun = anticanonical_config(3)
        rows = base_condition_rows(cfg, bun, 2)
        assert len(rows) == 3 * comb(3, 2)  # k*m_i = 2 at each of 3 points

    def test_single_passthrough_row(self):
        cfg = DelPezzoConfig.create([P1])
        rows = base_condition_rows(cfg, LineBundle(2, (1,)), 1)
        assert len(rows) == 1 and len(rows[0]) == 6

    def test_eight_point_pencil(self):
        pts = [nodal_cubic_point(t) for t in (2, 3, 4, 5, 6, 7, 8, -4)]
        cfg = DelPezzoConfig.create(pts)
        rows = base_condition_rows(cfg, LineBundle.anticanonical(8), 1)
        assert len(rows) == 8
        assert len(el.kernel_basis(rows, cols=10)) == 2

    def test_exterior_row_count(self):
        cfg, bun = anticanonical_config(2)
        q = Exterior(PlanePoint(17, -13, 1))
        assert len(point_condition_rows(cfg, bun, 1, q, 2)) == comb(3, 2)

    def test_on_exceptional_row_count(self):
        cfg, bun = anticanonical_config(2)
        q = OnExceptional(1, (1, 1))
        for m in (1, 3, 5):
            assert len(point_condition_rows(cfg, bun, 1, q, m)) == comb(m + 1, 2)

    def test_exterior_at_base_point_rejected(self):
        cfg, bun = anticanonical_config(2)
        with pytest.raises(InvalidPoint):
            point_condition_rows(cfg, bun, 1, Exterior(cfg.base_points[0]), 1)

    def test_quintuple_on_E1_kernel_is_triple_line(self):
        # degree 3, one base point, demand multiplicity 5 along a direction:
        # the kernel is spanned by the cube of the line in that direction
        cfg = DelPezzoConfig.create([P1])
        bun = LineBundle.anticanonical(1)
        q = OnExceptional(1, (1, 0))
        rows = base_condition_rows(cfg, bun, 1) \
            + point_condition_rows(cfg, bun, 1, q, 5)
        basis = el.kernel_basis(rows, cols=10)
        assert len(basis) == 1
        cube = form_power(HomogeneousForm.from_dict(1, {(0, 1, 0): 1}), 3)
        assert HomogeneousForm(3, basis[0]) == cube

    def test_chart_symmetry_for_diagonal_direction(self):
        # the configuration is symmetric under swapping x and y, and so is
        # the direction (1:1): the row space must be swap-invariant
        cfg = DelPezzoConfig.create([P1])
        bun = LineBundle.anticanonical(1)
        rows = point_condition_rows(cfg, bun, 1, OnExceptional(1, (1, 1)), 3)
        idx = {e: i for i, e in enumerate(monomial_basis(3))}
        perm = [idx[(b, a, c)] for a, b, c in monomial_basis(3)]
        swapped = [[row[p] for p in perm] for row in rows]
        r0 = el.rank(rows, cols=10)
        assert el.rank(rows + swapped, cols=10) == r0


class TestAdaptedTransform:
    def setup_method(self):
        self.cfg = DelPezzoConfig.create([P1])
        self.bun = LineBundle.anticanonical(1)

    def test_triple_line_total_five(self):
        line = HomogeneousForm.from_dict(1, {(0, 1, 0): 1})  # y: direction (1,0)
        data = mult_on_blowup(self.cfg, self.bun, 1, form_power(line, 3),
                              OnExceptional(1, (1, 0)))
        assert data == AdaptedTransformData((3,), (2,), 3, 5)

    def test_smooth_cubic_tangent_direction(self):
        # smooth cubic y*z^2 - x^3 + x*z^2 through the base point, tangent
        # to y = -x there
        f = HomogeneousForm.from_dict(3, {(0, 1, 2): 1, (3, 0, 0): -1,
                                          (1, 0, 2): 1})
        data = mult_on_blowup(self.cfg, self.bun, 1, f, OnExceptional(1, (1, -1)))
        assert data.excess == (0,) and data.proper_mult_at_q == 1
        assert data.total_mult_at_q == 1

    def test_nodal_cubic_branches(self):
        for d in ((1, 1), (1, -1)):
            data = mult_on_blowup(self.cfg, self.bun, 1, NODAL_CUBIC,
                                  OnExceptional(1, d))
            assert data.excess == (1,) and data.total_mult_at_q == 2
        off = mult_on_blowup(self.cfg, self.bun, 1, NODAL_CUBIC,
                             OnExceptional(1, (1, 2)))
        assert off.total_mult_at_q == 1

    def test_vertical_direction(self):
        line = HomogeneousForm.from_dict(1, {(1, 0, 0): 1})  # x: direction (0,1)
        data = mult_on_blowup(self.cfg, self.bun, 1, form_power(line, 3),
                              OnExceptional(1, (0, 1)))
        assert data.total_mult_at_q == 5

    def test_exterior(self):
        line = line_through(P1, PlanePoint(1, 2, 1))
        data = mult_on_blowup(self.cfg, self.bun, 1, form_power(line, 3),
                              Exterior(PlanePoint(1, 2, 1)))
        assert data.total_mult_at_q == 3 == data.proper_mult_at_q

    def test_not_in_system(self):
        f = HomogeneousForm.from_dict(3, {(0, 0, 3): 1})  # z^3 misses P_1
        with pytest.raises(NotInSystem):
            mult_on_blowup(self.cfg, self.bun, 1, f, OnExceptional(1, (1, 0)))

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            mult_on_blowup(self.cfg, self.bun, 2, NODAL_CUBIC,
                           OnExceptional(1, (1, 0)))


class TestEstimationBounds:
    def test_on_exceptional_bound(self):
        # total <= 2*mult_{P_i}(F) - k*m_i for witnesses inside the system
        rng = random.Random(20)
        cfg, bun = anticanonical_config(2, seed=21)
        # random members of the system: combinations of a kernel basis of
        # the base-point conditions
        basis = el.kernel_basis(base_condition_rows(cfg, bun, 1), cols=10)
        checked = 0
        while checked < 25:
            weights = [rng.randint(-3, 3) for _ in basis]
            coeffs = [sum(w * v[i] for w, v in zip(weights, basis))
                      for i in range(10)]
            if not any(coeffs):
                continue
            f = HomogeneousForm(3, coeffs)
            q = OnExceptional(rng.randint(1, 2),
                              (rng.randint(-3, 3), rng.randint(1, 3)))
            data = mult_on_blowup(cfg, bun, 1, f, q)
            i = q.base_index - 1
            assert data.total_mult_at_q <= 2 * data.base_mults[i] - 1
            checked += 1

    def test_off_exceptional_bound_and_equality(self):
        cfg = DelPezzoConfig.create([P1])
        bun = LineBundle.anticanonical(1)
        q = PlanePoint(2, 3, 1)
        # equality case: a product of three lines through q (one through P_1)
        lines = [line_through(q, p) for p in
                 (P1, PlanePoint(1, 0, 1), PlanePoint(0, 1, 1))]
        f = multiply(multiply(lines[0], lines[1]), lines[2])
        data = mult_on_blowup(cfg, bun, 1, f, Exterior(q))
        assert data.total_mult_at_q == 3  # = 3k with k = 1
        # generic member: strictly below the bound
        g = multiply(lines[0], HomogeneousForm.from_dict(
            2, {(2, 0, 0): 1, (0, 0, 2): 1, (1, 1, 0): -1}))
        if multiplicity_at(g, q) < 3:
            assert mult_on_blowup(cfg, bun, 1, g, Exterior(q)).total_mult_at_q < 3

    def test_oracle_agrees_with_rows(self):
        # every kernel vector of a stacked system has oracle multiplicity
        # at least the demanded one
        rng = random.Random(22)
        for _ in range(10):
            r = rng.randint(1, 3)
            cfg, bun = anticanonical_config(r, seed=rng.randint(0, 999))
            if rng.random() < 0.5:
                q = OnExceptional(rng.randint(1, r),
                                  (rng.randint(-2, 2), rng.randint(1, 2)))
            else:
                q = sample_exterior_points(cfg, 1, rng)[0]
            m = rng.randint(1, 3)
            rows = base_condition_rows(cfg, bun, 1) \
                + point_condition_rows(cfg, bun, 1, q, m)
            for vec in el.kernel_basis(rows, cols=10):
                f = HomogeneousForm(3, vec)
                assert mult_on_blowup(cfg, bun, 1, f, q).total_mult_at_q >= m
