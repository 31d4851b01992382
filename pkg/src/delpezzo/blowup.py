"""Blow-ups of P^2 at general points: configurations, surface points and the
linear conditions a fat point imposes on plane curves.

A surface point is either an exterior plane point or an infinitely near point
(base index plus a tangent direction at the base point, in the deterministic
local frame of that point).  Condition rows are built with integer entries;
the adapted-transform oracle recomputes multiplicities by actual chart
expansion, independently of the row construction, and is used to verify every
witness certificate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Optional, Union

from . import exactlinalg
from .plane import (HomogeneousForm, PlanePoint, ZeroForm, _sigma_for,
                    local_coefficients, monomial_basis, multiplicity_at,
                    primitive_tuple)


class NotGeneral(ValueError):
    def __init__(self, report):
        super().__init__(f"points are not in general position: {report.first_failure}")
        self.report = report


class InvalidPoint(ValueError):
    pass


class NotInSystem(ValueError):
    pass


@dataclass(frozen=True)
class GeneralityReport:
    r: int
    checks: tuple  # (predicate name, passed)
    passed: bool
    first_failure: Optional[str]


@dataclass(frozen=True)
class LineBundle:
    """Integer class d*H - sum m_i E_i on the blow-up at r points."""

    d: int
    mults: tuple

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError("d must be positive")
        object.__setattr__(self, "mults", tuple(self.mults))
        if any(m < 0 for m in self.mults):
            raise ValueError("multiplicities must be nonnegative")

    @classmethod
    def anticanonical(cls, r: int) -> "LineBundle":
        return cls(3, (1,) * r)


@dataclass(frozen=True)
class Exterior:
    """Surface point away from every exceptional divisor."""

    point: PlanePoint


@dataclass(frozen=True)
class OnExceptional:
    """Point of E_i, identified by a tangent direction at base point i."""

    base_index: int  # 1-based
    direction: tuple

    def __post_init__(self):
        if self.base_index < 1:
            raise ValueError("base index is 1-based")
        d = primitive_tuple(self.direction)
        if len(d) != 2 or d == (0, 0):
            raise ValueError("direction must be a nonzero pair")
        object.__setattr__(self, "direction", d)


SurfacePoint = Union[Exterior, OnExceptional]


@dataclass(frozen=True)
class FatPointSpec:
    """Pairwise distinct surface points with multiplicities >= 1."""

    points: tuple  # of (SurfacePoint, int)

    def __post_init__(self):
        pts = [p for p, _ in self.points]
        if len(set(pts)) != len(pts):
            raise ValueError("surface points must be pairwise distinct")
        if any(m < 1 for _, m in self.points):
            raise ValueError("multiplicities must be >= 1")

    @classmethod
    def uniform(cls, points, m: int) -> "FatPointSpec":
        return cls(tuple((p, m) for p in points))


# --------------------------------------------------------------------------
# Generality
# --------------------------------------------------------------------------

def _det3(p1, p2, p3):
    a, b, c = p1.coords, p2.coords, p3.coords
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _conic_rows(points):
    rows = []
    for p in points:
        x, y, z = p.coords
        rows.append([x**a * y**b * z**c for a, b, c in monomial_basis(2)])
    return rows


def check_generality(points, r: int) -> GeneralityReport:
    """Standard del Pezzo generality: pairwise distinct, no 3 collinear,
    no 6 on a conic, and for r = 8 no cubic through all eight points with a
    double point at one of them."""
    points = list(points)
    if len(points) != r:
        raise ValueError(f"expected {r} points, got {len(points)}")
    checks = []
    failure = None

    distinct = len(set(points)) == len(points)
    checks.append(("pairwise distinct", distinct))
    if not distinct and failure is None:
        failure = "pairwise distinct"

    collinear_ok = True
    if distinct:
        for i in range(r):
            for j in range(i + 1, r):
                for k in range(j + 1, r):
                    if _det3(points[i], points[j], points[k]) == 0:
                        collinear_ok = False
                        break
                if not collinear_ok:
                    break
            if not collinear_ok:
                break
    checks.append(("no 3 collinear", collinear_ok))
    if not collinear_ok and failure is None:
        failure = "collinear triple"

    conic_ok = True
    if distinct and collinear_ok and r >= 6:
        import itertools
        for combi in itertools.combinations(range(r), 6):
            if exactlinalg.rank(_conic_rows([points[i] for i in combi])) < 6:
                conic_ok = False
                break
    checks.append(("no 6 on a conic", conic_ok))
    if not conic_ok and failure is None:
        failure = "six on a conic"

    if r == 8:
        nodal_ok = True
        if distinct and collinear_ok and conic_ok:
            for j in range(8):
                rows = _local_rows(points[j], 3, 2)
                for i in range(8):
                    if i != j:
                        rows.extend(_local_rows(points[i], 3, 1))
                if exactlinalg.rank(rows) < 10:
                    nodal_ok = False
                    break
        checks.append(("no nodal cubic at a base point", nodal_ok))
        if not nodal_ok and failure is None:
            failure = "nodal cubic at a base point"

    passed = all(ok for _, ok in checks)
    return GeneralityReport(r, tuple(checks), passed, failure)


@dataclass(frozen=True)
class DelPezzoConfig:
    """r <= 8 base points in general position."""

    r: int
    base_points: tuple
    generality: GeneralityReport = field(compare=False)

    @classmethod
    def create(cls, points) -> "DelPezzoConfig":
        points = tuple(points)
        r = len(points)
        if not 1 <= r <= 8:
            raise ValueError("r must be between 1 and 8")
        report = check_generality(points, r)
        if not report.passed:
            raise NotGeneral(report)
        return cls(r, points, report)


# --------------------------------------------------------------------------
# Condition rows.  All rows have integer entries; each row is defined up to a
# nonzero scalar, which never affects rank or kernel.
# --------------------------------------------------------------------------

@lru_cache(maxsize=131072)
def _local_row_cached(coords, degree, i, j):
    """Row expressing the local coefficient (i, j) at the point in terms of
    the global degree-`degree` coefficient vector (scaled integer entries)."""
    point = PlanePoint(*coords)
    sigma = _sigma_for(point)
    q0, q1, q2 = (point.coords[sigma[k]] for k in range(3))
    p0 = [1] * (degree + 1)
    p1 = [1] * (degree + 1)
    p2 = [1] * (degree + 1)
    for k in range(1, degree + 1):
        p0[k] = p0[k - 1] * q0
        p1[k] = p1[k - 1] * q1
        p2[k] = p2[k - 1] * q2
    row = []
    for e in monomial_basis(degree):
        a, b = e[sigma[0]], e[sigma[1]]
        if a >= i and b >= j:
            row.append(comb(a, i) * comb(b, j) * p0[a - i] * p1[b - j]
                       * p2[degree - (a - i) - (b - j)])
        else:
            row.append(0)
    return tuple(row)


def _local_monomials(mult):
    """(i, j) with i + j < mult, by total degree then x-exponent descending."""
    return [(s - j, j) for s in range(mult) for j in range(s + 1)]


def _local_rows(point: PlanePoint, degree: int, mult: int) -> list:
    """Rows forcing every partial of order < mult to vanish at the point."""
    return [list(_local_row_cached(point.coords, degree, i, j))
            for i, j in _local_monomials(mult)]


def base_condition_rows(config: DelPezzoConfig, bundle: LineBundle, k: int) -> list:
    """Conditions mult_{P_i} >= k*m_i for every base point, on forms of
    degree k*d; there are sum_i C(k*m_i + 1, 2) rows."""
    degree = k * bundle.d
    rows = []
    for p, m in zip(config.base_points, bundle.mults):
        if m > 0:
            rows.extend(_local_rows(p, degree, k * m))
    return rows


def point_condition_rows(config: DelPezzoConfig, bundle: LineBundle, k: int,
                         q: SurfacePoint, m: int) -> list:
    """Conditions demanding multiplicity >= m at the surface point, valid on
    the subspace cut out by base_condition_rows (which must always be stacked
    into the same system).  C(m+1, 2) rows in both cases."""
    degree = k * bundle.d
    ncols = len(monomial_basis(degree))
    if isinstance(q, Exterior):
        if q.point in config.base_points:
            raise InvalidPoint(
                "exterior point coincides with a base point; use OnExceptional")
        return _local_rows(q.point, degree, m)

    if not 1 <= q.base_index <= config.r:
        raise InvalidPoint(f"base index {q.base_index} out of range for r={config.r}")
    p = config.base_points[q.base_index - 1]
    km = k * bundle.mults[q.base_index - 1]
    dx, dy = q.direction
    rows = []
    for pp, qq in _local_monomials(m):
        total = km + pp
        if total > degree:
            rows.append([0] * ncols)  # vacuous: the blown-down degree is exhausted
            continue
        if dx != 0:
            row = [0] * ncols
            for b in range(qq, total + 1):
                a = total - b
                coef = comb(b, qq) * dy**(b - qq) * dx**a
                if coef:
                    base = _local_row_cached(p.coords, degree, a, b)
                    for idx, t in enumerate(base):
                        if t:
                            row[idx] += coef * t
            rows.append(row)
        else:
            # mirror chart x = u*w, y = u for the direction (0:1)
            a, b = qq, total - qq
            if b < 0:
                rows.append([0] * ncols)
            else:
                rows.append(list(_local_row_cached(p.coords, degree, a, b)))
    return rows


# --------------------------------------------------------------------------
# Adapted-transform multiplicity oracle (independent of the row machinery).
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AdaptedTransformData:
    base_mults: tuple
    excess: tuple
    proper_mult_at_q: int
    total_mult_at_q: int


def _shifted_order(h, v0: Fraction) -> int:
    """Order of vanishing of sum h[(p,b)] u^p v^b at (u, v) = (0, v0)."""
    best = None
    degs = {p for p, _ in h}
    for p in sorted(degs):
        if best is not None and p >= best:
            break
        coeffs = {b: c for (pp, b), c in h.items() if pp == p}
        if not coeffs:
            continue
        maxb = max(coeffs)
        for q in range(maxb + 1):
            if best is not None and p + q >= best:
                break
            s = sum(comb(b, q) * v0 ** (b - q) * c
                    for b, c in coeffs.items() if b >= q)
            if s != 0:
                best = p + q
                break
    if best is None:  # pragma: no cover - h is never the zero polynomial here
        raise ArithmeticError("zero chart expansion")
    return best


def mult_on_blowup(config: DelPezzoConfig, bundle: LineBundle, k: int,
                   form: HomogeneousForm, q: SurfacePoint) -> AdaptedTransformData:
    """Multiplicity of the adapted transform of the plane curve at a surface
    point, computed by actual chart expansion (polynomial division by the
    exceptional factor), not by the formal row construction."""
    if form.is_zero():
        raise ZeroForm("the zero form is not a curve")
    if form.degree != k * bundle.d:
        raise ValueError(f"form degree {form.degree} != k*d = {k * bundle.d}")
    base_mults = tuple(multiplicity_at(form, p) for p in config.base_points)
    excess = tuple(mu - k * m for mu, m in zip(base_mults, bundle.mults))
    for i, e in enumerate(excess):
        if e < 0:
            raise NotInSystem(
                f"multiplicity {base_mults[i]} at base point {i + 1} is below "
                f"the demanded {k * bundle.mults[i]}")

    if isinstance(q, Exterior):
        if q.point in config.base_points:
            raise InvalidPoint(
                "exterior point coincides with a base point; use OnExceptional")
        total = multiplicity_at(form, q.point)
        return AdaptedTransformData(base_mults, excess, total, total)

    if not 1 <= q.base_index <= config.r:
        raise InvalidPoint(f"base index {q.base_index} out of range for r={config.r}")
    i = q.base_index - 1
    p = config.base_points[i]
    mu = base_mults[i]
    local = local_coefficients(form, p)
    dx, dy = q.direction
    h = {}
    if dx != 0:
        # chart x = u, y = u*v; strict transform is g(u, uv) / u^mu
        for (a, b), c in local.items():
            h[(a + b - mu, b)] = h.get((a + b - mu, b), 0) + c
        v0 = Fraction(dy, dx)
    else:
        # mirror chart x = u*w, y = u
        for (a, b), c in local.items():
            h[(a + b - mu, a)] = h.get((a + b - mu, a), 0) + c
        v0 = Fraction(0)
    proper = _shifted_order({key: val for key, val in h.items() if val}, v0)
    return AdaptedTransformData(base_mults, excess, proper, excess[i] + proper)


# --------------------------------------------------------------------------
# Seeded samplers
# --------------------------------------------------------------------------

def sample_general_config(r: int, rng: random.Random, bound: int = 20,
                          max_tries: int = 100) -> DelPezzoConfig:
    """Random configuration with exact generality, by rejection sampling."""
    for _ in range(max_tries):
        pts = []
        ok = True
        for _ in range(r):
            for _ in range(max_tries):
                cand = PlanePoint(rng.randint(-bound, bound),
                                  rng.randint(-bound, bound), 1)
                if cand not in pts:
                    pts.append(cand)
                    break
            else:
                ok = False
        if not ok:
            continue
        report = check_generality(pts, r)
        if report.passed:
            return DelPezzoConfig(r, tuple(pts), report)
    raise RuntimeError(f"could not sample {r} general points in {max_tries} tries")


def sample_exterior_points(config: DelPezzoConfig, n: int, rng: random.Random,
                           bound: int = 20) -> list:
    """Distinct random exterior points avoiding the base points."""
    out = []
    seen = set(config.base_points)
    while len(out) < n:
        cand = PlanePoint(rng.randint(-bound, bound), rng.randint(-bound, bound), 1)
        if cand not in seen:
            seen.add(cand)
            out.append(Exterior(cand))
    return out
