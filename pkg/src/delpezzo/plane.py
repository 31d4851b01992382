"""Exact projective plane geometry.

Points are stored as primitive integer triples, curves as homogeneous forms
in x, y, z with rational coefficients over a fixed graded-lex monomial order.
Multiplicities are read off in a deterministic local frame that moves the
point of interest to (0:0:1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, lcm

from .exactlinalg import kernel_basis, rank


class ZeroForm(ValueError):
    pass


class CoincidentPoints(ValueError):
    pass


class DegenerateSystem(ValueError):
    pass


class NotOnCurve(ValueError):
    pass


class SingularPoint(ValueError):
    pass


class NodeParameter(ValueError):
    pass


def primitive_tuple(vals):
    """Coprime integer representative with positive first nonzero entry."""
    vals = list(vals)
    den = 1
    for v in vals:
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    ints = [int(v * den) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-u for u in ints]
            break
    return tuple(ints)


class PlanePoint:
    """A point of P^2, normalised so equal points compare equal."""

    __slots__ = ("coords",)

    def __init__(self, x, y, z):
        coords = primitive_tuple((x, y, z))
        if coords == (0, 0, 0):
            raise ValueError("projective point cannot be (0,0,0)")
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, *a):
        raise AttributeError("PlanePoint is immutable")

    def __eq__(self, other):
        return isinstance(other, PlanePoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "({}:{}:{})".format(*self.coords)


@lru_cache(maxsize=None)
def monomial_basis(d: int):
    """Exponent triples of degree d in graded-lex order (x > y > z)."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return tuple((a, b, d - a - b) for a in range(d, -1, -1)
                 for b in range(d - a, -1, -1))


@lru_cache(maxsize=None)
def monomial_index(d: int):
    return {e: i for i, e in enumerate(monomial_basis(d))}


class HomogeneousForm:
    """Homogeneous form given by its coefficient vector over monomial_basis."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != len(monomial_basis(degree)):
            raise ValueError("coefficient vector has wrong length")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("HomogeneousForm is immutable")

    @classmethod
    def from_dict(cls, degree, terms):
        idx = monomial_index(degree)
        coeffs = [0] * len(idx)
        for e, c in terms.items():
            coeffs[idx[tuple(e)]] = c
        return cls(degree, coeffs)

    def terms(self):
        return {e: c for e, c in zip(monomial_basis(self.degree), self.coeffs) if c}

    def is_zero(self):
        return not any(self.coeffs)

    def primitive(self):
        if self.is_zero():
            return self
        return HomogeneousForm(self.degree, primitive_tuple(self.coeffs))

    def __eq__(self, other):
        return (isinstance(other, HomogeneousForm) and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.degree, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "HomogeneousForm(0)"
        parts = []
        for (a, b, c), v in self.terms().items():
            mono = "".join(s * e for s, e in zip("xyz", (a, b, c)))
            parts.append(f"{v}*{mono}" if mono else str(v))
        return " + ".join(parts)


def proportional(f: HomogeneousForm, g: HomogeneousForm) -> bool:
    """True when the two forms define the same curve (equal up to scale)."""
    if f.degree != g.degree:
        return False
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    return f.primitive().coeffs in (g.primitive().coeffs,
                                    tuple(-c for c in g.primitive().coeffs))


def evaluate(form: HomogeneousForm, point: PlanePoint):
    """Value at the stored primitive representative (exact; zero-tests only
    are representative-independent)."""
    x, y, z = point.coords
    total = 0
    for (a, b, c), v in zip(monomial_basis(form.degree), form.coeffs):
        if v:
            total += v * x**a * y**b * z**c
    return total


def multiply(f: HomogeneousForm, g: HomogeneousForm) -> HomogeneousForm:
    d = f.degree + g.degree
    idx = monomial_index(d)
    coeffs = [0] * len(idx)
    for ef, cf in f.terms().items():
        for eg, cg in g.terms().items():
            e = (ef[0] + eg[0], ef[1] + eg[1], ef[2] + eg[2])
            coeffs[idx[e]] += cf * cg
    return HomogeneousForm(d, coeffs)


def form_power(f: HomogeneousForm, n: int) -> HomogeneousForm:
    out = HomogeneousForm.from_dict(0, {(0, 0, 0): 1})
    for _ in range(n):
        out = multiply(out, f)
    return out


def partial_derivative(form: HomogeneousForm, var: int) -> HomogeneousForm:
    """d/dx_var; var is 0, 1 or 2."""
    if form.degree == 0:
        raise ValueError("cannot differentiate a constant form homogeneously")
    d = form.degree - 1
    idx = monomial_index(d)
    coeffs = [0] * len(idx)
    for e, c in form.terms().items():
        if e[var]:
            e2 = list(e)
            e2[var] -= 1
            coeffs[idx[tuple(e2)]] += c * e[var]
    return HomogeneousForm(d, coeffs)


# --------------------------------------------------------------------------
# Local frames.  Rule: if the point has z != 0, translate in the z = 1 chart;
# otherwise first swap z with the first nonzero coordinate.
# --------------------------------------------------------------------------

def _sigma_for(point: PlanePoint):
    """Coordinate swap bringing the point into the z != 0 chart."""
    p = point.coords
    if p[2] != 0:
        return (0, 1, 2)
    if p[0] != 0:
        return (2, 1, 0)
    return (0, 2, 1)


@dataclass(frozen=True)
class ProjectiveFrame:
    """Invertible change of coordinates sending a designated point to (0:0:1)."""

    matrix: tuple
    inverse: tuple


def _mat_mul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
                 for i in range(3))


def mat_apply(m, point: PlanePoint) -> PlanePoint:
    x, y, z = point.coords
    return PlanePoint(*(row[0] * x + row[1] * y + row[2] * z for row in m))


def frame_at(point: PlanePoint) -> ProjectiveFrame:
    sigma = _sigma_for(point)
    q = tuple(Fraction(point.coords[sigma[i]]) for i in range(3))
    perm = tuple(tuple(Fraction(1) if j == sigma[i] else Fraction(0) for j in range(3))
                 for i in range(3))
    u0, v0 = q[0] / q[2], q[1] / q[2]
    one, zero = Fraction(1), Fraction(0)
    trans = ((one, zero, -u0), (zero, one, -v0), (zero, zero, one))
    trans_inv = ((one, zero, u0), (zero, one, v0), (zero, zero, one))
    return ProjectiveFrame(matrix=_mat_mul(trans, perm),
                           inverse=_mat_mul(perm, trans_inv))


def substitute(form: HomogeneousForm, m) -> HomogeneousForm:
    """The form F(m . x): substitute each variable by the matching row of m."""
    d = form.degree
    idx = monomial_index(d)
    lines = [{(1 if k == 0 else 0, 1 if k == 1 else 0, 1 if k == 2 else 0): m[i][k]
              for k in range(3) if m[i][k]} for i in range(3)]

    def poly_mul(p, q):
        out = {}
        for e1, c1 in p.items():
            for e2, c2 in q.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, 0) + c1 * c2
        return {e: c for e, c in out.items() if c}

    coeffs = [0] * len(idx)
    for (a, b, c), v in form.terms().items():
        expansion = {(0, 0, 0): 1}
        for var, reps in ((0, a), (1, b), (2, c)):
            for _ in range(reps):
                expansion = poly_mul(expansion, lines[var])
        for e, cc in expansion.items():
            coeffs[idx[e]] += v * cc
    return HomogeneousForm(d, coeffs)


def local_coefficients(form: HomogeneousForm, point: PlanePoint) -> dict:
    """Coefficients {(i, j): value} of the form in the local frame at the
    point, dehomogenised at the frame's z = 1 chart and scaled by a fixed
    nonzero constant.  The point itself sits at (i, j) = (0, 0)."""
    d = form.degree
    sigma = _sigma_for(point)
    q0, q1, q2 = (point.coords[sigma[k]] for k in range(3))
    p0 = [1] * (d + 1)
    p1 = [1] * (d + 1)
    p2 = [1] * (d + 1)
    for k in range(1, d + 1):
        p0[k] = p0[k - 1] * q0
        p1[k] = p1[k - 1] * q1
        p2[k] = p2[k - 1] * q2
    out = {}
    for e, v in zip(monomial_basis(d), form.coeffs):
        if not v:
            continue
        a, b = e[sigma[0]], e[sigma[1]]
        for i in range(a + 1):
            ca = comb(a, i) * p0[a - i]
            for j in range(b + 1):
                w = v * ca * comb(b, j) * p1[b - j] * p2[d - (a - i) - (b - j)]
                key = (i, j)
                out[key] = out.get(key, 0) + w
    return {k: v for k, v in out.items() if v}


def multiplicity_at(form: HomogeneousForm, point: PlanePoint) -> int:
    """Order of vanishing at the point: the lowest total degree with a
    nonzero coefficient in the local expansion (0 iff the point is off the
    curve, at most deg F)."""
    if form.is_zero():
        raise ZeroForm("multiplicity of the zero form is undefined")
    local = local_coefficients(form, point)
    return min(i + j for i, j in local)


def line_through(p1: PlanePoint, p2: PlanePoint) -> HomogeneousForm:
    if p1 == p2:
        raise CoincidentPoints(f"{p1} and {p2} coincide")
    a1, b1, c1 = p1.coords
    a2, b2, c2 = p2.coords
    cross = (b1 * c2 - c1 * b2, c1 * a2 - a1 * c2, a1 * b2 - b1 * a2)
    return HomogeneousForm(1, primitive_tuple(cross))


def conic_through_five(points) -> HomogeneousForm:
    points = list(points)
    if len(points) != 5:
        raise ValueError("exactly five points required")
    basis = monomial_basis(2)
    rows = []
    for p in points:
        x, y, z = p.coords
        rows.append([x**a * y**b * z**c for a, b, c in basis])
    if rank(rows) < 5:
        raise DegenerateSystem("the five points do not determine a unique conic")
    vec = kernel_basis(rows)[0]
    return HomogeneousForm(2, vec)


def tangent_line_at(conic: HomogeneousForm, point: PlanePoint) -> HomogeneousForm:
    if evaluate(conic, point) != 0:
        raise NotOnCurve(f"{point} is not on the curve")
    grad = tuple(evaluate(partial_derivative(conic, v), point) for v in range(3))
    if not any(grad):
        raise SingularPoint(f"{point} is a singular point")
    return HomogeneousForm(1, primitive_tuple(grad))


# Standard nodal cubic: node at (0:0:1) with rational branch directions
# y = x and y = -x, so infinitely near data stays rational.
NODAL_CUBIC = HomogeneousForm.from_dict(3, {(0, 2, 1): 1, (3, 0, 0): -1, (2, 0, 1): -1})
NODAL_CUBIC_NODE = PlanePoint(0, 0, 1)


def nodal_cubic_point(t) -> PlanePoint:
    """Rational point (t^2-1 : t(t^2-1) : 1) of the standard nodal cubic."""
    t = Fraction(t)
    if t == 1 or t == -1:
        raise NodeParameter("t = +/-1 lands on the node")
    return PlanePoint(t * t - 1, t * (t * t - 1), 1)
