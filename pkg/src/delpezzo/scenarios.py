"""Executable witnesses for the initial-sequence characterizations.

Each case id names one of the characterized shapes of Z on S_r together with
its expected initial-sequence signature; build_scenario produces an exact
rational construction, verify_scenario recomputes the sequence and checks the
signature, and falsify_random samples sets NOT of the characterized shape and
checks that the signature fails for them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import exactlinalg
from .alpha import initial_sequence, max_equal_run
from .blowup import (DelPezzoConfig, Exterior, LineBundle, OnExceptional,
                     check_generality, sample_general_config)
from .plane import (NODAL_CUBIC, NODAL_CUBIC_NODE, HomogeneousForm, PlanePoint,
                    conic_through_five, evaluate, line_through,
                    nodal_cubic_point, tangent_line_at)


class ConstructionFailed(RuntimeError):
    pass


class NotAPencil(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioWitness:
    id: str
    config: DelPezzoConfig
    z_points: tuple
    expected_prefix: tuple
    expected_next: int  # lower bound for the value after the prefix


@dataclass(frozen=True)
class ScenarioReport:
    id: str
    values: tuple
    expected_prefix: tuple
    expected_next: int
    passed: bool
    witnesses: tuple  # one verified witness form per m


@dataclass(frozen=True)
class CubicPencil:
    basis: tuple  # two independent cubics
    base_points: tuple


def _direction_at(p: PlanePoint, towards: PlanePoint):
    """Tangent direction at p of the line joining p to the other point, in
    the local frame of p (z=1 chart after the frame's coordinate swap)."""
    from .plane import _sigma_for
    sigma = _sigma_for(p)
    pq = [Fraction(p.coords[sigma[k]]) for k in range(3)]
    tq = [Fraction(towards.coords[sigma[k]]) for k in range(3)]
    if tq[2] != 0:
        dx = tq[0] / tq[2] - pq[0] / pq[2]
        dy = tq[1] / tq[2] - pq[1] / pq[2]
    else:
        dx, dy = tq[0], tq[1]
    return (dx, dy)


def _conic_points(ts):
    """Points (t^2 : t : 1) on the conic xz - y^2."""
    return [PlanePoint(Fraction(t) ** 2, Fraction(t), 1) for t in ts]


_CONIC5 = (0, 1, 2, 3, -1)


def build_scenario(r: int, case_id: str) -> ScenarioWitness:
    """Exact construction for the named case; all coordinates rational."""
    key = (r, case_id)
    builders = {
        (1, "S1.single"): _s1_single,
        (1, "S1.pair"): _s1_pair,
        (2, "S2.onL"): _s2_onl,
        (2, "S2.offL"): _s2_offl,
        (2, "S2.mixed"): _s2_mixed,
        (3, "S3"): _s3,
        (4, "S4.a"): _s4a,
        (4, "S4.b"): _s4b,
        (4, "S4.c"): _s4c,
        (4, "S4.d"): _s4d,
        (5, "S5.a"): _s5a,
        (5, "S5.b"): _s5b,
        (6, "S6.a"): _s6a,
        (6, "S6.b"): _s6b,
        (7, "S7.a"): _s7a,
        (7, "S7.b"): _s7b,
        (7, "S7.c"): _s7c,
        (8, "S8"): _s8,
    }
    if key not in builders:
        raise ValueError(f"unknown case {case_id!r} for r={r}")
    try:
        return builders[key]()
    except Exception as exc:  # noqa: BLE001 - surfaced with context
        raise ConstructionFailed(f"{case_id}: {exc}") from exc


ALL_CASES = (
    (1, "S1.single"), (1, "S1.pair"),
    (2, "S2.onL"), (2, "S2.offL"), (2, "S2.mixed"),
    (3, "S3"),
    (4, "S4.a"), (4, "S4.b"), (4, "S4.c"), (4, "S4.d"),
    (5, "S5.a"), (5, "S5.b"),
    (6, "S6.a"), (6, "S6.b"),
    (7, "S7.a"), (7, "S7.b"), (7, "S7.c"),
    (8, "S8"),
)


def _s1_single():
    cfg = DelPezzoConfig.create([PlanePoint(0, 0, 1)])
    z = (OnExceptional(1, (1, 0)),)
    return ScenarioWitness("S1.single", cfg, z, (1, 1, 1, 1, 1), 2)


def _s1_pair():
    cfg = DelPezzoConfig.create([PlanePoint(0, 0, 1)])
    z = (OnExceptional(1, (1, 0)), OnExceptional(1, (0, 1)))
    return ScenarioWitness("S1.pair", cfg, z, (1, 1, 1, 2, 2, 2, 2), 3)


def _s2_config():
    return DelPezzoConfig.create([PlanePoint(0, 0, 1), PlanePoint(1, 0, 1)])


def _s2_onl():
    cfg = _s2_config()
    # both points of E_1, E_2 in the direction of the line through P_1, P_2
    z = (OnExceptional(1, _direction_at(cfg.base_points[0], cfg.base_points[1])),
         OnExceptional(2, _direction_at(cfg.base_points[1], cfg.base_points[0])))
    return ScenarioWitness("S2.onL", cfg, z, (1, 1, 1, 1, 1), 2)


def _s2_offl():
    cfg = _s2_config()
    z = (OnExceptional(1, (0, 1)),)  # transverse to the line y = 0
    return ScenarioWitness("S2.offL", cfg, z, (1, 1, 1, 1), 2)


def _s2_mixed():
    cfg = _s2_config()
    z = (OnExceptional(1, (0, 1)),
         OnExceptional(1, _direction_at(cfg.base_points[0], cfg.base_points[1])))
    return ScenarioWitness("S2.mixed", cfg, z, (1, 1, 1, 2, 2, 2, 2), 3)


def _s3():
    cfg = DelPezzoConfig.create([PlanePoint(0, 0, 1), PlanePoint(1, 0, 1),
                                 PlanePoint(0, 1, 1)])
    z = (OnExceptional(1, _direction_at(cfg.base_points[0], cfg.base_points[1])),)
    return ScenarioWitness("S3", cfg, z, (1, 1, 1, 1), 2)


def _s4_config():
    return DelPezzoConfig.create([PlanePoint(0, 0, 1), PlanePoint(1, 0, 1),
                                  PlanePoint(0, 1, 1), PlanePoint(1, 1, 1)])


def _s4a():
    cfg = _s4_config()
    z = (Exterior(PlanePoint(2, 0, 1)),)  # on the line through P_1, P_2
    return ScenarioWitness("S4.a", cfg, z, (1, 1, 1), 2)


def _s4b():
    cfg = _s4_config()
    p = cfg.base_points
    l12 = line_through(p[0], p[1])
    l34 = line_through(p[2], p[3])
    q = _line_intersection(l12, l34)
    z = (Exterior(q),
         OnExceptional(1, _direction_at(p[0], p[1])),
         OnExceptional(2, _direction_at(p[1], p[0])))
    return ScenarioWitness("S4.b", cfg, z, (1, 1, 1), 2)


def _s4c():
    cfg = _s4_config()
    p = cfg.base_points
    z = tuple(OnExceptional(1, _direction_at(p[0], p[j])) for j in (1, 2, 3))
    return ScenarioWitness("S4.c", cfg, z, (1, 1, 1), 2)


def _s4d():
    cfg = DelPezzoConfig.create(_conic_points((0, 1, 2, 3)))
    # tangent to the conic at P_1 = (0:0:1) is x = 0, direction (0, 1)
    z = (OnExceptional(1, (0, 1)),)
    return ScenarioWitness("S4.d", cfg, z, (1, 1, 1), 2)


def _s5a():
    cfg = DelPezzoConfig.create(_conic_points(_CONIC5))
    z = (OnExceptional(1, (0, 1)),)
    return ScenarioWitness("S5.a", cfg, z, (1, 1, 1), 2)


def _s5b():
    cfg = DelPezzoConfig.create(_conic_points(_CONIC5))
    p = cfg.base_points
    q = _line_intersection(line_through(p[0], p[1]), line_through(p[2], p[3]))
    z = (Exterior(q),)
    return ScenarioWitness("S5.b", cfg, z, (1, 1, 1), 2)


def _s6a():
    # three lines y = x, y = -x, y = 2x meeting at the apex (0:0:1),
    # two base points per line
    apex = PlanePoint(0, 0, 1)
    cfg = DelPezzoConfig.create([PlanePoint(1, 1, 1), PlanePoint(2, 2, 1),
                                 PlanePoint(1, -1, 1), PlanePoint(2, -2, 1),
                                 PlanePoint(3, 6, 1), PlanePoint(-1, -2, 1)])
    return ScenarioWitness("S6.a", cfg, (Exterior(apex),), (1, 1, 1), 2)


def _s6b():
    pts = _conic_points(_CONIC5) + [PlanePoint(0, 1, 2)]
    cfg = DelPezzoConfig.create(pts)
    conic = conic_through_five(cfg.base_points[:5])
    tangent = tangent_line_at(conic, cfg.base_points[0])
    if evaluate(tangent, cfg.base_points[5]) != 0:
        raise ConstructionFailed("P_6 must lie on the tangent line at P_1")
    z = (OnExceptional(1, (0, 1)),)
    return ScenarioWitness("S6.b", cfg, z, (1, 1, 1), 2)


def _s7a():
    pts = [NODAL_CUBIC_NODE] + [nodal_cubic_point(t) for t in (2, 3, 4, 5, 6, 7)]
    cfg = DelPezzoConfig.create(pts)
    z = (OnExceptional(1, (1, 1)), OnExceptional(1, (1, -1)))  # branch directions
    return ScenarioWitness("S7.a", cfg, z, (1, 1), 2)


def _s7b():
    cfg = DelPezzoConfig.create([nodal_cubic_point(t) for t in range(2, 9)])
    return ScenarioWitness("S7.b", cfg, (Exterior(NODAL_CUBIC_NODE),), (1, 1), 2)


def _s7c():
    pts = _conic_points(_CONIC5) + [PlanePoint(26, 5, 1), PlanePoint(27, 5, 1)]
    cfg = DelPezzoConfig.create(pts)
    q0 = PlanePoint(25, 5, 1)  # second intersection of the conic and the line
    conic = conic_through_five(cfg.base_points[:5])
    line = line_through(cfg.base_points[5], cfg.base_points[6])
    if evaluate(conic, q0) != 0 or evaluate(line, q0) != 0:
        raise ConstructionFailed("Q_0 must lie on both the conic and the line")
    return ScenarioWitness("S7.c", cfg, (Exterior(q0),), (1, 1), 2)


def _s8():
    cfg = DelPezzoConfig.create(
        [nodal_cubic_point(t) for t in (2, 3, 4, 5, 6, 7, 8, -4)])
    return ScenarioWitness("S8", cfg, (Exterior(NODAL_CUBIC_NODE),), (1, 1), 2)


def _line_intersection(l1: HomogeneousForm, l2: HomogeneousForm) -> PlanePoint:
    a1, b1, c1 = l1.coeffs
    a2, b2, c2 = l2.coeffs
    return PlanePoint(b1 * c2 - c1 * b2, c1 * a2 - a1 * c2, a1 * b2 - b1 * a2)


def witness_variants(w: ScenarioWitness):
    """The sets to verify for a case: the full set, plus (for the case whose
    theorem characterizes every subset of a 3-point set) each singleton."""
    variants = [w]
    if w.id == "S4.b":
        for i, q in enumerate(w.z_points):
            variants.append(ScenarioWitness(f"{w.id}[{i}]", w.config, (q,),
                                            w.expected_prefix, w.expected_next))
    return variants


def verify_scenario(w: ScenarioWitness, *, k_max: int = 12,
                    prime: Optional[int] = exactlinalg.DEFAULT_PRIME) -> ScenarioReport:
    """Recompute the initial sequence one step past the expected prefix and
    check prefix equality and the lower bound on the next value."""
    bundle = LineBundle.anticanonical(w.config.r)
    n = len(w.expected_prefix) + 1
    seq, results = initial_sequence(w.config, bundle, list(w.z_points), n,
                                    k_max=k_max, prime=prime, want_witness=True)
    passed = (seq.values[:-1] == tuple(w.expected_prefix)
              and seq.values[-1] >= w.expected_next)
    return ScenarioReport(w.id, seq.values, tuple(w.expected_prefix),
                          w.expected_next, passed,
                          tuple(r.witness for r in results))


def cubic_pencil(points) -> CubicPencil:
    """The two-dimensional space of cubics through 8 suitably general points."""
    points = tuple(points)
    if len(points) != 8:
        raise ValueError("exactly eight points required")
    from .plane import monomial_basis
    rows = []
    for p in points:
        x, y, z = p.coords
        rows.append([x**a * y**b * z**c for a, b, c in monomial_basis(3)])
    basis = exactlinalg.kernel_basis(rows, cols=10)
    if len(basis) != 2:
        raise NotAPencil(f"kernel dimension {len(basis)}, expected 2")
    return CubicPencil(tuple(HomogeneousForm(3, v) for v in basis), points)


@dataclass(frozen=True)
class FalsificationReport:
    family: str
    trials: int
    seed: int
    outcomes: tuple  # (trial index, signature_failed as expected: bool)
    passed: bool


def falsify_random(r: int, family: str, trials: int, seed: int, *,
                   prime: Optional[int] = exactlinalg.DEFAULT_PRIME) -> FalsificationReport:
    """Sample sets NOT of the characterized shape and check that the
    corresponding signature fails for every one of them."""
    rng = random.Random(seed)
    checks = {"S1.triple": _falsify_s1_triple,
              "S6.nonconcurrent": _falsify_s6_nonconcurrent,
              "S8.generic": _falsify_s8_generic}
    if family not in checks:
        raise ValueError(f"unknown falsification family {family!r}")
    expected_r = {"S1.triple": 1, "S6.nonconcurrent": 6, "S8.generic": 8}[family]
    if r != expected_r:
        raise ValueError(f"family {family!r} lives on r={expected_r}")
    outcomes = []
    for i in range(trials):
        outcomes.append((i, checks[family](rng, prime)))
    return FalsificationReport(family, trials, seed, tuple(outcomes),
                               all(ok for _, ok in outcomes))


def _falsify_s1_triple(rng, prime):
    # three distinct points on E_1: no constant run of length >= 4 for m <= 12
    cfg = DelPezzoConfig.create([PlanePoint(0, 0, 1)])
    dirs = set()
    while len(dirs) < 3:
        d = (rng.randint(-5, 5), rng.randint(-5, 5))
        if d != (0, 0):
            dirs.add(OnExceptional(1, d).direction)
    z = [OnExceptional(1, d) for d in sorted(dirs)]
    seq, _ = initial_sequence(cfg, LineBundle.anticanonical(1), z, 12,
                              prime=prime, want_witness=False)
    return max_equal_run(seq.values)[1] < 4


def _falsify_s6_nonconcurrent(rng, prime):
    # Q at the meet of two of the three lines but off the third: no 3-run of 1s
    for _ in range(100):
        cfg = sample_general_config(6, rng)
        p = cfg.base_points
        q = _line_intersection(line_through(p[0], p[1]), line_through(p[2], p[3]))
        if q in p:
            continue
        if evaluate(line_through(p[4], p[5]), q) == 0:
            continue  # accidentally concurrent: not a counterexample candidate
        seq, _ = initial_sequence(cfg, LineBundle.anticanonical(6),
                                  [Exterior(q)], 3, prime=prime,
                                  want_witness=False)
        return seq.values != (1, 1, 1)
    raise ConstructionFailed("could not sample a non-concurrent configuration")


def _falsify_s8_generic(rng, prime):
    # a generic exterior point on S_8 (not the node of a pencil member):
    # alpha(2Z) must exceed 1
    cfg = sample_general_config(8, rng)
    q = PlanePoint(rng.randint(-20, 20), rng.randint(-20, 20), 1)
    while q in cfg.base_points:
        q = PlanePoint(rng.randint(-20, 20), rng.randint(-20, 20), 1)
    seq, _ = initial_sequence(cfg, LineBundle.anticanonical(8), [Exterior(q)], 2,
                              prime=prime, want_witness=False)
    return seq.values[1] >= 2
