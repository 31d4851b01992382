"""Acceptance gate: one test per top-level criterion, each printing a single
pass/fail line and enforcing its time budget.  All comparisons are exact
integer or rational equalities (tolerance zero)."""

import math
import random
import time
from fractions import Fraction

from delpezzo.alpha import (alpha, chudnovsky_check, h0_closed_form,
                            h0_computed, initial_sequence, max_equal_run,
                            minimal_subset_preserving_alpha)
from delpezzo.blowup import (DelPezzoConfig, Exterior, FatPointSpec,
                             LineBundle, OnExceptional, mult_on_blowup,
                             sample_exterior_points, sample_general_config)
from delpezzo.plane import (PlanePoint, line_through, multiply,
                            multiplicity_at)
from delpezzo.scenarios import (ALL_CASES, build_scenario, falsify_random,
                                verify_scenario, witness_variants)

P1 = PlanePoint(0, 0, 1)


def _report(n, desc, ok, elapsed, budget):
    in_budget = elapsed < budget
    verdict = "PASS" if (ok and in_budget) else "FAIL"
    print(f"[{verdict}] criterion {n}: {desc} "
          f"({elapsed:.1f}s / budget {budget}s)")
    assert ok, f"criterion {n} failed"
    assert in_budget, f"criterion {n} exceeded its {budget}s budget"


def test_criterion_1_s1_sequence():
    t0 = time.monotonic()
    cfg = DelPezzoConfig.create([P1])
    seq, _ = initial_sequence(cfg, LineBundle.anticanonical(1),
                              [OnExceptional(1, (1, 0))], 15)
    ok = list(seq.values) == [math.ceil(m / 5) for m in range(1, 16)]
    _report(1, "single point on E_1: alpha(mZ) = ceil(m/5) for m <= 15",
            ok, time.monotonic() - t0, 10)


def test_criterion_2_theorem_suite():
    t0 = time.monotonic()
    ok = True
    worst = 0.0
    for r, cid in ALL_CASES:
        t_case = time.monotonic()
        w = build_scenario(r, cid)
        for v in witness_variants(w):
            rep = verify_scenario(v)
            ok = ok and rep.passed
        worst = max(worst, time.monotonic() - t_case)
    ok = ok and worst < 15
    _report(2, f"all {len(ALL_CASES)} characterization cases verified "
               f"(slowest case {worst:.1f}s < 15s)",
            ok, time.monotonic() - t0, 15 * len(ALL_CASES))


def test_criterion_3_h0_closed_form():
    t0 = time.monotonic()
    ok = True
    for r in range(1, 9):
        bun = LineBundle.anticanonical(r)
        for trial in range(3):
            cfg = sample_general_config(r, random.Random(1000 * r + trial))
            for m in range(1, 5):
                ok = ok and h0_computed(cfg, bun, m) == h0_closed_form(r, m)
    _report(3, "h0 = ((9-r)m^2+(9-r)m+2)/2 for r in 1..8, m in 1..4, "
               "3 random configurations each",
            ok, time.monotonic() - t0, 30)


def test_criterion_4_chudnovsky():
    t0 = time.monotonic()
    ok = True
    # ten seeded Z per surface with alpha(Z) >= 2: enough generic exterior
    # points to exclude every anticanonical section
    for r in range(1, 7):
        n = h0_closed_form(r, 1)
        for trial in range(10):
            rng = random.Random(2000 * r + trial)
            cfg = sample_general_config(r, rng)
            pts = sample_exterior_points(cfg, n, rng)
            rep = chudnovsky_check(cfg, pts, 4)
            ok = ok and rep.hypothesis_holds and rep.passed \
                and rep.bound == Fraction(rep.alpha1 - 1, 2)
    # ten Z with alpha(Z) = 1: the unconditional 1/5 bound applies
    for trial in range(10):
        r = trial % 6 + 1
        rng = random.Random(3000 + trial)
        cfg = sample_general_config(r, rng)
        pts = sample_exterior_points(cfg, 1 + trial % 2, rng)
        rep = chudnovsky_check(cfg, pts, 4)
        ok = ok and not rep.hypothesis_holds \
            and rep.bound == Fraction(1, 5) and rep.passed
    _report(4, "alpha(mZ)/m >= (alpha(Z)-1)/2 (60 sets) and >= 1/5 when "
               "alpha(Z)=1 (10 sets), m <= 4",
            ok, time.monotonic() - t0, 60)


def test_criterion_5_minimal_subset():
    t0 = time.monotonic()
    rng = random.Random(50)
    cfg = sample_general_config(1, rng)
    bun = LineBundle.anticanonical(1)
    a = 2
    target = ((9 - 1) * a * a - (9 - 1) * a + 2) // 2  # = 9
    w9 = minimal_subset_preserving_alpha(
        cfg, bun, sample_exterior_points(cfg, 9, rng))
    w10 = minimal_subset_preserving_alpha(
        cfg, bun, sample_exterior_points(cfg, 10, random.Random(51)))
    ok = len(w9) == target == len(w10) == 9
    _report(5, "minimal subsets of 9 and 10 generic points both have "
               "cardinality 9 = ((9-r)a^2-(9-r)a+2)/2",
            ok, time.monotonic() - t0, 10)


def test_criterion_6_bundle_comparison():
    t0 = time.monotonic()
    cfg = DelPezzoConfig.create([P1])
    q = OnExceptional(1, (1, 0))
    seq3, _ = initial_sequence(cfg, LineBundle(3, (1,)), [q], 12)
    seq2, _ = initial_sequence(cfg, LineBundle(2, (1,)), [q], 12)
    ok = max_equal_run(seq3.values)[1] == 5 \
        and max_equal_run(seq2.values)[1] == 3
    _report(6, "same Z on E_1: maximal run 5 for bundle (3;1) but exactly 3 "
               "for bundle (2;1), m <= 12",
            ok, time.monotonic() - t0, 10)


def _random_triple(rng):
    r = rng.randint(1, 4)
    cfg = sample_general_config(r, rng)
    bun = LineBundle.anticanonical(r)
    pts = []
    n = rng.randint(1, 2)
    for _ in range(n):
        if rng.random() < 0.5:
            pts.append(OnExceptional(rng.randint(1, r),
                                     (rng.randint(-3, 3), rng.randint(1, 3))))
        else:
            pts.append(sample_exterior_points(cfg, 1, rng)[0])
    if len(set(pts)) != len(pts):
        pts = pts[:1]
    return cfg, bun, pts


def test_criterion_7_property_suites():
    t0 = time.monotonic()
    ok = True
    rng = random.Random(70)

    # growth properties of 50 random sequences, plus the all-exceptional
    # support of every long constant run
    m_max = 5
    for _ in range(50):
        cfg, bun, pts = _random_triple(rng)
        seq, _ = initial_sequence(cfg, bun, pts, m_max)
        v = seq.values
        ok = ok and all(v[i] <= v[i + 1] for i in range(m_max - 1))
        ok = ok and all(v[m + n - 1] <= v[m - 1] + v[n - 1]
                        for m in range(1, m_max) for n in range(1, m_max - m + 1))
        if max_equal_run(v)[1] >= 4:
            ok = ok and all(isinstance(q, OnExceptional) for q in pts)
        # enlarging Z never lowers alpha
        extra = sample_exterior_points(cfg, 1, rng)[0]
        if extra not in pts:
            seq_w, _ = initial_sequence(cfg, bun, pts + [extra], 3)
            ok = ok and all(a <= b for a, b in zip(v[:3], seq_w.values))

    # multiplicity estimates on 50 certified witnesses
    checked = 0
    while checked < 50:
        cfg, bun, pts = _random_triple(rng)
        m = rng.randint(1, 3)
        res = alpha(cfg, bun, FatPointSpec.uniform(pts, m))
        for q in pts:
            data = mult_on_blowup(cfg, bun, res.value, res.witness, q)
            ok = ok and data.total_mult_at_q >= m  # oracle/certificate agreement
            if isinstance(q, OnExceptional):
                i = q.base_index - 1
                ok = ok and data.total_mult_at_q \
                    <= 2 * data.base_mults[i] - res.value
            else:
                ok = ok and data.total_mult_at_q <= 3 * res.value
            checked += 1
    # the off-exceptional bound is attained exactly by unions of lines
    cfg1 = DelPezzoConfig.create([P1])
    q = PlanePoint(2, 3, 1)
    lines = multiply(multiply(line_through(q, P1),
                              line_through(q, PlanePoint(1, 0, 1))),
                     line_through(q, PlanePoint(0, 1, 1)))
    ok = ok and multiplicity_at(lines, q) == 3

    # alpha never drops when the same plane data is read on a larger surface
    for _ in range(20):
        t = rng.randint(2, 4)
        s = rng.randint(1, t - 1)
        cfg_t = sample_general_config(t, rng)
        cfg_s = DelPezzoConfig.create(cfg_t.base_points[:s])
        pts = sample_exterior_points(cfg_t, 1, rng)
        m = rng.randint(1, 2)
        fat = FatPointSpec.uniform(pts, m)
        a_t = alpha(cfg_t, LineBundle.anticanonical(t), fat, want_witness=False)
        a_s = alpha(cfg_s, LineBundle.anticanonical(s), fat, want_witness=False)
        ok = ok and a_t.value >= a_s.value

    _report(7, "growth/subadditivity/inclusion (50 triples), multiplicity "
               "bounds (50 witnesses), long-run support, cross-surface "
               "comparison (20 samples)",
            ok, time.monotonic() - t0, 60)


def test_criterion_8_falsification():
    t0 = time.monotonic()
    ok = True
    for family, r in (("S1.triple", 1), ("S6.nonconcurrent", 6),
                      ("S8.generic", 8)):
        rep = falsify_random(r, family, 20, seed=80)
        ok = ok and rep.passed and rep.trials == 20
    _report(8, "20 seeded trials per family (S1 triple, S6 non-concurrent, "
               "S8 generic) all fail the characterized signatures",
            ok, time.monotonic() - t0, 60)
