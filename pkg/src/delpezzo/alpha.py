"""Initial degrees of fat-point subschemes and derived reports.

alpha(mZ) is the least k >= 1 such that the stacked linear system (base-point
conditions plus fat-point conditions, on the coefficients of degree k*d
forms) has a nontrivial kernel.  Every reported value comes with a witness
curve that is re-verified through the chart-expansion multiplicity oracle,
independently of the rank computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from . import exactlinalg
from .blowup import (DelPezzoConfig, Exterior, FatPointSpec, LineBundle,
                     OnExceptional, base_condition_rows, mult_on_blowup,
                     point_condition_rows)
from .plane import HomogeneousForm, monomial_basis


class CapExceeded(RuntimeError):
    """The degree search hit its cap without finding a section."""


@dataclass(frozen=True)
class AlphaResult:
    value: int
    witness: Optional[HomogeneousForm]
    system_rank: int
    kernel_dim: int


@dataclass(frozen=True)
class InitialSequence:
    values: tuple
    runs: tuple  # (start m, length) of every maximal constant run, 1-indexed


def h0_closed_form(r: int, m: int) -> int:
    """Sections of the m-th anticanonical multiple: ((9-r)m^2+(9-r)m+2)/2."""
    if not 1 <= r <= 8:
        raise ValueError("r must be in 1..8")
    if m < 1:
        raise ValueError("m must be positive")
    num = (9 - r) * m * m + (9 - r) * m + 2
    assert num % 2 == 0
    return num // 2


def h0_computed(config: DelPezzoConfig, bundle: LineBundle, k: int,
                prime: Optional[int] = exactlinalg.DEFAULT_PRIME) -> int:
    """C(kd+2, 2) minus the exact rank of the base-point condition rows."""
    rows = base_condition_rows(config, bundle, k)
    ncols = len(monomial_basis(k * bundle.d))
    return ncols - exactlinalg.rank_certified(rows, cols=ncols, prime=prime)


def stacked_rows(config: DelPezzoConfig, bundle: LineBundle, k: int,
                 fat: FatPointSpec) -> list:
    rows = base_condition_rows(config, bundle, k)
    for q, m in fat.points:
        rows.extend(point_condition_rows(config, bundle, k, q, m))
    return rows


def _verify_witness(config, bundle, k, witness, fat):
    for q, m in fat.points:
        data = mult_on_blowup(config, bundle, k, witness, q)
        if data.total_mult_at_q < m:  # pragma: no cover - internal soundness check
            raise ArithmeticError(
                f"witness multiplicity {data.total_mult_at_q} < demanded {m} at {q}")


def alpha(config: DelPezzoConfig, bundle: LineBundle, fat: FatPointSpec, *,
          k_max: int = 12, prime: Optional[int] = exactlinalg.DEFAULT_PRIME,
          want_witness: bool = True) -> AlphaResult:
    """Least k with a nontrivial kernel, plus a verified witness curve.

    The search always terminates at or before the first k where the naive
    condition count leaves spare coefficients; k_max is a safety cap.
    """
    if not fat.points:
        raise ValueError("the fat-point specification must be nonempty")
    for k in range(1, k_max + 1):
        rows = stacked_rows(config, bundle, k, fat)
        ncols = len(monomial_basis(k * bundle.d))
        probe = exactlinalg.kernel_probe(rows, cols=ncols, prime=prime,
                                         want_vector=want_witness)
        if probe.kernel_dim >= 1:
            witness = None
            if want_witness:
                witness = HomogeneousForm(k * bundle.d, probe.vector)
                _verify_witness(config, bundle, k, witness, fat)
            return AlphaResult(k, witness, probe.rank, probe.kernel_dim)
    raise CapExceeded(f"no section found for k <= {k_max}")


def _runs(values):
    runs = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] != values[start]:
            runs.append((start + 1, i - start))
            start = i
    return tuple(runs)


def initial_sequence(config: DelPezzoConfig, bundle: LineBundle, points,
                     m_max: int, *, k_max: int = 12,
                     prime: Optional[int] = exactlinalg.DEFAULT_PRIME,
                     want_witness: bool = False):
    """alpha(mZ) for m = 1..m_max with uniform multiplicity m at each point.

    Returns (InitialSequence, list of AlphaResult).
    """
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    results = []
    for m in range(1, m_max + 1):
        fat = FatPointSpec.uniform(points, m)
        results.append(alpha(config, bundle, fat, k_max=k_max, prime=prime,
                             want_witness=want_witness))
    values = tuple(r.value for r in results)
    return InitialSequence(values, _runs(values)), results


def max_equal_run(values):
    """(start m, length) of the longest constant run; ties -> smallest start."""
    values = list(values)
    if not values:
        raise ValueError("sequence must be nonempty")
    best = max(_runs(values), key=lambda run: run[1])
    for run in _runs(values):
        if run[1] == best[1]:
            return run
    raise AssertionError  # pragma: no cover


@dataclass(frozen=True)
class ChudnovskyReport:
    alpha1: int
    hypothesis_holds: bool  # alpha(Z) >= 2, the theorem's assumption
    bound: Fraction
    entries: tuple  # (m, alpha(mZ), ratio Fraction, ratio >= bound)
    passed: bool


def chudnovsky_check(config: DelPezzoConfig, points, m_max: int, *,
                     k_max: int = 12,
                     prime: Optional[int] = exactlinalg.DEFAULT_PRIME) -> ChudnovskyReport:
    """Exact check of alpha(mZ)/m >= (alpha(Z)-1)/2 on S_r, r <= 6; when
    alpha(Z) = 1 the comparison bound drops to the unconditional 1/5."""
    if config.r > 6:
        raise ValueError("the bound is stated for r <= 6")
    bundle = LineBundle.anticanonical(config.r)
    a1 = alpha(config, bundle, FatPointSpec.uniform(points, 1),
               k_max=k_max, prime=prime, want_witness=False).value
    hypothesis = a1 >= 2
    bound = Fraction(a1 - 1, 2) if hypothesis else Fraction(1, 5)
    entries = []
    for m in range(1, m_max + 1):
        am = alpha(config, bundle, FatPointSpec.uniform(points, m),
                   k_max=k_max, prime=prime, want_witness=False).value
        ratio = Fraction(am, m)
        entries.append((m, am, ratio, ratio >= bound))
    return ChudnovskyReport(a1, hypothesis, bound, tuple(entries),
                            all(e[3] for e in entries))


def minimal_subset_preserving_alpha(config: DelPezzoConfig, bundle: LineBundle,
                                    points, *, k_max: int = 12,
                                    prime: Optional[int] = exactlinalg.DEFAULT_PRIME) -> list:
    """Inclusion-minimal subset W of the points with alpha(W) = alpha(Z),
    found by greedy single-point removal in input order."""
    points = list(points)
    target = alpha(config, bundle, FatPointSpec.uniform(points, 1),
                   k_max=k_max, prime=prime, want_witness=False).value
    current = points
    i = 0
    while i < len(current):
        trial = current[:i] + current[i + 1:]
        if trial and alpha(config, bundle, FatPointSpec.uniform(trial, 1),
                           k_max=k_max, prime=prime,
                           want_witness=False).value == target:
            current = trial
        else:
            i += 1
    return current
