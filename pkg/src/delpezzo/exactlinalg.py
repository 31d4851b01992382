"""Exact dense linear algebra over the rationals.

Rank and kernel computations are done by fraction-free (Bareiss) elimination
on integer matrices obtained by clearing denominators row by row, so every
answer is exact.  A modular fast path (Gaussian elimination mod a word-sized
prime, vectorised with numpy) is available as a pre-filter; it only ever
*skips* exact work when the modular result certifies the exact one, and falls
back to full integer elimination otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt, lcm
from typing import Optional, Sequence

import numpy as np

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover - gmpy2 is a normal dependency
    mpz = int

DEFAULT_PRIME = 2**31 - 1


class BadPrime(ValueError):
    """Raised when a denominator in the matrix vanishes modulo the prime."""


@dataclass(frozen=True)
class RatMatrix:
    """Dense row-major matrix with rational (or integer) entries."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")

    @classmethod
    def from_rows(cls, rows, cols: Optional[int] = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if rows:
            cols = len(rows[0]) if cols is None else cols
            if any(len(r) != cols for r in rows):
                raise ValueError("ragged rows")
        elif cols is None:
            cols = 0
        flat = tuple(e for r in rows for e in r)
        return cls(len(rows), cols, flat)

    def row_lists(self) -> list:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]


def _as_rows(m, cols: Optional[int] = None):
    """Accept a RatMatrix or a sequence of rows; return (rows, ncols)."""
    if isinstance(m, RatMatrix):
        return m.row_lists(), m.cols
    rows = [list(r) for r in m]
    if rows:
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
    else:
        ncols = 0 if cols is None else cols
    return rows, ncols


def _int_row(row) -> list:
    """Clear denominators of one row and strip the integer content."""
    den = 1
    for e in row:
        if isinstance(e, Fraction):
            den = lcm(den, e.denominator)
    ints = [int(e * den) if isinstance(e, Fraction) else int(e) * den for e in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
        if g == 1:
            return ints
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _int_rows(rows) -> list:
    return [_int_row(r) for r in rows]


def _echelon(int_rows, ncols):
    """Fraction-free Bareiss elimination.

    Returns (echelon_rows, pivot_cols).  Pivot choice is the largest absolute
    value in the current column, which keeps the procedure deterministic.
    """
    rows = [[mpz(e) for e in r] for r in int_rows if any(r)]
    piv_cols = []
    prev = mpz(1)
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        best, best_abs = -1, 0
        for i in range(r, nrows):
            v = abs(rows[i][c])
            if v > best_abs:
                best, best_abs = i, v
        if best < 0:
            continue
        if best != r:
            rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][c]
        rr = rows[r]
        for i in range(r + 1, nrows):
            ri = rows[i]
            f = ri[c]
            for j in range(c, ncols):
                ri[j] = (piv * ri[j] - f * rr[j]) // prev
        prev = piv
        piv_cols.append(c)
        r += 1
    return rows[:r], piv_cols


def _primitive_vector(vals) -> list:
    """Scale a rational vector to coprime integers, first nonzero positive."""
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
    return ints


def _back_substitute(ech, piv_cols, ncols, free_col) -> list:
    """Kernel vector with 1 in free_col and 0 in the other free columns."""
    v = [Fraction(0)] * ncols
    v[free_col] = Fraction(1)
    for t in range(len(piv_cols) - 1, -1, -1):
        jc = piv_cols[t]
        row = ech[t]
        s = Fraction(0)
        for c in range(jc + 1, ncols):
            vc = v[c]
            if vc:
                s += Fraction(int(row[c])) * vc
        v[jc] = -s / int(row[jc])
    return v


def _dot_is_zero(row, vec) -> bool:
    s = 0
    for a, b in zip(row, vec):
        if a and b:
            s += a * b
    return s == 0


def rank(m, cols: Optional[int] = None) -> int:
    """Exact rank over the rationals (empty matrix has rank 0)."""
    rows, ncols = _as_rows(m, cols)
    if not rows or ncols == 0:
        return 0
    _, piv_cols = _echelon(_int_rows(rows), ncols)
    return len(piv_cols)


def kernel_basis(m, cols: Optional[int] = None) -> list:
    """Exact basis of the right kernel, as primitive integer vectors.

    Each vector is re-verified against the matrix before being returned.
    """
    rows, ncols = _as_rows(m, cols)
    if ncols == 0:
        return []
    ints = _int_rows(rows) if rows else []
    ech, piv_cols = _echelon(ints, ncols) if ints else ([], [])
    piv_set = set(piv_cols)
    basis = []
    for f in range(ncols):
        if f in piv_set:
            continue
        vec = _primitive_vector(_back_substitute(ech, piv_cols, ncols, f))
        for row in ints:
            if not _dot_is_zero(row, vec):  # pragma: no cover - internal check
                raise ArithmeticError("kernel vector failed verification")
        basis.append(vec)
    return basis


def _modular_echelon(int_rows, ncols, p):
    """Row echelon mod p.  Returns (rank, pivot_row_indices, pivot_cols)."""
    nrows = len(int_rows)
    if nrows == 0 or ncols == 0:
        return 0, [], []
    a = np.array([[e % p for e in row] for row in int_rows], dtype=np.int64)
    perm = list(range(nrows))
    piv_cols = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
            perm[r], perm[i] = perm[i], perm[r]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        if r + 1 < nrows:
            f = a[r + 1:, c]
            a[r + 1:] = (a[r + 1:] - np.outer(f, a[r])) % p
        piv_cols.append(c)
        r += 1
    return r, perm[:r], piv_cols


def modular_rank(m, p: int = DEFAULT_PRIME, cols: Optional[int] = None) -> int:
    """Rank of the matrix reduced mod p; always <= the exact rank.

    Raises BadPrime if clearing denominators requires dividing by p.
    """
    rows, ncols = _as_rows(m, cols)
    for row in rows:
        for e in row:
            if isinstance(e, Fraction) and e.denominator % p == 0:
                raise BadPrime(f"denominator divisible by {p}")
    ints = []
    for row in rows:
        den = 1
        for e in row:
            if isinstance(e, Fraction):
                den = lcm(den, e.denominator)
        if den % p == 0:
            raise BadPrime(f"row denominator lcm divisible by {p}")
        ints.append([int(e * den) if isinstance(e, Fraction) else int(e) for e in row])
    r, _, _ = _modular_echelon(ints, ncols, p)
    return r


# --------------------------------------------------------------------------
# Certified hybrid path used by the alpha engine: modular elimination does the
# heavy lifting, but every conclusion is backed by an exact argument (row
# counts, or integer vectors verified against the full matrix).
# --------------------------------------------------------------------------

@dataclass
class ProbeResult:
    rank: int
    kernel_dim: int
    vector: Optional[list]  # one primitive kernel vector, exactly verified


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in (2, 3, 5, 7, 11, 13, 17):
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_desc(start: int):
    q = start if start % 2 else start - 1
    while q > 2**30:
        if _is_prime(q):
            yield q
        q -= 2


def _mod_solve(a_rows, b, q):
    """Solve the square system A x = b mod q, or None if A is singular mod q."""
    n = len(a_rows)
    aug = np.empty((n, n + 1), dtype=np.int64)
    for i, row in enumerate(a_rows):
        aug[i, :n] = [e % q for e in row]
        aug[i, n] = b[i] % q
    for c in range(n):
        nz = np.nonzero(aug[c:, c])[0]
        if len(nz) == 0:
            return None
        i = c + int(nz[0])
        if i != c:
            aug[[c, i]] = aug[[i, c]]
        inv = pow(int(aug[c, c]), -1, q)
        aug[c] = (aug[c] * inv) % q
        if c + 1 < n:
            f = aug[c + 1:, c]
            aug[c + 1:] = (aug[c + 1:] - np.outer(f, aug[c])) % q
    x = [0] * n
    for c in range(n - 1, -1, -1):
        s = int(aug[c, n])
        for j in range(c + 1, n):
            s -= int(aug[c, j]) * x[j]
        x[c] = s % q
    return x


def _rational_reconstruct(x, modulus, bound):
    """Recover p/q with |p|, q <= bound from x mod modulus (Wang's algorithm)."""
    a0, a1 = modulus, x % modulus
    b0, b1 = 0, 1
    while a1 > bound:
        quo = a0 // a1
        a0, a1 = a1, a0 - quo * a1
        b0, b1 = b1, b0 - quo * b1
    num, den = a1, b1
    if den == 0:
        return None
    if den < 0:
        num, den = -num, -den
    if den > bound:
        return None
    g = gcd(abs(num), den)
    if g > 1:
        if modulus % g == 0 or gcd(den, modulus) != 1:
            return None
        num //= g
        den //= g
    if (num - x * den) % modulus != 0:
        return None
    return num, den


def _crt_kernel_vector(sub_rows, piv_cols, free_col, all_rows, ncols, start_prime):
    """One primitive kernel vector of the square pivot system, via multi-prime
    solving plus rational reconstruction; verified exactly before returning.

    Returns None if the prime budget is exhausted (caller falls back to
    exact elimination).
    """
    n = len(sub_rows)
    a_rows = [[row[j] for j in piv_cols] for row in sub_rows]
    b = [-row[free_col] for row in sub_rows]
    # generous bit budget from a Hadamard-style estimate
    bits = 64
    for row in a_rows:
        bits += max(int(sum(e * e for e in row)).bit_length() // 2 + 1, 1)
    bits += max(int(sum(e * e for e in b)).bit_length() // 2 + 1, 1)
    max_primes = 2 * bits // 30 + 4

    residues = None
    modulus = 1
    next_check = 1
    used = 0
    for q in _primes_desc(start_prime - 2):
        if used >= max_primes:
            break
        x = _mod_solve(a_rows, b, q)
        if x is None:
            continue
        used += 1
        if residues is None:
            residues = list(x)
            modulus = q
        else:
            inv = pow(modulus % q, -1, q)
            for i in range(n):
                t = ((x[i] - residues[i]) * inv) % q
                residues[i] += modulus * t
            modulus *= q
        if used >= next_check:
            next_check = used * 2
            bound = isqrt(modulus // 2)
            coords = []
            ok = True
            for ri in residues:
                rec = _rational_reconstruct(ri, modulus, bound)
                if rec is None:
                    ok = False
                    break
                coords.append(Fraction(rec[0], rec[1]))
            if not ok:
                continue
            vec = [Fraction(0)] * ncols
            vec[free_col] = Fraction(1)
            for j, c in zip(piv_cols, coords):
                vec[j] = c
            cand = _primitive_vector(vec)
            if all(_dot_is_zero(row, cand) for row in all_rows):
                return cand
    return None


def kernel_probe(m, cols: Optional[int] = None, prime: Optional[int] = DEFAULT_PRIME,
                 want_vector: bool = True) -> ProbeResult:
    """Certified rank / kernel-dimension probe with an optional witness vector.

    With a prime, modular elimination is used to certify the exact answer
    whenever possible (full column rank mod p, or full row rank mod p with
    fewer rows than columns); anything ambiguous is settled by exact
    elimination on the modular pivot rows, with every produced vector verified
    against the full matrix.  With prime=None everything is exact.
    """
    rows, ncols = _as_rows(m, cols)
    ints = _int_rows(rows)
    ints = [r for r in ints if any(r)]
    nrows = len(ints)
    if ncols == 0:
        return ProbeResult(0, 0, None)
    if nrows == 0:
        vec = [0] * ncols
        vec[0] = 1
        return ProbeResult(0, ncols, vec)

    if prime is not None:
        rank_p, piv_rows, piv_cols = _modular_echelon(ints, ncols, prime)
        if rank_p == ncols:
            # full column rank mod p certifies full column rank over Q
            return ProbeResult(ncols, 0, None)
        piv_set = set(piv_cols)
        free_col = next(f for f in range(ncols) if f not in piv_set)
        if rank_p == nrows:
            # rank <= nrows always, so rank == nrows exactly
            kdim = ncols - nrows
            vec = None
            if want_vector:
                vec = _crt_kernel_vector(ints, piv_cols, free_col, ints, ncols, prime)
                if vec is None:  # pragma: no cover - prime budget exhausted
                    vec = kernel_basis(ints, ncols)[0]
            return ProbeResult(nrows, kdim, vec)
        # ambiguous: rank_p < min(nrows, ncols)
        sub = [ints[i] for i in piv_rows]  # exact rank of sub is rank_p
        if ncols - rank_p == 1:
            vec = _crt_kernel_vector(sub, piv_cols, free_col, sub, ncols, prime)
            if vec is not None and all(_dot_is_zero(row, vec) for row in ints):
                return ProbeResult(rank_p, 1, vec)
        else:
            sub_basis = kernel_basis(sub, ncols)
            if all(_dot_is_zero(row, v) for v in sub_basis for row in ints):
                return ProbeResult(rank_p, len(sub_basis),
                                   sub_basis[0] if sub_basis else None)
        # unlucky prime: settle exactly on the full matrix

    exact_rank = rank(ints, ncols)
    if exact_rank == ncols:
        return ProbeResult(ncols, 0, None)
    basis = kernel_basis(ints, ncols)
    return ProbeResult(exact_rank, len(basis), basis[0])


def rank_certified(m, cols: Optional[int] = None, prime: Optional[int] = DEFAULT_PRIME) -> int:
    """Exact rank, using the modular shortcut when it is self-certifying."""
    rows, ncols = _as_rows(m, cols)
    ints = [r for r in _int_rows(rows) if any(r)]
    if not ints or ncols == 0:
        return 0
    if prime is not None:
        rank_p, _, _ = _modular_echelon(ints, ncols, prime)
        if rank_p == len(ints) or rank_p == ncols:
            return rank_p
    return rank(ints, ncols)
