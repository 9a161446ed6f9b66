"""Linear codes over small prime fields.

Generator matrices are kept in reduced row-echelon form over F_q so that
codes compare by identity of their canonical basis.  Duals come from the
mod-q nullspace, enumeration is exhaustive (q^k capped), and a code embeds
as an additive subgroup of Z_q^n through the shared flat-index encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .abelian import DEFAULT_ORDER_CAP, GroupSpec, Subgroup

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)
ENUMERATION_CAP = 65536


def _check_prime(q: int) -> None:
    if q not in SUPPORTED_PRIMES:
        raise ValueError(f"field size must be a prime in {SUPPORTED_PRIMES}, got {q}")


def _inv_mod(a: int, q: int) -> int:
    return pow(int(a), q - 2, q)


def rref_mod(matrix: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over F_q.

    Returns (R, pivot_cols).  R has unit pivots, zeros above and below each
    pivot, pivot columns strictly increasing, and zero rows removed.
    """
    _check_prime(q)
    R = np.array(matrix, dtype=np.int64) % q
    if R.ndim != 2:
        raise ValueError("generator matrix must be two-dimensional")
    rows, cols = R.shape
    pivot_cols: list[int] = []
    pivot_row = 0
    for col in range(cols):
        hit = -1
        for r in range(pivot_row, rows):
            if R[r, col] % q != 0:
                hit = r
                break
        if hit < 0:
            continue
        if hit != pivot_row:
            R[[pivot_row, hit]] = R[[hit, pivot_row]]
        R[pivot_row] = (R[pivot_row] * _inv_mod(R[pivot_row, col], q)) % q
        for r in range(rows):
            if r != pivot_row and R[r, col] % q != 0:
                R[r] = (R[r] - R[r, col] * R[pivot_row]) % q
        pivot_cols.append(col)
        pivot_row += 1
        if pivot_row == rows:
            break
    return R[: len(pivot_cols)], pivot_cols


@dataclass(frozen=True)
class LinearCode:
    """An [n, k]_q linear code with canonical RREF generator basis."""

    n: int
    k: int
    q: int
    basis: np.ndarray
    rank_deficient_input: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        _check_prime(self.q)
        if self.n < 1:
            raise ValueError("code length must be >= 1")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"dimension {self.k} out of range [0, {self.n}]")
        if self.q**self.k > ENUMERATION_CAP:
            raise ValueError(
                f"q^k = {self.q**self.k} exceeds the enumeration cap {ENUMERATION_CAP}"
            )
        basis = np.array(self.basis, dtype=np.int64) % self.q
        if basis.shape != (self.k, self.n):
            raise ValueError(f"basis must be {self.k}x{self.n}, got {basis.shape}")
        canon, pivots = rref_mod(basis, self.q) if self.k else (basis, [])
        if len(pivots) != self.k or (self.k and not np.array_equal(canon, basis)):
            raise ValueError("basis must be a full-rank matrix in reduced row-echelon form")
        basis.flags.writeable = False
        object.__setattr__(self, "basis", basis)

    @classmethod
    def zero(cls, n: int, q: int) -> "LinearCode":
        return cls(n, 0, q, np.zeros((0, n), dtype=np.int64))

    @classmethod
    def full(cls, n: int, q: int) -> "LinearCode":
        return cls(n, n, q, np.eye(n, dtype=np.int64))

    def __str__(self) -> str:
        return f"[{self.n},{self.k}]_{self.q} code"


def code_from_generator(rows: Sequence[Sequence[int]] | np.ndarray, q: int) -> LinearCode:
    """Build a code from generator rows; rank-deficient input is accepted.

    The rows are row-reduced; if the rank is below the number of rows the
    returned code has k = rank and rank_deficient_input set.
    """
    _check_prime(q)
    arr = np.array(rows, dtype=np.int64)
    if arr.size == 0 or arr.ndim != 2:
        raise ValueError("generator matrix must be a nonempty 2-D array")
    if arr.min() < 0 or arr.max() >= q:
        raise ValueError(f"generator entries must lie in [0, {q})")
    R, pivots = rref_mod(arr, q)
    return LinearCode(arr.shape[1], len(pivots), q, R, rank_deficient_input=len(pivots) < arr.shape[0])


def enumerate_codewords(code: LinearCode) -> np.ndarray:
    """All q^k codewords, one per row, in lexicographic message order."""
    q, k, n = code.q, code.k, code.n
    if k == 0:
        return np.zeros((1, n), dtype=np.int64)
    messages = np.stack(
        np.unravel_index(np.arange(q**k), (q,) * k), axis=1
    ).astype(np.int64)
    return (messages @ code.basis) % q


def dual(code: LinearCode) -> LinearCode:
    """The dual code: all vectors orthogonal to every codeword, dim n - k."""
    q, n, k = code.q, code.n, code.k
    if k == 0:
        return LinearCode.full(n, q)
    R, pivots = rref_mod(code.basis, q)
    free_cols = [c for c in range(n) if c not in pivots]
    vectors = np.zeros((len(free_cols), n), dtype=np.int64)
    for i, fc in enumerate(free_cols):
        vectors[i, fc] = 1
        for r, pc in enumerate(pivots):
            vectors[i, pc] = (-R[r, fc]) % q
    canon, dual_pivots = rref_mod(vectors, q) if len(free_cols) else (vectors, [])
    out = LinearCode(n, len(dual_pivots), q, canon)
    if ((code.basis @ out.basis.T) % q).any():
        raise RuntimeError("dual basis is not orthogonal to the code")
    return out


@dataclass(frozen=True)
class WeightEnumerator:
    """Codeword counts by Hamming weight: coefficients A_0..A_n."""

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(int(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if not coeffs or coeffs[0] != 1:
            raise ValueError("A_0 must be 1 (the zero codeword)")
        if any(c < 0 for c in coeffs):
            raise ValueError("weight counts must be nonnegative")

    @property
    def total(self) -> int:
        return sum(self.coefficients)

    def __str__(self) -> str:
        terms = [
            "1" if w == 0 else (f"{c}z^{w}" if c != 1 else f"z^{w}")
            for w, c in enumerate(self.coefficients)
            if c
        ]
        return " + ".join(terms)


def weight_enumerator(code: LinearCode) -> WeightEnumerator:
    words = enumerate_codewords(code)
    weights = (words != 0).sum(axis=1)
    counts = np.bincount(weights, minlength=code.n + 1)
    enum = WeightEnumerator(tuple(counts.tolist()))
    if enum.total != code.q**code.k:
        raise RuntimeError("weight enumerator does not sum to q^k")
    return enum


def code_to_subgroup(code: LinearCode, max_order: int = DEFAULT_ORDER_CAP) -> Subgroup:
    """The additive subgroup of Z_q^n whose members are the codewords."""
    group = GroupSpec((code.q,) * code.n, max_order=max_order)
    words = enumerate_codewords(code)
    radix = np.array([code.q ** (code.n - 1 - j) for j in range(code.n)], dtype=np.int64)
    flats = np.sort(words @ radix)
    return Subgroup(group, tuple(flats.tolist()))


def load_generator_file(text: str) -> LinearCode:
    """Parse a generator matrix file.

    First non-comment line: ``n k q``; then k lines of n space-separated
    digits.  Lines beginning with ``#`` are comments.
    """
    lines = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise ValueError("empty generator file")
    header = lines[0].split()
    if len(header) != 3:
        raise ValueError(f"header must be 'n k q', got {lines[0]!r}")
    n, k, q = (int(x) for x in header)
    if len(lines) - 1 != k:
        raise ValueError(f"expected {k} generator rows, found {len(lines) - 1}")
    rows = []
    for line in lines[1:]:
        entries = [int(x) for x in line.split()]
        if len(entries) != n:
            raise ValueError(f"row {line!r} does not have {n} entries")
        rows.append(entries)
    if k == 0:
        return LinearCode.zero(n, q)
    return code_from_generator(rows, q)
