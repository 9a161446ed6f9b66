"""Independent brute-force oracles used to freeze expected test values.

Everything here recomputes results from definitions with its own index
arithmetic (pure python + cmath where possible) so the checks stay
independent of the library's vectorized paths.
"""

from __future__ import annotations

import cmath
from itertools import product

import numpy as np


# ---------------------------------------------------------------------------
# mixed-radix indexing, independent of the library implementation

def decode(flat: int, moduli) -> tuple[int, ...]:
    coords = []
    for m in reversed(moduli):
        flat, c = divmod(flat, m)
        coords.append(c)
    return tuple(reversed(coords))


def encode(coords, moduli) -> int:
    idx = 0
    for c, m in zip(coords, moduli):
        idx = idx * m + (c % m)
    return idx


def char_value(moduli, a_coords, g_coords) -> complex:
    phase = sum(a * g / m for a, g, m in zip(a_coords, g_coords, moduli))
    return cmath.exp(2j * cmath.pi * phase)


def dft_bruteforce(moduli, values) -> np.ndarray:
    """Definitional transform: (1/|G|) sum_g f(g) conj(chi_a(g)) per a."""
    n = len(values)
    out = np.zeros(n, dtype=complex)
    for a in range(n):
        ac = decode(a, moduli)
        acc = 0j
        for g in range(n):
            gc = decode(g, moduli)
            acc += values[g] * char_value(moduli, ac, gc).conjugate()
        out[a] = acc / n
    return out


def convolve_bruteforce(moduli, f, h) -> np.ndarray:
    """(f * h)(g) = sum_x f(g - x) h(x), via coordinate arithmetic."""
    n = len(f)
    out = np.zeros(n)
    for g in range(n):
        gc = decode(g, moduli)
        acc = 0.0
        for x in range(n):
            xc = decode(x, moduli)
            diff = tuple((gi - xi) % m for gi, xi, m in zip(gc, xc, moduli))
            acc += f[encode(diff, moduli)] * h[x]
        out[g] = acc
    return out


# ---------------------------------------------------------------------------
# set partitions and the exhaustive coarsest equitable partition

def set_partitions(n: int):
    """All partitions of range(n), as tuples of sorted tuples (RGS order)."""
    labels = [0] * n

    def rec(i: int, used: int):
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(used)]
            for v, lab in enumerate(labels):
                blocks[lab].append(v)
            yield tuple(tuple(b) for b in blocks)
            return
        for v in range(used + 1):
            labels[i] = v
            yield from rec(i + 1, max(used, v + 1))

    yield from rec(0, 0)


def is_equitable_int(A, blocks) -> bool:
    """Exact equitability check for an integer matrix."""
    A = np.asarray(A)
    for bi in blocks:
        for bj in blocks:
            sums = {int(A[np.ix_([v], list(bj))].sum()) for v in bi}
            if len(sums) > 1:
                return False
    return True


def refines(finer, coarser) -> bool:
    coarser_sets = [set(b) for b in coarser]
    return all(any(set(b) <= c for c in coarser_sets) for b in finer)


def coarsest_equitable_bruteforce(A, initial_blocks):
    """The unique equitable partition refining ``initial`` that all others refine."""
    candidates = [
        P
        for P in set_partitions(len(np.asarray(A)))
        if refines(P, initial_blocks) and is_equitable_int(A, P)
    ]
    coarsest = [
        P for P in candidates if all(refines(Q, P) for Q in candidates)
    ]
    assert len(coarsest) == 1, f"coarsest equitable partition not unique: {coarsest}"
    return coarsest[0]


# ---------------------------------------------------------------------------
# fixed graphs and codes

def petersen_edges():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + ((i + 2) % 5)) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return outer + inner + spokes


def cycle_edges(n: int):
    return [(i, (i + 1) % n) for i in range(n)]


def path_edges(n: int):
    return [(i, i + 1) for i in range(n - 1)]


def star_edges(leaves: int):
    return [(0, i) for i in range(1, leaves + 1)]


def complete_edges(n: int):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


HAMMING74_ROWS = [
    [1, 0, 0, 0, 0, 1, 1],
    [0, 1, 0, 0, 1, 0, 1],
    [0, 0, 1, 0, 1, 1, 0],
    [0, 0, 0, 1, 1, 1, 1],
]


def adjacency(edges, n):
    A = np.zeros((n, n), dtype=np.int64)
    for u, v in edges:
        A[u, v] = A[v, u] = 1
    return A


def all_binary_vectors(n: int):
    return [tuple(v) for v in product(range(2), repeat=n)]
