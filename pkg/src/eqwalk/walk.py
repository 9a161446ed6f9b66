"""Dense walk operators, exact total-variation evolution, and equitable partitions.

The stochastic-orientation contract: distributions are column vectors and a
step is mu -> A @ mu, which conserves mass when A is column-stochastic.  The
row_stochastic flag records A @ 1 = 1.  Group convolution walks are doubly
stochastic, so both conventions hold at once on every bound-producing path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .abelian import Distribution, GroupSpec, uniform_on_set

STATE_CAP = 65536
ENTRY_CLAMP = -1e-14
STOCHASTIC_TOL = 1e-10
SYMMETRY_TOL = 1e-10
NORMALITY_TOL = 1e-10
EQUITABLE_TOL = 1e-9
INTERTWINE_TOL = 1e-10
REFINE_GRID = 1e-9


class TransitionMatrix:
    """A dense walk operator with verified stochasticity/symmetry flags."""

    def __init__(self, matrix) -> None:
        A = np.array(matrix, dtype=np.float64)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"transition matrix must be square, got {A.shape}")
        if A.shape[0] > STATE_CAP:
            raise ValueError(f"state count {A.shape[0]} exceeds cap {STATE_CAP}")
        lo = A.min()
        if lo < ENTRY_CLAMP:
            raise ValueError(f"negative entry {lo} below clamp threshold {ENTRY_CLAMP}")
        if lo < 0.0:
            np.clip(A, 0.0, None, out=A)
        A.flags.writeable = False
        self.matrix = A
        self.size = A.shape[0]
        self.row_stochastic = bool(np.abs(A.sum(axis=1) - 1.0).max() <= STOCHASTIC_TOL)
        self.column_stochastic = bool(np.abs(A.sum(axis=0) - 1.0).max() <= STOCHASTIC_TOL)
        self._exactly_symmetric = bool(np.array_equal(A, A.T))
        self.symmetric = self._exactly_symmetric or bool(
            np.abs(A - A.T).max() <= SYMMETRY_TOL
        )

    @cached_property
    def normal(self) -> bool:
        """Whether A A^T = A^T A within tolerance.

        Elementwise-symmetric matrices short-circuit (the two products are
        then bitwise identical); otherwise the O(n^3) commutator is formed.
        """
        if self._exactly_symmetric:
            return True
        A = self.matrix
        return bool(np.abs(A @ A.T - A.T @ A).max() <= NORMALITY_TOL)

    @property
    def doubly_stochastic(self) -> bool:
        return self.row_stochastic and self.column_stochastic


def _as_matrix(A) -> np.ndarray:
    return A.matrix if isinstance(A, TransitionMatrix) else np.asarray(A, dtype=np.float64)


def _as_vector(mu, n: int) -> np.ndarray:
    vals = mu.values if isinstance(mu, Distribution) else np.asarray(mu, dtype=np.float64)
    if vals.shape != (n,):
        raise ValueError(f"distribution has shape {vals.shape}, expected ({n},)")
    return vals


def transition_from_distribution(group: GroupSpec, f: Distribution) -> TransitionMatrix:
    """The convolution walk operator with entry (g1, g2) = f(g1 - g2)."""
    if f.group.moduli != group.moduli:
        raise ValueError("distribution is not defined on the given group")
    n = group.order
    if n > STATE_CAP:
        raise ValueError(f"group order {n} exceeds the dense-matrix cap {STATE_CAP}")
    coords = group.coords_table
    moduli = np.array(group.moduli, dtype=np.int64)
    radix = group._radix
    A = np.empty((n, n), dtype=np.float64)
    chunk = max(1, (1 << 22) // max(1, n * group.rank))
    for start in range(0, n, chunk):
        diff = (coords[start : start + chunk, None, :] - coords[None, :, :]) % moduli
        A[start : start + chunk] = f.values[diff @ radix]
    T = TransitionMatrix(A)
    if not T.doubly_stochastic:
        raise RuntimeError("convolution walk failed the doubly-stochastic check")
    return T


def transition_from_graph(edges: Iterable[tuple[int, int]], n_vertices: int) -> TransitionMatrix:
    """Simple random walk (1/d) * adjacency on an undirected d-regular graph."""
    n = int(n_vertices)
    if n < 1:
        raise ValueError("graph needs at least one vertex")
    adj = np.zeros((n, n), dtype=np.int64)
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
        if u == v:
            raise ValueError(f"self-loop at vertex {u} not allowed")
        if adj[u, v]:
            raise ValueError(f"duplicate edge ({u}, {v})")
        adj[u, v] = adj[v, u] = 1
    degrees = adj.sum(axis=1)
    if degrees.min() != degrees.max():
        raise ValueError(
            f"graph is not regular: degrees {sorted(set(degrees.tolist()))}"
        )
    d = int(degrees[0])
    if d == 0:
        raise ValueError("graph has no edges")
    return TransitionMatrix(adj / d)


def transition_cayley(group: GroupSpec, connection_set: Iterable) -> TransitionMatrix:
    """Simple random walk on the Cayley graph of a connection set S.

    Equals the convolution walk of the uniform distribution on S; the
    matrix is symmetric exactly when S = -S.
    """
    from .abelian import _as_flat

    flats = sorted({_as_flat(group, s) for s in connection_set})
    if not flats:
        raise ValueError("connection set must be nonempty")
    if flats[0] == 0:
        raise ValueError("connection set must not contain the identity")
    return transition_from_distribution(group, uniform_on_set(group, np.array(flats)))


def load_edge_list(text: str) -> tuple[list[tuple[int, int]], int]:
    """Parse a text edge list: one ``u v`` pair per line, ``#`` comments."""
    edges: list[tuple[int, int]] = []
    n = 0
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if u < 0 or v < 0:
            raise ValueError(f"negative vertex id in {line!r}")
        edges.append((u, v))
        n = max(n, u + 1, v + 1)
    if not edges:
        raise ValueError("edge list is empty")
    return edges, n


def step(A: TransitionMatrix, mu) -> np.ndarray:
    """One walk step A @ mu; requires column-stochastic A."""
    if not A.column_stochastic:
        raise ValueError("step requires a column-stochastic transition matrix")
    vals = _as_vector(mu, A.size)
    out = A.matrix @ vals
    lo = out.min()
    if lo < ENTRY_CLAMP:
        raise RuntimeError(f"step produced negative mass {lo}")
    if lo < 0.0:
        np.clip(out, 0.0, None, out=out)
    total = out.sum()
    if abs(total - 1.0) > 1e-9:
        raise RuntimeError(f"step lost probability mass: sum = {total}")
    return out


def power_step(A: TransitionMatrix, mu, ell: int) -> np.ndarray:
    if ell < 0:
        raise ValueError("ell must be >= 0")
    out = _as_vector(mu, A.size).copy()
    for _ in range(ell):
        out = step(A, out)
    return out


def tv_distance(mu, nu) -> float:
    """Total variation distance: half the L1 distance."""
    a = np.asarray(mu.values if isinstance(mu, Distribution) else mu, dtype=np.float64)
    b = np.asarray(nu.values if isinstance(nu, Distribution) else nu, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    return 0.5 * float(np.abs(a - b).sum())


def exact_tv_curve(A: TransitionMatrix, mu0, ell_max: int) -> np.ndarray:
    """[TV(u, A^ell mu0)] for ell = 1..ell_max, by repeated stepping."""
    if ell_max < 1:
        raise ValueError("ell_max must be >= 1")
    uniform = np.full(A.size, 1.0 / A.size)
    mu = _as_vector(mu0, A.size).copy()
    out = np.empty(ell_max)
    for ell in range(1, ell_max + 1):
        mu = step(A, mu)
        out[ell - 1] = tv_distance(uniform, mu)
    return out


@dataclass(frozen=True)
class Partition:
    """A partition of [0, n) into nonempty blocks.

    The incidence structure (the 0/1 matrix whose columns are block
    indicators) is represented implicitly by the block_of array.
    """

    blocks: tuple[np.ndarray, ...]
    n_states: int
    block_of: np.ndarray

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]], n_states: int) -> "Partition":
        n = int(n_states)
        block_of = np.full(n, -1, dtype=np.int64)
        norm: list[np.ndarray] = []
        for i, block in enumerate(blocks):
            arr = np.unique(np.asarray(list(block), dtype=np.int64))
            if arr.size == 0:
                raise ValueError(f"block {i} is empty")
            if arr.size != len(list(block)):
                raise ValueError(f"block {i} has duplicate states")
            if arr.min() < 0 or arr.max() >= n:
                raise ValueError(f"block {i} has states outside [0, {n})")
            if (block_of[arr] >= 0).any():
                raise ValueError("blocks are not disjoint")
            block_of[arr] = i
            arr.flags.writeable = False
            norm.append(arr)
        if (block_of < 0).any():
            raise ValueError("blocks do not cover every state")
        block_of.flags.writeable = False
        return cls(tuple(norm), n, block_of)

    @classmethod
    def from_block_ids(cls, labels: Sequence[int]) -> "Partition":
        lab = np.asarray(labels, dtype=np.int64)
        ids = np.unique(lab)
        return cls.from_blocks([np.flatnonzero(lab == i) for i in ids], lab.size)

    @classmethod
    def trivial(cls, n_states: int) -> "Partition":
        return cls.from_blocks([range(n_states)], n_states)

    @classmethod
    def singletons(cls, n_states: int) -> "Partition":
        return cls.from_blocks([[i] for i in range(n_states)], n_states)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def block_sizes(self) -> np.ndarray:
        return np.array([b.size for b in self.blocks])

    def refines(self, other: "Partition") -> bool:
        """True if every block of self lies inside a block of other."""
        if self.n_states != other.n_states:
            return False
        return all(np.unique(other.block_of[b]).size == 1 for b in self.blocks)

    def key(self) -> tuple[tuple[int, ...], ...]:
        """Canonical hashable form: blocks sorted by minimal element."""
        return tuple(
            sorted((tuple(b.tolist()) for b in self.blocks), key=lambda t: t[0])
        )


def incidence_matrix(partition: Partition) -> np.ndarray:
    """The n x r 0/1 matrix whose columns are the block indicator vectors."""
    M = np.zeros((partition.n_states, partition.n_blocks))
    for j, block in enumerate(partition.blocks):
        M[block, j] = 1.0
    return M


def partition_from_cosets(cosets) -> Partition:
    """Convert a coset partition of a group into a walk Partition."""
    return Partition.from_blocks(
        [b for b in cosets.blocks], cosets.group.order
    )


@dataclass(frozen=True)
class QuotientMatrix:
    """The r x r matrix of constant block row sums of an equitable partition."""

    entries: np.ndarray
    partition: Partition
    intertwining_residual: float

    def __post_init__(self) -> None:
        ent = np.array(self.entries, dtype=np.float64)
        r = self.partition.n_blocks
        if ent.shape != (r, r):
            raise ValueError(f"quotient must be {r}x{r}, got {ent.shape}")
        ent.flags.writeable = False
        object.__setattr__(self, "entries", ent)


def _block_row_sums(M: np.ndarray, partition: Partition) -> np.ndarray:
    """(n, r) array: row v, column j holds sum of M[v, w] over w in block j."""
    return np.column_stack([M[:, block].sum(axis=1) for block in partition.blocks])


def is_equitable(
    A, partition: Partition, tol: float = EQUITABLE_TOL
) -> tuple[bool, QuotientMatrix | None]:
    """Test whether every block submatrix has constant row sums.

    Returns (flag, quotient); the quotient entry q_ij is the mean block row
    sum and is only returned when the partition is equitable within tol.
    """
    M = _as_matrix(A)
    if M.shape[0] != partition.n_states:
        raise ValueError("partition does not match the matrix size")
    S = _block_row_sums(M, partition)
    r = partition.n_blocks
    Q = np.empty((r, r))
    for i, block in enumerate(partition.blocks):
        rows = S[block]
        spread = rows.max(axis=0) - rows.min(axis=0)
        if spread.max() > tol:
            return False, None
        Q[i] = rows.mean(axis=0)
    residual = float(np.abs(S - Q[partition.block_of]).max())
    return True, QuotientMatrix(Q, partition, residual)


def quotient(
    A,
    partition: Partition,
    tol: float = EQUITABLE_TOL,
    intertwine_tol: float = INTERTWINE_TOL,
) -> QuotientMatrix:
    """The quotient matrix of an equitable partition.

    Also verifies the intertwining identity A M_P = M_P A^{|P}; the max-entry
    residual is stored on the result.
    """
    ok, Q = is_equitable(A, partition, tol)
    if not ok or Q is None:
        raise ValueError("partition is not equitable for this matrix")
    if Q.intertwining_residual > intertwine_tol:
        raise RuntimeError(
            f"intertwining residual {Q.intertwining_residual} exceeds {intertwine_tol}"
        )
    return Q


def lift(partition: Partition, v: Sequence) -> np.ndarray:
    """Expand a block vector to a state vector: state s gets v[block(s)]."""
    arr = np.asarray(v)
    if arr.shape != (partition.n_blocks,):
        raise ValueError(
            f"expected one value per block ({partition.n_blocks}), got shape {arr.shape}"
        )
    return arr[partition.block_of]


def coarsest_equitable_refinement(A, initial: Partition) -> Partition:
    """Iteratively split blocks by block-row-sum signatures until stable.

    On integer matrices the signatures are exact and the result is the
    coarsest equitable partition refining the initial one; floating-point
    matrices are grouped on a 1e-9 signature grid.
    """
    M = _as_matrix(A)
    n = M.shape[0]
    if M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if initial.n_states != n:
        raise ValueError("partition does not match the matrix size")
    rounded = np.rint(M)
    if np.array_equal(M, rounded):
        work = rounded.astype(np.int64)
        to_signature = lambda S: S.astype(np.int64)
    else:
        work = M
        to_signature = lambda S: np.rint(S / REFINE_GRID).astype(np.int64)

    labels = initial.block_of.copy()
    n_blocks = len(initial.blocks)
    while True:
        part = Partition.from_block_ids(labels)
        S = to_signature(_block_row_sums(work, part))
        keyed = {}
        new_labels = np.empty(n, dtype=np.int64)
        for v in range(n):
            key = (labels[v], tuple(S[v].tolist()))
            new_labels[v] = keyed.setdefault(key, len(keyed))
        new_count = len(keyed)
        labels = new_labels
        if new_count == n_blocks:
            break
        n_blocks = new_count
    # Deterministic block order: by minimal state index.
    part = Partition.from_block_ids(labels)
    ordered = sorted(part.blocks, key=lambda b: int(b[0]))
    return Partition.from_blocks(ordered, n)


def transition_from_periodized(per) -> TransitionMatrix:
    """Convolution walk on the coset space of a periodized distribution.

    Entry (i, j) is the periodized value at the coset containing
    rep_i - rep_j; multiplying by |H| gives the quotient of the full walk.
    """
    cosets = per.cosets
    group = cosets.group
    reps = np.array(cosets.representatives, dtype=np.int64)
    diff = group.add_flat(reps[:, None], group.neg_flat(reps[None, :]))
    return TransitionMatrix(per.values[cosets.block_of[diff]])


def random_regular_edges(rng: np.random.Generator, n: int, d: int, max_tries: int = 500):
    """A uniform-ish random simple d-regular graph via the pairing model."""
    if n * d % 2 != 0:
        raise ValueError("n * d must be even")
    if not 0 < d < n:
        raise ValueError(f"degree {d} impossible on {n} vertices")
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        perm = rng.permutation(stubs)
        pairs = perm.reshape(-1, 2)
        if (pairs[:, 0] == pairs[:, 1]).any():
            continue
        norm = {(min(u, v), max(u, v)) for u, v in pairs.tolist()}
        if len(norm) != pairs.shape[0]:
            continue
        return sorted(norm)
    raise RuntimeError(f"failed to sample a simple {d}-regular graph on {n} vertices")
