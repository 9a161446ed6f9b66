"""Total-variation upper bounds from quotient spectra, and their audit.

Three evaluators:

* ``bound_general``: (1/2) sqrt(|V|/|V_i| * sum |lambda|^(2 ell)) over the
  quotient spectrum with one unit eigenvalue removed.  Needs nothing beyond
  a normal, stochastic walk and an equitable partition.
* ``bound_flat``: the sharper (1/2) sqrt(sum |lambda|^(2 ell)), valid when
  the flatness condition |<u_{V_i}, phi>|^2 = 1/|V| holds for the lifted
  quotient eigenbasis.  Coset partitions of convolution walks always
  satisfy it.
* ``bound_group`` / ``bound_code``: the closed group/code forms driven by
  the annihilator (dual code) characters.

``soundness_audit`` replays an instance with exact brute-force TV and
raises if any bound is ever undercut; it is the primary correctness alarm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .abelian import (
    Distribution,
    GroupSpec,
    Subgroup,
    annihilator_indices,
    coset_partition,
    fourier,
    subgroup_generate,
    uniform_on_set,
    _as_flat,
)
from .codes import LinearCode, code_to_subgroup, dual, enumerate_codewords
from .spectra import (
    SpectrumReport,
    UNIT_EIGENVALUE_TOL,
    coset_character_basis,
    quotient_spectrum_group,
    symmetric_quotient_eigensystem,
)
from .walk import (
    Partition,
    TransitionMatrix,
    exact_tv_curve,
    coarsest_equitable_refinement,
    partition_from_cosets,
    random_regular_edges,
    transition_from_distribution,
    transition_from_graph,
)

SOUNDNESS_SLACK = 1e-9
FLATNESS_TOL = 1e-9
EXACT_DEFAULT_CAP = 8192


class SoundnessError(RuntimeError):
    """Raised when an exact TV value exceeds a bound that must dominate it."""


def strip_unit_eigenvalue(report: SpectrumReport) -> SpectrumReport:
    """Remove exactly one eigenvalue, the one closest to 1 + 0i.

    All other eigenvalues stay, including further unit-modulus ones; those
    surface as a peripheral warning downstream rather than being dropped.
    """
    eig = report.eigenvalues
    if eig.size == 0:
        raise ValueError("cannot strip from an empty spectrum")
    dist = np.abs(eig - 1.0)
    idx = int(np.argmin(dist))
    if dist[idx] > UNIT_EIGENVALUE_TOL:
        raise ValueError(
            f"no eigenvalue within {UNIT_EIGENVALUE_TOL} of 1; not a stochastic spectrum"
        )
    keep = np.ones(eig.size, dtype=bool)
    keep[idx] = False
    labels = None
    if report.labels is not None:
        labels = tuple(lab for j, lab in enumerate(report.labels) if keep[j])
    return SpectrumReport(eig[keep], labels, report.provenance, stripped=True)


def _tail_sum(stripped: SpectrumReport, ell: int) -> float:
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if stripped.eigenvalues.size == 0:
        return 0.0
    return float((np.abs(stripped.eigenvalues) ** (2 * ell)).sum())


def bound_general(
    stripped: SpectrumReport, n_states: int, block_size: int, ell: int
) -> float:
    """(1/2) sqrt(|V| / |V_i| * sum over the stripped spectrum of |lambda|^(2 ell))."""
    if not 1 <= block_size <= n_states:
        raise ValueError("block size must lie in [1, n_states]")
    return 0.5 * float(np.sqrt(n_states / block_size * _tail_sum(stripped, ell)))


def bound_flat(stripped: SpectrumReport, ell: int) -> float:
    """(1/2) sqrt(sum over the stripped spectrum of |lambda|^(2 ell)).

    Caller must have established the flatness condition.
    """
    return 0.5 * float(np.sqrt(_tail_sum(stripped, ell)))


def check_flatness(
    partition: Partition,
    block_index: int,
    basis: np.ndarray,
    tol: float = FLATNESS_TOL,
) -> bool:
    """Check |<u_{V_i}, M_P phi_j>|^2 = 1/|V| for every quotient basis column.

    ``basis`` columns must be normalized so their lifts have unit 2-norm
    (validated here).  The inner products are evaluated against the actual
    lifted vectors restricted to the block's states.
    """
    B = np.asarray(basis, dtype=np.complex128)
    r = partition.n_blocks
    if B.shape != (r, r):
        raise ValueError(f"basis must be {r}x{r}, got {B.shape}")
    if not 0 <= block_index < r:
        raise ValueError(f"block index {block_index} out of range")
    sizes = partition.block_sizes.astype(np.float64)
    lifted_norms = sizes @ (np.abs(B) ** 2)
    if np.abs(lifted_norms - 1.0).max() > 1e-6:
        raise ValueError("basis columns are not normalized to unit lifted 2-norm")
    block = partition.blocks[block_index]
    lifted_on_block = B[partition.block_of[block], :]
    inner = np.conj(lifted_on_block).sum(axis=0) / block.size
    target = 1.0 / partition.n_states
    return bool(np.abs(np.abs(inner) ** 2 - target).max() <= tol)


def bound_group(
    group: GroupSpec, subgroup: Subgroup, coset_rep, f: Distribution, ell: int
) -> float:
    """Smoothing bound for a coset-started convolution walk.

    Evaluates (1/2) sqrt(sum over nontrivial annihilator characters of
    |lambda_chi|^(2 ell)) with lambda_chi = |G| fhat(chi).  The value does
    not depend on which coset representative is passed.
    """
    if coset_rep is not None:
        _as_flat(group, coset_rep)  # validate only; every coset gets the same bound
    if ell < 1:
        raise ValueError("ell must be >= 1")
    ann = annihilator_indices(subgroup)
    ann = ann[ann != 0]
    if ann.size == 0:
        return 0.0
    lam = group.order * fourier(f).values[ann]
    return 0.5 * float(np.sqrt((np.abs(lam) ** (2 * ell)).sum()))


def bound_code(
    code: LinearCode, f: Distribution, ell: int, normalization: str = "canonical"
) -> float:
    """Code smoothing bound over F_2, driven by the dual code.

    ``canonical`` evaluates the eigenvalue form via the group embedding.
    ``literal`` evaluates 2^(n-1) sqrt(sum over nonzero dual codewords of
    |fhat(x)|^(2 ell)) with the 1/|G|-normalized transform; the two agree
    at ell = 1 and differ by 2^(n (ell-1)) beyond it.
    """
    if code.q != 2:
        raise ValueError("code bounds are implemented for q = 2 only")
    if normalization == "canonical":
        return bound_group(f.group, code_to_subgroup(code), 0, f, ell)
    if normalization != "literal":
        raise ValueError(f"unknown normalization {normalization!r}")
    if ell < 1:
        raise ValueError("ell must be >= 1")
    n = code.n
    if f.group.moduli != (2,) * n:
        raise ValueError("noise must live on Z_2^n for an [n, k]_2 code")
    words = enumerate_codewords(dual(code))
    radix = np.array([2 ** (n - 1 - j) for j in range(n)], dtype=np.int64)
    flats = words @ radix
    flats = flats[flats != 0]
    if flats.size == 0:
        return 0.0
    fh = fourier(f).values[flats]
    return 2.0 ** (n - 1) * float(np.sqrt((np.abs(fh) ** (2 * ell)).sum()))


def smoothing_ell(
    evaluate: Callable[[int], float], eps: float, ell_max: int
) -> int | None:
    """Smallest ell in [1, ell_max] with evaluate(ell) <= eps, else None."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if ell_max < 1:
        raise ValueError("ell_max must be >= 1")
    for ell in range(1, ell_max + 1):
        if evaluate(ell) <= eps:
            return ell
    return None


@dataclass
class BoundRow:
    ell: int
    exact_tv: float | None
    bound_general: float
    bound_flat: float | None
    bound_literal: float | None
    flatness: bool
    peripheral_warning: bool

    @property
    def vacuous(self) -> bool:
        tightest = self.bound_flat if self.bound_flat is not None else self.bound_general
        return tightest > 1.0


CSV_COLUMNS = (
    "ell",
    "exact_tv",
    "bound_general",
    "bound_flat",
    "bound_literal",
    "flatness",
    "peripheral_warning",
)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


@dataclass
class BoundReport:
    """Per-step bound/exact records plus instance metadata."""

    rows: list[BoundRow]
    n_states: int
    block_size: int
    provenance: str

    def to_csv(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for row in self.rows:
            lines.append(
                ",".join(
                    _fmt(getattr(row, col)) for col in CSV_COLUMNS
                )
            )
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "n_states": self.n_states,
            "block_size": self.block_size,
            "provenance": self.provenance,
            "rows": [
                {
                    "ell": row.ell,
                    "exact_tv": row.exact_tv,
                    "bound_general": row.bound_general,
                    "bound_flat": row.bound_flat,
                    "bound_literal": row.bound_literal,
                    "flatness": row.flatness,
                    "peripheral_warning": row.peripheral_warning,
                    "vacuous": row.vacuous,
                }
                for row in self.rows
            ],
        }

    def violations(self, slack: float = SOUNDNESS_SLACK) -> list[str]:
        """Rows where the exact TV exceeds an applicable bound.

        The literal-normalization column is reporting-only (its constant is
        not comparable across step counts) and never participates here.
        """
        out = []
        for row in self.rows:
            if row.exact_tv is None:
                continue
            for name in ("bound_general", "bound_flat"):
                bound = getattr(row, name)
                if bound is not None and row.exact_tv > bound + slack:
                    out.append(
                        f"ell={row.ell}: exact_tv={row.exact_tv!r} exceeds "
                        f"{name}={bound!r}"
                    )
        return out

    def first_ell_at_most(self, eps: float, column: str) -> int | None:
        """Smallest recorded ell whose ``column`` value is <= eps."""
        for row in self.rows:
            value = getattr(row, column)
            if value is not None and value <= eps:
                return row.ell
        return None


def _want_exact(with_exact: bool | None, n_states: int) -> bool:
    if with_exact is None:
        return n_states <= EXACT_DEFAULT_CAP
    return with_exact


def analyze_group_walk(
    group: GroupSpec,
    subgroup: Subgroup,
    f: Distribution,
    ell_max: int,
    coset_rep=0,
    with_exact: bool | None = None,
) -> BoundReport:
    """Bound/exact table for the convolution walk started on a coset of H."""
    if ell_max < 1:
        raise ValueError("ell_max must be >= 1")
    coset_flat = _as_flat(group, coset_rep if coset_rep is not None else 0)
    cosets = coset_partition(subgroup)
    partition = partition_from_cosets(cosets)
    block_index = int(cosets.block_of[coset_flat])

    spectrum = quotient_spectrum_group(group, subgroup, f)
    stripped = strip_unit_eigenvalue(spectrum)
    peripheral = stripped.peripheral_count > 0

    _, basis = coset_character_basis(group, cosets)
    flat_ok = check_flatness(partition, block_index, basis)

    exact = None
    if _want_exact(with_exact, group.order):
        T = transition_from_distribution(group, f)
        mu0 = uniform_on_set(group, cosets.blocks[block_index])
        exact = exact_tv_curve(T, mu0, ell_max)

    rows = []
    for ell in range(1, ell_max + 1):
        rows.append(
            BoundRow(
                ell=ell,
                exact_tv=None if exact is None else float(exact[ell - 1]),
                bound_general=bound_general(stripped, group.order, len(subgroup), ell),
                bound_flat=bound_flat(stripped, ell) if flat_ok else None,
                bound_literal=None,
                flatness=flat_ok,
                peripheral_warning=peripheral,
            )
        )
    return BoundReport(rows, group.order, len(subgroup), stripped.provenance)


def analyze_code(
    code: LinearCode,
    f: Distribution,
    ell_max: int,
    normalization: str = "canonical",
    with_exact: bool | None = None,
) -> BoundReport:
    """Bound/exact table for code smoothing; optionally adds the literal column."""
    if normalization not in ("canonical", "literal", "both"):
        raise ValueError(f"unknown normalization {normalization!r}")
    subgroup = code_to_subgroup(code)
    report = analyze_group_walk(
        GroupSpec((code.q,) * code.n),
        subgroup,
        f,
        ell_max,
        coset_rep=0,
        with_exact=with_exact,
    )
    if normalization in ("literal", "both"):
        for row in report.rows:
            row.bound_literal = bound_code(code, f, row.ell, normalization="literal")
    return report


def analyze_graph_walk(
    T: TransitionMatrix,
    ell_max: int,
    partition: Partition | None = None,
    start: int = 0,
    with_exact: bool | None = None,
    equitable_tol: float = 1e-9,
) -> BoundReport:
    """Bound/exact table for a symmetric graph walk.

    Without an explicit partition, refines {{start}, rest} to the coarsest
    equitable partition; the initial distribution is uniform on the block
    containing ``start``.
    """
    if ell_max < 1:
        raise ValueError("ell_max must be >= 1")
    if not 0 <= start < T.size:
        raise ValueError(f"start vertex {start} out of range")
    if partition is None:
        if T.size == 1:
            initial = Partition.trivial(1)
        else:
            rest = [v for v in range(T.size) if v != start]
            initial = Partition.from_blocks([[start], rest], T.size)
        partition = coarsest_equitable_refinement(T, initial)
    block_index = int(partition.block_of[start])

    eigenvalues, basis, _ = symmetric_quotient_eigensystem(T, partition, tol=equitable_tol)
    report = SpectrumReport(eigenvalues.astype(np.complex128), None, "numeric")
    stripped = strip_unit_eigenvalue(report.require_stochastic())
    peripheral = stripped.peripheral_count > 0
    flat_ok = check_flatness(partition, block_index, basis)

    block = partition.blocks[block_index]
    exact = None
    if _want_exact(with_exact, T.size):
        mu0 = np.zeros(T.size)
        mu0[block] = 1.0 / block.size
        exact = exact_tv_curve(T, mu0, ell_max)

    rows = []
    for ell in range(1, ell_max + 1):
        rows.append(
            BoundRow(
                ell=ell,
                exact_tv=None if exact is None else float(exact[ell - 1]),
                bound_general=bound_general(stripped, T.size, int(block.size), ell),
                bound_flat=bound_flat(stripped, ell) if flat_ok else None,
                bound_literal=None,
                flatness=flat_ok,
                peripheral_warning=peripheral,
            )
        )
    return BoundReport(rows, T.size, int(block.size), "numeric")


@dataclass(frozen=True)
class GroupInstance:
    """A convolution-walk audit instance: group, subgroup, noise, start coset."""

    group: GroupSpec
    subgroup: Subgroup
    noise: Distribution
    coset_rep: int = 0

    def describe(self) -> str:
        return (
            f"group={self.group} |H|={len(self.subgroup)} "
            f"coset_rep={self.coset_rep} noise_support={int((self.noise.values > 0).sum())}"
        )


@dataclass(frozen=True)
class GraphInstance:
    """A regular-graph audit instance: edge list, vertex count, start vertex."""

    edges: tuple[tuple[int, int], ...]
    n_vertices: int
    start: int = 0

    def describe(self) -> str:
        return (
            f"graph n={self.n_vertices} m={len(self.edges)} start={self.start}"
        )


def instance_report(instance, ell_max: int = 16) -> BoundReport:
    """Compute the exact-vs-bound table for one audit instance."""
    if isinstance(instance, GroupInstance):
        return analyze_group_walk(
            instance.group,
            instance.subgroup,
            instance.noise,
            ell_max,
            coset_rep=instance.coset_rep,
            with_exact=True,
        )
    if isinstance(instance, GraphInstance):
        T = transition_from_graph(instance.edges, instance.n_vertices)
        return analyze_graph_walk(T, ell_max, start=instance.start, with_exact=True)
    raise TypeError(f"unknown instance type {type(instance).__name__}")


def soundness_audit(instance, ell_max: int = 16) -> BoundReport:
    """Exact-vs-bound replay of one instance; raises SoundnessError on a breach."""
    report = instance_report(instance, ell_max)
    problems = report.violations()
    if problems:
        raise SoundnessError(
            f"bound violated on {instance.describe()}: " + "; ".join(problems)
        )
    return report


def random_group_instance(
    rng: np.random.Generator, max_order: int = 512
) -> GroupInstance:
    """Random moduli product, random generated subgroup, random rational noise."""
    moduli: list[int] = []
    order = 1
    for _ in range(int(rng.integers(1, 4))):
        choices = [m for m in range(2, 10) if order * m <= max_order]
        if not choices:
            break
        m = int(rng.choice(choices))
        moduli.append(m)
        order *= m
    if not moduli:
        moduli = [min(7, max_order)]
        order = moduli[0]
    group = GroupSpec(tuple(moduli))
    gens = [
        tuple(int(rng.integers(0, m)) for m in group.moduli)
        for _ in range(int(rng.integers(0, 3)))
    ]
    subgroup = subgroup_generate(group, gens)
    numerators = rng.integers(0, 10, size=order).astype(np.float64)
    if numerators.sum() == 0:
        numerators[int(rng.integers(0, order))] = 1.0
    noise = Distribution(group, numerators / numerators.sum())
    return GroupInstance(group, subgroup, noise, int(rng.integers(0, order)))


def random_graph_instance(
    rng: np.random.Generator, max_vertices: int = 64
) -> GraphInstance:
    """Random small simple regular graph plus a start vertex."""
    while True:
        n = int(rng.integers(4, max_vertices + 1))
        d = int(rng.integers(2, 6))
        if d >= n:
            continue
        if n * d % 2 != 0:
            continue
        try:
            edges = random_regular_edges(rng, n, d)
        except RuntimeError:
            continue
        return GraphInstance(tuple(edges), n, int(rng.integers(0, n)))
