"""Finite abelian groups as explicit products of cyclic groups.

A group Z_{m_1} x ... x Z_{m_k} is stored as its tuple of moduli.  Elements
are addressed either by coordinate tuples or by a flat index in [0, |G|)
using the row-major mixed-radix encoding (first coordinate most
significant), so functions on the group live in dense numpy vectors.

Characters are indexed the same way: chi_a(g) = exp(2*pi*i * sum_j a_j g_j / m_j).
Character phases are computed in exact integer arithmetic modulo
L = lcm(m_1, ..., m_k) before the single complex exponential, which keeps
orthogonality and annihilator computations exact.
"""

from __future__ import annotations

import cmath
import json
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

DEFAULT_ORDER_CAP = 65536
LARGE_ORDER_CAP = 1 << 20

_CHUNK_CELLS = 1 << 21  # soft cap on temporary (rows x |G|) work arrays


@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group Z_{m_1} x ... x Z_{m_k}, all moduli >= 2."""

    moduli: tuple[int, ...]
    max_order: int = field(default=DEFAULT_ORDER_CAP, compare=False, repr=False)

    def __post_init__(self) -> None:
        moduli = tuple(int(m) for m in self.moduli)
        object.__setattr__(self, "moduli", moduli)
        if not moduli:
            raise ValueError("a group needs at least one cyclic factor")
        if any(m < 2 for m in moduli):
            raise ValueError(f"all moduli must be >= 2, got {moduli}")
        if self.max_order > LARGE_ORDER_CAP:
            raise ValueError(f"max_order cannot exceed {LARGE_ORDER_CAP}")
        if self.order > self.max_order:
            raise ValueError(
                f"group order {self.order} exceeds cap {self.max_order} "
                "(pass a larger max_order for convolution-only work)"
            )

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @cached_property
    def _radix(self) -> np.ndarray:
        """Place values of the mixed-radix encoding, most significant first."""
        rad = np.ones(self.rank, dtype=np.int64)
        for j in range(self.rank - 2, -1, -1):
            rad[j] = rad[j + 1] * self.moduli[j + 1]
        rad.flags.writeable = False
        return rad

    @cached_property
    def coords_table(self) -> np.ndarray:
        """(order, rank) int64 table of coordinates for every flat index."""
        table = np.stack(
            np.unravel_index(np.arange(self.order), self.moduli), axis=1
        ).astype(np.int64)
        table.flags.writeable = False
        return table

    @cached_property
    def _moduli_arr(self) -> np.ndarray:
        arr = np.array(self.moduli, dtype=np.int64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def char_lcm(self) -> int:
        """lcm of the moduli; all character phases live in Z / char_lcm."""
        return math.lcm(*self.moduli)

    @cached_property
    def _phase_weights(self) -> np.ndarray:
        """w_j = char_lcm / m_j, so phase(a, g) = sum a_j g_j w_j mod lcm."""
        w = np.array([self.char_lcm // m for m in self.moduli], dtype=np.int64)
        w.flags.writeable = False
        return w

    def flat_index(self, coords: Sequence[int]) -> int:
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(coords)}")
        idx = 0
        for c, m in zip(coords, self.moduli):
            c = int(c)
            if not 0 <= c < m:
                raise ValueError(f"coordinate {c} out of range [0, {m})")
            idx = idx * m + c
        return idx

    def coords_of(self, flat: int) -> tuple[int, ...]:
        flat = int(flat)
        if not 0 <= flat < self.order:
            raise ValueError(f"flat index {flat} out of range [0, {self.order})")
        coords = []
        for m in reversed(self.moduli):
            flat, c = divmod(flat, m)
            coords.append(c)
        return tuple(reversed(coords))

    def add_flat(self, a, b) -> np.ndarray | np.int64:
        """Group addition on flat indices; broadcasts over numpy arrays."""
        ca = self.coords_table[np.asarray(a)]
        cb = self.coords_table[np.asarray(b)]
        return ((ca + cb) % self._moduli_arr) @ self._radix

    def neg_flat(self, a) -> np.ndarray | np.int64:
        ca = self.coords_table[np.asarray(a)]
        return ((-ca) % self._moduli_arr) @ self._radix

    def __str__(self) -> str:
        return "x".join(f"Z{m}" for m in self.moduli)


_ATOM_RE = re.compile(r"Z(\d+)(?:\^(\d+))?$", re.IGNORECASE)


def parse_group_spec(text: str, max_order: int = DEFAULT_ORDER_CAP) -> GroupSpec:
    """Parse a group spec string like ``Z2^7`` or ``Z4xZ6xZ5``."""
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty group spec")
    moduli: list[int] = []
    for atom in re.split(r"[xX]", s):
        m = _ATOM_RE.fullmatch(atom)
        if not m:
            raise ValueError(f"unrecognized group spec atom {atom!r} in {text!r}")
        modulus = int(m.group(1))
        repeat = int(m.group(2)) if m.group(2) else 1
        if modulus < 2:
            raise ValueError(f"modulus must be >= 2 in {text!r}")
        if repeat < 1:
            raise ValueError(f"repetition must be >= 1 in {text!r}")
        moduli.extend([modulus] * repeat)
    return GroupSpec(tuple(moduli), max_order=max_order)


@dataclass(frozen=True)
class Element:
    """A group element, stored by coordinates."""

    group: GroupSpec
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(int(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.group.rank:
            raise ValueError(
                f"element has {len(coords)} coordinates, group rank is {self.group.rank}"
            )
        for c, m in zip(coords, self.group.moduli):
            if not 0 <= c < m:
                raise ValueError(f"coordinate {c} out of range [0, {m})")

    @property
    def flat_index(self) -> int:
        return self.group.flat_index(self.coords)


@dataclass(frozen=True)
class CharacterIndex:
    """Label of a character; same coordinate shape as an Element."""

    group: GroupSpec
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(int(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.group.rank:
            raise ValueError(
                f"character has {len(coords)} coordinates, group rank is {self.group.rank}"
            )
        for c, m in zip(coords, self.group.moduli):
            if not 0 <= c < m:
                raise ValueError(f"coordinate {c} out of range [0, {m})")

    @property
    def flat_index(self) -> int:
        return self.group.flat_index(self.coords)


def _same_group(a: GroupSpec, b: GroupSpec) -> None:
    if a.moduli != b.moduli:
        raise ValueError(f"group mismatch: {a} vs {b}")


def elem_add(g: Element, h: Element) -> Element:
    _same_group(g.group, h.group)
    coords = tuple((x + y) % m for x, y, m in zip(g.coords, h.coords, g.group.moduli))
    return Element(g.group, coords)


def elem_neg(g: Element) -> Element:
    coords = tuple((-x) % m for x, m in zip(g.coords, g.group.moduli))
    return Element(g.group, coords)


def elem_sub(g: Element, h: Element) -> Element:
    return elem_add(g, elem_neg(h))


def char_eval(a: CharacterIndex, g: Element) -> complex:
    """chi_a(g) = exp(2*pi*i * sum_j a_j g_j / m_j), exact rational phase."""
    if a.group.moduli != g.group.moduli:
        raise ValueError("character and element shapes do not match")
    L = a.group.char_lcm
    phase = 0
    for aj, gj, m in zip(a.coords, g.coords, a.group.moduli):
        phase = (phase + aj * gj * (L // m)) % L
    return cmath.exp(2j * cmath.pi * phase / L)


def character_values(group: GroupSpec, a_coords: Sequence[int]) -> np.ndarray:
    """Dense vector of chi_a over all group elements, indexed by flat index."""
    a = np.asarray(a_coords, dtype=np.int64)
    L = group.char_lcm
    phases = (group.coords_table @ (a * group._phase_weights)) % L
    return np.exp(2j * np.pi * phases / L)


def _char_block(group: GroupSpec, a_coords: np.ndarray, g_flats: np.ndarray) -> np.ndarray:
    """chi_a(g) for a block of characters (rows) against element flats (columns)."""
    L = group.char_lcm
    aw = (a_coords * group._phase_weights) % L
    phases = (aw @ group.coords_table[g_flats].T) % L
    return np.exp(2j * np.pi * phases / L)


@dataclass(frozen=True)
class GroupFunction:
    """A dense real-valued function on a group, indexed by flat index."""

    group: GroupSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.float64)
        if vals.shape != (self.group.order,):
            raise ValueError(
                f"values must have length {self.group.order}, got shape {vals.shape}"
            )
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class Distribution(GroupFunction):
    """A probability distribution on a group: nonnegative, total mass 1.

    Negative entries above -1e-12 (floating-point fuzz from FFT-based
    convolution) are clamped to zero.
    """

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.float64)
        if vals.shape != (self.group.order,):
            raise ValueError(
                f"values must have length {self.group.order}, got shape {vals.shape}"
            )
        if vals.min(initial=0.0) < -1e-12:
            raise ValueError(f"negative probability {vals.min()}")
        np.clip(vals, 0.0, None, out=vals)
        total = vals.sum()
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class FourierTable:
    """Fourier coefficients, one complex value per character flat index."""

    group: GroupSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.complex128)
        if vals.shape != (self.group.order,):
            raise ValueError(
                f"values must have length {self.group.order}, got shape {vals.shape}"
            )
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


def fourier(f: GroupFunction, method: str = "auto") -> FourierTable:
    """Fourier transform fhat(chi) = (1/|G|) * sum_g f(g) * conj(chi(g)).

    method:
        "naive" -- definitional double sum (the reference path).
        "fft"   -- tensor of per-factor DFTs via numpy fftn.
        "auto"  -- naive for small groups, fft otherwise; the two paths
                   agree to well below 1e-10.
    """
    group = f.group
    n = group.order
    if method == "auto":
        method = "naive" if n <= 512 else "fft"
    if method == "fft":
        spec = np.fft.fftn(f.values.reshape(group.moduli)).ravel() / n
        return FourierTable(group, spec)
    if method != "naive":
        raise ValueError(f"unknown fourier method {method!r}")
    out = np.empty(n, dtype=np.complex128)
    all_flats = np.arange(n)
    chunk = max(1, _CHUNK_CELLS // n)
    for start in range(0, n, chunk):
        a_coords = group.coords_table[start : start + chunk]
        block = _char_block(group, a_coords, all_flats)
        out[start : start + chunk] = np.conj(block) @ f.values / n
    return FourierTable(group, out)


def inverse_fourier(table: FourierTable) -> GroupFunction:
    """Reconstruct f(g) = sum_chi fhat(chi) * chi(g)."""
    group = table.group
    vals = np.fft.ifftn((table.values * group.order).reshape(group.moduli)).ravel()
    return GroupFunction(group, vals.real)


def convolve(f: GroupFunction, h: GroupFunction) -> GroupFunction:
    """(f * h)(g) = sum_x f(g - x) h(x), via the factorwise DFT.

    When both inputs are distributions the result is a Distribution.
    """
    _same_group(f.group, h.group)
    group = f.group
    shape = group.moduli
    spec = np.fft.fftn(f.values.reshape(shape)) * np.fft.fftn(h.values.reshape(shape))
    out = np.fft.ifftn(spec).real.ravel()
    if isinstance(f, Distribution) and isinstance(h, Distribution):
        return Distribution(group, out)
    return GroupFunction(group, out)


def convolve_power(f: GroupFunction, ell: int) -> GroupFunction:
    """ell-fold convolution f * f * ... * f (ell >= 1)."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    group = f.group
    spec = np.fft.fftn(f.values.reshape(group.moduli)) ** ell
    out = np.fft.ifftn(spec).real.ravel()
    if isinstance(f, Distribution):
        return Distribution(group, out)
    return GroupFunction(group, out)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup, stored as the sorted flat indices of its members."""

    group: GroupSpec
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        members = tuple(sorted(int(m) for m in self.members))
        object.__setattr__(self, "members", members)
        if not members or members[0] != 0:
            raise ValueError("a subgroup must contain 0")
        if len(set(members)) != len(members):
            raise ValueError("duplicate members")
        if members[-1] >= self.group.order:
            raise ValueError("member index out of range")
        if self.group.order % len(members) != 0:
            raise ValueError(
                f"subgroup size {len(members)} does not divide group order {self.group.order}"
            )
        # Full closure is O(|H|^2); verify eagerly only at desk scale.
        if len(members) <= 2048:
            self.verify_closure()

    @cached_property
    def member_array(self) -> np.ndarray:
        arr = np.array(self.members, dtype=np.int64)
        arr.flags.writeable = False
        return arr

    def __len__(self) -> int:
        return len(self.members)

    def verify_closure(self) -> None:
        """Exhaustively check closure under addition and negation."""
        arr = np.array(self.members, dtype=np.int64)
        if not np.isin(self.group.neg_flat(arr), arr).all():
            raise ValueError("member set is not closed under negation")
        chunk = max(1, _CHUNK_CELLS // max(1, len(arr)))
        for start in range(0, len(arr), chunk):
            sums = self.group.add_flat(arr[start : start + chunk, None], arr[None, :])
            if not np.isin(sums, arr).all():
                raise ValueError("member set is not closed under addition")


def subgroup_generate(group: GroupSpec, gens: Iterable) -> Subgroup:
    """Closure of {0} and the generators under the group law.

    Generators may be Elements, coordinate sequences, or flat indices.
    """
    gen_flats = sorted({_as_flat(group, g) for g in gens})
    seen = np.zeros(group.order, dtype=bool)
    seen[0] = True
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        new: list[np.ndarray] = []
        for g in gen_flats:
            shifted = group.add_flat(frontier, np.int64(g))
            fresh = shifted[~seen[shifted]]
            if fresh.size:
                seen[fresh] = True
                new.append(fresh)
        frontier = np.unique(np.concatenate(new)) if new else np.array([], dtype=np.int64)
    return Subgroup(group, tuple(np.flatnonzero(seen).tolist()))


def _as_flat(group: GroupSpec, g) -> int:
    if isinstance(g, Element):
        _same_group(group, g.group)
        return g.flat_index
    if isinstance(g, (int, np.integer)):
        flat = int(g)
        if not 0 <= flat < group.order:
            raise ValueError(f"flat index {flat} out of range")
        return flat
    return group.flat_index(tuple(g))


def trivial_subgroup(group: GroupSpec) -> Subgroup:
    return Subgroup(group, (0,))


def full_subgroup(group: GroupSpec) -> Subgroup:
    return Subgroup(group, tuple(range(group.order)))


@dataclass(frozen=True)
class CosetPartition:
    """The partition of a group into cosets of a subgroup.

    Blocks are ordered by their minimal flat index, so block 0 is the
    subgroup itself and each block's representative is its minimum.
    """

    subgroup: Subgroup
    blocks: tuple[np.ndarray, ...]
    representatives: tuple[int, ...]
    block_of: np.ndarray

    @property
    def group(self) -> GroupSpec:
        return self.subgroup.group

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)


def coset_partition(subgroup: Subgroup) -> CosetPartition:
    group = subgroup.group
    order = group.order
    members = subgroup.member_array
    block_of = np.full(order, -1, dtype=np.int64)
    blocks: list[np.ndarray] = []
    reps: list[int] = []
    for i in range(order):
        if block_of[i] >= 0:
            continue
        block = np.sort(group.add_flat(members, np.int64(i)))
        block_of[block] = len(blocks)
        block.flags.writeable = False
        blocks.append(block)
        reps.append(i)
    block_of.flags.writeable = False
    return CosetPartition(subgroup, tuple(blocks), tuple(reps), block_of)


def annihilator_indices(subgroup: Subgroup) -> np.ndarray:
    """Flat character indices of the annihilator H^perp = {chi : chi|_H = 1}.

    Exact integer phase test; |H^perp| * |H| = |G| always holds.
    """
    group = subgroup.group
    L = group.char_lcm
    h_coords = group.coords_table[subgroup.member_array]
    hw = (h_coords * group._phase_weights) % L
    out: list[np.ndarray] = []
    n = group.order
    chunk = max(1, _CHUNK_CELLS // max(1, len(subgroup)))
    for start in range(0, n, chunk):
        a_coords = group.coords_table[start : start + chunk]
        phases = (a_coords @ hw.T) % L
        hits = np.flatnonzero((phases == 0).all(axis=1)) + start
        out.append(hits)
    flats = np.concatenate(out)
    if flats.size * len(subgroup) != group.order:
        raise RuntimeError("annihilator size check failed; subgroup is not closed")
    return flats


def annihilator(subgroup: Subgroup) -> tuple[CharacterIndex, ...]:
    group = subgroup.group
    return tuple(
        CharacterIndex(group, group.coords_of(flat))
        for flat in annihilator_indices(subgroup)
    )


@dataclass(frozen=True)
class PeriodizedFunction:
    """Coset averages of a group function: one value per coset of H."""

    cosets: CosetPartition
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.float64)
        if vals.shape != (self.cosets.n_blocks,):
            raise ValueError("one value per coset expected")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


def periodize(f: GroupFunction, subgroup: Subgroup) -> PeriodizedFunction:
    """Average f over each coset of the subgroup: (1/|H|) sum_h f(g + h)."""
    _same_group(f.group, subgroup.group)
    cosets = coset_partition(subgroup)
    vals = np.array([f.values[block].mean() for block in cosets.blocks])
    return PeriodizedFunction(cosets, vals)


def poisson_check(f: GroupFunction, subgroup: Subgroup) -> float:
    """Numeric check of Poisson summation for (f, H).

    The Fourier transform of the periodization over the coset space and
    the restriction of fhat to H^perp are computed independently; the
    return value is the maximum absolute deviation over H^perp.
    """
    _same_group(f.group, subgroup.group)
    group = f.group
    per = periodize(f, subgroup)
    reps = np.array(per.cosets.representatives, dtype=np.int64)
    r = len(reps)
    ann = annihilator_indices(subgroup)
    a_coords = group.coords_table[ann]

    # Transform of the periodization: sum over coset representatives with
    # weight 1/[G:H]; well-defined since chi in H^perp is constant on cosets.
    rep_chars = _char_block(group, a_coords, reps)
    quotient_side = np.conj(rep_chars) @ per.values / r

    # Restriction of fhat, summed over all of G, in chunks.
    full_side = np.empty(len(ann), dtype=np.complex128)
    all_flats = np.arange(group.order)
    chunk = max(1, _CHUNK_CELLS // group.order)
    for start in range(0, len(ann), chunk):
        block = _char_block(group, a_coords[start : start + chunk], all_flats)
        full_side[start : start + chunk] = np.conj(block) @ f.values / group.order
    return float(np.abs(quotient_side - full_side).max())


def uniform_distribution(group: GroupSpec) -> Distribution:
    return Distribution(group, np.full(group.order, 1.0 / group.order))


def delta_distribution(group: GroupSpec, at) -> Distribution:
    vals = np.zeros(group.order)
    vals[_as_flat(group, at)] = 1.0
    return Distribution(group, vals)


def uniform_on_set(group: GroupSpec, flats) -> Distribution:
    """Uniform distribution on a subset of the group, given by flat indices."""
    idx = np.asarray(flats, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("cannot build a uniform distribution on the empty set")
    vals = np.zeros(group.order)
    vals[idx] = 1.0 / idx.size
    return Distribution(group, vals)


def bernoulli_distribution(group: GroupSpec, p: float) -> Distribution:
    """Independent Bernoulli(p) noise per bit; requires all moduli equal 2."""
    if any(m != 2 for m in group.moduli):
        raise ValueError("bernoulli noise needs a group with all moduli equal to 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    n = group.rank
    wt = group.coords_table.sum(axis=1)
    vals = p**wt * (1.0 - p) ** (n - wt)
    return Distribution(group, vals)


def fixed_weight_distribution(group: GroupSpec, t: int) -> Distribution:
    """Uniform distribution over Hamming-weight-t vectors of Z_2^n."""
    if any(m != 2 for m in group.moduli):
        raise ValueError("fixed-weight noise needs a group with all moduli equal to 2")
    if not 0 <= t <= group.rank:
        raise ValueError(f"weight t={t} out of range [0, {group.rank}]")
    wt = group.coords_table.sum(axis=1)
    return uniform_on_set(group, np.flatnonzero(wt == t))


def distribution_from_json(text: str, max_order: int = DEFAULT_ORDER_CAP) -> Distribution:
    """Load ``{"moduli": [...], "probs": [...]}``; probs indexed by flat index.

    The probabilities must sum to 1 within 1e-9 and are renormalized.
    """
    data = json.loads(text)
    try:
        moduli = tuple(int(m) for m in data["moduli"])
        probs = np.array([float(p) for p in data["probs"]], dtype=np.float64)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed distribution JSON: {exc}") from exc
    group = GroupSpec(moduli, max_order=max_order)
    if probs.shape != (group.order,):
        raise ValueError(
            f"expected {group.order} probabilities for moduli {moduli}, got {probs.size}"
        )
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total}, expected 1 within 1e-9")
    return Distribution(group, probs / total)


def distribution_to_json(dist: Distribution) -> str:
    return json.dumps(
        {"moduli": list(dist.group.moduli), "probs": dist.values.tolist()}
    )
