"""Eigenvalue machinery for walk operators.

Two routes, by design: convolution walks get their spectra analytically from
characters (eigenvalue |G| * fhat(chi) labeled by chi), and symmetric walk
matrices get a deterministic cyclic-sweep Jacobi eigensolver.  Quotients of
symmetric walks are symmetrized by the diag(sqrt(|V_i|)) similarity before
the numeric solve.  No general nonsymmetric eigensolver is provided:
nonsymmetric normal quotients only arise on the group route, where the
spectrum is analytic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import walk as walk_mod
from .abelian import (
    CosetPartition,
    Distribution,
    GroupSpec,
    Subgroup,
    annihilator_indices,
    coset_partition,
    fourier,
    _char_block,
)
from .walk import Partition, QuotientMatrix, TransitionMatrix, quotient

UNIT_EIGENVALUE_TOL = 1e-6
PERIPHERAL_TOL = 1e-12
SPECTRUM_SUBSET_TOL = 1e-7
MULTISET_TOL = 1e-8


@dataclass(frozen=True)
class SpectrumReport:
    """An eigenvalue multiset with provenance and peripheral statistics.

    labels, when present, holds one character coordinate tuple per
    eigenvalue.  ``stripped`` marks reports that already had the stochastic
    unit eigenvalue removed.
    """

    eigenvalues: np.ndarray
    labels: tuple[tuple[int, ...], ...] | None
    provenance: str
    stripped: bool = False
    unit_eigenvalue_count: int = field(init=False)
    peripheral_count: int = field(init=False)

    def __post_init__(self) -> None:
        eig = np.array(self.eigenvalues, dtype=np.complex128)
        eig.flags.writeable = False
        object.__setattr__(self, "eigenvalues", eig)
        if self.provenance not in ("analytic", "numeric"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.labels is not None and len(self.labels) != eig.size:
            raise ValueError("one label per eigenvalue expected")
        moduli = np.abs(eig)
        unit_count = int((np.abs(eig - 1.0) <= UNIT_EIGENVALUE_TOL).sum())
        peripheral = moduli >= 1.0 - PERIPHERAL_TOL
        count = int(peripheral.sum())
        if not self.stripped and eig.size:
            near = np.abs(eig - 1.0)
            idx = int(np.argmin(near))
            if near[idx] <= UNIT_EIGENVALUE_TOL and peripheral[idx]:
                count -= 1
        object.__setattr__(self, "unit_eigenvalue_count", unit_count)
        object.__setattr__(self, "peripheral_count", count)

    def require_stochastic(self) -> "SpectrumReport":
        """Validate the invariants of a spectrum of a stochastic operator."""
        moduli = np.abs(self.eigenvalues)
        if moduli.size == 0 or moduli.max() > 1.0 + 1e-9:
            raise ValueError(f"spectral radius {moduli.max(initial=0.0)} exceeds 1")
        if np.abs(self.eigenvalues - 1.0).min() > 1e-9:
            raise ValueError("no eigenvalue near 1; input is not a stochastic spectrum")
        return self

    def to_json_dict(self) -> dict:
        return {
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "labels": [list(lab) for lab in self.labels] if self.labels else None,
            "provenance": self.provenance,
            "stripped": self.stripped,
            "unit_eigenvalue_count": self.unit_eigenvalue_count,
            "peripheral_count": self.peripheral_count,
        }


def _labels_from_flats(group: GroupSpec, flats) -> tuple[tuple[int, ...], ...]:
    table = group.coords_table
    return tuple(tuple(table[f].tolist()) for f in np.asarray(flats))


def group_walk_spectrum(group: GroupSpec, f: Distribution) -> SpectrumReport:
    """Spectrum of the convolution walk: eigenvalue |G| * fhat(chi) per chi."""
    if f.group.moduli != group.moduli:
        raise ValueError("distribution is not defined on the given group")
    ft = fourier(f)
    eig = group.order * ft.values
    report = SpectrumReport(eig, _labels_from_flats(group, np.arange(group.order)), "analytic")
    return report.require_stochastic()


def quotient_spectrum_group(
    group: GroupSpec, subgroup: Subgroup, f: Distribution
) -> SpectrumReport:
    """Spectrum of the coset quotient of a convolution walk.

    Equals {|G| * fhat(chi) : chi in the annihilator of H}, by Poisson
    summation applied to the periodized walk.
    """
    if f.group.moduli != group.moduli:
        raise ValueError("distribution is not defined on the given group")
    if subgroup.group.moduli != group.moduli:
        raise ValueError("subgroup does not live in the given group")
    ft = fourier(f)
    ann = annihilator_indices(subgroup)
    eig = group.order * ft.values[ann]
    report = SpectrumReport(eig, _labels_from_flats(group, ann), "analytic")
    return report.require_stochastic()


def symmetric_eigen(
    M, off_tol: float = 1e-12, residual_tol: float = 1e-8, max_sweeps: int = 60
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic-sweep Jacobi diagonalization of a real symmetric matrix.

    Sweeps rotate every (p, q) pair in a fixed order until the off-diagonal
    Frobenius mass drops below off_tol * ||M||_F.  Returns eigenvalues in
    descending order and the matching orthonormal eigenvector columns;
    every pair is verified to satisfy ||M v - lambda v||_2 <= residual_tol * ||M||_F.
    """
    A = np.array(M, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got {A.shape}")
    n = A.shape[0]
    if np.abs(A - A.T).max(initial=0.0) > walk_mod.SYMMETRY_TOL:
        raise ValueError("matrix is not symmetric within tolerance")
    A = (A + A.T) / 2.0
    fro = float(np.linalg.norm(A))
    V = np.eye(n)
    if n > 1 and fro > 0.0:
        target = off_tol * fro
        # Rotating entries below this cannot lift the off-diagonal mass
        # above the target, and skipping them avoids overflow in tau.
        skip = target / (2.0 * n)
        for _ in range(max_sweeps):
            # Sum off-diagonal squares directly: the fro^2 - diag^2 form
            # cancels catastrophically once the iteration has converged.
            offmat = A - np.diag(np.diag(A))
            off = float(np.sqrt((offmat**2).sum()))
            if off <= target:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = A[p, q]
                    if abs(apq) <= skip:
                        continue
                    tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                    if tau >= 0.0:
                        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                    else:
                        t = 1.0 / (tau - np.sqrt(1.0 + tau * tau))
                    c = 1.0 / np.sqrt(1.0 + t * t)
                    s = t * c
                    col_p, col_q = A[:, p].copy(), A[:, q].copy()
                    A[:, p] = c * col_p - s * col_q
                    A[:, q] = s * col_p + c * col_q
                    row_p, row_q = A[p, :].copy(), A[q, :].copy()
                    A[p, :] = c * row_p - s * row_q
                    A[q, :] = s * row_p + c * row_q
                    A[p, q] = A[q, p] = 0.0
                    vec_p, vec_q = V[:, p].copy(), V[:, q].copy()
                    V[:, p] = c * vec_p - s * vec_q
                    V[:, q] = s * vec_p + c * vec_q
        else:
            raise RuntimeError(f"Jacobi did not converge within {max_sweeps} sweeps")
    eigenvalues = np.diag(A).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    V = V[:, order]
    Msym = (np.array(M, dtype=np.float64) + np.array(M, dtype=np.float64).T) / 2.0
    residuals = np.linalg.norm(Msym @ V - V * eigenvalues, axis=0)
    if fro > 0.0 and residuals.max(initial=0.0) > residual_tol * fro:
        raise RuntimeError(f"eigenpair residual {residuals.max()} exceeds tolerance")
    return eigenvalues, V


def symmetric_quotient_eigensystem(
    A: TransitionMatrix, partition: Partition, tol: float = walk_mod.EQUITABLE_TOL
) -> tuple[np.ndarray, np.ndarray, QuotientMatrix]:
    """Eigenvalues and lift-normalized eigenbasis of a symmetric walk quotient.

    For symmetric A the quotient satisfies q_ij |V_i| = q_ji |V_j|, so
    D^{1/2} Q D^{-1/2} with D = diag(|V_i|) is symmetric.  The returned
    basis columns phi_j = D^{-1/2} w_j satisfy ||M_P phi_j||_2 = 1.
    """
    if not A.symmetric:
        raise ValueError("quotient eigensystem needs a symmetric walk matrix")
    Q = quotient(A, partition, tol=tol)
    sizes = partition.block_sizes.astype(np.float64)
    balance = np.abs(Q.entries * sizes[:, None] - Q.entries.T * sizes[None, :]).max()
    if balance > 1e-9:
        raise ValueError(
            f"quotient balance residual {balance} signals a non-symmetric source"
        )
    d = np.sqrt(sizes)
    B = d[:, None] * Q.entries / d[None, :]
    B = (B + B.T) / 2.0
    eigenvalues, W = symmetric_eigen(B)
    basis = W / d[:, None]
    return eigenvalues, basis, Q


def quotient_spectrum_symmetric(A: TransitionMatrix, partition: Partition) -> SpectrumReport:
    """Numeric spectrum of the quotient of a symmetric walk matrix."""
    eigenvalues, _, _ = symmetric_quotient_eigensystem(A, partition)
    report = SpectrumReport(eigenvalues.astype(np.complex128), None, "numeric")
    return report.require_stochastic()


def coset_character_basis(
    group: GroupSpec, cosets: CosetPartition
) -> tuple[np.ndarray, np.ndarray]:
    """Quotient eigenbasis from characters, in annihilator order.

    Column for chi holds chi(rep_j) / sqrt(|G|); the lift of each column to
    the full group has unit 2-norm, the normalization the flatness check
    expects.
    """
    ann = annihilator_indices(cosets.subgroup)
    reps = np.array(cosets.representatives, dtype=np.int64)
    chars = _char_block(group, group.coords_table[ann], reps)
    basis = chars.T / np.sqrt(group.order)
    return ann, basis


def verify_spectrum_subset(sub: SpectrumReport, full: SpectrumReport) -> bool:
    """True iff every eigenvalue of sub is within 1e-7 of one of full."""
    if sub.eigenvalues.size == 0:
        return True
    if full.eigenvalues.size == 0:
        return False
    dist = np.abs(sub.eigenvalues[:, None] - full.eigenvalues[None, :])
    return bool((dist.min(axis=1) <= SPECTRUM_SUBSET_TOL).all())


def sorted_eigenvalues(values) -> np.ndarray:
    """Sort complex values by (real, imag) on a 1e-8 bucket grid."""
    arr = np.asarray(values, dtype=np.complex128)
    re = np.rint(arr.real / MULTISET_TOL).astype(np.int64)
    im = np.rint(arr.imag / MULTISET_TOL).astype(np.int64)
    return arr[np.lexsort((im, re))]


def multisets_close(a, b, tol: float = MULTISET_TOL) -> bool:
    """Compare two eigenvalue multisets after (real, imag) sorting."""
    ea, eb = sorted_eigenvalues(a), sorted_eigenvalues(b)
    if ea.shape != eb.shape:
        return False
    if ea.size == 0:
        return True
    return bool(np.abs(ea - eb).max() <= tol)
