"""Equitable partitions and quotient matrices on the Petersen graph.

Starts from the partition {{0}, everything else}, refines it to the coarsest
equitable partition (the distance partition), forms the quotient, and checks
the intertwining identity and the spectrum-subset property.
"""

from pathlib import Path

import numpy as np

from eqwalk import (
    Partition,
    coarsest_equitable_refinement,
    incidence_matrix,
    is_equitable,
    lift,
    load_edge_list,
    quotient,
    quotient_spectrum_symmetric,
    symmetric_eigen,
    transition_from_graph,
    verify_spectrum_subset,
)
from eqwalk.spectra import SpectrumReport

edges, n = load_edge_list((Path(__file__).parent / "data" / "petersen.txt").read_text())
T = transition_from_graph(edges, n)
print(f"Petersen walk: {n} vertices, symmetric={T.symmetric}, doubly "
      f"stochastic={T.doubly_stochastic}")

# The trivial partition of a regular graph is equitable but coarse; seeding
# with a distinguished vertex refines to the distance partition.
ok, Q0 = is_equitable(T, Partition.trivial(n))
print(f"trivial partition equitable: {ok}, quotient {Q0.entries.tolist()}")

seed = Partition.from_blocks([[0], list(range(1, n))], n)
P = coarsest_equitable_refinement(T, seed)
print(f"coarsest refinement of {{{{0}}, rest}}: blocks {[b.tolist() for b in P.blocks]}")

Q = quotient(T, P)
print("quotient matrix:")
print(np.round(Q.entries, 4))

# A M_P = M_P A^{|P}: lifted block vectors evolve by the quotient.
M = incidence_matrix(P)
print(f"intertwining residual: {np.abs(T.matrix @ M - M @ Q.entries).max():.2e}")

# The quotient spectrum {1, 1/3, -2/3} sits inside the full spectrum
# {1, (1/3)^5, (-2/3)^4}.
sub = quotient_spectrum_symmetric(T, P)
full_vals, _ = symmetric_eigen(T.matrix)
full = SpectrumReport(full_vals.astype(complex), None, "numeric")
print(f"quotient spectrum: {np.round(sub.eigenvalues.real, 6)}")
print(f"full spectrum:     {np.round(full_vals, 6)}")
print(f"subset property: {verify_spectrum_subset(sub, full)}")

# Lifting an eigenvector of the quotient gives an eigenvector of the walk.
from eqwalk import symmetric_quotient_eigensystem

evals, basis, _ = symmetric_quotient_eigensystem(T, P)
phi = lift(P, basis[:, 1])
residual = np.abs(T.matrix @ phi - evals[1] * phi).max()
print(f"lifted quotient eigenvector residual at eigenvalue {evals[1]:.4f}: {residual:.2e}")
