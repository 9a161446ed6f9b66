"""Tour of the finite-abelian-group toolbox.

Builds Z_6 x Z_4, evaluates characters, takes Fourier transforms two ways,
convolves distributions, and checks Poisson summation numerically.
"""

import numpy as np

from eqwalk import (
    GroupSpec,
    bernoulli_distribution,
    character_values,
    convolve,
    coset_partition,
    delta_distribution,
    fourier,
    parse_group_spec,
    periodize,
    poisson_check,
    subgroup_generate,
    uniform_distribution,
)

G = parse_group_spec("Z6xZ4")
print(f"group {G} of order {G.order}")
print(f"element (5, 3) has flat index {G.flat_index((5, 3))}")

# Characters are orthogonal: the Gram matrix of the character table is |G| I.
chars = np.stack([character_values(G, G.coords_of(a)) for a in range(G.order)])
gram = chars @ np.conj(chars.T)
print(f"max off-diagonal character inner product: {np.abs(gram - np.diag(np.diag(gram))).max():.2e}")

# The naive double sum and the factorwise FFT agree.
f = bernoulli_distribution(parse_group_spec("Z2^4"), 0.1)
naive = fourier(f, method="naive").values
fast = fourier(f, method="fft").values
print(f"naive vs fft transform deviation: {np.abs(naive - fast).max():.2e}")

# Convolving Bernoulli(p) noise with itself gives Bernoulli(2p(1-p)).
twice = convolve(f, f)
again = bernoulli_distribution(f.group, 2 * 0.1 * 0.9)
print(f"bernoulli(0.1) * bernoulli(0.1) = bernoulli(0.18): "
      f"deviation {np.abs(twice.values - again.values).max():.2e}")

# Periodization averages f over cosets; its transform on the coset space is
# the restriction of fhat to the annihilator (Poisson summation).
H = subgroup_generate(G, [(2, 0), (0, 2)])
print(f"subgroup generated by (2,0),(0,2) has order {len(H)}, "
      f"{coset_partition(H).n_blocks} cosets")
g = delta_distribution(G, (1, 1))
per = periodize(g, H)
print(f"periodized delta values per coset: {np.round(per.values, 4)}")
print(f"poisson summation deviation: {poisson_check(g, H):.2e}")

# The trivial character always carries mass 1/|G| for a distribution.
u = uniform_distribution(G)
print(f"uniform transform at the trivial character: {fourier(u).values[0].real:.6f} "
      f"(= 1/{G.order})")
