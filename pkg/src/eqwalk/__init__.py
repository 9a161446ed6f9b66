"""Total-variation mixing bounds for random walks via equitable partitions.

The library covers three layers:

* ``abelian`` -- finite abelian groups, characters, Fourier transforms,
  convolution, subgroups/cosets, annihilators, periodization.
* ``codes`` -- linear codes over small prime fields, duals, weight
  enumerators, and the embedding of a code as a subgroup of Z_q^n.
* ``walk`` / ``spectra`` / ``bounds`` -- dense walk operators, exact TV
  evolution, equitable partitions and quotient matrices, analytic and
  numeric quotient spectra, and the spectral upper bounds on the TV
  distance to uniform, audited against brute force.
"""

from .abelian import (
    CharacterIndex,
    CosetPartition,
    Distribution,
    Element,
    FourierTable,
    GroupFunction,
    GroupSpec,
    PeriodizedFunction,
    Subgroup,
    annihilator,
    annihilator_indices,
    bernoulli_distribution,
    char_eval,
    character_values,
    convolve,
    convolve_power,
    coset_partition,
    delta_distribution,
    distribution_from_json,
    elem_add,
    elem_neg,
    elem_sub,
    fixed_weight_distribution,
    fourier,
    inverse_fourier,
    parse_group_spec,
    periodize,
    poisson_check,
    subgroup_generate,
    trivial_subgroup,
    uniform_distribution,
    uniform_on_set,
)
from .bounds import (
    BoundReport,
    BoundRow,
    GraphInstance,
    GroupInstance,
    SoundnessError,
    analyze_code,
    analyze_graph_walk,
    analyze_group_walk,
    bound_code,
    bound_flat,
    bound_general,
    bound_group,
    check_flatness,
    instance_report,
    random_graph_instance,
    random_group_instance,
    smoothing_ell,
    soundness_audit,
    strip_unit_eigenvalue,
)
from .codes import (
    LinearCode,
    WeightEnumerator,
    code_from_generator,
    code_to_subgroup,
    dual,
    enumerate_codewords,
    load_generator_file,
    weight_enumerator,
)
from .spectra import (
    SpectrumReport,
    coset_character_basis,
    group_walk_spectrum,
    multisets_close,
    quotient_spectrum_group,
    quotient_spectrum_symmetric,
    symmetric_eigen,
    symmetric_quotient_eigensystem,
    verify_spectrum_subset,
)
from .walk import (
    Partition,
    QuotientMatrix,
    TransitionMatrix,
    coarsest_equitable_refinement,
    exact_tv_curve,
    incidence_matrix,
    is_equitable,
    lift,
    load_edge_list,
    partition_from_cosets,
    power_step,
    quotient,
    random_regular_edges,
    step,
    transition_cayley,
    transition_from_distribution,
    transition_from_graph,
    transition_from_periodized,
    tv_distance,
)

__version__ = "0.1.0"
