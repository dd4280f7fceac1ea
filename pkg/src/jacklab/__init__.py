"""jacklab: exact Jack characters, Jack-deformed Plancherel measures, and
Monte Carlo limit-shape experiments on random Young diagrams."""

from .partitions import (
    AnisotropicDiagram,
    Partition,
    Profile,
    concat,
    density,
    enumerate_partitions,
    length_stat,
    profile,
    z_factor,
)
from .algebra import GAMMA, LaurentA, Rational, SymFun, inner_product, m_to_p, p_to_m, substitute
from .jack import (
    CapExceededError,
    ThetaTable,
    irr_character,
    jack_in_p,
    normalized_character,
    pieri_p1,
    theta,
    theta_table,
)
from .measures import (
    GrowthKernel,
    MeasureOnYn,
    NonReducibleError,
    down_kernel,
    jack_plancherel,
    measure_from_character,
    regular_character,
    sample_exact,
    sample_growth,
    sample_rectangle_removal,
    table_character,
    up_kernel,
)
from .shape import fluctuation_Y, free_cumulants, plambda_moments, r_to_s, s_functional, s_to_r
from .cumulants import (
    CharacterFamily,
    classical_cumulant,
    cond_A_sequence,
    cond_B_sequence,
    cond_C_sequence,
    cond_D_sequence,
    constant_transforms,
    disjoint_cumulant,
    enhanced_afp_fit,
    partition_cumulant,
    regular_family,
)
from .kerov import (
    GradedPolynomial,
    carleman_check,
    is_expander,
    kerov_expansion_oracle,
    permutation_length_census,
    top_degree_formula,
    transitive_pair_classes,
)

__version__ = "0.1.0"
