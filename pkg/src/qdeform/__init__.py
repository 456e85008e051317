"""qdeform: a numerical laboratory for deforming maps between classical
and q-deformed Weyl/Clifford mode algebras on truncated Fock spaces.

The package constructs the maps as concrete matrices and machine-checks
the algebraic identities they are supposed to satisfy: quantum
commutation relations, covariance under the deformed Hopf action, twist
and R-matrix identities, invariant preservation, and the representation
theory of the deformed algebra (Pusz-Woronowicz family, root-of-unity
blocks).
"""

__version__ = "0.1.0"

from .fock import (
    FockSpace,
    InteriorProjector,
    Op,
    Statistics,
    annihilator,
    anticommutator,
    bracket,
    commutator,
    creator,
    diagonal_op,
    identity,
    interior,
    make_space,
    number_ops,
    zero,
)
from .qfunc import (
    ConstructionError,
    DeformationParam,
    Regime,
    as_param,
    classify,
    q_gamma,
    qnum_std,
    qnum_sym,
    qpow,
    qratio_safe,
    root_of_unity,
    spectral_apply,
)
from .jschwinger import (
    HopfData,
    QuantumSl2Triple,
    Sl2Triple,
    Word,
    antipode_data,
    classical_action,
    fundamental,
    phi_h_generators,
    quantum_action,
    realize,
    sigma_sl2,
)
from .twist import (
    AbelianTwist,
    MatrixTwist,
    f_matrix_sl2,
    flip_matrix,
    hecke_residual,
    r_matrix_sl2,
    reshetikhin_twist,
    standard_abelian_twist,
    yang_baxter_residual,
)
from .deform import (
    AlphaElement,
    DeformedQuartet,
    InverseMapResult,
    Provenance,
    Sign,
    SingularLogArgument,
    abelian_forms,
    alpha_element,
    conjugate_quartet,
    inverse_map_sl2,
    map_1d,
    map_abelian,
    map_chaichian,
    map_sl2_clifford,
    map_sl2_weyl,
    map_universal_sl2,
    root_unity_quartet,
    weyl_qcr_residual,
)
from .verify import (
    RelationReport,
    SuiteReport,
    check_covariance,
    check_invariants,
    check_number_ladder,
    check_qcr_rmatrix,
    check_star,
    check_vacuum_sector,
)
from .reps import (
    Block,
    BlockDecomposition,
    LabelSpace,
    PWClass,
    PWRepresentation,
    SingularityScan,
    intertwine_class1,
    pw_build,
    pw_quartet,
    root_unity_blocks,
    singularity_scan,
)
