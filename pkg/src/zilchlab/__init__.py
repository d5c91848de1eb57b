"""zilchlab: an exact + numeric verification laboratory for the zilch
conservation laws of duality-symmetric electrodynamics.

The symbolic layer (``rings``, ``minkowski``, ``jets``, ``noether``)
proves the variational-symmetry origin of the zilch tensor off shell,
over exact coefficient rings.  The numeric layer (``solutions``,
``numeric``) checks the same statements on closed-form wave solutions
and finite-difference grids.  ``report`` and ``cli`` wrap both in a
deterministic command-line harness.
"""

__version__ = "0.1.0"

from .rings import GaussianRational  # noqa: F401
from .minkowski import (  # noqa: F401
    BOTH_SIGNATURES,
    DEFAULT_CONVENTION,
    MetricConvention,
)
from .noether import (  # noqa: F401
    IdentityReport,
    LagrangianKind,
    ZilchForm,
    build_lagrangian,
    build_zilch,
    run_identity_suite,
    run_mutation,
)
from .solutions import (  # noqa: F401
    AnalyticSolution,
    DualityRotation,
    FieldSample,
    ZilchSymmetryStep,
    apply_duality_rotation,
    apply_zilch_symmetry_step,
    circular_plane_wave,
    linear_plane_wave,
    on_shell_residual,
    random_field_sample,
    sample,
    solution_from_config,
    standing_wave,
    superposition,
)
from .numeric import (  # noqa: F401
    ConvergenceTable,
    DecompositionReport,
    GridSpec,
    NUMERIC_FORMS,
    UnresolvedWaveError,
    divergence,
    divergence_residual_analytic,
    divergence_residual_grid,
    duality_invariance_residual,
    electric_field,
    energy_density,
    eval_decomposition,
    eval_stress_energy,
    eval_zilch,
    magnetic_field,
    optical_chirality,
    symmetry_variation_residual,
)
