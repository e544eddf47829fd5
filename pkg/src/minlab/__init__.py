"""minlab: harmonic functions on triangulated minimal-surface patches.

Builds explicitly parametrized minimal-surface patches (plane, Enneper
family, helicoid, catenoid), solves discrete Dirichlet problems on
extrinsic-ball components, and measures oscillation decay, area growth,
level-set lengths, coarea balances, growth/Hoelder exponents and nodal
lengths against their closed-form expectations.
"""

from ._kernels import BACKEND_NAME, available_backends
from .errors import (
    ArgumentError,
    DegenerateError,
    MinlabError,
    MissingInputError,
    NumericalError,
    RangeError,
    ResourceError,
)
from .surfaces import (
    ImmersionSpec,
    JetSample,
    conformal_defect,
    evaluate,
    minimality_defect,
    param_radius_for_ball,
)
from .mesh import (
    BallComponent,
    Subcomplex,
    SurfaceMesh,
    area_growth_fit,
    ball_component,
    build_patch,
    convex_hull_check,
    load_mesh,
    save_mesh,
    surface_area,
    triangulate,
)
from .harmonic import (
    DirichletForm,
    LevelSet,
    ScalarField,
    assemble_energy,
    coarea_check,
    dirichlet_energy,
    gradient_l1,
    level_set,
    nodal_length,
    solve_dirichlet,
)
from .analysis import (
    DecayBound,
    DecayCertificate,
    GrowthFit,
    HolderFit,
    OscillationCurve,
    cone_containment_profile,
    decay_certificate,
    decay_curve,
    growth_exponent,
    holder_estimate,
    liouville_threshold,
    mean_value_ratio,
    oscillation,
)

__version__ = "0.1.0"
