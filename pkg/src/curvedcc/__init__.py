"""Central configurations of the N-body problem on the unit sphere and hyperboloid.

The spaces are carried as a sign: sigma = +1 selects the unit sphere in
R4, sigma = -1 the upper unit hyperboloid in Minkowski R^(3,1).  The
package provides the signed geometry, the cotangent-potential dynamics,
central-configuration tests and classification, a damped least-squares
solver, and a small catalog of closed-form reference configurations,
plus a command-line interface (``python -m curvedcc`` or the
``curvedcc`` script).
"""

from .errors import (
    ConfigFileError,
    CurvedNBodyError,
    DegenerateConfig,
    GaugeDegenerate,
    InfeasibleSpin,
    NoMassSolution,
    NotCoplanar,
    ProjectionPole,
    RegionInvalid,
    SingularPair,
)
from .manifold import (
    GroupElement,
    PolarZW,
    apply_group,
    geodesic_distance,
    on_manifold,
    poincare_ball,
    polar_zw,
    project_to_manifold,
    sdot,
    stereographic,
    tangent_project,
)
from .dynamics import (
    Configuration,
    PhaseState,
    Trajectory,
    energy,
    eom_rhs,
    force_pair,
    grad_moment,
    grad_potential,
    integrate,
    moment,
    momentum_xy,
    momentum_zw,
    potential,
    relative_equilibrium_velocities,
    unified_trig,
)
from .ccstat import (
    CCReport,
    DimClass,
    NecessarySums,
    cc_residual,
    classify_dimension,
    common_phi,
    fit_lambda,
    necessary_sums,
    normalize_to_h2xyw,
)
from .catalog import (
    FamilyParams,
    LambdaSplit,
    family_mass,
    family_q,
    lambda_closed_form,
    ngon_family,
    pentatope,
)
from .solver import (
    SolveOptions,
    SolveOutcome,
    SpecialCurvePoint,
    canonical_gauge,
    config_fingerprint,
    find_cc,
    random_configuration,
    special_curve,
)

__version__ = "0.1.0"

__all__ = [
    "CCReport",
    "ConfigFileError",
    "Configuration",
    "CurvedNBodyError",
    "DegenerateConfig",
    "DimClass",
    "FamilyParams",
    "GaugeDegenerate",
    "GroupElement",
    "InfeasibleSpin",
    "LambdaSplit",
    "NecessarySums",
    "NoMassSolution",
    "NotCoplanar",
    "PhaseState",
    "PolarZW",
    "ProjectionPole",
    "RegionInvalid",
    "SingularPair",
    "SolveOptions",
    "SolveOutcome",
    "SpecialCurvePoint",
    "Trajectory",
    "apply_group",
    "canonical_gauge",
    "cc_residual",
    "classify_dimension",
    "common_phi",
    "config_fingerprint",
    "energy",
    "eom_rhs",
    "family_mass",
    "family_q",
    "find_cc",
    "fit_lambda",
    "force_pair",
    "geodesic_distance",
    "grad_moment",
    "grad_potential",
    "integrate",
    "lambda_closed_form",
    "moment",
    "momentum_xy",
    "momentum_zw",
    "necessary_sums",
    "ngon_family",
    "normalize_to_h2xyw",
    "on_manifold",
    "pentatope",
    "poincare_ball",
    "polar_zw",
    "potential",
    "project_to_manifold",
    "random_configuration",
    "relative_equilibrium_velocities",
    "sdot",
    "special_curve",
    "stereographic",
    "tangent_project",
    "unified_trig",
]
