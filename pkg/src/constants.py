"""
Numerical constants and configuration
"""

from typing import Dict

# Differentiation settings
FIRST_DERIVATIVE_STEP = 1e-5  # chart units
FIRST_DERIVATIVE_ORDER = 2
CURVATURE_STEP = 1e-4  # outer step for derivatives of Christoffels and tensors
CURVATURE_ORDER = 2

# Linear algebra
RANK_RTOL = 1e-8  # singular values below RANK_RTOL * largest count as zero
RANK_ATOL = 1e-12  # singular values at or below this count as zero whatever the largest is
GRAM_SCHMIDT_TOL = 1e-10  # relative residual norm below which vectors are dependent
METRIC_EIGEN_TOL = 1e-12  # smallest admissible metric eigenvalue
PLANE_TOL = 1e-12  # smallest admissible Gram determinant of a 2-plane
DIVISION_GUARD = 1e-12  # |denominator| at or below this is an evaluation error

# Chart domain
DEFAULT_DOMAIN_HALF_WIDTH = 0.9
SAMPLE_MARGIN_FRACTION = 0.01  # sampled points stay this fraction of each side away from the box edge

# Fibre charts
FIBRE_CHART_RADIUS = 0.05  # half width of the fibre parameter box
NEWTON_MAX_ITERATIONS = 30
NEWTON_STEP_TOL = 1e-15
NEWTON_RESIDUAL_TOL = 1e-10

# Slant analysis
ANGLE_TOL = 1e-6  # radians
XI_EXCLUSION_TOL = 1e-10  # reject U with |U - eta(U) xi| below this times |U|
SUBSPACE_TOL = 1e-8  # relative projection defect that still counts as inside a subspace
FLAG_TOL = 1e-6  # equality flags on T-components
SLANT_PROBE_SAMPLES = 5  # points used when an operation needs its own slant verdict
SLANT_PROBE_SEED = 0

# Sampling defaults
DEFAULT_SAMPLES = 100
DEFAULT_SEED = 42
DEFAULT_DIRECTIONS = 20

# Scenarios
DEFAULT_TARGET_HALF_WIDTH = 1.0e3  # default half width of target chart boxes
SCENARIO_KEYS = ("name", "dimension", "domain", "metric", "phi", "xi", "eta", "map", "target", "constants", "expected")
TARGET_KEYS = ("dimension", "domain", "metric")
MAP_KEYS = ("components", "jacobian")
EXPECTED_KEYS = ("theta", "verdict", "xi_position", "mu_dimension", "kernel_dimension")
BUILTIN_METRIC = "euclidean"
BUILTIN_STRUCTURE = "standard"
SCENARIO_SUFFIX = ".json"

# Check tolerances keyed by check name
TOLERANCES: Dict[str, float] = {
    # almost contact structure
    "phi-square": 1e-10,
    "phi-xi": 1e-10,
    "eta-phi": 1e-10,
    "eta-xi": 1e-10,
    "metric-compatibility": 1e-10,
    "eta-metric": 1e-10,
    "d-Phi": 1e-8,
    "d-eta": 1e-8,
    "nijenhuis": 1e-7,
    "nabla-phi": 1e-6,
    "nabla-xi": 1e-6,
    "space-form": 1e-4,
    "phi-sectional": 1e-4,
    # submersion axioms
    "rank": 0.0,
    "isometry": 1e-8,
    "projectors": 1e-9,
    # O'Neill identities
    "T-vertical-restriction": 1e-6,
    "A-horizontal-restriction": 1e-6,
    "T-symmetry": 1e-6,
    "A-alternation": 1e-6,
    "A-bracket": 1e-6,
    "skew-adjoint-T": 1e-6,
    "skew-adjoint-A": 1e-6,
    "vertical-gauss": 1e-4,
    "fibre-sectional": 1e-4,
    "mixed-curvature": 1e-3,
    "vertical-pair-form": 1e-5,
    "mixed-pair-form": 1e-5,
    "horizontal-pair-form": 1e-6,
    "fibre-metric": 1e-10,
    "tension-frame-independence": 1e-6,
    "harmonic": 1e-6,
    # slant
    "slant-constancy": ANGLE_TOL,
    "reassembly": 1e-9,
    "antisymmetry": 1e-8,
    "phi-square-split": 1e-8,
    "psi-square": 1e-6,
    "norm-relations": 1e-6,
    "omega-identity": 1e-5,
    "psi-identity": 1e-5,
    "nabla-Q": 1e-5,
    "adapted-frame": 1e-8,
    "mu-invariance": 1e-8,
    "mu-dimension": 0.0,
    "mu-constant-dimension": 0.0,
    "connection-xi": 1e-6,
    "criterion-identity": 1e-5,
    # inequalities
    "inequality-slack": 1e-6,
    "relation": 1e-5,
    "xi-row": 1e-7,
    "cross-curvature": 1e-4,
    "equality-consistency": 0.0,
    # anti-invariant
    "phi-commutation": 1e-7,
    "A-phi-symmetry": 1e-7,
    "A-norm": 1e-7,
    "anti-mixed-curvature": 1e-3,
    "vertical-phi-sectional": 1e-6,
    "horizontal-phi-sectional": 1e-6,
    # expected values from fixtures
    "expected": 1e-6,
}

# Exit codes
EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2

# Commands
COMMAND_CHECK_STRUCTURE = "check-structure"
COMMAND_CHECK_SUBMERSION = "check-submersion"
COMMAND_SLANT_ANGLE = "slant-angle"
COMMAND_VERIFY_IDENTITIES = "verify-identities"
COMMAND_VERIFY_INEQUALITY = "verify-inequality"
COMMAND_TENSION = "tension"
COMMAND_ANTI_INVARIANT = "anti-invariant"

# Report formats
FORMAT_TEXT = "text"
FORMAT_JSON = "json"

# Slant verdicts
VERDICT_INVARIANT = "invariant"
VERDICT_ANTI_INVARIANT = "anti-invariant"
VERDICT_PROPER = "proper-slant"
VERDICT_NOT_SLANT = "not-slant"

# Position of the structure vector field relative to the fibres
XI_VERTICAL = "vertical"
XI_HORIZONTAL = "horizontal"
XI_OBLIQUE = "oblique"
