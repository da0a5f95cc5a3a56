"""Prefractal gasket geometry, geodesics, harmonic embeddings, Dirac spectra,
and transport-based approximation certificates."""

__version__ = "0.1.0"

from .dyadic import LEVEL_CAP, DyadicRational
from .gasket import (
    CORNERS,
    CURVE_KINDS,
    Curve,
    LatticePoint,
    PrefractalComplex,
    Triangle,
    build_gasket,
    complex_from_dict,
    complex_to_dict,
    curve_count,
    kappa,
    kappa_inverse,
    similitude_apply,
    vertex_count,
)
from .metric import (
    AgreementReport,
    EdgePoint,
    FiniteMetricSpace,
    GHBoundReport,
    MetricGraph,
    certify_vertex_agreement,
    gasket_metric_graph,
    geodesic_point_distance,
    geodesic_vertex_distances,
    gh_upper_bound,
    hausdorff,
    hausdorff_vertex_sets,
    sample_parameters,
)
from .harmonic import (
    HarmonicGasket,
    HarmonicTable,
    LengthEstimate,
    SubdivisionRule,
    build_harmonic_gasket,
    derive_subdivision_rule,
    embedding_point,
    harmonic_curve_length,
    harmonic_extend,
)
from .spectrum import (
    DimensionFit,
    EigenvalueEnumeration,
    SpectrumSpec,
    ZetaPartial,
    counting_function,
    dimension_fit,
    enumerate_eigenvalues,
    interval_spectrum,
    mode_count,
    zeta_partial,
)
from .modes import (
    ModeVector,
    ReachReport,
    coupled_dnorm,
    covariant_reach_witness,
    dn_norm,
    evolve,
    inner,
    mode_frequency,
    project,
    random_mode_vector,
    tail_level_for,
)
from .transport import (
    CoupledGraph,
    DiscreteMeasure,
    ExtentReport,
    IdentityRow,
    TransportResult,
    certify_extent,
    kantorovich,
    lipschitz_seminorm,
    mcshane_extend,
    sampled_metric_space,
    tunnel_dirac_distance,
    verify_lipschitz_dirac_identity,
)
