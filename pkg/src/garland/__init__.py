"""Cohomology vanishing certificates for group actions on weighted simplicial complexes."""

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    BanachClassSpec,
    CurveModulus,
    l_contractive_bound,
    local_threshold,
    p_max_for_lambda,
    parse_class,
    stability_p_range,
    tensor_norm_bound,
    theta_of_p,
)
from .certify import Certificate, Conclusions, certify_descent, certify_local, conclude  # noqa: E402
from .cochains import (  # noqa: E402
    Cochain,
    CochainComplex,
    CoefficientSpace,
    VerificationReport,
    codifferential,
    couple,
    differential,
    duality_partner,
    localize,
    norm,
    random_cochain,
    verify_identity,
)
from .complex import (  # noqa: E402
    GroupAction,
    SimplicialComplex,
    WeightedGraph,
    build_complex,
    link,
    link_graph,
    orbit_data,
    skeleton_graph,
)
from .spectral import (  # noqa: E402
    DescentInterval,
    descent_map,
    expander_profile,
    min_link_profiles,
    spectrum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
